use std::fmt;

use crate::scalar::Rational;

/// Which xi generator an atom refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum XiVar {
    /// The single variable of a one-dimensional context.
    Xi,
    Xi1,
    Xi2,
}

impl XiVar {
    pub fn name(self) -> &'static str {
        match self {
            XiVar::Xi => "xi",
            XiVar::Xi1 => "xi1",
            XiVar::Xi2 => "xi2",
        }
    }
}

/// A symbol expression. Precedence and shapes follow the fixed grammar:
///
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := factor ('*' factor)*
/// factor := '-' factor | atom ('^' int)?
/// atom   := scalar | ident | basis | 'xi' | 'xi1' | 'xi2'
///         | '[' expr ',' expr ']' | '(' expr ')'
/// basis  := 'e[' int (',' int)? ']' ('@(' int ',' int ')')?
/// int    := ('-')? digits
/// ```
#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    /// A nonnegative rational literal (signs parse as negation nodes).
    Number(Rational),
    /// The imaginary unit `i` of the Gaussian coefficient field.
    ImagUnit,
    /// The root-of-unity generator `q` of a cyclotomic coefficient field.
    RootOfUnity,
    /// The quantum-torus generator `U`.
    GenU,
    /// The quantum-torus generator `V`.
    GenV,
    /// A xi generator.
    Xi(XiVar),
    /// A named element bound in the context file (or the built-in `unit`).
    Ident(String),
    /// A basis mode `e[k]` / `e[k1,k2]`, optionally pinned to one component
    /// with `@(s,t)`; without a component the mode sits in every component.
    Basis {
        freq: Vec<i64>,
        component: Option<(i64, i64)>,
    },
    Pow(Box<Expr>, i64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn is_atom(&self) -> bool {
        matches!(
            self,
            Expr::Number(_)
                | Expr::ImagUnit
                | Expr::RootOfUnity
                | Expr::GenU
                | Expr::GenV
                | Expr::Xi(_)
                | Expr::Ident(_)
                | Expr::Basis { .. }
                | Expr::Commutator(..)
        )
    }

    fn is_factor(&self) -> bool {
        match self {
            Expr::Pow(..) | Expr::Neg(..) => true,
            other => other.is_atom(),
        }
    }

    fn is_term(&self) -> bool {
        match self {
            Expr::Mul(..) => true,
            other => other.is_factor(),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atom() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_factor() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    fn fmt_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_term() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for Expr {
    /// Emits text that reparses to the identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(r) => {
                debug_assert!(!r.is_negative(), "negative literals print via Neg");
                write!(f, "{r}")
            }
            Expr::ImagUnit => write!(f, "i"),
            Expr::RootOfUnity => write!(f, "q"),
            Expr::GenU => write!(f, "U"),
            Expr::GenV => write!(f, "V"),
            Expr::Xi(v) => write!(f, "{}", v.name()),
            Expr::Ident(name) => write!(f, "{name}"),
            Expr::Basis { freq, component } => {
                write!(f, "e[")?;
                for (i, k) in freq.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, "]")?;
                if let Some((s, t)) = component {
                    write!(f, "@({s},{t})")?;
                }
                Ok(())
            }
            Expr::Pow(base, exp) => {
                base.fmt_atom(f)?;
                write!(f, "^{exp}")
            }
            Expr::Neg(inner) => {
                write!(f, "-")?;
                inner.fmt_factor(f)
            }
            Expr::Mul(a, b) => {
                a.fmt_term(f)?;
                write!(f, "*")?;
                b.fmt_factor(f)
            }
            Expr::Add(a, b) => {
                write!(f, "{a}+")?;
                b.fmt_term(f)
            }
            Expr::Sub(a, b) => {
                write!(f, "{a}-")?;
                b.fmt_term(f)
            }
            Expr::Commutator(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}
