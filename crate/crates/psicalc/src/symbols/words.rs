use std::fmt;

use crate::algebra::Context;
use crate::Element;

/// One letter of a composition word in the automorphism and a fixed
/// derivation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum OpLetter {
    Sigma,
    Delta,
}

/// A word in `{sigma, delta}`, stored outermost-first: the last letter is
/// applied first. The word length is its total degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct OpWord(pub Vec<OpLetter>);

impl OpWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sigma_degree(&self) -> usize {
        self.0.iter().filter(|l| **l == OpLetter::Sigma).count()
    }

    /// Applies the word to `a`, using `delta_index` of the context for the
    /// delta letter.
    pub fn apply(&self, ctx: &Context, delta_index: usize, a: &Element) -> Element {
        let mut out = a.clone();
        for letter in self.0.iter().rev() {
            out = match letter {
                OpLetter::Sigma => ctx.sigma_apply(&out),
                OpLetter::Delta => ctx.delta(delta_index, &out),
            };
        }
        out
    }
}

impl fmt::Display for OpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        // run-length display, e.g. "delta sigma^3"
        let mut idx = 0;
        let mut first = true;
        while idx < self.0.len() {
            let letter = self.0[idx];
            let mut run = 1;
            while idx + run < self.0.len() && self.0[idx + run] == letter {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = match letter {
                OpLetter::Sigma => "sigma",
                OpLetter::Delta => "delta",
            };
            if run == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{run}")?;
            }
            idx += run;
        }
        Ok(())
    }
}

/// The multiset of words of total degree `n` with exactly `sigma_degree`
/// sigma letters arising when a positive xi power crosses a coefficient.
///
/// Built by the recursion `P_{i, n+1} = sigma . P_{i-1, n} + delta . P_{i, n}`
/// seeded with `P_{0,1} = {delta}`, `P_{1,1} = {sigma}`. The result has
/// `C(n, i)` words. Panics when `sigma_degree > n` or `n == 0`.
pub fn sigma_delta_words(sigma_degree: usize, n: usize) -> Vec<OpWord> {
    assert!(n >= 1, "word degree must be positive");
    assert!(sigma_degree <= n, "sigma degree exceeds total degree");
    if n == 1 {
        let letter = if sigma_degree == 1 {
            OpLetter::Sigma
        } else {
            OpLetter::Delta
        };
        return vec![OpWord(vec![letter])];
    }
    let mut out = Vec::new();
    if sigma_degree > 0 {
        for w in sigma_delta_words(sigma_degree - 1, n - 1) {
            let mut letters = Vec::with_capacity(n);
            letters.push(OpLetter::Sigma);
            letters.extend(w.0);
            out.push(OpWord(letters));
        }
    }
    if sigma_degree < n {
        for w in sigma_delta_words(sigma_degree, n - 1) {
            let mut letters = Vec::with_capacity(n);
            letters.push(OpLetter::Delta);
            letters.extend(w.0);
            out.push(OpWord(letters));
        }
    }
    out
}
