use std::fmt;

use num_bigint::BigInt;

use super::ast::{Expr, XiVar};
use crate::scalar::Rational;

/// A syntax error with its byte offset, line and column (all 0-based
/// offsets, 1-based line/column), the expected token set, and what was
/// found instead.
#[derive(Clone, Debug)]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {} (line {}, column {}): expected {}, found {}",
            self.offset,
            self.line,
            self.column,
            self.expected.join(" | "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    At,
    Digits(String),
    Ident(String),
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Caret => "'^'".into(),
            Token::Slash => "'/'".into(),
            Token::LBracket => "'['".into(),
            Token::RBracket => "']'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Comma => "','".into(),
            Token::At => "'@'".into(),
            Token::Digits(d) => format!("number {d:?}"),
            Token::Ident(s) => format!("identifier {s:?}"),
            Token::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    text: &'a str,
    tokens: Vec<(Token, usize)>,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut idx = 0;
    while idx < bytes.len() {
        let b = bytes[idx];
        let start = idx;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                idx += 1;
                continue;
            }
            b'+' => tokens.push((Token::Plus, start)),
            b'-' => tokens.push((Token::Minus, start)),
            b'*' => tokens.push((Token::Star, start)),
            b'^' => tokens.push((Token::Caret, start)),
            b'/' => tokens.push((Token::Slash, start)),
            b'[' => tokens.push((Token::LBracket, start)),
            b']' => tokens.push((Token::RBracket, start)),
            b'(' => tokens.push((Token::LParen, start)),
            b')' => tokens.push((Token::RParen, start)),
            b',' => tokens.push((Token::Comma, start)),
            b'@' => tokens.push((Token::At, start)),
            b'0'..=b'9' => {
                while idx < bytes.len() && bytes[idx].is_ascii_digit() {
                    idx += 1;
                }
                tokens.push((Token::Digits(text[start..idx].to_string()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while idx < bytes.len()
                    && (bytes[idx].is_ascii_alphanumeric() || bytes[idx] == b'_')
                {
                    idx += 1;
                }
                tokens.push((Token::Ident(text[start..idx].to_string()), start));
                continue;
            }
            other => {
                return Err(error_at(
                    text,
                    start,
                    vec!["token".into()],
                    format!("character {:?}", other as char),
                ));
            }
        }
        idx += 1;
    }
    tokens.push((Token::Eof, text.len()));
    Ok(tokens)
}

fn error_at(text: &str, offset: usize, expected: Vec<String>, found: String) -> ParseError {
    let mut line = 1;
    let mut column = 1;
    for (i, c) in text.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    ParseError {
        offset,
        line,
        column,
        expected,
        found,
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.lexer.tokens[self.pos].0
    }

    fn peek_offset(&self) -> usize {
        self.lexer.tokens[self.pos].1
    }

    fn advance(&mut self) -> Token {
        let t = self.lexer.tokens[self.pos].0.clone();
        if self.pos + 1 < self.lexer.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(error_at(
            self.lexer.text,
            self.peek_offset(),
            expected.iter().map(|s| s.to_string()).collect(),
            self.peek().describe(),
        ))
    }

    fn expect(&mut self, token: Token, name: &str) -> Result<(), ParseError> {
        if *self.peek() == token {
            self.advance();
            Ok(())
        } else {
            self.fail(&[name])
        }
    }

    /// `int := '-'? digits`, bounded to i64.
    fn parse_int(&mut self) -> Result<i64, ParseError> {
        let negative = if *self.peek() == Token::Minus {
            self.advance();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Token::Digits(d) => {
                self.advance();
                let value: i64 = d
                    .parse()
                    .map_err(|_| {
                        error_at(
                            self.lexer.text,
                            self.peek_offset(),
                            vec!["integer within i64 range".into()],
                            format!("{d:?}"),
                        )
                    })?;
                Ok(if negative { -value } else { value })
            }
            _ => self.fail(&["integer"]),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.advance();
                    let rhs = self.parse_term()?;
                    acc = Expr::Add(Box::new(acc), Box::new(rhs));
                }
                Token::Minus => {
                    self.advance();
                    let rhs = self.parse_term()?;
                    acc = Expr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.parse_factor()?;
        while *self.peek() == Token::Star {
            self.advance();
            let rhs = self.parse_factor()?;
            acc = Expr::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Token::Minus {
            self.advance();
            let inner = self.parse_factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let atom = self.parse_atom()?;
        if *self.peek() == Token::Caret {
            self.advance();
            let exp = self.parse_int()?;
            return Ok(Expr::Pow(Box::new(atom), exp));
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Token::Digits(digits) => {
                self.advance();
                let numer: BigInt = digits.parse().expect("digit run");
                if *self.peek() == Token::Slash {
                    self.advance();
                    match self.peek().clone() {
                        Token::Digits(d) => {
                            self.advance();
                            let denom: BigInt = d.parse().expect("digit run");
                            if denom == BigInt::from(0) {
                                return self.fail(&["nonzero denominator"]);
                            }
                            Ok(Expr::Number(Rational::from_big(numer, denom)))
                        }
                        _ => self.fail(&["denominator digits"]),
                    }
                } else {
                    Ok(Expr::Number(Rational::from_big(numer, BigInt::from(1))))
                }
            }
            Token::Ident(name) => {
                self.advance();
                match name.as_str() {
                    "i" => Ok(Expr::ImagUnit),
                    "q" => Ok(Expr::RootOfUnity),
                    "U" => Ok(Expr::GenU),
                    "V" => Ok(Expr::GenV),
                    "xi" => Ok(Expr::Xi(XiVar::Xi)),
                    "xi1" => Ok(Expr::Xi(XiVar::Xi1)),
                    "xi2" => Ok(Expr::Xi(XiVar::Xi2)),
                    "e" if *self.peek() == Token::LBracket => self.parse_basis(),
                    _ => Ok(Expr::Ident(name)),
                }
            }
            Token::LBracket => {
                self.advance();
                let first = self.parse_expr()?;
                self.expect(Token::Comma, "','")?;
                let second = self.parse_expr()?;
                self.expect(Token::RBracket, "']'")?;
                Ok(Expr::Commutator(Box::new(first), Box::new(second)))
            }
            Token::LParen => {
                self.advance();
                let inner = self.parse_expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            _ => self.fail(&["number", "identifier", "'e['", "'['", "'('"]),
        }
    }

    fn parse_basis(&mut self) -> Result<Expr, ParseError> {
        self.expect(Token::LBracket, "'['")?;
        let mut freq = vec![self.parse_int()?];
        if *self.peek() == Token::Comma {
            self.advance();
            freq.push(self.parse_int()?);
        }
        self.expect(Token::RBracket, "']'")?;
        let component = if *self.peek() == Token::At {
            self.advance();
            self.expect(Token::LParen, "'('")?;
            let s = self.parse_int()?;
            self.expect(Token::Comma, "','")?;
            let t = self.parse_int()?;
            self.expect(Token::RParen, "')'")?;
            Some((s, t))
        } else {
            None
        };
        Ok(Expr::Basis { freq, component })
    }
}

/// Parses one expression; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        lexer: Lexer { text, tokens },
        pos: 0,
    };
    let expr = parser.parse_expr()?;
    if *parser.peek() != Token::Eof {
        return parser.fail(&["operator", "end of input"]);
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn boxed(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn mul_of_inverse_xi_and_basis() {
        let e = parse("xi1^-1 * e[1,0]@(1,1)").unwrap();
        assert_eq!(
            e,
            Expr::Mul(
                boxed(Expr::Pow(boxed(Expr::Xi(XiVar::Xi1)), -1)),
                boxed(Expr::Basis {
                    freq: vec![1, 0],
                    component: Some((1, 1)),
                }),
            )
        );
    }

    #[test]
    fn commutator_form() {
        let e = parse("[a*xi1, b*xi2^-1]").unwrap();
        match e {
            Expr::Commutator(lhs, rhs) => {
                assert_eq!(
                    *lhs,
                    Expr::Mul(boxed(Expr::Ident("a".into())), boxed(Expr::Xi(XiVar::Xi1)))
                );
                assert_eq!(
                    *rhs,
                    Expr::Mul(
                        boxed(Expr::Ident("b".into())),
                        boxed(Expr::Pow(boxed(Expr::Xi(XiVar::Xi2)), -1))
                    )
                );
            }
            other => panic!("expected commutator, got {other:?}"),
        }
    }

    #[test]
    fn unbalanced_exponent_is_a_syntax_error() {
        let err = parse("xi1^(2").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.expected.iter().any(|e| e.contains("integer")));
    }

    #[test]
    fn rational_and_gaussian_literals() {
        assert_eq!(parse("3/4").unwrap(), Expr::Number(Rational::new(3, 4)));
        let e = parse("1/2+3/4*i").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                boxed(Expr::Number(Rational::new(1, 2))),
                boxed(Expr::Mul(
                    boxed(Expr::Number(Rational::new(3, 4))),
                    boxed(Expr::ImagUnit)
                )),
            )
        );
    }

    #[test]
    fn quantum_monomial() {
        let e = parse("U^2*V^-1").unwrap();
        assert_eq!(
            e,
            Expr::Mul(
                boxed(Expr::Pow(boxed(Expr::GenU), 2)),
                boxed(Expr::Pow(boxed(Expr::GenV), -1)),
            )
        );
    }

    #[test]
    fn precedence_unary_minus_and_power() {
        // grammar: '-' factor, so the power binds inside the negation
        assert_eq!(
            parse("-xi^2").unwrap(),
            Expr::Neg(boxed(Expr::Pow(boxed(Expr::Xi(XiVar::Xi)), 2)))
        );
        assert_eq!(
            parse("a+-b").unwrap(),
            Expr::Add(
                boxed(Expr::Ident("a".into())),
                boxed(Expr::Neg(boxed(Expr::Ident("b".into()))))
            )
        );
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse(" e[ 1 , 0 ] ").unwrap(), parse("e[1,0]").unwrap());
        assert_eq!(parse("a \n* b").unwrap(), parse("a*b").unwrap());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0i64..40, 1i64..9).prop_map(|(n, d)| Expr::Number(Rational::new(n, d))),
            Just(Expr::ImagUnit),
            Just(Expr::RootOfUnity),
            Just(Expr::GenU),
            Just(Expr::GenV),
            Just(Expr::Xi(XiVar::Xi)),
            Just(Expr::Xi(XiVar::Xi1)),
            Just(Expr::Xi(XiVar::Xi2)),
            "[a-z][a-z0-9_]{0,5}"
                .prop_filter("reserved word", |s| {
                    !matches!(s.as_str(), "i" | "q" | "xi" | "xi1" | "xi2")
                })
                .prop_map(Expr::Ident),
            (
                proptest::collection::vec(-9i64..9, 1..=2),
                proptest::option::of((1i64..=2, 1i64..=2))
            )
                .prop_map(|(freq, component)| Expr::Basis { freq, component }),
        ];
        leaf.prop_recursive(4, 64, 4, |inner| {
            prop_oneof![
                (inner.clone(), -6i64..6).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner)
                    .prop_map(|(a, b)| Expr::Commutator(Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_expressions_reparse_identically(e in arb_expr()) {
            let text = e.to_string();
            let reparsed = parse(&text).unwrap_or_else(|err| {
                panic!("failed to reparse {text:?}: {err}")
            });
            prop_assert_eq!(reparsed, e);
        }
    }
}
