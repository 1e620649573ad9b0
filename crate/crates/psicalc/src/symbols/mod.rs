//! Formal pseudodifferential symbols in one and two variables, with
//! certified truncation floors, products, and noncommutative residues.

pub mod one_d;
pub mod two_d;
mod words;

pub use one_d::{
    expand_xi_pow, expand_xi_pow_twisted, expand_xi_pow_untwisted, toeplitz_project, Symbol1D,
};
pub use two_d::{lemma_check, monomial_trace_check, EqualityReport, Symbol2D};
pub use words::{sigma_delta_words, OpLetter, OpWord};

use std::fmt;

/// The truncation floor of one symbol axis.
///
/// `MinusInfinity` marks an exact symbol: every coefficient outside the
/// stored finite support is genuinely zero. `At(f)` marks a truncated
/// symbol: coefficients at orders below `f` are unknown, coefficients at
/// orders `>= f` are exact.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Floor {
    MinusInfinity,
    At(i64),
}

impl Floor {
    pub fn is_exact(self) -> bool {
        matches!(self, Floor::MinusInfinity)
    }

    /// Floor arithmetic: `-inf + d = -inf`.
    pub fn shift(self, d: i64) -> Floor {
        match self {
            Floor::MinusInfinity => Floor::MinusInfinity,
            Floor::At(f) => Floor::At(f + d),
        }
    }

    /// Whether a coefficient at `order` is certified under this floor.
    pub fn allows(self, order: i64) -> bool {
        match self {
            Floor::MinusInfinity => true,
            Floor::At(f) => order >= f,
        }
    }

    /// `floor <= k` as extended integers.
    pub fn at_most(self, k: i64) -> bool {
        match self {
            Floor::MinusInfinity => true,
            Floor::At(f) => f <= k,
        }
    }
}

impl fmt::Display for Floor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Floor::MinusInfinity => write!(f, "exact"),
            Floor::At(v) => write!(f, "{v}"),
        }
    }
}

/// Bail-out bound for tail expansions of exact symbols. An expansion that
/// has not terminated by then genuinely has an infinite tail and must be
/// computed against a finite floor instead.
pub(crate) const EXACT_TAIL_CAP: i64 = 4096;

#[cfg(test)]
mod tests {
    use super::Floor;

    #[test]
    fn floor_ordering_and_arithmetic() {
        assert!(Floor::MinusInfinity < Floor::At(-100));
        assert_eq!(Floor::MinusInfinity.shift(5), Floor::MinusInfinity);
        assert_eq!(Floor::At(-3).shift(2), Floor::At(-1));
        assert!(Floor::At(-8).allows(-8));
        assert!(!Floor::At(-8).allows(-9));
        assert!(Floor::MinusInfinity.allows(i64::MIN));
        assert!(Floor::At(-1).at_most(-1));
        assert!(!Floor::At(0).at_most(-1));
    }
}
