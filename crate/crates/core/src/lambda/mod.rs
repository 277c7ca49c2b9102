//! Precision-tracked arithmetic in `Z[zeta]/pi^N` for the `p`-th cyclotomic
//! field, `pi = (lambda)`, `lambda = zeta - 1`.
//!
//! Elements are stored in the `lambda`-power basis with coefficients modulo
//! `p^a`. Since `Z[zeta] = Z[lambda]` and `p Z[zeta] = pi^(p-1)`, coefficient
//! congruence modulo `p^a` is exactly congruence modulo `pi^(a(p-1))`.

mod elem;
mod ring;
mod zeta;

use std::fmt;

use serde::Serialize;

pub use elem::{frobenius_power_check, CycloElem, FrobeniusWitness};
pub use ring::LambdaRing;
pub use zeta::ZetaPoly;

/// `pi`-adic valuation of an element known modulo `pi^cap`.
///
/// A representative that vanishes at the working precision only tells us
/// the valuation is at least `cap`; that case never carries a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Valuation {
    Exact(u64),
    AtLeast(u64),
}

impl Valuation {
    pub fn exact(self) -> Option<u64> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Whether `v >= k` is certain.
    pub fn is_at_least(self, k: u64) -> bool {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v >= k,
        }
    }

    /// Whether `v < k` is certain.
    pub fn is_below(self, k: u64) -> bool {
        matches!(self, Valuation::Exact(v) if v < k)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "v={v} exact"),
            Valuation::AtLeast(v) => write!(f, "v>={v}"),
        }
    }
}
