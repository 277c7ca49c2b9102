//! Computations around `Z[zeta_p]` modulo powers of `(1 - zeta_p)`.

pub mod annihilator;
pub mod arith;
pub mod bernoulli;
pub mod error;
pub mod lambda;
pub mod singular;
pub mod units;
pub mod verify;

pub use error::{Error, ExclusionRule, Result};
pub use lambda::{CycloElem, LambdaRing, Valuation, ZetaPoly};
