//! Ranking (disbelief) calculus, exact-rational probability, and
//! order-congruent transformations between them.
//!
//! The crate models two ways of grading uncertain belief over a finite set
//! of possible worlds, and the bridges between them:
//!
//! - [`kappa`]: integer-valued ranking functions, where rank 0 means "not
//!   disbelieved" and events take the minimum rank of their members.
//!   Includes conditioning, signed belief values, plain beliefs, and
//!   densification.
//! - [`prob`]: exact rational probability distributions with Bayesian
//!   conditioning and rank-distance imaging. No floating point anywhere:
//!   every comparison the theory relies on is decided exactly.
//! - [`transform`]: the transformations between the two calculi — the
//!   least-coarse congruent probability-to-ranking map, its epsilon-rule
//!   baseline, two congruent ranking-to-probability maps, per-rank
//!   probability bounds, and acceptance thresholds.
//! - [`oracle`]: brute-force verifiers that recheck the laws of the
//!   transformations by exhaustive enumeration over all events of a
//!   (small) space.
//!
//! Spaces are desk-scale on purpose: events are bitmasks over at most 64
//! worlds, and the exhaustive verifiers carry much tighter guards.

pub mod error;
pub mod kappa;
pub mod oracle;
pub mod prob;
pub mod rational;
pub mod space;
pub mod transform;

pub use error::{Error, Result};
pub use kappa::{BeliefValue, ExtRank, RankingFunction, StrataVector};
pub use prob::{ImagedDist, ProbDist};
pub use rational::Rational;
pub use space::{Event, WorldSpace};

#[cfg(test)]
mod sync_tests {
    fn shareable<T: Send + Sync>() {}

    #[test]
    fn values_can_cross_threads() {
        shareable::<crate::WorldSpace>();
        shareable::<crate::Event>();
        shareable::<crate::ProbDist>();
        shareable::<crate::ImagedDist>();
        shareable::<crate::RankingFunction>();
        shareable::<crate::StrataVector>();
        shareable::<crate::Rational>();
    }
}
