//! Stable marriages that are fair under a generalized Gini index (GGI) of the
//! agents' disutilities.
//!
//! The crate covers instance handling, Gale-Shapley, the rotation poset and the
//! closed-set enumeration of stable matchings, an LP-rounding 2-approximation,
//! an exact enumeration algorithm parameterized by the number `K` of nonzero
//! weights, and the reduction from Min 2-SAT used to show hardness.

pub mod brute;
pub mod error;
pub mod fixtures;
pub mod gale_shapley;
pub mod instance;
pub mod lp;
pub mod matching;
pub mod random;
pub mod rational;
pub mod reduction;
pub mod rotation;
pub mod xp;

pub use error::{Error, Result};
pub use instance::{Agent, DisutilityFunction, GgiWeights, Instance, Side};
pub use matching::{Criterion, DisutilityVector, Matching};
pub use rational::Rational;
pub use rotation::{ClosedSet, Rotation, RotationPoset, RotationSet};
