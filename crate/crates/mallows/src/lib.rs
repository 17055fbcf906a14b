#![doc = include_str!("../../../book/src/overview.md")]

pub mod coupling;
pub mod error;
pub mod harness;
pub mod lindeberg;
pub mod rng;
pub mod stable_law;
pub mod stats;
pub mod transport;

pub use error::Error;
pub use stable_law::StableParams;
pub use transport::{DiscreteLaw, DistanceEstimate, EmpiricalDistribution};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
