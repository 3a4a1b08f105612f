//! Modified Reedy and modified projective model structures on diagram categories,
//! evaluated over finite, computable ambient categories.

pub mod ambient;
pub mod budget;
pub mod comparisons;
pub mod diagram;
pub mod engine;
pub mod error;
pub mod fincat;
pub mod ktheory;
pub mod linalg;
pub mod reedy;
pub mod suite;

pub use budget::Budget;
pub use error::{Error, Result};
