//! Bond taxonomy, classes, slow flags and passage times for both models.

mod cost;
mod env;
pub mod export;
mod field;
pub mod identities;
mod types;

pub use cost::Cost;
pub use env::{FullEnvironment, SimpleEnvironment, HALO};
pub use field::{slow_threshold, BondField, BondRecord, FullDetail, Model};
pub use types::{BondType, SLOW_CORE_TENTHS, SLOW_RAW_TENTHS};
