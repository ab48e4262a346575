//! Success events, their regions, and the corridor check on geodesics.

mod census;
mod full;
mod order;
mod simple;
pub mod svg;
mod window;

pub use census::{success_census, CensusRow};
pub use full::{
    corridor_check_full, detect_full_success, find_spanning_highways, FrameGeometry, FullReport, HWitness, JWitness, Witnesses,
    H_LABELS, J_LABELS,
};
pub use order::tree_order;
pub use simple::{corridor_check_simple, detect_simple_success, simple_premise, SimpleReport};
pub use window::{full_window, simple_window, WindowPlan, DEFAULT_BUDGET};

use fpp_env::Site;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum EventError {
    #[error("class {k} needs a {side}x{side} window (~{bytes} bytes), over the {budget}-byte budget")]
    Budget { k: u32, side: i64, bytes: u64, budget: u64 },
    #[error(transparent)]
    Env(#[from] fpp_env::EnvError),
    #[error(transparent)]
    Geo(#[from] fpp_geodesic::GeoError),
}

/// A geodesic from the origin that breaks the expected corridor behaviour.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub target: Site,
    /// First site of the geodesic outside the random region.
    pub exit: Option<Site>,
    pub prefix: Vec<Site>,
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorridorResult {
    pub targets: usize,
    pub skipped_inside: usize,
    pub violation_count: usize,
    /// At most `MAX_KEPT` violations with diagnostics.
    pub violations: Vec<Violation>,
}

pub const MAX_KEPT: usize = 32;
