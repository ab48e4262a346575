//! Exact shortest paths, geodesic trees and path statistics over a bond field.

mod busemann;
mod canonical;
mod counters;
mod dijkstra;
pub mod export;
pub mod oracle;
mod path;

pub use busemann::{busemann_estimate, directedness, BusemannEstimate, DirStats, REFERENCE_DIRS};
pub use canonical::{canonical_path, CanonicalCase};
pub use counters::{path_counters, phi, PathCounters};
pub use dijkstra::GeodesicTree;
pub use path::{geodesic_tree, path_cost, shortest_path, LatticePath, Step};

use fpp_env::Site;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeoError {
    #[error("site ({}, {}) outside the field", .0.x, .0.y)]
    OutsideWindow(Site),
    #[error("target ({}, {}) unreachable", .0.x, .0.y)]
    Unreachable(Site),
    #[error("consecutive sites ({}, {}) and ({}, {}) are not joined by a field bond", .0.x, .0.y, .1.x, .1.y)]
    NotABond(Site, Site),
    #[error("site ({}, {}) not on the required highway", .0.x, .0.y)]
    NotOnHighway(Site),
    #[error("highways do not cross")]
    NoCrossing,
    #[error("target is in the inaccessible stretch strictly between ({}, {}) and ({}, {})", .0.x, .0.y, .1.x, .1.y)]
    Inaccessible(Site, Site),
}
