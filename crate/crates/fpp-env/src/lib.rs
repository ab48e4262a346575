//! Lattice primitives, highway geometry and seeded highway sampling.

pub mod dump;
pub mod hash;
mod highway;
mod lattice;
mod sampler;

pub use dump::EnvDump;
pub use highway::{DiagOrientation, Highway, HighwayKind, StartType};
pub use lattice::{Bond, BondDir, Rect, Site};
pub use sampler::{
    bond_marks, hv_prob, sample_family, sample_hv, sample_simple, sample_zigzag, simple_prob, truncation_bound,
    zigzag_prob, EnvError, Family, RawConfig, COORD_LIMIT, TILE,
};
