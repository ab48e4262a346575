//! Shape and speed estimation, sampler calibration and the integer-program
//! verifier.

pub mod density;
pub mod lp;
pub mod shape;

pub use density::{full_density_checks, simple_density_checks, DensityReport, DensityRow, Relation};
pub use lp::{lp_bruteforce, lp_closed_form, lp_verify, ClosedForm, LpCase, LpError, LpInstance, LpSolution, LpSummary, LpValue, LpVars};
pub use shape::{estimate_mu, flatness_check, mean_abs_dev, origin_tree, shape_estimate, symmetry_check, FlatRow, ShapeEstimate, SpeedFit, SymmetryReport, WetSnapshot, OCTANTS};
