//! Sampled and thinned environments for both models.

use fpp_env::{sample_hv, sample_simple, sample_zigzag, EnvError, Highway, Rect};
use fpp_params::{FullParams, SimpleParams};
use fpp_thinning::{HvClassMap, Thinning};

/// Margin between the core window and the sampling region.
pub const HALO: i64 = 64;

pub struct FullEnvironment {
    pub params: FullParams,
    pub seed: u64,
    pub window: Rect,
    pub region: Rect,
    pub cutoff: u32,
    pub hv: Vec<Highway>,
    pub hv_map: HvClassMap,
    pub thinning: Thinning,
}

impl FullEnvironment {
    pub fn build(seed: u64, params: &FullParams, window: Rect, cutoff: u32) -> Result<Self, EnvError> {
        let region = window.expand(HALO);
        let zz = sample_zigzag(seed, params, region, cutoff)?;
        let hv = sample_hv(seed, params, region, cutoff)?;
        Ok(Self::from_parts(seed, params, window, cutoff, zz.highways, hv.highways))
    }

    /// Assemble from explicit raw highway lists (used for planted fixtures).
    pub fn from_parts(seed: u64, params: &FullParams, window: Rect, cutoff: u32, zigzag: Vec<Highway>, hv: Vec<Highway>) -> Self {
        let hv_map = HvClassMap::build(&hv);
        let thinning = Thinning::run(&zigzag, &hv_map, params);
        FullEnvironment { params: params.clone(), seed, window, region: window.expand(HALO), cutoff, hv, hv_map, thinning }
    }

    /// Final zigzag configuration.
    pub fn zigzags(&self) -> &[Highway] {
        &self.thinning.stage3.highways
    }
}

pub struct SimpleEnvironment {
    pub params: SimpleParams,
    pub seed: u64,
    pub window: Rect,
    pub cutoff: u32,
    pub diagonals: Vec<Highway>,
}

impl SimpleEnvironment {
    pub fn build(seed: u64, params: &SimpleParams, window: Rect, cutoff: u32) -> Result<Self, EnvError> {
        let raw = sample_simple(seed, params, window.expand(1), cutoff)?;
        Ok(SimpleEnvironment { params: params.clone(), seed, window, cutoff, diagonals: raw.highways })
    }

    pub fn from_parts(seed: u64, params: &SimpleParams, window: Rect, cutoff: u32, diagonals: Vec<Highway>) -> Self {
        SimpleEnvironment { params: params.clone(), seed, window, cutoff, diagonals }
    }
}
