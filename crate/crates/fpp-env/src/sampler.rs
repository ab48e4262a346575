//! Window-consistent sampling of highway configurations.
//!
//! Sites are grouped into fixed 16x16 tiles of the global lattice. For each
//! tile and each (family, class) the number of present highways among the
//! tile's independent Bernoulli slots (site x length) is drawn from its
//! binomial law with one hashed uniform, and the successes are placed on a
//! uniformly random subset of the slots by further hashed draws. This has
//! the same law as slot-by-slot sampling and depends only on global tile
//! coordinates, so overlapping windows agree.

use crate::hash::{binomial_inv, domain, hash_key, uniform, zz};
use crate::highway::{DiagOrientation, Highway, StartType};
use crate::lattice::{Bond, Rect, Site};
use fpp_params::{FullParams, SimpleParams};
use serde::{Deserialize, Serialize};

pub const TILE: i64 = 16;
/// Coordinates beyond this magnitude are refused.
pub const COORD_LIMIT: i64 = 1 << 40;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EnvError {
    #[error("window {0:?} exceeds the coordinate range +-2^40")]
    Overflow(Rect),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Zigzag(DiagOrientation, StartType),
    Horizontal,
    Vertical,
    Diagonal(DiagOrientation),
}

impl Family {
    pub const ZIGZAG: [Family; 4] = [
        Family::Zigzag(DiagOrientation::SwNe, StartType::H),
        Family::Zigzag(DiagOrientation::SwNe, StartType::V),
        Family::Zigzag(DiagOrientation::SeNw, StartType::H),
        Family::Zigzag(DiagOrientation::SeNw, StartType::V),
    ];
    pub const HV: [Family; 2] = [Family::Horizontal, Family::Vertical];
    pub const DIAGONAL: [Family; 2] = [Family::Diagonal(DiagOrientation::SwNe), Family::Diagonal(DiagOrientation::SeNw)];

    pub fn code(self) -> u64 {
        match self {
            Family::Zigzag(DiagOrientation::SwNe, StartType::H) => 0,
            Family::Zigzag(DiagOrientation::SwNe, StartType::V) => 1,
            Family::Zigzag(DiagOrientation::SeNw, StartType::H) => 2,
            Family::Zigzag(DiagOrientation::SeNw, StartType::V) => 3,
            Family::Horizontal => 4,
            Family::Vertical => 5,
            Family::Diagonal(DiagOrientation::SwNe) => 6,
            Family::Diagonal(DiagOrientation::SeNw) => 7,
        }
    }

    /// Number of admissible lengths per anchor site at class `k`.
    pub fn lengths(self, k: u32) -> u64 {
        match self {
            Family::Zigzag(..) => 1 << (k + 3),
            Family::Horizontal | Family::Vertical => 1 << k,
            Family::Diagonal(_) => 1,
        }
    }

    /// Length of the `j`-th slot (0-based).
    pub fn slot_length(self, k: u32, j: u64) -> u32 {
        match self {
            Family::Diagonal(_) => (1u32 << k) - 1,
            _ => j as u32 + 1,
        }
    }

    /// Anchor padding: every highway meeting a window has its anchor in the
    /// window grown by this margin on the relevant sides.
    pub fn pad(self, k: u32) -> i64 {
        match self {
            Family::Zigzag(..) => 1 << (k + 3),
            Family::Horizontal | Family::Vertical => 1 << k,
            Family::Diagonal(_) => (1 << k) - 1,
        }
    }

    fn anchor_region(self, k: u32, r: &Rect) -> Rect {
        let m = self.pad(k);
        match self {
            Family::Zigzag(DiagOrientation::SwNe, _) | Family::Diagonal(DiagOrientation::SwNe) => {
                Rect::new(r.x0 - m, r.y0 - m, r.x1, r.y1)
            }
            Family::Zigzag(DiagOrientation::SeNw, _) | Family::Diagonal(DiagOrientation::SeNw) => {
                Rect::new(r.x0, r.y0 - m, r.x1 + m, r.y1)
            }
            Family::Horizontal => Rect::new(r.x0 - m, r.y0, r.x1, r.y1),
            Family::Vertical => Rect::new(r.x0, r.y0 - m, r.x1, r.y1),
        }
    }

    /// Diagonal families keep x - y (SW/NE) or x + y (SE/NW) within one of
    /// the anchor's value; returns the invariant and the allowed range for
    /// anchors of highways meeting `r`.
    fn band(self, r: &Rect) -> Option<(fn(i64, i64) -> i64, i64, i64)> {
        match self {
            Family::Zigzag(DiagOrientation::SwNe, _) | Family::Diagonal(DiagOrientation::SwNe) => {
                Some((|x, y| x - y, r.x0 - r.y1 - 1, r.x1 - r.y0 + 1))
            }
            Family::Zigzag(DiagOrientation::SeNw, _) | Family::Diagonal(DiagOrientation::SeNw) => {
                Some((|x, y| x + y, r.x0 + r.y0 - 1, r.x1 + r.y1 + 1))
            }
            _ => None,
        }
    }

    fn build(self, k: u32, anchor: Site, length: u32, mark: f64) -> Highway {
        match self {
            Family::Zigzag(o, s) => Highway::zigzag(o, s, k, anchor, length, mark),
            Family::Horizontal => Highway::horizontal(k, anchor, length),
            Family::Vertical => Highway::vertical(k, anchor, length),
            Family::Diagonal(o) => Highway::diagonal(o, k, anchor, length),
        }
    }
}

/// Per-slot presence probabilities.
pub fn zigzag_prob(theta: f64, k: u32) -> f64 {
    theta.powi(k as i32) / 2f64.powi(2 * k as i32 + 4)
}

pub fn hv_prob(thetatilde: f64, k: u32) -> f64 {
    thetatilde.powi(k as i32) / 2f64.powi(2 * k as i32)
}

pub fn simple_prob(theta: f64, k: u32) -> f64 {
    (theta / 2.0).powi(k as i32)
}

/// Raw highways meeting a query region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawConfig {
    pub region: Rect,
    pub pad: i64,
    pub class_cutoff: u32,
    pub highways: Vec<Highway>,
}

impl RawConfig {
    pub fn empty(region: Rect, class_cutoff: u32) -> Self {
        RawConfig { region, pad: 0, class_cutoff, highways: Vec::new() }
    }
}

fn check_region(r: &Rect) -> Result<(), EnvError> {
    let lim = COORD_LIMIT;
    if r.x0.abs() > lim || r.x1.abs() > lim || r.y0.abs() > lim || r.y1.abs() > lim {
        return Err(EnvError::Overflow(*r));
    }
    Ok(())
}

/// Slot indices of the present highways of one tile, in increasing order.
fn tile_successes(seed: u64, fam: Family, k: u32, tx: i64, ty: i64, slots: u64, p: f64) -> Vec<u64> {
    let key = [domain::COUNT, fam.code(), k as u64, zz(tx), zz(ty)];
    let u = uniform(seed, &key);
    let c = binomial_inv(slots, p, u, hash_key(seed ^ 0x77, &key));
    let mut picked: Vec<u64> = Vec::with_capacity(c as usize);
    for i in 0..c {
        let mut r = 0u64;
        loop {
            let v = uniform(seed, &[domain::PLACE, fam.code(), k as u64, zz(tx), zz(ty), i, r]);
            let idx = ((v * slots as f64) as u64).min(slots - 1);
            if !picked.contains(&idx) {
                picked.push(idx);
                break;
            }
            r += 1;
        }
    }
    picked.sort_unstable();
    picked
}

/// All class-`k` highways of one family meeting `region`, in a canonical order.
pub fn sample_family(seed: u64, fam: Family, k: u32, p: f64, region: &Rect) -> Vec<Highway> {
    let mut out = Vec::new();
    if region.is_empty() || p <= 0.0 {
        return out;
    }
    let ar = fam.anchor_region(k, region);
    let lengths = fam.lengths(k);
    let slots = (TILE * TILE) as u64 * lengths;
    let (tx0, tx1) = (ar.x0.div_euclid(TILE), ar.x1.div_euclid(TILE));
    let (ty0, ty1) = (ar.y0.div_euclid(TILE), ar.y1.div_euclid(TILE));
    let band = fam.band(region);
    for ty in ty0..=ty1 {
        for tx in tx0..=tx1 {
            if let Some((v, lo, hi)) = band {
                // tiles whose anchors all miss the band cannot contribute
                let (x0, y0) = (tx * TILE, ty * TILE);
                let c = [v(x0, y0), v(x0 + TILE - 1, y0), v(x0, y0 + TILE - 1), v(x0 + TILE - 1, y0 + TILE - 1)];
                if *c.iter().max().unwrap() < lo || *c.iter().min().unwrap() > hi {
                    continue;
                }
            }
            for slot in tile_successes(seed, fam, k, tx, ty, slots, p) {
                let site_idx = (slot / lengths) as i64;
                let j = slot % lengths;
                let anchor = Site::new(tx * TILE + site_idx % TILE, ty * TILE + site_idx / TILE);
                if !ar.contains(anchor) {
                    continue;
                }
                let length = fam.slot_length(k, j);
                let mark = match fam {
                    Family::Zigzag(..) => uniform(
                        seed,
                        &[domain::RANK, fam.code(), k as u64, zz(anchor.x), zz(anchor.y), length as u64],
                    ),
                    _ => 0.0,
                };
                let h = fam.build(k, anchor, length, mark);
                if h.meets(region) {
                    out.push(h);
                }
            }
        }
    }
    out
}

fn sample_families(seed: u64, fams: &[Family], cutoff: u32, region: Rect, prob: impl Fn(u32) -> f64) -> Result<RawConfig, EnvError> {
    check_region(&region)?;
    let mut highways = Vec::new();
    let mut pad = 0;
    for k in 1..=cutoff {
        let p = prob(k);
        for &fam in fams {
            pad = pad.max(fam.pad(k));
            highways.extend(sample_family(seed, fam, k, p, &region));
        }
    }
    Ok(RawConfig { region, pad, class_cutoff: cutoff, highways })
}

/// Raw zigzag configuration (all classes up to `cutoff`) meeting `region`.
pub fn sample_zigzag(seed: u64, p: &FullParams, region: Rect, cutoff: u32) -> Result<RawConfig, EnvError> {
    let th = p.theta();
    sample_families(seed, &Family::ZIGZAG, cutoff, region, |k| zigzag_prob(th, k))
}

/// Raw HV configuration meeting `region`.
pub fn sample_hv(seed: u64, p: &FullParams, region: Rect, cutoff: u32) -> Result<RawConfig, EnvError> {
    let tht = p.thetatilde();
    sample_families(seed, &Family::HV, cutoff, region, |k| hv_prob(tht, k))
}

/// Diagonal highways of the simple model meeting `region`.
pub fn sample_simple(seed: u64, p: &SimpleParams, region: Rect, cutoff: u32) -> Result<RawConfig, EnvError> {
    let th = p.theta;
    sample_families(seed, &Family::DIAGONAL, cutoff, region, |k| simple_prob(th, k))
}

/// Per-bond marks (xi, xi'): xi breaks ties, xi' decides slow bonds.
pub fn bond_marks(seed: u64, b: Bond) -> (f64, f64) {
    let key = [zz(b.base.x), zz(b.base.y), b.dir.index() as u64];
    let xi = uniform(seed, &[domain::XI, key[0], key[1], key[2]]);
    let xp = uniform(seed, &[domain::XI_PRIME, key[0], key[1], key[2]]);
    (xi, xp)
}

/// Bound on the probability that a fixed bond lies in a present highway of
/// class above the cutoff: r_{cutoff+1}.
pub fn truncation_bound(theta: f64, cutoff: u32) -> f64 {
    theta.powi(cutoff as i32 + 1) / (1.0 - theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BondDir;

    fn full() -> FullParams {
        match fpp_params::load_preset("full-A").unwrap() {
            fpp_params::ModelParams::Full(f) => f,
            _ => unreachable!(),
        }
    }

    #[test]
    fn cutoff_zero_is_empty() {
        let r = Rect::centered(20);
        assert!(sample_zigzag(1, &full(), r, 0).unwrap().highways.is_empty());
        assert!(sample_hv(1, &full(), r, 0).unwrap().highways.is_empty());
    }

    #[test]
    fn lengths_respect_class_caps() {
        let f = full();
        let r = Rect::centered(40);
        for h in sample_zigzag(3, &f, r, 4).unwrap().highways {
            assert!(h.length >= 1 && h.length <= 1 << (h.class + 3));
            assert!(h.meets(&r));
        }
        for h in sample_hv(3, &f, r, 4).unwrap().highways {
            assert!(h.length >= 1 && h.length <= 1 << h.class);
        }
        let sp = fpp_params::SimpleParams { theta: 0.8, eta: 0.85, c_big: 2.0, k0: 22 };
        for h in sample_simple(3, &sp, r, 5).unwrap().highways {
            assert_eq!(h.length, (1 << h.class) - 1);
        }
    }

    #[test]
    fn single_site_window_cutoff_one() {
        let sp = fpp_params::SimpleParams { theta: 0.8, eta: 0.85, c_big: 2.0, k0: 22 };
        for seed in 0..200 {
            let r = Rect::new(0, 0, 0, 0);
            let cfg = sample_simple(seed, &sp, r, 1).unwrap();
            assert!(cfg.highways.len() <= 4);
            for h in &cfg.highways {
                assert_eq!(h.length, 1);
                assert!(h.contains_site(Site::new(0, 0)));
            }
        }
    }

    #[test]
    fn overlapping_windows_agree() {
        let f = full();
        let a = Rect::new(-30, -30, 10, 10);
        let b = Rect::new(0, -5, 50, 40);
        let ov = Rect::new(0, -5, 10, 10);
        let ha = sample_zigzag(9, &f, a, 5).unwrap().highways;
        let hb = sample_zigzag(9, &f, b, 5).unwrap().highways;
        let pick = |v: &[Highway]| {
            let mut w: Vec<String> = v.iter().filter(|h| h.meets(&ov)).map(|h| format!("{h:?}")).collect();
            w.sort();
            w
        };
        assert_eq!(pick(&ha), pick(&hb));
        assert!(!pick(&ha).is_empty());
    }

    #[test]
    fn marks_are_deterministic_and_symmetric() {
        let a = Site::new(4, 5);
        let b = Site::new(5, 5);
        let e1 = Bond::between(a, b).unwrap();
        let e2 = Bond::between(b, a).unwrap();
        assert_eq!(bond_marks(11, e1), bond_marks(11, e2));
        assert_ne!(bond_marks(11, e1), bond_marks(12, e1));
        let e3 = Bond::new(a, BondDir::N);
        assert_ne!(bond_marks(11, e1), bond_marks(11, e3));
    }

    #[test]
    fn overflow_is_an_error() {
        let r = Rect::new(0, 0, COORD_LIMIT + 1, 3);
        assert!(matches!(sample_hv(1, &full(), r, 2), Err(EnvError::Overflow(_))));
    }
}
