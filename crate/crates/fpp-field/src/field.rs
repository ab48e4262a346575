//! Materialized per-bond passage times over a rectangle.

use crate::cost::Cost;
use crate::env::{FullEnvironment, SimpleEnvironment};
use crate::types::{BondType, SLOW_CORE_TENTHS, SLOW_RAW_TENTHS};
use fpp_env::{bond_marks, Bond, BondDir, Rect, Site};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Simple,
    Full,
}

const DIRS: [BondDir; 4] = [BondDir::E, BondDir::N, BondDir::NE, BondDir::NW];

/// Per-bond classification data of the full model.
#[derive(Clone, Debug)]
pub struct FullDetail {
    pub seed: u64,
    ty: Vec<u8>,
    kzig: Vec<u8>,
    khv: Vec<u8>,
    slow: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct BondField {
    pub rect: Rect,
    pub model: Model,
    ndirs: usize,
    tenths: Vec<i32>,
    sigma: Vec<f64>,
    detail: Option<FullDetail>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondRecord {
    pub bond: Bond,
    pub ty: BondType,
    pub k_zig: u32,
    pub k_hv: u32,
    pub slow: bool,
    pub alpha_tenths: u8,
    pub core_tenths: u8,
    pub alpha_star_tenths: u8,
    pub sigma: f64,
    pub tau: f64,
    pub xi: f64,
    pub xi_prime: f64,
}

/// Slow-bond threshold 4^{-max(k, k~, 1)}.
pub fn slow_threshold(kzig: u32, khv: u32) -> f64 {
    0.25f64.powi(kzig.max(khv).max(1) as i32)
}

/// Zigzag occupancy over a rectangle: bond classes and terminal flags.
struct ZigMap {
    r: Rect,
    class: Vec<u8>,
    bflag: Vec<u8>,
    sflag: Vec<u8>,
}

const TERM: u8 = 1;
const DOUBLY: u8 = 2;
const IN_ZIG: u8 = 1;
const TERM_SITE: u8 = 2;

impl ZigMap {
    fn build(r: Rect, env: &FullEnvironment) -> Self {
        let n = r.area() as usize;
        let mut m = ZigMap { r, class: vec![0; 2 * n], bflag: vec![0; 2 * n], sflag: vec![0; n] };
        for h in env.zigzags() {
            if !h.bbox().intersects(&r) {
                continue;
            }
            let len = h.length;
            for i in 0..=len {
                let s = h.site(i);
                if r.contains(s) {
                    let f = &mut m.sflag[r.index(s)];
                    *f |= IN_ZIG;
                    if i == 0 || i == len {
                        *f |= TERM_SITE;
                    }
                }
                if i < len {
                    let b = h.bond(i);
                    if r.contains(b.base) {
                        let k = r.index(b.base) * 2 + b.dir.index();
                        m.class[k] = m.class[k].max(h.class.min(255) as u8);
                        if i == 0 || i == len - 1 {
                            m.bflag[k] |= TERM;
                        }
                        if len == 1 {
                            m.bflag[k] |= DOUBLY;
                        }
                    }
                }
            }
        }
        m
    }

    fn slot(&self, s: Site, d: usize) -> Option<usize> {
        self.r.contains(s).then(|| self.r.index(s) * 2 + d)
    }

    fn class(&self, s: Site, d: usize) -> u8 {
        self.slot(s, d).map_or(0, |k| self.class[k])
    }

    fn zig(&self, s: Site, d: usize) -> bool {
        self.class(s, d) > 0
    }

    fn site_flag(&self, s: Site) -> u8 {
        if self.r.contains(s) {
            self.sflag[self.r.index(s)]
        } else {
            0
        }
    }

    fn meeting(&self, s: Site, d: usize) -> bool {
        let (dx, dy) = DIRS[d].delta();
        self.zig(s, d) && (self.zig(s.offset(-dx, -dy), d) || self.zig(s.offset(dx, dy), d))
    }

    fn midpoint(&self, s: Site) -> bool {
        (self.zig(s.offset(-1, 0), 0) && self.zig(s, 0)) || (self.zig(s.offset(0, -1), 1) && self.zig(s, 1))
    }

    fn intersection(&self, s: Site, d: usize) -> bool {
        let (dx, dy) = DIRS[d].delta();
        self.zig(s, d) && self.midpoint(s) && self.midpoint(s.offset(dx, dy))
    }

    /// Square-lattice bonds incident to `p`, as (base, dir index).
    fn incident(p: Site) -> [(Site, usize); 4] {
        [(p, 0), (p.offset(-1, 0), 0), (p, 1), (p.offset(0, -1), 1)]
    }

    fn classify(&self, s: Site, d: usize, khv: u32) -> BondType {
        let (dx, dy) = DIRS[d].delta();
        let q = s.offset(dx, dy);
        if self.zig(s, d) {
            if self.intersection(s, d) {
                BondType::Intersection
            } else if self.meeting(s, d) {
                BondType::Meeting
            } else {
                let f = self.slot(s, d).map_or(0, |k| self.bflag[k]);
                if f & DOUBLY != 0 {
                    BondType::DoublyTerminal
                } else if f & TERM != 0 {
                    BondType::SinglyTerminal
                } else {
                    BondType::NormalZigzag
                }
            }
        } else if (self.site_flag(s) | self.site_flag(q)) & IN_ZIG != 0 {
            let meet_at = |p: Site| Self::incident(p).iter().any(|&(b, e)| self.meeting(b, e));
            let inter_at = |p: Site| Self::incident(p).iter().any(|&(b, e)| self.intersection(b, e));
            if meet_at(s) && meet_at(q) {
                BondType::EntryExit
            } else if inter_at(s) || inter_at(q) {
                BondType::IntersectionAdjacent
            } else if (self.site_flag(s) | self.site_flag(q)) & TERM_SITE != 0 {
                BondType::Skimming
            } else {
                BondType::NormalBoundary
            }
        } else if khv > 0 {
            BondType::HvOnly
        } else {
            BondType::Backroad
        }
    }
}

impl BondField {
    fn blank(rect: Rect, model: Model) -> Self {
        let ndirs = if model == Model::Simple { 4 } else { 2 };
        let n = rect.area() as usize * ndirs;
        BondField { rect, model, ndirs, tenths: vec![0; n], sigma: vec![0.0; n], detail: None }
    }

    /// Full-model field over `rect`.
    pub fn full(env: &FullEnvironment, rect: Rect) -> Self {
        let p = &env.params;
        let mut f = Self::blank(rect, Model::Full);
        let zm = ZigMap::build(rect.expand(2), env);
        let n = f.tenths.len();
        let mut det = FullDetail { seed: env.seed, ty: vec![0; n], kzig: vec![0; n], khv: vec![0; n], slow: vec![false; n] };
        for (si, s) in rect.sites().enumerate() {
            for d in 0..2 {
                let (dx, dy) = DIRS[d].delta();
                if !rect.contains(s.offset(dx, dy)) {
                    continue;
                }
                let b = Bond::new(s, DIRS[d]);
                let k = si * 2 + d;
                let khv = env.hv_map.get(b);
                let ty = zm.classify(s, d, khv);
                let kzig = if ty.is_zigzag() { zm.class(s, d) as u32 } else { 0 };
                let (xi, xp) = bond_marks(env.seed, b);
                let slow = xp <= slow_threshold(kzig, khv);
                let sigma = if slow {
                    0.1 * xi
                } else if ty.is_zigzag() {
                    0.1 * (p.eta.powi(kzig as i32) + p.etatilde.powi(kzig as i32) * xi)
                } else if khv > 0 {
                    let e = p.etatilde.powi(khv as i32);
                    0.1 * (e + e * xi)
                } else {
                    0.1 * xi
                };
                f.tenths[k] = if slow { SLOW_CORE_TENTHS } else { ty.core_tenths(khv > 0) } as i32;
                f.sigma[k] = sigma;
                det.ty[k] = ty as u8;
                det.kzig[k] = kzig as u8;
                det.khv[k] = khv.min(255) as u8;
                det.slow[k] = slow;
            }
        }
        f.detail = Some(det);
        f
    }

    /// Simple-model field over `rect`: axis bonds cost 1, diagonal bonds
    /// sqrt(2)(1 + eta^k) inside a class-k highway and 3 otherwise.
    pub fn simple(env: &SimpleEnvironment, rect: Rect) -> Self {
        let mut f = Self::blank(rect, Model::Simple);
        let mut class = vec![0u32; rect.area() as usize * 2];
        for h in &env.diagonals {
            if !h.bbox().intersects(&rect) {
                continue;
            }
            for b in h.bonds() {
                if rect.contains(b.base) {
                    let k = rect.index(b.base) * 2 + (b.dir.index() - 2);
                    class[k] = class[k].max(h.class);
                }
            }
        }
        let eta = env.params.eta;
        for si in 0..rect.area() as usize {
            f.tenths[si * 4] = 10;
            f.tenths[si * 4 + 1] = 10;
            for j in 0..2 {
                let k = class[si * 2 + j];
                let slot = si * 4 + 2 + j;
                if k == 0 {
                    f.tenths[slot] = 30;
                } else {
                    f.sigma[slot] = std::f64::consts::SQRT_2 * (1.0 + eta.powi(k as i32));
                }
            }
        }
        f
    }

    /// Full-model-layout field with every bond costing `c` (tests).
    pub fn constant(rect: Rect, model: Model, c: Cost) -> Self {
        let mut f = Self::blank(rect, model);
        for t in f.tenths.iter_mut() {
            *t = c.tenths as i32;
        }
        for s in f.sigma.iter_mut() {
            *s = c.sigma;
        }
        f
    }

    pub fn dirs(&self) -> &'static [BondDir] {
        &DIRS[..self.ndirs]
    }

    /// Storage slot of `b`, if both endpoints lie in the field.
    pub fn slot(&self, b: Bond) -> Option<usize> {
        let d = b.dir.index();
        if d >= self.ndirs {
            return None;
        }
        let (p, q) = b.ends();
        (self.rect.contains(p) && self.rect.contains(q)).then(|| self.rect.index(p) * self.ndirs + d)
    }

    pub fn slot_cost(&self, k: usize) -> Cost {
        Cost::new(self.tenths[k] as i64, self.sigma[k])
    }

    pub fn cost(&self, b: Bond) -> Option<Cost> {
        self.slot(b).map(|k| self.slot_cost(k))
    }

    pub fn tau(&self, b: Bond) -> Option<f64> {
        self.cost(b).map(Cost::value)
    }

    pub fn set_cost(&mut self, b: Bond, c: Cost) {
        let k = self.slot(b).expect("bond in field");
        self.tenths[k] = c.tenths as i32;
        self.sigma[k] = c.sigma;
    }

    /// All bonds with both endpoints in the field.
    pub fn bonds(&self) -> impl Iterator<Item = Bond> + '_ {
        self.rect.sites().flat_map(move |s| self.dirs().iter().map(move |&d| Bond::new(s, d))).filter(move |&b| self.slot(b).is_some())
    }

    pub fn detail(&self) -> Option<&FullDetail> {
        self.detail.as_ref()
    }

    pub fn bond_type(&self, b: Bond) -> Option<BondType> {
        let d = self.detail.as_ref()?;
        self.slot(b).map(|k| BondType::from_u8(d.ty[k]))
    }

    pub fn is_slow(&self, b: Bond) -> bool {
        match (&self.detail, self.slot(b)) {
            (Some(d), Some(k)) => d.slow[k],
            _ => false,
        }
    }

    /// Compensated core time of a bond ignoring its slow flag.
    pub fn core_tenths(&self, b: Bond) -> Option<u8> {
        let d = self.detail.as_ref()?;
        let k = self.slot(b)?;
        Some(BondType::from_u8(d.ty[k]).core_tenths(d.khv[k] > 0))
    }

    pub fn alpha_star_tenths(&self, b: Bond) -> Option<u8> {
        let d = self.detail.as_ref()?;
        let k = self.slot(b)?;
        Some(if d.slow[k] { SLOW_CORE_TENTHS } else { BondType::from_u8(d.ty[k]).core_tenths(d.khv[k] > 0) })
    }

    pub fn record(&self, b: Bond) -> Option<BondRecord> {
        let d = self.detail.as_ref()?;
        let k = self.slot(b)?;
        let ty = BondType::from_u8(d.ty[k]);
        let hv = d.khv[k] > 0;
        let (xi, xi_prime) = bond_marks(d.seed, b);
        let core = ty.core_tenths(hv);
        Some(BondRecord {
            bond: b,
            ty,
            k_zig: d.kzig[k] as u32,
            k_hv: d.khv[k] as u32,
            slow: d.slow[k],
            alpha_tenths: if d.slow[k] { SLOW_RAW_TENTHS } else { ty.raw_tenths(hv) },
            core_tenths: core,
            alpha_star_tenths: self.tenths[k] as u8,
            sigma: self.sigma[k],
            tau: self.slot_cost(k).value(),
            xi,
            xi_prime,
        })
    }
}
