//! Monte-Carlo calibration of the samplers against their closed forms.

use fpp_env::{hv_prob, sample_family, simple_prob, zigzag_prob, Bond, DiagOrientation, Family, Rect, Site};
use fpp_field::FullEnvironment;
use fpp_params::{FullParams, SimpleParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// estimate should match the reference
    Eq,
    /// estimate should not exceed the reference
    Le,
    /// estimate should not fall below the reference
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub name: String,
    pub k: u32,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub reference: f64,
    pub relation: Relation,
    /// Consistent with the reference at three standard errors. Rows whose
    /// reference is only claimed for large k are reported, not enforced.
    pub within_3sigma: bool,
    pub enforced: bool,
}

impl DensityRow {
    fn new(name: &str, k: u32, trials: u64, estimate: f64, stderr: f64, reference: f64, relation: Relation, enforced: bool) -> Self {
        let z = 3.0 * stderr;
        let within_3sigma = match relation {
            Relation::Eq => (estimate - reference).abs() <= z,
            Relation::Le => estimate <= reference + z,
            Relation::Ge => estimate >= reference - z,
        };
        DensityRow { name: name.into(), k, trials, estimate, stderr, reference, relation, within_3sigma, enforced }
    }

    /// Standard error under the reference mean, or the empirical one when the
    /// reference is degenerate.
    fn binomial(name: &str, k: u32, hits: u64, n: u64, reference: f64, relation: Relation, enforced: bool) -> Self {
        let est = hits as f64 / n as f64;
        let p = if relation == Relation::Eq && reference > 0.0 && reference < 1.0 { reference } else { est.clamp(1.0 / n as f64, 1.0) };
        let se = (p * (1.0 - p) / n as f64).sqrt();
        Self::new(name, k, n, est, se, reference, relation, enforced)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub rows: Vec<DensityRow>,
}

impl DensityReport {
    pub fn failures(&self) -> Vec<&DensityRow> {
        self.rows.iter().filter(|r| r.enforced && !r.within_3sigma).collect()
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("name,k,trials,estimate,stderr,reference,relation,within_3sigma,enforced\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{:.6e},{:.3e},{:.6e},{:?},{},{}\n",
                r.name, r.k, r.trials, r.estimate, r.stderr, r.reference, r.relation, r.within_3sigma, r.enforced
            ));
        }
        s
    }
}

/// P(fixed diagonal bond lies in a present class-k SW/NE diagonal):
/// 1 - (1 - (theta/2)^k)^(2^k - 1).
pub fn bond_membership_closed_form(theta: f64, k: u32) -> f64 {
    1.0 - (1.0 - simple_prob(theta, k)).powi((1i32 << k) - 1)
}

/// One seed per trial, so trials are independent.
pub fn bond_membership(seeds: &[u64], theta: f64, k: u32) -> DensityRow {
    let fam = Family::Diagonal(DiagOrientation::SwNe);
    let b = Bond::between(Site::new(0, 0), Site::new(1, 1)).unwrap();
    let probe = Rect::new(0, 0, 1, 1);
    let p = simple_prob(theta, k);
    let hits = seeds.par_iter().filter(|&&s| sample_family(s, fam, k, p, &probe).iter().any(|h| h.contains_bond(b))).count() as u64;
    DensityRow::binomial("bond_in_class_k_diagonal", k, hits, seeds.len() as u64, bond_membership_closed_form(theta, k), Relation::Eq, true)
}

/// Anchors per (site, slot) in a fixed region, pooled over seeds.
fn anchor_rate(seeds: &[u64], fam: Family, k: u32, p: f64, region: Rect) -> DensityRow {
    let count: u64 = seeds.par_iter().map(|&s| sample_family(s, fam, k, p, &region).iter().filter(|h| region.contains(h.anchor)).count() as u64).sum();
    let slots = region.area() * fam.lengths(k) * seeds.len() as u64;
    let est = count as f64 / slots as f64;
    let se = (p * (1.0 - p) / slots as f64).sqrt();
    let name = match fam {
        Family::Zigzag(..) => "zigzag_anchor",
        Family::Horizontal | Family::Vertical => "hv_anchor",
        Family::Diagonal(_) => "diagonal_anchor",
    };
    DensityRow::new(name, k, slots, est, se, p, Relation::Eq, true)
}

/// Fraction of sites on the positive horizontal axis covered by a class-k
/// SW/NE diagonal that also reaches the level line min(x, y) = 2^{k-1}+1,
/// against the theta^k / 2 lower bound (claimed for large k only).
pub fn level_crossing_density(seeds: &[u64], theta: f64, k: u32, span: i64) -> DensityRow {
    let fam = Family::Diagonal(DiagOrientation::SwNe);
    let m = (1i64 << (k - 1)) + 1;
    let p = simple_prob(theta, k);
    let axis = Rect::new(1, 0, span, 0);
    let hits: u64 = seeds
        .par_iter()
        .map(|&s| {
            let hw = sample_family(s, fam, k, p, &axis);
            (1..=span)
                .filter(|&x| {
                    hw.iter().any(|h| {
                        let i = -h.anchor.y;
                        h.anchor.x + i == x && i >= 0 && i <= h.length as i64 && h.length as i64 - i >= m
                    })
                })
                .count() as u64
        })
        .sum();
    let n = span as u64 * seeds.len() as u64;
    let est = hits as f64 / n as f64;
    let se = (est.max(1.0 / n as f64) * (1.0 - est) / n as f64).sqrt();
    DensityRow::new("level_crossing_site", k, n, est, se, theta.powi(k as i32) / 2.0, Relation::Ge, false)
}

/// Exact per-site probability of the event measured by
/// `level_crossing_density`: one of 2^{k-1}-1 anchor slots must be present.
pub fn level_crossing_closed_form(theta: f64, k: u32) -> f64 {
    let slots = (1i64 << (k - 1)) - 1;
    1.0 - (1.0 - simple_prob(theta, k)).powi(slots as i32)
}

/// Stage-2 deletions among stage-1 survivors, per class, against
/// 8 (1 - theta~)^{-1} 2^{-zeta m}.
pub fn stage2_rates(p: &FullParams, seeds: &[u64], window: Rect, cutoff: u32) -> Vec<DensityRow> {
    let per_seed: Vec<Vec<(u32, u64, u64)>> = seeds
        .par_iter()
        .map(|&s| {
            let env = FullEnvironment::build(s, p, window, cutoff).expect("window within limits");
            env.thinning
                .report()
                .per_class
                .iter()
                .map(|(&m, c)| (m, (c.raw - c.stage1_deleted) as u64, c.stage2_deleted as u64))
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for m in 1..=cutoff {
        let (n, d) = per_seed.iter().flatten().filter(|r| r.0 == m).fold((0, 0), |a, r| (a.0 + r.1, a.1 + r.2));
        if n == 0 {
            continue;
        }
        let bound = 8.0 / (1.0 - p.thetatilde()) * 2f64.powf(-p.zeta() * m as f64);
        rows.push(DensityRow::binomial("stage2_deletion_rate", m, d, n, bound, Relation::Le, true));
    }
    rows
}

pub fn simple_density_checks(p: &SimpleParams, seeds: &[u64], ks: &[u32]) -> DensityReport {
    let mut rows = Vec::new();
    for &k in ks {
        rows.push(bond_membership(seeds, p.theta, k));
        let region = Rect::new(0, 0, 63, 63);
        let few: Vec<u64> = seeds.iter().copied().take(64).collect();
        rows.push(anchor_rate(&few, Family::Diagonal(DiagOrientation::SwNe), k, simple_prob(p.theta, k), region));
        if k >= 2 {
            let mut row = level_crossing_density(&few, p.theta, k, 256);
            row.name = "level_crossing_site".into();
            rows.push(row);
            let exact = level_crossing_closed_form(p.theta, k);
            let last = rows.last().unwrap().clone();
            rows.push(DensityRow::new("level_crossing_site_exact", k, last.trials, last.estimate, last.stderr, exact, Relation::Eq, true));
        }
    }
    DensityReport { rows }
}

pub fn full_density_checks(p: &FullParams, seeds: &[u64], ks: &[u32]) -> DensityReport {
    let mut rows = Vec::new();
    let few: Vec<u64> = seeds.iter().copied().take(128).collect();
    for &k in ks {
        let region = Rect::new(0, 0, 127, 127);
        rows.push(anchor_rate(&few, Family::ZIGZAG[0], k, zigzag_prob(p.theta(), k), region));
        rows.push(anchor_rate(&few, Family::Horizontal, k, hv_prob(p.thetatilde(), k), region));
    }
    let few: Vec<u64> = seeds.iter().copied().take(8).collect();
    rows.extend(stage2_rates(p, &few, Rect::centered(96), 8));
    DensityReport { rows }
}
