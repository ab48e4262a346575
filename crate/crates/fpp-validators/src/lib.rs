//! Finite-window checks of the hard invariants of a generated environment.
//!
//! Every check scans the window exhaustively except the path bound, which
//! samples a fixed number of seeded self-avoiding paths. Failing checks carry
//! the smallest offending object found.

use fpp_env::hash::hash_key;
use fpp_env::{bond_marks, Bond, Highway, Rect, Site};
use fpp_field::identities::{hv_slowdown_bound, hv_sum};
use fpp_field::{slow_threshold, BondField, BondType, FullEnvironment, SimpleEnvironment, SLOW_CORE_TENTHS};
use fpp_params::ModelParams;
use fpp_thinning::{fully_cross_or_apart, stage2_witness, GridIndex, STAGE1_REACH};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

pub const DEFAULT_PATHS: usize = 10_000;
pub const MAX_PATH_BONDS: usize = 200;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub what: String,
    pub highways: Vec<Highway>,
    pub bonds: Vec<Bond>,
    pub sites: Vec<Site>,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: char,
    pub name: String,
    pub passed: bool,
    pub examined: usize,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
}

impl Check {
    fn new(id: char, name: &str, examined: usize, failures: usize, counterexample: Option<Counterexample>) -> Self {
        Check { id, name: name.into(), passed: failures == 0, examined, failures, counterexample }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub model: String,
    pub seed: u64,
    pub window: Rect,
    pub cutoff: u32,
    pub fingerprint: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, id: char) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn fnv(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

/// Hash of parameters, seed, window, cutoff and the final highway lists.
pub fn full_fingerprint(env: &FullEnvironment) -> u64 {
    let params = ModelParams::Full(env.params.clone()).fingerprint();
    let body = serde_json::to_vec(&(params, env.seed, env.window, env.cutoff, env.zigzags(), &env.hv)).expect("serializes");
    fnv(&body)
}

pub fn simple_fingerprint(env: &SimpleEnvironment) -> u64 {
    let params = ModelParams::Simple(env.params.clone()).fingerprint();
    let body = serde_json::to_vec(&(params, env.seed, env.window, env.cutoff, &env.diagonals)).expect("serializes");
    fnv(&body)
}

fn pair_key(d: i64, a: &Highway, b: &Highway) -> (i64, Site, Site) {
    (d, a.anchor.min(b.anchor), a.anchor.max(b.anchor))
}

fn highway_key(h: &Highway) -> (u32, Site, u32) {
    (h.length, h.anchor, h.class)
}

/// Pairs `(i, j)` with `i < j` that are within `reach` in d1 and satisfy `pred`.
fn scan_pairs(hs: &[Highway], reach: i64, pred: impl Fn(&Highway, &Highway) -> bool + Sync) -> Vec<(usize, usize)> {
    let mut index = GridIndex::new();
    for (i, h) in hs.iter().enumerate() {
        index.insert(i, h);
    }
    (0..hs.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut cand = Vec::new();
            index.near_path(&hs[i], reach, &mut cand);
            cand.sort_unstable();
            cand.dedup();
            let pred = &pred;
            cand.into_iter().filter(move |&j| j > i && pred(&hs[i], &hs[j])).map(move |j| (i, j))
        })
        .collect()
}

/// (a) same-orientation zigzags at d1 >= 23, in the stage-1 and the final
/// configuration.
fn check_separation(env: &FullEnvironment) -> Check {
    let mut examined = 0;
    let mut bad: Vec<(i64, Highway, Highway)> = Vec::new();
    for hs in [&env.thinning.stage1.highways, &env.thinning.stage3.highways] {
        examined += hs.len();
        for (i, j) in scan_pairs(hs, STAGE1_REACH, |a, b| a.orient == b.orient && a.dist(b) <= STAGE1_REACH) {
            bad.push((hs[i].dist(&hs[j]), hs[i], hs[j]));
        }
    }
    let ce = bad.iter().min_by_key(|(d, a, b)| pair_key(*d, a, b)).map(|(d, a, b)| Counterexample {
        what: "same-orientation pair closer than 23".into(),
        highways: vec![*a, *b],
        value: *d as f64,
        bound: (STAGE1_REACH + 1) as f64,
        ..Default::default()
    });
    Check::new('a', "stage-1 separation", examined, bad.len(), ce)
}

/// (b) no stage-2 survivor shares a bond with an HV highway at or above its
/// deletion threshold.
fn check_stage2(env: &FullEnvironment) -> Check {
    let p = &env.params;
    let mut examined = 0;
    let mut bad = Vec::new();
    for hs in [&env.thinning.stage2.highways, &env.thinning.stage3.highways] {
        examined += hs.len();
        bad.extend(hs.par_iter().filter_map(|h| stage2_witness(h, &env.hv_map, p).map(|(b, c)| (b, *h, c))).collect::<Vec<_>>());
    }
    let ce = bad.iter().min_by_key(|(b, h, _)| (*b, highway_key(h))).map(|(b, h, c)| Counterexample {
        what: format!("class-{} zigzag shares a bond with a class-{c} HV highway", h.class),
        highways: vec![*h],
        bonds: vec![*b],
        value: *c as f64,
        bound: p.stage2_threshold(h.class) as f64,
        ..Default::default()
    });
    Check::new('b', "stage-2 forbidden sharing", examined, bad.len(), ce)
}

/// (c) opposite-orientation final zigzags fully cross or sit at d1 >= 2.
fn check_crossings(env: &FullEnvironment) -> Check {
    let hs = &env.thinning.stage3.highways;
    let bad = scan_pairs(hs, 1, |a, b| a.orient != b.orient && !fully_cross_or_apart(a, b));
    let ce = bad.iter().map(|&(i, j)| (hs[i].dist(&hs[j]), hs[i], hs[j])).min_by_key(|(d, a, b)| pair_key(*d, a, b)).map(|(d, a, b)| Counterexample {
        what: "opposite-orientation pair neither fully crossing nor at d1 >= 2".into(),
        highways: vec![a, b],
        value: d as f64,
        bound: 2.0,
        ..Default::default()
    });
    Check::new('c', "stage-3 cross-or-apart", hs.len(), bad.len(), ce)
}

fn stored_tenths(field: &BondField, b: Bond) -> i64 {
    field.cost(b).map_or(i64::MAX / 4, |c| c.tenths)
}

/// (d) compensated sums over every HV highway lying in the field.
fn check_compensation(env: &FullEnvironment, field: &BondField) -> Check {
    let rows: Vec<(Highway, i64, i64, bool)> = env
        .hv
        .par_iter()
        .filter_map(|h| {
            let s = hv_sum(field, h)?;
            let stored: i64 = h.bonds().map(|b| stored_tenths(field, b)).sum();
            let target = s.target();
            let mut ok = s.core_within_bound() && (!s.qualifies || s.core_exact());
            // without slow bonds the stored times are the compensated ones
            if s.slow_free {
                ok &= stored == s.core_tenths;
            }
            let shown = if s.slow_free { stored } else { s.core_tenths };
            Some((*h, shown, target, ok))
        })
        .collect();
    let bad: Vec<_> = rows.iter().filter(|r| !r.3).collect();
    let ce = bad.iter().min_by_key(|r| highway_key(&r.0)).map(|(h, sum, target, _)| Counterexample {
        what: "HV highway whose alpha* sum leaves 0.9|H| (exact for hv-only ends, within 0.4 otherwise)".into(),
        highways: vec![*h],
        value: *sum as f64 / 10.0,
        bound: *target as f64 / 10.0,
        ..Default::default()
    });
    Check::new('d', "compensation identities", rows.len(), bad.len(), ce)
}

/// Seeded self-avoiding path in the field. Odd-numbered paths prefer the
/// cheapest available bond, which drives them along zigzags.
pub fn random_path(field: &BondField, seed: u64, i: u64) -> Vec<Site> {
    let r = field.rect;
    let h = |w: u64| hash_key(seed, &[0x9a7e_u64, i, w]);
    let start = r.site_at((h(0) % r.area()) as usize);
    let len = 1 + (h(1) % MAX_PATH_BONDS as u64) as usize;
    let greedy = i % 2 == 1;
    let mut path = vec![start];
    let mut seen: HashSet<Site> = HashSet::from([start]);
    for step in 0..len as u64 {
        let c = *path.last().unwrap();
        let mut next: Vec<(i64, Site)> = [(1, 0), (0, 1), (-1, 0), (0, -1)]
            .iter()
            .map(|&(dx, dy)| c.offset(dx, dy))
            .filter(|n| r.contains(*n) && !seen.contains(n))
            .map(|n| (stored_tenths(field, Bond::between(c, n).unwrap()), n))
            .collect();
        if next.is_empty() {
            break;
        }
        let u = h(2 + step);
        if greedy && u % 4 != 0 {
            next.sort();
            next.truncate(next.iter().filter(|x| x.0 == next[0].0).count());
        }
        let n = next[(u >> 8) as usize % next.len()].1;
        seen.insert(n);
        path.push(n);
    }
    path
}

/// Shortest contiguous subpath whose tenths sum is below 7n - 2.
fn shrink_path(path: &[Site], tenths: &[i64]) -> Option<(Vec<Site>, i64)> {
    let mut pre = vec![0i64];
    for t in tenths {
        pre.push(pre.last().unwrap() + t);
    }
    for n in 1..=tenths.len() {
        for a in 0..=tenths.len() - n {
            let s = pre[a + n] - pre[a];
            if s < 7 * n as i64 - 2 {
                return Some((path[a..=a + n].to_vec(), s));
            }
        }
    }
    None
}

/// (e) Sum of alpha* along random self-avoiding paths is at least 0.7|G| - 0.2,
/// both for the stored times and for the compensated ones.
fn check_paths(field: &BondField, seed: u64, paths: usize) -> Check {
    let bad: Vec<(Vec<Site>, i64)> = (0..paths as u64)
        .into_par_iter()
        .filter_map(|i| {
            let path = random_path(field, seed, i);
            let bonds: Vec<Bond> = path.windows(2).map(|w| Bond::between(w[0], w[1]).unwrap()).collect();
            let stored: Vec<i64> = bonds.iter().map(|&b| stored_tenths(field, b)).collect();
            let core: Vec<i64> = bonds.iter().map(|&b| field.core_tenths(b).map_or(i64::MAX / 4, |t| t as i64)).collect();
            shrink_path(&path, &stored).or_else(|| shrink_path(&path, &core))
        })
        .collect();
    let ce = bad.iter().min_by_key(|(p, _)| (p.len(), p[0])).map(|(p, s)| Counterexample {
        what: "path with alpha* sum below 0.7|G| - 0.2".into(),
        sites: p.clone(),
        value: *s as f64 / 10.0,
        bound: 0.7 * (p.len() - 1) as f64 - 0.2,
        ..Default::default()
    });
    Check::new('e', "path lower bound", paths, bad.len(), ce)
}

/// (f) 0 <= sigma <= 0.2 on every bond.
fn check_sigma(field: &BondField) -> Check {
    let bonds: Vec<Bond> = field.bonds().collect();
    let bad: Vec<(Bond, f64)> = bonds.par_iter().filter_map(|&b| field.cost(b).map(|c| (b, c.sigma))).filter(|(_, s)| !(0.0..=0.2).contains(s)).collect();
    let ce = bad.iter().min_by_key(|(b, _)| *b).map(|(b, s)| Counterexample {
        what: "bond with sigma outside [0, 0.2]".into(),
        bonds: vec![*b],
        value: *s,
        bound: 0.2,
        ..Default::default()
    });
    Check::new('f', "sigma range", bonds.len(), bad.len(), ce)
}

/// (g) Every bond carries exactly the type family, classes, slow flag and
/// stored time implied by an independent reading of the highway lists.
fn check_taxonomy(env: &FullEnvironment, field: &BondField) -> Check {
    let r = field.rect.expand(2);
    let mut zig: HashMap<Bond, u32> = HashMap::new();
    let mut zig_sites: HashSet<Site> = HashSet::new();
    for h in env.zigzags().iter().filter(|h| h.bbox().intersects(&r)) {
        zig_sites.extend(h.sites().filter(|s| r.contains(*s)));
        for b in h.bonds() {
            let e = zig.entry(b).or_default();
            *e = (*e).max(h.class);
        }
    }
    let mut hv: HashMap<Bond, u32> = HashMap::new();
    for h in env.hv.iter().filter(|h| h.bbox().intersects(&r)) {
        for b in h.bonds() {
            let e = hv.entry(b).or_default();
            *e = (*e).max(h.class);
        }
    }
    let bonds: Vec<Bond> = field.bonds().collect();
    let bad: Vec<(Bond, String)> = bonds
        .par_iter()
        .filter_map(|&b| {
            let rec = field.record(b)?;
            let kz = zig.get(&b).copied().unwrap_or(0);
            let kh = hv.get(&b).copied().unwrap_or(0).min(255);
            let (p, q) = b.ends();
            let family_ok = if kz > 0 {
                rec.ty.is_zigzag()
            } else if zig_sites.contains(&p) || zig_sites.contains(&q) {
                rec.ty.is_boundary()
            } else if kh > 0 {
                rec.ty == BondType::HvOnly
            } else {
                rec.ty == BondType::Backroad
            };
            let slow = bond_marks(env.seed, b).1 <= slow_threshold(kz, kh);
            let want = if slow { SLOW_CORE_TENTHS } else { rec.ty.core_tenths(kh > 0) };
            let problem = if !family_ok {
                format!("type {} inconsistent with the highway lists", rec.ty.label())
            } else if rec.k_zig != kz.min(255) || rec.k_hv != kh {
                format!("classes ({}, {}) recorded, ({kz}, {kh}) expected", rec.k_zig, rec.k_hv)
            } else if rec.slow != slow {
                "slow flag disagrees with the bond mark".into()
            } else if rec.alpha_star_tenths != want {
                format!("stored alpha* {} tenths, type implies {want}", rec.alpha_star_tenths)
            } else {
                return None;
            };
            Some((b, problem))
        })
        .collect();
    let ce = bad.iter().min_by_key(|(b, _)| *b).map(|(b, why)| Counterexample { what: why.clone(), bonds: vec![*b], ..Default::default() });
    Check::new('g', "taxonomy partition", bonds.len(), bad.len(), ce)
}

/// (h) per-highway HV slowdown bound. Applied to every class meeting the
/// window, not only classes >= k0, since it needs only the length cap.
fn check_hv_slowdown(env: &FullEnvironment) -> Check {
    let p = &env.params;
    let rows: Vec<(Highway, f64, f64)> = env
        .hv
        .par_iter()
        .filter(|h| h.meets(&env.window))
        .map(|h| {
            let (lhs, rhs) = hv_slowdown_bound(h, p.etatilde, env.seed);
            (*h, lhs, rhs)
        })
        .collect();
    let bad: Vec<_> = rows.iter().filter(|r| r.1 > r.2).collect();
    let ce = bad.iter().min_by_key(|r| highway_key(&r.0)).map(|(h, l, r)| Counterexample {
        what: "HV slowdown sum above 1.6 (2 etatilde)^k".into(),
        highways: vec![*h],
        value: *l,
        bound: *r,
        ..Default::default()
    });
    Check::new('h', "HV slowdown bound", rows.len(), bad.len(), ce)
}

/// All checks over a full-model environment and a field built from it.
pub fn validate_environment(env: &FullEnvironment, field: &BondField) -> ValidationReport {
    validate_environment_with(env, field, DEFAULT_PATHS)
}

pub fn validate_environment_with(env: &FullEnvironment, field: &BondField, paths: usize) -> ValidationReport {
    let mut checks: Vec<Check> = (0..8)
        .into_par_iter()
        .map(|i| match i {
            0 => check_separation(env),
            1 => check_stage2(env),
            2 => check_crossings(env),
            3 => check_compensation(env, field),
            4 => check_paths(field, env.seed, paths),
            5 => check_sigma(field),
            6 => check_taxonomy(env, field),
            _ => check_hv_slowdown(env),
        })
        .collect();
    checks.sort_by_key(|c| c.id);
    ValidationReport {
        model: "full".into(),
        seed: env.seed,
        window: env.window,
        cutoff: env.cutoff,
        fingerprint: format!("{:016x}", full_fingerprint(env)),
        checks,
    }
}

/// Simple model: every bond time matches its recomputation from the diagonals.
pub fn validate_simple(env: &SimpleEnvironment, field: &BondField) -> ValidationReport {
    let mut class: HashMap<Bond, u32> = HashMap::new();
    for h in &env.diagonals {
        for b in h.bonds() {
            let e = class.entry(b).or_default();
            *e = (*e).max(h.class);
        }
    }
    let bonds: Vec<Bond> = field.bonds().collect();
    let bad: Vec<(Bond, f64, f64)> = bonds
        .par_iter()
        .filter_map(|&b| {
            let got = field.tau(b)?;
            let want = if !b.dir.is_diagonal() {
                1.0
            } else {
                match class.get(&b) {
                    Some(&k) => std::f64::consts::SQRT_2 * (1.0 + env.params.eta.powi(k as i32)),
                    None => 3.0,
                }
            };
            (got != want).then_some((b, got, want))
        })
        .collect();
    let ce = bad.iter().min_by_key(|r| r.0).map(|(b, got, want)| Counterexample {
        what: "bond time differs from its diagonal class".into(),
        bonds: vec![*b],
        value: *got,
        bound: *want,
        ..Default::default()
    });
    ValidationReport {
        model: "simple".into(),
        seed: env.seed,
        window: env.window,
        cutoff: env.cutoff,
        fingerprint: format!("{:016x}", simple_fingerprint(env)),
        checks: vec![Check::new('s', "simple bond times", bonds.len(), bad.len(), ce)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shrink_finds_the_shortest_window() {
        let path: Vec<Site> = (0..6).map(|x| Site::new(x, 0)).collect();
        assert!(shrink_path(&path, &[7, 7, 7, 7, 7]).is_none());
        // 0.5 + 0.5 on two bonds is 1.0 < 1.2
        let (p, s) = shrink_path(&path, &[7, 10, 5, 5, 10]).unwrap();
        assert_eq!((p.len(), s), (3, 10));
        assert_eq!(p[0], Site::new(2, 0));
    }

    #[test]
    fn fnv_is_stable() {
        assert_eq!(fnv(b""), 0xcbf29ce484222325);
        assert_ne!(fnv(b"a"), fnv(b"b"));
    }
}
