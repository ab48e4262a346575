//! The corridor integer program: exhaustive minimization over bounded
//! nonnegative integer tuples, and the closed-form minimizer.
//!
//! Objective values are kept as `tenths + eta_coef * eta_units` where the
//! first part carries the 0.9/0.7/0.2/-0.4 coefficients exactly and the
//! second counts the `0.1 eta^{k-1}` terms.

use fpp_env::hash::{hash_key, uniform};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpInstance {
    /// s - Y_N
    pub s: i64,
    /// d - u (or v - u)
    pub d: i64,
    pub g: i64,
    pub j: i64,
    pub k: u32,
    pub eta: f64,
}

impl LpInstance {
    /// The same program with the vertical demand dropped.
    pub fn case1(v_minus_u: i64, g: i64, j: i64, k: u32, eta: f64) -> Self {
        LpInstance { s: 0, d: v_minus_u, g, j, k, eta }
    }

    pub fn eta_coef(&self) -> f64 {
        self.eta.powi(self.k as i32 - 1)
    }

    /// Largest right-hand side; no minimizer needs more mass in any variable.
    pub fn bound(&self) -> i64 {
        (self.d + self.s).max(self.s + self.g).max(self.g).max(self.j).max(self.s)
    }

    pub fn is_feasible(&self) -> bool {
        self.s >= 0 && self.d >= 0 && self.g >= 0 && self.j >= 0 && self.j <= self.s + self.g && self.k >= 1
    }
}

/// The twelve counts; `zne`/`znw` are indexed N, E, S, W.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpVars {
    pub be: i64,
    pub bw: i64,
    pub bn: i64,
    pub bs: i64,
    pub zne: [i64; 4],
    pub znw: [i64; 4],
}

const N: usize = 0;
const E: usize = 1;
const S: usize = 2;
const W: usize = 3;

impl LpVars {
    pub fn satisfies(&self, p: &LpInstance) -> bool {
        let all = [self.be, self.bw, self.bn, self.bs].into_iter().chain(self.zne).chain(self.znw);
        all.clone().all(|v| v >= 0)
            && self.zne[E] + self.znw[E] - self.zne[W] - self.znw[W] + self.be - self.bw == p.d + p.s
            && self.zne[N] - self.znw[S] - self.zne[S] + self.znw[N] + self.bn - self.bs == p.s
            && self.zne[N] + self.znw[N] + self.bn == p.s + p.g
            && self.zne[S] + self.znw[S] + self.bs == p.g
            && self.znw[N] + self.bn == p.j
    }

    pub fn objective(&self) -> LpValue {
        let b = self.be + self.bw + self.bn + self.bs;
        let z: i64 = self.zne.iter().chain(&self.znw).sum();
        let d = (self.zne[E] - self.zne[N]).abs() + (self.zne[W] - self.zne[S]).abs() + (self.znw[E] - self.znw[S]).abs() + (self.znw[W] - self.znw[N]).abs();
        LpValue { tenths: 9 * b + 7 * z + 2 * d - 4, eta_units: self.zne[N] + self.zne[E] }
    }
}

/// `tenths / 10 + 0.1 * eta^{k-1} * eta_units`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LpValue {
    pub tenths: i64,
    pub eta_units: i64,
}

impl LpValue {
    pub fn value(self, eta_coef: f64) -> f64 {
        0.1 * (self.tenths as f64 + eta_coef * self.eta_units as f64)
    }

    /// Exact when the pairs agree; otherwise by value, then by tenths.
    pub fn cmp_with(self, o: LpValue, eta_coef: f64) -> Ordering {
        if self == o {
            return Ordering::Equal;
        }
        let d = (self.tenths - o.tenths) as f64 + eta_coef * (self.eta_units - o.eta_units) as f64;
        d.partial_cmp(&0.0).unwrap_or(Ordering::Equal).then(self.tenths.cmp(&o.tenths)).then(self.eta_units.cmp(&o.eta_units))
    }

    fn add(self, o: LpValue) -> LpValue {
        LpValue { tenths: self.tenths + o.tenths, eta_units: self.eta_units + o.eta_units }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum LpError {
    #[error("constraints admit no nonnegative solution (need 0 <= j <= s + g and nonnegative demands)")]
    Infeasible,
}

/// Minimum with the number of minimizers in the bounded box and one of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub min: LpValue,
    pub value: f64,
    pub minimizers: u64,
    pub representative: LpVars,
    pub bound: i64,
}

/// Running minimum with tie counting.
#[derive(Clone, Copy, Debug)]
struct Best<R: Copy> {
    v: LpValue,
    count: u64,
    rep: R,
}

fn offer<R: Copy>(slot: &mut Option<Best<R>>, v: LpValue, count: u64, rep: R, c: f64) {
    match slot {
        None => *slot = Some(Best { v, count, rep }),
        Some(b) => match v.cmp_with(b.v, c) {
            Ordering::Less => *b = Best { v, count, rep },
            Ordering::Equal => b.count += count,
            Ordering::Greater => {}
        },
    }
}

/// Cheapest way to split `total` between two variables each in `0..=bound`
/// with per-variable costs `f` and `h`; indexed by `total`.
fn pair_table(bound: i64, f: impl Fn(i64) -> LpValue, h: impl Fn(i64) -> LpValue, c: f64) -> Vec<Option<Best<(i64, i64)>>> {
    let mut t = vec![None; (2 * bound + 1) as usize];
    for a in 0..=bound {
        let fa = f(a);
        for b in 0..=bound {
            offer(&mut t[(a + b) as usize], fa.add(h(b)), 1, (a, b), c);
        }
    }
    t
}

fn lin(tenths: i64) -> LpValue {
    LpValue { tenths, eta_units: 0 }
}

/// Exhaustive minimum over all tuples with every count in `0..=bound()`.
///
/// The north counts are fixed by (`zne[N]`) or enumerated with (`znw[N]`,
/// `bn`) the last two constraints; the south triple is enumerated; the
/// east/west counts enter only through their sums, so each pair is folded
/// into a table before the final scan. `be`/`bw` are determined by the
/// first constraint up to adding equal mass to both, which only costs.
pub fn lp_bruteforce(p: &LpInstance) -> Result<LpSolution, LpError> {
    if !p.is_feasible() {
        return Err(LpError::Infeasible);
    }
    let c = p.eta_coef();
    let bd = p.bound();
    let a = p.s + p.g - p.j;
    let demand = p.d + p.s;
    // east pair: zne[E], znw[E] keyed by znw[S]
    let east: Vec<_> = (0..=p.g)
        .map(|zs_nw| {
            pair_table(bd, |x| LpValue { tenths: 7 * x + 2 * (x - a).abs(), eta_units: x }, |y| lin(7 * y + 2 * (y - zs_nw).abs()), c)
        })
        .collect();
    // fold the B_E/B_W balance into the east table: F[w] over the west sum
    let folded: Vec<Vec<Option<Best<(i64, i64, i64)>>>> = east
        .iter()
        .map(|tab| {
            let mut f = vec![None; (2 * bd + 1) as usize];
            for (w, slot) in f.iter_mut().enumerate() {
                for (e, cell) in tab.iter().enumerate() {
                    let Some(cell) = cell else { continue };
                    let r = demand - e as i64 + w as i64;
                    if r.abs() > bd {
                        continue;
                    }
                    offer(slot, cell.v.add(lin(9 * r.abs())), cell.count, (cell.rep.0, cell.rep.1, r), c);
                }
            }
            f
        })
        .collect();
    let mut best: Option<Best<LpVars>> = None;
    for zn_nw in 0..=p.j {
        let bn = p.j - zn_nw;
        let north = LpValue { tenths: 7 * a + 7 * zn_nw + 9 * bn - 4, eta_units: a };
        for zs_ne in 0..=p.g {
            // west pair: zne[W], znw[W]
            let west = pair_table(bd, |u| lin(7 * u + 2 * (u - zs_ne).abs()), |v| lin(7 * v + 2 * (v - zn_nw).abs()), c);
            for zs_nw in 0..=p.g - zs_ne {
                let bs = p.g - zs_ne - zs_nw;
                let south = lin(7 * zs_ne + 7 * zs_nw + 9 * bs);
                let base = north.add(south);
                for (w, wc) in west.iter().enumerate() {
                    let (Some(wc), Some(fc)) = (wc, &folded[zs_nw as usize][w]) else { continue };
                    let (x, y, r) = fc.rep;
                    let vars = LpVars {
                        be: r.max(0),
                        bw: (-r).max(0),
                        bn,
                        bs,
                        zne: [a, x, zs_ne, wc.rep.0],
                        znw: [zn_nw, y, zs_nw, wc.rep.1],
                    };
                    offer(&mut best, base.add(wc.v).add(fc.v), wc.count * fc.count, vars, c);
                }
            }
        }
    }
    let b = best.ok_or(LpError::Infeasible)?;
    Ok(LpSolution { min: b.v, value: b.v.value(c), minimizers: b.count, representative: b.rep, bound: bd })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpCase {
    /// 2g - j <= d - u; the minimizer sits at (s - Y) + g - j.
    TwoA,
    /// 2g - j > d - u with a positive minimizer.
    TwoB,
    /// 2g - j > d - u with the minimizer clamped at 0.
    TwoBZero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub case: LpCase,
    pub z: i64,
    pub min: LpValue,
    pub value: f64,
}

/// Reduced objective after the mass-shifting eliminations, with
/// `zne[E] = z` and `znw[E] = (d-u)+(s-Y)-z`.
pub fn reduced_objective(p: &LpInstance, z: i64) -> LpValue {
    let a = p.s + p.g - p.j;
    LpValue {
        tenths: 7 * (p.d + 2 * p.s + 2 * p.g) + 2 * ((z - a).abs() + (p.d + p.s - z - p.g).abs() + p.j) - 4,
        eta_units: a + z,
    }
}

pub fn lp_closed_form(p: &LpInstance) -> Result<ClosedForm, LpError> {
    if !p.is_feasible() {
        return Err(LpError::Infeasible);
    }
    let a = p.s + p.g - p.j;
    let over = p.s + p.d - p.g;
    let z = a.min(over.max(0));
    let case = if 2 * p.g - p.j <= p.d {
        LpCase::TwoA
    } else if over > 0 {
        LpCase::TwoB
    } else {
        LpCase::TwoBZero
    };
    let min = reduced_objective(p, z);
    Ok(ClosedForm { case, z, min, value: min.value(p.eta_coef()) })
}

/// Case 2A lower bound 0.9(d-u) + 1.4(s-Y) + 0.2 eta^{k-1} (s-Y) - 0.4.
pub fn case_2a_floor(p: &LpInstance) -> f64 {
    0.9 * p.d as f64 + 1.4 * p.s as f64 + 0.2 * p.eta_coef() * p.s as f64 - 0.4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpMismatch {
    pub instance: LpInstance,
    pub brute: LpValue,
    pub closed: LpValue,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LpSummary {
    pub trials: u64,
    pub matches: u64,
    pub case_counts: [u64; 3],
    /// Instances of the vertical-free variant among the trials.
    pub case1_trials: u64,
    pub max_eta_gap: f64,
    pub mismatches: Vec<LpMismatch>,
}

impl LpSummary {
    pub fn line(&self) -> String {
        format!("{}/{} exact matches", self.matches, self.trials)
    }
}

/// Deterministic random instances with demands in `0..=max_demand`; every
/// fifth instance is the vertical-free variant.
pub fn random_instance(seed: u64, i: u64, max_demand: i64) -> LpInstance {
    let draw = |slot: u64, n: i64| (hash_key(seed, &[0x1b, i, slot]) % (n as u64 + 1)) as i64;
    let (s, d, g) = (draw(0, max_demand), draw(1, max_demand), draw(2, max_demand));
    let k = 1 + draw(4, 11) as u32;
    let eta = 0.55 + 0.44 * uniform(seed, &[0x1b, i, 5]);
    if i % 5 == 4 {
        let j = draw(3, g);
        return LpInstance::case1(d, g, j, k, eta);
    }
    LpInstance { s, d, g, j: draw(3, s + g), k, eta }
}

/// Compares both evaluations on `trials` instances.
pub fn lp_verify(seed: u64, trials: u64, max_demand: i64) -> LpSummary {
    use rayon::prelude::*;
    let rows: Vec<(LpInstance, LpValue, ClosedForm, f64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let p = random_instance(seed, i, max_demand);
            let b = lp_bruteforce(&p).expect("generated instances are feasible");
            let c = lp_closed_form(&p).expect("generated instances are feasible");
            let gap = (p.eta_coef() * (b.min.eta_units - c.min.eta_units) as f64).abs() * 0.1;
            (p, b.min, c, gap)
        })
        .collect();
    let mut out = LpSummary { trials, ..Default::default() };
    for (p, b, c, gap) in rows {
        out.case_counts[c.case as usize] += 1;
        out.case1_trials += (p.s == 0) as u64;
        out.max_eta_gap = out.max_eta_gap.max(gap);
        if b.tenths == c.min.tenths && gap <= 1e-12 {
            out.matches += 1;
        } else if out.mismatches.len() < 32 {
            out.mismatches.push(LpMismatch { instance: p, brute: b, closed: c.min });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(s: i64, d: i64, g: i64, j: i64) -> LpInstance {
        LpInstance { s, d, g, j, k: 5, eta: 0.8 }
    }

    #[test]
    fn empty_instance() {
        let p = inst(0, 0, 0, 0);
        let b = lp_bruteforce(&p).unwrap();
        assert_eq!(b.min, LpValue { tenths: -4, eta_units: 0 });
        assert_eq!(b.minimizers, 1);
        assert_eq!(b.representative, LpVars::default());
        assert_eq!(lp_closed_form(&p).unwrap().min, b.min);
    }

    #[test]
    fn infeasible_is_explicit() {
        assert_eq!(lp_bruteforce(&inst(1, 0, 1, 3)), Err(LpError::Infeasible));
        assert_eq!(lp_closed_form(&inst(-1, 0, 0, 0)).unwrap_err(), LpError::Infeasible);
    }

    #[test]
    fn representative_is_feasible_and_attains_minimum() {
        for i in 0..200 {
            let p = random_instance(3, i, 6);
            let b = lp_bruteforce(&p).unwrap();
            assert!(b.representative.satisfies(&p), "{p:?} {:?}", b.representative);
            assert_eq!(b.representative.objective(), b.min);
        }
    }

    #[test]
    fn case_labels() {
        assert_eq!(lp_closed_form(&inst(2, 5, 1, 0)).unwrap().case, LpCase::TwoA);
        assert_eq!(lp_closed_form(&inst(3, 1, 3, 0)).unwrap().case, LpCase::TwoB);
        assert_eq!(lp_closed_form(&inst(2, 1, 3, 0)).unwrap().case, LpCase::TwoBZero);
    }

    #[test]
    fn value_ordering_uses_eta_weight() {
        let a = LpValue { tenths: 10, eta_units: 3 };
        let b = LpValue { tenths: 11, eta_units: 0 };
        assert_eq!(a.cmp_with(b, 0.2), Ordering::Less);
        assert_eq!(a.cmp_with(b, 0.5), Ordering::Greater);
        assert_eq!(a.cmp_with(a, 0.5), Ordering::Equal);
    }
}
