use crate::order::tree_order;
use crate::{CorridorResult, Violation, MAX_KEPT};
use fpp_env::{DiagOrientation, Highway, HighwayKind, Rect, Site};
use fpp_field::{BondField, SimpleEnvironment};
use fpp_geodesic::geodesic_tree;
use serde::{Deserialize, Serialize};

/// Detection result for the diagonal-highway model at one class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleReport {
    pub model: String,
    pub k: u32,
    pub seed: u64,
    pub window: Rect,
    pub cutoff: u32,
    /// min(x, y) on the level line.
    pub level: i64,
    pub c_over_r: f64,
    pub h1: Option<Highway>,
    pub h2: Option<Highway>,
    pub x1: Option<i64>,
    pub x2: Option<i64>,
    pub i_hat: bool,
    pub m_hat: bool,
    pub f_hat: bool,
    /// A highway of class >= k meeting the open region, when one exists.
    pub m_witness: Option<Highway>,
    /// Whether the inequalities behind the corridor conclusion hold at this k.
    pub premise: bool,
}

fn is_swne_diag(h: &Highway) -> bool {
    h.kind == HighwayKind::Diagonal && h.orient == Some(DiagOrientation::SwNe)
}

/// x-intercept on the positive horizontal axis.
fn a1_hit(h: &Highway) -> Option<i64> {
    let (a, l) = (h.anchor, h.length as i64);
    (a.x >= a.y && -a.y >= 0 && -a.y <= l).then_some(a.x - a.y)
}

fn a2_hit(h: &Highway) -> Option<i64> {
    let (a, l) = (h.anchor, h.length as i64);
    (a.y >= a.x && -a.x >= 0 && -a.x <= l).then_some(a.y - a.x)
}

/// Range of min(x, y) over the sites of `h` in the closed first quadrant.
fn min_range(h: &Highway) -> Option<(i64, i64)> {
    let (a, l) = (h.anchor, h.length as i64);
    let lo_i = (-a.x).max(-a.y).max(0);
    if lo_i > l {
        return None;
    }
    let f = |i: i64| (a.x + i).min(a.y + i);
    Some((f(lo_i), f(l)))
}

fn meets_level(h: &Highway, m: i64) -> bool {
    min_range(h).is_some_and(|(lo, hi)| lo <= m && m <= hi)
}

/// Sites of the open region: strictly inside the quadrant, below the level
/// line, and strictly between the two selected highways.
pub(crate) fn in_omega(level: i64, x1: i64, x2: i64, s: Site) -> bool {
    s.x > 0 && s.y > 0 && s.x.min(s.y) < level && s.x - s.y < x1 && s.y - s.x < x2
}

/// Corridor-conclusion inequalities at `k` for the observed crossings.
pub fn simple_premise(eta: f64, k: u32, level: i64, x1: i64, x2: i64) -> bool {
    let x = x1.max(x2) as f64;
    let gap = std::f64::consts::SQRT_2 * (eta.powi(k as i32 - 1) - eta.powi(k as i32)) * level as f64;
    eta.powi(k as i32) < std::f64::consts::SQRT_2 - 1.0 && x < (1u64 << (k - 1)) as f64 && gap > 2.0 * x
}

pub fn detect_simple_success(env: &SimpleEnvironment, k: u32) -> SimpleReport {
    assert!(k >= 1);
    let p = &env.params;
    let level = (1i64 << (k - 1)) + 1;
    let c_over_r = p.c_big / p.scales().r(k as f64);
    let qualifying = || env.diagonals.iter().filter(|h| is_swne_diag(h) && h.class >= k && meets_level(h, level));
    let pick = |hit: fn(&Highway) -> Option<i64>| {
        qualifying().filter_map(|h| hit(h).map(|x| (x, *h))).min_by_key(|(x, h)| (*x, h.anchor, h.length, h.class))
    };
    let w1 = pick(a1_hit);
    let w2 = pick(a2_hit);
    let (x1, x2) = (w1.map(|w| w.0), w2.map(|w| w.0));
    let i_hat = matches!((x1, x2), (Some(a), Some(b)) if (a.max(b) as f64) <= c_over_r);
    let m_witness = match (x1, x2) {
        (Some(x1), Some(x2)) => env
            .diagonals
            .iter()
            .filter(|h| is_swne_diag(h) && h.class >= k)
            .find(|h| {
                let d = h.anchor.x - h.anchor.y;
                if d >= x1 || -d >= x2 {
                    return false;
                }
                // min(x, y) must take a value in 1..level-1 inside the quadrant
                min_range(h).is_some_and(|(lo, hi)| lo.max(1) <= hi.min(level - 1))
            })
            .copied(),
        _ => None,
    };
    let m_hat = x1.is_some() && x2.is_some() && m_witness.is_none();
    let f_hat = i_hat && m_hat;
    let premise = f_hat && simple_premise(p.eta, k, level, x1.unwrap(), x2.unwrap());
    SimpleReport {
        model: "simple".into(),
        k,
        seed: env.seed,
        window: env.window,
        cutoff: env.cutoff,
        level,
        c_over_r,
        h1: w1.map(|w| w.1),
        h2: w2.map(|w| w.1),
        x1,
        x2,
        i_hat,
        m_hat,
        f_hat,
        m_witness,
        premise,
    }
}

/// Checks that every geodesic from the origin to a first-quadrant target
/// outside the axes and the region starts along an axis up to the
/// selected crossing. The field must cover the closed first quadrant of
/// the window.
pub fn corridor_check_simple(report: &SimpleReport, field: &BondField) -> CorridorResult {
    let (Some(x1), Some(x2)) = (report.x1, report.x2) else {
        return CorridorResult::default();
    };
    let o = Site::new(0, 0);
    let t = geodesic_tree(field, o, None).expect("origin in field");
    let r = field.rect;
    let u = Site::new(x1, 0);
    let v = Site::new(0, x2);
    let straight = |end: Site, step: (i64, i64), n: i64| {
        t.path_to(end).is_some_and(|p| p.len() as i64 == n + 1 && p.iter().enumerate().all(|(i, s)| *s == o.offset(step.0 * i as i64, step.1 * i as i64)))
    };
    let mut marks = Vec::new();
    if r.contains(u) && straight(u, (1, 0), x1) {
        marks.push(r.index(u));
    }
    if r.contains(v) && straight(v, (0, 1), x2) {
        marks.push(r.index(v));
    }
    let mut via = vec![false; t.parent.len()];
    for i in tree_order(&t) {
        let p = t.parent[i];
        via[i] = marks.contains(&i) || (p != u32::MAX && via[p as usize]);
    }
    let mut res = CorridorResult::default();
    for (i, s) in r.sites().enumerate() {
        if s.x < 0 || s.y < 0 || s.x == 0 || s.y == 0 {
            continue;
        }
        if in_omega(report.level, x1, x2, s) {
            res.skipped_inside += 1;
            continue;
        }
        res.targets += 1;
        if !via[i] {
            res.violation_count += 1;
            if res.violations.len() < MAX_KEPT {
                let path = t.path_to(s).unwrap_or_default();
                let exit = path.iter().copied().find(|&q| q.x != 0 && q.y != 0 && !in_omega(report.level, x1, x2, q));
                res.violations.push(Violation { target: s, exit, prefix: path.into_iter().take(12).collect(), note: "does not follow an axis to the crossing".into() });
            }
        }
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpp_params::SimpleParams;

    fn params() -> SimpleParams {
        SimpleParams { theta: 0.8, eta: 0.85, c_big: 2.0, k0: 22 }
    }

    fn diag(k: u32, ax: i64, ay: i64) -> Highway {
        Highway::diagonal(DiagOrientation::SwNe, k, Site::new(ax, ay), (1 << k) - 1)
    }

    #[test]
    fn intercepts() {
        let h = diag(3, 4, -2);
        assert_eq!(a1_hit(&h), Some(6));
        assert_eq!(a2_hit(&h), None);
        let h = diag(3, -5, -2);
        assert_eq!(a2_hit(&h), Some(3));
        assert_eq!(min_range(&h), Some((0, 2)));
    }

    #[test]
    fn empty_environment_has_no_witness() {
        let env = SimpleEnvironment::from_parts(0, &params(), Rect::new(-1, -1, 200, 200), 10, vec![]);
        let r = detect_simple_success(&env, 7);
        assert!(r.h1.is_none() && r.h2.is_none());
        assert!(!r.i_hat && !r.f_hat);
    }

    #[test]
    fn region_membership() {
        assert!(in_omega(65, 2, 3, Site::new(1, 1)));
        assert!(in_omega(65, 2, 3, Site::new(30, 29)));
        assert!(!in_omega(65, 2, 3, Site::new(30, 28)));
        assert!(!in_omega(65, 2, 3, Site::new(65, 66)));
        assert!(!in_omega(65, 2, 3, Site::new(0, 1)));
    }
}
