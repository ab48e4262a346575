use crate::order::tree_order;
use crate::{CorridorResult, Violation, MAX_KEPT};
use fpp_env::{bond_marks, Bond, DiagOrientation, Highway, HighwayKind, Rect, Site};
use fpp_field::{slow_threshold, BondField, FullEnvironment};
use fpp_geodesic::geodesic_tree;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

pub const H_LABELS: [&str; 4] = ["NE-L", "NE-U", "NW-L", "NW-U"];
pub const J_LABELS: [&str; 4] = ["N", "E", "S", "W"];

/// The NW construction is the NE one seen through the mirror x -> -x.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Frame {
    Ne,
    Nw,
}

impl Frame {
    fn map(self, s: Site) -> Site {
        match self {
            Frame::Ne => s,
            Frame::Nw => Site::new(-s.x, s.y),
        }
    }

    fn orient(self) -> DiagOrientation {
        match self {
            Frame::Ne => DiagOrientation::SwNe,
            Frame::Nw => DiagOrientation::SeNw,
        }
    }
}

/// Zigzag witness with the distance from 0 of its axis crossing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HWitness {
    pub highway: Highway,
    pub x: i64,
}

/// Straight witness with its signed offset from the axis it parallels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JWitness {
    pub highway: Highway,
    pub y: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    /// Indexed as `H_LABELS`.
    pub h: [Option<HWitness>; 4],
    /// Indexed as `J_LABELS`.
    pub j: [Option<JWitness>; 4],
}

fn spans(f: Frame, h: &Highway, gt: i64) -> bool {
    let mut up = false;
    let mut down = false;
    for s in h.sites().map(|s| f.map(s)) {
        up |= s.x >= 0 && s.y >= 0 && s.x.min(s.y) == gt;
        down |= s.x <= 0 && s.y <= 0 && (-s.x).min(-s.y) == gt;
    }
    up && down
}

fn lower_hit(f: Frame, h: &Highway) -> Option<i64> {
    h.sites().map(|s| f.map(s)).filter(|s| s.y == 0 && s.x >= 0).map(|s| s.x).min()
}

fn upper_hit(f: Frame, h: &Highway) -> Option<i64> {
    h.sites().map(|s| f.map(s)).filter(|s| s.x == 0 && s.y >= 0).map(|s| s.y).min()
}

fn tie_key(h: &Highway) -> (i64, i64, u32, u32) {
    (h.anchor.x, h.anchor.y, h.length, h.class)
}

/// Spanning zigzag witnesses from the stage-2 configuration and straight
/// witnesses from the HV configuration.
pub fn find_spanning_highways(env: &FullEnvironment, k: u32) -> Witnesses {
    let p = &env.params;
    let s = p.scales();
    let gt = (1i64 << k) + 4;
    let ell = 2.0 * p.c_big / s.r(k as f64);
    let mut w = Witnesses::default();
    for (fi, f) in [Frame::Ne, Frame::Nw].into_iter().enumerate() {
        let cand: Vec<&Highway> =
            env.thinning.stage2.highways.iter().filter(|h| h.orient == Some(f.orient()) && h.class >= k && spans(f, h, gt)).collect();
        for (li, hit) in [lower_hit as fn(Frame, &Highway) -> Option<i64>, upper_hit].into_iter().enumerate() {
            w.h[2 * fi + li] = cand
                .iter()
                .filter_map(|h| hit(f, h).map(|x| (x, **h)))
                .min_by_key(|(x, h)| (*x, tie_key(h)))
                .map(|(x, highway)| HWitness { highway, x });
        }
    }
    let covers = |lo: i64, len: u32| (lo as f64) <= -ell && (lo + len as i64) as f64 >= ell;
    let horiz = env.hv.iter().filter(|h| h.kind == HighwayKind::Horizontal && covers(h.anchor.x, h.length));
    let vert = env.hv.iter().filter(|h| h.kind == HighwayKind::Vertical && covers(h.anchor.y, h.length));
    let best = |it: &mut dyn Iterator<Item = (i64, &Highway)>| it.min_by_key(|(d, h)| (*d, tie_key(h))).map(|(_, h)| *h);
    w.j[0] = best(&mut horiz.clone().filter(|h| h.anchor.y > 0).map(|h| (h.anchor.y, h))).map(|h| JWitness { highway: h, y: h.anchor.y });
    w.j[2] = best(&mut horiz.filter(|h| h.anchor.y < 0).map(|h| (-h.anchor.y, h))).map(|h| JWitness { highway: h, y: h.anchor.y });
    w.j[1] = best(&mut vert.clone().filter(|h| h.anchor.x > 0).map(|h| (h.anchor.x, h))).map(|h| JWitness { highway: h, y: h.anchor.x });
    w.j[3] = best(&mut vert.filter(|h| h.anchor.x < 0).map(|h| (-h.anchor.x, h))).map(|h| JWitness { highway: h, y: h.anchor.x });
    w
}

/// Membership tests for the regions built from a set of witnesses.
#[derive(Clone, Debug)]
pub struct FrameGeometry {
    pub g: i64,
    pub c_over_r: f64,
    pub lambda: f64,
    /// Per frame: x + y -> y - x of the lower and upper witness (mapped).
    lower: [HashMap<i64, i64>; 2],
    upper: [HashMap<i64, i64>; 2],
}

impl FrameGeometry {
    /// `None` unless all four zigzag witnesses exist.
    pub fn new(env: &FullEnvironment, k: u32, w: &Witnesses) -> Option<Self> {
        let p = &env.params;
        let profile = |f: Frame, h: &Highway| h.sites().map(|s| f.map(s)).map(|s| (s.x + s.y, s.y - s.x)).collect::<HashMap<_, _>>();
        let hs: Vec<Highway> = w.h.iter().map(|h| h.map(|h| h.highway)).collect::<Option<_>>()?;
        Some(FrameGeometry {
            g: 1 << k,
            c_over_r: p.c_big / p.scales().r(k as f64),
            lambda: p.mu.powi(-(k as i32)),
            lower: [profile(Frame::Ne, &hs[0]), profile(Frame::Nw, &hs[2])],
            upper: [profile(Frame::Ne, &hs[1]), profile(Frame::Nw, &hs[3])],
        })
    }

    fn band(&self, fi: usize, s: Site, strict: bool) -> bool {
        let f = [Frame::Ne, Frame::Nw][fi];
        let q = f.map(s);
        let (t, u) = (q.x + q.y, q.y - q.x);
        match (self.lower[fi].get(&t), self.upper[fi].get(&t)) {
            (Some(&lo), Some(&hi)) => {
                if strict {
                    lo < u && u < hi
                } else {
                    lo <= u && u <= hi
                }
            }
            _ => false,
        }
    }

    fn capped(&self, fi: usize, s: Site, strict: bool) -> bool {
        let q = [Frame::Ne, Frame::Nw][fi].map(s);
        let g = self.g;
        if strict {
            !(q.x >= g && q.y >= g) && !(q.x <= -g && q.y <= -g)
        } else {
            !(q.x > g && q.y > g) && !(q.x < -g && q.y < -g)
        }
    }

    pub fn in_omega_frame(&self, fi: usize, s: Site) -> bool {
        self.band(fi, s, true) && self.capped(fi, s, true)
    }

    pub fn in_omega(&self, s: Site) -> bool {
        self.in_omega_frame(0, s) || self.in_omega_frame(1, s)
    }

    /// Open intersection of the two frames' regions.
    pub fn in_near_rect(&self, s: Site) -> bool {
        self.in_omega_frame(0, s) && self.in_omega_frame(1, s)
    }

    fn in_near_closure(&self, s: Site) -> bool {
        (0..2).all(|fi| self.band(fi, s, false) && self.capped(fi, s, false))
    }

    pub fn in_lambda_h(&self, s: Site) -> bool {
        (s.y.abs() as f64) < self.lambda && self.in_near_closure(s)
    }

    pub fn in_lambda_v(&self, s: Site) -> bool {
        (s.x.abs() as f64) < self.lambda && self.in_near_closure(s)
    }

    pub fn in_theta(&self, s: Site) -> bool {
        in_theta(self.g, self.c_over_r, s)
    }
}

pub(crate) fn in_theta(g: i64, c_over_r: f64, s: Site) -> bool {
    [Frame::Ne, Frame::Nw].into_iter().any(|f| {
        let q = f.map(s);
        ((q.y - q.x).abs() as f64) <= c_over_r && !(q.x > g && q.y > g) && !(q.x < -g && q.y < -g)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    pub model: String,
    pub k: u32,
    pub seed: u64,
    pub window: Rect,
    pub cutoff: u32,
    pub c_over_r: f64,
    pub small_c_over_r: f64,
    pub ell: f64,
    pub lambda: f64,
    pub dtilde_bound: f64,
    pub e1_bound: f64,
    /// R_{k,m} counts only classes strictly above this.
    pub e1_class_floor: f64,
    pub witnesses: Witnesses,
    /// Sum of R_{k,m} eta^m per straight witness, indexed as `J_LABELS`.
    pub r_sums: [f64; 4],
    pub slow_bonds: Vec<(String, Bond)>,
    pub m_witness: Option<(String, Highway)>,
    pub i: bool,
    pub m: bool,
    pub d_tilde: bool,
    pub e1: bool,
    pub e2: bool,
    pub f: bool,
    /// Point scan of region inclusion; computed when all zigzag witnesses exist.
    pub omega_in_theta: Option<bool>,
}

fn zig_classes(env: &FullEnvironment) -> HashMap<Bond, u32> {
    let mut m: HashMap<Bond, u32> = HashMap::new();
    for h in env.zigzags() {
        for b in h.bonds() {
            let e = m.entry(b).or_insert(0);
            *e = (*e).max(h.class);
        }
    }
    m
}

fn is_slow(env: &FullEnvironment, zc: &HashMap<Bond, u32>, b: Bond) -> bool {
    let kzig = zc.get(&b).copied().unwrap_or(0);
    let khv = env.hv_map.get(b);
    bond_marks(env.seed, b).1 <= slow_threshold(kzig, khv)
}

pub fn detect_full_success(env: &FullEnvironment, k: u32) -> FullReport {
    let p = &env.params;
    let s = p.scales();
    let kf = k as f64;
    let r = s.r(kf);
    let q = s.q(kf);
    let c_over_r = p.c_big / r;
    let small_c_over_r = p.c_small / r;
    let g = 1i64 << k;
    let w = find_spanning_highways(env, k);

    let i = w.h.iter().all(|h| h.is_some_and(|h| (h.x as f64) >= small_c_over_r && (h.x as f64) <= c_over_r));

    let mut m_witness = None;
    for (fi, f) in [Frame::Ne, Frame::Nw].into_iter().enumerate() {
        let own = [w.h[2 * fi].map(|h| h.highway), w.h[2 * fi + 1].map(|h| h.highway)];
        let bad = env.thinning.stage2.highways.iter().find(|h| {
            h.orient == Some(f.orient())
                && h.class >= k
                && !own.contains(&Some(**h))
                && h.sites().map(|s| f.map(s)).any(|q| ((q.y - q.x).abs() as f64) <= c_over_r && !(q.x > g && q.y > g) && !(q.x < -g && q.y < -g))
        });
        if let Some(h) = bad {
            m_witness = Some((["NE", "NW"][fi].to_string(), *h));
            break;
        }
    }
    let m = m_witness.is_none();

    let dtilde_bound = p.c_big / s.rtilde(q).expect("full scales");
    let d_tilde = w.j.iter().all(|j| j.is_some_and(|j| (j.y.abs() as f64) <= dtilde_bound));

    let e1_class_floor = p.c_thetatilde * q / (1.0 + p.zeta());
    let theta = p.theta();
    let e1_bound = p.c1 * (p.eta.powi(3) / (theta * theta)).powf(p.c_theta * p.delta * kf) * (p.eta / p.mu).powf(kf);
    let mut r_sums = [0.0; 4];
    for (ji, j) in w.j.iter().enumerate() {
        let Some(j) = j else { continue };
        let jb = j.highway.bbox();
        let mut per_class: BTreeMap<u32, u32> = BTreeMap::new();
        for h in &env.thinning.raw.highways {
            if (h.class as f64) <= e1_class_floor || !h.bbox().intersects(&jb) {
                continue;
            }
            if h.sites().any(|s| j.highway.contains_site(s) && in_theta(g, c_over_r, s)) {
                *per_class.entry(h.class).or_default() += 1;
            }
        }
        r_sums[ji] = per_class.iter().map(|(&m, &n)| n as f64 * p.eta.powi(m as i32)).sum();
    }
    let e1 = w.j.iter().all(Option::is_some) && r_sums.iter().all(|&x| x <= e1_bound);

    let zc = zig_classes(env);
    let mut slow_bonds = Vec::new();
    for (ji, j) in w.j.iter().enumerate() {
        if let Some(j) = j {
            slow_bonds.extend(j.highway.bonds().filter(|&b| is_slow(env, &zc, b)).map(|b| (format!("J-{}", J_LABELS[ji]), b)));
        }
    }
    for (hi, h) in w.h.iter().enumerate() {
        if let Some(h) = h {
            slow_bonds.extend(h.highway.bonds().filter(|&b| is_slow(env, &zc, b)).map(|b| (format!("H-{}", H_LABELS[hi]), b)));
        }
    }
    let e2 = w.j.iter().all(Option::is_some) && w.h.iter().all(Option::is_some) && slow_bonds.is_empty();
    let f = i && m && d_tilde && e1 && e2;

    let omega_in_theta = FrameGeometry::new(env, k, &w).map(|geo| {
        let spread = w.h.iter().flatten().map(|h| h.x).max().unwrap_or(0);
        let half = g + 2 * spread.max(c_over_r.ceil() as i64) + 8;
        Rect::centered(half).sites().all(|s| !geo.in_omega(s) || geo.in_theta(s))
    });

    FullReport {
        model: "full".into(),
        k,
        seed: env.seed,
        window: env.window,
        cutoff: env.cutoff,
        c_over_r,
        small_c_over_r,
        ell: 2.0 * c_over_r,
        lambda: p.mu.powi(-(k as i32)),
        dtilde_bound,
        e1_bound,
        e1_class_floor,
        witnesses: w,
        r_sums,
        slow_bonds,
        m_witness,
        i,
        m,
        d_tilde,
        e1,
        e2,
        f,
        omega_in_theta,
    }
}

#[derive(Clone, Copy)]
enum State {
    Open { h: bool, v: bool },
    Decided(bool),
}

/// For each target outside the random region, the geodesic from 0 up to
/// its first site outside the open central intersection must stay in one
/// of the two axis corridors.
pub fn corridor_check_full(env: &FullEnvironment, report: &FullReport, field: &BondField) -> CorridorResult {
    let Some(geo) = FrameGeometry::new(env, report.k, &report.witnesses) else {
        return CorridorResult::default();
    };
    let o = Site::new(0, 0);
    let t = geodesic_tree(field, o, None).expect("origin in field");
    let r = field.rect;
    let mut st = vec![State::Decided(false); t.parent.len()];
    for i in tree_order(&t) {
        let s = r.site_at(i);
        let prev = match t.parent[i] {
            u32::MAX => State::Open { h: true, v: true },
            p => st[p as usize],
        };
        st[i] = match prev {
            State::Decided(b) => State::Decided(b),
            State::Open { h, v } => {
                let (h, v) = (h && geo.in_lambda_h(s), v && geo.in_lambda_v(s));
                if geo.in_near_rect(s) {
                    State::Open { h, v }
                } else {
                    State::Decided(h || v)
                }
            }
        };
    }
    let hs: Vec<Highway> = report.witnesses.h.iter().flatten().map(|h| h.highway).collect();
    let mut res = CorridorResult::default();
    for (i, s) in r.sites().enumerate() {
        if geo.in_omega(s) {
            res.skipped_inside += 1;
            continue;
        }
        res.targets += 1;
        if !matches!(st[i], State::Decided(true)) {
            res.violation_count += 1;
            if res.violations.len() < MAX_KEPT {
                let path = t.path_to(s).unwrap_or_default();
                let exit = path.iter().copied().find(|&q| !geo.in_omega(q));
                let owners: Vec<&str> = exit.map_or(vec![], |e| (0..4).filter(|&j| hs.len() == 4 && hs[j].contains_site(e)).map(|j| H_LABELS[j]).collect());
                let note = if owners.len() > 1 {
                    format!("exit is a double point on {}; using {}", owners.join("+"), owners[0])
                } else {
                    "leaves both corridors before the first exit from the central region".into()
                };
                res.violations.push(Violation { target: s, exit, prefix: path.into_iter().take(12).collect(), note });
            }
        }
    }
    res
}
