//! Stage-1 ranking deletions, stage-2 HV-crossing deletions and stage-3
//! trimming of a raw zigzag configuration.

mod hvmap;
mod index;

pub use hvmap::HvClassMap;
pub use index::GridIndex;

use fpp_env::{Bond, DiagOrientation, Highway, Site};
use fpp_params::FullParams;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

/// Same-orientation highways closer than this (in d1) compete in stage 1.
pub const STAGE1_REACH: i64 = 22;
pub const TRIM_BONDS: u32 = 4;

/// Total rank order; `Greater` means `a` ranks above `b`.
pub fn rank(a: &Highway, b: &Highway) -> Ordering {
    a.rank_cmp(b)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Fate {
    Kept,
    /// deleted in stage 1 by a higher-ranked raw highway (raw id)
    Stage1 { by: usize },
    /// deleted in stage 2: shares `bond` with an HV highway of class `hv_class`
    Stage2 { bond: Bond, hv_class: u32 },
    /// trimmed in stage 3 at the anchor end and/or the far end
    Trimmed { anchor_end: bool, far_end: bool },
    /// trimming emptied the highway
    Stage3Removed,
    /// trimmed copy coincided with a present highway (raw id of the survivor)
    Stage3Merged { into: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub raw: Highway,
    pub fate: Fate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThinnedConfig {
    pub stage: u8,
    pub highways: Vec<Highway>,
    /// raw id of each entry of `highways`
    pub source: Vec<usize>,
}

impl ThinnedConfig {
    /// Wrap a raw configuration as stage 0.
    pub fn raw(hw: &[Highway]) -> Self {
        let zz: Vec<Highway> = hw.iter().copied().filter(|h| h.is_zigzag()).collect();
        let source = (0..zz.len()).collect();
        ThinnedConfig { stage: 0, highways: zz, source }
    }

    pub fn len(&self) -> usize {
        self.highways.len()
    }

    pub fn is_empty(&self) -> bool {
        self.highways.is_empty()
    }

    fn keep(&self, stage: u8, keep: impl Fn(usize) -> bool) -> Self {
        let mut out = ThinnedConfig { stage, highways: Vec::new(), source: Vec::new() };
        for i in 0..self.highways.len() {
            if keep(i) {
                out.highways.push(self.highways[i]);
                out.source.push(self.source[i]);
            }
        }
        out
    }
}

/// Ids (into `cfg`) deleted in stage 1, each with the id of a higher-ranked
/// neighbour. One-shot: every highway is compared with all input highways.
fn stage1_victims(cfg: &ThinnedConfig) -> Vec<(usize, usize)> {
    let mut victims = Vec::new();
    for orient in [DiagOrientation::SwNe, DiagOrientation::SeNw] {
        let mut ids: Vec<usize> = (0..cfg.len()).filter(|&i| cfg.highways[i].orient == Some(orient)).collect();
        ids.sort_by(|&a, &b| rank(&cfg.highways[b], &cfg.highways[a]));
        let mut index = GridIndex::new();
        for &i in &ids {
            let h = &cfg.highways[i];
            if let Some(j) = index.find_near_path(h, STAGE1_REACH, |j| h.dist(&cfg.highways[j]) <= STAGE1_REACH) {
                victims.push((i, j));
            }
            index.insert(i, h);
        }
    }
    victims.sort_unstable();
    victims
}

pub fn stage1(cfg: &ThinnedConfig, prov: &mut [Provenance]) -> ThinnedConfig {
    let victims = stage1_victims(cfg);
    let mut dead = vec![false; cfg.len()];
    for &(i, j) in &victims {
        dead[i] = true;
        prov[cfg.source[i]].fate = Fate::Stage1 { by: cfg.source[j] };
    }
    cfg.keep(1, |i| !dead[i])
}

/// First bond of `h` carrying an HV class at or above the stage-2 threshold.
pub fn stage2_witness(h: &Highway, hv: &HvClassMap, p: &FullParams) -> Option<(Bond, u32)> {
    let t = p.stage2_threshold(h.class);
    h.bonds().map(|b| (b, hv.get(b))).find(|&(_, c)| c >= t)
}

pub fn stage2(cfg: &ThinnedConfig, hv: &HvClassMap, p: &FullParams, prov: &mut [Provenance]) -> ThinnedConfig {
    let mut dead = vec![false; cfg.len()];
    for (i, h) in cfg.highways.iter().enumerate() {
        if let Some((bond, hv_class)) = stage2_witness(h, hv, p) {
            dead[i] = true;
            prov[cfg.source[i]].fate = Fate::Stage2 { bond, hv_class };
        }
    }
    cfg.keep(2, |i| !dead[i])
}

fn geometry_key(h: &Highway) -> (u32, i64, i64, u32, u8, u8) {
    let o = h.orient.map_or(9, |o| o.index() as u8);
    let s = h.start.map_or(9, |s| s as u8);
    (h.class, h.anchor.x, h.anchor.y, h.length, o, s)
}

/// Which ends of each highway lie within d1 1 of an opposite-orientation highway.
fn trim_flags(cfg: &ThinnedConfig) -> Vec<(bool, bool)> {
    let mut index = GridIndex::new();
    for (i, h) in cfg.highways.iter().enumerate() {
        index.insert(i, h);
    }
    let mut cand = Vec::new();
    let mut near = |x: Site, o: DiagOrientation| {
        index.near_site(x, 1, &mut cand);
        cand.iter().any(|&j| {
            let g = &cfg.highways[j];
            g.orient == Some(o.opposite()) && g.dist_to_site(x) <= 1
        })
    };
    cfg.highways
        .iter()
        .map(|h| {
            let o = h.orient.expect("zigzag");
            let (a, b) = h.endpoints();
            (near(a, o), near(b, o))
        })
        .collect()
}

/// Shorten `h` by `TRIM_BONDS` at the chosen ends; `None` if nothing is left.
pub fn trim(h: &Highway, anchor_end: bool, far_end: bool) -> Option<Highway> {
    let cut = TRIM_BONDS * (anchor_end as u32 + far_end as u32);
    if h.length <= cut {
        return None;
    }
    let mut t = *h;
    if anchor_end {
        t.anchor = h.site(TRIM_BONDS);
    }
    t.length = h.length - cut;
    Some(t)
}

pub fn stage3(cfg: &ThinnedConfig, prov: &mut [Provenance]) -> ThinnedConfig {
    let flags = trim_flags(cfg);
    let mut out = ThinnedConfig { stage: 3, highways: Vec::new(), source: Vec::new() };
    let mut seen: HashMap<_, usize> = HashMap::new();
    // untouched highways first so that a trimmed copy merges into them
    let order: Vec<usize> = (0..cfg.len())
        .filter(|&i| flags[i] == (false, false))
        .chain((0..cfg.len()).filter(|&i| flags[i] != (false, false)))
        .collect();
    for i in order {
        let (ae, fe) = flags[i];
        let src = cfg.source[i];
        let h = if ae || fe {
            match trim(&cfg.highways[i], ae, fe) {
                Some(t) => {
                    prov[src].fate = Fate::Trimmed { anchor_end: ae, far_end: fe };
                    t
                }
                None => {
                    prov[src].fate = Fate::Stage3Removed;
                    continue;
                }
            }
        } else {
            cfg.highways[i]
        };
        match seen.get(&geometry_key(&h)) {
            Some(&k) => prov[src].fate = Fate::Stage3Merged { into: out.source[k] },
            None => {
                seen.insert(geometry_key(&h), out.highways.len());
                out.highways.push(h);
                out.source.push(src);
            }
        }
    }
    // restore input order for determinism of downstream iteration
    let mut idx: Vec<usize> = (0..out.len()).collect();
    idx.sort_by_key(|&k| out.source[k]);
    ThinnedConfig {
        stage: 3,
        highways: idx.iter().map(|&k| out.highways[k]).collect(),
        source: idx.iter().map(|&k| out.source[k]).collect(),
    }
}

/// Stage-3 dichotomy for opposite-orientation zigzags: `a` and `b` are at
/// d1 >= 2, or they share an intersection bond with at least 2 bonds of each
/// highway on either side of it.
pub fn fully_cross_or_apart(a: &Highway, b: &Highway) -> bool {
    if a.dist(b) >= 2 {
        return true;
    }
    let shared: Vec<(u32, u32)> = (0..a.length)
        .filter_map(|i| {
            let (p, q) = a.bond(i).ends();
            match (b.index_of(p), b.index_of(q)) {
                (Some(u), Some(v)) if u.abs_diff(v) == 1 => Some((i, u.min(v))),
                _ => None,
            }
        })
        .collect();
    match shared.as_slice() {
        [(i, j)] => *i >= 2 && a.length - 1 - i >= 2 && *j >= 2 && b.length - 1 - j >= 2,
        _ => false,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub raw: usize,
    pub stage1_deleted: usize,
    pub stage2_deleted: usize,
    pub trimmed: usize,
    pub stage3_removed: usize,
    pub stage3_merged: usize,
    pub kept: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ThinningReport {
    pub per_class: BTreeMap<u32, ClassCounts>,
}

impl ThinningReport {
    pub fn from_provenance(prov: &[Provenance]) -> Self {
        let mut per_class: BTreeMap<u32, ClassCounts> = BTreeMap::new();
        for p in prov {
            let c = per_class.entry(p.raw.class).or_default();
            c.raw += 1;
            match p.fate {
                Fate::Kept => c.kept += 1,
                Fate::Stage1 { .. } => c.stage1_deleted += 1,
                Fate::Stage2 { .. } => c.stage2_deleted += 1,
                Fate::Trimmed { .. } => c.trimmed += 1,
                Fate::Stage3Removed => c.stage3_removed += 1,
                Fate::Stage3Merged { .. } => c.stage3_merged += 1,
            }
        }
        ThinningReport { per_class }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// All three stages with provenance for every raw zigzag highway.
#[derive(Clone, Debug)]
pub struct Thinning {
    pub raw: ThinnedConfig,
    pub stage1: ThinnedConfig,
    pub stage2: ThinnedConfig,
    pub stage3: ThinnedConfig,
    pub provenance: Vec<Provenance>,
}

impl Thinning {
    pub fn run(raw_zigzag: &[Highway], hv: &HvClassMap, p: &FullParams) -> Self {
        let raw = ThinnedConfig::raw(raw_zigzag);
        let mut provenance: Vec<Provenance> = raw.highways.iter().map(|&h| Provenance { raw: h, fate: Fate::Kept }).collect();
        let s1 = stage1(&raw, &mut provenance);
        let s2 = stage2(&s1, hv, p, &mut provenance);
        let s3 = stage3(&s2, &mut provenance);
        Thinning { raw, stage1: s1, stage2: s2, stage3: s3, provenance }
    }

    pub fn report(&self) -> ThinningReport {
        ThinningReport::from_provenance(&self.provenance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpp_env::StartType;

    fn zz(o: DiagOrientation, k: u32, a: (i64, i64), len: u32, u: f64) -> Highway {
        Highway::zigzag(o, StartType::H, k, Site::new(a.0, a.1), len, u)
    }

    fn run1(hw: &[Highway]) -> ThinnedConfig {
        let raw = ThinnedConfig::raw(hw);
        let mut prov: Vec<Provenance> = raw.highways.iter().map(|&h| Provenance { raw: h, fate: Fate::Kept }).collect();
        stage1(&raw, &mut prov)
    }

    #[test]
    fn rank_rules() {
        use DiagOrientation::SwNe;
        assert_eq!(rank(&zz(SwNe, 5, (0, 0), 3, 0.1), &zz(SwNe, 3, (0, 0), 30, 0.9)), Ordering::Greater);
        assert_eq!(rank(&zz(SwNe, 3, (0, 0), 12, 0.1), &zz(SwNe, 3, (0, 0), 7, 0.9)), Ordering::Greater);
        assert_eq!(rank(&zz(SwNe, 3, (0, 0), 7, 0.9), &zz(SwNe, 3, (5, 0), 7, 0.2)), Ordering::Greater);
    }

    fn brute_d1(a: &Highway, b: &Highway) -> i64 {
        a.sites().flat_map(|x| b.sites().map(move |y| x.l1(y))).min().unwrap()
    }

    #[test]
    fn stage1_threshold() {
        use DiagOrientation::SwNe;
        let a = zz(SwNe, 3, (0, 0), 20, 0.9);
        let mut seen = [false; 2];
        for s in 1..40 {
            let b = zz(SwNe, 3, (s, 0), 20, 0.5);
            let d = brute_d1(&a, &b);
            assert_eq!(a.dist(&b), d);
            let out = run1(&[a, b]);
            if d <= STAGE1_REACH {
                assert_eq!(out.highways, vec![a], "shift {s} d1 {d}");
            } else {
                assert_eq!(out.len(), 2, "shift {s} d1 {d}");
            }
            if d == 22 || d == 23 {
                seen[(d - 22) as usize] = true;
            }
        }
        assert_eq!(seen, [true, true]);
        assert_eq!(run1(&[a]).len(), 1);
    }

    #[test]
    fn stage1_is_one_shot() {
        use DiagOrientation::SwNe;
        // c beats b, b beats a; a survives nothing: all compared with raw b
        let a = zz(SwNe, 1, (0, 0), 4, 0.5);
        let b = zz(SwNe, 2, (20, 0), 4, 0.5);
        let c = zz(SwNe, 3, (40, 0), 4, 0.5);
        let s = run1(&[a, b, c]);
        assert_eq!(s.highways, vec![c]);
    }

    #[test]
    fn stage3_trims_near_end() {
        use DiagOrientation::*;
        let long = zz(SwNe, 3, (0, 0), 40, 0.5);
        // SE/NW highway whose anchor end sits next to the middle of `long`
        let mid = long.site(20);
        let other = Highway::zigzag(SeNw, StartType::H, 3, mid.offset(1, 0), 10, 0.5);
        assert!(other.dist_to_site(mid) <= 1 || long.dist_to_site(other.site(0)) <= 1);
        let raw = ThinnedConfig::raw(&[long, other]);
        let mut prov: Vec<Provenance> = raw.highways.iter().map(|&h| Provenance { raw: h, fate: Fate::Kept }).collect();
        let s3 = stage3(&raw, &mut prov);
        assert_eq!(s3.highways[0], long);
        assert_eq!(s3.highways[1].length, 6);
        assert_eq!(s3.highways[1].anchor, other.site(4));
        assert!(matches!(prov[1].fate, Fate::Trimmed { anchor_end: true, far_end: false }));
    }

    #[test]
    fn stage3_removes_short_and_merges_duplicates() {
        use DiagOrientation::*;
        let base = zz(SwNe, 3, (0, 0), 40, 0.5);
        let short = Highway::zigzag(SeNw, StartType::H, 2, base.site(10).offset(1, 0), 3, 0.5);
        let long = Highway::zigzag(SeNw, StartType::H, 2, base.site(30).offset(1, 0), 14, 0.5);
        let dup = Highway { anchor: long.site(4), length: 10, ..long };
        let raw = ThinnedConfig::raw(&[base, short, long, dup]);
        let mut prov: Vec<Provenance> = raw.highways.iter().map(|&h| Provenance { raw: h, fate: Fate::Kept }).collect();
        let s3 = stage3(&raw, &mut prov);
        assert_eq!(prov[1].fate, Fate::Stage3Removed);
        assert_eq!(prov[2].fate, Fate::Stage3Merged { into: 3 });
        assert_eq!(s3.len(), 2);
    }

    #[test]
    fn trim_keeps_start_type_and_direction() {
        for o in [DiagOrientation::SwNe, DiagOrientation::SeNw] {
            for st in [StartType::H, StartType::V] {
                let h = Highway::zigzag(o, st, 2, Site::new(3, -2), 11, 0.3);
                let t = trim(&h, true, true).unwrap();
                assert_eq!(t.length, 3);
                for i in 0..=3 {
                    assert_eq!(t.site(i), h.site(i + 4));
                }
                assert!(trim(&h, true, false).unwrap().length == 7);
                assert!(trim(&Highway { length: 8, ..h }, true, true).is_none());
            }
        }
    }
}
