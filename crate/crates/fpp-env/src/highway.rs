use crate::lattice::{Bond, Rect, Site};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HighwayKind {
    Zigzag,
    Horizontal,
    Vertical,
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiagOrientation {
    SwNe,
    SeNw,
}

impl DiagOrientation {
    pub fn opposite(self) -> Self {
        match self {
            DiagOrientation::SwNe => DiagOrientation::SeNw,
            DiagOrientation::SeNw => DiagOrientation::SwNe,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StartType {
    /// first step from the anchor is vertical
    V,
    /// first step from the anchor is horizontal
    H,
}

/// A highway instance. The anchor is the SW-most endpoint (SW/NE zigzag and
/// diagonal), the southernmost endpoint (SE/NW), the leftmost endpoint
/// (horizontal) or the lowest endpoint (vertical).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Highway {
    pub kind: HighwayKind,
    pub orient: Option<DiagOrientation>,
    pub start: Option<StartType>,
    pub class: u32,
    pub anchor: Site,
    pub length: u32,
    pub rank_mark: f64,
}

/// Frame in which a highway is a run of consecutive positions: position
/// `p0 + i` and transverse coordinate `t0 + (i odd) * dt` for site `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Track {
    p0: i64,
    t0: i64,
    dt: i64,
    len: i64,
}

impl Highway {
    pub fn zigzag(orient: DiagOrientation, start: StartType, class: u32, anchor: Site, length: u32, rank_mark: f64) -> Self {
        Highway { kind: HighwayKind::Zigzag, orient: Some(orient), start: Some(start), class, anchor, length, rank_mark }
    }

    pub fn horizontal(class: u32, anchor: Site, length: u32) -> Self {
        Highway { kind: HighwayKind::Horizontal, orient: None, start: None, class, anchor, length, rank_mark: 0.0 }
    }

    pub fn vertical(class: u32, anchor: Site, length: u32) -> Self {
        Highway { kind: HighwayKind::Vertical, orient: None, start: None, class, anchor, length, rank_mark: 0.0 }
    }

    pub fn diagonal(orient: DiagOrientation, class: u32, anchor: Site, length: u32) -> Self {
        Highway { kind: HighwayKind::Diagonal, orient: Some(orient), start: None, class, anchor, length, rank_mark: 0.0 }
    }

    pub fn is_zigzag(&self) -> bool {
        self.kind == HighwayKind::Zigzag
    }

    pub fn is_hv(&self) -> bool {
        matches!(self.kind, HighwayKind::Horizontal | HighwayKind::Vertical)
    }

    /// Site `i` for `0 <= i <= length`.
    pub fn site(&self, i: u32) -> Site {
        let i = i as i64;
        let a = self.anchor;
        let (hi, lo) = ((i + 1) / 2, i / 2);
        match (self.kind, self.orient, self.start) {
            (HighwayKind::Zigzag, Some(DiagOrientation::SwNe), Some(StartType::H)) => a.offset(hi, lo),
            (HighwayKind::Zigzag, Some(DiagOrientation::SwNe), Some(StartType::V)) => a.offset(lo, hi),
            (HighwayKind::Zigzag, Some(DiagOrientation::SeNw), Some(StartType::H)) => a.offset(-hi, lo),
            (HighwayKind::Zigzag, Some(DiagOrientation::SeNw), Some(StartType::V)) => a.offset(-lo, hi),
            (HighwayKind::Horizontal, _, _) => a.offset(i, 0),
            (HighwayKind::Vertical, _, _) => a.offset(0, i),
            (HighwayKind::Diagonal, Some(DiagOrientation::SwNe), _) => a.offset(i, i),
            (HighwayKind::Diagonal, Some(DiagOrientation::SeNw), _) => a.offset(-i, i),
            _ => panic!("malformed highway {self:?}"),
        }
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..=self.length).map(move |i| self.site(i))
    }

    pub fn bond(&self, i: u32) -> Bond {
        Bond::between(self.site(i), self.site(i + 1)).expect("adjacent")
    }

    pub fn bonds(&self) -> impl Iterator<Item = Bond> + '_ {
        (0..self.length).map(move |i| self.bond(i))
    }

    pub fn endpoints(&self) -> (Site, Site) {
        (self.site(0), self.site(self.length))
    }

    pub fn bbox(&self) -> Rect {
        let (a, b) = self.endpoints();
        Rect::new(a.x.min(b.x), a.y.min(b.y), a.x.max(b.x), a.y.max(b.y))
    }

    /// Do any of the highway's sites lie in `r`?
    pub fn meets(&self, r: &Rect) -> bool {
        if !self.bbox().intersects(r) {
            return false;
        }
        match self.kind {
            HighwayKind::Horizontal | HighwayKind::Vertical => true,
            _ => self.sites().any(|s| r.contains(s)),
        }
    }

    fn track(&self) -> Track {
        let a = self.anchor;
        let len = self.length as i64;
        match (self.kind, self.orient, self.start) {
            (HighwayKind::Zigzag, Some(DiagOrientation::SwNe), Some(st)) => Track {
                p0: a.x + a.y,
                t0: a.x - a.y,
                dt: if st == StartType::H { 1 } else { -1 },
                len,
            },
            (HighwayKind::Zigzag, Some(DiagOrientation::SeNw), Some(st)) => Track {
                p0: a.y - a.x,
                t0: a.x + a.y,
                dt: if st == StartType::H { -1 } else { 1 },
                len,
            },
            _ => panic!("track is defined for zigzag highways"),
        }
    }

    fn frame(&self, s: Site) -> (i64, i64) {
        match self.orient {
            Some(DiagOrientation::SwNe) => (s.x + s.y, s.x - s.y),
            _ => (s.y - s.x, s.x + s.y),
        }
    }

    /// Index of `s` along the highway, if it is one of its sites.
    pub fn index_of(&self, s: Site) -> Option<u32> {
        let a = self.anchor;
        let len = self.length as i64;
        let i = match self.kind {
            HighwayKind::Zigzag => {
                let tr = self.track();
                let (p, t) = self.frame(s);
                let i = p - tr.p0;
                if i < 0 || i > len {
                    return None;
                }
                let expect = tr.t0 + if i % 2 == 1 { tr.dt } else { 0 };
                if t != expect {
                    return None;
                }
                i
            }
            HighwayKind::Horizontal => {
                if s.y != a.y {
                    return None;
                }
                s.x - a.x
            }
            HighwayKind::Vertical => {
                if s.x != a.x {
                    return None;
                }
                s.y - a.y
            }
            HighwayKind::Diagonal => {
                let i = s.y - a.y;
                let ok = match self.orient {
                    Some(DiagOrientation::SwNe) => s.x - a.x == i,
                    _ => a.x - s.x == i,
                };
                if !ok {
                    return None;
                }
                i
            }
        };
        if (0..=len).contains(&i) {
            Some(i as u32)
        } else {
            None
        }
    }

    pub fn contains_site(&self, s: Site) -> bool {
        self.index_of(s).is_some()
    }

    pub fn contains_bond(&self, b: Bond) -> bool {
        let (p, q) = b.ends();
        match (self.index_of(p), self.index_of(q)) {
            (Some(i), Some(j)) => i.abs_diff(j) == 1,
            _ => false,
        }
    }

    /// l1 distance from a site to the highway's site set.
    pub fn dist_to_site(&self, s: Site) -> i64 {
        let a = self.anchor;
        let len = self.length as i64;
        match self.kind {
            HighwayKind::Zigzag => {
                let tr = self.track();
                let (p, t) = self.frame(s);
                let pp = p - tr.p0;
                let tt = t - tr.t0;
                let mut best = i64::MAX;
                for e in 0..2 {
                    if let Some(i) = nearest_with_parity(pp, e, len) {
                        let w = (tt - e * tr.dt).abs();
                        best = best.min((pp - i).abs().max(w));
                    }
                }
                best
            }
            HighwayKind::Horizontal => gap(s.x, a.x, a.x + len) + (s.y - a.y).abs(),
            HighwayKind::Vertical => gap(s.y, a.y, a.y + len) + (s.x - a.x).abs(),
            HighwayKind::Diagonal => {
                let (x, y) = (s.x - a.x, s.y - a.y);
                let sign = if self.orient == Some(DiagOrientation::SwNe) { 1 } else { -1 };
                let f = |i: i64| (x - sign * i).abs() + (y - i).abs();
                let c1 = (sign * x).clamp(0, len);
                let c2 = y.clamp(0, len);
                f(c1).min(f(c2))
            }
        }
    }

    /// l1 distance between the site sets of two highways.
    pub fn dist(&self, o: &Highway) -> i64 {
        if self.is_zigzag() && o.is_zigzag() && self.orient == o.orient {
            return zigzag_parallel_dist(self, o);
        }
        let (short, long) = if self.length <= o.length { (self, o) } else { (o, self) };
        let mut best = i64::MAX;
        for s in short.sites() {
            best = best.min(long.dist_to_site(s));
            if best == 0 {
                break;
            }
        }
        best
    }

    /// Same geometry (bond set), ignoring class and marks.
    pub fn same_geometry(&self, o: &Highway) -> bool {
        self.kind == o.kind
            && self.orient == o.orient
            && self.length == o.length
            && ((self.anchor == o.anchor && self.start == o.start)
                || (self.length == 1 && self.bond(0) == o.bond(0)))
    }

    /// Total stage-1 ranking: class, then length, then rank mark, then
    /// anchor and start type (the last two only break exact mark ties).
    pub fn rank_cmp(&self, o: &Highway) -> Ordering {
        self.class
            .cmp(&o.class)
            .then(self.length.cmp(&o.length))
            .then(self.rank_mark.total_cmp(&o.rank_mark))
            .then((self.anchor.x, self.anchor.y).cmp(&(o.anchor.x, o.anchor.y)))
            .then(self.start.cmp(&o.start))
    }
}

fn gap(v: i64, lo: i64, hi: i64) -> i64 {
    if v < lo {
        lo - v
    } else if v > hi {
        v - hi
    } else {
        0
    }
}

/// Integer in `[0, len]` with parity `e` nearest to `p`.
fn nearest_with_parity(p: i64, e: i64, len: i64) -> Option<i64> {
    if e > len {
        return None;
    }
    let c = p.clamp(0, len);
    if c.rem_euclid(2) == e {
        return Some(c);
    }
    let mut best: Option<i64> = None;
    for cand in [c - 1, c + 1] {
        if cand >= 0 && cand <= len && cand.rem_euclid(2) == e {
            best = match best {
                Some(b) if (p - b).abs() <= (p - cand).abs() => Some(b),
                _ => Some(cand),
            };
        }
    }
    best
}

fn zigzag_parallel_dist(a: &Highway, b: &Highway) -> i64 {
    let ta = a.track();
    let tb = b.track();
    let mut best = i64::MAX;
    for e in 0..2i64 {
        if e > ta.len {
            continue;
        }
        for f in 0..2i64 {
            if f > tb.len {
                continue;
            }
            let dt = (ta.t0 + e * ta.dt - tb.t0 - f * tb.dt).abs();
            let imax = ta.len - (ta.len - e).rem_euclid(2);
            let jmax = tb.len - (tb.len - f).rem_euclid(2);
            // i - j ranges over [e - jmax, imax - f] in steps of 2
            let lo = e - jmax;
            let hi = imax - f;
            let target = tb.p0 - ta.p0;
            let k = if target <= lo {
                lo
            } else if target >= hi {
                hi
            } else {
                let k = target - (target - lo).rem_euclid(2);
                if (target - k).abs() <= (k + 2 - target).abs() || k + 2 > hi {
                    k
                } else {
                    k + 2
                }
            };
            let dp = (k - target).abs();
            best = best.min(dp.max(dt));
        }
    }
    best
}
