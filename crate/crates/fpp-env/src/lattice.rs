use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}

impl Site {
    pub const fn new(x: i64, y: i64) -> Self {
        Site { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Site {
        Site { x: self.x + dx, y: self.y + dy }
    }

    pub fn l1(self, o: Site) -> i64 {
        (self.x - o.x).abs() + (self.y - o.y).abs()
    }

    pub fn linf(self, o: Site) -> i64 {
        (self.x - o.x).abs().max((self.y - o.y).abs())
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Bond direction seen from its canonical (lower, then left) endpoint.
/// `E` and `N` are the square-lattice bonds; `NE` and `NW` are the simple
/// model's diagonals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BondDir {
    E,
    N,
    NE,
    NW,
}

impl BondDir {
    pub fn delta(self) -> (i64, i64) {
        match self {
            BondDir::E => (1, 0),
            BondDir::N => (0, 1),
            BondDir::NE => (1, 1),
            BondDir::NW => (-1, 1),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, BondDir::NE | BondDir::NW)
    }

    /// Orientation label: E/W, N/S, SW/NE, SE/NW.
    pub fn label(self) -> &'static str {
        match self {
            BondDir::E => "E/W",
            BondDir::N => "N/S",
            BondDir::NE => "SW/NE",
            BondDir::NW => "SE/NW",
        }
    }
}

/// An undirected nearest-neighbour bond stored in canonical form, so the
/// two endpoint orders give the same key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bond {
    pub base: Site,
    pub dir: BondDir,
}

impl Bond {
    pub const fn new(base: Site, dir: BondDir) -> Self {
        Bond { base, dir }
    }

    /// Canonical bond joining `a` and `b`, if they are neighbours in the
    /// eight-neighbour lattice.
    pub fn between(a: Site, b: Site) -> Option<Bond> {
        let (lo, hi) = if (a.y, a.x) <= (b.y, b.x) { (a, b) } else { (b, a) };
        let d = (hi.x - lo.x, hi.y - lo.y);
        let dir = match d {
            (1, 0) => BondDir::E,
            (0, 1) => BondDir::N,
            (1, 1) => BondDir::NE,
            (-1, 1) => BondDir::NW,
            _ => return None,
        };
        Some(Bond { base: lo, dir })
    }

    pub fn ends(self) -> (Site, Site) {
        let (dx, dy) = self.dir.delta();
        (self.base, self.base.offset(dx, dy))
    }

    pub fn other(self, s: Site) -> Site {
        let (a, b) = self.ends();
        if s == a {
            b
        } else {
            a
        }
    }

    pub fn has_end(self, s: Site) -> bool {
        let (a, b) = self.ends();
        a == s || b == s
    }

    pub fn is_horizontal(self) -> bool {
        self.dir == BondDir::E
    }

    pub fn is_vertical(self) -> bool {
        self.dir == BondDir::N
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.ends();
        write!(f, "{a}-{b}")
    }
}

/// Inclusive rectangle of sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl Rect {
    pub const fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        Rect { x0, y0, x1, y1 }
    }

    /// Square of side `2r+1` centred at the origin.
    pub fn centered(r: i64) -> Self {
        Rect::new(-r, -r, r, r)
    }

    pub fn width(&self) -> i64 {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> i64 {
        self.y1 - self.y0 + 1
    }

    pub fn is_empty(&self) -> bool {
        self.x1 < self.x0 || self.y1 < self.y0
    }

    pub fn area(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.width() as u64) * (self.height() as u64)
        }
    }

    pub fn contains(&self, s: Site) -> bool {
        s.x >= self.x0 && s.x <= self.x1 && s.y >= self.y0 && s.y <= self.y1
    }

    pub fn contains_bond(&self, b: Bond) -> bool {
        let (p, q) = b.ends();
        self.contains(p) && self.contains(q)
    }

    pub fn expand(&self, m: i64) -> Rect {
        Rect::new(self.x0 - m, self.y0 - m, self.x1 + m, self.y1 + m)
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.x0 <= o.x1 && o.x0 <= self.x1 && self.y0 <= o.y1 && o.y0 <= self.y1
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (self.y0..=self.y1).flat_map(move |y| (self.x0..=self.x1).map(move |x| Site::new(x, y)))
    }

    pub fn index(&self, s: Site) -> usize {
        ((s.y - self.y0) * self.width() + (s.x - self.x0)) as usize
    }

    pub fn site_at(&self, i: usize) -> Site {
        let w = self.width();
        Site::new(self.x0 + i as i64 % w, self.y0 + i as i64 / w)
    }
}
