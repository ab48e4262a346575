use fpp_env::{Bond, Rect, Site};
use fpp_field::{BondField, Cost};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Item {
    cost: Cost,
    idx: u32,
}

impl PartialEq for Item {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Item {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, o: &Self) -> Ordering {
        o.cost.cmp_total(&self.cost).then(o.idx.cmp(&self.idx))
    }
}

/// Neighbour moves of the field's lattice with their bond.
pub(crate) fn moves(field: &BondField) -> &'static [(i64, i64)] {
    const FOUR: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    const EIGHT: [(i64, i64); 8] = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)];
    if field.dirs().len() == 4 {
        &EIGHT
    } else {
        &FOUR
    }
}

/// Single-source shortest-path tree over the field rectangle.
#[derive(Clone, Debug)]
pub struct GeodesicTree {
    pub root: Site,
    pub rect: Rect,
    pub dist: Vec<Cost>,
    pub parent: Vec<u32>,
    pub reached: Vec<bool>,
}

impl GeodesicTree {
    pub fn dist_to(&self, s: Site) -> Option<Cost> {
        let i = self.rect.contains(s).then(|| self.rect.index(s))?;
        self.reached[i].then(|| self.dist[i])
    }

    pub fn tau_to(&self, s: Site) -> Option<f64> {
        self.dist_to(s).map(Cost::value)
    }

    /// Sites from the root to `s`.
    pub fn path_to(&self, s: Site) -> Option<Vec<Site>> {
        let mut i = self.rect.contains(s).then(|| self.rect.index(s))?;
        if !self.reached[i] {
            return None;
        }
        let mut out = vec![self.rect.site_at(i)];
        while self.parent[i] != NONE {
            i = self.parent[i] as usize;
            out.push(self.rect.site_at(i));
        }
        out.reverse();
        Some(out)
    }

    /// Number of tree edges.
    pub fn edges(&self) -> usize {
        self.parent.iter().filter(|&&p| p != NONE).count()
    }

    pub fn reached_count(&self) -> usize {
        self.reached.iter().filter(|&&r| r).count()
    }
}

/// Label-setting search from `root`, stopping early once `target` is settled.
pub(crate) fn run(field: &BondField, root: Site, target: Option<Site>) -> GeodesicTree {
    let rect = field.rect;
    let n = rect.area() as usize;
    let mut dist = vec![Cost::ZERO; n];
    let mut parent = vec![NONE; n];
    let mut reached = vec![false; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    if rect.contains(root) {
        let r = rect.index(root);
        reached[r] = true;
        heap.push(Item { cost: Cost::ZERO, idx: r as u32 });
    }
    let tgt = target.filter(|t| rect.contains(*t)).map(|t| rect.index(t));
    let mv = moves(field);
    while let Some(Item { cost, idx }) = heap.pop() {
        let i = idx as usize;
        if done[i] {
            continue;
        }
        done[i] = true;
        if Some(i) == tgt {
            break;
        }
        let s = rect.site_at(i);
        for &(dx, dy) in mv {
            let t = s.offset(dx, dy);
            if !rect.contains(t) {
                continue;
            }
            let j = rect.index(t);
            if done[j] {
                continue;
            }
            let b = Bond::between(s, t).expect("adjacent");
            let Some(k) = field.slot(b) else { continue };
            let c = cost + field.slot_cost(k);
            if !reached[j] || c.cmp_total(&dist[j]) == Ordering::Less {
                reached[j] = true;
                dist[j] = c;
                parent[j] = i as u32;
                heap.push(Item { cost: c, idx: j as u32 });
            }
        }
    }
    GeodesicTree { root, rect, dist, parent, reached }
}
