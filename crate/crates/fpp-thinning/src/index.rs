use fpp_env::{Highway, Rect, Site};
use std::collections::HashMap;

const CELL: i64 = 32;

/// Coarse bucket grid over highway bounding boxes.
#[derive(Default)]
pub struct GridIndex {
    cells: HashMap<(i64, i64), Vec<usize>>,
}

fn cell_range(r: &Rect) -> (i64, i64, i64, i64) {
    (r.x0.div_euclid(CELL), r.y0.div_euclid(CELL), r.x1.div_euclid(CELL), r.y1.div_euclid(CELL))
}

fn path_cells(h: &Highway) -> Vec<(i64, i64)> {
    let mut cells: Vec<(i64, i64)> = Vec::new();
    for s in h.sites() {
        let c = (s.x.div_euclid(CELL), s.y.div_euclid(CELL));
        if cells.last() != Some(&c) {
            cells.push(c);
        }
    }
    cells.sort_unstable();
    cells.dedup();
    cells
}

impl GridIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register `h` in the cells its sites visit.
    pub fn insert(&mut self, id: usize, h: &Highway) {
        for c in path_cells(h) {
            self.cells.entry(c).or_default().push(id);
        }
    }

    /// Ids of highways with a site within `reach` (in each coordinate) of a
    /// cell visited by `h`; a superset of those within d1 `reach`.
    pub fn near_path(&self, h: &Highway, reach: i64, out: &mut Vec<usize>) {
        out.clear();
        let m = (reach + CELL - 1) / CELL;
        let mut visit: Vec<(i64, i64)> = Vec::new();
        for (cx, cy) in path_cells(h) {
            for dy in -m..=m {
                for dx in -m..=m {
                    visit.push((cx + dx, cy + dy));
                }
            }
        }
        visit.sort_unstable();
        visit.dedup();
        for c in visit {
            if let Some(v) = self.cells.get(&c) {
                out.extend_from_slice(v);
            }
        }
        out.sort_unstable();
        out.dedup();
    }

    /// Ids whose bounding box may come within `reach` of `r`; may repeat.
    pub fn near_rect(&self, r: &Rect, reach: i64, out: &mut Vec<usize>) {
        out.clear();
        let (cx0, cy0, cx1, cy1) = cell_range(&r.expand(reach));
        for cy in cy0..=cy1 {
            for cx in cx0..=cx1 {
                if let Some(v) = self.cells.get(&(cx, cy)) {
                    out.extend_from_slice(v);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
    }

    /// First id near the path of `h` (as in `near_path`) accepted by `pred`,
    /// scanning the cells visited by `h` first.
    pub fn find_near_path(&self, h: &Highway, reach: i64, mut pred: impl FnMut(usize) -> bool) -> Option<usize> {
        let m = (reach + CELL - 1) / CELL;
        let cells = path_cells(h);
        for ring in 0..=m {
            for &(cx, cy) in &cells {
                for dy in -ring..=ring {
                    for dx in -ring..=ring {
                        if dx.abs().max(dy.abs()) != ring {
                            continue;
                        }
                        if let Some(v) = self.cells.get(&(cx + dx, cy + dy)) {
                            if let Some(&id) = v.iter().find(|&&id| pred(id)) {
                                return Some(id);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn near_site(&self, s: Site, reach: i64, out: &mut Vec<usize>) {
        self.near_rect(&Rect::new(s.x, s.y, s.x, s.y), reach, out)
    }
}
