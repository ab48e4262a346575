use crate::path::LatticePath;
use fpp_env::{Bond, DiagOrientation, Highway};
use serde::{Deserialize, Serialize};

/// Bond counts along a path.
///
/// `z[o][d]` counts zigzag bonds with Φ-orientation `o` (0 = SW/NE,
/// 1 = SE/NW) traversed in step direction `d` (0 N, 1 E, 2 S, 3 W);
/// `b[d]` counts the non-zigzag bonds likewise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCounters {
    pub n_z: u32,
    pub n_b: u32,
    pub n_h: u32,
    pub n_v: u32,
    pub z: [[u32; 4]; 2],
    pub b: [u32; 4],
    pub n_hi: u32,
    pub d: u32,
}

pub const N: usize = 0;
pub const E: usize = 1;
pub const S: usize = 2;
pub const W: usize = 3;

impl PathCounters {
    pub fn z_dir(&self, d: usize) -> u32 {
        self.z[0][d] + self.z[1][d]
    }

    /// D(Γ) computed from the directional counts.
    pub fn d_of(z: &[[u32; 4]; 2]) -> u32 {
        let ne = &z[0];
        let nw = &z[1];
        ne[E].abs_diff(ne[N]) + ne[W].abs_diff(ne[S]) + nw[E].abs_diff(nw[S]) + nw[W].abs_diff(nw[N])
    }
}

fn dir_of(a: fpp_env::Site, b: fpp_env::Site) -> Option<usize> {
    match (b.x - a.x, b.y - a.y) {
        (0, 1) => Some(N),
        (1, 0) => Some(E),
        (0, -1) => Some(S),
        (-1, 0) => Some(W),
        _ => None,
    }
}

/// Φ for each bond of `bonds`: the orientation of the zigzag highway
/// holding its component segment, `None` for non-zigzag bonds. A singleton
/// bond lying in highways of both orientations gets SW/NE.
pub fn phi(zigzags: &[Highway], bonds: &[Bond]) -> Vec<Option<DiagOrientation>> {
    let owners: Vec<Vec<usize>> = bonds.iter().map(|&e| (0..zigzags.len()).filter(|&h| zigzags[h].contains_bond(e)).collect()).collect();
    (0..bonds.len())
        .map(|i| match owners[i].len() {
            0 => None,
            1 => zigzags[owners[i][0]].orient,
            _ => {
                let shared = |j: usize| owners[i].iter().copied().find(|h| owners[j].contains(h));
                let h = (i > 0).then(|| shared(i - 1)).flatten().or_else(|| (i + 1 < bonds.len()).then(|| shared(i + 1)).flatten());
                match h {
                    Some(h) => zigzags[h].orient,
                    None => Some(DiagOrientation::SwNe),
                }
            }
        })
        .collect()
}

pub fn path_counters(zigzags: &[Highway], path: &LatticePath) -> PathCounters {
    let bonds: Vec<Bond> = path.bonds().collect();
    let ph = phi(zigzags, &bonds);
    let mut c = PathCounters::default();
    for (i, w) in path.sites.windows(2).enumerate() {
        let e = bonds[i];
        if e.is_horizontal() {
            c.n_h += 1;
        } else if e.is_vertical() {
            c.n_v += 1;
        }
        let d = dir_of(w[0], w[1]);
        match ph[i] {
            Some(o) => {
                c.n_z += 1;
                if let Some(d) = d {
                    c.z[o.index()][d] += 1;
                }
            }
            None => {
                c.n_b += 1;
                if let Some(d) = d {
                    c.b[d] += 1;
                }
            }
        }
    }
    for h in zigzags {
        let hits: Vec<usize> = (0..bonds.len()).filter(|&i| h.contains_bond(bonds[i])).collect();
        let redundant = hits.len() == 1 && ph[hits[0]] != h.orient;
        if !hits.is_empty() && !redundant {
            c.n_hi += 1;
        }
    }
    c.d = PathCounters::d_of(&c.z);
    c
}
