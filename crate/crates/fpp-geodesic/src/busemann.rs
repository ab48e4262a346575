use crate::dijkstra::run;
use crate::path::LatticePath;
use fpp_env::Site;
use fpp_field::BondField;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;

/// Finite-range Busemann differences T(x, x_n) − T(y, x_n).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BusemannEstimate {
    pub partials: Vec<f64>,
    pub value: f64,
}

/// Ray sites outside the field or unreachable from either endpoint are skipped.
pub fn busemann_estimate(field: &BondField, x: Site, y: Site, ray: &[Site]) -> BusemannEstimate {
    let tx = run(field, x, None);
    let ty = if x == y { tx.clone() } else { run(field, y, None) };
    let partials: Vec<f64> = ray
        .iter()
        .filter_map(|&s| {
            let (a, b) = (tx.dist_to(s)?, ty.dist_to(s)?);
            Some((a.tenths - b.tenths) as f64 * 0.1 + (a.sigma - b.sigma))
        })
        .collect();
    let value = partials.last().copied().unwrap_or(0.0);
    BusemannEstimate { partials, value }
}

/// E, NE, N, NW, W, SW, S, SE.
pub const REFERENCE_DIRS: [&str; 8] = ["E", "NE", "N", "NW", "W", "SW", "S", "SE"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirStats {
    /// Unit vectors of x_n − x_0 for n ≥ 1.
    pub unit: Vec<(f64, f64)>,
    /// Max angular deviation (radians) over the tail from each reference direction.
    pub tail_max_dev: [f64; 8],
    /// Reference direction with the smallest tail deviation.
    pub nearest: usize,
    pub tail_start: usize,
}

impl DirStats {
    pub fn nearest_dev(&self) -> f64 {
        self.tail_max_dev[self.nearest]
    }

    /// Smallest tail deviation among E, N, W, S.
    pub fn axis_dev(&self) -> f64 {
        [0, 2, 4, 6].iter().map(|&i| self.tail_max_dev[i]).fold(f64::INFINITY, f64::min)
    }
}

fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * std::f64::consts::PI);
    d.min(2.0 * std::f64::consts::PI - d)
}

/// Running direction statistics; the tail is the second half of the path.
pub fn directedness(path: &LatticePath) -> DirStats {
    assert!(path.sites.len() >= 2, "directedness needs at least one step");
    let o = path.sites[0];
    let unit: Vec<(f64, f64)> = path.sites[1..]
        .iter()
        .map(|s| {
            let (dx, dy) = ((s.x - o.x) as f64, (s.y - o.y) as f64);
            let r = dx.hypot(dy);
            if r == 0.0 {
                (0.0, 0.0)
            } else {
                (dx / r, dy / r)
            }
        })
        .collect();
    let tail_start = unit.len() / 2;
    let mut dev = [0.0f64; 8];
    for &(ux, uy) in &unit[tail_start..] {
        if ux == 0.0 && uy == 0.0 {
            continue;
        }
        let a = uy.atan2(ux);
        for (k, d) in dev.iter_mut().enumerate() {
            *d = d.max(angle_diff(a, k as f64 * FRAC_PI_4));
        }
    }
    let nearest = (0..8).min_by(|&i, &j| dev[i].total_cmp(&dev[j])).unwrap();
    DirStats { unit, tail_max_dev: dev, nearest, tail_start }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpp_env::Rect;
    use fpp_field::{Cost, Model};

    fn lp(sites: Vec<Site>) -> LatticePath {
        LatticePath { sites, total: Cost::ZERO }
    }

    #[test]
    fn horizontal_ray_has_zero_e_deviation() {
        let d = directedness(&lp((0..20).map(|x| Site::new(x, 0)).collect()));
        assert_eq!(d.tail_max_dev[0], 0.0);
        assert_eq!(d.nearest, 0);
    }

    #[test]
    fn staircase_converges_to_diagonal() {
        let mut s = vec![Site::new(0, 0)];
        for i in 0..400 {
            let l = *s.last().unwrap();
            s.push(if i % 2 == 0 { l.offset(1, 0) } else { l.offset(0, 1) });
        }
        let d = directedness(&lp(s));
        assert_eq!(REFERENCE_DIRS[d.nearest], "NE");
        assert!(d.nearest_dev() < 0.01);
    }

    #[test]
    fn identical_endpoints_give_zero() {
        let f = BondField::constant(Rect::new(0, 0, 10, 10), Model::Full, Cost::new(7, 0.013));
        let ray: Vec<Site> = (0..=10).map(|x| Site::new(x, 10)).collect();
        let b = busemann_estimate(&f, Site::new(2, 3), Site::new(2, 3), &ray);
        assert!(b.partials.iter().all(|&x| x == 0.0));
        assert_eq!(b.partials.len(), 11);
    }
}
