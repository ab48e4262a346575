//! Directional speeds, flatness of the shape between axis and diagonal, and
//! wet-region snapshots.

use fpp_env::{Rect, Site};
use fpp_field::{BondField, FullEnvironment, SimpleEnvironment};
use fpp_geodesic::{geodesic_tree, GeodesicTree};
use fpp_params::ModelParams;
use serde::{Deserialize, Serialize};

/// Fraction of the smallest radii left out of each fit.
pub const DEFAULT_DROP: f64 = 0.2;

#[derive(Debug, thiserror::Error)]
pub enum ShapeError {
    #[error("radius {0} along {1:?} leaves the window {2:?}")]
    OutsideWindow(i64, (f64, f64), Rect),
    #[error("site {0:?} is unreachable")]
    Unreachable(Site),
    #[error("need at least three radii after dropping, got {0}")]
    TooFew(usize),
    #[error("{0}")]
    Build(String),
}

/// Passage-time tree from the origin over `Rect::centered(radius + 2)`.
pub fn origin_tree(params: &ModelParams, seed: u64, radius: i64, cutoff: u32) -> Result<GeodesicTree, ShapeError> {
    let w = Rect::centered(radius + 2);
    let field = match params {
        ModelParams::Simple(p) => BondField::simple(&SimpleEnvironment::build(seed, p, w, cutoff).map_err(|e| ShapeError::Build(e.to_string()))?, w),
        ModelParams::Full(p) => BondField::full(&FullEnvironment::build(seed, p, w, cutoff).map_err(|e| ShapeError::Build(e.to_string()))?, w),
    };
    geodesic_tree(&field, Site::new(0, 0), None).map_err(|e| ShapeError::Build(e.to_string()))
}

/// Least-squares line T(0, round(n v)) = slope * n + intercept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedFit {
    pub direction: (f64, f64),
    /// Passage time per unit of `direction`, i.e. mu(direction).
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub radii: Vec<i64>,
    pub times: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl SpeedFit {
    /// Euclidean speed, 1 / mu of the unit vector.
    pub fn speed(&self) -> f64 {
        self.direction.0.hypot(self.direction.1) / self.slope
    }
}

fn target(dir: (f64, f64), n: i64) -> Site {
    Site::new((dir.0 * n as f64).round() as i64, (dir.1 * n as f64).round() as i64)
}

/// Fits passage times along `dir` over `radii`, after dropping the smallest
/// `drop` fraction of them.
pub fn estimate_mu(tree: &GeodesicTree, dir: (f64, f64), radii: &[i64], drop: f64) -> Result<SpeedFit, ShapeError> {
    let mut rs: Vec<i64> = radii.to_vec();
    rs.sort_unstable();
    rs.dedup();
    let skip = (rs.len() as f64 * drop).floor() as usize;
    let rs: Vec<i64> = rs.into_iter().skip(skip).collect();
    if rs.len() < 3 {
        return Err(ShapeError::TooFew(rs.len()));
    }
    let root = tree.root;
    let mut times = Vec::with_capacity(rs.len());
    for &n in &rs {
        let t = target(dir, n);
        let s = root.offset(t.x, t.y);
        if !tree.rect.contains(s) {
            return Err(ShapeError::OutsideWindow(n, dir, tree.rect));
        }
        times.push(tree.tau_to(s).ok_or(ShapeError::Unreachable(s))?);
    }
    let xs: Vec<f64> = rs.iter().map(|&n| n as f64).collect();
    let (slope, intercept, stderr) = least_squares(&xs, &times);
    let residuals = xs.iter().zip(&times).map(|(x, y)| y - (slope * x + intercept)).collect();
    Ok(SpeedFit { direction: dir, slope, intercept, stderr, radii: rs, times, residuals })
}

/// Slope, intercept and the slope's standard error.
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    let se = if x.len() > 2 { (sse / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    (slope, intercept, se)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatRow {
    pub r: i64,
    pub s: i64,
    pub measured: f64,
    pub predicted: f64,
    pub rel_dev: f64,
}

/// T(0, (r, s)) against 0.9(r - s) + 1.4 s for 0 <= s <= r.
pub fn flatness_check(tree: &GeodesicTree, r: i64, s_grid: &[i64]) -> Result<Vec<FlatRow>, ShapeError> {
    s_grid
        .iter()
        .filter(|&&s| (0..=r).contains(&s))
        .map(|&s| {
            let x = tree.root.offset(r, s);
            if !tree.rect.contains(x) {
                return Err(ShapeError::OutsideWindow(r, (1.0, s as f64 / r as f64), tree.rect));
            }
            let measured = tree.tau_to(x).ok_or(ShapeError::Unreachable(x))?;
            let predicted = 0.9 * (r - s) as f64 + 1.4 * s as f64;
            Ok(FlatRow { r, s, measured, predicted, rel_dev: (measured - predicted) / predicted })
        })
        .collect()
}

/// Mean absolute relative deviation over a flatness table.
pub fn mean_abs_dev(rows: &[FlatRow]) -> f64 {
    rows.iter().map(|r| r.rel_dev.abs()).sum::<f64>() / rows.len().max(1) as f64
}

/// Wet region at time t: sites reached by t, with the reach along each
/// reference direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WetSnapshot {
    pub t: f64,
    pub area: u64,
    /// Largest n with T(0, round(n v)) <= t, per direction.
    pub reach: Vec<i64>,
}

pub fn wet_snapshot(tree: &GeodesicTree, t: f64, dirs: &[(f64, f64)]) -> WetSnapshot {
    let area = tree.dist.iter().zip(&tree.reached).filter(|(d, &r)| r && d.value() <= t).count() as u64;
    let reach = dirs
        .iter()
        .map(|&d| {
            let mut best = 0;
            for n in 1.. {
                let p = target(d, n);
                let s = tree.root.offset(p.x, p.y);
                match tree.tau_to(s) {
                    Some(x) if tree.rect.contains(s) => {
                        if x <= t {
                            best = n;
                        }
                    }
                    _ => break,
                }
            }
            best
        })
        .collect();
    WetSnapshot { t, area, reach }
}

/// Unit lattice directions: E, NE, N, NW, W, SW, S, SE.
pub const OCTANTS: [(f64, f64); 8] = [(1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (-1.0, 1.0), (-1.0, 0.0), (-1.0, -1.0), (0.0, -1.0), (1.0, -1.0)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeEstimate {
    pub model: String,
    pub seed: u64,
    pub radius: i64,
    pub fits: Vec<SpeedFit>,
    pub snapshots: Vec<WetSnapshot>,
}

impl ShapeEstimate {
    pub fn mu(&self, i: usize) -> f64 {
        self.fits[i].slope
    }
}

/// Fits all eight lattice directions out to `radius` (in units of the
/// direction vector, so diagonals reach radius in each coordinate).
pub fn shape_estimate(tree: &GeodesicTree, model: &str, seed: u64, radius: i64, points: usize) -> Result<ShapeEstimate, ShapeError> {
    let step = (radius / points as i64).max(1);
    let radii: Vec<i64> = (1..=points as i64).map(|i| i * step).filter(|&n| n <= radius).collect();
    let fits = OCTANTS.iter().map(|&d| estimate_mu(tree, d, &radii, DEFAULT_DROP)).collect::<Result<Vec<_>, _>>()?;
    let tmax = fits.iter().map(|f| f.times.last().copied().unwrap_or(0.0)).fold(f64::INFINITY, f64::min);
    let snapshots = [0.25, 0.5, 1.0].iter().map(|&f| wet_snapshot(tree, f * tmax, &OCTANTS)).collect();
    Ok(ShapeEstimate {
        model: model.into(),
        seed,
        radius,
        fits,
        snapshots,
    })
}

/// Direction agreement judged across independent environments: per
/// direction the mean of mu over replicates and its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub replicates: usize,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Largest pairwise gap among the axis directions, in combined standard errors.
    pub axis_gap_se: f64,
    pub diagonal_gap_se: f64,
}

impl SymmetryReport {
    pub fn holds(&self, z: f64) -> bool {
        self.axis_gap_se <= z && self.diagonal_gap_se <= z
    }
}

pub fn symmetry_check(estimates: &[ShapeEstimate]) -> SymmetryReport {
    let n = estimates.len();
    let dirs = OCTANTS.len();
    let mut mean = vec![0.0; dirs];
    let mut stderr = vec![0.0; dirs];
    for d in 0..dirs {
        let xs: Vec<f64> = estimates.iter().map(|e| e.fits[d].slope).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        mean[d] = m;
        stderr[d] = (var / n as f64).sqrt();
    }
    let gap = |idx: &[usize]| {
        let mut worst: f64 = 0.0;
        for &a in idx {
            for &b in idx {
                let diff = (mean[a] - mean[b]).abs();
                let se = (stderr[a].powi(2) + stderr[b].powi(2)).sqrt();
                worst = worst.max(if diff == 0.0 { 0.0 } else if se == 0.0 { f64::INFINITY } else { diff / se });
            }
        }
        worst
    };
    SymmetryReport { replicates: n, axis_gap_se: gap(&[0, 2, 4, 6]), diagonal_gap_se: gap(&[1, 3, 5, 7]), mean, stderr }
}

/// Vertices of the limiting octagon, by model, as points of the unit ball
/// B = {x : mu(x) <= 1}.
pub fn ideal_octagon(model: &str) -> Vec<(f64, f64)> {
    let (a, d) = match model {
        "simple" => (1.0, 1.0 / std::f64::consts::SQRT_2),
        _ => (1.0 / 0.9, 1.0 / 1.4),
    };
    OCTANTS.iter().enumerate().map(|(i, &(x, y))| if i % 2 == 0 { (a * x, a * y) } else { (d * x, d * y) }).collect()
}

pub fn shape_csv(e: &ShapeEstimate) -> String {
    let mut s = String::from("dx,dy,mu,stderr,speed\n");
    for f in &e.fits {
        s.push_str(&format!("{},{},{:.6},{:.6},{:.6}\n", f.direction.0, f.direction.1, f.slope, f.stderr, f.speed()));
    }
    s
}

/// Estimated unit ball (points v / mu(v)) over the ideal octagon.
pub fn shape_svg(e: &ShapeEstimate, scale: f64) -> String {
    let c = 1.6 * scale;
    let poly = |pts: &[(f64, f64)]| pts.iter().map(|(x, y)| format!("{:.2},{:.2}", c + x * scale, c - y * scale)).collect::<Vec<_>>().join(" ");
    let est: Vec<(f64, f64)> = e.fits.iter().map(|f| (f.direction.0 / f.slope, f.direction.1 / f.slope)).collect();
    let side = 2.0 * c;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side:.0}\" height=\"{side:.0}\">\n\
         <polygon points=\"{}\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n\
         <polygon points=\"{}\" fill=\"none\" stroke=\"#c00\"/>\n\
         <circle cx=\"{c:.2}\" cy=\"{c:.2}\" r=\"2\"/>\n</svg>\n",
        poly(&ideal_octagon(&e.model)),
        poly(&est)
    )
}
