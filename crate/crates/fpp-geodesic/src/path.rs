use crate::dijkstra::{run, GeodesicTree};
use crate::GeoError;
use fpp_env::{Bond, Rect, Site};
use fpp_field::{BondField, Cost};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    N,
    E,
    S,
    W,
    NE,
    NW,
    SE,
    SW,
}

impl Step {
    pub fn from_delta(dx: i64, dy: i64) -> Option<Step> {
        Some(match (dx, dy) {
            (0, 1) => Step::N,
            (1, 0) => Step::E,
            (0, -1) => Step::S,
            (-1, 0) => Step::W,
            (1, 1) => Step::NE,
            (-1, 1) => Step::NW,
            (1, -1) => Step::SE,
            (-1, -1) => Step::SW,
            _ => return None,
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            Step::N => "N",
            Step::E => "E",
            Step::S => "S",
            Step::W => "W",
            Step::NE => "NE",
            Step::NW => "NW",
            Step::SE => "SE",
            Step::SW => "SW",
        }
    }
}

/// A nearest-neighbour path with its passage time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticePath {
    pub sites: Vec<Site>,
    pub total: Cost,
}

impl LatticePath {
    pub fn total_tau(&self) -> f64 {
        self.total.value()
    }

    pub fn len(&self) -> usize {
        self.sites.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn steps(&self) -> Vec<Step> {
        self.sites.windows(2).filter_map(|w| Step::from_delta(w[1].x - w[0].x, w[1].y - w[0].y)).collect()
    }

    pub fn bonds(&self) -> impl Iterator<Item = Bond> + '_ {
        self.sites.windows(2).filter_map(|w| Bond::between(w[0], w[1]))
    }

    pub fn is_self_avoiding(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.sites.len());
        self.sites.iter().all(|s| seen.insert(*s))
    }
}

/// Sum of bond costs along `sites`, in traversal order.
pub fn path_cost(field: &BondField, sites: &[Site]) -> Result<Cost, GeoError> {
    let mut c = Cost::ZERO;
    for w in sites.windows(2) {
        let b = Bond::between(w[0], w[1]).ok_or(GeoError::NotABond(w[0], w[1]))?;
        c += field.cost(b).ok_or(GeoError::NotABond(w[0], w[1]))?;
    }
    Ok(c)
}

pub fn shortest_path(field: &BondField, from: Site, to: Site) -> Result<LatticePath, GeoError> {
    for s in [from, to] {
        if !field.rect.contains(s) {
            return Err(GeoError::OutsideWindow(s));
        }
    }
    if from == to {
        return Ok(LatticePath { sites: vec![from], total: Cost::ZERO });
    }
    let t = run(field, from, Some(to));
    let sites = t.path_to(to).ok_or(GeoError::Unreachable(to))?;
    let total = t.dist_to(to).expect("reached");
    Ok(LatticePath { sites, total })
}

/// Full single-source tree restricted to `window` (clipped to the field).
pub fn geodesic_tree(field: &BondField, root: Site, window: Option<Rect>) -> Result<GeodesicTree, GeoError> {
    if !field.rect.contains(root) {
        return Err(GeoError::OutsideWindow(root));
    }
    match window {
        Some(w) if w != field.rect => {
            let r = Rect::new(w.x0.max(field.rect.x0), w.y0.max(field.rect.y0), w.x1.min(field.rect.x1), w.y1.min(field.rect.y1));
            if !r.contains(root) {
                return Err(GeoError::OutsideWindow(root));
            }
            Ok(run(&restrict(field, r), root, None))
        }
        _ => Ok(run(field, root, None)),
    }
}

fn restrict(field: &BondField, r: Rect) -> BondField {
    let mut f = BondField::constant(r, field.model, Cost::ZERO);
    for b in f.bonds().collect::<Vec<_>>() {
        f.set_cost(b, field.cost(b).expect("sub-rectangle"));
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpp_field::Model;

    fn unit(model: Model) -> BondField {
        BondField::constant(Rect::new(-2, -2, 6, 6), model, Cost::new(10, 0.0))
    }

    #[test]
    fn unit_weights_give_l1_distance() {
        let p = shortest_path(&unit(Model::Full), Site::new(0, 0), Site::new(3, 2)).unwrap();
        assert_eq!(p.total, Cost::new(50, 0.0));
        assert_eq!(p.len(), 5);
        assert!(p.is_self_avoiding());
        assert_eq!(path_cost(&unit(Model::Full), &p.sites).unwrap(), p.total);
    }

    #[test]
    fn same_site_is_trivial() {
        let p = shortest_path(&unit(Model::Full), Site::new(1, 1), Site::new(1, 1)).unwrap();
        assert_eq!(p.sites, vec![Site::new(1, 1)]);
        assert_eq!(p.total_tau(), 0.0);
    }

    #[test]
    fn outside_is_error() {
        let e = shortest_path(&unit(Model::Full), Site::new(0, 0), Site::new(30, 0)).unwrap_err();
        assert_eq!(e, GeoError::OutsideWindow(Site::new(30, 0)));
    }

    #[test]
    fn tree_edges_and_restriction() {
        let f = unit(Model::Simple);
        let t = geodesic_tree(&f, Site::new(0, 0), None).unwrap();
        assert_eq!(t.edges(), t.reached_count() - 1);
        assert_eq!(t.reached_count() as u64, f.rect.area());
        let w = Rect::new(0, 0, 3, 3);
        let t = geodesic_tree(&f, Site::new(0, 0), Some(w)).unwrap();
        assert_eq!(t.reached_count(), 16);
        assert_eq!(t.tau_to(Site::new(3, 3)).map(|x| (x * 10.0).round()), Some(30.0));
    }

    #[test]
    fn steps_follow_sites() {
        let p = LatticePath { sites: vec![Site::new(0, 0), Site::new(1, 1), Site::new(1, 2), Site::new(0, 2)], total: Cost::ZERO };
        assert_eq!(p.steps(), vec![Step::NE, Step::N, Step::W]);
    }
}
