use crate::path::{path_cost, LatticePath};
use crate::GeoError;
use fpp_env::{Highway, Site};
use fpp_field::BondField;
use std::collections::HashMap;

/// Geometry of a canonical comparison path.
#[derive(Clone, Debug)]
pub enum CanonicalCase {
    /// `a` and `b` share a horizontal or vertical line.
    Collinear,
    /// Follow the straight highway `j` from `a` to the zigzag highway `h`,
    /// then follow `h` to `b`. Sites of `h` strictly between the two
    /// `blocked` sites are inaccessible.
    Turn { j: Highway, h: Highway, blocked: Option<(Site, Site)> },
}

fn straight(a: Site, b: Site) -> Vec<Site> {
    let (dx, dy) = ((b.x - a.x).signum(), (b.y - a.y).signum());
    let n = (b.x - a.x).abs().max((b.y - a.y).abs());
    (0..=n).map(|i| a.offset(dx * i, dy * i)).collect()
}

fn erase_loops(sites: Vec<Site>) -> Vec<Site> {
    let mut out: Vec<Site> = Vec::with_capacity(sites.len());
    let mut pos: HashMap<Site, usize> = HashMap::new();
    for s in sites {
        if let Some(&i) = pos.get(&s) {
            for t in out.drain(i + 1..) {
                pos.remove(&t);
            }
        } else {
            pos.insert(s, out.len());
            out.push(s);
        }
    }
    out
}

pub fn canonical_path(field: &BondField, a: Site, b: Site, case: &CanonicalCase) -> Result<LatticePath, GeoError> {
    let sites = match case {
        CanonicalCase::Collinear => {
            if a.x != b.x && a.y != b.y {
                return Err(GeoError::NotOnHighway(b));
            }
            straight(a, b)
        }
        CanonicalCase::Turn { j, h, blocked } => {
            let ia = j.index_of(a).ok_or(GeoError::NotOnHighway(a))?;
            let ib = h.index_of(b).ok_or(GeoError::NotOnHighway(b))?;
            if let Some((p, q)) = blocked {
                let (ip, iq) = (h.index_of(*p).ok_or(GeoError::NotOnHighway(*p))?, h.index_of(*q).ok_or(GeoError::NotOnHighway(*q))?);
                if ib > ip.min(iq) && ib < ip.max(iq) {
                    return Err(GeoError::Inaccessible(*p, *q));
                }
            }
            // crossing nearest to `a` along `j`
            let ic = (0..=j.length)
                .filter(|&i| h.contains_site(j.site(i)))
                .min_by_key(|&i| ((i as i64 - ia as i64).abs(), i))
                .ok_or(GeoError::NoCrossing)?;
            let ihc = h.index_of(j.site(ic)).expect("crossing");
            let mut v: Vec<Site> = range(ia, ic).map(|i| j.site(i)).collect();
            v.extend(range(ihc, ib).skip(1).map(|i| h.site(i)));
            erase_loops(v)
        }
    };
    let total = path_cost(field, &sites)?;
    Ok(LatticePath { sites, total })
}

fn range(from: u32, to: u32) -> Box<dyn Iterator<Item = u32>> {
    if from <= to {
        Box::new(from..=to)
    } else {
        Box::new((to..=from).rev())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpp_env::{DiagOrientation, Rect, StartType};
    use fpp_field::{Cost, Model};

    fn field() -> BondField {
        BondField::constant(Rect::centered(40), Model::Full, Cost::new(10, 0.0))
    }

    #[test]
    fn collinear_is_straight() {
        let p = canonical_path(&field(), Site::new(-3, 2), Site::new(5, 2), &CanonicalCase::Collinear).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p.total, Cost::new(80, 0.0));
    }

    #[test]
    fn turn_follows_both_highways() {
        let j = Highway::vertical(6, Site::new(0, -20), 40);
        let h = Highway::zigzag(DiagOrientation::SwNe, StartType::H, 5, Site::new(-15, -15), 60, 0.5);
        let b = h.site(50);
        let p = canonical_path(&field(), Site::new(0, -10), b, &CanonicalCase::Turn { j: j.clone(), h: h.clone(), blocked: None }).unwrap();
        assert!(p.is_self_avoiding());
        assert_eq!(p.sites.last(), Some(&b));
        assert!(p.bonds().all(|e| j.contains_bond(e) || h.contains_bond(e)));
        let blocked = Some((h.site(30), h.site(55)));
        let e = canonical_path(&field(), Site::new(0, -10), b, &CanonicalCase::Turn { j, h: h.clone(), blocked }).unwrap_err();
        assert_eq!(e, GeoError::Inaccessible(h.site(30), h.site(55)));
    }
}
