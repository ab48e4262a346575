//! Exact compensation sums over HV highways and lattice paths.

use crate::field::BondField;
use crate::types::BondType;
use fpp_env::{bond_marks, Bond, Highway, Site};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HvSum {
    pub highway: Highway,
    /// sum of compensated core times ignoring slow flags, in tenths
    pub core_tenths: i64,
    /// sum of the actual alpha*, in tenths
    pub actual_tenths: i64,
    /// first and last bonds are of type hv-only
    pub qualifies: bool,
    pub slow_free: bool,
}

impl HvSum {
    pub fn target(&self) -> i64 {
        9 * self.highway.length as i64
    }

    pub fn core_exact(&self) -> bool {
        self.core_tenths == self.target()
    }

    pub fn core_within_bound(&self) -> bool {
        (self.core_tenths - self.target()).abs() <= 4
    }
}

/// Sums over `h`; `None` unless every bond of `h` lies in the field.
pub fn hv_sum(field: &BondField, h: &Highway) -> Option<HvSum> {
    let mut core = 0i64;
    let mut actual = 0i64;
    let mut slow_free = true;
    for b in h.bonds() {
        core += field.core_tenths(b)? as i64;
        actual += field.alpha_star_tenths(b)? as i64;
        slow_free &= !field.is_slow(b);
    }
    let end_ok = |i: u32| field.bond_type(h.bond(i)) == Some(BondType::HvOnly);
    Some(HvSum { highway: *h, core_tenths: core, actual_tenths: actual, qualifies: end_ok(0) && end_ok(h.length - 1), slow_free })
}

/// Bonds of a site path; `None` if two consecutive sites are not adjacent.
pub fn path_bonds(sites: &[Site]) -> Option<Vec<Bond>> {
    sites.windows(2).map(|w| Bond::between(w[0], w[1])).collect()
}

/// Sum of alpha* along a path in tenths, with the core (slow-free) variant.
pub fn path_alpha_tenths(field: &BondField, sites: &[Site]) -> Option<(i64, i64)> {
    let mut core = 0;
    let mut actual = 0;
    for b in path_bonds(sites)? {
        core += field.core_tenths(b)? as i64;
        actual += field.alpha_star_tenths(b)? as i64;
    }
    Some((core, actual))
}

/// Left side 0.1 sum (etatilde^k + etatilde^k xi_e) and right side
/// 1.6 (2 etatilde)^k of the per-highway HV slowdown bound.
pub fn hv_slowdown_bound(h: &Highway, etatilde: f64, seed: u64) -> (f64, f64) {
    let e = etatilde.powi(h.class as i32);
    let lhs = 0.1 * h.bonds().map(|b| e + e * bond_marks(seed, b).0).sum::<f64>();
    (lhs, 1.6 * (2.0 * etatilde).powi(h.class as i32))
}
