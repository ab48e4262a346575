use fpp_analytics::density::{bond_membership, stage2_rates};
use fpp_analytics::*;
use fpp_env::Rect;
use fpp_params::{load_preset, FullParams, ModelParams, SimpleParams};

fn simple() -> SimpleParams {
    match load_preset("simple-B").unwrap() {
        ModelParams::Simple(p) => p,
        _ => unreachable!(),
    }
}

fn full() -> FullParams {
    match load_preset("full-A").unwrap() {
        ModelParams::Full(p) => p,
        _ => unreachable!(),
    }
}

#[test]
fn simple_sampler_is_calibrated() {
    let seeds: Vec<u64> = (0..4000).collect();
    let r = simple_density_checks(&simple(), &seeds, &[1, 2, 3, 4, 6]);
    assert!(r.failures().is_empty(), "{}", r.csv());
    assert!(r.rows.iter().any(|row| row.name == "level_crossing_site" && !row.enforced));
}

#[test]
fn full_sampler_is_calibrated() {
    let seeds: Vec<u64> = (0..128).collect();
    let r = full_density_checks(&full(), &seeds, &[1, 2, 3]);
    assert!(r.failures().is_empty(), "{}", r.csv());
    assert!(r.rows.iter().any(|row| row.name == "stage2_deletion_rate"));
}

#[test]
fn a_miscalibrated_reference_is_flagged() {
    let seeds: Vec<u64> = (0..4000).collect();
    let mut row = bond_membership(&seeds, 0.8, 2);
    assert!(row.within_3sigma);
    // the same hits judged against a different theta
    let other = bond_membership(&seeds, 0.6, 2);
    row.reference = other.reference;
    let z = (row.estimate - row.reference).abs() / row.stderr;
    assert!(z > 3.0);
}

#[test]
fn stage2_rates_stay_under_the_bound() {
    let rows = stage2_rates(&full(), &[0, 1, 2, 3], Rect::centered(64), 6);
    assert!(!rows.is_empty());
    for r in rows {
        assert!(r.within_3sigma, "{r:?}");
        assert!((0.0..=1.0).contains(&r.estimate));
    }
}
