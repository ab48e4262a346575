use fpp_env::*;
use fpp_params::{load_preset, FullParams, ModelParams, SimpleParams};
use proptest::prelude::*;

fn full() -> FullParams {
    match load_preset("full-A").unwrap() {
        ModelParams::Full(f) => f,
        _ => unreachable!(),
    }
}

fn simple() -> SimpleParams {
    match load_preset("simple-B").unwrap() {
        ModelParams::Simple(s) => s,
        _ => unreachable!(),
    }
}

fn within_sigmas(observed: f64, mean: f64, var: f64, z: f64) -> bool {
    (observed - mean).abs() <= z * var.sqrt()
}

#[test]
fn zigzag_anchor_density_matches_slot_law() {
    let f = full();
    let r = Rect::new(0, 0, 63, 63);
    let seeds = 20u64;
    for k in 1..=2u32 {
        let p = zigzag_prob(f.theta(), k);
        let per_fam = r.area() as f64 * Family::ZIGZAG[0].lengths(k) as f64 * seeds as f64;
        for fam in Family::ZIGZAG {
            let mut n = 0usize;
            for s in 0..seeds {
                n += sample_family(s, fam, k, p, &r).iter().filter(|h| r.contains(h.anchor)).count();
            }
            let mean = per_fam * p;
            assert!(within_sigmas(n as f64, mean, per_fam * p * (1.0 - p), 3.0), "{fam:?} k={k}: {n} vs {mean}");
        }
    }
}

#[test]
fn hv_and_simple_densities() {
    let f = full();
    let sp = simple();
    let r = Rect::new(-40, -40, 39, 39);
    let seeds = 30u64;
    for k in 1..=3u32 {
        let p = hv_prob(f.thetatilde(), k);
        let slots = r.area() as f64 * (1u64 << k) as f64 * seeds as f64;
        for fam in Family::HV {
            let n: usize = (0..seeds).map(|s| sample_family(s, fam, k, p, &r).iter().filter(|h| r.contains(h.anchor)).count()).sum();
            assert!(within_sigmas(n as f64, slots * p, slots * p * (1.0 - p), 3.0), "{fam:?} k={k}");
        }
        let p = simple_prob(sp.theta, k);
        let slots = r.area() as f64 * seeds as f64;
        for fam in Family::DIAGONAL {
            let n: usize = (0..seeds).map(|s| sample_family(s, fam, k, p, &r).iter().filter(|h| r.contains(h.anchor)).count()).sum();
            assert!(within_sigmas(n as f64, slots * p, slots * p * (1.0 - p), 3.0), "{fam:?} k={k}");
        }
    }
}

#[test]
fn bond_in_class_k_highway_probability() {
    // P(fixed bond lies in some class-1 simple SW/NE diagonal) = (theta/2)
    let sp = simple();
    let b = Bond::new(Site::new(0, 0), BondDir::NE);
    let r = Rect::new(0, 0, 1, 1);
    let trials = 20_000u64;
    let p = simple_prob(sp.theta, 1);
    let hits = (0..trials)
        .filter(|&s| sample_family(s, Family::DIAGONAL[0], 1, p, &r).iter().any(|h| h.contains_bond(b)))
        .count();
    assert!(within_sigmas(hits as f64, trials as f64 * p, trials as f64 * p * (1.0 - p), 3.0));
}

fn ks_uniform(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n) - x))
        .fold(0.0, f64::max)
}

#[test]
fn marks_are_uniform() {
    let r = Rect::new(0, 0, 99, 99);
    let mut xi = Vec::new();
    let mut xp = Vec::new();
    for s in r.sites() {
        for d in [BondDir::E, BondDir::N] {
            let (a, b) = bond_marks(42, Bond::new(s, d));
            xi.push(a);
            xp.push(b);
        }
    }
    let crit = 1.63 / (xi.len() as f64).sqrt();
    assert!(ks_uniform(xi) < crit);
    assert!(ks_uniform(xp) < crit);
    let ranks: Vec<f64> = sample_zigzag(3, &full(), Rect::centered(60), 2).unwrap().highways.iter().map(|h| h.rank_mark).collect();
    assert!(ranks.len() > 500);
    assert!(ks_uniform(ranks.clone()) < 1.63 / (ranks.len() as f64).sqrt());
}

#[test]
fn truncation_bound_decreases() {
    let th = full().theta();
    assert!(truncation_bound(th, 8) < truncation_bound(th, 4));
    assert!((truncation_bound(0.5, 1) - 0.5).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn any_two_windows_agree_on_their_overlap(seed in 0u64..1000, ax in -50i64..50, ay in -50i64..50, bx in -50i64..50, by in -50i64..50, w in 5i64..40) {
        let f = full();
        let a = Rect::new(ax, ay, ax + w, ay + w);
        let b = Rect::new(bx, by, bx + w, by + 2 * w);
        let ov = Rect::new(a.x0.max(b.x0), a.y0.max(b.y0), a.x1.min(b.x1), a.y1.min(b.y1));
        prop_assume!(!ov.is_empty());
        let key = |v: Vec<Highway>| {
            let mut s: Vec<String> = v.into_iter().filter(|h| h.meets(&ov)).map(|h| format!("{h:?}")).collect();
            s.sort();
            s
        };
        prop_assert_eq!(key(sample_zigzag(seed, &f, a, 3).unwrap().highways), key(sample_zigzag(seed, &f, b, 3).unwrap().highways));
        prop_assert_eq!(key(sample_hv(seed, &f, a, 3).unwrap().highways), key(sample_hv(seed, &f, b, 3).unwrap().highways));
    }

    #[test]
    fn every_sampled_highway_meets_the_region(seed in 0u64..1000, r in 1i64..30) {
        let rect = Rect::centered(r);
        for h in sample_simple(seed, &simple(), rect, 4).unwrap().highways {
            prop_assert!(h.meets(&rect));
        }
    }
}
