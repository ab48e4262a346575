use fpp_env::{Bond, BondDir, Highway, Rect, Site};
use fpp_field::{BondField, Cost, FullEnvironment, SimpleEnvironment};
use fpp_params::{load_preset, FullParams, ModelParams, SimpleParams};
use fpp_thinning::Fate;
use fpp_validators::*;

fn full() -> FullParams {
    match load_preset("full-A").unwrap() {
        ModelParams::Full(p) => p,
        _ => unreachable!(),
    }
}

fn simple() -> SimpleParams {
    match load_preset("simple-B").unwrap() {
        ModelParams::Simple(p) => p,
        _ => unreachable!(),
    }
}

fn sampled(seed: u64, half: i64, cutoff: u32) -> (FullEnvironment, BondField) {
    let w = Rect::centered(half);
    let e = FullEnvironment::build(seed, &full(), w, cutoff).unwrap();
    let f = BondField::full(&e, w);
    (e, f)
}

#[test]
fn sampled_environments_pass() {
    for seed in 0..4 {
        let (e, f) = sampled(seed, 96, 8);
        let r = validate_environment_with(&e, &f, 2000);
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.checks.iter().map(|c| c.id).collect::<String>(), "abcdefgh");
        assert!(r.checks.iter().all(|c| c.counterexample.is_none()));
        assert!(r.check('d').unwrap().examined > 0 && r.check('g').unwrap().examined > 0);
    }
}

#[test]
fn undeleting_a_stage1_victim_fails_separation() {
    let (mut e, _) = sampled(2, 96, 8);
    let (victim, by) = e
        .thinning
        .provenance
        .iter()
        .find_map(|p| match p.fate {
            Fate::Stage1 { by } if p.raw.meets(&e.window) => Some((p.raw, e.thinning.provenance[by].raw)),
            _ => None,
        })
        .expect("a stage-1 victim in the window");
    e.thinning.stage3.highways.push(victim);
    let f = BondField::full(&e, e.window);
    let r = validate_environment_with(&e, &f, 500);
    let a = r.check('a').unwrap();
    assert!(!a.passed);
    let ce = a.counterexample.as_ref().unwrap();
    assert_eq!(ce.highways.len(), 2);
    assert!(ce.highways.contains(&victim));
    assert!(ce.highways[0].dist(&ce.highways[1]) <= 22 && ce.value <= 22.0);
    assert!(victim.dist(&by) <= 22);
    // the report stays well formed
    let back: ValidationReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn counterexample_is_the_closest_pair() {
    use fpp_env::{DiagOrientation, StartType};
    let z = |x: i64, u: f64| Highway::zigzag(DiagOrientation::SwNe, StartType::H, 3, Site::new(x, -20), 40, u);
    let mut e = FullEnvironment::from_parts(0, &full(), Rect::centered(30), 6, vec![z(0, 0.9)], vec![]);
    // two planted intruders at different distances
    e.thinning.stage3.highways.extend([z(10, 0.1), z(4, 0.2)]);
    let f = BondField::full(&e, e.window);
    let r = validate_environment_with(&e, &f, 10);
    let a = r.check('a').unwrap();
    assert_eq!(a.failures, 3);
    let ce = a.counterexample.as_ref().unwrap();
    assert_eq!(ce.value, z(0, 0.0).dist(&z(4, 0.0)) as f64);
    assert!(ce.highways.contains(&z(0, 0.9)) && ce.highways.contains(&z(4, 0.2)));
}

#[test]
fn restoring_a_stage2_victim_fails_sharing() {
    let p = full();
    use fpp_env::{DiagOrientation, StartType};
    let z = Highway::zigzag(DiagOrientation::SwNe, StartType::H, 2, Site::new(-6, -6), 12, 0.5);
    let hv = Highway::horizontal(p.stage2_threshold(2), Site::new(-10, z.bond(5).base.y), 20);
    let mut e = FullEnvironment::from_parts(0, &p, Rect::centered(20), 6, vec![z], vec![hv]);
    assert!(e.zigzags().is_empty());
    e.thinning.stage3.highways.push(z);
    let f = BondField::full(&e, e.window);
    let r = validate_environment_with(&e, &f, 100);
    let b = r.check('b').unwrap();
    assert!(!b.passed);
    let ce = b.counterexample.as_ref().unwrap();
    assert_eq!(ce.highways, vec![z]);
    // the first shared bond along the zigzag, in lattice order
    let shared: Vec<Bond> = z.bonds().filter(|&x| hv.contains_bond(x)).collect();
    assert_eq!(ce.bonds[0], *shared.iter().min().unwrap());
}

#[test]
fn empty_environment_passes_vacuously() {
    let w = Rect::centered(40);
    let e = FullEnvironment::from_parts(9, &full(), w, 8, vec![], vec![]);
    let f = BondField::full(&e, w);
    let r = validate_environment(&e, &f);
    assert!(r.passed(), "{}", r.to_json());
    for id in ['a', 'b', 'c', 'd'] {
        let c = r.check(id).unwrap();
        assert!(c.passed && c.failures == 0);
    }
    assert_eq!(r.check('d').unwrap().examined, 0);
    // every bond is a backroad, so each path costs at least 1.0 per bond
    for i in 0..50 {
        let path = random_path(&f, 9, i);
        let sum: i64 = path.windows(2).map(|s| f.cost(Bond::between(s[0], s[1]).unwrap()).unwrap().tenths).sum();
        assert!(sum >= 10 * (path.len() as i64 - 1));
    }
}

#[test]
fn corrupted_bond_times_are_caught() {
    let (e, mut f) = sampled(5, 48, 7);
    let b = Bond::new(Site::new(3, -2), BondDir::E);
    let c = f.cost(b).unwrap();
    f.set_cost(b, Cost::new(c.tenths, 0.35));
    let r = validate_environment_with(&e, &f, 200);
    let ff = r.check('f').unwrap();
    assert_eq!(ff.failures, 1);
    assert_eq!(ff.counterexample.as_ref().unwrap().bonds, vec![b]);
    assert!(r.check('g').unwrap().passed);

    // a cheap bond everywhere along a row breaks the path bound and the taxonomy
    let (e, mut f) = sampled(5, 48, 7);
    for x in -40..40 {
        f.set_cost(Bond::new(Site::new(x, 0), BondDir::E), Cost::new(3, 0.0));
    }
    let r = validate_environment_with(&e, &f, 4000);
    assert!(!r.check('g').unwrap().passed);
    let ep = r.check('e').unwrap();
    assert!(!ep.passed);
    let ce = ep.counterexample.as_ref().unwrap();
    // shrunk to a single bond: 0.3 < 0.5
    assert_eq!(ce.sites.len(), 2);
    assert!(ce.value < ce.bound);
}

#[test]
fn reports_are_reproducible() {
    let run = || {
        let (e, f) = sampled(13, 48, 7);
        validate_environment_with(&e, &f, 500).to_json()
    };
    assert_eq!(run(), run());
    let (e1, _) = sampled(13, 48, 7);
    let (e2, _) = sampled(14, 48, 7);
    assert_ne!(full_fingerprint(&e1), full_fingerprint(&e2));
}

#[test]
fn simple_environments_validate() {
    let p = simple();
    let w = Rect::centered(64);
    let e = SimpleEnvironment::build(3, &p, w, 8).unwrap();
    let mut f = BondField::simple(&e, w);
    let r = validate_simple(&e, &f);
    assert!(r.passed(), "{}", r.to_json());
    let b = Bond::new(Site::new(0, 0), BondDir::NE);
    f.set_cost(b, Cost::new(5, 0.0));
    let r = validate_simple(&e, &f);
    assert!(!r.passed());
    assert_eq!(r.checks[0].counterexample.as_ref().unwrap().bonds, vec![b]);
}

#[test]
fn slowdown_bound_covers_every_class() {
    let (e, f) = sampled(1, 48, 8);
    let r = validate_environment_with(&e, &f, 10);
    let h = r.check('h').unwrap();
    assert!(h.passed && h.examined > 1000);
    // a highway past the length cap of its class breaks the bound
    let long = Highway::horizontal(1, Site::new(-40, 3), 40);
    let e = FullEnvironment::from_parts(1, &full(), Rect::centered(48), 8, vec![], vec![long]);
    let f = BondField::full(&e, e.window);
    let h = validate_environment_with(&e, &f, 10).check('h').unwrap().clone();
    assert!(!h.passed);
    assert_eq!(h.counterexample.unwrap().highways, vec![long]);
}
