use fpp_env::{DiagOrientation, Highway, Site, StartType};
use fpp_params::{load_preset, FullParams, ModelParams};
use fpp_thinning::*;
use proptest::prelude::*;

fn full() -> FullParams {
    match load_preset("full-A").unwrap() {
        ModelParams::Full(f) => f,
        _ => unreachable!(),
    }
}

fn zigzag() -> impl Strategy<Value = Highway> {
    (any::<bool>(), any::<bool>(), 1u32..5, -60i64..60, -60i64..60, 2u32..80, 0.0f64..1.0).prop_map(|(o, s, k, x, y, len, u)| {
        let o = if o { DiagOrientation::SwNe } else { DiagOrientation::SeNw };
        let s = if s { StartType::H } else { StartType::V };
        Highway::zigzag(o, s, k, Site::new(x, y), len, u)
    })
}

fn horizontal() -> impl Strategy<Value = Highway> {
    (1u32..8, -60i64..60, -60i64..60, 1u32..60).prop_map(|(k, x, y, len)| Highway::horizontal(k, Site::new(x, y), len))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn thinned_configurations_satisfy_the_invariants(zz in prop::collection::vec(zigzag(), 0..40), hv in prop::collection::vec(horizontal(), 0..10)) {
        let p = full();
        let map = HvClassMap::build(&hv);
        let th = Thinning::run(&zz, &map, &p);
        let s3 = &th.stage3.highways;
        for (i, a) in s3.iter().enumerate() {
            prop_assert!(stage2_witness(a, &map, &p).is_none());
            for b in &s3[i + 1..] {
                if a.orient == b.orient {
                    prop_assert!(a.dist(b) >= 23, "{:?} {:?}", a, b);
                } else {
                    prop_assert!(fully_cross_or_apart(a, b), "{:?} {:?}", a, b);
                }
            }
        }
        for (i, a) in th.stage1.highways.iter().enumerate() {
            for b in &th.stage1.highways[i + 1..] {
                if a.orient == b.orient {
                    prop_assert!(a.dist(b) >= 23);
                }
            }
        }
        let rep = th.report();
        let kept: usize = rep.per_class.values().map(|c| c.kept + c.trimmed).sum();
        prop_assert_eq!(kept, s3.len());
        prop_assert_eq!(th.provenance.len(), zz.len());
    }

    #[test]
    fn thinning_is_order_independent(mut zz in prop::collection::vec(zigzag(), 0..30)) {
        let p = full();
        let map = HvClassMap::build(&[]);
        let a = Thinning::run(&zz, &map, &p).stage3.highways;
        zz.reverse();
        let b = Thinning::run(&zz, &map, &p).stage3.highways;
        let (mut a, mut b) = (a, b);
        a.sort_by(rank);
        b.sort_by(rank);
        prop_assert_eq!(a, b);
    }
}
