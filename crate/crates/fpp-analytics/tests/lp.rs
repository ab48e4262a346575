use fpp_analytics::lp::{case_2a_floor, random_instance, reduced_objective};
use fpp_analytics::*;
use proptest::prelude::*;
use std::cmp::Ordering;

/// Plain enumeration of every tuple in the box: the seven free counts are
/// looped over, the rest follow from the equality constraints.
fn naive(p: &LpInstance) -> Option<(LpValue, u64)> {
    let bd = p.bound();
    let c = p.eta_coef();
    let mut best: Option<(LpValue, u64)> = None;
    let r = 0..=bd;
    for e_e in r.clone() {
        for e_s in r.clone() {
            for e_w in r.clone() {
                for w_n in r.clone() {
                    for w_e in r.clone() {
                        for w_s in r.clone() {
                            for w_w in r.clone() {
                                let bn = p.j - w_n;
                                let e_n = p.s + p.g - w_n - bn;
                                let bs = p.g - e_s - w_s;
                                for be in r.clone() {
                                    for bw in r.clone() {
                                        let v = LpVars { be, bw, bn, bs, zne: [e_n, e_e, e_s, e_w], znw: [w_n, w_e, w_s, w_w] };
                                        let all = [be, bw, bn, bs].into_iter().chain(v.zne).chain(v.znw);
                                        if all.clone().any(|x| x > bd) || !v.satisfies(p) {
                                            continue;
                                        }
                                        let o = v.objective();
                                        best = match best {
                                            None => Some((o, 1)),
                                            Some((b, n)) => match o.cmp_with(b, c) {
                                                Ordering::Less => Some((o, 1)),
                                                Ordering::Equal => Some((b, n + 1)),
                                                Ordering::Greater => Some((b, n)),
                                            },
                                        };
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

#[test]
fn decomposed_search_matches_plain_enumeration() {
    let mut n = 0;
    for s in 0..=2 {
        for d in 0..=2 {
            for g in 0..=2 {
                for j in 0..=(s + g) {
                    let p = LpInstance { s, d, g, j, k: 1 + (s + d + g) as u32, eta: 0.7 };
                    let (v, count) = naive(&p).expect("feasible");
                    let b = lp_bruteforce(&p).unwrap();
                    assert_eq!(b.min, v, "{p:?}");
                    assert_eq!(b.minimizers, count, "{p:?}");
                    assert!(b.representative.satisfies(&p));
                    assert_eq!(b.representative.objective(), b.min);
                    n += 1;
                }
            }
        }
    }
    assert!(n > 50);
}

#[test]
fn ten_thousand_random_instances_match() {
    let s = lp_verify(7, 10_000, 12);
    assert_eq!(s.line(), "10000/10000 exact matches", "{:?}", s.mismatches.first());
    assert!(s.case_counts.iter().all(|&c| c > 0), "{:?}", s.case_counts);
    assert!(s.case1_trials >= 1900);
    assert_eq!(s.max_eta_gap, 0.0);
}

#[test]
fn case_2a_minimum_respects_the_floor() {
    let mut seen = 0;
    for i in 0..4000 {
        let p = random_instance(11, i, 12);
        let c = lp_closed_form(&p).unwrap();
        if c.case == LpCase::TwoA {
            seen += 1;
            assert!(c.value >= case_2a_floor(&p) - 1e-9, "{p:?}: {} < {}", c.value, case_2a_floor(&p));
        }
    }
    assert!(seen > 100);
}

#[test]
fn infeasible_demands_are_rejected() {
    let p = LpInstance { s: 1, d: 0, g: 1, j: 3, k: 2, eta: 0.8 };
    assert_eq!(lp_bruteforce(&p).unwrap_err(), LpError::Infeasible);
    assert_eq!(lp_closed_form(&p).unwrap_err(), LpError::Infeasible);
    let p = LpInstance { s: -1, ..p };
    assert!(lp_bruteforce(&p).is_err());
}

proptest! {
    #[test]
    fn closed_form_is_a_minimum_of_the_reduced_objective(s in 0i64..9, d in 0i64..9, g in 0i64..9, jf in 0.0f64..1.0, k in 1u32..12, eta in 0.55f64..0.99) {
        let j = ((s + g) as f64 * jf).floor() as i64;
        let p = LpInstance { s, d, g, j, k, eta };
        let c = lp_closed_form(&p).unwrap();
        prop_assert!(c.z >= 0);
        for z in 0..=(s + d + g) {
            prop_assert_ne!(reduced_objective(&p, z).cmp_with(c.min, p.eta_coef()), Ordering::Less);
        }
        let b = lp_bruteforce(&p).unwrap();
        prop_assert_eq!(b.min, c.min);
    }
}
