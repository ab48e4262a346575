use fpp_env::{Bond, DiagOrientation, Highway, Site};
use fpp_events::*;
use fpp_field::{BondField, Cost, SimpleEnvironment};
use fpp_params::{load_preset, ModelParams, SimpleParams};

fn preset() -> SimpleParams {
    match load_preset("simple-B").unwrap() {
        ModelParams::Simple(p) => p,
        _ => unreachable!(),
    }
}

fn diag(k: u32, ax: i64, ay: i64) -> Highway {
    Highway::diagonal(DiagOrientation::SwNe, k, Site::new(ax, ay), (1 << k) - 1)
}

fn planted(k: u32, x1: i64, x2: i64, extra: &[Highway]) -> SimpleEnvironment {
    let p = preset();
    let plan = simple_window(&p, k, DEFAULT_BUDGET).unwrap();
    let mut hw = vec![diag(k, x1 - 10, -10), diag(k, -10, x2 - 10)];
    hw.extend_from_slice(extra);
    SimpleEnvironment::from_parts(0, &p, plan.window, plan.cutoff, hw)
}

#[test]
fn planted_success() {
    let r = detect_simple_success(&planted(7, 1, 1, &[]), 7);
    assert_eq!(r.level, 65);
    assert_eq!((r.x1, r.x2), (Some(1), Some(1)));
    assert!(r.i_hat && r.m_hat && r.f_hat && r.premise);
}

#[test]
fn crossing_just_past_threshold_fails_i() {
    let p = preset();
    let k = 7;
    let c_over_r = p.c_big / p.scales().r(k as f64);
    let x = c_over_r.ceil() as i64 + 1;
    let r = detect_simple_success(&planted(k, x, 1, &[]), k);
    assert_eq!(r.x1, Some(x));
    assert!(!r.i_hat && !r.f_hat);
    let r = detect_simple_success(&planted(k, c_over_r.floor() as i64, 1, &[]), k);
    assert!(r.i_hat);
}

#[test]
fn higher_class_inside_region_fails_m() {
    let inside = diag(8, 5, 5);
    let r = detect_simple_success(&planted(7, 1, 1, &[inside]), 7);
    assert!(r.i_hat && !r.m_hat && !r.f_hat);
    assert_eq!(r.m_witness, Some(inside));
    // lower classes do not count
    let r = detect_simple_success(&planted(7, 1, 1, &[diag(6, 5, 5)]), 7);
    assert!(r.m_hat);
}

#[test]
fn closer_crossing_is_selected() {
    let r = detect_simple_success(&planted(7, 1, 2, &[diag(7, -5, -9), diag(8, 3 - 20, -20)]), 7);
    assert_eq!(r.x1, Some(1));
    assert_eq!(r.x2, Some(2));
    // a short highway that never reaches the level line does not qualify
    let short = Highway::diagonal(DiagOrientation::SwNe, 7, Site::new(0, -3), 20);
    let p = preset();
    let plan = simple_window(&p, 7, DEFAULT_BUDGET).unwrap();
    let env = SimpleEnvironment::from_parts(0, &p, plan.window, plan.cutoff, vec![short, diag(7, 1 - 10, -10)]);
    assert_eq!(detect_simple_success(&env, 7).x1, Some(1));
}

fn field_for(env: &SimpleEnvironment) -> BondField {
    BondField::simple(env, env.window)
}

/// Seeds 0.. at classes 6..=8 until `want` successes whose inequalities hold.
fn detected(want: usize) -> Vec<(SimpleEnvironment, SimpleReport)> {
    let p = preset();
    let mut out = Vec::new();
    for seed in 0..400u64 {
        for k in 6..=8 {
            let plan = simple_window(&p, k, DEFAULT_BUDGET).unwrap();
            let env = SimpleEnvironment::build(seed, &p, plan.window, plan.cutoff).unwrap();
            let r = detect_simple_success(&env, k);
            if r.f_hat && r.premise {
                out.push((env, r));
                if out.len() == want {
                    return out;
                }
            }
        }
    }
    out
}

#[test]
fn corridor_holds_on_detected_successes() {
    let events = detected(24);
    assert_eq!(events.len(), 24);
    for (env, r) in &events {
        let c = corridor_check_simple(r, &field_for(env));
        assert!(c.targets > 0);
        assert_eq!(c.violation_count, 0, "seed {} k {}: {:?}", r.seed, r.k, c.violations.first());
    }
}

#[test]
fn corrupted_field_is_caught() {
    let (env, r) = detected(1).pop().unwrap();
    let mut field = field_for(&env);
    // a free diagonal from the origin through the region
    for i in 0..r.level + 4 {
        let b = Bond::between(Site::new(i, i), Site::new(i + 1, i + 1)).unwrap();
        field.set_cost(b, Cost::new(1, 0.0));
    }
    let c = corridor_check_simple(&r, &field);
    assert!(c.violation_count > 0);
    let v = &c.violations[0];
    assert!(v.prefix.len() > 1 && v.prefix[1] == Site::new(1, 1));
    assert!(c.violations.len() <= MAX_KEPT);
}

#[test]
fn targets_inside_region_are_skipped() {
    let env = planted(7, 1, 1, &[]);
    let r = detect_simple_success(&env, 7);
    let c = corridor_check_simple(&r, &field_for(&env));
    // the open region is the diagonal strictly below the level line
    assert_eq!(c.skipped_inside as i64, r.level - 1);
    let w = env.window;
    assert_eq!(c.targets + c.skipped_inside, (w.x1 * w.y1) as usize);
}

#[test]
fn crossing_probability_lower_bound() {
    // large C makes the crossings likely at small classes
    let p = SimpleParams { c_big: 6.0, ..preset() };
    let n = 600u64;
    let seeds: Vec<u64> = (0..n).collect();
    let rows = success_census(&ModelParams::Simple(p.clone()), &seeds, &[3, 4, 5], DEFAULT_BUDGET).unwrap();
    let bound = (1.0 - (-p.c_big / 3.0).exp()).powi(2);
    for row in rows {
        let sd = (bound * (1.0 - bound) / n as f64).sqrt();
        assert!(row.i_freq >= bound - 3.0 * sd, "k {}: {} vs {bound}", row.k, row.i_freq);
    }
}

#[test]
fn census_is_reproducible_and_bounded() {
    let params = ModelParams::Simple(preset());
    let seeds: Vec<u64> = (100..160).collect();
    let a = success_census(&params, &seeds, &[5, 6], DEFAULT_BUDGET).unwrap();
    let b = success_census(&params, &seeds, &[5, 6], DEFAULT_BUDGET).unwrap();
    assert_eq!(a, b);
    for row in &a {
        assert_eq!(row.trials, 60);
        assert!((0.0..=1.0).contains(&row.f_freq) && (0.0..=1.0).contains(&row.i_freq));
        assert!(row.f_count <= row.i_count.min(row.m_count) && row.premise_count <= row.f_count);
    }
    let full = match load_preset("full-A").unwrap() {
        m @ ModelParams::Full(_) => m,
        _ => unreachable!(),
    };
    let rows = success_census(&full, &[1, 2], &[4], DEFAULT_BUDGET).unwrap();
    assert!((0.0..=1.0).contains(&rows[0].f_freq));
}

#[test]
fn report_json_is_stable() {
    let p = preset();
    let plan = simple_window(&p, 7, DEFAULT_BUDGET).unwrap();
    let run = || {
        let env = SimpleEnvironment::build(9, &p, plan.window, plan.cutoff).unwrap();
        serde_json::to_string(&detect_simple_success(&env, 7)).unwrap()
    };
    assert_eq!(run(), run());
    let back: SimpleReport = serde_json::from_str(&run()).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), run());
}

#[test]
fn pictures_render() {
    let env = planted(7, 1, 1, &[]);
    let r = detect_simple_success(&env, 7);
    let svg = svg::svg_simple(&r, 4.0);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}
