use crate::args::*;
use crate::output::{Artifact, Outcome};
use crate::CliError;
use fpp_analytics::shape::{ideal_octagon, shape_csv, shape_svg};
use fpp_analytics::{full_density_checks, lp_verify, origin_tree, shape_estimate, simple_density_checks, OCTANTS};
use fpp_env::dump::DUMP_VERSION;
use fpp_env::{EnvDump, Rect};
use fpp_events::svg::{svg_full, svg_simple};
use fpp_events::*;
use fpp_field::export::{records_csv, svg_layer};
use fpp_field::{BondField, FullEnvironment, SimpleEnvironment};
use fpp_geodesic::export::{distance_map_bytes, path_csv, svg_overlay};
use fpp_geodesic::{geodesic_tree, shortest_path};
use fpp_params::{parse_config, ModelParams};
use fpp_validators::{validate_environment_with, validate_simple};
use std::fmt::Write;

/// Rough bytes per site of an environment, its field and a tree over it.
const BYTES_PER_SITE: u64 = 96;

fn budget_check(c: &Common, w: Rect) -> Result<(), CliError> {
    let bytes = w.area().saturating_mul(BYTES_PER_SITE);
    if bytes > c.budget {
        return Err(CliError::Config(format!(
            "a {}x{} window needs ~{bytes} bytes, over the {}-byte budget; lower --window/--radius or raise --budget",
            w.width(),
            w.height(),
            c.budget
        )));
    }
    Ok(())
}

fn default_cutoff(p: &ModelParams) -> u32 {
    match p {
        ModelParams::Simple(_) => 10,
        ModelParams::Full(_) => 8,
    }
}

enum Env {
    Simple(SimpleEnvironment),
    Full(FullEnvironment),
}

impl Env {
    fn build(c: &Common, p: &ModelParams, default_half: i64) -> Result<Self, CliError> {
        let w = Rect::centered(c.window.unwrap_or(default_half));
        budget_check(c, w)?;
        let cutoff = c.cutoff.unwrap_or_else(|| default_cutoff(p));
        Ok(match p {
            ModelParams::Simple(sp) => Env::Simple(SimpleEnvironment::build(c.seed, sp, w, cutoff)?),
            ModelParams::Full(fp) => Env::Full(FullEnvironment::build(c.seed, fp, w, cutoff)?),
        })
    }

    fn window(&self) -> Rect {
        match self {
            Env::Simple(e) => e.window,
            Env::Full(e) => e.window,
        }
    }

    fn field(&self) -> BondField {
        match self {
            Env::Simple(e) => BondField::simple(e, e.window),
            Env::Full(e) => BondField::full(e, e.window),
        }
    }
}

fn field_csv(f: &BondField) -> String {
    if f.detail().is_some() {
        return records_csv(f, &f.rect);
    }
    let mut s = String::from("bond,tau\n");
    for b in f.bonds() {
        let _ = writeln!(s, "{b},{:.17e}", f.tau(b).unwrap());
    }
    s
}

pub fn dispatch(cli: &Cli, params: Option<&ModelParams>) -> Result<Outcome, CliError> {
    let c = &cli.common;
    if !matches!(cli.command, Command::ValidateParams(_)) {
        if let Some(p) = params {
            p.validate().map_err(|v| CliError::Config(format!("parameters violate {} constraint(s):\n{v}", v.len())))?;
        }
    }
    let need = || params.expect("resolved for this command");
    match &cli.command {
        Command::ValidateParams(a) => validate_params(a, params),
        Command::SampleEnv(a) => sample_env(c, need(), a),
        Command::Render(a) => render(c, need(), a),
        Command::Geodesic(a) => geodesic(c, need(), a),
        Command::Tree(a) => tree(c, need(), a),
        Command::Shape(a) => shape(c, need(), a),
        Command::Events(a) => events(c, need(), a),
        Command::Census(a) => census(c, need(), a),
        Command::LpVerify(a) => lp(c, a),
        Command::DensityCheck(a) => density(c, need(), a),
        Command::CorridorCheck(a) => corridor(c, need(), a),
    }
}

fn validate_params(a: &ValidateParamsArgs, resolved: Option<&ModelParams>) -> Result<Outcome, CliError> {
    let (label, p) = match &a.file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let p = parse_config(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            (path.display().to_string(), p)
        }
        None => ("parameters".to_string(), resolved.expect("resolved").clone()),
    };
    match p.validate() {
        Ok(()) => {
            let mut o = Outcome::default();
            o.say(format!("{label}: {} model, all constraints hold (fingerprint {:016x})", p.model_name(), p.fingerprint()));
            o.add(Artifact::json("params", &p));
            Ok(o)
        }
        Err(v) => Err(CliError::Config(format!("{label}: {} violation(s)\n{}", v.len(), v.to_string().trim_end()))),
    }
}

fn sample_env(c: &Common, p: &ModelParams, a: &SampleEnvArgs) -> Result<Outcome, CliError> {
    let env = Env::build(c, p, 64)?;
    let mut o = Outcome::default();
    let (cutoff, highways) = match &env {
        Env::Simple(e) => (e.cutoff, e.diagonals.clone()),
        Env::Full(e) => (e.cutoff, e.zigzags().iter().chain(&e.hv).copied().collect()),
    };
    let dump = EnvDump {
        version: DUMP_VERSION,
        model: p.model_name().into(),
        seed: c.seed,
        params_fingerprint: p.fingerprint(),
        window: env.window(),
        class_cutoff: cutoff,
        highways,
    };
    o.say(format!("{} environment, seed {}, window {:?}, cutoff {cutoff}: {} highways", p.model_name(), c.seed, env.window(), dump.highways.len()));
    o.add(Artifact::json("env", &dump));
    if let Env::Full(e) = &env {
        let rep = e.thinning.report();
        let raw: usize = rep.per_class.values().map(|x| x.raw).sum();
        o.say(format!("thinning: {raw} raw zigzags, {} after stage 1, {} after stage 2, {} final", e.thinning.stage1.len(), e.thinning.stage2.len(), e.zigzags().len()));
        o.add(Artifact::json("thinning", &rep));
    }
    if a.validate {
        let field = env.field();
        let rep = match &env {
            Env::Simple(e) => validate_simple(e, &field),
            Env::Full(e) => validate_environment_with(e, &field, a.paths),
        };
        for ch in &rep.checks {
            o.say(format!("({}) {}: {} [{} examined, {} failures]", ch.id, ch.name, if ch.passed { "pass" } else { "FAIL" }, ch.examined, ch.failures));
        }
        if !rep.passed() {
            let ids: String = rep.failed().iter().map(|c| c.id).collect();
            o.failure = Some(format!("validator check(s) {ids} failed; see validation.json for counterexamples"));
        }
        o.add(Artifact::json("validation", &rep));
    }
    Ok(o)
}

fn render(c: &Common, p: &ModelParams, a: &RenderArgs) -> Result<Outcome, CliError> {
    let env = Env::build(c, p, 24)?;
    let f = env.field();
    let mut o = Outcome::default();
    o.say(format!("{} bonds over {:?}", f.bonds().count(), f.rect));
    o.add(Artifact::svg("field", svg_layer(&f, &f.rect, a.scale)));
    o.add(Artifact::csv("bonds", field_csv(&f)));
    Ok(o)
}

fn geodesic(c: &Common, p: &ModelParams, a: &GeodesicArgs) -> Result<Outcome, CliError> {
    let half = [a.from.x, a.from.y, a.to.x, a.to.y].iter().map(|v| v.abs()).max().unwrap() + 8;
    let env = Env::build(c, p, half)?;
    let f = env.field();
    let path = shortest_path(&f, a.from, a.to)?;
    let mut o = Outcome::default();
    o.say(format!("T({}, {}) = {:.12} over {} bonds", a.from, a.to, path.total_tau(), path.len()));
    o.add(Artifact::csv("path", path_csv(&path)));
    o.add(Artifact::json("path", &serde_json::json!({ "from": a.from, "to": a.to, "tau": path.total_tau(), "tenths": path.total.tenths, "sigma": path.total.sigma, "sites": path.sites })));
    let mut svg = svg_layer(&f, &f.rect, a.scale);
    let end = svg.rfind("</svg>").unwrap_or(svg.len());
    svg.insert_str(end, &svg_overlay(&[path], f.rect, a.scale, "#000"));
    o.add(Artifact::svg("path", svg));
    Ok(o)
}

fn tree(c: &Common, p: &ModelParams, a: &TreeArgs) -> Result<Outcome, CliError> {
    let env = Env::build(c, p, 64)?;
    let f = env.field();
    let t = geodesic_tree(&f, a.root, None)?;
    let mut o = Outcome::default();
    let far = t.dist.iter().zip(&t.reached).filter(|x| *x.1).map(|x| x.0.value()).fold(0.0, f64::max);
    o.say(format!("tree from {}: {} sites reached, {} edges, largest passage time {far:.6}", a.root, t.reached_count(), t.edges()));
    let mut csv = String::from("x,y,tau,parent_x,parent_y\n");
    for (i, s) in t.rect.sites().enumerate() {
        if !t.reached[i] {
            continue;
        }
        let par = t.parent[i];
        let (px, py) = if par == u32::MAX { (String::new(), String::new()) } else {
            let q = t.rect.site_at(par as usize);
            (q.x.to_string(), q.y.to_string())
        };
        let _ = writeln!(csv, "{},{},{:.17e},{px},{py}", s.x, s.y, t.dist[i].value());
    }
    o.add(Artifact::csv("tree", csv));
    o.add(Artifact::bytes("distances", distance_map_bytes(&t)));
    Ok(o)
}

fn shape(c: &Common, p: &ModelParams, a: &ShapeArgs) -> Result<Outcome, CliError> {
    budget_check(c, Rect::centered(a.radius + 2))?;
    let cutoff = c.cutoff.unwrap_or(12);
    let t = origin_tree(p, c.seed, a.radius, cutoff).map_err(|e| CliError::Runtime(e.to_string()))?;
    let e = shape_estimate(&t, p.model_name(), c.seed, a.radius, a.points).map_err(|e| CliError::Config(format!("{e}; use more --points or a larger --radius")))?;
    let mut o = Outcome::default();
    let ideal = ideal_octagon(p.model_name());
    for (i, f) in e.fits.iter().enumerate() {
        let (d, v) = (OCTANTS[i], ideal[i]);
        let want = d.0.hypot(d.1) / v.0.hypot(v.1);
        o.say(format!("mu({:+},{:+}) = {:.4} (limit {want:.4}, {:+.1}%)", d.0, d.1, f.slope, 100.0 * (f.slope - want) / want));
    }
    o.add(Artifact::csv("shape", shape_csv(&e)));
    o.add(Artifact::svg("shape", shape_svg(&e, 200.0)));
    o.add(Artifact::json("shape", &e));
    Ok(o)
}

fn flags(pairs: &[(&str, bool)]) -> String {
    pairs.iter().map(|(n, v)| format!("{n}={}", *v as u8)).collect::<Vec<_>>().join(" ")
}

fn events(c: &Common, p: &ModelParams, a: &EventsArgs) -> Result<Outcome, CliError> {
    let mut o = Outcome::default();
    match p {
        ModelParams::Simple(sp) => {
            let plan = simple_window(sp, a.k, c.budget)?;
            let env = SimpleEnvironment::build(c.seed, sp, plan.window, plan.cutoff)?;
            let r = detect_simple_success(&env, a.k);
            o.say(format!("simple k={} seed={}: {} x1={:?} x2={:?}", a.k, c.seed, flags(&[("I", r.i_hat), ("M", r.m_hat), ("F", r.f_hat), ("premise", r.premise)]), r.x1, r.x2));
            o.add(Artifact::svg("events", svg_simple(&r, 4.0)));
            o.add(Artifact::json("events", &r));
        }
        ModelParams::Full(fp) => {
            let plan = full_window(fp, a.k, c.budget)?;
            let env = FullEnvironment::build(c.seed, fp, plan.window, plan.cutoff)?;
            let r = detect_full_success(&env, a.k);
            o.say(format!("full k={} seed={}: {}", a.k, c.seed, flags(&[("I", r.i), ("M", r.m), ("D", r.d_tilde), ("E1", r.e1), ("E2", r.e2), ("F", r.f)])));
            let view = Rect::centered(((1i64 << a.k) + 8).min(plan.window.x1));
            o.add(Artifact::svg("events", svg_full(&env, &r, view, 4.0)));
            o.add(Artifact::json("events", &r));
        }
    }
    Ok(o)
}

fn census(c: &Common, p: &ModelParams, a: &CensusArgs) -> Result<Outcome, CliError> {
    let seeds: Vec<u64> = (c.seed..c.seed + a.seeds).collect();
    let rows = success_census(p, &seeds, &a.k, c.budget)?;
    let mut o = Outcome::default();
    let mut csv = String::from("k,trials,i_count,m_count,f_count,premise_count,f_freq,i_freq\n");
    for r in &rows {
        o.say(format!("k={}: F {}/{} ({:.4}), I {}, M {}, premise {}", r.k, r.f_count, r.trials, r.f_freq, r.i_count, r.m_count, r.premise_count));
        let _ = writeln!(csv, "{},{},{},{},{},{},{:.6},{:.6}", r.k, r.trials, r.i_count, r.m_count, r.f_count, r.premise_count, r.f_freq, r.i_freq);
    }
    o.add(Artifact::csv("census", csv));
    o.add(Artifact::json("census", &rows));
    Ok(o)
}

fn lp(c: &Common, a: &LpVerifyArgs) -> Result<Outcome, CliError> {
    if a.max_demand < 0 {
        return Err(CliError::Config("--max-demand must be nonnegative".into()));
    }
    let s = lp_verify(c.seed, a.trials, a.max_demand);
    let mut o = Outcome::default();
    o.say(s.line());
    o.say(format!("cases 2A/2B/2B-zero: {:?}; vertical-free instances: {}", s.case_counts, s.case1_trials));
    if s.matches != s.trials {
        o.failure = Some(format!("{} mismatches between closed form and exhaustive minimum", s.trials - s.matches));
    }
    o.add(Artifact::json("lp", &s));
    Ok(o)
}

fn density(c: &Common, p: &ModelParams, a: &DensityArgs) -> Result<Outcome, CliError> {
    let seeds: Vec<u64> = (c.seed..c.seed + a.seeds).collect();
    let rep = match p {
        ModelParams::Simple(sp) => simple_density_checks(sp, &seeds, if a.k.is_empty() { &[1, 2, 3, 4, 6] } else { &a.k }),
        ModelParams::Full(fp) => full_density_checks(fp, &seeds, if a.k.is_empty() { &[1, 2, 3] } else { &a.k }),
    };
    let mut o = Outcome::default();
    for r in &rep.rows {
        let z = if r.stderr > 0.0 { (r.estimate - r.reference) / r.stderr } else { 0.0 };
        let verdict = match (r.within_3sigma, r.enforced) {
            (true, _) => "ok",
            (false, true) => "FAIL",
            (false, false) => "outside 3 sigma (reported only)",
        };
        o.say(format!("{} k={}: {:.6e} vs {:.6e} ({:?}, z={z:+.2}) {verdict}", r.name, r.k, r.estimate, r.reference, r.relation));
    }
    let fails = rep.failures();
    if !fails.is_empty() {
        o.failure = Some(format!("{} calibration row(s) outside 3 sigma", fails.len()));
    }
    o.add(Artifact::csv("density", rep.csv()));
    o.add(Artifact::json("density", &rep));
    Ok(o)
}

fn corridor(c: &Common, p: &ModelParams, a: &CorridorArgs) -> Result<Outcome, CliError> {
    let mut o = Outcome::default();
    for seed in c.seed..c.seed + a.search.max(1) {
        match p {
            ModelParams::Simple(sp) => {
                let plan = simple_window(sp, a.k, c.budget)?;
                let env = SimpleEnvironment::build(seed, sp, plan.window, plan.cutoff)?;
                let r = detect_simple_success(&env, a.k);
                if !(r.f_hat && r.premise) {
                    continue;
                }
                let res = corridor_check_simple(&r, &BondField::simple(&env, env.window));
                o.say(format!("simple k={} seed={seed}: {} targets, {} inside the region, {} violations", a.k, res.targets, res.skipped_inside, res.violation_count));
                if res.violation_count > 0 {
                    o.failure = Some(format!("{} geodesics leave the corridor", res.violation_count));
                }
                o.add(Artifact::json("corridor", &serde_json::json!({ "event": r, "result": res })));
                return Ok(o);
            }
            ModelParams::Full(fp) => {
                let plan = full_window(fp, a.k, c.budget)?;
                let env = FullEnvironment::build(seed, fp, plan.window, plan.cutoff)?;
                let r = detect_full_success(&env, a.k);
                if !r.f {
                    continue;
                }
                let res = corridor_check_full(&env, &r, &BondField::full(&env, env.window));
                o.say(format!("full k={} seed={seed}: {} targets, {} inside the region, {} violations (reported only)", a.k, res.targets, res.skipped_inside, res.violation_count));
                o.add(Artifact::json("corridor", &serde_json::json!({ "event": r, "result": res })));
                return Ok(o);
            }
        }
    }
    o.say(format!("no success event at k={} among seeds {}..{}; nothing to check", a.k, c.seed, c.seed + a.search.max(1)));
    Ok(o)
}
