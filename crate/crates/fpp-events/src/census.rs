use crate::{detect_full_success, detect_simple_success, full_window, simple_window, EventError};
use fpp_field::{FullEnvironment, SimpleEnvironment};
use fpp_params::ModelParams;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Event frequencies at one class over a seed range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub k: u32,
    pub trials: u64,
    pub i_count: u64,
    pub m_count: u64,
    pub f_count: u64,
    /// Simple model: successes whose corridor inequalities hold.
    pub premise_count: u64,
    pub f_freq: f64,
    pub i_freq: f64,
}

struct Flags {
    i: bool,
    m: bool,
    f: bool,
    premise: bool,
}

fn one(params: &ModelParams, seed: u64, k: u32, budget: u64) -> Result<Flags, EventError> {
    Ok(match params {
        ModelParams::Simple(p) => {
            let plan = simple_window(p, k, budget)?;
            let env = SimpleEnvironment::build(seed, p, plan.window, plan.cutoff)?;
            let r = detect_simple_success(&env, k);
            Flags { i: r.i_hat, m: r.m_hat, f: r.f_hat, premise: r.premise }
        }
        ModelParams::Full(p) => {
            let plan = full_window(p, k, budget)?;
            let env = FullEnvironment::build(seed, p, plan.window, plan.cutoff)?;
            let r = detect_full_success(&env, k);
            Flags { i: r.i, m: r.m, f: r.f, premise: r.f }
        }
    })
}

/// Frequencies of the success event per class; seeds run in parallel.
pub fn success_census(params: &ModelParams, seeds: &[u64], ks: &[u32], budget: u64) -> Result<Vec<CensusRow>, EventError> {
    ks.iter()
        .map(|&k| {
            let flags: Vec<Flags> = seeds.par_iter().map(|&s| one(params, s, k, budget)).collect::<Result<_, _>>()?;
            let n = flags.len() as u64;
            let count = |f: fn(&Flags) -> bool| flags.iter().filter(|x| f(x)).count() as u64;
            let (i, m, f, pr) = (count(|x| x.i), count(|x| x.m), count(|x| x.f), count(|x| x.premise));
            let freq = |c: u64| if n == 0 { 0.0 } else { c as f64 / n as f64 };
            Ok(CensusRow { k, trials: n, i_count: i, m_count: m, f_count: f, premise_count: pr, f_freq: freq(f), i_freq: freq(i) })
        })
        .collect()
}
