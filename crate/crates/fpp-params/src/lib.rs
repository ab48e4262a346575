//! Parameter bundles for the two models, their feasibility checks and the
//! derived density scales.
//!
//! Both validators are total: a candidate either comes back as a bundle or
//! as a nonempty list of violated inequalities with both sides evaluated.

mod config;
mod scales;

pub use config::{load_preset, parse_config, preset_names, ModelParams, PRESETS};
pub use scales::DerivedScales;

use serde::{Deserialize, Serialize};
use std::fmt;

/// Default margin for strict comparisons.
pub const EPS_FEAS: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum ParamsError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("infeasible parameters:\n{0}")]
    Infeasible(Violations),
}

/// Diagonal-highway model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleParams {
    pub theta: f64,
    pub eta: f64,
    #[serde(rename = "C")]
    pub c_big: f64,
    pub k0: u32,
}

/// Fast-diagonals model. `theta`, `thetatilde` and `zeta` are derived from
/// the exponents and are not read from config files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullParams {
    pub c_theta: f64,
    pub c_thetatilde: f64,
    pub delta: f64,
    pub eta: f64,
    pub etatilde: f64,
    pub mu: f64,
    #[serde(rename = "C")]
    pub c_big: f64,
    #[serde(rename = "c")]
    pub c_small: f64,
    pub k0: u32,
    #[serde(default = "default_c1")]
    pub c1: f64,
}

fn default_c1() -> f64 {
    1.0
}

impl FullParams {
    pub fn theta(&self) -> f64 {
        2f64.powf(-self.c_theta)
    }

    pub fn thetatilde(&self) -> f64 {
        2f64.powf(-self.c_thetatilde)
    }

    pub fn zeta(&self) -> f64 {
        self.delta / (self.c_thetatilde - self.delta)
    }

    /// Smallest HV class that triggers a stage-2 deletion of a class-`m` zigzag.
    pub fn stage2_threshold(&self, m: u32) -> u32 {
        let t = (1.0 + self.zeta()) * m as f64 / self.c_thetatilde;
        // guard against t landing a hair above an integer through rounding
        let r = t.round();
        if (t - r).abs() < 1e-12 {
            r as u32
        } else {
            t.ceil() as u32
        }
    }

    pub fn scales(&self) -> DerivedScales {
        DerivedScales::full(self)
    }
}

impl SimpleParams {
    pub fn scales(&self) -> DerivedScales {
        DerivedScales::simple(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rel {
    Lt,
    Le,
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rel::Lt => write!(f, "<"),
            Rel::Le => write!(f, "<="),
        }
    }
}

/// One evaluated inequality `lhs rel rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub lhs: f64,
    pub rel: Rel,
    pub rhs: f64,
}

impl Constraint {
    pub fn holds(&self, eps: f64) -> bool {
        if !self.lhs.is_finite() || !self.rhs.is_finite() {
            return false;
        }
        match self.rel {
            Rel::Lt => self.lhs < self.rhs - eps,
            Rel::Le => self.lhs <= self.rhs,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {:.12e} {} {:.12e} violated",
            self.name, self.lhs, self.rel, self.rhs
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Violations(pub Vec<Constraint>);

impl Violations {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.0.iter().map(|c| c.name.as_str()).collect()
    }
}

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn lt(name: &str, lhs: f64, rhs: f64) -> Constraint {
    Constraint { name: name.to_string(), lhs, rel: Rel::Lt, rhs }
}

fn le(name: &str, lhs: f64, rhs: f64) -> Constraint {
    Constraint { name: name.to_string(), lhs, rel: Rel::Le, rhs }
}

/// All constraints of the simple model, evaluated.
pub fn simple_constraints(p: &SimpleParams) -> Vec<Constraint> {
    let (th, eta, c, k0) = (p.theta, p.eta, p.c_big, p.k0 as i32);
    let rk = th.powi(k0) / (1.0 - th);
    vec![
        lt("k0 >= 1", 0.5, p.k0 as f64),
        lt("C > 0", 0.0, c),
        lt("theta > 1/2", 0.5, th),
        lt("theta < 1", th, 1.0),
        lt("eta > 1/(2 theta)", 1.0 / (2.0 * th), eta),
        lt("eta < 1", eta, 1.0),
        lt("eta^k0 < 1/32", eta.powi(k0), 1.0 / 32.0),
        le("r_k0 <= 1/2", rk, 0.5),
        lt(
            "4C/r_k0 < 0.1*2^k0*(eta^(k0-1)-eta^k0)",
            4.0 * c / rk,
            0.1 * 2f64.powi(k0) * (eta.powi(k0 - 1) - eta.powi(k0)),
        ),
        lt("1 < 2 eta theta (monotone in k)", 1.0, 2.0 * eta * th),
    ]
}

/// All constraints of the full model, evaluated.
pub fn full_constraints(p: &FullParams) -> Vec<Constraint> {
    let (ct, ctt, d) = (p.c_theta, p.c_thetatilde, p.delta);
    let th = p.theta();
    let tht = p.thetatilde();
    let (eta, et, mu, cb, cs) = (p.eta, p.etatilde, p.mu, p.c_big, p.c_small);
    let k0 = p.k0 as i32;
    let denom = 1.0 - ct * (ctt - 4.0 * d);
    let expo = ct * ctt / denom;
    let third = (th * eta).powf(denom) * th.powf(-4.0 * ct * d);
    let rk = th.powi(k0) / (1.0 - th);
    vec![
        lt("k0 >= 1", 0.5, p.k0 as f64),
        lt("c_theta > 0.4", 0.4, ct),
        lt("c_theta < 0.5", ct, 0.5),
        lt("c_thetatilde > 0", 0.0, ctt),
        lt("c_thetatilde < 1", ctt, 1.0),
        lt("delta > 0", 0.0, d),
        lt("delta < c_thetatilde (zeta defined)", d, ctt),
        lt("4 delta < c_thetatilde", 4.0 * d, ctt),
        lt("0 < 1 - c_theta(c_thetatilde - 4 delta)", 0.0, denom),
        lt("theta^(c_theta c_thetatilde/(1-c_theta(c_thetatilde-4delta))) < eta", th.powf(expo), eta),
        lt("eta < 7/8", eta, 7.0 / 8.0),
        lt("eta < theta^(2/3)", eta, th.powf(2.0 / 3.0)),
        lt("etatilde > 0", 0.0, et),
        lt("etatilde < 1/(2 theta)", et, 1.0 / (2.0 * th)),
        lt("etatilde < eta/2", et, eta / 2.0),
        lt("theta < mu", th, mu),
        lt("mu < thetatilde^c_theta", mu, tht.powf(ct)),
        lt("mu < eta", mu, eta),
        lt("mu < (theta eta)^(1-c_theta(c_thetatilde-4delta)) theta^(-4 c_theta delta)", mu, third),
        lt("2 theta^2 < 2 eta theta", 2.0 * th * th, 2.0 * eta * th),
        lt("1 < 2 theta^2", 1.0, 2.0 * th * th),
        lt(
            "4C/r_k0 + 0.2 < 0.1*2^k0*(eta^(k0-1)-eta^k0)",
            4.0 * cb / rk + 0.2,
            0.1 * 2f64.powi(k0) * (eta.powi(k0 - 1) - eta.powi(k0)),
        ),
        lt("(2 etatilde)^k0 < eta^k0", (2.0 * et).powi(k0), eta.powi(k0)),
        lt("eta^k0 < 1/16", eta.powi(k0), 1.0 / 16.0),
        lt("C > 0", 0.0, cb),
        lt("c > 0", 0.0, cs),
        lt("c < C/2", cs, cb / 2.0),
        lt("c1 > 0", 0.0, p.c1),
        lt("1 < eta/mu", 1.0, eta / mu),
        lt("eta^3 theta^-2 < 1", eta.powi(3) / (th * th), 1.0),
    ]
}

fn collect(cs: Vec<Constraint>, eps: f64) -> Violations {
    Violations(cs.into_iter().filter(|c| !c.holds(eps)).collect())
}

pub fn validate_simple_eps(p: &SimpleParams, eps: f64) -> Result<SimpleParams, Violations> {
    let v = collect(simple_constraints(p), eps);
    if v.is_empty() {
        Ok(p.clone())
    } else {
        Err(v)
    }
}

pub fn validate_simple(p: &SimpleParams) -> Result<SimpleParams, Violations> {
    validate_simple_eps(p, EPS_FEAS)
}

pub fn validate_full_eps(p: &FullParams, eps: f64) -> Result<FullParams, Violations> {
    let v = collect(full_constraints(p), eps);
    if v.is_empty() {
        Ok(p.clone())
    } else {
        Err(v)
    }
}

pub fn validate_full(p: &FullParams) -> Result<FullParams, Violations> {
    validate_full_eps(p, EPS_FEAS)
}
