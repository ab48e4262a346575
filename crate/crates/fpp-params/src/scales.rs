use crate::{FullParams, SimpleParams};
use serde::Serialize;

/// Closed-form evaluators for r_k, r~_k and q_k.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedScales {
    pub theta: f64,
    pub thetatilde: Option<f64>,
    pub c_theta: Option<f64>,
    pub c_big: f64,
    /// offset in q_k = c_theta k + b
    pub b: Option<f64>,
}

impl DerivedScales {
    pub fn simple(p: &SimpleParams) -> Self {
        DerivedScales { theta: p.theta, thetatilde: None, c_theta: None, c_big: p.c_big, b: None }
    }

    pub fn full(p: &FullParams) -> Self {
        let theta = p.theta();
        DerivedScales {
            theta,
            thetatilde: Some(p.thetatilde()),
            c_theta: Some(p.c_theta),
            c_big: p.c_big,
            b: Some((2.0 * p.c_big * (1.0 - theta)).log2()),
        }
    }

    /// r_k = sum_{j>=k} theta^j, for real k.
    pub fn r(&self, k: f64) -> f64 {
        self.theta.powf(k) / (1.0 - self.theta)
    }

    pub fn rtilde(&self, k: f64) -> Option<f64> {
        self.thetatilde.map(|t| t.powf(k) / (1.0 - t))
    }

    /// q_k = log2(2C / r_k).
    pub fn q(&self, k: f64) -> f64 {
        (2.0 * self.c_big / self.r(k)).log2()
    }

    /// Integer class threshold used when filtering "class at least q_k".
    pub fn q_class(&self, k: f64) -> u32 {
        self.q(k).ceil().max(0.0) as u32
    }
}
