use crate::EventError;
use fpp_env::Rect;
use fpp_params::{FullParams, SimpleParams};
use serde::{Deserialize, Serialize};

/// Default memory budget for one event window.
pub const DEFAULT_BUDGET: u64 = 2 << 30;

/// Rough bytes per site for field, tree and bookkeeping.
const SIMPLE_BYTES_PER_SITE: u64 = 96;
const FULL_BYTES_PER_SITE: u64 = 80;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowPlan {
    pub k: u32,
    pub window: Rect,
    pub cutoff: u32,
    pub bytes: u64,
}

fn check(k: u32, window: Rect, per_site: u64, budget: u64) -> Result<u64, EventError> {
    let bytes = window.area() * per_site;
    if bytes > budget {
        return Err(EventError::Budget { k, side: window.width(), bytes, budget });
    }
    Ok(bytes)
}

/// First-quadrant box holding the region and every target the argument
/// speaks about: both legs up to the level line plus the crossing range.
pub fn simple_window(p: &SimpleParams, k: u32, budget: u64) -> Result<WindowPlan, EventError> {
    let m = (1i64 << (k - 1)) + 1;
    let reach = (p.c_big / p.scales().r(k as f64)).ceil() as i64;
    let side = m + reach + 4;
    let window = Rect::new(-1, -1, side, side);
    let bytes = check(k, window, SIMPLE_BYTES_PER_SITE, budget)?;
    Ok(WindowPlan { k, window, cutoff: k + 6, bytes })
}

/// Centered box holding Theta_k, the shifted level lines, the vertical and
/// horizontal reference lines and the corridor heights.
pub fn full_window(p: &FullParams, k: u32, budget: u64) -> Result<WindowPlan, EventError> {
    let s = p.scales();
    let g = (1i64 << k) + 4;
    let ell = (2.0 * p.c_big / s.r(k as f64)).ceil() as i64;
    let dt = (p.c_big / s.rtilde(s.q(k as f64)).unwrap()).ceil() as i64;
    let lam = p.mu.powi(-(k as i32)).ceil() as i64;
    let half = g.max(ell).max(dt).max(lam) + 4;
    let window = Rect::centered(half);
    let bytes = check(k, window, FULL_BYTES_PER_SITE, budget)?;
    Ok(WindowPlan { k, window, cutoff: k + 3, bytes })
}
