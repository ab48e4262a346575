use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Sub};

/// Passage time split into an exact integer number of tenths and a
/// floating-point remainder.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Cost {
    pub tenths: i64,
    pub sigma: f64,
}

impl Cost {
    pub const ZERO: Cost = Cost { tenths: 0, sigma: 0.0 };

    pub const fn new(tenths: i64, sigma: f64) -> Self {
        Cost { tenths, sigma }
    }

    pub fn value(self) -> f64 {
        self.tenths as f64 * 0.1 + self.sigma
    }

    /// Compare by total value; the integer part is differenced exactly first.
    pub fn cmp_total(&self, o: &Cost) -> Ordering {
        let d = (self.tenths - o.tenths) as f64 * 0.1 + (self.sigma - o.sigma);
        if d < 0.0 {
            Ordering::Less
        } else if d > 0.0 {
            Ordering::Greater
        } else {
            self.tenths.cmp(&o.tenths).then(self.sigma.total_cmp(&o.sigma))
        }
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, o: Cost) -> Cost {
        Cost { tenths: self.tenths + o.tenths, sigma: self.sigma + o.sigma }
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, o: Cost) {
        self.tenths += o.tenths;
        self.sigma += o.sigma;
    }
}

impl Sub for Cost {
    type Output = Cost;
    fn sub(self, o: Cost) -> Cost {
        Cost { tenths: self.tenths - o.tenths, sigma: self.sigma - o.sigma }
    }
}
