//! Smooth step profiles supported on `[1, 2]`.
//!
//! The transition is the quintic smootherstep `6s^5 - 15s^4 + 10s^3` on
//! `s = t - 1`. It is C² at both ends and its slope peaks at `30/16 < 2`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffKind {
    /// `0` for `t <= 1`, `1` for `t >= 2`, increasing.
    Rise,
    /// `1` for `t <= 1`, `0` for `t >= 2`, decreasing.
    Fall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutoffProfile {
    pub kind: CutoffKind,
}

/// Sup of `|ρ'|` for the quintic transition.
pub const MAX_SLOPE: f64 = 1.875;

fn smootherstep(s: f64) -> f64 {
    s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
}

fn smootherstep_slope(s: f64) -> f64 {
    let r = s * (1.0 - s);
    30.0 * r * r
}

impl CutoffProfile {
    pub const RISE: Self = Self {
        kind: CutoffKind::Rise,
    };
    pub const FALL: Self = Self {
        kind: CutoffKind::Fall,
    };

    pub fn value(&self, t: f64) -> f64 {
        let rise = if t <= 1.0 {
            0.0
        } else if t >= 2.0 {
            1.0
        } else {
            smootherstep(t - 1.0)
        };
        match self.kind {
            CutoffKind::Rise => rise,
            CutoffKind::Fall => 1.0 - rise,
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let slope = if t <= 1.0 || t >= 2.0 {
            0.0
        } else {
            smootherstep_slope(t - 1.0)
        };
        match self.kind {
            CutoffKind::Rise => slope,
            CutoffKind::Fall => -slope,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> impl Iterator<Item = f64> {
        (0..=3000).map(|i| i as f64 * 1e-3)
    }

    #[test]
    fn rise_support_and_monotonicity() {
        let rho = CutoffProfile::RISE;
        let mut prev = -1.0;
        for t in grid() {
            let v = rho.value(t);
            assert!((0.0..=1.0).contains(&v));
            if t <= 1.0 {
                assert_eq!(v, 0.0);
            }
            if t >= 2.0 {
                assert_eq!(v, 1.0);
            }
            assert!(v >= prev);
            prev = v;
            assert!(rho.derivative(t).abs() <= 2.0);
        }
    }

    #[test]
    fn fall_is_complement_of_rise() {
        for t in grid() {
            let sum = CutoffProfile::RISE.value(t) + CutoffProfile::FALL.value(t);
            assert!((sum - 1.0).abs() < 1e-15);
            assert_eq!(CutoffProfile::FALL.derivative(t), -CutoffProfile::RISE.derivative(t));
        }
        assert_eq!(CutoffProfile::FALL.value(0.5), 1.0);
        assert_eq!(CutoffProfile::FALL.value(2.5), 0.0);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-6;
        for t in grid().filter(|t| (t - 1.0).abs() > 2e-3 && (t - 2.0).abs() > 2e-3) {
            let rho = CutoffProfile::RISE;
            let fd = (rho.value(t + h) - rho.value(t - h)) / (2.0 * h);
            assert!((fd - rho.derivative(t)).abs() < 1e-7, "t = {t}");
        }
    }

    #[test]
    fn derivative_is_continuous_on_fine_grid() {
        let rho = CutoffProfile::RISE;
        let max_jump = grid()
            .zip(grid().skip(1))
            .map(|(s, t)| (rho.derivative(t) - rho.derivative(s)).abs())
            .fold(0.0, f64::max);
        // |ρ''| <= 5.78, so neighbours 1e-3 apart differ by under 6e-3
        assert!(max_jump < 6e-3, "{max_jump}");
        let peak = grid().map(|t| rho.derivative(t)).fold(0.0, f64::max);
        assert!((peak - MAX_SLOPE).abs() < 1e-9);
    }
}
