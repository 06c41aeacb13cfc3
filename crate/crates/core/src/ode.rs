//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order weights minus the embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    /// Used as both the absolute and relative local error tolerance.
    pub tol: f64,
    pub h_init: f64,
    pub h_max: f64,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            h_init: 1e-3,
            h_max: f64::INFINITY,
        }
    }

    pub fn with_max_step(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self.h_init = self.h_init.min(h_max);
        self
    }

    /// Integrates `y' = rhs(t, y)` from `t0` to `t_end`, calling `observer`
    /// after every accepted step with `(t, y, y')`. Returns the last state
    /// reached, which is at `t_end` unless the observer stopped early.
    pub fn integrate<const D: usize, F, O>(
        &self,
        mut rhs: F,
        t0: f64,
        y0: [f64; D],
        t_end: f64,
        mut observer: O,
    ) -> Result<(f64, [f64; D])>
    where
        F: FnMut(f64, &[f64; D]) -> Result<[f64; D]>,
        O: FnMut(f64, &[f64; D], &[f64; D]) -> Control,
    {
        let mut t = t0;
        let mut y = y0;
        let mut k1 = rhs(t, &y)?;
        if observer(t, &y, &k1) == Control::Stop {
            return Ok((t, y));
        }
        let mut h = self.h_init.min(t_end - t0);
        let mut reject_streak = 0usize;

        while t < t_end {
            let last = t + h >= t_end;
            if last {
                h = t_end - t;
            }
            let stage = |a: &[(f64, &[f64; D])]| -> [f64; D] {
                let mut out = y;
                for (coef, k) in a {
                    for i in 0..D {
                        out[i] += h * coef * k[i];
                    }
                }
                out
            };
            let k2 = rhs(t + C2 * h, &stage(&[(A21, &k1)]))?;
            let k3 = rhs(t + C3 * h, &stage(&[(A31, &k1), (A32, &k2)]))?;
            let k4 = rhs(t + C4 * h, &stage(&[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = rhs(
                t + C5 * h,
                &stage(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = rhs(
                t + h,
                &stage(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            )?;
            let y_new = stage(&[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = rhs(t + h, &y_new)?;

            let mut err_sq = 0.0;
            for i in 0..D {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = self.tol * (1.0 + y[i].abs().max(y_new[i].abs()));
                err_sq += (e / scale).powi(2);
            }
            let err = (err_sq / D as f64).sqrt();

            if err <= 1.0 && err.is_finite() {
                t = if last { t_end } else { t + h };
                y = y_new;
                k1 = k7;
                reject_streak = 0;
                if observer(t, &y, &k1) == Control::Stop {
                    return Ok((t, y));
                }
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (h * factor).min(self.h_max);
            } else {
                reject_streak += 1;
                let factor = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
                } else {
                    0.1
                };
                h *= factor;
                if h < 1e-13 * t.abs().max(1.0) || reject_streak > 60 {
                    return Err(Error::StepUnderflow { eta: t, step: h });
                }
            }
        }
        Ok((t, y))
    }
}
