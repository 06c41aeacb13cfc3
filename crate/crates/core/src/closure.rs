//! Pointwise momentum closure: the Darcy velocity `f'` as a function of `θ`.
//!
//! The balance `(f')ⁿ = (θ − N f') e^{γθ}` is extended to negative arguments
//! through `sgn(p)|p|ⁿ`, so the map `θ ↦ f'` is odd-symmetric in magnitude,
//! continuous and strictly increasing. Shooting iterates routinely visit
//! `θ < 0` before they settle.

use crate::error::{Error, Result};
use crate::params::FluidModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureOptions {
    /// Absolute tolerance on the balance residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100,
        }
    }
}

/// Residual `sgn(p)|p|ⁿ + N e^{γθ} p − θ e^{γθ}` of the closure balance.
pub fn closure_residual(p: f64, theta: f64, fluid: &FluidModel) -> f64 {
    let e = (fluid.gamma * theta).exp();
    p.signum() * p.abs().powf(fluid.n) + fluid.big_n * e * p - theta * e
}

/// Solves the closure for `f'` by Newton's method safeguarded by bisection.
pub fn fprime(theta: f64, fluid: &FluidModel, opts: &ClosureOptions) -> Result<f64> {
    if theta == 0.0 {
        return Ok(0.0);
    }
    let e = (fluid.gamma * theta).exp();
    let forcing = theta.abs() * e;
    let drag = fluid.big_n * e;
    let q = solve_magnitude(forcing, drag, fluid.n, opts).map_err(|(iterations, lo, hi)| {
        let (lo, hi) = if theta < 0.0 { (-hi, -lo) } else { (lo, hi) };
        Error::ClosureNonConvergence {
            theta,
            iterations,
            lo,
            hi,
        }
    })?;
    Ok(q.copysign(theta))
}

/// Root `q ≥ 0` of `qⁿ + drag·q = forcing`; on failure returns the iteration
/// count and the last bracket.
fn solve_magnitude(
    forcing: f64,
    drag: f64,
    n: f64,
    opts: &ClosureOptions,
) -> std::result::Result<f64, (usize, f64, f64)> {
    if !forcing.is_finite() {
        return Err((0, 0.0, f64::INFINITY));
    }
    let residual = |q: f64| q.powf(n) + drag * q - forcing;
    // Tighter than `tol` for small forcing so tiny velocities keep their
    // relative accuracy.
    let tol = opts.tol * forcing.min(1.0);

    let mut lo = 0.0_f64;
    let mut hi = forcing.max(forcing.powf(1.0 / n)) + 1.0;
    // Each term alone overestimates the root.
    let mut q = if drag > 0.0 {
        (forcing / drag).min(forcing.powf(1.0 / n))
    } else {
        forcing.powf(1.0 / n)
    };
    if !(q > lo && q < hi) {
        q = 0.5 * (lo + hi);
    }

    for _ in 0..opts.max_iter {
        let r = residual(q);
        if r.abs() <= tol {
            return Ok(q);
        }
        if r > 0.0 {
            hi = q;
        } else {
            lo = q;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(0.5 * (lo + hi));
        }
        let slope = n * q.powf(n - 1.0) + drag;
        let newton = q - r / slope;
        q = if slope.is_finite() && slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err((opts.max_iter, lo, hi))
}

/// Derivative `df'/dθ` of the closure at the pair `(θ, p = f'(θ))`,
/// by implicit differentiation. Infinite where `n > 1`, `N = 0` and `p = 0`.
pub fn fprime_slope(theta: f64, p: f64, fluid: &FluidModel) -> f64 {
    let e = (fluid.gamma * theta).exp();
    let numerator = e * (1.0 + fluid.gamma * theta - fluid.big_n * fluid.gamma * p);
    let denominator = if p == 0.0 {
        if fluid.n < 1.0 {
            return 0.0;
        } else if fluid.n == 1.0 {
            1.0 + fluid.big_n * e
        } else {
            fluid.big_n * e
        }
    } else {
        fluid.n * p.abs().powf(fluid.n - 1.0) + fluid.big_n * e
    };
    numerator / denominator
}

/// Closed form of the closure for a Newtonian fluid: `θe^{γθ} / (1 + N e^{γθ})`.
pub fn fprime_newtonian(theta: f64, gamma: f64, big_n: f64) -> f64 {
    let e = (gamma * theta).exp();
    theta * e / (1.0 + big_n * e)
}
