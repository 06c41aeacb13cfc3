use super::SimilaritySolution;
use crate::error::Result;
use crate::params::{energy_coefficients, FluidModel, WallModel};

/// Composite Simpson rule on an arbitrary ascending grid.
///
/// Interval pairs use the three-point nonuniform rule; an odd final interval
/// is closed with the matching one-interval correction.
pub fn simpson_nonuniform(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
    }
    let intervals = n - 1;
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 <= intervals {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        let sum = h0 + h1;
        total += sum / 6.0
            * ((2.0 - h1 / h0) * y[i]
                + sum * sum / (h0 * h1) * y[i + 1]
                + (2.0 - h0 / h1) * y[i + 2]);
        i += 2;
    }
    if intervals % 2 == 1 {
        let h0 = x[n - 2] - x[n - 3];
        let h1 = x[n - 1] - x[n - 2];
        let alpha = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
        let beta = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
        let eta = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
        total += alpha * y[n - 1] + beta * y[n - 2] - eta * y[n - 3];
    }
    total
}

/// Energy equation integrated once over `[0, η_max]`:
///
/// `θ'(η_max) − θ'(0) + c₁∫fθ' − c₂∫f'θ + (1 − e^{−η_max/√(1+sλ)})/√(1+sλ)`.
///
/// Vanishes for an exact solution.
pub fn integral_identity_residual(
    sol: &SimilaritySolution,
    fluid: &FluidModel,
    wall: &WallModel,
) -> Result<f64> {
    let c = energy_coefficients(fluid, wall)?;
    let advective: Vec<f64> = sol
        .f
        .iter()
        .zip(&sol.theta_prime)
        .map(|(f, t)| f * t)
        .collect();
    let production: Vec<f64> = sol
        .fprime
        .iter()
        .zip(&sol.theta)
        .map(|(p, t)| p * t)
        .collect();
    let root = wall.source_scale().sqrt();
    let eta_end = *sol.eta.last().unwrap_or(&0.0);
    let source = (1.0 - (-eta_end / root).exp()) / root;
    let slope_end = *sol.theta_prime.last().unwrap_or(&sol.theta_prime_0);
    Ok(
        slope_end - sol.theta_prime_0 + c.advection * simpson_nonuniform(&sol.eta, &advective)
            - c.lumped * simpson_nonuniform(&sol.eta, &production)
            + source,
    )
}
