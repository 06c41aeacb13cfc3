//! Reported quantities derived from a similarity solution: Nusselt number,
//! local heat-flux curves, Darcy velocities and dimensional heat terms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bvp::SimilaritySolution;
use crate::error::{Error, Result};
use crate::geometry::{
    g_x, i_func, shape_log_derivatives, sine_power_integral, xi, Body, BodyShape,
    QuadratureOptions, SurfacePosition,
};
use crate::params::{
    lumped_parameter, positive, rayleigh, DimensionalContext, FluidModel, WallModel,
};

/// Interior margin of the sampling grid, in radians or in `x/L_r`.
pub const EDGE_MARGIN: f64 = 1e-3;

/// Sampled `q*` along a body surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatFluxCurve {
    pub shape: BodyShape,
    pub fluid: FluidModel,
    pub wall: WallModel,
    pub theta_prime_0: f64,
    pub samples: Vec<(SurfacePosition, f64)>,
}

impl HeatFluxCurve {
    /// Surface coordinate (`φ` or `x/L_r`) of the largest finite sample.
    pub fn argmax(&self) -> Option<f64> {
        self.samples
            .iter()
            .filter(|(_, q)| q.is_finite())
            .fold(None, |best: Option<(f64, f64)>, &(p, q)| match best {
                Some((_, bq)) if bq >= q => best,
                _ => Some((p.coordinate(), q)),
            })
            .map(|(p, _)| p)
    }
}

/// Local Nusselt number `−θ'(0)·(Ra_x/I)^{1/2}`.
pub fn nusselt(theta_prime_0: f64, ra_x: f64, i_val: f64) -> f64 {
    -theta_prime_0 * (ra_x / i_val).sqrt()
}

/// Dimensionless local heat flux for the three body shapes.
///
/// Stagnation points of curved bodies get the analytic one-sided limit,
/// which is `±∞` when the exponents make the flux diverge.
pub fn qstar(
    shape: &BodyShape,
    pos: SurfacePosition,
    fluid: &FluidModel,
    wall: &WallModel,
    theta_prime_0: f64,
) -> Result<f64> {
    shape.check(pos)?;
    fluid.validate()?;
    let d = wall.validate_with(fluid)?;
    let n = fluid.n;
    let lambda = wall.lambda;
    let brace = (d / n).sqrt();
    let exponent = ((2.0 * n + 1.0) * lambda - n) / (2.0 * n);
    let flux = -theta_prime_0;

    let (prefactor_power, a) = match shape.body {
        Body::VerticalPlate { .. } => {
            let x = pos.coordinate();
            return Ok(flux * x.powf(exponent) * brace);
        }
        Body::HorizontalCylinder { .. } => (1.0 / n, 1.0 / n),
        Body::Sphere { .. } => ((2.0 * n + 1.0) / (2.0 * n), (2.0 * n + 1.0) / n),
    };
    let opts = QuadratureOptions::default();
    let total = sine_power_integral(a, PI, &opts)?;
    let scale = brace / total.powf((2.0 * n + 1.0) * lambda / (2.0 * n));
    let phi = pos.coordinate();

    if phi == PI {
        return Ok(0.0);
    }
    if phi == 0.0 {
        // sin^p φ · (φ^{a+1}/(a+1))^e ~ φ^{p + (a+1)e}
        let order = prefactor_power + (a + 1.0) * exponent;
        return Ok(if flux == 0.0 || order > 1e-12 {
            0.0
        } else if order < -1e-12 {
            f64::INFINITY.copysign(flux)
        } else {
            flux * (a + 1.0).powf(-exponent) * scale
        });
    }
    let partial = sine_power_integral(a, phi, &opts)?;
    Ok(flux * phi.sin().powf(prefactor_power) * partial.powf(exponent) * scale)
}

/// Samples `q*` on `n_points` uniform interior positions; curved bodies get
/// the two stagnation-point limits added at the ends.
pub fn qstar_curve(
    shape: &BodyShape,
    fluid: &FluidModel,
    wall: &WallModel,
    sol: &SimilaritySolution,
    n_points: usize,
) -> Result<HeatFluxCurve> {
    if n_points < 2 {
        return Err(Error::InvalidParameter {
            name: "n_points",
            value: n_points as f64,
            reason: "must be at least 2",
        });
    }
    let (lo, hi) = if shape.is_curved() {
        (EDGE_MARGIN, PI - EDGE_MARGIN)
    } else {
        (EDGE_MARGIN, 1.0)
    };
    let make = |c: f64| {
        if shape.is_curved() {
            SurfacePosition::Angle { phi: c }
        } else {
            SurfacePosition::Plate { x_over_l: c }
        }
    };
    let mut positions = Vec::with_capacity(n_points + 2);
    if shape.is_curved() {
        positions.push(make(0.0));
    }
    let step = (hi - lo) / (n_points - 1) as f64;
    positions.extend((0..n_points).map(|k| {
        make(if k + 1 == n_points {
            hi
        } else {
            lo + step * k as f64
        })
    }));
    if shape.is_curved() {
        positions.push(make(PI));
    }
    let samples = positions
        .into_iter()
        .map(|p| Ok((p, qstar(shape, p, fluid, wall, sol.theta_prime_0)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HeatFluxCurve {
        shape: *shape,
        fluid: *fluid,
        wall: *wall,
        theta_prime_0: sol.theta_prime_0,
        samples,
    })
}

/// Wall–ambient temperature difference `ΔT_wr·(ξ/ξ_r)^λ`, with `ξ_r` taken
/// at the trailing edge (`x = L_r`, or `φ = π`).
pub fn wall_temperature_difference(
    ctx: &DimensionalContext,
    shape: &BodyShape,
    pos: SurfacePosition,
    fluid: &FluidModel,
    wall: &WallModel,
) -> Result<f64> {
    ctx.validate()?;
    if wall.lambda == 0.0 {
        shape.check(pos)?;
        return Ok(ctx.d_tw_ref);
    }
    let end = if shape.is_curved() {
        SurfacePosition::Angle { phi: PI }
    } else {
        SurfacePosition::Plate { x_over_l: 1.0 }
    };
    let ratio = xi(shape, pos, fluid.n)? / xi(shape, end, fluid.n)?;
    Ok(ctx.d_tw_ref * ratio.powf(wall.lambda))
}

/// Local Rayleigh number at a surface position.
fn local_rayleigh(
    ctx: &DimensionalContext,
    shape: &BodyShape,
    pos: SurfacePosition,
    fluid: &FluidModel,
    wall: &WallModel,
) -> Result<(f64, f64, f64)> {
    let x = shape.arc_length(pos)?;
    let d_tw = wall_temperature_difference(ctx, shape, pos, fluid, wall)?;
    let ra = rayleigh(ctx, g_x(shape, pos)?, d_tw, x, fluid.n)?;
    Ok((ra, d_tw, x))
}

/// Streamwise and normal Darcy velocities at `(pos, η)`.
pub fn velocity(
    sol: &SimilaritySolution,
    shape: &BodyShape,
    ctx: &DimensionalContext,
    pos: SurfacePosition,
    fluid: &FluidModel,
    wall: &WallModel,
    eta: f64,
) -> Result<(f64, f64)> {
    let f = interpolate(&sol.eta, &sol.f, eta)?;
    let fp = interpolate(&sol.eta, &sol.fprime, eta)?;
    let (ra, _, x) = local_rayleigh(ctx, shape, pos, fluid, wall)?;
    let i_val = i_func(shape, pos, fluid, wall)?;
    let pi = lumped_parameter(fluid, wall)?;
    let (dln_gx, dln_r) = shape_log_derivatives(shape, pos)?;
    let n = fluid.n;
    let s = wall.s as f64 - 1.0;

    let u = ctx.alpha_m * ra / x * fp;
    let f_coeff = s * pi - 0.5;
    let eta_coeff = (s * n + 2.0) / (2.0 * n) * pi + i_val / n * dln_gx + i_val * dln_r - 0.5;
    let v = ctx.alpha_m / x * (ra / i_val).sqrt() * (f_coeff * f - eta_coeff * eta * fp);
    Ok((u, v))
}

/// Wall heat flux `Nu_x·ΔT_w·k_m/x`.
pub fn qw_dimensional(ctx: &DimensionalContext, nu_x: f64, d_tw: f64, x: f64) -> Result<f64> {
    positive("x", x)?;
    Ok(nu_x * d_tw * ctx.k_m / x)
}

/// Internal heat generation per unit volume at `(pos, η)`.
pub fn q_triple_prime(
    ctx: &DimensionalContext,
    shape: &BodyShape,
    pos: SurfacePosition,
    fluid: &FluidModel,
    wall: &WallModel,
    eta: f64,
) -> Result<f64> {
    let (ra, d_tw, x) = local_rayleigh(ctx, shape, pos, fluid, wall)?;
    let i_val = i_func(shape, pos, fluid, wall)?;
    Ok(heat_generation(ctx.k_m, d_tw, x, ra / i_val, wall, eta))
}

fn heat_generation(k_m: f64, d_tw: f64, x: f64, ra_over_i: f64, wall: &WallModel, eta: f64) -> f64 {
    let scale = wall.source_scale();
    k_m * d_tw / (x * x * scale) * ra_over_i * (-eta / scale.sqrt()).exp()
}

/// Monotone piecewise-cubic (Fritsch–Carlson) interpolation.
pub fn interpolate(x: &[f64], y: &[f64], at: f64) -> Result<f64> {
    let last = x.len().checked_sub(1).ok_or(Error::OutOfRange {
        eta: at,
        eta_max: 0.0,
    })?;
    if !(at >= x[0] && at <= x[last]) {
        return Err(Error::OutOfRange {
            eta: at,
            eta_max: x[last],
        });
    }
    if last == 0 {
        return Ok(y[0]);
    }
    let k = match x.partition_point(|&v| v <= at) {
        0 => 0,
        p => (p - 1).min(last - 1),
    };
    let secant = |i: usize| (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    let slope = |i: usize| -> f64 {
        if i == 0 {
            return end_slope(
                x[1] - x[0],
                x.get(2).map_or(0.0, |v| v - x[1]),
                secant(0),
                if last > 1 { secant(1) } else { secant(0) },
            );
        }
        if i == last {
            return end_slope(
                x[last] - x[last - 1],
                if last > 1 {
                    x[last - 1] - x[last - 2]
                } else {
                    0.0
                },
                secant(last - 1),
                if last > 1 {
                    secant(last - 2)
                } else {
                    secant(last - 1)
                },
            );
        }
        let (d0, d1) = (secant(i - 1), secant(i));
        if d0 * d1 <= 0.0 {
            return 0.0;
        }
        let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
        let w0 = 2.0 * h1 + h0;
        let w1 = h1 + 2.0 * h0;
        (w0 + w1) / (w0 / d0 + w1 / d1)
    };
    let h = x[k + 1] - x[k];
    let t = (at - x[k]) / h;
    let (m0, m1) = (slope(k), slope(k + 1));
    let t2 = t * t;
    let t3 = t2 * t;
    Ok((2.0 * t3 - 3.0 * t2 + 1.0) * y[k]
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * y[k + 1]
        + (t3 - t2) * h * m1)
}

/// One-sided three-point end slope, limited to keep the end interval
/// monotone.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    if h1 == 0.0 {
        return d0;
    }
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
