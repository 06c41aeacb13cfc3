//! Body-shape quantities for the vertical plate, horizontal cylinder and
//! sphere: streamwise gravity, the transformed coordinate `ξ`, the
//! sine-power quadratures behind it, and the function `I(x)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{positive, FluidModel, WallModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Body {
    VerticalPlate { l_r: f64 },
    HorizontalCylinder { r: f64 },
    Sphere { r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyShape {
    pub body: Body,
    /// Gravity magnitude.
    pub g: f64,
}

impl BodyShape {
    pub fn plate(l_r: f64, g: f64) -> Result<Self> {
        Self::checked(Body::VerticalPlate { l_r }, g)
    }

    pub fn cylinder(r: f64, g: f64) -> Result<Self> {
        Self::checked(Body::HorizontalCylinder { r }, g)
    }

    pub fn sphere(r: f64, g: f64) -> Result<Self> {
        Self::checked(Body::Sphere { r }, g)
    }

    fn checked(body: Body, g: f64) -> Result<Self> {
        let shape = Self { body, g };
        shape.validate()?;
        Ok(shape)
    }

    pub fn validate(&self) -> Result<()> {
        match self.body {
            Body::VerticalPlate { l_r } => positive("l_r", l_r)?,
            Body::HorizontalCylinder { r } | Body::Sphere { r } => positive("r", r)?,
        }
        positive("g", self.g)
    }

    pub fn is_curved(&self) -> bool {
        !matches!(self.body, Body::VerticalPlate { .. })
    }

    /// Short lowercase name: `plate`, `cylinder` or `sphere`.
    pub fn name(&self) -> &'static str {
        match self.body {
            Body::VerticalPlate { .. } => "plate",
            Body::HorizontalCylinder { .. } => "cylinder",
            Body::Sphere { .. } => "sphere",
        }
    }

    /// Exponent `a` of the sine-power integrand in `ξ`, for curved bodies.
    pub fn sine_exponent(&self, n: f64) -> Option<f64> {
        match self.body {
            Body::VerticalPlate { .. } => None,
            Body::HorizontalCylinder { .. } => Some(1.0 / n),
            Body::Sphere { .. } => Some((2.0 * n + 1.0) / n),
        }
    }

    /// Arc length from the leading edge or lower stagnation point.
    pub fn arc_length(&self, pos: SurfacePosition) -> Result<f64> {
        self.check(pos)?;
        Ok(match (self.body, pos) {
            (Body::VerticalPlate { l_r }, SurfacePosition::Plate { x_over_l }) => x_over_l * l_r,
            (
                Body::HorizontalCylinder { r } | Body::Sphere { r },
                SurfacePosition::Angle { phi },
            ) => r * phi,
            _ => unreachable!("checked above"),
        })
    }

    /// Rejects positions of the wrong kind or outside the surface.
    ///
    /// Curved bodies accept the closed range `[0, π]` so that stagnation
    /// limits can be evaluated; the plate accepts `(0, 1]`.
    pub fn check(&self, pos: SurfacePosition) -> Result<()> {
        self.validate()?;
        match (self.body, pos) {
            (Body::VerticalPlate { .. }, SurfacePosition::Plate { x_over_l }) => {
                if x_over_l > 0.0 && x_over_l <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter {
                        name: "x_over_l",
                        value: x_over_l,
                        reason: "must lie in (0, 1]",
                    })
                }
            }
            (Body::VerticalPlate { .. }, SurfacePosition::Angle { phi }) => {
                Err(Error::InvalidParameter {
                    name: "phi",
                    value: phi,
                    reason: "the plate is addressed by x_over_l, not an angle",
                })
            }
            (_, SurfacePosition::Angle { phi }) => {
                if (0.0..=PI).contains(&phi) {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter {
                        name: "phi",
                        value: phi,
                        reason: "must lie in [0, π]",
                    })
                }
            }
            (_, SurfacePosition::Plate { x_over_l }) => Err(Error::InvalidParameter {
                name: "x_over_l",
                value: x_over_l,
                reason: "curved bodies are addressed by the angle phi",
            }),
        }
    }
}

/// Point on the body surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfacePosition {
    /// Fraction of the reference length along a plate.
    Plate { x_over_l: f64 },
    /// Peripheral angle from the lower stagnation point.
    Angle { phi: f64 },
}

impl SurfacePosition {
    /// `x/L_r` for a plate, `φ` otherwise.
    pub fn coordinate(&self) -> f64 {
        match *self {
            SurfacePosition::Plate { x_over_l } => x_over_l,
            SurfacePosition::Angle { phi } => phi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_depth: 50,
        }
    }
}

/// Below this angle `∫ sinᵃ` is taken from its series.
const SERIES_STRIP: f64 = 1e-6;

/// Streamwise component of gravity.
pub fn g_x(shape: &BodyShape, pos: SurfacePosition) -> Result<f64> {
    shape.check(pos)?;
    Ok(match pos {
        SurfacePosition::Plate { .. } => shape.g,
        SurfacePosition::Angle { phi } => shape.g * phi.sin(),
    })
}

/// `∫₀^φ (sin t)ᵃ dt` by adaptive Simpson.
pub fn sine_power_integral(a: f64, phi: f64, opts: &QuadratureOptions) -> Result<f64> {
    if !a.is_finite() || a <= -1.0 {
        return Err(Error::InvalidParameter {
            name: "a",
            value: a,
            reason: "exponent must be finite and > -1",
        });
    }
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::InvalidParameter {
            name: "phi",
            value: phi,
            reason: "must lie in [0, π]",
        });
    }
    positive("abs_tol", opts.abs_tol)?;
    if phi > FRAC_PI_2 {
        // The integrand is symmetric about π/2.
        let half = lower_half(a, FRAC_PI_2, opts)?;
        return Ok(2.0 * half - lower_half(a, PI - phi, opts)?);
    }
    lower_half(a, phi, opts)
}

fn lower_half(a: f64, phi: f64, opts: &QuadratureOptions) -> Result<f64> {
    let strip = phi.min(SERIES_STRIP);
    // sinᵃ t = tᵃ (1 − a t²/6 + …)
    let head = strip.powf(a + 1.0) / (a + 1.0) - a * strip.powf(a + 3.0) / (6.0 * (a + 3.0));
    if phi <= strip {
        return Ok(head);
    }
    let f = |t: f64| t.sin().powf(a);
    Ok(head + adaptive_simpson(&f, strip, phi, opts.abs_tol, opts.max_depth)?)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureDepth { a, b });
    }
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?,
    )
}

/// Transformed streamwise coordinate `ξ = ∫₀ˣ g_x^{1/n} r*² dx`.
pub fn xi(shape: &BodyShape, pos: SurfacePosition, n: f64) -> Result<f64> {
    xi_with(shape, pos, n, &QuadratureOptions::default())
}

pub fn xi_with(
    shape: &BodyShape,
    pos: SurfacePosition,
    n: f64,
    opts: &QuadratureOptions,
) -> Result<f64> {
    shape.check(pos)?;
    positive("n", n)?;
    let scale = shape.g.powf(1.0 / n);
    Ok(match (shape.body, pos) {
        (Body::VerticalPlate { l_r }, SurfacePosition::Plate { x_over_l }) => {
            scale * x_over_l * l_r
        }
        (Body::HorizontalCylinder { r }, SurfacePosition::Angle { phi }) => {
            scale * r * sine_power_integral(1.0 / n, phi, opts)?
        }
        (Body::Sphere { r }, SurfacePosition::Angle { phi }) => {
            scale * r.powi(3) * sine_power_integral((2.0 * n + 1.0) / n, phi, opts)?
        }
        _ => unreachable!("checked above"),
    })
}

/// `I(x) = [n/D] · ξ / (g_x^{1/n} r*² x)`, with `D = ((s−1)n+1)λ + n`.
///
/// At the lower stagnation point the series limit `[n/D]/(a+1)` is
/// returned; at the upper one `g_x` vanishes and the result is infinite.
pub fn i_func(
    shape: &BodyShape,
    pos: SurfacePosition,
    fluid: &FluidModel,
    wall: &WallModel,
) -> Result<f64> {
    shape.check(pos)?;
    fluid.validate()?;
    let d = wall.validate_with(fluid)?;
    let n = fluid.n;
    let bracket = n / d;
    let ratio = match (shape.body, pos) {
        (Body::VerticalPlate { .. }, _) => 1.0,
        (body, SurfacePosition::Angle { phi }) => {
            let a = shape.sine_exponent(n).expect("curved body");
            if phi == 0.0 {
                1.0 / (a + 1.0)
            } else if phi == PI {
                f64::INFINITY
            } else {
                let r = match body {
                    Body::HorizontalCylinder { r } | Body::Sphere { r } => r,
                    Body::VerticalPlate { .. } => unreachable!(),
                };
                let r_star = match body {
                    Body::Sphere { .. } => r * phi.sin(),
                    _ => 1.0,
                };
                let gx = shape.g * phi.sin();
                xi(shape, pos, n)? / (gx.powf(1.0 / n) * r_star * r_star * r * phi)
            }
        }
        _ => unreachable!("checked above"),
    };
    Ok(bracket * ratio)
}

/// `(d ln g_x / d ln x, d ln r* / d ln x)`.
pub fn shape_log_derivatives(shape: &BodyShape, pos: SurfacePosition) -> Result<(f64, f64)> {
    shape.check(pos)?;
    Ok(match (shape.body, pos) {
        (Body::VerticalPlate { .. }, _) => (0.0, 0.0),
        (Body::HorizontalCylinder { .. }, SurfacePosition::Angle { phi }) => {
            (phi_cot_phi(phi), 0.0)
        }
        (Body::Sphere { .. }, SurfacePosition::Angle { phi }) => {
            let v = phi_cot_phi(phi);
            (v, v)
        }
        _ => unreachable!("checked above"),
    })
}

fn phi_cot_phi(phi: f64) -> f64 {
    if phi < 1e-3 {
        let p2 = phi * phi;
        1.0 - p2 / 3.0 - p2 * p2 / 45.0
    } else {
        phi * phi.cos() / phi.sin()
    }
}
