//! Dimensionless model parameters and the coefficient groups derived from them.
//!
//! All validation lives here. Downstream modules take `FluidModel` and
//! `WallModel` values as already checked.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rheological class of a power-law fluid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rheology {
    Pseudoplastic,
    Newtonian,
    Dilatant,
}

/// Power-law index `n`, viscosity parameter `γ` and MHD parameter `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidModel {
    pub n: f64,
    pub gamma: f64,
    #[serde(rename = "N")]
    pub big_n: f64,
}

impl FluidModel {
    pub fn new(n: f64, gamma: f64, big_n: f64) -> Result<Self> {
        let fluid = Self { n, gamma, big_n };
        fluid.validate()?;
        Ok(fluid)
    }

    pub fn validate(&self) -> Result<()> {
        positive("n", self.n)?;
        non_negative("gamma", self.gamma)?;
        non_negative("N", self.big_n)?;
        Ok(())
    }

    pub fn rheology(&self) -> Rheology {
        if self.n < 1.0 {
            Rheology::Pseudoplastic
        } else if self.n > 1.0 {
            Rheology::Dilatant
        } else {
            Rheology::Newtonian
        }
    }
}

/// Wall-temperature exponent `λ` (ΔT_w ∝ ξ^λ) and heat-generation integer `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallModel {
    pub lambda: f64,
    pub s: u32,
}

impl WallModel {
    pub fn new(lambda: f64, s: u32) -> Result<Self> {
        let wall = Self { lambda, s };
        non_negative("lambda", lambda)?;
        Ok(wall)
    }

    /// `1 + sλ`, the scale of the heat-generation term.
    pub fn source_scale(&self) -> f64 {
        1.0 + f64::from(self.s) * self.lambda
    }

    /// `((s-1)n + 1)λ + n`, which must be positive for the pairing to be usable.
    pub fn denominator(&self, fluid: &FluidModel) -> f64 {
        ((f64::from(self.s) - 1.0) * fluid.n + 1.0) * self.lambda + fluid.n
    }

    /// Checks `λ ≥ 0` and the denominator for this fluid.
    pub fn validate_with(&self, fluid: &FluidModel) -> Result<f64> {
        non_negative("lambda", self.lambda)?;
        let d = self.denominator(fluid);
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::DegenerateDenominator { denominator: d });
        }
        Ok(d)
    }
}

/// Coefficients of the energy equation
/// `θ'' + advection·f·θ' − lumped·f'·θ + source(η) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyCoefficients {
    /// `(λ + n) / (2D)`
    pub advection: f64,
    /// `λn / D`
    pub lumped: f64,
}

pub fn energy_coefficients(fluid: &FluidModel, wall: &WallModel) -> Result<EnergyCoefficients> {
    let d = wall.validate_with(fluid)?;
    Ok(EnergyCoefficients {
        advection: (wall.lambda + fluid.n) / (2.0 * d),
        lumped: wall.lambda * fluid.n / d,
    })
}

/// The streamwise-constant group `P(x)·I(x) = λn / D`.
pub fn lumped_parameter(fluid: &FluidModel, wall: &WallModel) -> Result<f64> {
    energy_coefficients(fluid, wall).map(|c| c.lumped)
}

/// Dimensional material and field properties.
///
/// Units are whatever the caller keeps consistent; nothing is converted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalContext {
    pub alpha_m: f64,
    pub k_star: f64,
    pub beta: f64,
    pub nu0: f64,
    pub sigma0: f64,
    pub b0: f64,
    pub rho: f64,
    pub eps: f64,
    pub k_m: f64,
    pub c_pf: f64,
    pub g: f64,
    pub b: f64,
    pub d_tw_ref: f64,
}

impl DimensionalContext {
    /// Every field set to one (and `b = 0`).
    pub fn unit() -> Self {
        Self {
            alpha_m: 1.0,
            k_star: 1.0,
            beta: 1.0,
            nu0: 1.0,
            sigma0: 1.0,
            b0: 1.0,
            rho: 1.0,
            eps: 1.0,
            k_m: 1.0,
            c_pf: 1.0,
            g: 1.0,
            b: 0.0,
            d_tw_ref: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("alpha_m", self.alpha_m)?;
        positive("k_star", self.k_star)?;
        positive("beta", self.beta)?;
        positive("nu0", self.nu0)?;
        positive("sigma0", self.sigma0)?;
        positive("b0", self.b0)?;
        positive("rho", self.rho)?;
        positive("eps", self.eps)?;
        if self.eps > 1.0 {
            return Err(Error::InvalidParameter {
                name: "eps",
                value: self.eps,
                reason: "porosity must lie in (0, 1]",
            });
        }
        positive("k_m", self.k_m)?;
        positive("c_pf", self.c_pf)?;
        positive("g", self.g)?;
        non_negative("b", self.b)?;
        positive("d_tw_ref", self.d_tw_ref)?;
        Ok(())
    }
}

/// Modified local Rayleigh number `(K* g_x β ΔT_w xⁿ / (α_mⁿ ν₀*))^(1/n)`.
pub fn rayleigh(ctx: &DimensionalContext, g_x: f64, d_tw: f64, x: f64, n: f64) -> Result<f64> {
    ctx.validate()?;
    positive("g_x", g_x)?;
    positive("d_tw", d_tw)?;
    positive("x", x)?;
    positive("n", n)?;
    let inner = ctx.k_star * g_x * ctx.beta * d_tw * x.powf(n) / (ctx.alpha_m.powf(n) * ctx.nu0);
    Ok(inner.powf(1.0 / n))
}

/// Local MHD parameter `Ra_x α_m σ₀ B₀² / (x ρ ε g_x β ΔT_w)`.
///
/// The similarity solver treats `N` as a prescribed constant; this is the
/// pointwise value for diagnostics.
pub fn mhd_parameter(
    ctx: &DimensionalContext,
    ra_x: f64,
    g_x: f64,
    d_tw: f64,
    x: f64,
) -> Result<f64> {
    ctx.validate()?;
    positive("ra_x", ra_x)?;
    positive("g_x", g_x)?;
    positive("d_tw", d_tw)?;
    positive("x", x)?;
    Ok(ra_x * ctx.alpha_m * ctx.sigma0 * ctx.b0 * ctx.b0
        / (x * ctx.rho * ctx.eps * g_x * ctx.beta * d_tw))
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
