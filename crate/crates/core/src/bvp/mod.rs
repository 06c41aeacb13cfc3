//! Energy similarity boundary value problem.
//!
//! With the momentum closure `f' = F(θ)` the system is
//!
//! ```text
//! f'  = F(θ)
//! θ'' = −c₁ f θ' + c₂ f' θ − S(η),   S(η) = e^{−η/√(1+sλ)} / (1+sλ)
//! f(0) = 0,  θ(0) = 1,  θ(η_max) = 0
//! ```
//!
//! Two independent solvers are provided: shooting on `θ'(0)` with an
//! adaptive Runge–Kutta integrator ([`solve`]), and finite-difference
//! relaxation with Newton's method on the whole mesh ([`relaxation_solve`]).

mod identity;
mod relaxation;
mod shooting;

pub use identity::{integral_identity_residual, simpson_nonuniform};
pub use relaxation::{relaxation_solve, richardson_theta_prime_0};
pub use shooting::{shoot, solve, solve_on_domain};

use serde::{Deserialize, Serialize};

use crate::closure::{fprime, ClosureOptions};
use crate::error::Result;
use crate::params::{energy_coefficients, EnergyCoefficients, FluidModel, WallModel};

/// Converged profiles on an ascending `η` grid starting at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilaritySolution {
    pub eta: Vec<f64>,
    pub f: Vec<f64>,
    pub fprime: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_prime: Vec<f64>,
    pub theta_prime_0: f64,
    pub eta_max: f64,
    pub diagnostics: Diagnostics,
}

impl SimilaritySolution {
    /// `−θ'(0)`, the tabulated wall heat-transfer rate.
    pub fn minus_theta_prime_0(&self) -> f64 {
        -self.theta_prime_0
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Shooting,
    Relaxation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub method: Method,
    /// Trajectories integrated (shooting) or Newton steps taken (relaxation).
    pub iterations: usize,
    /// `θ(η_max)` of the returned profile, or the final max-norm residual
    /// of the discrete system for relaxation.
    pub final_residual: f64,
    pub tolerance: f64,
    /// `θ'(0)` found on each domain tried, in order.
    pub domain_history: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub ode_tol: f64,
    pub shoot_tol: f64,
    pub eta_max_initial: f64,
    pub eta_max_cap: f64,
    pub blowup_cap: f64,
    /// Scan range and spacing for the initial bracket on `θ'(0)`.
    pub scan_lo: f64,
    pub scan_hi: f64,
    pub scan_step: f64,
    /// Largest permitted change in `θ'(0)` between successive domains.
    pub domain_tol: f64,
    /// Largest `η` spacing in the returned profile.
    pub profile_spacing: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            ode_tol: 1e-10,
            shoot_tol: 1e-8,
            eta_max_initial: 15.0,
            eta_max_cap: 120.0,
            blowup_cap: 10.0,
            scan_lo: -5.0,
            scan_hi: 5.0,
            scan_step: 0.25,
            domain_tol: 1e-6,
            profile_spacing: 0.05,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        use crate::params::positive;
        positive("ode_tol", self.ode_tol)?;
        positive("shoot_tol", self.shoot_tol)?;
        positive("eta_max_initial", self.eta_max_initial)?;
        positive("eta_max_cap", self.eta_max_cap)?;
        positive("blowup_cap", self.blowup_cap)?;
        positive("scan_step", self.scan_step)?;
        positive("domain_tol", self.domain_tol)?;
        positive("profile_spacing", self.profile_spacing)?;
        if self.eta_max_initial >= self.eta_max_cap {
            return Err(crate::Error::InvalidParameter {
                name: "eta_max_initial",
                value: self.eta_max_initial,
                reason: "must be smaller than eta_max_cap",
            });
        }
        if self.scan_lo.partial_cmp(&self.scan_hi) != Some(std::cmp::Ordering::Less) {
            return Err(crate::Error::InvalidParameter {
                name: "scan_lo",
                value: self.scan_lo,
                reason: "must be smaller than scan_hi",
            });
        }
        Ok(())
    }
}

/// Internal heat-generation term `e^{−η/√(1+sλ)} / (1+sλ)`.
pub fn source_term(eta: f64, wall: &WallModel) -> f64 {
    let scale = wall.source_scale();
    (-eta / scale.sqrt()).exp() / scale
}

/// Right-hand side of the first-order system in `(f, θ, θ')`.
pub fn rhs(eta: f64, state: [f64; 3], fluid: &FluidModel, wall: &WallModel) -> Result<[f64; 3]> {
    Model::new(fluid, wall)?.rhs(eta, &state)
}

/// Parameters with the energy coefficients resolved once.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Model {
    pub fluid: FluidModel,
    pub wall: WallModel,
    pub coeffs: EnergyCoefficients,
    pub closure: ClosureOptions,
}

impl Model {
    pub fn new(fluid: &FluidModel, wall: &WallModel) -> Result<Self> {
        fluid.validate()?;
        Ok(Self {
            fluid: *fluid,
            wall: *wall,
            coeffs: energy_coefficients(fluid, wall)?,
            closure: ClosureOptions::default(),
        })
    }

    pub fn fprime(&self, theta: f64) -> Result<f64> {
        fprime(theta, &self.fluid, &self.closure)
    }

    pub fn rhs(&self, eta: f64, state: &[f64; 3]) -> Result<[f64; 3]> {
        let [f, theta, theta_prime] = *state;
        let fp = self.fprime(theta)?;
        let c = &self.coeffs;
        Ok([
            fp,
            theta_prime,
            -c.advection * f * theta_prime + c.lumped * fp * theta - source_term(eta, &self.wall),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wall(lambda: f64, s: u32) -> WallModel {
        WallModel::new(lambda, s).unwrap()
    }

    #[test]
    fn source_term_examples() {
        assert_eq!(source_term(0.0, &wall(3.7, 0)), 1.0);
        assert_eq!(source_term(0.0, &wall(1.0, 1)), 0.5);
        let v = source_term(2f64.sqrt(), &wall(1.0, 1));
        assert!((v - 0.5 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rhs_examples() {
        let newtonian = FluidModel::new(1.0, 0.0, 0.0).unwrap();
        let w = wall(0.0, 0);
        assert_eq!(
            rhs(0.0, [0.0, 1.0, 0.3], &newtonian, &w).unwrap(),
            [1.0, 0.3, -1.0]
        );
        for fluid in [
            FluidModel::new(0.5, 0.5, 2.0).unwrap(),
            FluidModel::new(2.0, 0.0, 10.0).unwrap(),
        ] {
            assert_eq!(
                rhs(0.0, [0.0, 0.0, 0.0], &fluid, &w).unwrap(),
                [0.0, 0.0, -1.0]
            );
            let far = rhs(60.0, [2.5, 0.0, 0.0], &fluid, &wall(1.0, 1)).unwrap();
            assert_eq!(far[0], 0.0);
            assert_eq!(far[1], 0.0);
            assert!(far[2] < 0.0 && far[2].abs() < 1e-18);
        }
    }

    #[test]
    fn options_validation() {
        assert!(SolveOptions::default().validate().is_ok());
        let bad = SolveOptions {
            eta_max_initial: 200.0,
            ..SolveOptions::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolveOptions {
            ode_tol: 0.0,
            ..SolveOptions::default()
        };
        assert!(bad.validate().is_err());
    }
}
