use super::{source_term, Diagnostics, Method, Model, SimilaritySolution};
use crate::closure::fprime_slope;
use crate::error::{Error, Result};
use crate::params::{FluidModel, WallModel};

const MAX_NEWTON: usize = 100;
const STEP_TOL: f64 = 1e-13;
const SLOPE_CLAMP: f64 = 1e8;

/// Solves the boundary value problem by second-order central differences on
/// a uniform mesh of `mesh_size` intervals, with `f` accumulated from the
/// closure by the trapezoidal rule and damped Newton on all interior `θ`.
///
/// Independent of the shooting path: no integrator, no initial-value guess
/// from it.
pub fn relaxation_solve(
    fluid: &FluidModel,
    wall: &WallModel,
    mesh_size: usize,
    eta_max: f64,
) -> Result<SimilaritySolution> {
    if mesh_size < 64 {
        return Err(Error::InvalidParameter {
            name: "mesh_size",
            value: mesh_size as f64,
            reason: "must be at least 64",
        });
    }
    crate::params::positive("eta_max", eta_max)?;
    let model = Model::new(fluid, wall)?;
    let m = mesh_size;
    let h = eta_max / m as f64;
    let eta: Vec<f64> = (0..=m).map(|i| i as f64 * h).collect();

    let mut theta: Vec<f64> = eta
        .iter()
        .map(|&e| (1.0 - e / eta_max) * (-0.5 * e).exp())
        .collect();
    theta[0] = 1.0;
    theta[m] = 0.0;

    let mut system = System::new(&model, &eta, h)?;
    system.evaluate(&theta)?;
    let mut norm = system.norm();
    let mut iterations = 0;
    loop {
        if iterations >= MAX_NEWTON {
            return Err(Error::RelaxationDivergence {
                iterations,
                residual: norm,
            });
        }
        iterations += 1;
        let mut step: Vec<f64> = system.residual.iter().map(|r| -r).collect();
        let mut jac = system.jacobian(&theta);
        solve_lower_hessenberg(&mut jac, &mut step, m - 1);

        let mut damping = 1.0;
        let accepted = loop {
            let trial: Vec<f64> = theta
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    if i == 0 || i == m {
                        *t
                    } else {
                        t + damping * step[i - 1]
                    }
                })
                .collect();
            if system.evaluate(&trial).is_ok() {
                let trial_norm = system.norm();
                if trial_norm.is_finite() && trial_norm <= (1.0 - 1e-4 * damping) * norm {
                    theta = trial;
                    norm = trial_norm;
                    break true;
                }
            }
            damping *= 0.5;
            if damping < 1e-10 {
                break false;
            }
        };
        let step_size = step.iter().fold(0.0f64, |a, s| a.max(s.abs())) * damping;
        if !accepted {
            // The line search stalls once the residual sits at rounding level.
            system.evaluate(&theta)?;
            if step_size <= 1e-9 {
                break;
            }
            return Err(Error::RelaxationDivergence {
                iterations,
                residual: norm,
            });
        }
        if step_size <= STEP_TOL {
            break;
        }
    }
    system.evaluate(&theta)?;

    let theta_prime_0 = (-25.0 * theta[0] + 48.0 * theta[1] - 36.0 * theta[2] + 16.0 * theta[3]
        - 3.0 * theta[4])
        / (12.0 * h);
    let mut theta_prime = vec![0.0; m + 1];
    theta_prime[0] = theta_prime_0;
    for i in 1..m {
        theta_prime[i] = (theta[i + 1] - theta[i - 1]) / (2.0 * h);
    }
    theta_prime[m] = (3.0 * theta[m] - 4.0 * theta[m - 1] + theta[m - 2]) / (2.0 * h);

    Ok(SimilaritySolution {
        eta,
        f: system.f.clone(),
        fprime: system.p.clone(),
        theta,
        theta_prime,
        theta_prime_0,
        eta_max,
        diagnostics: Diagnostics {
            method: Method::Relaxation,
            iterations,
            final_residual: system.residual.iter().fold(0.0f64, |a, r| a.max(r.abs())),
            tolerance: STEP_TOL,
            domain_history: vec![(eta_max, theta_prime_0)],
        },
    })
}

/// Richardson-extrapolated `θ'(0)` from meshes of `mesh_size` and
/// `2·mesh_size` intervals.
pub fn richardson_theta_prime_0(
    fluid: &FluidModel,
    wall: &WallModel,
    mesh_size: usize,
    eta_max: f64,
) -> Result<f64> {
    let coarse = relaxation_solve(fluid, wall, mesh_size, eta_max)?.theta_prime_0;
    let fine = relaxation_solve(fluid, wall, 2 * mesh_size, eta_max)?.theta_prime_0;
    Ok((4.0 * fine - coarse) / 3.0)
}

struct System<'a> {
    model: &'a Model,
    h: f64,
    source: Vec<f64>,
    p: Vec<f64>,
    f: Vec<f64>,
    residual: Vec<f64>,
}

impl<'a> System<'a> {
    fn new(model: &'a Model, eta: &[f64], h: f64) -> Result<Self> {
        let n = eta.len();
        Ok(Self {
            model,
            h,
            source: eta.iter().map(|&e| source_term(e, &model.wall)).collect(),
            p: vec![0.0; n],
            f: vec![0.0; n],
            residual: vec![0.0; n - 2],
        })
    }

    fn evaluate(&mut self, theta: &[f64]) -> Result<()> {
        let n = theta.len();
        let h = self.h;
        for (p, &t) in self.p.iter_mut().zip(theta) {
            *p = self.model.fprime(t)?;
        }
        self.f[0] = 0.0;
        for i in 1..n {
            self.f[i] = self.f[i - 1] + 0.5 * h * (self.p[i - 1] + self.p[i]);
        }
        let c = self.model.coeffs;
        for i in 1..n - 1 {
            let second = (theta[i + 1] - 2.0 * theta[i] + theta[i - 1]) / (h * h);
            let first = (theta[i + 1] - theta[i - 1]) / (2.0 * h);
            self.residual[i - 1] = second + c.advection * self.f[i] * first
                - c.lumped * self.p[i] * theta[i]
                + self.source[i];
        }
        Ok(())
    }

    fn norm(&self) -> f64 {
        self.residual.iter().map(|r| r * r).sum::<f64>().sqrt()
    }

    /// Dense Jacobian over interior unknowns; row `k` (node `k+1`) is
    /// non-zero only in columns `0..=k+1`.
    fn jacobian(&self, theta: &[f64]) -> Vec<f64> {
        let n = theta.len();
        let unknowns = n - 2;
        let h = self.h;
        let c = self.model.coeffs;
        let slope: Vec<f64> = (0..n)
            .map(|i| {
                let q = fprime_slope(theta[i], self.p[i], &self.model.fluid);
                if q.is_finite() {
                    q.clamp(-SLOPE_CLAMP, SLOPE_CLAMP)
                } else {
                    SLOPE_CLAMP
                }
            })
            .collect();
        let mut jac = vec![0.0; unknowns * unknowns];
        for i in 1..n - 1 {
            let row = &mut jac[(i - 1) * unknowns..i * unknowns];
            let first = (theta[i + 1] - theta[i - 1]) / (2.0 * h);
            let drift = c.advection * first;
            // f_i depends on every θ_j with j ≤ i.
            for j in 1..i {
                row[j - 1] = drift * h * slope[j];
            }
            if i > 1 {
                row[i - 2] += 1.0 / (h * h) - c.advection * self.f[i] / (2.0 * h);
            }
            row[i - 1] = -2.0 / (h * h) + drift * 0.5 * h * slope[i]
                - c.lumped * (slope[i] * theta[i] + self.p[i]);
            if i < n - 2 {
                row[i] = 1.0 / (h * h) + c.advection * self.f[i] / (2.0 * h);
            }
        }
        jac
    }
}

/// Solves `A x = b` in place for a lower Hessenberg `A` (row-major, `n×n`)
/// by eliminating the superdiagonal from the bottom up, then forward
/// substitution. `O(n²)`.
fn solve_lower_hessenberg(a: &mut [f64], b: &mut [f64], n: usize) {
    for k in (1..n).rev() {
        if a[(k - 1) * n + k].abs() > a[k * n + k].abs() {
            for j in 0..=k {
                a.swap((k - 1) * n + j, k * n + j);
            }
            b.swap(k - 1, k);
        }
        let pivot = a[k * n + k];
        let factor = a[(k - 1) * n + k] / pivot;
        if factor != 0.0 {
            for j in 0..=k {
                a[(k - 1) * n + j] -= factor * a[k * n + j];
            }
            b[k - 1] -= factor * b[k];
        }
        a[(k - 1) * n + k] = 0.0;
    }
    for i in 0..n {
        let mut acc = b[i];
        for j in 0..i {
            acc -= a[i * n + j] * b[j];
        }
        b[i] = acc / a[i * n + i];
    }
}
