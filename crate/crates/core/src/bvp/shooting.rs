use super::{Diagnostics, Method, Model, SimilaritySolution, SolveOptions};
use crate::error::{Error, Result};
use crate::ode::{Control, Dopri5};
use crate::params::{FluidModel, WallModel};

/// Passes of scan-grid subdivision tried before giving up.
const SUBDIVISIONS: usize = 6;
const SUBDIVISION_FACTOR: usize = 5;

/// Outcome of one forward integration from the wall.
#[derive(Debug, Clone, Copy)]
struct Shot {
    /// `θ(η_max)`, or `±blowup_cap` if `|θ|` ran away first.
    residual: f64,
    /// `θ'` where the integration stopped.
    slope_end: f64,
}

struct Shooter<'a> {
    model: Model,
    opts: &'a SolveOptions,
    shots: usize,
}

impl<'a> Shooter<'a> {
    fn shot(&mut self, theta_prime_0: f64, eta_max: f64) -> Result<Shot> {
        self.shots += 1;
        let cap = self.opts.blowup_cap;
        let model = self.model;
        let mut escaped = None;
        let (_, y) = Dopri5::new(self.opts.ode_tol).integrate(
            |eta, y| model.rhs(eta, y),
            0.0,
            [0.0, 1.0, theta_prime_0],
            eta_max,
            |eta, y, _| match escape(eta, y, cap) {
                Some(r) => {
                    escaped = Some(r);
                    Control::Stop
                }
                None => Control::Continue,
            },
        )?;
        Ok(Shot {
            residual: escaped.unwrap_or(y[1]),
            slope_end: y[2],
        })
    }

    /// Illinois regula falsi inside a sign-changing bracket. Returns `None`
    /// when the bracket collapses onto a jump instead of a root.
    fn refine(
        &mut self,
        eta_max: f64,
        (mut a, mut ra): (f64, f64),
        (mut b, mut rb): (f64, f64),
    ) -> Result<Option<(f64, Shot)>> {
        let target = 1e-2 * self.opts.shoot_tol;
        let mut best: Option<(f64, Shot)> = None;
        for _ in 0..200 {
            let (lo, hi) = (a.min(b), a.max(b));
            let mut c = b - rb * (b - a) / (rb - ra);
            if !(c > lo && c < hi) {
                c = 0.5 * (lo + hi);
            }
            let shot = match self.shot(c, eta_max) {
                Ok(s) => s,
                Err(Error::StepUnderflow { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            if best.is_none_or(|(_, s)| shot.residual.abs() < s.residual.abs()) {
                best = Some((c, shot));
            }
            if shot.residual.abs() <= target {
                return Ok(Some((c, shot)));
            }
            if shot.residual.signum() != rb.signum() {
                a = b;
                ra = rb;
            } else {
                ra *= 0.5;
            }
            b = c;
            rb = shot.residual;
            if (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-3) {
                break;
            }
        }
        Ok(best.filter(|(_, s)| s.residual.abs() <= self.opts.shoot_tol))
    }

    /// Scans `[scan_lo, scan_hi]` for sign changes and refines each; among
    /// genuine roots keeps the one with the flattest far field.
    ///
    /// If the coarse grid yields no genuine root, the intervals around local
    /// minima of `|θ(η_max)|` are subdivided and searched again: a root can
    /// sit in a dip much narrower than `scan_step`.
    fn scan(&mut self, eta_max: f64) -> Result<(f64, Shot)> {
        let o = self.opts;
        let count = ((o.scan_hi - o.scan_lo) / o.scan_step).round() as usize;
        let mut samples = Vec::with_capacity(count + 1);
        for k in 0..=count {
            let t = o.scan_lo + o.scan_step * k as f64;
            samples.push((t, self.sample(t, eta_max)?));
        }
        for _ in 0..=SUBDIVISIONS {
            if let Some(found) = self.best_root(eta_max, &samples)? {
                return Ok(found);
            }
            let size = |r: Option<f64>| r.map_or(f64::INFINITY, f64::abs);
            // Samples below the cap that are local minima of |residual|.
            let dip: Vec<bool> = (0..samples.len())
                .map(|i| {
                    let here = size(samples[i].1);
                    let left = if i > 0 {
                        size(samples[i - 1].1)
                    } else {
                        f64::INFINITY
                    };
                    let right = samples.get(i + 1).map_or(f64::INFINITY, |s| size(s.1));
                    here < o.blowup_cap && here <= left && here <= right
                })
                .collect();
            let mut finer = Vec::with_capacity(samples.len());
            for (i, pair) in samples.windows(2).enumerate() {
                finer.push(pair[0]);
                if dip[i] || dip[i + 1] {
                    let width = (pair[1].0 - pair[0].0) / SUBDIVISION_FACTOR as f64;
                    for j in 1..SUBDIVISION_FACTOR {
                        let t = pair[0].0 + width * j as f64;
                        finer.push((t, self.sample(t, eta_max)?));
                    }
                }
            }
            finer.push(*samples.last().expect("at least two samples"));
            samples = finer;
        }
        Err(Error::NoBracket {
            lo: o.scan_lo,
            hi: o.scan_hi,
            eta_max,
        })
    }

    fn sample(&mut self, t: f64, eta_max: f64) -> Result<Option<f64>> {
        match self.shot(t, eta_max) {
            Ok(s) => Ok(Some(s.residual)),
            Err(Error::StepUnderflow { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn best_root(
        &mut self,
        eta_max: f64,
        samples: &[(f64, Option<f64>)],
    ) -> Result<Option<(f64, Shot)>> {
        let mut best: Option<(f64, Shot)> = None;
        for pair in samples.windows(2) {
            let ((a, Some(ra)), (b, Some(rb))) = (pair[0], pair[1]) else {
                continue;
            };
            if ra.signum() == rb.signum() && ra != 0.0 && rb != 0.0 {
                continue;
            }
            if let Some((root, shot)) = self.refine(eta_max, (a, ra), (b, rb))? {
                if best.is_none_or(|(_, s)| shot.slope_end.abs() < s.slope_end.abs()) {
                    best = Some((root, shot));
                }
            }
        }
        Ok(best)
    }

    /// Re-solves on a new domain starting from a nearby root.
    fn continue_from(&mut self, guess: f64, eta_max: f64) -> Result<(f64, Shot)> {
        let centre = self.shot(guess, eta_max)?;
        if centre.residual.abs() <= 1e-2 * self.opts.shoot_tol {
            return Ok((guess, centre));
        }
        let mut delta = 1e-5;
        while delta <= self.opts.scan_step {
            for side in [-delta, delta] {
                let t = guess + side;
                let shot = match self.shot(t, eta_max) {
                    Ok(s) => s,
                    Err(Error::StepUnderflow { .. }) => continue,
                    Err(e) => return Err(e),
                };
                if shot.residual.signum() != centre.residual.signum() {
                    if let Some(found) =
                        self.refine(eta_max, (guess, centre.residual), (t, shot.residual))?
                    {
                        return Ok(found);
                    }
                }
            }
            delta *= 8.0;
        }
        self.scan(eta_max)
    }

    fn profile(&mut self, theta_prime_0: f64, eta_max: f64) -> Result<(f64, SimilaritySolution)> {
        self.shots += 1;
        let model = self.model;
        let cap = self.opts.blowup_cap;
        let mut sol = SimilaritySolution {
            eta: Vec::new(),
            f: Vec::new(),
            fprime: Vec::new(),
            theta: Vec::new(),
            theta_prime: Vec::new(),
            theta_prime_0,
            eta_max,
            diagnostics: Diagnostics {
                method: Method::Shooting,
                iterations: 0,
                final_residual: f64::NAN,
                tolerance: self.opts.shoot_tol,
                domain_history: Vec::new(),
            },
        };
        let mut escaped = None;
        Dopri5::new(self.opts.ode_tol)
            .with_max_step(self.opts.profile_spacing)
            .integrate(
                |eta, y| model.rhs(eta, y),
                0.0,
                [0.0, 1.0, theta_prime_0],
                eta_max,
                |eta, y, dy| {
                    sol.eta.push(eta);
                    sol.f.push(y[0]);
                    sol.fprime.push(dy[0]);
                    sol.theta.push(y[1]);
                    sol.theta_prime.push(y[2]);
                    match escape(eta, y, cap) {
                        Some(r) => {
                            escaped = Some(r);
                            Control::Stop
                        }
                        None => Control::Continue,
                    }
                },
            )?;
        let residual = escaped.unwrap_or(*sol.theta.last().expect("at least the wall point"));
        sol.diagnostics.final_residual = residual;
        Ok((residual, sol))
    }
}

/// Capped residual for a trajectory that has left the physical region.
fn escape(eta: f64, y: &[f64; 3], cap: f64) -> Option<f64> {
    if y[1].abs() > cap {
        Some(cap.copysign(y[1]))
    } else if eta > 0.0 && y[0] < 0.0 {
        // Reversed stream function: the profile has undershot and would
        // otherwise turn around and escape upwards.
        Some(-cap)
    } else {
        None
    }
}

/// Integrates from the wall with slope `theta_prime_0` up to `eta_max`.
///
/// The residual is `θ(η_max)`, or `±blowup_cap` when `|θ|` exceeds the cap
/// first, or `−blowup_cap` when `f` turns negative (the trajectory is then
/// truncated there).
pub fn shoot(
    fluid: &FluidModel,
    wall: &WallModel,
    theta_prime_0: f64,
    eta_max: f64,
    opts: &SolveOptions,
) -> Result<(f64, SimilaritySolution)> {
    crate::params::positive("eta_max", eta_max)?;
    let mut shooter = Shooter {
        model: Model::new(fluid, wall)?,
        opts,
        shots: 0,
    };
    shooter.profile(theta_prime_0, eta_max)
}

/// Shooting solution on a fixed truncated domain `[0, eta_max]`.
pub fn solve_on_domain(
    fluid: &FluidModel,
    wall: &WallModel,
    eta_max: f64,
    opts: &SolveOptions,
) -> Result<SimilaritySolution> {
    opts.validate()?;
    crate::params::positive("eta_max", eta_max)?;
    let mut shooter = Shooter {
        model: Model::new(fluid, wall)?,
        opts,
        shots: 0,
    };
    let (root, _) = shooter.scan(eta_max)?;
    finish(&mut shooter, root, eta_max, vec![(eta_max, root)])
}

/// Solves the boundary value problem, doubling the truncated domain until
/// `θ'(0)` settles to `domain_tol`.
pub fn solve(
    fluid: &FluidModel,
    wall: &WallModel,
    opts: &SolveOptions,
) -> Result<SimilaritySolution> {
    opts.validate()?;
    let mut shooter = Shooter {
        model: Model::new(fluid, wall)?,
        opts,
        shots: 0,
    };
    let mut eta_max = opts.eta_max_initial;
    let (mut root, _) = shooter.scan(eta_max)?;
    let mut history = vec![(eta_max, root)];
    let mut last_change = f64::INFINITY;
    loop {
        let next = (2.0 * eta_max).min(opts.eta_max_cap);
        if next <= eta_max {
            return Err(Error::DomainNonConvergence {
                eta_max_cap: opts.eta_max_cap,
                last_change,
            });
        }
        let (next_root, _) = shooter.continue_from(root, next)?;
        history.push((next, next_root));
        last_change = (next_root - root).abs();
        eta_max = next;
        root = next_root;
        if last_change < opts.domain_tol {
            break;
        }
    }
    finish(&mut shooter, root, eta_max, history)
}

fn finish(
    shooter: &mut Shooter<'_>,
    root: f64,
    eta_max: f64,
    history: Vec<(f64, f64)>,
) -> Result<SimilaritySolution> {
    let (residual, mut sol) = shooter.profile(root, eta_max)?;
    if residual.abs() > shooter.opts.shoot_tol {
        return Err(Error::ShootingNonConvergence {
            tol: shooter.opts.shoot_tol,
            residual,
            theta_prime_0: root,
        });
    }
    sol.diagnostics.iterations = shooter.shots;
    sol.diagnostics.domain_history = history;
    Ok(sol)
}
