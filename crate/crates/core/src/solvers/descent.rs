use std::time::Instant;

use super::{align_pure, RecoveryResult, SolverConfig, StepRule};
use crate::algebra::{aleph, aleph_inv, norm, Hypercomplex, Octonion, Quaternion, Real};
use crate::error::{check_len, HprError, Result};
use crate::sensing::{DenseModel, SensingModel};

/// Cost minimised by [`wirtinger_flow`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Loss {
    /// `1/(denom m) sum (|u_l|^2 - y_l)^2`; `denom = 2` for QWF, `4` for OWF.
    Intensity { denom: f64 },
    /// Negated Poisson log-likelihood `1/m sum (|u_l|^2 - y_l log |u_l|^2)`
    /// with per-measurement truncation taken from the config.
    TruncatedPoisson,
}

/// Per-iteration data shared by the cost, the mask and the direction.
struct Eval<T> {
    u: Vec<T>,
    mask: Vec<bool>,
    cost: f64,
    fit: f64,
}

struct Problem<'a, M: SensingModel + ?Sized> {
    model: &'a M,
    y: &'a [f64],
    config: &'a SolverConfig,
    loss: Loss,
    root_mean_y: f64,
    /// `sqrt(entry_energy)`, the typical `|a_l^* x| / |x|`.
    root_rho: f64,
}

impl<M: SensingModel + ?Sized> Problem<'_, M> {
    fn m(&self) -> f64 {
        self.model.m() as f64
    }

    fn floor_sqr(&self) -> f64 {
        (self.config.log_floor * self.root_mean_y).powi(2)
    }

    /// Measurements kept by the truncation rules at `x`.
    fn mask(&self, u: &[M::Scalar], x_norm: f64) -> Vec<bool> {
        match self.loss {
            Loss::Intensity { .. } => vec![true; u.len()],
            Loss::TruncatedPoisson => {
                let c = self.config;
                let rho = self.root_mean_y;
                let mean_res = u
                    .iter()
                    .zip(self.y)
                    .map(|(v, &y)| (v.norm_sqr() - y).abs())
                    .sum::<f64>()
                    / self.m();
                let floor = self.floor_sqr().sqrt();
                u.iter()
                    .zip(self.y)
                    .map(|(v, &y)| {
                        let amp = v.modulus();
                        let band = amp >= c.tau_lo * rho && amp <= c.tau_hi * rho && amp >= floor;
                        let res_ok = x_norm == 0.0
                            || (v.norm_sqr() - y).abs()
                                <= c.tau_res * mean_res * amp / (x_norm * self.root_rho);
                        band && res_ok
                    })
                    .collect()
            }
        }
    }

    fn cost(&self, u: &[M::Scalar], mask: &[bool]) -> f64 {
        let m = self.m();
        match self.loss {
            Loss::Intensity { denom } => {
                u.iter()
                    .zip(self.y)
                    .map(|(v, &y)| (v.norm_sqr() - y).powi(2))
                    .sum::<f64>()
                    / (denom * m)
            }
            Loss::TruncatedPoisson => {
                let floor = self.floor_sqr();
                u.iter()
                    .zip(self.y)
                    .zip(mask)
                    .filter(|(_, &keep)| keep)
                    .map(|((v, &y), _)| {
                        let a2 = v.norm_sqr().max(floor);
                        if y > 0.0 {
                            a2 - y * a2.ln()
                        } else {
                            a2
                        }
                    })
                    .sum::<f64>()
                    / m
            }
        }
    }

    fn fit(&self, u: &[M::Scalar]) -> f64 {
        u.iter()
            .zip(self.y)
            .map(|(v, &y)| (v.norm_sqr() - y).powi(2))
            .sum::<f64>()
            / (2.0 * self.m())
    }

    fn evaluate(&self, x: &[M::Scalar], mask: Option<&[bool]>) -> Result<Eval<M::Scalar>> {
        let u = self.model.forward(x)?;
        let mask = match mask {
            Some(m) => m.to_vec(),
            None => self.mask(&u, norm(x)),
        };
        let cost = self.cost(&u, &mask);
        let fit = self.fit(&u);
        Ok(Eval { u, mask, cost, fit })
    }

    /// Descent direction at an evaluated point, in real coordinates.
    fn direction(&self, e: &Eval<M::Scalar>) -> Result<Vec<f64>> {
        let m = self.m();
        let weighted: Vec<M::Scalar> =
            e.u.iter()
                .zip(self.y)
                .zip(&e.mask)
                .map(|((&v, &y), &keep)| {
                    if !keep {
                        return M::Scalar::zero();
                    }
                    let a2 = v.norm_sqr();
                    let c = match self.loss {
                        Loss::Intensity { .. } => a2 - y,
                        Loss::TruncatedPoisson => (a2 - y) / a2.max(self.floor_sqr()),
                    };
                    v * (c / m)
                })
                .collect();
        Ok(aleph(&self.model.adjoint(&weighted)?))
    }
}

fn project_pure(z: &mut [f64], dim: usize) {
    z.iter_mut().step_by(dim).for_each(|c| *c = 0.0);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Gradient descent on `loss` from `x0` with halving backtracking and the
/// configured step rule. Stops at `max_iters`, when the relative cost
/// decrease falls below `stop_tol`, or when the intensity misfit reaches
/// `abs_tol * mean(y)^2`.
pub fn wirtinger_flow<M: SensingModel + ?Sized>(
    model: &M,
    y: &[f64],
    config: &SolverConfig,
    x0: &[M::Scalar],
    loss: Loss,
) -> Result<RecoveryResult<M::Scalar>> {
    config.validate()?;
    check_len(model.m(), y.len())?;
    check_len(model.n(), x0.len())?;
    let dim = M::Scalar::DIM;
    if config.pure_imaginary && dim != 4 {
        return Err(HprError::InvalidParameter(
            "pure-imaginary mode needs quaternions".into(),
        ));
    }
    if y.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(HprError::InvalidParameter(
            "intensities must be finite and nonnegative".into(),
        ));
    }
    let started = Instant::now();
    let mean_y = y.iter().sum::<f64>() / y.len() as f64;
    // The curvature scales with the operator energy; rho = 1 for unit-variance
    // Gaussian rows, where the step reduces to step / |x0|^2.
    let rho = model.entry_energy()?;
    let problem = Problem {
        model,
        y,
        config,
        loss,
        root_mean_y: mean_y.sqrt(),
        root_rho: rho.sqrt(),
    };

    let mut z = aleph(x0);
    if config.pure_imaginary {
        project_pure(&mut z, dim);
    }
    let x0_sqr = dot(&z, &z);
    let eta0 = match loss {
        Loss::Intensity { .. } if x0_sqr > 0.0 => config.step_size / (x0_sqr * rho * rho),
        Loss::Intensity { .. } if mean_y > 0.0 => config.step_size / (mean_y * rho),
        Loss::Intensity { .. } => config.step_size / rho,
        Loss::TruncatedPoisson => config.step_size / rho,
    };
    let floor = config.abs_tol * mean_y * mean_y;

    let mut cur = problem.evaluate(&aleph_inv(&z)?, None)?;
    let mut grad = problem.direction(&cur)?;
    let mut trace = vec![cur.cost];
    let mut eta = eta0;
    let mut iterations = 0;
    let mut converged = cur.fit <= floor;

    while !converged && iterations < config.max_iters {
        let mut step = eta;
        let mut accepted = None;
        for _ in 0..=config.max_backtracks {
            let mut zn: Vec<f64> = z.iter().zip(&grad).map(|(a, g)| a - step * g).collect();
            if config.pure_imaginary {
                project_pure(&mut zn, dim);
            }
            let trial = problem.evaluate(&aleph_inv(&zn)?, Some(&cur.mask))?;
            if trial.cost.is_finite() && trial.cost <= cur.cost {
                accepted = Some((zn, trial));
                break;
            }
            step *= 0.5;
        }
        let Some((zn, trial)) = accepted else {
            break;
        };
        iterations += 1;
        let previous = cur.cost;
        let decrease = previous - trial.cost;
        // Re-evaluate so the truncation mask follows the new iterate.
        let next = match loss {
            Loss::Intensity { .. } => trial,
            Loss::TruncatedPoisson => problem.evaluate(&aleph_inv(&zn)?, None)?,
        };
        let gn = problem.direction(&next)?;
        if config.step_rule == StepRule::BarzilaiBorwein {
            let s: Vec<f64> = zn.iter().zip(&z).map(|(a, b)| a - b).collect();
            let dg: Vec<f64> = gn.iter().zip(&grad).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &dg);
            let bb = dot(&s, &s) / sy;
            eta = if sy > 0.0 && bb.is_finite() {
                bb.min(1e4 * eta0)
            } else {
                eta0
            };
        }
        z = zn;
        grad = gn;
        cur = next;
        trace.push(cur.cost);
        if cur.fit <= floor || decrease <= config.stop_tol * previous.abs() {
            converged = true;
        }
    }

    Ok(RecoveryResult {
        estimate: aleph_inv(&z)?,
        cost_trace: trace,
        final_distance: None,
        iterations,
        wall_time: started.elapsed().as_secs_f64(),
        converged,
    })
}

fn aligned_start(x0: &[Quaternion], config: &SolverConfig) -> Vec<Quaternion> {
    if config.pure_imaginary {
        align_pure(x0)
    } else {
        x0.to_vec()
    }
}

/// Quaternion Wirtinger flow on `1/(2m) sum (|a_l^* x|^2 - y_l)^2`.
pub fn qwf<M: SensingModel<Scalar = Quaternion> + ?Sized>(
    model: &M,
    y: &[f64],
    config: &SolverConfig,
    x0: &[Quaternion],
) -> Result<RecoveryResult<Quaternion>> {
    wirtinger_flow(
        model,
        y,
        config,
        &aligned_start(x0, config),
        Loss::Intensity { denom: 2.0 },
    )
}

/// Truncated quaternion Wirtinger flow on the Poisson objective.
pub fn qtwf<M: SensingModel<Scalar = Quaternion> + ?Sized>(
    model: &M,
    y: &[f64],
    config: &SolverConfig,
    x0: &[Quaternion],
) -> Result<RecoveryResult<Quaternion>> {
    wirtinger_flow(
        model,
        y,
        config,
        &aligned_start(x0, config),
        Loss::TruncatedPoisson,
    )
}

/// Octonion Wirtinger flow, carried out on `aleph(x)` with the lifted rows.
pub fn owf<M: SensingModel<Scalar = Octonion> + ?Sized>(
    model: &M,
    y: &[f64],
    config: &SolverConfig,
    x0: &[Octonion],
) -> Result<RecoveryResult<Octonion>> {
    wirtinger_flow(model, y, config, x0, Loss::Intensity { denom: 4.0 })
}

/// Real Wirtinger flow on a real Gaussian model, the channel-concatenation baseline.
pub fn concat_wf(
    model: &DenseModel<Real>,
    y: &[f64],
    config: &SolverConfig,
    x0: &[Real],
) -> Result<RecoveryResult<Real>> {
    wirtinger_flow(model, y, config, x0, Loss::Intensity { denom: 2.0 })
}
