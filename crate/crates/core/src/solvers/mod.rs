//! Spectral initialisation, Wirtinger-flow style descent and ambiguity-aware
//! distances.

mod descent;
mod distance;
mod gradient;
mod spectral;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use descent::{concat_wf, owf, qtwf, qwf, wirtinger_flow, Loss};
pub use distance::{
    oct_distance, oct_factor, phase_distance, phase_factor, quat_distance, sampled_oct_distance,
};
pub use gradient::{
    finite_difference, owf_cost, owf_gradient, qwf_cost, qwf_gradient, qwf_real_gradient,
};
pub use spectral::{align_pure, power_method, spectral_init, SpectralInit};

use crate::error::{HprError, Result};

/// How the step size evolves between iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepRule {
    /// `eta` every iteration, halved on a cost increase.
    Fixed,
    /// Barzilai-Borwein `<s, s> / <s, dg>` from the last two iterates, halved
    /// on a cost increase.
    BarzilaiBorwein,
}

/// Weights `w_l` in the spectral matrix `(1/m) sum w_l a_l a_l^*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectralWeighting {
    /// `w = y`.
    Plain,
    /// `w = y` for `y <= alpha mean(y)`, zero above.
    Truncated { alpha: f64 },
    /// `w = (s - 1) / (s + sqrt(delta) - 1)`, `s = y / mean(y)`,
    /// `delta = m / (DIM n)`. Falls back to `Plain` when `delta <= 1`.
    Optimal,
}

/// Norm of the spectral estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScaleRule {
    /// `sqrt(mean(y))`, matching `E[y_l] = |x|^2`.
    MeanIntensity,
    /// `(mean(y^2))^{1/2}`.
    RootMeanSquare,
}

/// Solver hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Initial step. Scaled by `1/|x0|^2` for the intensity costs.
    pub step_size: f64,
    pub step_rule: StepRule,
    pub max_iters: usize,
    /// Stop when the relative cost decrease falls below this.
    pub stop_tol: f64,
    /// Stop when the intensity misfit `(1/2m) sum r^2` drops below
    /// `abs_tol * mean(y)^2`.
    pub abs_tol: f64,
    pub max_backtracks: usize,
    pub power_iters: usize,
    pub power_tol: f64,
    /// `None` picks `Plain` for quaternions and `Optimal` for octonions.
    pub weighting: Option<SpectralWeighting>,
    pub scale_rule: ScaleRule,
    /// Amplitude band for the truncated solver, relative to `sqrt(mean(y))`.
    pub tau_lo: f64,
    pub tau_hi: f64,
    /// Residual trimming multiplier for the truncated solver; infinite disables.
    pub tau_res: f64,
    /// Log guard, relative to `sqrt(mean(y))`.
    pub log_floor: f64,
    /// Keep the estimate purely imaginary (RGB signals).
    pub pure_imaginary: bool,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            step_size: 0.1,
            step_rule: StepRule::BarzilaiBorwein,
            max_iters: 2000,
            stop_tol: 1e-12,
            abs_tol: 1e-24,
            max_backtracks: 20,
            power_iters: 100,
            power_tol: 1e-10,
            weighting: None,
            scale_rule: ScaleRule::MeanIntensity,
            tau_lo: 0.1,
            tau_hi: 5.0,
            tau_res: 5.0,
            log_floor: 1e-12,
            pure_imaginary: false,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(HprError::InvalidParameter(what.to_string()));
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return bad("step size must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if self.power_iters == 0 {
            return bad("power_iters must be at least 1");
        }
        if !(self.tau_lo >= 0.0 && self.tau_hi > self.tau_lo) {
            return bad("truncation band must satisfy 0 <= tau_lo < tau_hi");
        }
        if !(self.tau_res > 0.0) {
            return bad("tau_res must be positive");
        }
        if self.stop_tol < 0.0 || self.abs_tol < 0.0 || self.log_floor < 0.0 {
            return bad("tolerances must be nonnegative");
        }
        Ok(())
    }
}

/// Output of a solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult<T> {
    pub estimate: Vec<T>,
    /// Cost after every accepted iterate, starting with the initial point.
    pub cost_trace: Vec<f64>,
    /// Relative to ground truth, filled in by callers that have it.
    pub final_distance: Option<f64>,
    pub iterations: usize,
    pub wall_time: f64,
    pub converged: bool,
}

/// Solver identifiers as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolverKind {
    Qwf,
    Qtwf,
    Owf,
    ConcatWf,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [
        SolverKind::Qwf,
        SolverKind::Qtwf,
        SolverKind::Owf,
        SolverKind::ConcatWf,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Qwf => "qwf",
            SolverKind::Qtwf => "qtwf",
            SolverKind::Owf => "owf",
            SolverKind::ConcatWf => "concat-wf",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = HprError;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| HprError::InvalidParameter(format!("unknown solver '{s}'")))
    }
}
