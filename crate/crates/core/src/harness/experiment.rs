use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::algebra::{aleph, Hypercomplex, Octonion, Quaternion, Real};
use crate::error::{HprError, Result};
use crate::rng::{child_rng, derive_seed, normal, stream};
use crate::sensing::{
    add_noise, measure, CodedFourier, DenseModel, DoeAlphabet, ModelKind, QuaternionModel,
    StftModel, WaveletModel,
};
use crate::solvers::{
    concat_wf, oct_distance, owf, phase_distance, qtwf, qwf, spectral_init, RecoveryResult,
    SolverConfig, SolverKind, SpectralWeighting,
};
use crate::transforms::{MotherWavelet, QstftPlan, QwtBank};

/// Shape parameters for the structured sensing models.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// DOE alphabet size for coded Fourier sensing.
    pub doe_symbols: usize,
    /// Window length for STFT sensing, clipped to the signal length.
    pub window: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            doe_symbols: 8,
            window: 8,
        }
    }
}

/// A Monte-Carlo experiment over a grid of sample complexities and SNRs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub solver: SolverKind,
    pub model: ModelKind,
    /// Signal length. The 2-D models (coded Fourier, wavelet) need a square.
    pub n: usize,
    pub params: ModelParams,
    pub m_over_n: Vec<f64>,
    /// `f64::INFINITY` means noiseless.
    pub snr_db: Vec<f64>,
    pub trials: usize,
    /// A trial succeeds when `dist(x_est, x) / |x|` is below this.
    pub success_threshold: f64,
    /// Number of measurements multiplied by `outlier_factor` after noise.
    pub outliers: usize,
    pub outlier_factor: f64,
    pub seed: u64,
    pub config: SolverConfig,
}

impl ExperimentSpec {
    /// Noiseless single-cell experiment at `m/n = 10` with 100 trials.
    pub fn new(solver: SolverKind, model: ModelKind, n: usize) -> Self {
        ExperimentSpec {
            solver,
            model,
            n,
            params: ModelParams::default(),
            m_over_n: vec![10.0],
            snr_db: vec![f64::INFINITY],
            trials: 100,
            success_threshold: 1e-5,
            outliers: 0,
            outlier_factor: 100.0,
            seed: 0,
            config: default_solver_config(solver),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(HprError::InvalidParameter(what));
        self.config.validate()?;
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.m_over_n.is_empty() || self.snr_db.is_empty() {
            return bad("m/n and SNR grids must be nonempty".into());
        }
        if !(self.success_threshold > 0.0) {
            return bad("success threshold must be positive".into());
        }
        if self.n == 0 {
            return bad("signal length must be positive".into());
        }
        if let Some(r) = self
            .m_over_n
            .iter()
            .find(|r| !(r.is_finite() && **r >= 0.0))
        {
            return bad(format!("m/n must be finite and nonnegative, got {r}"));
        }
        if let Some(s) = self
            .snr_db
            .iter()
            .find(|s| s.is_nan() || **s == f64::NEG_INFINITY)
        {
            return bad(format!("SNR must be finite or +inf, got {s}"));
        }
        if !(self.outlier_factor.is_finite() && self.outlier_factor >= 0.0) {
            return bad("outlier factor must be finite and nonnegative".into());
        }
        let compatible = match self.solver {
            SolverKind::Owf => self.model == ModelKind::GaussianOctonion,
            SolverKind::ConcatWf => matches!(
                self.model,
                ModelKind::GaussianQuaternion | ModelKind::GaussianReal
            ),
            SolverKind::Qwf | SolverKind::Qtwf => self.model != ModelKind::GaussianOctonion,
        };
        if !compatible {
            return bad(format!(
                "solver {} cannot run on model {}",
                self.solver, self.model
            ));
        }
        if matches!(self.model, ModelKind::CodedFourier | ModelKind::Wavelet) {
            side_of(self.n)?;
            if let Some(r) = self.m_over_n.iter().find(|r| r.fract() != 0.0) {
                return bad(format!("{} needs integer m/n, got {r}", self.model));
            }
        }
        Ok(())
    }

    /// Name of the algebra the solver works in.
    pub fn algebra(&self) -> &'static str {
        match self.solver {
            SolverKind::Owf => Octonion::NAME,
            SolverKind::ConcatWf => Real::NAME,
            SolverKind::Qwf | SolverKind::Qtwf => Quaternion::NAME,
        }
    }

    /// Number of measurements at sample complexity `ratio`.
    pub fn measurements(&self, ratio: f64) -> Result<usize> {
        let n = self.n;
        Ok(match self.model {
            ModelKind::GaussianReal
            | ModelKind::GaussianQuaternion
            | ModelKind::GaussianOctonion => (ratio * n as f64).round() as usize,
            ModelKind::CodedFourier | ModelKind::Wavelet => ratio as usize * n,
            ModelKind::Stft => match stft_plan(n, &self.params, ratio)? {
                Some(plan) => plan.sections() * n,
                None => 0,
            },
        })
    }
}

/// Solver defaults used by the harness: more power iterations for the
/// octonion spectral gap and a truncated spectral start for QTWF.
pub fn default_solver_config(solver: SolverKind) -> SolverConfig {
    let mut c = SolverConfig::default();
    match solver {
        SolverKind::Owf => c.power_iters = 1000,
        SolverKind::Qtwf => c.weighting = Some(SpectralWeighting::Truncated { alpha: 9.0 }),
        SolverKind::Qwf | SolverKind::ConcatWf => {}
    }
    c
}

/// Aggregated statistics of one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub solver: SolverKind,
    pub algebra: &'static str,
    pub n: usize,
    pub m: usize,
    pub m_over_n: f64,
    pub snr_db: f64,
    pub trials: usize,
    pub successes: usize,
    /// `successes / trials`; trials that errored count as failures.
    pub success_rate: f64,
    pub mean_rel_dist: f64,
    pub median_rel_dist: f64,
    pub mean_iters: f64,
    pub mean_seconds: f64,
    pub failed_trials: usize,
    pub seed: u64,
    /// Set when the cell was skipped or some trials errored.
    pub note: Option<String>,
}

impl ExperimentRecord {
    pub fn is_complete(&self) -> bool {
        self.note.is_none()
    }
}

/// Result of one seeded trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub rel_dist: f64,
    pub iterations: usize,
    pub seconds: f64,
    pub converged: bool,
}

/// One record per `(m/n, SNR)` cell, sample complexity outermost.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<ExperimentRecord>> {
    spec.validate()?;
    let cells: Vec<(f64, f64)> = spec
        .m_over_n
        .iter()
        .flat_map(|&r| spec.snr_db.iter().map(move |&s| (r, s)))
        .collect();
    Ok(run_cells(spec, &cells))
}

/// Same cells as [`run_sweep`] with SNR outermost.
pub fn run_snr_curve(spec: &ExperimentSpec) -> Result<Vec<ExperimentRecord>> {
    spec.validate()?;
    let cells: Vec<(f64, f64)> = spec
        .snr_db
        .iter()
        .flat_map(|&s| spec.m_over_n.iter().map(move |&r| (r, s)))
        .collect();
    Ok(run_cells(spec, &cells))
}

/// Trials of every feasible cell run as one parallel batch on the current
/// rayon pool; results are collected in index order and reduced serially.
fn run_cells(spec: &ExperimentSpec, cells: &[(f64, f64)]) -> Vec<ExperimentRecord> {
    let sizes: Vec<Result<usize>> = cells.iter().map(|&(r, _)| spec.measurements(r)).collect();
    let jobs: Vec<(usize, usize)> = sizes
        .iter()
        .enumerate()
        .filter(|(_, m)| matches!(m, Ok(m) if *m > 0))
        .flat_map(|(c, _)| (0..spec.trials).map(move |t| (c, t)))
        .collect();
    let outcomes: Vec<Result<TrialOutcome>> = jobs
        .par_iter()
        .map(|&(c, t)| run_trial(spec, cells[c].0, cells[c].1, t))
        .collect();

    let mut outcomes = outcomes.into_iter();
    cells
        .iter()
        .zip(sizes)
        .map(|(&(ratio, snr), size)| {
            let base = ExperimentRecord {
                solver: spec.solver,
                algebra: spec.algebra(),
                n: spec.n,
                m: 0,
                m_over_n: ratio,
                snr_db: snr,
                trials: 0,
                successes: 0,
                success_rate: 0.0,
                mean_rel_dist: f64::NAN,
                median_rel_dist: f64::NAN,
                mean_iters: f64::NAN,
                mean_seconds: f64::NAN,
                failed_trials: 0,
                seed: spec.seed,
                note: None,
            };
            match size {
                Ok(m) if m > 0 => {
                    let cell: Vec<Result<TrialOutcome>> =
                        outcomes.by_ref().take(spec.trials).collect();
                    reduce(
                        ExperimentRecord { m, ..base },
                        &cell,
                        spec.success_threshold,
                    )
                }
                Ok(_) => {
                    log::warn!("skipping m/n = {ratio}: no measurements");
                    ExperimentRecord {
                        note: Some("infeasible: m < 1".into()),
                        ..base
                    }
                }
                Err(e) => {
                    log::warn!("skipping m/n = {ratio}: {e}");
                    ExperimentRecord {
                        note: Some(format!("infeasible: {e}")),
                        ..base
                    }
                }
            }
        })
        .collect()
}

fn reduce(
    mut rec: ExperimentRecord,
    cell: &[Result<TrialOutcome>],
    threshold: f64,
) -> ExperimentRecord {
    let done: Vec<&TrialOutcome> = cell.iter().filter_map(|o| o.as_ref().ok()).collect();
    rec.trials = cell.len();
    rec.failed_trials = cell.len() - done.len();
    rec.successes = done.iter().filter(|o| o.rel_dist < threshold).count();
    rec.success_rate = rec.successes as f64 / rec.trials as f64;
    if !done.is_empty() {
        let k = done.len() as f64;
        rec.mean_rel_dist = done.iter().map(|o| o.rel_dist).sum::<f64>() / k;
        rec.mean_iters = done.iter().map(|o| o.iterations as f64).sum::<f64>() / k;
        rec.mean_seconds = done.iter().map(|o| o.seconds).sum::<f64>() / k;
        let mut d: Vec<f64> = done.iter().map(|o| o.rel_dist).collect();
        d.sort_by(f64::total_cmp);
        let h = d.len() / 2;
        rec.median_rel_dist = if d.len() % 2 == 1 {
            d[h]
        } else {
            0.5 * (d[h - 1] + d[h])
        };
    }
    if let Some(Err(e)) = cell.iter().find(|o| o.is_err()) {
        log::warn!("{} of {} trials failed: {e}", rec.failed_trials, rec.trials);
        rec.note = Some(format!("{} trials failed: {e}", rec.failed_trials));
    }
    rec
}

/// Runs trial `t` of the cell `(ratio, snr)`. Seeds depend on the master
/// seed, `ratio` and `t` only, so every solver and every SNR sees the same
/// signal and sensing draw.
pub fn run_trial(spec: &ExperimentSpec, ratio: f64, snr_db: f64, t: usize) -> Result<TrialOutcome> {
    let seed = |s: u64| derive_seed(spec.seed, &[ratio.to_bits(), t as u64, s]);
    let m = spec.measurements(ratio)?;
    if m == 0 {
        return Err(HprError::InvalidParameter(format!(
            "no measurements at m/n = {ratio}"
        )));
    }
    let config = SolverConfig {
        seed: seed(stream::INIT),
        ..spec.config.clone()
    };
    let corrupt = |y: Vec<f64>| -> Result<Vec<f64>> {
        let mut y = add_noise(&y, snr_db, seed(stream::NOISE))?;
        let mut rng = child_rng(seed(stream::OUTLIER), &[]);
        for _ in 0..spec.outliers.min(y.len()) {
            let l = rand::Rng::random_range(&mut rng, 0..y.len());
            y[l] *= spec.outlier_factor;
        }
        Ok(y)
    };
    let signal = |n: usize| gaussian_signal::<Quaternion>(n, seed(stream::SIGNAL));

    match spec.solver {
        SolverKind::Qwf | SolverKind::Qtwf => {
            let model = build_quaternion_model(
                spec.model,
                &spec.params,
                spec.n,
                ratio,
                seed(stream::SENSING),
            )?;
            let x = signal(spec.n);
            let y = corrupt(measure(&model, &x)?)?;
            let x0 = spectral_init(&model, &y, &config)?.estimate;
            let res = if spec.solver == SolverKind::Qwf {
                qwf(&model, &y, &config, &x0)?
            } else {
                qtwf(&model, &y, &config, &x0)?
            };
            Ok(outcome(&res, phase_distance(&res.estimate, &x), &x))
        }
        SolverKind::Owf => {
            let model = DenseModel::<Octonion>::gaussian(m, spec.n, seed(stream::SENSING))?;
            let x = gaussian_signal::<Octonion>(spec.n, seed(stream::SIGNAL));
            let y = corrupt(measure(&model, &x)?)?;
            let x0 = spectral_init(&model, &y, &config)?.estimate;
            let res = owf(&model, &y, &config, &x0)?;
            Ok(outcome(&res, oct_distance(&res.estimate, &x), &x))
        }
        SolverKind::ConcatWf => {
            let x: Vec<Real> = aleph(&signal(spec.n)).into_iter().map(Real).collect();
            let model = DenseModel::<Real>::gaussian(m, x.len(), seed(stream::BASELINE))?;
            let y = corrupt(measure(&model, &x)?)?;
            let x0 = spectral_init(&model, &y, &config)?.estimate;
            let res = concat_wf(&model, &y, &config, &x0)?;
            Ok(outcome(&res, phase_distance(&res.estimate, &x), &x))
        }
    }
}

fn outcome<T: Hypercomplex>(res: &RecoveryResult<T>, dist: f64, x: &[T]) -> TrialOutcome {
    let nx = crate::algebra::norm(x);
    TrialOutcome {
        rel_dist: if nx > 0.0 { dist / nx } else { dist },
        iterations: res.iterations,
        seconds: res.wall_time,
        converged: res.converged,
    }
}

/// I.i.d. standard normal coefficients.
pub fn gaussian_signal<T: Hypercomplex>(n: usize, seed: u64) -> Vec<T> {
    let mut rng = child_rng(seed, &[]);
    let mut c = vec![0.0; T::DIM];
    (0..n)
        .map(|_| {
            c.iter_mut().for_each(|v| *v = normal(&mut rng));
            T::from_coeffs(&c)
        })
        .collect()
}

/// Builds a quaternion sensing model with `ratio * n` measurements (rounded
/// for dense models; structured models take `ratio` snapshots, bank members
/// or STFT sections).
pub fn build_quaternion_model(
    kind: ModelKind,
    params: &ModelParams,
    n: usize,
    ratio: f64,
    seed: u64,
) -> Result<QuaternionModel> {
    let count = |what: &str| -> Result<usize> {
        if ratio.fract() != 0.0 || ratio < 1.0 {
            return Err(HprError::InvalidParameter(format!(
                "{what} needs a positive integer m/n, got {ratio}"
            )));
        }
        Ok(ratio as usize)
    };
    Ok(match kind {
        ModelKind::GaussianQuaternion => QuaternionModel::Dense(DenseModel::gaussian(
            (ratio * n as f64).round() as usize,
            n,
            seed,
        )?),
        ModelKind::GaussianReal => QuaternionModel::Dense(DenseModel::gaussian_real(
            (ratio * n as f64).round() as usize,
            n,
            seed,
        )?),
        ModelKind::CodedFourier => {
            let alphabet = DoeAlphabet::standard(params.doe_symbols)?;
            QuaternionModel::CodedFourier(CodedFourier::new(
                side_of(n)?,
                count("coded Fourier")?,
                &alphabet,
                seed,
            )?)
        }
        ModelKind::Stft => {
            let plan = stft_plan(n, params, ratio)?.ok_or_else(|| {
                HprError::InvalidParameter(format!("no STFT sections at m/n = {ratio}"))
            })?;
            QuaternionModel::Stft(StftModel::new(plan))
        }
        ModelKind::Wavelet => {
            let members = count("wavelet")?;
            let bank: Vec<(f64, f64)> = (0..members)
                .map(|k| ((1 + k / 4) as f64, (k % 4) as f64 * FRAC_PI_2))
                .collect();
            QuaternionModel::Wavelet(WaveletModel::new(QwtBank::new(
                side_of(n)?,
                MotherWavelet::haar(),
                &bank,
            )?))
        }
        ModelKind::GaussianOctonion => {
            return Err(HprError::InvalidParameter(
                "gaussian-o is not a quaternion model".into(),
            ));
        }
    })
}

/// Rectangular window with the largest hop giving at most `ratio` sections.
fn stft_plan(n: usize, params: &ModelParams, ratio: f64) -> Result<Option<QstftPlan>> {
    let sections = ratio.floor() as usize;
    if sections == 0 {
        return Ok(None);
    }
    let window = params.window.clamp(1, n);
    let span = n + window - 1;
    let hop = span.div_ceil(sections).max(1);
    QstftPlan::rectangular(window, hop, n).map(Some)
}

fn side_of(n: usize) -> Result<usize> {
    let side = (n as f64).sqrt().round() as usize;
    if side * side != n {
        return Err(HprError::InvalidParameter(format!(
            "2-D models need a square signal length, got {n}"
        )));
    }
    Ok(side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensing::SensingModel;

    fn small(solver: SolverKind, model: ModelKind) -> ExperimentSpec {
        ExperimentSpec {
            trials: 3,
            ..ExperimentSpec::new(solver, model, 4)
        }
    }

    #[test]
    fn validation() {
        assert!(small(SolverKind::Qwf, ModelKind::GaussianQuaternion)
            .validate()
            .is_ok());
        assert!(small(SolverKind::Owf, ModelKind::GaussianQuaternion)
            .validate()
            .is_err());
        assert!(small(SolverKind::Qwf, ModelKind::GaussianOctonion)
            .validate()
            .is_err());
        assert!(small(SolverKind::ConcatWf, ModelKind::Stft)
            .validate()
            .is_err());
        let mut s = small(SolverKind::Qwf, ModelKind::CodedFourier);
        assert!(s.validate().is_ok());
        s.m_over_n = vec![2.5];
        assert!(s.validate().is_err());
        s = small(SolverKind::Qwf, ModelKind::Wavelet);
        s.n = 5;
        assert!(s.validate().is_err());
        for bad in [
            ExperimentSpec {
                trials: 0,
                ..small(SolverKind::Qwf, ModelKind::GaussianQuaternion)
            },
            ExperimentSpec {
                m_over_n: vec![],
                ..small(SolverKind::Qwf, ModelKind::GaussianQuaternion)
            },
            ExperimentSpec {
                snr_db: vec![f64::NAN],
                ..small(SolverKind::Qwf, ModelKind::GaussianQuaternion)
            },
            ExperimentSpec {
                success_threshold: 0.0,
                ..small(SolverKind::Qwf, ModelKind::GaussianQuaternion)
            },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn measurement_counts() {
        let s = small(SolverKind::Qwf, ModelKind::GaussianQuaternion);
        assert_eq!(s.measurements(2.5).unwrap(), 10);
        let c = ExperimentSpec {
            n: 16,
            ..small(SolverKind::Qwf, ModelKind::CodedFourier)
        };
        assert_eq!(c.measurements(3.0).unwrap(), 48);
        for kind in [
            ModelKind::GaussianQuaternion,
            ModelKind::GaussianReal,
            ModelKind::CodedFourier,
            ModelKind::Stft,
            ModelKind::Wavelet,
        ] {
            let spec = ExperimentSpec {
                n: 16,
                ..small(SolverKind::Qwf, kind)
            };
            let model = build_quaternion_model(kind, &spec.params, 16, 4.0, 1).unwrap();
            assert_eq!(model.m(), spec.measurements(4.0).unwrap(), "{kind}");
            assert_eq!(model.n(), 16);
        }
    }

    #[test]
    fn infeasible_cell_is_skipped() {
        let spec = ExperimentSpec {
            m_over_n: vec![0.0, 10.0],
            ..small(SolverKind::Qwf, ModelKind::GaussianQuaternion)
        };
        let recs = run_sweep(&spec).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(recs[0].note.is_some() && recs[0].trials == 0);
        assert!(recs[1].is_complete() && recs[1].trials == 3);
    }

    #[test]
    fn sweep_is_deterministic() {
        let spec = ExperimentSpec {
            trials: 2,
            ..small(SolverKind::Qwf, ModelKind::GaussianQuaternion)
        };
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        let strip = |r: &[ExperimentRecord]| -> Vec<ExperimentRecord> {
            r.iter()
                .map(|x| ExperimentRecord {
                    mean_seconds: 0.0,
                    ..x.clone()
                })
                .collect()
        };
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn infinite_snr_cell_matches_noiseless_sweep() {
        let base = small(SolverKind::Qwf, ModelKind::GaussianQuaternion);
        let noiseless = run_sweep(&base).unwrap();
        let curve = run_snr_curve(&ExperimentSpec {
            snr_db: vec![10.0, f64::INFINITY],
            ..base
        })
        .unwrap();
        assert_eq!(curve[1].mean_rel_dist, noiseless[0].mean_rel_dist);
        assert_eq!(curve[1].successes, noiseless[0].successes);
    }

    #[test]
    fn easy_cells_succeed() {
        for (solver, model) in [
            (SolverKind::Qwf, ModelKind::GaussianQuaternion),
            (SolverKind::Qtwf, ModelKind::GaussianQuaternion),
            (SolverKind::Owf, ModelKind::GaussianOctonion),
            (SolverKind::ConcatWf, ModelKind::GaussianQuaternion),
        ] {
            let spec = ExperimentSpec {
                m_over_n: vec![16.0],
                ..small(solver, model)
            };
            let rec = &run_sweep(&spec).unwrap()[0];
            assert!(rec.success_rate >= 2.0 / 3.0, "{solver}: {rec:?}");
        }
    }
}
