use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use hpr_core::algebra::OCTONION_TABLE;
use hpr_core::harness::{
    recover_image, run_snr_curve, run_sweep, ExperimentRecord, ImageSolver, ImageTask,
};
use hpr_core::selftest::{gradient_check, run_selftest, SelftestConfig, GRADIENT_TOL};
use log::{info, warn};

use crate::io::{self, CsvRow, Manifest, Metrics};
use crate::settings::{Defaults, RawConfig, Settings};
use crate::{GradcheckArgs, RecoverArgs, SelftestArgs};

/// How a command finished, beyond hard errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A self-check found violations.
    CheckFailed,
    /// Outputs were written but some cells were skipped or had failing trials.
    Partial,
}

impl Status {
    pub fn code(self) -> ExitCode {
        ExitCode::from(match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
            Status::Partial => 3,
        })
    }
}

fn manifest(command: &str, s: &Settings, outputs: &[&str]) -> Manifest {
    Manifest {
        command: command.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: s.seed,
        config: s
            .entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        outputs: outputs.iter().map(|o| o.to_string()).collect(),
    }
}

fn create_out(out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))
}

pub fn simulate(raw: &RawConfig, out: &Path) -> Result<Status> {
    let s = Settings::resolve(raw, Defaults::Simulate)?;
    let records = run_sweep(&s.experiment())?;
    write_records(&s, "simulate", out, "phase_transition.csv", &records)
}

pub fn snr(raw: &RawConfig, out: &Path) -> Result<Status> {
    let s = Settings::resolve(raw, Defaults::Snr)?;
    let records = run_snr_curve(&s.experiment())?;
    write_records(&s, "snr", out, "snr_curve.csv", &records)
}

fn write_records(
    s: &Settings,
    command: &str,
    out: &Path,
    file: &str,
    records: &[ExperimentRecord],
) -> Result<Status> {
    create_out(out)?;
    let rows: Vec<CsvRow> = records
        .iter()
        .map(|r| CsvRow::from_record(r, s.timing))
        .collect();
    io::write_csv(&out.join(file), &rows)?;
    io::write_json(&out.join("manifest.json"), &manifest(command, s, &[file]))?;

    let mut partial = false;
    for r in records {
        println!(
            "{} {} n={} m/n={} snr_db={} success_rate={:.3} mean_rel_dist={:.3e}",
            r.solver, r.algebra, r.n, r.m_over_n, r.snr_db, r.success_rate, r.mean_rel_dist
        );
        if let Some(note) = &r.note {
            warn!("m/n={} snr_db={}: {note}", r.m_over_n, r.snr_db);
            partial = true;
        }
    }
    info!("wrote {}", out.join(file).display());
    Ok(if partial { Status::Partial } else { Status::Ok })
}

pub fn recover(mut raw: RawConfig, out: &Path, args: &RecoverArgs) -> Result<Status> {
    if let Some(input) = &args.input {
        raw.set("recover.input", input)?;
    }
    if args.oracle {
        raw.set("recover.oracle", "true")?;
    }
    let s = Settings::resolve(&raw, Defaults::Recover)?;
    let Some(input) = s.recover.input.clone() else {
        bail!("no input image; pass --input or set recover.input");
    };
    let loaded = io::load_image(&input)?;
    let msi = loaded.image.channels() == io::MSI_BANDS;
    // Spectral images default to the octonion solver.
    let s = if msi && !raw.contains("experiment.solver") {
        raw.set("experiment.solver", "owf")?;
        Settings::resolve(&raw, Defaults::Recover)?
    } else {
        s
    };
    let peak = s.recover.peak.or(loaded.peak).unwrap_or_else(|| {
        let max = loaded.image.data().iter().copied().fold(0.0, f64::max);
        if max > 0.0 {
            max
        } else {
            1.0
        }
    });
    let mut task = ImageTask::new(
        loaded.image,
        if s.recover.oracle {
            ImageSolver::Oracle
        } else {
            ImageSolver::from_kind(s.solver)
        },
    );
    task.patch = s.recover.patch.unwrap_or(if msi { 4 } else { 32 });
    task.model = s.recover.model;
    task.m_over_n = s.recover.m_over_n.unwrap_or(if msi { 12.0 } else { 15.0 });
    task.params = s.params.clone();
    task.config = s.config.clone();
    task.peak = peak;
    task.seed = s.seed;
    let result = recover_image(&task)?;

    create_out(out)?;
    let mut outputs = vec!["metrics.json"];
    if msi {
        io::write_band_dir(&out.join("recovered"), &result.image, peak)?;
        io::write_raw_msi(&out.join("recovered.hprmsi"), &result.image)?;
        outputs.extend(["recovered", "recovered.hprmsi"]);
    } else {
        io::write_rgb_png(&out.join("recovered.png"), &result.image, peak)?;
        outputs.push("recovered.png");
    }
    let metrics = Metrics {
        psnr_db: (!result.exact()).then_some(result.psnr_db),
        exact: result.exact(),
        per_patch_rel_dist: result.per_patch_rel_dist.clone(),
        seconds: s.timing.then_some(result.seconds),
        seed: s.seed,
    };
    io::write_json(&out.join("metrics.json"), &metrics)?;
    io::write_json(
        &out.join("manifest.json"),
        &manifest("recover", &s, &outputs),
    )?;
    if result.exact() {
        println!("exact reconstruction");
    } else {
        println!("psnr_db={:.2}", result.psnr_db);
    }
    Ok(Status::Ok)
}

pub fn selftest(raw: &RawConfig, args: &SelftestArgs) -> Result<Status> {
    let s = Settings::resolve(raw, Defaults::Other)?;
    let mut table = OCTONION_TABLE;
    if let Some(pair) = &args.flip_sign {
        let (i, j) = pair
            .split_once(',')
            .with_context(|| format!("expected I,J, got `{pair}`"))?;
        let (i, j): (usize, usize) = (i.trim().parse()?, j.trim().parse()?);
        ensure!(i < 8 && j < 8, "octonion unit indices are 0..8");
        table = table.with_flipped_sign(i, j);
    }
    let report = run_selftest(&SelftestConfig {
        seed: s.seed,
        samples: args.samples.unwrap_or(s.selftest_samples),
        table,
    });
    print!("{}", report.render());
    Ok(if report.passed() {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}

pub fn gradcheck(raw: &RawConfig, args: &GradcheckArgs) -> Result<Status> {
    let s = Settings::resolve(raw, Defaults::Other)?;
    ensure!(args.points > 0, "--points must be positive");
    let mut ok = true;
    for c in gradient_check(s.seed, args.points) {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} {} max relative error {:.3e} over {} points (tolerance {GRADIENT_TOL:.0e})",
            c.solver, c.max_rel_err, c.points
        );
        ok &= c.passed();
    }
    Ok(if ok { Status::Ok } else { Status::CheckFailed })
}
