//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hpr_core::algebra::{aleph, gimel, norm, HyperMatrix, Hypercomplex, Octonion, Quaternion};
use hpr_core::harness::{
    default_solver_config, recover_image, run_snr_curve, run_sweep, run_trial,
    synthetic_gradient_rgb, ExperimentSpec, ImageSolver, ImageTask,
};
use hpr_core::rng::{normal, rng_from_seed, HprRng};
use hpr_core::selftest::gradient_check;
use hpr_core::sensing::ModelKind;
use hpr_core::solvers::SolverKind;
use hpr_core::transforms::{Odft3D, Qdft2D, QwtBank};
use rayon::prelude::*;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn random<T: Hypercomplex>(rng: &mut HprRng) -> T {
    let c: Vec<f64> = (0..T::DIM).map(|_| normal(rng)).collect();
    T::from_coeffs(&c)
}

fn random_vec<T: Hypercomplex>(rng: &mut HprRng, n: usize) -> Vec<T> {
    (0..n).map(|_| random(rng)).collect()
}

fn dist<T: Hypercomplex>(a: &T, b: &T) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn vec_dist<T: Hypercomplex>(a: &[T], b: &[T]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| dist(p, q).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn algebra_laws() -> Verdict {
    let start = Instant::now();
    let mut rng = rng_from_seed(101);
    let samples = 10_000;
    let (mut norm_q, mut norm_o, mut assoc_q, mut alt_o) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let (p, q, r): (Quaternion, Quaternion, Quaternion) =
            (random(&mut rng), random(&mut rng), random(&mut rng));
        let scale = p.modulus() * q.modulus();
        norm_q = norm_q.max(((p * q).modulus() - scale).abs() / scale);
        assoc_q = assoc_q.max(dist(&((p * q) * r), &(p * (q * r))) / (scale * r.modulus()));

        let (x, y): (Octonion, Octonion) = (random(&mut rng), random(&mut rng));
        let scale = x.modulus() * y.modulus();
        norm_o = norm_o.max(((x * y).modulus() - scale).abs() / scale);
        let s3 = scale * x.modulus();
        alt_o = alt_o
            .max(dist(&((x * x) * y), &(x * (x * y))) / s3)
            .max(dist(&((y * x) * x), &(y * (x * x))) / s3);
    }
    let mut witness = 0.0f64;
    for _ in 0..100 {
        let [a, b, c] = [0; 3].map(|_| random::<Octonion>(&mut rng).sign().unwrap());
        witness = witness.max(dist(&((a * b) * c), &(a * (b * c))));
    }
    let t = start.elapsed();
    let worst = norm_q.max(norm_o).max(assoc_q).max(alt_o);
    verdict(
        worst <= 1e-12 && witness > 0.1 && within(t, 5),
        format!(
            "norm H {norm_q:.1e}, norm O {norm_o:.1e}, assoc H {assoc_q:.1e}, alt O {alt_o:.1e}, \
             non-assoc witness {witness:.2}, {:.2}s",
            t.as_secs_f64()
        ),
    )
}

fn homomorphism_check<T: Hypercomplex>(rng: &mut HprRng, samples: usize) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let a = HyperMatrix::from_fn(4, 3, |_, _| random::<T>(rng));
        let x: Vec<T> = random_vec(rng, 3);
        let lhs = aleph(&a.mul_vec(&x).unwrap());
        let g = gimel(&a);
        let ax = aleph(&x);
        let rhs: Vec<f64> = (0..g.nrows())
            .map(|r| (0..g.ncols()).map(|c| g[(r, c)] * ax[c]).sum())
            .collect();
        let scale = norm(&x)
            * a.as_slice()
                .iter()
                .map(|v| v.norm_sqr())
                .sum::<f64>()
                .sqrt();
        let res = lhs
            .iter()
            .zip(&rhs)
            .map(|(p, q)| (p - q).powi(2))
            .sum::<f64>()
            .sqrt();
        let nx = ax.iter().map(|v| v * v).sum::<f64>().sqrt();
        worst = worst.max(res / scale).max((norm(&x) - nx).abs() / nx);
    }
    worst
}

fn homomorphism() -> Verdict {
    let start = Instant::now();
    let mut rng = rng_from_seed(202);
    let o = homomorphism_check::<Octonion>(&mut rng, 1000);
    let q = homomorphism_check::<Quaternion>(&mut rng, 1000);
    let t = start.elapsed();
    verdict(
        o.max(q) <= 1e-12 && within(t, 5),
        format!(
            "octonion {o:.1e}, quaternion {q:.1e}, {:.2}s",
            t.as_secs_f64()
        ),
    )
}

fn odft_kernel(unit: usize, k: usize, t: usize, n: usize) -> Octonion {
    let th = 2.0 * PI * (k * t) as f64 / n as f64;
    let mut c = [0.0; 8];
    c[0] = th.cos();
    c[unit] = -th.sin();
    Octonion::new(c)
}

fn transforms() -> Verdict {
    let start = Instant::now();
    let mut rng = rng_from_seed(303);
    let (mut round, mut parseval) = (0.0f64, 0.0f64);
    for n in [2, 4, 8, 16] {
        let t = Qdft2D::new(n).unwrap();
        let f: Vec<Quaternion> = random_vec(&mut rng, n * n);
        let big = t.forward(&f).unwrap();
        round = round.max(vec_dist(&t.inverse(&big).unwrap(), &f) / norm(&f));
        parseval = parseval.max((norm(&big) - norm(&f)).abs() / norm(&f));
    }

    let n = 8;
    let t = Qdft2D::new(n).unwrap();
    let f: Vec<Quaternion> = random_vec(&mut rng, n * n);
    let full = t.forward(&f).unwrap();
    let mut rows = 0.0f64;
    for r in 0..n {
        for s in 0..n {
            let v = t.row(r, s).unwrap().apply(&f).unwrap();
            rows = rows.max(dist(&v, &full[r * n + s]) / norm(&f));
        }
    }

    let n = 4;
    let f: Vec<Octonion> = random_vec(&mut rng, n * n * n);
    let fast = Odft3D::new(n).unwrap().forward(&f).unwrap();
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut odft = 0.0f64;
    for k1 in 0..n {
        for k2 in 0..n {
            for k3 in 0..n {
                let mut acc = Octonion::ZERO;
                for n1 in 0..n {
                    for n2 in 0..n {
                        for n3 in 0..n {
                            acc += ((f[idx(n1, n2, n3)] * odft_kernel(1, k1, n1, n))
                                * odft_kernel(2, k2, n2, n))
                                * odft_kernel(4, k3, n3, n);
                        }
                    }
                }
                let brute = acc * (1.0 / n as f64);
                odft = odft.max(dist(&brute, &fast[idx(k1, k2, k3)]) / norm(&f));
            }
        }
    }

    let bank = QwtBank::default_haar(n).unwrap();
    let f: Vec<Quaternion> = random_vec(&mut rng, n * n);
    let out = bank.apply(&f).unwrap();
    let mut qwt = 0.0f64;
    for (k, fast) in out.iter().enumerate() {
        let psi = bank.dense_member(k);
        let mut brute = vec![Quaternion::ZERO; n * n];
        for r in 0..n {
            for s in 0..n {
                for p in 0..n {
                    for q in 0..n {
                        brute[r * n + s] +=
                            f[p * n + q] * psi[((r + n - p) % n) * n + (s + n - q) % n];
                    }
                }
            }
        }
        qwt = qwt.max(vec_dist(&brute, fast) / (norm(&f) * norm(&psi)));
    }
    let t = start.elapsed();
    verdict(
        round <= 1e-10 && parseval <= 1e-10 && rows <= 1e-12 && odft <= 1e-12 && qwt <= 1e-12 && within(t, 30),
        format!(
            "QDFT round trip {round:.1e}, Parseval {parseval:.1e}, row {rows:.1e}, ODFT {odft:.1e}, \
             QWT {qwt:.1e}, {:.2}s",
            t.as_secs_f64()
        ),
    )
}

fn gradients() -> Verdict {
    let start = Instant::now();
    let checks = gradient_check(404, 20);
    let t = start.elapsed();
    let detail = checks
        .iter()
        .map(|c| format!("{} {:.1e}", c.solver, c.max_rel_err))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(
        checks
            .iter()
            .all(|c| c.points == 20 && c.max_rel_err < 1e-6)
            && within(t, 10),
        format!("{detail}, {:.2}s", t.as_secs_f64()),
    )
}

fn qwf_recovery() -> Verdict {
    let start = Instant::now();
    let spec = ExperimentSpec {
        m_over_n: (2..=12).map(f64::from).collect(),
        ..ExperimentSpec::new(SolverKind::Qwf, ModelKind::GaussianQuaternion, 16)
    };
    let records = run_sweep(&spec).unwrap();
    let t = start.elapsed();
    let rates: Vec<f64> = records.iter().map(|r| r.success_rate).collect();
    let at10 = rates[8];
    let trials = spec.trials as f64;
    let monotone = rates.windows(2).all(|w| {
        let p = (w[0] + w[1]) / 2.0;
        w[1] >= w[0] - (p * (1.0 - p) / trials).sqrt()
    });
    verdict(
        at10 >= 0.95 && monotone && within(t, 120),
        format!(
            "success at m/n=10 {at10:.2}, grid 2..12 {rates:?}, monotone {monotone}, {:.1}s",
            t.as_secs_f64()
        ),
    )
}

fn owf_recovery() -> Verdict {
    let start = Instant::now();
    let spec = ExperimentSpec {
        m_over_n: vec![12.0],
        snr_db: vec![f64::INFINITY, 0.0, 10.0, 20.0, 30.0],
        ..ExperimentSpec::new(SolverKind::Owf, ModelKind::GaussianOctonion, 8)
    };
    let records = run_snr_curve(&spec).unwrap();
    let t = start.elapsed();
    let rate = records[0].success_rate;
    let dists: Vec<f64> = records[1..].iter().map(|r| r.mean_rel_dist).collect();
    let improving = dists.windows(2).all(|w| w[1] < w[0]);
    verdict(
        rate >= 0.90 && improving && within(t, 180),
        format!(
            "noiseless success {rate:.2}, mean rel. distance at 0/10/20/30 dB {:?}, {:.1}s",
            dists.iter().map(|d| format!("{d:.3}")).collect::<Vec<_>>(),
            t.as_secs_f64()
        ),
    )
}

fn qwf_vs_concat() -> Verdict {
    let qwf = run_sweep(&ExperimentSpec::new(
        SolverKind::Qwf,
        ModelKind::GaussianQuaternion,
        16,
    ))
    .unwrap();
    let concat = run_sweep(&ExperimentSpec::new(
        SolverKind::ConcatWf,
        ModelKind::GaussianQuaternion,
        16,
    ))
    .unwrap();
    let (a, b) = (qwf[0].mean_rel_dist, concat[0].mean_rel_dist);
    verdict(
        qwf[0].m == concat[0].m && a <= b,
        format!("m={} QWF {a:.3e}, concat-WF {b:.3e}", qwf[0].m),
    )
}

/// Exact reconstructions score this instead of infinity so means stay finite.
const PSNR_CAP: f64 = 300.0;

fn coding_richness() -> Verdict {
    let mean_psnr = |d: usize| {
        let total: f64 = (0..20u64)
            .into_par_iter()
            .map(|seed| {
                let mut task = ImageTask {
                    patch: 16,
                    m_over_n: 10.0,
                    seed,
                    ..ImageTask::new(synthetic_gradient_rgb(16, 16).unwrap(), ImageSolver::Qwf)
                };
                task.params.doe_symbols = d;
                recover_image(&task).unwrap().psnr_db.min(PSNR_CAP)
            })
            .sum();
        total / 20.0
    };
    let (p4, p8) = (mean_psnr(4), mean_psnr(8));
    verdict(
        p8 >= p4,
        format!("mean PSNR d=4 {p4:.1} dB, d=8 {p8:.1} dB"),
    )
}

fn outlier_robustness() -> Verdict {
    let qwf = ExperimentSpec {
        outliers: 1,
        ..ExperimentSpec::new(SolverKind::Qwf, ModelKind::GaussianQuaternion, 16)
    };
    let qtwf = ExperimentSpec {
        solver: SolverKind::Qtwf,
        config: default_solver_config(SolverKind::Qtwf),
        ..qwf.clone()
    };
    let wins = (0..100)
        .into_par_iter()
        .filter(|&t| {
            let a = run_trial(&qwf, 10.0, f64::INFINITY, t).unwrap();
            let b = run_trial(&qtwf, 10.0, f64::INFINITY, t).unwrap();
            b.rel_dist < a.rel_dist
        })
        .count();
    verdict(wins >= 80, format!("QTWF closer in {wins}/100 trials"))
}

fn snapshot(dir: &Path, prefix: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            snapshot(&p, prefix, out);
        } else {
            let key = p.strip_prefix(prefix).unwrap().display().to_string();
            out.insert(key, fs::read(&p).unwrap());
        }
    }
}

fn run_with_threads(args: &[&str], threads: &str) -> BTreeMap<String, Vec<u8>> {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_hpr"))
        .args(args)
        .args(["--seed", "2024", "--threads", threads, "--out"])
        .arg(dir.path())
        .env_remove("HPR_SEED")
        .output()
        .unwrap()
        .status;
    assert!(
        status.success(),
        "{args:?} with {threads} threads: {status}"
    );
    let mut files = BTreeMap::new();
    snapshot(dir.path(), dir.path(), &mut files);
    files
}

fn reproducibility() -> Verdict {
    let runs: [&[&str]; 4] = [
        &[
            "simulate",
            "--set",
            "experiment.trials=20",
            "--set",
            "experiment.m_over_n=2,4,6",
        ],
        &["snr", "--set", "experiment.trials=10"],
        &[
            "recover",
            "--input",
            "synthetic-rgb:24x24",
            "--set",
            "recover.patch=8",
            "--set",
            "recover.m_over_n=6",
        ],
        &["recover", "--input", "synthetic-msi:8x8"],
    ];
    let mut files = 0;
    let mut mismatched = Vec::new();
    for args in runs {
        let one = run_with_threads(args, "1");
        let eight = run_with_threads(args, "8");
        files += one.len();
        if one != eight {
            mismatched.push(args[0]);
        }
    }
    verdict(
        mismatched.is_empty() && files > 0,
        format!("{files} files compared across --threads 1 and 8, mismatches {mismatched:?}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("algebra laws", algebra_laws),
        ("representation homomorphism", homomorphism),
        ("transform correctness", transforms),
        ("gradient checks", gradients),
        ("QWF recovery", qwf_recovery),
        ("OWF recovery", owf_recovery),
        ("QWF vs concatenated real WF", qwf_vs_concat),
        ("coding richness", coding_richness),
        ("QTWF robustness", outlier_robustness),
        ("reproducibility across thread counts", reproducibility),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!(
            "{} criterion {} ({name}): {}",
            if v.pass { "PASS" } else { "FAIL" },
            k + 1,
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
