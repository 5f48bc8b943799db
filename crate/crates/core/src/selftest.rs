//! Seeded invariant suites behind the `selftest` command.
//!
//! Each group draws its samples from its own stream of the master seed and
//! records the first few violations with the sample index that produced
//! them, so a failure can be replayed exactly.

use std::fmt::Write as _;

use crate::algebra::{
    aleph, aleph_inv, gimel, norm, HyperMatrix, Hypercomplex, Octonion, OctonionTable, Quaternion,
    OCTONION_TABLE,
};
use crate::rng::{child_rng, normal, HprRng};
use crate::sensing::{measure, DenseModel};
use crate::solvers::{finite_difference, owf_cost, owf_gradient, qwf_cost, qwf_real_gradient};
use crate::transforms::{Odft3D, Qdft2D};

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Random samples per algebraic property.
    pub samples: usize,
    /// Octonion product used by the algebra groups; replace it to check that
    /// the suites catch a corrupted table.
    pub table: OctonionTable,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            samples: 10_000,
            table: OCTONION_TABLE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupReport {
    pub name: &'static str,
    pub checks: usize,
    /// `"property: sample k, residual r"` for the first violations.
    pub failures: Vec<String>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub seed: u64,
    pub groups: Vec<GroupReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.groups.iter().all(GroupReport::passed)
    }

    /// One `PASS`/`FAIL` line per group, failures indented below.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            let status = if g.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{status} {} ({} checks, seed {})",
                g.name, g.checks, self.seed
            );
            for f in &g.failures {
                let _ = writeln!(out, "    {f}");
            }
        }
        out
    }
}

const MAX_REPORTED: usize = 5;

struct Group {
    report: GroupReport,
}

impl Group {
    fn new(name: &'static str) -> Self {
        Group {
            report: GroupReport {
                name,
                checks: 0,
                failures: Vec::new(),
            },
        }
    }

    fn check(&mut self, property: &str, sample: usize, residual: f64, tol: f64) {
        self.report.checks += 1;
        if !(residual <= tol) && self.report.failures.len() < MAX_REPORTED {
            self.report.failures.push(format!(
                "{property}: sample {sample}, residual {residual:.3e} > {tol:.0e}"
            ));
        }
    }
}

fn random<T: Hypercomplex>(rng: &mut HprRng) -> T {
    let c: Vec<f64> = (0..T::DIM).map(|_| normal(rng)).collect();
    T::from_coeffs(&c)
}

fn random_vec<T: Hypercomplex>(rng: &mut HprRng, n: usize) -> Vec<T> {
    (0..n).map(|_| random(rng)).collect()
}

fn rel(a: f64, scale: f64) -> f64 {
    a / scale.max(f64::MIN_POSITIVE)
}

/// Runs every group.
pub fn run_selftest(config: &SelftestConfig) -> SelftestReport {
    SelftestReport {
        seed: config.seed,
        groups: vec![
            norm_multiplicativity(config),
            quaternion_associativity(config),
            octonion_alternativity(config),
            representation(config),
            transforms(config),
            gradients(config),
        ],
    }
}

fn norm_multiplicativity(config: &SelftestConfig) -> GroupReport {
    let mut g = Group::new("norm-multiplicativity");
    let mut rng = child_rng(config.seed, &[1]);
    for k in 0..config.samples {
        let (p, q): (Quaternion, Quaternion) = (random(&mut rng), random(&mut rng));
        let expected = p.modulus() * q.modulus();
        g.check(
            "quaternion |pq| = |p||q|",
            k,
            rel(((p * q).modulus() - expected).abs(), expected),
            1e-12,
        );
        let (x, y): (Octonion, Octonion) = (random(&mut rng), random(&mut rng));
        let expected = x.modulus() * y.modulus();
        let got = config.table.mul(&x, &y).modulus();
        g.check(
            "octonion |xy| = |x||y|",
            k,
            rel((got - expected).abs(), expected),
            1e-12,
        );
    }
    g.report
}

fn quaternion_associativity(config: &SelftestConfig) -> GroupReport {
    let mut g = Group::new("quaternion-associativity");
    let mut rng = child_rng(config.seed, &[2]);
    for k in 0..config.samples {
        let (p, q, r): (Quaternion, Quaternion, Quaternion) =
            (random(&mut rng), random(&mut rng), random(&mut rng));
        let scale = p.modulus() * q.modulus() * r.modulus();
        g.check(
            "(pq)r = p(qr)",
            k,
            rel(((p * q) * r - p * (q * r)).modulus(), scale),
            1e-12,
        );
    }
    g.report
}

fn octonion_alternativity(config: &SelftestConfig) -> GroupReport {
    let mut g = Group::new("octonion-alternativity");
    let t = &config.table;
    let mut rng = child_rng(config.seed, &[3]);
    for k in 0..config.samples {
        let (x, y): (Octonion, Octonion) = (random(&mut rng), random(&mut rng));
        let scale = x.modulus() * x.modulus() * y.modulus();
        let left = t.mul(&t.mul(&x, &x), &y) - t.mul(&x, &t.mul(&x, &y));
        let right = t.mul(&t.mul(&y, &x), &x) - t.mul(&y, &t.mul(&x, &x));
        g.check("(xx)y = x(xy)", k, rel(left.modulus(), scale), 1e-12);
        g.check("(yx)x = y(xx)", k, rel(right.modulus(), scale), 1e-12);
    }
    // The algebra must not collapse to an associative one.
    let mut witness = 0.0f64;
    for _ in 0..100 {
        let [x, y, z]: [Octonion; 3] =
            std::array::from_fn(|_| random::<Octonion>(&mut rng).sign().unwrap_or(Octonion::ONE));
        witness = witness.max((t.mul(&t.mul(&x, &y), &z) - t.mul(&x, &t.mul(&y, &z))).modulus());
    }
    g.check(
        "non-associativity witness among 100 unit triples",
        0,
        0.1 / witness.max(f64::MIN_POSITIVE),
        1.0,
    );
    g.report
}

fn representation(config: &SelftestConfig) -> GroupReport {
    let mut g = Group::new("representation-homomorphism");
    let mut rng = child_rng(config.seed, &[4]);
    let samples = (config.samples / 10).max(1);
    fn one<T: Hypercomplex>(g: &mut Group, rng: &mut HprRng, k: usize, what: &str) {
        let a = HyperMatrix::from_fn(4, 3, |_, _| random::<T>(rng));
        let x: Vec<T> = random_vec(rng, 3);
        let ax = a.mul_vec(&x).expect("shapes agree");
        let lifted = gimel(&a) * nalgebra::DVector::from_vec(aleph(&x));
        let direct = aleph(&ax);
        let diff = direct
            .iter()
            .zip(lifted.iter())
            .map(|(p, q)| (p - q).powi(2))
            .sum::<f64>()
            .sqrt();
        g.check(
            &format!("{what} aleph(Ax) = gimel(A) aleph(x)"),
            k,
            rel(diff, norm(&ax).max(1.0)),
            1e-12,
        );
        let v = aleph(&x);
        let nv = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        g.check(
            &format!("{what} |x| = |aleph(x)|"),
            k,
            rel((norm(&x) - nv).abs(), nv),
            1e-12,
        );
        let back: Vec<T> = aleph_inv(&v).expect("length is a multiple of DIM");
        g.check(
            &format!("{what} aleph_inv(aleph(x)) = x"),
            k,
            if back == x { 0.0 } else { 1.0 },
            0.0,
        );
    }
    for k in 0..samples {
        one::<Quaternion>(&mut g, &mut rng, k, "quaternion");
        one::<Octonion>(&mut g, &mut rng, k, "octonion");
    }
    g.report
}

fn transforms(config: &SelftestConfig) -> GroupReport {
    let mut g = Group::new("transforms");
    let mut rng = child_rng(config.seed, &[5]);
    for (k, n) in [2usize, 4, 8, 16].into_iter().enumerate() {
        let plan = Qdft2D::new(n).expect("positive size");
        let f: Vec<Quaternion> = random_vec(&mut rng, n * n);
        let big = plan.forward(&f).expect("sizes agree");
        let back = plan.inverse(&big).expect("sizes agree");
        let err = f
            .iter()
            .zip(&back)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        g.check(
            &format!("QDFT round trip N={n}"),
            k,
            rel(err, norm(&f)),
            1e-10,
        );
        g.check(
            &format!("QDFT Parseval N={n}"),
            k,
            rel((norm(&big) - norm(&f)).abs(), norm(&f)),
            1e-10,
        );
    }
    for (k, n) in [2usize, 4].into_iter().enumerate() {
        let plan = Odft3D::new(n).expect("positive size");
        let f: Vec<Octonion> = random_vec(&mut rng, n * n * n);
        let back = plan
            .inverse(&plan.forward(&f).expect("sizes agree"))
            .expect("sizes agree");
        let err = f
            .iter()
            .zip(&back)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        g.check(
            &format!("ODFT round trip N={n}"),
            k,
            rel(err, norm(&f)),
            1e-10,
        );
    }
    g.report
}

fn gradients(config: &SelftestConfig) -> GroupReport {
    let mut g = Group::new("gradients");
    let (qwf, owf) = gradient_errors(config.seed, 20);
    for (k, (eq, eo)) in qwf.into_iter().zip(owf).enumerate() {
        g.check("QWF closed form vs finite differences", k, eq, GRADIENT_TOL);
        g.check(
            "OWF real gradient vs finite differences",
            k,
            eo,
            GRADIENT_TOL,
        );
    }
    g.report
}

/// Relative tolerance for closed-form against central-difference gradients.
pub const GRADIENT_TOL: f64 = 1e-6;

/// Worst closed-form gradient error for one cost.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientCheck {
    pub solver: &'static str,
    pub points: usize,
    pub max_rel_err: f64,
}

impl GradientCheck {
    pub fn passed(&self) -> bool {
        self.max_rel_err <= GRADIENT_TOL
    }
}

/// Compares the QWF and OWF gradients with central differences at `points`
/// random points each.
pub fn gradient_check(seed: u64, points: usize) -> Vec<GradientCheck> {
    let (qwf, owf) = gradient_errors(seed, points);
    let worst = |v: &[f64]| {
        v.iter()
            .copied()
            .fold(0.0, |a: f64, b| if b.is_nan() { b } else { a.max(b) })
    };
    vec![
        GradientCheck {
            solver: "qwf",
            points,
            max_rel_err: worst(&qwf),
        },
        GradientCheck {
            solver: "owf",
            points,
            max_rel_err: worst(&owf),
        },
    ]
}

fn gradient_errors(seed: u64, points: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = child_rng(seed, &[6]);
    let rel_err = |a: &[f64], b: &[f64]| {
        let num = a
            .iter()
            .zip(b)
            .map(|(p, q)| (p - q).powi(2))
            .sum::<f64>()
            .sqrt();
        rel(num, b.iter().map(|q| q * q).sum::<f64>().sqrt())
    };
    let q = DenseModel::<Quaternion>::gaussian(40, 4, rng_seed(&mut rng)).expect("positive dims");
    let yq = measure(&q, &random_vec::<Quaternion>(&mut rng, 4)).expect("lengths agree");
    let o = DenseModel::<Octonion>::gaussian(40, 3, rng_seed(&mut rng)).expect("positive dims");
    let yo = measure(&o, &random_vec::<Octonion>(&mut rng, 3)).expect("lengths agree");
    let (mut eq, mut eo) = (Vec::with_capacity(points), Vec::with_capacity(points));
    for _ in 0..points {
        let x: Vec<Quaternion> = random_vec(&mut rng, 4);
        let closed = qwf_real_gradient(&q, &yq, &x).expect("lengths agree");
        let fd = finite_difference(
            |z| {
                qwf_cost(
                    &q,
                    &yq,
                    &aleph_inv::<Quaternion>(z).expect("whole quaternions"),
                )
                .expect("lengths agree")
            },
            &aleph(&x),
            1e-6,
        );
        eq.push(rel_err(&closed, &fd));

        let z = aleph(&random_vec::<Octonion>(&mut rng, 3));
        let closed = owf_gradient(&o, &yo, &z).expect("lengths agree");
        let fd = finite_difference(|p| owf_cost(&o, &yo, p).expect("lengths agree"), &z, 1e-6);
        eo.push(rel_err(&closed, &fd));
    }
    (eq, eo)
}

fn rng_seed(rng: &mut HprRng) -> u64 {
    rand::Rng::random(rng)
}
