use hpr_core::algebra::{aleph, aleph_inv, gimel, norm, HyperMatrix};
use hpr_core::sensing::{measure, CodedFourier, DenseModel, DoeAlphabet, SensingModel};
use hpr_core::solvers::{oct_distance, quat_distance};
use hpr_core::transforms::Qdft2D;
use hpr_core::{Hypercomplex, Octonion, Quaternion};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn quat() -> impl Strategy<Value = Quaternion> {
    [coeff(), coeff(), coeff(), coeff()].prop_map(|[a, b, c, d]| Quaternion::new(a, b, c, d))
}

fn oct() -> impl Strategy<Value = Octonion> {
    prop::array::uniform8(coeff()).prop_map(Octonion::new)
}

fn unit<T: Hypercomplex + std::fmt::Debug>(
    s: impl Strategy<Value = T>,
) -> impl Strategy<Value = T> {
    s.prop_filter_map("nonzero", |v| v.sign().ok())
}

fn close<T: Hypercomplex>(a: &T, b: &T, scale: f64) -> bool {
    let d: f64 = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt();
    d <= 1e-12 * scale.max(1.0)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

proptest! {
    #[test]
    fn quaternion_norm_is_multiplicative(p in quat(), q in quat()) {
        let s = p.modulus() * q.modulus();
        prop_assert!(((p * q).modulus() - s).abs() <= 1e-12 * s.max(1.0));
    }

    #[test]
    fn quaternion_product_is_associative(p in quat(), q in quat(), r in quat()) {
        let s = p.modulus() * q.modulus() * r.modulus();
        prop_assert!(close(&((p * q) * r), &(p * (q * r)), s));
    }

    #[test]
    fn octonion_norm_is_multiplicative(x in oct(), y in oct()) {
        let s = x.modulus() * y.modulus();
        prop_assert!(((x * y).modulus() - s).abs() <= 1e-12 * s.max(1.0));
    }

    #[test]
    fn octonions_are_alternative_and_flexible(x in oct(), y in oct()) {
        let s = x.modulus() * x.modulus() * y.modulus();
        prop_assert!(close(&((x * x) * y), &(x * (x * y)), s));
        prop_assert!(close(&((y * x) * x), &(y * (x * x)), s));
        prop_assert!(close(&((x * y) * x), &(x * (y * x)), s));
    }

    #[test]
    fn conjugation_reverses_products(x in oct(), y in oct()) {
        let s = x.modulus() * y.modulus();
        prop_assert!(close(&(x * y).conj(), &(y.conj() * x.conj()), s));
    }

    #[test]
    fn aleph_round_trips(x in prop::collection::vec(oct(), 1..6)) {
        let back: Vec<Octonion> = aleph_inv(&aleph(&x)).unwrap();
        prop_assert_eq!(back, x.clone());
        let flat = aleph(&x);
        prop_assert!((dot(&flat, &flat).sqrt() - norm(&x)).abs() <= 1e-12 * norm(&x).max(1.0));
    }

    #[test]
    fn gimel_represents_octonion_matrices(
        a in prop::collection::vec(oct(), 6),
        x in prop::collection::vec(oct(), 2),
    ) {
        let a = HyperMatrix::from_vec(3, 2, a).unwrap();
        let lhs = aleph(&a.mul_vec(&x).unwrap());
        let g = gimel(&a);
        let ax = aleph(&x);
        let scale = norm(a.as_slice()) * norm(&x);
        for (r, l) in lhs.iter().enumerate() {
            let v: f64 = (0..g.ncols()).map(|c| g[(r, c)] * ax[c]).sum();
            prop_assert!((v - l).abs() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn distances_ignore_the_global_factor(
        x in prop::collection::vec(quat(), 1..6),
        w in unit(quat()),
        xo in prop::collection::vec(oct(), 1..4),
        wo in unit(oct()),
    ) {
        let rotated: Vec<Quaternion> = x.iter().map(|&v| v * w).collect();
        prop_assert!(quat_distance(&rotated, &x) <= 1e-9 * norm(&x).max(1.0));
        let rotated: Vec<Octonion> = xo.iter().map(|&v| v * wo).collect();
        prop_assert!(oct_distance(&rotated, &xo) <= 1e-9 * norm(&xo).max(1.0));
    }

    #[test]
    fn quaternion_intensities_ignore_the_global_factor(
        x in prop::collection::vec(quat(), 4),
        w in unit(quat()),
        seed in any::<u64>(),
    ) {
        let model = DenseModel::<Quaternion>::gaussian(12, 4, seed).unwrap();
        let rotated: Vec<Quaternion> = x.iter().map(|&v| v * w).collect();
        let (a, b) = (measure(&model, &x).unwrap(), measure(&model, &rotated).unwrap());
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p - q).abs() <= 1e-10 * p.max(1.0));
        }
    }

    #[test]
    fn adjoint_is_the_real_transpose(
        x in prop::collection::vec(quat(), 9),
        u in prop::collection::vec(quat(), 27),
        seed in any::<u64>(),
    ) {
        let model = CodedFourier::new(3, 3, &DoeAlphabet::standard(8).unwrap(), seed).unwrap();
        let lhs = dot(&aleph(&model.forward(&x).unwrap()), &aleph(&u));
        let rhs = dot(&aleph(&x), &aleph(&model.adjoint(&u).unwrap()));
        prop_assert!((lhs - rhs).abs() <= 1e-10 * norm(&x).max(1.0) * norm(&u).max(1.0));
    }

    #[test]
    fn qdft_is_unitary(n in 1usize..10, seed in any::<u64>()) {
        let f: Vec<Quaternion> = hpr_core::harness::gaussian_signal(n * n, seed);
        let t = Qdft2D::new(n).unwrap();
        let big = t.forward(&f).unwrap();
        prop_assert!((norm(&big) - norm(&f)).abs() <= 1e-10 * norm(&f));
        let back = t.inverse(&big).unwrap();
        for (p, q) in back.iter().zip(&f) {
            prop_assert!(close(p, q, norm(&f)));
        }
    }
}
