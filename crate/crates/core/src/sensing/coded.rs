use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{SensingModel, SensingRow};
use crate::algebra::{Hypercomplex, Quaternion};
use crate::error::{check_len, HprError, Result};
use crate::rng::rng_from_seed;
use crate::transforms::Qdft2D;

/// Unit-modulus coding values a DOE pixel can take.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoeAlphabet {
    symbols: Vec<Quaternion>,
}

impl DoeAlphabet {
    pub fn new(symbols: Vec<Quaternion>) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(HprError::InvalidParameter(
                "alphabet needs at least two symbols".into(),
            ));
        }
        if symbols.iter().any(|s| (s.modulus() - 1.0).abs() > 1e-12) {
            return Err(HprError::InvalidParameter(
                "alphabet symbols must have unit modulus".into(),
            ));
        }
        Ok(DoeAlphabet { symbols })
    }

    /// `d = 4` gives `{1, -1, i, -i}`, `d = 8` gives `{+-1, +-i, +-j, +-k}`.
    /// Other sizes take the first `d` entries of a fixed list: the eight
    /// signed units, then the sixteen `(+-1, +-1, +-1, +-1)/2`, then the
    /// twenty-four `(+-1, +-1)/sqrt 2` on each pair of axes.
    pub fn standard(d: usize) -> Result<Self> {
        let pool = Self::pool();
        if d < 2 || d > pool.len() {
            return Err(HprError::InvalidParameter(format!(
                "alphabet size must be in 2..={}, got {d}",
                pool.len()
            )));
        }
        Self::new(pool[..d].to_vec())
    }

    fn pool() -> Vec<Quaternion> {
        let mut pool = Vec::new();
        for axis in 0..4 {
            for sign in [1.0, -1.0] {
                let mut c = [0.0; 4];
                c[axis] = sign;
                pool.push(Quaternion::from_coeffs(&c));
            }
        }
        for mask in 0..16 {
            let c: Vec<f64> = (0..4)
                .map(|b| if mask >> b & 1 == 0 { 0.5 } else { -0.5 })
                .collect();
            pool.push(Quaternion::from_coeffs(&c));
        }
        for p in 0..4 {
            for q in p + 1..4 {
                for (sp, sq) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let mut c = [0.0; 4];
                    c[p] = sp * FRAC_1_SQRT_2;
                    c[q] = sq * FRAC_1_SQRT_2;
                    pool.push(Quaternion::from_coeffs(&c));
                }
            }
        }
        pool
    }

    pub fn symbols(&self) -> &[Quaternion] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Coded-diffraction Fourier model: `L` snapshots, each a pixelwise DOE
/// mask `D^k` (left multiplication) followed by the two-sided QDFT.
///
/// Measurements are stacked snapshot-major: row `l` is snapshot `l / n`,
/// frequency `l % n` with `n = N^2`, frequency `r N + s`.
#[derive(Debug, Clone)]
pub struct CodedFourier {
    side: usize,
    masks: Vec<Vec<Quaternion>>,
    plan: Qdft2D,
}

impl CodedFourier {
    pub fn new(side: usize, snapshots: usize, alphabet: &DoeAlphabet, seed: u64) -> Result<Self> {
        if side < 2 || snapshots == 0 {
            return Err(HprError::InvalidParameter(format!(
                "coded Fourier needs N >= 2 and L >= 1, got N={side}, L={snapshots}"
            )));
        }
        let mut rng = rng_from_seed(seed);
        let n = side * side;
        let masks = (0..snapshots)
            .map(|_| {
                (0..n)
                    .map(|_| alphabet.symbols[rng.random_range(0..alphabet.len())])
                    .collect()
            })
            .collect();
        Self::with_masks(side, masks)
    }

    pub fn with_masks(side: usize, masks: Vec<Vec<Quaternion>>) -> Result<Self> {
        if masks.is_empty() {
            return Err(HprError::InvalidParameter("no DOE masks".into()));
        }
        for mask in &masks {
            check_len(side * side, mask.len())?;
        }
        Ok(CodedFourier {
            side,
            masks,
            plan: Qdft2D::new(side)?,
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn snapshots(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[Vec<Quaternion>] {
        &self.masks
    }

    /// `(snapshot, frequency)` of row `l`.
    pub fn decode(&self, l: usize) -> (usize, usize) {
        let n = self.side * self.side;
        (l / n, l % n)
    }
}

impl SensingModel for CodedFourier {
    type Scalar = Quaternion;

    fn m(&self) -> usize {
        self.masks.len() * self.n()
    }

    fn n(&self) -> usize {
        self.side * self.side
    }

    fn forward(&self, x: &[Quaternion]) -> Result<Vec<Quaternion>> {
        check_len(self.n(), x.len())?;
        let mut out = Vec::with_capacity(self.m());
        for mask in &self.masks {
            let coded: Vec<Quaternion> = mask.iter().zip(x).map(|(&d, &v)| d * v).collect();
            out.extend(self.plan.forward(&coded)?);
        }
        Ok(out)
    }

    /// The unitary QDFT's real adjoint is its inverse; the mask adjoint is `conj(d)`.
    fn adjoint(&self, u: &[Quaternion]) -> Result<Vec<Quaternion>> {
        check_len(self.m(), u.len())?;
        let n = self.n();
        let mut out = vec![Quaternion::ZERO; n];
        for (k, mask) in self.masks.iter().enumerate() {
            let back = self.plan.inverse(&u[k * n..(k + 1) * n])?;
            for ((o, &d), &v) in out.iter_mut().zip(mask).zip(&back) {
                *o += d.conj() * v;
            }
        }
        Ok(out)
    }

    fn row(&self, l: usize) -> Result<SensingRow<Quaternion>> {
        if l >= self.m() {
            return Err(HprError::Index {
                index: l,
                len: self.m(),
            });
        }
        let (k, freq) = self.decode(l);
        let f = self.plan.row(freq / self.side, freq % self.side)?;
        Ok(SensingRow {
            terms: (0..self.n())
                .map(|p| {
                    let (left, right) = f.factors(p);
                    (p, left * self.masks[k][p], right)
                })
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::sensing::measure;
    use crate::sensing::testutil::{check_consistency, dot, random_vec};

    #[test]
    fn standard_alphabets() {
        let four = DoeAlphabet::standard(4).unwrap();
        assert_eq!(
            four.symbols(),
            &[
                Quaternion::ONE,
                -Quaternion::ONE,
                Quaternion::I,
                -Quaternion::I
            ]
        );
        let eight = DoeAlphabet::standard(8).unwrap();
        for u in [Quaternion::J, -Quaternion::J, Quaternion::K, -Quaternion::K] {
            assert!(eight.symbols().contains(&u));
        }
        let big = DoeAlphabet::standard(20).unwrap();
        assert!(big
            .symbols()
            .iter()
            .all(|s| (s.modulus() - 1.0).abs() < 1e-15));
        assert!(DoeAlphabet::standard(1).is_err());
        assert!(DoeAlphabet::new(vec![Quaternion::ONE, Quaternion::ONE * 2.0]).is_err());
    }

    #[test]
    fn consistency() {
        let mut rng = rng_from_seed(1);
        let model = CodedFourier::new(4, 2, &DoeAlphabet::standard(8).unwrap(), 3).unwrap();
        assert_eq!(model.m(), 32);
        check_consistency(&model, &mut rng);
    }

    #[test]
    fn identity_coding_is_plain_qdft() {
        let side = 4;
        let model = CodedFourier::with_masks(side, vec![vec![Quaternion::ONE; 16]]).unwrap();
        let mut rng = rng_from_seed(2);
        let x: Vec<Quaternion> = random_vec(&mut rng, 16);
        let spec = Qdft2D::new(side).unwrap().forward(&x).unwrap();
        let y = measure(&model, &x).unwrap();
        for (a, b) in y.iter().zip(&spec) {
            assert!((a - b.norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn row_adjoint_matches_model_adjoint() {
        let model = CodedFourier::new(3, 2, &DoeAlphabet::standard(4).unwrap(), 5).unwrap();
        let mut rng = rng_from_seed(6);
        let x: Vec<Quaternion> = random_vec(&mut rng, 9);
        let u = Quaternion::new(0.3, -1.0, 2.0, 0.5);
        for l in [0, 4, 13] {
            let row = model.row(l).unwrap();
            let lhs = dot(&[row.apply(&x)], &[u]);
            let rhs = dot(&x, &row.adjoint(u, 9));
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn snapshot_major_decoding() {
        let model = CodedFourier::new(4, 3, &DoeAlphabet::standard(4).unwrap(), 1).unwrap();
        assert_eq!(model.decode(0), (0, 0));
        assert_eq!(model.decode(17), (1, 1));
        assert_eq!(model.decode(47), (2, 15));
    }
}
