use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use super::Hypercomplex;

/// Pseudo-real matrix representation `gimel(x)` as a signed index pattern:
/// entry `(r, c)` equals `sign * x[|p| - 1]` where `p = GIMEL_PATTERN[r][c]`.
///
/// `aleph(x * y) = gimel(x) * aleph(y)`, so column `c` of `gimel(e_i)` is
/// `aleph(e_i * e_c)`. The multiplication table below is extracted from
/// these columns rather than written out by hand.
pub const GIMEL_PATTERN: [[i8; 8]; 8] = [
    [1, -2, -3, -4, -5, -6, -7, -8],
    [2, 1, 4, -3, 6, -5, -8, 7],
    [3, -4, 1, 2, 7, 8, -5, -6],
    [4, 3, -2, 1, 8, -7, 6, -5],
    [5, -6, -7, -8, 1, 2, 3, 4],
    [6, 5, -8, 7, -2, 1, -4, 3],
    [7, 8, 5, -6, -3, 4, 1, -2],
    [8, -7, 6, 5, -4, -3, 2, 1],
];

/// Basis product table: `e_i * e_j = sign[i][j] * e_{index[i][j]}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OctonionTable {
    pub sign: [[f64; 8]; 8],
    pub index: [[usize; 8]; 8],
}

impl OctonionTable {
    /// Extracts the basis products from a `gimel` pattern.
    ///
    /// Panics (at compile time for the built-in table) if a column of
    /// `gimel(e_i)` does not contain exactly one nonzero entry.
    pub const fn from_gimel_pattern(pattern: &[[i8; 8]; 8]) -> Self {
        let mut sign = [[0.0; 8]; 8];
        let mut index = [[0usize; 8]; 8];
        let mut i = 0;
        while i < 8 {
            let mut c = 0;
            while c < 8 {
                let mut hits = 0;
                let mut r = 0;
                while r < 8 {
                    let p = pattern[r][c];
                    let src = (if p < 0 { -p } else { p }) as usize - 1;
                    if src == i {
                        hits += 1;
                        sign[i][c] = if p < 0 { -1.0 } else { 1.0 };
                        index[i][c] = r;
                    }
                    r += 1;
                }
                assert!(
                    hits == 1,
                    "gimel pattern column is not a signed permutation"
                );
                c += 1;
            }
            i += 1;
        }
        OctonionTable { sign, index }
    }

    /// Same table with the sign of `e_i * e_j` flipped. Used to check that the
    /// invariant suites detect a corrupted table.
    pub fn with_flipped_sign(mut self, i: usize, j: usize) -> Self {
        self.sign[i][j] = -self.sign[i][j];
        self
    }

    #[inline]
    pub fn mul(&self, x: &Octonion, y: &Octonion) -> Octonion {
        let mut out = [0.0; 8];
        for i in 0..8 {
            let xi = x.0[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..8 {
                out[self.index[i][j]] += self.sign[i][j] * xi * y.0[j];
            }
        }
        Octonion(out)
    }
}

pub const OCTONION_TABLE: OctonionTable = OctonionTable::from_gimel_pattern(&GIMEL_PATTERN);

/// An octonion `a_0 + sum_{i=1}^{7} a_i e_i`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Octonion(pub [f64; 8]);

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion::basis(0);

    pub const fn new(coeffs: [f64; 8]) -> Self {
        Octonion(coeffs)
    }

    /// The unit `e_k` (`e_0 = 1`).
    pub const fn basis(k: usize) -> Self {
        let mut c = [0.0; 8];
        c[k] = 1.0;
        Octonion(c)
    }

    /// `gimel(x)` expanded from [`GIMEL_PATTERN`], row-major 8x8.
    pub fn gimel(&self) -> [[f64; 8]; 8] {
        let mut m = [[0.0; 8]; 8];
        for (r, row) in GIMEL_PATTERN.iter().enumerate() {
            for (c, &p) in row.iter().enumerate() {
                let v = self.0[p.unsigned_abs() as usize - 1];
                m[r][c] = if p < 0 { -v } else { v };
            }
        }
        m
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0[0])?;
        for (k, v) in self.0.iter().enumerate().skip(1) {
            write!(f, " {:+}e{}", v, k)?;
        }
        Ok(())
    }
}

impl Add for Octonion {
    type Output = Octonion;
    #[inline]
    fn add(self, r: Octonion) -> Octonion {
        Octonion(std::array::from_fn(|k| self.0[k] + r.0[k]))
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    #[inline]
    fn sub(self, r: Octonion) -> Octonion {
        Octonion(std::array::from_fn(|k| self.0[k] - r.0[k]))
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    #[inline]
    fn neg(self) -> Octonion {
        Octonion(self.0.map(|v| -v))
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    #[inline]
    fn mul(self, r: Octonion) -> Octonion {
        OCTONION_TABLE.mul(&self, &r)
    }
}

impl Mul<f64> for Octonion {
    type Output = Octonion;
    #[inline]
    fn mul(self, s: f64) -> Octonion {
        Octonion(self.0.map(|v| v * s))
    }
}

impl AddAssign for Octonion {
    #[inline]
    fn add_assign(&mut self, r: Octonion) {
        for k in 0..8 {
            self.0[k] += r.0[k];
        }
    }
}

impl SubAssign for Octonion {
    #[inline]
    fn sub_assign(&mut self, r: Octonion) {
        for k in 0..8 {
            self.0[k] -= r.0[k];
        }
    }
}

impl Hypercomplex for Octonion {
    const DIM: usize = 8;
    const NAME: &'static str = "octonion";

    fn from_real(a: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = a;
        Octonion(c)
    }
    fn real(&self) -> f64 {
        self.0[0]
    }
    #[inline]
    fn conj(&self) -> Self {
        let mut c = self.0.map(|v| -v);
        c[0] = self.0[0];
        Octonion(c)
    }
    #[inline]
    fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }
    fn write_coeffs(&self, out: &mut [f64]) {
        out[..8].copy_from_slice(&self.0);
    }
    fn from_coeffs(c: &[f64]) -> Self {
        Octonion(std::array::from_fn(|k| c[k]))
    }
    fn left_matrix(&self) -> Vec<f64> {
        self.gimel().iter().flatten().copied().collect()
    }
    fn right_matrix(&self) -> Vec<f64> {
        // (x y)_k = sum_{i,j} sign_ij x_i y_j over index_ij = k; linear in x.
        let mut m = vec![0.0; 64];
        for i in 0..8 {
            for j in 0..8 {
                let k = OCTONION_TABLE.index[i][j];
                m[k * 8 + i] += OCTONION_TABLE.sign[i][j] * self.0[j];
            }
        }
        m
    }
}
