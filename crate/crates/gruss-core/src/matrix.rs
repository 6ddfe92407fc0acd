//! Dense square complex matrices and the small vector kit used everywhere.
//!
//! Storage is row-major. The JSON wire format is
//! `{"n": 2, "entries": [[re, im], [re, im], ...]}` with n² entries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major entries; rejects non-square or non-finite input.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be ≥ 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::EntryCount {
                expected: n * n,
                got: data.len(),
            });
        }
        let m = Self { n, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    /// Real entries convenience, mostly for tests and fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let converted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    /// Rank-one operator x⊗y acting as z ↦ ⟨z, y⟩x, i.e. entries x_i · conj(y_j).
    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let n = x.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = x[i] * y[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// A − λ·Id.
    pub fn minus_scalar(&self, lambda: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] -= lambda;
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        debug_assert_eq!(x.len(), n);
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self[(i, j)] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// ‖A − A*‖_F, the diagnostic reported when Hermitian input is expected.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = self[(i, j)] - self[(j, i)].conj();
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// (A + A*)/2.
    pub fn hermitian_part(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    /// ‖AA* − A*A‖_F, zero exactly for normal matrices.
    pub fn normality_residual(&self) -> f64 {
        let ad = self.adjoint();
        let left = self.mul(&ad).expect("same dim");
        let right = ad.mul(self).expect("same dim");
        left.sub(&right).expect("same dim").frobenius_norm()
    }

    /// Short content hash used to tag reports.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut mix = |bits: u64| {
            h ^= bits;
            h = h.wrapping_mul(0x100000001b3);
        };
        mix(self.n as u64);
        for z in &self.data {
            mix(z.re.to_bits());
            mix(z.im.to_bits());
        }
        format!("{h:016x}")
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            n: self.n,
            entries: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let data = repr
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(repr.n, data).map_err(serde::de::Error::custom)
    }
}

// Vector helpers. Inner products are linear in the first argument,
// ⟨u, v⟩ = Σ u_k conj(v_k), matching ⟨Ax, x⟩ = x*Ax.

pub fn vec_inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_normalize(u: &mut [Complex64]) -> f64 {
    let n = vec_norm(u);
    if n > 0.0 {
        for z in u.iter_mut() {
            *z /= n;
        }
    }
    n
}

pub fn basis_vector(n: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[index] = Complex64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(0.0, -1.0)],
            vec![c(3.5, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn json_rejects_length_mismatch() {
        let text = r#"{"n": 2, "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(text).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        let res = ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(res, Err(Error::NonFinite)));
    }

    #[test]
    fn adjoint_and_mul() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let prod = a.mul(&a.adjoint()).unwrap();
        assert_eq!(prod[(0, 0)], c(1.0, 0.0));
        assert_eq!(prod[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn outer_matches_inner_action() {
        let x = vec![c(1.0, 1.0), c(0.0, 2.0)];
        let y = vec![c(0.5, 0.0), c(0.0, -1.0)];
        let z = vec![c(2.0, 0.0), c(1.0, 1.0)];
        let op = ComplexMatrix::outer(&x, &y).unwrap();
        let lhs = op.matvec(&z);
        let coeff = vec_inner(&z, &y);
        for i in 0..2 {
            assert!((lhs[i] - coeff * x[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn hermitian_residual_detects_skew() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(2.0, 0.0)],
        ])
        .unwrap();
        assert!(a.hermitian_residual() > 1.0);
        assert!(a.hermitian_part().hermitian_residual() < 1e-15);
    }
}
