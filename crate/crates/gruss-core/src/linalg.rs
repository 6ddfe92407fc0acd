//! Hermitian eigendecomposition (cyclic Jacobi with complex rotations),
//! singular values via A*A, Schatten norms, the Hilbert–Schmidt inner
//! product, states, and solver settings.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tol;

const MAX_JACOBI_SWEEPS: usize = 64;

/// Eigenvalues ascending; `vectors` holds the matching orthonormal columns.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        let n = self.values.len();
        (0..n).map(|i| self.vectors[(i, j)]).collect()
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn top_vector(&self) -> Vec<Complex64> {
        self.column(self.values.len() - 1)
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Input further than `tol::HERMITIAN_RESIDUAL`·(1 + ‖H‖) from Hermitian is
/// rejected with the residual; otherwise the Hermitian part is diagonalized.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    let n = h.dim();
    let residual = h.hermitian_residual();
    if residual > tol::HERMITIAN_RESIDUAL * (1.0 + h.frobenius_norm()) {
        return Err(Error::NotHermitian { residual });
    }
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if n == 1 || scale == 0.0 {
        return Ok(HermitianEig {
            values: (0..n).map(|i| a[(i, i)].re).collect(),
            vectors: v,
        });
    }
    let stop = tol::EIG_OFF_FACTOR * n as f64 * scale;

    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= stop {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let alpha = apq.norm();
                if alpha <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / alpha;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Rotation angle from t² − 2τt − 1 = 0, small-|t| root.
                let tau = (aqq - app) / (2.0 * alpha);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Plane rotation U with U[p][p]=c, U[p][q]=−s·phase,
                // U[q][p]=s·conj(phase), U[q][q]=c; apply A ← U*AU, V ← VU.
                let s_ph = phase * s;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * s_ph.conj();
                    a[(k, q)] = -akp * s_ph + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * s_ph;
                    a[(q, k)] = -apk * s_ph.conj() + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * s_ph.conj();
                    v[(k, q)] = -vkp * s_ph + vkq * c;
                }
            }
        }
    }
    if !converged {
        // One last check: the sweep cap is generous, reaching it means trouble.
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() > stop.max(1e-10 * scale) {
            return Err(Error::NonConvergence {
                context: "jacobi eigensolver",
                iterations: MAX_JACOBI_SWEEPS,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new_j)] = v[(i, old_j)];
        }
    }
    Ok(HermitianEig { values, vectors })
}

/// Largest singular value, σ_max(A) = sqrt(λ_max(A*A)).
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let gram = a.adjoint().mul(a)?;
    let eig = hermitian_eig(&gram)?;
    Ok(eig.max().max(0.0).sqrt())
}

/// Singular values in descending order, computed from the eigenvalues of A*A.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = a.adjoint().mul(a)?;
    let eig = hermitian_eig(&gram)?;
    let mut svals: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    svals.reverse();
    Ok(svals)
}

/// |A| = (A*A)^{1/2}, Hermitian positive semidefinite.
pub fn abs_value(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = a.adjoint().mul(a)?;
    let eig = hermitian_eig(&gram)?;
    Ok(hermitian_function(&eig, |l| l.max(0.0).sqrt()))
}

/// Assemble V f(Λ) V* from an eigendecomposition.
pub fn hermitian_function(eig: &HermitianEig, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = eig.values.len();
    let v = &eig.vectors;
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..n {
        let fk = f(eig.values[k]);
        if fk == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = v[(i, k)] * fk;
            for j in 0..n {
                out[(i, j)] += vik * v[(j, k)].conj();
            }
        }
    }
    out
}

/// Schatten p-norm, (Σ s_k^p)^{1/p} for p ≥ 1.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "schatten norm requires p ≥ 1, got {p}"
        )));
    }
    let svals = singular_values(a)?;
    if p.is_infinite() {
        return Ok(svals.first().copied().unwrap_or(0.0));
    }
    Ok(svals.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Hilbert–Schmidt inner product ⟨A, B⟩₂ = tr(AB*).
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| x * y.conj())
        .sum())
}

/// ‖A‖₂, the Hilbert–Schmidt (Frobenius) norm.
pub fn hs_norm(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

/// Acceptance windows for the density-operator invariants.
#[derive(Clone, Copy, Debug)]
pub struct StateTolerances {
    pub hermitian: f64,
    pub psd: f64,
    pub trace: f64,
}

impl Default for StateTolerances {
    fn default() -> Self {
        Self {
            hermitian: tol::HERMITIAN_RESIDUAL,
            psd: tol::PSD_EIGENVALUE_FLOOR,
            trace: tol::UNIT_TRACE,
        }
    }
}

/// Positive semidefinite, unit-trace operator: the state P of every trace
/// functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, StateTolerances::default())
    }

    pub fn with_tolerances(matrix: ComplexMatrix, tols: StateTolerances) -> Result<Self> {
        let residual = matrix.hermitian_residual();
        if residual > tols.hermitian {
            return Err(Error::NotHermitian { residual });
        }
        let eig = hermitian_eig(&matrix)?;
        if eig.min() < -tols.psd {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: eig.min(),
            });
        }
        let deviation = (matrix.trace() - Complex64::new(1.0, 0.0)).norm();
        if deviation > tols.trace {
            return Err(Error::TraceNotOne { deviation });
        }
        Ok(Self { matrix })
    }

    /// Pure state x⊗x from a nonzero vector (normalized internally).
    pub fn from_unit_vector(x: &[Complex64]) -> Result<Self> {
        let norm = crate::matrix::vec_norm(x);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter(
                "state vector must be nonzero and finite".into(),
            ));
        }
        let scaled: Vec<Complex64> = x.iter().map(|z| z / norm).collect();
        let matrix = ComplexMatrix::outer(&scaled, &scaled)?;
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0)),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// P^{1/2} with eigenvalues clamped at zero before the square root.
    pub fn sqrt(&self) -> Result<ComplexMatrix> {
        let eig = hermitian_eig(&self.matrix)?;
        Ok(hermitian_function(&eig, |l| l.max(0.0).sqrt()))
    }
}

/// Knobs shared by every iterative solver in the crate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizerSettings {
    /// Absolute convergence target, scaled internally by (1 + ‖A‖) where relevant.
    pub tol_abs: f64,
    /// Relative convergence target.
    pub tol_rel: f64,
    /// Restart count for nonconvex sphere/ball searches.
    pub restarts: usize,
    /// Number of θ samples on the numerical-range grid.
    pub grid_angles: usize,
    /// Iteration cap per solver run.
    pub max_iters: usize,
    /// Base seed for every seeded search.
    pub seed: u64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            tol_abs: 1e-11,
            tol_rel: 1e-11,
            restarts: 32,
            grid_angles: 256,
            max_iters: 10_000,
            seed: 42,
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_abs > 0.0 && self.tol_rel > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be > 0".into()));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidParameter("restarts must be ≥ 1".into()));
        }
        if self.grid_angles < 8 {
            return Err(Error::InvalidParameter("grid_angles must be ≥ 8".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut s = self.clone();
        s.seed = seed;
        s
    }
}
