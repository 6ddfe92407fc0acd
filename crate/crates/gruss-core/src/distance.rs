//! Distance from A to the scalar multiples of T (and of the identity),
//! centers of mass, and the alternative characterizations used to
//! cross-validate: the unit-sphere supremum, the commutator supremum, and
//! the rank-one-projection supremum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{disc_from_scan, range_scan, RangeScan};
use crate::linalg::{hermitian_eig, singular_values, spectral_norm, OptimizerSettings};
use crate::matrix::{basis_vector, vec_inner, vec_norm, vec_normalize, ComplexMatrix};
use crate::optim::{
    maximize_on_sphere, minimize_over_plane, mix_seed, rng_for,
};
use crate::tol;

const PLANE_GRID: usize = 13;

/// min_λ ‖A − λ·Id‖ with its minimizer (the center of mass c(A)).
#[derive(Clone, Debug)]
pub struct ScalarDistance {
    pub center: Complex64,
    pub distance: f64,
    /// Best value on the seeding grid, before local descent.
    pub grid_value: f64,
    pub converged: bool,
    pub degenerate: bool,
    pub evals: usize,
}

fn scaled_tol(settings: &OptimizerSettings, scale: f64) -> f64 {
    settings.tol_abs * (1.0 + scale)
}

/// Convex minimization of λ ↦ ‖A − λ·Id‖: coarse grid over a disc that
/// contains the minimizer (|c(A)| ≤ w(A) ≤ ‖A‖), then simplex descent with a
/// compass polish. Scalar multiples of the identity short-circuit.
pub fn dist_to_scalars(a: &ComplexMatrix, settings: &OptimizerSettings) -> Result<ScalarDistance> {
    dist_to_scalars_seeded(a, settings, &[])
}

/// Same with extra candidate centers evaluated up front; the returned
/// distance never exceeds ‖A − s·Id‖ for any seed s.
pub fn dist_to_scalars_seeded(
    a: &ComplexMatrix,
    settings: &OptimizerSettings,
    extra_seeds: &[Complex64],
) -> Result<ScalarDistance> {
    settings.validate()?;
    let n = a.dim();
    let mean = a.trace() / n as f64;
    let norm = spectral_norm(a)?;
    let centered = spectral_norm(&a.minus_scalar(mean))?;
    if centered <= tol::SCALAR_MULTIPLE * (1.0 + norm) {
        return Ok(ScalarDistance {
            center: mean,
            distance: centered,
            grid_value: centered,
            converged: true,
            degenerate: true,
            evals: 1,
        });
    }
    let mut seeds = vec![mean];
    seeds.extend_from_slice(extra_seeds);
    let objective = |lambda: Complex64| spectral_norm(&a.minus_scalar(lambda)).unwrap_or(f64::MAX);
    let result = minimize_over_plane(
        objective,
        &seeds,
        Complex64::new(0.0, 0.0),
        norm,
        PLANE_GRID,
        scaled_tol(settings, norm),
        settings.max_iters,
    );
    Ok(ScalarDistance {
        center: result.point,
        distance: result.value,
        grid_value: result.grid_value,
        converged: result.converged,
        degenerate: false,
        evals: result.evals,
    })
}

/// dist(A, ℂ·Id) through the unit sphere: the supremum of
/// (‖Ax‖² − |⟨Ax, x⟩|²)^{1/2} over unit vectors.
#[derive(Clone, Debug)]
pub struct SphereDistance {
    pub maximizer: Vec<Complex64>,
    pub distance: f64,
    pub converged: bool,
    pub restarts_converged: usize,
}

pub(crate) fn sphere_objective(
    a: &ComplexMatrix,
    adj: &ComplexMatrix,
    x: &[Complex64],
) -> (f64, Vec<Complex64>) {
    let ax = a.matvec(x);
    let c = vec_inner(&ax, x);
    let value = vec_norm(&ax).powi(2) - c.norm_sqr();
    // ∂/∂x̄ of ‖Ax‖² − |⟨Ax,x⟩|²: A†Ax − conj(c)·Ax − c·A†x.
    let atax = adj.matvec(&ax);
    let atx = adj.matvec(x);
    let grad: Vec<Complex64> = atax
        .iter()
        .zip(ax.iter().zip(&atx))
        .map(|(t, (axi, atxi))| t - axi * c.conj() - atxi * c)
        .collect();
    (value, grad)
}

pub fn dist_sphere(a: &ComplexMatrix, settings: &OptimizerSettings) -> Result<SphereDistance> {
    settings.validate()?;
    let n = a.dim();
    let adj = a.adjoint();
    // Deterministic seeds: basis vectors plus the top singular direction.
    let mut seeds: Vec<Vec<Complex64>> = (0..n).map(|i| basis_vector(n, i)).collect();
    if let Ok(eig) = hermitian_eig(&adj.mul(a)?) {
        seeds.push(eig.top_vector());
    }
    let out = maximize_on_sphere(
        |x| sphere_objective(a, &adj, x),
        n,
        &seeds,
        settings.restarts,
        mix_seed(settings.seed, 0x7d15),
        settings.max_iters,
        settings.tol_rel * 1e-1,
    );
    Ok(SphereDistance {
        distance: out.value.max(0.0).sqrt(),
        maximizer: out.vector,
        converged: out.converged,
        restarts_converged: out.restarts_converged,
    })
}

/// dist(A, ℂ·T) for T bounded below.
#[derive(Clone, Debug)]
pub struct LineDistance {
    /// Minimizer of ‖A − λT‖ (the center of mass c(A, T)).
    pub center: Complex64,
    /// Supremum form of the distance over unit vectors.
    pub distance: f64,
    /// Direct convex minimum of ‖A − λT‖, the cross-check.
    pub direct_distance: f64,
    pub maximizer: Vec<Complex64>,
    pub converged: bool,
}

fn check_bounded_below(t: &ComplexMatrix) -> Result<f64> {
    let svals = singular_values(t)?;
    let smin = svals.last().copied().unwrap_or(0.0);
    let smax = svals.first().copied().unwrap_or(0.0);
    if smin < tol::BOUNDED_BELOW_FACTOR * smax.max(f64::MIN_POSITIVE) {
        return Err(Error::Precondition {
            predicate: format!(
                "σ_min(T) ≥ {:.1e}·‖T‖ (T bounded below)",
                tol::BOUNDED_BELOW_FACTOR
            ),
            residual: smin,
        });
    }
    Ok(smin)
}

fn line_objective(
    a: &ComplexMatrix,
    t: &ComplexMatrix,
    a_adj: &ComplexMatrix,
    t_adj: &ComplexMatrix,
    x: &[Complex64],
) -> (f64, Vec<Complex64>) {
    let ax = a.matvec(x);
    let tx = t.matvec(x);
    let u = vec_inner(&ax, &tx);
    let tsq = vec_norm(&tx).powi(2).max(f64::MIN_POSITIVE);
    let value = vec_norm(&ax).powi(2) - u.norm_sqr() / tsq;
    // ∂/∂x̄: A†Ax − [conj(u)·T†Ax + u·A†Tx]/‖Tx‖² + |u|²·T†Tx/‖Tx‖⁴.
    let ata_x = a_adj.matvec(&ax);
    let tt_ax = t_adj.matvec(&ax);
    let at_tx = a_adj.matvec(&tx);
    let tt_tx = t_adj.matvec(&tx);
    let grad: Vec<Complex64> = (0..x.len())
        .map(|i| {
            ata_x[i] - (tt_ax[i] * u.conj() + at_tx[i] * u) / tsq
                + tt_tx[i] * (u.norm_sqr() / (tsq * tsq))
        })
        .collect();
    (value, grad)
}

pub fn dist_to_line(
    a: &ComplexMatrix,
    t: &ComplexMatrix,
    settings: &OptimizerSettings,
) -> Result<LineDistance> {
    settings.validate()?;
    if a.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: t.dim(),
        });
    }
    let smin = check_bounded_below(t)?;
    let n = a.dim();
    let a_adj = a.adjoint();
    let t_adj = t.adjoint();

    let norm_a = spectral_norm(a)?;
    let mut seeds: Vec<Vec<Complex64>> = (0..n).map(|i| basis_vector(n, i)).collect();
    if let Ok(eig) = hermitian_eig(&a_adj.mul(a)?) {
        seeds.push(eig.top_vector());
    }
    let sup = maximize_on_sphere(
        |x| line_objective(a, t, &a_adj, &t_adj, x),
        n,
        &seeds,
        settings.restarts,
        mix_seed(settings.seed, 0x11e5),
        settings.max_iters,
        settings.tol_rel * 1e-1,
    );

    // Direct convex route: the minimizer satisfies |λ0| ≤ 2‖A‖/σ_min(T).
    let radius = 2.0 * norm_a / smin;
    let objective = |lambda: Complex64| {
        spectral_norm(&a.sub(&t.scale(lambda)).expect("same dim")).unwrap_or(f64::MAX)
    };
    let direct = minimize_over_plane(
        objective,
        &[Complex64::new(1.0, 0.0)],
        Complex64::new(0.0, 0.0),
        radius,
        PLANE_GRID,
        scaled_tol(settings, norm_a),
        settings.max_iters,
    );

    Ok(LineDistance {
        center: direct.point,
        distance: sup.value.max(0.0).sqrt(),
        direct_distance: direct.value,
        maximizer: sup.vector,
        converged: sup.converged && direct.converged,
    })
}

/// Center of mass through the maximizing vector: ⟨Ay, Ty⟩ / ⟨Ty, Ty⟩ at the
/// vector attaining the supremum form of dist(A, ℂT).
pub fn center_of_mass_limit(
    a: &ComplexMatrix,
    t: &ComplexMatrix,
    settings: &OptimizerSettings,
) -> Result<Complex64> {
    let line = dist_to_line(a, t, settings)?;
    let y = &line.maximizer;
    let ay = a.matvec(y);
    let ty = t.matvec(y);
    let denom = vec_inner(&ty, &ty);
    if denom.norm() <= f64::MIN_POSITIVE {
        return Err(Error::Precondition {
            predicate: "⟨Ty, Ty⟩ > 0 at the maximizer".into(),
            residual: denom.norm(),
        });
    }
    Ok(vec_inner(&ay, &ty) / denom)
}

/// The two lower-bound characterizations of dist(A, ℂ·Id).
#[derive(Clone, Debug)]
pub struct Characterizations {
    /// ½·sup ‖AX − XA‖ over unit-norm X (best found).
    pub commutator_half_sup: f64,
    /// sup ‖(Id − Q)AQ‖ over rank-one projections Q (best found).
    pub rank_one_proj_sup: f64,
    pub converged: bool,
}

fn commutator_norm(a: &ComplexMatrix, x: &ComplexMatrix) -> f64 {
    let m = a.mul(x).expect("dim").sub(&x.mul(a).expect("dim")).expect("dim");
    spectral_norm(&m).unwrap_or(0.0)
}

/// Gradient ascent over the unit spectral-norm ball for ‖[A, X]‖.
fn commutator_ascent(
    a: &ComplexMatrix,
    start: &ComplexMatrix,
    max_iters: usize,
) -> (ComplexMatrix, f64) {
    let n = a.dim();
    let norm0 = spectral_norm(start).unwrap_or(0.0);
    if norm0 <= f64::MIN_POSITIVE {
        return (start.clone(), 0.0);
    }
    let mut x = start.scale(Complex64::new(1.0 / norm0, 0.0));
    let mut fx = commutator_norm(a, &x);
    let mut step = 0.5;
    for _ in 0..max_iters {
        // Subgradient of σ_max([A, X]) in X: (A†u)v† − u(Av)† at the top
        // singular pair (u, v) of M = [A, X].
        let m = a.mul(&x).expect("dim").sub(&x.mul(a).expect("dim")).expect("dim");
        let gram = m.adjoint().mul(&m).expect("dim");
        let Ok(eig) = hermitian_eig(&gram) else { break };
        let sigma = eig.max().max(0.0).sqrt();
        if sigma <= f64::MIN_POSITIVE {
            break;
        }
        let v = eig.top_vector();
        let mut u = m.matvec(&v);
        if vec_normalize(&mut u) <= f64::MIN_POSITIVE {
            break;
        }
        let atu = a.adjoint().matvec(&u);
        let av = a.matvec(&v);
        let grad = ComplexMatrix::outer(&atu, &v)
            .expect("dim")
            .sub(&ComplexMatrix::outer(&u, &av).expect("dim"))
            .expect("dim");
        let mut improved = false;
        for _ in 0..30 {
            let cand_raw = x.add(&grad.scale(Complex64::new(step, 0.0))).expect("dim");
            let cn = spectral_norm(&cand_raw).unwrap_or(0.0);
            if cn <= f64::MIN_POSITIVE {
                break;
            }
            let cand = cand_raw.scale(Complex64::new(1.0 / cn, 0.0));
            let fc = commutator_norm(a, &cand);
            if fc > fx + 1e-14 * (1.0 + fx) {
                x = cand;
                fx = fc;
                step = (step * 1.5).min(10.0);
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
        let _ = n;
    }
    (x, fx)
}

/// Best-found evaluation of both lower-bound formulas.
///
/// Restarts mix random matrices/vectors with one structured candidate built
/// from the sphere maximizer x* of A − c·Id: with y = (A−c)x*/‖(A−c)x*‖ the
/// matrix x*⊗x* − y⊗y has unit norm and commutator value ≈ 2·dist.
pub fn dist_characterizations(
    a: &ComplexMatrix,
    settings: &OptimizerSettings,
) -> Result<Characterizations> {
    settings.validate()?;
    let n = a.dim();
    let adj = a.adjoint();

    // Rank-one projection route: ascend the smooth surrogate, evaluate the
    // matrix formula ‖(Id − Q)AQ‖ at the winner.
    let mut seeds: Vec<Vec<Complex64>> = (0..n).map(|i| basis_vector(n, i)).collect();
    if let Ok(eig) = hermitian_eig(&adj.mul(a)?) {
        seeds.push(eig.top_vector());
    }
    let sphere = maximize_on_sphere(
        |x| sphere_objective(a, &adj, x),
        n,
        &seeds,
        settings.restarts,
        mix_seed(settings.seed, 0xc0de),
        settings.max_iters,
        settings.tol_rel * 1e-1,
    );
    let q = ComplexMatrix::outer(&sphere.vector, &sphere.vector)?;
    let id = ComplexMatrix::identity(n);
    let projected = id.sub(&q)?.mul(a)?.mul(&q)?;
    let rank_one_proj_sup = spectral_norm(&projected)?;

    // Commutator route.
    let mut rng = rng_for(settings.seed, 0xab57_ac70);
    let mut best_comm = 0.0f64;
    let mut structured: Vec<ComplexMatrix> = Vec::new();
    // Structured seed from the sphere maximizer.
    let center = vec_inner(&a.matvec(&sphere.vector), &sphere.vector);
    let shifted = a.minus_scalar(center);
    let mut y = shifted.matvec(&sphere.vector);
    if vec_normalize(&mut y) > f64::MIN_POSITIVE {
        let xx = ComplexMatrix::outer(&sphere.vector, &sphere.vector)?;
        let yy = ComplexMatrix::outer(&y, &y)?;
        structured.push(xx.sub(&yy)?);
    }
    let iters = settings.max_iters.min(300);
    for r in 0..settings.restarts.max(1) + structured.len() {
        let start = if r < structured.len() {
            structured[r].clone()
        } else {
            let mut data = Vec::with_capacity(n * n);
            for _ in 0..n * n {
                data.push(crate::optim::complex_gaussian(&mut rng));
            }
            ComplexMatrix::new(n, data)?
        };
        let (_, value) = commutator_ascent(a, &start, iters);
        if value > best_comm {
            best_comm = value;
        }
    }

    Ok(Characterizations {
        commutator_half_sup: 0.5 * best_comm,
        rank_one_proj_sup,
        converged: sphere.converged,
    })
}

/// Convenience wrapper: the supremum form value at an explicit unit vector,
/// used by tests as a feasibility check.
pub fn sphere_value_at(a: &ComplexMatrix, x: &[Complex64]) -> f64 {
    let mut v = x.to_vec();
    vec_normalize(&mut v);
    let ax = a.matvec(&v);
    (vec_norm(&ax).powi(2) - vec_inner(&ax, &v).norm_sqr()).max(0.0)
}

/// Shared scan hook so chain evaluation can seed the distance search with
/// the numerical-range disc center.
pub fn dist_with_scan(
    a: &ComplexMatrix,
    scan: &RangeScan,
    settings: &OptimizerSettings,
) -> Result<ScalarDistance> {
    let disc = disc_from_scan(a, scan)?;
    dist_to_scalars_seeded(a, settings, &[disc.center])
}

/// Scan a fresh grid and compute the seeded distance in one call.
pub fn dist_seeded_by_range(
    a: &ComplexMatrix,
    settings: &OptimizerSettings,
) -> Result<(ScalarDistance, RangeScan)> {
    let scan = range_scan(a, settings.grid_angles)?;
    let dist = dist_with_scan(a, &scan, settings)?;
    Ok((dist, scan))
}
