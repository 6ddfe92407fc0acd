//! Spectrum, spectral radius, numerical range boundary, numerical radius,
//! and smallest enclosing discs.
//!
//! General eigenvalues come from a Householder Hessenberg reduction followed
//! by shifted QR with deflation; defective input is accepted on a residual
//! criterion rather than exact multiplicity. The numerical range is scanned
//! through the support function s(θ) = λ_max((e^{−iθ}A + e^{iθ}A*)/2).

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, spectral_norm, OptimizerSettings};
use crate::matrix::{vec_inner, ComplexMatrix};
use crate::optim::{golden_max, rng_for};

const WELZL_SHUFFLE_SEED: u64 = 0x77c1_5e6d_9b2a_43f1;
const RANGE_SAMPLE_SALT: u64 = 0x52_414e_4745;
const QR_ITERS_PER_EIGENVALUE: usize = 60;
const GOLDEN_ITERS: usize = 48;

/// Closed disc in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
}

impl Disc {
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        (z - self.center).norm() <= self.radius + slack
    }
}

#[derive(Serialize, Deserialize)]
struct DiscRepr {
    center: [f64; 2],
    radius: f64,
}

impl Serialize for Disc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiscRepr {
            center: [self.center.re, self.center.im],
            radius: self.radius,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Disc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DiscRepr::deserialize(d)?;
        Ok(Disc {
            center: Complex64::new(repr.center[0], repr.center[1]),
            radius: repr.radius,
        })
    }
}

// ---------------------------------------------------------------------------
// Spectrum.

fn householder_hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let mut x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm <= f64::MIN_POSITIVE {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let beta = -phase * xnorm;
        x[0] -= beta;
        let vnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm <= f64::MIN_POSITIVE {
            continue;
        }
        for z in &mut x {
            *z /= vnorm;
        }
        // H ← P H P with P = I − 2vv† acting on rows/cols k+1..n.
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (i, v) in x.iter().enumerate() {
                dot += v.conj() * h[(k + 1 + i, j)];
            }
            dot *= 2.0;
            for (i, v) in x.iter().enumerate() {
                let updated = h[(k + 1 + i, j)] - v * dot;
                h[(k + 1 + i, j)] = updated;
            }
        }
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (j, v) in x.iter().enumerate() {
                dot += h[(i, k + 1 + j)] * *v;
            }
            dot *= 2.0;
            for (j, v) in x.iter().enumerate() {
                let updated = h[(i, k + 1 + j)] - dot * v.conj();
                h[(i, k + 1 + j)] = updated;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

fn eig_2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    (half_tr + disc, half_tr - disc)
}

/// Eigenvalues with multiplicity, in no particular order.
pub fn spectrum(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.dim();
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let mut h = householder_hessenberg(a);
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut stalled = 0usize;
    let mut total_iters = 0usize;
    let budget = QR_ITERS_PER_EIGENVALUE * n;

    loop {
        for i in 0..hi {
            let off = h[(i + 1, i)].norm();
            if off <= f64::EPSILON * (h[(i, i)].norm() + h[(i + 1, i + 1)].norm()) + 1e-300 {
                h[(i + 1, i)] = Complex64::new(0.0, 0.0);
            }
        }
        loop {
            if hi == 0 {
                eigs.push(h[(0, 0)]);
                return Ok(eigs);
            }
            if h[(hi, hi - 1)].norm() == 0.0 {
                eigs.push(h[(hi, hi)]);
                hi -= 1;
                stalled = 0;
            } else if hi == 1 || h[(hi - 1, hi - 2)].norm() == 0.0 {
                let (l1, l2) = eig_2x2(
                    h[(hi - 1, hi - 1)],
                    h[(hi - 1, hi)],
                    h[(hi, hi - 1)],
                    h[(hi, hi)],
                );
                eigs.push(l1);
                eigs.push(l2);
                if hi == 1 {
                    return Ok(eigs);
                }
                hi -= 2;
                stalled = 0;
            } else {
                break;
            }
        }
        total_iters += 1;
        stalled += 1;
        if total_iters > budget {
            return Err(Error::NonConvergence {
                context: "shifted QR spectrum",
                iterations: budget,
            });
        }
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }
        let shift = if stalled % 12 == 0 {
            h[(hi, hi)] + Complex64::new(0.75, 0.1) * h[(hi, hi - 1)].norm()
        } else {
            let (l1, l2) = eig_2x2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            if (l1 - h[(hi, hi)]).norm() <= (l2 - h[(hi, hi)]).norm() {
                l1
            } else {
                l2
            }
        };
        // Explicit shifted QR step on the block: QR via Givens, then RQ.
        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let f = h[(i, i)];
            let g = h[(i + 1, i)];
            let rho = (f.norm_sqr() + g.norm_sqr()).sqrt();
            let (c, s) = if rho <= f64::MIN_POSITIVE {
                (1.0, Complex64::new(0.0, 0.0))
            } else if f.norm() <= f64::MIN_POSITIVE {
                (0.0, g.conj() / rho)
            } else {
                let fsign = f / f.norm();
                (f.norm() / rho, fsign * g.conj() / rho)
            };
            rotations.push((c, s));
            for j in i..=hi {
                let hij = h[(i, j)];
                let hnext = h[(i + 1, j)];
                h[(i, j)] = hij * c + hnext * s;
                h[(i + 1, j)] = -hij * s.conj() + hnext * c;
            }
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let i = lo + idx;
            for row in lo..=(i + 1).min(hi) {
                let hri = h[(row, i)];
                let hrnext = h[(row, i + 1)];
                h[(row, i)] = hri * c + hrnext * s.conj();
                h[(row, i + 1)] = -hri * s + hrnext * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
}

/// max |λ| over the spectrum.
pub fn spectral_radius(a: &ComplexMatrix) -> Result<f64> {
    Ok(spectrum(a)?.iter().fold(0.0f64, |acc, z| acc.max(z.norm())))
}

// ---------------------------------------------------------------------------
// Smallest enclosing disc (incremental Welzl, deterministic shuffle).

fn disc_from_diameter(a: Complex64, b: Complex64) -> Disc {
    let center = (a + b) * 0.5;
    let radius = (a - center).norm().max((b - center).norm());
    Disc { center, radius }
}

fn circumcircle(a: Complex64, b: Complex64, c: Complex64) -> Option<Disc> {
    // Offset by the bounding-box midpoint for conditioning.
    let ox = (a.re.min(b.re).min(c.re) + a.re.max(b.re).max(c.re)) * 0.5;
    let oy = (a.im.min(b.im).min(c.im) + a.im.max(b.im).max(c.im)) * 0.5;
    let (ax, ay) = (a.re - ox, a.im - oy);
    let (bx, by) = (b.re - ox, b.im - oy);
    let (cx, cy) = (c.re - ox, c.im - oy);
    let d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0;
    if d == 0.0 {
        return None;
    }
    let asq = ax * ax + ay * ay;
    let bsq = bx * bx + by * by;
    let csq = cx * cx + cy * cy;
    let ux = (asq * (by - cy) + bsq * (cy - ay) + csq * (ay - by)) / d;
    let uy = (asq * (cx - bx) + bsq * (ax - cx) + csq * (bx - ax)) / d;
    let center = Complex64::new(ux + ox, uy + oy);
    let radius = (a - center)
        .norm()
        .max((b - center).norm())
        .max((c - center).norm());
    Some(Disc { center, radius })
}

fn disc_holds(d: &Disc, p: Complex64) -> bool {
    (p - d.center).norm() <= d.radius * (1.0 + 1e-13) + 1e-300
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

fn disc_two_known(points: &[Complex64], p: Complex64, q: Complex64) -> Disc {
    let circ = disc_from_diameter(p, q);
    let mut left: Option<Disc> = None;
    let mut right: Option<Disc> = None;
    let pq = q - p;
    for &r in points {
        if disc_holds(&circ, r) {
            continue;
        }
        let side = cross(pq, r - p);
        let Some(c) = circumcircle(p, q, r) else {
            continue;
        };
        let key = cross(pq, c.center - p);
        if side > 0.0 && left.map_or(true, |l| key > cross(pq, l.center - p)) {
            left = Some(c);
        } else if side < 0.0 && right.map_or(true, |r0| key < cross(pq, r0.center - p)) {
            right = Some(c);
        }
    }
    match (left, right) {
        (None, None) => circ,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}

fn disc_one_known(points: &[Complex64], p: Complex64) -> Disc {
    let mut d = Disc {
        center: p,
        radius: 0.0,
    };
    for (i, &q) in points.iter().enumerate() {
        if disc_holds(&d, q) {
            continue;
        }
        d = if d.radius == 0.0 {
            disc_from_diameter(p, q)
        } else {
            disc_two_known(&points[..=i], p, q)
        };
    }
    d
}

/// Smallest disc containing every point; determined by at most 3 support
/// points. Deterministic: the internal shuffle uses a fixed seed.
pub fn smallest_enclosing_disc(points: &[Complex64]) -> Result<Disc> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut shuffled = points.to_vec();
    let mut rng = rng_for(WELZL_SHUFFLE_SEED, 0);
    for i in (1..shuffled.len()).rev() {
        let j = rng.gen_range(0..=i);
        shuffled.swap(i, j);
    }
    let mut disc: Option<Disc> = None;
    for (i, &p) in shuffled.iter().enumerate() {
        let needs = match &disc {
            None => true,
            Some(d) => !disc_holds(d, p),
        };
        if needs {
            disc = Some(disc_one_known(&shuffled[..=i], p));
        }
    }
    Ok(disc.unwrap())
}

/// Smallest disc containing σ(A); its radius is the r_A of the normal-case
/// bounds.
pub fn spectrum_disc(a: &ComplexMatrix) -> Result<Disc> {
    smallest_enclosing_disc(&spectrum(a)?)
}

// ---------------------------------------------------------------------------
// Numerical range.

/// Support-function samples of W(A) over a uniform θ grid.
#[derive(Clone, Debug)]
pub struct RangeScan {
    pub angles: Vec<f64>,
    /// s(θ_k) = λ_max(H(θ_k)).
    pub support: Vec<f64>,
    /// Boundary points ⟨A x_θ, x_θ⟩ for a top eigenvector x_θ of H(θ_k).
    pub boundary: Vec<Complex64>,
}

fn direction_matrix(a: &ComplexMatrix, adj: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let phase = Complex64::from_polar(0.5, -theta);
    a.scale(phase).add(&adj.scale(phase.conj())).expect("same dim")
}

fn support_value(a: &ComplexMatrix, adj: &ComplexMatrix, theta: f64) -> Result<f64> {
    Ok(hermitian_eig(&direction_matrix(a, adj, theta))?.max())
}

/// Scan W(A): one Hermitian eigenproblem per grid angle.
pub fn range_scan(a: &ComplexMatrix, grid_angles: usize) -> Result<RangeScan> {
    if grid_angles < 8 {
        return Err(Error::InvalidParameter("grid_angles must be ≥ 8".into()));
    }
    let adj = a.adjoint();
    let mut angles = Vec::with_capacity(grid_angles);
    let mut support = Vec::with_capacity(grid_angles);
    let mut boundary = Vec::with_capacity(grid_angles);
    for k in 0..grid_angles {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / grid_angles as f64;
        let eig = hermitian_eig(&direction_matrix(a, &adj, theta))?;
        let x = eig.top_vector();
        let ax = a.matvec(&x);
        angles.push(theta);
        support.push(eig.max());
        boundary.push(vec_inner(&ax, &x));
    }
    Ok(RangeScan {
        angles,
        support,
        boundary,
    })
}

/// w(A − shift·Id) = max_θ [s_A(θ) − Re(e^{−iθ}·shift)], refined by
/// golden-section search around every local maximum of the shifted grid.
/// The peak of the support envelope is smooth, so the refinement error is
/// quadratic in the angular resolution.
pub fn radius_about(a: &ComplexMatrix, scan: &RangeScan, shift: Complex64) -> Result<f64> {
    let adj = a.adjoint();
    let m = scan.angles.len();
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let shifted =
        |k: usize| scan.support[k] - (Complex64::from_polar(1.0, -scan.angles[k]) * shift).re;
    let mut refined = (0..m).map(shifted).fold(f64::NEG_INFINITY, f64::max);
    let mut eval = |theta: f64| -> f64 {
        match support_value(a, &adj, theta) {
            Ok(s) => s - (Complex64::from_polar(1.0, -theta) * shift).re,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    for k in 0..m {
        let prev = shifted((k + m - 1) % m);
        let here = shifted(k);
        let next = shifted((k + 1) % m);
        if here >= prev && here >= next {
            let lo = scan.angles[k] - step;
            let hi = scan.angles[k] + step;
            let (_, v) = golden_max(&mut eval, lo, hi, GOLDEN_ITERS);
            refined = refined.max(v);
        }
    }
    Ok(refined)
}

/// Boundary points of W(A) on the settings' θ grid.
pub fn numerical_range_boundary(
    a: &ComplexMatrix,
    settings: &OptimizerSettings,
) -> Result<Vec<Complex64>> {
    Ok(range_scan(a, settings.grid_angles)?.boundary)
}

/// w(A): grid scan plus golden-section refinement.
pub fn numerical_radius(a: &ComplexMatrix, settings: &OptimizerSettings) -> Result<f64> {
    let scan = range_scan(a, settings.grid_angles)?;
    radius_about(a, &scan, Complex64::new(0.0, 0.0))
}

/// Smallest disc around W(A). The center is the enclosing-disc center of the
/// boundary samples; the radius is the refined support maximum about that
/// center, so sampled points of W(A) stay inside to solver accuracy.
pub fn numerical_range_disc(a: &ComplexMatrix, settings: &OptimizerSettings) -> Result<Disc> {
    let scan = range_scan(a, settings.grid_angles)?;
    disc_from_scan(a, &scan)
}

/// Same as [`numerical_range_disc`] for a precomputed scan.
pub fn disc_from_scan(a: &ComplexMatrix, scan: &RangeScan) -> Result<Disc> {
    let seed = smallest_enclosing_disc(&scan.boundary)?;
    let radius = radius_about(a, scan, seed.center)?;
    Ok(Disc {
        center: seed.center,
        radius,
    })
}

// ---------------------------------------------------------------------------
// Normaloid / transloid checks.

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormaloidCheck {
    pub normaloid: bool,
    /// ‖A‖ − r(A), nonnegative up to solver error.
    pub residual: f64,
    pub norm: f64,
    pub spectral_radius: f64,
}

/// r(A) = ‖A‖ within a relative tolerance; w(A) is then squeezed between.
pub fn is_normaloid(a: &ComplexMatrix, tolerance: f64) -> Result<NormaloidCheck> {
    let norm = spectral_norm(a)?;
    let radius = spectral_radius(a)?;
    let residual = norm - radius;
    Ok(NormaloidCheck {
        normaloid: residual <= tolerance * norm.max(f64::MIN_POSITIVE),
        residual,
        norm,
        spectral_radius: radius,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransloidCheck {
    pub transloid: bool,
    pub worst_shift: [f64; 2],
    /// Relative normaloid residual at the worst shift.
    pub worst_residual: f64,
    /// Sampled necessary condition, not a decision procedure.
    pub shifts_tested: usize,
}

/// A − μ·Id normaloid for every sampled μ.
pub fn is_transloid_sampled(
    a: &ComplexMatrix,
    shifts: &[Complex64],
    tolerance: f64,
) -> Result<TransloidCheck> {
    if shifts.is_empty() {
        return Err(Error::InvalidParameter("shift list must be nonempty".into()));
    }
    let mut worst_shift = shifts[0];
    let mut worst_rel = f64::NEG_INFINITY;
    let mut ok = true;
    for &mu in shifts {
        let check = is_normaloid(&a.minus_scalar(mu), tolerance)?;
        let rel = check.residual / check.norm.max(f64::MIN_POSITIVE);
        if rel > worst_rel {
            worst_rel = rel;
            worst_shift = mu;
        }
        ok &= check.normaloid;
    }
    Ok(TransloidCheck {
        transloid: ok,
        worst_shift: [worst_shift.re, worst_shift.im],
        worst_residual: worst_rel,
        shifts_tested: shifts.len(),
    })
}

/// Membership draws ⟨Ax, x⟩ for seeded random unit vectors.
pub fn sample_range_points(a: &ComplexMatrix, count: usize, seed: u64) -> Vec<Complex64> {
    let n = a.dim();
    let mut rng = rng_for(seed, RANGE_SAMPLE_SALT);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let x = crate::optim::random_unit_vector(n, &mut rng);
        let ax = a.matvec(&x);
        out.push(vec_inner(&ax, &x));
    }
    out
}
