//! Trace functionals against a state: V_P(A, T), the variance V_P(A), the
//! Hilbert–Schmidt identities tying variance to the scalar distance, the
//! rank-one maximization of the variance, the state semi-inner product, and
//! the two-level upper bound on |V_P(A, T)|.

use num_complex::Complex64;

use crate::distance::sphere_objective;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, hs_inner, hs_norm, spectral_norm, DensityOperator, OptimizerSettings,
};
use crate::matrix::{basis_vector, ComplexMatrix};
use crate::optim::{maximize_on_sphere, mix_seed};

fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// V_P(A, T) = tr(PAT) − tr(PA)·tr(PT); bilinear in (A, T).
pub fn v_p(a: &ComplexMatrix, t: &ComplexMatrix, p: &DensityOperator) -> Result<Complex64> {
    check_dims(a, t)?;
    check_dims(a, p.matrix())?;
    let pm = p.matrix();
    let pat = pm.mul(a)?.mul(t)?.trace();
    let pa = pm.mul(a)?.trace();
    let pt = pm.mul(t)?.trace();
    Ok(pat - pa * pt)
}

/// V_P(A) = tr(|A|²P) − |tr(AP)|², real and nonnegative up to rounding.
///
/// With |A|² = A*A this equals V_P(A*, A); the conjugation convention
/// matters for non-normal A.
pub fn variance(a: &ComplexMatrix, p: &DensityOperator) -> Result<f64> {
    check_dims(a, p.matrix())?;
    let gram = a.adjoint().mul(a)?;
    let first = gram.mul(p.matrix())?.trace().re;
    let second = a.mul(p.matrix())?.trace().norm_sqr();
    Ok(first - second)
}

/// The three Hilbert–Schmidt renderings of the variance.
#[derive(Clone, Copy, Debug)]
pub struct VarianceIdentities {
    /// ‖AP^{1/2}‖₂² − |⟨AP^{1/2}, P^{1/2}⟩₂|².
    pub v1: f64,
    /// ‖AP^{1/2} − ⟨AP^{1/2}, P^{1/2}⟩₂·P^{1/2}‖₂².
    pub v2: f64,
    /// min_λ ‖AP^{1/2} − λ·P^{1/2}‖₂² via the projection coefficient.
    pub v3: f64,
}

pub fn variance_identities(a: &ComplexMatrix, p: &DensityOperator) -> Result<VarianceIdentities> {
    check_dims(a, p.matrix())?;
    let root = p.sqrt()?;
    let x = a.mul(&root)?;
    let coeff = hs_inner(&x, &root)?;
    let ynorm_sq = hs_norm(&root).powi(2);

    let v1 = hs_norm(&x).powi(2) - coeff.norm_sqr();
    let v2 = hs_norm(&x.sub(&root.scale(coeff))?).powi(2);
    // Projection onto span{P^{1/2}} in the Hilbert–Schmidt inner product:
    // min_λ ‖x − λy‖² = ‖x‖² − |⟨x,y⟩|²/‖y‖².
    let v3 = hs_norm(&x).powi(2) - coeff.norm_sqr() / ynorm_sq.max(f64::MIN_POSITIVE);
    Ok(VarianceIdentities { v1, v2, v3 })
}

/// Best found rank-one state for the variance, with its value.
#[derive(Clone, Debug)]
pub struct AudenaertMax {
    pub state: DensityOperator,
    pub value: f64,
    pub converged: bool,
}

/// Maximize V_P(A) over rank-one states. The objective at P = x⊗x is the
/// unit-sphere objective ‖Ax‖² − |⟨Ax, x⟩|², so the sphere engine applies;
/// the rank-one restriction loses nothing for this maximization.
pub fn audenaert_max(a: &ComplexMatrix, settings: &OptimizerSettings) -> Result<AudenaertMax> {
    settings.validate()?;
    let n = a.dim();
    let adj = a.adjoint();
    let mut seeds: Vec<Vec<Complex64>> = (0..n).map(|i| basis_vector(n, i)).collect();
    if let Ok(eig) = hermitian_eig(&adj.mul(a)?) {
        seeds.push(eig.top_vector());
    }
    let out = maximize_on_sphere(
        |x| sphere_objective(a, &adj, x),
        n,
        &seeds,
        settings.restarts,
        mix_seed(settings.seed, 0xa0de),
        settings.max_iters,
        settings.tol_rel * 1e-1,
    );
    let state = DensityOperator::from_unit_vector(&out.vector)?;
    let value = variance(a, &state)?;
    Ok(AudenaertMax {
        state,
        value,
        converged: out.converged,
    })
}

/// Semi-inner product (X, Y)_{2,P} = ⟨P^{1/2}X, P^{1/2}Y⟩₂.
pub fn semi_inner(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    p: &DensityOperator,
) -> Result<Complex64> {
    check_dims(x, y)?;
    check_dims(x, p.matrix())?;
    let root = p.sqrt()?;
    hs_inner(&root.mul(x)?, &root.mul(y)?)
}

/// The two-level upper bound on |V_P(A, T)| at shifts (λ, μ).
#[derive(Clone, Copy, Debug)]
pub struct DragomirBound {
    /// Semi-inner-product bound minus the trace product term.
    pub middle: f64,
    /// Operator-norm bound minus the same term.
    pub outer: f64,
}

/// middle = (A−λ, A−λ)^{1/2}_{2,P}·(T*−μ̄, T*−μ̄)^{1/2}_{2,P} − |tr(P(A−λ))·tr(P(T−μ))|
/// outer  = ‖A−λ‖·‖T−μ‖ − same term; |V_P(A,T)| ≤ middle ≤ outer for all λ, μ.
pub fn dragomir_bound(
    a: &ComplexMatrix,
    t: &ComplexMatrix,
    p: &DensityOperator,
    lambda: Complex64,
    mu: Complex64,
) -> Result<DragomirBound> {
    check_dims(a, t)?;
    check_dims(a, p.matrix())?;
    let a_shift = a.minus_scalar(lambda);
    let t_shift = t.minus_scalar(mu);
    let t_star_shift = t.adjoint().minus_scalar(mu.conj());

    let left = semi_inner(&a_shift, &a_shift, p)?.re.max(0.0).sqrt();
    let right = semi_inner(&t_star_shift, &t_star_shift, p)?.re.max(0.0).sqrt();

    let tr_a = p.matrix().mul(&a_shift)?.trace();
    let tr_t = p.matrix().mul(&t_shift)?.trace();
    let product = (tr_a * tr_t).norm();

    let middle = left * right - product;
    let outer = spectral_norm(&a_shift)? * spectral_norm(&t_shift)? - product;
    Ok(DragomirBound { middle, outer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::basis_vector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn j2() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    fn pure_state(v: &[Complex64]) -> DensityOperator {
        DensityOperator::from_unit_vector(v).unwrap()
    }

    #[test]
    fn v_p_vanishes_on_scalars() {
        let alpha = ComplexMatrix::identity(2).scale(c(1.3, -0.4));
        let t = j2();
        let p = DensityOperator::maximally_mixed(2);
        let v = v_p(&alpha, &t, &p).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn v_p_inverse_pair_example() {
        // A = diag(1,4), T = A⁻¹, P = x⊗x with x = (1,1)/√2:
        // tr(PAT) = 1, tr(PA) = 2.5, tr(PT) = 0.625.
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(4.0, 0.0)]);
        let t = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.25, 0.0)]);
        let x = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let p = pure_state(&x);
        let v = v_p(&a, &t, &p).unwrap();
        assert!((v - c(1.0 - 2.5 * 0.625, 0.0)).norm() < 1e-14);
        assert!((v.re + 0.5625).abs() < 1e-14);
    }

    #[test]
    fn v_p_jordan_rank_one_states() {
        let a = j2();
        let t = j2().adjoint();
        let e1 = basis_vector(2, 0);
        let e2 = basis_vector(2, 1);
        // tr((x⊗x)M) = ⟨Mx, x⟩ and J2·J2* = diag(1, 0).
        let v = v_p(&a, &t, &pure_state(&e2)).unwrap();
        assert!(v.norm() < 1e-14);
        let v = v_p(&a, &t, &pure_state(&e1)).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn variance_examples() {
        let p = DensityOperator::maximally_mixed(2);
        let alpha = ComplexMatrix::identity(2).scale(c(0.2, 2.0));
        assert!(variance(&alpha, &p).unwrap().abs() < 1e-14);

        let e2 = basis_vector(2, 1);
        let v = variance(&j2(), &pure_state(&e2)).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn variance_is_shift_invariant() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.3, 0.8), c(-1.0, 0.2)],
            vec![c(0.5, 0.0), c(0.0, -0.6)],
        ])
        .unwrap();
        let p = pure_state(&[c(0.8, 0.1), c(0.0, 0.58)]);
        let base = variance(&a, &p).unwrap();
        for lambda in [c(0.5, 0.0), c(-1.2, 0.7), c(0.0, -3.0)] {
            let shifted = variance(&a.minus_scalar(lambda), &p).unwrap();
            assert!((shifted - base).abs() < 1e-12);
        }
    }

    #[test]
    fn variance_matches_v_p_with_conjugation() {
        // tr(|A|²P) = tr(PA*A) makes the variance V_P(A*, A), not V_P(A, A*).
        let a = j2();
        let e1 = basis_vector(2, 0);
        let p = pure_state(&e1);
        let var = variance(&a, &p).unwrap();
        let vp = v_p(&a.adjoint(), &a, &p).unwrap();
        assert!((var - vp.re).abs() < 1e-14 && vp.im.abs() < 1e-14);
        // For this P the other ordering differs: V_P(J2, J2*) = 1 but the
        // variance is 0.
        assert!(var.abs() < 1e-14);
        assert!((v_p(&a, &a.adjoint(), &p).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn identities_examples() {
        let p = DensityOperator::maximally_mixed(2);
        let alpha = ComplexMatrix::identity(2).scale(c(1.0, -1.0));
        let ids = variance_identities(&alpha, &p).unwrap();
        assert!(ids.v1.abs() < 1e-13 && ids.v2.abs() < 1e-13 && ids.v3.abs() < 1e-13);

        // |J2|² = diag(0,1), so every rendering equals 0.5 at P = Id/2.
        let ids = variance_identities(&j2(), &p).unwrap();
        let var = variance(&j2(), &p).unwrap();
        assert!((var - 0.5).abs() < 1e-14);
        for v in [ids.v1, ids.v2, ids.v3] {
            assert!((v - 0.5).abs() < 1e-12, "identity {v}");
        }
    }

    #[test]
    fn audenaert_examples() {
        let s = OptimizerSettings::default();
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(3.0, 0.0)]);
        let out = audenaert_max(&a, &s).unwrap();
        assert!((out.value - 1.0).abs() < 1e-7, "value {}", out.value);
        // Maximizer x⊗x with x = (e1+e2)/√2: diagonal entries 1/2.
        let m = out.state.matrix();
        assert!((m[(0, 0)].re - 0.5).abs() < 1e-4);
        assert!((m[(1, 1)].re - 0.5).abs() < 1e-4);

        let alpha = ComplexMatrix::identity(2).scale(c(0.0, 2.0));
        let out = audenaert_max(&alpha, &s).unwrap();
        assert!(out.value.abs() < 1e-12);

        let out = audenaert_max(&j2(), &s).unwrap();
        assert!((out.value - 1.0).abs() < 1e-7);
        assert!((out.state.matrix()[(1, 1)].re - 1.0).abs() < 1e-4, "state near e2⊗e2");
    }

    #[test]
    fn semi_inner_examples() {
        let p = pure_state(&[c(0.6, 0.0), c(0.8, 0.0)]);
        let id = ComplexMatrix::identity(2);
        let one = semi_inner(&id, &id, &p).unwrap();
        assert!((one - c(1.0, 0.0)).norm() < 1e-13);

        // P = Id/n gives ‖X‖₂²/n.
        let x = ComplexMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(0.0, -2.0)],
            vec![c(0.3, 0.0), c(0.0, 0.7)],
        ])
        .unwrap();
        let p = DensityOperator::maximally_mixed(2);
        let v = semi_inner(&x, &x, &p).unwrap();
        assert!((v.re - hs_norm(&x).powi(2) / 2.0).abs() < 1e-13);
        assert!(v.im.abs() < 1e-13);

        // (J2, Id, e1⊗e1) = ⟨J2 e1, e1⟩ = 0.
        let p = pure_state(&basis_vector(2, 0));
        let v = semi_inner(&j2(), &id, &p).unwrap();
        assert!(v.norm() < 1e-14);

        // Cross-check against the cyclic trace identity tr(X Y† P).
        let y = j2();
        let p = pure_state(&[c(0.6, 0.2), c(0.0, 0.77)]);
        let direct = x
            .mul(&y.adjoint())
            .unwrap()
            .mul(p.matrix())
            .unwrap()
            .trace();
        let semi = semi_inner(&x, &y, &p).unwrap();
        assert!((semi - direct).norm() < 1e-12);
    }

    #[test]
    fn dragomir_bound_examples() {
        let p = DensityOperator::maximally_mixed(2);
        let a = j2();
        let bound = dragomir_bound(&a, &a, &p, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let lhs = v_p(&a, &a, &p).unwrap().norm();
        assert!(lhs <= bound.middle + 1e-12);
        assert!(bound.middle <= bound.outer + 1e-12);

        // Scalar A trivializes the chain.
        let alpha = ComplexMatrix::identity(2).scale(c(0.4, 0.9));
        let bound = dragomir_bound(&alpha, &a, &p, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let lhs = v_p(&alpha, &a, &p).unwrap().norm();
        assert!(lhs < 1e-13);
        assert!(bound.middle >= -1e-12);
    }

    #[test]
    fn dragomir_bound_random_sweep() {
        let mut rng = crate::optim::rng_for(3, 0xd7a9);
        for trial in 0..60 {
            let n = 2 + trial % 3;
            let gen = |rng: &mut rand_chacha::ChaCha8Rng| {
                let data: Vec<Complex64> = (0..n * n)
                    .map(|_| crate::optim::complex_gaussian(rng))
                    .collect();
                ComplexMatrix::new(n, data).unwrap()
            };
            let a = gen(&mut rng);
            let t = gen(&mut rng);
            let g = gen(&mut rng);
            let gram = g.mul(&g.adjoint()).unwrap();
            let tr = gram.trace().re;
            let p = DensityOperator::new(gram.scale(c(1.0 / tr, 0.0))).unwrap();
            let lambda = crate::optim::complex_gaussian(&mut rng);
            let mu = crate::optim::complex_gaussian(&mut rng);
            let bound = dragomir_bound(&a, &t, &p, lambda, mu).unwrap();
            let lhs = v_p(&a, &t, &p).unwrap().norm();
            assert!(lhs <= bound.middle + 1e-9, "lhs {lhs} middle {}", bound.middle);
            assert!(
                bound.middle <= bound.outer + 1e-9,
                "middle {} outer {}",
                bound.middle,
                bound.outer
            );
        }
    }
}
