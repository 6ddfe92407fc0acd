//! Property suites for the dense kernels: eigendecomposition residuals,
//! norm identities, Schatten monotonicity, and state validation.

use gruss_core::linalg::{
    abs_value, hermitian_eig, hermitian_function, hs_inner, schatten_norm, spectral_norm,
    DensityOperator,
};
use gruss_core::matrix::ComplexMatrix;
use gruss_core::zoo::{generate, Family, ZooSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn random_matrix(family: Family, dim: usize, seed: u64) -> ComplexMatrix {
    generate(&ZooSpec::new(family, dim, seed)).unwrap().into_matrix()
}

#[test]
fn hermitian_reconstruction_dims_2_to_10() {
    for dim in 2..=10 {
        for trial in 0..25 {
            let h = random_matrix(Family::Hermitian, dim, 1000 * dim as u64 + trial);
            let eig = hermitian_eig(&h).unwrap();
            let rebuilt = hermitian_function(&eig, |l| l);
            let err = rebuilt.sub(&h).unwrap().frobenius_norm();
            let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
            assert!(err <= 1e-9 * scale, "dim {dim} trial {trial}: {err:.3e}");
            // Ascending order.
            for w in eig.values.windows(2) {
                assert!(w[0] <= w[1] + 1e-14);
            }
        }
    }
}

#[test]
fn norm_equals_adjoint_and_abs_value_norm() {
    for trial in 0..60 {
        let dim = 2 + (trial % 5) as usize;
        let a = random_matrix(Family::Ginibre, dim, 7_000 + trial);
        let n1 = spectral_norm(&a).unwrap();
        let n2 = spectral_norm(&a.adjoint()).unwrap();
        let n3 = spectral_norm(&abs_value(&a).unwrap()).unwrap();
        let scale = n1.max(1e-300);
        assert!((n1 - n2).abs() <= 1e-10 * scale, "‖A‖ {n1} vs ‖A*‖ {n2}");
        assert!((n1 - n3).abs() <= 1e-10 * scale, "‖A‖ {n1} vs ‖|A|‖ {n3}");
    }
}

#[test]
fn schatten_monotone_in_p() {
    for trial in 0..40 {
        let dim = 2 + (trial % 4) as usize;
        let a = random_matrix(Family::Ginibre, dim, 9_000 + trial);
        let ps = [1.0, 1.5, 2.0, 3.0, 4.0];
        let norms: Vec<f64> = ps.iter().map(|&p| schatten_norm(&a, p).unwrap()).collect();
        for w in norms.windows(2) {
            assert!(w[0] >= w[1] - 1e-10 * (1.0 + w[0]), "{:?}", norms);
        }
    }
}

#[test]
fn hs_cauchy_schwarz() {
    for trial in 0..60 {
        let dim = 2 + (trial % 5) as usize;
        let a = random_matrix(Family::Ginibre, dim, 11_000 + trial);
        let b = random_matrix(Family::Ginibre, dim, 12_000 + trial);
        let lhs = hs_inner(&a, &b).unwrap().norm();
        let rhs = schatten_norm(&a, 2.0).unwrap() * schatten_norm(&b, 2.0).unwrap();
        assert!(lhs <= rhs + 1e-10, "trial {trial}: {lhs} vs {rhs}");
    }
}

#[test]
fn density_rejections_from_spec() {
    // Hermitian with min eigenvalue −1e−3 (trace fixed to 1).
    let bad = ComplexMatrix::from_diag(&[
        Complex64::new(1.001, 0.0),
        Complex64::new(-1e-3, 0.0),
    ]);
    assert!(DensityOperator::new(bad).is_err());
    // PSD with trace 2.
    let bad = ComplexMatrix::identity(2);
    assert!(DensityOperator::new(bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eig_residuals_on_arbitrary_hermitian(
        entries in prop::collection::vec(-5.0f64..5.0, 16),
        imag in prop::collection::vec(-5.0f64..5.0, 16),
    ) {
        let n = 4;
        let data: Vec<Complex64> = entries
            .iter()
            .zip(&imag)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        let g = ComplexMatrix::new(n, data).unwrap();
        let h = g.hermitian_part();
        let eig = hermitian_eig(&h).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        for k in 0..n {
            let x = eig.column(k);
            let hx = h.matvec(&x);
            let res: f64 = hx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b * eig.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            prop_assert!(res <= 1e-10 * scale);
        }
    }

    #[test]
    fn hs_inner_conjugate_symmetry(
        re_a in prop::collection::vec(-3.0f64..3.0, 9),
        im_a in prop::collection::vec(-3.0f64..3.0, 9),
        re_b in prop::collection::vec(-3.0f64..3.0, 9),
        im_b in prop::collection::vec(-3.0f64..3.0, 9),
    ) {
        let pack = |re: &[f64], im: &[f64]| {
            let data: Vec<Complex64> = re
                .iter()
                .zip(im)
                .map(|(&x, &y)| Complex64::new(x, y))
                .collect();
            ComplexMatrix::new(3, data).unwrap()
        };
        let a = pack(&re_a, &im_a);
        let b = pack(&re_b, &im_b);
        let fwd = hs_inner(&a, &b).unwrap();
        let bwd = hs_inner(&b, &a).unwrap();
        prop_assert!((fwd - bwd.conj()).norm() < 1e-12);
    }
}
