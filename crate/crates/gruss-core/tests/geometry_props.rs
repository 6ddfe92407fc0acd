//! Property suites for the spectral geometry: the r ≤ w ≤ ‖·‖ ≤ 2w chain,
//! normal-matrix collapses, and disc equivariance.

use gruss_core::geometry::{
    numerical_radius, numerical_range_disc, smallest_enclosing_disc, spectral_radius, spectrum,
};
use gruss_core::linalg::{spectral_norm, OptimizerSettings};
use gruss_core::matrix::ComplexMatrix;
use gruss_core::zoo::{generate, Family, ZooSpec};
use num_complex::Complex64;
use rayon::prelude::*;

fn random_matrix(family: Family, dim: usize, seed: u64) -> ComplexMatrix {
    generate(&ZooSpec::new(family, dim, seed)).unwrap().into_matrix()
}

fn fast_settings() -> OptimizerSettings {
    OptimizerSettings {
        grid_angles: 96,
        ..OptimizerSettings::default()
    }
}

#[test]
fn radius_chain_on_ten_thousand_matrices() {
    // r(A) ≤ w(A) ≤ ‖A‖ ≤ 2·w(A), mixed families, dims 2–8.
    let families = [Family::Ginibre, Family::Hermitian, Family::Normal];
    let failures: Vec<String> = (0u64..10_000)
        .into_par_iter()
        .filter_map(|trial| {
            let dim = 2 + (trial % 7) as usize;
            let family = families[(trial / 7 % 3) as usize];
            let a = random_matrix(family, dim, 400_000 + trial);
            let settings = fast_settings();
            let r = spectral_radius(&a).unwrap();
            let w = numerical_radius(&a, &settings).unwrap();
            let norm = spectral_norm(&a).unwrap();
            let tol = 1e-6 * (1.0 + norm);
            if r <= w + tol && w <= norm + tol && norm <= 2.0 * w + tol {
                None
            } else {
                Some(format!(
                    "trial {trial} ({family:?}, dim {dim}): r {r} w {w} norm {norm}"
                ))
            }
        })
        .collect();
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(5)]);
}

#[test]
fn normal_matrices_collapse_w_to_r() {
    let failures: Vec<String> = (0u64..300)
        .into_par_iter()
        .filter_map(|trial| {
            let dim = 2 + (trial % 5) as usize;
            let a = random_matrix(Family::Normal, dim, 52_000 + trial);
            let settings = OptimizerSettings::default();
            let w = numerical_radius(&a, &settings).unwrap();
            let r = spectral_radius(&a).unwrap();
            let disc = numerical_range_disc(&a, &settings).unwrap();
            let sed = smallest_enclosing_disc(&spectrum(&a).unwrap()).unwrap();
            let mut problems = Vec::new();
            if (w - r).abs() > 1e-6 {
                problems.push(format!("w {w} vs r {r}"));
            }
            if (disc.radius - sed.radius).abs() > 1e-6 {
                problems.push(format!("disc {} vs spectrum disc {}", disc.radius, sed.radius));
            }
            if problems.is_empty() {
                None
            } else {
                Some(format!("trial {trial}: {}", problems.join("; ")))
            }
        })
        .collect();
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(5)]);
}

#[test]
fn disc_translation_equivariance() {
    let settings = fast_settings();
    for trial in 0u64..100 {
        let dim = 2 + (trial % 5) as usize;
        let a = random_matrix(Family::Ginibre, dim, 61_000 + trial);
        let beta = Complex64::new(
            ((trial % 17) as f64 - 8.0) / 3.0,
            ((trial % 13) as f64 - 6.0) / 2.5,
        );
        let base = numerical_range_disc(&a, &settings).unwrap();
        let shifted = numerical_range_disc(&a.minus_scalar(beta), &settings).unwrap();
        let scale = 1.0 + spectral_norm(&a).unwrap();
        assert!(
            (shifted.center - (base.center - beta)).norm() <= 1e-8 * scale,
            "trial {trial}: center moved {} vs {}",
            shifted.center,
            base.center - beta
        );
        assert!(
            (shifted.radius - base.radius).abs() <= 1e-8 * scale,
            "trial {trial}: radius {} vs {}",
            shifted.radius,
            base.radius
        );
    }
}

#[test]
fn boundary_points_lie_in_sampled_range_hull() {
    // Membership: random ⟨Ax, x⟩ draws stay inside the reported disc.
    let settings = OptimizerSettings::default();
    for trial in 0u64..40 {
        let dim = 2 + (trial % 5) as usize;
        let a = random_matrix(Family::Ginibre, dim, 71_000 + trial);
        let disc = numerical_range_disc(&a, &settings).unwrap();
        let scale = 1.0 + spectral_norm(&a).unwrap();
        for z in gruss_core::geometry::sample_range_points(&a, 500, 71_000 + trial) {
            assert!(
                disc.contains(z, 1e-8 * scale),
                "trial {trial}: point {z} outside disc (c {}, r {})",
                disc.center,
                disc.radius
            );
        }
    }
}
