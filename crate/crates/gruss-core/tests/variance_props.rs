//! Property suites for the trace functionals: bilinearity, shift invariance,
//! the boundedness of V_P by the product of scalar distances, identity
//! agreement, and domination of random states by the rank-one maximum.

use gruss_core::distance::dist_to_scalars;
use gruss_core::linalg::{DensityOperator, OptimizerSettings};
use gruss_core::matrix::ComplexMatrix;
use gruss_core::variance::{audenaert_max, v_p, variance, variance_identities};
use gruss_core::zoo::{generate, Family, Sample, ZooSpec};
use num_complex::Complex64;
use rayon::prelude::*;

fn random_matrix(family: Family, dim: usize, seed: u64) -> ComplexMatrix {
    generate(&ZooSpec::new(family, dim, seed)).unwrap().into_matrix()
}

fn random_state(dim: usize, seed: u64) -> DensityOperator {
    let family = match seed % 3 {
        0 => Family::RankOneState,
        1 => Family::DensityFull,
        _ => Family::DensityRankK,
    };
    let mut spec = ZooSpec::new(family, dim, seed);
    if family == Family::DensityRankK {
        spec.rank = Some(1 + (seed as usize / 3) % dim);
    }
    match generate(&spec).unwrap() {
        Sample::State(p) => p,
        Sample::Matrix(_) => unreachable!("density families produce states"),
    }
}

#[test]
fn v_p_is_bilinear() {
    for trial in 0u64..60 {
        let dim = 2 + (trial % 4) as usize;
        let a1 = random_matrix(Family::Ginibre, dim, 140_000 + trial);
        let a2 = random_matrix(Family::Ginibre, dim, 141_000 + trial);
        let t = random_matrix(Family::Ginibre, dim, 142_000 + trial);
        let p = random_state(dim, 143_000 + trial);
        let alpha = Complex64::new(0.7, -1.2);
        let beta = Complex64::new(-0.4, 0.9);

        let combo = a1.scale(alpha).add(&a2.scale(beta)).unwrap();
        let lhs = v_p(&combo, &t, &p).unwrap();
        let rhs = alpha * v_p(&a1, &t, &p).unwrap() + beta * v_p(&a2, &t, &p).unwrap();
        assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()), "trial {trial} (A slot)");

        let combo_t = a1.scale(alpha).add(&a2.scale(beta)).unwrap();
        let lhs = v_p(&t, &combo_t, &p).unwrap();
        let rhs = alpha * v_p(&t, &a1, &p).unwrap() + beta * v_p(&t, &a2, &p).unwrap();
        assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()), "trial {trial} (T slot)");
    }
}

#[test]
fn v_p_shift_invariance() {
    for trial in 0u64..100 {
        let dim = 2 + (trial % 4) as usize;
        let a = random_matrix(Family::Ginibre, dim, 150_000 + trial);
        let t = random_matrix(Family::Ginibre, dim, 151_000 + trial);
        let p = random_state(dim, 152_000 + trial);
        let lambda = Complex64::new(1.3, -0.2);
        let mu = Complex64::new(-0.8, 2.1);
        let base = v_p(&a, &t, &p).unwrap();
        let shifted = v_p(&a.minus_scalar(lambda), &t.minus_scalar(mu), &p).unwrap();
        assert!(
            (base - shifted).norm() <= 1e-10 * (1.0 + base.norm()),
            "trial {trial}: {base} vs {shifted}"
        );
    }
}

#[test]
fn v_p_bounded_by_distance_product() {
    // 500 pairs × 20 states = 1e4 triples.
    let settings = OptimizerSettings::default();
    let failures: Vec<String> = (0u64..500)
        .into_par_iter()
        .filter_map(|pair| {
            let dim = 2 + (pair % 5) as usize;
            let family =
                [Family::Ginibre, Family::Hermitian, Family::Normal][(pair % 3) as usize];
            let a = random_matrix(family, dim, 160_000 + pair);
            let t = random_matrix(family, dim, 161_000 + pair);
            let bound = dist_to_scalars(&a, &settings).unwrap().distance
                * dist_to_scalars(&t, &settings).unwrap().distance;
            for s in 0..20u64 {
                let p = random_state(dim, 162_000 + pair * 20 + s);
                let value = v_p(&a, &t, &p).unwrap().norm();
                if value > bound + 1e-8 {
                    return Some(format!(
                        "pair {pair} state {s}: |V_P| {value} > dist·dist {bound}"
                    ));
                }
            }
            None
        })
        .collect();
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(5)]);
}

#[test]
fn identities_agree_with_variance() {
    for trial in 0u64..400 {
        let dim = 2 + (trial % 5) as usize;
        let a = random_matrix(Family::Ginibre, dim, 170_000 + trial);
        let p = random_state(dim, 171_000 + trial);
        let var = variance(&a, &p).unwrap();
        let ids = variance_identities(&a, &p).unwrap();
        let scale = 1.0 + var.abs();
        for (label, value) in [("v1", ids.v1), ("v2", ids.v2), ("v3", ids.v3)] {
            assert!(
                (value - var).abs() <= 1e-10 * scale,
                "trial {trial}: {label} {value} vs variance {var}"
            );
        }
        assert!(var >= -1e-10, "trial {trial}: negative variance {var}");
    }
}

#[test]
fn rank_one_maximum_dominates_random_states() {
    let settings = OptimizerSettings::default();
    let failures: Vec<String> = (0u64..50)
        .into_par_iter()
        .filter_map(|trial| {
            let dim = 2 + (trial % 5) as usize;
            let a = random_matrix(Family::Ginibre, dim, 180_000 + trial);
            let max = audenaert_max(&a, &settings).unwrap();
            for s in 0..1000u64 {
                let p = random_state(dim, 181_000 + trial * 1000 + s);
                let value = variance(&a, &p).unwrap();
                if value > max.value + 1e-8 {
                    return Some(format!(
                        "trial {trial} state {s}: variance {value} > rank-one max {}",
                        max.value
                    ));
                }
            }
            None
        })
        .collect();
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(5)]);
}
