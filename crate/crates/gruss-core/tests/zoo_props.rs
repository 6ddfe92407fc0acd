//! Family invariants over a thousand samples each, plus determinism.

use gruss_core::linalg::hermitian_eig;
use gruss_core::matrix::ComplexMatrix;
use gruss_core::zoo::{generate, Family, Sample, ZooSpec};
use rayon::prelude::*;

#[test]
fn thousand_samples_per_family_pass_invariants() {
    let failures: Vec<String> = (0u64..1000)
        .into_par_iter()
        .filter_map(|seed| {
            let dim = 2 + (seed % 5) as usize;
            let mut problems = Vec::new();

            let u = generate(&ZooSpec::new(Family::HaarUnitary, dim, seed))
                .unwrap()
                .into_matrix();
            let gram = u.mul(&u.adjoint()).unwrap();
            let unitary_err = gram
                .sub(&ComplexMatrix::identity(dim))
                .unwrap()
                .frobenius_norm();
            if unitary_err > 1e-10 {
                problems.push(format!("haar: ‖UU*−I‖ = {unitary_err:.3e}"));
            }

            let normal = generate(&ZooSpec::new(Family::Normal, dim, seed))
                .unwrap()
                .into_matrix();
            if normal.normality_residual() > 1e-10 {
                problems.push(format!(
                    "normal: residual {:.3e}",
                    normal.normality_residual()
                ));
            }

            for family in [Family::DensityFull, Family::RankOneState] {
                let Sample::State(p) = generate(&ZooSpec::new(family, dim, seed)).unwrap()
                else {
                    problems.push(format!("{family:?}: produced a plain matrix"));
                    continue;
                };
                if (p.matrix().trace().re - 1.0).abs() > 1e-12 {
                    problems.push(format!("{family:?}: trace off"));
                }
            }

            let mut rank_spec = ZooSpec::new(Family::DensityRankK, dim, seed);
            let k = 1 + (seed as usize) % dim;
            rank_spec.rank = Some(k);
            let Sample::State(p) = generate(&rank_spec).unwrap() else {
                unreachable!()
            };
            let eig = hermitian_eig(p.matrix()).unwrap();
            let nonzero = eig.values.iter().filter(|v| **v > 1e-9).count();
            if nonzero != k {
                problems.push(format!("rank_k: rank {nonzero} vs requested {k}"));
            }

            let pd = generate(&ZooSpec::new(Family::HermitianPd, dim, seed))
                .unwrap()
                .into_matrix();
            let min = hermitian_eig(&pd).unwrap().min();
            if min < 0.05 - 1e-10 {
                problems.push(format!("hermitian_pd: min eigenvalue {min}"));
            }

            (!problems.is_empty()).then(|| format!("seed {seed}: {}", problems.join("; ")))
        })
        .collect();
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(5)]);
}

#[test]
fn generation_is_bit_deterministic() {
    for family in [
        Family::Ginibre,
        Family::Hermitian,
        Family::HaarUnitary,
        Family::Normal,
        Family::DensityFull,
        Family::DensityRankK,
        Family::RankOneState,
        Family::Jordan,
        Family::HermitianPd,
    ] {
        for seed in [0u64, 1, 77, u64::MAX] {
            let spec = ZooSpec::new(family, 5, seed);
            let a = generate(&spec).unwrap().into_matrix();
            let b = generate(&spec).unwrap().into_matrix();
            assert_eq!(a.data(), b.data(), "{family:?} seed {seed}");
        }
    }
}
