//! Property suites for the chain registry: every link holds on mixed
//! families, the h factor is affine and correctly pinned at both ends, and
//! holds-flags are scale covariant.

use gruss_core::bounds::{
    chain_by_name, BoundChain, ChainInput, NormaloidChain, PairAnalysis, RefinedChain,
    RenaudChain, TheoremChain,
};
use gruss_core::linalg::{DensityOperator, OptimizerSettings};
use gruss_core::matrix::ComplexMatrix;
use gruss_core::zoo::{generate, Family, Sample, ZooSpec};
use num_complex::Complex64;
use rayon::prelude::*;

fn random_matrix(family: Family, dim: usize, seed: u64) -> ComplexMatrix {
    generate(&ZooSpec::new(family, dim, seed)).unwrap().into_matrix()
}

fn random_state(dim: usize, seed: u64) -> DensityOperator {
    let spec = ZooSpec::new(
        if seed % 2 == 0 {
            Family::RankOneState
        } else {
            Family::DensityFull
        },
        dim,
        seed,
    );
    match generate(&spec).unwrap() {
        Sample::State(p) => p,
        Sample::Matrix(_) => unreachable!(),
    }
}

fn jordan_perturbed(dim: usize, seed: u64) -> ComplexMatrix {
    let j = random_matrix(Family::Jordan, dim, seed);
    let g = random_matrix(Family::Ginibre, dim, seed ^ 0x77);
    j.add(&g.scale(Complex64::new(0.05, 0.0))).unwrap()
}

fn settings_for(seed: u64) -> OptimizerSettings {
    let mut s = OptimizerSettings::default();
    s.seed = seed;
    s
}

#[test]
fn refined_chain_holds_on_mixed_families() {
    let failures: Vec<String> = (0u64..300)
        .into_par_iter()
        .filter_map(|trial| {
            let dim = 2 + (trial % 5) as usize;
            let a = match trial % 4 {
                0 => random_matrix(Family::Ginibre, dim, 200_000 + trial),
                1 => random_matrix(Family::Hermitian, dim, 200_000 + trial),
                2 => random_matrix(Family::Normal, dim, 200_000 + trial),
                _ => jordan_perturbed(dim, 200_000 + trial),
            };
            let t = match trial % 3 {
                0 => random_matrix(Family::Ginibre, dim, 201_000 + trial),
                1 => random_matrix(Family::Hermitian, dim, 201_000 + trial),
                _ => jordan_perturbed(dim, 201_000 + trial),
            };
            let p = random_state(dim, 202_000 + trial);
            let settings = settings_for(trial);
            let ctx = PairAnalysis::new(&a, &t, &p, &settings).unwrap();
            let report = RefinedChain::report(&ctx, &settings);
            if report.all_hold() {
                None
            } else {
                Some(format!("trial {trial}:\n{}", report.render_table()))
            }
        })
        .collect();
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(3)]);
}

#[test]
fn theorem_grid_and_h_shape() {
    let failures: Vec<String> = (0u64..120)
        .into_par_iter()
        .filter_map(|trial| {
            let dim = 2 + (trial % 4) as usize;
            let a = if trial % 2 == 0 {
                random_matrix(Family::Ginibre, dim, 210_000 + trial)
            } else {
                jordan_perturbed(dim, 210_000 + trial)
            };
            let t = random_matrix(Family::Normal, dim, 211_000 + trial);
            let p = random_state(dim, 212_000 + trial);
            let settings = settings_for(trial);
            let ctx = PairAnalysis::new(&a, &t, &p, &settings).unwrap();
            let mut problems = Vec::new();

            // h is affine in λ: h_0 = 2 exactly, endpoints pin the middle.
            let h0 = ctx.h_lambda_a(0.0).unwrap();
            let h1 = ctx.h_lambda_a(1.0).unwrap();
            if h0 != 2.0 {
                problems.push(format!("h_0 = {h0}, expected exactly 2"));
            }
            if !(1.0 - 1e-9..=2.0 + 1e-9).contains(&h1) {
                problems.push(format!("h_1 = {h1} out of [1, 2]"));
            }
            for k in 0..=10 {
                let lam = k as f64 / 10.0;
                let h = ctx.h_lambda_a(lam).unwrap();
                let interp = h0 + (h1 - h0) * lam;
                if (h - interp).abs() > 1e-12 * (1.0 + h.abs()) {
                    problems.push(format!("h not affine at λ={lam}"));
                }
                // Nonincreasing in λ since h1 ≤ 2 = h0.
                if h > h0 + 1e-12 {
                    problems.push(format!("h increased at λ={lam}"));
                }
            }

            // Full chain on the (λ, μ) grid, k ∈ [1, 4].
            for i in 0..=4 {
                for j in 0..=4 {
                    let (lam, mu) = (i as f64 / 4.0, j as f64 / 4.0);
                    match TheoremChain::report(&ctx, lam, mu, &settings) {
                        Ok(report) => {
                            let k = report.meta.k_factor.unwrap();
                            if !(1.0 - 1e-9..=4.0 + 1e-9).contains(&k) {
                                problems.push(format!("k = {k} at ({lam}, {mu})"));
                            }
                            if !report.all_hold() {
                                problems.push(format!(
                                    "chain violated at ({lam}, {mu}):\n{}",
                                    report.render_table()
                                ));
                            }
                        }
                        Err(e) => problems.push(format!("({lam}, {mu}): {e}")),
                    }
                }
            }

            // λ = μ = 0 reproduces the 4·R_A·R_T bound.
            let theorem0 = TheoremChain::report(&ctx, 0.0, 0.0, &settings).unwrap();
            let renaud = RenaudChain::report(&ctx, &settings);
            let gap = (theorem0.terms.last().unwrap().value
                - renaud.terms.last().unwrap().value)
                .abs();
            if gap > 1e-10 * (1.0 + ctx.scale()) {
                problems.push(format!("θ(0,0) vs renaud gap {gap:.3e}"));
            }

            (!problems.is_empty()).then(|| format!("trial {trial}: {}", problems.join(" | ")))
        })
        .collect();
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(3)]);
}

#[test]
fn normal_pairs_equality_link() {
    let failures: Vec<String> = (0u64..150)
        .into_par_iter()
        .filter_map(|trial| {
            let dim = 2 + (trial % 4) as usize;
            let a = random_matrix(Family::Normal, dim, 220_000 + trial);
            let t = random_matrix(Family::Normal, dim, 221_000 + trial);
            let p = random_state(dim, 222_000 + trial);
            let settings = settings_for(trial);
            let ctx = PairAnalysis::new(&a, &t, &p, &settings).unwrap();
            let dist_product = ctx.dist_a.distance * ctx.dist_t.distance;
            let spectral_product = ctx.spectrum_radius_a * ctx.spectrum_radius_t;
            let gap = (dist_product - spectral_product).abs();
            (gap > 1e-6 * (1.0 + ctx.scale()))
                .then(|| format!("trial {trial}: equality gap {gap:.3e}"))
        })
        .collect();
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(5)]);
}

#[test]
fn normaloid_grid_on_hermitian_and_unitary_pairs() {
    let failures: Vec<String> = (0u64..80)
        .into_par_iter()
        .filter_map(|trial| {
            let dim = 2 + (trial % 4) as usize;
            let family = if trial % 2 == 0 {
                Family::Hermitian
            } else {
                Family::HaarUnitary
            };
            let a = random_matrix(family, dim, 230_000 + trial);
            let t = random_matrix(family, dim, 231_000 + trial);
            let p = random_state(dim, 232_000 + trial);
            let settings = settings_for(trial);
            let ctx = PairAnalysis::new(&a, &t, &p, &settings).unwrap();
            for i in 0..=4 {
                for j in 0..=4 {
                    let (lam, mu) = (i as f64 / 4.0, j as f64 / 4.0);
                    match NormaloidChain::report(&ctx, lam, mu, &settings) {
                        Ok(report) => {
                            if !report.all_hold() {
                                return Some(format!(
                                    "trial {trial} ({lam}, {mu}):\n{}",
                                    report.render_table()
                                ));
                            }
                        }
                        Err(e) => return Some(format!("trial {trial} ({lam}, {mu}): {e}")),
                    }
                }
            }
            None
        })
        .collect();
    assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(3)]);
}

#[test]
fn holds_flags_are_scale_invariant() {
    let settings = OptimizerSettings::default();
    for trial in 0u64..40 {
        let dim = 2 + (trial % 3) as usize;
        let a = random_matrix(Family::Ginibre, dim, 240_000 + trial);
        let t = random_matrix(Family::Ginibre, dim, 241_000 + trial);
        let p = random_state(dim, 242_000 + trial);
        let gamma = Complex64::new(0.0, -3.7);
        let delta = Complex64::new(2.4, 1.1);

        let base = PairAnalysis::new(&a, &t, &p, &settings).unwrap();
        let scaled =
            PairAnalysis::new(&a.scale(gamma), &t.scale(delta), &p, &settings).unwrap();
        let report_base = RefinedChain::report(&base, &settings);
        let report_scaled = RefinedChain::report(&scaled, &settings);
        let factor = gamma.norm() * delta.norm();
        for (x, y) in report_base.terms.iter().zip(&report_scaled.terms) {
            let expect = x.value * factor;
            // Complex scaling rotates W(·), so the θ grid samples the
            // boundary elsewhere; disc-center terms match only to the
            // angular sampling resolution.
            assert!(
                (y.value - expect).abs() <= 1e-3 * (1.0 + expect.abs()),
                "trial {trial}: term {} scaled {} vs expected {}",
                x.label,
                y.value,
                expect
            );
        }
        assert_eq!(report_base.holds, report_scaled.holds, "trial {trial}");
    }
}

#[test]
fn registry_names_reach_every_chain() {
    let a = random_matrix(Family::Hermitian, 3, 7);
    let p = DensityOperator::maximally_mixed(3);
    let settings = OptimizerSettings::default();
    for name in ["renaud", "refined", "normal", "transloid", "theorem", "normaloid"] {
        let chain = chain_by_name(name).unwrap();
        let input = ChainInput {
            a: &a,
            t: &a,
            state: &p,
            lambda: 0.5,
            mu: 0.5,
        };
        let report = chain.evaluate(&input, &settings).unwrap();
        assert!(report.all_hold(), "{name}:\n{}", report.render_table());
        assert_eq!(report.meta.chain, name);
        assert!(!chain.describe().is_empty());
    }
}
