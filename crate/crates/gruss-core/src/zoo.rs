//! Seeded matrix generators and named fixtures for the test campaigns.
//! Same spec in, bit-identical matrix out.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DensityOperator;
use crate::matrix::ComplexMatrix;
use crate::optim::{complex_gaussian, mix_seed, random_unit_vector, rng_for};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ginibre,
    Hermitian,
    HaarUnitary,
    Normal,
    DensityFull,
    DensityRankK,
    RankOneState,
    Jordan,
    HermitianPd,
    Fixture,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Ginibre => "ginibre",
            Family::Hermitian => "hermitian",
            Family::HaarUnitary => "haar_unitary",
            Family::Normal => "normal",
            Family::DensityFull => "density_full",
            Family::DensityRankK => "density_rank_k",
            Family::RankOneState => "rank_one_state",
            Family::Jordan => "jordan",
            Family::HermitianPd => "hermitian_pd",
            Family::Fixture => "fixture",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "ginibre" => Family::Ginibre,
            "hermitian" => Family::Hermitian,
            "haar_unitary" => Family::HaarUnitary,
            "normal" => Family::Normal,
            "density_full" => Family::DensityFull,
            "density_rank_k" => Family::DensityRankK,
            "rank_one_state" => Family::RankOneState,
            "jordan" => Family::Jordan,
            "hermitian_pd" => Family::HermitianPd,
            "fixture" => Family::Fixture,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown family `{other}`"
                )))
            }
        })
    }

    fn salt(&self) -> u64 {
        match self {
            Family::Ginibre => 0x01,
            Family::Hermitian => 0x02,
            Family::HaarUnitary => 0x03,
            Family::Normal => 0x04,
            Family::DensityFull => 0x05,
            Family::DensityRankK => 0x06,
            Family::RankOneState => 0x07,
            Family::Jordan => 0x08,
            Family::HermitianPd => 0x09,
            Family::Fixture => 0x0a,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZooSpec {
    pub family: Family,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture_name: Option<String>,
}

impl ZooSpec {
    pub fn new(family: Family, dim: usize, seed: u64) -> Self {
        Self {
            family,
            dim,
            rank: None,
            seed,
            fixture_name: None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Sample {
    Matrix(ComplexMatrix),
    State(DensityOperator),
}

impl Sample {
    pub fn into_matrix(self) -> ComplexMatrix {
        match self {
            Sample::Matrix(m) => m,
            Sample::State(p) => p.matrix().clone(),
        }
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        match self {
            Sample::Matrix(m) => m,
            Sample::State(p) => p.matrix(),
        }
    }
}

fn ginibre(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(n, data).expect("finite gaussian entries")
}

/// QR by twice-iterated modified Gram–Schmidt; returns Q with the phase of
/// each R diagonal folded in, the standard Haar construction from Ginibre.
fn haar_unitary(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> ComplexMatrix {
    let g = ginibre(n, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| g[(i, j)]).collect())
        .collect();
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj = crate::matrix::vec_inner(&cols[j], &cols[k]);
                let ck = cols[k].clone();
                for (x, y) in cols[j].iter_mut().zip(&ck) {
                    *x -= proj * y;
                }
            }
        }
        // Diagonal R entry before normalization carries the phase to strip.
        let r_jj = crate::matrix::vec_norm(&cols[j]);
        let pivot = if r_jj > 0.0 {
            let raw = crate::matrix::vec_inner(&g_column(&g, j), &cols[j]) / r_jj;
            if raw.norm() > 0.0 {
                raw / raw.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        } else {
            Complex64::new(1.0, 0.0)
        };
        phases[j] = pivot;
        for x in cols[j].iter_mut() {
            *x /= r_jj.max(f64::MIN_POSITIVE);
        }
    }
    let mut u = ComplexMatrix::zeros(n);
    for j in 0..n {
        for i in 0..n {
            u[(i, j)] = cols[j][i] * phases[j];
        }
    }
    u
}

fn g_column(g: &ComplexMatrix, j: usize) -> Vec<Complex64> {
    (0..g.dim()).map(|i| g[(i, j)]).collect()
}

fn conjugate_by_unitary(u: &ComplexMatrix, diag: &[Complex64]) -> ComplexMatrix {
    let d = ComplexMatrix::from_diag(diag);
    u.mul(&d).expect("dim").mul(&u.adjoint()).expect("dim")
}

fn density_from_factor(g: &ComplexMatrix) -> Result<DensityOperator> {
    let gram = g.mul(&g.adjoint())?;
    let tr = gram.trace().re;
    if tr <= f64::MIN_POSITIVE {
        return Err(Error::InvalidParameter("degenerate density factor".into()));
    }
    DensityOperator::new(gram.scale(Complex64::new(1.0 / tr, 0.0)))
}

fn rectangular_gaussian(
    n: usize,
    k: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> ComplexMatrix {
    // Stored as n×n with the last n−k columns zero; only G·G* is consumed.
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..k {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

/// Generate the sample described by the spec; bit-identical for equal specs.
pub fn generate(spec: &ZooSpec) -> Result<Sample> {
    if spec.dim == 0 {
        return Err(Error::InvalidParameter("dim must be ≥ 1".into()));
    }
    if let Some(rank) = spec.rank {
        if rank > spec.dim || rank == 0 {
            return Err(Error::RankExceedsDim {
                rank,
                dim: spec.dim,
            });
        }
    }
    let n = spec.dim;
    let mut rng = rng_for(
        mix_seed(spec.seed, spec.family.salt()),
        n as u64 ^ (spec.rank.unwrap_or(0) as u64) << 32,
    );
    Ok(match spec.family {
        Family::Ginibre => Sample::Matrix(ginibre(n, &mut rng)),
        Family::Hermitian => {
            let g = ginibre(n, &mut rng);
            Sample::Matrix(g.hermitian_part())
        }
        Family::HaarUnitary => Sample::Matrix(haar_unitary(n, &mut rng)),
        Family::Normal => {
            let diag: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
            let u = haar_unitary(n, &mut rng);
            Sample::Matrix(conjugate_by_unitary(&u, &diag))
        }
        Family::DensityFull => Sample::State(density_from_factor(&ginibre(n, &mut rng))?),
        Family::DensityRankK => {
            let k = spec.rank.unwrap_or(1.max(n / 2));
            Sample::State(density_from_factor(&rectangular_gaussian(n, k, &mut rng))?)
        }
        Family::RankOneState => {
            let x = random_unit_vector(n, &mut rng);
            Sample::State(DensityOperator::from_unit_vector(&x)?)
        }
        Family::Jordan => {
            // Nilpotent Jordan block: ones on the superdiagonal.
            let mut m = ComplexMatrix::zeros(n);
            for i in 0..n - 1 {
                m[(i, i + 1)] = Complex64::new(1.0, 0.0);
            }
            Sample::Matrix(m)
        }
        Family::HermitianPd => {
            let g = ginibre(n, &mut rng);
            let gram = g.mul(&g.adjoint())?.scale(Complex64::new(1.0 / n as f64, 0.0));
            let mut m = gram;
            for i in 0..n {
                m[(i, i)] += Complex64::new(0.05, 0.0);
            }
            Sample::Matrix(m)
        }
        Family::Fixture => {
            let name = spec.fixture_name.as_deref().ok_or_else(|| {
                Error::InvalidParameter("fixture family requires fixture_name".into())
            })?;
            Sample::Matrix(fixture(name)?)
        }
    })
}

/// Named fixtures used across the suites. `kantorovich_tight` pairs with the
/// unit vector (1,1)/√2.
pub fn fixture(name: &str) -> Result<ComplexMatrix> {
    let c = Complex64::new;
    Ok(match name {
        "diag_1_3" => ComplexMatrix::from_diag(&[c(1.0, 0.0), c(3.0, 0.0)]),
        "jordan2" => {
            let mut m = ComplexMatrix::zeros(2);
            m[(0, 1)] = c(1.0, 0.0);
            m
        }
        "fourth_roots" => ComplexMatrix::from_diag(&[
            c(1.0, 0.0),
            c(0.0, 1.0),
            c(-1.0, 0.0),
            c(0.0, -1.0),
        ]),
        "kantorovich_tight" => ComplexMatrix::from_diag(&[c(1.0, 0.0), c(4.0, 0.0)]),
        "scalar_alpha" => ComplexMatrix::identity(2).scale(c(0.7, -1.1)),
        "three_point" => ComplexMatrix::from_diag(&[c(0.0, 0.0), c(3.0, 0.0), c(0.0, 4.0)]),
        other => return Err(Error::UnknownFixture(other.to_string())),
    })
}

pub fn fixture_names() -> &'static [&'static str] {
    &[
        "diag_1_3",
        "jordan2",
        "fourth_roots",
        "kantorovich_tight",
        "scalar_alpha",
        "three_point",
    ]
}

pub fn fixtures() -> Vec<(&'static str, ComplexMatrix)> {
    fixture_names()
        .iter()
        .map(|name| (*name, fixture(name).expect("known fixture")))
        .collect()
}
