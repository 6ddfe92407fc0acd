//! The inequality chains: every bound family lives behind the [`BoundChain`]
//! trait, registered by name and selected at runtime (CLI `--chain`, config).
//!
//! All six chains share one [`PairAnalysis`]: the trace functional, the
//! state-supremum estimate, both scalar distances, and both numerical-range
//! discs are computed once per (A, T, P) and reused across the (λ, μ) grid.

mod chains;
mod report;

pub use chains::{
    default_transloid_shifts, NormalChain, NormaloidChain, RefinedChain, RenaudChain,
    TheoremChain, TransloidChain,
};
pub use report::{BoundChainReport, ChainMeta, ChainTerm, EqualityLink};

use num_complex::Complex64;

use crate::distance::{dist_with_scan, ScalarDistance};
use crate::error::{Error, Result};
use crate::geometry::{
    disc_from_scan, is_normaloid, range_scan, smallest_enclosing_disc, spectrum, Disc,
    NormaloidCheck,
};
use crate::linalg::{hermitian_eig, hermitian_function, spectral_norm, OptimizerSettings};
use crate::linalg::DensityOperator;
use crate::matrix::{vec_inner, vec_norm, ComplexMatrix};
use crate::optim::{maximize_on_sphere, mix_seed, rng_for};
use crate::tol;
use crate::variance::v_p;

/// One evaluation request: the operator pair, the state, and the (λ, μ)
/// parameters used by the parametric chains.
#[derive(Clone, Copy)]
pub struct ChainInput<'a> {
    pub a: &'a ComplexMatrix,
    pub t: &'a ComplexMatrix,
    pub state: &'a DensityOperator,
    pub lambda: f64,
    pub mu: f64,
}

/// A named inequality chain.
pub trait BoundChain: Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn evaluate(
        &self,
        input: &ChainInput<'_>,
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport>;
}

static CHAINS: &[&dyn BoundChain] = &[
    &RenaudChain,
    &RefinedChain,
    &NormalChain,
    &TransloidChain,
    &TheoremChain,
    &NormaloidChain,
];

/// Every registered chain, in registry order.
pub fn chains() -> &'static [&'static dyn BoundChain] {
    CHAINS
}

pub fn chain_by_name(name: &str) -> Result<&'static dyn BoundChain> {
    CHAINS
        .iter()
        .copied()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::UnknownChain(name.to_string()))
}

/// Everything the chains consume, computed once per (A, T, P).
#[derive(Clone)]
pub struct PairAnalysis {
    pub dim: usize,
    pub v_p_abs: f64,
    /// Max |V_P̃| over a candidate state set that always includes P itself.
    pub sup_estimate: f64,
    pub dist_a: ScalarDistance,
    pub dist_t: ScalarDistance,
    /// Smallest disc (λ0, R_A) around W(A); radius equals w(A − λ0·Id).
    pub disc_a: Disc,
    pub disc_t: Disc,
    pub norm_a: f64,
    pub norm_t: f64,
    /// ‖A − λ0·Id‖ and ‖T − μ0·Id‖.
    pub norm_shift_a: f64,
    pub norm_shift_t: f64,
    /// ‖AA* − A*A‖ (spectral), the normality residual.
    pub normality_a: f64,
    pub normality_t: f64,
    pub normaloid_a: NormaloidCheck,
    pub normaloid_t: NormaloidCheck,
    /// Radii of the smallest discs containing the spectra.
    pub spectrum_radius_a: f64,
    pub spectrum_radius_t: f64,
    pub fingerprint_a: String,
    pub fingerprint_t: String,
    pub fingerprint_p: String,
    pub seed: u64,
}

impl PairAnalysis {
    pub fn new(
        a: &ComplexMatrix,
        t: &ComplexMatrix,
        state: &DensityOperator,
        settings: &OptimizerSettings,
    ) -> Result<Self> {
        settings.validate()?;
        if a.dim() != t.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: t.dim(),
            });
        }
        if a.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: state.dim(),
            });
        }
        let scan_a = range_scan(a, settings.grid_angles)?;
        let scan_t = range_scan(t, settings.grid_angles)?;
        let disc_a = disc_from_scan(a, &scan_a)?;
        let disc_t = disc_from_scan(t, &scan_t)?;
        let dist_a = dist_with_scan(a, &scan_a, settings)?;
        let dist_t = dist_with_scan(t, &scan_t, settings)?;

        let commutator = |m: &ComplexMatrix| -> Result<f64> {
            let adj = m.adjoint();
            spectral_norm(&m.mul(&adj)?.sub(&adj.mul(m)?)?)
        };

        Ok(Self {
            dim: a.dim(),
            v_p_abs: v_p(a, t, state)?.norm(),
            sup_estimate: sup_v_p_estimate(a, t, state, settings)?,
            norm_a: spectral_norm(a)?,
            norm_t: spectral_norm(t)?,
            norm_shift_a: spectral_norm(&a.minus_scalar(disc_a.center))?,
            norm_shift_t: spectral_norm(&t.minus_scalar(disc_t.center))?,
            normality_a: commutator(a)?,
            normality_t: commutator(t)?,
            normaloid_a: is_normaloid(&a.minus_scalar(disc_a.center), tol::NORMALITY_RESIDUAL.sqrt())?,
            normaloid_t: is_normaloid(&t.minus_scalar(disc_t.center), tol::NORMALITY_RESIDUAL.sqrt())?,
            spectrum_radius_a: smallest_enclosing_disc(&spectrum(a)?)?.radius,
            spectrum_radius_t: smallest_enclosing_disc(&spectrum(t)?)?.radius,
            fingerprint_a: a.fingerprint(),
            fingerprint_t: t.fingerprint(),
            fingerprint_p: state.matrix().fingerprint(),
            seed: settings.seed,
            dist_a,
            dist_t,
            disc_a,
            disc_t,
        })
    }

    /// Rebind to a different state: the pair-level quantities (distances,
    /// discs, norms, spectra) carry over, only the trace functional and the
    /// supremum estimate are recomputed.
    pub fn with_state(
        &self,
        a: &ComplexMatrix,
        t: &ComplexMatrix,
        state: &DensityOperator,
        settings: &OptimizerSettings,
    ) -> Result<Self> {
        if a.fingerprint() != self.fingerprint_a || t.fingerprint() != self.fingerprint_t {
            return Err(Error::InvalidParameter(
                "with_state requires the matrices this analysis was built from".into(),
            ));
        }
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: state.dim(),
            });
        }
        let mut out = self.clone();
        out.v_p_abs = v_p(a, t, state)?.norm();
        out.sup_estimate = sup_v_p_estimate(a, t, state, settings)?;
        out.fingerprint_p = state.matrix().fingerprint();
        out.seed = settings.seed;
        Ok(out)
    }

    /// ‖A‖·‖T‖, the relative-slack scale for link tolerances.
    pub fn scale(&self) -> f64 {
        self.norm_a * self.norm_t
    }

    /// h_λ(A) = 2(1−λ) + λ·‖A − c(A)·Id‖ / w(A − λ0·Id).
    pub fn h_lambda_a(&self, lambda: f64) -> Result<f64> {
        h_from_parts(self.dist_a.distance, self.disc_a.radius, lambda, self.dist_a.degenerate)
    }

    pub fn h_mu_t(&self, mu: f64) -> Result<f64> {
        h_from_parts(self.dist_t.distance, self.disc_t.radius, mu, self.dist_t.degenerate)
    }

    pub fn meta(&self, chain: &str, settings: &OptimizerSettings) -> ChainMeta {
        let _ = settings;
        ChainMeta {
            chain: chain.to_string(),
            dim: self.dim,
            seed: self.seed,
            fingerprint_a: self.fingerprint_a.clone(),
            fingerprint_t: self.fingerprint_t.clone(),
            fingerprint_p: self.fingerprint_p.clone(),
            tol_abs: tol::INEQUALITY_ABS,
            tol_rel: tol::INEQUALITY_REL,
            scale: self.scale(),
            ..Default::default()
        }
    }
}

fn h_from_parts(center_norm: f64, shift_radius: f64, lambda: f64, degenerate: bool) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "λ must lie in [0, 1], got {lambda}"
        )));
    }
    if degenerate || shift_radius <= f64::MIN_POSITIVE {
        return Err(Error::Precondition {
            predicate: "A ∉ ℂ·Id (h factor undefined for scalar multiples)".into(),
            residual: shift_radius,
        });
    }
    Ok(2.0 * (1.0 - lambda) + lambda * (center_norm / shift_radius))
}

/// One matrix's h-factor ingredients, reusable across a λ grid.
#[derive(Clone, Debug)]
pub struct HProfile {
    /// ‖A − c(A)·Id‖, the distance to the scalar line.
    pub center_norm: f64,
    /// w(A − λ0·Id) = R_A.
    pub shift_radius: f64,
    pub disc: Disc,
    pub degenerate: bool,
}

impl HProfile {
    pub fn compute(a: &ComplexMatrix, settings: &OptimizerSettings) -> Result<Self> {
        let scan = range_scan(a, settings.grid_angles)?;
        let disc = disc_from_scan(a, &scan)?;
        let dist = dist_with_scan(a, &scan, settings)?;
        Ok(Self {
            center_norm: dist.distance,
            shift_radius: disc.radius,
            disc,
            degenerate: dist.degenerate,
        })
    }

    pub fn h(&self, lambda: f64) -> Result<f64> {
        h_from_parts(self.center_norm, self.shift_radius, lambda, self.degenerate)
    }
}

/// h_λ(A) as a standalone operation.
pub fn h_factor(a: &ComplexMatrix, lambda: f64, settings: &OptimizerSettings) -> Result<f64> {
    HProfile::compute(a, settings)?.h(lambda)
}

/// 4·R_A·R_T with both radii from the smallest numerical-range discs.
pub fn renaud_bound(
    a: &ComplexMatrix,
    t: &ComplexMatrix,
    settings: &OptimizerSettings,
) -> Result<f64> {
    let ra = crate::geometry::numerical_range_disc(a, settings)?.radius;
    let rt = crate::geometry::numerical_range_disc(t, settings)?.radius;
    Ok(4.0 * ra * rt)
}

/// Max |V_P̃(A, T)| over a candidate set: the given P, rank-one states found
/// by gradient ascent, and seeded random states. A lower estimate of the
/// supremum by construction, and at least |V_P(A, T)|.
fn sup_v_p_estimate(
    a_raw: &ComplexMatrix,
    t_raw: &ComplexMatrix,
    state: &DensityOperator,
    settings: &OptimizerSettings,
) -> Result<f64> {
    // Work on Frobenius-normalized copies and rescale at the end:
    // V is bilinear, so the estimate is exactly scale covariant and the
    // ascent is well conditioned regardless of the input scale.
    let norm_a = a_raw.frobenius_norm();
    let norm_t = t_raw.frobenius_norm();
    if norm_a <= f64::MIN_POSITIVE || norm_t <= f64::MIN_POSITIVE {
        return Ok(0.0);
    }
    let a = &a_raw.scale(Complex64::new(1.0 / norm_a, 0.0));
    let t = &t_raw.scale(Complex64::new(1.0 / norm_t, 0.0));
    let rescale = norm_a * norm_t;

    let n = a.dim();
    let mut best = v_p(a, t, state)?.norm();

    let at = a.mul(t)?;
    let at_adj = at.adjoint();
    let a_adj = a.adjoint();
    let t_adj = t.adjoint();
    // |V(x)|² for P = x⊗x, with its conj-gradient.
    let objective = |x: &[Complex64]| {
        let ax = a.matvec(x);
        let tx = t.matvec(x);
        let atx = at.matvec(x);
        let ca = vec_inner(&ax, x);
        let ct = vec_inner(&tx, x);
        let v = vec_inner(&atx, x) - ca * ct;
        let value = v.norm_sqr();
        let datx = at_adj.matvec(x);
        let dax = a_adj.matvec(x);
        let dtx = t_adj.matvec(x);
        let grad: Vec<Complex64> = (0..x.len())
            .map(|i| {
                let dv = atx[i] - ax[i] * ct - tx[i] * ca;
                let dvbar = datx[i] - dax[i] * ct.conj() - dtx[i] * ca.conj();
                dv * v.conj() + dvbar * v
            })
            .collect();
        (value, grad)
    };
    let rank_one = maximize_on_sphere(
        objective,
        n,
        &[],
        6.min(settings.restarts),
        mix_seed(settings.seed, 0x5c0e),
        settings.max_iters.min(400),
        1e-9,
    );
    best = best.max(rank_one.value.max(0.0).sqrt());

    let mut rng = rng_for(settings.seed, 0x5a3e);
    for _ in 0..12 {
        let x = crate::optim::random_unit_vector(n, &mut rng);
        let p = DensityOperator::from_unit_vector(&x)?;
        best = best.max(v_p(a, t, &p)?.norm());
    }
    for _ in 0..6 {
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            data.push(crate::optim::complex_gaussian(&mut rng));
        }
        let g = ComplexMatrix::new(n, data)?;
        let gram = g.mul(&g.adjoint())?;
        let tr = gram.trace().re;
        if tr > f64::MIN_POSITIVE {
            let p = DensityOperator::new(gram.scale(Complex64::new(1.0 / tr, 0.0)))?;
            best = best.max(v_p(a, t, &p)?.norm());
        }
    }
    Ok(best * rescale)
}

/// Kantorovich check: lhs = |1 − ⟨Ax,x⟩·⟨A⁻¹x,x⟩| against rhs = r_A·r_{A⁻¹}.
#[derive(Clone, Copy, Debug)]
pub struct KantorovichCheck {
    pub lhs: f64,
    pub rhs: f64,
}

pub fn kantorovich_check(a: &ComplexMatrix, x: &[Complex64]) -> Result<KantorovichCheck> {
    let residual = a.hermitian_residual();
    if residual > tol::HERMITIAN_RESIDUAL * (1.0 + a.frobenius_norm()) {
        return Err(Error::NotHermitian { residual });
    }
    let eig = hermitian_eig(a)?;
    let floor = 1e-10 * eig.max().abs().max(1.0);
    if eig.min() < floor {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: eig.min(),
        });
    }
    let norm_x = vec_norm(x);
    if (norm_x - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition {
            predicate: "‖x‖ = 1".into(),
            residual: (norm_x - 1.0).abs(),
        });
    }
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: x.len(),
        });
    }
    let inverse = hermitian_function(&eig, |l| 1.0 / l);
    let ax = a.matvec(x);
    let ix = inverse.matvec(x);
    let lhs = (Complex64::new(1.0, 0.0) - vec_inner(&ax, x) * vec_inner(&ix, x)).norm();
    let r_a = smallest_enclosing_disc(&spectrum(a)?)?.radius;
    let r_inv = smallest_enclosing_disc(&spectrum(&inverse)?)?.radius;
    Ok(KantorovichCheck {
        lhs,
        rhs: r_a * r_inv,
    })
}
