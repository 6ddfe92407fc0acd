//! The six chain strategies. Each builds its ordered term list from a shared
//! [`PairAnalysis`]; preconditions surface as `Error::Precondition` with the
//! violated predicate named.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::is_transloid_sampled;
use crate::linalg::OptimizerSettings;
use crate::tol;

use super::report::{BoundChainReport, ChainTerm};
use super::{BoundChain, ChainInput, PairAnalysis};

fn term(label: impl Into<String>, value: f64) -> ChainTerm {
    ChainTerm {
        label: label.into(),
        value,
    }
}

fn base_terms(ctx: &PairAnalysis) -> Vec<ChainTerm> {
    vec![
        term("|V_P(A,T)|", ctx.v_p_abs),
        term("sup_P |V_P(A,T)| (est)", ctx.sup_estimate),
        term(
            "dist(A,CId)·dist(T,CId)",
            ctx.dist_a.distance * ctx.dist_t.distance,
        ),
    ]
}

/// |V_P(A,T)| ≤ 4·R_A·R_T.
pub struct RenaudChain;

impl RenaudChain {
    pub fn report(ctx: &PairAnalysis, settings: &OptimizerSettings) -> BoundChainReport {
        let terms = vec![
            term("|V_P(A,T)|", ctx.v_p_abs),
            term("4·R_A·R_T", 4.0 * ctx.disc_a.radius * ctx.disc_t.radius),
        ];
        BoundChainReport::build(terms, ctx.meta("renaud", settings))
    }
}

impl BoundChain for RenaudChain {
    fn name(&self) -> &'static str {
        "renaud"
    }
    fn describe(&self) -> &'static str {
        "trace-functional bound 4·R_A·R_T from enclosing discs of both numerical ranges"
    }
    fn evaluate(
        &self,
        input: &ChainInput<'_>,
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport> {
        let ctx = PairAnalysis::new(input.a, input.t, input.state, settings)?;
        Ok(Self::report(&ctx, settings))
    }
}

/// |V_P| ≤ sup ≤ dist·dist ≤ ‖A−λ0‖‖T−μ0‖ ≤ 4·w·w ≤ 4·R_A·R_T.
pub struct RefinedChain;

impl RefinedChain {
    pub fn report(ctx: &PairAnalysis, settings: &OptimizerSettings) -> BoundChainReport {
        let mut terms = base_terms(ctx);
        terms.push(term(
            "‖A−λ0·Id‖·‖T−μ0·Id‖",
            ctx.norm_shift_a * ctx.norm_shift_t,
        ));
        terms.push(term(
            "4·w(A−λ0)·w(T−μ0)",
            4.0 * ctx.disc_a.radius * ctx.disc_t.radius,
        ));
        terms.push(term("4·R_A·R_T", 4.0 * ctx.disc_a.radius * ctx.disc_t.radius));
        BoundChainReport::build(terms, ctx.meta("refined", settings))
    }
}

impl BoundChain for RefinedChain {
    fn name(&self) -> &'static str {
        "refined"
    }
    fn describe(&self) -> &'static str {
        "full five-link refinement threading the state supremum, scalar distances, and shifted norms"
    }
    fn evaluate(
        &self,
        input: &ChainInput<'_>,
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport> {
        let ctx = PairAnalysis::new(input.a, input.t, input.state, settings)?;
        Ok(Self::report(&ctx, settings))
    }
}

fn require_normal(ctx: &PairAnalysis) -> Result<()> {
    let limit_a = tol::NORMALITY_RESIDUAL * ctx.norm_a * ctx.norm_a;
    if ctx.normality_a > limit_a.max(f64::MIN_POSITIVE) {
        return Err(Error::Precondition {
            predicate: "A normal (‖AA*−A*A‖ ≤ εnorm·‖A‖²); normality residual".into(),
            residual: ctx.normality_a,
        });
    }
    let limit_t = tol::NORMALITY_RESIDUAL * ctx.norm_t * ctx.norm_t;
    if ctx.normality_t > limit_t.max(f64::MIN_POSITIVE) {
        return Err(Error::Precondition {
            predicate: "T normal (‖TT*−T*T‖ ≤ εnorm·‖T‖²); normality residual".into(),
            residual: ctx.normality_t,
        });
    }
    Ok(())
}

fn spectral_terms(ctx: &PairAnalysis, chain: &str, settings: &OptimizerSettings) -> BoundChainReport {
    let mut terms = base_terms(ctx);
    terms.push(term(
        "r_A·r_T",
        ctx.spectrum_radius_a * ctx.spectrum_radius_t,
    ));
    let mut report = BoundChainReport::build(terms, ctx.meta(chain, settings));
    // dist·dist = r_A·r_T for normal operators; two solvers meet here.
    report.mark_equality(2, tol::EQUALITY_LINK * (1.0 + report.meta.scale));
    report
}

/// Normal operators: the constant 4 drops to 1 and dist·dist = r_A·r_T.
pub struct NormalChain;

impl NormalChain {
    pub fn report(ctx: &PairAnalysis, settings: &OptimizerSettings) -> Result<BoundChainReport> {
        require_normal(ctx)?;
        Ok(spectral_terms(ctx, "normal", settings))
    }
}

impl BoundChain for NormalChain {
    fn name(&self) -> &'static str {
        "normal"
    }
    fn describe(&self) -> &'static str {
        "normal-pair chain ending at r_A·r_T, with the distance/spectral-radius equality checked"
    }
    fn evaluate(
        &self,
        input: &ChainInput<'_>,
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport> {
        let ctx = PairAnalysis::new(input.a, input.t, input.state, settings)?;
        Self::report(&ctx, settings)
    }
}

/// Default shift samples for the transloid test: 0, ±1, ±i, and both disc
/// centers.
pub fn default_transloid_shifts(ctx: &PairAnalysis) -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
        ctx.disc_a.center,
        ctx.disc_t.center,
    ]
}

/// Same bound as [`NormalChain`] under a sampled transloid precondition.
pub struct TransloidChain;

impl TransloidChain {
    pub fn report(
        ctx: &PairAnalysis,
        shifts: &[Complex64],
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport> {
        let mut report = spectral_terms(ctx, "transloid", settings);
        report.meta.notes.push(format!(
            "transloid precondition sampled on {} shifts (necessary condition only)",
            shifts.len()
        ));
        report.meta.notes.push(
            "finite-dimensional transloid matrices coincide with normal matrices; \
             the sampled check cannot separate the classes at this scale"
                .into(),
        );
        Ok(report)
    }
}

impl BoundChain for TransloidChain {
    fn name(&self) -> &'static str {
        "transloid"
    }
    fn describe(&self) -> &'static str {
        "normal-constant bound under a sampled shifted-normaloid (transloid) precondition"
    }
    fn evaluate(
        &self,
        input: &ChainInput<'_>,
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport> {
        let ctx = PairAnalysis::new(input.a, input.t, input.state, settings)?;
        let shifts = default_transloid_shifts(&ctx);
        for (which, m) in [("A", input.a), ("T", input.t)] {
            let check = is_transloid_sampled(m, &shifts, tol::NORMALITY_RESIDUAL.sqrt())?;
            if !check.transloid {
                return Err(Error::Precondition {
                    predicate: format!(
                        "{which} transloid on sampled shifts (worst shift {:+.3}{:+.3}i); relative normaloid residual",
                        check.worst_shift[0], check.worst_shift[1]
                    ),
                    residual: check.worst_residual,
                });
            }
        }
        Self::report(&ctx, &shifts, settings)
    }
}

/// Parametric chain with k(A, T) = h_λ(A)·h_μ(T) ∈ [1, 4].
pub struct TheoremChain;

impl TheoremChain {
    pub fn report(
        ctx: &PairAnalysis,
        lambda: f64,
        mu: f64,
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport> {
        let h_a = ctx.h_lambda_a(lambda)?;
        let h_t = ctx.h_mu_t(mu)?;
        let k = h_a * h_t;
        let ww = ctx.disc_a.radius * ctx.disc_t.radius;
        let mut terms = base_terms(ctx);
        terms.push(term(
            format!("h_λ(A)h_μ(T)·w(A−λ0)w(T−μ0)  [λ={lambda:.3}, μ={mu:.3}]"),
            k * ww,
        ));
        terms.push(term("h_λ(A)h_μ(T)·R_A·R_T", k * ww));
        let mut report = BoundChainReport::build(terms, ctx.meta("theorem", settings));
        report.meta.lambda = Some(lambda);
        report.meta.mu = Some(mu);
        report.meta.k_factor = Some(k);
        Ok(report)
    }
}

impl BoundChain for TheoremChain {
    fn name(&self) -> &'static str {
        "theorem"
    }
    fn describe(&self) -> &'static str {
        "parametric refinement h_λ(A)h_μ(T)·R_A·R_T answering the separability question for k(A,T)"
    }
    fn evaluate(
        &self,
        input: &ChainInput<'_>,
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport> {
        let ctx = PairAnalysis::new(input.a, input.t, input.state, settings)?;
        Self::report(&ctx, input.lambda, input.mu, settings)
    }
}

/// Factor (2−λ)(2−μ) when both shifted operators are normaloid.
pub struct NormaloidChain;

impl NormaloidChain {
    pub fn report(
        ctx: &PairAnalysis,
        lambda: f64,
        mu: f64,
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport> {
        for (which, check) in [("A−λ0·Id", &ctx.normaloid_a), ("T−μ0·Id", &ctx.normaloid_t)] {
            if !check.normaloid {
                return Err(Error::Precondition {
                    predicate: format!("{which} normaloid (r = ‖·‖); residual ‖·‖ − r"),
                    residual: check.residual,
                });
            }
        }
        if !(0.0..=1.0).contains(&lambda) || !(0.0..=1.0).contains(&mu) {
            return Err(Error::InvalidParameter(format!(
                "λ, μ must lie in [0, 1], got ({lambda}, {mu})"
            )));
        }
        let factor = (2.0 - lambda) * (2.0 - mu);
        let ww = ctx.disc_a.radius * ctx.disc_t.radius;
        let mut terms = base_terms(ctx);
        terms.push(term(
            format!("(2−λ)(2−μ)·w(A−λ0)w(T−μ0)  [λ={lambda:.3}, μ={mu:.3}]"),
            factor * ww,
        ));
        terms.push(term("(2−λ)(2−μ)·R_A·R_T", factor * ww));
        let mut report = BoundChainReport::build(terms, ctx.meta("normaloid", settings));
        report.meta.lambda = Some(lambda);
        report.meta.mu = Some(mu);
        Ok(report)
    }
}

impl BoundChain for NormaloidChain {
    fn name(&self) -> &'static str {
        "normaloid"
    }
    fn describe(&self) -> &'static str {
        "factor (2−λ)(2−μ) chain for pairs whose disc-centered shifts are normaloid"
    }
    fn evaluate(
        &self,
        input: &ChainInput<'_>,
        settings: &OptimizerSettings,
    ) -> Result<BoundChainReport> {
        let ctx = PairAnalysis::new(input.a, input.t, input.state, settings)?;
        Self::report(&ctx, input.lambda, input.mu, settings)
    }
}
