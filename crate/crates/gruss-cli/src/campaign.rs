//! Seeded verification campaign: every suite draws its matrices from the
//! zoo, runs its checks trial by trial, and reduces to a summary that names
//! the exact seeds of any failure. Same config and seed give an identical
//! report apart from the timestamp.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use gruss_core::bounds::{
    NormalChain, NormaloidChain, PairAnalysis, RefinedChain, RenaudChain, TheoremChain,
    TransloidChain,
};
use gruss_core::distance::{dist_characterizations, dist_sphere, dist_to_scalars};
use gruss_core::geometry::{smallest_enclosing_disc, spectrum};
use gruss_core::linalg::{hermitian_eig, spectral_norm, DensityOperator, OptimizerSettings};
use gruss_core::matrix::ComplexMatrix;
use gruss_core::variance::{audenaert_max, v_p, variance, variance_identities};
use gruss_core::zoo::{fixture, generate, Family, Sample, ZooSpec};
use gruss_core::{Complex64, Error};

pub const DEFAULT_FAMILIES: [&str; 5] = ["ginibre", "hermitian", "normal", "jordan", "haar_unitary"];

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ineq_abs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ineq_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality: Option<f64>,
}

impl ToleranceOverrides {
    pub fn ineq_abs(&self) -> f64 {
        self.ineq_abs.unwrap_or(gruss_core::tol::INEQUALITY_ABS)
    }
    pub fn ineq_rel(&self) -> f64 {
        self.ineq_rel.unwrap_or(gruss_core::tol::INEQUALITY_REL)
    }
    pub fn equality(&self) -> f64 {
        self.equality.unwrap_or(gruss_core::tol::EQUALITY_LINK)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    pub dims: Vec<usize>,
    /// Trials per family in the chain suites; the other suites scale off it.
    pub trials: usize,
    pub families: Vec<String>,
    pub seed: u64,
    pub tolerances: ToleranceOverrides,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    /// States evaluated per generated (A, T) pair.
    pub states_per_pair: usize,
    /// Extra fixture pairs injected into the chain suites.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fixture_pairs: Vec<[String; 2]>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4, 6],
            trials: 2000,
            families: DEFAULT_FAMILIES.iter().map(|s| s.to_string()).collect(),
            seed: 42,
            tolerances: ToleranceOverrides::default(),
            output_path: None,
            states_per_pair: 4,
            fixture_pairs: Vec::new(),
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.trials < 1 {
            return Err(Error::InvalidParameter("trials must be ≥ 1".into()));
        }
        if self.states_per_pair < 1 {
            return Err(Error::InvalidParameter("states_per_pair must be ≥ 1".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|d| *d < 2) {
            return Err(Error::InvalidParameter(
                "chain suites need dims all ≥ 2".into(),
            ));
        }
        if self.families.is_empty() {
            return Err(Error::InvalidParameter("families must be nonempty".into()));
        }
        for f in &self.families {
            campaign_matrix(f, 2, 0)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FailureRecord {
    pub suite: String,
    pub family: String,
    pub dim: usize,
    pub seed_a: u64,
    pub seed_t: u64,
    pub seed_p: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub trials: usize,
    pub failures: usize,
    pub worst_slack: f64,
    pub seeds_of_failures: Vec<FailureRecord>,
    pub metrics: BTreeMap<String, f64>,
}

const MAX_STORED_FAILURES: usize = 25;

struct Collector {
    suite: &'static str,
    trials: usize,
    failures: usize,
    worst_slack: f64,
    records: Vec<FailureRecord>,
    metrics: BTreeMap<String, f64>,
}

impl Collector {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            trials: 0,
            failures: 0,
            worst_slack: f64::INFINITY,
            records: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    fn trial(&mut self) {
        self.trials += 1;
    }

    fn slack(&mut self, slack: f64) {
        if slack < self.worst_slack {
            self.worst_slack = slack;
        }
    }

    fn fail(&mut self, record: FailureRecord) {
        self.failures += 1;
        if self.records.len() < MAX_STORED_FAILURES {
            self.records.push(record);
        }
    }

    fn metric_min(&mut self, key: &str, value: f64) {
        let entry = self.metrics.entry(key.to_string()).or_insert(f64::INFINITY);
        if value < *entry {
            *entry = value;
        }
    }

    fn metric_max(&mut self, key: &str, value: f64) {
        let entry = self
            .metrics
            .entry(key.to_string())
            .or_insert(f64::NEG_INFINITY);
        if value > *entry {
            *entry = value;
        }
    }

    fn metric_set(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    fn finish(mut self, elapsed: f64) -> SuiteSummary {
        self.metric_set("elapsed_seconds", elapsed);
        SuiteSummary {
            suite: self.suite.to_string(),
            trials: self.trials,
            failures: self.failures,
            worst_slack: if self.worst_slack.is_finite() {
                self.worst_slack
            } else {
                0.0
            },
            seeds_of_failures: self.records,
            metrics: self.metrics,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: TrialConfig,
    pub suites: Vec<SuiteSummary>,
    pub failures_total: usize,
    pub timestamp: String,
    pub elapsed_seconds: f64,
}

// ---------------------------------------------------------------------------
// Seed plumbing (splitmix64; self-contained so reports are reproducible).

fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn unit_f64(seed: u64, salt: u64) -> f64 {
    (mix(seed, salt) >> 11) as f64 / (1u64 << 53) as f64
}

fn scalar_in_square(seed: u64, salt: u64, half_side: f64) -> Complex64 {
    Complex64::new(
        half_side * (2.0 * unit_f64(seed, salt) - 1.0),
        half_side * (2.0 * unit_f64(seed, salt ^ 0x51) - 1.0),
    )
}

// ---------------------------------------------------------------------------
// Campaign generators.

/// Campaign matrix families: the zoo families plus `jordan` (a nilpotent
/// block with a small seeded perturbation) and `fixture:NAME`.
pub fn campaign_matrix(family: &str, dim: usize, seed: u64) -> Result<ComplexMatrix, Error> {
    if let Some(name) = family.strip_prefix("fixture:") {
        return fixture(name);
    }
    match family {
        "jordan" => {
            let block = generate(&ZooSpec::new(Family::Jordan, dim, seed))?.into_matrix();
            let noise = generate(&ZooSpec::new(Family::Ginibre, dim, mix(seed, 0x7e)))?
                .into_matrix();
            block.add(&noise.scale(Complex64::new(0.05, 0.0)))
        }
        other => {
            let fam = Family::parse(other)?;
            Ok(generate(&ZooSpec::new(fam, dim, seed))?.into_matrix())
        }
    }
}

pub fn campaign_state(dim: usize, seed: u64) -> Result<DensityOperator, Error> {
    let family = match seed % 3 {
        0 => Family::RankOneState,
        1 => Family::DensityFull,
        _ => Family::DensityRankK,
    };
    let mut spec = ZooSpec::new(family, dim, seed);
    if family == Family::DensityRankK {
        spec.rank = Some(1 + (seed as usize / 3) % dim);
    }
    match generate(&spec)? {
        Sample::State(p) => Ok(p),
        Sample::Matrix(_) => unreachable!("density families yield states"),
    }
}

fn settings_for(seed: u64, salt: u64) -> OptimizerSettings {
    OptimizerSettings::default().with_seed(mix(seed, salt))
}

// ---------------------------------------------------------------------------
// Chain suites: renaud, refined, theorem grid, dragomir in one pass.

struct StateOutcome {
    seed_p: u64,
    renaud_slack: f64,
    refined_worst: f64,
    refined_detail: Option<String>,
    dragomir_slacks: (f64, f64),
}

struct PairOutcome {
    family: String,
    dim: usize,
    seed_a: u64,
    seed_t: u64,
    states: Vec<StateOutcome>,
    // Per-pair grid data (state independent links): h/k ranges, worst slack
    // of dist² ≤ k·w·w ≤ k·R·R, gap of the λ=μ=0 bound against renaud.
    grid: Option<GridOutcome>,
    error: Option<String>,
}

struct GridOutcome {
    h_min: f64,
    h_max: f64,
    k_min: f64,
    k_max: f64,
    worst_slack: f64,
    zero_gap: f64,
}

fn chain_pair_outcome(
    config: &TrialConfig,
    family: &str,
    pair_index: u64,
    fam_index: u64,
) -> PairOutcome {
    let dim = config.dims[(pair_index as usize) % config.dims.len()];
    let seed_a = mix(config.seed, (fam_index << 24) | (pair_index << 2));
    let seed_t = mix(config.seed, (fam_index << 24) | (pair_index << 2) | 1);
    let mut outcome = PairOutcome {
        family: family.to_string(),
        dim,
        seed_a,
        seed_t,
        states: Vec::new(),
        grid: None,
        error: None,
    };
    let (a, t) = match (
        campaign_matrix(family, dim, seed_a),
        campaign_matrix(family, dim, seed_t),
    ) {
        (Ok(a), Ok(t)) => (a, t),
        (Err(e), _) | (_, Err(e)) => {
            outcome.error = Some(e.to_string());
            return outcome;
        }
    };
    chain_pair_outcome_for(config, &a, &t, outcome)
}

fn chain_pair_outcome_for(
    config: &TrialConfig,
    a: &ComplexMatrix,
    t: &ComplexMatrix,
    mut outcome: PairOutcome,
) -> PairOutcome {
    let dim = a.dim();
    let mut base: Option<PairAnalysis> = None;
    for s in 0..config.states_per_pair as u64 {
        let seed_p = mix(config.seed, (outcome.seed_a << 8) | s);
        let settings = settings_for(config.seed, seed_p);
        let state = match campaign_state(dim, seed_p) {
            Ok(p) => p,
            Err(e) => {
                outcome.error = Some(e.to_string());
                return outcome;
            }
        };
        let ctx = match &base {
            None => PairAnalysis::new(a, t, &state, &settings),
            Some(b) => b.with_state(a, t, &state, &settings),
        };
        let ctx = match ctx {
            Ok(c) => c,
            Err(e) => {
                outcome.error = Some(e.to_string());
                return outcome;
            }
        };

        let renaud = RenaudChain::report(&ctx, &settings);
        let refined = RefinedChain::report(&ctx, &settings);
        let refined_detail = (!refined.all_hold()).then(|| refined.render_table());

        // Dragomir bound at a seeded random (λ, μ).
        let lambda = scalar_in_square(seed_p, 0xd1, 2.0);
        let mu = scalar_in_square(seed_p, 0xd2, 2.0);
        let dragomir_slacks =
            match gruss_core::variance::dragomir_bound(a, t, &state, lambda, mu) {
                Ok(b) => (b.middle - ctx.v_p_abs, b.outer - b.middle),
                Err(e) => {
                    outcome.error = Some(e.to_string());
                    return outcome;
                }
            };

        outcome.states.push(StateOutcome {
            seed_p,
            renaud_slack: renaud.worst_slack(),
            refined_worst: refined.worst_slack(),
            refined_detail,
            dragomir_slacks,
        });

        if base.is_none() {
            // Grid over (λ, μ) ∈ [0,1]², state-independent links.
            if !ctx.dist_a.degenerate && !ctx.dist_t.degenerate {
                let mut grid = GridOutcome {
                    h_min: f64::INFINITY,
                    h_max: f64::NEG_INFINITY,
                    k_min: f64::INFINITY,
                    k_max: f64::NEG_INFINITY,
                    worst_slack: f64::INFINITY,
                    zero_gap: 0.0,
                };
                let dist2 = ctx.dist_a.distance * ctx.dist_t.distance;
                let ww = ctx.disc_a.radius * ctx.disc_t.radius;
                let mut failed = None;
                for i in 0..=10 {
                    for j in 0..=10 {
                        let (lam, mu) = (i as f64 / 10.0, j as f64 / 10.0);
                        let (h_a, h_t) = match (ctx.h_lambda_a(lam), ctx.h_mu_t(mu)) {
                            (Ok(x), Ok(y)) => (x, y),
                            (Err(e), _) | (_, Err(e)) => {
                                failed = Some(e.to_string());
                                (f64::NAN, f64::NAN)
                            }
                        };
                        if failed.is_some() {
                            break;
                        }
                        let k = h_a * h_t;
                        grid.h_min = grid.h_min.min(h_a.min(h_t));
                        grid.h_max = grid.h_max.max(h_a.max(h_t));
                        grid.k_min = grid.k_min.min(k);
                        grid.k_max = grid.k_max.max(k);
                        grid.worst_slack = grid.worst_slack.min(k * ww - dist2);
                    }
                }
                if let Some(e) = failed {
                    outcome.error = Some(e);
                    return outcome;
                }
                // λ = μ = 0 must reproduce the renaud bound.
                let renaud_bound = renaud.terms.last().unwrap().value;
                grid.zero_gap = (4.0 * ww - renaud_bound).abs();
                outcome.grid = Some(grid);
            }
            base = Some(ctx);
        }
    }
    outcome
}

fn run_chain_suites(config: &TrialConfig) -> Vec<SuiteSummary> {
    let start = Instant::now();
    let pairs_per_family =
        (config.trials + config.states_per_pair - 1) / config.states_per_pair;
    let mut jobs: Vec<(u64, String)> = Vec::new();
    for (f_idx, family) in config.families.iter().enumerate() {
        for p_idx in 0..pairs_per_family as u64 {
            jobs.push(((f_idx as u64) << 32 | p_idx, family.clone()));
        }
    }
    let mut outcomes: Vec<PairOutcome> = jobs
        .par_iter()
        .map(|(packed, family)| {
            chain_pair_outcome(config, family, packed & 0xffff_ffff, packed >> 32)
        })
        .collect();

    // Injected fixture pairs run with the same state schedule.
    for (i, [name_a, name_t]) in config.fixture_pairs.iter().enumerate() {
        let load = |name: &str| fixture(name);
        match (load(name_a), load(name_t)) {
            (Ok(a), Ok(t)) if a.dim() == t.dim() => {
                let seed_a = mix(config.seed, 0xf17 + i as u64);
                let outcome = PairOutcome {
                    family: format!("fixture:{name_a}|{name_t}"),
                    dim: a.dim(),
                    seed_a,
                    seed_t: seed_a ^ 1,
                    states: Vec::new(),
                    grid: None,
                    error: None,
                };
                outcomes.push(chain_pair_outcome_for(config, &a, &t, outcome));
            }
            (Err(e), _) | (_, Err(e)) => outcomes.push(PairOutcome {
                family: format!("fixture:{name_a}|{name_t}"),
                dim: 0,
                seed_a: 0,
                seed_t: 0,
                states: Vec::new(),
                grid: None,
                error: Some(e.to_string()),
            }),
            (Ok(a), Ok(t)) => outcomes.push(PairOutcome {
                family: format!("fixture:{name_a}|{name_t}"),
                dim: a.dim(),
                seed_a: 0,
                seed_t: 0,
                states: Vec::new(),
                grid: None,
                error: Some(format!(
                    "fixture dims differ: {} vs {}",
                    a.dim(),
                    t.dim()
                )),
            }),
        }
    }

    let mut renaud = Collector::new("renaud");
    let mut refined = Collector::new("refined");
    let mut theorem = Collector::new("theorem");
    let mut dragomir = Collector::new("dragomir");

    for pair in &outcomes {
        let record = |suite: &str, detail: &str| FailureRecord {
            suite: suite.to_string(),
            family: pair.family.clone(),
            dim: pair.dim,
            seed_a: pair.seed_a,
            seed_t: pair.seed_t,
            seed_p: 0,
            detail: detail.to_string(),
        };
        if let Some(err) = &pair.error {
            for c in [&mut renaud, &mut refined, &mut theorem, &mut dragomir] {
                c.trial();
                let suite = c.suite;
                c.fail(record(suite, err));
            }
            continue;
        }
        for state in &pair.states {
            renaud.trial();
            renaud.slack(state.renaud_slack);
            if state.renaud_slack < -(config.tolerances.ineq_abs()) {
                let mut r = record("renaud", &format!("slack {}", state.renaud_slack));
                r.seed_p = state.seed_p;
                renaud.fail(r);
            }

            refined.trial();
            refined.slack(state.refined_worst);
            if let Some(detail) = &state.refined_detail {
                let mut r = record("refined", detail);
                r.seed_p = state.seed_p;
                refined.fail(r);
            }

            dragomir.trial();
            let (s1, s2) = state.dragomir_slacks;
            dragomir.slack(s1.min(s2));
            if s1 < -1e-9 || s2 < -1e-9 {
                let mut r = record("dragomir", &format!("slacks {s1}, {s2}"));
                r.seed_p = state.seed_p;
                dragomir.fail(r);
            }
        }
        if let Some(grid) = &pair.grid {
            theorem.trial();
            theorem.slack(grid.worst_slack);
            theorem.metric_min("h_min", grid.h_min);
            theorem.metric_max("h_max", grid.h_max);
            theorem.metric_min("k_min", grid.k_min);
            theorem.metric_max("k_max", grid.k_max);
            theorem.metric_max("zero_gap_max", grid.zero_gap);
            let scale = 1.0;
            let bad_range = grid.h_min < 1.0 - 1e-9
                || grid.h_max > 2.0 + 1e-9
                || grid.k_min < 1.0 - 1e-9
                || grid.k_max > 4.0 + 1e-9;
            if bad_range
                || grid.worst_slack < -(config.tolerances.ineq_abs() * scale)
                || grid.zero_gap > 1e-10 * (1.0 + grid.k_max)
            {
                theorem.fail(record(
                    "theorem",
                    &format!(
                        "h ∈ [{}, {}], k ∈ [{}, {}], worst slack {}, zero gap {}",
                        grid.h_min,
                        grid.h_max,
                        grid.k_min,
                        grid.k_max,
                        grid.worst_slack,
                        grid.zero_gap
                    ),
                ));
            }
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    vec![
        renaud.finish(elapsed),
        refined.finish(elapsed),
        theorem.finish(elapsed),
        dragomir.finish(elapsed),
    ]
}

// ---------------------------------------------------------------------------
// Normal-pair suite.

fn run_normal_suite(config: &TrialConfig) -> SuiteSummary {
    let start = Instant::now();
    let count = config.trials.max(2) / 2;
    let results: Vec<Result<(f64, f64, Option<String>, u64, u64, u64, usize), (String, u64, u64)>> =
        (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let dim = config.dims[(i as usize) % config.dims.len()];
                let seed_a = mix(config.seed, 0xa000_0000 + i * 2);
                let seed_t = mix(config.seed, 0xa000_0000 + i * 2 + 1);
                let seed_p = mix(config.seed, 0xb000_0000 + i);
                let run = || -> Result<(f64, f64, Option<String>), Error> {
                    let a = campaign_matrix("normal", dim, seed_a)?;
                    let t = campaign_matrix("normal", dim, seed_t)?;
                    let p = campaign_state(dim, seed_p)?;
                    let settings = settings_for(config.seed, seed_p);
                    let value = v_p(&a, &t, &p)?.norm();
                    let r_a = smallest_enclosing_disc(&spectrum(&a)?)?.radius;
                    let r_t = smallest_enclosing_disc(&spectrum(&t)?)?.radius;
                    let d_a = dist_to_scalars(&a, &settings)?.distance;
                    let d_t = dist_to_scalars(&t, &settings)?.distance;
                    let slack = r_a * r_t + 1e-8 - value;
                    let eq_gap = (d_a * d_t - r_a * r_t).abs();
                    // Exercise the full chain structures on a subsample.
                    let detail = if i % 20 == 0 {
                        let ctx = PairAnalysis::new(&a, &t, &p, &settings)?;
                        let normal = NormalChain::report(&ctx, &settings)?;
                        let shifts = gruss_core::bounds::default_transloid_shifts(&ctx);
                        let transloid = TransloidChain::report(&ctx, &shifts, &settings)?;
                        if !normal.all_hold() {
                            Some(format!("normal chain: {}", normal.render_table()))
                        } else if !transloid.all_hold() {
                            Some(format!("transloid chain: {}", transloid.render_table()))
                        } else {
                            None
                        }
                    } else {
                        None
                    };
                    Ok((slack, eq_gap, detail))
                };
                match run() {
                    Ok((slack, gap, detail)) => Ok((slack, gap, detail, seed_a, seed_t, seed_p, dim)),
                    Err(e) => Err((e.to_string(), seed_a, seed_t)),
                }
            })
            .collect();

    let mut col = Collector::new("normal");
    for res in results {
        col.trial();
        match res {
            Ok((slack, gap, detail, seed_a, seed_t, seed_p, dim)) => {
                col.slack(slack);
                col.metric_max("equality_gap_max", gap);
                let mut problems = Vec::new();
                if slack < 0.0 {
                    problems.push(format!("|V_P| above r_A·r_T by {}", -slack));
                }
                if gap > 1e-6 {
                    problems.push(format!("dist·dist vs r_A·r_T gap {gap}"));
                }
                if let Some(d) = detail {
                    problems.push(d);
                }
                if !problems.is_empty() {
                    col.fail(FailureRecord {
                        suite: "normal".into(),
                        family: "normal".into(),
                        dim,
                        seed_a,
                        seed_t,
                        seed_p,
                        detail: problems.join("; "),
                    });
                }
            }
            Err((e, seed_a, seed_t)) => col.fail(FailureRecord {
                suite: "normal".into(),
                family: "normal".into(),
                dim: 0,
                seed_a,
                seed_t,
                seed_p: 0,
                detail: e,
            }),
        }
    }
    col.finish(start.elapsed().as_secs_f64())
}

// ---------------------------------------------------------------------------
// Normaloid corollary suite (Hermitian and unitary-derived pairs).

fn run_normaloid_suite(config: &TrialConfig) -> SuiteSummary {
    let start = Instant::now();
    let per_family = (config.trials / 20).max(50);
    let jobs: Vec<(usize, &str)> = (0..per_family)
        .flat_map(|i| [(i, "hermitian"), (i, "haar_unitary")])
        .collect();
    let results: Vec<(String, usize, u64, u64, u64, Result<f64, String>)> = jobs
        .par_iter()
        .map(|(i, family)| {
            let dim = config.dims[*i % config.dims.len()];
            let salt = if *family == "hermitian" { 0xc000_0000u64 } else { 0xd000_0000 };
            let seed_a = mix(config.seed, salt + (*i as u64) * 2);
            let seed_t = mix(config.seed, salt + (*i as u64) * 2 + 1);
            let seed_p = mix(config.seed, salt ^ (*i as u64));
            let run = || -> Result<f64, Error> {
                let a = campaign_matrix(family, dim, seed_a)?;
                let t = campaign_matrix(family, dim, seed_t)?;
                let p = campaign_state(dim, seed_p)?;
                let settings = settings_for(config.seed, seed_p);
                let ctx = PairAnalysis::new(&a, &t, &p, &settings)?;
                let mut worst = f64::INFINITY;
                for gi in 0..=10 {
                    for gj in 0..=10 {
                        let report = NormaloidChain::report(
                            &ctx,
                            gi as f64 / 10.0,
                            gj as f64 / 10.0,
                            &settings,
                        )?;
                        worst = worst.min(report.worst_slack());
                        if !report.all_hold() {
                            return Err(Error::InvalidParameter(format!(
                                "grid ({gi}, {gj}): {}",
                                report.render_table()
                            )));
                        }
                    }
                }
                Ok(worst)
            };
            (
                family.to_string(),
                dim,
                seed_a,
                seed_t,
                seed_p,
                run().map_err(|e| e.to_string()),
            )
        })
        .collect();

    let mut col = Collector::new("normaloid");
    for (family, dim, seed_a, seed_t, seed_p, res) in results {
        col.trial();
        match res {
            Ok(worst) => col.slack(worst),
            Err(detail) => col.fail(FailureRecord {
                suite: "normaloid".into(),
                family,
                dim,
                seed_a,
                seed_t,
                seed_p,
                detail,
            }),
        }
    }
    col.finish(start.elapsed().as_secs_f64())
}

// ---------------------------------------------------------------------------
// Rank-one variance maximization suite.

fn run_audenaert_suite(config: &TrialConfig) -> SuiteSummary {
    let start = Instant::now();
    let count = (config.trials / 2).max(1000);
    let families = ["ginibre", "hermitian", "normal", "jordan"];
    let results: Vec<(String, usize, u64, Result<(f64, f64), String>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let dim = config.dims[(i as usize) % config.dims.len()].min(6);
            let family = families[(i as usize / config.dims.len()) % families.len()];
            let seed = mix(config.seed, 0xe000_0000 + i);
            let run = || -> Result<(f64, f64), Error> {
                let a = campaign_matrix(family, dim, seed)?;
                let settings = settings_for(config.seed, seed);
                let direct = dist_to_scalars(&a, &settings)?;
                let max = audenaert_max(&a, &settings)?;
                let norm = spectral_norm(&a)?;
                let gap = (direct.distance - max.value.max(0.0).sqrt()).abs();
                let tol = 1e-5 * (1.0 + norm);
                if gap > tol || !(direct.converged && max.converged) {
                    return Err(Error::InvalidParameter(format!(
                        "distance {} vs rank-one sqrt {} (gap {gap:.3e}, tol {tol:.1e})",
                        direct.distance,
                        max.value.max(0.0).sqrt()
                    )));
                }
                let mut domination = f64::INFINITY;
                for s in 0..20u64 {
                    let p = campaign_state(dim, mix(seed, 0xf0 + s))?;
                    let slack = max.value + 1e-8 - variance(&a, &p)?;
                    domination = domination.min(slack);
                    if slack < 0.0 {
                        return Err(Error::InvalidParameter(format!(
                            "state {s} exceeds the rank-one maximum by {}",
                            -slack
                        )));
                    }
                }
                Ok((tol - gap, domination))
            };
            (family.to_string(), dim, seed, run().map_err(|e| e.to_string()))
        })
        .collect();

    let mut col = Collector::new("audenaert");
    for (family, dim, seed, res) in results {
        col.trial();
        match res {
            Ok((slack, domination)) => {
                col.slack(slack.min(domination));
                col.metric_min("domination_slack_min", domination);
            }
            Err(detail) => col.fail(FailureRecord {
                suite: "audenaert".into(),
                family,
                dim,
                seed_a: seed,
                seed_t: 0,
                seed_p: 0,
                detail,
            }),
        }
    }
    col.finish(start.elapsed().as_secs_f64())
}

// ---------------------------------------------------------------------------
// Variance identity suite.

fn run_identities_suite(config: &TrialConfig) -> SuiteSummary {
    let start = Instant::now();
    let matrices = (config.trials / 4).max(500);
    let states_per_matrix = 20u64;
    let families = ["ginibre", "hermitian", "normal"];
    let results: Vec<(String, usize, u64, Result<f64, (String, u64)>)> = (0..matrices as u64)
        .into_par_iter()
        .map(|i| {
            let dim = config.dims[(i as usize) % config.dims.len()].min(6);
            let family = families[(i as usize) % families.len()];
            let seed = mix(config.seed, 0x1_0000_0000 + i);
            let run = || -> Result<f64, (Error, u64)> {
                let a = campaign_matrix(family, dim, seed).map_err(|e| (e, 0))?;
                let settings = settings_for(config.seed, seed);
                let dist = dist_to_scalars(&a, &settings).map_err(|e| (e, 0))?.distance;
                let mut worst = f64::INFINITY;
                for s in 0..states_per_matrix {
                    let seed_p = mix(seed, 0x99 + s);
                    let p = campaign_state(dim, seed_p).map_err(|e| (e, seed_p))?;
                    let var = variance(&a, &p).map_err(|e| (e, seed_p))?;
                    let ids = variance_identities(&a, &p).map_err(|e| (e, seed_p))?;
                    for (label, value) in [("v1", ids.v1), ("v2", ids.v2), ("v3", ids.v3)] {
                        let gap = (value - var).abs();
                        worst = worst.min(1e-10 - gap);
                        if gap > 1e-10 {
                            return Err((
                                Error::InvalidParameter(format!(
                                    "{label} differs from variance by {gap:.3e}"
                                )),
                                seed_p,
                            ));
                        }
                    }
                    let slack = dist * dist + 1e-8 - ids.v3;
                    worst = worst.min(slack);
                    if slack < 0.0 {
                        return Err((
                            Error::InvalidParameter(format!(
                                "v3 {} exceeds dist² {}",
                                ids.v3,
                                dist * dist
                            )),
                            seed_p,
                        ));
                    }
                }
                Ok(worst)
            };
            (
                family.to_string(),
                dim,
                seed,
                run().map_err(|(e, sp)| (e.to_string(), sp)),
            )
        })
        .collect();

    let mut col = Collector::new("variance_identities");
    for (family, dim, seed, res) in results {
        for _ in 0..states_per_matrix {
            col.trial();
        }
        match res {
            Ok(worst) => col.slack(worst),
            Err((detail, seed_p)) => col.fail(FailureRecord {
                suite: "variance_identities".into(),
                family,
                dim,
                seed_a: seed,
                seed_t: 0,
                seed_p,
                detail,
            }),
        }
    }
    col.finish(start.elapsed().as_secs_f64())
}

// ---------------------------------------------------------------------------
// Distance characterization suite (small dims, many restarts).

fn run_characterization_suite(config: &TrialConfig) -> SuiteSummary {
    let start = Instant::now();
    let dims: Vec<usize> = {
        let small: Vec<usize> = config.dims.iter().copied().filter(|d| *d <= 4).collect();
        if small.is_empty() {
            vec![2, 3, 4]
        } else {
            small
        }
    };
    let families = ["ginibre", "hermitian", "normal"];
    let count = 100u64;
    let results: Vec<(String, usize, u64, Result<f64, String>)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let dim = dims[(i as usize) % dims.len()];
            let family = families[(i as usize) % families.len()];
            let seed = mix(config.seed, 0x2_0000_0000 + i);
            let run = || -> Result<f64, Error> {
                let a = campaign_matrix(family, dim, seed)?;
                let mut settings = settings_for(config.seed, seed);
                settings.restarts = settings.restarts.max(64);
                let dist = dist_to_scalars(&a, &settings)?.distance;
                let ch = dist_characterizations(&a, &settings)?;
                let mut worst = f64::INFINITY;
                for (label, value) in [
                    ("commutator", ch.commutator_half_sup),
                    ("projection", ch.rank_one_proj_sup),
                ] {
                    let upper = dist + 1e-8 - value;
                    let lower = value - (dist - 1e-4 * (1.0 + dist));
                    worst = worst.min(upper.min(lower));
                    if upper < 0.0 || lower < 0.0 {
                        return Err(Error::InvalidParameter(format!(
                            "{label} = {value} vs dist = {dist}"
                        )));
                    }
                }
                Ok(worst)
            };
            (family.to_string(), dim, seed, run().map_err(|e| e.to_string()))
        })
        .collect();

    let mut col = Collector::new("characterizations");
    for (family, dim, seed, res) in results {
        col.trial();
        match res {
            Ok(worst) => col.slack(worst),
            Err(detail) => col.fail(FailureRecord {
                suite: "characterizations".into(),
                family,
                dim,
                seed_a: seed,
                seed_t: 0,
                seed_p: 0,
                detail,
            }),
        }
    }
    col.finish(start.elapsed().as_secs_f64())
}

// ---------------------------------------------------------------------------
// Zoo invariant suite.

fn run_zoo_suite(config: &TrialConfig) -> SuiteSummary {
    let start = Instant::now();
    let count = (config.trials / 10).max(200);
    let results: Vec<(u64, Option<String>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let seed = mix(config.seed, 0x3_0000_0000 + i);
            let dim = 2 + (i as usize) % 5;
            let mut problems: Vec<String> = Vec::new();

            match generate(&ZooSpec::new(Family::HaarUnitary, dim, seed)) {
                Ok(sample) => {
                    let u = sample.into_matrix();
                    let err = u
                        .mul(&u.adjoint())
                        .unwrap()
                        .sub(&ComplexMatrix::identity(dim))
                        .unwrap()
                        .frobenius_norm();
                    if err > 1e-10 {
                        problems.push(format!("haar unitarity {err:.3e}"));
                    }
                }
                Err(e) => problems.push(e.to_string()),
            }
            match generate(&ZooSpec::new(Family::Normal, dim, seed)) {
                Ok(sample) => {
                    let m = sample.into_matrix();
                    if m.normality_residual() > 1e-10 {
                        problems.push(format!("normality {:.3e}", m.normality_residual()));
                    }
                }
                Err(e) => problems.push(e.to_string()),
            }
            for fam in [Family::DensityFull, Family::RankOneState] {
                match generate(&ZooSpec::new(fam, dim, seed)) {
                    Ok(Sample::State(p)) => {
                        if (p.matrix().trace().re - 1.0).abs() > 1e-12 {
                            problems.push(format!("{fam:?} trace"));
                        }
                        if let Ok(eig) = hermitian_eig(p.matrix()) {
                            if eig.min() < -1e-12 {
                                problems.push(format!("{fam:?} psd {}", eig.min()));
                            }
                        }
                    }
                    Ok(Sample::Matrix(_)) => problems.push(format!("{fam:?} not a state")),
                    Err(e) => problems.push(e.to_string()),
                }
            }
            // Determinism.
            let spec = ZooSpec::new(Family::Ginibre, dim, seed);
            let a = generate(&spec).unwrap().into_matrix();
            let b = generate(&spec).unwrap().into_matrix();
            if a != b {
                problems.push("ginibre not deterministic".into());
            }
            (
                seed,
                (!problems.is_empty()).then(|| problems.join("; ")),
            )
        })
        .collect();

    let mut col = Collector::new("zoo");
    for (seed, problem) in results {
        col.trial();
        if let Some(detail) = problem {
            col.fail(FailureRecord {
                suite: "zoo".into(),
                family: "mixed".into(),
                dim: 0,
                seed_a: seed,
                seed_t: 0,
                seed_p: 0,
                detail,
            });
        }
    }
    col.finish(start.elapsed().as_secs_f64())
}

// ---------------------------------------------------------------------------

/// Run every suite and collect the verdicts.
pub fn run_verify(config: &TrialConfig) -> Result<VerifyReport, Error> {
    config.validate()?;
    let start = Instant::now();
    let mut suites = run_chain_suites(config);
    suites.push(run_normal_suite(config));
    suites.push(run_normaloid_suite(config));
    suites.push(run_audenaert_suite(config));
    suites.push(run_identities_suite(config));
    suites.push(run_characterization_suite(config));
    suites.push(run_zoo_suite(config));
    let failures_total = suites.iter().map(|s| s.failures).sum();
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_default();
    Ok(VerifyReport {
        config: config.clone(),
        suites,
        failures_total,
        timestamp,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}
