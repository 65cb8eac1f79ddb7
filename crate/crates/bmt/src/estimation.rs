//! Maximum likelihood and maximum product of spacings estimation.
//!
//! Both objectives are maximized over a box by the projected quasi-Newton
//! ascent of the internal optimizer, with data-independent restarts from
//! jittered starts when a run fails to converge. Two-parameter fits hold the
//! support fixed; four-parameter fits estimate (c, d, shape1, shape2)
//! jointly, with the support box anchored at the sample extremes.
//!
//! The spacings objective follows the usual conventions: the ordered sample
//! is augmented with the support endpoints, tied observations substitute the
//! log density for the degenerate spacing, and observations equal to an
//! endpoint are excluded (as they are for the likelihood).

use serde::{Deserialize, Serialize};

use crate::bmt::{BmtDistribution, BmtDomain, BmtParams, KAPPA_GUARD};
use crate::competitors::{BetaParams, KumaraswamyParams};
use crate::error::{Error, Result};
use crate::optimize::{maximize_box, MaximizeOptions};

/// Model family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Bmt,
    Beta,
    Kumaraswamy,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::Bmt => write!(f, "bmt"),
            Model::Beta => write!(f, "beta"),
            Model::Kumaraswamy => write!(f, "kumaraswamy"),
        }
    }
}

/// Estimation method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mle,
    Mpse,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Mle => write!(f, "mle"),
            Method::Mpse => write!(f, "mpse"),
        }
    }
}

/// Anything with a bounded support, a density, and a CDF.
pub trait BoundedDistribution {
    fn support(&self) -> (f64, f64);
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
}

impl BoundedDistribution for BmtDistribution {
    fn support(&self) -> (f64, f64) {
        BmtDistribution::support(self)
    }
    fn pdf(&self, x: f64) -> f64 {
        BmtDistribution::pdf(self, x)
    }
    fn cdf(&self, x: f64) -> f64 {
        BmtDistribution::cdf(self, x)
    }
}

impl BoundedDistribution for BetaParams {
    fn support(&self) -> (f64, f64) {
        BetaParams::support(self)
    }
    fn pdf(&self, x: f64) -> f64 {
        BetaParams::pdf(self, x)
    }
    fn cdf(&self, x: f64) -> f64 {
        BetaParams::cdf(self, x)
    }
}

impl BoundedDistribution for KumaraswamyParams {
    fn support(&self) -> (f64, f64) {
        KumaraswamyParams::support(self)
    }
    fn pdf(&self, x: f64) -> f64 {
        KumaraswamyParams::pdf(self, x)
    }
    fn cdf(&self, x: f64) -> f64 {
        KumaraswamyParams::cdf(self, x)
    }
}

/// An objective value together with the number of observations dropped for
/// sitting exactly on a support endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValue {
    pub value: f64,
    pub boundary_excluded: usize,
}

/// Relative gap below which two ordered observations count as tied.
const TIE_EPS: f64 = 1e-12;

/// Sum of log densities over the observations strictly inside the support.
///
/// Observations exactly at a support endpoint are excluded and counted;
/// observations outside the support are a domain error. A zero density at
/// any remaining observation yields `-inf`.
pub fn log_likelihood<D: BoundedDistribution>(dist: &D, data: &[f64]) -> Result<ObjectiveValue> {
    let mut interior = interior_observations(dist, data)?;
    let boundary_excluded = data.len() - interior.len();
    if interior.is_empty() {
        return Err(Error::EmptyData(
            "every observation sits on a support endpoint".into(),
        ));
    }
    // summing in sorted order makes the value exactly permutation-invariant
    interior.sort_by(|a, b| a.partial_cmp(b).expect("finite data"));
    let value = log_likelihood_inner(dist, &interior);
    Ok(ObjectiveValue {
        value,
        boundary_excluded,
    })
}

/// Sum of log spacings of the fitted CDF over the ordered sample augmented
/// with the support endpoints.
pub fn sum_log_spacings<D: BoundedDistribution>(dist: &D, data: &[f64]) -> Result<ObjectiveValue> {
    let mut interior = interior_observations(dist, data)?;
    let boundary_excluded = data.len() - interior.len();
    if interior.is_empty() {
        return Err(Error::EmptyData(
            "every observation sits on a support endpoint".into(),
        ));
    }
    interior.sort_by(|a, b| a.partial_cmp(b).expect("finite data"));
    let value = sum_log_spacings_sorted(dist, &interior);
    Ok(ObjectiveValue {
        value,
        boundary_excluded,
    })
}

fn interior_observations<D: BoundedDistribution>(dist: &D, data: &[f64]) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::EmptyData("no observations".into()));
    }
    let (lo, hi) = dist.support();
    let mut interior = Vec::with_capacity(data.len());
    for &x in data {
        if x.is_nan() || x < lo || x > hi {
            return Err(Error::OutsideSupport {
                value: x,
                lower: lo,
                upper: hi,
            });
        }
        if x > lo && x < hi {
            interior.push(x);
        }
    }
    Ok(interior)
}

fn log_likelihood_inner<D: BoundedDistribution>(dist: &D, interior: &[f64]) -> f64 {
    let mut total = 0.0;
    for &x in interior {
        let f = dist.pdf(x);
        if f <= 0.0 || !f.is_finite() {
            return f64::NEG_INFINITY;
        }
        total += f.ln();
    }
    total
}

fn sum_log_spacings_sorted<D: BoundedDistribution>(dist: &D, sorted: &[f64]) -> f64 {
    let (lo, hi) = dist.support();
    let tie_gap = TIE_EPS * (hi - lo);
    let mut total = 0.0;
    let mut prev_x = lo;
    let mut prev_cdf = 0.0;
    for &x in sorted {
        if x - prev_x < tie_gap && prev_x > lo {
            // tied observations: substitute the density for the spacing
            let f = dist.pdf(x);
            if f <= 0.0 || !f.is_finite() {
                return f64::NEG_INFINITY;
            }
            total += f.ln();
        } else {
            let c = dist.cdf(x);
            let spacing = c - prev_cdf;
            if spacing <= 0.0 {
                return f64::NEG_INFINITY;
            }
            total += spacing.ln();
            prev_cdf = c;
        }
        prev_x = x;
    }
    let last = 1.0 - prev_cdf;
    if last <= 0.0 {
        return f64::NEG_INFINITY;
    }
    total + last.ln()
}

/// What to fit and where to look: model, method, fixed support (for
/// two-parameter problems), per-parameter box, and the start point.
#[derive(Debug, Clone)]
pub struct ObjectiveSpec {
    pub model: Model,
    pub method: Method,
    pub domain: BmtDomain,
    pub bounds: Vec<(f64, f64)>,
    pub start: Vec<f64>,
}

/// Shape box for beta/Kumaraswamy fits.
const SHAPE_BOUNDS: (f64, f64) = (1e-6, 1e7);

impl ObjectiveSpec {
    /// The standard two-parameter problem: shapes only, support fixed.
    ///
    /// BMT starts from (0.6, 0.6) inside the open unit box; beta and
    /// Kumaraswamy start from the uniform corner (1, 1).
    pub fn two_parameter(model: Model, method: Method, domain: BmtDomain) -> Self {
        let (bounds, start) = match model {
            Model::Bmt => (vec![(KAPPA_GUARD, 1.0 - KAPPA_GUARD); 2], vec![0.6, 0.6]),
            Model::Beta | Model::Kumaraswamy => (vec![SHAPE_BOUNDS; 2], vec![1.0, 1.0]),
        };
        Self {
            model,
            method,
            domain,
            bounds,
            start,
        }
    }

    pub fn n_params(&self) -> usize {
        self.start.len()
    }

    fn validate(&self) -> Result<()> {
        if self.start.len() != self.bounds.len() {
            return Err(Error::InvalidArgument(format!(
                "start has {} entries but bounds {}",
                self.start.len(),
                self.bounds.len()
            )));
        }
        for (i, (&s, &(lo, hi))) in self.start.iter().zip(&self.bounds).enumerate() {
            if lo >= hi || lo.is_nan() || hi.is_nan() || !s.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "parameter {i}: bad box [{lo}, {hi}] or start {s}"
                )));
            }
            if !(s > lo && s < hi) {
                return Err(Error::InvalidArgument(format!(
                    "parameter {i}: start {s} not strictly inside [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// A fitted model: the estimate, both objective values evaluated there,
/// information criteria, and optimizer diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: Model,
    pub method: Method,
    pub n_params: usize,
    /// Two shapes, or (c, d, shape1, shape2) for four-parameter fits.
    pub estimate: Vec<f64>,
    pub log_likelihood: f64,
    pub sum_log_spacings: f64,
    pub aic: f64,
    pub bic: f64,
    pub converged: bool,
    pub iterations: usize,
    pub objective_evals: usize,
    /// Which estimate components ended on their box bound.
    pub bound_active: Vec<bool>,
    /// Observations dropped for sitting exactly on the fixed support
    /// endpoints (always 0 for four-parameter fits).
    pub boundary_excluded: usize,
    /// Observations actually entering the objective.
    pub n_used: usize,
}

/// AIC = 2k - 2 logLik; BIC = k ln(n) - 2 logLik.
pub fn information_criteria(n_params: usize, log_likelihood: f64, n: usize) -> (f64, f64) {
    let k = n_params as f64;
    (
        2.0 * k - 2.0 * log_likelihood,
        k * (n as f64).ln() - 2.0 * log_likelihood,
    )
}

enum ModelInstance {
    Bmt(BmtDistribution),
    Beta(BetaParams),
    Kumaraswamy(KumaraswamyParams),
}

impl BoundedDistribution for ModelInstance {
    fn support(&self) -> (f64, f64) {
        match self {
            ModelInstance::Bmt(d) => d.support(),
            ModelInstance::Beta(d) => d.support(),
            ModelInstance::Kumaraswamy(d) => d.support(),
        }
    }
    fn pdf(&self, x: f64) -> f64 {
        match self {
            ModelInstance::Bmt(d) => d.pdf(x),
            ModelInstance::Beta(d) => d.pdf(x),
            ModelInstance::Kumaraswamy(d) => d.pdf(x),
        }
    }
    fn cdf(&self, x: f64) -> f64 {
        match self {
            ModelInstance::Bmt(d) => d.cdf(x),
            ModelInstance::Beta(d) => d.cdf(x),
            ModelInstance::Kumaraswamy(d) => d.cdf(x),
        }
    }
}

fn build_model(model: Model, theta: &[f64], domain: BmtDomain) -> Option<ModelInstance> {
    match model {
        Model::Bmt => BmtParams::new(theta[0], theta[1])
            .ok()
            .map(|p| ModelInstance::Bmt(BmtDistribution::new(p, domain))),
        Model::Beta => BetaParams::new(theta[0], theta[1], domain)
            .ok()
            .map(ModelInstance::Beta),
        Model::Kumaraswamy => KumaraswamyParams::new(theta[0], theta[1], domain)
            .ok()
            .map(ModelInstance::Kumaraswamy),
    }
}

/// Fits the two shape parameters over the spec's box.
///
/// Non-convergence is reported through `FitResult::converged`, never as an
/// error; up to three jittered restarts are attempted first.
pub fn fit(spec: &ObjectiveSpec, data: &[f64]) -> Result<FitResult> {
    spec.validate()?;
    if spec.n_params() != 2 {
        return Err(Error::InvalidArgument(format!(
            "fit handles two-parameter problems, got {}; use fit_four_parameter",
            spec.n_params()
        )));
    }
    let domain = spec.domain;
    let probe = build_model(spec.model, &spec.start, domain)
        .ok_or_else(|| Error::InvalidArgument("start point does not build a valid model".into()))?;
    // validates the data against the fixed support and drops endpoint hits
    let mut interior = interior_observations(&probe, data)?;
    let boundary_excluded = data.len() - interior.len();
    if interior.is_empty() {
        return Err(Error::EmptyData(
            "every observation sits on a support endpoint".into(),
        ));
    }
    interior.sort_by(|a, b| a.partial_cmp(b).expect("finite data"));

    let method = spec.method;
    let model = spec.model;
    let mut objective = move |theta: &[f64]| -> f64 {
        match build_model(model, theta, domain) {
            None => f64::NEG_INFINITY,
            Some(inst) => match method {
                Method::Mle => log_likelihood_inner(&inst, &interior),
                Method::Mpse => sum_log_spacings_sorted(&inst, &interior),
            },
        }
    };

    let outcome = run_multi_start(
        &mut objective,
        std::slice::from_ref(&spec.start),
        &spec.bounds,
    );
    finish_fit(
        spec.model,
        spec.method,
        outcome,
        domain,
        data,
        boundary_excluded,
        &spec.bounds,
    )
}

/// Fits (c, d, shape1, shape2) jointly.
///
/// The support box is anchored at the sample extremes: c ranges over
/// [min - 10 range, min - delta] and d over [max + delta, max + 10 range]
/// with delta = 1e-6 range, so every observation stays strictly interior
/// for every candidate support. Needs at least five observations.
pub fn fit_four_parameter(model: Model, method: Method, data: &[f64]) -> Result<FitResult> {
    if data.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "four-parameter fit needs at least 5 observations, got {}",
            data.len()
        )));
    }
    if let Some(&bad) = data.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "non-finite observation {bad}"
        )));
    }
    let min = data.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    if range.is_nan() || range <= 0.0 {
        return Err(Error::InfeasibleBounds(
            "all observations are equal; the support cannot be estimated".into(),
        ));
    }
    let delta = 1e-6 * range;
    let c_bounds = (min - 10.0 * range, min - delta);
    let d_bounds = (max + delta, max + 10.0 * range);
    let (shape_bounds, shape_start) = match model {
        Model::Bmt => ((KAPPA_GUARD, 1.0 - KAPPA_GUARD), 0.6),
        Model::Beta | Model::Kumaraswamy => (SHAPE_BOUNDS, 1.0),
    };
    let spec = ObjectiveSpec {
        model,
        method,
        domain: BmtDomain::unit(), // unused by the four-parameter objective
        bounds: vec![c_bounds, d_bounds, shape_bounds, shape_bounds],
        start: vec![
            min - 0.05 * range,
            max + 0.05 * range,
            shape_start,
            shape_start,
        ],
    };
    spec.validate()?;

    let mut sorted = data.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite data"));
    let mut objective = move |theta: &[f64]| -> f64 {
        let Ok(domain) = BmtDomain::new(theta[0], theta[1]) else {
            return f64::NEG_INFINITY;
        };
        match build_model(model, &theta[2..], domain) {
            None => f64::NEG_INFINITY,
            Some(inst) => match method {
                Method::Mle => log_likelihood_inner(&inst, &sorted),
                Method::Mpse => sum_log_spacings_sorted(&inst, &sorted),
            },
        }
    };

    // the four-parameter objective can carry distant, nearly flat optima
    // (a light upper tail trades d against the second shape); probe the
    // far-support regions from their own starts and keep the best value
    let starts = vec![
        spec.start.clone(),
        vec![
            min - 0.05 * range,
            max + 2.0 * range,
            shape_start,
            shape_start,
        ],
        vec![
            min - 0.05 * range,
            max + 8.0 * range,
            shape_start,
            shape_start,
        ],
        vec![
            min - 2.0 * range,
            max + 0.05 * range,
            shape_start,
            shape_start,
        ],
    ];
    let outcome = run_multi_start(&mut objective, &starts, &spec.bounds);
    let domain = BmtDomain::new(outcome.x[0], outcome.x[1]).expect("box keeps c < min <= max < d");
    finish_fit(model, method, outcome, domain, data, 0, &spec.bounds)
}

/// Optimizes from every listed start and keeps the best value. When the
/// primary start fails to converge, up to three deterministically jittered
/// variants of it are tried before moving on.
fn run_multi_start(
    objective: &mut dyn FnMut(&[f64]) -> f64,
    starts: &[Vec<f64>],
    bounds: &[(f64, f64)],
) -> crate::optimize::MaximizeOutcome {
    let opts = MaximizeOptions::default();
    let lower: Vec<f64> = bounds.iter().map(|b| b.0).collect();
    let upper: Vec<f64> = bounds.iter().map(|b| b.1).collect();

    let mut best = maximize_box(objective, &starts[0], &lower, &upper, &opts);
    let mut total_evals = best.evaluations;
    let mut total_iters = best.iterations;
    let consider = |attempt: crate::optimize::MaximizeOutcome,
                    best: &mut crate::optimize::MaximizeOutcome| {
        let better = attempt.value > best.value
            || (attempt.converged && !best.converged && attempt.value >= best.value);
        if better {
            *best = attempt;
        }
    };

    if !best.converged {
        // deterministic jitter around the primary start
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut unit = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..3 {
            let jittered: Vec<f64> = starts[0]
                .iter()
                .zip(bounds)
                .map(|(&s, &(lo, hi))| {
                    let width = hi - lo;
                    let margin = 1e-6 * width;
                    (s + (unit() - 0.5) * 0.3 * width).clamp(lo + margin, hi - margin)
                })
                .collect();
            let attempt = maximize_box(objective, &jittered, &lower, &upper, &opts);
            total_evals += attempt.evaluations;
            total_iters += attempt.iterations;
            consider(attempt, &mut best);
            if best.converged {
                break;
            }
        }
    }

    for start in &starts[1..] {
        let attempt = maximize_box(objective, start, &lower, &upper, &opts);
        total_evals += attempt.evaluations;
        total_iters += attempt.iterations;
        consider(attempt, &mut best);
    }
    best.evaluations = total_evals;
    best.iterations = total_iters;
    best
}

#[allow(clippy::too_many_arguments)]
fn finish_fit(
    model: Model,
    method: Method,
    outcome: crate::optimize::MaximizeOutcome,
    domain: BmtDomain,
    data: &[f64],
    boundary_excluded: usize,
    bounds: &[(f64, f64)],
) -> Result<FitResult> {
    let n_params = outcome.x.len();
    let shape_offset = n_params - 2;
    let inst = build_model(model, &outcome.x[shape_offset..], domain)
        .ok_or_else(|| Error::InvalidArgument("estimate does not build a model".into()))?;
    let ll = log_likelihood(&inst, data)?;
    let sls = sum_log_spacings(&inst, data)?;
    let n_used = data.len() - ll.boundary_excluded;
    let (aic, bic) = information_criteria(n_params, ll.value, n_used);
    let bound_active = outcome
        .x
        .iter()
        .zip(bounds)
        .map(|(&v, &(lo, hi))| {
            let span = 1.0 + v.abs();
            v - lo <= 1e-9 * span || hi - v <= 1e-9 * span
        })
        .collect();
    Ok(FitResult {
        model,
        method,
        n_params,
        estimate: outcome.x,
        log_likelihood: ll.value,
        sum_log_spacings: sls.value,
        aic,
        bic,
        converged: outcome.converged,
        iterations: outcome.iterations,
        objective_evals: outcome.evaluations,
        bound_active,
        boundary_excluded,
        n_used,
    })
}
