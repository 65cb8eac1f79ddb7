//! Parameter-recovery simulation harness.
//!
//! Simulates samples from known BMT parameter vectors, refits them by
//! maximum likelihood and/or maximum product of spacings from the fixed
//! start (0.6, 0.6), and aggregates the absolute estimation errors per
//! (sample size, parameter vector, method) cell. Replicates run in
//! parallel; aggregation is ordered by replicate index, so a report is a
//! pure function of its configuration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bmt::{BmtDistribution, BmtDomain, BmtParams};
use crate::error::{Error, Result};
use crate::estimation::{fit, Method, Model, ObjectiveSpec};

/// Experiment layout: replicate count, sample sizes, true parameter
/// vectors, estimation methods, and the base seed.
#[derive(Debug, Clone)]
pub struct RecoveryConfig {
    pub replicates: usize,
    pub sizes: Vec<usize>,
    pub thetas: Vec<BmtParams>,
    pub methods: Vec<Method>,
    pub base_seed: u64,
}

impl RecoveryConfig {
    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidArgument("replicates must be >= 1".into()));
        }
        if self.sizes.is_empty() || self.thetas.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidArgument(
                "sizes, thetas, and methods must be nonempty".into(),
            ));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 5) {
            return Err(Error::InvalidArgument(format!(
                "sample sizes must be >= 5, got {n}"
            )));
        }
        Ok(())
    }
}

/// Mean, median, and standard deviation of a batch of absolute errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
}

fn error_stats(errors: &[f64]) -> ErrorStats {
    let n = errors.len() as f64;
    if errors.is_empty() {
        return ErrorStats {
            mean: f64::NAN,
            median: f64::NAN,
            sd: f64::NAN,
        };
    }
    let mean = errors.iter().sum::<f64>() / n;
    let mut sorted = errors.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite errors"));
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let sd = if errors.len() > 1 {
        (errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    ErrorStats { mean, median, sd }
}

/// Per-method outcome of one replicate: component absolute errors when the
/// fit converged, plus a spacings-bound violation flag checked on every
/// performed fit.
type ReplicateOutcome = (Option<[f64; 2]>, bool);

/// Aggregated absolute errors for one (size, theta, method) cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryCell {
    pub size: usize,
    pub kappa_l: f64,
    pub kappa_r: f64,
    pub method: Method,
    pub kappa_l_error: ErrorStats,
    pub kappa_r_error: ErrorStats,
    /// Fits excluded from aggregation because the optimizer reported
    /// non-convergence.
    pub failures: usize,
    pub replicates_used: usize,
    /// Sum of spacings-bound violations observed across the cell's fits
    /// (the spacings objective can never exceed (n+1) ln(1/(n+1))).
    pub spacings_bound_violations: usize,
}

/// A full recovery experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub base_seed: u64,
    pub replicates: usize,
    pub cells: Vec<RecoveryCell>,
}

impl RecoveryReport {
    pub fn cell(&self, size: usize, theta: (f64, f64), method: Method) -> Option<&RecoveryCell> {
        self.cells.iter().find(|c| {
            c.size == size && c.method == method && c.kappa_l == theta.0 && c.kappa_r == theta.1
        })
    }
}

/// Runs the experiment described by `config`.
///
/// Each (size, theta) cell draws `replicates` independent samples with a
/// per-replicate generator stream derived from (base_seed, cell index,
/// replicate index); the same sample feeds every method. Deterministic for
/// a fixed configuration regardless of thread scheduling.
pub fn run_recovery(config: &RecoveryConfig) -> Result<RecoveryReport> {
    config.validate()?;
    let mut cells = Vec::new();
    for (size_idx, &size) in config.sizes.iter().enumerate() {
        for (theta_idx, theta) in config.thetas.iter().enumerate() {
            let cell_index = (size_idx * config.thetas.len() + theta_idx) as u64;
            let dist = BmtDistribution::standard(*theta);
            let truth = [theta.kappa_l(), theta.kappa_r()];
            let methods = config.methods.clone();

            let replicate_results: Vec<Vec<ReplicateOutcome>> = (0..config.replicates)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.base_seed);
                    rng.set_stream((cell_index << 32) | rep as u64);
                    let sample = dist.sample_with(size, &mut rng);
                    methods
                        .iter()
                        .map(|&method| {
                            let spec =
                                ObjectiveSpec::two_parameter(Model::Bmt, method, BmtDomain::unit());
                            match fit(&spec, &sample) {
                                Ok(res) => {
                                    let bound =
                                        (size as f64 + 1.0) * (1.0 / (size as f64 + 1.0)).ln();
                                    let violated = res.sum_log_spacings > bound;
                                    let errors = res.converged.then(|| {
                                        [
                                            (res.estimate[0] - truth[0]).abs(),
                                            (res.estimate[1] - truth[1]).abs(),
                                        ]
                                    });
                                    (errors, violated)
                                }
                                Err(_) => (None, false),
                            }
                        })
                        .collect()
                })
                .collect();

            for (m_idx, &method) in config.methods.iter().enumerate() {
                let mut errs_l = Vec::with_capacity(config.replicates);
                let mut errs_r = Vec::with_capacity(config.replicates);
                let mut failures = 0usize;
                let mut violations = 0usize;
                for rep in &replicate_results {
                    let (errors, violated) = rep[m_idx];
                    if violated {
                        violations += 1;
                    }
                    match errors {
                        Some(errs) => {
                            errs_l.push(errs[0]);
                            errs_r.push(errs[1]);
                        }
                        None => failures += 1,
                    }
                }
                cells.push(RecoveryCell {
                    size,
                    kappa_l: truth[0],
                    kappa_r: truth[1],
                    method,
                    kappa_l_error: error_stats(&errs_l),
                    kappa_r_error: error_stats(&errs_r),
                    failures,
                    replicates_used: errs_l.len(),
                    spacings_bound_violations: violations,
                });
            }
        }
    }
    Ok(RecoveryReport {
        base_seed: config.base_seed,
        replicates: config.replicates,
        cells,
    })
}
