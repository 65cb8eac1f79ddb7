//! Serializable output documents and the CSV renderings.

use bmt::descriptives::{MeasureGrid, RegionPoint, MEASURE_NAMES};
use bmt::estimation::FitResult;
use bmt::simulation::RecoveryReport;
use bmt::SampleSummary;
use serde::{Deserialize, Serialize};

/// Floats are written with 17 significant digits so a reader recovers the
/// exact binary value.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FitRow {
    #[serde(flatten)]
    pub result: FitResult,
    pub best_log_likelihood: bool,
    pub best_sum_log_spacings: bool,
}

/// The full fitting report: data summary plus one row per model and method,
/// with the best value of each objective column marked.
#[derive(Debug, Serialize, Deserialize)]
pub struct FitReportDocument {
    pub summary: SampleSummary,
    pub fits: Vec<FitRow>,
}

impl FitReportDocument {
    pub fn new(summary: SampleSummary, results: Vec<FitResult>) -> Self {
        let best_ll = results
            .iter()
            .map(|r| r.log_likelihood)
            .fold(f64::NEG_INFINITY, f64::max);
        let best_sls = results
            .iter()
            .map(|r| r.sum_log_spacings)
            .fold(f64::NEG_INFINITY, f64::max);
        let fits = results
            .into_iter()
            .map(|result| FitRow {
                best_log_likelihood: result.log_likelihood == best_ll,
                best_sum_log_spacings: result.sum_log_spacings == best_sls,
                result,
            })
            .collect();
        Self { summary, fits }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "model,method,n_params,theta_1,theta_2,theta_3,theta_4,log_likelihood,\
             sum_log_spacings,aic,bic,converged,iterations,objective_evals,\
             boundary_excluded,n_used,bound_active,best_log_likelihood,best_sum_log_spacings\n",
        );
        for row in &self.fits {
            let r = &row.result;
            let mut theta = [String::new(), String::new(), String::new(), String::new()];
            for (slot, v) in theta.iter_mut().zip(&r.estimate) {
                *slot = fmt_f64(*v);
            }
            let bound_active: Vec<&str> = r
                .bound_active
                .iter()
                .map(|b| if *b { "true" } else { "false" })
                .collect();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.model,
                r.method,
                r.n_params,
                theta[0],
                theta[1],
                theta[2],
                theta[3],
                fmt_f64(r.log_likelihood),
                fmt_f64(r.sum_log_spacings),
                fmt_f64(r.aic),
                fmt_f64(r.bic),
                r.converged,
                r.iterations,
                r.objective_evals,
                r.boundary_excluded,
                r.n_used,
                bound_active.join("|"),
                row.best_log_likelihood,
                row.best_sum_log_spacings,
            ));
        }
        out
    }
}

pub fn summary_csv(s: &SampleSummary) -> String {
    format!(
        "n,min,max,median,mean,sd,skewness,kurtosis\n{},{},{},{},{},{},{},{}\n",
        s.n,
        fmt_f64(s.min),
        fmt_f64(s.max),
        fmt_f64(s.median),
        fmt_f64(s.mean),
        fmt_f64(s.sd),
        fmt_f64(s.skewness),
        fmt_f64(s.kurtosis),
    )
}

pub fn region_csv(points: &[RegionPoint]) -> String {
    let mut out = String::from("kappa_l,kappa_r,skew2,kurt\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(p.kappa_l),
            fmt_f64(p.kappa_r),
            fmt_f64(p.skew2),
            fmt_f64(p.kurt)
        ));
    }
    out
}

/// Long format: one row per (cell, measure).
pub fn grid_csv(grid: &MeasureGrid) -> String {
    let mut out = String::from("kappa_l,kappa_r,measure,value\n");
    for cell in &grid.cells {
        for (name, value) in MEASURE_NAMES.iter().zip(cell.values()) {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(cell.kappa_l),
                fmt_f64(cell.kappa_r),
                name,
                fmt_f64(value)
            ));
        }
    }
    out
}

/// Table-style layout: one row per (size, theta, method, statistic).
pub fn recovery_csv(report: &RecoveryReport) -> String {
    let mut out = String::from(
        "n,kappa_l,kappa_r,method,statistic,abs_err_kappa_l,abs_err_kappa_r,failures\n",
    );
    for cell in &report.cells {
        for (stat, l, r) in [
            ("mean", cell.kappa_l_error.mean, cell.kappa_r_error.mean),
            (
                "median",
                cell.kappa_l_error.median,
                cell.kappa_r_error.median,
            ),
            ("sd", cell.kappa_l_error.sd, cell.kappa_r_error.sd),
        ] {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                cell.size,
                fmt_f64(cell.kappa_l),
                fmt_f64(cell.kappa_r),
                cell.method,
                stat,
                fmt_f64(l),
                fmt_f64(r),
                cell.failures
            ));
        }
    }
    out
}
