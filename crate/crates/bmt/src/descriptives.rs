//! Sample summaries and population descriptive-measure surfaces.

use serde::{Deserialize, Serialize};

use crate::bmt::{BmtDistribution, BmtParams};
use crate::error::{Error, Result};

/// The usual one-row data summary: n, min, max, median, mean, sd, and the
/// moment estimators of skewness and kurtosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

/// Summarizes `data` (at least two finite values).
///
/// The standard deviation uses the n-1 divisor; skewness and kurtosis are
/// the plain moment ratios m3 / m2^(3/2) and m4 / m2^2 with central moments
/// divided by n, matching the population definitions. The median of an
/// even-sized sample is the midpoint of the two central order statistics.
pub fn summarize(data: &[f64]) -> Result<SampleSummary> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "summary needs at least 2 observations, got {n}"
        )));
    }
    if let Some(&bad) = data.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "non-finite observation {bad}"
        )));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite data"));
    let nf = n as f64;
    let mean = sorted.iter().sum::<f64>() / nf;
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &x in &sorted {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let sd = (m2 / (nf - 1.0)).sqrt();
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2))
    } else {
        (0.0, 0.0)
    };
    Ok(SampleSummary {
        n,
        min: sorted[0],
        max: sorted[n - 1],
        median,
        mean,
        sd,
        skewness,
        kurtosis,
    })
}

/// Names of the per-cell measures, in the emission order of [`MeasureCell`].
pub const MEASURE_NAMES: [&str; 8] = [
    "mean", "median", "mode", "variance", "sd", "iqr", "skewness", "kurtosis",
];

/// All closed-form descriptive measures at one parameter pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureCell {
    pub kappa_l: f64,
    pub kappa_r: f64,
    pub mean: f64,
    pub median: f64,
    pub mode: f64,
    pub variance: f64,
    pub sd: f64,
    pub iqr: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

impl MeasureCell {
    pub fn values(&self) -> [f64; 8] {
        [
            self.mean,
            self.median,
            self.mode,
            self.variance,
            self.sd,
            self.iqr,
            self.skewness,
            self.kurtosis,
        ]
    }
}

/// Descriptive measures over a uniform open-interval parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureGrid {
    pub resolution: usize,
    pub cells: Vec<MeasureCell>,
}

/// Evaluates every closed-form measure on the grid
/// kappa = (j + 0.5) / resolution, j = 0..resolution, both axes.
pub fn measure_grid(resolution: usize) -> Result<MeasureGrid> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let mut cells = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let kappa_l = (i as f64 + 0.5) / resolution as f64;
            let kappa_r = (j as f64 + 0.5) / resolution as f64;
            let p = BmtParams::new(kappa_l, kappa_r).expect("grid point inside (0, 1)");
            let d = BmtDistribution::standard(p);
            cells.push(MeasureCell {
                kappa_l,
                kappa_r,
                mean: d.mean(),
                median: d.median(),
                mode: d.mode(),
                variance: d.variance(),
                sd: d.sd(),
                iqr: d.iqr(),
                skewness: d.skewness(),
                kurtosis: d.kurtosis(),
            });
        }
    }
    Ok(MeasureGrid { resolution, cells })
}

/// One point of the squared-skewness versus kurtosis diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub kappa_l: f64,
    pub kappa_r: f64,
    pub skew2: f64,
    pub kurt: f64,
}

/// Maps the parameter grid through (Skew^2, Kurt). Every point of the
/// family satisfies the Pearson inequality Kurt > 1 + Skew^2.
pub fn skew2_kurt_region(resolution: usize) -> Result<Vec<RegionPoint>> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!(
            "region resolution must be at least 2, got {resolution}"
        )));
    }
    let mut points = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let kappa_l = (i as f64 + 0.5) / resolution as f64;
            let kappa_r = (j as f64 + 0.5) / resolution as f64;
            let p = BmtParams::new(kappa_l, kappa_r).expect("grid point inside (0, 1)");
            let skew = p.skewness();
            points.push(RegionPoint {
                kappa_l,
                kappa_r,
                skew2: skew * skew,
                kurt: p.kurtosis(),
            });
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_sample() {
        let s = summarize(&[0.0, 1.0]).unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(s.min, 0.0);
        assert_eq!(s.max, 1.0);
        assert_eq!(s.median, 0.5);
        assert_eq!(s.mean, 0.5);
        assert!((s.sd - 0.5f64.sqrt()).abs() <= 1e-15);
        assert_eq!(s.skewness, 0.0);
        assert_eq!(s.kurtosis, 1.0);
    }

    #[test]
    fn summary_preconditions() {
        assert!(summarize(&[1.0]).is_err());
        assert!(summarize(&[]).is_err());
        assert!(summarize(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn summary_permutation_invariant() {
        let a = summarize(&[3.0, 1.0, 2.0, 5.0]).unwrap();
        let b = summarize(&[5.0, 2.0, 3.0, 1.0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn summary_affine_equivariance() {
        let data = [0.12, 0.4, 0.43, 0.61, 0.77, 0.95, 0.31];
        let (u, v) = (2.5, -3.0);
        let scaled: Vec<f64> = data.iter().map(|&x| u * x + v).collect();
        let a = summarize(&data).unwrap();
        let b = summarize(&scaled).unwrap();
        assert!((b.mean - (u * a.mean + v)).abs() <= 1e-10);
        assert!((b.median - (u * a.median + v)).abs() <= 1e-10);
        assert!((b.sd - u * a.sd).abs() <= 1e-10);
        assert!((b.skewness - a.skewness).abs() <= 1e-10);
        assert!((b.kurtosis - a.kurtosis).abs() <= 1e-10);
    }

    #[test]
    fn summary_median_odd_sample() {
        let s = summarize(&[9.0, 1.0, 5.0]).unwrap();
        assert_eq!(s.median, 5.0);
    }

    #[test]
    fn grid_symmetries() {
        let grid = measure_grid(8).unwrap();
        assert_eq!(grid.cells.len(), 64);
        let at = |i: usize, j: usize| &grid.cells[i * 8 + j];
        for i in 0..8 {
            for j in 0..8 {
                let a = at(i, j);
                let b = at(j, i);
                // symmetric measures
                assert_eq!(a.variance, b.variance);
                assert_eq!(a.sd, b.sd);
                assert!((a.iqr - b.iqr).abs() <= 1e-15);
                assert_eq!(a.kurtosis, b.kurtosis);
                // antisymmetric shift about 1/2
                assert!((a.mean + b.mean - 1.0).abs() <= 1e-12);
                assert!((a.median + b.median - 1.0).abs() <= 1e-12);
                assert!((a.skewness + b.skewness).abs() <= 1e-12);
            }
            let diag = at(i, i);
            assert!((diag.mean - 0.5).abs() <= 1e-15);
            assert!((diag.median - 0.5).abs() <= 1e-15);
            assert!((diag.mode - 0.5).abs() <= 1e-12);
            assert_eq!(diag.skewness, 0.0);
        }
    }

    #[test]
    fn grid_rejects_tiny_resolution() {
        assert!(measure_grid(1).is_err());
        assert!(skew2_kurt_region(0).is_err());
    }

    #[test]
    fn region_pearson_bound_and_diagonal() {
        let points = skew2_kurt_region(32).unwrap();
        for p in &points {
            assert!(p.kurt > 1.0 + p.skew2, "{p:?}");
        }
        // diagonal cells sit on the kurtosis axis
        let diag: Vec<&RegionPoint> = points.iter().filter(|p| p.kappa_l == p.kappa_r).collect();
        assert!(!diag.is_empty());
        for p in &diag {
            assert_eq!(p.skew2, 0.0);
        }
        let kmin = diag.iter().map(|p| p.kurt).fold(f64::INFINITY, f64::min);
        let kmax = diag.iter().map(|p| p.kurt).fold(0.0, f64::max);
        assert!(
            kmin < 1.9 && kmax > 6.0,
            "kurt diagonal span [{kmin}, {kmax}]"
        );
    }
}
