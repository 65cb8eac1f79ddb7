//! Bernstein polynomials and planar Bezier curves.
//!
//! A curve of degree `n` is defined by `n + 1` control points and evaluated
//! in the Bernstein basis. On top of evaluation and derivatives this module
//! provides the validity test deciding whether a control polygon traces a
//! cumulative distribution function: the endpoint ordinates must stay in
//! [0, 1] and both coordinate difference forms must be nonnegative on the
//! whole parameter interval.

use crate::error::{Error, Result};

/// Largest supported curve degree. Binomial coefficients up to this degree
/// are exactly representable in f64 when built by iterative multiplication.
pub const MAX_DEGREE: usize = 30;

/// A 2-D control point: abscissa on the variate scale, ordinate on the
/// probability scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlPoint {
    pub x: f64,
    pub y: f64,
}

impl ControlPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// An ordered list of at least two finite control points.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPolygon {
    points: Vec<ControlPoint>,
}

impl ControlPolygon {
    /// Builds a polygon from `points`. Requires at least two points, all
    /// finite, and degree at most [`MAX_DEGREE`].
    pub fn new(points: Vec<ControlPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "control polygon needs at least 2 points, got {}",
                points.len()
            )));
        }
        if points.len() - 1 > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "curve degree {} exceeds the supported maximum {}",
                points.len() - 1,
                MAX_DEGREE
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "control point ({}, {}) is not finite",
                p.x, p.y
            )));
        }
        Ok(Self { points })
    }

    /// Convenience constructor from `(x, y)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(x, y)| ControlPoint::new(x, y))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[ControlPoint] {
        &self.points
    }

    /// The same curve traced in the opposite direction.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self { points }
    }

    pub(crate) fn x_differences(&self) -> Vec<f64> {
        self.points.windows(2).map(|w| w[1].x - w[0].x).collect()
    }

    pub(crate) fn y_differences(&self) -> Vec<f64> {
        self.points.windows(2).map(|w| w[1].y - w[0].y).collect()
    }
}

/// Binomial coefficient C(n, k) by iterative multiplication.
///
/// Exact for all n up to [`MAX_DEGREE`]; every intermediate value is an
/// integer below 2^53.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - k + i + 1) as f64 / (i + 1) as f64;
    }
    acc
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Bernstein basis polynomial B_i^n(t) = C(n, i) t^i (1 - t)^(n - i).
pub fn bernstein(i: usize, n: usize, t: f64) -> Result<f64> {
    if i > n {
        return Err(Error::InvalidArgument(format!(
            "bernstein index {i} out of range for degree {n}"
        )));
    }
    Ok(binomial(n, i) * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32))
}

fn require_unit_interval(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "curve parameter {t} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Evaluates the curve at parameter `t` in [0, 1].
///
/// Endpoints interpolate exactly: t = 0 gives the first control point and
/// t = 1 the last, with no floating drift.
pub fn eval(poly: &ControlPolygon, t: f64) -> Result<ControlPoint> {
    require_unit_interval(t)?;
    let pts = poly.points();
    if t == 0.0 {
        return Ok(pts[0]);
    }
    if t == 1.0 {
        return Ok(pts[pts.len() - 1]);
    }
    let n = poly.degree();
    let mut x = 0.0;
    let mut y = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let w = bernstein(i, n, t)?;
        x += w * p.x;
        y += w * p.y;
    }
    Ok(ControlPoint::new(x, y))
}

/// The r-th derivative of the curve at `t`, for 1 <= r <= degree.
///
/// Computed as n!/(n-r)! times the degree-(n-r) curve over the r-th forward
/// differences of the control points.
pub fn derivative(poly: &ControlPolygon, r: usize, t: f64) -> Result<ControlPoint> {
    let n = poly.degree();
    if r == 0 || r > n {
        return Err(Error::InvalidArgument(format!(
            "derivative order {r} out of range for degree {n}"
        )));
    }
    require_unit_interval(t)?;
    let mut diffs: Vec<ControlPoint> = poly.points().to_vec();
    for _ in 0..r {
        diffs = diffs
            .windows(2)
            .map(|w| ControlPoint::new(w[1].x - w[0].x, w[1].y - w[0].y))
            .collect();
    }
    let m = n - r;
    let factor: f64 = (m + 1..=n).map(|j| j as f64).product();
    let mut x = 0.0;
    let mut y = 0.0;
    for (i, p) in diffs.iter().enumerate() {
        let w = bernstein(i, m, t)?;
        x += w * p.x;
        y += w * p.y;
    }
    Ok(ControlPoint::new(factor * x, factor * y))
}

/// Slack for the sufficient all-differences-nonnegative test.
const DIFF_SLACK: f64 = 1e-12;
/// Slack for the grid/stationary-point minimum of a difference form.
const FORM_SLACK: f64 = 1e-9;
const GRID_POINTS: usize = 4097;

/// Outcome of the CDF validity test for a control polygon.
///
/// `min_x_form`/`min_y_form` hold the certified lower bound on the
/// corresponding coordinate difference form over [0, 1]: the smallest
/// coefficient when the fast path applies (convex-hull bound), otherwise the
/// refined grid minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfConditionReport {
    /// First ordinate >= 0 and last ordinate <= 1.
    pub endpoint_ordinates_ok: bool,
    /// Abscissa parametrization is nondecreasing over [0, 1].
    pub x_nondecreasing: bool,
    /// Ordinate parametrization is nondecreasing over [0, 1].
    pub y_nondecreasing: bool,
    /// All abscissae coincide; the curve would be a point mass.
    pub point_mass: bool,
    /// The polygon was indexed in inverse orientation (all differences
    /// nonpositive) and was analyzed reversed.
    pub reversed: bool,
    pub min_x_form: f64,
    pub min_y_form: f64,
}

impl CdfConditionReport {
    pub fn is_valid(&self) -> bool {
        self.endpoint_ordinates_ok
            && self.x_nondecreasing
            && self.y_nondecreasing
            && !self.point_mass
    }
}

/// Checks whether the polygon traces a CDF.
///
/// Fast path: all coordinate forward differences nonnegative (sufficient,
/// since the Bernstein basis is nonnegative). Otherwise each difference form
/// is minimized over a dense grid refined at interior stationary points, and
/// must stay above `-1e-9`. A polygon whose differences are all nonpositive
/// traces the same curve right-to-left and is analyzed reversed.
pub fn check_cdf_conditions(poly: &ControlPolygon) -> CdfConditionReport {
    let mut xdiff = poly.x_differences();
    let mut ydiff = poly.y_differences();

    let all_nonpositive = |d: &[f64]| d.iter().all(|&v| v <= DIFF_SLACK);
    let any_negative = |d: &[f64]| d.iter().any(|&v| v < -DIFF_SLACK);
    let reversed = (any_negative(&xdiff) || any_negative(&ydiff))
        && all_nonpositive(&xdiff)
        && all_nonpositive(&ydiff);
    if reversed {
        for v in xdiff.iter_mut().chain(ydiff.iter_mut()) {
            *v = -*v;
        }
        xdiff.reverse();
        ydiff.reverse();
    }

    let pts = if reversed {
        let mut p = poly.points().to_vec();
        p.reverse();
        p
    } else {
        poly.points().to_vec()
    };
    let endpoint_ordinates_ok = pts[0].y >= -DIFF_SLACK && pts[pts.len() - 1].y <= 1.0 + DIFF_SLACK;

    let span = poly
        .points()
        .iter()
        .map(|p| p.x)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
    let point_mass = span.1 - span.0 == 0.0;

    let (x_nondecreasing, min_x_form) = nondecreasing_form(&xdiff);
    let (y_nondecreasing, min_y_form) = nondecreasing_form(&ydiff);

    CdfConditionReport {
        endpoint_ordinates_ok,
        x_nondecreasing,
        y_nondecreasing,
        point_mass,
        reversed,
        min_x_form,
        min_y_form,
    }
}

fn nondecreasing_form(diffs: &[f64]) -> (bool, f64) {
    let min_diff = diffs.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_diff >= -DIFF_SLACK {
        // Convex hull: the form is bounded below by its smallest coefficient.
        return (true, min_diff);
    }
    let min = bernstein_form_min(diffs);
    (min >= -FORM_SLACK, min)
}

/// Evaluates sum_i c_i B_i^m(t) for m = coeffs.len() - 1.
fn bernstein_form(coeffs: &[f64], t: f64) -> f64 {
    let m = coeffs.len() - 1;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| c * binomial(m, i) * t.powi(i as i32) * (1.0 - t).powi((m - i) as i32))
        .sum()
}

/// Minimum of a Bernstein form over [0, 1]: dense grid plus stationary
/// points recovered by safeguarded Newton on the derivative form.
fn bernstein_form_min(coeffs: &[f64]) -> f64 {
    let m = coeffs.len() - 1;
    if m == 0 {
        return coeffs[0];
    }
    let deriv: Vec<f64> = coeffs
        .windows(2)
        .map(|w| m as f64 * (w[1] - w[0]))
        .collect();

    let h = 1.0 / (GRID_POINTS - 1) as f64;
    let values: Vec<f64> = (0..GRID_POINTS)
        .map(|i| bernstein_form(coeffs, i as f64 * h))
        .collect();
    let mut min = values.iter().cloned().fold(f64::INFINITY, f64::min);

    // Refine every interior grid local minimum.
    for i in 1..GRID_POINTS - 1 {
        if values[i] <= values[i - 1] && values[i] <= values[i + 1] {
            let lo = (i - 1) as f64 * h;
            let hi = (i + 1) as f64 * h;
            if let Some(t) = stationary_point(&deriv, lo, hi) {
                min = min.min(bernstein_form(coeffs, t));
            }
        }
    }
    min
}

/// Root of the derivative form in [lo, hi], assuming a sign change
/// d(lo) <= 0 <= d(hi). Newton steps falling outside the bracket are
/// replaced by bisection.
fn stationary_point(deriv: &[f64], lo: f64, hi: f64) -> Option<f64> {
    let f = |t: f64| bernstein_form(deriv, t);
    let (mut a, mut b) = (lo, hi);
    if f(a) > 0.0 || f(b) < 0.0 {
        return None;
    }
    let second: Vec<f64> = if deriv.len() >= 2 {
        deriv
            .windows(2)
            .map(|w| (deriv.len() - 1) as f64 * (w[1] - w[0]))
            .collect()
    } else {
        return Some(0.5 * (a + b)); // derivative form is constant
    };
    let mut t = 0.5 * (a + b);
    for _ in 0..60 {
        let ft = f(t);
        if ft > 0.0 {
            b = t;
        } else {
            a = t;
        }
        let dft = bernstein_form(&second, t);
        let mut next = if dft.abs() > 1e-300 {
            t - ft / dft
        } else {
            f64::NAN
        };
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if (next - t).abs() <= 1e-15 {
            return Some(next);
        }
        t = next;
        if b - a <= 1e-15 {
            break;
        }
    }
    Some(t)
}
