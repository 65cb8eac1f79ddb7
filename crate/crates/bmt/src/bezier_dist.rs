//! Distributions whose CDF is traced by a Bezier curve.
//!
//! A validated control polygon defines a parametric curve (x(t), y(t)) with
//! both components nondecreasing on [0, 1]. The curve is the graph of a CDF
//! supported on [x(0), x(1)]: F(x) = y(x^-1(x)), the density is the ratio of
//! the parametric derivatives, and the quantile function composes x with the
//! inverse of y. Raw and central moments have a closed form as a sum over
//! weak compositions.

use crate::bezier::{self, binomial, check_cdf_conditions, ControlPoint, ControlPolygon};
use crate::error::{Error, Result};

/// Largest supported moment order.
pub const MAX_MOMENT_ORDER: u32 = 8;

/// A distribution on a bounded interval defined by a Bezier control polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierDistribution {
    polygon: ControlPolygon,
}

impl BezierDistribution {
    /// Validates `polygon` as a CDF and builds the distribution.
    ///
    /// A polygon indexed right-to-left is reversed. Polygons failing the
    /// monotonicity conditions, or collapsing to a point mass, are rejected.
    pub fn new(polygon: ControlPolygon) -> Result<Self> {
        let report = check_cdf_conditions(&polygon);
        if !report.is_valid() {
            let mut reasons = Vec::new();
            if !report.endpoint_ordinates_ok {
                reasons.push("endpoint ordinates outside [0, 1]");
            }
            if !report.x_nondecreasing {
                reasons.push("abscissa parametrization not nondecreasing");
            }
            if !report.y_nondecreasing {
                reasons.push("ordinate parametrization not nondecreasing");
            }
            if report.point_mass {
                reasons.push("all abscissae equal (point mass)");
            }
            return Err(Error::NotACdf(reasons.join("; ")));
        }
        let polygon = if report.reversed {
            polygon.reversed()
        } else {
            polygon
        };
        let pts = polygon.points();
        if pts[0].x >= pts[pts.len() - 1].x {
            return Err(Error::NotACdf(
                "support endpoints are not strictly ordered".into(),
            ));
        }
        Ok(Self { polygon })
    }

    pub fn polygon(&self) -> &ControlPolygon {
        &self.polygon
    }

    /// Support interval [x(0), x(1)].
    pub fn support(&self) -> (f64, f64) {
        let pts = self.polygon.points();
        (pts[0].x, pts[pts.len() - 1].x)
    }

    fn component_at(&self, t: f64, x_axis: bool) -> f64 {
        let pts = self.polygon.points();
        let n = self.polygon.degree();
        if t == 0.0 {
            return if x_axis { pts[0].x } else { pts[0].y };
        }
        if t == 1.0 {
            return if x_axis { pts[n].x } else { pts[n].y };
        }
        pts.iter()
            .enumerate()
            .map(|(i, p)| {
                let c = if x_axis { p.x } else { p.y };
                c * binomial(n, i) * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32)
            })
            .sum()
    }

    fn x_at(&self, t: f64) -> f64 {
        self.component_at(t, true)
    }

    fn y_at(&self, t: f64) -> f64 {
        self.component_at(t, false)
    }

    fn derivative_at(&self, t: f64, order: usize) -> (f64, f64) {
        let d = bezier::derivative(&self.polygon, order, t).expect("valid order and parameter");
        (d.x, d.y)
    }

    /// Inverts the abscissa parametrization: the parameter t in [0, 1] with
    /// x(t) = x, to within 1e-12 * max(1, |x|).
    ///
    /// Uses Newton iteration safeguarded by a bisection bracket; on flat
    /// stretches of x(t) the rightmost parameter is preferred, which keeps
    /// the resulting CDF right-continuous.
    pub fn t_of_x(&self, x: f64) -> Result<f64> {
        let (lo_x, hi_x) = self.support();
        if !(x >= lo_x && x <= hi_x) {
            return Err(Error::OutsideSupport {
                value: x,
                lower: lo_x,
                upper: hi_x,
            });
        }
        if x == lo_x {
            return Ok(0.0);
        }
        if x == hi_x {
            return Ok(1.0);
        }
        let tol = 0.5e-12 * x.abs().max(1.0);
        let mut a = 0.0;
        let mut b = 1.0;
        let mut t = (x - lo_x) / (hi_x - lo_x);
        for _ in 0..200 {
            let ft = self.x_at(t) - x;
            if ft.abs() <= tol {
                break;
            }
            if ft > 0.0 {
                b = t;
            } else {
                a = t;
            }
            let (dx, _) = self.derivative_at(t, 1);
            let mut next = if dx > 1e-300 { t - ft / dx } else { f64::NAN };
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - t).abs() <= 1e-17 {
                t = next;
                break;
            }
            t = next;
            if b - a <= 1e-16 {
                break;
            }
        }
        Ok(t.clamp(0.0, 1.0))
    }

    /// F(x): 0 below the support, 1 at and above its upper end, otherwise
    /// the curve ordinate at x^-1(x).
    pub fn cdf(&self, x: f64) -> f64 {
        let (lo_x, hi_x) = self.support();
        if x < lo_x || x.is_nan() {
            return 0.0;
        }
        if x >= hi_x {
            return 1.0;
        }
        let t = self.t_of_x(x).expect("x inside support");
        self.y_at(t).clamp(0.0, 1.0)
    }

    /// Density at x: zero outside the support, otherwise y'(t)/x'(t).
    ///
    /// Where the tangent is vertical (x'(t) = 0 with y'(t) > 0) the density
    /// is reported as `f64::INFINITY`.
    pub fn pdf(&self, x: f64) -> f64 {
        let (lo_x, hi_x) = self.support();
        if !(x >= lo_x && x <= hi_x) {
            return 0.0;
        }
        let t = self.t_of_x(x).expect("x inside support");
        let (dx, dy) = self.derivative_at(t, 1);
        let scale = (hi_x - lo_x).max(1.0);
        if dx.abs() > 1e-12 * scale {
            return (dy / dx).max(0.0);
        }
        if dy.abs() > 1e-12 {
            return f64::INFINITY;
        }
        // Both derivatives vanish: shared factor, take the next order.
        if self.polygon.degree() >= 2 {
            let (ddx, ddy) = self.derivative_at(t, 2);
            if ddx.abs() > 1e-12 * scale {
                return (ddy / ddx).max(0.0);
            }
        }
        0.0
    }

    /// Quantile by the generalized-inverse convention: the smallest x with
    /// F(x) >= p. Satisfies |F(quantile(p)) - p| <= 1e-10 wherever F is
    /// continuous and strictly increasing.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        let (lo_x, hi_x) = self.support();
        let y0 = self.y_at(0.0);
        let y1 = self.y_at(1.0);
        if p <= y0 {
            return Ok(lo_x);
        }
        if p >= y1 {
            // Mass above y(1) sits as an atom at the upper endpoint.
            return Ok(hi_x);
        }
        // Leftmost crossing of y(t) = p.
        let mut a = 0.0;
        let mut b = 1.0;
        for _ in 0..40 {
            let mid = 0.5 * (a + b);
            if self.y_at(mid) >= p {
                b = mid;
            } else {
                a = mid;
            }
        }
        let mut t = 0.5 * (a + b);
        for _ in 0..60 {
            let ft = self.y_at(t) - p;
            if ft.abs() <= 1e-13 {
                break;
            }
            if ft >= 0.0 {
                b = t;
            } else {
                a = t;
            }
            let (_, dy) = self.derivative_at(t, 1);
            let mut next = if dy > 1e-300 { t - ft / dy } else { f64::NAN };
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - t).abs() <= 1e-17 {
                t = next;
                break;
            }
            t = next;
            if b - a <= 1e-16 {
                break;
            }
        }
        Ok(self.x_at(t))
    }

    /// r-th raw moment, 1 <= r <= 8, by the closed-form sum over weak
    /// compositions of r among the control abscissae.
    pub fn raw_moment(&self, r: u32) -> Result<f64> {
        check_moment_order(r)?;
        let abscissae: Vec<f64> = self.polygon.points().iter().map(|p| p.x).collect();
        Ok(self.moment_sum(&abscissae, r as usize))
    }

    /// r-th central moment, 1 <= r <= 8: the raw-moment sum with the
    /// abscissae shifted by the mean.
    pub fn central_moment(&self, r: u32) -> Result<f64> {
        check_moment_order(r)?;
        let mean = self.raw_moment(1)?;
        let shifted: Vec<f64> = self.polygon.points().iter().map(|p| p.x - mean).collect();
        Ok(self.moment_sum(&shifted, r as usize))
    }

    fn moment_sum(&self, abscissae: &[f64], r: usize) -> f64 {
        let n = self.polygon.degree();
        let ydiff = self.polygon.y_differences();
        let binom_n: Vec<f64> = (0..=n).map(|i| binomial(n, i)).collect();
        let col_weight: Vec<f64> = (0..n).map(|j| binomial(n - 1, j) * ydiff[j]).collect();
        let big_n = (r + 1) * n - 1;

        let mut total = 0.0;
        let mut counts = vec![0usize; n + 1];
        for_each_weak_composition(r, n + 1, &mut counts, &mut |k: &[usize]| {
            let mut prod = 1.0;
            let mut kfact = 1.0;
            let mut index_sum = 0usize;
            for (i, &ki) in k.iter().enumerate() {
                if ki > 0 {
                    prod *= binom_n[i].powi(ki as i32) * abscissae[i].powi(ki as i32);
                    kfact *= bezier::factorial(ki);
                    index_sum += i * ki;
                }
            }
            if prod == 0.0 {
                return;
            }
            for (j, &w) in col_weight.iter().enumerate() {
                if w != 0.0 {
                    total += prod * w / (kfact * binomial(big_n, j + index_sum));
                }
            }
        });
        bezier::factorial(r) / (r as f64 + 1.0) * total
    }

    /// The distribution of u*X + v for u > 0: same ordinates, abscissae
    /// mapped affinely.
    pub fn affine_transform(&self, u: f64, v: f64) -> Result<BezierDistribution> {
        if !u.is_finite() || u <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "affine transform needs finite u > 0 and finite v, got u={u}, v={v}"
            )));
        }
        let points = self
            .polygon
            .points()
            .iter()
            .map(|p| ControlPoint::new(u * p.x + v, p.y))
            .collect();
        BezierDistribution::new(ControlPolygon::new(points)?)
    }
}

fn check_moment_order(r: u32) -> Result<()> {
    if r == 0 || r > MAX_MOMENT_ORDER {
        return Err(Error::InvalidArgument(format!(
            "moment order {r} outside 1..={MAX_MOMENT_ORDER}"
        )));
    }
    Ok(())
}

/// Calls `f` for every tuple of `parts` nonnegative integers summing to
/// `total`. Cost grows like C(total + parts - 1, parts - 1).
fn for_each_weak_composition(
    total: usize,
    parts: usize,
    scratch: &mut [usize],
    f: &mut impl FnMut(&[usize]),
) {
    fn rec(remaining: usize, position: usize, scratch: &mut [usize], f: &mut impl FnMut(&[usize])) {
        if position == scratch.len() - 1 {
            scratch[position] = remaining;
            f(scratch);
            return;
        }
        for v in 0..=remaining {
            scratch[position] = v;
            rec(remaining - v, position + 1, scratch, f);
        }
    }
    debug_assert_eq!(scratch.len(), parts);
    rec(total, 0, scratch, f);
}
