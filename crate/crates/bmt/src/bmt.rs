//! The BMT distribution.
//!
//! BMT(kappa_l, kappa_r) is the continuous distribution on [0, 1] whose CDF
//! is the cubic Bezier curve with control points (0,0), (kappa_l,0),
//! (1-kappa_r,1), (1,1). The shape parameters live in (0,1) and read as the
//! curvature degree of the left and right tail; their difference indicates
//! asymmetry. Everything of interest is in closed form: the quantile
//! function (hence median and interquartile range), the mode, and all
//! moments. The four-parameter form BMT(c, d, kappa_l, kappa_r) moves the
//! support to [c, d] by a linear map.
//!
//! Parametrically, with t in [0, 1]:
//!
//! ```text
//! x(t) = (3kl + 3kr - 2) t^3 + (-6kl - 3kr + 3) t^2 + 3kl t
//! F(x(t)) = -2 t^3 + 3 t^2
//! f(x(t)) = 2 t (1 - t) / ((3kl + 3kr - 2) t^2 + (-4kl - 2kr + 2) t + kl)
//! ```
//!
//! Evaluating the CDF at a given x means inverting the monotone cubic x(t),
//! done here in closed form with a Newton clean-up. Inverting F's ordinate
//! cubic needs no iteration at all (Viete's trigonometric roots), which is
//! what makes sampling by inversion cheap.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bezier::{binomial, factorial, ControlPolygon};
use crate::bezier_dist::{BezierDistribution, MAX_MOMENT_ORDER};
use crate::error::{Error, Result};

/// Guard width for the open parameter interval: constructors accept kappa
/// in [1e-9, 1 - 1e-9] and reject anything closer to 0 or 1.
pub const KAPPA_GUARD: f64 = 1e-9;

/// Leading cubic coefficients smaller than this are treated as quadratic
/// when inverting x(t); a Newton polish absorbs the truncation.
const CUBIC_DEGENERATE: f64 = 1e-7;

/// Shape parameter pair of a BMT distribution on the unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmtParams {
    kappa_l: f64,
    kappa_r: f64,
}

impl BmtParams {
    /// Both parameters must lie in [1e-9, 1 - 1e-9].
    pub fn new(kappa_l: f64, kappa_r: f64) -> Result<Self> {
        for (name, v) in [("kappa_l", kappa_l), ("kappa_r", kappa_r)] {
            if !v.is_finite() || !(KAPPA_GUARD..=1.0 - KAPPA_GUARD).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {v} outside [{KAPPA_GUARD}, {}]",
                    1.0 - KAPPA_GUARD
                )));
            }
        }
        Ok(Self { kappa_l, kappa_r })
    }

    pub fn kappa_l(&self) -> f64 {
        self.kappa_l
    }

    pub fn kappa_r(&self) -> f64 {
        self.kappa_r
    }

    /// Coefficients (a, b, c) of the abscissa cubic x(t) = a t^3 + b t^2 + c t.
    fn x_coefficients(&self) -> (f64, f64, f64) {
        let (kl, kr) = (self.kappa_l, self.kappa_r);
        (
            3.0 * kl + 3.0 * kr - 2.0,
            -6.0 * kl - 3.0 * kr + 3.0,
            3.0 * kl,
        )
    }

    /// Abscissa parametrization; the identity outside [0, 1].
    pub fn x_at(&self, t: f64) -> f64 {
        if !(0.0..=1.0).contains(&t) {
            return t;
        }
        let (a, b, c) = self.x_coefficients();
        ((a * t + b) * t + c) * t
    }

    /// Ordinate of the CDF curve: -2t^3 + 3t^2 on [0, 1), clamped outside.
    pub fn cdf_at(&self, t: f64) -> f64 {
        if t < 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            (3.0 - 2.0 * t) * t * t
        }
    }

    /// Density along the curve: positive on (0, 1), zero at and beyond the
    /// endpoints (the BMT density is continuous at the support boundary).
    pub fn density_at(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= 1.0 {
            return 0.0;
        }
        let (kl, kr) = (self.kappa_l, self.kappa_r);
        let den = (3.0 * kl + 3.0 * kr - 2.0) * t * t + (-4.0 * kl - 2.0 * kr + 2.0) * t + kl;
        2.0 * t * (1.0 - t) / den
    }

    /// Derivative of the abscissa cubic.
    fn dx_at(&self, t: f64) -> f64 {
        let (a, b, c) = self.x_coefficients();
        (3.0 * a * t + 2.0 * b) * t + c
    }

    /// Inverts the abscissa cubic on the unit interval: t with x(t) = z.
    ///
    /// Closed-form root (trigonometric when three roots are real, Cardano
    /// otherwise, quadratic/linear when the leading coefficient degenerates)
    /// followed by a bracketed Newton polish to machine accuracy.
    pub fn t_for_x(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        if z >= 1.0 {
            return 1.0;
        }
        let (a, b, c) = self.x_coefficients();
        let seed = if a.abs() >= CUBIC_DEGENERATE {
            solve_monotone_cubic(a, b, c, z)
        } else if b.abs() >= 1e-12 {
            // stable quadratic root, continuous in the b -> 0 limit
            let disc = c * c + 4.0 * b * z;
            2.0 * z / (c + disc.max(0.0).sqrt())
        } else {
            z / c
        };
        let mut t = seed.clamp(0.0, 1.0);
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..64 {
            // compensated evaluation: near the peaked-parameter corner the
            // slope shrinks to ~(1 - kappa) and a plain Horner residual
            // (noise ~1e-16) would smear the root by noise / slope
            let f = cubic_residual(a, b, c, z, t);
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            if f == 0.0 {
                break;
            }
            let d = self.dx_at(t);
            let mut next = if d > 1e-300 { t - f / d } else { f64::NAN };
            if !(next >= lo && next <= hi) {
                next = 0.5 * (lo + hi);
            }
            if next == t || hi - lo <= f64::EPSILON {
                break;
            }
            t = next;
        }
        t
    }

    /// r-th raw moment on the unit interval, 1 <= r <= 8.
    pub fn raw_moment(&self, r: u32) -> Result<f64> {
        check_moment_order(r)?;
        let r = r as usize;
        let (kl, kr) = (self.kappa_l, self.kappa_r);
        let mut total = 0.0;
        for k1 in 0..=r {
            for k2 in 0..=r - k1 {
                let k3 = r - k1 - k2;
                total +=
                    3f64.powi((k1 + k2) as i32) * kl.powi(k1 as i32) * (1.0 - kr).powi(k2 as i32)
                        / (factorial(k1)
                            * factorial(k2)
                            * factorial(k3)
                            * binomial(3 * r + 2, 1 + k1 + 2 * k2 + 3 * k3));
            }
        }
        Ok(2.0 * factorial(r) / (r as f64 + 1.0) * total)
    }

    /// r-th central moment on the unit interval, 1 <= r <= 8.
    pub fn central_moment(&self, r: u32) -> Result<f64> {
        check_moment_order(r)?;
        let r = r as usize;
        let mu = self.mean();
        let (kl, kr) = (self.kappa_l, self.kappa_r);
        let shifted = [-mu, kl - mu, 1.0 - kr - mu, 1.0 - mu];
        let mut total = 0.0;
        for k0 in 0..=r {
            for k1 in 0..=r - k0 {
                for k2 in 0..=r - k0 - k1 {
                    let k3 = r - k0 - k1 - k2;
                    total += 3f64.powi((k1 + k2) as i32)
                        * shifted[0].powi(k0 as i32)
                        * shifted[1].powi(k1 as i32)
                        * shifted[2].powi(k2 as i32)
                        * shifted[3].powi(k3 as i32)
                        / (factorial(k0)
                            * factorial(k1)
                            * factorial(k2)
                            * factorial(k3)
                            * binomial(3 * r + 2, 1 + k1 + 2 * k2 + 3 * k3));
                }
            }
        }
        Ok(2.0 * factorial(r) / (r as f64 + 1.0) * total)
    }

    /// `E[X] = 1/2 - 3/10 (kappa_r - kappa_l)`.
    pub fn mean(&self) -> f64 {
        0.5 - 0.3 * (self.kappa_r - self.kappa_l)
    }

    /// `Var[X] = (36kl^2 + 36kr^2 + 18 kl kr - 120 kl - 120 kr + 175) / 2100`.
    pub fn variance(&self) -> f64 {
        let (kl, kr) = (self.kappa_l, self.kappa_r);
        (36.0 * kl * kl + 36.0 * kr * kr + 18.0 * kl * kr - 120.0 * kl - 120.0 * kr + 175.0)
            / 2100.0
    }

    /// Pearson's moment skewness; antisymmetric in the parameter pair.
    pub fn skewness(&self) -> f64 {
        let (kl, kr) = (self.kappa_l, self.kappa_r);
        let poly2 =
            36.0 * kl * kl + 36.0 * kr * kr + 18.0 * kl * kr - 120.0 * kl - 120.0 * kr + 175.0;
        let poly3 = 13.0 * kl * kl + 13.0 * kr * kr + 4.0 * kl * kr - 65.0 * kl - 65.0 * kr + 150.0;
        27.0 * 21f64.sqrt() * (kr - kl) * poly3 / (11.0 * poly2.powf(1.5))
    }

    fn fourth_central_moment(&self) -> f64 {
        let (kl, kr) = (self.kappa_l, self.kappa_r);
        (6507.0 * kl.powi(4)
            + 6507.0 * kr.powi(4)
            + 432.0 * kl.powi(3) * kr
            + 432.0 * kl * kr.powi(3)
            + 13122.0 * kl * kl * kr * kr
            - 43380.0 * kl.powi(3)
            - 43380.0 * kr.powi(3)
            - 28620.0 * kl * kl * kr
            - 28620.0 * kl * kr * kr
            + 29700.0 * kl * kr
            + 135900.0 * kl * kl
            + 135900.0 * kr * kr
            - 150000.0 * kl
            - 150000.0 * kr
            + 125125.0)
            / 10010000.0
    }

    /// Pearson's moment kurtosis, from 1.8 (uniform limit) up to about 6.78.
    pub fn kurtosis(&self) -> f64 {
        let v = self.variance();
        self.fourth_central_moment() / (v * v)
    }

    /// `Median[X] = 1/2 - 3/8 (kappa_r - kappa_l)`.
    pub fn median(&self) -> f64 {
        0.5 - 0.375 * (self.kappa_r - self.kappa_l)
    }

    /// `IQR[X] = 1/2 - 3 (1/4 - cos(4 pi / 9)) (kappa_r + kappa_l)`;
    /// symmetric in the parameter pair.
    pub fn iqr(&self) -> f64 {
        0.5 - 3.0 * (0.25 - (4.0 * PI / 9.0).cos()) * (self.kappa_r + self.kappa_l)
    }

    /// Curve parameter of the unique mode.
    pub fn mode_parameter(&self) -> f64 {
        let (kl, kr) = (self.kappa_l, self.kappa_r);
        if (kl - kr).abs() < 1e-9 {
            0.5
        } else {
            ((kl * kr).sqrt() - kl) / (kr - kl)
        }
    }

    /// The unique mode on the unit interval.
    pub fn mode(&self) -> f64 {
        self.x_at(self.mode_parameter())
    }

    /// Control polygon of the CDF curve on the unit interval.
    pub fn control_polygon(&self) -> ControlPolygon {
        ControlPolygon::from_pairs(&[
            (0.0, 0.0),
            (self.kappa_l, 0.0),
            (1.0 - self.kappa_r, 1.0),
            (1.0, 1.0),
        ])
        .expect("four finite points")
    }
}

/// Inverse of the ordinate cubic -2t^3 + 3t^2 = p on [0, 1], in closed form
/// via Viete's trigonometric roots. The arccos argument is clamped to
/// absorb rounding at the probability endpoints.
pub fn t_of_probability(p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let arg = (2.0 * p - 1.0).clamp(-1.0, 1.0);
    let t = 0.5 - ((arg.acos() - 2.0 * PI) / 3.0).cos();
    t.clamp(0.0, 1.0)
}

/// Support interval [c, d] of a four-parameter BMT distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmtDomain {
    c: f64,
    d: f64,
}

impl BmtDomain {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        if !c.is_finite() || !d.is_finite() || c >= d {
            return Err(Error::InvalidArgument(format!(
                "domain needs finite c < d, got c={c}, d={d}"
            )));
        }
        Ok(Self { c, d })
    }

    /// The unit interval [0, 1].
    pub fn unit() -> Self {
        Self { c: 0.0, d: 1.0 }
    }

    pub fn lower(&self) -> f64 {
        self.c
    }

    pub fn upper(&self) -> f64 {
        self.d
    }

    pub fn length(&self) -> f64 {
        self.d - self.c
    }
}

impl Default for BmtDomain {
    fn default() -> Self {
        Self::unit()
    }
}

/// A BMT distribution on [c, d]; the default domain is the unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmtDistribution {
    params: BmtParams,
    domain: BmtDomain,
}

impl BmtDistribution {
    pub fn new(params: BmtParams, domain: BmtDomain) -> Self {
        Self { params, domain }
    }

    /// BMT(kappa_l, kappa_r) on the unit interval.
    pub fn standard(params: BmtParams) -> Self {
        Self::new(params, BmtDomain::unit())
    }

    pub fn params(&self) -> &BmtParams {
        &self.params
    }

    pub fn domain(&self) -> &BmtDomain {
        &self.domain
    }

    pub fn support(&self) -> (f64, f64) {
        (self.domain.c, self.domain.d)
    }

    fn standardize(&self, x: f64) -> f64 {
        (x - self.domain.c) / self.domain.length()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() || x <= self.domain.c {
            return 0.0;
        }
        if x >= self.domain.d {
            return 1.0;
        }
        let z = self.standardize(x);
        self.params.cdf_at(self.params.t_for_x(z))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let z = self.standardize(x);
        if !(z > 0.0 && z < 1.0) {
            return 0.0;
        }
        self.params.density_at(self.params.t_for_x(z)) / self.domain.length()
    }

    /// Closed-form quantile: x(t(p)) mapped onto [c, d]. No iteration.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        Ok(self.quantile_unchecked(p))
    }

    fn quantile_unchecked(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return self.domain.c;
        }
        if p >= 1.0 {
            return self.domain.d;
        }
        // compensated cubic evaluation: a correctly rounded abscissa keeps
        // the round trip through the CDF tight where the density peaks
        let (a, b, c) = self.params.x_coefficients();
        let x = cubic_residual(a, b, c, 0.0, t_of_probability(p));
        self.domain.c + self.domain.length() * x
    }

    pub fn median(&self) -> f64 {
        self.domain.c + self.domain.length() * self.params.median()
    }

    pub fn iqr(&self) -> f64 {
        self.domain.length() * self.params.iqr()
    }

    pub fn mode(&self) -> f64 {
        self.domain.c + self.domain.length() * self.params.mode()
    }

    pub fn mean(&self) -> f64 {
        self.domain.c + self.domain.length() * self.params.mean()
    }

    pub fn variance(&self) -> f64 {
        let s = self.domain.length();
        s * s * self.params.variance()
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Standardized, hence domain-invariant.
    pub fn skewness(&self) -> f64 {
        self.params.skewness()
    }

    /// Standardized, hence domain-invariant.
    pub fn kurtosis(&self) -> f64 {
        self.params.kurtosis()
    }

    /// n inversion draws from a deterministic generator seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(n, &mut rng)
    }

    /// n inversion draws using the caller's generator. Uniforms are drawn
    /// from the open interval so draws never land exactly on the support
    /// endpoints.
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let u: f64 = rng.sample(rand::distributions::Open01);
                self.quantile_unchecked(u)
            })
            .collect()
    }

    /// Control polygon of the CDF on [c, d]:
    /// (c,0), ((d-c) kl + c, 0), ((d-c)(1-kr) + c, 1), (d,1).
    pub fn control_polygon(&self) -> ControlPolygon {
        let (c, s) = (self.domain.c, self.domain.length());
        ControlPolygon::from_pairs(&[
            (c, 0.0),
            (s * self.params.kappa_l + c, 0.0),
            (s * (1.0 - self.params.kappa_r) + c, 1.0),
            (c + s, 1.0),
        ])
        .expect("four finite points")
    }

    /// The same distribution as a generic Bezier distribution.
    pub fn to_bezier(&self) -> BezierDistribution {
        BezierDistribution::new(self.control_polygon()).expect("BMT polygon is a valid CDF")
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

fn two_sum(x: f64, y: f64) -> (f64, f64) {
    let s = x + y;
    let b = s - x;
    (s, (x - (s - b)) + (y - b))
}

fn two_prod(x: f64, y: f64) -> (f64, f64) {
    let p = x * y;
    (p, x.mul_add(y, -p))
}

/// a t^3 + b t^2 + c t - z by compensated Horner: the returned residual is
/// accurate to a few ulps of the true value, not of the intermediate terms.
fn cubic_residual(a: f64, b: f64, c: f64, z: f64, t: f64) -> f64 {
    let mut acc = a;
    let mut err = 0.0;
    for coeff in [b, c, -z] {
        let (p, pe) = two_prod(acc, t);
        let (s, se) = two_sum(p, coeff);
        acc = s;
        err = err * t + (pe + se);
    }
    acc + err
}

/// Unique root in [0, 1] of the monotone cubic a t^3 + b t^2 + c t = z,
/// after Numerical Recipes section 5.6.
fn solve_monotone_cubic(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let a1 = b / a;
    let a2 = c / a;
    let a3 = -z / a;
    let q = (a1 * a1 - 3.0 * a2) / 9.0;
    let r = (2.0 * a1 * a1 * a1 - 9.0 * a1 * a2 + 27.0 * a3) / 54.0;
    let shift = a1 / 3.0;
    if r * r < q * q * q {
        let theta = (r / (q * q * q).sqrt()).clamp(-1.0, 1.0).acos();
        let m = -2.0 * q.sqrt();
        let candidates = [
            m * (theta / 3.0).cos() - shift,
            m * ((theta + 2.0 * PI) / 3.0).cos() - shift,
            m * ((theta - 2.0 * PI) / 3.0).cos() - shift,
        ];
        // the parametrization is monotone on [0, 1]; exactly one root can
        // fall there, the others sit outside
        let mut best = candidates[0];
        let mut best_dist = f64::INFINITY;
        for &t in &candidates {
            let dist = if t < 0.0 {
                -t
            } else if t > 1.0 {
                t - 1.0
            } else {
                0.0
            };
            if dist < best_dist {
                best_dist = dist;
                best = t;
            }
        }
        best
    } else {
        let big_a = -r.signum() * (r.abs() + (r * r - q * q * q).sqrt()).cbrt();
        let big_b = if big_a != 0.0 { q / big_a } else { 0.0 };
        big_a + big_b - shift
    }
}
