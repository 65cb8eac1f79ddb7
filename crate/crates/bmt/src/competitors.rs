//! Beta and Kumaraswamy distributions on an arbitrary bounded interval.
//!
//! These are the usual comparison models when fitting double-bounded data.
//! Both are parametrized by two positive shapes plus a support interval
//! [c, d]; evaluation rescales to the unit interval first.

use crate::bmt::BmtDomain;
use crate::error::{Error, Result};
use crate::special::{ln_beta, regularized_incomplete_beta};

fn check_shape(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{name} must be a positive finite shape, got {v}"
        )));
    }
    Ok(())
}

/// Beta(alpha, beta) rescaled to [c, d].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    alpha: f64,
    beta: f64,
    domain: BmtDomain,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64, domain: BmtDomain) -> Result<Self> {
        check_shape("alpha", alpha)?;
        check_shape("beta", beta)?;
        Ok(Self {
            alpha,
            beta,
            domain,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn domain(&self) -> &BmtDomain {
        &self.domain
    }

    pub fn support(&self) -> (f64, f64) {
        (self.domain.lower(), self.domain.upper())
    }

    /// Density via log-gamma, so large shapes stay finite.
    pub fn pdf(&self, x: f64) -> f64 {
        let s = self.domain.length();
        let z = (x - self.domain.lower()) / s;
        if z.is_nan() || !(0.0..=1.0).contains(&z) {
            return 0.0;
        }
        if z == 0.0 {
            return if self.alpha < 1.0 {
                f64::INFINITY
            } else if self.alpha == 1.0 {
                (-ln_beta(1.0, self.beta)).exp() / s
            } else {
                0.0
            };
        }
        if z == 1.0 {
            return if self.beta < 1.0 {
                f64::INFINITY
            } else if self.beta == 1.0 {
                (-ln_beta(self.alpha, 1.0)).exp() / s
            } else {
                0.0
            };
        }
        let ln_f = (self.alpha - 1.0) * z.ln() + (self.beta - 1.0) * (-z).ln_1p()
            - ln_beta(self.alpha, self.beta);
        ln_f.exp() / s
    }

    /// CDF via the regularized incomplete beta function.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return 0.0;
        }
        let z = (x - self.domain.lower()) / self.domain.length();
        regularized_incomplete_beta(self.alpha, self.beta, z.clamp(0.0, 1.0))
    }
}

/// Kumaraswamy(a, b) rescaled to [c, d]: F(z) = 1 - (1 - z^a)^b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KumaraswamyParams {
    a: f64,
    b: f64,
    domain: BmtDomain,
}

impl KumaraswamyParams {
    pub fn new(a: f64, b: f64, domain: BmtDomain) -> Result<Self> {
        check_shape("a", a)?;
        check_shape("b", b)?;
        Ok(Self { a, b, domain })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn domain(&self) -> &BmtDomain {
        &self.domain
    }

    pub fn support(&self) -> (f64, f64) {
        (self.domain.lower(), self.domain.upper())
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let s = self.domain.length();
        let z = (x - self.domain.lower()) / s;
        if z.is_nan() || !(0.0..=1.0).contains(&z) {
            return 0.0;
        }
        if z == 0.0 {
            return if self.a < 1.0 {
                f64::INFINITY
            } else if self.a == 1.0 {
                self.b / s
            } else {
                0.0
            };
        }
        if z == 1.0 {
            return if self.b < 1.0 {
                f64::INFINITY
            } else if self.b == 1.0 {
                self.a / s
            } else {
                0.0
            };
        }
        // log form keeps huge shapes finite; ln(1 - z^a) via ln_1p
        let za_ln = self.a * z.ln();
        let ln_f = self.a.ln()
            + self.b.ln()
            + (self.a - 1.0) * z.ln()
            + (self.b - 1.0) * (-za_ln.exp()).ln_1p();
        ln_f.exp() / s
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return 0.0;
        }
        let z = ((x - self.domain.lower()) / self.domain.length()).clamp(0.0, 1.0);
        if z == 0.0 {
            return 0.0;
        }
        if z == 1.0 {
            return 1.0;
        }
        let za_ln = self.a * z.ln();
        -((self.b * (-za_ln.exp()).ln_1p()).exp_m1())
    }

    /// Closed-form quantile: c + (d-c) (1 - (1-p)^(1/b))^(1/a).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        let (c, d) = self.support();
        if p == 0.0 {
            return Ok(c);
        }
        if p == 1.0 {
            return Ok(d);
        }
        let inner = ((-p).ln_1p() / self.b).exp(); // (1-p)^(1/b)
        let z = (-(inner - 1.0)).powf(1.0 / self.a);
        Ok(c + (d - c) * z)
    }
}
