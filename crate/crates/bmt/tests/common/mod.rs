//! Shared numerical oracles for the integration tests. Everything here is
//! deliberately independent of the library's evaluation paths: plain
//! quadrature, bisection, and empirical-CDF comparisons.
#![allow(dead_code)]

/// Nodes and weights of the n-point Gauss-Legendre rule on [0, 1].
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Newton on P_n with the Chebyshev-based starting guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map from [-1, 1] to [0, 1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// 64-node Gauss-Legendre integral of `f` over [0, 1]; exact for
/// polynomials up to degree 127.
pub fn integrate_unit(f: impl Fn(f64) -> f64) -> f64 {
    let (nodes, weights) = gauss_legendre_unit(64);
    nodes.iter().zip(&weights).map(|(&t, &w)| w * f(t)).sum()
}

/// Composite Gauss-Legendre integral of `f` over [a, b].
pub fn integrate_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_unit(16);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let left = a + p as f64 * h;
        for (&t, &w) in nodes.iter().zip(&weights) {
            total += w * h * f(left + t * h);
        }
    }
    total
}

/// Trapezoid rule under the tanh-sinh (double-exponential) substitution:
/// uniform steps in the transformed variable, exponentially convergent,
/// and robust to integrable endpoint singularities.
pub fn de_trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let h = 0.004;
    let steps = 2000; // tau in [-4, 4]
    let mut total = 0.0;
    for i in -steps..=steps {
        let tau = i as f64 * h;
        let s = std::f64::consts::FRAC_PI_2 * tau.sinh();
        // distance from the nearer endpoint, computed without the
        // catastrophic cancellation of mid + half * tanh(s)
        let e = (-2.0 * s.abs()).exp();
        let dist = half * 2.0 * e / (1.0 + e); // half * (1 - |tanh(s)|)
        let x = if s < 0.0 { a + dist } else { b - dist };
        if x <= a || x >= b {
            continue;
        }
        let w = half * std::f64::consts::FRAC_PI_2 * tau.cosh() / s.cosh().powi(2);
        let v = f(x);
        if v.is_finite() {
            total += w * v;
        }
    }
    total * h
}

/// Root of the monotone function `f` on [lo, hi] by plain bisection.
pub fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iterations: usize) -> f64 {
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Location of the maximum of a smooth unimodal `f` on (lo, hi), found by
/// bisecting the sign of a fourth-order central-difference derivative.
/// Localizes the stationary point to roughly 1e-11.
pub fn maximize_unimodal(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let h = 1e-5;
    let deriv =
        |t: f64| (8.0 * (f(t + 0.5 * h) - f(t - 0.5 * h)) - (f(t + h) - f(t - h))) / (6.0 * h);
    let (mut a, mut b) = (lo + 2.0 * h, hi - 2.0 * h);
    if deriv(a) <= 0.0 {
        return lo;
    }
    if deriv(b) >= 0.0 {
        return hi;
    }
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        if deriv(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// One-sample Kolmogorov-Smirnov statistic of `sample` against `cdf`.
pub fn ks_statistic(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).expect("finite sample"));
    let n = sample.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        d = d.max(((i + 1) as f64 / n - f).abs());
        d = d.max((i as f64 / n - f).abs());
    }
    d
}

/// Deterministic uniform stream for test-local randomness.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
