//! Small fitting and interpolation helpers shared by the asymptotic checks.

/// Ordinary least-squares line `y ≈ slope * x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "linear_fit needs at least two points");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Least-squares exponent of `y ≈ A x^s` (slope of `ln y` against `ln x`).
pub fn power_law_exponent(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Fit of `y ≈ A x^s + B` with relative residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetPowerFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub rms_relative_residual: f64,
}

/// Fits `y ≈ A x^s + B` over positive `x`, `y`.
///
/// For fixed `s` the amplitude and offset solve a weighted linear least-squares
/// problem; `s` is then located by golden-section search in a unit window
/// around the plain log-log slope.
pub fn fit_power_with_offset(x: &[f64], y: &[f64]) -> OffsetPowerFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 3, "offset fit needs at least three points");
    let solve = |s: f64| -> (f64, f64, f64) {
        // minimise Σ ((A u_i + B - y_i) / y_i)^2 with u_i = x_i^s
        let (mut suu, mut su1, mut s11, mut suy, mut s1y, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for (&xi, &yi) in x.iter().zip(y) {
            let w = 1.0 / (yi * yi);
            let u = xi.powf(s);
            suu += w * u * u;
            su1 += w * u;
            s11 += w;
            suy += w * u * yi;
            s1y += w * yi;
            syy += w * yi * yi;
        }
        let det = suu * s11 - su1 * su1;
        let a = (suy * s11 - su1 * s1y) / det;
        let b = (suu * s1y - su1 * suy) / det;
        let resid = syy - 2.0 * (a * suy + b * s1y) + a * a * suu + 2.0 * a * b * su1 + b * b * s11;
        (a, b, resid.max(0.0))
    };
    let centre = power_law_exponent(x, y);
    let (mut lo, mut hi) = (centre - 1.0, centre + 1.0);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = solve(c).2;
    let mut fd = solve(d).2;
    for _ in 0..200 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = solve(c).2;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = solve(d).2;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    let (a, b, r) = solve(s);
    OffsetPowerFit {
        exponent: s,
        amplitude: a,
        offset: b,
        rms_relative_residual: (r / x.len() as f64).sqrt(),
    }
}

/// Non-negative least squares for two columns: `min ||c1 a + c2 b - y||` with `c1, c2 >= 0`.
pub fn nnls2(a: &[f64], b: &[f64], y: &[f64]) -> (f64, f64) {
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
    let (aa, ab, bb, ay, by) = (dot(a, a), dot(a, b), dot(b, b), dot(a, y), dot(b, y));
    let det = aa * bb - ab * ab;
    if det.abs() > 1e-300 {
        let c1 = (ay * bb - ab * by) / det;
        let c2 = (aa * by - ab * ay) / det;
        if c1 >= 0.0 && c2 >= 0.0 {
            return (c1, c2);
        }
    }
    let only_a = if aa > 0.0 { (ay / aa).max(0.0) } else { 0.0 };
    let only_b = if bb > 0.0 { (by / bb).max(0.0) } else { 0.0 };
    let res = |c1: f64, c2: f64| {
        a.iter()
            .zip(b)
            .zip(y)
            .map(|((p, q), t)| (c1 * p + c2 * q - t).powi(2))
            .sum::<f64>()
    };
    if res(only_a, 0.0) <= res(0.0, only_b) {
        (only_a, 0.0)
    } else {
        (0.0, only_b)
    }
}

/// Natural cubic spline on a uniform grid `x_i = x0 + i h`.
#[derive(Debug, Clone)]
pub struct UniformSpline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    second: Vec<f64>,
}

impl UniformSpline {
    pub fn new(x0: f64, h: f64, y: Vec<f64>) -> Self {
        let n = y.len();
        assert!(n >= 3, "spline needs at least three knots");
        // Tridiagonal system for interior second derivatives (Thomas algorithm).
        let m = n - 2;
        let mut diag = vec![4.0; m];
        let mut rhs: Vec<f64> = (1..n - 1)
            .map(|i| 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h))
            .collect();
        for i in 1..m {
            let w = 1.0 / diag[i - 1];
            diag[i] -= w;
            rhs[i] -= w * rhs[i - 1];
        }
        let mut inner = vec![0.0; m];
        for i in (0..m).rev() {
            let next = if i + 1 < m { inner[i + 1] } else { 0.0 };
            inner[i] = (rhs[i] - next) / diag[i];
        }
        let mut second = vec![0.0; n];
        second[1..n - 1].copy_from_slice(&inner);
        Self { x0, h, y, second }
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.h * (self.y.len() - 1) as f64
    }

    /// Interpolated value; arguments outside the grid are clamped to it.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let pos = ((x - self.x0) / self.h).clamp(0.0, (n - 1) as f64);
        let i = (pos.floor() as usize).min(n - 2);
        let t = pos - i as f64;
        let a = 1.0 - t;
        let h2 = self.h * self.h / 6.0;
        a * self.y[i]
            + t * self.y[i + 1]
            + h2 * ((a * a * a - a) * self.second[i] + (t * t * t - t) * self.second[i + 1])
    }
}
