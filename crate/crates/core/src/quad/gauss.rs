//! Gauss–Jacobi nodes and weights.
//!
//! Nodes start as eigenvalues of the Jacobi matrix (implicit QL, as in
//! Golub–Welsch) and are then polished by Newton's method on `P_n^{(a,b)}`;
//! weights come from the closed form in `P_n'`.

use crate::error::{Error, Result};
use crate::specfun::log_gamma;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[1..]` (`e[0]` unused), by implicit QL with Wilkinson shifts.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Vec<f64> {
    let n = d.len();
    if n == 0 {
        return d;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    d
}

/// `(P_n^{(a,b)}(x), P_{n-1}^{(a,b)}(x))` by the three-term recurrence.
fn jacobi_pair(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    if n == 0 {
        return (prev, 0.0);
    }
    let mut cur = 0.5 * (a - b + (a + b + 2.0) * x);
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c1 = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `P_n'` from `P_n`, `P_{n-1}` (valid off the endpoints).
fn jacobi_derivative(n: usize, a: f64, b: f64, x: f64, pn: f64, pn1: f64) -> f64 {
    let nf = n as f64;
    let s = 2.0 * nf + a + b;
    (nf * ((a - b) - s * x) * pn + 2.0 * (nf + a) * (nf + b) * pn1) / (s * (1.0 - x * x))
}

/// `n`-point rule for `∫_{-1}^{1} (1-x)^a (1+x)^b φ(x) dx`, exact for degree `2n - 1`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::domain("a quadrature rule needs at least one node"));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::domain(format!(
            "Jacobi exponents must exceed -1, got a = {a}, b = {b}"
        )));
    }
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    diag[0] = (b - a) / (ab + 2.0);
    for i in 1..n {
        let fi = i as f64;
        let s = 2.0 * fi + ab;
        diag[i] = (b * b - a * a) / (s * (s + 2.0));
        off[i] = if i == 1 {
            (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
        } else {
            (4.0 * fi * (fi + a) * (fi + b) * (fi + ab) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
        };
    }
    let mut nodes = tridiagonal_eigenvalues(diag, off);
    let nf = n as f64;
    let log_const = (ab + 1.0) * std::f64::consts::LN_2 + log_gamma(nf + a + 1.0)? + log_gamma(nf + b + 1.0)?
        - log_gamma(nf + ab + 1.0)?
        - log_gamma(nf + 1.0)?;
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (pn, pn1) = jacobi_pair(n, a, b, *x);
            let dp = jacobi_derivative(n, a, b, *x, pn, pn1);
            let step = pn / dp;
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let (pn, pn1) = jacobi_pair(n, a, b, *x);
        let dp = jacobi_derivative(n, a, b, *x, pn, pn1);
        weights.push((log_const - ((1.0 - *x * *x) * dp * dp).ln()).exp());
    }
    Ok((nodes, weights))
}

/// Gauss–Legendre rule on `[lo, hi]`.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (x, w) = gauss_jacobi(n, 0.0, 0.0)?;
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Ok((
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    ))
}
