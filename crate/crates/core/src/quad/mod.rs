//! Quadrature on `[0, 1)` and on `S^{n-1}` under normalized surface measure,
//! integral means and mixed norms.

pub mod gauss;
pub mod norm;

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::log_gamma;

pub use gauss::{gauss_jacobi, gauss_legendre};
pub use norm::{
    direct_bergman_norm, mean_norm, mixed_norm, Convention, NodeTerms, NormEstimate, SpaceParams,
};

/// Nodes and positive weights for `∫_0^1 (1-r)^s φ(r) dr`; the weight factor is folded in.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exponent: f64,
}

impl RadialRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&r, &w)| w * f(r)).sum()
    }
}

/// `N`-point Gauss–Jacobi rule for `∫_0^1 (1-r)^s φ(r) dr`, exact for `deg φ <= 2N - 1`.
pub fn radial_rule(s: f64, n: usize) -> Result<RadialRule> {
    if !(s > -1.0) {
        return Err(Error::domain(format!("radial weight exponent must exceed -1, got {s}")));
    }
    let (x, w) = gauss_jacobi(n, s, 0.0)?;
    let scale = 2f64.powf(-s - 1.0);
    // x ascending means r ascending
    Ok(RadialRule {
        nodes: x.iter().map(|t| 0.5 * (1.0 + t)).collect(),
        weights: w.iter().map(|v| v * scale).collect(),
        exponent: s,
    })
}

/// Rule for `∫_0^1 (1-r)^s φ(r) dr` whose panels shrink geometrically towards `r = 1`.
///
/// Panels `[1 - 2^{-i}, 1 - 2^{-i-1}]` for `i < levels` carry Gauss–Legendre
/// rules with the weight folded in; the last panel `[1 - 2^{-levels}, 1]` carries
/// a Gauss–Jacobi rule, so integrands with structure on scales down to
/// `2^{-levels}` are resolved.
pub fn graded_radial_rule(s: f64, levels: usize, points: usize) -> Result<RadialRule> {
    let end = radial_rule(s, points)?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for i in 0..levels {
        let lo = 1.0 - 0.5f64.powi(i as i32);
        let hi = 1.0 - 0.5f64.powi(i as i32 + 1);
        let (x, w) = gauss_legendre(points, lo, hi)?;
        for (r, v) in x.into_iter().zip(w) {
            nodes.push(r);
            weights.push(v * (1.0 - r).powf(s));
        }
    }
    let h = 0.5f64.powi(levels as i32);
    let scale = h.powf(s + 1.0);
    for (u, v) in end.nodes.iter().zip(&end.weights) {
        nodes.push(1.0 - h + h * u);
        weights.push(v * scale);
    }
    Ok(RadialRule {
        nodes,
        weights,
        exponent: s,
    })
}

/// Cubature on `S^{n-1}` under normalized measure; nodes stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub dim: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Spherical polynomials up to this total degree are integrated exactly.
    pub exactness: usize,
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        (0..self.len()).map(|i| self.weights[i] * f(self.node(i))).sum()
    }
}

/// Largest dimension for which product sphere rules are built.
pub const SPHERE_RULE_MAX_DIM: usize = 6;

/// Product rule exact for spherical polynomials of degree `<= resolution`.
///
/// `n = 2`: `resolution + 1` equally spaced angles. `n >= 3`: the last
/// coordinate `t` carries a Gauss–Jacobi rule for `(1 - t²)^{(n-3)/2}`, the
/// remaining ones a rule on `S^{n-2}` scaled by `√(1 - t²)`.
pub fn sphere_rule(n: usize, resolution: usize) -> Result<SphereRule> {
    if resolution < 1 {
        return Err(Error::domain("sphere rule resolution must be >= 1"));
    }
    if !(2..=SPHERE_RULE_MAX_DIM).contains(&n) {
        return Err(Error::Unsupported(format!(
            "product sphere rules are built for 2 <= n <= {SPHERE_RULE_MAX_DIM}, got n = {n}"
        )));
    }
    if n == 2 {
        let count = resolution + 1;
        let mut nodes = Vec::with_capacity(2 * count);
        for i in 0..count {
            let (s, c) = (2.0 * PI * i as f64 / count as f64).sin_cos();
            nodes.extend([c, s]);
        }
        return Ok(SphereRule {
            dim: 2,
            nodes,
            weights: vec![1.0 / count as f64; count],
            exactness: resolution,
        });
    }
    let sub = sphere_rule(n - 1, resolution)?;
    let zr = zonal_rule(n, resolution / 2 + 1)?;
    let mut nodes = Vec::with_capacity(n * sub.len() * zr.len());
    let mut weights = Vec::with_capacity(sub.len() * zr.len());
    for (&t, &wt) in zr.nodes.iter().zip(&zr.weights) {
        let s = (1.0 - t * t).max(0.0).sqrt();
        for i in 0..sub.len() {
            nodes.extend(sub.node(i).iter().map(|y| s * y));
            nodes.push(t);
            weights.push(wt * sub.weights[i]);
        }
    }
    Ok(SphereRule {
        dim: n,
        nodes,
        weights,
        exactness: resolution,
    })
}

/// Rule in `t = <x', e>` for zonal integrands: `∫ φ(<x', e>) dx' ≈ Σ w_i φ(t_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZonalRule {
    pub dim: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ZonalRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }
}

/// `points`-point Gauss–Jacobi rule for the density `c_n (1 - t²)^{(n-3)/2}`.
pub fn zonal_rule(n: usize, points: usize) -> Result<ZonalRule> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
    }
    let e = (n as f64 - 3.0) / 2.0;
    let (x, w) = gauss_jacobi(points, e, e)?;
    let total: f64 = w.iter().sum();
    Ok(ZonalRule {
        dim: n,
        nodes: x,
        weights: w.iter().map(|v| v / total).collect(),
    })
}

/// `c_n = Γ(n/2) / (√π Γ((n-1)/2))`, the density of `θ` is `c_n sin^{n-2} θ`.
fn angle_density_constant(n: usize) -> f64 {
    let nf = n as f64;
    (log_gamma(nf / 2.0).expect("n >= 2") - 0.5 * PI.ln() - log_gamma((nf - 1.0) / 2.0).expect("n >= 2")).exp()
}

/// Zonal rule refined near `t = 1` for integrands concentrated at angular scale `width`.
///
/// Works in the angle `θ = arccos t` with panels `[0, h]`, `[h, 2h]`, `[2h, 4h]`, ...
/// up to `π`, `h = width / 4`, each carrying a `points`-point Gauss–Legendre rule.
pub fn graded_zonal_rule(n: usize, width: f64, points: usize) -> Result<ZonalRule> {
    let edges = graded_angle_edges(n, width)?;
    let c = angle_density_constant(n);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for pair in edges.windows(2) {
        let (th, w) = gauss_legendre(points, pair[0], pair[1])?;
        for (a, v) in th.into_iter().zip(w) {
            nodes.push(a.cos());
            weights.push(c * v * a.sin().powi(n as i32 - 2));
        }
    }
    Ok(ZonalRule {
        dim: n,
        nodes,
        weights,
    })
}

fn graded_angle_edges(n: usize, width: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
    }
    let h = (width / 4.0).clamp(1e-12, PI / 4.0);
    let mut edges = vec![0.0, h];
    let mut e = h;
    while 2.0 * e < PI {
        e *= 2.0;
        edges.push(e);
    }
    if PI - edges[edges.len() - 1] < 0.5 * h {
        edges.pop();
    }
    edges.push(PI);
    Ok(edges)
}

/// `∫_{S^{n-1}} |φ(<x', e>)| dx'` on the panels of [`graded_zonal_rule`].
///
/// Sign changes of `φ` seen between the nodes of a panel are located by
/// bisection in `θ` and the panel is split there, so each piece is a smooth
/// integral `|∫ φ|` rather than a kinked one.
pub fn graded_zonal_abs_integral(
    n: usize,
    width: f64,
    points: usize,
    phi: impl Fn(f64) -> f64 + Sync,
) -> Result<f64> {
    let edges = graded_angle_edges(n, width)?;
    let c = angle_density_constant(n);
    let (ref_nodes, ref_weights) = gauss_legendre(points, 0.0, 1.0)?;
    let panel = |a: f64, b: f64| -> f64 {
        ref_nodes
            .iter()
            .zip(&ref_weights)
            .map(|(&x, &w)| {
                let th = a + (b - a) * x;
                (b - a) * w * phi(th.cos()) * th.sin().powi(n as i32 - 2)
            })
            .sum()
    };
    let pieces: Vec<f64> = edges
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|pair| {
            let (a, b) = (pair[0], pair[1]);
            let mut samples: Vec<f64> = std::iter::once(a)
                .chain(ref_nodes.iter().map(|&x| a + (b - a) * x))
                .chain(std::iter::once(b))
                .collect();
            samples.dedup();
            let values: Vec<f64> = samples.iter().map(|&th| phi(th.cos())).collect();
            let mut cuts = vec![a];
            for i in 0..samples.len() - 1 {
                if values[i] * values[i + 1] < 0.0 {
                    let (mut lo, mut hi, flo) = (samples[i], samples[i + 1], values[i]);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if mid <= lo || mid >= hi {
                            break;
                        }
                        if phi(mid.cos()) * flo > 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    cuts.push(0.5 * (lo + hi));
                }
            }
            cuts.push(b);
            cuts.windows(2).map(|w| panel(w[0], w[1]).abs()).sum::<f64>()
        })
        .collect();
    Ok(c * pieces.iter().sum::<f64>())
}

/// `∫_{S^{n-1}} φ(<x', e>) dx'` by the zonal reduction.
pub fn zonal_sphere_integral(n: usize, phi: impl Fn(f64) -> f64, resolution: usize) -> Result<f64> {
    let rule = zonal_rule(n, resolution.max(1))?;
    let mut acc = 0.0;
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = phi(t);
        if !v.is_finite() {
            return Err(Error::domain(format!("integrand is not finite at t = {t}")));
        }
        acc += w * v;
    }
    Ok(acc)
}
