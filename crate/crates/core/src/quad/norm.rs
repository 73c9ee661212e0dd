//! Integral means `M_q(f, r)` and mixed norms `‖f‖_{p,q,α}`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{radial_rule, sphere_rule, zonal_rule, SphereRule};
use crate::error::{Error, Result};
use crate::expansion::{horner, ExpansionKind, HarmonicExpansion};
use crate::specfun::{sph_dim_real, ZonalRecurrence};

/// Radial weight convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `(1 - r²)^α r^{n-1} dr`.
    #[default]
    Definition,
    /// `(1 - r)^{αp - 1} r^{n-1} dr`.
    Theorem,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Definition => "definition",
            Convention::Theorem => "theorem",
        }
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definition" => Ok(Convention::Definition),
            "theorem" => Ok(Convention::Theorem),
            _ => Err(Error::Usage(format!(
                "unknown convention `{s}` (expected definition or theorem)"
            ))),
        }
    }
}

/// `(p, q, α)` and the weight convention of `A^{p,q}_α`. `q = ∞` is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub convention: Convention,
}

impl SpaceParams {
    pub fn new(p: f64, q: f64, alpha: f64, convention: Convention) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::domain(format!("p must be a positive real, got {p}")));
        }
        if !(q > 0.0) {
            return Err(Error::domain(format!("q must be positive, got {q}")));
        }
        match convention {
            Convention::Definition if !(alpha > -1.0) => {
                return Err(Error::domain(format!(
                    "the definition weight (1-r²)^α needs α > -1, got {alpha}"
                )))
            }
            Convention::Theorem if !(alpha * p > 0.0) => {
                return Err(Error::domain(format!(
                    "the theorem weight (1-r)^(αp-1) needs αp > 0, got αp = {}",
                    alpha * p
                )))
            }
            _ => {}
        }
        Ok(Self {
            p,
            q,
            alpha,
            convention,
        })
    }

    /// Exponent `s` of the `(1 - r)^s` factor handled by the Jacobi rule.
    pub fn radial_exponent(&self) -> f64 {
        match self.convention {
            Convention::Definition => self.alpha,
            Convention::Theorem => self.alpha * self.p - 1.0,
        }
    }

    /// The rest of the radial weight, smooth on `[0, 1]`.
    pub fn radial_factor(&self, r: f64, n: usize) -> f64 {
        let jac = r.powi(n as i32 - 1);
        match self.convention {
            Convention::Definition => (1.0 + r).powf(self.alpha) * jac,
            Convention::Theorem => jac,
        }
    }
}

/// Per-node degree terms of an expansion on a sphere rule, so that means at
/// many radii cost one Horner pass per node.
#[derive(Debug, Clone)]
pub struct NodeTerms {
    terms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl NodeTerms {
    pub fn from_rule(f: &HarmonicExpansion, rule: &SphereRule) -> Result<Self> {
        if rule.dim != f.dim() {
            return Err(Error::Incompatible(format!(
                "sphere rule dimension {} vs expansion dimension {}",
                rule.dim,
                f.dim()
            )));
        }
        let terms = (0..rule.len())
            .map(|i| f.degree_terms(rule.node(i)))
            .collect::<Result<_>>()?;
        Ok(Self {
            terms,
            weights: rule.weights.clone(),
        })
    }

    /// Nodes exact to degree `resolution`: a product rule for the full kind,
    /// the zonal reduction (any `n`) for the zonal kind.
    pub fn new(f: &HarmonicExpansion, resolution: usize) -> Result<Self> {
        match f.kind() {
            ExpansionKind::Full => Self::from_rule(f, &sphere_rule(f.dim(), resolution)?),
            ExpansionKind::Zonal => {
                let rule = zonal_rule(f.dim(), resolution / 2 + 1)?;
                let coeffs = f.zonal_coeffs().expect("zonal");
                let rec = ZonalRecurrence::new(f.dim(), f.max_degree());
                let mut g = vec![0.0; coeffs.len()];
                let terms = rule
                    .nodes
                    .iter()
                    .map(|&t| {
                        rec.fill_normalized(t, &mut g);
                        (0..coeffs.len())
                            .map(|k| coeffs[k] * sph_dim_real(f.dim(), k) * g[k])
                            .collect()
                    })
                    .collect();
                Ok(Self {
                    terms,
                    weights: rule.weights,
                })
            }
        }
    }

    /// `∫ f(r x') g(s x') dx'` for `g` tabulated on the same rule.
    pub fn dot(&self, other: &NodeTerms, r: f64, s: f64) -> f64 {
        self.terms
            .iter()
            .zip(&other.terms)
            .zip(&self.weights)
            .map(|((a, b), w)| w * horner(a, r) * horner(b, s))
            .sum()
    }

    /// `M_q(f, r)`; `q = ∞` gives the maximum over the nodes.
    pub fn mean(&self, q: f64, r: f64) -> f64 {
        if q.is_infinite() {
            return self
                .terms
                .iter()
                .map(|t| horner(t, r).abs())
                .fold(0.0, f64::max);
        }
        let s: f64 = self
            .terms
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * horner(t, r).abs().powf(q))
            .sum();
        s.powf(1.0 / q)
    }
}

/// `M_q(f, r) = (∫ |f(r x')|^q dx')^{1/q}` on the given rule.
pub fn mean_norm(f: &HarmonicExpansion, q: f64, r: f64, rule: &SphereRule) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("radius must lie in [0, 1), got {r}")));
    }
    if !(q > 0.0) {
        return Err(Error::domain(format!("q must be positive, got {q}")));
    }
    Ok(NodeTerms::from_rule(f, rule)?.mean(q, r))
}

/// A mixed norm computed at two refinement levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    /// Value at the finer level.
    pub value: f64,
    pub coarse: f64,
    pub rel_delta: f64,
    /// `(radial points, sphere resolution)` of the coarse and fine levels.
    pub levels: [(usize, usize); 2],
}

fn mixed_norm_level(f: &HarmonicExpansion, params: &SpaceParams, radial_n: usize, res: usize) -> Result<f64> {
    let rule = radial_rule(params.radial_exponent(), radial_n)?;
    let terms = NodeTerms::new(f, res)?;
    let n = f.dim();
    let s: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&r, &w)| w * params.radial_factor(r, n) * terms.mean(params.q, r).powf(params.p))
        .sum();
    Ok(s.powf(1.0 / params.p))
}

/// `‖f‖_{p,q,α} = (∫_0^1 M_q(f, r)^p w(r) r^{n-1} dr)^{1/p}`.
///
/// Computed at `(radial_n, sphere_res)` and at twice both; a relative
/// disagreement above `tol` is an accuracy error carrying both values.
pub fn mixed_norm(
    f: &HarmonicExpansion,
    params: &SpaceParams,
    radial_n: usize,
    sphere_res: usize,
    tol: f64,
) -> Result<NormEstimate> {
    if radial_n == 0 || sphere_res == 0 {
        return Err(Error::domain("quadrature sizes must be positive"));
    }
    let coarse = mixed_norm_level(f, params, radial_n, sphere_res)?;
    let fine = mixed_norm_level(f, params, 2 * radial_n, 2 * sphere_res)?;
    let rel_delta = if fine == 0.0 {
        coarse.abs()
    } else {
        ((fine - coarse) / fine).abs()
    };
    if !(rel_delta <= tol) {
        return Err(Error::Accuracy {
            what: "mixed norm refinement".into(),
            coarse,
            fine,
        });
    }
    Ok(NormEstimate {
        value: fine,
        coarse,
        rel_delta,
        levels: [(radial_n, sphere_res), (2 * radial_n, 2 * sphere_res)],
    })
}

/// `(∫_B |f|^p w dV)^{1/p}` as one flat sum over a product rule of the ball,
/// with `w` from `convention` and `dV = r^{n-1} dr dx'`.
pub fn direct_bergman_norm(
    f: &HarmonicExpansion,
    p: f64,
    alpha: f64,
    convention: Convention,
    radial_n: usize,
    sphere_res: usize,
) -> Result<f64> {
    let params = SpaceParams::new(p, p, alpha, convention)?;
    let radial = radial_rule(params.radial_exponent(), radial_n)?;
    let sphere = sphere_rule(f.dim(), sphere_res)?;
    let mut acc = 0.0;
    for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
        let wr = wr * params.radial_factor(r, f.dim());
        for j in 0..sphere.len() {
            acc += wr * sphere.weights[j] * f.evaluate(r, sphere.node(j))?.abs().powf(p);
        }
    }
    Ok(acc.powf(1.0 / p))
}
