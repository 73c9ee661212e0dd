//! The boundary-growth functional
//! `Φ(ρ) = (1-ρ)^{m+1-α+β} sup_{y'} ∫ |Λ_{m+1}(g * P_{x'})(ρ y')| dx'`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::{Multiplier, TheoremParams};
use super::Verdict;
use crate::error::{Error, Result};
use crate::expansion::basis::{basis_blocks, check_unit};
use crate::expansion::{HarmonicExpansion, MultiplierSequence, Tolerance, ZonalCoefficients, ZonalSeries};
use crate::fit::linear_fit;
use crate::quad::{graded_zonal_abs_integral, NodeTerms};
use crate::specfun::lambda_coeff;

/// Relative truncation tolerance of kernel series inside the functional.
pub const SERIES_REL_TOL: f64 = 1e-14;
/// Growth exponent of `Φ` above which the functional is not bounded.
pub const BOUNDED_SLOPE_TOL: f64 = 0.02;
/// Allowed relative rise between the last grid values of a bounded `Φ`.
pub const TAIL_TOL: f64 = 0.01;
/// Largest `j` in the grid `1 - ρ = 2^{-j}`.
pub const MAX_RHO_LEVEL: u32 = 14;
/// Gauss–Legendre points per angular panel.
pub const DEFAULT_PANEL_POINTS: usize = 24;

/// `∫ |Σ_k s^k γ_k c_k Z^{(k)}(<x', e>)| dx'` for zonal coefficients.
pub fn zonal_integral(
    dim: usize,
    m: f64,
    coeffs: &dyn ZonalCoefficients,
    s: f64,
    panel_points: usize,
) -> Result<f64> {
    let series = ZonalSeries::new(dim, Some(m), coeffs, 1.0)?;
    let table = series.table(s, Tolerance::Relative(SERIES_REL_TOL))?;
    let weights = table.weights(s);
    let rec = table.recurrence();
    graded_zonal_abs_integral(dim, 1.0 - s, panel_points, |t| rec.dot(&weights, t))
}

/// Node terms of `x' ↦ Σ_k s^k γ_k Σ_j c_k^{(j)} y_j^{(k)}(y') y_j^{(k)}(x')`.
pub(crate) fn full_terms(
    c: &MultiplierSequence,
    m: f64,
    direction: &[f64],
    resolution: usize,
) -> Result<NodeTerms> {
    let n = c.dim();
    let at_dir = basis_blocks(n, c.max_degree(), direction)?;
    let mut blocks = Vec::with_capacity(c.max_degree() + 1);
    for (k, (ck, yk)) in c.values().iter().zip(&at_dir).enumerate() {
        let g = lambda_coeff(n, k, m)?;
        blocks.push(ck.iter().zip(yk).map(|(a, b)| g * a * b).collect());
    }
    NodeTerms::new(&HarmonicExpansion::full(n, blocks)?, resolution)
}

/// Default sphere resolution for a full-kind sequence of degree `k`.
pub fn default_full_resolution(k: usize) -> usize {
    (4 * k + 16).max(64)
}

/// `I(ρ, y') = ∫_{S^{n-1}} |Λ_{m+1}(g * P_{x'})(ρ y')| dx'`.
///
/// `resolution` is the number of points per angular panel for zonal `g`
/// (where the value does not depend on `direction`) and the sphere-rule
/// resolution for full-kind `g`.
pub fn condition2_integral(
    g: &Multiplier,
    params: &TheoremParams,
    rho: f64,
    direction: &[f64],
    resolution: usize,
) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("ρ must lie in (0, 1), got {rho}")));
    }
    g.check_dim(params.dim)?;
    check_unit(direction, params.dim, "direction")?;
    match (g.zonal_values(), g) {
        (Some(values), _) => values.integral(params.dim, params.m, rho, resolution),
        (None, Multiplier::Sequence(c)) => Ok(full_terms(c, params.m, direction, resolution)?.mean(1.0, rho)),
        (None, Multiplier::Family(_)) => unreachable!("families are zonal"),
    }
}

/// Fixed direction design: 64 Fibonacci points on `S^2`, 128 angles on `S^1`.
pub fn direction_design(n: usize) -> Result<Vec<Vec<f64>>> {
    match n {
        2 => Ok((0..128)
            .map(|i| {
                let (s, c) = (std::f64::consts::TAU * i as f64 / 128.0).sin_cos();
                vec![c, s]
            })
            .collect()),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            Ok((0..64)
                .map(|i| {
                    let z = 1.0 - (2 * i + 1) as f64 / 64.0;
                    let rad = (1.0 - z * z).sqrt();
                    let (s, c) = (golden * i as f64).sin_cos();
                    vec![rad * c, rad * s, z]
                })
                .collect())
        }
        _ => Err(Error::Unsupported(format!(
            "direction designs exist for n = 2 and 3 only, got n = {n}"
        ))),
    }
}

/// Grid and resolution controls for [`condition2_sup`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition2Options {
    pub j_min: u32,
    pub j_max: u32,
    /// Evaluate the integral at `ρ²` instead of `ρ`.
    pub rho_squared: bool,
    pub panel_points: usize,
    /// Sphere resolution for full-kind multipliers; `None` picks [`default_full_resolution`].
    pub sphere_resolution: Option<usize>,
}

impl Default for Condition2Options {
    fn default() -> Self {
        Self {
            j_min: 3,
            j_max: 12,
            rho_squared: false,
            panel_points: DEFAULT_PANEL_POINTS,
            sphere_resolution: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition2Report {
    pub params: TheoremParams,
    pub multiplier: String,
    pub rho_grid: Vec<f64>,
    /// `Φ(ρ) = (1-ρ)^{m+1-α+β} I(ρ)`.
    pub values: Vec<f64>,
    pub raw_integrals: Vec<f64>,
    /// Slope of `ln I` against `-ln(1-ρ)`.
    pub fitted_exponent: f64,
    /// Slope of `ln Φ` against `-ln(1-ρ)`.
    pub phi_exponent: f64,
    pub sup_estimate: f64,
    pub verdict: Verdict,
    pub rho_squared: bool,
    /// Number of directions in the sup; more than one means the sup is a lower bound.
    pub directions: usize,
    pub slope_tolerance: f64,
    pub tail_tolerance: f64,
}

/// Boundedness verdict from values on a grid approaching the boundary.
///
/// Bounded when the growth exponent is at most `slope_tol` and the last three
/// values are non-increasing within `tail_tol`; unbounded when the exponent
/// exceeds `slope_tol` and the last three values do not decrease; otherwise
/// inconclusive.
pub fn growth_verdict(values: &[f64], exponent: f64, slope_tol: f64, tail_tol: f64) -> Verdict {
    let n = values.len();
    if values.iter().any(|v| !v.is_finite()) || !exponent.is_finite() {
        return Verdict::Inconclusive;
    }
    if n < 3 {
        return if exponent <= slope_tol {
            Verdict::Bounded
        } else {
            Verdict::Unbounded
        };
    }
    let tail = &values[n - 3..];
    let non_increasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + tail_tol));
    let non_decreasing = tail.windows(2).all(|w| w[1] >= w[0]);
    if exponent <= slope_tol && non_increasing {
        Verdict::Bounded
    } else if exponent > slope_tol && non_decreasing {
        Verdict::Unbounded
    } else {
        Verdict::Inconclusive
    }
}

/// `Φ` on the grid `1 - ρ = 2^{-j}`, `j = j_min..=j_max`, with its growth fit and verdict.
pub fn condition2_sup(
    g: &Multiplier,
    params: &TheoremParams,
    opts: &Condition2Options,
) -> Result<Condition2Report> {
    if opts.j_max > MAX_RHO_LEVEL || opts.j_min < 1 || opts.j_min + 2 > opts.j_max {
        return Err(Error::Usage(format!(
            "ρ grid needs 1 <= j_min, j_min + 2 <= j_max <= {MAX_RHO_LEVEL}, got {}..={}",
            opts.j_min, opts.j_max
        )));
    }
    g.check_dim(params.dim)?;
    let levels: Vec<u32> = (opts.j_min..=opts.j_max).collect();
    let rho_grid: Vec<f64> = levels.iter().map(|&j| 1.0 - 0.5f64.powi(j as i32)).collect();
    let eval_at = |rho: f64| if opts.rho_squared { rho * rho } else { rho };
    let (raw, directions) = match (g.zonal_values(), g) {
        (Some(values), _) => {
            let raw = rho_grid
                .iter()
                .map(|&rho| values.integral(params.dim, params.m, eval_at(rho), opts.panel_points))
                .collect::<Result<Vec<f64>>>()?;
            (raw, 1)
        }
        (None, Multiplier::Sequence(c)) => {
            let design = direction_design(params.dim)?;
            let res = opts
                .sphere_resolution
                .unwrap_or_else(|| default_full_resolution(c.max_degree()));
            let per_dir = design
                .par_iter()
                .map(|dir| {
                    let terms = full_terms(c, params.m, dir, res)?;
                    Ok(rho_grid.iter().map(|&rho| terms.mean(1.0, eval_at(rho))).collect::<Vec<f64>>())
                })
                .collect::<Result<Vec<Vec<f64>>>>()?;
            let raw = (0..rho_grid.len())
                .map(|i| per_dir.iter().map(|v| v[i]).fold(0.0, f64::max))
                .collect();
            (raw, design.len())
        }
        (None, Multiplier::Family(_)) => unreachable!("families are zonal"),
    };
    let e = params.condition2_exponent();
    let values: Vec<f64> = rho_grid
        .iter()
        .zip(&raw)
        .map(|(&rho, &i)| (1.0 - rho).powf(e) * i)
        .collect();
    let sup_estimate = values.iter().copied().fold(0.0, f64::max);
    let (fitted_exponent, phi_exponent, verdict) = if raw.iter().all(|&v| v == 0.0) {
        (0.0, -e, Verdict::Bounded)
    } else {
        let x: Vec<f64> = rho_grid.iter().map(|r| -(1.0 - r).ln()).collect();
        let y: Vec<f64> = raw.iter().map(|v| v.ln()).collect();
        let slope = linear_fit(&x, &y).0;
        let phi_slope = slope - e;
        (
            slope,
            phi_slope,
            growth_verdict(&values, phi_slope, BOUNDED_SLOPE_TOL, TAIL_TOL),
        )
    };
    Ok(Condition2Report {
        params: *params,
        multiplier: g.label(),
        rho_grid,
        values,
        raw_integrals: raw,
        fitted_exponent,
        phi_exponent,
        sup_estimate,
        verdict,
        rho_squared: opts.rho_squared,
        directions,
        slope_tolerance: BOUNDED_SLOPE_TOL,
        tail_tolerance: TAIL_TOL,
    })
}
