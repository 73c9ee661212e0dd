//! Lower bounds for the operator norm of a multiplier `A^{p,1}_α → A^{p,1}_β`
//! from explicit test functions.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::condition2::{default_full_resolution, full_terms, DEFAULT_PANEL_POINTS};
use super::params::{Multiplier, TheoremParams};
use super::Verdict;
use crate::error::{Error, Result};
use crate::expansion::{ExpansionKind, HarmonicExpansion, MultiplierFamily, MultiplierSequence};
use crate::fit::{linear_fit, UniformSpline};
use crate::quad::{graded_radial_rule, radial_rule, Convention, NodeTerms, SpaceParams};
use crate::specfun::sph_dim;

/// Growth exponent of the norm ratios above which the operator is unbounded.
pub const PROBE_GROWTH_TOL: f64 = 0.05;
/// Random coefficient vectors drawn per degree.
pub const RANDOM_SAMPLES: usize = 8;
/// Knot spacing of the `ln M_1` table in `u = -log2(1 - s)`.
const TABLE_STEP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeFamily {
    /// `f = Q_m(·, y)` with `|y| = ρ_y` approaching the boundary.
    QmKernels,
    /// Seeded random harmonic polynomials of increasing degree.
    RandomPolynomials,
}

impl ProbeFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeFamily::QmKernels => "qm_kernels",
            ProbeFamily::RandomPolynomials => "random_polynomials",
        }
    }
}

impl FromStr for ProbeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qm_kernels" => Ok(ProbeFamily::QmKernels),
            "random_polynomials" => Ok(ProbeFamily::RandomPolynomials),
            _ => Err(Error::Usage(format!(
                "unknown probe family `{s}` (expected qm_kernels or random_polynomials)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub params: TheoremParams,
    pub multiplier: String,
    pub probe_family: ProbeFamily,
    /// Boundary radii `ρ_y` (kernel probes) or degrees (random probes).
    pub sizes: Vec<f64>,
    /// `‖c f‖_β / ‖f‖_α`, each a lower bound for the operator norm.
    pub norm_ratios: Vec<f64>,
    /// Slope of `ln ratio` against `-ln(1 - ρ_y)` or `ln K`.
    pub growth_fit: f64,
    pub growth_tolerance: f64,
    pub verdict: Verdict,
    pub seed: u64,
}

/// `M_1(c·f, r)` as a function of `s = r ρ_y` for `f = Q_m(·, ρ_y e)`, up to the factor 2.
enum MeanSource {
    Zonal(super::params::ZonalValues),
    Full(NodeTerms),
}

impl MeanSource {
    fn eval(&self, params: &TheoremParams, s: f64) -> Result<f64> {
        match self {
            MeanSource::Zonal(v) => v.integral(params.dim, params.m, s, DEFAULT_PANEL_POINTS),
            MeanSource::Full(terms) => Ok(terms.mean(1.0, s)),
        }
    }
}

/// `M_1` tabulated as a cubic spline of `ln M_1` in `u = -log2(1 - s)`.
struct MeanTable {
    spline: Option<UniformSpline>,
}

impl MeanTable {
    fn build(source: &MeanSource, params: &TheoremParams, u_max: f64) -> Result<Self> {
        let knots = (u_max / TABLE_STEP).ceil() as usize + 1;
        let values = (0..knots)
            .into_par_iter()
            .map(|i| source.eval(params, 1.0 - 0.5f64.powf(i as f64 * TABLE_STEP)))
            .collect::<Result<Vec<f64>>>()?;
        if knots < 3 || values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Ok(Self { spline: None });
        }
        Ok(Self {
            spline: Some(UniformSpline::new(0.0, TABLE_STEP, values.iter().map(|v| v.ln()).collect())),
        })
    }
}

/// `(∫_0^1 M(r ρ_y)^p (1-r)^{wp-1} r^{n-1} dr)^{1/p}` with `M` from the table
/// (or directly from the source where the table is unusable).
fn kernel_norm(
    table: &MeanTable,
    source: &MeanSource,
    params: &TheoremParams,
    weight: f64,
    rho_y: f64,
) -> Result<f64> {
    let j = -(1.0 - rho_y).log2();
    let rule = graded_radial_rule(weight * params.p - 1.0, j.ceil() as usize + 8, 16)?;
    let means: Vec<f64> = match &table.spline {
        Some(sp) => rule
            .nodes
            .iter()
            .map(|&r| sp.eval(-(1.0 - r * rho_y).log2()).exp())
            .collect(),
        None => rule
            .nodes
            .par_iter()
            .map(|&r| source.eval(params, r * rho_y))
            .collect::<Result<_>>()?,
    };
    let n = params.dim;
    let s: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .zip(&means)
        .map(|((&r, &w), &mv)| w * r.powi(n as i32 - 1) * (2.0 * mv).powf(params.p))
        .sum();
    Ok(s.powf(1.0 / params.p))
}

fn probe_kernels(c: &Multiplier, params: &TheoremParams, radii: &[f64]) -> Result<Vec<f64>> {
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::Usage("kernel probe radii must lie in (0, 1)".into()));
    }
    let u_max = radii.iter().map(|r| -(1.0 - r).log2()).fold(0.0, f64::max) + 2.0 * TABLE_STEP;
    let num_source = match c.zonal_values() {
        Some(v) if v.is_zero() => return Ok(vec![0.0; radii.len()]),
        Some(v) => MeanSource::Zonal(v),
        None => match c {
            Multiplier::Sequence(seq) => {
                let mut pole = vec![0.0; params.dim];
                pole[params.dim - 1] = 1.0;
                MeanSource::Full(full_terms(seq, params.m, &pole, default_full_resolution(seq.max_degree()))?)
            }
            Multiplier::Family(_) => unreachable!("families are zonal"),
        },
    };
    let den_source = MeanSource::Zonal(super::params::ZonalValues::Family(MultiplierFamily::Ones));
    let num_table = MeanTable::build(&num_source, params, u_max)?;
    let den_table = MeanTable::build(&den_source, params, u_max)?;
    radii
        .iter()
        .map(|&rho| {
            let num = kernel_norm(&num_table, &num_source, params, params.beta, rho)?;
            let den = kernel_norm(&den_table, &den_source, params, params.alpha, rho)?;
            Ok(num / den)
        })
        .collect()
}

/// `‖f‖_{A^{p,1}_w}` under the theorem convention.
fn poly_norm(f: &HarmonicExpansion, params: &TheoremParams, weight: f64) -> Result<f64> {
    let space = SpaceParams::new(params.p, 1.0, weight, Convention::Theorem)?;
    let k = f.max_degree();
    let rule = radial_rule(space.radial_exponent(), 48 + k / 2)?;
    let terms = NodeTerms::new(f, 8 * k + 64)?;
    let s: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&r, &w)| w * space.radial_factor(r, f.dim()) * terms.mean(1.0, r).powf(params.p))
        .sum();
    Ok(s.powf(1.0 / params.p))
}

fn random_expansion(rng: &mut ChaCha8Rng, dim: usize, kind: ExpansionKind, degree: usize) -> Result<HarmonicExpansion> {
    match kind {
        ExpansionKind::Zonal => {
            let mut pole = vec![0.0; dim];
            pole[dim - 1] = 1.0;
            HarmonicExpansion::zonal(dim, pole, (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect())
        }
        ExpansionKind::Full => HarmonicExpansion::full(
            dim,
            (0..=degree)
                .map(|k| (0..sph_dim(dim, k)).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect(),
        ),
    }
}

fn probe_random(c: &Multiplier, params: &TheoremParams, degrees: &[f64], seed: u64) -> Result<Vec<f64>> {
    if degrees.iter().any(|&k| !(k >= 1.0 && k.fract() == 0.0)) {
        return Err(Error::Usage("random probe sizes must be positive integer degrees".into()));
    }
    let kind = if c.is_zonal() {
        ExpansionKind::Zonal
    } else {
        ExpansionKind::Full
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // draw everything up front so the parallel evaluation cannot reorder the stream
    let mut draws = Vec::new();
    for &k in degrees {
        for _ in 0..RANDOM_SAMPLES {
            draws.push(random_expansion(&mut rng, params.dim, kind, k as usize)?);
        }
    }
    let ratios = draws
        .par_iter()
        .map(|f| {
            let seq = match c {
                Multiplier::Family(fam) => MultiplierSequence::from_family(params.dim, fam, f.max_degree())?,
                Multiplier::Sequence(s) => s.clone(),
            };
            let g = seq.apply(f)?;
            let den = poly_norm(f, params, params.alpha)?;
            let num = if g.max_degree() < f.max_degree() {
                poly_norm(&g.truncated(f.max_degree())?, params, params.beta)?
            } else {
                poly_norm(&g, params, params.beta)?
            };
            Ok(num / den)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios
        .chunks(RANDOM_SAMPLES)
        .map(|chunk| chunk.iter().copied().fold(0.0, f64::max))
        .collect())
}

/// Norm ratios over a probe family and the resulting growth verdict.
pub fn probe_operator_norm(
    c: &Multiplier,
    params: &TheoremParams,
    family: ProbeFamily,
    sizes: &[f64],
    seed: u64,
) -> Result<ProbeReport> {
    if sizes.len() < 2 {
        return Err(Error::Usage("a probe needs at least two sizes".into()));
    }
    c.check_dim(params.dim)?;
    let (ratios, x): (Vec<f64>, Vec<f64>) = match family {
        ProbeFamily::QmKernels => (
            probe_kernels(c, params, sizes)?,
            sizes.iter().map(|r| -(1.0 - r).ln()).collect(),
        ),
        ProbeFamily::RandomPolynomials => (
            probe_random(c, params, sizes, seed)?,
            sizes.iter().map(|k| k.ln()).collect(),
        ),
    };
    let (growth_fit, verdict) = if ratios.iter().all(|&r| r == 0.0) {
        (0.0, Verdict::Bounded)
    } else if ratios.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        (f64::NAN, Verdict::Inconclusive)
    } else {
        let y: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
        let g = linear_fit(&x, &y).0;
        (
            g,
            if g > PROBE_GROWTH_TOL {
                Verdict::Unbounded
            } else {
                Verdict::Bounded
            },
        )
    };
    Ok(ProbeReport {
        params: *params,
        multiplier: c.label(),
        probe_family: family,
        sizes: sizes.to_vec(),
        norm_ratios: ratios,
        growth_fit,
        growth_tolerance: PROBE_GROWTH_TOL,
        verdict,
        seed,
    })
}

/// Kernel probe radii `1 - 2^{-j}` for `j = j_min..=j_max`.
pub fn kernel_probe_radii(j_min: u32, j_max: u32) -> Vec<f64> {
    (j_min..=j_max).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(alpha: f64, beta: f64) -> TheoremParams {
        TheoremParams::new(1.0, alpha, beta, 2.0, 3).unwrap()
    }

    #[test]
    fn identity_between_equal_spaces_has_unit_ratios() {
        let c = Multiplier::Family(MultiplierFamily::Ones);
        let r = probe_operator_norm(&c, &params(0.5, 0.5), ProbeFamily::QmKernels, &kernel_probe_radii(3, 6), 1).unwrap();
        for v in &r.norm_ratios {
            assert_relative_eq!(*v, 1.0, max_relative = 1e-12);
        }
        assert_eq!(r.verdict, Verdict::Bounded);
        let r = probe_operator_norm(&c, &params(0.5, 0.5), ProbeFamily::RandomPolynomials, &[2.0, 4.0, 8.0], 7).unwrap();
        for v in &r.norm_ratios {
            assert_relative_eq!(*v, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_multiplier_has_zero_ratios() {
        let c = Multiplier::Sequence(MultiplierSequence::zonal(3, vec![0.0; 4]).unwrap());
        for family in [ProbeFamily::QmKernels, ProbeFamily::RandomPolynomials] {
            let sizes = match family {
                ProbeFamily::QmKernels => kernel_probe_radii(3, 5),
                ProbeFamily::RandomPolynomials => vec![2.0, 4.0],
            };
            let r = probe_operator_norm(&c, &params(0.5, 0.25), family, &sizes, 3).unwrap();
            assert!(r.norm_ratios.iter().all(|&v| v == 0.0));
            assert_eq!(r.verdict, Verdict::Bounded);
        }
    }

    #[test]
    fn identity_into_smaller_weight_grows() {
        // β < α: ratios grow like (1 - ρ_y)^{β - α}
        let c = Multiplier::Family(MultiplierFamily::Ones);
        let r = probe_operator_norm(&c, &params(0.5, 0.25), ProbeFamily::QmKernels, &kernel_probe_radii(3, 10), 1).unwrap();
        assert!((r.growth_fit - 0.25).abs() < 0.1, "{}", r.growth_fit);
        assert_eq!(r.verdict, Verdict::Unbounded);
    }

    #[test]
    fn tabulated_and_direct_norms_agree() {
        let p = params(0.5, 0.5);
        let source = MeanSource::Zonal(super::super::params::ZonalValues::Family(MultiplierFamily::PowerLaw { t: 0.5 }));
        let table = MeanTable::build(&source, &p, 6.5).unwrap();
        let none = MeanTable { spline: None };
        let a = kernel_norm(&table, &source, &p, 0.5, 1.0 - 2f64.powi(-6)).unwrap();
        let b = kernel_norm(&none, &source, &p, 0.5, 1.0 - 2f64.powi(-6)).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-5);
    }

    #[test]
    fn usage_errors() {
        let c = Multiplier::Family(MultiplierFamily::Ones);
        assert!(matches!(
            probe_operator_norm(&c, &params(0.5, 0.5), ProbeFamily::QmKernels, &[], 1),
            Err(Error::Usage(_))
        ));
        assert!(probe_operator_norm(&c, &params(0.5, 0.5), ProbeFamily::RandomPolynomials, &[1.5, 3.0], 1).is_err());
        assert_eq!("qm_kernels".parse::<ProbeFamily>().unwrap(), ProbeFamily::QmKernels);
    }
}
