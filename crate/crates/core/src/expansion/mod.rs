//! Coefficient representations of harmonic functions on the unit ball and the
//! operators acting on them.
//!
//! A harmonic `f` is stored by its spherical-harmonic coefficients,
//! `f(r x') = Σ_k r^k Σ_j c_k^{(j)} y_j^{(k)}(x')`. The *full* kind keeps every
//! block explicitly (only `n = 2, 3`); the *zonal* kind keeps one number per
//! degree and a pole `e`, standing for `Σ_k r^k c_k Z^{(k)}_e(x')`.

pub mod basis;
pub mod io;
pub mod series;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{lambda_coeff, sph_dim, sph_dim_real, ZonalRecurrence};

pub use basis::{basis_blocks, basis_value};
pub use series::{
    MultiplierFamily, SeriesTable, Tolerance, ZonalCoefficients, ZonalSeries, SERIES_DEGREE_CAP,
};

/// Largest degree a stored zonal expansion may carry.
pub const ZONAL_DEGREE_CAP: usize = 4096;
/// Largest degree a stored full expansion may carry.
pub const FULL_DEGREE_CAP: usize = 512;

const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpansionKind {
    Zonal,
    Full,
}

impl ExpansionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExpansionKind::Zonal => "zonal",
            ExpansionKind::Full => "full",
        }
    }
}

fn check_pole(dim: usize, pole: &[f64]) -> Result<()> {
    if pole.len() != dim {
        return Err(Error::invalid(
            "pole",
            format!("has {} components, expected {dim}", pole.len()),
        ));
    }
    let norm = pole.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= POLE_TOL) {
        return Err(Error::invalid(
            "pole",
            format!("must be a unit vector to within {POLE_TOL:e}, |pole| = {norm}"),
        ));
    }
    Ok(())
}

/// Validates the block layout shared by expansions and multiplier sequences.
fn check_blocks(dim: usize, kind: ExpansionKind, blocks: &[Vec<f64>]) -> Result<()> {
    if dim < 2 {
        return Err(Error::invalid("dim", format!("must be >= 2, got {dim}")));
    }
    if blocks.is_empty() {
        return Err(Error::invalid("coeffs", "at least the degree-0 coefficient is required"));
    }
    let max_degree = blocks.len() - 1;
    match kind {
        ExpansionKind::Zonal => {
            if max_degree > ZONAL_DEGREE_CAP {
                return Err(Error::invalid(
                    "coeffs",
                    format!("zonal degree {max_degree} exceeds the cap {ZONAL_DEGREE_CAP}"),
                ));
            }
        }
        ExpansionKind::Full => {
            if dim != 2 && dim != 3 {
                return Err(Error::Unsupported(format!(
                    "full-kind expansions need an explicit basis (n = 2 or 3), got n = {dim}"
                )));
            }
            if max_degree > FULL_DEGREE_CAP {
                return Err(Error::invalid(
                    "coeffs",
                    format!("full degree {max_degree} exceeds the cap {FULL_DEGREE_CAP}"),
                ));
            }
        }
    }
    for (k, block) in blocks.iter().enumerate() {
        let expected = match kind {
            ExpansionKind::Zonal => 1,
            ExpansionKind::Full => sph_dim(dim, k) as usize,
        };
        if block.len() != expected {
            return Err(Error::invalid(
                "coeffs",
                format!(
                    "block {k} has length {}, expected d_{k} = {expected}",
                    block.len()
                ),
            ));
        }
        if let Some(v) = block.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("coeffs", format!("block {k} holds non-finite value {v}")));
        }
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("radius must lie in [0, 1), got {r}")));
    }
    Ok(())
}

/// `Σ_k terms[k] r^k` by Horner's rule.
pub fn horner(terms: &[f64], r: f64) -> f64 {
    terms.iter().rev().fold(0.0, |acc, &c| acc * r + c)
}

/// Truncated spherical-harmonic expansion of a harmonic function.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicExpansion {
    dim: usize,
    kind: ExpansionKind,
    pole: Option<Vec<f64>>,
    blocks: Vec<Vec<f64>>,
}

impl HarmonicExpansion {
    /// `Σ_k r^k c_k Z^{(k)}_{pole}`.
    pub fn zonal(dim: usize, pole: Vec<f64>, coeffs: Vec<f64>) -> Result<Self> {
        let blocks: Vec<Vec<f64>> = coeffs.into_iter().map(|c| vec![c]).collect();
        check_blocks(dim, ExpansionKind::Zonal, &blocks)?;
        check_pole(dim, &pole)?;
        Ok(Self {
            dim,
            kind: ExpansionKind::Zonal,
            pole: Some(pole),
            blocks,
        })
    }

    /// Explicit coefficients; block `k` holds `d_k` values in the basis order of [`basis`].
    pub fn full(dim: usize, blocks: Vec<Vec<f64>>) -> Result<Self> {
        check_blocks(dim, ExpansionKind::Full, &blocks)?;
        Ok(Self {
            dim,
            kind: ExpansionKind::Full,
            pole: None,
            blocks,
        })
    }

    /// Full expansion with every coefficient up to `max_degree` equal to `value`.
    pub fn full_constant_coeffs(dim: usize, max_degree: usize, value: f64) -> Result<Self> {
        let blocks = (0..=max_degree)
            .map(|k| vec![value; sph_dim(dim, k) as usize])
            .collect();
        Self::full(dim, blocks)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    pub fn max_degree(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn pole(&self) -> Option<&[f64]> {
        self.pole.as_deref()
    }

    pub fn blocks(&self) -> &[Vec<f64>] {
        &self.blocks
    }

    /// Zonal coefficients `c_0, ..., c_K`; `None` for the full kind.
    pub fn zonal_coeffs(&self) -> Option<Vec<f64>> {
        match self.kind {
            ExpansionKind::Zonal => Some(self.blocks.iter().map(|b| b[0]).collect()),
            ExpansionKind::Full => None,
        }
    }

    fn with_blocks(&self, blocks: Vec<Vec<f64>>) -> Self {
        Self {
            dim: self.dim,
            kind: self.kind,
            pole: self.pole.clone(),
            blocks,
        }
    }

    /// Coefficients multiplied by `factor`.
    pub fn scale(&self, factor: f64) -> Self {
        self.with_blocks(
            self.blocks
                .iter()
                .map(|b| b.iter().map(|v| v * factor).collect())
                .collect(),
        )
    }

    /// Expansion truncated (or zero-padded) to degree `max_degree`.
    pub fn truncated(&self, max_degree: usize) -> Result<Self> {
        let mut blocks: Vec<Vec<f64>> = self.blocks.iter().take(max_degree + 1).cloned().collect();
        for k in blocks.len()..=max_degree {
            blocks.push(match self.kind {
                ExpansionKind::Zonal => vec![0.0],
                ExpansionKind::Full => vec![0.0; sph_dim(self.dim, k) as usize],
            });
        }
        check_blocks(self.dim, self.kind, &blocks)?;
        Ok(self.with_blocks(blocks))
    }

    /// Per-degree sums `S_k(x') = Σ_j c_k^{(j)} y_j^{(k)}(x')`, so `f(r x') = Σ_k r^k S_k`.
    pub fn degree_terms(&self, direction: &[f64]) -> Result<Vec<f64>> {
        basis::check_unit(direction, self.dim, "direction")?;
        match self.kind {
            ExpansionKind::Full => {
                let basis = basis_blocks(self.dim, self.max_degree(), direction)?;
                Ok(self
                    .blocks
                    .iter()
                    .zip(&basis)
                    .map(|(c, y)| c.iter().zip(y).map(|(a, b)| a * b).sum())
                    .collect())
            }
            ExpansionKind::Zonal => {
                let pole = self.pole.as_ref().expect("zonal expansions carry a pole");
                let t = pole
                    .iter()
                    .zip(direction)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    .clamp(-1.0, 1.0);
                let rec = ZonalRecurrence::new(self.dim, self.max_degree());
                let mut g = vec![0.0; self.blocks.len()];
                rec.fill_normalized(t, &mut g);
                Ok(self
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c[0] * sph_dim_real(self.dim, k) * g[k])
                    .collect())
            }
        }
    }

    /// `f(r · direction)`.
    pub fn evaluate(&self, r: f64, direction: &[f64]) -> Result<f64> {
        check_radius(r)?;
        Ok(horner(&self.degree_terms(direction)?, r))
    }

    /// Full-kind copy of a zonal expansion (`Z_e^{(k)} = Σ_j y_j^{(k)}(e) y_j^{(k)}`).
    pub fn to_full(&self) -> Result<Self> {
        match self.kind {
            ExpansionKind::Full => Ok(self.clone()),
            ExpansionKind::Zonal => {
                let pole = self.pole.as_ref().expect("zonal expansions carry a pole");
                let at_pole = basis_blocks(self.dim, self.max_degree(), pole)?;
                let blocks = at_pole
                    .into_iter()
                    .zip(&self.blocks)
                    .map(|(y, c)| y.into_iter().map(|v| v * c[0]).collect())
                    .collect();
                Self::full(self.dim, blocks)
            }
        }
    }

    /// Coefficientwise product `(f * g)_k^{(j)} = c_k^{(j)} b_k^{(j)}`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Incompatible(format!(
                "dimensions differ ({} vs {})",
                self.dim, other.dim
            )));
        }
        if self.kind != other.kind {
            return Err(Error::Incompatible(format!(
                "kinds differ ({} vs {})",
                self.kind.as_str(),
                other.kind.as_str()
            )));
        }
        if let (Some(a), Some(b)) = (&self.pole, &other.pole) {
            if a.iter().zip(b).any(|(x, y)| (x - y).abs() > POLE_TOL) {
                return Err(Error::Incompatible("zonal poles differ".into()));
            }
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).collect())
            .collect();
        Ok(self.with_blocks(blocks))
    }

    /// `Λ_{m+1} f`: coefficients multiplied by `γ_k(n, m)`.
    pub fn frac_derivative(&self, m: f64) -> Result<Self> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (k, b) in self.blocks.iter().enumerate() {
            let g = lambda_coeff(self.dim, k, m)?;
            blocks.push(b.iter().map(|v| v * g).collect());
        }
        Ok(self.with_blocks(blocks))
    }
}

/// A coefficient multiplier `{c_k^{(j)}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSequence {
    dim: usize,
    kind: ExpansionKind,
    values: Vec<Vec<f64>>,
}

impl MultiplierSequence {
    pub fn zonal(dim: usize, values: Vec<f64>) -> Result<Self> {
        let values: Vec<Vec<f64>> = values.into_iter().map(|c| vec![c]).collect();
        check_blocks(dim, ExpansionKind::Zonal, &values)?;
        Ok(Self {
            dim,
            kind: ExpansionKind::Zonal,
            values,
        })
    }

    pub fn full(dim: usize, blocks: Vec<Vec<f64>>) -> Result<Self> {
        check_blocks(dim, ExpansionKind::Full, &blocks)?;
        Ok(Self {
            dim,
            kind: ExpansionKind::Full,
            values: blocks,
        })
    }

    /// The first `max_degree + 1` terms of a named family.
    pub fn from_family(dim: usize, family: &MultiplierFamily, max_degree: usize) -> Result<Self> {
        Self::zonal(dim, (0..=max_degree).map(|k| family.coeff(k)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            kind: self.kind,
            values: self
                .values
                .iter()
                .map(|b| b.iter().map(|v| v * factor).collect())
                .collect(),
        }
    }

    /// `g_k^{(j)} = c_k^{(j)} b_k^{(j)}`, truncated to the smaller degree.
    ///
    /// A zonal sequence is broadcast across the blocks of a full expansion; a
    /// full sequence applied to a zonal expansion first expands it in the basis.
    pub fn apply(&self, f: &HarmonicExpansion) -> Result<HarmonicExpansion> {
        if self.dim != f.dim {
            return Err(Error::Incompatible(format!(
                "multiplier dimension {} vs expansion dimension {}",
                self.dim, f.dim
            )));
        }
        let target = match (self.kind, f.kind) {
            (ExpansionKind::Full, ExpansionKind::Zonal) => f.to_full()?,
            _ => f.clone(),
        };
        let blocks = target
            .blocks
            .iter()
            .zip(&self.values)
            .map(|(b, c)| match self.kind {
                ExpansionKind::Zonal => b.iter().map(|v| v * c[0]).collect(),
                ExpansionKind::Full => b.iter().zip(c).map(|(x, y)| x * y).collect(),
            })
            .collect();
        Ok(target.with_blocks(blocks))
    }
}

/// `apply_multiplier(c, f)`.
pub fn apply_multiplier(c: &MultiplierSequence, f: &HarmonicExpansion) -> Result<HarmonicExpansion> {
    c.apply(f)
}

/// Parameters of the Poisson and `Q_m` kernels with pole `y'`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub dim: usize,
    pub order: f64,
    pub pole: Vec<f64>,
    pub max_degree: usize,
}

impl KernelSpec {
    pub fn new(dim: usize, order: f64, pole: Vec<f64>, max_degree: usize) -> Result<Self> {
        if !(order > -1.0) {
            return Err(Error::domain(format!("kernel order requires m > -1, got {order}")));
        }
        check_pole(dim, &pole)?;
        Ok(Self {
            dim,
            order,
            pole,
            max_degree,
        })
    }
}

/// Truncated Poisson kernel `Σ_{k<=K} r^k Z^{(k)}_{pole}` (the order is ignored).
pub fn poisson(spec: &KernelSpec) -> Result<HarmonicExpansion> {
    HarmonicExpansion::zonal(spec.dim, spec.pole.clone(), vec![1.0; spec.max_degree + 1])
}

/// Truncated `Q_m` kernel, coefficients `2 γ_k(n, m)`.
pub fn q_kernel(spec: &KernelSpec) -> Result<HarmonicExpansion> {
    Ok(poisson(spec)?.frac_derivative(spec.order)?.scale(2.0))
}

/// `(1 - r²) / |r x' - y'|^n` with `t = <x', y'>`, under normalized measure.
pub fn poisson_closed_form(n: usize, r: f64, t: f64) -> f64 {
    (1.0 - r * r) / (1.0 - 2.0 * r * t + r * r).powf(n as f64 / 2.0)
}

/// Which kernel series [`tail_degree`] bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailKind {
    Poisson,
    QKernel { m: f64 },
}

/// Smallest `K` with `Σ_{k>K} |a_k| d_k r_max^k < tol` for the chosen kernel.
pub fn tail_degree(kind: TailKind, n: usize, r_max: f64, tol: f64) -> Result<usize> {
    if !(r_max >= 0.0 && r_max < 1.0) {
        return Err(Error::domain(format!("r_max must lie in [0, 1), got {r_max}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let ones = MultiplierFamily::Ones;
    let series = match kind {
        TailKind::Poisson => ZonalSeries::new(n, None, &ones, 1.0)?,
        TailKind::QKernel { m } => ZonalSeries::new(n, Some(m), &ones, 2.0)?,
    };
    series.truncation_degree(r_max, Tolerance::Absolute(tol))
}
