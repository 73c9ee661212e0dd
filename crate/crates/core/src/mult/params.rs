use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::condition2::zonal_integral;
use crate::error::{Error, Result};
use crate::expansion::{
    io, ExpansionKind, HarmonicExpansion, MultiplierFamily, MultiplierSequence,
};

/// Parameters of the multiplier theorem between `A^{p,1}_α` and `A^{p,1}_β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremParams {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub m: f64,
    pub dim: usize,
}

impl TheoremParams {
    /// Enforces `0 < p <= 1`, `α ∈ (0, 1)`, `β > 0`, `m > max{α - 1, 1/p - 1}`, `n >= 2`.
    pub fn new(p: f64, alpha: f64, beta: f64, m: f64, dim: usize) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Hypothesis(format!("constraint 0 < p ≤ 1 violated: p = {p}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Hypothesis(format!(
                "constraint α ∈ (0, 1) violated: α = {alpha}"
            )));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Hypothesis(format!("constraint β > 0 violated: β = {beta}")));
        }
        let bound = (alpha - 1.0).max(1.0 / p - 1.0);
        if !(m > bound && m.is_finite()) {
            return Err(Error::Hypothesis(format!(
                "constraint m > max{{α − 1, 1/p − 1}} = {bound} violated: m = {m}"
            )));
        }
        if dim < 2 {
            return Err(Error::Hypothesis(format!("constraint n ≥ 2 violated: n = {dim}")));
        }
        Ok(Self {
            p,
            alpha,
            beta,
            m,
            dim,
        })
    }

    /// `m + 1 - α + β`, the power of `(1 - ρ)` in the boundary-growth functional.
    pub fn condition2_exponent(&self) -> f64 {
        self.m + 1.0 - self.alpha + self.beta
    }

    /// Remarks about constraints used in the argument but not in the statement.
    pub fn notes(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if !(self.m > self.p * (self.alpha - 1.0)) {
            notes.push(format!(
                "m = {} does not exceed p(α − 1) = {}",
                self.m,
                self.p * (self.alpha - 1.0)
            ));
        }
        if self.m.fract() != 0.0 {
            notes.push(format!(
                "m = {} is not an integer; the integral representation through (1 − R²)^m is only checked for integer m",
                self.m
            ));
        }
        notes
    }
}

/// A candidate multiplier: a named zonal family or an explicit sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplier {
    Family(MultiplierFamily),
    Sequence(MultiplierSequence),
}

impl Multiplier {
    /// A family name (`ones`, `powerlaw:t`, `finite:K`) or, failing that, a coefficient file.
    pub fn parse(spec: &str) -> Result<Self> {
        match MultiplierFamily::from_str(spec) {
            Ok(f) => Ok(Multiplier::Family(f)),
            Err(family_err) => match std::fs::read_to_string(spec) {
                Ok(text) => Ok(Multiplier::Sequence(io::parse_multiplier(&text)?)),
                Err(_) => Err(family_err),
            },
        }
    }

    /// The coefficients of an expansion read as a multiplier sequence.
    pub fn from_expansion(f: &HarmonicExpansion) -> Result<Self> {
        Ok(Multiplier::Sequence(match f.kind() {
            ExpansionKind::Zonal => MultiplierSequence::zonal(f.dim(), f.zonal_coeffs().expect("zonal"))?,
            ExpansionKind::Full => MultiplierSequence::full(f.dim(), f.blocks().to_vec())?,
        }))
    }

    pub fn label(&self) -> String {
        match self {
            Multiplier::Family(f) => f.label(),
            Multiplier::Sequence(s) => format!("sequence:{}:{}", s.kind().as_str(), s.max_degree()),
        }
    }

    pub fn is_zonal(&self) -> bool {
        match self {
            Multiplier::Family(_) => true,
            Multiplier::Sequence(s) => s.kind() == ExpansionKind::Zonal,
        }
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Multiplier::Sequence(s) if s.dim() != dim => Err(Error::Incompatible(format!(
                "multiplier dimension {} vs theorem dimension {dim}",
                s.dim()
            ))),
            _ => Ok(()),
        }
    }

    /// Zonal coefficients, or `None` for a full-kind sequence.
    pub(crate) fn zonal_values(&self) -> Option<ZonalValues> {
        match self {
            Multiplier::Family(f) => Some(ZonalValues::Family(*f)),
            Multiplier::Sequence(s) if s.kind() == ExpansionKind::Zonal => {
                Some(ZonalValues::Finite(s.values().iter().map(|b| b[0]).collect()))
            }
            Multiplier::Sequence(_) => None,
        }
    }
}

type IntegralKey = (String, usize, u64, u64, usize);

static INTEGRAL_CACHE: OnceLock<Mutex<HashMap<IntegralKey, f64>>> = OnceLock::new();

/// Drops every memoized family integral.
pub fn clear_integral_cache() {
    if let Some(cache) = INTEGRAL_CACHE.get() {
        cache.lock().expect("cache lock").clear();
    }
}

/// Owned zonal coefficients behind a [`Multiplier`].
#[derive(Debug, Clone)]
pub(crate) enum ZonalValues {
    Family(MultiplierFamily),
    Finite(Vec<f64>),
}

impl ZonalValues {
    /// [`zonal_integral`] for these coefficients; values for named families
    /// are memoized per process, since every grid cell of a sweep asks for the
    /// same kernel means.
    pub(crate) fn integral(&self, dim: usize, m: f64, s: f64, panel_points: usize) -> Result<f64> {
        let family = match self {
            ZonalValues::Family(f) => f,
            ZonalValues::Finite(v) => return zonal_integral(dim, m, v, s, panel_points),
        };
        let key = (family.label(), dim, m.to_bits(), s.to_bits(), panel_points);
        let cache = INTEGRAL_CACHE.get_or_init(Default::default);
        if let Some(&v) = cache.lock().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let v = zonal_integral(dim, m, family, s, panel_points)?;
        cache.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    pub(crate) fn is_zero(&self) -> bool {
        match self {
            ZonalValues::Family(_) => false,
            ZonalValues::Finite(v) => v.iter().all(|&c| c == 0.0),
        }
    }
}
