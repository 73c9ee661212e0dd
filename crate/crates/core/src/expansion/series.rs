//! Lazily truncated zonal series `Σ_k a_k r^k Z^{(k)}(t)`.
//!
//! Kernel series near the boundary need far more terms than a stored
//! expansion may hold (at `r = 1 - 2^{-12}` several hundred thousand), so the
//! coefficients are produced on demand and the truncation degree comes from a
//! geometric majorant of the tail.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{lambda_coeff, sph_dim_real, ZonalRecurrence};

/// Hard cap on the degree of any lazily evaluated series.
pub const SERIES_DEGREE_CAP: usize = 1 << 23;

/// Degree-indexed coefficients of a zonal multiplier or kernel.
pub trait ZonalCoefficients: Send + Sync {
    fn coeff(&self, k: usize) -> f64;

    /// Largest degree with a nonzero coefficient, or `None` for infinite support.
    fn support(&self) -> Option<usize>;

    /// An upper bound on `|c_{j+1} / c_j|` valid for every `j >= k`.
    ///
    /// Only consulted for infinitely supported sequences.
    fn ratio_bound(&self, k: usize) -> f64;
}

/// The named multiplier families accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum MultiplierFamily {
    /// `c_k = 1`: the identity multiplier.
    Ones,
    /// `c_k = (k + 1)^{-t}`.
    PowerLaw { t: f64 },
    /// `c_k = 1` for `k <= degree`, zero beyond.
    Finite { degree: usize },
}

impl MultiplierFamily {
    pub fn label(&self) -> String {
        match self {
            MultiplierFamily::Ones => "ones".into(),
            MultiplierFamily::PowerLaw { t } => format!("powerlaw:{t}"),
            MultiplierFamily::Finite { degree } => format!("finite:{degree}"),
        }
    }
}

impl FromStr for MultiplierFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("unknown multiplier family `{s}` (expected ones, powerlaw:t or finite:K)"));
        match s.split_once(':') {
            None if s == "ones" => Ok(MultiplierFamily::Ones),
            Some(("powerlaw", t)) => {
                let t: f64 = t.parse().map_err(|_| bad())?;
                if !t.is_finite() {
                    return Err(bad());
                }
                Ok(MultiplierFamily::PowerLaw { t })
            }
            Some(("finite", k)) => Ok(MultiplierFamily::Finite {
                degree: k.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

impl ZonalCoefficients for MultiplierFamily {
    fn coeff(&self, k: usize) -> f64 {
        match *self {
            MultiplierFamily::Ones => 1.0,
            MultiplierFamily::PowerLaw { t } => (k as f64 + 1.0).powf(-t),
            MultiplierFamily::Finite { degree } => {
                if k <= degree {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn support(&self) -> Option<usize> {
        match *self {
            MultiplierFamily::Finite { degree } => Some(degree),
            _ => None,
        }
    }

    fn ratio_bound(&self, k: usize) -> f64 {
        match *self {
            MultiplierFamily::PowerLaw { t } if t < 0.0 => {
                ((k as f64 + 2.0) / (k as f64 + 1.0)).powf(-t)
            }
            _ => 1.0,
        }
    }
}

/// A plain finite coefficient list.
impl ZonalCoefficients for [f64] {
    fn coeff(&self, k: usize) -> f64 {
        self.get(k).copied().unwrap_or(0.0)
    }

    fn support(&self) -> Option<usize> {
        Some(self.len().saturating_sub(1))
    }

    fn ratio_bound(&self, _k: usize) -> f64 {
        1.0
    }
}

impl ZonalCoefficients for Vec<f64> {
    fn coeff(&self, k: usize) -> f64 {
        self.as_slice().coeff(k)
    }

    fn support(&self) -> Option<usize> {
        self.as_slice().support()
    }

    fn ratio_bound(&self, k: usize) -> f64 {
        self.as_slice().ratio_bound(k)
    }
}

/// How a truncation degree is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// Tail majorant below this absolute value.
    Absolute(f64),
    /// Tail majorant below this fraction of the partial sum of `|a_k| d_k r^k`.
    Relative(f64),
}

/// `Σ_k scale · γ_k(n, m)^{[order]} · c_k · r^k Z^{(k)}(t)`.
///
/// With `order = None` the series is `g * P`; with `order = Some(m)` it is
/// `Λ_{m+1}(g * P)`; `Q_m` is `order = Some(m)`, `scale = 2`, `c ≡ 1`.
#[derive(Clone, Copy)]
pub struct ZonalSeries<'a> {
    pub dim: usize,
    pub order: Option<f64>,
    pub base: &'a dyn ZonalCoefficients,
    pub scale: f64,
}

/// Every γ_k obtained by the product recurrence is re-anchored this often.
const RESYNC: usize = 256;

impl<'a> ZonalSeries<'a> {
    pub fn new(
        dim: usize,
        order: Option<f64>,
        base: &'a dyn ZonalCoefficients,
        scale: f64,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {dim}")));
        }
        if let Some(m) = order {
            if !(m > -1.0) {
                return Err(Error::domain(format!(
                    "fractional derivative order requires m > -1, got {m}"
                )));
            }
        }
        Ok(Self {
            dim,
            order,
            base,
            scale,
        })
    }

    /// Coefficients `a_0, ..., a_{len-1}`.
    pub fn coefficients(&self, len: usize) -> Vec<f64> {
        let half = self.dim as f64 / 2.0;
        let mut gamma = 1.0;
        (0..len)
            .map(|k| {
                if let Some(m) = self.order {
                    if k % RESYNC == 0 {
                        gamma = lambda_coeff(self.dim, k, m).expect("validated order");
                    } else {
                        let kf = (k - 1) as f64;
                        gamma *= (kf + half + m + 1.0) / (kf + half);
                    }
                }
                self.scale * gamma * self.base.coeff(k)
            })
            .collect()
    }

    /// Bound on `|a_{j+1}| d_{j+1} / (|a_j| d_j)` for all `j >= k`.
    fn term_ratio_bound(&self, k: usize) -> f64 {
        let kf = k as f64;
        let half = self.dim as f64 / 2.0;
        let gamma = self.order.map_or(1.0, |m| (kf + half + m + 1.0) / (kf + half));
        let dims = if k == 0 {
            sph_dim_real(self.dim, 1)
        } else {
            sph_dim_real(self.dim, k + 1) / sph_dim_real(self.dim, k)
        };
        self.base.ratio_bound(k) * gamma * dims
    }

    /// Smallest `K` whose tail majorant `Σ_{k>K} |a_k| d_k r^k` meets `tol`.
    pub fn truncation_degree(&self, r: f64, tol: Tolerance) -> Result<usize> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::domain(format!("series radius must lie in [0, 1), got {r}")));
        }
        if let Some(support) = self.base.support() {
            return Ok(support);
        }
        if r == 0.0 {
            return Ok(0);
        }
        let half = self.dim as f64 / 2.0;
        let mut gamma = 1.0;
        let mut partial = 0.0;
        let mut rk = 1.0;
        let mut k = 0usize;
        loop {
            if let Some(m) = self.order {
                if k % RESYNC == 0 {
                    gamma = lambda_coeff(self.dim, k, m)?;
                } else {
                    let kf = (k - 1) as f64;
                    gamma *= (kf + half + m + 1.0) / (kf + half);
                }
            }
            if k % RESYNC == 0 {
                rk = r.powi(k as i32);
            } else {
                rk *= r;
            }
            let term = (self.scale * gamma * self.base.coeff(k)).abs() * sph_dim_real(self.dim, k) * rk;
            partial += term;
            let q = r * self.term_ratio_bound(k);
            if q < 1.0 {
                let tail = term * q / (1.0 - q);
                let threshold = match tol {
                    Tolerance::Absolute(t) => t,
                    Tolerance::Relative(t) => t * partial,
                };
                if tail <= threshold {
                    return Ok(k);
                }
            }
            k += 1;
            if k > SERIES_DEGREE_CAP {
                return Err(Error::Accuracy {
                    what: format!("zonal series truncation at r = {r}"),
                    coarse: partial,
                    fine: f64::INFINITY,
                });
            }
        }
    }

    /// Tabulates coefficients and dimensions for every radius up to `r_max`.
    pub fn table(&self, r_max: f64, tol: Tolerance) -> Result<SeriesTable> {
        let degree = self.truncation_degree(r_max, tol)?;
        let coeffs = self.coefficients(degree + 1);
        let dims = (0..=degree).map(|k| sph_dim_real(self.dim, k)).collect();
        Ok(SeriesTable {
            dim: self.dim,
            coeffs,
            dims,
            recurrence: ZonalRecurrence::new(self.dim, degree),
            tol,
            infinite: self.base.support().is_none(),
        })
    }
}

/// Coefficients of a zonal series materialised up to a fixed degree.
#[derive(Debug, Clone)]
pub struct SeriesTable {
    dim: usize,
    coeffs: Vec<f64>,
    dims: Vec<f64>,
    recurrence: ZonalRecurrence,
    tol: Tolerance,
    infinite: bool,
}

impl SeriesTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn recurrence(&self) -> &ZonalRecurrence {
        &self.recurrence
    }

    /// Weights `w_k = a_k d_k r^k`, truncated for radius `r`.
    pub fn weights(&self, r: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut rk = 1.0;
        let mut partial = 0.0;
        for k in 0..self.coeffs.len() {
            if k % RESYNC == 0 {
                rk = r.powi(k as i32);
            } else {
                rk *= r;
            }
            let w = self.coeffs[k] * self.dims[k] * rk;
            out.push(w);
            partial += w.abs();
            if self.infinite && k >= 1 && rk > 0.0 {
                // stop once the remaining tabulated tail cannot matter
                let threshold = match self.tol {
                    Tolerance::Absolute(t) => t,
                    Tolerance::Relative(t) => t * partial,
                };
                let ratio = if self.coeffs[k - 1] != 0.0 {
                    (w / (self.coeffs[k - 1] * self.dims[k - 1] * rk / r)).abs()
                } else {
                    1.0
                };
                if ratio < 1.0 && w.abs() * ratio / (1.0 - ratio) <= threshold * 1e-3 {
                    break;
                }
            }
        }
        out
    }

    /// Value of the series at radius `r` and cosine `t`.
    pub fn value(&self, r: f64, t: f64) -> f64 {
        self.recurrence.dot(&self.weights(r), t)
    }
}
