//! Explicit real orthonormal spherical-harmonic bases for `n = 2` and `n = 3`.
//!
//! Orthonormality is with respect to normalized surface measure, so every
//! degree-0 function is the constant 1.
//!
//! Ordering inside block `k`:
//! * `n = 2`: `(√2 cos kθ, √2 sin kθ)`, `θ = atan2(x₂, x₁)`.
//! * `n = 3`: azimuthal index `μ = -k, ..., k`; `μ < 0` carries `√2 sin(|μ|φ)`,
//!   `μ = 0` the bare Legendre factor, `μ > 0` carries `√2 cos(μφ)`, with polar
//!   axis `x₃` and `φ = atan2(x₂, x₁)`.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::specfun::sph_dim;

const UNIT_TOL: f64 = 1e-9;

pub(crate) fn check_unit(point: &[f64], dim: usize, what: &str) -> Result<()> {
    if point.len() != dim {
        return Err(Error::domain(format!(
            "{what} has {} components, expected {dim}",
            point.len()
        )));
    }
    let norm = point.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= UNIT_TOL) {
        return Err(Error::domain(format!("{what} is not a unit vector (|v| = {norm})")));
    }
    Ok(())
}

fn check_basis_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "explicit orthonormal bases exist only for n = 2 and n = 3, got n = {n}"
        )))
    }
}

/// Value of the `j`-th (1-based) orthonormal harmonic of degree `k` at a unit point.
pub fn basis_value(n: usize, k: usize, j: usize, point: &[f64]) -> Result<f64> {
    check_basis_dim(n)?;
    let d = sph_dim(n, k) as usize;
    if j == 0 || j > d {
        return Err(Error::Index(format!(
            "basis index j = {j} outside 1..={d} for degree {k}"
        )));
    }
    let blocks = basis_blocks(n, k, point)?;
    Ok(blocks[k][j - 1])
}

/// All basis values up to degree `max_degree` at `point`, block by block.
pub fn basis_blocks(n: usize, max_degree: usize, point: &[f64]) -> Result<Vec<Vec<f64>>> {
    check_basis_dim(n)?;
    check_unit(point, n, "basis point")?;
    Ok(match n {
        2 => circle_blocks(max_degree, point),
        _ => sphere_blocks(max_degree, point),
    })
}

fn circle_blocks(max_degree: usize, point: &[f64]) -> Vec<Vec<f64>> {
    let theta = point[1].atan2(point[0]);
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push(vec![1.0]);
    for k in 1..=max_degree {
        let (s, c) = (k as f64 * theta).sin_cos();
        out.push(vec![SQRT_2 * c, SQRT_2 * s]);
    }
    out
}

/// Fully normalized associated Legendre values `N_k^μ(x)` with `∫_{-1}^{1} N² dx / 2 = 1`,
/// indexed `[k][μ]` for `0 <= μ <= k`.
fn normalized_legendre(max_degree: usize, x: f64) -> Vec<Vec<f64>> {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut table: Vec<Vec<f64>> = (0..=max_degree).map(|k| vec![0.0; k + 1]).collect();
    let mut diag = 1.0;
    for mu in 0..=max_degree {
        if mu > 0 {
            let muf = mu as f64;
            diag *= ((2.0 * muf + 1.0) / (2.0 * muf)).sqrt() * s;
        }
        table[mu][mu] = diag;
        if mu < max_degree {
            table[mu + 1][mu] = (2.0 * mu as f64 + 3.0).sqrt() * x * diag;
        }
        for k in (mu + 2)..=max_degree {
            let (kf, muf) = (k as f64, mu as f64);
            let a = ((4.0 * kf * kf - 1.0) / (kf * kf - muf * muf)).sqrt();
            let b = (((kf - 1.0).powi(2) - muf * muf) / (4.0 * (kf - 1.0).powi(2) - 1.0)).sqrt();
            table[k][mu] = a * (x * table[k - 1][mu] - b * table[k - 2][mu]);
        }
    }
    table
}

fn sphere_blocks(max_degree: usize, point: &[f64]) -> Vec<Vec<f64>> {
    let x = point[2].clamp(-1.0, 1.0);
    let phi = point[1].atan2(point[0]);
    let legendre = normalized_legendre(max_degree, x);
    let trig: Vec<(f64, f64)> = (0..=max_degree).map(|mu| (mu as f64 * phi).sin_cos()).collect();
    (0..=max_degree)
        .map(|k| {
            let ki = k as isize;
            (-ki..=ki)
                .map(|mu| {
                    let m = mu.unsigned_abs();
                    let p = legendre[k][m];
                    match mu.signum() {
                        -1 => SQRT_2 * p * trig[m].0,
                        0 => p,
                        _ => SQRT_2 * p * trig[m].1,
                    }
                })
                .collect()
        })
        .collect()
}
