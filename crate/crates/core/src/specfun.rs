//! Scalar special functions behind every series coefficient.
//!
//! Gamma factors are handled in log space throughout: the fractional-derivative
//! factor `γ_k` grows like `k^{m+1}` and `Γ` itself overflows near 171.

use crate::error::{Error, Result};

/// Shift point above which the Stirling series is used directly.
const STIRLING_MIN: f64 = 10.0;

/// Bernoulli coefficients `B_{2j} / (2j (2j - 1))` of the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Degree above which [`gegenbauer`] is out of contract.
pub const GEGENBAUER_MAX_DEGREE: usize = 500;

/// Tail of the Stirling series, `ln Γ(x) - [(x - 1/2) ln x - x + ln √(2π)]`, for `x >= 10`.
fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    // Exact for small integers: (x - 1)! is exactly representable up to 22!.
    if x <= 23.0 && x.fract() == 0.0 {
        let mut fact = 1.0_f64;
        for i in 2..(x as u64) {
            fact *= i as f64;
        }
        return Ok(fact.ln());
    }
    let mut shift = 0.0;
    let mut z = x;
    while z < STIRLING_MIN {
        shift += z.ln();
        z += 1.0;
    }
    // (z - 1/2)(ln z - 1) carries most of the magnitude; form it in
    // double-double so the result is within about one ulp.
    let (lh, ll) = ln_double_double(z);
    let (mh, ml) = two_sum(lh, -1.0);
    let ml = ml + ll;
    let a = z - 0.5;
    let ph = a * mh;
    let pl = a.mul_add(mh, -ph) + a * ml;
    Ok(ph + (pl + (HALF_LN_2PI - 0.5 + stirling_tail(z) - shift)))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `ln x` as an unevaluated sum `hi + lo` with about 2^-60 relative error.
fn ln_double_double(x: f64) -> (f64, f64) {
    // ln 2 split so that e * LN2_HI is exact for |e| < 2^11
    const LN2_HI: f64 = 0.693_147_180_369_123_8;
    const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;
    let bits = x.to_bits();
    let mut e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let mut m = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | 0x3ff0_0000_0000_0000);
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1;
    }
    let ef = e as f64;
    let (hi, err) = two_sum(ef * LN2_HI, m.ln());
    (hi, err + ef * LN2_LO)
}

/// `ln(Γ(a) / Γ(b))` without forming either Gamma separately.
///
/// For nearby large arguments the Stirling difference is taken term by term,
/// so `Γ(a + 1) / Γ(a) = a` holds to a few ulps even for `a ~ 10^6`.
pub fn ln_gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "gamma ratio requires positive arguments, got ({a}, {b})"
        )));
    }
    let mut acc = 0.0;
    let (mut a, mut b) = (a, b);
    while a < STIRLING_MIN {
        acc -= a.ln();
        a += 1.0;
    }
    while b < STIRLING_MIN {
        acc += b.ln();
        b += 1.0;
    }
    let d = a - b;
    // (a - 1/2) ln a - (b - 1/2) ln b = d ln a + (b - 1/2) ln(a / b)
    let main = d * a.ln() + (b - 0.5) * (d / b).ln_1p() - d;
    Ok(acc + main + stirling_tail(a) - stirling_tail(b))
}

/// `Γ(a) / Γ(b)` for positive arguments, evaluated as `exp(ln Γ(a) - ln Γ(b))`.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma_ratio(a, b)?.exp())
}

/// A Gamma ratio kept in log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatio {
    pub numerator_arg: f64,
    pub denominator_arg: f64,
    pub log_value: f64,
}

impl GammaRatio {
    pub fn new(numerator_arg: f64, denominator_arg: f64) -> Result<Self> {
        Ok(Self {
            numerator_arg,
            denominator_arg,
            log_value: ln_gamma_ratio(numerator_arg, denominator_arg)?,
        })
    }

    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// Ultraspherical polynomial `C_k^λ(t)` by the forward three-term recurrence.
///
/// `λ = 0` is rejected (the `n = 2` zonal case goes through [`zonal`]).
pub fn gegenbauer(k: usize, lambda: f64, t: f64) -> Result<f64> {
    if !(t.abs() <= 1.0) {
        return Err(Error::domain(format!("gegenbauer requires |t| <= 1, got {t}")));
    }
    if !(lambda > -0.5) || lambda == 0.0 {
        return Err(Error::domain(format!(
            "gegenbauer requires lambda > -1/2 and lambda != 0, got {lambda}"
        )));
    }
    if k > GEGENBAUER_MAX_DEGREE {
        return Err(Error::domain(format!(
            "gegenbauer degree {k} exceeds the supported cap {GEGENBAUER_MAX_DEGREE}"
        )));
    }
    let mut prev = 1.0;
    if k == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * lambda * t;
    for j in 2..=k {
        let jf = j as f64;
        let next = (2.0 * t * (jf + lambda - 1.0) * cur - (jf + 2.0 * lambda - 2.0) * prev) / jf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Dimension `d_k` of the degree-`k` spherical harmonics on `S^{n-1}`.
///
/// Panics if `n < 2` or if the value does not fit in a `u64`.
pub fn sph_dim(n: usize, k: usize) -> u64 {
    assert!(n >= 2, "sph_dim requires n >= 2");
    if k == 0 {
        return 1;
    }
    if n == 2 {
        return 2;
    }
    let upper = binomial(n + k - 1, k);
    let lower = if k >= 2 { binomial(n + k - 3, k - 2) } else { 0 };
    u64::try_from(upper - lower).expect("sph_dim overflows u64")
}

/// `d_k` as a float, usable for degrees where the integer would overflow.
pub fn sph_dim_real(n: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if n == 2 {
        return 2.0;
    }
    // d_k = (2k + n - 2) / (n - 2) * C(k + n - 3, n - 3)
    let kf = k as f64;
    let mut binom = 1.0;
    for i in 1..=(n - 3) {
        binom *= (kf + i as f64) / i as f64;
    }
    (2.0 * kf + n as f64 - 2.0) / (n as f64 - 2.0) * binom
}

fn binomial(top: usize, choose: usize) -> u128 {
    let choose = choose.min(top - choose);
    let mut acc: u128 = 1;
    for i in 0..choose {
        acc = acc
            .checked_mul((top - i) as u128)
            .expect("binomial overflows u128")
            / (i as u128 + 1);
    }
    acc
}

/// Validated arguments of a zonal-harmonic evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZonalEvalParams {
    pub dim: usize,
    pub degree: usize,
    pub cosine: f64,
}

impl ZonalEvalParams {
    pub fn new(dim: usize, degree: usize, cosine: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {dim}")));
        }
        if !(cosine.abs() <= 1.0) {
            return Err(Error::domain(format!("zonal requires |t| <= 1, got {cosine}")));
        }
        Ok(Self {
            dim,
            degree,
            cosine,
        })
    }
}

/// Zonal harmonic `Z^{(k)}_{x'}(y')` as a function of `t = <x', y'>`.
///
/// Normalized so that `Z^{(k)}_{x'}(y') = Σ_j y_j^{(k)}(x') y_j^{(k)}(y')` for an
/// orthonormal basis under normalized surface measure; hence `zonal(n, k, 1) = d_k`.
pub fn zonal(n: usize, k: usize, t: f64) -> Result<f64> {
    let p = ZonalEvalParams::new(n, k, t)?;
    if p.degree == 0 {
        return Ok(1.0);
    }
    if p.dim == 2 {
        return Ok(2.0 * (k as f64 * t.acos()).cos());
    }
    let rec = ZonalRecurrence::new(n, k);
    Ok(sph_dim_real(n, k) * rec.normalized_at(t, k))
}

/// `γ_k(n, m) = Γ(k + n/2 + m + 1) / (Γ(k + n/2) Γ(m + 1))`, the `Λ_{m+1}` factor.
pub fn lambda_coeff(n: usize, k: usize, m: f64) -> Result<f64> {
    if !(m > -1.0) {
        return Err(Error::domain(format!(
            "fractional derivative order requires m > -1, got {m}"
        )));
    }
    if n < 2 {
        return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
    }
    let base = k as f64 + n as f64 / 2.0;
    Ok((ln_gamma_ratio(base + m + 1.0, base)? - log_gamma(m + 1.0)?).exp())
}

/// Precomputed recurrence for the normalized Gegenbauer values
/// `G_k(t) = C_k^λ(t) / C_k^λ(1)`, `λ = (n - 2) / 2`.
///
/// `G_0 = 1`, `G_1 = t`, `G_k = a_k t G_{k-1} - b_k G_{k-2}` with
/// `a_k = 2(k + λ - 1)/(k + 2λ - 1)` and `b_k = (k - 1)/(k + 2λ - 1)`.
/// At `λ = 0` this is the Chebyshev recurrence, so `n = 2` needs no special case.
#[derive(Debug, Clone)]
pub struct ZonalRecurrence {
    dim: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl ZonalRecurrence {
    pub fn new(dim: usize, max_degree: usize) -> Self {
        let lambda = (dim as f64 - 2.0) / 2.0;
        let mut a = vec![0.0; max_degree + 1];
        let mut b = vec![0.0; max_degree + 1];
        for k in 2..=max_degree {
            let kf = k as f64;
            let den = kf + 2.0 * lambda - 1.0;
            a[k] = 2.0 * (kf + lambda - 1.0) / den;
            b[k] = (kf - 1.0) / den;
        }
        Self { dim, a, b }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.a.len() - 1
    }

    /// `G_k(t)` for a single degree `k <= max_degree`.
    pub fn normalized_at(&self, t: f64, k: usize) -> f64 {
        let mut prev = 1.0;
        if k == 0 {
            return prev;
        }
        let mut cur = t;
        for j in 2..=k {
            let next = self.a[j] * t * cur - self.b[j] * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Writes `G_0(t), ..., G_K(t)` into `out` (`K = out.len() - 1`).
    pub fn fill_normalized(&self, t: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        out[0] = 1.0;
        if out.len() > 1 {
            out[1] = t;
        }
        for k in 2..out.len() {
            out[k] = self.a[k] * t * out[k - 1] - self.b[k] * out[k - 2];
        }
    }

    /// `Σ_k weights[k] G_k(t)`; `weights` must not exceed `max_degree + 1` entries.
    pub fn dot(&self, weights: &[f64], t: f64) -> f64 {
        match weights.len() {
            0 => return 0.0,
            1 => return weights[0],
            _ => {}
        }
        let mut prev = 1.0;
        let mut cur = t;
        let mut acc = weights[0] + weights[1] * t;
        for k in 2..weights.len() {
            let next = self.a[k] * t * cur - self.b[k] * prev;
            acc += weights[k] * next;
            prev = cur;
            cur = next;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Independent Lanczos (g = 7, n = 9) evaluation used only as an oracle.
    fn lanczos_gamma(x: f64) -> f64 {
        const G: f64 = 7.0;
        const C: [f64; 9] = [
            0.999_999_999_999_809_9,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_1,
            -176.615_029_162_140_6,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_572e-6,
            1.505_632_735_149_311_6e-7,
        ];
        let x = x - 1.0;
        let mut acc = C[0];
        for (i, c) in C.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }

    #[test]
    fn log_gamma_examples() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_relative_eq!(log_gamma(5.0).unwrap(), 24f64.ln(), max_relative = 1e-15);
        // ln √π
        let half = log_gamma(0.5).unwrap();
        assert_relative_eq!(half, 0.572_364_942_924_700_1, max_relative = 1e-14);
        assert_relative_eq!(half.exp(), lanczos_gamma(0.5), max_relative = 1e-13);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(-2.5), Err(Error::Domain(_))));
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_matches_lanczos_oracle() {
        // exp(result) to 1e-13 relative wherever Γ itself is representable
        // (above ~100 the oracle's own t^(x+1/2) loses more than 1e-13)
        let mut x = 0.5;
        while x < 100.0 {
            let ours = log_gamma(x).unwrap().exp();
            assert_relative_eq!(ours, lanczos_gamma(x), max_relative = 1e-13);
            x += 0.37;
        }
    }

    #[test]
    fn log_gamma_matches_high_precision_values() {
        // 40-digit reference evaluation, frozen. exp(result) is within 1e-13
        // relative until ulp(ln Γ) itself exceeds that (ln Γ > 512); beyond, the
        // budget is two ulps of ln Γ.
        const REF: [(f64, f64); 14] = [
            (0.5, 0.572_364_942_924_700_087_07),
            (0.75, 0.203_280_951_431_295_371_48),
            (1.5, -0.120_782_237_635_245_222_35),
            (3.25, 0.935_801_931_108_725_358_26),
            (7.9, 8.324_265_868_008_809_634_9),
            (10.5, 13.940_625_219_403_763_633),
            (33.3, 82.603_723_581_654_943_008),
            (99.5, 356.835_382_823_613_074_47),
            (125.19, 477.961_428_994_792_371_9),
            (170.5, 704.004_427_734_204_670_79),
            (512.25, 2_681.381_545_022_319_525_4),
            (1000.0, 5_905.220_423_209_181_211_8),
            (4321.5, 31_852.056_198_252_258_331),
            (10000.0, 82_099.717_496_442_377_273),
        ];
        for (x, want) in REF {
            let got = log_gamma(x).unwrap();
            let budget = 1e-13f64.max(2.0 * f64::EPSILON * want.abs());
            assert!((got - want).abs() <= budget, "x = {x}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_large_arguments_follow_recurrence() {
        // ln Γ(x + 1) - ln Γ(x) = ln x; the absolute error budget is set by ulp(ln Γ(x)).
        for &x in &[200.5, 1234.25, 9_999.0, 1.0e6] {
            let lhs = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
            let scale = log_gamma(x).unwrap().abs();
            assert!((lhs - x.ln()).abs() <= 4.0 * f64::EPSILON * scale);
        }
    }

    #[test]
    fn gamma_ratio_examples() {
        assert_relative_eq!(gamma_ratio(3.0, 1.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_ratio(5.5, 2.5).unwrap(), 39.375, max_relative = 1e-14);
        assert_relative_eq!(gamma_ratio(1001.0, 1000.0).unwrap(), 1000.0, max_relative = 1e-13);
        assert!(gamma_ratio(0.0, 1.0).is_err());
        assert!(gamma_ratio(1.0, -1.0).is_err());
        let r = GammaRatio::new(5.5, 2.5).unwrap();
        assert_relative_eq!(r.value(), 39.375, max_relative = 1e-14);
    }

    #[test]
    fn gamma_ratio_recurrence_on_seeded_sample() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
        for _ in 0..10_000 {
            let a: f64 = rng.random_range(1.0..100.0);
            let r = gamma_ratio(a + 1.0, a).unwrap();
            assert!(((r - a) / a).abs() <= 1e-12, "a = {a}: {r}");
        }
        // log_value stays finite up to 10^6
        assert!(ln_gamma_ratio(1.0e6, 3.0).unwrap().is_finite());
        assert!(ln_gamma_ratio(0.5, 1.0e6).unwrap().is_finite());
    }

    #[test]
    fn gegenbauer_examples() {
        assert_eq!(gegenbauer(0, 1.0, 0.7).unwrap(), 1.0);
        assert_relative_eq!(gegenbauer(1, 1.0, 0.7).unwrap(), 1.4, max_relative = 1e-15);
        // C_2^λ(t) = -λ + 2λ(1 + λ)t² vanishes at λ = 1, t = 1/2
        let direct = |lambda: f64, t: f64| -lambda + 2.0 * lambda * (1.0 + lambda) * t * t;
        assert!(gegenbauer(2, 1.0, 0.5).unwrap().abs() < 1e-15);
        for &(l, t) in &[(0.5, 0.3), (1.5, -0.8), (2.0, 0.99)] {
            assert_relative_eq!(gegenbauer(2, l, t).unwrap(), direct(l, t), max_relative = 1e-14);
        }
    }

    #[test]
    fn gegenbauer_domain_errors() {
        assert!(gegenbauer(3, 1.0, 1.5).is_err());
        assert!(gegenbauer(3, 0.0, 0.5).is_err());
        assert!(gegenbauer(3, -0.5, 0.5).is_err());
        assert!(gegenbauer(GEGENBAUER_MAX_DEGREE + 1, 1.0, 0.5).is_err());
    }

    #[test]
    fn gegenbauer_value_at_one() {
        for &lambda in &[0.5, 1.0, 1.5, 2.0] {
            for k in 0..=100usize {
                // C(k + 2λ - 1, k) = Γ(k + 2λ) / (Γ(2λ) Γ(k + 1))
                let expected =
                    (ln_gamma_ratio(k as f64 + 2.0 * lambda, 2.0 * lambda).unwrap()
                        - log_gamma(k as f64 + 1.0).unwrap())
                    .exp();
                let got = gegenbauer(k, lambda, 1.0).unwrap();
                assert_relative_eq!(got, expected, max_relative = 1e-10);
            }
        }
    }

    /// Rank of the Laplacian's kernel on homogeneous degree-k polynomials in n
    /// variables: dim P_k - dim P_{k-2}, since Δ: P_k → P_{k-2} is onto.
    fn harmonic_count(n: usize, k: usize) -> u64 {
        fn monomials(n: usize, k: usize) -> u64 {
            // count solutions of e_1 + ... + e_n = k by enumeration
            fn rec(n: usize, k: usize) -> u64 {
                if n == 1 {
                    return 1;
                }
                (0..=k).map(|e| rec(n - 1, k - e)).sum()
            }
            rec(n, k)
        }
        monomials(n, k) - if k >= 2 { monomials(n, k - 2) } else { 0 }
    }

    #[test]
    fn sph_dim_examples() {
        assert_eq!(sph_dim(2, 3), 2);
        assert_eq!(sph_dim(3, 2), 5);
        for n in 2..7 {
            assert_eq!(sph_dim(n, 0), 1);
        }
        for n in 2..=6 {
            for k in 0..=12 {
                assert_eq!(sph_dim(n, k), harmonic_count(n, k), "n={n} k={k}");
                assert_eq!(sph_dim_real(n, k), sph_dim(n, k) as f64);
            }
        }
    }

    #[test]
    fn zonal_examples() {
        for n in 2..6 {
            assert_eq!(zonal(n, 0, 0.3).unwrap(), 1.0);
        }
        for &t in &[-1.0, -0.4, 0.0, 0.25, 1.0] {
            assert_relative_eq!(zonal(3, 1, t).unwrap(), 3.0 * t, epsilon = 1e-15);
        }
        let theta: f64 = 0.7;
        assert_relative_eq!(
            zonal(2, 4, theta.cos()).unwrap(),
            2.0 * (4.0 * theta).cos(),
            epsilon = 1e-14
        );
        assert!(zonal(3, 2, 1.01).is_err());
        assert!(zonal(1, 2, 0.5).is_err());
    }

    #[test]
    fn zonal_at_one_is_dimension() {
        for n in 2..=6 {
            for k in 0..=60 {
                let z = zonal(n, k, 1.0).unwrap();
                let d = sph_dim(n, k) as f64;
                assert!(((z - d) / d).abs() <= 1e-10, "n={n} k={k}: {z} vs {d}");
            }
        }
    }

    #[test]
    fn lambda_coeff_examples() {
        assert_relative_eq!(lambda_coeff(2, 0, 1.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(lambda_coeff(2, 1, 1.0).unwrap(), 6.0, max_relative = 1e-14);
        assert!(lambda_coeff(2, 1, -1.0).is_err());
    }

    #[test]
    fn lambda_coeff_asymptotic_scaling() {
        // γ_k ~ k^{m+1} / Γ(m+1): fit the log-log slope over k in [20, 80],
        // measured from the shifted origin k + n/2 + m/2
        let (n, m) = (3, 2.0);
        let ks: Vec<f64> = (20..=80).map(|k| k as f64).collect();
        let xs: Vec<f64> = ks.iter().map(|k| (k + 2.5).ln()).collect();
        let ys: Vec<f64> = ks
            .iter()
            .map(|&k| lambda_coeff(n, k as usize, m).unwrap().ln())
            .collect();
        let (slope, _) = crate::fit::linear_fit(&xs, &ys);
        assert!((slope - (m + 1.0)).abs() < 0.01, "slope {slope}");
        // at k = 40 the value is within 1% of the shifted asymptote (k + n/2 + m/2)^{m+1} / Γ(m+1)
        let k = 40.0;
        let asym = (k + 1.5 + 1.0_f64).powf(m + 1.0) / 2.0;
        let got = lambda_coeff(n, 40, m).unwrap();
        assert!(((got - asym) / got).abs() < 0.01, "{got} vs {asym}");
    }

    #[test]
    fn normalized_recurrence_matches_gegenbauer() {
        for n in 3..=6 {
            let lambda = (n as f64 - 2.0) / 2.0;
            let rec = ZonalRecurrence::new(n, 40);
            for &t in &[-0.9, -0.2, 0.3, 0.77] {
                for k in 0..=40 {
                    let expected =
                        gegenbauer(k, lambda, t).unwrap() / gegenbauer(k, lambda, 1.0).unwrap();
                    assert_relative_eq!(
                        rec.normalized_at(t, k),
                        expected,
                        epsilon = 1e-12,
                        max_relative = 1e-10
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn lambda_coeff_is_increasing(n in 2usize..7, m in -0.9f64..5.0, k in 0usize..200) {
            let a = lambda_coeff(n, k, m).unwrap();
            let b = lambda_coeff(n, k + 1, m).unwrap();
            prop_assert!(a > 0.0);
            prop_assert!(b > a);
        }

        #[test]
        fn dot_matches_pointwise_sum(n in 2usize..6, t in -1.0f64..1.0, len in 1usize..30) {
            let rec = ZonalRecurrence::new(n, len);
            let weights: Vec<f64> = (0..len).map(|k| 1.0 / (k as f64 + 1.0)).collect();
            let direct: f64 = (0..len).map(|k| weights[k] * rec.normalized_at(t, k)).sum();
            prop_assert!((rec.dot(&weights, t) - direct).abs() < 1e-12);
        }
    }
}
