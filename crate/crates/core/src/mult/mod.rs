//! Multiplier certification: the boundary-growth functional, operator-norm
//! probes, and the verdict comparing them.

pub mod condition2;
pub mod params;
pub mod probe;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use condition2::{
    condition2_integral, condition2_sup, direction_design, growth_verdict, zonal_integral,
    Condition2Options, Condition2Report,
};
pub use params::{clear_integral_cache, Multiplier, TheoremParams};
pub use probe::{kernel_probe_radii, probe_operator_norm, ProbeFamily, ProbeReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::Unbounded => "unbounded",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Agreement of the two sides of the equivalence for one `(c, params)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub status: CheckStatus,
    pub params: TheoremParams,
    pub multiplier: String,
    pub condition2_verdict: Verdict,
    pub probe_verdict: Verdict,
    pub condition2_phi_exponent: f64,
    pub probe_growth_fit: f64,
}

/// PASS when both verdicts agree, INCONCLUSIVE when either is, FAIL otherwise.
pub fn equivalence_verdict(cond2: &Condition2Report, probe: &ProbeReport) -> Result<CheckReport> {
    if cond2.params != probe.params || cond2.multiplier != probe.multiplier {
        return Err(Error::Usage(format!(
            "reports describe different problems ({} with {:?} vs {} with {:?})",
            cond2.multiplier, cond2.params, probe.multiplier, probe.params
        )));
    }
    let status = match (cond2.verdict, probe.verdict) {
        (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => CheckStatus::Inconclusive,
        (a, b) if a == b => CheckStatus::Pass,
        _ => CheckStatus::Fail,
    };
    Ok(CheckReport {
        status,
        params: cond2.params,
        multiplier: cond2.multiplier.clone(),
        condition2_verdict: cond2.verdict,
        probe_verdict: probe.verdict,
        condition2_phi_exponent: cond2.phi_exponent,
        probe_growth_fit: probe.growth_fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::MultiplierFamily;

    fn reports(v1: Verdict, v2: Verdict) -> (Condition2Report, ProbeReport) {
        let params = TheoremParams::new(1.0, 0.5, 0.5, 2.0, 3).unwrap();
        let c = Condition2Report {
            params,
            multiplier: "ones".into(),
            rho_grid: vec![],
            values: vec![],
            raw_integrals: vec![],
            fitted_exponent: 3.0,
            phi_exponent: 0.0,
            sup_estimate: 1.0,
            verdict: v1,
            rho_squared: false,
            directions: 1,
            slope_tolerance: 0.02,
            tail_tolerance: 0.01,
        };
        let p = ProbeReport {
            params,
            multiplier: "ones".into(),
            probe_family: ProbeFamily::QmKernels,
            sizes: vec![],
            norm_ratios: vec![],
            growth_fit: 0.0,
            growth_tolerance: 0.05,
            verdict: v2,
            seed: 1,
        };
        (c, p)
    }

    #[test]
    fn verdict_table() {
        use Verdict::*;
        for (a, b, s) in [
            (Bounded, Bounded, CheckStatus::Pass),
            (Unbounded, Unbounded, CheckStatus::Pass),
            (Bounded, Unbounded, CheckStatus::Fail),
            (Inconclusive, Bounded, CheckStatus::Inconclusive),
            (Unbounded, Inconclusive, CheckStatus::Inconclusive),
        ] {
            let (c, p) = reports(a, b);
            assert_eq!(equivalence_verdict(&c, &p).unwrap().status, s);
        }
    }

    #[test]
    fn mismatched_reports_are_rejected() {
        let (c, mut p) = reports(Verdict::Bounded, Verdict::Bounded);
        p.multiplier = MultiplierFamily::PowerLaw { t: 1.0 }.label();
        assert!(matches!(equivalence_verdict(&c, &p), Err(Error::Usage(_))));
    }
}
