use harmult_core::mult::{
    condition2_sup, equivalence_verdict, kernel_probe_radii, probe_operator_norm, Condition2Options,
};
use harmult_core::{
    CheckStatus, Multiplier, MultiplierFamily, MultiplierSequence, ProbeFamily, TheoremParams, Verdict,
    DEFAULT_SEED,
};

fn cell(c: &Multiplier, alpha: f64, beta: f64) -> (Verdict, Verdict, CheckStatus) {
    let params = TheoremParams::new(1.0, alpha, beta, 2.0, 3).unwrap();
    let cond2 = condition2_sup(c, &params, &Condition2Options::default()).unwrap();
    let probe = probe_operator_norm(c, &params, ProbeFamily::QmKernels, &kernel_probe_radii(3, 12), DEFAULT_SEED)
        .unwrap();
    let check = equivalence_verdict(&cond2, &probe).unwrap();
    (cond2.verdict, probe.verdict, check.status)
}

#[test]
fn identity_multiplier_bounded_iff_beta_at_least_alpha() {
    let ones = Multiplier::Family(MultiplierFamily::Ones);
    assert_eq!(cell(&ones, 0.25, 0.5), (Verdict::Bounded, Verdict::Bounded, CheckStatus::Pass));
    assert_eq!(cell(&ones, 0.5, 0.5), (Verdict::Bounded, Verdict::Bounded, CheckStatus::Pass));
    assert_eq!(cell(&ones, 0.5, 0.25), (Verdict::Unbounded, Verdict::Unbounded, CheckStatus::Pass));
}

#[test]
fn decay_of_the_multiplier_compensates_a_weight_gap() {
    // c_k = (k+1)^{-1/2} gains half an order of growth.
    let c = Multiplier::Family(MultiplierFamily::PowerLaw { t: 0.5 });
    assert_eq!(cell(&c, 0.75, 0.25).2, CheckStatus::Pass);
    assert_eq!(cell(&c, 0.75, 0.25).0, Verdict::Bounded);
    assert_eq!(cell(&c, 0.9, 0.25).0, Verdict::Unbounded);
}

#[test]
fn identity_integral_grows_like_order_m_plus_one() {
    let params = TheoremParams::new(1.0, 0.5, 0.5, 2.0, 3).unwrap();
    let r = condition2_sup(&Multiplier::Family(MultiplierFamily::Ones), &params, &Condition2Options::default())
        .unwrap();
    assert!((r.fitted_exponent - 3.0).abs() <= 0.1, "{}", r.fitted_exponent);
}

#[test]
fn explicit_sequences_match_named_families() {
    let params = TheoremParams::new(1.0, 0.25, 0.5, 2.0, 3).unwrap();
    let opts = Condition2Options {
        j_max: 7,
        ..Condition2Options::default()
    };
    let family = MultiplierFamily::Finite { degree: 4 };
    let named = condition2_sup(&Multiplier::Family(family.clone()), &params, &opts).unwrap();
    let zonal = MultiplierSequence::from_family(3, &family, 4).unwrap();
    let seq = condition2_sup(&Multiplier::Sequence(zonal.clone()), &params, &opts).unwrap();
    for (a, b) in named.raw_integrals.iter().zip(&seq.raw_integrals) {
        assert!(((a - b) / a).abs() <= 1e-12, "{a} vs {b}");
    }
    let full = MultiplierSequence::full(
        3,
        zonal.values().iter().enumerate().map(|(k, v)| vec![v[0]; 2 * k + 1]).collect(),
    )
    .unwrap();
    let full = Multiplier::Sequence(full);
    // |.| has a kink on the sphere, so the product rule converges slowly.
    for (res, tol) in [(64, 2e-3), (256, 1e-4)] {
        let opts = Condition2Options {
            sphere_resolution: Some(res),
            ..opts.clone()
        };
        let r = condition2_sup(&full, &params, &opts).unwrap();
        for (a, b) in named.raw_integrals.iter().zip(&r.raw_integrals) {
            assert!(((a - b) / a).abs() <= tol, "resolution {res}: {a} vs {b}");
        }
    }
}
