use harmult_core::expansion::HarmonicExpansion;
use harmult_core::lemmas::{self, Lemma1Grid};
use harmult_core::DEFAULT_SEED;

#[test]
fn identity_lemmas_pass_on_seeded_suites() {
    for n in [2, 3] {
        let l3 = lemmas::check_lemma3(n, DEFAULT_SEED, lemmas::SUITE_SIZE).unwrap();
        let l6 = lemmas::check_lemma6(n, 2, DEFAULT_SEED, lemmas::SUITE_SIZE).unwrap();
        assert!(l3.pass, "{l3:?}");
        assert!(l6.pass, "{l6:?}");
        assert_eq!(l3.tolerance, 1e-8);
        assert_eq!(l6.tolerance, 1e-6);
    }
    for m in 1..=5 {
        assert!(lemmas::check_lemma4(4, m, 40).unwrap().pass);
    }
}

#[test]
fn all_ones_g_gives_f_at_r_squared_on_both_sides() {
    for n in [2, 3] {
        for t in lemmas::random_tuples(n, 8, 10, 7).unwrap() {
            let ones = HarmonicExpansion::full_constant_coeffs(n, t.f.max_degree(), 1.0).unwrap();
            let target = t.f.evaluate(t.r * t.r, &t.y).unwrap();
            let l3 = lemmas::lemma3_quadrature_side(&t.f, &ones, &t.y, t.r).unwrap();
            let l6 = lemmas::lemma6_integral_side(&t.f, &ones, &t.y, t.r, 3).unwrap();
            let scale = target.abs().max(1.0);
            assert!((l3 - target).abs() <= 1e-8 * scale, "{l3} vs {target}");
            assert!((l6 - l3).abs() <= 1e-8 * scale, "{l6} vs {l3}");
        }
    }
}

#[test]
fn lemma2_exponents_are_reproducible() {
    for (a, l) in [(0.0, 2.0), (0.5, 2.0), (1.0, 3.0)] {
        let first = lemmas::check_lemma2(a, l, 3, 12).unwrap();
        let second = lemmas::check_lemma2(a, l, 3, 12).unwrap();
        let (x, y) = (first.fitted_exponent.unwrap(), second.fitted_exponent.unwrap());
        assert!((x - y).abs() <= 1e-12);
        assert!((x - (a - l + 1.0)).abs() <= lemmas::LEMMA2_EXPONENT_TOL, "({a}, {l}): {x}");
        assert!(first.pass);
    }
}

#[test]
fn lemma2_rejects_lambda_at_most_alpha_plus_one() {
    assert!(lemmas::check_lemma2(1.0, 2.0, 3, 12).is_err());
    assert!(lemmas::check_lemma2(-1.5, 2.0, 3, 12).is_err());
}

#[test]
fn lemma1_bound_holds_on_a_coarse_grid() {
    let grid = Lemma1Grid {
        step: 0.75,
        r_step: 0.25,
        theta_step: std::f64::consts::PI / 4.0,
        ..Lemma1Grid::default()
    };
    let r = lemmas::check_lemma1(2, 1.0, &grid).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(r.fitted_exponent.unwrap() <= 2.0 + lemmas::LEMMA1_EXPONENT_TOL);
}

#[test]
fn lemma5_ratio_is_finite_and_stable() {
    let f = lemmas::lemma5_default_function();
    let r = lemmas::check_lemma5(2.0, 0.5, 0.0, &f, &[4, 6, 8]).unwrap();
    assert!(r.pass, "{r:?}");
}
