use num_complex::Complex64;
use proptest::prelude::*;
use tauforge::identity::lemma22_sides;
use tauforge::numeric::{
    max_residual, random_point_check, random_point_check_mod, relative_residual, sine_cubic_residual, sweep,
    theta_cubic_limit_gaps, theta_cubic_terms, theta_fay_g1_residual, theta_fay_g1_terms, SweepCheck,
    ThetaConvention, ThetaParams, Truncation,
};
use tauforge::tau::{fay_residual, staircase_tau};
use tauforge::wave::faddeev_takhtajan;
use tauforge::{Poly, Var};

const NOMES: [f64; 3] = [0.05, 0.1, 0.3];

fn params(q: f64, convention: ThetaConvention) -> ThetaParams<f64> {
    ThetaParams::with(Complex64::new(q, 0.0), Truncation::Tolerance(f64::EPSILON / 4.0), convention).unwrap()
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn zs() -> [Var; 4] {
    [Var::z(1), Var::z(2), Var::z(3), Var::z(4)]
}

#[test]
fn sine_identity_over_a_thousand_triples() {
    let rows = sweep(SweepCheck::Sine, &params(0.0, ThetaConvention::Mumford), 1000, 11);
    assert_eq!(rows.len(), 1000);
    assert!(max_residual(&rows) < 1e-11);
}

#[test]
fn theta_sweeps_in_both_conventions() {
    for convention in [ThetaConvention::Mumford, ThetaConvention::Jacobi] {
        for q in NOMES {
            let p = params(q, convention);
            let fay = max_residual(&sweep(SweepCheck::ThetaFay, &p, 100, 5));
            let cubic = max_residual(&sweep(SweepCheck::ThetaCubic, &p, 100, 5));
            let degenerate = max_residual(&sweep(SweepCheck::ThetaDegenerate, &p, 100, 5));
            assert!(fay < 1e-9, "fay {q} {convention:?}: {fay}");
            assert!(cubic < 1e-8, "cubic {q} {convention:?}: {cubic}");
            assert!(degenerate < 1e-8, "degenerate {q} {convention:?}: {degenerate}");
        }
    }
}

#[test]
fn sweeps_are_seeded() {
    let p = params(0.1, ThetaConvention::Mumford);
    let a = sweep(SweepCheck::ThetaCubic, &p, 20, 3);
    assert_eq!(a, sweep(SweepCheck::ThetaCubic, &p, 20, 3));
    assert_ne!(a, sweep(SweepCheck::ThetaCubic, &p, 20, 4));
    assert!(a.iter().all(|r| r.check == "theta-cubic" && r.q == 0.1 && r.point.len() == 3));
}

#[test]
fn flipped_sign_is_detected() {
    for convention in [ThetaConvention::Mumford, ThetaConvention::Jacobi] {
        let p = params(0.1, convention);
        let mut fay = theta_fay_g1_terms(c(0.13), [c(0.41), c(0.07), c(0.66), c(0.29)], &p).unwrap();
        fay[2] = -fay[2];
        assert!(relative_residual(&fay).unwrap() > 1e-3);
        let mut cubic = theta_cubic_terms(c(0.37), c(0.12), c(0.55), &p).unwrap();
        cubic[3] = -cubic[3];
        assert!(relative_residual(&cubic).unwrap() > 1e-3);
    }
}

#[test]
fn two_parameter_relation_tends_to_one_parameter_form() {
    let p = params(0.1, ThetaConvention::Mumford);
    let errs = theta_cubic_limit_gaps(c(0.31), c(0.23), &[1e-2, 1e-3, 1e-4], &p).unwrap();
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
    assert!(errs[2] < 1e-3);
}

#[test]
fn random_points_confirm_exact_zeros() {
    let tau = staircase_tau(2).unwrap();
    let r = fay_residual(tau.poly(), zs()).unwrap();
    assert!(random_point_check(&r, 1, 20).unwrap().probably_zero());

    let fake: Poly = "t1^3 - 2*t3".parse().unwrap();
    let r = fay_residual(&fake, zs()).unwrap();
    let report = random_point_check(&r, 1, 3).unwrap();
    assert!(!report.probably_zero());
    assert!(!random_point_check_mod(&r, 1, 3).unwrap().probably_zero());

    let sides = lemma22_sides(&fake, 3, Var::z(1), Var::z(2)).unwrap();
    assert!(!random_point_check(&sides.residual(), 2, 3).unwrap().probably_zero());
}

#[test]
fn random_points_on_rational_residuals() {
    let tau = staircase_tau(2).unwrap();
    let ft = faddeev_takhtajan(tau.poly(), 1, 2).unwrap();
    for r in ft.residuals() {
        assert!(random_point_check(&r, 7, 20).unwrap().probably_zero());
        assert!(random_point_check_mod(&r, 7, 20).unwrap().probably_zero());
    }
    let fake = faddeev_takhtajan(&"t1^3 - 2*t3".parse().unwrap(), 1, 2).unwrap();
    assert!(fake
        .residuals()
        .iter()
        .any(|r| !random_point_check(r, 7, 3).unwrap().probably_zero()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sine_identity_pointwise(x in -3.0f64..3.0, z1 in -3.0f64..3.0, z2 in -3.0f64..3.0) {
        prop_assert!(sine_cubic_residual(x, z1, z2) < 1e-11);
    }

    #[test]
    fn theta_fay_pointwise(
        q in 0.01f64..0.5,
        x in 0.0f64..1.0,
        a in 0.0f64..1.0,
        b in 0.0f64..1.0,
        d in 0.0f64..1.0,
        e in 0.0f64..1.0,
    ) {
        let p = params(q, ThetaConvention::Mumford);
        if let Ok(r) = theta_fay_g1_residual(c(x), [c(a), c(b), c(d), c(e)], &p) {
            prop_assert!(r < 1e-9, "residual {}", r);
        }
    }
}
