use std::time::Instant;

use proptest::prelude::*;
use tauforge::identity::{
    cubic_i_sides, cubic_ii_from_limit, cubic_ii_sides, diff_fay_residual, generate_product_identity,
    lemma22_residual, product_rule_residual, seventh_order_sides, verify_identity, wronskian,
};
use tauforge::tau::{fay_residual, staircase_tau};
use tauforge::{Poly, Rational, Var};

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

fn z(i: u32) -> Var {
    Var::z(i)
}

const CUBIC_I_TAU3: &str = "6*z1*z2^3*t1^6 - 6*z1^3*z2*t1^6 + 36*z1^5*z2*t1^4 - 36*z1*z2^5*t1^4 \
    + 126*z1*z2^3*t1^3*t3 - 126*z1^3*z2*t1^3*t3 + 54*z1^3*z2^5*t1^2 - 54*z1^5*z2^3*t1^2 \
    + 54*z1^5*z2*t1*t3 - 54*z1*z2^5*t1*t3 + 54*z1*z2^3*t3^2 - 54*z1^3*z2*t3^2";

const CUBIC_II_TAU3: &str =
    "12*z^3*t1^6 - 144*z^5*t1^4 + 252*z^3*t1^3*t3 + 108*z^7*t1^2 - 216*z^5*t1*t3 + 108*z^3*t3^2";

#[test]
fn cubic_i_golden_tau3() {
    let start = Instant::now();
    let s = cubic_i_sides(&p("t1^3 - 3*t3"), z(1), z(2)).unwrap();
    assert_eq!(s.lhs, p(CUBIC_I_TAU3));
    assert_eq!(s.rhs, p(CUBIC_I_TAU3));
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn cubic_ii_golden_tau3() {
    let s = cubic_ii_sides(&p("t1^3 - 3*t3"), Var::z(0)).unwrap();
    assert_eq!(s.lhs, p(CUBIC_II_TAU3));
    assert_eq!(s.rhs, p(CUBIC_II_TAU3));
}

#[test]
fn all_residuals_vanish_on_staircase_taus() {
    let zs = [z(1), z(2), z(3), z(4)];
    for k in 1..=3 {
        let tau = staircase_tau(k).unwrap();
        let t = tau.poly();
        assert!(fay_residual(t, zs).unwrap().is_zero(), "fay k={k}");
        assert!(diff_fay_residual(t, z(1), z(2)).unwrap().is_zero(), "diff-fay k={k}");
        for v in 1..=8 {
            assert!(lemma22_residual(t, v, z(1), z(2)).unwrap().is_zero(), "lemma22 v={v} k={k}");
        }
        assert!(cubic_i_sides(t, z(1), z(2)).unwrap().passes(), "cubic-i k={k}");
        assert!(cubic_ii_sides(t, Var::z(0)).unwrap().passes(), "cubic-ii k={k}");
        let (a, b) = product_rule_residual(t, &t.differentiate(Var::x()), &p("t1 + z1"), t);
        assert!(a.is_zero() && b.is_zero());
    }
}

#[test]
fn non_tau_fails_every_check() {
    let fake = p("t1^3 - 2*t3");
    assert!(!diff_fay_residual(&fake, z(1), z(2)).unwrap().is_zero());
    for v in 1..=8 {
        assert!(!lemma22_residual(&fake, v, z(1), z(2)).unwrap().is_zero(), "variant {v}");
    }
    assert!(!cubic_i_sides(&fake, z(1), z(2)).unwrap().passes());
    assert!(!cubic_ii_sides(&fake, Var::z(0)).unwrap().passes());
    assert!(!seventh_order_sides(&fake, [z(1), z(2), z(3), z(4)]).unwrap().passes());
}

#[test]
fn cubic_limit_on_staircase_three() {
    let tau = staircase_tau(3).unwrap();
    let limit = cubic_ii_from_limit(tau.poly(), z(1), z(2), Var::z(0)).unwrap();
    assert_eq!(limit, cubic_ii_sides(tau.poly(), Var::z(0)).unwrap());
    let diagonal = cubic_i_sides(tau.poly(), z(1), z(2))
        .unwrap()
        .residual()
        .substitute(z(2), &Poly::var(z(1)));
    assert!(diagonal.is_zero());
}

#[test]
fn seventh_order_tau3_is_large_and_exact() {
    let start = Instant::now();
    let s = seventh_order_sides(&p("t1^3 - 3*t3"), [z(1), z(2), z(3), z(4)]).unwrap();
    let elapsed = start.elapsed();
    assert!(s.passes());
    assert!(s.lhs_terms() > 250 && s.rhs_terms() > 250, "{} {}", s.lhs_terms(), s.rhs_terms());
    assert!(elapsed.as_secs_f64() < 60.0);
}

#[test]
fn generated_family_verifies() {
    let start = Instant::now();
    let tau3 = staircase_tau(2).unwrap();
    let pair = generate_product_identity(3).unwrap();
    let vars: Vec<Var> = (1..=4).map(z).collect();
    assert!(verify_identity(&pair, &tau3, &vars).unwrap().passed());

    let tau1 = staircase_tau(1).unwrap();
    let pair = generate_product_identity(4).unwrap();
    let vars: Vec<Var> = (1..=8).map(z).collect();
    let report = verify_identity(&pair, &tau1, &vars).unwrap();
    assert!(report.passed());
    assert!(start.elapsed().as_secs_f64() < 60.0);
}

#[test]
fn scale_invariance() {
    let c = Rational::from_integer(5.into());
    let tau = p("t1^3 - 3*t3");
    let scaled = tau.scale(&c);
    let s = cubic_i_sides(&tau, z(1), z(2)).unwrap();
    let t = cubic_i_sides(&scaled, z(1), z(2)).unwrap();
    assert_eq!(t, s.scale(&(&c * &c * &c)));
    let s = seventh_order_sides(&p("t1"), [z(1), z(2), z(3), z(4)]).unwrap();
    let t = seventh_order_sides(&p("5*t1"), [z(1), z(2), z(3), z(4)]).unwrap();
    assert_eq!(t, s.scale(&Rational::from_integer(78125.into())));
}

#[test]
fn relabeling_roundtrip() {
    let tau = p("t1^3 - 3*t3");
    let base = cubic_i_sides(&tau, z(1), z(2)).unwrap();
    let swapped = cubic_i_sides(&tau, z(7), z(5)).unwrap();
    let back = swapped.map(|q| {
        q.rename(|v| match v {
            v if v == z(7) => z(1),
            v if v == z(5) => z(2),
            v => v,
        })
    });
    assert_eq!(back, base);
}

fn small_poly() -> impl Strategy<Value = Poly> {
    let var = prop::sample::select(vec![Var::t(1), Var::t(3), Var::z(1)]);
    prop::collection::vec((-5i64..5, prop::collection::vec((var, 0u32..3), 0..3)), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, pw)| {
                pw.into_iter()
                    .fold(Poly::from_i64(c), |acc, (v, e)| &acc * &Poly::var(v).pow(e))
            })
            .sum()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wronskian_is_bilinear_and_antisymmetric(f in small_poly(), g in small_poly(), h in small_poly()) {
        prop_assert_eq!(wronskian(&f, &g), -wronskian(&g, &f));
        prop_assert_eq!(wronskian(&(&f + &h), &g), &wronskian(&f, &g) + &wronskian(&h, &g));
    }

    #[test]
    fn product_rule_holds(a in small_poly(), b in small_poly(), c in small_poly(), d in small_poly()) {
        let (x, y) = product_rule_residual(&a, &b, &c, &d);
        prop_assert!(x.is_zero() && y.is_zero());
    }
}
