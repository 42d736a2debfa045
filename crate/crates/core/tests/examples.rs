//! Worked examples across the public API, checked against independent oracles.

use std::f64::consts::{E, PI};

use approx::assert_relative_eq;
use gfa_core::basealg::{check_seminorm_monotone, seminorm_eval, Element, SeminormFamily};
use gfa_core::embed::{check_scale_admissible, check_unbounded, embed_constant, make_delta, Mollifier};
use gfa_core::expr::Expr;
use gfa_core::jet::jet_eval;
use gfa_core::scale::{check_asymptotic_family, check_scale_valid, AsymptoticFamily, Direction, Scale, ScaleFamily};
use gfa_core::seqspace::{classify, distance, equal_in_quotient, ultranorm, Budget, Equality, Mode, Seq, Verdict};
use num_complex::Complex64;

fn seq(src: &str) -> Seq {
    Seq::from_expr(src, Expr::parse(src).unwrap()).unwrap()
}

fn abs() -> SeminormFamily {
    SeminormFamily::AbsoluteValue
}

fn smooth(src: &str) -> Element {
    Element::smooth(Expr::parse(src).unwrap()).unwrap()
}

#[test]
fn scale_values() {
    assert_relative_eq!(Scale::log().eval(8.0).unwrap(), 1.0 / 8f64.ln(), max_relative = 1e-15);
    assert_eq!(Scale::power(2.0).unwrap().eval(16.0).unwrap(), 0.25);
    assert_eq!(Scale::egorov(3).eval(3.0).unwrap(), 1.0);
    assert_eq!(Scale::egorov(3).eval(4.0).unwrap(), 0.0);
    let a = Scale::from_asymptotic(AsymptoticFamily::power(), 2);
    assert_relative_eq!(a.eval(E).unwrap(), 0.5, max_relative = 1e-15);
    assert!(Scale::power(0.0).is_err());
}

#[test]
fn scale_validity_and_directions() {
    assert!(check_scale_valid(&Scale::log(), 1 << 20).valid());
    let half = check_scale_valid(&Scale::custom(Expr::parse("0.5").unwrap(), 2).unwrap(), 1 << 20);
    assert!(!half.tends_to_zero);
    let up = check_scale_valid(&Scale::custom(Expr::parse("log(n)").unwrap(), 2).unwrap(), 1 << 20);
    assert!(!up.decreasing);

    assert_eq!(ScaleFamily::power(5).unwrap().direction(), Direction::IncreasingInM);
    assert_eq!(ScaleFamily::asymptotic(AsymptoticFamily::power(), 5).unwrap().direction(), Direction::DecreasingInM);
    assert_eq!(ScaleFamily::egorov(5).unwrap().direction(), Direction::IncreasingInM);

    for fam in [AsymptoticFamily::power(), AsymptoticFamily::exponential()] {
        let r = check_asymptotic_family(&fam, -3..=3, 1 << 12).unwrap();
        assert!(r.little_o_chain && r.inverse_symmetry && r.square_domination, "{fam}: {r:?}");
    }
    let flat = AsymptoticFamily::from_expr(Expr::parse("1").unwrap()).unwrap();
    assert!(!check_asymptotic_family(&flat, -3..=3, 1 << 12).unwrap().little_o_chain);
}

#[test]
fn jets_and_seminorms() {
    let j = jet_eval(&Expr::parse("exp(x)").unwrap(), 0.0, None, 3).unwrap();
    assert_eq!(j.values(), &[1.0, 1.0, 1.0, 1.0]);
    let j = jet_eval(&Expr::parse("x^2").unwrap(), 2.0, None, 2).unwrap();
    assert_eq!(j.values(), &[4.0, 4.0, 2.0]);
    let j = jet_eval(&Expr::parse("n*exp(-(n*x)^2)/sqrt(pi)").unwrap(), 0.0, Some(5.0), 1).unwrap();
    assert_relative_eq!(j.values()[0], 5.0 / PI.sqrt(), max_relative = 1e-15);
    assert_eq!(j.values()[1].abs(), 0.0);

    let z = Element::Scalar(Complex64::new(-3.0, 4.0));
    assert_eq!(seminorm_eval(&abs(), 0, 0, &z).unwrap(), 5.0);
    let sup = SeminormFamily::sup();
    assert_eq!(seminorm_eval(&sup, 2, 1, &smooth("x^2")).unwrap(), 4.0);
    assert_relative_eq!(seminorm_eval(&sup, 1, 0, &smooth("sin(x)")).unwrap(), 1f64.sin(), max_relative = 1e-15);

    assert!(check_seminorm_monotone(&sup, &smooth("x^2"), &[((1, 0), (2, 0))]).unwrap());
    assert!(check_seminorm_monotone(&sup, &Element::real(7.0), &[((1, 0), (3, 2)), ((1, 1), (2, 2))]).unwrap());
    assert!(check_seminorm_monotone(&sup, &smooth("sin(x)"), &[((1, 0), (1, 1))]).unwrap());
}

#[test]
fn ultranorm_examples() {
    let b = Budget::default();
    let log = Scale::log();
    let u = ultranorm(&seq("n^2"), &abs(), 0, 0, &log, &b).unwrap();
    assert_relative_eq!(u.value, 2f64.exp(), max_relative = 1e-15);
    assert_eq!(ultranorm(&Seq::zero(), &abs(), 0, 0, &log, &b).unwrap().value, 0.0);
    assert_eq!(ultranorm(&seq("exp(-n)"), &abs(), 0, 0, &log, &b).unwrap().value, 0.0);
    assert_eq!(ultranorm(&seq("exp(n)"), &abs(), 0, 0, &log, &b).unwrap().value, f64::INFINITY);
    for r in [Scale::log(), Scale::power(1.0).unwrap(), Scale::power(3.0).unwrap()] {
        assert_eq!(ultranorm(&seq("-4.5"), &abs(), 0, 0, &r, &b).unwrap().value, 1.0);
    }
}

#[test]
fn classification_examples() {
    let b = Budget::default().with_indices(1, 1);
    let delta = make_delta(&Mollifier::gaussian()).unwrap();
    let c = classify(&delta, &SeminormFamily::sup(), &Scale::log(), Mode::Projective, &b).unwrap();
    assert_eq!(c.verdict, Verdict::Moderate);
    assert_eq!(c.witness(1, 0).unwrap().value, E);
    assert_relative_eq!(c.witness(1, 1).unwrap().value, E * E, max_relative = 1e-15);
    assert_eq!(classify(&Seq::zero(), &abs(), &Scale::log(), Mode::Projective, &b).unwrap().verdict, Verdict::Negligible);
    assert_eq!(classify(&seq("exp(sqrt(n))"), &abs(), &Scale::log(), Mode::Projective, &b).unwrap().verdict, Verdict::Divergent);
}

#[test]
fn distances_and_algebra() {
    let b = Budget::default();
    let log = Scale::log();
    let f = seq("n^3 + 2*n");
    assert_eq!(distance(&f, &f, &abs(), 0, 0, &log, &b).unwrap().value, 0.0);
    assert_eq!(distance(&seq("1"), &seq("0"), &abs(), 0, 0, &log, &b).unwrap().value, 1.0);
    assert_relative_eq!(distance(&seq("n"), &seq("n^2"), &abs(), 0, 0, &log, &b).unwrap().value, E * E, max_relative = 1e-15);

    let sum = seq("n").add(&seq("n^2")).unwrap();
    let prod = seq("n^2").mul(&seq("n^3")).unwrap();
    let g = |s: &Seq| match s.growth_at(&abs(), 0, 0).unwrap() {
        Some(gfa_core::seqspace::Asymptotic::Growth(g)) => g.shape.a,
        other => panic!("{other:?}"),
    };
    assert_eq!(g(&sum), 2.0);
    assert_eq!(g(&prod), 5.0);
    let d1 = make_delta(&Mollifier::gaussian()).unwrap().derivative().unwrap();
    match d1.growth_at(&SeminormFamily::sup(), 1, 0).unwrap() {
        Some(gfa_core::seqspace::Asymptotic::Growth(g)) => assert_eq!(g.shape.a, 2.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn quotient_equality() {
    let b = Budget::default();
    let eq = |f: &Seq, g: &Seq| equal_in_quotient(f, g, &abs(), &Scale::log(), Mode::Projective, &b).unwrap();
    assert_eq!(eq(&seq("3"), &seq("3 + exp(-n)")), Equality::Equal);
    assert_eq!(eq(&seq("1"), &seq("2")), Equality::NotEqual);
    assert_eq!(eq(&seq("1/n"), &Seq::zero()), Equality::NotEqual);
}

#[test]
fn embedding_examples() {
    let b = Budget::default();
    let log = Scale::log();
    let sup = SeminormFamily::sup();
    assert_eq!(ultranorm(&embed_constant("5", Element::real(5.0)), &abs(), 0, 0, &log, &b).unwrap().value, 1.0);
    let zero = embed_constant("0", Element::real(0.0));
    assert_eq!(classify(&zero, &sup, &log, Mode::Projective, &b).unwrap().verdict, Verdict::Negligible);
    let s = embed_constant("sin", smooth("sin(x)"));
    assert_eq!(ultranorm(&s, &sup, 1, 0, &log, &b).unwrap().value, 1.0);
    assert_relative_eq!(seminorm_eval(&sup, 1, 0, &s.element(10).unwrap()).unwrap(), 1f64.sin(), max_relative = 1e-15);

    let delta = make_delta(&Mollifier::gaussian()).unwrap();
    for n in [1u64, 10, 1000] {
        let v = seminorm_eval(&sup, 1, 0, &delta.element(n).unwrap()).unwrap();
        assert_relative_eq!(v, n as f64 / PI.sqrt(), max_relative = 1e-12);
    }
    let dd = delta.mul(&delta).unwrap();
    assert_relative_eq!(ultranorm(&dd, &sup, 1, 0, &log, &b).unwrap().value, E * E, epsilon = 1e-2);
    assert_eq!(equal_in_quotient(&dd, &Seq::zero(), &sup, &log, Mode::Projective, &b.with_indices(1, 0)).unwrap(), Equality::NotEqual);

    assert!(check_unbounded(&delta, &sup, 1, &b).unwrap().monotone_growth);
    let a = check_scale_admissible(&delta, &sup, &log, Mode::Projective, &b).unwrap();
    assert!(a.admissible);
    let lnln = Scale::custom(Expr::parse("1/log(log(n))").unwrap(), 16).unwrap();
    assert!(!check_scale_admissible(&delta, &sup, &lnln, Mode::Projective, &b).unwrap().admissible);
}
