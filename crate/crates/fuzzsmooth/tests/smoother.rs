use fuzzsmooth::calculus::{one_sided, Side};
use fuzzsmooth::expr::parse_expr;
use fuzzsmooth::smoother::{
    check_smoother_conditions, generated, parabola, plateau, synthesize, truncated_parabola, Condition,
    SynthesisOptions, Theorem, Verdict,
};
use fuzzsmooth::{class_membership, fixtures, lipschitz_estimate, verify_smoothness};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + b.abs())
}

#[test]
fn parabola_membership() {
    let w = parabola(2.0).unwrap();
    for x in [-2.0, -1.0, 0.0, 0.5, 1.9] {
        assert!(close(w.membership(x), 1.0 - (x / 2.0f64).powi(2)));
    }
    assert!(parabola(0.0).is_err());
    assert!(parabola(f64::NAN).is_err());
}

#[test]
fn generator_hypotheses_are_enforced() {
    let good = parse_expr("sqrt(1 - a)", 'a').unwrap();
    assert!(generated(1.0, &good).is_ok());
    // finite slope at the top
    let linear = parse_expr("1 - a", 'a').unwrap();
    let err = generated(1.0, &linear).unwrap_err();
    assert!(err.to_string().contains("-∞"), "{err}");
    let wrong_end = parse_expr("sqrt(2 - a)", 'a').unwrap();
    assert!(generated(1.0, &wrong_end).is_err());
}

#[test]
fn truncated_parabola_keeps_its_base_levels() {
    let w = truncated_parabola(0.25, 0.5, 1.0).unwrap();
    assert_eq!(w.base_levels(), (0.25, 0.5));
    let s = w.support();
    assert!(close(s.lo, -(0.75f64).sqrt()));
    assert!(close(s.hi, (0.5f64).sqrt()));
    assert!(truncated_parabola(1.0, 0.0, 1.0).is_err());
}

#[test]
fn plateau_family_is_flat_in_the_middle() {
    let f = parse_expr("0.5 + 0.5*sin(1.5707963267948966*x)", 'x').unwrap();
    let g = parse_expr("1 - x^2", 'x').unwrap();
    let w = plateau(0.5, 0.0, 1.0, [-2.0, -1.0, 1.0, 2.0], &f, &g).unwrap();
    assert_eq!(w.core().lo, -1.0);
    assert_eq!(w.core().hi, 1.0);
    assert!(close(
        w.membership(-1.5),
        0.5 + 0.5 * (std::f64::consts::FRAC_PI_4).sin()
    ));
    let bad_knots = plateau(0.5, 0.0, 1.0, [-2.0, 1.0, -1.0, 2.0], &f, &g);
    assert!(bad_knots.is_err());
}

#[test]
fn synthesized_smoother_has_flat_knots() {
    let u = fixtures::load("kinked").unwrap();
    let w = synthesize(&u, 1.0, SynthesisOptions::default()).unwrap();
    let s = w.support();
    assert!(close(s.width(), 1.0));
    let report = check_smoother_conditions(&u, &w);
    assert!(report.theorem.is_some(), "{}", report.refusal());
    assert_eq!(report.verdict(Condition::KinkLower), Verdict::Pass);
    // every kink level of u is a knot of w, where both slopes vanish
    let x = w.left().eval(0.5);
    for side in [Side::Left, Side::Right] {
        assert!(one_sided(&w, x, side).unwrap().is_zero());
    }
    assert!(verify_smoothness(&w).in_fd);
}

#[test]
fn synthesis_covers_jumps() {
    let u = fixtures::load("jump").unwrap();
    assert!(!class_membership(&u).in_fc);
    let w = synthesize(&u, 0.5, SynthesisOptions::default()).unwrap();
    let report = check_smoother_conditions(&u, &w);
    assert_eq!(report.theorem, Some(Theorem::General));
}

#[test]
fn core_preserving_synthesis() {
    let u = fixtures::load("plateaus").unwrap();
    let opts = SynthesisOptions {
        preserve_core: true,
        lipschitz_cap: Some(4.0),
    };
    let w = synthesize(&u, 1.0, opts).unwrap();
    assert_eq!((w.core().lo, w.core().hi), (0.0, 0.0));
    assert!(lipschitz_estimate(&w) <= 4.0 + 1e-9);
}

#[test]
fn crisp_numbers_refuse_a_core_preserving_smoother() {
    let u = fuzzsmooth::FuzzyNum::crisp(-1.0, 1.0);
    let opts = SynthesisOptions {
        preserve_core: true,
        lipschitz_cap: None,
    };
    assert_eq!(synthesize(&u, 1.0, opts).unwrap_err().kind(), "precondition");
    assert!(synthesize(&u, 1.0, SynthesisOptions::default()).is_ok());
}

#[test]
fn parabola_is_refused_for_the_kinked_number() {
    let u = fixtures::load("kinked").unwrap();
    let report = check_smoother_conditions(&u, &parabola(1.0).unwrap());
    assert_eq!(report.verdict(Condition::KinkLower), Verdict::Fail);
    assert!(report.theorem.is_none());
    assert!(report.refusal().contains("(iv-1)"));
}
