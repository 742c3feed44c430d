//! Invariants over randomly generated fuzzy numbers, one proptest per module.

mod common;

use common::invariants::*;
use common::random_fuzzy;
use fuzzsmooth::approx::Schedule;
use fuzzsmooth::smoother::{parabola, synthesize, SynthesisOptions};
use fuzzsmooth::FuzzyNum;
use proptest::prelude::*;

fn one(seed: u64) -> FuzzyNum {
    random_fuzzy(seed, 1).pop().unwrap()
}

fn three(seed: u64) -> (FuzzyNum, FuzzyNum, FuzzyNum) {
    let mut v = random_fuzzy(seed, 3);
    let w = v.pop().unwrap();
    let b = v.pop().unwrap();
    (v.pop().unwrap(), b, w)
}

fn check(r: Check) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cuts_are_nested_and_invert_membership(seed in any::<u64>()) {
        let u = one(seed);
        check(nested_cuts(&u))?;
        check(cut_continuity(&u))?;
        check(inverse_identity(&u))?;
        let s = u.support();
        let xs: Vec<f64> = (0..101).map(|k| s.lo - 0.1 + (s.width() + 0.2) * k as f64 / 100.0).collect();
        check(membership_vs_grid(&u, &xs, 4096))?;
    }

    #[test]
    fn slopes_agree_and_metric_is_a_metric(seed in any::<u64>()) {
        let (u, v, w) = three(seed);
        if !u.is_degenerate() {
            check(slope_routes(&u, 50, seed))?;
        }
        check(metric_axioms(&u, &v, &w))?;
    }

    #[test]
    fn convolution_adds_cuts(seed in any::<u64>()) {
        let (u, v, w) = three(seed);
        check(cut_additivity(&u, &v))?;
        check(commutative_associative(&u, &v, &w))?;
        check(continuity_preserved(&u, &v))?;
        check(prediction_soundness(&u, &v))?;
    }

    #[test]
    fn accepted_smoothers_smooth(seed in any::<u64>()) {
        let u = one(seed);
        prop_assume!(!u.is_degenerate());
        let w = parabola(0.5).unwrap();
        check(checker_sound(&u, &w))?;
        check(scaling_invariant(&u, &w))?;
        check(synthesis_total(&u))?;
        check(synthesized_base_flat(&u))?;
        check(lipschitz_preserved(&u, &w))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn approximation_meets_its_bound(seed in any::<u64>(), p0 in 0.2f64..2.0) {
        let u = one(seed);
        prop_assume!(!u.is_degenerate());
        let z = synthesize(&u, 1.0, SynthesisOptions::default()).unwrap();
        let schedule = Schedule::new(vec![p0, p0 / 2.0, p0 / 5.0]).unwrap();
        check(approximation_invariants(&u, &z, &schedule))?;
    }
}
