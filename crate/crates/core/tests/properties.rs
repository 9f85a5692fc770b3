//! Property tests for the algebraic invariants: pointwise linearity and
//! variation additivity of step functions, the measure/distribution-function
//! bijection, the exact integration-by-parts identity, and the metric axioms.

mod common;

use common::{compact_test_function, scalar_in, signed_measure, step_function_in_w};
use proptest::prelude::*;

use sigmeas::generators;
use sigmeas::metric::{almost_basic_distance, best_shift, feasible, shift_estimate};
use sigmeas::measure::integrate_step_product;
use sigmeas::{Scalar, SignedMeasure, StepFunction};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn linear_combination_evaluates_pointwise(
        f in step_function_in_w(8),
        g in step_function_in_w(8),
        a in scalar_in(-4, 4, 3),
        b in scalar_in(-4, 4, 3),
        x in scalar_in(-10, 10, 12),
    ) {
        let h = StepFunction::linear_combine(&a, &f, &b, &g);
        prop_assert_eq!(h.eval(&x), &a * &f.eval(&x) + &b * &g.eval(&x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn total_variation_is_additive(
        f in step_function_in_w(10),
        mut pts in proptest::array::uniform3(scalar_in(-9, 9, 5)),
    ) {
        pts.sort();
        let [a, b, c] = pts;
        let whole = f.total_variation_on(&a, &c).unwrap();
        let split = f.total_variation_on(&a, &b).unwrap() + f.total_variation_on(&b, &c).unwrap();
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn level_excess_monotone_and_bounded(
        f in step_function_in_w(10),
        c in scalar_in(-8, 8, 4),
        eps in scalar_in(0, 2, 8),
        bump in scalar_in(0, 1, 8),
        mut window in proptest::array::uniform2(scalar_in(-10, 10, 4)),
        widen in scalar_in(0, 3, 4),
    ) {
        window.sort();
        let [l, r] = window;
        let base = f.level_excess(&c, &eps, &l, &r);
        // non-increasing in eps
        prop_assert!(f.level_excess(&c, &(&eps + &bump), &l, &r) <= base);
        // non-decreasing under window enlargement
        prop_assert!(f.level_excess(&c, &eps, &(&l - &widen), &(&r + &widen)) >= base);
        // never exceeds the window length
        prop_assert!(base <= &r - &l);
    }

    #[test]
    fn measure_cdf_round_trip(mu in signed_measure(10)) {
        prop_assert_eq!(SignedMeasure::from_cdf(&mu.cdf()).unwrap(), mu);
    }

    #[test]
    fn cdf_measure_round_trip(f in step_function_in_w(10)) {
        prop_assert_eq!(SignedMeasure::from_cdf(&f).unwrap().cdf(), f);
    }

    #[test]
    fn jordan_decomposition_is_exact(
        mu in signed_measure(10),
        mut window in proptest::array::uniform2(scalar_in(-9, 9, 4)),
    ) {
        window.sort();
        let [a, b] = window;
        let (pos, neg) = mu.hahn_jordan();
        let diff = SignedMeasure::from_cdf(&StepFunction::linear_combine(
            &Scalar::one(),
            &pos.cdf(),
            &Scalar::from_int(-1),
            &neg.cdf(),
        ))
        .unwrap();
        prop_assert_eq!(&diff, &mu);
        let tv = mu.tv_on_interval(&a, &b).unwrap();
        let split = pos.tv_on_interval(&a, &b).unwrap() + neg.tv_on_interval(&a, &b).unwrap();
        prop_assert_eq!(&tv, &split);
        // interval masses are dominated by the variation
        prop_assert!(mu.interval_mass(&a, &b).unwrap().abs() <= tv);
    }

    #[test]
    fn interval_mass_matches_cdf_difference(
        mu in signed_measure(10),
        mut window in proptest::array::uniform2(scalar_in(-9, 9, 4)),
    ) {
        window.sort();
        let [x, y] = window;
        let f = mu.cdf();
        prop_assert_eq!(mu.interval_mass(&x, &y).unwrap(), f.eval(&y) - f.eval(&x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn integration_by_parts_is_exact(
        mu in signed_measure(10),
        phi in compact_test_function(6),
    ) {
        let a = Scalar::from_int(-16);
        let b = Scalar::from_int(16);
        let lhs = mu.integrate(&phi);
        let rhs = -integrate_step_product(&phi.derivative_step(), &mu.cdf(), &a, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn metric_identity(f in step_function_in_w(8)) {
        let br = almost_basic_distance(&f, &f, &Scalar::ratio(1, 100)).unwrap();
        prop_assert_eq!(br.lo, Scalar::zero());
        prop_assert_eq!(br.hi, Scalar::zero());
    }

    #[test]
    fn metric_symmetry(f in step_function_in_w(8), g in step_function_in_w(8)) {
        let tol = Scalar::ratio(1, 100);
        let ab = almost_basic_distance(&f, &g, &tol).unwrap();
        let ba = almost_basic_distance(&g, &f, &tol).unwrap();
        prop_assert_eq!(ab.lo, ba.lo);
        prop_assert_eq!(ab.hi, ba.hi);
    }

    #[test]
    fn metric_triangle(
        f in step_function_in_w(8),
        g in step_function_in_w(8),
        h in step_function_in_w(8),
    ) {
        let tol = Scalar::ratio(1, 100);
        let fg = almost_basic_distance(&f, &g, &tol).unwrap();
        let fh = almost_basic_distance(&f, &h, &tol).unwrap();
        let hg = almost_basic_distance(&h, &g, &tol).unwrap();
        prop_assert!(fg.lo <= fh.hi + hg.hi);
    }

    #[test]
    fn identity_of_indiscernibles(f in step_function_in_w(8), g in step_function_in_w(8)) {
        let zero_feasible = feasible(&f, &g, &Scalar::zero()).unwrap().is_some();
        prop_assert_eq!(zero_feasible, f == g);
    }

    #[test]
    fn universal_feasibility_bound(f in step_function_in_w(8), g in step_function_in_w(8)) {
        prop_assert!(feasible(&f, &g, &Scalar::ratio(14_143, 10_000)).unwrap().is_some());
        let br = almost_basic_distance(&f, &g, &Scalar::ratio(1, 100)).unwrap();
        prop_assert!(br.hi <= Scalar::ratio(3, 2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn feasibility_set_is_an_interval(
        f in step_function_in_w(6),
        g in step_function_in_w(6),
    ) {
        // feasibility sampled on a 50-point grid must be monotone in eps
        let mut prev_feasible = false;
        for k in 1..=50i64 {
            let eps = Scalar::ratio(3 * k, 100);
            let now = feasible(&f, &g, &eps).unwrap().is_some();
            prop_assert!(!prev_feasible || now, "monotonicity broken at eps = {}", eps);
            prev_feasible = now;
        }
        prop_assert!(prev_feasible, "eps = 3/2 must be feasible");
    }
}

/// Adding one breakpoint to a distribution function makes the pair
/// distinguishable at level zero.
#[test]
fn indiscernibles_detect_one_extra_breakpoint() {
    let f = StepFunction::new(
        vec![Scalar::zero(), Scalar::one()],
        vec![Scalar::zero(), Scalar::ratio(3, 2), Scalar::ratio(1, 2)],
    )
    .unwrap();
    let bump = StepFunction::indicator(Scalar::from_int(2), Scalar::from_int(3)).unwrap();
    let g = StepFunction::linear_combine(&Scalar::one(), &f, &Scalar::ratio(1, 7), &bump);
    assert!(feasible(&f, &f, &Scalar::zero()).unwrap().is_some());
    assert!(feasible(&f, &g, &Scalar::zero()).unwrap().is_none());
}

/// Wherever the distance trend holds, the optimal-shift violation on every
/// fixed window tends to zero along the sequence.
#[test]
fn best_shift_violation_follows_the_distance_trend() {
    let zero = StepFunction::zero();
    let eps = Scalar::ratio(1, 8);
    for r in [Scalar::one(), Scalar::from_int(2)] {
        for n in 2..=20u32 {
            // escaping mass: once the atom leaves the window, the difference is
            // constant there and the violation is exactly zero
            let f = generators::escape_mass(n).unwrap().cdf();
            let (_, violation) = best_shift(&f, &zero, &eps, &-&r, &r).unwrap();
            if Scalar::from(n) > r {
                assert_eq!(violation, Scalar::zero(), "escape n = {n}, r = {r}");
            }
            // shrinking dipole: violation at most the interval width 1/n
            let f = generators::blowup_dipole(n).unwrap().cdf();
            let (_, violation) = best_shift(&f, &zero, &eps, &-&r, &r).unwrap();
            assert!(
                violation <= Scalar::one() / Scalar::from(n),
                "dipole n = {n}, r = {r}"
            );
        }
    }
}

/// Along a metric-convergent family, the single-point shift estimate drives
/// the violation measure to zero: the two shift constructions cohere.
#[test]
fn shift_estimate_coheres_with_best_shift() {
    let limit = StepFunction::zero();
    let x0 = Scalar::ratio(-1, 3); // off every breakpoint of the family
    let eps = Scalar::ratio(1, 10);
    let window = Scalar::from_int(2);
    for n in 2..=64u32 {
        let mu = generators::typewriter(n).unwrap();
        let f_n = mu.cdf();
        let c = shift_estimate(&f_n, &limit, &x0);
        assert_eq!(c, Scalar::zero());
        // violation with the estimated shift is at most the interval width
        let width = &mu.atoms()[1].x - &mu.atoms()[0].x;
        let h = StepFunction::linear_combine(&Scalar::one(), &f_n, &Scalar::from_int(-1), &limit);
        let violation = h.level_excess(&c, &eps, &-&window, &window);
        assert!(violation <= width);
        // and the optimal shift can only do better
        let (_, best) = best_shift(&f_n, &limit, &eps, &-&window, &window).unwrap();
        assert!(best <= violation);
    }
}
