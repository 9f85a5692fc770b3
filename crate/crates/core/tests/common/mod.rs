//! Shared proptest strategies for rational step functions, measures and
//! test functions.

use proptest::prelude::*;

use sigmeas::{Atom, Scalar, SignedMeasure, StepFunction, TestFunction};

/// Rationals in `[lo, hi]` with denominator at most `max_den`.
pub fn scalar_in(lo: i64, hi: i64, max_den: i64) -> impl Strategy<Value = Scalar> {
    (1..=max_den).prop_flat_map(move |den| {
        ((lo * den)..=(hi * den)).prop_map(move |num| Scalar::ratio(num, den))
    })
}

/// Step functions with left tail 0, at most `max_breakpoints` breakpoints and
/// coordinates in `[-8, 8]`.
pub fn step_function_in_w(max_breakpoints: usize) -> impl Strategy<Value = StepFunction> {
    (0..=max_breakpoints).prop_flat_map(|m| {
        (
            proptest::collection::btree_set(scalar_in(-8, 8, 6), m),
            proptest::collection::vec(scalar_in(-8, 8, 6), m),
        )
            .prop_map(|(bps, vals)| {
                let bps: Vec<Scalar> = bps.into_iter().collect();
                let mut values = Vec::with_capacity(bps.len() + 1);
                values.push(Scalar::zero());
                values.extend(vals.into_iter().take(bps.len()));
                StepFunction::new(bps, values).expect("sorted breakpoints")
            })
    })
}

/// Finite atomic measures with at most `max_atoms` atoms in `[-8, 8]`.
pub fn signed_measure(max_atoms: usize) -> impl Strategy<Value = SignedMeasure> {
    (0..=max_atoms).prop_flat_map(|k| {
        (
            proptest::collection::btree_set(scalar_in(-8, 8, 6), k),
            proptest::collection::vec((scalar_in(-8, 8, 6), any::<bool>()), k),
        )
            .prop_map(|(xs, ws)| {
                let atoms = xs
                    .into_iter()
                    .zip(ws)
                    .map(|(x, (w, positive))| {
                        let magnitude = if w.is_zero() { Scalar::one() } else { w.abs() };
                        Atom {
                            x,
                            w: if positive { magnitude } else { -magnitude },
                        }
                    })
                    .collect();
                SignedMeasure::new(atoms)
            })
    })
}

/// Compactly supported piecewise-linear test functions with nodes in
/// `[-10, 10]`.
pub fn compact_test_function(max_interior: usize) -> impl Strategy<Value = TestFunction> {
    (0..=max_interior).prop_flat_map(|k| {
        (
            proptest::collection::btree_set(scalar_in(-10, 10, 4), k + 2),
            proptest::collection::vec(scalar_in(-8, 8, 4), k),
        )
            .prop_map(|(nodes, interior)| {
                let nodes: Vec<Scalar> = nodes.into_iter().collect();
                let inner = nodes.len() - 2;
                let mut vals = Vec::with_capacity(nodes.len());
                vals.push(Scalar::zero());
                vals.extend(interior.into_iter().take(inner));
                while vals.len() < nodes.len() - 1 {
                    vals.push(Scalar::zero());
                }
                vals.push(Scalar::zero());
                TestFunction::new(nodes, vals, Scalar::zero(), Scalar::zero())
                    .expect("sorted nodes with matching tails")
            })
    })
}
