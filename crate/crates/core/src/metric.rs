//! The convergence metric on distribution functions.
//!
//! For step functions `f`, `g` the distance is
//!
//! ```text
//! d(f, g) = min { eps >= 0 : exists c with
//!                 lambda({x in [-1/eps, 1/eps] : |f(x) - c - g(x)| > eps}) <= eps }
//! ```
//!
//! with `[-1/0, 1/0]` read as the whole line. Convergence in `d` is exactly
//! convergence of `f_n - c_n` to `g` locally in Lebesgue measure for some
//! shifts `c_n` ("almost basic" convergence of the underlying measures).
//!
//! Membership of a given `eps` in the feasibility set is decidable exactly:
//! with `h = f - g` clipped to the window, each piece contributes a weighted
//! closed interval `[v_i - eps, v_i + eps]` of admissible shifts, and the best
//! shift maximizes the covered length. A sweep over the interval endpoints
//! finds that maximum without searching an uncountable set. The minimal `eps`
//! itself is typically irrational, so [`almost_basic_distance`] returns a
//! rational enclosure produced by bisection, with an exact feasibility
//! certificate at the upper endpoint.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stepfn::StepFunction;

/// Certified enclosure `[lo, hi]` of the distance, with a shift certifying
/// feasibility at `hi`. Always `hi <= 3/2`, and either `lo = 0` or `lo` is
/// certified infeasible.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DistanceBracket {
    pub lo: Scalar,
    pub hi: Scalar,
    pub witness_c: Scalar,
}

impl DistanceBracket {
    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    /// Whether `x` lies in `[lo, hi]`.
    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Outcome of one coverage sweep: an optimal shift and the total length of
/// window pieces it keeps within the band.
struct SweepOutcome {
    best_c: Scalar,
    max_coverage: Scalar,
}

/// Maximizes, over `c`, the total weight of pieces with `|v_i - c| <= eps`.
///
/// Every piece contributes the closed interval `[v_i - eps, v_i + eps]` of
/// admissible `c`; the maximum total weight over `c` is attained on a union of
/// closed regions delimited by interval endpoints. Returns the midpoint of the
/// optimal region closest to zero, so that the reported shift is canonical and
/// negating all values negates the shift.
fn coverage_sweep(grouped: &[(Scalar, Scalar)], eps: &Scalar) -> SweepOutcome {
    if grouped.is_empty() {
        return SweepOutcome {
            best_c: Scalar::zero(),
            max_coverage: Scalar::zero(),
        };
    }

    // Distinct event coordinates with the start/end weight landing on each.
    // Starts (v - eps) and ends (v + eps) are both already sorted.
    let mut events: Vec<(Scalar, Scalar, Scalar)> = Vec::with_capacity(2 * grouped.len());
    {
        let mut push = |coord: Scalar, start_w: Scalar, end_w: Scalar| {
            match events.last_mut() {
                Some((c, s, e)) if *c == coord => {
                    *s += start_w;
                    *e += end_w;
                }
                _ => events.push((coord, start_w, end_w)),
            };
        };
        let mut i = 0;
        let mut j = 0;
        while i < grouped.len() || j < grouped.len() {
            let start_coord = grouped.get(i).map(|(v, _)| v - eps);
            let end_coord = grouped.get(j).map(|(v, _)| v + eps);
            let take_start = match (&start_coord, &end_coord) {
                (Some(s), Some(e)) => s <= e,
                (Some(_), None) => true,
                _ => false,
            };
            if take_start {
                push(start_coord.expect("checked"), grouped[i].1.clone(), Scalar::zero());
                i += 1;
            } else {
                push(end_coord.expect("checked"), Scalar::zero(), grouped[j].1.clone());
                j += 1;
            }
        }
    }

    // Coverage at each event point (intervals ending at the point still
    // count) and on the open gap following it.
    let mut point_cov = Vec::with_capacity(events.len());
    let mut gap_cov = Vec::with_capacity(events.len());
    let mut running = Scalar::zero();
    let mut max_coverage = Scalar::zero();
    for (_, start_w, end_w) in &events {
        running += start_w.clone();
        if running > max_coverage {
            max_coverage = running.clone();
        }
        point_cov.push(running.clone());
        running -= end_w.clone();
        gap_cov.push(running.clone());
    }

    // The optimum is attained on closed regions delimited by sub-maximal
    // points; a gap is maximal only if both neighbouring points are. Report
    // the region midpoint closest to zero (ties prefer the positive one), so
    // the choice is canonical and negation-equivariant.
    let mut best_c: Option<Scalar> = None;
    let mut i = 0;
    while i < events.len() {
        if point_cov[i] == max_coverage {
            let start = i;
            while i + 1 < events.len()
                && gap_cov[i] == max_coverage
                && point_cov[i + 1] == max_coverage
            {
                i += 1;
            }
            let mid = (&events[start].0 + &events[i].0) / &Scalar::from_int(2);
            let better = match &best_c {
                None => true,
                Some(cur) => {
                    let (ma, mc) = (mid.abs(), cur.abs());
                    ma < mc || (ma == mc && &mid > cur)
                }
            };
            if better {
                best_c = Some(mid);
            }
        }
        i += 1;
    }

    SweepOutcome {
        best_c: best_c.expect("nonempty pieces give a positive maximum"),
        max_coverage,
    }
}

/// Total length carried by each distinct value of `h` on `[l, r]`, ascending
/// by value. Indicator-like functions collapse to a handful of levels here no
/// matter how many pieces they have.
fn window_weight_by_value(h: &StepFunction, l: &Scalar, r: &Scalar) -> Vec<(Scalar, Scalar)> {
    if l >= r {
        return Vec::new();
    }
    let bps = h.breakpoints();
    let vals = h.values();
    let mut by_value: std::collections::BTreeMap<&Scalar, Scalar> = std::collections::BTreeMap::new();
    let mut idx = bps.partition_point(|b| b <= l);
    let mut cursor = l;
    while idx < bps.len() && &bps[idx] < r {
        *by_value.entry(&vals[idx]).or_insert_with(Scalar::zero) += &bps[idx] - cursor;
        cursor = &bps[idx];
        idx += 1;
    }
    *by_value.entry(&vals[idx]).or_insert_with(Scalar::zero) += r - cursor;
    by_value.into_iter().map(|(v, w)| (v.clone(), w)).collect()
}

/// Feasibility decision on a precomputed difference `h = f - g`.
fn feasible_difference(h: &StepFunction, eps: &Scalar) -> Option<Scalar> {
    if eps.is_zero() {
        return if h.is_constant() {
            Some(h.left_tail().clone())
        } else {
            None
        };
    }
    let r = eps.recip();
    let l = -&r;
    let window_len = &r - &l;
    let grouped = window_weight_by_value(h, &l, &r);
    let sweep = coverage_sweep(&grouped, eps);
    let violation = window_len - sweep.max_coverage;
    if violation <= *eps {
        Some(sweep.best_c)
    } else {
        None
    }
}

/// Per-value prefix sums over the segments of a difference function, so that
/// repeated window queries during bisection cost `O(values · log pieces)`
/// instead of a full walk.
struct DifferenceWindows {
    breakpoints: Vec<Scalar>,
    values: Vec<Scalar>,
    /// Ascending distinct values of the function.
    distinct: Vec<Scalar>,
    /// `values[i]` is `distinct[value_index[i]]`.
    value_index: Vec<usize>,
    /// `prefix[k][d]` = total length of segments `t < k` carrying value `d`,
    /// where segment `t` is `[breakpoints[t], breakpoints[t+1])` with value
    /// `values[t+1]`.
    prefix: Vec<Vec<Scalar>>,
}

impl DifferenceWindows {
    fn new(h: &StepFunction) -> Self {
        let breakpoints = h.breakpoints().to_vec();
        let values = h.values().to_vec();
        let mut distinct: Vec<Scalar> = values.to_vec();
        distinct.sort();
        distinct.dedup();
        let value_index: Vec<usize> = values
            .iter()
            .map(|v| distinct.binary_search(v).expect("present"))
            .collect();
        let segments = breakpoints.len().saturating_sub(1);
        let mut prefix = Vec::with_capacity(segments + 1);
        prefix.push(vec![Scalar::zero(); distinct.len()]);
        for t in 0..segments {
            let mut row = prefix[t].clone();
            row[value_index[t + 1]] += &breakpoints[t + 1] - &breakpoints[t];
            prefix.push(row);
        }
        DifferenceWindows {
            breakpoints,
            values,
            distinct,
            value_index,
            prefix,
        }
    }

    /// Weight per distinct value on `[l, r]`, ascending by value, zero-weight
    /// values omitted.
    fn weights(&self, l: &Scalar, r: &Scalar) -> Vec<(Scalar, Scalar)> {
        let mut acc = vec![Scalar::zero(); self.distinct.len()];
        if l < r {
            let i = self.breakpoints.partition_point(|b| b <= l);
            let j = self.breakpoints.partition_point(|b| b < r);
            if i >= j {
                // no breakpoint strictly inside the window
                acc[self.value_index[i]] += r - l;
            } else {
                acc[self.value_index[i]] += &self.breakpoints[i] - l;
                for (d, slot) in acc.iter_mut().enumerate() {
                    *slot += &self.prefix[j - 1][d] - &self.prefix[i][d];
                }
                acc[self.value_index[j]] += r - &self.breakpoints[j - 1];
            }
        }
        self.distinct
            .iter()
            .zip(acc)
            .filter(|(_, w)| w.is_positive())
            .map(|(v, w)| (v.clone(), w))
            .collect()
    }

    fn is_constant(&self) -> bool {
        self.breakpoints.is_empty()
    }

    fn constant_value(&self) -> &Scalar {
        &self.values[0]
    }

    fn feasible(&self, eps: &Scalar) -> Option<Scalar> {
        if eps.is_zero() {
            return if self.is_constant() {
                Some(self.constant_value().clone())
            } else {
                None
            };
        }
        let r = eps.recip();
        let l = -&r;
        let grouped = self.weights(&l, &r);
        let sweep = coverage_sweep(&grouped, eps);
        let violation = (&r - &l) - sweep.max_coverage;
        if violation <= *eps {
            Some(sweep.best_c)
        } else {
            None
        }
    }
}

/// Decides exactly whether `eps` is a feasible level for the pair `(f, g)`:
/// whether some shift `c` leaves violation measure at most `eps` inside the
/// window `[-1/eps, 1/eps]`. Returns the witnessing shift if so.
///
/// For `eps = 0` the window is the whole line and feasibility means `f - g`
/// is constant (equality almost everywhere, hence everywhere for canonical
/// step functions).
pub fn feasible(f: &StepFunction, g: &StepFunction, eps: &Scalar) -> Result<Option<Scalar>> {
    if eps.is_negative() {
        return Err(Error::contract(format!("eps must be >= 0, got {eps}")));
    }
    let h = StepFunction::linear_combine(&Scalar::one(), f, &Scalar::from_int(-1), g);
    Ok(feasible_difference(&h, eps))
}

/// The universally feasible upper seed for bisection: at `eps = 3/2` the
/// window has length `4/3 <= 3/2`, so even total violation complies.
fn upper_seed() -> Scalar {
    Scalar::ratio(3, 2)
}

/// Certified enclosure of the distance `d(f, g)` with `hi - lo <= tol`.
///
/// The feasibility set is an interval unbounded to the right whose left
/// endpoint is the distance, so bisection maintaining an infeasible `lo` and a
/// feasible `hi` converges to it. Requires `tol > 0`.
pub fn almost_basic_distance(
    f: &StepFunction,
    g: &StepFunction,
    tol: &Scalar,
) -> Result<DistanceBracket> {
    if !tol.is_positive() {
        return Err(Error::contract(format!("tol must be > 0, got {tol}")));
    }
    let h = StepFunction::linear_combine(&Scalar::one(), f, &Scalar::from_int(-1), g);
    let windows = DifferenceWindows::new(&h);
    if let Some(c) = windows.feasible(&Scalar::zero()) {
        return Ok(DistanceBracket {
            lo: Scalar::zero(),
            hi: Scalar::zero(),
            witness_c: c,
        });
    }
    let mut lo = Scalar::zero();
    let mut hi = upper_seed();
    let mut witness = windows.feasible(&hi).expect("3/2 is always feasible");
    let two = Scalar::from_int(2);
    while (&hi - &lo) > *tol {
        let mid = (&lo + &hi) / &two;
        match windows.feasible(&mid) {
            Some(c) => {
                hi = mid;
                witness = c;
            }
            None => lo = mid,
        }
    }
    Ok(DistanceBracket {
        lo,
        hi,
        witness_c: witness,
    })
}

/// Best shift for an explicit window: a `c` minimizing
/// `lambda({x in [l, r] : |f(x) - c - g(x)| > eps})`, together with that
/// minimal violation. Requires `eps >= 0` and `l <= r`.
pub fn best_shift(
    f: &StepFunction,
    g: &StepFunction,
    eps: &Scalar,
    l: &Scalar,
    r: &Scalar,
) -> Result<(Scalar, Scalar)> {
    if l > r {
        return Err(Error::contract(format!("window must satisfy l <= r, got [{l}, {r}]")));
    }
    if eps.is_negative() {
        return Err(Error::contract(format!("eps must be >= 0, got {eps}")));
    }
    let h = StepFunction::linear_combine(&Scalar::one(), f, &Scalar::from_int(-1), g);
    let grouped = window_weight_by_value(&h, l, r);
    if grouped.is_empty() {
        return Ok((Scalar::zero(), Scalar::zero()));
    }
    let sweep = coverage_sweep(&grouped, eps);
    let violation = (r - l) - sweep.max_coverage;
    Ok((sweep.best_c, violation))
}

/// The canonical shift sequence from a single probe point:
/// `c = f_n(x0) - f(x0)`.
pub fn shift_estimate(f_n: &StepFunction, f: &StepFunction, x0: &Scalar) -> Scalar {
    f_n.eval(x0) - f.eval(x0)
}
