//! Right-continuous step functions of bounded variation.
//!
//! A [`StepFunction`] with breakpoints `x_1 < … < x_m` and values
//! `v_0, …, v_m` equals `v_0` on `(-∞, x_1)`, `v_i` on `[x_i, x_{i+1})` and
//! `v_m` on `[x_m, ∞)`. Pieces are half-open to the right, so the function is
//! right-continuous by construction, and the canonical form (no two adjacent
//! values equal) makes equality decidable by field comparison.
//!
//! Functions with left tail `v_0 = 0` are exactly the distribution functions
//! of finite atomic signed measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Right-continuous step function of bounded variation on the real line.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawStepFunction", into = "RawStepFunction")]
pub struct StepFunction {
    breakpoints: Vec<Scalar>,
    values: Vec<Scalar>,
}

/// Wire form: `{"breakpoints": ["p/q", …], "values": ["p/q", …]}`.
#[derive(Serialize, Deserialize)]
struct RawStepFunction {
    breakpoints: Vec<Scalar>,
    values: Vec<Scalar>,
}

impl TryFrom<RawStepFunction> for StepFunction {
    type Error = Error;
    fn try_from(raw: RawStepFunction) -> Result<Self> {
        StepFunction::new(raw.breakpoints, raw.values)
    }
}

impl From<StepFunction> for RawStepFunction {
    fn from(f: StepFunction) -> Self {
        RawStepFunction {
            breakpoints: f.breakpoints,
            values: f.values,
        }
    }
}

impl StepFunction {
    /// Builds a step function, canonicalizing away redundant breakpoints.
    ///
    /// Requires `values.len() == breakpoints.len() + 1` and strictly increasing
    /// breakpoints.
    pub fn new(breakpoints: Vec<Scalar>, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::domain(format!(
                "need {} values for {} breakpoints, got {}",
                breakpoints.len() + 1,
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(
                "breakpoints must be strictly increasing".to_string(),
            ));
        }
        let mut canon_bps = Vec::with_capacity(breakpoints.len());
        let mut canon_vals = Vec::with_capacity(values.len());
        let mut values = values.into_iter();
        canon_vals.push(values.next().expect("nonempty by length check"));
        for (bp, v) in breakpoints.into_iter().zip(values) {
            if &v != canon_vals.last().expect("nonempty") {
                canon_bps.push(bp);
                canon_vals.push(v);
            }
        }
        Ok(StepFunction {
            breakpoints: canon_bps,
            values: canon_vals,
        })
    }

    /// The function identically equal to `v`.
    pub fn constant(v: Scalar) -> Self {
        StepFunction {
            breakpoints: Vec::new(),
            values: vec![v],
        }
    }

    pub fn zero() -> Self {
        Self::constant(Scalar::zero())
    }

    /// Indicator of the half-open interval `[a, b)`. Requires `a < b`.
    pub fn indicator(a: Scalar, b: Scalar) -> Result<Self> {
        if a >= b {
            return Err(Error::contract(format!(
                "indicator needs a < b, got [{a}, {b})"
            )));
        }
        StepFunction::new(
            vec![a, b],
            vec![Scalar::zero(), Scalar::one(), Scalar::zero()],
        )
    }

    /// Indicator of a disjoint union of half-open intervals `[a_i, b_i)`,
    /// given sorted with `b_i <= a_{i+1}`. Touching intervals merge.
    pub fn indicator_union(intervals: &[(Scalar, Scalar)]) -> Result<Self> {
        let mut bps = Vec::with_capacity(2 * intervals.len());
        let mut vals = Vec::with_capacity(2 * intervals.len() + 1);
        vals.push(Scalar::zero());
        for (a, b) in intervals {
            if a >= b {
                return Err(Error::contract(format!("empty interval [{a}, {b})")));
            }
            if let Some(last) = bps.last() {
                if a < last {
                    return Err(Error::contract(
                        "intervals must be sorted and disjoint".to_string(),
                    ));
                }
            }
            if bps.last() == Some(a) {
                // touching: extend the previous interval instead of reopening
                bps.pop();
                vals.pop();
            } else {
                bps.push(a.clone());
                vals.push(Scalar::one());
            }
            bps.push(b.clone());
            vals.push(Scalar::zero());
        }
        StepFunction::new(bps, vals)
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// Left-tail value `v_0 = lim_{x -> -∞} f(x)`.
    pub fn left_tail(&self) -> &Scalar {
        &self.values[0]
    }

    pub fn right_tail(&self) -> &Scalar {
        self.values.last().expect("values nonempty")
    }

    /// Whether the left tail is zero, i.e. the function is a distribution
    /// function of a finite signed measure.
    pub fn is_distribution_function(&self) -> bool {
        self.left_tail().is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// Value at `x`, honoring right-continuity at breakpoints.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let idx = self.breakpoints.partition_point(|b| b <= x);
        self.values[idx].clone()
    }

    /// Jump `v_i - v_{i-1}` at each breakpoint, paired with its location.
    pub fn jumps(&self) -> impl Iterator<Item = (&Scalar, Scalar)> {
        self.breakpoints
            .iter()
            .zip(self.values.windows(2))
            .map(|(x, w)| (x, &w[1] - &w[0]))
    }

    /// `a·f + b·g`, canonical; breakpoints are a subset of the union of inputs'.
    pub fn linear_combine(a: &Scalar, f: &StepFunction, b: &Scalar, g: &StepFunction) -> Self {
        let mut bps = Vec::with_capacity(f.breakpoints.len() + g.breakpoints.len());
        let mut vals = Vec::with_capacity(f.breakpoints.len() + g.breakpoints.len() + 1);
        let mut i = 0;
        let mut j = 0;
        vals.push(a * &f.values[0] + b * &g.values[0]);
        while i < f.breakpoints.len() || j < g.breakpoints.len() {
            let take_f = match (f.breakpoints.get(i), g.breakpoints.get(j)) {
                (Some(x), Some(y)) => {
                    if x == y {
                        j += 1;
                        true
                    } else {
                        x < y
                    }
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => unreachable!(),
            };
            let bp = if take_f {
                i += 1;
                f.breakpoints[i - 1].clone()
            } else {
                j += 1;
                g.breakpoints[j - 1].clone()
            };
            vals.push(a * &f.values[i] + b * &g.values[j]);
            bps.push(bp);
        }
        StepFunction::new(bps, vals).expect("merged breakpoints are strictly increasing")
    }

    /// Total variation on `[a, b]`: the sum of absolute jumps at breakpoints in
    /// `(a, b]`. A jump exactly at `a` is excluded and one at `b` included,
    /// matching the `F(b) - F(a)` semantics of interval masses.
    pub fn total_variation_on(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        if a > b {
            return Err(Error::contract(format!("empty interval [{a}, {b}]")));
        }
        Ok(self
            .jumps()
            .filter(|(x, _)| *x > a && *x <= b)
            .map(|(_, j)| j.abs())
            .sum())
    }

    /// Pieces of `f` restricted to `[l, r]`, as `(value, length)` pairs with
    /// positive lengths summing to `r - l`. Empty when `l == r`.
    pub(crate) fn clipped_pieces(&self, l: &Scalar, r: &Scalar) -> Vec<(Scalar, Scalar)> {
        debug_assert!(l <= r);
        if l == r {
            return Vec::new();
        }
        let mut idx = self.breakpoints.partition_point(|b| b <= l);
        let mut pieces = Vec::with_capacity(self.breakpoints.len() + 2 - idx);
        let mut cursor = l.clone();
        while idx < self.breakpoints.len() && &self.breakpoints[idx] < r {
            pieces.push((self.values[idx].clone(), &self.breakpoints[idx] - &cursor));
            cursor = self.breakpoints[idx].clone();
            idx += 1;
        }
        pieces.push((self.values[idx].clone(), r - &cursor));
        pieces
    }

    /// Lebesgue measure of `{x in [l, r] : |f(x) - c| > eps}`.
    ///
    /// The inequality is strict: pieces achieving `|v - c| = eps` comply.
    /// Requires `l <= r` and `eps >= 0`.
    pub fn level_excess(&self, c: &Scalar, eps: &Scalar, l: &Scalar, r: &Scalar) -> Scalar {
        assert!(l <= r, "window must satisfy l <= r");
        assert!(!eps.is_negative(), "eps must be nonnegative");
        self.clipped_pieces(l, r)
            .into_iter()
            .filter(|(v, _)| (v - c).abs() > *eps)
            .map(|(_, len)| len)
            .sum()
    }

    /// `f - f(-∞)`: the vertical shift with left tail zero.
    pub fn normalize_to_w(&self) -> StepFunction {
        if self.is_distribution_function() {
            return self.clone();
        }
        let v0 = self.values[0].clone();
        StepFunction {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v - &v0).collect(),
        }
    }
}
