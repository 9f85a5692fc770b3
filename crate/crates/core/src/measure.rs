//! Finite atomic signed measures and exact integration.
//!
//! A [`SignedMeasure`] is a finite list of atoms `(position, mass)` with
//! strictly increasing positions and nonzero masses. Its distribution function
//! `F(x) = mu((-∞, x])` is a step function with left tail zero, and the two
//! representations are in exact bijection ([`SignedMeasure::cdf`] /
//! [`SignedMeasure::from_cdf`]).
//!
//! [`TestFunction`] is a continuous piecewise-linear integrand (compactly
//! supported when both tails vanish). Against atomic measures, integration and
//! the integration-by-parts identity
//! `∫ φ dμ = -∫ φ'(t) F(t) dt`
//! hold exactly in rational arithmetic, with no smoothing or quadrature error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stepfn::StepFunction;

/// One atom of a signed measure: mass `w` at position `x`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Atom {
    pub x: Scalar,
    pub w: Scalar,
}

/// Finite atomic signed measure on the real line.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(from = "RawMeasure", into = "RawMeasure")]
pub struct SignedMeasure {
    atoms: Vec<Atom>,
}

/// Wire form: `{"atoms": [{"x": "p/q", "w": "p/q"}, …]}`.
#[derive(Serialize, Deserialize)]
struct RawMeasure {
    atoms: Vec<Atom>,
}

impl From<RawMeasure> for SignedMeasure {
    fn from(raw: RawMeasure) -> Self {
        SignedMeasure::new(raw.atoms)
    }
}

impl From<SignedMeasure> for RawMeasure {
    fn from(mu: SignedMeasure) -> Self {
        RawMeasure { atoms: mu.atoms }
    }
}

impl SignedMeasure {
    /// Builds a measure from atoms in any order. Atoms at equal positions are
    /// merged by adding masses; atoms whose mass cancels to zero are dropped.
    pub fn new(mut atoms: Vec<Atom>) -> Self {
        atoms.sort_by(|a, b| a.x.cmp(&b.x));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if last.x == atom.x => last.w += atom.w,
                _ => merged.push(atom),
            }
        }
        merged.retain(|a| !a.w.is_zero());
        SignedMeasure { atoms: merged }
    }

    pub fn zero() -> Self {
        SignedMeasure { atoms: Vec::new() }
    }

    /// Unit point mass at `x`.
    pub fn dirac(x: Scalar) -> Self {
        SignedMeasure {
            atoms: vec![Atom {
                x,
                w: Scalar::one(),
            }],
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Distribution function `x -> mu((-∞, x])`, a step function with left
    /// tail zero.
    pub fn cdf(&self) -> StepFunction {
        let mut values = Vec::with_capacity(self.atoms.len() + 1);
        let mut running = Scalar::zero();
        values.push(running.clone());
        let mut bps = Vec::with_capacity(self.atoms.len());
        for atom in &self.atoms {
            running += atom.w.clone();
            bps.push(atom.x.clone());
            values.push(running.clone());
        }
        StepFunction::new(bps, values).expect("atom positions are strictly increasing")
    }

    /// Inverse of [`cdf`](Self::cdf): atoms at the breakpoints with masses
    /// equal to the jumps. Errors unless the left tail is zero.
    pub fn from_cdf(f: &StepFunction) -> Result<Self> {
        if !f.is_distribution_function() {
            return Err(Error::domain(format!(
                "left tail is {}, not 0: not a distribution function",
                f.left_tail()
            )));
        }
        Ok(SignedMeasure {
            atoms: f
                .jumps()
                .map(|(x, w)| Atom { x: x.clone(), w })
                .collect(),
        })
    }

    /// Positive and negative parts `(mu+, mu-)`; both are nonnegative, have
    /// disjoint supports, and satisfy `mu = mu+ - mu-`.
    pub fn hahn_jordan(&self) -> (SignedMeasure, SignedMeasure) {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for atom in &self.atoms {
            if atom.w.is_positive() {
                pos.push(atom.clone());
            } else {
                neg.push(Atom {
                    x: atom.x.clone(),
                    w: -&atom.w,
                });
            }
        }
        (SignedMeasure { atoms: pos }, SignedMeasure { atoms: neg })
    }

    /// Total variation `|mu|([a, b])` over the closed interval.
    pub fn tv_on_interval(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        if a > b {
            return Err(Error::contract(format!("empty interval [{a}, {b}]")));
        }
        Ok(self
            .atoms
            .iter()
            .filter(|atom| &atom.x >= a && &atom.x <= b)
            .map(|atom| atom.w.abs())
            .sum())
    }

    /// `|mu|(R)`, the total variation norm.
    pub fn total_variation(&self) -> Scalar {
        self.atoms.iter().map(|a| a.w.abs()).sum()
    }

    /// `mu((x, y]) = F(y) - F(x)`.
    pub fn interval_mass(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        if x > y {
            return Err(Error::contract(format!("empty interval ({x}, {y}]")));
        }
        Ok(self
            .atoms
            .iter()
            .filter(|atom| &atom.x > x && &atom.x <= y)
            .map(|atom| atom.w.clone())
            .sum())
    }

    /// `∫ φ dμ = Σ mass_i · φ(position_i)`, exact.
    pub fn integrate(&self, phi: &TestFunction) -> Scalar {
        self.atoms.iter().map(|a| &a.w * &phi.eval(&a.x)).sum()
    }
}

/// Continuous piecewise-linear test function.
///
/// Affine between consecutive nodes, constant `left_tail` on `(-∞, t_1]` and
/// constant `right_tail` on `[t_k, ∞)`. Continuity forces the first and last
/// node values to equal the tails. Compactly supported iff both tails are 0.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawTestFunction", into = "RawTestFunction")]
pub struct TestFunction {
    nodes: Vec<Scalar>,
    node_values: Vec<Scalar>,
    left_tail: Scalar,
    right_tail: Scalar,
}

#[derive(Serialize, Deserialize)]
struct RawTestFunction {
    nodes: Vec<Scalar>,
    node_values: Vec<Scalar>,
    left_tail: Scalar,
    right_tail: Scalar,
}

impl TryFrom<RawTestFunction> for TestFunction {
    type Error = Error;
    fn try_from(raw: RawTestFunction) -> Result<Self> {
        TestFunction::new(raw.nodes, raw.node_values, raw.left_tail, raw.right_tail)
    }
}

impl From<TestFunction> for RawTestFunction {
    fn from(phi: TestFunction) -> Self {
        RawTestFunction {
            nodes: phi.nodes,
            node_values: phi.node_values,
            left_tail: phi.left_tail,
            right_tail: phi.right_tail,
        }
    }
}

impl TestFunction {
    pub fn new(
        nodes: Vec<Scalar>,
        node_values: Vec<Scalar>,
        left_tail: Scalar,
        right_tail: Scalar,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::domain("need at least one node".to_string()));
        }
        if nodes.len() != node_values.len() {
            return Err(Error::domain(format!(
                "{} nodes but {} node values",
                nodes.len(),
                node_values.len()
            )));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("nodes must be strictly increasing".to_string()));
        }
        if node_values[0] != left_tail {
            return Err(Error::domain(
                "first node value must equal the left tail for continuity".to_string(),
            ));
        }
        if node_values[node_values.len() - 1] != right_tail {
            return Err(Error::domain(
                "last node value must equal the right tail for continuity".to_string(),
            ));
        }
        Ok(TestFunction {
            nodes,
            node_values,
            left_tail,
            right_tail,
        })
    }

    /// The constant function `c`.
    pub fn constant(c: Scalar) -> Self {
        TestFunction {
            nodes: vec![Scalar::zero()],
            node_values: vec![c.clone()],
            left_tail: c.clone(),
            right_tail: c,
        }
    }

    /// Tent of the given height over `[center - half_width, center + half_width]`.
    pub fn hat(center: Scalar, half_width: Scalar, height: Scalar) -> Result<Self> {
        if !half_width.is_positive() {
            return Err(Error::contract("hat needs positive half-width".to_string()));
        }
        TestFunction::new(
            vec![&center - &half_width, center.clone(), &center + &half_width],
            vec![Scalar::zero(), height, Scalar::zero()],
            Scalar::zero(),
            Scalar::zero(),
        )
    }

    /// Compactly supported sawtooth over sorted disjoint intervals
    /// `[a_i, b_i)`: value 1 at every `a_i`, 0 at every `b_i`, linear in
    /// between, rising from 0 over a leading ramp of width `ramp`.
    ///
    /// Against the measure with distribution function `1` on those intervals,
    /// this integrand picks up one unit per interval, which makes it a
    /// divergence witness for interval families whose piece count grows.
    pub fn sawtooth_over(intervals: &[(Scalar, Scalar)], ramp: Scalar) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::contract("need at least one interval".to_string()));
        }
        if !ramp.is_positive() {
            return Err(Error::contract("ramp width must be positive".to_string()));
        }
        let mut nodes = Vec::with_capacity(2 * intervals.len() + 1);
        let mut vals = Vec::with_capacity(2 * intervals.len() + 1);
        nodes.push(&intervals[0].0 - &ramp);
        vals.push(Scalar::zero());
        for (a, b) in intervals {
            nodes.push(a.clone());
            vals.push(Scalar::one());
            nodes.push(b.clone());
            vals.push(Scalar::zero());
        }
        TestFunction::new(nodes, vals, Scalar::zero(), Scalar::zero())
    }

    pub fn nodes(&self) -> &[Scalar] {
        &self.nodes
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.left_tail.is_zero() && self.right_tail.is_zero()
    }

    /// Smallest interval outside of which the function is constant.
    pub fn node_span(&self) -> (&Scalar, &Scalar) {
        (&self.nodes[0], &self.nodes[self.nodes.len() - 1])
    }

    /// Largest absolute slope, a Lipschitz constant.
    pub fn lipschitz_constant(&self) -> Scalar {
        let mut best = Scalar::zero();
        for i in 1..self.nodes.len() {
            let slope = (&self.node_values[i] - &self.node_values[i - 1])
                / (&self.nodes[i] - &self.nodes[i - 1]);
            best = best.max(slope.abs());
        }
        best
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        if x <= &self.nodes[0] {
            return self.left_tail.clone();
        }
        let last = self.nodes.len() - 1;
        if x >= &self.nodes[last] {
            return self.right_tail.clone();
        }
        let i = self.nodes.partition_point(|n| n <= x);
        let (x0, x1) = (&self.nodes[i - 1], &self.nodes[i]);
        let (y0, y1) = (&self.node_values[i - 1], &self.node_values[i]);
        y0 + &((y1 - y0) * (x - x0) / (x1 - x0))
    }

    /// The derivative as a right-continuous step function of slopes: the slope
    /// of segment `[t_i, t_{i+1})` on that interval and 0 on both tails.
    pub fn derivative_step(&self) -> StepFunction {
        let mut values = Vec::with_capacity(self.nodes.len() + 1);
        values.push(Scalar::zero());
        for i in 1..self.nodes.len() {
            values.push(
                (&self.node_values[i] - &self.node_values[i - 1])
                    / (&self.nodes[i] - &self.nodes[i - 1]),
            );
        }
        values.push(Scalar::zero());
        StepFunction::new(self.nodes.clone(), values).expect("nodes strictly increasing")
    }
}

/// Exact Lebesgue integral of the product `g · h` over `[a, b]`, computed on
/// the common refinement of the two piece systems.
pub fn integrate_step_product(
    g: &StepFunction,
    h: &StepFunction,
    a: &Scalar,
    b: &Scalar,
) -> Result<Scalar> {
    if a > b {
        return Err(Error::contract(format!("empty interval [{a}, {b}]")));
    }
    let mut cuts: Vec<&Scalar> = Vec::new();
    cuts.push(a);
    let mut merged: Vec<&Scalar> = g
        .breakpoints()
        .iter()
        .chain(h.breakpoints().iter())
        .filter(|x| *x > a && *x < b)
        .collect();
    merged.sort();
    merged.dedup();
    cuts.extend(merged);
    cuts.push(b);
    let mut total = Scalar::zero();
    for w in cuts.windows(2) {
        let len = w[1] - w[0];
        if len.is_positive() {
            total += g.eval(w[0]) * h.eval(w[0]) * len;
        }
    }
    Ok(total)
}
