//! Constructors for the built-in measure and step-function families.
//!
//! Each family is indexed by `n` and produces exact data. The families cover
//! the standard counterexample zoo for convergence of signed measures:
//! escaping mass, the typewriter sweep and its spreading variant, a dipole
//! with exploding total variation, Cantor-type and positive-measure
//! (Smith-Volterra-Cantor) interval stages, and an alternating pair of point
//! masses.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measure::{Atom, SignedMeasure};
use crate::metric;
use crate::scalar::Scalar;
use crate::stepfn::StepFunction;

/// Stable identifiers for the built-in families.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum FamilyId {
    EscapeMass,
    Typewriter,
    BlowupDipole,
    SpreadingTypewriter,
    CantorStage,
    SvcStage,
    AlternatingDirac,
}

impl FamilyId {
    pub const ALL: [FamilyId; 7] = [
        FamilyId::EscapeMass,
        FamilyId::Typewriter,
        FamilyId::BlowupDipole,
        FamilyId::SpreadingTypewriter,
        FamilyId::CantorStage,
        FamilyId::SvcStage,
        FamilyId::AlternatingDirac,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::EscapeMass => "escape_mass",
            FamilyId::Typewriter => "typewriter",
            FamilyId::BlowupDipole => "blowup_dipole",
            FamilyId::SpreadingTypewriter => "spreading_typewriter",
            FamilyId::CantorStage => "cantor_stage",
            FamilyId::SvcStage => "svc_stage",
            FamilyId::AlternatingDirac => "alternating_dirac",
        }
    }

    /// Whether the family natively generates step functions rather than
    /// measures. Such terms map to measures through their jumps.
    pub fn generates_step_functions(&self) -> bool {
        matches!(self, FamilyId::CantorStage | FamilyId::SvcStage)
    }

    /// The `n`-th term as a measure. Step-function families are converted via
    /// the bijection with distribution functions.
    pub fn measure_term(&self, n: u32) -> Result<SignedMeasure> {
        match self {
            FamilyId::EscapeMass => escape_mass(n),
            FamilyId::Typewriter => typewriter(n),
            FamilyId::BlowupDipole => blowup_dipole(n),
            FamilyId::SpreadingTypewriter => spreading_typewriter(n),
            FamilyId::CantorStage => {
                SignedMeasure::from_cdf(&cantor_stage(n)).map_err(|e| {
                    Error::Domain(format!("cantor stage is a distribution function: {e}"))
                })
            }
            FamilyId::SvcStage => SignedMeasure::from_cdf(&svc_stage(n))
                .map_err(|e| Error::Domain(format!("svc stage is a distribution function: {e}"))),
            FamilyId::AlternatingDirac => alternating_dirac(n),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .iter()
            .copied()
            .find(|fam| fam.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

fn require_positive(n: u32, family: &str) -> Result<()> {
    if n < 1 {
        Err(Error::contract(format!("{family} needs n >= 1, got {n}")))
    } else {
        Ok(())
    }
}

/// Mass `n` at position `-n`: converges vaguely to zero while its total
/// variation escapes to infinity.
pub fn escape_mass(n: u32) -> Result<SignedMeasure> {
    require_positive(n, "escape_mass")?;
    Ok(SignedMeasure::new(vec![Atom {
        x: -Scalar::from(n),
        w: Scalar::from(n),
    }]))
}

/// Exponent `k` with `2^k <= n < 2^(k+1)`.
fn dyadic_level(n: u32) -> u32 {
    31 - n.leading_zeros()
}

/// Dyadic endpoints of the `n`-th typewriter interval within `[0, 1)`.
fn typewriter_endpoints(n: u32) -> (Scalar, Scalar, u32) {
    let k = dyadic_level(n);
    let denom = Scalar::pow2(k as i32);
    let a = (Scalar::from(n) - &denom) / &denom;
    let b = (Scalar::from(n + 1) - &denom) / &denom;
    (a, b, k)
}

/// The typewriter dipole `delta_a - delta_b` whose interval of width `2^-k`
/// sweeps across `[0, 1)` as `n` runs through each dyadic generation.
pub fn typewriter(n: u32) -> Result<SignedMeasure> {
    require_positive(n, "typewriter")?;
    let (a, b, _) = typewriter_endpoints(n);
    Ok(SignedMeasure::new(vec![
        Atom {
            x: a,
            w: Scalar::one(),
        },
        Atom {
            x: b,
            w: -Scalar::one(),
        },
    ]))
}

/// `n^2 * (delta_0 - delta_{1/n})`: the shrinking dipole whose distribution
/// function collapses pointwise while the variation on `[-1, 1]` explodes.
pub fn blowup_dipole(n: u32) -> Result<SignedMeasure> {
    require_positive(n, "blowup_dipole")?;
    let n2 = Scalar::from(n) * Scalar::from(n);
    Ok(SignedMeasure::new(vec![
        Atom {
            x: Scalar::zero(),
            w: n2.clone(),
        },
        Atom {
            x: Scalar::from_int(1) / Scalar::from(n),
            w: -n2,
        },
    ]))
}

/// The typewriter variant with endpoints scaled by the dyadic level, so the
/// sweep range grows without bound and the sequence is nowhere tight. For
/// `n = 1` both endpoints coincide and the atoms cancel.
pub fn spreading_typewriter(n: u32) -> Result<SignedMeasure> {
    require_positive(n, "spreading_typewriter")?;
    let (a, b, k) = typewriter_endpoints(n);
    let scale = Scalar::from(k);
    Ok(SignedMeasure::new(vec![
        Atom {
            x: &scale * &a,
            w: Scalar::one(),
        },
        Atom {
            x: &scale * &b,
            w: -Scalar::one(),
        },
    ]))
}

/// The `2^n` half-open intervals of the `n`-th middle-thirds stage within
/// `[0, 1)`; total length `(2/3)^n`.
pub fn cantor_intervals(n: u32) -> Vec<(Scalar, Scalar)> {
    let mut intervals = vec![(Scalar::zero(), Scalar::one())];
    let three = Scalar::from_int(3);
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * intervals.len());
        for (a, b) in intervals {
            let w = (&b - &a) / &three;
            next.push((a.clone(), &a + &w));
            next.push((&b - &w, b));
        }
        intervals = next;
    }
    intervals
}

/// Indicator step function of the `n`-th middle-thirds stage.
pub fn cantor_stage(n: u32) -> StepFunction {
    StepFunction::indicator_union(&cantor_intervals(n))
        .expect("stage intervals are sorted and disjoint")
}

/// The `2^n` intervals of the `n`-th Smith-Volterra-Cantor stage: stage
/// `i` removes a middle piece of length `4^-i` from each interval of the
/// previous stage, so the total length stays `1/2 + 2^-(n+1)`.
///
/// The construction's intervals are left-open right-closed; they are
/// represented here half-open to the right, which changes the indicator only
/// on the finite set of endpoints, a Lebesgue-null set that no quantity in
/// this crate can see.
pub fn svc_intervals(n: u32) -> Vec<(Scalar, Scalar)> {
    let mut intervals = vec![(Scalar::zero(), Scalar::one())];
    let two = Scalar::from_int(2);
    let four = Scalar::from_int(4);
    let mut removed = Scalar::one();
    for _ in 0..n {
        removed = removed / four.clone();
        let mut next = Vec::with_capacity(2 * intervals.len());
        for (a, b) in intervals {
            let len = &b - &a;
            let half_keep = (&len - &removed) / &two;
            next.push((a.clone(), &a + &half_keep));
            next.push((&b - &half_keep, b));
        }
        intervals = next;
    }
    intervals
}

/// Indicator step function of the `n`-th Smith-Volterra-Cantor stage.
pub fn svc_stage(n: u32) -> StepFunction {
    StepFunction::indicator_union(&svc_intervals(n))
        .expect("stage intervals are sorted and disjoint")
}

/// `delta_0` for even `n`, `delta_1` for odd `n`: bounded in variation but
/// with subsequences converging to different limits.
pub fn alternating_dirac(n: u32) -> Result<SignedMeasure> {
    require_positive(n, "alternating_dirac")?;
    Ok(SignedMeasure::dirac(if n.is_multiple_of(2) {
        Scalar::zero()
    } else {
        Scalar::one()
    }))
}

/// A rational step function within distance `delta` of `f`, witnessing the
/// separability of the metric space: breakpoints snap to a dyadic grid and
/// values quantize to dyadic multiples.
///
/// The mesh shrinks with the breakpoint count so the set where the snap
/// disagrees with `f` has measure at most `delta/4`; off that set the value
/// quantization error is at most `delta/8`. The returned function therefore
/// satisfies `almost_basic_distance(f, g, delta/4).hi <= delta`. Inputs whose
/// breakpoints and values already sit on the grids come back unchanged.
pub fn dense_approximant(f: &StepFunction, delta: &Scalar) -> Result<StepFunction> {
    if !delta.is_positive() {
        return Err(Error::contract(format!("delta must be > 0, got {delta}")));
    }
    let m = f.breakpoints().len();
    if m == 0 {
        return Ok(f.clone());
    }
    let four = Scalar::from_int(4);
    let quantum = (delta / &four).pow2_floor();
    let mesh = (delta / &(four * Scalar::from_int(m as i64))).pow2_floor();

    let mut bps: Vec<Scalar> = Vec::with_capacity(m);
    let mut vals: Vec<Scalar> = Vec::with_capacity(m + 1);
    vals.push(f.values()[0].round_to_multiple(&quantum));
    for i in 0..m {
        let nb = f.breakpoints()[i].round_to_multiple(&mesh);
        let qv = f.values()[i + 1].round_to_multiple(&quantum);
        if bps.last() == Some(&nb) {
            // colliding breakpoints: the later piece wins
            *vals.last_mut().expect("nonempty") = qv;
        } else {
            bps.push(nb);
            vals.push(qv);
        }
    }
    StepFunction::new(bps, vals)
}

/// Verifies `dense_approximant`'s distance contract and returns the bracket.
pub fn dense_approximant_checked(
    f: &StepFunction,
    delta: &Scalar,
) -> Result<(StepFunction, metric::DistanceBracket)> {
    let g = dense_approximant(f, delta)?;
    let bracket = metric::almost_basic_distance(f, &g, &(delta / &Scalar::from_int(4)))?;
    Ok((g, bracket))
}
