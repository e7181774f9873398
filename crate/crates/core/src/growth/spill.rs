//! Spilling principles on threshold sets `{z : |z| ≤ b}` and `{z : |z| < b}`.
//!
//! A threshold set is a ball, hence downward closed in modulus. Reading
//! "arbitrarily large in X" as cofinal in X and "arbitrarily small in X" as
//! coinitial in X, each hypothesis reduces to a classification of `b`:
//!
//! * overflow of M and underflow of `*C∖M` hold iff `b ∉ M`;
//! * underflow of `M∖M₀` and overflow of `M₀` hold iff `b ∉ M₀`.
//!
//! Witnesses are given at scale level: constant factors never change a
//! classification, and for a strict bound the witness `b/2` shares the scale
//! of `b`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;

use super::order::{cmp_growth, GrowthOrder};
use super::ring::{classify_ring, Membership, RingFamilyId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    AtMost,
    Less,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSet {
    pub bound: GrowthOrder,
    pub kind: BoundKind,
}

impl ThresholdSet {
    pub fn at_most(bound: GrowthOrder) -> Self {
        ThresholdSet {
            bound,
            kind: BoundKind::AtMost,
        }
    }

    pub fn less(bound: GrowthOrder) -> Self {
        ThresholdSet {
            bound,
            kind: BoundKind::Less,
        }
    }

    /// Whether some number of scale `w` lies in the set.
    pub fn contains_scale(&self, w: &GrowthOrder) -> bool {
        // a strict bound still admits b/2, which has the scale of b
        cmp_growth(w, &self.bound) != Ordering::Greater
    }
}

impl fmt::Display for ThresholdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            BoundKind::AtMost => "<=",
            BoundKind::Less => "<",
        };
        write!(f, "{{|z| {} {}}}", op, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Scale(GrowthOrder),
    /// The number 0, the only element of the ideal of `*C`.
    Zero,
    /// The required numbers exist but none has a scale in the tower vocabulary.
    BeyondVocabulary,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Scale(g) => write!(f, "{g}"),
            Witness::Zero => f.write_str("0"),
            Witness::BeyondVocabulary => f.write_str("(outside the tower vocabulary)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Principle {
    OverflowOfRing,
    UnderflowOfRingMinusIdeal,
    OverflowOfIdeal,
    UnderflowOfComplement,
}

impl Principle {
    pub const ALL: [Principle; 4] = [
        Principle::OverflowOfRing,
        Principle::UnderflowOfRingMinusIdeal,
        Principle::OverflowOfIdeal,
        Principle::UnderflowOfComplement,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Principle::OverflowOfRing => "overflow of M",
            Principle::UnderflowOfRingMinusIdeal => "underflow of M\\M0",
            Principle::OverflowOfIdeal => "overflow of M0",
            Principle::UnderflowOfComplement => "underflow of *C\\M",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// The hypothesis fails on this set.
    NotApplicable,
    /// The hypothesis holds; `verified` records whether the witness was
    /// checked to lie in the set and in the required region.
    Holds { witness: Witness, verified: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpillReport {
    pub set: ThresholdSet,
    pub ring: RingFamilyId,
    pub bound_class: Membership,
    pub outcomes: Vec<(Principle, Outcome)>,
}

impl SpillReport {
    pub fn outcome(&self, p: Principle) -> &Outcome {
        &self
            .outcomes
            .iter()
            .find(|(q, _)| *q == p)
            .expect("all principles reported")
            .1
    }

    pub fn all_verified(&self) -> bool {
        self.outcomes.iter().all(|(_, o)| {
            !matches!(
                o,
                Outcome::Holds {
                    verified: false,
                    ..
                }
            )
        })
    }
}

impl fmt::Display for SpillReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "A = {}, M = {}: bound is {}",
            self.set, self.ring, self.bound_class
        )?;
        for (p, o) in &self.outcomes {
            match o {
                Outcome::NotApplicable => {
                    writeln!(f, "  {}: hypothesis fails (not applicable)", p.label())?
                }
                Outcome::Holds { witness, verified } => writeln!(
                    f,
                    "  {}: hypothesis holds, witness {} {}",
                    p.label(),
                    witness,
                    if *verified {
                        "verified"
                    } else {
                        "NOT verified"
                    }
                )?,
            }
        }
        Ok(())
    }
}

/// A scale inside the ideal of `r`, when the vocabulary has one.
fn ideal_representative(r: RingFamilyId) -> Witness {
    match r {
        RingFamilyId::F | RingFamilyId::LRho | RingFamilyId::FRho => {
            Witness::Scale(GrowthOrder::rho_pow(Rational64::from_integer(1)))
        }
        RingFamilyId::MRho => Witness::Scale(GrowthOrder::exp(1).inverse()),
        RingFamilyId::ERho => Witness::BeyondVocabulary,
        RingFamilyId::StarC => Witness::Zero,
    }
}

pub fn spill_check(set: &ThresholdSet, r: RingFamilyId) -> SpillReport {
    let class = classify_ring(&set.bound, r);
    let outside = class == Membership::Outside;
    let beyond_ideal = class != Membership::InIdeal;
    let unit = GrowthOrder::unit();

    let check = |w: &Witness, wanted: &dyn Fn(Membership) -> bool| match w {
        Witness::Scale(g) => set.contains_scale(g) && wanted(classify_ring(g, r)),
        Witness::Zero => true,
        // the existence claim rests on the theorem alone
        Witness::BeyondVocabulary => false,
    };

    let mut outcomes = Vec::new();
    for p in Principle::ALL {
        let (applies, witness, wanted): (bool, Witness, &dyn Fn(Membership) -> bool) = match p {
            Principle::OverflowOfRing => (
                outside,
                Witness::Scale(set.bound.pow(Rational64::new(1, 2))),
                &|m| m == Membership::Outside,
            ),
            Principle::UnderflowOfRingMinusIdeal => (beyond_ideal, ideal_representative(r), &|m| {
                m == Membership::InIdeal
            }),
            Principle::OverflowOfIdeal => (
                beyond_ideal,
                Witness::Scale(if class == Membership::InRingNotIdeal {
                    set.bound.clone()
                } else {
                    unit.clone()
                }),
                &|m| m == Membership::InRingNotIdeal,
            ),
            Principle::UnderflowOfComplement => (outside, Witness::Scale(unit.clone()), &|m| {
                m == Membership::InRingNotIdeal
            }),
        };
        let outcome = if applies {
            let verified = check(&witness, wanted);
            Outcome::Holds { witness, verified }
        } else {
            Outcome::NotApplicable
        };
        outcomes.push((p, outcome));
    }
    SpillReport {
        set: set.clone(),
        ring: r,
        bound_class: class,
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GrowthOrder {
        s.parse().unwrap()
    }

    #[test]
    fn large_bound_overflows_finite_numbers() {
        let rep = spill_check(&ThresholdSet::at_most(g("rho^(-1)")), RingFamilyId::F);
        match rep.outcome(Principle::OverflowOfRing) {
            Outcome::Holds { witness, verified } => {
                assert_eq!(*witness, Witness::Scale(g("rho^(-1/2)")));
                assert!(verified);
            }
            other => panic!("{other:?}"),
        }
        assert!(rep.all_verified());
    }

    #[test]
    fn unit_ball_hits_finite_non_infinitesimals() {
        let rep = spill_check(&ThresholdSet::at_most(GrowthOrder::unit()), RingFamilyId::F);
        assert_eq!(
            *rep.outcome(Principle::OverflowOfIdeal),
            Outcome::Holds {
                witness: Witness::Scale(GrowthOrder::unit()),
                verified: true
            }
        );
        assert_eq!(
            *rep.outcome(Principle::OverflowOfRing),
            Outcome::NotApplicable
        );
    }

    #[test]
    fn small_bound_is_not_applicable_for_overflow() {
        let rep = spill_check(&ThresholdSet::less(g("rho")), RingFamilyId::MRho);
        assert_eq!(
            *rep.outcome(Principle::OverflowOfRing),
            Outcome::NotApplicable
        );
        assert_eq!(
            *rep.outcome(Principle::UnderflowOfComplement),
            Outcome::NotApplicable
        );
        assert!(rep.all_verified());
    }

    #[test]
    fn exponential_ring_needs_numbers_beyond_the_vocabulary() {
        let rep = spill_check(&ThresholdSet::at_most(g("exp2")), RingFamilyId::ERho);
        assert_eq!(
            *rep.outcome(Principle::UnderflowOfRingMinusIdeal),
            Outcome::Holds {
                witness: Witness::BeyondVocabulary,
                verified: false
            }
        );
    }
}
