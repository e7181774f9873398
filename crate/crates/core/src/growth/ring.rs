use std::fmt;
use std::str::FromStr;

use super::order::{Dominant, GrowthOrder};
use super::GrowthError;

/// The chain `F ⊂ L_ρ ⊂ F_ρ ⊂ M_ρ ⊂ E_ρ ⊂ *C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RingFamilyId {
    F,
    LRho,
    FRho,
    MRho,
    ERho,
    StarC,
}

impl RingFamilyId {
    pub const CHAIN: [RingFamilyId; 6] = [
        RingFamilyId::F,
        RingFamilyId::LRho,
        RingFamilyId::FRho,
        RingFamilyId::MRho,
        RingFamilyId::ERho,
        RingFamilyId::StarC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RingFamilyId::F => "F",
            RingFamilyId::LRho => "L_rho",
            RingFamilyId::FRho => "F_rho",
            RingFamilyId::MRho => "M_rho",
            RingFamilyId::ERho => "E_rho",
            RingFamilyId::StarC => "StarC",
        }
    }

    pub fn ideal_name(self) -> &'static str {
        match self {
            RingFamilyId::F => "I",
            RingFamilyId::LRho => "L_rho0",
            RingFamilyId::FRho => "I_rho",
            RingFamilyId::MRho => "N_rho",
            RingFamilyId::ERho => "E_rho0",
            RingFamilyId::StarC => "{0}",
        }
    }
}

impl fmt::Display for RingFamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RingFamilyId {
    type Err = GrowthError;

    fn from_str(s: &str) -> Result<Self, GrowthError> {
        let key = s.trim().to_ascii_lowercase().replace(['_', '-'], "");
        Ok(match key.as_str() {
            "f" => RingFamilyId::F,
            "lrho" | "l" => RingFamilyId::LRho,
            "frho" => RingFamilyId::FRho,
            "mrho" | "m" => RingFamilyId::MRho,
            "erho" | "e" => RingFamilyId::ERho,
            "starc" | "*c" | "c" => RingFamilyId::StarC,
            _ => {
                return Err(GrowthError::Parse {
                    column: 1,
                    message: format!("unknown ring family '{s}'"),
                })
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    InIdeal,
    InRingNotIdeal,
    Outside,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::InIdeal => "InIdeal",
            Membership::InRingNotIdeal => "InRingNotIdeal",
            Membership::Outside => "Outside",
        })
    }
}

/// Decides membership of a magnitude of scale `g`.
///
/// Only the dominant factor matters: each ring of the chain is generated by
/// a tower family, and a product is in the ring or ideal exactly when its
/// dominant factor is. Standard iterated logarithms are treated as members
/// of `L_ρ`, so on this vocabulary `L_ρ` and `F_ρ` coincide and the ideals
/// `E_{ρ,0}` and `{0}` are never reached by a nonzero scale.
pub fn classify_ring(g: &GrowthOrder, r: RingFamilyId) -> Membership {
    use Dominant::*;
    use Membership::*;
    let d = g.dominant();
    match r {
        RingFamilyId::F => match g.direction() {
            -1 => InIdeal,
            0 => InRingNotIdeal,
            _ => Outside,
        },
        RingFamilyId::LRho | RingFamilyId::FRho => match d {
            Rho { growing: false } | Exp { growing: false } => InIdeal,
            Unit | Log { .. } => InRingNotIdeal,
            Rho { growing: true } | Exp { growing: true } => Outside,
        },
        RingFamilyId::MRho => match d {
            Exp { growing: false } => InIdeal,
            Unit | Log { .. } | Rho { .. } => InRingNotIdeal,
            Exp { growing: true } => Outside,
        },
        RingFamilyId::ERho | RingFamilyId::StarC => InRingNotIdeal,
    }
}

/// Smallest family of the chain containing `g`.
pub fn chain_position(g: &GrowthOrder) -> RingFamilyId {
    RingFamilyId::CHAIN
        .into_iter()
        .find(|r| classify_ring(g, *r) != Membership::Outside)
        .unwrap_or(RingFamilyId::StarC)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GrowthOrder {
        s.parse().unwrap()
    }

    #[test]
    fn named_examples() {
        assert_eq!(
            classify_ring(&g("log1"), RingFamilyId::FRho),
            Membership::InRingNotIdeal
        );
        assert_eq!(
            classify_ring(&g("rho"), RingFamilyId::MRho),
            Membership::InRingNotIdeal
        );
        assert_eq!(
            classify_ring(&g("exp1"), RingFamilyId::MRho),
            Membership::Outside
        );
        assert_eq!(
            classify_ring(&g("exp1"), RingFamilyId::ERho),
            Membership::InRingNotIdeal
        );
        assert_eq!(chain_position(&GrowthOrder::unit()), RingFamilyId::F);
        assert_eq!(chain_position(&g("log3")), RingFamilyId::LRho);
        assert_eq!(chain_position(&g("rho^(-5)")), RingFamilyId::MRho);
        assert_eq!(chain_position(&g("exp1")), RingFamilyId::ERho);
    }

    #[test]
    fn ring_names_parse() {
        for r in RingFamilyId::CHAIN {
            assert_eq!(r.name().parse::<RingFamilyId>().unwrap(), r);
        }
    }
}
