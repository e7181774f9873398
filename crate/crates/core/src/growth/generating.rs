use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;

use super::order::{cmp_growth, GrowthOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    Decreasing,
    Increasing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratingFailure {
    NotInfinitelyLarge {
        n: u32,
    },
    NotMonotone {
        n: u32,
    },
    /// No `m` up to the search bound doubles against term `n`.
    Doubling {
        n: u32,
        searched: u32,
    },
    /// No `m` up to the search bound squares against term `n`.
    Squaring {
        n: u32,
        searched: u32,
    },
}

impl fmt::Display for GeneratingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratingFailure::NotInfinitelyLarge { n } => {
                write!(f, "term {n} is not infinitely large")
            }
            GeneratingFailure::NotMonotone { n } => {
                write!(f, "terms {n} and {} are out of order", n + 1)
            }
            GeneratingFailure::Doubling { n, searched } => {
                write!(
                    f,
                    "no doubling witness for n = {n} (searched m ≤ {searched})"
                )
            }
            GeneratingFailure::Squaring { n, searched } => {
                write!(
                    f,
                    "no squaring witness for n = {n} (searched m ≤ {searched})"
                )
            }
        }
    }
}

/// Witnesses `(n, m_a, m_b)` for the doubling and squaring conditions, or
/// the first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub kind: SequenceKind,
    pub witnesses: Vec<(u32, u32, u32)>,
    pub failure: Option<GeneratingFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `n = 1..=n_max`. Witnesses `m` are searched up to `4·n_max + 4`,
/// so the family is evaluated past `n_max`.
pub fn validate_generating(
    kind: SequenceKind,
    family: impl Fn(u32) -> GrowthOrder,
    n_max: u32,
) -> ValidationReport {
    let bound = 4 * n_max + 4;
    let terms: Vec<GrowthOrder> = (1..=bound).map(&family).collect();
    let at = |n: u32| &terms[(n - 1) as usize];
    let two = Rational64::from_integer(2);
    let fail = |failure| ValidationReport {
        kind,
        witnesses: Vec::new(),
        failure: Some(failure),
    };

    let mut witnesses = Vec::new();
    for n in 1..=n_max {
        if !at(n).is_infinitely_large() {
            return fail(GeneratingFailure::NotInfinitelyLarge { n });
        }
        let step = cmp_growth(at(n + 1), at(n));
        let monotone = match kind {
            SequenceKind::Decreasing => step != Ordering::Greater,
            SequenceKind::Increasing => step != Ordering::Less,
        };
        if !monotone {
            return fail(GeneratingFailure::NotMonotone { n });
        }
        // 2x ≤ y for infinitely large scales requires x strictly below y
        let doubling = (1..=bound).find(|&m| match kind {
            SequenceKind::Decreasing => cmp_growth(at(m), at(n)) == Ordering::Less,
            SequenceKind::Increasing => cmp_growth(at(n), at(m)) == Ordering::Less,
        });
        let squaring = (1..=bound).find(|&m| match kind {
            SequenceKind::Decreasing => cmp_growth(&at(m).pow(two), at(n)) != Ordering::Greater,
            SequenceKind::Increasing => cmp_growth(&at(n).pow(two), at(m)) != Ordering::Greater,
        });
        match (doubling, squaring) {
            (Some(a), Some(b)) => witnesses.push((n, a, b)),
            (None, _) => return fail(GeneratingFailure::Doubling { n, searched: bound }),
            (_, None) => return fail(GeneratingFailure::Squaring { n, searched: bound }),
        }
    }
    ValidationReport {
        kind,
        witnesses,
        failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_family_squares_at_double_index() {
        let rep = validate_generating(
            SequenceKind::Decreasing,
            |n| GrowthOrder::rho_pow(Rational64::new(-1, n as i64)),
            8,
        );
        assert!(rep.is_valid());
        for (n, _, m) in rep.witnesses {
            assert!(m <= 2 * n);
            assert_eq!(
                GrowthOrder::rho_pow(Rational64::new(-1, 2 * n as i64))
                    .pow(Rational64::from_integer(2)),
                GrowthOrder::rho_pow(Rational64::new(-1, n as i64))
            );
        }
    }

    #[test]
    fn constants_are_rejected() {
        let rep = validate_generating(SequenceKind::Decreasing, |_| GrowthOrder::unit(), 4);
        assert_eq!(
            rep.failure,
            Some(GeneratingFailure::NotInfinitelyLarge { n: 1 })
        );
    }

    #[test]
    fn powers_of_inverse_rho_increase() {
        let rep = validate_generating(
            SequenceKind::Increasing,
            |n| GrowthOrder::rho_pow(Rational64::from_integer(-(n as i64))),
            8,
        );
        assert!(rep.is_valid());
    }
}
