//! Commensurability invariants and invariant-equality classes.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::covering::CoveringType;
use crate::error::{Error, Result};
use crate::lyapunov::LatticeContext;
use crate::par::{self, ExecMode};
use crate::rational::Q;

/// The real cyclotomic field `Q(cos 2 pi / d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TraceField {
    /// Canonical index, never `2 mod 4`.
    pub canonical_d: u64,
    pub degree: u64,
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// `Q(cos 2 pi / 2m) = Q(cos 2 pi / m)` for odd `m`; the odd index is kept.
pub fn trace_field_of_degree(d: u64) -> TraceField {
    let canonical_d = if d % 4 == 2 { d / 2 } else { d };
    let degree = if canonical_d <= 2 { 1 } else { totient(canonical_d) / 2 };
    TraceField { canonical_d, degree }
}

pub fn trace_field(ct: &CoveringType) -> TraceField {
    trace_field_of_degree(ct.d())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommensurabilityInvariant {
    pub trace_field: TraceField,
    pub spectrum: Vec<Q>,
    pub relative_euler_set: Option<Vec<Q>>,
    /// No parabolic pair among the base weights.
    pub cocompact: bool,
}

pub fn invariants(ct: &CoveringType) -> Result<CommensurabilityInvariant> {
    let ctx = LatticeContext::new(ct)?;
    let spec = ctx.spectrum()?;
    Ok(CommensurabilityInvariant {
        trace_field: trace_field(ct),
        spectrum: spec.distinct_nonnegative,
        relative_euler_set: spec.relative_euler,
        cocompact: ctx.report.parabolic_pairs.is_empty(),
    })
}

/// Groups indices of `cts` by equal invariants. Each class is sorted and
/// classes are ordered by their smallest member.
pub fn partition_with(mode: ExecMode, cts: &[CoveringType]) -> Result<Vec<Vec<usize>>> {
    let invs = par::map(mode, cts.iter().collect(), invariants)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(group(&invs))
}

pub fn partition(cts: &[CoveringType]) -> Result<Vec<Vec<usize>>> {
    partition_with(ExecMode::default(), cts)
}

fn group(invs: &[CommensurabilityInvariant]) -> Vec<Vec<usize>> {
    let mut by_inv: BTreeMap<&CommensurabilityInvariant, Vec<usize>> = BTreeMap::new();
    for (i, inv) in invs.iter().enumerate() {
        by_inv.entry(inv).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = by_inv.into_values().collect();
    classes.sort();
    classes
}

/// As [`partition`], additionally requiring each known-commensurable pair
/// `(i, j)` (0-based) to land in one class.
pub fn partition_checked(cts: &[CoveringType], known: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let classes = partition(cts)?;
    let class_of = |i: usize| classes.iter().position(|c| c.contains(&i));
    for &(i, j) in known {
        if class_of(i) != class_of(j) {
            return Err(Error::InconsistentKnownEdges(i, j));
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::validate_type;
    use crate::rational::{q, qi};

    fn ct(d: u64, a: &[u64]) -> CoveringType {
        validate_type(d, a).unwrap()
    }

    #[test]
    fn trace_fields() {
        assert_eq!(trace_field_of_degree(15), trace_field_of_degree(30));
        assert_ne!(trace_field_of_degree(12), trace_field_of_degree(18));
        assert_eq!(trace_field_of_degree(1).degree, 1);
        assert_eq!(trace_field_of_degree(2).degree, 1);
        assert_eq!(trace_field_of_degree(42), TraceField { canonical_d: 21, degree: 6 });
        assert_eq!(trace_field_of_degree(12).degree, 2);
        for d in 1..200 {
            assert_ne!(trace_field_of_degree(d).canonical_d % 4, 2);
        }
    }

    #[test]
    fn row_invariants() {
        let two = invariants(&ct(12, &[3, 3, 5, 6, 7])).unwrap();
        assert_eq!(two.spectrum, vec![qi(1), q(5, 17), qi(0)]);
        assert_eq!(two.relative_euler_set, Some(vec![qi(1), q(1, 17)]));
        assert!(!two.cocompact);
        let one = invariants(&ct(12, &[3, 3, 3, 7, 8])).unwrap();
        assert_eq!(one.spectrum, vec![qi(1), q(5, 13), qi(0)]);
        assert!(one.cocompact);
        assert_eq!(
            invariants(&ct(15, &[4, 6, 6, 6, 8])).unwrap(),
            invariants(&ct(30, &[5, 5, 5, 22, 23])).unwrap()
        );
    }

    #[test]
    fn small_partitions() {
        assert_eq!(partition(&[ct(12, &[3, 3, 5, 6, 7])]).unwrap(), vec![vec![0]]);
        let rows = [ct(20, &[5, 5, 5, 11, 14]), ct(20, &[6, 6, 9, 9, 10]), ct(20, &[6, 6, 6, 9, 13])];
        assert_eq!(partition(&rows).unwrap(), vec![vec![0, 1], vec![2]]);
        assert!(matches!(
            partition_checked(&rows, &[(0, 2)]),
            Err(Error::InconsistentKnownEdges(0, 2))
        ));
    }
}
