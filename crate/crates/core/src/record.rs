//! Serializable summary of one covering type.

use serde::{Deserialize, Serialize};

use crate::classify::{trace_field, TraceField};
use crate::conditions::{check_sigma_int, Pair};
use crate::covering::{conjugate_classes, genus, is_arithmetic, primitive_dimensions, CoveringType, PairKind};
use crate::error::{Error, Result};
use crate::euler::bmy_check;
use crate::lyapunov::LatticeContext;
use crate::rational::{serde_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub tag: String,
    /// 1-based symmetry set for Sigma-INT.
    pub symmetry_set: Option<Vec<usize>>,
    pub parabolic: Vec<String>,
    pub contracted: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateRecord {
    pub k: u64,
    #[serde(with = "serde_q::vec")]
    pub mu: Vec<Q>,
    pub signature: [u32; 2],
    pub kind: PairKind,
    /// Exponent of the conjugate pair containing `k`, when computed.
    #[serde(with = "serde_q::opt")]
    pub lambda: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerRecord {
    #[serde(with = "serde_q")]
    pub e_orb: Q,
    #[serde(with = "serde_q")]
    pub c1_sq: Q,
    pub bmy: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub input: String,
    pub condition: ConditionRecord,
    pub conjugates: Vec<ConjugateRecord>,
    #[serde(with = "serde_q::vec")]
    pub spectrum: Vec<Q>,
    #[serde(with = "serde_q::opt_vec")]
    pub relative_euler: Option<Vec<Q>>,
    pub euler: Option<EulerRecord>,
    pub trace_field: TraceField,
    pub model: Option<String>,
    pub genus: u64,
    pub dim_p: usize,
    pub dim_u: usize,
    pub arithmetic: Option<bool>,
    /// Whether INT or Sigma-INT holds; spectra are only filled in when it does.
    pub lattice: bool,
}

fn labels(pairs: &[Pair]) -> Vec<String> {
    pairs.iter().map(Pair::label).collect()
}

/// Full analysis. Types failing the lattice condition still produce a record
/// with the conjugate data; everything needing a lattice is left empty.
pub fn analyze(ct: &CoveringType) -> Result<AnalysisRecord> {
    let base = ct.base_weights();
    let report = match check_sigma_int(&base) {
        Ok(r) => Some(r),
        Err(Error::BadWeightSum(_)) => None,
        Err(e) => return Err(e),
    };
    let (dim_p, dim_u) = primitive_dimensions(ct);
    let condition = match &report {
        Some(r) => ConditionRecord {
            tag: r.condition.tag().to_string(),
            symmetry_set: r.condition.symmetry_set().map(|s| s.iter().map(|i| i + 1).collect()),
            parabolic: labels(&r.parabolic_pairs),
            contracted: labels(&r.contracted_pairs),
        },
        None => ConditionRecord { tag: "none".into(), symmetry_set: None, parabolic: vec![], contracted: vec![] },
    };
    let lattice = report.as_ref().is_some_and(|r| r.condition.is_lattice());
    let mut record = AnalysisRecord {
        input: ct.to_string(),
        condition,
        conjugates: Vec::new(),
        spectrum: Vec::new(),
        relative_euler: None,
        euler: None,
        trace_field: trace_field(ct),
        model: report.as_ref().and_then(|r| r.model.as_ref()).map(|m| m.to_string()),
        genus: genus(ct),
        dim_p,
        dim_u,
        arithmetic: is_arithmetic(ct).ok(),
        lattice,
    };
    let spectrum = if lattice { Some(LatticeContext::new(ct)?.spectrum()?) } else { None };
    for cp in conjugate_classes(ct) {
        let lambda = spectrum
            .as_ref()
            .and_then(|s| s.pairs.iter().find(|p| p.reps == cp.reps))
            .and_then(|p| p.lambda.clone());
        for w in [&cp.weights.0, &cp.weights.1] {
            record.conjugates.push(ConjugateRecord {
                k: w.k,
                mu: w.mu.clone(),
                signature: [w.signature.0, w.signature.1],
                kind: cp.kind,
                lambda: lambda.clone(),
            });
            if cp.reps.0 == cp.reps.1 {
                break;
            }
        }
    }
    record.conjugates.sort_by_key(|c| c.k);
    if let Some(s) = spectrum {
        record.spectrum = s.distinct_nonnegative;
        record.relative_euler = s.relative_euler;
    }
    if ct.n_points() == 5 {
        match bmy_check(&base) {
            Ok(e) => record.euler = Some(EulerRecord { e_orb: e.e_orb, c1_sq: e.c1_sq, bmy: e.bmy_holds }),
            Err(Error::PreconditionFailed(_) | Error::BadWeightSum(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(record)
}
