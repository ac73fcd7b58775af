//! Recomputes reference rows and reports cell-level differences.

use serde::Serialize;

use crate::conditions::Pair;
use crate::covering::{genus, primitive_dimensions, CoveringType};
use crate::dataset::{Dataset, ReferenceRow};
use crate::error::Result;
use crate::lyapunov::LatticeContext;
use crate::par::{self, ExecMode};
use crate::rational::{fmt_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowValues {
    pub condition: String,
    pub model: String,
    pub parabolic: Vec<String>,
    pub genus: u64,
    pub dim_p: usize,
    pub dim_u: usize,
    pub spectrum: Vec<String>,
    pub relative_euler: Option<Vec<String>>,
}

fn fmt_set(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

pub fn recompute(ct: &CoveringType) -> Result<RowValues> {
    let ctx = LatticeContext::new(ct)?;
    let spec = ctx.spectrum()?;
    let (dim_p, dim_u) = primitive_dimensions(ct);
    Ok(RowValues {
        condition: ctx.report.condition.tag().to_string(),
        model: ctx.report.model.as_ref().map(|m| m.to_string()).unwrap_or_else(|| ctx.realization.name.clone()),
        parabolic: ctx.report.parabolic_pairs.iter().map(Pair::label).collect(),
        genus: genus(ct),
        dim_p,
        dim_u,
        spectrum: fmt_set(&spec.distinct_nonnegative),
        relative_euler: spec.relative_euler.as_deref().map(fmt_set),
    })
}

fn expected(row: &ReferenceRow) -> RowValues {
    RowValues {
        condition: row.condition.clone(),
        model: row.model.clone(),
        parabolic: row.parabolic.clone(),
        genus: row.genus,
        dim_p: row.dim_p,
        dim_u: row.dim_u,
        spectrum: fmt_set(&row.spectrum),
        relative_euler: row.relative_euler.as_deref().map(fmt_set),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellMismatch {
    pub row: usize,
    pub column: &'static str,
    pub expected: String,
    pub computed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowOutcome {
    pub index: usize,
    pub input: String,
    pub computed: Option<RowValues>,
    pub error: Option<String>,
    pub mismatches: Vec<CellMismatch>,
}

impl RowOutcome {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.mismatches.is_empty()
    }
}

fn show<T: std::fmt::Debug>(x: &T) -> String {
    format!("{x:?}")
}

fn diff(index: usize, e: &RowValues, c: &RowValues) -> Vec<CellMismatch> {
    let cells: [(&'static str, String, String); 8] = [
        ("condition", e.condition.clone(), c.condition.clone()),
        ("model", e.model.clone(), c.model.clone()),
        ("parabolic", show(&e.parabolic), show(&c.parabolic)),
        ("genus", e.genus.to_string(), c.genus.to_string()),
        ("dim_p", e.dim_p.to_string(), c.dim_p.to_string()),
        ("dim_u", e.dim_u.to_string(), c.dim_u.to_string()),
        ("spectrum", show(&e.spectrum), show(&c.spectrum)),
        ("relative_euler", show(&e.relative_euler), show(&c.relative_euler)),
    ];
    cells
        .into_iter()
        .filter(|(_, a, b)| a != b)
        .map(|(column, expected, computed)| CellMismatch { row: index, column, expected, computed })
        .collect()
}

pub fn reproduce_with(mode: ExecMode, ds: &Dataset) -> Vec<RowOutcome> {
    par::map(mode, ds.rows().iter().collect(), |row| {
        let input = format!("{};{}", row.d, row.a.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
        match row.covering_type().and_then(|ct| recompute(&ct)) {
            Ok(computed) => RowOutcome {
                index: row.index,
                input,
                mismatches: diff(row.index, &expected(row), &computed),
                computed: Some(computed),
                error: None,
            },
            Err(e) => RowOutcome { index: row.index, input, computed: None, error: Some(e.to_string()), mismatches: vec![] },
        }
    })
}

pub fn reproduce(ds: &Dataset) -> Vec<RowOutcome> {
    reproduce_with(ExecMode::default(), ds)
}
