//! The builtin reference rows, shipped as `data/reference_rows.toml`.

use serde::{Deserialize, Serialize};

use crate::covering::{validate_type, CoveringType};
use crate::error::{Error, Result};
use crate::rational::{serde_q, Q};

const BUILTIN: &str = include_str!("../data/reference_rows.toml");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub index: usize,
    pub d: u64,
    pub a: Vec<u64>,
    pub condition: String,
    pub model: String,
    #[serde(default)]
    pub parabolic: Vec<String>,
    pub genus: u64,
    pub dim_p: usize,
    pub dim_u: usize,
    #[serde(with = "serde_q::vec")]
    pub spectrum: Vec<Q>,
    #[serde(default, with = "serde_q::opt_vec", skip_serializing_if = "Option::is_none")]
    pub relative_euler: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comm_to: Option<usize>,
}

impl ReferenceRow {
    pub fn covering_type(&self) -> Result<CoveringType> {
        Ok(validate_type(self.d, &self.a)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub row: Vec<ReferenceRow>,
}

impl Dataset {
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN).expect("builtin dataset parses")
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let ds: Dataset = toml::from_str(s).map_err(|e| Error::Dataset(e.to_string()))?;
        for r in &ds.row {
            r.covering_type().map_err(|e| Error::Dataset(format!("row {}: {e}", r.index)))?;
        }
        Ok(ds)
    }

    pub fn rows(&self) -> &[ReferenceRow] {
        &self.row
    }

    /// Rows with five branch points.
    pub fn surface_rows(&self) -> Vec<&ReferenceRow> {
        self.row.iter().filter(|r| r.a.len() == 5).collect()
    }

    pub fn covering_types(&self) -> Vec<CoveringType> {
        self.row.iter().map(|r| r.covering_type().expect("validated on load")).collect()
    }

    /// Known commensurable pairs as 0-based positions, each listed once.
    pub fn known_edges(&self) -> Vec<(usize, usize)> {
        let pos = |index: usize| self.row.iter().position(|r| r.index == index);
        let mut edges: Vec<(usize, usize)> = self
            .row
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.comm_to.and_then(pos).map(|j| (i.min(j), i.max(j))))
            .collect();
        edges.sort();
        edges.dedup();
        edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn builtin_shape() {
        let ds = Dataset::builtin();
        assert_eq!(ds.rows().len(), 16);
        assert_eq!(ds.surface_rows().len(), 15);
        assert_eq!(ds.known_edges().len(), 6);
        assert_eq!(ds.row[1].spectrum[1], q(5, 17));
        assert!(ds.row[15].relative_euler.is_none());
    }

    #[test]
    fn rejects_invalid_rows() {
        let bad = "[[row]]\nindex = 1\nd = 12\na = [3, 3, 3, 7, 9]\ncondition = \"INT\"\nmodel = \"B9\"\n\
                   genus = 1\ndim_p = 1\ndim_u = 0\nspectrum = [\"1\"]\n";
        assert!(matches!(Dataset::from_toml_str(bad), Err(Error::Dataset(_))));
        assert!(matches!(Dataset::from_toml_str("row = 3"), Err(Error::Dataset(_))));
    }
}
