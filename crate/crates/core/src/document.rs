//! JSON exchange format for a labelled set of states.
//!
//! ```json
//! {"dimension": 2,
//!  "states": [{"label": "rho1", "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}]}
//! ```
//!
//! Each matrix entry is a `[re, im]` pair.

use std::collections::HashSet;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::ComplexMatrix;
use crate::states::{validate_state, PositiveOperator, NORM_TOL, PSD_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateEntry {
    pub label: String,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSetDocument {
    pub dimension: usize,
    pub states: Vec<StateEntry>,
}

impl StateSetDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Builds a document with labels `rho1`, `rho2`, ...
    pub fn from_states<M: AsRef<ComplexMatrix>>(states: &[M]) -> Result<Self> {
        let dimension = states
            .first()
            .map(|s| s.as_ref().dim())
            .ok_or_else(|| Error::Argument("a state set needs at least one state".into()))?;
        let states = states
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let m = s.as_ref();
                if m.dim() != dimension {
                    return Err(Error::Shape(format!(
                        "state {} has dimension {}, expected {dimension}",
                        i + 1,
                        m.dim()
                    )));
                }
                let matrix = m
                    .rows()
                    .into_iter()
                    .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                    .collect();
                Ok(StateEntry {
                    label: format!("rho{}", i + 1),
                    matrix,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { dimension, states })
    }

    pub fn labels(&self) -> Vec<&str> {
        self.states.iter().map(|s| s.label.as_str()).collect()
    }

    /// Checks labels and shapes and validates every matrix as a positive operator.
    pub fn to_states(&self) -> Result<Vec<PositiveOperator>> {
        if self.states.is_empty() {
            return Err(Error::Argument("document contains no states".into()));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(self.states.len());
        for entry in &self.states {
            if !seen.insert(entry.label.as_str()) {
                return Err(Error::Argument(format!(
                    "duplicate state label '{}'",
                    entry.label
                )));
            }
            let d = self.dimension;
            if entry.matrix.len() != d || entry.matrix.iter().any(|r| r.len() != d) {
                return Err(Error::Shape(format!(
                    "state '{}' is not a {d}x{d} matrix",
                    entry.label
                )));
            }
            let entries: Vec<Complex64> = entry
                .matrix
                .iter()
                .flatten()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            let m = ComplexMatrix::new(d, entries)?;
            let op = validate_state(m, NORM_TOL, PSD_TOL)
                .map_err(|e| Error::Argument(format!("state '{}': {e}", entry.label)))?;
            out.push(op);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::basis_ket;
    use crate::states::pure_state;

    #[test]
    fn round_trip() {
        let s = vec![
            pure_state(&basis_ket(3, 0)).unwrap(),
            pure_state(&[
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.0),
            ])
            .unwrap(),
        ];
        let doc = StateSetDocument::from_states(&s).unwrap();
        let back = StateSetDocument::from_json(&doc.to_json())
            .unwrap()
            .to_states()
            .unwrap();
        assert_eq!(back.len(), 2);
        assert!(back[1].matrix().max_abs_diff(s[1].matrix()) < 1e-15);
        assert_eq!(doc.labels(), vec!["rho1", "rho2"]);
    }

    #[test]
    fn rejects_bad_documents() {
        let dup = r#"{"dimension":1,"states":[{"label":"a","matrix":[[[1,0]]]},{"label":"a","matrix":[[[1,0]]]}]}"#;
        assert!(StateSetDocument::from_json(dup)
            .unwrap()
            .to_states()
            .is_err());
        let shape = r#"{"dimension":2,"states":[{"label":"a","matrix":[[[1,0]]]}]}"#;
        assert!(matches!(
            StateSetDocument::from_json(shape).unwrap().to_states(),
            Err(Error::Shape(_))
        ));
        let neg =
            r#"{"dimension":2,"states":[{"label":"a","matrix":[[[2,0],[0,0]],[[0,0],[-1,0]]]}]}"#;
        assert!(StateSetDocument::from_json(neg)
            .unwrap()
            .to_states()
            .is_err());
        assert!(StateSetDocument::from_json("{").is_err());
        let empty = r#"{"dimension":2,"states":[]}"#;
        assert!(StateSetDocument::from_json(empty)
            .unwrap()
            .to_states()
            .is_err());
    }
}
