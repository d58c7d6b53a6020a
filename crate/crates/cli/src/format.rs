//! The lattice file format.
//!
//! ```json
//! {
//!   "group": {"type": "abelian", "orders": [2, 2]},
//!   "rank": 2,
//!   "action": [[[0, 1], [1, 0]], [[1, 0], [0, 1]]],
//!   "label": "Z[G/H]"
//! }
//! ```
//!
//! `action[k]` is the matrix of generator `k`, as a list of rows. A group
//! may also be given as `{"type": "table", "mul": [[...], ...]}` with an
//! optional `"generators"` list; without one, generators are chosen
//! greedily.

use std::path::Path;

use flasque_core::error::{Error, Result};
use flasque_core::{FiniteGroup, GammaLattice, IntMatrix};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupSpec {
    Abelian {
        orders: Vec<usize>,
    },
    Table {
        mul: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub group: GroupSpec,
    pub rank: usize,
    pub action: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub label: String,
}

impl GroupSpec {
    pub fn to_group(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Abelian { orders } => FiniteGroup::abelian(orders),
            GroupSpec::Table { mul, generators } => FiniteGroup::from_table(mul, generators.clone(), "table"),
        }
    }
}

impl LatticeFile {
    pub fn to_lattice(&self) -> Result<GammaLattice> {
        let g = self.group.to_group()?;
        let mats = self
            .action
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                if rows.len() != self.rank {
                    return Err(Error::InvalidInput(format!(
                        "action[{}] has {} rows, expected {}",
                        k,
                        rows.len(),
                        self.rank
                    )));
                }
                IntMatrix::from_rows(rows, self.rank)
            })
            .collect::<Result<Vec<_>>>()?;
        let label = if self.label.is_empty() { "input" } else { &self.label };
        GammaLattice::from_generators(&g, self.rank, mats, label)
    }

    pub fn from_lattice(m: &GammaLattice, group: GroupSpec) -> LatticeFile {
        LatticeFile {
            group,
            rank: m.rank(),
            action: m.generator_actions().iter().map(IntMatrix::to_rows).collect(),
            label: m.label().to_string(),
        }
    }

    pub fn parse(text: &str) -> Result<LatticeFile> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed lattice file: {}", e)))
    }

    pub fn read(path: &Path) -> Result<LatticeFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path.display(), e)))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("lattice files serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"group": {"type": "abelian", "orders": [2]}, "rank": 2,
                       "action": [[[0, 1], [1, 0]]], "label": "Z[C2]"}"#;
        let f = LatticeFile::parse(text).unwrap();
        let m = f.to_lattice().unwrap();
        assert_eq!(m.rank(), 2);
        let back = LatticeFile::from_lattice(&m, f.group.clone());
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LatticeFile::parse("{").is_err());
        let wrong = r#"{"group": {"type": "abelian", "orders": [2]}, "rank": 1, "action": [[[2]]]}"#;
        assert!(LatticeFile::parse(wrong).unwrap().to_lattice().is_err());
        let table = r#"{"group": {"type": "table", "mul": [[0, 1], [1, 0]]}, "rank": 1, "action": [[[-1]]]}"#;
        assert_eq!(LatticeFile::parse(table).unwrap().to_lattice().unwrap().rank(), 1);
    }
}
