//! JSON descriptors for groups and presentations.
//!
//! ```json
//! {"kind": "named", "name": "S3"}
//! {"kind": "permutation", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}
//! {"kind": "cayley", "table": [[0, 1], [1, 0]], "labels": ["e", "t"]}
//! {"objects": ["x"], "edges": [{"name": "e1", "src": "x", "dst": "x"}], "relations": []}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::presented::{PresentedGroupoid, Quiver};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupDescriptor {
    Cayley {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    /// Generators as image lists on `0..degree`.
    Permutation {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    Named {
        name: String,
    },
}

impl GroupDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(parse_error)
    }

    pub fn build(&self, order_cap: usize) -> Result<GroupTable> {
        match self {
            Self::Cayley { table, labels } => {
                if table.len() > order_cap {
                    return Err(Error::SizeLimit {
                        what: "group order",
                        requested: table.len() as u128,
                        limit: order_cap as u128,
                    });
                }
                GroupTable::from_cayley_table(table, labels.clone())
            }
            Self::Permutation { degree, generators } => {
                GroupTable::from_permutation_generators_capped(*degree, generators, order_cap)
            }
            Self::Named { name } => GroupTable::named_capped(name, order_cap),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDescriptor {
    pub name: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDescriptor {
    pub objects: Vec<String>,
    pub edges: Vec<EdgeDescriptor>,
    #[serde(default)]
    pub relations: Vec<Vec<(String, i32)>>,
}

impl PresentationDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(parse_error)
    }

    pub fn build(&self) -> Result<PresentedGroupoid> {
        let quiver = Quiver::new(
            self.objects.iter().cloned(),
            self.edges
                .iter()
                .map(|e| (e.name.clone(), e.src.clone(), e.dst.clone())),
        )?;
        PresentedGroupoid::validate(quiver, &self.relations)
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}
