use serde::{Deserialize, Serialize};

use super::{Graph, Multiplicity};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: String,
    pub range: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<MultiplicityJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MultiplicityJson {
    Finite(u64),
    Symbolic(String),
}

impl GraphJson {
    pub fn into_graph(self) -> Result<Graph> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.into_iter().enumerate() {
            let m = match e.multiplicity {
                None => Multiplicity::Finite(1),
                Some(MultiplicityJson::Finite(n)) => {
                    let n = u32::try_from(n).map_err(|_| {
                        Error::schema(format!("edges[{i}].multiplicity"), "multiplicity too large")
                    })?;
                    Multiplicity::Finite(n)
                }
                Some(MultiplicityJson::Symbolic(s)) if s == "inf" => Multiplicity::Infinite,
                Some(MultiplicityJson::Symbolic(s)) => {
                    return Err(Error::schema(
                        format!("edges[{i}].multiplicity"),
                        format!("expected a positive integer or \"inf\", got \"{s}\""),
                    ))
                }
            };
            edges.push((e.id, e.range, e.source, m));
        }
        Graph::new(self.vertices, edges)
    }
}
