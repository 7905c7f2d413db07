//! JSON concept description files.
//!
//! ```json
//! {"type": "dag", "n": 2, "nodes": [{"op": "lit", "input": 0}, {"op": "lit", "input": 1},
//!   {"op": "and", "left": 0, "right": 1}], "root": 2}
//! {"type": "threshold", "n": 2, "gates": [{"inputs": [{"input": 0}, {"input": 1}], "threshold": 1}], "root": 0}
//! {"type": "adfsa", "n": 1, "states": [{"kind": "branch", "on0": 2, "on1": 1}, {"kind": "accept"},
//!   {"kind": "reject"}], "start": 0}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Adfsa, Concept, ConceptDag, DagNode, Gate, LinearCircuit, LinearUnit, State, ThresholdCircuit};
use crate::error::Result;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConceptFile {
    Dag {
        n: usize,
        nodes: Vec<DagNode>,
        root: usize,
    },
    Threshold {
        n: usize,
        gates: Vec<Gate>,
        root: usize,
    },
    Adfsa {
        n: usize,
        states: Vec<State>,
        start: usize,
    },
    Linear {
        n: usize,
        units: Vec<LinearUnit>,
        root: usize,
    },
}

impl ConceptFile {
    pub fn into_concept(self) -> Result<Concept> {
        Ok(match self {
            ConceptFile::Dag { n, nodes, root } => Concept::Dag(ConceptDag::new(n, nodes, root)?),
            ConceptFile::Threshold { n, gates, root } => Concept::Threshold(ThresholdCircuit::new(n, gates, root)?),
            ConceptFile::Adfsa { n, states, start } => Concept::Adfsa(Adfsa::new(n, states, start)?),
            ConceptFile::Linear { n, units, root } => Concept::Linear(LinearCircuit::new(n, units, root)?),
        })
    }
}

impl From<&Concept> for ConceptFile {
    fn from(c: &Concept) -> Self {
        match c {
            Concept::Dag(g) => ConceptFile::Dag {
                n: g.n(),
                nodes: g.nodes().to_vec(),
                root: g.root(),
            },
            Concept::Threshold(t) => ConceptFile::Threshold {
                n: t.n(),
                gates: t.gates().to_vec(),
                root: t.root(),
            },
            Concept::Adfsa(a) => ConceptFile::Adfsa {
                n: a.n(),
                states: a.states().to_vec(),
                start: a.start(),
            },
            Concept::Linear(l) => ConceptFile::Linear {
                n: l.n(),
                units: l.units().to_vec(),
                root: l.root(),
            },
        }
    }
}

pub fn from_json(text: &str) -> Result<Concept> {
    serde_json::from_str::<ConceptFile>(text)?.into_concept()
}

pub fn to_json(c: &Concept) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ConceptFile::from(c))?)
}

pub fn load(path: impl AsRef<Path>) -> Result<Concept> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn save(c: &Concept, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(c)?)?;
    Ok(())
}
