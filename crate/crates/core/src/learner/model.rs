use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{AttrRef, AttributeDef, AttributeSpace, Hypothesis, PairOp, SpaceKind};
use crate::concepts::{Adfsa, Concept, ConceptDag, DagNode, LinearCircuit, LinearUnit, State, UnitInput};
use crate::error::{Error, Result};
use crate::sampling::Classifier;

/// The final classifier: one attribute of the learned space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnedModel {
    pub space: AttributeSpace,
    pub output: usize,
}

impl Classifier for LearnedModel {
    fn classify(&self, bits: &[bool]) -> Option<bool> {
        match self.space.kind() {
            SpaceKind::Boolean => {
                if bits.len() != self.space.n() {
                    return None;
                }
                self.space.corrupted_view(bits)[self.output]
            }
            SpaceKind::Automaton => {
                if bits.len() > self.space.n() {
                    return None;
                }
                self.space.evaluate_at(self.output, bits, 0)
            }
        }
    }
}

impl LearnedModel {
    /// Expand derived attributes into a standalone concept over the pure
    /// inputs: a formula DAG for pair rounds, a linear circuit for perceptron
    /// rounds, an automaton for automaton rounds. Reliable-mode version
    /// spaces export their first member.
    pub fn to_concept(&self) -> Result<Concept> {
        match self.space.kind() {
            SpaceKind::Boolean => {
                let uses_perceptron = self.space.attributes().iter().any(|a| {
                    matches!(
                        a,
                        AttributeDef::Derived {
                            hypothesis: Hypothesis::Perceptron(_)
                        }
                    )
                });
                if uses_perceptron {
                    self.to_linear().map(Concept::Linear)
                } else {
                    self.to_dag().map(Concept::Dag)
                }
            }
            SpaceKind::Automaton => self.to_adfsa().map(Concept::Adfsa),
        }
    }

    fn to_dag(&self) -> Result<ConceptDag> {
        let mut b = DagExport {
            space: &self.space,
            nodes: Vec::new(),
            memo: HashMap::new(),
        };
        let root = b.node(self.output, false)?;
        ConceptDag::unbounded(self.space.n(), b.nodes, root)
    }

    fn to_linear(&self) -> Result<LinearCircuit> {
        let attrs = self.space.attributes();
        let mut units: Vec<LinearUnit> = Vec::new();
        let mut unit_of: HashMap<usize, usize> = HashMap::new();
        for (i, attr) in attrs.iter().enumerate() {
            let unit = match attr {
                AttributeDef::Derived {
                    hypothesis: Hypothesis::Perceptron(p),
                } => {
                    let mut inputs = Vec::new();
                    let mut weights = Vec::new();
                    for (j, &w) in p.weights.iter().enumerate() {
                        if w == 0.0 {
                            continue;
                        }
                        inputs.push(match attrs[j] {
                            AttributeDef::Pure { input } => UnitInput::Input(input),
                            _ => UnitInput::Unit(unit_of[&j]),
                        });
                        weights.push(w);
                    }
                    LinearUnit {
                        inputs,
                        weights,
                        threshold: p.threshold,
                        negate: false,
                    }
                }
                AttributeDef::DerivedComplement { of } => LinearUnit {
                    negate: !units[unit_of[of]].negate,
                    ..units[unit_of[of]].clone()
                },
                AttributeDef::Pure { .. } if i == self.output => LinearUnit {
                    inputs: vec![UnitInput::Input(i)],
                    weights: vec![1.0],
                    threshold: 1.0,
                    negate: false,
                },
                AttributeDef::Pure { .. } => continue,
                _ => {
                    return Err(Error::InvalidConcept(
                        "attribute cannot be exported as a linear unit".into(),
                    ))
                }
            };
            unit_of.insert(i, units.len());
            units.push(unit);
        }
        LinearCircuit::new(self.space.n(), units, unit_of[&self.output])
    }

    fn to_adfsa(&self) -> Result<Adfsa> {
        let mut b = AdfsaExport {
            space: &self.space,
            states: vec![State::Accept, State::Reject],
            memo: HashMap::new(),
        };
        let start = b.state(self.output, false)?;
        let mut a = Adfsa::new(self.space.n(), b.states.clone(), start);
        if a.is_err() {
            // learned paths may run longer than n; widen the bound to the real height
            let height = (0..=b.states.len()).find(|&h| Adfsa::new(h, b.states.clone(), start).is_ok());
            a = Adfsa::new(height.unwrap_or(usize::MAX), b.states, start);
        }
        a
    }
}

struct DagExport<'a> {
    space: &'a AttributeSpace,
    nodes: Vec<DagNode>,
    memo: HashMap<(usize, bool), usize>,
}

impl DagExport<'_> {
    fn push(&mut self, n: DagNode) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn node(&mut self, attr: usize, negated: bool) -> Result<usize> {
        if let Some(&i) = self.memo.get(&(attr, negated)) {
            return Ok(i);
        }
        let idx = if negated {
            let base = self.node(attr, false)?;
            self.push(DagNode::Not { child: base })
        } else {
            match &self.space.attributes()[attr] {
                AttributeDef::Pure { input } => self.push(DagNode::Literal { input: *input }),
                AttributeDef::DerivedComplement { of } => self.node(*of, true)?,
                AttributeDef::Derived { hypothesis } => {
                    let h = match hypothesis {
                        Hypothesis::Pair(h) => *h,
                        Hypothesis::VersionSpace { members } => members[0],
                        _ => return Err(Error::InvalidConcept("attribute has no formula to export".into())),
                    };
                    let l = self.literal(h.left)?;
                    let r = self.literal(h.right)?;
                    self.push(match h.op {
                        PairOp::And => DagNode::And { left: l, right: r },
                        PairOp::Or => DagNode::Or { left: l, right: r },
                    })
                }
                _ => return Err(Error::InvalidConcept("automaton attribute in a formula".into())),
            }
        };
        self.memo.insert((attr, negated), idx);
        Ok(idx)
    }

    fn literal(&mut self, r: AttrRef) -> Result<usize> {
        self.node(r.attr, r.negated)
    }
}

struct AdfsaExport<'a> {
    space: &'a AttributeSpace,
    states: Vec<State>,
    memo: HashMap<(usize, bool), usize>,
}

impl AdfsaExport<'_> {
    /// State index of attribute `attr`, terminals swapped when `swapped`.
    fn state(&mut self, attr: usize, swapped: bool) -> Result<usize> {
        if let Some(&i) = self.memo.get(&(attr, swapped)) {
            return Ok(i);
        }
        let idx = match &self.space.attributes()[attr] {
            AttributeDef::TerminalAccept => usize::from(swapped),
            AttributeDef::TerminalReject => usize::from(!swapped),
            AttributeDef::DerivedComplement { of } => self.state(*of, !swapped)?,
            AttributeDef::Derived {
                hypothesis: Hypothesis::AdfsaNode(h),
            } => {
                let on0 = self.state(h.on0, swapped)?;
                let on1 = self.state(h.on1, swapped)?;
                self.states.push(State::Branch { on0, on1 });
                self.states.len() - 1
            }
            _ => return Err(Error::InvalidConcept("attribute is not an automaton node".into())),
        };
        self.memo.insert((attr, swapped), idx);
        Ok(idx)
    }
}
