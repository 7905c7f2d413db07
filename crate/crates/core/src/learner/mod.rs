//! The per-round learner and the attribute space it grows across rounds.
//!
//! Attributes start as the pure inputs (formulas, threshold circuits) or the
//! two terminals (automata). Every round appends the learned hypothesis and
//! its complement, so later rounds can build on earlier ones. Attribute
//! values are computed from the learned hypotheses, never from ground truth:
//! this is the possibly corrupted view the next round trains on.

mod automaton;
mod model;
mod pair;
mod perceptron;

pub use automaton::{learn_adfsa_node, AdfsaFit, AdfsaNodeHypothesis};
pub use model::LearnedModel;
pub use pair::{
    enumerate_pairs, learn_pair_node, pair_space_size, AttrRef, LearnMode, PairHypothesis, PairOp, PairOutcome,
};
pub use perceptron::{
    learn_threshold_node, learn_threshold_node_with, PerceptronConfig, PerceptronFit, PerceptronHypothesis,
};

use serde::{Deserialize, Serialize};

use crate::bits::{BitColumn, TriColumn};
use crate::error::{Error, Result};
use crate::sampling::Sample;

/// Smallest `m` with `2 exp(-2 m eps^2) <= delta`, i.e. `ceil(ln(2/delta) / (2 eps^2))`.
pub fn sample_budget(epsilon: f64, delta: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 1)")));
    }
    Ok(((2.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil() as usize)
}

/// Total error target split evenly over the concept's nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub epsilon_total: f64,
    pub delta: f64,
    pub nodes: usize,
}

impl ErrorBudget {
    pub fn new(epsilon_total: f64, delta: f64, nodes: usize) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::InvalidParameter("error budget over zero nodes".into()));
        }
        sample_budget(epsilon_total, delta)?;
        Ok(ErrorBudget {
            epsilon_total,
            delta,
            nodes,
        })
    }

    pub fn per_node_epsilon(&self) -> f64 {
        self.epsilon_total / self.nodes as f64
    }

    /// Examples each round must see.
    pub fn per_node_samples(&self) -> usize {
        sample_budget(self.per_node_epsilon(), self.delta).expect("validated at construction")
    }

    /// Error bound at a node whose children have errors `left` and `right`.
    pub fn composed(&self, left: f64, right: f64) -> f64 {
        left + right + self.per_node_epsilon()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    /// Pure input bits plus derived Boolean attributes.
    Boolean,
    /// Accept/reject terminals plus learned sub-automata.
    Automaton,
}

/// What a round produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Hypothesis {
    Pair(PairHypothesis),
    /// Reliable mode: every pair hypothesis consistent with the round's data.
    /// The attribute is definite only where all members agree.
    VersionSpace {
        members: Vec<PairHypothesis>,
    },
    /// Reliable mode with nothing consistent.
    DontKnow,
    Perceptron(PerceptronHypothesis),
    AdfsaNode(AdfsaNodeHypothesis),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AttributeDef {
    Pure {
        input: usize,
    },
    Derived {
        hypothesis: Hypothesis,
    },
    /// Complement of the derived attribute at `of`.
    DerivedComplement {
        of: usize,
    },
    TerminalAccept,
    TerminalReject,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeSpace {
    n: usize,
    kind: SpaceKind,
    attributes: Vec<AttributeDef>,
}

impl AttributeSpace {
    pub fn boolean(n: usize) -> Self {
        AttributeSpace {
            n,
            kind: SpaceKind::Boolean,
            attributes: (0..n).map(|input| AttributeDef::Pure { input }).collect(),
        }
    }

    pub fn automaton(n: usize) -> Self {
        AttributeSpace {
            n,
            kind: SpaceKind::Automaton,
            attributes: vec![AttributeDef::TerminalAccept, AttributeDef::TerminalReject],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[AttributeDef] {
        &self.attributes
    }

    pub fn attribute(&self, i: usize) -> &AttributeDef {
        &self.attributes[i]
    }

    fn base_len(&self) -> usize {
        match self.kind {
            SpaceKind::Boolean => self.n,
            SpaceKind::Automaton => 2,
        }
    }

    /// Rounds absorbed so far.
    pub fn rounds(&self) -> usize {
        (self.attributes.len() - self.base_len()) / 2
    }

    /// Append `h` and its complement; returns the index of `h`.
    pub fn augment(&mut self, h: Hypothesis) -> usize {
        let idx = self.attributes.len();
        self.attributes.push(AttributeDef::Derived { hypothesis: h });
        self.attributes.push(AttributeDef::DerivedComplement { of: idx });
        idx
    }

    /// Attribute values on one input, computed from the learned hypotheses.
    /// `None` marks a reliable-mode "don't know".
    pub fn corrupted_view(&self, bits: &[bool]) -> Vec<Option<bool>> {
        let mut vals: Vec<Option<bool>> = Vec::with_capacity(self.attributes.len());
        for attr in &self.attributes {
            let v = match attr {
                AttributeDef::Pure { input } => bits.get(*input).copied(),
                AttributeDef::Derived { hypothesis } => match hypothesis {
                    Hypothesis::Pair(h) => h.eval(&vals),
                    Hypothesis::VersionSpace { members } => agreed(members.iter().map(|h| h.eval(&vals))),
                    Hypothesis::DontKnow => None,
                    Hypothesis::Perceptron(p) => Some(p.predict(&vals)),
                    Hypothesis::AdfsaNode(_) => None,
                },
                AttributeDef::DerivedComplement { of } => vals[*of].map(|v| !v),
                AttributeDef::TerminalAccept => Some(true),
                AttributeDef::TerminalReject => Some(false),
            };
            vals.push(v);
        }
        vals
    }

    /// Column-wise values over a sample (Boolean spaces).
    pub fn columns(&self, s: &Sample) -> Vec<TriColumn> {
        let m = s.m();
        let mut cols: Vec<TriColumn> = Vec::with_capacity(self.attributes.len());
        for attr in &self.attributes {
            let col = match attr {
                AttributeDef::Pure { input } => {
                    TriColumn::definite(BitColumn::from_fn(m, |i| s.examples[i].bits[*input]))
                }
                AttributeDef::Derived { hypothesis } => match hypothesis {
                    Hypothesis::Pair(h) => h.eval_columns(&cols),
                    Hypothesis::VersionSpace { members } => {
                        let mut all_one = BitColumn::ones(m);
                        let mut all_zero = BitColumn::ones(m);
                        for h in members {
                            let c = h.eval_columns(&cols);
                            all_one = all_one.and(&c.value);
                            all_zero = all_zero.and(&c.known.and_not(&c.value));
                        }
                        TriColumn {
                            known: all_one.or(&all_zero),
                            value: all_one,
                        }
                    }
                    Hypothesis::DontKnow | Hypothesis::AdfsaNode(_) => TriColumn::unknown(m),
                    Hypothesis::Perceptron(p) => TriColumn::definite(BitColumn::from_fn(m, |i| {
                        p.predict_with(|a| cols[a].get(i) == Some(true))
                    })),
                },
                AttributeDef::DerivedComplement { of } => cols[*of].not(),
                AttributeDef::TerminalAccept => TriColumn::definite(BitColumn::ones(m)),
                AttributeDef::TerminalReject => TriColumn::definite(BitColumn::zeros(m)),
            };
            cols.push(col);
        }
        cols
    }

    /// Output of automaton attribute `attr` reading `bits` from `offset`;
    /// `None` if the string runs out.
    pub fn evaluate_at(&self, attr: usize, bits: &[bool], offset: usize) -> Option<bool> {
        match &self.attributes[attr] {
            AttributeDef::TerminalAccept => Some(true),
            AttributeDef::TerminalReject => Some(false),
            AttributeDef::Derived {
                hypothesis: Hypothesis::AdfsaNode(h),
            } => {
                let b = *bits.get(offset)?;
                self.evaluate_at(if b { h.on1 } else { h.on0 }, bits, offset + 1)
            }
            AttributeDef::DerivedComplement { of } => self.evaluate_at(*of, bits, offset).map(|v| !v),
            _ => None,
        }
    }

    /// `table[a][o]` = `evaluate_at(a, bits, o)` for every attribute and
    /// offset `0..=len`.
    pub fn automaton_table(&self, bits: &[bool]) -> Vec<Vec<Option<bool>>> {
        let len = bits.len();
        let mut table = vec![vec![None; len + 1]; self.attributes.len()];
        for o in (0..=len).rev() {
            for a in 0..self.attributes.len() {
                table[a][o] = match &self.attributes[a] {
                    AttributeDef::TerminalAccept => Some(true),
                    AttributeDef::TerminalReject => Some(false),
                    AttributeDef::Derived {
                        hypothesis: Hypothesis::AdfsaNode(h),
                    } if o < len => table[if bits[o] { h.on1 } else { h.on0 }][o + 1],
                    AttributeDef::DerivedComplement { of } => table[*of][o].map(|v| !v),
                    _ => None,
                };
            }
        }
        table
    }
}

/// Common value if every item is definite and equal.
fn agreed(mut vals: impl Iterator<Item = Option<bool>>) -> Option<bool> {
    let first = vals.next()??;
    vals.all(|v| v == Some(first)).then_some(first)
}

/// Sub-sample with duplicates merged: (example index of first occurrence, count).
pub(crate) fn distinct(s: &Sample) -> Vec<(usize, usize)> {
    let mut index: std::collections::HashMap<(&[bool], bool), usize> = std::collections::HashMap::new();
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, e) in s.iter().enumerate() {
        match index.get(&(e.bits.as_slice(), e.label)) {
            Some(&k) => out[k].1 += 1,
            None => {
                index.insert((&e.bits, e.label), out.len());
                out.push((i, 1));
            }
        }
    }
    out
}
