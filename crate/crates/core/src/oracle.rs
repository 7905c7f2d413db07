//! Brute-force checkers. Everything here re-derives concept semantics from
//! the public node lists instead of calling the evaluators it is meant to
//! cross-check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concepts::{Concept, DagNode, GateInput, State, UnitInput};
use crate::error::{Error, Result};
use crate::learner::AttributeSpace;
use crate::sampling::{Classifier, Sample};

pub const ENUMERATION_CAP: usize = 20;
pub const WITNESS_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// All `2^n` vectors of length `n`.
    Cube(usize),
    /// All strings of length `0..=n`.
    Strings(usize),
}

impl Domain {
    pub fn for_concept(c: &Concept) -> Domain {
        match c {
            Concept::Adfsa(a) => Domain::Strings(a.n()),
            c => Domain::Cube(c.n()),
        }
    }

    fn n(&self) -> usize {
        match *self {
            Domain::Cube(n) | Domain::Strings(n) => n,
        }
    }

    fn lengths(&self) -> Vec<usize> {
        match *self {
            Domain::Cube(n) => vec![n],
            Domain::Strings(n) => (0..=n).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisagreementReport {
    /// Inputs enumerated.
    pub total: usize,
    /// Inputs on which the reference `f` is defined.
    pub compared: usize,
    pub disagreements: usize,
    pub fraction: f64,
    pub witnesses: Vec<Vec<bool>>,
}

fn unpack(x: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| x >> i & 1 == 1).collect()
}

/// Exact disagreement of `g` against the reference `f` over every input of
/// `domain`. Inputs where `f` is undefined are skipped; `g` abstaining where
/// `f` answers counts as a disagreement.
pub fn exhaustive_equivalence<F, G>(f: &F, g: &G, domain: Domain) -> Result<DisagreementReport>
where
    F: Classifier + Sync + ?Sized,
    G: Classifier + Sync + ?Sized,
{
    if domain.n() > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            n: domain.n(),
            cap: ENUMERATION_CAP,
        });
    }
    let (mut total, mut compared, mut disagreements) = (0usize, 0usize, 0usize);
    let mut witnesses = Vec::new();
    for len in domain.lengths() {
        let count = 1u64 << len;
        let chunk = 1u64 << 12;
        let parts: Vec<(usize, usize, Vec<u64>)> = (0..count.div_ceil(chunk))
            .into_par_iter()
            .map(|c| {
                let (mut cmp, mut dis, mut wit) = (0usize, 0usize, Vec::new());
                for x in c * chunk..((c + 1) * chunk).min(count) {
                    let bits = unpack(x, len);
                    let Some(want) = f.classify(&bits) else { continue };
                    cmp += 1;
                    if g.classify(&bits) != Some(want) {
                        dis += 1;
                        if wit.len() < WITNESS_CAP {
                            wit.push(x);
                        }
                    }
                }
                (cmp, dis, wit)
            })
            .collect();
        total += count as usize;
        for (cmp, dis, wit) in parts {
            compared += cmp;
            disagreements += dis;
            for x in wit {
                if witnesses.len() < WITNESS_CAP {
                    witnesses.push(unpack(x, len));
                }
            }
        }
    }
    for w in &witnesses {
        let (a, b) = (f.classify(w), g.classify(w));
        if a.is_none() || a == b {
            return Err(Error::Invariant(format!("witness {w:?} does not disagree")));
        }
    }
    Ok(DisagreementReport {
        total,
        compared,
        disagreements,
        fraction: if compared == 0 {
            0.0
        } else {
            disagreements as f64 / compared as f64
        },
        witnesses,
    })
}

/// `(1/m) * #{i : f(x_i) != g(x~_i)}`, where `x~` is the attribute view of
/// `z` on each example.
pub fn empirical_disagreement(
    f: impl Fn(&[bool]) -> Option<bool>,
    g: impl Fn(&[Option<bool>]) -> Option<bool>,
    s: &Sample,
    z: &AttributeSpace,
) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    let wrong = s.iter().filter(|e| f(&e.bits) != g(&z.corrupted_view(&e.bits))).count();
    Ok(wrong as f64 / s.m() as f64)
}

/// Reference semantics by direct recursion on the definitions.
pub fn reference_value(concept: &Concept, bits: &[bool]) -> Option<bool> {
    match concept {
        Concept::Dag(g) => {
            if bits.len() != g.n() {
                return None;
            }
            dag_value(g.nodes(), g.root(), bits, None)
        }
        Concept::Threshold(c) => {
            if bits.len() != c.n() {
                return None;
            }
            gate_value(c.gates(), c.root(), bits, None)
        }
        Concept::Adfsa(a) => {
            if bits.len() > a.n() {
                return None;
            }
            let mut q = a.start();
            let mut read = 0;
            loop {
                match a.states()[q] {
                    State::Accept => return Some(true),
                    State::Reject => return Some(false),
                    State::Branch { on0, on1 } => {
                        let b = *bits.get(read)?;
                        read += 1;
                        q = if b { on1 } else { on0 };
                    }
                }
            }
        }
        Concept::Linear(c) => {
            if bits.len() != c.n() {
                return None;
            }
            fn unit(c: &crate::concepts::LinearCircuit, u: usize, bits: &[bool]) -> bool {
                let lu = &c.units()[u];
                let mut sum = 0.0;
                for (inp, w) in lu.inputs.iter().zip(&lu.weights) {
                    let on = match *inp {
                        UnitInput::Input(i) => bits[i],
                        UnitInput::Unit(v) => unit(c, v, bits),
                    };
                    if on {
                        sum += w;
                    }
                }
                (sum >= lu.threshold) != lu.negate
            }
            Some(unit(c, c.root(), bits))
        }
    }
}

/// Value of DAG node `i`, with `pin` replacing one node by a constant.
fn dag_value(nodes: &[DagNode], i: usize, bits: &[bool], pin: Option<(usize, bool)>) -> Option<bool> {
    if let Some((p, v)) = pin {
        if p == i {
            return Some(v);
        }
    }
    let rec = |j: usize| dag_value(nodes, j, bits, pin);
    Some(match *nodes.get(i)? {
        DagNode::Literal { input } => *bits.get(input)?,
        DagNode::Not { child } => !rec(child)?,
        DagNode::And { left, right } => rec(left)? & rec(right)?,
        DagNode::Or { left, right } => rec(left)? | rec(right)?,
    })
}

fn gate_value(gates: &[crate::concepts::Gate], i: usize, bits: &[bool], pin: Option<(usize, bool)>) -> Option<bool> {
    if let Some((p, v)) = pin {
        if p == i {
            return Some(v);
        }
    }
    let g = gates.get(i)?;
    let mut on = 0;
    for inp in &g.inputs {
        let v = match *inp {
            GateInput::Input(b) => *bits.get(b)?,
            GateInput::Gate(h) => gate_value(gates, h, bits, pin)?,
        };
        on += usize::from(v);
    }
    Some(on >= g.threshold)
}

/// Relevance by rewiring: node `node` is replaced by each constant in turn
/// and the two root values compared.
pub fn relevance_oracle(concept: &Concept, node: usize, bits: &[bool]) -> Result<bool> {
    let (zero, one) = match concept {
        Concept::Dag(g) => {
            if node >= g.nodes().len() {
                return Err(Error::InvalidParameter(format!("node {node} out of range")));
            }
            (
                dag_value(g.nodes(), g.root(), bits, Some((node, false))),
                dag_value(g.nodes(), g.root(), bits, Some((node, true))),
            )
        }
        Concept::Threshold(c) => {
            if node >= c.gates().len() {
                return Err(Error::InvalidParameter(format!("gate {node} out of range")));
            }
            (
                gate_value(c.gates(), c.root(), bits, Some((node, false))),
                gate_value(c.gates(), c.root(), bits, Some((node, true))),
            )
        }
        c => {
            return Err(Error::InvalidParameter(format!(
                "relevance is defined for circuits, not {}",
                c.kind()
            )))
        }
    };
    match (zero, one) {
        (Some(a), Some(b)) => Ok(a != b),
        _ => Err(Error::ArityMismatch {
            expected: concept.n(),
            got: bits.len(),
        }),
    }
}
