//! Ground-truth concepts: formula DAGs, threshold circuits and acyclic
//! automata, plus per-node relevance and correlation.

mod adfsa;
mod dag;
pub mod format;
mod linear;
pub mod random;
mod threshold;

pub use adfsa::{Adfsa, State};
pub use dag::{build_parity, ConceptDag, DagNode, SizeBound};
pub use linear::{LinearCircuit, LinearUnit, UnitInput};
pub use threshold::{Gate, GateInput, ThresholdCircuit, DEFAULT_MAX_DEPTH};

use crate::error::{Error, Result};
use crate::session::{Round, RoundPlan};
use crate::teacher::ModerationRule;

/// Any of the supported concept classes.
#[derive(Clone, Debug, PartialEq)]
pub enum Concept {
    Dag(ConceptDag),
    Threshold(ThresholdCircuit),
    Adfsa(Adfsa),
    /// Evaluation-only; produced by exporting learned threshold models.
    Linear(LinearCircuit),
}

impl Concept {
    pub fn n(&self) -> usize {
        match self {
            Concept::Dag(g) => g.n(),
            Concept::Threshold(c) => c.n(),
            Concept::Adfsa(a) => a.n(),
            Concept::Linear(c) => c.n(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Concept::Dag(_) => "dag",
            Concept::Threshold(_) => "threshold",
            Concept::Adfsa(_) => "adfsa",
            Concept::Linear(_) => "linear",
        }
    }

    pub fn evaluate(&self, bits: &[bool]) -> Result<bool> {
        match self {
            Concept::Dag(g) => g.evaluate(bits),
            Concept::Threshold(c) => c.evaluate(bits),
            Concept::Adfsa(a) => a.run(bits),
            Concept::Linear(c) => c.evaluate(bits),
        }
    }
}

impl From<ConceptDag> for Concept {
    fn from(g: ConceptDag) -> Self {
        Concept::Dag(g)
    }
}

impl From<ThresholdCircuit> for Concept {
    fn from(c: ThresholdCircuit) -> Self {
        Concept::Threshold(c)
    }
}

impl From<Adfsa> for Concept {
    fn from(a: Adfsa) -> Self {
        Concept::Adfsa(a)
    }
}

/// Feed-forward circuits whose nodes can be short-circuited to a constant.
pub trait Circuit: Sync {
    fn arity(&self) -> usize;
    fn node_count(&self) -> usize;
    fn root_node(&self) -> usize;
    /// Output of every node.
    fn values(&self, bits: &[bool]) -> Result<Vec<bool>>;
    /// Root output with `node` forced to `value`.
    fn forced(&self, bits: &[bool], node: usize, value: bool) -> Result<bool>;
}

impl Circuit for ConceptDag {
    fn arity(&self) -> usize {
        self.n()
    }
    fn node_count(&self) -> usize {
        self.len()
    }
    fn root_node(&self) -> usize {
        self.root()
    }
    fn values(&self, bits: &[bool]) -> Result<Vec<bool>> {
        self.node_values(bits)
    }
    fn forced(&self, bits: &[bool], node: usize, value: bool) -> Result<bool> {
        self.evaluate_forced(bits, node, value)
    }
}

impl Circuit for ThresholdCircuit {
    fn arity(&self) -> usize {
        self.n()
    }
    fn node_count(&self) -> usize {
        self.len()
    }
    fn root_node(&self) -> usize {
        self.root()
    }
    fn values(&self, bits: &[bool]) -> Result<Vec<bool>> {
        self.gate_values(bits)
    }
    fn forced(&self, bits: &[bool], node: usize, value: bool) -> Result<bool> {
        self.evaluate_forced(bits, node, value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correlation {
    Correlated,
    Anticorrelated,
}

fn check_node<C: Circuit + ?Sized>(c: &C, node: usize) -> Result<()> {
    if node >= c.node_count() {
        return Err(Error::InvalidParameter(format!(
            "node {node} out of range for {} nodes",
            c.node_count()
        )));
    }
    Ok(())
}

/// Whether complementing `node`'s output flips the root on `bits`.
pub fn is_relevant<C: Circuit + ?Sized>(c: &C, node: usize, bits: &[bool]) -> Result<bool> {
    check_node(c, node)?;
    Ok(c.forced(bits, node, false)? != c.forced(bits, node, true)?)
}

/// Compares `node`'s output with the root's on `bits`.
pub fn correlation_at<C: Circuit + ?Sized>(c: &C, node: usize, bits: &[bool]) -> Result<Correlation> {
    check_node(c, node)?;
    let vals = c.values(bits)?;
    Ok(if vals[node] == vals[c.root_node()] {
        Correlation::Correlated
    } else {
        Correlation::Anticorrelated
    })
}

/// Teaching rounds in postfix order: every node after its descendants, root
/// last.
///
/// For formula DAGs, literals and negated literals are attribute references,
/// not rounds, unless the root itself is one. Threshold circuits get one
/// round per reachable gate; automata one round per reachable branch state.
pub fn postfix_order(concept: &Concept) -> Result<RoundPlan> {
    let (nodes, rule) = match concept {
        Concept::Dag(g) => (dag_postfix(g), ModerationRule::relevant()),
        Concept::Threshold(c) => (
            postfix(c.root(), |g| c.gate_children(g), |_| true),
            ModerationRule::relevant(),
        ),
        Concept::Adfsa(a) => {
            let children = |q: usize| match a.state(q) {
                State::Branch { on0, on1 } => vec![on0, on1],
                _ => vec![],
            };
            let is_branch = |q: usize| matches!(a.state(q), State::Branch { .. });
            if !is_branch(a.start()) {
                return Err(Error::InvalidConcept(
                    "start state is terminal; nothing to teach".into(),
                ));
            }
            (postfix(a.start(), children, is_branch), ModerationRule::offset())
        }
        Concept::Linear(_) => return Err(Error::InvalidConcept("linear models are evaluation-only".into())),
    };
    Ok(RoundPlan {
        rounds: nodes.into_iter().map(|node| Round { node, rule }).collect(),
    })
}

fn dag_postfix(g: &ConceptDag) -> Vec<usize> {
    if g.is_leaf(g.root()) {
        return vec![g.root()];
    }
    postfix(g.root(), |i| g.children(i), |i| !g.is_leaf(i))
}

fn postfix(root: usize, children: impl Fn(usize) -> Vec<usize>, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut order = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(root, false)];
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            order.push(v);
            continue;
        }
        if !keep(v) || !seen.insert(v) {
            continue;
        }
        stack.push((v, true));
        for c in children(v).into_iter().rev() {
            if keep(c) && !seen.contains(&c) {
                stack.push((c, false));
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and01() -> ConceptDag {
        ConceptDag::new(
            2,
            vec![
                DagNode::Literal { input: 0 },
                DagNode::Literal { input: 1 },
                DagNode::And { left: 0, right: 1 },
            ],
            2,
        )
        .unwrap()
    }

    #[test]
    fn relevance_basics() {
        let g = and01();
        for x in 0..4usize {
            let b = [x & 1 == 1, x & 2 == 2];
            assert!(is_relevant(&g, 2, &b).unwrap());
            assert_eq!(correlation_at(&g, 2, &b).unwrap(), Correlation::Correlated);
        }
        assert!(!is_relevant(&g, 0, &[true, false]).unwrap());
        assert!(is_relevant(&g, 0, &[false, true]).unwrap());
        assert!(is_relevant(&g, 9, &[false, true]).is_err());
    }

    #[test]
    fn postfix_examples() {
        let lit = ConceptDag::new(3, vec![DagNode::Literal { input: 2 }], 0).unwrap();
        assert_eq!(postfix_order(&lit.into()).unwrap().len(), 1);

        // AND(OR(x0, x1), x2)
        let g = ConceptDag::new(
            3,
            vec![
                DagNode::Literal { input: 0 },
                DagNode::Literal { input: 1 },
                DagNode::Or { left: 0, right: 1 },
                DagNode::Literal { input: 2 },
                DagNode::And { left: 2, right: 3 },
            ],
            4,
        )
        .unwrap();
        let plan = postfix_order(&g.into()).unwrap();
        assert_eq!(plan.nodes(), vec![2, 4]);
    }

    #[test]
    fn adfsa_postfix_children_first() {
        let a = Adfsa::new(
            2,
            vec![
                State::Branch { on0: 1, on1: 2 },
                State::Branch { on0: 3, on1: 2 },
                State::Accept,
                State::Reject,
            ],
            0,
        )
        .unwrap();
        assert_eq!(postfix_order(&a.into()).unwrap().nodes(), vec![1, 0]);
    }
}
