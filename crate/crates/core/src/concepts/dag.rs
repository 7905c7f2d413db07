//! Boolean formulae as index-ordered node lists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One gate of a formula DAG. Children always carry lower indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum DagNode {
    #[serde(rename = "lit")]
    Literal {
        input: usize,
    },
    Not {
        child: usize,
    },
    And {
        left: usize,
        right: usize,
    },
    Or {
        left: usize,
        right: usize,
    },
}

impl DagNode {
    fn child_indices(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            DagNode::Literal { .. } => (None, None),
            DagNode::Not { child } => (Some(child), None),
            DagNode::And { left, right } | DagNode::Or { left, right } => (Some(left), Some(right)),
        };
        a.into_iter().chain(b)
    }
}

/// Node-count ceiling as a polynomial in the input arity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeBound {
    pub degree: u32,
}

impl Default for SizeBound {
    fn default() -> Self {
        SizeBound { degree: 3 }
    }
}

impl SizeBound {
    /// `max(n, 2)^degree`; the floor keeps single-input formulas with a
    /// negation constructible.
    pub fn limit(&self, n: usize) -> usize {
        n.max(2).saturating_pow(self.degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptDag {
    n: usize,
    nodes: Vec<DagNode>,
    root: usize,
}

impl ConceptDag {
    pub fn new(n: usize, nodes: Vec<DagNode>, root: usize) -> Result<Self> {
        Self::with_bound(n, nodes, root, SizeBound::default())
    }

    pub fn with_bound(n: usize, nodes: Vec<DagNode>, root: usize, bound: SizeBound) -> Result<Self> {
        let dag = Self::unbounded(n, nodes, root)?;
        let limit = bound.limit(n);
        if dag.nodes.len() > limit {
            return Err(Error::SizeBound {
                nodes: dag.nodes.len(),
                bound: limit,
            });
        }
        Ok(dag)
    }

    /// Structural validation only; used for internally derived DAGs whose
    /// size is bounded by construction.
    pub(crate) fn unbounded(n: usize, nodes: Vec<DagNode>, root: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidConcept("formula has no nodes".into()));
        }
        if root >= nodes.len() {
            return Err(Error::InvalidConcept(format!(
                "root {root} out of range for {} nodes",
                nodes.len()
            )));
        }
        for (i, node) in nodes.iter().enumerate() {
            if let DagNode::Literal { input } = *node {
                if input >= n {
                    return Err(Error::InvalidConcept(format!(
                        "node {i} reads input {input} but n = {n}"
                    )));
                }
            }
            if let Some(c) = node.child_indices().find(|&c| c >= i) {
                return Err(Error::InvalidConcept(format!(
                    "node {i} references node {c}; edges must point to lower indices"
                )));
            }
        }
        Ok(ConceptDag { n, nodes, root })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> DagNode {
        self.nodes[i]
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        self.nodes[i].child_indices().collect()
    }

    /// True once negations sit only directly above literals.
    pub fn is_restructured(&self) -> bool {
        self.nodes.iter().all(|node| match *node {
            DagNode::Not { child } => matches!(self.nodes[child], DagNode::Literal { .. }),
            _ => true,
        })
    }

    /// A literal or a negated literal: handled through attribute references
    /// rather than a teaching round.
    pub fn is_leaf(&self, i: usize) -> bool {
        match self.nodes[i] {
            DagNode::Literal { .. } => true,
            DagNode::Not { child } => matches!(self.nodes[child], DagNode::Literal { .. }),
            _ => false,
        }
    }

    fn check_arity(&self, bits: &[bool]) -> Result<()> {
        if bits.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: bits.len(),
            });
        }
        Ok(())
    }

    fn values_with(&self, bits: &[bool], forced: Option<(usize, bool)>) -> Vec<bool> {
        let mut vals: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            let v = match forced {
                Some((f, v)) if f == i => v,
                _ => match *node {
                    DagNode::Literal { input } => bits[input],
                    DagNode::Not { child } => !vals[child],
                    DagNode::And { left, right } => vals[left] && vals[right],
                    DagNode::Or { left, right } => vals[left] || vals[right],
                },
            };
            vals.push(v);
        }
        vals
    }

    /// Output of every node on `bits`.
    pub fn node_values(&self, bits: &[bool]) -> Result<Vec<bool>> {
        self.check_arity(bits)?;
        Ok(self.values_with(bits, None))
    }

    pub fn evaluate(&self, bits: &[bool]) -> Result<bool> {
        self.check_arity(bits)?;
        Ok(self.values_with(bits, None)[self.root])
    }

    /// Root value with node `node` short-circuited to `value`.
    pub fn evaluate_forced(&self, bits: &[bool], node: usize, value: bool) -> Result<bool> {
        self.check_arity(bits)?;
        Ok(self.values_with(bits, Some((node, value)))[self.root])
    }

    /// Nodes reachable from the root.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[self.root] = true;
        for i in (0..self.nodes.len()).rev() {
            if seen[i] {
                for c in self.nodes[i].child_indices() {
                    seen[c] = true;
                }
            }
        }
        seen
    }

    /// Push every negation down to the literals with deMorgan's laws.
    ///
    /// Each non-negation node yields at most a positive and a negative copy,
    /// so the output has at most twice as many nodes. A DAG without negations
    /// comes back unchanged.
    pub fn push_negations_to_leaves(&self) -> ConceptDag {
        let mut out = Restructure {
            src: &self.nodes,
            nodes: Vec::with_capacity(self.nodes.len()),
            pos: vec![None; self.nodes.len()],
            neg: vec![None; self.nodes.len()],
        };
        for i in 0..self.nodes.len() {
            out.emit(i, false);
        }
        let root = out.emit(self.root, false);
        ConceptDag {
            n: self.n,
            nodes: out.nodes,
            root,
        }
    }
}

struct Restructure<'a> {
    src: &'a [DagNode],
    nodes: Vec<DagNode>,
    pos: Vec<Option<usize>>,
    neg: Vec<Option<usize>>,
}

impl Restructure<'_> {
    fn push(&mut self, node: DagNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Index of node `i` (negated when `negate`) in the output DAG.
    fn emit(&mut self, i: usize, negate: bool) -> usize {
        let memo = if negate { self.neg[i] } else { self.pos[i] };
        if let Some(idx) = memo {
            return idx;
        }
        let idx = match (self.src[i], negate) {
            (DagNode::Not { child }, _) => self.emit(child, !negate),
            (node @ DagNode::Literal { .. }, false) => self.push(node),
            (DagNode::Literal { .. }, true) => {
                let lit = self.emit(i, false);
                self.push(DagNode::Not { child: lit })
            }
            (DagNode::And { left, right }, false) => {
                let (l, r) = (self.emit(left, false), self.emit(right, false));
                self.push(DagNode::And { left: l, right: r })
            }
            (DagNode::Or { left, right }, false) => {
                let (l, r) = (self.emit(left, false), self.emit(right, false));
                self.push(DagNode::Or { left: l, right: r })
            }
            (DagNode::And { left, right }, true) => {
                let (l, r) = (self.emit(left, true), self.emit(right, true));
                self.push(DagNode::Or { left: l, right: r })
            }
            (DagNode::Or { left, right }, true) => {
                let (l, r) = (self.emit(left, true), self.emit(right, true));
                self.push(DagNode::And { left: l, right: r })
            }
        };
        if negate {
            self.neg[i] = Some(idx);
        } else {
            self.pos[i] = Some(idx);
        }
        idx
    }
}

/// Parity over `subset` as a balanced tree of XOR gadgets,
/// `x ^ y = (x & !y) | (!x & y)`.
pub fn build_parity(n: usize, subset: &[usize]) -> Result<ConceptDag> {
    if subset.is_empty() {
        return Err(Error::InvalidConcept("parity over an empty subset".into()));
    }
    let mut seen = vec![false; n];
    for &i in subset {
        if i >= n {
            return Err(Error::InvalidConcept(format!(
                "parity input {i} out of range for n = {n}"
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidConcept(format!("parity input {i} repeated")));
        }
    }
    let mut nodes = Vec::new();
    let root = xor_tree(&mut nodes, subset);
    ConceptDag::unbounded(n, nodes, root)
}

fn xor_tree(nodes: &mut Vec<DagNode>, inputs: &[usize]) -> usize {
    if let [input] = *inputs {
        nodes.push(DagNode::Literal { input });
        return nodes.len() - 1;
    }
    let (lo, hi) = inputs.split_at(inputs.len() / 2);
    let a = xor_tree(nodes, lo);
    let b = xor_tree(nodes, hi);
    let mut push = |node| {
        nodes.push(node);
        nodes.len() - 1
    };
    let na = push(DagNode::Not { child: a });
    let nb = push(DagNode::Not { child: b });
    let l = push(DagNode::And { left: a, right: nb });
    let r = push(DagNode::And { left: na, right: b });
    push(DagNode::Or { left: l, right: r })
}
