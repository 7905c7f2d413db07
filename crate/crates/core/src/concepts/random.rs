//! Seeded random concept generators for tests and experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Adfsa, ConceptDag, DagNode, Gate, GateInput, State, ThresholdCircuit};

/// Random formula over `n` inputs with `gates` internal nodes.
///
/// Leaves are one literal per input; each gate picks its operands from
/// earlier nodes with a bias toward recent ones so the root depends on most
/// of the structure. With probability `not_prob` a gate is a negation.
pub fn random_dag<R: Rng + ?Sized>(rng: &mut R, n: usize, gates: usize, not_prob: f64) -> ConceptDag {
    let mut nodes: Vec<DagNode> = (0..n).map(|input| DagNode::Literal { input }).collect();
    let mut unused: Vec<usize> = (0..n).collect();
    unused.shuffle(rng);
    for _ in 0..gates {
        let len = nodes.len();
        let mut pick = |rng: &mut R| -> usize {
            if let Some(u) = unused.pop() {
                return u;
            }
            let recent = len.min(4);
            if rng.gen_bool(0.6) {
                len - 1 - rng.gen_range(0..recent)
            } else {
                rng.gen_range(0..len)
            }
        };
        if rng.gen_bool(not_prob) {
            let child = pick(rng);
            nodes.push(DagNode::Not { child });
        } else {
            let left = pick(rng);
            let mut right = pick(rng);
            if right == left {
                right = if left + 1 < len {
                    left + 1
                } else {
                    left.saturating_sub(1)
                };
            }
            let (left, right) = (left.min(right), left.max(right));
            nodes.push(if rng.gen_bool(0.5) {
                DagNode::And { left, right }
            } else {
                DagNode::Or { left, right }
            });
        }
    }
    let root = nodes.len() - 1;
    ConceptDag::unbounded(n, nodes, root).expect("generator emits valid DAGs")
}

/// Random depth-`depth` threshold circuit: `gates - 1` first-layer gates over
/// input bits feeding further layers, ending in one root gate.
pub fn random_threshold<R: Rng + ?Sized>(rng: &mut R, n: usize, gates: usize, max_fan_in: usize) -> ThresholdCircuit {
    assert!(gates >= 2 && n >= 2);
    let fan = max_fan_in.clamp(2, n);
    let mut out = Vec::with_capacity(gates);
    let mut inputs: Vec<usize> = (0..n).collect();
    for _ in 0..gates - 1 {
        inputs.shuffle(rng);
        let k = rng.gen_range(2..=fan);
        let t = rng.gen_range(1..=k);
        out.push(Gate::new(inputs[..k].iter().map(|&i| GateInput::Input(i)).collect(), t));
    }
    let k = gates - 1;
    let t = rng.gen_range(1..=k);
    out.push(Gate::new((0..k).map(GateInput::Gate).collect(), t));
    ThresholdCircuit::new(n, out, gates - 1).expect("generator emits valid circuits")
}

/// Random automaton with `branches` branch states accepting strings of
/// length at most `n`. States are layered by depth so every path fits in `n`
/// transitions; successors point to deeper states or terminals.
pub fn random_adfsa<R: Rng + ?Sized>(rng: &mut R, n: usize, branches: usize) -> Adfsa {
    assert!(n >= 1 && branches >= 1);
    // depth[i] in 0..n, start at depth 0, strictly increasing along edges
    let mut depth = vec![0usize];
    for _ in 1..branches {
        depth.push(rng.gen_range(1..n.max(2)).min(n - 1));
    }
    depth[1..].sort_unstable();
    let accept = branches;
    let reject = branches + 1;
    let mut states = Vec::with_capacity(branches + 2);
    let mut has_parent = vec![false; branches];
    has_parent[0] = true;
    for i in 0..branches {
        let deeper: Vec<usize> = (i + 1..branches).filter(|&j| depth[j] > depth[i]).collect();
        let mut succ = |rng: &mut R| -> usize {
            // prefer an orphan so most states stay reachable
            if let Some(&j) = deeper.iter().find(|&&j| !has_parent[j]) {
                if rng.gen_bool(0.7) {
                    has_parent[j] = true;
                    return j;
                }
            }
            if !deeper.is_empty() && rng.gen_bool(0.5) {
                let j = deeper[rng.gen_range(0..deeper.len())];
                has_parent[j] = true;
                j
            } else if rng.gen_bool(0.5) {
                accept
            } else {
                reject
            }
        };
        let on0 = succ(rng);
        let on1 = succ(rng);
        states.push(State::Branch { on0, on1 });
    }
    states.push(State::Accept);
    states.push(State::Reject);
    Adfsa::new(n, states, 0).expect("generator emits valid automata")
}
