//! Unmoderated learners for comparison. They see only `(S, labels)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{Classifier, Sample};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    Leaf {
        label: bool,
        /// Training examples reaching the leaf.
        support: usize,
    },
    Split {
        bit: usize,
        gain: f64,
        zero: Box<TreeNode>,
        one: Box<TreeNode>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub root: TreeNode,
    pub max_depth: usize,
}

impl TreeModel {
    pub fn depth(&self) -> usize {
        fn go(t: &TreeNode) -> usize {
            match t {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { zero, one, .. } => 1 + go(zero).max(go(one)),
            }
        }
        go(&self.root)
    }

    pub fn predict(&self, bits: &[bool]) -> Option<bool> {
        let mut t = &self.root;
        loop {
            match t {
                TreeNode::Leaf { label, .. } => return Some(*label),
                TreeNode::Split { bit, zero, one, .. } => t = if *bits.get(*bit)? { one } else { zero },
            }
        }
    }
}

impl Classifier for TreeModel {
    fn classify(&self, bits: &[bool]) -> Option<bool> {
        self.predict(bits)
    }
}

fn entropy(pos: usize, total: usize) -> f64 {
    if pos == 0 || pos == total {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Ties go to `false`.
fn majority(s: &Sample, idx: &[usize]) -> bool {
    let pos = idx.iter().filter(|&&i| s.examples[i].label).count();
    2 * pos > idx.len()
}

/// ID3-style tree: split on the bit with the largest information gain while
/// the gain is positive and depth allows. Ties go to the lowest bit.
pub fn train_greedy_tree(s: &Sample, max_depth: usize) -> Result<TreeModel> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = s.examples[0].bits.len();
    let idx: Vec<usize> = (0..s.m()).collect();
    Ok(TreeModel {
        root: grow(s, n, &idx, max_depth),
        max_depth,
    })
}

fn grow(s: &Sample, n: usize, idx: &[usize], depth_left: usize) -> TreeNode {
    let pos = idx.iter().filter(|&&i| s.examples[i].label).count();
    let leaf = TreeNode::Leaf {
        label: majority(s, idx),
        support: idx.len(),
    };
    if depth_left == 0 || pos == 0 || pos == idx.len() {
        return leaf;
    }
    let parent = entropy(pos, idx.len());
    let mut best: Option<(usize, f64)> = None;
    for bit in 0..n {
        // [count, positives] for bit = 0 and bit = 1
        let mut c = [[0usize; 2]; 2];
        for &i in idx {
            let e = &s.examples[i];
            let side = &mut c[usize::from(e.bits[bit])];
            side[0] += 1;
            side[1] += usize::from(e.label);
        }
        if c[0][0] == 0 || c[1][0] == 0 {
            continue;
        }
        let total = idx.len() as f64;
        let child = c.iter().map(|&[k, p]| k as f64 / total * entropy(p, k)).sum::<f64>();
        let gain = parent - child;
        if gain > 1e-12 && best.is_none_or(|(_, g)| gain > g + 1e-12) {
            best = Some((bit, gain));
        }
    }
    let Some((bit, gain)) = best else { return leaf };
    let (one, zero): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| s.examples[i].bits[bit]);
    TreeNode::Split {
        bit,
        gain,
        zero: Box::new(grow(s, n, &zero, depth_left - 1)),
        one: Box::new(grow(s, n, &one, depth_left - 1)),
    }
}

/// A single-bit stump: the bit, its negation, or a constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stump", rename_all = "lowercase")]
pub enum Stump {
    Bit { bit: usize },
    NotBit { bit: usize },
    Constant { value: bool },
}

impl Stump {
    pub fn predict(&self, bits: &[bool]) -> Option<bool> {
        match *self {
            Stump::Bit { bit } => bits.get(bit).copied(),
            Stump::NotBit { bit } => bits.get(bit).map(|b| !b),
            Stump::Constant { value } => Some(value),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StumpEnsemble {
    pub stumps: Vec<(Stump, f64)>,
    /// Answer when the ensemble is empty or its vote is tied.
    pub fallback: bool,
}

impl Classifier for StumpEnsemble {
    fn classify(&self, bits: &[bool]) -> Option<bool> {
        let mut vote = 0.0;
        for (h, alpha) in &self.stumps {
            vote += if h.predict(bits)? { *alpha } else { -*alpha };
        }
        Some(if vote.abs() < 1e-12 { self.fallback } else { vote > 0.0 })
    }
}

/// Discrete AdaBoost over single-bit stumps for at most `rounds` rounds.
/// Stops early once no stump beats chance or one is perfect.
pub fn train_boosted_stumps(s: &Sample, rounds: usize) -> Result<StumpEnsemble> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    if rounds == 0 {
        return Err(Error::InvalidParameter("boosting needs at least one round".into()));
    }
    let n = s.examples[0].bits.len();
    let m = s.m();
    let all: Vec<usize> = (0..m).collect();
    let mut pool: Vec<Stump> = vec![Stump::Constant { value: false }, Stump::Constant { value: true }];
    for bit in 0..n {
        pool.push(Stump::Bit { bit });
        pool.push(Stump::NotBit { bit });
    }
    let mut w = vec![1.0 / m as f64; m];
    let mut stumps = Vec::new();
    for _ in 0..rounds {
        let mut best: Option<(Stump, f64)> = None;
        for h in &pool {
            let err: f64 = s
                .iter()
                .zip(&w)
                .filter(|(e, _)| h.predict(&e.bits) != Some(e.label))
                .map(|(_, wi)| wi)
                .sum();
            if best.is_none_or(|(_, b)| err < b - 1e-12) {
                best = Some((*h, err));
            }
        }
        let (h, err) = best.expect("stump pool is never empty");
        if err >= 0.5 - 1e-9 {
            break;
        }
        let err = err.max(1e-10);
        let alpha = 0.5 * ((1.0 - err) / err).ln();
        stumps.push((h, alpha));
        if err <= 1e-10 {
            break;
        }
        let mut total = 0.0;
        for (e, wi) in s.iter().zip(w.iter_mut()) {
            let right = h.predict(&e.bits) == Some(e.label);
            *wi *= if right { (-alpha).exp() } else { alpha.exp() };
            total += *wi;
        }
        for wi in &mut w {
            *wi /= total;
        }
    }
    Ok(StumpEnsemble {
        stumps,
        fallback: majority(s, &all),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorityModel {
    pub label: bool,
}

impl Classifier for MajorityModel {
    fn classify(&self, _bits: &[bool]) -> Option<bool> {
        Some(self.label)
    }
}

pub fn train_majority(s: &Sample) -> Result<MajorityModel> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(MajorityModel {
        label: majority(s, &(0..s.m()).collect::<Vec<_>>()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{accuracy, Example};

    fn table(n: usize, f: impl Fn(&[bool]) -> bool) -> Sample {
        Sample::new(
            (0..1usize << n)
                .map(|x| {
                    let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
                    let label = f(&bits);
                    Example { bits, label }
                })
                .collect(),
        )
    }

    #[test]
    fn pure_sample_gives_constant_tree() {
        let s = table(3, |_| true);
        let t = train_greedy_tree(&s, 5).unwrap();
        assert_eq!(t.depth(), 0);
        assert_eq!(t.predict(&[false, false, false]), Some(true));
    }

    #[test]
    fn tree_learns_a_literal() {
        let s = table(4, |b| b[2]);
        let t = train_greedy_tree(&s, 5).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(accuracy(&t, &s).unwrap(), 1.0);
    }

    #[test]
    fn tree_respects_depth_cap() {
        let s = table(4, |b| b[0] && b[1] && b[2]);
        assert!(train_greedy_tree(&s, 2).unwrap().depth() <= 2);
        assert_eq!(accuracy(&train_greedy_tree(&s, 3).unwrap(), &s).unwrap(), 1.0);
    }

    #[test]
    fn boosting_fits_or() {
        let s = table(4, |b| b[0] || b[1]);
        let e = train_boosted_stumps(&s, 10).unwrap();
        assert_eq!(accuracy(&e, &s).unwrap(), 1.0);
    }

    #[test]
    fn boosting_abstains_on_parity() {
        let s = table(2, |b| b[0] ^ b[1]);
        let e = train_boosted_stumps(&s, 10).unwrap();
        assert!(e.stumps.is_empty());
        assert_eq!(accuracy(&e, &s).unwrap(), 0.5);
    }

    #[test]
    fn majority_label() {
        let s = table(3, |b| b[0] || b[1]);
        assert!(train_majority(&s).unwrap().label);
        assert!(train_majority(&Sample::new(vec![])).is_err());
    }
}
