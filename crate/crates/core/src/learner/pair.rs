//! Epsilon-exhaustion over AND/OR of two (possibly negated) attributes.

use serde::{Deserialize, Serialize};

use super::AttributeSpace;
use crate::bits::TriColumn;
use crate::error::{Error, Result};
use crate::sampling::Sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairOp {
    And,
    Or,
}

/// Attribute reference, optionally negated. Ordered by (attr, negated).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AttrRef {
    pub attr: usize,
    pub negated: bool,
}

impl AttrRef {
    pub fn pos(attr: usize) -> Self {
        AttrRef { attr, negated: false }
    }

    pub fn neg(attr: usize) -> Self {
        AttrRef { attr, negated: true }
    }

    fn eval(&self, vals: &[Option<bool>]) -> Option<bool> {
        vals[self.attr].map(|v| v != self.negated)
    }

    fn column(&self, cols: &[TriColumn]) -> TriColumn {
        if self.negated {
            cols[self.attr].not()
        } else {
            cols[self.attr].clone()
        }
    }
}

/// `op(left, right)` in canonical form, `left <= right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairHypothesis {
    pub op: PairOp,
    pub left: AttrRef,
    pub right: AttrRef,
}

impl PairHypothesis {
    pub fn new(op: PairOp, a: AttrRef, b: AttrRef) -> Self {
        let (left, right) = if a <= b { (a, b) } else { (b, a) };
        PairHypothesis { op, left, right }
    }

    /// Kleene evaluation over attribute values.
    pub fn eval(&self, vals: &[Option<bool>]) -> Option<bool> {
        let (l, r) = (self.left.eval(vals), self.right.eval(vals));
        match self.op {
            PairOp::And => match (l, r) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            PairOp::Or => match (l, r) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
        }
    }

    pub fn eval_columns(&self, cols: &[TriColumn]) -> TriColumn {
        let (l, r) = (self.left.column(cols), self.right.column(cols));
        match self.op {
            PairOp::And => l.and(&r),
            PairOp::Or => l.or(&r),
        }
    }
}

/// Number of canonical pair hypotheses over `a` attributes: both operators
/// times the unordered pairs (with repetition) of the `2a` literals.
pub fn pair_space_size(a: usize) -> usize {
    2 * (a * (2 * a - 1) + 2 * a)
}

/// Every canonical hypothesis in tie-break order: AND before OR, then lower
/// left index, lower right index, un-negated before negated.
pub fn enumerate_pairs(a: usize) -> impl Iterator<Item = PairHypothesis> {
    [PairOp::And, PairOp::Or].into_iter().flat_map(move |op| {
        (0..a).flat_map(move |l| {
            (l..a).flat_map(move |r| {
                [(false, false), (false, true), (true, false), (true, true)]
                    .into_iter()
                    .filter(move |&(nl, nr)| l != r || nl <= nr)
                    .map(move |(nl, nr)| PairHypothesis {
                        op,
                        left: AttrRef { attr: l, negated: nl },
                        right: AttrRef { attr: r, negated: nr },
                    })
            })
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnMode {
    BestFit,
    Reliable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PairOutcome {
    /// Minimal empirical disagreement.
    Fit {
        hypothesis: PairHypothesis,
        disagreements: usize,
        candidates: usize,
    },
    /// Every hypothesis never definitely wrong on the data that abstains on
    /// the fewest examples.
    VersionSpace {
        members: Vec<PairHypothesis>,
        candidates: usize,
    },
    DontKnow {
        candidates: usize,
    },
}

impl PairOutcome {
    pub fn candidates(&self) -> usize {
        match *self {
            PairOutcome::Fit { candidates, .. }
            | PairOutcome::VersionSpace { candidates, .. }
            | PairOutcome::DontKnow { candidates } => candidates,
        }
    }
}

/// One round of epsilon-exhaustion on `s` over the attributes of `z`.
pub fn learn_pair_node(z: &AttributeSpace, s: &Sample, mode: LearnMode) -> Result<PairOutcome> {
    if s.is_empty() {
        return Err(Error::InsufficientData {
            round: z.rounds(),
            have: 0,
            need: 1,
        });
    }
    let cols = z.columns(s);
    let labels = crate::bits::BitColumn::from_fn(s.m(), |i| s.examples[i].label);
    let definite = cols.iter().all(TriColumn::is_definite);
    let a = z.len();
    let candidates = pair_space_size(a);

    // mistakes: examples where the prediction is definite and wrong;
    // unknown: examples with no definite prediction
    let score = |h: &PairHypothesis| -> (usize, usize) {
        if definite {
            let (nl, nr) = (h.left.negated, h.right.negated);
            let lit = |w: u64, neg: bool| if neg { !w } else { w };
            let wrong = match h.op {
                PairOp::And => cols[h.left.attr]
                    .value
                    .count_mismatch(&cols[h.right.attr].value, &labels, |x, y| lit(x, nl) & lit(y, nr)),
                PairOp::Or => cols[h.left.attr]
                    .value
                    .count_mismatch(&cols[h.right.attr].value, &labels, |x, y| lit(x, nl) | lit(y, nr)),
            };
            (wrong, 0)
        } else {
            let p = h.eval_columns(&cols);
            let wrong = p.known.and(&p.value.xor(&labels)).count_ones();
            (wrong, s.m() - p.known.count_ones())
        }
    };

    match mode {
        LearnMode::BestFit => {
            let mut best: Option<(PairHypothesis, usize)> = None;
            for h in enumerate_pairs(a) {
                let (wrong, unknown) = score(&h);
                let err = wrong + unknown;
                if best.is_none_or(|(_, e)| err < e) {
                    best = Some((h, err));
                    if err == 0 {
                        break;
                    }
                }
            }
            let (hypothesis, disagreements) = best.expect("attribute space is never empty");
            Ok(PairOutcome::Fit {
                hypothesis,
                disagreements,
                candidates,
            })
        }
        LearnMode::Reliable => {
            // never wrong, and abstaining on as few training examples as possible
            let scored: Vec<(PairHypothesis, usize)> = enumerate_pairs(a)
                .filter_map(|h| match score(&h) {
                    (0, unknown) => Some((h, unknown)),
                    _ => None,
                })
                .collect();
            let fewest = scored.iter().map(|&(_, u)| u).min();
            let members: Vec<PairHypothesis> = scored
                .into_iter()
                .filter(|&(_, u)| Some(u) == fewest)
                .map(|(h, _)| h)
                .collect();
            if members.is_empty() {
                Ok(PairOutcome::DontKnow { candidates })
            } else {
                Ok(PairOutcome::VersionSpace { members, candidates })
            }
        }
    }
}
