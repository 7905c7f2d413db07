//! The moderator. Given the ground truth and the current round's target node,
//! the teacher withholds examples from the shared sample. It never relabels or
//! reorders, and it has no access to learner state.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::concepts::{Adfsa, Circuit, Concept, Correlation};
use crate::error::{Error, Result};
use crate::sampling::Sample;
use crate::session::RoundPlan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModerationVariant {
    /// Circuit rounds: filter by relevance/correlation at the target node.
    RelevantCorrelated,
    /// Automaton rounds: bucket by arrival offset, then by correlation.
    OffsetCorrelated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModerationRule {
    pub variant: ModerationVariant,
    /// Circuit rounds only: keep the larger correlated/anticorrelated half of
    /// the whole sample instead of the relevant examples.
    pub partition: bool,
}

impl ModerationRule {
    pub fn relevant() -> Self {
        ModerationRule {
            variant: ModerationVariant::RelevantCorrelated,
            partition: false,
        }
    }

    pub fn partition() -> Self {
        ModerationRule {
            variant: ModerationVariant::RelevantCorrelated,
            partition: true,
        }
    }

    pub fn offset() -> Self {
        ModerationRule {
            variant: ModerationVariant::OffsetCorrelated,
            partition: false,
        }
    }
}

/// Which examples of the shared sample a round shows, by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Moderation {
    pub indices: Vec<usize>,
    pub side: Correlation,
    pub offset: Option<usize>,
}

/// Relevance filter (default) or the larger correlation half (`partition`)
/// at `node`. May be empty.
pub fn select_boolean<C: Circuit + ?Sized>(c: &C, node: usize, s: &Sample, partition: bool) -> Result<Moderation> {
    if node >= c.node_count() {
        return Err(Error::InvalidParameter(format!("node {node} out of range")));
    }
    let root = c.root_node();
    // (relevant, correlated) per distinct input
    let mut cache: HashMap<&[bool], (bool, bool)> = HashMap::new();
    let mut relevant = Vec::new();
    let mut halves = [Vec::new(), Vec::new()];
    for (i, e) in s.iter().enumerate() {
        let (rel, corr) = match cache.get(e.bits.as_slice()) {
            Some(&v) => v,
            None => {
                let vals = c.values(&e.bits)?;
                let corr = vals[node] == vals[root];
                let rel = if partition {
                    false
                } else {
                    c.forced(&e.bits, node, false)? != c.forced(&e.bits, node, true)?
                };
                cache.insert(&e.bits, (rel, corr));
                (rel, corr)
            }
        };
        if partition {
            halves[usize::from(!corr)].push(i);
        } else if rel {
            relevant.push(i);
        }
    }
    let (indices, side) = if !partition {
        (relevant, Correlation::Correlated)
    } else {
        let [cor, anti] = halves;
        if anti.len() > cor.len() {
            (anti, Correlation::Anticorrelated)
        } else {
            (cor, Correlation::Correlated)
        }
    };
    Ok(Moderation {
        indices,
        side,
        offset: None,
    })
}

/// The moderated sub-sample for a circuit round; empty is an error.
pub fn moderate_boolean<C: Circuit + ?Sized>(c: &C, node: usize, s: &Sample, rule: ModerationRule) -> Result<Sample> {
    let sel = select_boolean(c, node, s, rule.partition)?;
    if sel.indices.is_empty() {
        return Err(Error::InsufficientData {
            round: node,
            have: 0,
            need: 1,
        });
    }
    Ok(s.subset(&sel.indices))
}

enum Placement {
    /// The run reads its bit in the target state at this offset.
    Arrives(usize),
    /// Never visits the target: its output at each offset, if defined.
    Bypasses(Vec<Option<bool>>),
}

/// Offset/correlation bucketing at branch `state`; returns the largest of the
/// (at most) `2n` buckets. Ties go to the lower offset, then correlated.
pub fn select_adfsa(a: &Adfsa, state: usize, s: &Sample) -> Result<Moderation> {
    if state >= a.states().len() || !matches!(a.state(state), crate::concepts::State::Branch { .. }) {
        return Err(Error::InvalidParameter(format!("state {state} is not a branch state")));
    }
    let n = a.n();
    let mut buckets: Vec<[Vec<usize>; 2]> = vec![[Vec::new(), Vec::new()]; n];
    let mut cache: HashMap<&[bool], Placement> = HashMap::new();
    for (i, e) in s.iter().enumerate() {
        let place = cache
            .entry(e.bits.as_slice())
            .or_insert_with(|| match a.arrival_offset(&e.bits, state) {
                Some(p) => Placement::Arrives(p),
                None => Placement::Bypasses((0..e.bits.len()).map(|o| a.run_from(state, &e.bits, o)).collect()),
            });
        match place {
            // the root label is this state's output here, so always correlated
            Placement::Arrives(p) => buckets[*p][0].push(i),
            Placement::Bypasses(outs) => {
                for (o, out) in outs.iter().enumerate() {
                    if let Some(v) = out {
                        buckets[o][usize::from(*v != e.label)].push(i);
                    }
                }
            }
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for o in 0..n {
        for side in 0..2 {
            let len = buckets[o][side].len();
            if best.is_none_or(|(bo, bs)| len > buckets[bo][bs].len()) {
                best = Some((o, side));
            }
        }
    }
    let (o, side) = best.unwrap_or((0, 0));
    let indices = buckets
        .get_mut(o)
        .map(|b| std::mem::take(&mut b[side]))
        .unwrap_or_default();
    Ok(Moderation {
        indices,
        side: if side == 0 {
            Correlation::Correlated
        } else {
            Correlation::Anticorrelated
        },
        offset: Some(o),
    })
}

/// The moderated sub-sample for an automaton round and its offset.
pub fn moderate_adfsa(a: &Adfsa, state: usize, s: &Sample) -> Result<(Sample, usize)> {
    if s.is_empty() {
        return Err(Error::InsufficientData {
            round: state,
            have: 0,
            need: 1,
        });
    }
    let sel = select_adfsa(a, state, s)?;
    Ok((s.subset(&sel.indices), sel.offset.unwrap_or(0)))
}

/// Moderation for one planned round of any concept kind.
pub fn select_round(concept: &Concept, node: usize, rule: ModerationRule, s: &Sample) -> Result<Moderation> {
    match (concept, rule.variant) {
        (Concept::Dag(g), ModerationVariant::RelevantCorrelated) => select_boolean(g, node, s, rule.partition),
        (Concept::Threshold(c), ModerationVariant::RelevantCorrelated) => select_boolean(c, node, s, rule.partition),
        (Concept::Adfsa(a), ModerationVariant::OffsetCorrelated) => select_adfsa(a, node, s),
        (c, v) => Err(Error::InvalidParameter(format!(
            "moderation {v:?} does not apply to a {} concept",
            c.kind()
        ))),
    }
}

/// Round membership of every example, as a batch of side information.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivilegedView {
    pub rounds: usize,
    pub rows: Vec<Vec<bool>>,
}

impl PrivilegedView {
    /// Indices shown in round `r`, recovered from the view.
    pub fn round_indices(&self, r: usize) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, row)| row[r].then_some(i))
            .collect()
    }

    /// CSV with header `bit_0,...,bit_{R-1}` and one 0/1 row per example.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record((0..self.rounds).map(|r| format!("bit_{r}")))?;
        for row in &self.rows {
            out.write_record(row.iter().map(|&b| if b { "1" } else { "0" }))?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn export_privileged_view(plan: &RoundPlan, s: &Sample, concept: &Concept) -> Result<PrivilegedView> {
    let mut rows = vec![vec![false; plan.len()]; s.m()];
    for (r, round) in plan.rounds.iter().enumerate() {
        for i in select_round(concept, round.node, round.rule, s)?.indices {
            rows[i][r] = true;
        }
    }
    Ok(PrivilegedView {
        rounds: plan.len(),
        rows,
    })
}
