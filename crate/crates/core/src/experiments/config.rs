use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::session::ModerationKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    /// Accuracy against sample size for one fixed parity target.
    #[serde(rename = "m")]
    SampleSize,
    /// Accuracy against parity width at a fixed sample size.
    #[serde(rename = "k")]
    ProblemSize,
}

impl SweepMode {
    pub fn tag(&self) -> &'static str {
        match self {
            SweepMode::SampleSize => "m",
            SweepMode::ProblemSize => "k",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    Impact,
    ImpactReliable,
    GreedyTree,
    BoostedStumps,
    Majority,
}

impl LearnerKind {
    /// Fixed per-learner seed component.
    pub fn id(&self) -> u64 {
        match self {
            LearnerKind::Impact => 1,
            LearnerKind::ImpactReliable => 2,
            LearnerKind::GreedyTree => 3,
            LearnerKind::BoostedStumps => 4,
            LearnerKind::Majority => 5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LearnerKind::Impact => "impact",
            LearnerKind::ImpactReliable => "impact-reliable",
            LearnerKind::GreedyTree => "greedy-tree",
            LearnerKind::BoostedStumps => "boosted-stumps",
            LearnerKind::Majority => "majority",
        }
    }
}

fn default_learners() -> Vec<LearnerKind> {
    vec![
        LearnerKind::Impact,
        LearnerKind::GreedyTree,
        LearnerKind::BoostedStumps,
        LearnerKind::Majority,
    ]
}

fn default_trials() -> usize {
    10
}

fn default_test_size() -> usize {
    1000
}

fn default_m() -> usize {
    75
}

fn default_boost_rounds() -> usize {
    50
}

fn default_moderation() -> ModerationKind {
    ModerationKind::Partition
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Filled from the command line when absent.
    #[serde(default)]
    pub mode: Option<SweepMode>,
    pub n: usize,
    /// Parity inputs for a sample-size sweep.
    #[serde(default)]
    pub subset: Vec<usize>,
    /// Sample sizes for a sample-size sweep.
    #[serde(default)]
    pub m_values: Vec<usize>,
    /// Parity widths for a problem-size sweep.
    #[serde(default)]
    pub k_values: Vec<usize>,
    /// Sample size for a problem-size sweep.
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_learners")]
    pub learners: Vec<LearnerKind>,
    #[serde(default = "default_test_size")]
    pub test_size: usize,
    /// Partition by default: it never leaves a round empty at small `m`.
    #[serde(default = "default_moderation")]
    pub moderation: ModerationKind,
    /// Greedy tree depth cap; defaults to `n`.
    #[serde(default)]
    pub tree_max_depth: Option<usize>,
    #[serde(default = "default_boost_rounds")]
    pub boost_rounds: usize,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub workers: usize,
    /// Record wall-clock time per trial; off makes output byte-identical.
    #[serde(default = "default_true")]
    pub timing: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn mode(&self) -> Result<SweepMode> {
        self.mode.ok_or_else(|| Error::Config("sweep mode not set".into()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.learners.is_empty() {
            return bad("no learners selected".into());
        }
        if self.test_size == 0 {
            return bad("test_size must be positive".into());
        }
        if self.boost_rounds == 0 {
            return bad("boost_rounds must be positive".into());
        }
        match self.mode()? {
            SweepMode::SampleSize => {
                if self.m_values.is_empty() || self.m_values.contains(&0) {
                    return bad("m_values must be a nonempty list of positive sizes".into());
                }
                if self.subset.is_empty() {
                    return bad("subset must name at least one input".into());
                }
                if let Some(&i) = self.subset.iter().find(|&&i| i >= self.n) {
                    return bad(format!("subset input {i} out of range for n = {}", self.n));
                }
            }
            SweepMode::ProblemSize => {
                if self.m == 0 {
                    return bad("m must be positive".into());
                }
                if self.k_values.is_empty() {
                    return bad("k_values must be nonempty".into());
                }
                if let Some(&k) = self.k_values.iter().find(|&&k| k == 0 || k > self.n) {
                    return bad(format!("k = {k} outside 1..={}", self.n));
                }
            }
        }
        Ok(())
    }
}
