//! The round-by-round driver: the teacher moderates the shared sample, the
//! learner fits one node on the moderated subset, and the attribute space
//! grows. Nothing flows from the learner back to the teacher.

use serde::{Deserialize, Serialize};

use crate::concepts::{postfix_order, Circuit, Concept, Correlation};
use crate::error::{Error, Result};
use crate::learner::{
    learn_adfsa_node, learn_pair_node, learn_threshold_node_with, AttributeSpace, ErrorBudget, Hypothesis, LearnMode,
    LearnedModel, PairOutcome, PerceptronConfig,
};
use crate::sampling::{draw_sample, score, Distribution, Sample};
use crate::teacher::{select_round, ModerationRule, ModerationVariant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub node: usize,
    pub rule: ModerationRule,
}

/// Postfix teaching schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundPlan {
    pub rounds: Vec<Round>,
}

impl RoundPlan {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn nodes(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.node).collect()
    }

    /// Switch circuit rounds between the relevance filter and the
    /// correlation-half partition. Automaton rounds are unchanged.
    pub fn with_partition(mut self, partition: bool) -> Self {
        for r in &mut self.rounds {
            if r.rule.variant == ModerationVariant::RelevantCorrelated {
                r.rule.partition = partition;
            }
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModerationKind {
    #[default]
    Relevant,
    Partition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub mode: LearnMode,
    pub moderation: ModerationKind,
    /// When set, every round must see at least the per-node budget.
    pub budget: Option<ErrorBudget>,
    /// Record per-round node errors on the full and relevant-only samples
    /// and fail the session if the full-sample error is ever larger.
    pub diagnostics: bool,
    pub test_size: usize,
    pub perceptron: PerceptronConfig,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            mode: LearnMode::BestFit,
            moderation: ModerationKind::Relevant,
            budget: None,
            diagnostics: false,
            test_size: 1000,
            perceptron: PerceptronConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeDiagnostics {
    /// Fraction of the full sample whose root changes when the node's true
    /// output is replaced by the learned one.
    pub full_sample_error: f64,
    /// Fraction of the relevant examples on which the learned output differs
    /// from the true node output; `None` if no example is relevant.
    pub relevant_error: Option<f64>,
    pub relevant_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub node: usize,
    pub subset_size: usize,
    pub side: Correlation,
    pub offset: Option<usize>,
    pub training_error: f64,
    /// Hypotheses examined; epochs run for perceptron rounds.
    pub candidates: usize,
    /// Index of the round's hypothesis in the attribute space.
    pub attribute: usize,
    pub diagnostics: Option<NodeDiagnostics>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionReport {
    pub concept: String,
    pub n: usize,
    pub m: usize,
    pub rounds: Vec<RoundRecord>,
    pub model: LearnedModel,
    pub test_accuracy: f64,
    pub dont_know_rate: f64,
    pub wrong_rate: f64,
}

/// What the teacher actually teaches: formula DAGs are restructured first.
pub fn teaching_target(concept: &Concept) -> Concept {
    match concept {
        Concept::Dag(g) => Concept::Dag(g.push_negations_to_leaves()),
        c => c.clone(),
    }
}

/// Round plan a session would follow for `concept`.
pub fn postfix_order_for(concept: &Concept) -> Result<RoundPlan> {
    postfix_order(&teaching_target(concept))
}

/// Draw `S` and a test set from `d`, teach, and score.
pub fn run_teaching_session(
    concept: &Concept,
    d: &Distribution,
    m: usize,
    cfg: &SessionConfig,
) -> Result<SessionReport> {
    if m == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    if d.n != concept.n() {
        return Err(Error::ArityMismatch {
            expected: concept.n(),
            got: d.n,
        });
    }
    let mut rng = d.rng();
    let s = draw_sample(d, concept, m, &mut rng)?;
    let test = draw_sample(d, concept, cfg.test_size, &mut rng)?;
    let (model, rounds) = teach_on_sample(concept, &s, cfg)?;
    let scores = score(&model, &test)?;
    Ok(SessionReport {
        concept: concept.kind().into(),
        n: concept.n(),
        m,
        rounds,
        model,
        test_accuracy: scores.accuracy,
        dont_know_rate: scores.dont_know_rate,
        wrong_rate: scores.wrong_rate,
    })
}

/// The teaching loop on a given sample.
pub fn teach_on_sample(concept: &Concept, s: &Sample, cfg: &SessionConfig) -> Result<(LearnedModel, Vec<RoundRecord>)> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    if cfg.mode == LearnMode::Reliable && !matches!(concept, Concept::Dag(_)) {
        return Err(Error::InvalidParameter(
            "reliable mode applies to formula concepts only".into(),
        ));
    }
    let target = teaching_target(concept);
    let plan = postfix_order(&target)?.with_partition(cfg.moderation == ModerationKind::Partition);
    let need = match cfg.budget {
        Some(b) => b.per_node_samples(),
        None => 1,
    };
    let mut z = match target {
        Concept::Adfsa(_) => AttributeSpace::automaton(target.n()),
        _ => AttributeSpace::boolean(target.n()),
    };
    let mut records = Vec::with_capacity(plan.len());
    let mut output = 0;
    for (r, round) in plan.rounds.iter().enumerate() {
        let sel = select_round(&target, round.node, round.rule, s)?;
        debug_assert!(sel.indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(sel.indices.last().is_none_or(|&i| i < s.m()));
        if sel.indices.len() < need {
            return Err(Error::InsufficientData {
                round: r,
                have: sel.indices.len(),
                need,
            });
        }
        let sub = s.subset(&sel.indices);
        let size = sub.m();
        let (hypothesis, wrong, candidates) = match &target {
            Concept::Dag(_) => match learn_pair_node(&z, &sub, cfg.mode)? {
                PairOutcome::Fit {
                    hypothesis,
                    disagreements,
                    candidates,
                } => (Hypothesis::Pair(hypothesis), disagreements, candidates),
                PairOutcome::VersionSpace { members, candidates } => {
                    (Hypothesis::VersionSpace { members }, 0, candidates)
                }
                PairOutcome::DontKnow { candidates } => (Hypothesis::DontKnow, size, candidates),
            },
            Concept::Threshold(_) => {
                let fit = learn_threshold_node_with(&z, &sub, cfg.perceptron)?;
                (Hypothesis::Perceptron(fit.hypothesis), fit.training_errors, fit.epochs)
            }
            Concept::Adfsa(_) => {
                let fit = learn_adfsa_node(&z, &sub)?;
                (
                    Hypothesis::AdfsaNode(fit.hypothesis),
                    size - fit.agreements,
                    fit.candidates,
                )
            }
            Concept::Linear(_) => unreachable!("postfix_order rejects linear models"),
        };
        output = z.augment(hypothesis);
        let diagnostics = if cfg.diagnostics {
            // an anticorrelated round learns the node's complement
            let attr = match sel.side {
                Correlation::Correlated => output,
                Correlation::Anticorrelated => output + 1,
            };
            let d = match &target {
                Concept::Dag(g) => Some(node_diagnostics(g, round.node, &z, attr, s)?),
                Concept::Threshold(c) => Some(node_diagnostics(c, round.node, &z, attr, s)?),
                _ => None,
            };
            if let Some(d) = &d {
                if let Some(rel) = d.relevant_error {
                    if d.full_sample_error > rel + 1e-12 {
                        return Err(Error::Invariant(format!(
                            "round {r}: full-sample node error {} exceeds relevant-only error {rel}",
                            d.full_sample_error
                        )));
                    }
                }
            }
            d
        } else {
            None
        };
        records.push(RoundRecord {
            round: r,
            node: round.node,
            subset_size: size,
            side: sel.side,
            offset: sel.offset,
            training_error: wrong as f64 / size as f64,
            candidates,
            attribute: output,
            diagnostics,
        });
    }
    Ok((LearnedModel { space: z, output }, records))
}

fn node_diagnostics<C: Circuit>(
    c: &C,
    node: usize,
    z: &AttributeSpace,
    attr: usize,
    s: &Sample,
) -> Result<NodeDiagnostics> {
    let root = c.root_node();
    let (mut full_wrong, mut rel_wrong, mut rel_count) = (0usize, 0usize, 0usize);
    for e in s.iter() {
        let vals = c.values(&e.bits)?;
        let learned = z.corrupted_view(&e.bits)[attr];
        let relevant = c.forced(&e.bits, node, false)? != c.forced(&e.bits, node, true)?;
        let substituted = match learned {
            Some(v) => c.forced(&e.bits, node, v)?,
            None => !vals[root],
        };
        if substituted != e.label {
            full_wrong += 1;
        }
        if relevant {
            rel_count += 1;
            if learned != Some(vals[node]) {
                rel_wrong += 1;
            }
        }
    }
    Ok(NodeDiagnostics {
        full_sample_error: full_wrong as f64 / s.m() as f64,
        relevant_error: (rel_count > 0).then(|| rel_wrong as f64 / rel_count as f64),
        relevant_count: rel_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{build_parity, ConceptDag, DagNode};
    use crate::sampling::Classifier;

    #[test]
    fn single_literal_one_round() {
        let g = ConceptDag::new(4, vec![DagNode::Literal { input: 2 }], 0).unwrap();
        let c = Concept::Dag(g);
        let report = run_teaching_session(&c, &Distribution::uniform(4, 3), 20, &SessionConfig::default()).unwrap();
        assert_eq!(report.rounds.len(), 1);
        assert_eq!(report.test_accuracy, 1.0);
    }

    #[test]
    fn parity_learned_and_deterministic() {
        let c = Concept::Dag(build_parity(10, &[1, 6, 8, 9]).unwrap());
        let cfg = SessionConfig {
            diagnostics: true,
            ..SessionConfig::default()
        };
        let d = Distribution::uniform(10, 11);
        let a = run_teaching_session(&c, &d, 100, &cfg).unwrap();
        let b = run_teaching_session(&c, &d, 100, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.test_accuracy > 0.99, "{}", a.test_accuracy);
    }

    #[test]
    fn model_survives_json_and_exports_to_inputs() {
        let c = Concept::Dag(build_parity(6, &[0, 2, 5]).unwrap());
        let report = run_teaching_session(&c, &Distribution::uniform(6, 5), 80, &SessionConfig::default()).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: SessionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        let exported = report.model.to_concept().unwrap();
        for x in 0..64usize {
            let bits: Vec<bool> = (0..6).map(|i| x >> i & 1 == 1).collect();
            assert_eq!(exported.classify(&bits), report.model.classify(&bits));
        }
    }

    #[test]
    fn budget_underflow_names_round() {
        let c = Concept::Dag(build_parity(4, &[0, 1]).unwrap());
        let cfg = SessionConfig {
            budget: Some(ErrorBudget::new(0.1, 0.05, 3).unwrap()),
            ..SessionConfig::default()
        };
        match run_teaching_session(&c, &Distribution::uniform(4, 1), 50, &cfg) {
            Err(Error::InsufficientData { round: 0, have, need }) => assert!(have <= 50 && need > 50),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn partition_plan_flags_circuit_rounds() {
        let c = Concept::Dag(build_parity(4, &[0, 1]).unwrap());
        let plan = postfix_order(&teaching_target(&c)).unwrap().with_partition(true);
        assert!(plan.rounds.iter().all(|r| r.rule.partition));
    }
}
