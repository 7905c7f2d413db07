//! Pocket perceptron over the current attributes, for threshold-gate rounds.

use serde::{Deserialize, Serialize};

use super::{distinct, AttributeSpace};
use crate::error::{Error, Result};
use crate::sampling::Sample;

/// Predicts 1 iff `sum_i weights[i] * attr_i >= threshold`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerceptronHypothesis {
    pub weights: Vec<f64>,
    pub threshold: f64,
}

impl PerceptronHypothesis {
    pub fn zeros(len: usize) -> Self {
        PerceptronHypothesis {
            weights: vec![0.0; len],
            threshold: 0.0,
        }
    }

    pub fn predict_with(&self, attr: impl Fn(usize) -> bool) -> bool {
        let sum: f64 = self
            .weights
            .iter()
            .enumerate()
            .filter(|&(i, &w)| w != 0.0 && attr(i))
            .map(|(_, w)| w)
            .sum();
        sum >= self.threshold
    }

    /// Unknown attribute values count as 0.
    pub fn predict(&self, vals: &[Option<bool>]) -> bool {
        self.predict_with(|i| vals[i] == Some(true))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerceptronConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
}

impl Default for PerceptronConfig {
    fn default() -> Self {
        PerceptronConfig {
            learning_rate: 1.0,
            max_epochs: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerceptronFit {
    pub hypothesis: PerceptronHypothesis,
    pub training_errors: usize,
    pub epochs: usize,
}

pub fn learn_threshold_node(z: &AttributeSpace, s: &Sample) -> Result<PerceptronFit> {
    learn_threshold_node_with(z, s, PerceptronConfig::default())
}

/// Perceptron updates from zero weights, keeping the best weights seen at
/// the end of any epoch (the pocket). Stops early at zero training error.
pub fn learn_threshold_node_with(z: &AttributeSpace, s: &Sample, cfg: PerceptronConfig) -> Result<PerceptronFit> {
    if s.is_empty() {
        return Err(Error::InsufficientData {
            round: z.rounds(),
            have: 0,
            need: 1,
        });
    }
    let rows: Vec<(Vec<bool>, bool, usize)> = distinct(s)
        .into_iter()
        .map(|(i, count)| {
            let e = &s.examples[i];
            let x = z.corrupted_view(&e.bits).into_iter().map(|v| v == Some(true)).collect();
            (x, e.label, count)
        })
        .collect();
    let errors = |h: &PerceptronHypothesis| -> usize {
        rows.iter()
            .filter(|(x, y, _)| h.predict_with(|i| x[i]) != *y)
            .map(|(_, _, c)| c)
            .sum()
    };

    let mut w = PerceptronHypothesis::zeros(z.len());
    let mut pocket = (w.clone(), errors(&w));
    let mut epochs = 0;
    while pocket.1 > 0 && epochs < cfg.max_epochs {
        epochs += 1;
        for (x, y, _) in &rows {
            if w.predict_with(|i| x[i]) != *y {
                let step = if *y { cfg.learning_rate } else { -cfg.learning_rate };
                for (wi, &xi) in w.weights.iter_mut().zip(x) {
                    if xi {
                        *wi += step;
                    }
                }
                w.threshold -= step;
            }
        }
        let err = errors(&w);
        if err < pocket.1 {
            pocket = (w.clone(), err);
        }
    }
    Ok(PerceptronFit {
        hypothesis: pocket.0,
        training_errors: pocket.1,
        epochs,
    })
}
