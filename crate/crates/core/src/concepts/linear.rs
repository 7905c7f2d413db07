//! Weighted linear-threshold circuits. Learned threshold-circuit models are
//! exported in this form since perceptron weights are real-valued.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitInput {
    Input(usize),
    Unit(usize),
}

/// Outputs `(sum_i weights[i] * inputs[i] >= threshold) != negate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearUnit {
    pub inputs: Vec<UnitInput>,
    pub weights: Vec<f64>,
    pub threshold: f64,
    #[serde(default)]
    pub negate: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearCircuit {
    n: usize,
    units: Vec<LinearUnit>,
    root: usize,
}

impl LinearCircuit {
    pub fn new(n: usize, units: Vec<LinearUnit>, root: usize) -> Result<Self> {
        if root >= units.len() {
            return Err(Error::InvalidConcept(format!("root unit {root} out of range")));
        }
        for (u, unit) in units.iter().enumerate() {
            if unit.inputs.len() != unit.weights.len() {
                return Err(Error::InvalidConcept(format!("unit {u} has mismatched weights")));
            }
            if !unit.threshold.is_finite() || unit.weights.iter().any(|w| !w.is_finite()) {
                return Err(Error::InvalidConcept(format!("unit {u} has non-finite parameters")));
            }
            for input in &unit.inputs {
                match *input {
                    UnitInput::Input(i) if i >= n => {
                        return Err(Error::InvalidConcept(format!("unit {u} reads input {i} but n = {n}")))
                    }
                    UnitInput::Unit(v) if v >= u => {
                        return Err(Error::InvalidConcept(format!("unit {u} references unit {v}")))
                    }
                    _ => {}
                }
            }
        }
        Ok(LinearCircuit { n, units, root })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn units(&self) -> &[LinearUnit] {
        &self.units
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn evaluate(&self, bits: &[bool]) -> Result<bool> {
        if bits.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: bits.len(),
            });
        }
        let mut vals: Vec<bool> = Vec::with_capacity(self.units.len());
        for unit in &self.units {
            let sum: f64 = unit
                .inputs
                .iter()
                .zip(&unit.weights)
                .filter(|(i, _)| match **i {
                    UnitInput::Input(b) => bits[b],
                    UnitInput::Unit(v) => vals[v],
                })
                .map(|(_, w)| w)
                .sum();
            vals.push((sum >= unit.threshold) != unit.negate);
        }
        Ok(vals[self.root])
    }
}
