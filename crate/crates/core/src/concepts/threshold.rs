//! Constant-depth circuits of t-of-k threshold gates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEPTH: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateInput {
    Input(usize),
    Gate(usize),
}

/// Outputs 1 iff at least `threshold` of its inputs are 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub inputs: Vec<GateInput>,
    pub threshold: usize,
}

impl Gate {
    pub fn new(inputs: Vec<GateInput>, threshold: usize) -> Self {
        Gate { inputs, threshold }
    }

    pub fn k(&self) -> usize {
        self.inputs.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdCircuit {
    n: usize,
    gates: Vec<Gate>,
    root: usize,
    depth: usize,
}

impl ThresholdCircuit {
    pub fn new(n: usize, gates: Vec<Gate>, root: usize) -> Result<Self> {
        Self::with_max_depth(n, gates, root, DEFAULT_MAX_DEPTH)
    }

    pub fn with_max_depth(n: usize, gates: Vec<Gate>, root: usize, max_depth: usize) -> Result<Self> {
        if root >= gates.len() {
            return Err(Error::InvalidConcept(format!(
                "root gate {root} out of range for {} gates",
                gates.len()
            )));
        }
        let mut layer = vec![0usize; gates.len()];
        for (g, gate) in gates.iter().enumerate() {
            if gate.threshold < 1 || gate.threshold > gate.k() {
                return Err(Error::InvalidConcept(format!(
                    "gate {g} has threshold {} outside 1..={}",
                    gate.threshold,
                    gate.k()
                )));
            }
            let mut d = 1;
            for input in &gate.inputs {
                match *input {
                    GateInput::Input(i) if i >= n => {
                        return Err(Error::InvalidConcept(format!("gate {g} reads input {i} but n = {n}")))
                    }
                    GateInput::Gate(h) if h >= g => {
                        return Err(Error::InvalidConcept(format!(
                            "gate {g} references gate {h}; edges must point to lower indices"
                        )))
                    }
                    GateInput::Gate(h) => d = d.max(layer[h] + 1),
                    GateInput::Input(_) => {}
                }
            }
            layer[g] = d;
        }
        let depth = layer[root];
        if depth > max_depth {
            return Err(Error::InvalidConcept(format!(
                "circuit depth {depth} exceeds the cap {max_depth}"
            )));
        }
        Ok(ThresholdCircuit { n, gates, root, depth })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate_children(&self, g: usize) -> Vec<usize> {
        self.gates[g]
            .inputs
            .iter()
            .filter_map(|i| match *i {
                GateInput::Gate(h) => Some(h),
                GateInput::Input(_) => None,
            })
            .collect()
    }

    fn values_with(&self, bits: &[bool], forced: Option<(usize, bool)>) -> Vec<bool> {
        let mut vals: Vec<bool> = Vec::with_capacity(self.gates.len());
        for (g, gate) in self.gates.iter().enumerate() {
            let v = match forced {
                Some((f, v)) if f == g => v,
                _ => {
                    let ones = gate
                        .inputs
                        .iter()
                        .filter(|i| match **i {
                            GateInput::Input(b) => bits[b],
                            GateInput::Gate(h) => vals[h],
                        })
                        .count();
                    ones >= gate.threshold
                }
            };
            vals.push(v);
        }
        vals
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

    pub fn gate_values(&self, bits: &[bool]) -> Result<Vec<bool>> {
        self.check_arity(bits)?;
        Ok(self.values_with(bits, None))
    }

    pub fn evaluate(&self, bits: &[bool]) -> Result<bool> {
        self.check_arity(bits)?;
        Ok(self.values_with(bits, None)[self.root])
    }

    pub fn evaluate_forced(&self, bits: &[bool], gate: usize, value: bool) -> Result<bool> {
        self.check_arity(bits)?;
        Ok(self.values_with(bits, Some((gate, value)))[self.root])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GateInput::Input;

    #[test]
    fn t_of_k_semantics() {
        let c = ThresholdCircuit::new(3, vec![Gate::new(vec![Input(0), Input(1), Input(2)], 2)], 0).unwrap();
        for x in 0..8usize {
            let b: Vec<bool> = (0..3).map(|i| x >> i & 1 == 1).collect();
            assert_eq!(c.evaluate(&b).unwrap(), x.count_ones() >= 2);
        }
    }

    #[test]
    fn depth_and_validation() {
        let gates = vec![
            Gate::new(vec![Input(0), Input(1)], 1),
            Gate::new(vec![Input(1), Input(2)], 2),
            Gate::new(vec![GateInput::Gate(0), GateInput::Gate(1)], 2),
        ];
        let c = ThresholdCircuit::new(3, gates.clone(), 2).unwrap();
        assert_eq!(c.depth(), 2);
        assert!(ThresholdCircuit::with_max_depth(3, gates, 2, 1).is_err());
        assert!(ThresholdCircuit::new(3, vec![Gate::new(vec![Input(0)], 2)], 0).is_err());
        assert!(ThresholdCircuit::new(3, vec![Gate::new(vec![Input(0)], 0)], 0).is_err());
        assert!(ThresholdCircuit::new(3, vec![Gate::new(vec![GateInput::Gate(0)], 1)], 0).is_err());
    }
}
