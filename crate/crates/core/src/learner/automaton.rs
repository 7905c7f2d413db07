//! Automaton rounds: pick a bit offset and wire the new branch state's two
//! edges to existing attributes (terminals or learned sub-automata).

use serde::{Deserialize, Serialize};

use super::{distinct, AttributeSpace};
use crate::error::{Error, Result};
use crate::sampling::Sample;

/// A branch state reading the bit at `offset` (as aligned during training)
/// and continuing into attribute `on0` or `on1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdfsaNodeHypothesis {
    pub offset: usize,
    pub on0: usize,
    pub on1: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdfsaFit {
    pub hypothesis: AdfsaNodeHypothesis,
    /// Training examples the hypothesis labels correctly.
    pub agreements: usize,
    pub candidates: usize,
}

/// Exhaustive search over (offset, on0, on1). Ties go to the lower offset,
/// then lower `on0`, then lower `on1`.
///
/// A candidate's agreement splits into the examples reading 0 at the offset
/// (decided by `on0` alone) and those reading 1, so each offset is scored
/// from per-attribute tallies rather than pair by pair.
pub fn learn_adfsa_node(z: &AttributeSpace, s: &Sample) -> Result<AdfsaFit> {
    if s.is_empty() {
        return Err(Error::InsufficientData {
            round: z.rounds(),
            have: 0,
            need: 1,
        });
    }
    let n = z.n();
    let a = z.len();
    // tally[o][b][attr]: examples reading b at o whose label attr reproduces from o + 1
    let mut tally = vec![[vec![0usize; a], vec![0usize; a]]; n];
    for (i, count) in distinct(s) {
        let e = &s.examples[i];
        let table = z.automaton_table(&e.bits);
        for (o, slot) in tally.iter_mut().enumerate().take(e.bits.len()) {
            let b = usize::from(e.bits[o]);
            for (attr, row) in table.iter().enumerate() {
                if row[o + 1] == Some(e.label) {
                    slot[b][attr] += count;
                }
            }
        }
    }
    let argmax = |v: &[usize]| -> (usize, usize) {
        v.iter()
            .enumerate()
            .fold((0, 0), |best, (i, &c)| if c > best.1 { (i, c) } else { best })
    };
    let mut best: Option<(AdfsaNodeHypothesis, usize)> = None;
    for (offset, [zero, one]) in tally.iter().enumerate() {
        let (on0, c0) = argmax(zero);
        let (on1, c1) = argmax(one);
        if best.is_none_or(|(_, c)| c0 + c1 > c) {
            best = Some((AdfsaNodeHypothesis { offset, on0, on1 }, c0 + c1));
        }
    }
    let (hypothesis, agreements) = best.ok_or_else(|| Error::InvalidParameter("automaton arity is zero".into()))?;
    Ok(AdfsaFit {
        hypothesis,
        agreements,
        candidates: n * a * a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::Hypothesis;
    use crate::sampling::Example;

    fn strings(n: usize, f: impl Fn(&[bool]) -> bool) -> Sample {
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
    fn one_bit_acceptor_and_its_swap() {
        let z = AttributeSpace::automaton(3);
        let fit = learn_adfsa_node(&z, &strings(3, |b| b[0])).unwrap();
        assert_eq!(
            fit.hypothesis,
            AdfsaNodeHypothesis {
                offset: 0,
                on0: 1,
                on1: 0
            }
        );
        assert_eq!(fit.agreements, 8);
        assert_eq!(fit.candidates, 3 * 2 * 2);
        let fit = learn_adfsa_node(&z, &strings(3, |b| !b[0])).unwrap();
        assert_eq!(
            fit.hypothesis,
            AdfsaNodeHypothesis {
                offset: 0,
                on0: 0,
                on1: 1
            }
        );
    }

    #[test]
    fn brute_force_agrees_with_tallies() {
        let mut z = AttributeSpace::automaton(4);
        z.augment(Hypothesis::AdfsaNode(AdfsaNodeHypothesis {
            offset: 2,
            on0: 1,
            on1: 0,
        }));
        z.augment(Hypothesis::AdfsaNode(AdfsaNodeHypothesis {
            offset: 1,
            on0: 3,
            on1: 2,
        }));
        let s = strings(4, |b| (b[0] && b[2]) || (!b[0] && b[3]));
        let fit = learn_adfsa_node(&z, &s).unwrap();
        let mut best = (0, None);
        for o in 0..4 {
            for on0 in 0..z.len() {
                for on1 in 0..z.len() {
                    let agree = s
                        .iter()
                        .filter(|e| {
                            let next = if e.bits[o] { on1 } else { on0 };
                            z.evaluate_at(next, &e.bits, o + 1) == Some(e.label)
                        })
                        .count();
                    if best.1.is_none() || agree > best.0 {
                        best = (agree, Some(AdfsaNodeHypothesis { offset: o, on0, on1 }));
                    }
                }
            }
        }
        assert_eq!(fit.agreements, best.0);
        assert_eq!(Some(fit.hypothesis), best.1);
    }
}
