//! The input distribution, labeled samples, and accuracy scoring.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::concepts::Concept;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub bits: Vec<bool>,
    pub label: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub examples: Vec<Example>,
}

impl Sample {
    pub fn new(examples: Vec<Example>) -> Self {
        Sample { examples }
    }

    pub fn m(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Example> {
        self.examples.iter()
    }

    /// Order-preserving sub-sample; `indices` must be strictly increasing.
    pub fn subset(&self, indices: &[usize]) -> Sample {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Sample {
            examples: indices.iter().map(|&i| self.examples[i].clone()).collect(),
        }
    }

    /// Fraction of examples labeled 1.
    pub fn positive_rate(&self) -> f64 {
        if self.examples.is_empty() {
            return 0.0;
        }
        self.examples.iter().filter(|e| e.label).count() as f64 / self.m() as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BitLaw {
    Uniform,
    /// Independent bits, bit `i` set with probability `p[i]`.
    Product {
        p: Vec<f64>,
    },
}

/// String lengths for automaton inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LengthLaw {
    /// Every string has length `n`.
    Fixed,
    /// Length uniform over `min..=n`.
    Uniform { min: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub n: usize,
    pub bits: BitLaw,
    pub lengths: LengthLaw,
    pub seed: u64,
}

impl Distribution {
    pub fn uniform(n: usize, seed: u64) -> Self {
        Distribution {
            n,
            bits: BitLaw::Uniform,
            lengths: LengthLaw::Fixed,
            seed,
        }
    }

    pub fn product(p: Vec<f64>, seed: u64) -> Result<Self> {
        if let Some(bad) = p.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(Error::InvalidParameter(format!("bit probability {bad} outside [0, 1]")));
        }
        Ok(Distribution {
            n: p.len(),
            bits: BitLaw::Product { p },
            lengths: LengthLaw::Fixed,
            seed,
        })
    }

    pub fn with_lengths(mut self, lengths: LengthLaw) -> Self {
        self.lengths = lengths;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Fresh RNG stream for this distribution's seed.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn draw_bits<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        let len = match self.lengths {
            LengthLaw::Fixed => self.n,
            LengthLaw::Uniform { min } => rng.gen_range(min.min(self.n)..=self.n),
        };
        match &self.bits {
            BitLaw::Uniform => (0..len).map(|_| rng.gen::<bool>()).collect(),
            BitLaw::Product { p } => (0..len).map(|i| rng.gen_bool(p[i])).collect(),
        }
    }
}

/// `m` i.i.d. draws from `d`, each labeled by `concept`.
pub fn draw_sample<R: Rng + ?Sized>(d: &Distribution, concept: &Concept, m: usize, rng: &mut R) -> Result<Sample> {
    if concept.n() != d.n {
        return Err(Error::ArityMismatch {
            expected: concept.n(),
            got: d.n,
        });
    }
    let mut examples = Vec::with_capacity(m);
    for _ in 0..m {
        let bits = d.draw_bits(rng);
        let label = concept.evaluate(&bits)?;
        examples.push(Example { bits, label });
    }
    Ok(Sample { examples })
}

/// Anything that maps inputs to a label, possibly abstaining with `None`.
pub trait Classifier {
    fn classify(&self, bits: &[bool]) -> Option<bool>;
}

impl Classifier for Concept {
    fn classify(&self, bits: &[bool]) -> Option<bool> {
        self.evaluate(bits).ok()
    }
}

impl<F: Fn(&[bool]) -> Option<bool>> Classifier for F {
    fn classify(&self, bits: &[bool]) -> Option<bool> {
        self(bits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    /// Correct answers over all test examples; abstentions count as errors.
    pub accuracy: f64,
    pub dont_know_rate: f64,
    /// Definite wrong answers over all test examples.
    pub wrong_rate: f64,
}

pub fn score(h: &(impl Classifier + ?Sized), test: &Sample) -> Result<Scores> {
    if test.is_empty() {
        return Err(Error::EmptySample);
    }
    let (mut right, mut unknown) = (0usize, 0usize);
    for e in test.iter() {
        match h.classify(&e.bits) {
            Some(y) if y == e.label => right += 1,
            Some(_) => {}
            None => unknown += 1,
        }
    }
    let m = test.m() as f64;
    Ok(Scores {
        accuracy: right as f64 / m,
        dont_know_rate: unknown as f64 / m,
        wrong_rate: (test.m() - right - unknown) as f64 / m,
    })
}

/// `1 - disagreements / m`.
pub fn accuracy(h: &(impl Classifier + ?Sized), test: &Sample) -> Result<f64> {
    Ok(score(h, test)?.accuracy)
}

/// Stable seed mixing (SplitMix64 finalizer folded over the parts).
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{build_parity, ConceptDag, DagNode};

    fn literal(n: usize, i: usize) -> Concept {
        ConceptDag::new(n, vec![DagNode::Literal { input: i }], 0)
            .unwrap()
            .into()
    }

    #[test]
    fn empty_and_reproducible() {
        let d = Distribution::uniform(10, 3);
        let c = literal(10, 3);
        assert!(draw_sample(&d, &c, 0, &mut d.rng()).unwrap().is_empty());
        let a = draw_sample(&d, &c, 50, &mut d.rng()).unwrap();
        let b = draw_sample(&d, &c, 50, &mut d.rng()).unwrap();
        assert_eq!(a, b);
        let other = draw_sample(&d.clone().with_seed(4), &c, 50, &mut d.clone().with_seed(4).rng()).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn literal_labels_are_balanced() {
        let d = Distribution::uniform(10, 11);
        let s = draw_sample(&d, &literal(10, 3), 10_000, &mut d.rng()).unwrap();
        // binomial sd = 0.005; 4 sd band
        assert!((s.positive_rate() - 0.5).abs() < 0.02, "{}", s.positive_rate());
        assert!(s.iter().all(|e| e.label == e.bits[3]));
    }

    #[test]
    fn accuracy_extremes() {
        let d = Distribution::uniform(6, 5);
        let target: Concept = build_parity(6, &[0, 2, 5]).unwrap().into();
        let test = draw_sample(&d, &target, 1000, &mut d.rng()).unwrap();
        assert_eq!(accuracy(&target, &test).unwrap(), 1.0);
        let flip = |b: &[bool]| target.evaluate(b).ok().map(|y| !y);
        assert_eq!(accuracy(&flip, &test).unwrap(), 0.0);
        assert!(matches!(accuracy(&target, &Sample::default()), Err(Error::EmptySample)));
    }

    #[test]
    fn constant_vs_parity_is_half_on_the_cube() {
        let target: Concept = build_parity(8, &[1, 3, 4, 7]).unwrap().into();
        let all = Sample::new(
            (0..256usize)
                .map(|x| {
                    let bits: Vec<bool> = (0..8).map(|i| x >> i & 1 == 1).collect();
                    let label = target.evaluate(&bits).unwrap();
                    Example { bits, label }
                })
                .collect(),
        );
        assert_eq!(accuracy(&|_: &[bool]| Some(false), &all).unwrap(), 0.5);
    }

    #[test]
    fn product_law_validates() {
        assert!(Distribution::product(vec![0.2, 1.5], 0).is_err());
        let d = Distribution::product(vec![1.0, 0.0], 0).unwrap();
        assert_eq!(d.draw_bits(&mut d.rng()), vec![true, false]);
    }

    #[test]
    fn variable_lengths_stay_in_range() {
        let d = Distribution::uniform(6, 1).with_lengths(LengthLaw::Uniform { min: 1 });
        let mut rng = d.rng();
        for _ in 0..200 {
            let len = d.draw_bits(&mut rng).len();
            assert!((1..=6).contains(&len));
        }
    }

    #[test]
    fn seeds_mix_stably() {
        assert_eq!(derive_seed(1, &[2, 3]), derive_seed(1, &[2, 3]));
        assert_ne!(derive_seed(1, &[2, 3]), derive_seed(1, &[3, 2]));
    }
}
