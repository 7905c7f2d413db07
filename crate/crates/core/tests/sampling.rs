use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use impact::concepts::{build_parity, Concept, ConceptDag, DagNode};
use impact::sampling::{accuracy, derive_seed, draw_sample, score, Distribution, LengthLaw};
use impact::Error;

fn literal(n: usize, i: usize) -> Concept {
    Concept::Dag(ConceptDag::new(n, (0..n).map(|input| DagNode::Literal { input }).collect(), i).unwrap())
}

#[test]
fn literal_positive_rate_is_near_half() {
    let c = literal(8, 3);
    let d = Distribution::uniform(8, 11);
    let s = draw_sample(&d, &c, 10_000, &mut d.rng()).unwrap();
    assert!((s.positive_rate() - 0.5).abs() <= 0.02, "{}", s.positive_rate());
}

#[test]
fn same_seed_same_sample() {
    let c = Concept::Dag(build_parity(10, &[1, 6, 8, 9]).unwrap());
    let d = Distribution::uniform(10, 42);
    let a = draw_sample(&d, &c, 500, &mut d.rng()).unwrap();
    let b = draw_sample(&d, &c, 500, &mut d.rng()).unwrap();
    assert_eq!(a, b);
    let other = Distribution::uniform(10, 43);
    assert_ne!(a, draw_sample(&other, &c, 500, &mut other.rng()).unwrap());
}

#[test]
fn labels_come_from_the_concept() {
    let c = Concept::Dag(build_parity(6, &[0, 4]).unwrap());
    let d = Distribution::uniform(6, 5);
    for e in draw_sample(&d, &c, 300, &mut d.rng()).unwrap().iter() {
        assert_eq!(e.label, e.bits[0] ^ e.bits[4]);
    }
}

#[test]
fn product_law_biases_bits() {
    let d = Distribution::product(vec![0.9, 0.1], 3).unwrap();
    let c = literal(2, 0);
    let s = draw_sample(&d, &c, 5000, &mut d.rng()).unwrap();
    assert!((s.positive_rate() - 0.9).abs() < 0.03);
    assert!(Distribution::product(vec![1.5], 0).is_err());
}

#[test]
fn accuracy_of_truth_complement_and_constant() {
    let c = Concept::Dag(build_parity(6, &[0, 1, 2]).unwrap());
    let d = Distribution::uniform(6, 9);
    let test = draw_sample(&d, &c, 2000, &mut d.rng()).unwrap();
    let truth = |b: &[bool]| Some(b[0] ^ b[1] ^ b[2]);
    let complement = |b: &[bool]| Some(!(b[0] ^ b[1] ^ b[2]));
    let constant = |_: &[bool]| Some(true);
    assert_eq!(accuracy(&truth, &test).unwrap(), 1.0);
    assert_eq!(accuracy(&complement, &test).unwrap(), 0.0);
    assert!((accuracy(&constant, &test).unwrap() - 0.5).abs() < 0.05);
    let abstain = |_: &[bool]| None;
    let s = score(&abstain, &test).unwrap();
    assert_eq!((s.accuracy, s.dont_know_rate, s.wrong_rate), (0.0, 1.0, 0.0));
}

#[test]
fn empty_test_set_is_an_error() {
    let c = literal(2, 0);
    let d = Distribution::uniform(2, 0);
    let empty = draw_sample(&d, &c, 0, &mut d.rng()).unwrap();
    assert!(matches!(accuracy(&c, &empty), Err(Error::EmptySample)));
}

#[test]
fn string_lengths_follow_the_law() {
    let a = impact::concepts::random::random_adfsa(&mut ChaCha8Rng::seed_from_u64(0), 5, 3);
    let c = Concept::Adfsa(a);
    let d = Distribution::uniform(5, 1).with_lengths(LengthLaw::Uniform { min: 3 });
    let s = draw_sample(&d, &c, 400, &mut d.rng()).unwrap();
    assert!(s.iter().all(|e| (3..=5).contains(&e.bits.len())));
    assert!((3..=5).all(|l| s.iter().any(|e| e.bits.len() == l)));
}

#[test]
fn seed_derivation_separates_streams() {
    assert_eq!(derive_seed(1, &[2, 3]), derive_seed(1, &[2, 3]));
    assert_ne!(derive_seed(1, &[2, 3]), derive_seed(1, &[3, 2]));
    assert_ne!(derive_seed(1, &[2]), derive_seed(2, &[2]));
}
