use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use impact::concepts::random::{random_adfsa, random_dag, random_threshold};
use impact::concepts::{
    build_parity, correlation_at, is_relevant, postfix_order, Adfsa, Circuit, Concept, ConceptDag, Correlation,
    DagNode, State,
};
use impact::oracle::{exhaustive_equivalence, reference_value, relevance_oracle, Domain};
use impact::Error;

fn cube(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1usize << n).map(move |x| (0..n).map(|i| x >> i & 1 == 1).collect())
}

fn dag_strategy() -> impl Strategy<Value = ConceptDag> {
    (2usize..=8, 1usize..=14, 0.0f64..0.6, any::<u64>())
        .prop_map(|(n, gates, not_prob, seed)| random_dag(&mut ChaCha8Rng::seed_from_u64(seed), n, gates, not_prob))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restructuring_preserves_the_function(g in dag_strategy()) {
        let r = g.push_negations_to_leaves();
        prop_assert!(r.is_restructured());
        prop_assert!(r.len() <= 2 * g.len());
        for bits in cube(g.n()) {
            prop_assert_eq!(r.evaluate(&bits).unwrap(), g.evaluate(&bits).unwrap());
        }
    }

    #[test]
    fn postfix_visits_children_first(g in dag_strategy()) {
        let r = g.push_negations_to_leaves();
        let plan = postfix_order(&Concept::Dag(r.clone())).unwrap();
        let nodes = plan.nodes();
        prop_assert_eq!(*nodes.last().unwrap(), r.root());
        for (pos, &v) in nodes.iter().enumerate() {
            for c in r.children(v) {
                if let Some(cp) = nodes.iter().position(|&u| u == c) {
                    prop_assert!(cp < pos, "child {} after parent {}", c, v);
                } else {
                    prop_assert!(r.is_leaf(c));
                }
            }
        }
    }

    #[test]
    fn parity_matches_xor_fold(n in 1usize..=12, mask in any::<u16>()) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!subset.is_empty());
        let g = build_parity(n, &subset).unwrap();
        for bits in cube(n) {
            let fold = subset.iter().fold(false, |acc, &i| acc ^ bits[i]);
            prop_assert_eq!(g.evaluate(&bits).unwrap(), fold);
        }
    }
}

#[test]
fn fifteen_node_dag_matches_its_truth_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let g = random_dag(&mut rng, 10, 5, 0.3);
    assert_eq!(g.len(), 15);
    let c = Concept::Dag(g.clone());
    for bits in cube(10) {
        assert_eq!(Some(g.evaluate(&bits).unwrap()), reference_value(&c, &bits));
    }
}

#[test]
fn negation_free_dag_is_unchanged() {
    let g = random_dag(&mut ChaCha8Rng::seed_from_u64(3), 6, 10, 0.0);
    assert_eq!(g.push_negations_to_leaves().nodes(), g.nodes());
}

#[test]
fn root_is_always_relevant_and_correlated() {
    let g = random_dag(&mut ChaCha8Rng::seed_from_u64(4), 5, 9, 0.3).push_negations_to_leaves();
    for bits in cube(5) {
        assert!(is_relevant(&g, g.root(), &bits).unwrap());
        assert_eq!(correlation_at(&g, g.root(), &bits).unwrap(), Correlation::Correlated);
    }
}

#[test]
fn relevance_agrees_with_rewiring_oracle() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=7);
        let gates = rng.gen_range(1..=12);
        let g = random_dag(&mut rng, n, gates, 0.4);
        let c = Concept::Dag(g.clone());
        for bits in cube(n) {
            for node in 0..g.len() {
                assert_eq!(
                    is_relevant(&g, node, &bits).unwrap(),
                    relevance_oracle(&c, node, &bits).unwrap()
                );
            }
        }
        let t = random_threshold(&mut rng, n.max(2), 4, 3);
        let tc = Concept::Threshold(t.clone());
        for bits in cube(t.n()) {
            for gate in 0..t.len() {
                assert_eq!(
                    is_relevant(&t, gate, &bits).unwrap(),
                    relevance_oracle(&tc, gate, &bits).unwrap()
                );
            }
        }
    }
}

#[test]
fn irrelevant_examples_mix_correlations() {
    // x0 AND (x1 OR x2): at the OR gate, inputs with x0 = 0 are irrelevant
    let nodes = vec![
        DagNode::Literal { input: 0 },
        DagNode::Literal { input: 1 },
        DagNode::Literal { input: 2 },
        DagNode::Or { left: 1, right: 2 },
        DagNode::And { left: 0, right: 3 },
    ];
    let g = ConceptDag::new(3, nodes, 4).unwrap();
    let mut seen = std::collections::HashSet::new();
    for bits in cube(3) {
        if !is_relevant(&g, 3, &bits).unwrap() {
            seen.insert(correlation_at(&g, 3, &bits).unwrap());
        }
    }
    assert_eq!(seen.len(), 2);
}

#[test]
fn relevance_rejects_out_of_range_nodes() {
    let g = build_parity(3, &[0, 1]).unwrap();
    assert!(matches!(
        is_relevant(&g, g.len(), &[false; 3]),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        g.node_values(&[false; 2]),
        Err(Error::ArityMismatch { expected: 3, got: 2 })
    ));
}

fn walk(states: &[State], start: usize, bits: &[bool]) -> Option<bool> {
    let mut q = start;
    for pos in 0.. {
        match states[q] {
            State::Accept => return Some(true),
            State::Reject => return Some(false),
            State::Branch { on0, on1 } => q = if *bits.get(pos)? { on1 } else { on0 },
        }
    }
    unreachable!()
}

#[test]
fn eight_state_automaton_matches_path_walk() {
    let a = random_adfsa(&mut ChaCha8Rng::seed_from_u64(8), 6, 6);
    assert_eq!(a.states().len(), 8);
    for len in 0..=6 {
        for bits in cube(len) {
            assert_eq!(a.run(&bits).ok(), walk(a.states(), a.start(), &bits), "{bits:?}");
        }
    }
    let f = |b: &[bool]| reference_value(&Concept::Adfsa(a.clone()), b);
    let r = exhaustive_equivalence(&f, &Concept::Adfsa(a.clone()), Domain::Strings(6)).unwrap();
    assert_eq!(r.disagreements, 0);
}

#[test]
fn automaton_run_errors() {
    // 0 -> bit0 ? accept : state 1; 1 -> bit1 ? accept : reject
    let states = vec![
        State::Branch { on0: 1, on1: 2 },
        State::Branch { on0: 3, on1: 2 },
        State::Accept,
        State::Reject,
    ];
    let a = Adfsa::new(2, states, 0).unwrap();
    assert!(matches!(
        a.run(&[false, false, true]),
        Err(Error::StringTooLong { len: 3, n: 2 })
    ));
    assert!(matches!(a.run(&[false]), Err(Error::Exhausted { state: 1, read: 1 })));
    assert!(a.run(&[true]).unwrap());
    assert!(!a.run(&[false, false]).unwrap());
}

#[test]
fn malformed_automata_are_rejected() {
    let two_accepts = vec![State::Branch { on0: 1, on1: 2 }, State::Accept, State::Accept];
    assert!(matches!(Adfsa::new(2, two_accepts, 0), Err(Error::InvalidConcept(_))));
    let cycle = vec![
        State::Branch { on0: 1, on1: 2 },
        State::Branch { on0: 0, on1: 3 },
        State::Accept,
        State::Reject,
    ];
    assert!(Adfsa::new(4, cycle, 0).is_err());
    let deep = vec![
        State::Branch { on0: 1, on1: 2 },
        State::Branch { on0: 2, on1: 3 },
        State::Accept,
        State::Reject,
    ];
    assert!(Adfsa::new(1, deep, 0).is_err());
}

#[test]
fn threshold_depth_two_gates_count_inputs() {
    let t = random_threshold(&mut ChaCha8Rng::seed_from_u64(5), 6, 4, 3);
    assert_eq!(t.depth(), 2);
    for bits in cube(6) {
        let vals = t.gate_values(&bits).unwrap();
        assert_eq!(vals[t.root_node()], t.evaluate(&bits).unwrap());
    }
}
