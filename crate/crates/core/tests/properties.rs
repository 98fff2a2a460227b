//! Randomized invariants, each checked against an enumeration oracle.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use mechmatch::audit::construct_half_witness;
use mechmatch::io::{read_instance, write_instance};
use mechmatch::mechanisms::{is_feasible, match_pi, match_pi_reference, mix_and_match};
use mechmatch::solvers::{all_matchings, brute_force_max_weight, max_weight_matching, WeightAssignment};
use mechmatch::strategy::{deviation_utility, verify_sp};
use mechmatch::{
    partition_counts, symmetric_difference, utilities, Bipartition, LabeledGraph, Limits, MatchPi, Mechanism,
    MixMode, VertexId,
};

fn graph(max_vertices: usize, max_agents: u32) -> impl Strategy<Value = LabeledGraph> {
    (1..=max_agents, 0..=max_vertices).prop_flat_map(|(n, m)| {
        let pairs = m * m.saturating_sub(1) / 2;
        (
            Just(n),
            proptest::collection::vec(1..=n, m),
            proptest::collection::vec(any::<bool>(), pairs),
        )
            .prop_map(|(n, owners, bits)| {
                let m = owners.len() as VertexId;
                let all = (1..=m).flat_map(|u| (u + 1..=m).map(move |v| (u, v)));
                let edges: Vec<_> = all.zip(bits).filter(|&(_, b)| b).map(|(e, _)| e).collect();
                LabeledGraph::from_owners(n, &owners, edges).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn utility_identities(g in graph(8, 3)) {
        for m in all_matchings(&g, &Limits::default()).unwrap() {
            let u = utilities(&g, &m).unwrap();
            let c = partition_counts(&g, &m).unwrap();
            prop_assert_eq!(u.total() as usize, 2 * m.len());
            prop_assert_eq!(c.total() as usize, m.len());
            for i in 1..=g.num_agents() {
                let cross: u32 = (1..=g.num_agents()).filter(|&j| j != i).map(|j| c.get(i, j)).sum();
                prop_assert_eq!(u.get(i), 2 * c.get(i, i) + cross);
            }
        }
    }

    #[test]
    fn induction_composes(g in graph(8, 3), a in any::<u16>(), b in any::<u16>()) {
        let vs: Vec<VertexId> = g.vertices().collect();
        let outer: BTreeSet<VertexId> = vs.iter().enumerate().filter(|(k, _)| a >> k & 1 == 1).map(|(_, &v)| v).collect();
        let inner: BTreeSet<VertexId> = outer.iter().enumerate().filter(|(k, _)| b >> k & 1 == 1).map(|(_, &v)| v).collect();
        let two_steps = g.induced_subgraph(&outer).unwrap().induced_subgraph(&inner).unwrap();
        prop_assert_eq!(&two_steps, &g.induced_subgraph(&inner).unwrap());
        let once = g.induced_subgraph(&outer).unwrap();
        prop_assert_eq!(once.induced_subgraph(&outer).unwrap(), once);
    }

    #[test]
    fn symmetric_differences_alternate(g in graph(8, 2), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let all = all_matchings(&g, &Limits::default()).unwrap();
        let (a, b) = (i.get(&all), j.get(&all));
        let d = symmetric_difference(&g, a, b).unwrap();
        let expected = a.edges().iter().filter(|&&e| !b.contains(e)).count()
            + b.edges().iter().filter(|&&e| !a.contains(e)).count();
        prop_assert_eq!(d.edge_count(), expected);
        let mut seen = BTreeSet::new();
        for c in &d.components {
            prop_assert!(c.vertices.iter().all(|&v| seen.insert(v)), "components share a vertex");
            prop_assert!(c.edges.windows(2).all(|w| w[0].1 != w[1].1));
            if c.closed {
                prop_assert_eq!(c.edges.len() % 2, 0);
            }
        }
    }

    #[test]
    fn weighted_solver_matches_brute_force(g in graph(8, 2), seed in proptest::collection::vec(0u32..=20, 28)) {
        let w: WeightAssignment = g.edges().iter().zip(seed.iter().cycle()).map(|(&e, &x)| (e, BigUint::from(x))).collect();
        let got = max_weight_matching(&g, &w).unwrap();
        let (want, _) = brute_force_max_weight(&g, &w, &Limits::default()).unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn match_pi_is_feasible_and_serially_best(g in graph(8, 3), mask in any::<u64>()) {
        let bip = Bipartition::from_mask(g.num_agents(), mask);
        let got = match_pi(&g, &bip).unwrap();
        prop_assert!(is_feasible(&g, &got, &bip));
        prop_assert_eq!(&got, &match_pi_reference(&g, &bip, &Limits::default()).unwrap());
        let key = |m: &mechmatch::Matching| {
            let u = utilities(&g, m).unwrap();
            (m.len(), bip.priority().agents().iter().map(|&a| u.get(a)).collect::<Vec<_>>())
        };
        for other in all_matchings(&g, &Limits::default()).unwrap() {
            if is_feasible(&g, &other, &bip) {
                prop_assert!(key(&other) <= key(&got));
            }
        }
    }

    #[test]
    fn two_agent_match_pi_is_inclusion_maximal(g in graph(8, 2)) {
        prop_assume!(g.num_agents() == 2);
        let bip = Bipartition::parse("1", 2).unwrap();
        let got = match_pi(&g, &bip).unwrap();
        for &e in g.edges() {
            prop_assert!(got.contains(e) || got.covers(e.lo()) || got.covers(e.hi()));
        }
    }

    #[test]
    fn mix_distribution_is_exact(g in graph(7, 3)) {
        let d = mix_and_match(&g, MixMode::Exact, &Limits::default()).unwrap();
        prop_assert_eq!(d.len(), 1 << g.num_agents());
        prop_assert_eq!(d.total_probability(), num_rational::BigRational::from_integer(1.into()));
    }

    #[test]
    fn match_pi_is_strategyproof(g in graph(7, 3), mask in any::<u64>()) {
        let mech = MatchPi(Bipartition::from_mask(g.num_agents(), mask));
        prop_assert!(verify_sp(&g, &mech, &Limits::default()).unwrap().is_empty());
    }

    #[test]
    fn hiding_an_isolated_vertex_changes_nothing(g in graph(7, 3), mask in any::<u64>()) {
        let mech = MatchPi(Bipartition::from_mask(g.num_agents(), mask));
        let truthful = mech.outcomes(&g).unwrap();
        let isolated: Vec<VertexId> = g.vertices().filter(|&v| g.edges().iter().all(|e| !e.touches(v))).collect();
        for v in isolated {
            let owner = g.owner(v).unwrap();
            let hidden: BTreeSet<VertexId> = [v].into_iter().collect();
            let reported = g.without(&hidden).unwrap();
            let after = mech.outcomes(&reported).unwrap();
            for a in 1..=g.num_agents() {
                let before = truthful.expected_utility(&g, a).unwrap();
                prop_assert_eq!(after.expected_utility(&reported, a).unwrap(), before.clone());
                if a == owner {
                    prop_assert_eq!(deviation_utility(&g, &mech, a, &hidden).unwrap(), before);
                }
            }
        }
    }

    #[test]
    fn hiding_nothing_is_truthful(g in graph(7, 3), mask in any::<u64>()) {
        let mech = MatchPi(Bipartition::from_mask(g.num_agents(), mask));
        let truthful = mech.outcomes(&g).unwrap();
        for a in 1..=g.num_agents() {
            prop_assert_eq!(
                deviation_utility(&g, &mech, a, &BTreeSet::new()).unwrap(),
                truthful.expected_utility(&g, a).unwrap()
            );
        }
    }

    #[test]
    fn half_witness_holds(g in graph(9, 4)) {
        prop_assert!(construct_half_witness(&g).holds());
    }

    #[test]
    fn instances_round_trip(g in graph(9, 4)) {
        let bytes = write_instance(&g);
        let back = read_instance(&bytes).unwrap();
        prop_assert_eq!(write_instance(&back), bytes);
        prop_assert_eq!(back, g);
    }
}
