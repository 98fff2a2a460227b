//! Worked examples through the public API, one test per operation.

use std::collections::BTreeSet;

use mechmatch::audit::{
    approx_ratio, construct_half_witness, lemma_counterexample_n3, rational, theorem1_dichotomy, Ratio,
};
use mechmatch::figures::{figure, fig6_matchings};
use mechmatch::generate::{generate, Generator};
use mechmatch::io::{bundled_instance, read_instance, write_instance, write_results, ResultRow};
use mechmatch::mechanisms::{
    flip_and_match, match_pi, match_pi_weights, naive_serial, optimal_mechanism, Bipartition,
};
use mechmatch::strategy::{second_stage, verify_sp};
use mechmatch::{
    utilities, FlipAndMatch, LabeledGraph, Limits, MatchPi, Matching, MixAndMatch, MixMode, NaiveSerial,
    OptimalMechanism,
};
use num_bigint::BigUint;

fn m(pairs: &[(u32, u32)]) -> Matching {
    Matching::from_pairs(pairs).unwrap()
}

fn bip(text: &str, n: u32) -> Bipartition {
    Bipartition::parse(text, n).unwrap()
}

#[test]
fn fig1_match_pi_and_optimum() {
    let g = figure("fig1a").unwrap();
    let got = match_pi(&g, &bip("1", 2)).unwrap();
    assert_eq!(got, m(&[(2, 3), (4, 5), (6, 7)]));
    assert_eq!(utilities(&g, &got).unwrap().to_string(), "(3,3)");

    let b = figure("fig1b").unwrap();
    assert_eq!(match_pi(&b, &bip("1", 2)).unwrap(), m(&[(2, 3)]));
    assert_eq!(optimal_mechanism(&b), m(&[(1, 2), (3, 4)]));
}

#[test]
fn fig3_naive_serial_is_manipulable() {
    let limits = Limits::default();
    let g = figure("fig3").unwrap();
    let found = verify_sp(&g, &NaiveSerial(limits), &limits).unwrap();
    let hidden: BTreeSet<u32> = [5, 6].into_iter().collect();
    let v = found.iter().find(|v| v.agent == 2 && v.hidden == hidden).unwrap();
    assert_eq!(v.gain(), rational(2, 1));
    assert_eq!(naive_serial(&g, &limits).unwrap(), m(&[(2, 3), (4, 5), (6, 7), (8, 9)]));
    let after = naive_serial(&figure("fig3b").unwrap(), &limits).unwrap();
    assert_eq!(after, m(&[(1, 2), (3, 4), (7, 8), (9, 10)]));
}

#[test]
fn fig5_weights_and_mix_ratio() {
    let g = figure("fig5").unwrap();
    let w = match_pi_weights(&g, &bip("1", 2)).unwrap();
    let weight = |u, v| w.iter().find(|(e, _)| e.endpoints() == (u, v)).unwrap().1.clone();
    assert_eq!(weight(2, 3), BigUint::from(4374u32));
    assert_eq!(weight(1, 2), BigUint::from(811u32));

    let report = approx_ratio(&g, &MixAndMatch { mode: MixMode::Exact, limits: Limits::default() }).unwrap();
    assert_eq!(report.optimum, 2);
    assert_eq!(report.expected_size, rational(1, 1));
    assert_eq!(report.ratio, Ratio::Finite(rational(2, 1)));
}

#[test]
fn match_pi_is_strategyproof_on_the_figures() {
    let limits = Limits::default();
    for name in ["fig1a", "fig3", "fig5", "fig6", "case2"] {
        let g = figure(name).unwrap();
        for mask in 0..1u64 << g.num_agents() {
            let mech = MatchPi(Bipartition::from_mask(g.num_agents(), mask));
            assert!(verify_sp(&g, &mech, &limits).unwrap().is_empty(), "{name} mask {mask}");
        }
    }
}

#[test]
fn optimal_mechanism_is_not_strategyproof() {
    let limits = Limits::default();
    assert!(!verify_sp(&figure("fig1a").unwrap(), &OptimalMechanism, &limits).unwrap().is_empty());
    assert!(theorem1_dichotomy(&OptimalMechanism).unwrap().holds());
    assert!(theorem1_dichotomy(&MatchPi(bip("1", 2))).unwrap().holds());
}

#[test]
fn flip_on_fig1a() {
    let g = figure("fig1a").unwrap();
    let d = flip_and_match(&g).unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!(d.expected_size(), rational(3, 1));
    assert_eq!(approx_ratio(&g, &FlipAndMatch).unwrap().ratio, Ratio::Finite(rational(1, 1)));
    assert!(flip_and_match(&figure("fig3").unwrap()).is_err());
}

#[test]
fn second_stage_uses_hidden_vertices() {
    let g = figure("fig3").unwrap();
    let hidden: BTreeSet<u32> = [5, 6].into_iter().collect();
    let reported = g.without(&hidden).unwrap();
    let first = naive_serial(&reported, &Limits::default()).unwrap();
    let extra = second_stage(&g, 2, &hidden, &first).unwrap();
    assert_eq!(extra.len(), 1);
    assert!(second_stage(&g, 1, &hidden, &first).is_err());
}

#[test]
fn fig6_counterexample() {
    let g = figure("fig6").unwrap();
    let (a, b) = fig6_matchings();
    assert_eq!(utilities(&g, &a).unwrap().to_string(), "(3,2,1)");
    assert_eq!(utilities(&g, &b).unwrap().to_string(), "(2,3,1)");
    assert!(lemma_counterexample_n3(&g, &Limits::default()).unwrap().is_some());
}

#[test]
fn half_witness_on_the_figures() {
    for name in mechmatch::figures::FIGURE_NAMES {
        let w = construct_half_witness(&figure(name).unwrap());
        assert!(w.holds(), "{name}");
    }
}

#[test]
fn instance_files() {
    let empty = LabeledGraph::from_owners(2, &[], []).unwrap();
    assert_eq!(read_instance(&write_instance(&empty)).unwrap(), empty);
    let fig1a = read_instance(bundled_instance("fig1a").unwrap().as_bytes()).unwrap();
    assert_eq!(fig1a.vertex_count(), 7);
    assert_eq!(fig1a.edges().len(), 6);
    let owner0 = br#"{"schema_version": 1, "agents": 2, "vertices": [[1, 0]], "edges": []}"#;
    assert!(read_instance(owner0).is_err());
}

#[test]
fn generators() {
    let r = Generator::Random { vertices: 6, agents: 2, p: 0.5 };
    assert_eq!(write_instance(&generate(&r, 7).unwrap()), write_instance(&generate(&r, 7).unwrap()));
    let fig3 = generate(&Generator::Figure("fig3".into()), 0).unwrap();
    let owners: Vec<u32> = fig3.labeled_vertices().iter().map(|&(_, a)| a).collect();
    assert_eq!(owners, [2, 3, 1, 2, 2, 2, 2, 1, 3, 2]);
    assert!(generate(&Generator::Figure("fig2".into()), 0).is_err());
}

#[test]
fn result_rows() {
    let limits = Limits::default();
    let fig5 = figure("fig5").unwrap();
    let report = approx_ratio(&fig5, &MixAndMatch { mode: MixMode::Exact, limits }).unwrap();
    let fig3 = figure("fig3").unwrap();
    let v = verify_sp(&fig3, &NaiveSerial(limits), &limits).unwrap();
    let rows = [ResultRow::approx("fig5", "mix", &report), ResultRow::violation("fig3", "naive", &v[0])];
    let text = String::from_utf8(write_results(&rows).unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "fig5,mix,,,2,1,1,2,1,");
    assert!(lines[2].starts_with("fig3,naive,,,,2,1,,,"), "{}", lines[2]);
}
