//! Regression checks for every worked example on the named figure graphs.

use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::audit::{approx_ratio, construct_half_witness, lemma_counterexample_n3, rational, theorem1_dichotomy, Ratio};
use crate::error::Result;
use crate::figures::{case1_matchings, case2_matchings, fig6_matchings, figure};
use crate::generate::{generate, Generator};
use crate::graph::{partition_counts, symmetric_difference, utilities, LabeledGraph, Matching, VertexId};
use crate::io::{bundled_instance, read_instance};
use crate::mechanisms::{
    flip_and_match, match_pi, match_pi_reference, match_pi_weights, mix_and_match, naive_serial, optimal_mechanism,
    Bipartition, FlipAndMatch, MatchPi, MixAndMatch, MixMode, NaiveSerial, OptimalMechanism,
};
use crate::solvers::{enumerate_maximum_matchings, max_cardinality_matching};
use crate::strategy::{deviation_utility, second_stage, verify_sp};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn m(pairs: &[(VertexId, VertexId)]) -> Matching {
    Matching::from_pairs(pairs).expect("fixture matchings are valid")
}

fn set(vs: &[VertexId]) -> BTreeSet<VertexId> {
    vs.iter().copied().collect()
}

fn int(k: i64) -> BigRational {
    rational(k, 1)
}

fn pi(text: &str, n: u32) -> Bipartition {
    Bipartition::parse(text, n).expect("fixture bipartitions are valid")
}

/// Compares and describes.
fn expect<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> (bool, String) {
    let ok = got == want;
    let detail = if ok {
        format!("{got:?}")
    } else {
        format!("got {got:?}, want {want:?}")
    };
    (ok, detail)
}

type Check = fn(&Limits) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("fig1a validates", |_| {
        let g = figure("fig1a")?;
        Ok(expect(g.validate(), vec![]))
    }),
    ("fig1b is fig1a without v5,v6", |_| {
        let g = figure("fig1a")?.without(&set(&[5, 6]))?;
        Ok(expect(g.edges().iter().map(|e| e.endpoints()).collect(), vec![(1, 2), (2, 3), (3, 4)]))
    }),
    ("fig1c is fig1a without v2,v3", |_| {
        let g = figure("fig1a")?.without(&set(&[2, 3]))?;
        Ok(expect(g.edges().iter().map(|e| e.endpoints()).collect(), vec![(4, 5), (5, 6), (6, 7)]))
    }),
    ("fig1a utilities of the Match_Π output", |_| {
        let u = utilities(&figure("fig1a")?, &m(&[(2, 3), (4, 5), (6, 7)]))?;
        Ok(expect(u.0, vec![3, 3]))
    }),
    ("fig1a single alternating path", |_| {
        let d = symmetric_difference(&figure("fig1a")?, &m(&[(2, 3), (4, 5), (6, 7)]), &m(&[(2, 3), (5, 6)]))?;
        let paths: Vec<_> = d.components.iter().map(|c| (c.closed, c.vertices.clone())).collect();
        Ok(expect(paths, vec![(false, vec![4, 5, 6, 7])]))
    }),
    ("fig1b unique maximum matching", |_| {
        Ok(expect(max_cardinality_matching(&figure("fig1b")?), m(&[(1, 2), (3, 4)])))
    }),
    ("fig1a Match_({1},{2}) reference", |limits| {
        Ok(expect(
            match_pi_reference(&figure("fig1a")?, &pi("1", 2), limits)?,
            m(&[(2, 3), (4, 5), (6, 7)]),
        ))
    }),
    ("fig1a Match_({1},{2}) by reduction", |_| {
        Ok(expect(match_pi(&figure("fig1a")?, &pi("1", 2))?, m(&[(2, 3), (4, 5), (6, 7)])))
    }),
    ("fig1b Match_({1},{2})", |limits| {
        let g = figure("fig1b")?;
        let fast = match_pi(&g, &pi("1", 2))?;
        let slow = match_pi_reference(&g, &pi("1", 2), limits)?;
        Ok(expect((fast, slow), (m(&[(2, 3)]), m(&[(2, 3)]))))
    }),
    ("cross edge on one side is never matched", |limits| {
        let g = LabeledGraph::from_owners(2, &[1, 2], [(1, 2)])?;
        let fast = match_pi(&g, &pi("1,2", 2))?;
        let slow = match_pi_reference(&g, &pi("1,2", 2), limits)?;
        Ok(expect((fast, slow), (Matching::empty(), Matching::empty())))
    }),
    ("fig5 every bipartition returns the internal edge", |_| {
        let g = figure("fig5")?;
        let outs = Bipartition::all(2).map(|b| match_pi(&g, &b)).collect::<Result<Vec<_>>>()?;
        Ok(expect(outs, vec![m(&[(2, 3)]); 4]))
    }),
    ("fig5 Mix-and-Match expected size 1, ratio 2", |limits| {
        let g = figure("fig5")?;
        let size = mix_and_match(&g, MixMode::Exact, limits)?.expected_size();
        let mix = MixAndMatch {
            mode: MixMode::Exact,
            limits: *limits,
        };
        Ok(expect((size, approx_ratio(&g, &mix)?.ratio), (int(1), Ratio::Finite(int(2)))))
    }),
    ("fig1a Flip-and-Match keeps agent 1 at 3", |_| {
        let g = figure("fig1a")?;
        Ok(expect(flip_and_match(&g)?.expected_utility(&g, 1)?, int(3)))
    }),
    ("fig1b Flip-and-Match branches", |_| {
        let d = flip_and_match(&figure("fig1b")?)?;
        let got: Vec<_> = d.outcomes().iter().map(|o| o.matching.clone()).collect();
        Ok(expect(got, vec![m(&[(2, 3)]), m(&[(1, 2), (3, 4)])]))
    }),
    ("fig1a Flip-and-Match: hiding v5,v6 leaves agent 1 at 3", |_| {
        let g = figure("fig1a")?;
        Ok(expect(deviation_utility(&g, &FlipAndMatch, 1, &set(&[5, 6]))?, int(3)))
    }),
    ("fig1b optimal mechanism", |_| {
        Ok(expect(optimal_mechanism(&figure("fig1b")?), m(&[(1, 2), (3, 4)])))
    }),
    ("fig3 naive serial", |limits| {
        Ok(expect(naive_serial(&figure("fig3")?, limits)?, m(&[(2, 3), (4, 5), (6, 7), (8, 9)])))
    }),
    ("fig3 naive serial after agent 2 hides v5,v6", |limits| {
        let g = figure("fig3b")?;
        let perfect = m(&[(1, 2), (3, 4), (7, 8), (9, 10)]);
        Ok(expect(
            (naive_serial(&g, limits)?, optimal_mechanism(&g)),
            (perfect.clone(), perfect),
        ))
    }),
    ("fig3 agent 2 matches v5,v6 privately", |_| {
        let first = m(&[(1, 2), (3, 4), (7, 8), (9, 10)]);
        Ok(expect(second_stage(&figure("fig3")?, 2, &set(&[5, 6]), &first)?, m(&[(5, 6)])))
    }),
    ("fig3 naive serial is not strategyproof", |limits| {
        let g = figure("fig3")?;
        let found = verify_sp(&g, &NaiveSerial(*limits), limits)?;
        let hit = found.iter().find(|v| v.agent == 2 && v.hidden == set(&[5, 6]));
        Ok(expect(hit.map(|v| (v.truthful.clone(), v.deviation.clone())), Some((int(4), int(6)))))
    }),
    ("fig1a Match_Π is strategyproof for both orders", |limits| {
        let g = figure("fig1a")?;
        let mut counts = Vec::new();
        for text in ["1", "2"] {
            counts.push(verify_sp(&g, &MatchPi(pi(text, 2)), limits)?.len());
        }
        Ok(expect(counts, vec![0, 0]))
    }),
    ("fig1a optimal mechanism is not strategyproof", |limits| {
        let n = verify_sp(&figure("fig1a")?, &OptimalMechanism, limits)?.len();
        Ok((n > 0, format!("{n} profitable deviations")))
    }),
    ("lower bound: Match_({1},{2}) halves fig1b", |_| {
        let r = theorem1_dichotomy(&MatchPi(pi("1", 2)))?;
        Ok(expect((r.sp_horn(), r.ratio_g1.ratio), (false, Ratio::Finite(int(2)))))
    }),
    ("lower bound: optimal mechanism can be manipulated", |_| {
        let r = theorem1_dichotomy(&OptimalMechanism)?;
        Ok((r.sp_horn(), format!("{} gaining deviations", r.sp_violations.len())))
    }),
    ("fig6 M and M' are maximum with equal internal totals", |limits| {
        let g = figure("fig6")?;
        let (a, b) = fig6_matchings();
        let all = enumerate_maximum_matchings(&g, limits)?;
        let internal = |x: &Matching| partition_counts(&g, x).map(|c| c.internal_total());
        let ok = all.contains(&a) && all.contains(&b) && internal(&a)? == internal(&b)?;
        let (ua, ub) = (utilities(&g, &a)?, utilities(&g, &b)?);
        let (eq, d) = expect((ua.0, ub.0), (vec![3, 2, 1], vec![2, 3, 1]));
        Ok((ok && eq, d))
    }),
    ("fig6 three-agent tie counterexample", |limits| {
        let c = lemma_counterexample_n3(&figure("fig6")?, limits)?;
        let got = c.map(|c| (c.u.get(1), c.u_prime.get(1)));
        Ok((got.is_some_and(|(a, b)| a != b), format!("{got:?}")))
    }),
    ("fig5 half witness", |_| {
        let w = construct_half_witness(&figure("fig5")?);
        let (ok, d) = expect((w.m_prime.clone(), w.lhs.clone(), w.rhs.clone()), (m(&[(2, 3)]), int(1), int(1)));
        Ok((ok && w.holds(), d))
    }),
    ("fig5 reduction weights", |_| {
        let w = match_pi_weights(&figure("fig5")?, &pi("1", 2))?;
        let got = (
            w.weight_of(crate::graph::Edge::new(2, 3)).to_string(),
            w.weight_of(crate::graph::Edge::new(1, 2)).to_string(),
        );
        Ok(expect(got, ("4374".to_string(), "811".to_string())))
    }),
    ("case1 path keeps the larger internal side", |_| {
        let g = figure("case1")?;
        let (a, b) = case1_matchings();
        let counts = (partition_counts(&g, &a)?.get(1, 1), partition_counts(&g, &b)?.get(1, 1));
        Ok(expect(counts, (3, 2)))
    }),
    ("case2 swap keeps utilities", |_| {
        let g = figure("case2")?;
        let (a, b, c) = case2_matchings();
        let u: Vec<_> = [&a, &b, &c].iter().map(|x| utilities(&g, x).map(|u| u.0)).collect::<Result<_>>()?;
        let (ok, d) = expect(u[0].clone(), vec![1, 3, 2]);
        Ok((ok && u[1] == vec![1, 2, 3] && u[2] == vec![1, 3, 2], d))
    }),
    ("bundled fig1a instance file", |_| {
        let text = bundled_instance("fig1a").unwrap_or_default();
        let g = read_instance(text.as_bytes())?;
        Ok(expect((g.vertex_count(), g.num_agents(), g == figure("fig1a")?), (7, 2, true)))
    }),
    ("generated figure graphs", |_| {
        let owners = |name: &str| -> Result<Vec<u32>> {
            let g = generate(&Generator::Figure(name.into()), 0)?;
            Ok(g.labeled_vertices().iter().map(|&(_, a)| a).collect())
        };
        Ok(expect((owners("fig5")?, owners("fig3")?), (vec![1, 2, 2, 1], vec![2, 3, 1, 2, 2, 2, 2, 1, 3, 2])))
    }),
];

/// Runs every check; errors count as failures.
pub fn fixtures(limits: &Limits) -> Vec<FixtureResult> {
    CHECKS
        .iter()
        .map(|&(name, check)| match check(limits) {
            Ok((passed, detail)) => FixtureResult { name, passed, detail },
            Err(e) => FixtureResult {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}
