//! Approximation ratios, the half-witness construction, the lower-bound
//! dichotomy, tie checks between maximum matchings, and the Flip-and-Match
//! search.

mod fixtures;
mod hunt;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::figures::figure;
use crate::graph::{
    partition_counts_unchecked, symmetric_difference_unchecked, utilities_unchecked, LabeledGraph, Matching, Side,
    UtilityVector, VertexId,
};
use crate::mechanisms::Mechanism;
use crate::solvers::{enumerate_maximum_matchings, max_cardinality_matching, max_internal_matching_size};
use crate::strategy::{deviation_utility, SpViolation};
use crate::Limits;

pub use fixtures::{fixtures, FixtureResult};
pub use hunt::{hunt_flip_sp, reverify_flip_violation, Certificate, HuntParams, HuntReport};

/// `|M*| / E[|f(G)|]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ratio {
    Finite(BigRational),
    /// The mechanism matches nothing although something can be matched.
    Unbounded,
    /// Nothing can be matched at all.
    Undefined,
}

impl Ratio {
    pub fn of(optimum: usize, expected: &BigRational) -> Ratio {
        match (optimum, expected.is_zero()) {
            (0, true) => Ratio::Undefined,
            (_, true) => Ratio::Unbounded,
            _ => Ratio::Finite(BigRational::from_integer(BigInt::from(optimum)) / expected),
        }
    }

    /// Whether the ratio is at most `bound`; `Undefined` passes vacuously.
    pub fn at_most(&self, bound: &BigRational) -> bool {
        match self {
            Ratio::Finite(r) => r <= bound,
            Ratio::Unbounded => false,
            Ratio::Undefined => true,
        }
    }

    pub fn at_least(&self, bound: &BigRational) -> bool {
        match self {
            Ratio::Finite(r) => r >= bound,
            Ratio::Unbounded => true,
            Ratio::Undefined => false,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(r) => write!(f, "{r}"),
            Ratio::Unbounded => f.write_str("unbounded"),
            Ratio::Undefined => f.write_str("undefined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxReport {
    pub optimum: usize,
    pub expected_size: BigRational,
    pub ratio: Ratio,
}

pub fn approx_ratio(graph: &LabeledGraph, mechanism: &dyn Mechanism) -> Result<ApproxReport> {
    if !mechanism.exact() {
        return Err(Error::NotDeterministic(format!(
            "{} samples one outcome; its expectation is unknown",
            mechanism.name()
        )));
    }
    let optimum = max_cardinality_matching(graph).len();
    let expected_size = mechanism.outcomes(graph)?.expected_size();
    let ratio = Ratio::of(optimum, &expected_size);
    Ok(ApproxReport {
        optimum,
        expected_size,
        ratio,
    })
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The matching built in the 2-approximation argument for Mix-and-Match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfWitness {
    /// A maximum-cardinality matching.
    pub m_star: Matching,
    /// The union of one maximum internal matching per agent.
    pub m_double_star: Matching,
    /// Per component of `M* Δ M**`, the `M**` edges when they hold more
    /// internal edges than the `M*` edges, otherwise the `M*` edges.
    pub m_prime: Matching,
    /// `Σ|M'_ii| + ½ Σ_{i<j} |M'_ij|`.
    pub lhs: BigRational,
    /// `Σ|M*_ii| + ½ Σ_{i<j} |M*_ij|`.
    pub rhs: BigRational,
    /// `|M'_ii| = ν_i` for every agent.
    pub internal_maximal: bool,
}

impl HalfWitness {
    pub fn holds(&self) -> bool {
        self.internal_maximal && self.lhs >= self.rhs
    }
}

fn half_weighted(graph: &LabeledGraph, m: &Matching) -> BigRational {
    let counts = partition_counts_unchecked(graph, m);
    BigRational::from_integer(counts.internal_total().into()) + rational(counts.external_total().into(), 2)
}

pub fn construct_half_witness(graph: &LabeledGraph) -> HalfWitness {
    let m_star = max_cardinality_matching(graph);
    let mut union = Vec::new();
    for agent in 1..=graph.num_agents() {
        union.extend_from_slice(max_cardinality_matching(&graph.agent_subgraph(agent)).edges());
    }
    let m_double_star = Matching::from_edges_unchecked(union);

    let mut chosen: Vec<_> = m_star
        .edges()
        .iter()
        .copied()
        .filter(|&e| m_double_star.contains(e))
        .collect();
    for component in symmetric_difference_unchecked(&m_star, &m_double_star).components {
        let internal = |side| component.edges_from(side).filter(|&e| graph.is_internal(e)).count();
        let side = if internal(Side::Second) > internal(Side::First) {
            Side::Second
        } else {
            Side::First
        };
        chosen.extend(component.edges_from(side));
    }
    let m_prime = Matching::from_edges_unchecked(chosen);

    let counts = partition_counts_unchecked(graph, &m_prime);
    let internal_maximal = (1..=graph.num_agents())
        .all(|a| counts.get(a, a) as usize == max_internal_matching_size(graph, a).expect("agent in range"));
    HalfWitness {
        lhs: half_weighted(graph, &m_prime),
        rhs: half_weighted(graph, &m_star),
        m_star,
        m_double_star,
        m_prime,
        internal_maximal,
    }
}

/// The lower-bound argument on the 7-vertex path: a deterministic mechanism
/// either lets one of two specific deviations gain or returns at most half
/// the optimum on one of the two reduced graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DichotomyReport {
    pub mechanism: String,
    pub matching_g: Matching,
    /// Gaining deviations among: agent 1 hides {v5,v6}, agent 2 hides {v2,v3}.
    pub sp_violations: Vec<SpViolation>,
    pub ratio_g1: ApproxReport,
    pub ratio_g2: ApproxReport,
}

impl DichotomyReport {
    pub fn sp_horn(&self) -> bool {
        !self.sp_violations.is_empty()
    }

    pub fn ratio_horn(&self) -> bool {
        let two = rational(2, 1);
        self.ratio_g1.ratio.at_least(&two) || self.ratio_g2.ratio.at_least(&two)
    }

    pub fn holds(&self) -> bool {
        self.sp_horn() || self.ratio_horn()
    }
}

pub fn theorem1_dichotomy(mechanism: &dyn Mechanism) -> Result<DichotomyReport> {
    let g = figure("fig1a")?;
    let outcome = mechanism.outcomes(&g)?;
    let matching_g = outcome
        .as_point()
        .cloned()
        .ok_or_else(|| Error::NotDeterministic(format!("{} is randomized", mechanism.name())))?;
    let mut sp_violations = Vec::new();
    for (agent, hidden) in [(1, [5, 6]), (2, [2, 3])] {
        let hidden: BTreeSet<VertexId> = hidden.into_iter().collect();
        let truthful = outcome.expected_utility(&g, agent)?;
        let deviation = deviation_utility(&g, mechanism, agent, &hidden)?;
        if deviation > truthful {
            sp_violations.push(SpViolation {
                agent,
                hidden,
                truthful,
                deviation,
            });
        }
    }
    Ok(DichotomyReport {
        mechanism: mechanism.name(),
        matching_g,
        sp_violations,
        ratio_g1: approx_ratio(&figure("fig1b")?, mechanism)?,
        ratio_g2: approx_ratio(&figure("fig1c")?, mechanism)?,
    })
}

/// Two maximum matchings with the same number of internal edges but
/// different utility vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieCounterexample {
    pub m: Matching,
    pub m_prime: Matching,
    pub u: UtilityVector,
    pub u_prime: UtilityVector,
}

/// The first counterexample pair in canonical order, if any.
pub fn tie_counterexample(graph: &LabeledGraph, limits: &Limits) -> Result<Option<TieCounterexample>> {
    let all = enumerate_maximum_matchings(graph, limits)?;
    let keyed: Vec<(u32, UtilityVector)> = all
        .iter()
        .map(|m| {
            (
                partition_counts_unchecked(graph, m).internal_total(),
                utilities_unchecked(graph, m),
            )
        })
        .collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if keyed[i].0 == keyed[j].0 && keyed[i].1 != keyed[j].1 {
                return Ok(Some(TieCounterexample {
                    m: all[i].clone(),
                    m_prime: all[j].clone(),
                    u: keyed[i].1.clone(),
                    u_prime: keyed[j].1.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// With two agents, maximum matchings with equal internal totals always
/// have equal utility vectors. `None` confirms it on `graph`.
pub fn lemma_two_agent_tie(graph: &LabeledGraph, limits: &Limits) -> Result<Option<TieCounterexample>> {
    require_agents(graph, 2)?;
    tie_counterexample(graph, limits)
}

/// The same search on a three-agent graph, where the claim fails.
pub fn lemma_counterexample_n3(graph: &LabeledGraph, limits: &Limits) -> Result<Option<TieCounterexample>> {
    require_agents(graph, 3)?;
    tie_counterexample(graph, limits)
}

/// The narrower two-agent claim: maximum matchings with the *largest*
/// internal total share one utility vector. This is the case Flip-and-Match
/// relies on, and unlike the unrestricted claim it has no known
/// counterexample.
pub fn max_internal_tie(graph: &LabeledGraph, limits: &Limits) -> Result<Option<TieCounterexample>> {
    require_agents(graph, 2)?;
    let all = enumerate_maximum_matchings(graph, limits)?;
    let internal = |m: &Matching| partition_counts_unchecked(graph, m).internal_total();
    let best = all.iter().map(internal).max().unwrap_or(0);
    let mut top = all.into_iter().filter(|m| internal(m) == best);
    let Some(first) = top.next() else { return Ok(None) };
    let u = utilities_unchecked(graph, &first);
    for other in top {
        let u_prime = utilities_unchecked(graph, &other);
        if u_prime != u {
            return Ok(Some(TieCounterexample {
                m: first,
                m_prime: other,
                u,
                u_prime,
            }));
        }
    }
    Ok(None)
}

fn require_agents(graph: &LabeledGraph, n: u32) -> Result<()> {
    if graph.num_agents() != n {
        return Err(Error::UnsupportedAgentCount {
            expected: n,
            actual: graph.num_agents(),
        });
    }
    Ok(())
}

/// `true` when every two maximum matchings of `graph` with equal internal
/// totals share a utility vector, `false` otherwise.
pub fn ties_agree(graph: &LabeledGraph, limits: &Limits) -> Result<bool> {
    Ok(tie_counterexample(graph, limits)?.is_none())
}

/// `E[|f(G)|] ≥ ½|M*|`, exactly.
pub fn at_least_half(report: &ApproxReport) -> bool {
    report.expected_size.clone() * BigInt::from(2) >= BigRational::from_integer(report.optimum.into())
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::mechanisms::{Bipartition, FlipAndMatch, MatchPi, MixAndMatch, MixMode, NaiveSerial, OptimalMechanism};

    fn one() -> BigRational {
        BigRational::one()
    }

    #[test]
    fn fig5_mix_ratio_is_two() {
        let g = figure("fig5").unwrap();
        let mix = MixAndMatch {
            mode: MixMode::Exact,
            limits: Limits::default(),
        };
        let r = approx_ratio(&g, &mix).unwrap();
        assert_eq!(r.optimum, 2);
        assert_eq!(r.ratio, Ratio::Finite(rational(2, 1)));
        assert!(at_least_half(&r));
        let sampled = MixAndMatch {
            mode: MixMode::Sampled(1),
            limits: Limits::default(),
        };
        assert!(approx_ratio(&g, &sampled).is_err());
    }

    #[test]
    fn ratios() {
        let g = figure("fig1a").unwrap();
        assert_eq!(approx_ratio(&g, &OptimalMechanism).unwrap().ratio, Ratio::Finite(one()));
        assert_eq!(approx_ratio(&g, &FlipAndMatch).unwrap().ratio, Ratio::Finite(one()));
        let edgeless = LabeledGraph::from_owners(2, &[1, 2], []).unwrap();
        assert_eq!(approx_ratio(&edgeless, &OptimalMechanism).unwrap().ratio, Ratio::Undefined);
        let cross = LabeledGraph::from_owners(2, &[1, 2], [(1, 2)]).unwrap();
        let same_side = MatchPi(Bipartition::parse("1,2", 2).unwrap());
        assert_eq!(approx_ratio(&cross, &same_side).unwrap().ratio, Ratio::Unbounded);
    }

    #[test]
    fn half_witness_on_fig5() {
        let w = construct_half_witness(&figure("fig5").unwrap());
        assert_eq!(w.m_star, Matching::from_pairs(&[(1, 2), (3, 4)]).unwrap());
        assert_eq!(w.m_double_star, Matching::from_pairs(&[(2, 3)]).unwrap());
        assert_eq!(w.m_prime, Matching::from_pairs(&[(2, 3)]).unwrap());
        assert_eq!((w.lhs.clone(), w.rhs.clone()), (one(), one()));
        assert!(w.holds());
    }

    #[test]
    fn half_witness_with_internal_edges_only() {
        let g = LabeledGraph::from_owners(2, &[1, 1, 2, 2, 2], [(1, 2), (3, 4), (4, 5)]).unwrap();
        let w = construct_half_witness(&g);
        assert_eq!(w.m_prime, w.m_star);
        assert_eq!(w.m_prime, w.m_double_star);
        assert!(w.holds());
    }

    #[test]
    fn dichotomy_horns() {
        let optimal = theorem1_dichotomy(&OptimalMechanism).unwrap();
        assert!(optimal.sp_horn());
        let mp = theorem1_dichotomy(&MatchPi(Bipartition::parse("1", 2).unwrap())).unwrap();
        assert!(!mp.sp_horn());
        assert!(mp.ratio_horn());
        assert_eq!(mp.ratio_g1.ratio, Ratio::Finite(rational(2, 1)));
        let naive = theorem1_dichotomy(&NaiveSerial(Limits::default())).unwrap();
        assert_eq!(naive.matching_g, mp.matching_g);
        assert!(naive.ratio_horn() && !naive.sp_horn());
    }

    #[test]
    fn lemma_checks() {
        let limits = Limits::default();
        assert_eq!(lemma_two_agent_tie(&figure("fig1a").unwrap(), &limits).unwrap(), None);
        let c = lemma_counterexample_n3(&figure("fig6").unwrap(), &limits).unwrap().unwrap();
        assert_eq!(c.m, Matching::from_pairs(&[(1, 2), (3, 4), (5, 6)]).unwrap());
        assert_eq!(c.u.0, vec![3, 2, 1]);
        assert_eq!(c.u_prime.0, vec![2, 3, 1]);
        assert!(lemma_two_agent_tie(&figure("fig6").unwrap(), &limits).is_err());
    }

    #[test]
    fn unrestricted_two_agent_tie_claim_fails() {
        // Two components of M Δ M' trade one internal edge each way.
        let g = LabeledGraph::from_owners(2, &[1, 2, 1, 2, 1, 2], [(1, 2), (1, 5), (1, 6), (2, 3), (2, 4)]).unwrap();
        let limits = Limits::default();
        let c = lemma_two_agent_tie(&g, &limits).unwrap().unwrap();
        assert_eq!(c.m, Matching::from_pairs(&[(1, 5), (2, 3)]).unwrap());
        assert_eq!(c.m_prime, Matching::from_pairs(&[(1, 6), (2, 4)]).unwrap());
        assert_eq!((c.u.0, c.u_prime.0), (vec![3, 1], vec![1, 3]));
        // The unique internal-maximal maximum matching is {(v1,v5),(v2,v4)}.
        assert_eq!(max_internal_tie(&g, &limits).unwrap(), None);
    }
}
