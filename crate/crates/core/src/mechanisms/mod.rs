//! Mechanisms as deterministic functions or exact outcome distributions.

mod match_pi;
mod randomized;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{utility_unchecked, AgentId, LabeledGraph, Matching};
use crate::solvers::max_cardinality_matching;
use crate::Limits;

pub use match_pi::{
    internal_weight_dominates, is_feasible, match_pi, match_pi_reference, match_pi_weights, naive_serial,
};
pub use randomized::{flip_and_match, flip_and_match_reference, flip_branch_b, mix_and_match, sampled_bipartition};

/// An ordered split `(Π1, Π2)` of the agents `1..=n`. Either side may be
/// empty, and `(A, B)` differs from `(B, A)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    /// `second[i]` is true when agent `i + 1` is in `Π2`.
    second: Vec<bool>,
}

impl Bipartition {
    /// `Π1 = side1`, `Π2` the complement.
    pub fn new(num_agents: u32, side1: impl IntoIterator<Item = AgentId>) -> Result<Self> {
        let mut second = vec![true; num_agents as usize];
        for a in side1 {
            if a == 0 || a > num_agents {
                return Err(Error::InvalidBipartition(format!(
                    "agent {a} is not in 1..={num_agents}"
                )));
            }
            if !second[a as usize - 1] {
                return Err(Error::InvalidBipartition(format!("agent {a} listed twice")));
            }
            second[a as usize - 1] = false;
        }
        Ok(Bipartition { second })
    }

    /// Bit `i` of `mask` set puts agent `i + 1` in `Π2`.
    pub fn from_mask(num_agents: u32, mask: u64) -> Self {
        assert!(num_agents <= 64, "masks cover at most 64 agents");
        Bipartition {
            second: (0..num_agents).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    /// All `2^n` labeled bipartitions in mask order. Requires `n < 64`.
    pub fn all(num_agents: u32) -> impl Iterator<Item = Bipartition> {
        assert!(num_agents < 64, "cannot enumerate 2^{num_agents} bipartitions");
        (0..1u64 << num_agents).map(move |mask| Bipartition::from_mask(num_agents, mask))
    }

    /// Parses the comma-separated agent ids of `Π1`; `Π2` is the rest. An
    /// empty string means `Π1 = ∅`.
    pub fn parse(text: &str, num_agents: u32) -> Result<Self> {
        let text = text.trim();
        let mut side1 = Vec::new();
        if !text.is_empty() {
            for part in text.split(',') {
                let a: AgentId = part.trim().parse().map_err(|_| {
                    Error::InvalidBipartition(format!("{part:?} is not an agent id in {text:?}"))
                })?;
                side1.push(a);
            }
        }
        Bipartition::new(num_agents, side1)
    }

    pub fn num_agents(&self) -> u32 {
        self.second.len() as u32
    }

    pub fn in_first(&self, agent: AgentId) -> bool {
        !self.second[agent as usize - 1]
    }

    pub fn same_side(&self, a: AgentId, b: AgentId) -> bool {
        self.second[a as usize - 1] == self.second[b as usize - 1]
    }

    pub fn side1(&self) -> Vec<AgentId> {
        (1..=self.num_agents()).filter(|&a| self.in_first(a)).collect()
    }

    pub fn side2(&self) -> Vec<AgentId> {
        (1..=self.num_agents()).filter(|&a| !self.in_first(a)).collect()
    }

    pub fn priority(&self) -> PriorityOrder {
        let mut order = self.side1();
        order.extend(self.side2());
        PriorityOrder(order)
    }

    /// The CLI form: `Π1` as comma-separated ids.
    pub fn to_text(&self) -> String {
        join(&self.side1())
    }

    fn check_for(&self, graph: &LabeledGraph) -> Result<()> {
        if self.num_agents() != graph.num_agents() {
            return Err(Error::InvalidBipartition(format!(
                "bipartition covers {} agents but the graph has {}",
                self.num_agents(),
                graph.num_agents()
            )));
        }
        Ok(())
    }
}

fn join(agents: &[AgentId]) -> String {
    agents.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}|{{{}}}", join(&self.side1()), join(&self.side2()))
    }
}

/// Agents in tie-breaking priority, highest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorityOrder(pub Vec<AgentId>);

impl PriorityOrder {
    /// `1, 2, …, n`.
    pub fn ascending(num_agents: u32) -> Self {
        PriorityOrder((1..=num_agents).collect())
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub probability: BigRational,
    pub matching: Matching,
    /// Which coin outcome produced this entry, e.g. a bipartition.
    pub label: String,
}

/// Finitely many matchings with exact probabilities summing to one. Equal
/// matchings reached by different coin outcomes stay separate entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeDistribution {
    outcomes: Vec<Outcome>,
}

impl OutcomeDistribution {
    pub fn new(outcomes: Vec<Outcome>) -> Result<Self> {
        let total: BigRational = outcomes.iter().map(|o| o.probability.clone()).sum();
        if !total.is_one() || outcomes.iter().any(|o| o.probability <= BigRational::zero()) {
            return Err(Error::Parameter(format!("outcome probabilities sum to {total}, not 1")));
        }
        Ok(OutcomeDistribution { outcomes })
    }

    pub fn point(matching: Matching) -> Self {
        OutcomeDistribution {
            outcomes: vec![Outcome {
                probability: BigRational::one(),
                matching,
                label: String::new(),
            }],
        }
    }

    /// `count` entries of probability `1/count` each.
    pub(crate) fn uniform(entries: Vec<(String, Matching)>) -> Self {
        let p = BigRational::new(BigInt::one(), BigInt::from(entries.len()));
        OutcomeDistribution {
            outcomes: entries
                .into_iter()
                .map(|(label, matching)| Outcome {
                    probability: p.clone(),
                    matching,
                    label,
                })
                .collect(),
        }
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// The single matching of a point distribution.
    pub fn as_point(&self) -> Option<&Matching> {
        match self.outcomes.as_slice() {
            [only] => Some(&only.matching),
            _ => None,
        }
    }

    pub fn total_probability(&self) -> BigRational {
        self.outcomes.iter().map(|o| o.probability.clone()).sum()
    }

    pub fn expected_size(&self) -> BigRational {
        self.outcomes
            .iter()
            .map(|o| &o.probability * BigInt::from(o.matching.len()))
            .sum()
    }

    pub fn expected_utility(&self, graph: &LabeledGraph, agent: AgentId) -> Result<BigRational> {
        graph.check_agent(agent)?;
        self.check_on(graph)?;
        Ok(self
            .outcomes
            .iter()
            .map(|o| &o.probability * BigInt::from(utility_unchecked(graph, &o.matching, agent)))
            .sum())
    }

    pub fn check_on(&self, graph: &LabeledGraph) -> Result<()> {
        self.outcomes.iter().try_for_each(|o| o.matching.check_on(graph))
    }
}

/// A mechanism maps a reported graph to a distribution over its matchings.
pub trait Mechanism: Send + Sync {
    fn name(&self) -> String;

    fn outcomes(&self, graph: &LabeledGraph) -> Result<OutcomeDistribution>;

    /// False for mechanisms whose output is one sampled draw of a random
    /// process; such output cannot certify anything about expectations.
    fn exact(&self) -> bool {
        true
    }
}

/// `Match_Π` through the weighted reduction.
#[derive(Clone, Debug)]
pub struct MatchPi(pub Bipartition);

/// `Match_Π` by exhaustive search; oracle-scale only.
#[derive(Clone, Debug)]
pub struct MatchPiReference(pub Bipartition, pub Limits);

/// Serial dictatorship over internal-maximal maximum matchings, without a
/// bipartition. Not strategyproof for three agents.
#[derive(Clone, Debug)]
pub struct NaiveSerial(pub Limits);

/// Canonical maximum-cardinality matching.
#[derive(Clone, Copy, Debug, Default)]
pub struct OptimalMechanism;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixMode {
    /// All `2^n` coin outcomes, each with probability `2^-n`.
    Exact,
    /// One coin outcome drawn from the seeded stream.
    Sampled(u64),
}

#[derive(Clone, Debug)]
pub struct MixAndMatch {
    pub mode: MixMode,
    pub limits: Limits,
}

/// Two-agent Flip-and-Match through the weighted solvers.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlipAndMatch;

/// Flip-and-Match with both branches found by exhaustive search.
#[derive(Clone, Debug)]
pub struct FlipAndMatchReference(pub Limits);

impl Mechanism for MatchPi {
    fn name(&self) -> String {
        format!("matchpi[{}]", self.0)
    }

    fn outcomes(&self, graph: &LabeledGraph) -> Result<OutcomeDistribution> {
        match_pi(graph, &self.0).map(OutcomeDistribution::point)
    }
}

impl Mechanism for MatchPiReference {
    fn name(&self) -> String {
        format!("matchpi-ref[{}]", self.0)
    }

    fn outcomes(&self, graph: &LabeledGraph) -> Result<OutcomeDistribution> {
        match_pi_reference(graph, &self.0, &self.1).map(OutcomeDistribution::point)
    }
}

impl Mechanism for NaiveSerial {
    fn name(&self) -> String {
        "naive".into()
    }

    fn outcomes(&self, graph: &LabeledGraph) -> Result<OutcomeDistribution> {
        naive_serial(graph, &self.0).map(OutcomeDistribution::point)
    }
}

impl Mechanism for OptimalMechanism {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn outcomes(&self, graph: &LabeledGraph) -> Result<OutcomeDistribution> {
        Ok(OutcomeDistribution::point(optimal_mechanism(graph)))
    }
}

impl Mechanism for MixAndMatch {
    fn name(&self) -> String {
        match self.mode {
            MixMode::Exact => "mix".into(),
            MixMode::Sampled(seed) => format!("mix[seed={seed}]"),
        }
    }

    fn outcomes(&self, graph: &LabeledGraph) -> Result<OutcomeDistribution> {
        mix_and_match(graph, self.mode, &self.limits)
    }

    fn exact(&self) -> bool {
        self.mode == MixMode::Exact
    }
}

impl Mechanism for FlipAndMatch {
    fn name(&self) -> String {
        "flip".into()
    }

    fn outcomes(&self, graph: &LabeledGraph) -> Result<OutcomeDistribution> {
        flip_and_match(graph)
    }
}

impl Mechanism for FlipAndMatchReference {
    fn name(&self) -> String {
        "flip-ref".into()
    }

    fn outcomes(&self, graph: &LabeledGraph) -> Result<OutcomeDistribution> {
        flip_and_match_reference(graph, &self.0)
    }
}

/// The optimal (and not strategyproof) mechanism.
pub fn optimal_mechanism(graph: &LabeledGraph) -> Matching {
    max_cardinality_matching(graph)
}

/// Mechanism names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MechanismKind {
    MatchPi,
    MatchPiReference,
    Mix,
    Flip,
    FlipReference,
    Optimal,
    Naive,
}

impl MechanismKind {
    pub const NAMES: &'static [&'static str] = &["matchpi", "matchpi-ref", "mix", "flip", "flip-ref", "optimal", "naive"];

    pub fn needs_bipartition(self) -> bool {
        matches!(self, MechanismKind::MatchPi | MechanismKind::MatchPiReference)
    }

    /// Builds the mechanism for graphs with `num_agents` agents.
    pub fn instantiate(
        self,
        num_agents: u32,
        bipartition: Option<&str>,
        mode: MixMode,
        limits: Limits,
    ) -> Result<Box<dyn Mechanism>> {
        let bip = || match bipartition {
            Some(text) => Bipartition::parse(text, num_agents),
            None => Err(Error::Parameter(format!("mechanism {self} needs a bipartition"))),
        };
        if bipartition.is_some() && !self.needs_bipartition() {
            return Err(Error::Parameter(format!("mechanism {self} takes no bipartition")));
        }
        Ok(match self {
            MechanismKind::MatchPi => Box::new(MatchPi(bip()?)),
            MechanismKind::MatchPiReference => Box::new(MatchPiReference(bip()?, limits)),
            MechanismKind::Mix => Box::new(MixAndMatch { mode, limits }),
            MechanismKind::Flip => Box::new(FlipAndMatch),
            MechanismKind::FlipReference => Box::new(FlipAndMatchReference(limits)),
            MechanismKind::Optimal => Box::new(OptimalMechanism),
            MechanismKind::Naive => Box::new(NaiveSerial(limits)),
        })
    }
}

impl FromStr for MechanismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "matchpi" => MechanismKind::MatchPi,
            "matchpi-ref" => MechanismKind::MatchPiReference,
            "mix" => MechanismKind::Mix,
            "flip" => MechanismKind::Flip,
            "flip-ref" => MechanismKind::FlipReference,
            "optimal" => MechanismKind::Optimal,
            "naive" => MechanismKind::Naive,
            _ => {
                return Err(Error::Parameter(format!(
                    "unknown mechanism {s:?} (expected one of {})",
                    MechanismKind::NAMES.join(", ")
                )))
            }
        })
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(MechanismKind::NAMES[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartition_text_round_trips() {
        let b = Bipartition::parse("1,3", 3).unwrap();
        assert_eq!(b.side1(), vec![1, 3]);
        assert_eq!(b.side2(), vec![2]);
        assert_eq!(b.to_text(), "1,3");
        assert_eq!(b.to_string(), "{1,3}|{2}");
        assert_eq!(b.priority().agents(), &[1, 3, 2]);
        assert_eq!(Bipartition::parse("", 2).unwrap().side2(), vec![1, 2]);
        assert!(Bipartition::parse("0", 2).is_err());
        assert!(Bipartition::parse("1,1", 2).is_err());
        assert!(Bipartition::parse("1;2", 2).is_err());
    }

    #[test]
    fn all_bipartitions_are_labeled() {
        let all: Vec<_> = Bipartition::all(2).collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all[0].side1(), vec![1, 2]);
        assert_eq!(all[1].side1(), vec![2]);
        assert_eq!(all[2].side1(), vec![1]);
        assert_eq!(all[3].side1(), Vec::<AgentId>::new());
    }

    #[test]
    fn distributions_must_sum_to_one() {
        let half = BigRational::new(1.into(), 2.into());
        let o = |p: &BigRational| Outcome {
            probability: p.clone(),
            matching: Matching::empty(),
            label: String::new(),
        };
        assert!(OutcomeDistribution::new(vec![o(&half), o(&half)]).is_ok());
        assert!(OutcomeDistribution::new(vec![o(&half)]).is_err());
    }

    #[test]
    fn mechanism_names_parse() {
        for name in MechanismKind::NAMES {
            assert_eq!(name.parse::<MechanismKind>().unwrap().to_string(), *name);
        }
        assert!("greedy".parse::<MechanismKind>().is_err());
        let err = MechanismKind::MatchPi.instantiate(2, None, MixMode::Exact, Limits::default());
        assert!(err.is_err());
    }
}
