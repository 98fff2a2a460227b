//! Seeded instance generators. Every generator is a pure function of its
//! parameters and seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::figures::figure;
use crate::graph::{AgentId, LabeledGraph, VertexId};

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// Path `v1 - v2 - … - vm` with uniformly random owners.
    Path { vertices: u32, agents: u32 },
    /// Each of the `m(m-1)/2` possible edges present with probability `p`,
    /// uniformly random owners.
    Random { vertices: u32, agents: u32, p: f64 },
    /// One of the named figure graphs; the seed is ignored.
    Figure(String),
}

/// Draws owners for `v1..vm` first, then one Bernoulli(`p`) per vertex pair
/// in lexicographic order.
pub fn random_graph(rng: &mut ChaCha8Rng, vertices: u32, agents: u32, p: f64) -> Result<LabeledGraph> {
    check_agents(agents)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("edge probability {p} outside [0, 1]")));
    }
    let owners = draw_owners(rng, vertices, agents);
    let mut edges = Vec::new();
    for u in 1..=vertices {
        for v in u + 1..=vertices {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::from_owners(agents, &owners, edges)
}

fn draw_owners(rng: &mut ChaCha8Rng, vertices: u32, agents: u32) -> Vec<AgentId> {
    (0..vertices).map(|_| rng.gen_range(1..=agents)).collect()
}

fn check_agents(agents: u32) -> Result<()> {
    if agents == 0 {
        return Err(Error::Parameter("at least one agent is required".into()));
    }
    Ok(())
}

pub fn generate(generator: &Generator, seed: u64) -> Result<LabeledGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match generator {
        Generator::Path { vertices, agents } => {
            check_agents(*agents)?;
            let owners = draw_owners(&mut rng, *vertices, *agents);
            let edges = (1..*vertices).map(|v: VertexId| (v, v + 1));
            LabeledGraph::from_owners(*agents, &owners, edges)
        }
        Generator::Random { vertices, agents, p } => random_graph(&mut rng, *vertices, *agents, *p),
        Generator::Figure(name) => figure(name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_is_deterministic() {
        let kind = Generator::Random {
            vertices: 6,
            agents: 2,
            p: 0.5,
        };
        assert_eq!(generate(&kind, 7).unwrap(), generate(&kind, 7).unwrap());
        let differs = (0..10).any(|s| generate(&kind, s).unwrap() != generate(&kind, 7).unwrap());
        assert!(differs);
    }

    #[test]
    fn path_shape() {
        let g = generate(&Generator::Path { vertices: 5, agents: 3 }, 1).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_valid());
    }

    #[test]
    fn bad_parameters() {
        let bad_p = Generator::Random {
            vertices: 3,
            agents: 2,
            p: 1.5,
        };
        assert!(generate(&bad_p, 0).is_err());
        assert!(generate(&Generator::Path { vertices: 3, agents: 0 }, 0).is_err());
        assert_eq!(
            generate(&Generator::Figure("fig5".into()), 99).unwrap(),
            figure("fig5").unwrap()
        );
    }
}
