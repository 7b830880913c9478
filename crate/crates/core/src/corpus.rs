//! Named example graphs and a seeded random generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Multiplicity};

const ONE: Multiplicity = Multiplicity::Finite(1);
const INF: Multiplicity = Multiplicity::Infinite;

/// One vertex with one loop.
pub fn g1() -> Graph {
    Graph::build(&["v"], &[("a", "v", "v", ONE)])
}

/// One vertex with two loops.
pub fn g2() -> Graph {
    Graph::build(&["v"], &[("a", "v", "v", ONE), ("b", "v", "v", ONE)])
}

/// A single edge `e` from the sink `w` into `u`.
pub fn g3() -> Graph {
    Graph::build(&["u", "w"], &[("e", "u", "w", ONE)])
}

/// A loop at `v` entered by an edge from the sink `w`.
pub fn g4() -> Graph {
    Graph::build(&["v", "w"], &[("a", "v", "v", ONE), ("c", "v", "w", ONE)])
}

/// One vertex with an infinite family of loops.
pub fn g5() -> Graph {
    Graph::build(&["v"], &[("f", "v", "v", INF)])
}

/// `v` receives infinitely many edges from `x ∈ Ω(v)` and one loop.
pub fn g6() -> Graph {
    Graph::build(&["v", "x"], &[("f", "v", "x", INF), ("g", "v", "v", ONE)])
}

/// Two vertices, every ordered pair joined by one edge.
pub fn two_vertex() -> Graph {
    Graph::build(
        &["v", "w"],
        &[("a", "v", "v", ONE), ("b", "v", "w", ONE), ("c", "w", "v", ONE), ("d", "w", "w", ONE)],
    )
}

pub fn named() -> Vec<(&'static str, Graph)> {
    vec![
        ("G1", g1()),
        ("G2", g2()),
        ("G3", g3()),
        ("G4", g4()),
        ("G5", g5()),
        ("G6", g6()),
        ("two-vertex", two_vertex()),
    ]
}

pub fn by_name(name: &str) -> Option<Graph> {
    named().into_iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, g)| g)
}

#[derive(Clone, Copy, Debug)]
pub struct RandomGraphConfig {
    pub max_vertices: usize,
    /// Expected number of edge families per vertex.
    pub density: f64,
    /// Probability that a family is infinite.
    pub infinite_rate: f64,
    /// Probability that a finite family has multiplicity 2.
    pub double_rate: f64,
}

impl Default for RandomGraphConfig {
    fn default() -> Self {
        RandomGraphConfig { max_vertices: 6, density: 1.6, infinite_rate: 0.0, double_rate: 0.1 }
    }
}

pub fn random_graph(rng: &mut impl Rng, cfg: &RandomGraphConfig) -> Graph {
    let n = rng.gen_range(1..=cfg.max_vertices.max(1));
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let slots = n * n;
    let p = (cfg.density / n as f64).min(1.0);
    let mut edges = Vec::new();
    for k in 0..slots {
        if rng.gen_bool(p) {
            let m = if rng.gen_bool(cfg.infinite_rate) {
                INF
            } else if rng.gen_bool(cfg.double_rate) {
                Multiplicity::Finite(2)
            } else {
                ONE
            };
            edges.push((format!("e{}", edges.len()), vertices[k / n].clone(), vertices[k % n].clone(), m));
        }
    }
    Graph::new(vertices, edges).expect("generated graph is valid")
}

pub fn random_graphs(seed: u64, count: usize, cfg: &RandomGraphConfig) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_graph(&mut rng, cfg)).collect()
}
