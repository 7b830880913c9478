use std::collections::BTreeMap;

use crate::corpus;
use crate::graph::Graph;

use super::cocycle::{derive_cocycle, Cocycle};
use super::homeo::{GraphIso, PrefixHomeo};

/// A continuous orbit equivalence `∂E ≅ ∂F` with both cocycles.
#[derive(Clone, Debug)]
pub struct CoeExample {
    pub name: &'static str,
    pub e: Graph,
    pub f: Graph,
    pub phi: PrefixHomeo,
    pub a: Cocycle,
    pub b: Cocycle,
}

fn renames(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().flat_map(|&(x, y)| [(x.to_string(), y.to_string()), (y.to_string(), x.to_string())]).collect()
}

fn complete(name: &'static str, g: Graph, phi: PrefixHomeo) -> CoeExample {
    let a = derive_cocycle(&g, &g, &phi, 8).expect("built-in examples refine");
    let b = derive_cocycle(&g, &g, &phi.inverse(), 8).expect("built-in examples refine");
    CoeExample { name, e: g.clone(), f: g, phi, a, b }
}

/// The identity of `∂E(G2)`; the cocycle is `a(g, x) = g`.
pub fn identity_g2() -> CoeExample {
    let g = corpus::g2();
    let phi = PrefixHomeo::identity(&g);
    complete("identity-G2", g, phi)
}

/// The letter swap `a ↔ b` applied to every edge of a path in G2.
pub fn swap_g2() -> CoeExample {
    let g = corpus::g2();
    let tail = GraphIso::by_names(&g, &g, &renames(&[("a", "b")])).expect("a symmetry of G2");
    let v = g.parse_path("v").expect("G2 has v");
    let phi = PrefixHomeo::new(&g, &g, vec![(v.clone(), v)], tail).expect("consistent rule");
    complete("swap-G2", g, phi)
}

/// The symmetry of the two-vertex graph exchanging `v ↔ w`, `a ↔ d`, `b ↔ c`.
pub fn flip_two_vertex() -> CoeExample {
    let g = corpus::two_vertex();
    let tail = GraphIso::by_names(&g, &g, &renames(&[("v", "w"), ("a", "d"), ("b", "c")])).expect("a symmetry");
    let (v, w) = (g.parse_path("v").expect("v"), g.parse_path("w").expect("w"));
    let phi = PrefixHomeo::new(&g, &g, vec![(v.clone(), w.clone()), (w, v)], tail).expect("consistent rules");
    complete("flip-two-vertex", g, phi)
}

pub fn all() -> Vec<CoeExample> {
    vec![identity_g2(), swap_g2(), flip_two_vertex()]
}

pub fn by_name(name: &str) -> Option<CoeExample> {
    all().into_iter().find(|ex| ex.name == name)
}
