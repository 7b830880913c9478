//! Paradoxical pairs for compact open subsets of the boundary: for each
//! basic open `U` two words `g`, `h` with `g.U ⊆ U`, `h.U ⊆ U` and
//! `g.U ∩ h.U = ∅`.

use std::collections::{BTreeSet, VecDeque};

use serde_json::{json, Value};

use crate::boundary::{act_set, domain, try_act, CompactOpen, Cylinder};
use crate::error::{Error, Result};
use crate::graph::{EdgeInstance, Graph, Multiplicity, Path, VertexId};
use crate::words::ReducedWord;

/// Parallel copies sampled per edge family in point-level checks.
const SAMPLE_WIDTH: u32 = 3;
/// Simple loops collected per vertex before picking the shortest two.
const LOOP_LIMIT: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParadoxWitness {
    pub u: CompactOpen,
    pub g: ReducedWord,
    pub h: ReducedWord,
}

impl ParadoxWitness {
    pub fn to_json(&self, graph: &Graph, verified_depth: usize) -> Value {
        json!({
            "U": self.u.render(graph),
            "g": self.g.render(graph),
            "h": self.h.render(graph),
            "verified_depth": verified_depth,
        })
    }

    /// `g, hg, h²g, …, hⁿ⁻¹g`: their images of `U` are pairwise disjoint
    /// subsets of `U`.
    pub fn disjoint_translates(&self, n: usize) -> Vec<ReducedWord> {
        let mut out = Vec::with_capacity(n);
        let mut w = self.g.clone();
        for _ in 0..n {
            out.push(w.clone());
            w = self.h.mul(&w);
        }
        out
    }
}

fn require_pi(g: &Graph) -> Result<()> {
    let verdict = g.condition_pi()?;
    match verdict.failed {
        Some(clause) => Err(Error::Precondition(format!("condition (PI) fails: {}", clause.render(g)))),
        None => Ok(()),
    }
}

/// Shortest path `η` with `r(η) = from` and `s(η) = to`.
fn return_path(g: &Graph, from: VertexId, to: VertexId) -> Option<Path> {
    let mut parent: Vec<Option<(VertexId, EdgeInstance)>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[from.index()] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut edges = Vec::new();
            let mut at = x;
            while let Some((prev, e)) = parent[at.index()] {
                edges.push(e);
                at = prev;
            }
            edges.reverse();
            return g.path(from, edges).ok();
        }
        for &e in g.receivers(x) {
            let s = g.edge(e).source;
            if !seen[s.index()] {
                seen[s.index()] = true;
                parent[s.index()] = Some((x, EdgeInstance::new(e, 0)));
                queue.push_back(s);
            }
        }
    }
    None
}

/// Loops `ζᵢηᵢ` at the infinite receiver `v` with pairwise distinct first
/// edges `ζᵢ`, skipping first edges in `avoid`. Candidates are taken copy by
/// copy across the receiving families, each closed up by a shortest path
/// back to `v`.
fn loops_avoiding(g: &Graph, v: VertexId, count: usize, avoid: &BTreeSet<EdgeInstance>) -> Result<Vec<Path>> {
    if !g.is_infinite_receiver(v) {
        return Err(Error::Precondition(format!("{} does not receive infinitely many edges", g.vertex_name(v))));
    }
    require_pi(g)?;
    let back: Vec<(crate::EdgeId, Path)> = g
        .receivers(v)
        .iter()
        .filter_map(|&e| return_path(g, g.edge(e).source, v).map(|eta| (e, eta)))
        .collect();
    let mut out = Vec::new();
    let mut copy = 0u32;
    while out.len() < count {
        let mut any = false;
        for (e, eta) in &back {
            if !g.edge(*e).multiplicity.admits(copy) {
                continue;
            }
            any = true;
            let zeta = EdgeInstance::new(*e, copy);
            if avoid.contains(&zeta) {
                continue;
            }
            let lp = g.concat(&g.edge_path(zeta), eta).expect("η starts where ζ ends");
            out.push(lp);
            if out.len() == count {
                break;
            }
        }
        if !any {
            return Err(Error::Precondition(format!(
                "only {} loops with distinct first edges at {}",
                out.len(),
                g.vertex_name(v)
            )));
        }
        copy += 1;
    }
    Ok(out)
}

/// `count` loops at the infinite receiver `v` with pairwise distinct first edges.
pub fn infinite_loops(g: &Graph, v: VertexId, count: usize) -> Result<Vec<Path>> {
    loops_avoiding(g, v, count, &BTreeSet::new())
}

/// The two shortest, lexicographically least simple loops at `v` whose first
/// edges avoid `avoid`. Distinct simple loops at one base are incomparable.
fn two_loops(g: &Graph, v: VertexId, avoid: &BTreeSet<EdgeInstance>) -> Option<(Path, Path)> {
    let mut loops: Vec<Path> = g
        .simple_loops_at(v, 2, LOOP_LIMIT)
        .into_iter()
        .filter(|p| p.first().is_some_and(|e| !avoid.contains(&e)))
        .collect();
    loops.sort();
    let mut it = loops.into_iter();
    Some((it.next()?, it.next()?))
}

fn conjugate(g: &Graph, mu: &Path, zeta: &Path) -> ReducedWord {
    ReducedWord::from_pair(&g.concat(mu, zeta).expect("ζ is a loop at s(μ)"), mu)
}

fn cylinder_witnesses(g: &Graph, c: &Cylinder, depth: usize, cap: usize, out: &mut Vec<ParadoxWitness>) -> Result<()> {
    if c.is_empty(g) {
        return Ok(());
    }
    let s = g.source(&c.stem);
    let pair = if g.is_infinite_receiver(s) {
        let loops = loops_avoiding(g, s, 2, &c.exclusions)?;
        Some((loops[0].clone(), loops[1].clone()))
    } else {
        two_loops(g, s, &c.exclusions)
    };
    if let Some((zeta, zeta2)) = pair {
        out.push(ParadoxWitness {
            u: CompactOpen::cylinder(g, c.clone()),
            g: conjugate(g, &c.stem, &zeta),
            h: conjugate(g, &c.stem, &zeta2),
        });
        return Ok(());
    }
    if depth >= cap {
        return Err(Error::Size { what: "witness splitting depth".into(), actual: depth + 1, cap });
    }
    // `s(μ)` receives finitely many edges here, so `Z(μ ∖ F)` is the finite
    // union of `Z(μe)` over the open edges `e`.
    for e in c.open_edges(g, u32::MAX) {
        let child = Cylinder::plain(g.extend(&c.stem, e).expect("open edges extend the stem"));
        cylinder_witnesses(g, &child, depth + 1, cap, out)?;
    }
    Ok(())
}

/// One witness per basic open piece of `U`. Pieces are the parts of the
/// disjoint normal form, split further into one-edge extensions where the
/// exclusions leave too few loops; the pieces' union is `U`.
pub fn find_witness(g: &Graph, u: &CompactOpen) -> Result<Vec<ParadoxWitness>> {
    require_pi(g)?;
    let cap = g.vertex_count() + 1;
    let mut out = Vec::new();
    for c in u.parts() {
        cylinder_witnesses(g, c, 0, cap, &mut out)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub pass: bool,
    /// `U` lies in the domains of `g` and `h`.
    pub in_domain: bool,
    pub g_contained: bool,
    pub h_contained: bool,
    pub disjoint: bool,
    pub points_checked: usize,
    pub failures: Vec<String>,
}

/// Checks the three clauses on the cylinder algebra, then on sample points
/// of `U` of complexity up to `l(μ) + depth` per part.
pub fn verify_witness(graph: &Graph, w: &ParadoxWitness, depth: usize) -> WitnessReport {
    let u = &w.u;
    let gu = act_set(graph, &w.g, u);
    let hu = act_set(graph, &w.h, u);
    let in_domain = u.is_subset(graph, &domain(graph, &w.g)) && u.is_subset(graph, &domain(graph, &w.h));
    let g_contained = gu.is_subset(graph, u);
    let h_contained = hu.is_subset(graph, u);
    let disjoint = gu.is_disjoint(graph, &hu);
    let mut failures = Vec::new();
    if !in_domain {
        failures.push(format!("{} is not inside both domains", u.render(graph)));
    }
    if !g_contained {
        failures.push(format!("{}.U = {} is not inside U", w.g.render(graph), gu.render(graph)));
    }
    if !h_contained {
        failures.push(format!("{}.U = {} is not inside U", w.h.render(graph), hu.render(graph)));
    }
    if !disjoint {
        failures.push(format!("{}.U and {}.U overlap", w.g.render(graph), w.h.render(graph)));
    }
    let mut points_checked = 0;
    for c in u.parts() {
        for x in c.sample_points(graph, depth, SAMPLE_WIDTH) {
            points_checked += 1;
            let (Some(gx), Some(hx)) = (try_act(graph, &w.g, &x), try_act(graph, &w.h, &x)) else {
                failures.push(format!("{} is outside a domain", x.render(graph)));
                continue;
            };
            for (word, y) in [(&w.g, &gx), (&w.h, &hx)] {
                if !u.member(y) {
                    failures.push(format!("{} sends {} out of U", word.render(graph), x.render(graph)));
                }
            }
            if hu.member(&gx) || gu.member(&hx) {
                failures.push(format!("the images of {} meet the other translate", x.render(graph)));
            }
        }
    }
    WitnessReport {
        pass: failures.is_empty(),
        in_domain,
        g_contained,
        h_contained,
        disjoint,
        points_checked,
        failures,
    }
}

/// Every basic open `Z(μ ∖ F)` with `l(μ) ≤ max_len` and `F` of size at most
/// `max_exclusions`, sampling `width` copies per edge family.
pub fn basic_opens(g: &Graph, max_len: usize, max_exclusions: usize, width: u32) -> Vec<Cylinder> {
    let mut out = Vec::new();
    for stem in g.all_paths(max_len, width) {
        let open = g.receiver_instances(g.source(&stem), width);
        let mut subsets: Vec<Vec<EdgeInstance>> = vec![Vec::new()];
        for &e in &open {
            let grown: Vec<Vec<EdgeInstance>> = subsets
                .iter()
                .filter(|s| s.len() < max_exclusions)
                .map(|s| s.iter().copied().chain([e]).collect())
                .collect();
            subsets.extend(grown);
        }
        for f in subsets {
            let full = g.receivers(g.source(&stem)).iter().all(|&e| match g.edge(e).multiplicity {
                Multiplicity::Finite(m) => f.iter().filter(|x| x.edge == e).count() as u32 == m,
                Multiplicity::Infinite => false,
            });
            if !f.is_empty() && full {
                continue;
            }
            out.push(Cylinder { stem: stem.clone(), exclusions: f.into_iter().collect() });
        }
    }
    out
}
