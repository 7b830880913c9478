use std::collections::VecDeque;

use crate::graph::{EdgeInstance, Graph, Path, VertexId};
use crate::words::ReducedWord;

use super::action::{isotropy_search, try_act};
use super::cylinder::{intersect, Cylinder};
use super::point::BoundaryPoint;

/// Default bound on word length in isotropy searches.
pub const DEFAULT_WORD_BOUND: usize = 6;

/// Bounded evidence for topological freeness of the action on `∂E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub depth: usize,
    pub bound: usize,
    pub condition_l: bool,
    /// One fixed point per loop without entry, with the loop word fixing it.
    pub fixed_points: Vec<(ReducedWord, BoundaryPoint)>,
    /// A member with trivial isotropy up to `bound`, per cylinder.
    pub witnesses: Vec<(Cylinder, BoundaryPoint)>,
    /// Cylinders where no such member exists.
    pub missing: Vec<Cylinder>,
    /// Number of (cylinder, word) pairs in the one-word-at-a-time search.
    pub pairs_checked: usize,
    /// Cylinders on which some single word fixes every point of its domain,
    /// with that word.
    pub fixed_by_word: Vec<(Cylinder, ReducedWord)>,
}

impl FreenessReport {
    /// The joint search (one point free of all words) and the one-word
    /// search (each word moves some point) succeed or fail together.
    pub fn consistent(&self) -> bool {
        self.missing.is_empty() == self.fixed_by_word.is_empty()
    }

    /// Nontrivial isotropy turned up exactly when (L) fails, with a fixed
    /// point per entry-less loop, and the two searches agree.
    pub fn agrees(&self) -> bool {
        let isotropy_found = !self.missing.is_empty();
        let fixed_ok = self.condition_l == self.fixed_points.is_empty();
        isotropy_found != self.condition_l && fixed_ok && self.consistent()
    }
}

/// Shortest path `ρ` with `r(ρ) = from` and `s(ρ)` satisfying `target`.
fn path_to(g: &Graph, from: VertexId, target: impl Fn(VertexId) -> bool) -> Option<Path> {
    let mut parent: Vec<Option<(VertexId, EdgeInstance)>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[from.index()] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if target(x) {
            let mut edges = Vec::new();
            let mut at = x;
            while let Some((prev, e)) = parent[at.index()] {
                edges.push(e);
                at = prev;
            }
            edges.reverse();
            return Some(g.path(from, edges).expect("walk along receivers"));
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

/// A member of `c` whose isotropy is trivial for words of length at most `bound`.
/// Finite points come first: they never have isotropy. Otherwise the point
/// runs into a vertex with two simple loops `A`, `B` and repeats `AᵏB`
/// with `k` large enough to outrun the bound.
pub fn trivial_isotropy_point(g: &Graph, c: &Cylinder, bound: usize) -> Option<BoundaryPoint> {
    if c.is_empty(g) {
        return None;
    }
    let s = g.source(&c.stem);
    if g.is_singular(s) {
        return Some(BoundaryPoint::Finite(c.stem.clone()));
    }
    let open = c.open_edges(g, 1);
    for &e in &open {
        if let Some(rho) = path_to(g, g.source_of(e), |v| g.is_singular(v)) {
            let p = g.concat(&g.extend(&c.stem, e).ok()?, &rho).ok()?;
            return Some(BoundaryPoint::Finite(p));
        }
    }
    for &e in &open {
        let two_loops = |v| g.simple_loops_at(v, 2, 2).len() == 2;
        let Some(rho) = path_to(g, g.source_of(e), two_loops) else { continue };
        let head = g.concat(&g.extend(&c.stem, e).ok()?, &rho).ok()?;
        let loops = g.simple_loops_at(g.source(&head), 2, 2);
        let (a, b) = (&loops[0], &loops[1]);
        for k in 1..=bound + 1 {
            let mut cycle = b.clone();
            for _ in 0..k {
                cycle = g.concat(a, &cycle).expect("loops at the same vertex");
            }
            let x = BoundaryPoint::periodic(g, head.clone(), cycle).expect("a loop at s(head)");
            if c.member(&x) && isotropy_search(g, &x, bound + 1).is_empty() {
                return Some(x);
            }
        }
    }
    None
}

/// Reduced words `αβ⁻¹ ≠ e` with `l(α) + l(β) ≤ bound`, as path pairs.
fn nontrivial_words(g: &Graph, bound: usize) -> Vec<(ReducedWord, Path, Path)> {
    let paths = g.all_paths(bound, 1);
    let mut out = Vec::new();
    for alpha in &paths {
        for beta in &paths {
            if alpha.len() + beta.len() > bound || g.source(alpha) != g.source(beta) || alpha == beta {
                continue;
            }
            if alpha.last().is_some() && alpha.last() == beta.last() {
                continue;
            }
            out.push((ReducedWord::from_pair(alpha, beta), alpha.clone(), beta.clone()));
        }
    }
    out
}

/// A point of `c` moved by the word, searched first among trivial-isotropy
/// points and then by brute force over small points.
fn moved_point(g: &Graph, c: &Cylinder, word: &ReducedWord, bound: usize) -> Option<BoundaryPoint> {
    let moved = |x: &BoundaryPoint| c.member(x) && try_act(g, word, x).is_some_and(|y| &y != x);
    if let Some(x) = trivial_isotropy_point(g, c, bound.max(word.len())) {
        if moved(&x) {
            return Some(x);
        }
    }
    c.sample_points(g, bound + 2, 1).into_iter().find(|x| moved(x))
}

pub fn topological_freeness_report(g: &Graph, depth: usize, bound: usize) -> FreenessReport {
    topological_freeness_report_with(g, depth, bound, bound)
}

/// As [`topological_freeness_report`], with the one-word-at-a-time search
/// limited to words of length `word_bound`.
pub fn topological_freeness_report_with(g: &Graph, depth: usize, bound: usize, word_bound: usize) -> FreenessReport {
    let l = g.condition_l();
    let mut fixed_points = Vec::new();
    for cycle in &l.entryless {
        let x = BoundaryPoint::periodic(g, Path::vertex(cycle.range()), cycle.clone()).expect("a loop");
        let word = ReducedWord::from_path(cycle);
        if try_act(g, &word, &x).as_ref() == Some(&x) {
            fixed_points.push((word, x));
        }
    }
    let words = nontrivial_words(g, word_bound);
    let mut witnesses = Vec::new();
    let mut missing = Vec::new();
    let mut fixed_by_word = Vec::new();
    let mut pairs_checked = 0;
    for stem in g.all_paths(depth, 1) {
        let c = Cylinder::plain(stem);
        if c.is_empty(g) {
            continue;
        }
        for (word, _, beta) in &words {
            let Some(part) = intersect(&c, &Cylinder::plain(beta.clone())) else { continue };
            if part.is_empty(g) {
                continue;
            }
            pairs_checked += 1;
            if moved_point(g, &part, word, word_bound).is_none() {
                fixed_by_word.push((c.clone(), word.clone()));
                break;
            }
        }
        match trivial_isotropy_point(g, &c, bound) {
            Some(x) => witnesses.push((c, x)),
            None => missing.push(c),
        }
    }
    FreenessReport {
        depth,
        bound,
        condition_l: l.holds,
        fixed_points,
        witnesses,
        missing,
        pairs_checked,
        fixed_by_word,
    }
}
