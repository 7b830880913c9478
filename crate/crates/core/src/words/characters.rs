//! Characters of finite truncations of the idempotent semilattice.
//!
//! At depth `d` the semilattice is the set of paths of length at most `d`
//! (plus 0). A character is the indicator of a filter. Every filter of a
//! finite meet-semilattice is principal, so characters correspond to paths:
//! `↑γ` is the set of prefixes of `γ`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path};

use super::free::{Letter, ReducedWord};
use super::sgp::{sgp_mul, sgp_star, sigma_graph, SgpElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSemilattice {
    pub depth: usize,
    pub width: u32,
    pub elements: Vec<Path>,
}

impl TruncatedSemilattice {
    pub fn new(g: &Graph, depth: usize) -> Self {
        Self::with_width(g, depth, 2)
    }

    pub fn with_width(g: &Graph, depth: usize, width: u32) -> Self {
        TruncatedSemilattice { depth, width, elements: g.all_paths(depth, width) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    pub filter: BTreeSet<Path>,
}

impl Character {
    /// The principal filter of `γ`.
    pub fn principal(g: &Graph, gamma: &Path) -> Character {
        Character { filter: (0..=gamma.len()).map(|k| g.prefix(gamma, k)).collect() }
    }

    pub fn generator(&self) -> &Path {
        self.filter.iter().max_by_key(|p| p.len()).expect("filters are nonempty")
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.filter.contains(p)
    }

    /// Value at a path possibly outside the truncation: `None` when the
    /// truncation cannot tell.
    pub fn eval(&self, g: &Graph, depth: usize, p: &Path) -> Option<bool> {
        if p.len() <= depth {
            return Some(self.contains(p));
        }
        let gamma = self.generator();
        if gamma.is_prefix_of(p) && !g.is_sink(g.source(gamma)) {
            None
        } else {
            Some(false)
        }
    }

    pub fn render(&self, g: &Graph) -> String {
        format!("↑{}", g.render_path(self.generator()))
    }
}

pub fn is_filter(ts: &TruncatedSemilattice, f: &BTreeSet<Path>) -> bool {
    if f.is_empty() {
        return false;
    }
    let upward = f.iter().all(|p| ts.elements.iter().all(|q| !q.is_prefix_of(p) || f.contains(q)));
    let meets = f.iter().all(|p| f.iter().all(|q| p.comparable(q)));
    upward && meets
}

pub fn characters(g: &Graph, ts: &TruncatedSemilattice) -> Vec<Character> {
    ts.elements.iter().map(|p| Character::principal(g, p)).collect()
}

/// Filters maximal under inclusion: `↑γ` where `γ` has no extension in the truncation.
pub fn max_characters(g: &Graph, ts: &TruncatedSemilattice) -> Vec<Character> {
    ts.elements
        .iter()
        .filter(|p| p.len() == ts.depth || g.is_sink(g.source(p)))
        .map(|p| Character::principal(g, p))
        .collect()
}

/// The finite stage is discrete, so the boundary is the set of maximal characters.
pub fn boundary(g: &Graph, ts: &TruncatedSemilattice) -> Vec<Character> {
    max_characters(g, ts)
}

/// `g.χ = (e ↦ χ(s*es))`, evaluated on the truncation.
pub fn act_on_character(
    g: &Graph,
    ts: &TruncatedSemilattice,
    word: &ReducedWord,
    chi: &Character,
    s: &SgpElement,
) -> Result<Character> {
    let SgpElement::Pair(_, nu) = s else {
        return Err(Error::Domain("the witness is 0".into()));
    };
    if sigma_graph(s)? != *word {
        return Err(Error::Domain(format!("σ{} ≠ {}", s.render(g), word.render(g))));
    }
    match chi.eval(g, ts.depth, nu) {
        Some(true) => {}
        Some(false) => {
            return Err(Error::Domain(format!("{} is not in the domain of {}", chi.render(g), word.render(g))))
        }
        None => return Err(Error::Domain("the domain test leaves the truncation".into())),
    }
    image_at_depth(g, ts.depth, chi, ts.depth, ts.width, s)
        .ok_or_else(|| Error::Domain("the image leaves the truncation".into()))
}

/// The image restricted to paths of length at most `depth`, or `None` if
/// some value is not determined by `chi` (which lives at `chi_depth`).
fn image_at_depth(
    g: &Graph,
    chi_depth: usize,
    chi: &Character,
    depth: usize,
    width: u32,
    s: &SgpElement,
) -> Option<Character> {
    let SgpElement::Pair(mu, _) = s else { return None };
    let star = sgp_star(s);
    let mut filter = BTreeSet::new();
    // Paths with another range than μ are killed by s* on the left.
    for zeta in g.paths_from(mu.range(), depth, width) {
        let e = SgpElement::idempotent(zeta.clone());
        let v = sgp_mul(g, &sgp_mul(g, &star, &e), s);
        let val = match &v {
            SgpElement::Zero => false,
            SgpElement::Pair(p, _) => chi.eval(g, chi_depth, p)?,
        };
        if val {
            filter.insert(zeta);
        }
    }
    (!filter.is_empty()).then_some(Character { filter })
}

/// Witnesses `(αρ, βρ)` for a word `αβ⁻¹` with `ρ` a vertex, or `(ρ, ρ)` for the identity.
pub fn simple_witnesses(g: &Graph, word: &ReducedWord) -> Vec<SgpElement> {
    match word.as_path_pair(g) {
        Some((a, b)) => vec![SgpElement::Pair(a, b)],
        None if word.is_identity() => g.vertices().map(|v| SgpElement::idempotent(Path::vertex(v))).collect(),
        None => Vec::new(),
    }
}

/// Candidate witnesses `(αρ, βρ)` with `l(ρ) ≤ max_len`.
pub fn witnesses_up_to(g: &Graph, word: &ReducedWord, max_len: usize, width: u32) -> Vec<SgpElement> {
    let mut out = Vec::new();
    for base in simple_witnesses(g, word) {
        let SgpElement::Pair(a, b) = &base else { continue };
        for rho in g.paths_from(g.source(a), max_len, width) {
            let (a2, b2) = (g.concat(a, &rho).unwrap(), g.concat(b, &rho).unwrap());
            out.push(SgpElement::Pair(a2, b2));
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvarianceReport {
    pub pass: bool,
    /// Images fully determined at the same depth and checked there.
    pub same_depth: usize,
    /// Images determined only at a smaller depth, checked against the
    /// boundary of that smaller truncation.
    pub transferred: usize,
    /// Boundary characters outside the domain of a generator.
    pub outside_domain: usize,
    pub violations: Vec<(ReducedWord, Character, Character)>,
}

/// For each generator `g` and boundary character `χ` in its domain, checks
/// that `g.χ` is again a boundary character. When the image is only known
/// to a smaller depth it is compared with the boundary at that depth.
pub fn check_boundary_invariance(g: &Graph, ts: &TruncatedSemilattice) -> InvarianceReport {
    let mut report = InvarianceReport { pass: true, ..Default::default() };
    let gens = g.all_instances(ts.width);
    let letters: Vec<ReducedWord> =
        gens.iter().flat_map(|&e| [Letter::pos(e), Letter::neg(e)]).map(ReducedWord::letter).collect();
    for chi in boundary(g, ts) {
        for word in &letters {
            let Some(s) = simple_witnesses(g, word).pop() else { continue };
            let SgpElement::Pair(_, nu) = &s else { continue };
            if chi.eval(g, ts.depth, nu) != Some(true) {
                report.outside_domain += 1;
                continue;
            }
            let mut d = ts.depth;
            let image = loop {
                if let Some(img) = image_at_depth(g, ts.depth, &chi, d, ts.width, &s) {
                    break Some(img);
                }
                if d == 0 {
                    break None;
                }
                d -= 1;
            };
            let Some(image) = image else { continue };
            let stage = TruncatedSemilattice::with_width(g, d, ts.width);
            if d == ts.depth {
                report.same_depth += 1;
            } else {
                report.transferred += 1;
            }
            if !boundary(g, &stage).contains(&image) {
                report.pass = false;
                report.violations.push((word.clone(), chi.clone(), image));
            }
        }
    }
    report
}
