use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::words::ReducedWord;

use super::cylinder::{intersect, normalize, CompactOpen, Cylinder};
use super::point::{points_up_to, BoundaryPoint};

/// How a reduced word acts on `∂E`: the identity, `αβ⁻¹` (replace the
/// prefix `β` by `α`), or nowhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordAction {
    Identity,
    Replace { alpha: Path, beta: Path },
    Nowhere,
}

impl WordAction {
    pub fn of(g: &Graph, w: &ReducedWord) -> WordAction {
        if w.is_identity() {
            return WordAction::Identity;
        }
        match w.as_path_pair(g) {
            Some((alpha, beta)) => WordAction::Replace { alpha, beta },
            None => WordAction::Nowhere,
        }
    }
}

pub fn domain(g: &Graph, w: &ReducedWord) -> CompactOpen {
    match WordAction::of(g, w) {
        WordAction::Identity => CompactOpen::whole(g),
        WordAction::Replace { beta, .. } => CompactOpen::cylinder(g, Cylinder::plain(beta)),
        WordAction::Nowhere => CompactOpen::empty(),
    }
}

/// `g.x`, when defined.
pub fn try_act(g: &Graph, w: &ReducedWord, x: &BoundaryPoint) -> Option<BoundaryPoint> {
    match WordAction::of(g, w) {
        WordAction::Identity => Some(x.clone()),
        WordAction::Replace { alpha, beta } => x.replace_prefix(g, &beta, &alpha),
        WordAction::Nowhere => None,
    }
}

pub fn act_point(g: &Graph, w: &ReducedWord, x: &BoundaryPoint) -> Result<BoundaryPoint> {
    try_act(g, w, x).ok_or_else(|| {
        Error::Domain(format!("{} is not in the domain of {}", x.render(g), w.render(g)))
    })
}

/// `g.(U ∩ dom g)`.
pub fn act_set(g: &Graph, w: &ReducedWord, u: &CompactOpen) -> CompactOpen {
    match WordAction::of(g, w) {
        WordAction::Identity => u.clone(),
        WordAction::Nowhere => CompactOpen::empty(),
        WordAction::Replace { alpha, beta } => {
            let dom = Cylinder::plain(beta.clone());
            let moved = u
                .parts()
                .iter()
                .filter_map(|c| intersect(c, &dom))
                .map(|c| {
                    let tail = g.strip_prefix(&c.stem, &beta).expect("the intersection lies in Z(β)");
                    Cylinder { stem: g.concat(&alpha, &tail).expect("s(α) = s(β)"), exclusions: c.exclusions }
                })
                .collect();
            normalize(g, moved)
        }
    }
}

pub fn shift(g: &Graph, x: &BoundaryPoint) -> Result<BoundaryPoint> {
    x.shift(g)
}

/// Every word `αβ⁻¹` with `β` a prefix of `x` and `l(α) + l(β) ≤ n`,
/// including the identity, sorted by length then letters.
pub fn admissible_words(g: &Graph, x: &BoundaryPoint, n: usize, width: u32) -> Vec<ReducedWord> {
    let mut out = BTreeSet::new();
    for j in 0..=n {
        let Some(beta) = x.initial(g, j) else { break };
        for alpha in g.paths_into(g.source(&beta), n - j, width) {
            out.insert(ReducedWord::from_pair(&alpha, &beta));
        }
    }
    let mut out: Vec<_> = out.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Nontrivial words `x[..i] x[..j]⁻¹` of length below `bound` fixing `x`:
/// the part of the isotropy at `x` visible within the bound.
pub fn isotropy_search(g: &Graph, x: &BoundaryPoint, bound: usize) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    for i in 0..bound {
        let Some(tail_i) = x.shift_by(g, i) else { break };
        for j in 0..bound - i {
            if i == j {
                continue;
            }
            let reduced = i == 0 || j == 0 || x.edge_at(i - 1) != x.edge_at(j - 1);
            if !reduced || x.shift_by(g, j).as_ref() != Some(&tail_i) {
                continue;
            }
            let (alpha, beta) = (x.initial(g, i).unwrap(), x.initial(g, j).unwrap());
            out.push(ReducedWord::from_pair(&alpha, &beta));
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub pass: bool,
    pub words: usize,
    pub points: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

/// The partial-action axioms over every word of length at most `word_len`
/// and every point of complexity at most `depth`: `e` acts as the identity,
/// `g` maps `dom g` onto `dom g⁻¹` with inverse `g⁻¹`, and
/// `(g₁g₂).x = g₁.(g₂.x)` whenever the right side is defined.
pub fn partial_action_report(g: &Graph, word_len: usize, depth: usize) -> AxiomReport {
    let words = ReducedWord::all_up_to(&g.all_instances(1), word_len);
    let pts = points_up_to(g, depth, 1);
    let mut checks = 0;
    let mut violations = Vec::new();
    let e = ReducedWord::identity();
    for x in &pts {
        checks += 1;
        if try_act(g, &e, x).as_ref() != Some(x) {
            violations.push(format!("e moves {}", x.render(g)));
        }
    }
    for u in &words {
        let dom = domain(g, u);
        checks += 1;
        if !act_set(g, u, &dom).same_set(g, &domain(g, &u.inv())) {
            violations.push(format!("{} does not map its domain onto that of its inverse", u.render(g)));
        }
        for x in &pts {
            checks += 1;
            let y = try_act(g, u, x);
            if y.is_some() != dom.member(x) {
                violations.push(format!("{} at {}: defined off its domain or undefined on it", u.render(g), x.render(g)));
            }
            if let Some(y) = &y {
                if try_act(g, &u.inv(), y).as_ref() != Some(x) {
                    violations.push(format!("{}⁻¹ does not undo {} at {}", u.render(g), u.render(g), x.render(g)));
                }
            }
            for v in &words {
                let Some(z) = try_act(g, v, x).and_then(|y| try_act(g, u, &y)) else { continue };
                checks += 1;
                if try_act(g, &u.mul(v), x) != Some(z) {
                    violations.push(format!("({})({}) at {}", u.render(g), v.render(g), x.render(g)));
                }
            }
        }
    }
    AxiomReport { pass: violations.is_empty(), words: words.len(), points: pts.len(), checks, violations }
}
