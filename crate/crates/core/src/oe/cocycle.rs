use crate::boundary::{points_up_to, try_act, BoundaryPoint, Cylinder, WordAction};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::words::{Letter, ReducedWord};

use super::homeo::PrefixHomeo;

/// Parallel copies are enumerated in full; graphs with infinite families are
/// rejected before this is used.
pub(crate) const ALL_COPIES: u32 = u32::MAX;

pub(crate) fn require_finite(g: &Graph) -> Result<()> {
    if g.has_infinite_edges() {
        return Err(Error::Unsupported(
            "orbit equivalence needs finitely many generators; the graph has an infinite edge family".into(),
        ));
    }
    Ok(())
}

/// Generators `E¹ ∪ (E¹)⁻¹`, positive letters first.
pub fn generators(g: &Graph) -> Vec<Letter> {
    let insts = g.all_instances(ALL_COPIES);
    insts.iter().map(|&e| Letter::pos(e)).chain(insts.iter().map(|&e| Letter::neg(e))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleEntry {
    pub generator: Letter,
    pub on: Cylinder,
    pub value: ReducedWord,
}

/// A locally constant map `(generator, x) ↦ word`, given on cylinders that
/// partition each generator's domain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cocycle {
    pub entries: Vec<CocycleEntry>,
}

impl Cocycle {
    pub fn value(&self, generator: Letter, x: &BoundaryPoint) -> Option<&ReducedWord> {
        self.entries.iter().find(|en| en.generator == generator && en.on.member(x)).map(|en| &en.value)
    }

    /// `a(g, x)` for any word, via `a(g₁g₂, x) = a(g₁, g₂.x) a(g₂, x)`
    /// applied letter by letter from the right.
    pub fn eval(&self, g: &Graph, word: &ReducedWord, x: &BoundaryPoint) -> Option<ReducedWord> {
        let mut at = x.clone();
        let mut acc = ReducedWord::identity();
        for &l in word.letters().iter().rev() {
            let letter = ReducedWord::letter(l);
            acc = self.value(l, &at)?.mul(&acc);
            at = try_act(g, &letter, &at)?;
        }
        Some(acc)
    }
}

/// `g.ρ` as a path, for `ρ` extending the domain stem of `g`.
pub(crate) fn act_on_path(g: &Graph, word: &ReducedWord, rho: &Path) -> Option<Path> {
    match WordAction::of(g, word) {
        WordAction::Identity => Some(rho.clone()),
        WordAction::Replace { alpha, beta } => g.concat(&alpha, &g.strip_prefix(rho, &beta)?).ok(),
        WordAction::Nowhere => None,
    }
}

/// Splits `Z(start)` into cylinders `Z(ρ)`, extending `ρ` one edge at a
/// time in lexicographic order until `accept` produces a value.
pub(crate) fn refine<T>(
    g: &Graph,
    start: Path,
    max_depth: usize,
    mut accept: impl FnMut(&Path) -> Option<T>,
) -> Result<Vec<(Path, T)>> {
    let mut out = Vec::new();
    let mut stack = vec![start];
    while let Some(rho) = stack.pop() {
        if let Some(v) = accept(&rho) {
            out.push((rho, v));
            continue;
        }
        let s = g.source(&rho);
        if g.is_infinite_receiver(s) {
            return Err(Error::Unsupported(format!(
                "refining {} would split an infinite receiver",
                g.render_path(&rho)
            )));
        }
        if g.is_sink(s) {
            return Err(Error::Form(format!("no locally constant value at the point {}", g.render_path(&rho))));
        }
        if rho.len() >= max_depth {
            return Err(Error::Size { what: "cylinder refinement depth".into(), actual: rho.len() + 1, cap: max_depth });
        }
        let mut children: Vec<Path> = g
            .receiver_instances(s, ALL_COPIES)
            .into_iter()
            .map(|e| g.extend(&rho, e).expect("receivers extend"))
            .collect();
        children.reverse();
        stack.extend(children);
    }
    Ok(out)
}

/// The cocycle forced by a prefix homeomorphism: on `Z(ρ)` fine enough that
/// `φ(ρy) = Φ(ρ)τ(y)` and `φ(g.ρy) = Φ(g.ρ)τ(y)`, the value is `Φ(g.ρ)Φ(ρ)⁻¹`.
pub fn derive_cocycle(e: &Graph, f: &Graph, phi: &PrefixHomeo, max_depth: usize) -> Result<Cocycle> {
    require_finite(e)?;
    let mut entries = Vec::new();
    for generator in generators(e) {
        let word = ReducedWord::letter(generator);
        let WordAction::Replace { beta, .. } = WordAction::of(e, &word) else { unreachable!("letters act") };
        let pieces = refine(e, beta, max_depth, |rho| {
            let here = phi.apply_path(e, f, rho)?;
            let there = phi.apply_path(e, f, &act_on_path(e, &word, rho)?)?;
            Some(ReducedWord::from_pair(&there, &here))
        })?;
        for (rho, value) in pieces {
            entries.push(CocycleEntry { generator, on: Cylinder::plain(rho), value });
        }
    }
    Ok(Cocycle { entries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleFailure {
    /// `"a"` for the forward identity, `"b"` for the inverse one.
    pub side: &'static str,
    pub generator: String,
    pub point: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeReport {
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<CocycleFailure>,
}

fn check_side(
    e: &Graph,
    f: &Graph,
    phi: &PrefixHomeo,
    a: &Cocycle,
    depth: usize,
    side: &'static str,
    failures: &mut Vec<CocycleFailure>,
) -> usize {
    let mut checked = 0;
    for x in points_up_to(e, depth, ALL_COPIES) {
        for generator in generators(e) {
            let word = ReducedWord::letter(generator);
            let Some(gx) = try_act(e, &word, &x) else { continue };
            checked += 1;
            let fail = |reason: String| CocycleFailure {
                side,
                generator: word.render(e),
                point: x.render(e),
                reason,
            };
            let Some(h) = a.value(generator, &x) else {
                failures.push(fail("no cocycle value here".into()));
                continue;
            };
            let (Some(px), Some(pgx)) = (phi.apply(e, f, &x), phi.apply(e, f, &gx)) else {
                failures.push(fail("the homeomorphism is undefined here".into()));
                continue;
            };
            match try_act(f, h, &px) {
                None => failures.push(fail(format!("{} does not act at {}", h.render(f), px.render(f)))),
                Some(y) if y != pgx => failures.push(fail(format!(
                    "{} sends {} to {}, not {}",
                    h.render(f),
                    px.render(f),
                    y.render(f),
                    pgx.render(f)
                ))),
                Some(_) => {}
            }
        }
    }
    checked
}

/// `φ(g.x) = a(g, x).φ(x)` and `φ⁻¹(h.y) = b(h, y).φ⁻¹(y)` for generators
/// and every point of complexity at most `depth`.
pub fn coe_check(e: &Graph, f: &Graph, phi: &PrefixHomeo, a: &Cocycle, b: &Cocycle, depth: usize) -> CoeReport {
    let mut failures = Vec::new();
    let mut checked = check_side(e, f, phi, a, depth, "a", &mut failures);
    checked += check_side(f, e, &phi.inverse(), b, depth, "b", &mut failures);
    CoeReport { pass: failures.is_empty(), checked, failures }
}
