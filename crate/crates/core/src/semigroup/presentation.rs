use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A monoid presentation with positive relations, words stored as generator
/// indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Presentation {
    /// `"x, y | xy = yx; ..."`. Generator names may be several characters
    /// long; words are split by longest match, spaces ignored.
    pub fn parse(s: &str) -> Result<Presentation> {
        let (gens, rels) = s.split_once('|').unwrap_or((s, ""));
        let generators: Vec<String> =
            gens.trim().trim_start_matches('<').split([',', ' ']).filter(|g| !g.is_empty()).map(String::from).collect();
        if generators.is_empty() {
            return Err(Error::parse(s, "a presentation needs at least one generator"));
        }
        if generators.iter().collect::<BTreeSet<_>>().len() != generators.len() {
            return Err(Error::parse(s, "repeated generator"));
        }
        let mut p = Presentation { generators, relations: Vec::new() };
        for rel in rels.trim().trim_end_matches('>').split([';', ',']).map(str::trim).filter(|r| !r.is_empty()) {
            let (l, r) = rel.split_once('=').ok_or_else(|| Error::Form(format!("relation `{rel}` has no `=`")))?;
            let (l, r) = (p.word(l)?, p.word(r)?);
            if l.is_empty() || r.is_empty() {
                return Err(Error::Form(format!("relation `{rel}` has an empty side")));
            }
            p.relations.push((l, r));
        }
        Ok(p)
    }

    fn word(&self, s: &str) -> Result<Vec<usize>> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = s.as_str();
        let mut out = Vec::new();
        while !rest.is_empty() {
            let (i, g) = self
                .generators
                .iter()
                .enumerate()
                .filter(|(_, g)| rest.starts_with(g.as_str()))
                .max_by_key(|(_, g)| g.len())
                .ok_or_else(|| Error::Form(format!("`{rest}` does not start with a generator")))?;
            out.push(i);
            rest = &rest[g.len()..];
        }
        Ok(out)
    }

    pub fn free(n: usize) -> Presentation {
        let generators = super::LETTERS.iter().take(n).map(|s| s.to_string()).collect();
        Presentation { generators, relations: Vec::new() }
    }

    /// `⟨x₀, …, x_{n-1} | xᵢxₖ = xₖxᵢ₊₁, k < i⟩`, keeping relations whose
    /// letters stay below `n`.
    pub fn thompson(n: usize) -> Presentation {
        let generators = (0..n).map(|i| format!("x{i}")).collect();
        let relations =
            (0..n).flat_map(|i| (0..i).map(move |k| (i, k))).filter(|&(i, _)| i + 1 < n).map(|(i, k)| (vec![i, k], vec![k, i + 1])).collect();
        Presentation { generators, relations }
    }

    pub fn commutative_pair() -> Presentation {
        Presentation::commutative(&["u", "v"])
    }

    /// The free commutative monoid on the given generators.
    pub fn commutative(names: &[&str]) -> Presentation {
        let n = names.len();
        let relations = (0..n).flat_map(|i| (i + 1..n).map(move |j| (vec![i, j], vec![j, i]))).collect();
        Presentation { generators: names.iter().map(|s| s.to_string()).collect(), relations }
    }

    /// The presentation of the opposite monoid: every relation read backwards.
    pub fn opposite(&self) -> Presentation {
        let rev = |w: &Vec<usize>| w.iter().rev().copied().collect::<Vec<_>>();
        Presentation {
            generators: self.generators.clone(),
            relations: self.relations.iter().map(|(l, r)| (rev(l), rev(r))).collect(),
        }
    }

    pub fn render_word(&self, w: &[usize]) -> String {
        w.iter().map(|&i| self.generators[i].as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisVerdict {
    pub pass: bool,
    /// For every generator `u`, the first `v ≠ u` with no relation `u⋯ = v⋯`
    /// (either way round), or `None`.
    pub table: Vec<(String, Option<String>)>,
    pub failing: Vec<String>,
}

impl HypothesisVerdict {
    /// The conclusion "`G₀ = {e}` and the boundary quotient is simple" is
    /// echoed only when the caller vouches for quasi-lattice order and
    /// r-completeness and the scan passed.
    pub fn certificate(&self, quasi_lattice: bool, r_complete: bool) -> bool {
        self.pass && quasi_lattice && r_complete
    }
}

/// Scans leading letters of relation sides.
pub fn rcomplete_hypothesis_check(p: &Presentation) -> HypothesisVerdict {
    let n = p.generators.len();
    let covered: BTreeSet<(usize, usize)> =
        p.relations.iter().flat_map(|(l, r)| [(l[0], r[0]), (r[0], l[0])]).collect();
    let table: Vec<(String, Option<String>)> = (0..n)
        .map(|u| {
            let v = (0..n).find(|&v| v != u && !covered.contains(&(u, v)));
            (p.generators[u].clone(), v.map(|v| p.generators[v].clone()))
        })
        .collect();
    let failing: Vec<String> = table.iter().filter(|(_, v)| v.is_none()).map(|(u, _)| u.clone()).collect();
    HypothesisVerdict { pass: failing.is_empty(), table, failing }
}
