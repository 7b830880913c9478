use crate::error::{Error, Result};
use crate::graph::{EdgeInstance, Graph, Path};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub inst: EdgeInstance,
    pub inv: bool,
}

impl Letter {
    pub fn pos(inst: EdgeInstance) -> Self {
        Letter { inst, inv: false }
    }

    pub fn neg(inst: EdgeInstance) -> Self {
        Letter { inst, inv: true }
    }

    pub fn inverse(self) -> Self {
        Letter { inst: self.inst, inv: !self.inv }
    }
}

/// An element of the free group on the edge instances, in reduced form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord(Vec<Letter>);

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        ReducedWord(vec![l])
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        ReducedWord(out)
    }

    pub fn from_path(p: &Path) -> Self {
        ReducedWord(p.edges().iter().map(|&e| Letter::pos(e)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        let mut k = 0;
        while k < self.0.len() && k < other.0.len() && self.0[self.0.len() - 1 - k] == other.0[k].inverse() {
            k += 1;
        }
        let mut out = self.0[..self.0.len() - k].to_vec();
        out.extend_from_slice(&other.0[k..]);
        ReducedWord(out)
    }

    pub fn inv(&self) -> ReducedWord {
        ReducedWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Splits a word of the form `αβ⁻¹` with `α`, `β` positive letter runs.
    pub fn positive_negative(&self) -> Option<(Vec<EdgeInstance>, Vec<EdgeInstance>)> {
        let k = self.0.iter().position(|l| l.inv).unwrap_or(self.0.len());
        if self.0[k..].iter().any(|l| !l.inv) {
            return None;
        }
        let alpha = self.0[..k].iter().map(|l| l.inst).collect();
        let beta = self.0[k..].iter().rev().map(|l| l.inst).collect();
        Some((alpha, beta))
    }

    /// Reads the word as `αβ⁻¹` with `α`, `β` paths and `s(α) = s(β)`.
    /// Vertex paths fill in when a side is empty; the identity gives `None`.
    pub fn as_path_pair(&self, g: &Graph) -> Option<(Path, Path)> {
        let (a, b) = self.positive_negative()?;
        match (a.is_empty(), b.is_empty()) {
            (true, true) => None,
            (false, true) => {
                let alpha = g.path_of(a).ok()?;
                let s = g.source(&alpha);
                Some((alpha, Path::vertex(s)))
            }
            (true, false) => {
                let beta = g.path_of(b).ok()?;
                let s = g.source(&beta);
                Some((Path::vertex(s), beta))
            }
            (false, false) => {
                let alpha = g.path_of(a).ok()?;
                let beta = g.path_of(b).ok()?;
                (g.source(&alpha) == g.source(&beta)).then_some((alpha, beta))
            }
        }
    }

    /// `μν⁻¹`, reduced.
    pub fn from_pair(mu: &Path, nu: &Path) -> ReducedWord {
        ReducedWord::from_path(mu).mul(&ReducedWord::from_path(nu).inv())
    }

    pub fn render(&self, g: &Graph) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|l| {
                let s = g.render_instance(l.inst);
                if l.inv {
                    format!("{s}^-1")
                } else {
                    s
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parses `a.b^-1.f[2]`; `1` or the empty string is the identity.
    pub fn parse(g: &Graph, s: &str) -> Result<ReducedWord> {
        let s = s.trim();
        if s.is_empty() || s == "1" || s == "e" && g.edge_id("e").is_err() {
            return Ok(ReducedWord::identity());
        }
        let mut letters = Vec::new();
        for tok in s.split('.') {
            let tok = tok.trim();
            let (name, inv) = match tok.split_once('^') {
                Some((n, "-1")) => (n, true),
                Some((n, "1")) => (n, false),
                Some(_) => return Err(Error::parse(s, format!("bad exponent in `{tok}`"))),
                None => (tok, false),
            };
            let inst = g.parse_instance(name)?;
            letters.push(Letter { inst, inv });
        }
        Ok(ReducedWord::from_letters(letters))
    }

    /// All reduced words of length at most `n` over the given generators.
    pub fn all_up_to(gens: &[EdgeInstance], n: usize) -> Vec<ReducedWord> {
        let letters: Vec<Letter> = gens.iter().flat_map(|&e| [Letter::pos(e), Letter::neg(e)]).collect();
        let mut out = vec![ReducedWord::identity()];
        let mut frontier = vec![ReducedWord::identity()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    if w.0.last() != Some(&l.inverse()) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(ReducedWord(v));
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

pub fn fg_mul(u: &ReducedWord, v: &ReducedWord) -> ReducedWord {
    u.mul(v)
}

pub fn fg_inv(u: &ReducedWord) -> ReducedWord {
    u.inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn w(g: &Graph, s: &str) -> ReducedWord {
        ReducedWord::parse(g, s).unwrap()
    }

    #[test]
    fn examples() {
        let g = corpus::g2();
        assert!(fg_mul(&w(&g, "a.b^-1"), &w(&g, "b.a^-1")).is_identity());
        assert_eq!(fg_mul(&w(&g, "a"), &w(&g, "b")).render(&g), "a.b");
        assert_eq!(fg_inv(&w(&g, "a.b^-1")).render(&g), "b.a^-1");
        assert_eq!(w(&g, "a.a^-1.b").render(&g), "b");
        assert_eq!(w(&g, "1").render(&g), "1");
    }

    #[test]
    fn group_axioms_exhaustive() {
        let g = corpus::g2();
        let gens = g.all_instances(1);
        let words = ReducedWord::all_up_to(&gens, 4);
        let short: Vec<_> = words.iter().filter(|x| x.len() <= 2).collect();
        for x in &words {
            assert_eq!(x.inv().inv(), *x);
            assert_eq!(x.mul(&ReducedWord::identity()), *x);
            assert!(x.mul(&x.inv()).is_identity());
            assert_eq!(ReducedWord::parse(&g, &x.render(&g)).unwrap(), *x);
        }
        for x in &short {
            for y in &short {
                for z in &short {
                    assert_eq!(x.mul(y).mul(z), x.mul(&y.mul(z)));
                }
            }
        }
    }

    #[test]
    fn path_pairs() {
        let g = corpus::g2();
        let (a, b) = w(&g, "a.b^-1").as_path_pair(&g).unwrap();
        assert_eq!((g.render_path(&a), g.render_path(&b)), ("a".into(), "b".into()));
        assert!(w(&g, "a^-1.b").as_path_pair(&g).is_none());
        let g3 = corpus::g3();
        // `e` is an edge of G3, so it parses as a letter there.
        assert_eq!(w(&g3, "e").len(), 1);
        let (a, b) = w(&g3, "e^-1").as_path_pair(&g3).unwrap();
        assert_eq!((g3.render_path(&a), g3.render_path(&b)), ("w".into(), "e".into()));
    }
}
