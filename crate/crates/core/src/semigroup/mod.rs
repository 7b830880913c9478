//! Constructible right ideals, character spaces and boundary certificates for
//! three semigroup families: `ℕᵏ ⊂ ℤᵏ`, free monoids `F_n⁺ ⊂ F_n`, and the
//! `ax+b` semigroup `ℤ ⋊ ℤ^× ⊂ ℚ ⋊ ℚ^×`.

mod characters;
mod g0;
mod ideals;
mod paradox;
mod presentation;

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub use characters::{
    minimality_probe, omega_condition_check, stage_ideals, stage_max_characters, MinimalityReport, OmegaCharacter,
    OmegaReport,
};
pub use g0::{g0_member, top_freeness_certificate, units_within, FreenessCertificate, G0Verdict, Side};
pub use ideals::{chi_p, ideal_closure, independence_check, Closure, Ideal, IndependenceVerdict};
pub use paradox::{
    axb_paradox_witness, axb_residue_oracle, boundary_paradox_witness, disjoint_pair, AxbOpen, AxbWitness,
    BasicOpen, BoundaryParadox,
};
pub use presentation::{rcomplete_hypothesis_check, HypothesisVerdict, Presentation};

pub type Q = Ratio<i64>;

/// Letter names for free monoids, in generator order.
const LETTERS: [&str; 8] = ["x", "y", "z", "w", "u", "v", "s", "t"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `ℕᵏ` inside `ℤᵏ`.
    Natural(usize),
    /// The free monoid on `n` letters inside the free group.
    Free(usize),
    /// `ℤ ⋊ ℤ^×` inside `ℚ ⋊ ℚ^×`.
    Axb,
}

/// A group element; it lies in `P` when [`Family::in_p`] says so.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Vector(Vec<i64>),
    /// Reduced word; `+i` is the `i`-th letter (from 1), `-i` its inverse.
    Word(Vec<i32>),
    /// `(b, a)` acting by `t ↦ b + at`.
    Affine(Q, Q),
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        let t = s.trim();
        let number = |digits: &str| {
            digits.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(|| Error::parse(s, "expected a positive rank"))
        };
        if t == "N" || t == "ℕ" {
            return Ok(Family::Natural(1));
        }
        if let Some(k) = t.strip_prefix("N^").or_else(|| t.strip_prefix("ℕ^")) {
            return Ok(Family::Natural(number(k)?));
        }
        if let Some(n) = t.strip_prefix("F+") {
            let n = number(n)?;
            if n > LETTERS.len() {
                return Err(Error::Input(format!("free monoids have at most {} letters", LETTERS.len())));
            }
            return Ok(Family::Free(n));
        }
        if t == "Z_axb" {
            return Ok(Family::Axb);
        }
        Err(Error::parse(s, "expected N^k, F+n or Z_axb"))
    }

    /// Standard generators: unit vectors, letters, or `(1,1)` and `(0,2)`.
    pub fn generators(self) -> Vec<Element> {
        match self {
            Family::Natural(k) => (0..k)
                .map(|i| Element::Vector((0..k).map(|j| i64::from(i == j)).collect()))
                .collect(),
            Family::Free(n) => (1..=n as i32).map(|l| Element::Word(vec![l])).collect(),
            Family::Axb => vec![Family::affine(1, 1), Family::affine(0, 2)],
        }
    }

    pub fn identity(self) -> Element {
        match self {
            Family::Natural(k) => Element::Vector(vec![0; k]),
            Family::Free(_) => Element::Word(Vec::new()),
            Family::Axb => Element::Affine(Q::from_integer(0), Q::from_integer(1)),
        }
    }

    pub fn mul(self, x: &Element, y: &Element) -> Element {
        match (x, y) {
            (Element::Vector(a), Element::Vector(b)) => Element::Vector(a.iter().zip(b).map(|(s, t)| s + t).collect()),
            (Element::Word(a), Element::Word(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Element::Word(out)
            }
            (Element::Affine(b, a), Element::Affine(c, d)) => Element::Affine(b + a * c, a * d),
            _ => panic!("elements of different families"),
        }
    }

    pub fn inv(self, x: &Element) -> Element {
        match x {
            Element::Vector(a) => Element::Vector(a.iter().map(|s| -s).collect()),
            Element::Word(w) => Element::Word(w.iter().rev().map(|l| -l).collect()),
            Element::Affine(b, a) => Element::Affine(-b / a, a.recip()),
        }
    }

    pub fn in_p(self, x: &Element) -> bool {
        match x {
            Element::Vector(a) => a.iter().all(|&s| s >= 0),
            Element::Word(w) => w.iter().all(|&l| l > 0),
            Element::Affine(b, a) => b.is_integer() && a.is_integer() && *a.numer() != 0,
        }
    }

    /// The integer pair `(b, a)` of an `ax+b` element of `P`.
    pub(crate) fn affine_ints(x: &Element) -> Option<(i64, i64)> {
        match x {
            Element::Affine(b, a) if b.is_integer() && a.is_integer() => Some((b.to_integer(), a.to_integer())),
            _ => None,
        }
    }

    pub fn affine(b: i64, a: i64) -> Element {
        Element::Affine(Q::from_integer(b), Q::from_integer(a))
    }

    fn check(self, x: &Element) -> Result<()> {
        let ok = match (self, x) {
            (Family::Natural(k), Element::Vector(v)) => v.len() == k,
            (Family::Free(n), Element::Word(w)) => w.iter().all(|l| l.unsigned_abs() as usize <= n && *l != 0),
            (Family::Axb, Element::Affine(_, a)) => *a.numer() != 0,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Input(format!("{} is not an element of the group of {self}", self.render(x))))
        }
    }

    pub fn render(self, x: &Element) -> String {
        match x {
            Element::Vector(v) if v.len() == 1 => v[0].to_string(),
            Element::Vector(v) => format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")),
            Element::Word(w) if w.is_empty() => "e".into(),
            Element::Word(w) => w
                .iter()
                .map(|&l| {
                    let name = LETTERS[l.unsigned_abs() as usize - 1];
                    if l > 0 {
                        name.to_string()
                    } else {
                        format!("{name}^-1")
                    }
                })
                .collect(),
            Element::Affine(b, a) => format!("({b},{a})"),
        }
    }

    /// `3`, `(-3,5)`, `xy^-1`, `x.y^-1`, `e`, `(1/2,3)`.
    pub fn parse_element(self, s: &str) -> Result<Element> {
        let t = s.trim();
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t);
        let x = match self {
            Family::Natural(_) => {
                let parts: std::result::Result<Vec<i64>, _> = inner.split(',').map(|p| p.trim().parse()).collect();
                Element::Vector(parts.map_err(|_| Error::parse(s, "expected integers"))?)
            }
            Family::Free(n) => Element::Word(parse_word(s, n)?),
            Family::Axb => {
                let (b, a) = inner.split_once(',').ok_or_else(|| Error::parse(s, "expected (b,a)"))?;
                let q = |p: &str| p.trim().parse::<Q>().map_err(|_| Error::parse(s, "expected rationals"));
                Element::Affine(q(b)?, q(a)?)
            }
        };
        self.check(&x)?;
        Ok(x)
    }

    /// Group elements of size at most `bound`: boxes in `ℤᵏ`, reduced words
    /// of length at most `bound`, and `(k/d, ±n/d')` with numerators and
    /// denominators at most `bound`.
    pub fn group_elements(self, bound: usize) -> Vec<Element> {
        let b = bound as i64;
        match self {
            Family::Natural(k) => boxes(k, -b, b).into_iter().map(Element::Vector).collect(),
            Family::Free(n) => free_words(n, bound, true).into_iter().map(Element::Word).collect(),
            Family::Axb => {
                let mut fracs: Vec<Q> = Vec::new();
                for d in 1..=b {
                    for k in -b..=b {
                        fracs.push(Q::new(k, d));
                    }
                }
                fracs.sort();
                fracs.dedup();
                let mut out = Vec::new();
                for beta in &fracs {
                    for alpha in fracs.iter().filter(|a| *a.numer() != 0) {
                        out.push(Element::Affine(*beta, *alpha));
                    }
                }
                out
            }
        }
    }

    /// Elements of `P` of size at most `bound`, smallest first.
    pub fn p_elements(self, bound: usize) -> Vec<Element> {
        let b = bound as i64;
        match self {
            Family::Natural(k) => {
                let mut v = boxes(k, 0, b);
                v.sort_by_key(|p| (p.iter().sum::<i64>(), p.clone()));
                v.into_iter().map(Element::Vector).collect()
            }
            Family::Free(n) => free_words(n, bound, false).into_iter().map(Element::Word).collect(),
            Family::Axb => {
                let mut out = Vec::new();
                for m in 1..=b.max(1) {
                    for a in [m, -m] {
                        for bb in (0..=b).chain(-b..0) {
                            out.push(Family::affine(bb, a));
                        }
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Natural(k) => write!(f, "N^{k}"),
            Family::Free(n) => write!(f, "F+{n}"),
            Family::Axb => write!(f, "Z_axb"),
        }
    }
}

pub(crate) fn letter_name(l: i32) -> &'static str {
    LETTERS[l.unsigned_abs() as usize - 1]
}

pub(crate) fn render_positive(w: &[i32]) -> String {
    w.iter().map(|&l| letter_name(l)).collect()
}

/// Letters with optional `^-1` or `⁻¹`; dots and spaces are ignored.
pub(crate) fn parse_word(s: &str, n: usize) -> Result<Vec<i32>> {
    let t = s.trim();
    if t == "e" || t == "1" || t.is_empty() {
        return Ok(Vec::new());
    }
    let mut out: Vec<i32> = Vec::new();
    let mut rest = t;
    while let Some(c) = rest.chars().next() {
        rest = &rest[c.len_utf8()..];
        if c == '.' || c.is_whitespace() {
            continue;
        }
        let idx = LETTERS[..n]
            .iter()
            .position(|l| l.starts_with(c))
            .ok_or_else(|| Error::parse(s, format!("unknown letter `{c}`")))?;
        let mut l = idx as i32 + 1;
        if let Some(r) = rest.strip_prefix("^-1").or_else(|| rest.strip_prefix("⁻¹")) {
            rest = r;
            l = -l;
        }
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Ok(out)
}

fn boxes(k: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v: Vec<i64>| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Reduced words of length at most `len`, by length then letters.
fn free_words(n: usize, len: usize, inverses: bool) -> Vec<Vec<i32>> {
    let letters: Vec<i32> =
        (1..=n as i32).chain(if inverses { (1..=n as i32).map(|l| -l).collect() } else { Vec::new() }).collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.last() == Some(&-l) {
                    continue;
                }
                let mut v: Vec<i32> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `x mod m` in `0..m`.
pub(crate) fn modulo(x: i64, m: i64) -> i64 {
    x.mod_floor(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_roundtrip() {
        for s in ["N^1", "N^3", "F+2", "Z_axb"] {
            assert_eq!(Family::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(Family::parse("N").unwrap(), Family::Natural(1));
        assert!(Family::parse("Q").is_err());
    }

    #[test]
    fn group_laws() {
        for fam in [Family::Natural(2), Family::Free(2), Family::Axb] {
            let els = fam.group_elements(2);
            let e = fam.identity();
            for x in els.iter().take(40) {
                assert_eq!(fam.mul(x, &fam.inv(x)), e);
                assert_eq!(fam.mul(&fam.inv(x), x), e);
                for y in els.iter().take(15) {
                    for z in els.iter().take(5) {
                        assert_eq!(fam.mul(&fam.mul(x, y), z), fam.mul(x, &fam.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn element_text() {
        let f = Family::Free(2);
        let g = f.parse_element("xy^-1").unwrap();
        assert_eq!(g, Element::Word(vec![1, -2]));
        assert_eq!(f.render(&g), "xy^-1");
        assert_eq!(f.parse_element("x.y.y^-1").unwrap(), Element::Word(vec![1]));
        let n = Family::Natural(2);
        assert_eq!(n.parse_element("(-3,5)").unwrap(), Element::Vector(vec![-3, 5]));
        assert!(n.parse_element("(1,2,3)").is_err());
        let a = Family::Axb;
        assert_eq!(a.render(&a.parse_element("(1/2, 3)").unwrap()), "(1/2,3)");
        assert!(a.parse_element("(1,0)").is_err());
    }

    #[test]
    fn p_membership() {
        assert!(Family::Axb.in_p(&Family::affine(-3, -2)));
        assert!(!Family::Axb.in_p(&Family::Axb.inv(&Family::affine(0, 2))));
        assert!(!Family::Free(2).in_p(&Element::Word(vec![1, -2])));
    }
}
