use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use serde_json::{json, Value};

use super::{modulo, parse_word, render_positive, Element, Family};
use crate::error::{Error, Result};

/// A constructible right ideal, in the family's exact representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ideal {
    Empty,
    /// `p + ℕᵏ`.
    Offset(Vec<i64>),
    /// `wP` for a positive word `w`.
    Principal(Vec<i32>),
    /// `(x + mℤ) × (mℤ)^×`, with `0 ≤ x < m`.
    Coset { residue: i64, modulus: i64 },
}

impl Ideal {
    pub fn coset(residue: i64, modulus: i64) -> Ideal {
        Ideal::Coset { residue: modulo(residue, modulus), modulus }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Ideal::Empty)
    }

    /// The measure the closure bound applies to: largest offset coordinate,
    /// word length, or modulus.
    pub fn size(&self) -> usize {
        match self {
            Ideal::Empty => 0,
            Ideal::Offset(p) => p.iter().copied().max().unwrap_or(0) as usize,
            Ideal::Principal(w) => w.len(),
            Ideal::Coset { modulus, .. } => *modulus as usize,
        }
    }

    fn sort_key(&self) -> (bool, usize, &Ideal) {
        (self.is_empty(), self.size(), self)
    }

    pub fn render(&self) -> String {
        match self {
            Ideal::Empty => "∅".into(),
            Ideal::Offset(p) if p.len() == 1 && p[0] == 0 => "N".into(),
            Ideal::Offset(p) if p.len() == 1 => format!("{}+N", p[0]),
            Ideal::Offset(p) => format!(
                "({})+N^{}",
                p.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
                p.len()
            ),
            Ideal::Principal(w) if w.is_empty() => "P".into(),
            Ideal::Principal(w) => format!("{}P", render_positive(w)),
            Ideal::Coset { residue, modulus } => format!("{residue}+{modulus}Z"),
        }
    }

    pub fn to_json(&self, fam: Family) -> Value {
        json!({"family": fam.to_string(), "repr": self.render()})
    }
}

impl Family {
    pub fn whole(self) -> Ideal {
        match self {
            Family::Natural(k) => Ideal::Offset(vec![0; k]),
            Family::Free(_) => Ideal::Principal(Vec::new()),
            Family::Axb => Ideal::coset(0, 1),
        }
    }

    /// `N`, `3+N`, `(1,2)+N^2`, `P`, `xyP`, `0+2Z`, `Z`, `∅`.
    pub fn parse_ideal(self, s: &str) -> Result<Ideal> {
        let t = s.trim();
        if t == "∅" || t == "{}" || t == "empty" {
            return Ok(Ideal::Empty);
        }
        let bad = |m: &str| Error::parse(s, m.to_string());
        match self {
            Family::Natural(k) => {
                let head = t.strip_suffix(&format!("+N^{k}")).or_else(|| t.strip_suffix("+N"));
                let offset = match head {
                    None if t == "N" || t == format!("N^{k}") => vec![0; k],
                    None => return Err(bad("expected p+N^k")),
                    Some(h) => match self.parse_element(h)? {
                        Element::Vector(v) => v,
                        _ => unreachable!(),
                    },
                };
                if offset.iter().any(|&c| c < 0) {
                    return Err(bad("offsets lie in N^k"));
                }
                Ok(Ideal::Offset(offset))
            }
            Family::Free(n) => {
                let head = t.strip_suffix('P').ok_or_else(|| bad("expected wP"))?;
                let w = parse_word(head, n)?;
                if w.iter().any(|&l| l < 0) {
                    return Err(bad("ideal generators are positive words"));
                }
                Ok(Ideal::Principal(w))
            }
            Family::Axb => {
                if t == "Z" || t == "P" {
                    return Ok(self.whole());
                }
                let (x, m) = t.split_once('+').ok_or_else(|| bad("expected x+mZ"))?;
                let m = m.trim().strip_suffix('Z').ok_or_else(|| bad("expected x+mZ"))?;
                let m: i64 = if m.trim().is_empty() { 1 } else { m.trim().parse().map_err(|_| bad("bad modulus"))? };
                let x: i64 = x.trim().parse().map_err(|_| bad("bad residue"))?;
                if m < 1 {
                    return Err(bad("moduli are positive"));
                }
                Ok(Ideal::coset(x, m))
            }
        }
    }

    /// `pX` for `p ∈ P`.
    pub fn left_mul(self, p: &Element, x: &Ideal) -> Ideal {
        match (p, x) {
            (_, Ideal::Empty) => Ideal::Empty,
            (Element::Vector(p), Ideal::Offset(q)) => Ideal::Offset(p.iter().zip(q).map(|(a, b)| a + b).collect()),
            (Element::Word(p), Ideal::Principal(w)) => Ideal::Principal([p.as_slice(), w].concat()),
            (p, Ideal::Coset { residue, modulus }) => {
                let (b, a) = Family::affine_ints(p).expect("an element of P");
                let m = a.abs() * modulus;
                Ideal::coset(b + a * residue, m)
            }
            _ => panic!("element and ideal of different families"),
        }
    }

    /// `p⁻¹X = {y ∈ P : py ∈ X}` for `p ∈ P`.
    pub fn preimage(self, p: &Element, x: &Ideal) -> Ideal {
        match (p, x) {
            (_, Ideal::Empty) => Ideal::Empty,
            (Element::Vector(p), Ideal::Offset(q)) => {
                Ideal::Offset(p.iter().zip(q).map(|(a, b)| (b - a).max(0)).collect())
            }
            (Element::Word(p), Ideal::Principal(w)) => {
                if w.starts_with(p) {
                    Ideal::Principal(w[p.len()..].to_vec())
                } else if p.starts_with(w) {
                    self.whole()
                } else {
                    Ideal::Empty
                }
            }
            (p, &Ideal::Coset { residue, modulus }) => {
                // b + ac ≡ x (mod m) and m | ad.
                let (b, a) = Family::affine_ints(p).expect("an element of P");
                let g = a.gcd(&modulus);
                let m2 = modulus / g;
                let diff = residue - b;
                if diff % g != 0 {
                    return Ideal::Empty;
                }
                let inv = modular_inverse(modulo(a / g, m2), m2);
                Ideal::coset(modulo(diff / g, m2) * inv, m2)
            }
            _ => panic!("element and ideal of different families"),
        }
    }

    pub fn intersect(self, x: &Ideal, y: &Ideal) -> Ideal {
        match (x, y) {
            (Ideal::Empty, _) | (_, Ideal::Empty) => Ideal::Empty,
            (Ideal::Offset(p), Ideal::Offset(q)) => Ideal::Offset(p.iter().zip(q).map(|(a, b)| *a.max(b)).collect()),
            (Ideal::Principal(v), Ideal::Principal(w)) => {
                if w.starts_with(v) {
                    y.clone()
                } else if v.starts_with(w) {
                    x.clone()
                } else {
                    Ideal::Empty
                }
            }
            (&Ideal::Coset { residue: r1, modulus: m1 }, &Ideal::Coset { residue: r2, modulus: m2 }) => {
                match crt(r1, m1, r2, m2) {
                    Some((r, m)) => Ideal::coset(r, m),
                    None => Ideal::Empty,
                }
            }
            _ => panic!("ideals of different families"),
        }
    }

    pub fn is_subset(self, x: &Ideal, y: &Ideal) -> bool {
        self.intersect(x, y) == *x
    }

    /// Members of `X` of size at most `bound` beyond its least element.
    pub fn ideal_elements(self, x: &Ideal, bound: usize) -> Vec<Element> {
        match x {
            Ideal::Empty => Vec::new(),
            _ => self.p_elements(bound).iter().filter_map(|t| self.least_element(x).map(|l| self.mul(&l, t))).collect(),
        }
    }

    /// The generator of a nonempty ideal: `p`, `w` or `(x, m)`.
    pub fn least_element(self, x: &Ideal) -> Option<Element> {
        match x {
            Ideal::Empty => None,
            Ideal::Offset(p) => Some(Element::Vector(p.clone())),
            Ideal::Principal(w) => Some(Element::Word(w.clone())),
            &Ideal::Coset { residue, modulus } => Some(Family::affine(residue, modulus)),
        }
    }
}

/// `χ_p(X)`: whether `p ∈ X`.
pub fn chi_p(fam: Family, p: &Element, x: &Ideal) -> bool {
    let _ = fam;
    match (p, x) {
        (_, Ideal::Empty) => false,
        (Element::Vector(p), Ideal::Offset(q)) => p.iter().zip(q).all(|(a, b)| a >= b),
        (Element::Word(p), Ideal::Principal(w)) => p.starts_with(w),
        (p, &Ideal::Coset { residue, modulus }) => match Family::affine_ints(p) {
            Some((b, a)) => a != 0 && modulo(b - residue, modulus) == 0 && a % modulus == 0,
            None => false,
        },
        _ => false,
    }
}

fn modular_inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    modulo(e.x, m)
}

/// Common solutions of `t ≡ r1 (m1)` and `t ≡ r2 (m2)`, as `(r, lcm)`.
pub(crate) fn crt(r1: i64, m1: i64, r2: i64, m2: i64) -> Option<(i64, i64)> {
    let e = m1.extended_gcd(&m2);
    let g = e.gcd;
    if (r2 - r1) % g != 0 {
        return None;
    }
    let l = m1 / g * m2;
    let k = modulo((r2 - r1) / g * e.x, m2 / g);
    Some((modulo(r1 + m1 * k, l), l))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub ideals: Vec<Ideal>,
    /// Some ideal past the bound was reached and dropped.
    pub truncated: bool,
}

/// Closure of `{P}` under `X ↦ pX` and `X ↦ p⁻¹X` for the generators,
/// keeping ideals of size at most `bound`.
pub fn ideal_closure(fam: Family, generators: &[Element], bound: usize) -> Result<Closure> {
    for p in generators {
        fam.check(p)?;
        if !fam.in_p(p) {
            return Err(Error::Input(format!("{} is not in P", fam.render(p))));
        }
    }
    let mut seen = BTreeSet::from([fam.whole()]);
    let mut queue = VecDeque::from([fam.whole()]);
    let mut truncated = false;
    while let Some(x) = queue.pop_front() {
        for p in generators {
            for y in [fam.left_mul(p, &x), fam.preimage(p, &x)] {
                if y.size() > bound {
                    truncated = true;
                } else if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    let mut ideals: Vec<Ideal> = seen.into_iter().collect();
    ideals.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(Closure { ideals, truncated })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceVerdict {
    /// No proper cover was found within the caps.
    pub independent: bool,
    /// `X = X₁ ∪ ⋯ ∪ Xₙ` with every `Xᵢ ≠ X`.
    pub witness: Option<(Ideal, Vec<Ideal>)>,
    pub covers_checked: usize,
}

/// A member of `X` outside every part, searched up to `bound`.
pub(crate) fn uncovered(fam: Family, x: &Ideal, parts: &[&Ideal], bound: usize) -> Option<Element> {
    fam.ideal_elements(x, bound).into_iter().find(|t| parts.iter().all(|y| !chi_p(fam, t, y)))
}

/// Searches for proper covers `X = X₁ ∪ ⋯ ∪ Xₙ` with `n ≤ cap` among the
/// given ideals. A union counts as a cover when no member of `X` of size
/// up to `search_bound` escapes it.
pub fn independence_check(fam: Family, ideals: &[Ideal], cap: usize, search_bound: usize) -> IndependenceVerdict {
    let mut covers_checked = 0;
    for x in ideals.iter().filter(|x| !x.is_empty()) {
        let proper: Vec<&Ideal> =
            ideals.iter().filter(|y| !y.is_empty() && *y != x && fam.is_subset(y, x)).collect();
        let mut stack: Vec<(usize, Vec<&Ideal>)> = vec![(0, Vec::new())];
        while let Some((from, chosen)) = stack.pop() {
            if !chosen.is_empty() {
                covers_checked += 1;
                if uncovered(fam, x, &chosen, search_bound).is_none() {
                    return IndependenceVerdict {
                        independent: false,
                        witness: Some((x.clone(), chosen.into_iter().cloned().collect())),
                        covers_checked,
                    };
                }
            }
            if chosen.len() < cap {
                for i in from..proper.len() {
                    let mut next = chosen.clone();
                    next.push(proper[i]);
                    stack.push((i + 1, next));
                }
            }
        }
    }
    IndependenceVerdict { independent: true, witness: None, covers_checked }
}
