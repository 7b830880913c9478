//! The partial transformation groupoid `F ⋉ ∂E` and the Deaconu–Renault
//! groupoid `G_E`, with the isomorphism between them.

use serde_json::{json, Value};

use crate::boundary::{act_point, admissible_words, points_up_to, BoundaryPoint};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::words::ReducedWord;

/// `(g, x)` with `x` in the domain of `g`. Source `x`, range `g.x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PtgElement {
    pub word: ReducedWord,
    pub point: BoundaryPoint,
}

impl PtgElement {
    pub fn new(g: &Graph, word: ReducedWord, point: BoundaryPoint) -> Result<PtgElement> {
        act_point(g, &word, &point)?;
        Ok(PtgElement { word, point })
    }

    pub fn unit(point: BoundaryPoint) -> PtgElement {
        PtgElement { word: ReducedWord::identity(), point }
    }

    pub fn source(&self) -> &BoundaryPoint {
        &self.point
    }

    pub fn range(&self, g: &Graph) -> BoundaryPoint {
        act_point(g, &self.word, &self.point).expect("the point lies in the domain")
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({ "g": self.word.render(g), "x": self.point.render(g) })
    }
}

/// `(g₁, g₂.x)(g₂, x) = (g₁g₂, x)`.
pub fn ptg_compose(g: &Graph, p: &PtgElement, q: &PtgElement) -> Result<PtgElement> {
    if p.point != q.range(g) {
        return Err(Error::Composition(format!(
            "{} is not the range {} of the right factor",
            p.point.render(g),
            q.range(g).render(g)
        )));
    }
    Ok(PtgElement { word: p.word.mul(&q.word), point: q.point.clone() })
}

pub fn ptg_inv(g: &Graph, p: &PtgElement) -> PtgElement {
    PtgElement { word: p.word.inv(), point: p.range(g) }
}

/// `(α, n, β)` with `σᵏ(α) = σˡ(β)`, `n = k − l`. The least such `k` is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DrElement {
    pub alpha: BoundaryPoint,
    pub n: i64,
    pub beta: BoundaryPoint,
    k: usize,
}

impl DrElement {
    pub fn new(g: &Graph, alpha: BoundaryPoint, n: i64, beta: BoundaryPoint) -> Result<DrElement> {
        let start = n.max(0) as usize;
        // Past both prefixes plus one period, shifting further repeats.
        let limit = start + alpha.complexity() + beta.complexity() + 1;
        for k in start..=limit {
            let l = (k as i64 - n) as usize;
            match (alpha.shift_by(g, k), beta.shift_by(g, l)) {
                (Some(a), Some(b)) if a == b => return Ok(DrElement { alpha, n, beta, k }),
                (None, _) | (_, None) => break,
                _ => {}
            }
        }
        Err(Error::Composition(format!(
            "no shifts of {} and {} agree with lag {n}",
            alpha.render(g),
            beta.render(g)
        )))
    }

    pub fn unit(x: BoundaryPoint) -> DrElement {
        DrElement { alpha: x.clone(), n: 0, beta: x, k: 0 }
    }

    /// The minimal witness `(k, l)`.
    pub fn witness(&self) -> (usize, usize) {
        (self.k, (self.k as i64 - self.n) as usize)
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({ "alpha": self.alpha.render(g), "n": self.n, "beta": self.beta.render(g) })
    }
}

pub fn dr_compose(g: &Graph, p: &DrElement, q: &DrElement) -> Result<DrElement> {
    if p.beta != q.alpha {
        return Err(Error::Composition(format!(
            "middle entries {} and {} differ",
            p.beta.render(g),
            q.alpha.render(g)
        )));
    }
    DrElement::new(g, p.alpha.clone(), p.n + q.n, q.beta.clone())
}

pub fn dr_inv(g: &Graph, p: &DrElement) -> DrElement {
    DrElement::new(g, p.beta.clone(), -p.n, p.alpha.clone()).expect("the witness transposes")
}

/// `(λμ⁻¹, μy) ↦ (λy, l(λ) − l(μ), μy)`.
pub fn to_dr(g: &Graph, p: &PtgElement) -> DrElement {
    let (alpha_len, beta_len) = match p.word.positive_negative() {
        Some((a, b)) => (a.len() as i64, b.len() as i64),
        None => unreachable!("words acting somewhere have the form λμ⁻¹"),
    };
    DrElement::new(g, p.range(g), alpha_len - beta_len, p.point.clone()).expect("λy and μy share the tail y")
}

/// `(λy, n, μy) ↦ (λμ⁻¹, μy)` with `λ`, `μ` cut at the minimal witness,
/// so `λμ⁻¹` is already reduced.
pub fn to_ptg(g: &Graph, d: &DrElement) -> PtgElement {
    let (k, l) = d.witness();
    let lambda = d.alpha.initial(g, k).expect("k is within α");
    let mu = d.beta.initial(g, l).expect("l is within β");
    PtgElement { word: ReducedWord::from_pair(&lambda, &mu), point: d.beta.clone() }
}

/// Every `(g, x)` with `x` of complexity at most `depth` and `g` admissible
/// at `x` with `l(α) + l(β) ≤ bound`.
pub fn ptg_elements(g: &Graph, depth: usize, bound: usize, width: u32) -> Vec<PtgElement> {
    let mut out = Vec::new();
    for x in points_up_to(g, depth, width) {
        for word in admissible_words(g, &x, bound, width) {
            out.push(PtgElement { word, point: x.clone() });
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundtripReport {
    pub pass: bool,
    pub depth: usize,
    pub bound: usize,
    pub elements: usize,
    pub composable_pairs: usize,
    pub failures: Vec<String>,
}

/// Checks that `to_ptg ∘ to_dr` is the identity, that units, inverses,
/// sources and ranges correspond, and that `to_dr` preserves composition.
pub fn roundtrip_report(g: &Graph, depth: usize, bound: usize) -> RoundtripReport {
    roundtrip_report_with(g, depth, bound, bound)
}

/// As [`roundtrip_report`], composing each element only with the words of
/// length at most `factor_bound` admissible at its range.
pub fn roundtrip_report_with(g: &Graph, depth: usize, bound: usize, factor_bound: usize) -> RoundtripReport {
    let elements = ptg_elements(g, depth, bound, 2);
    let mut failures = Vec::new();
    let mut pairs = 0;
    for p in &elements {
        let d = to_dr(g, p);
        if to_ptg(g, &d) != *p {
            failures.push(format!("roundtrip of ({}, {})", p.word.render(g), p.point.render(g)));
        }
        if d.beta != *p.source() || d.alpha != p.range(g) {
            failures.push(format!("source/range of ({}, {})", p.word.render(g), p.point.render(g)));
        }
        if p.word.is_identity() && d != DrElement::unit(p.point.clone()) {
            failures.push(format!("unit at {}", p.point.render(g)));
        }
        if to_dr(g, &ptg_inv(g, p)) != dr_inv(g, &d) {
            failures.push(format!("inverse of ({}, {})", p.word.render(g), p.point.render(g)));
        }
        let y = p.range(g);
        for word in admissible_words(g, &y, factor_bound, 2) {
            let q = PtgElement { word, point: y.clone() };
            pairs += 1;
            let lhs = to_dr(g, &ptg_compose(g, &q, p).expect("composable by construction"));
            let rhs = dr_compose(g, &to_dr(g, &q), &d);
            if rhs.as_ref() != Ok(&lhs) {
                failures.push(format!("product ({}, {})({}, {})", q.word.render(g), y.render(g), p.word.render(g), p.point.render(g)));
            }
        }
    }
    RoundtripReport { pass: failures.is_empty(), depth, bound, elements: elements.len(), composable_pairs: pairs, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn pt(g: &Graph, s: &str) -> BoundaryPoint {
        BoundaryPoint::parse(g, s).unwrap()
    }

    fn w(g: &Graph, s: &str) -> ReducedWord {
        ReducedWord::parse(g, s).unwrap()
    }

    fn ptg(g: &Graph, word: &str, x: &str) -> PtgElement {
        PtgElement::new(g, w(g, word), pt(g, x)).unwrap()
    }

    fn dr(g: &Graph, a: &str, n: i64, b: &str) -> DrElement {
        DrElement::new(g, pt(g, a), n, pt(g, b)).unwrap()
    }

    #[test]
    fn ptg_examples() {
        let g = corpus::g2();
        let p = ptg(&g, "a.b^-1", "b.(a)^inf");
        assert_eq!(ptg_inv(&g, &p), ptg(&g, "b.a^-1", "(a)^inf"));
        let u = PtgElement::unit(pt(&g, "b.(a)^inf"));
        assert_eq!(ptg_compose(&g, &u, &u).unwrap(), u);
        let x = pt(&g, "b.(a)^inf");
        let a = ptg(&g, "a", "b.(a)^inf");
        let back = PtgElement::new(&g, w(&g, "a^-1"), a.range(&g)).unwrap();
        assert_eq!(ptg_compose(&g, &back, &a).unwrap(), PtgElement::unit(x));
        assert!(ptg_compose(&g, &a, &a).is_err());
        assert!(PtgElement::new(&g, w(&g, "a.b^-1"), pt(&g, "(a)^inf")).is_err());
    }

    #[test]
    fn dr_examples() {
        let g1 = corpus::g1();
        let p = dr(&g1, "(a)^inf", 1, "(a)^inf");
        let q = dr(&g1, "(a)^inf", -1, "(a)^inf");
        assert_eq!(dr_compose(&g1, &p, &q).unwrap(), DrElement::unit(pt(&g1, "(a)^inf")));
        let g2 = corpus::g2();
        let r = dr(&g2, "b.(a)^inf", 1, "(a)^inf");
        assert_eq!(dr_inv(&g2, &r), dr(&g2, "(a)^inf", -1, "b.(a)^inf"));
        assert!(dr_compose(&g2, &r, &r).is_err());
        assert!(DrElement::new(&g2, pt(&g2, "(a)^inf"), 0, pt(&g2, "(b)^inf")).is_err());
        let g3 = corpus::g3();
        assert!(DrElement::new(&g3, pt(&g3, "e"), 0, pt(&g3, "w")).is_err());
        assert_eq!(dr(&g3, "e", 1, "w").witness(), (1, 0));
    }

    #[test]
    fn isomorphism_examples() {
        let g = corpus::g2();
        let p = ptg(&g, "a.b^-1", "b.(a)^inf");
        let d = to_dr(&g, &p);
        assert_eq!(d, dr(&g, "(a)^inf", 0, "b.(a)^inf"));
        assert_eq!(d.witness(), (1, 1));
        assert_eq!(to_ptg(&g, &d), p);
        let x = pt(&g, "(a.b)^inf");
        assert_eq!(to_dr(&g, &PtgElement::unit(x.clone())), DrElement::unit(x));
    }

    /// The least `k` from the definition, by scanning all `k` up to a cap.
    #[test]
    fn minimal_witness_oracle() {
        let g = corpus::two_vertex();
        let pts = points_up_to(&g, 4, 1);
        for a in &pts {
            for b in &pts {
                for n in -3i64..=3 {
                    let brute = (0..40usize).find(|&k| {
                        let l = k as i64 - n;
                        l >= 0 && a.shift_by(&g, k).is_some() && a.shift_by(&g, k) == b.shift_by(&g, l as usize)
                    });
                    let got = DrElement::new(&g, a.clone(), n, b.clone()).ok().map(|d| d.witness().0);
                    assert_eq!(got, brute);
                }
            }
        }
    }

    #[test]
    fn roundtrips() {
        let r = roundtrip_report(&corpus::g2(), 3, 3);
        assert!(r.pass, "{:?}", r.failures);
        assert!(r.elements >= 200);
        for g in [corpus::g1(), corpus::g3(), corpus::g4(), corpus::g5(), corpus::g6()] {
            let r = roundtrip_report(&g, 3, 3);
            assert!(r.pass, "{:?}", r.failures);
        }
        // G3's boundary is {w, e}: the groupoid has exactly four elements.
        assert_eq!(roundtrip_report(&corpus::g3(), 6, 6).elements, 4);
    }

    #[test]
    fn groupoid_axioms() {
        let g = corpus::g2();
        let elements = ptg_elements(&g, 2, 2, 1);
        for p in &elements {
            let pi = ptg_inv(&g, p);
            assert_eq!(ptg_compose(&g, &pi, p).unwrap(), PtgElement::unit(p.point.clone()));
            assert_eq!(ptg_compose(&g, p, &PtgElement::unit(p.point.clone())).unwrap(), *p);
            let d = to_dr(&g, p);
            let di = dr_inv(&g, &d);
            assert_eq!(dr_compose(&g, &d, &di).unwrap(), DrElement::unit(d.alpha.clone()));
            for q in elements.iter().filter(|q| q.point == p.range(&g)) {
                for r in elements.iter().filter(|r| r.point == q.range(&g)) {
                    let left = ptg_compose(&g, &ptg_compose(&g, r, q).unwrap(), p).unwrap();
                    let right = ptg_compose(&g, r, &ptg_compose(&g, q, p).unwrap()).unwrap();
                    assert_eq!(left, right);
                    let (dp, dq, dr_) = (to_dr(&g, p), to_dr(&g, q), to_dr(&g, r));
                    let l2 = dr_compose(&g, &dr_compose(&g, &dr_, &dq).unwrap(), &dp).unwrap();
                    let r2 = dr_compose(&g, &dr_, &dr_compose(&g, &dq, &dp).unwrap()).unwrap();
                    assert_eq!(l2, r2);
                }
            }
        }
    }
}
