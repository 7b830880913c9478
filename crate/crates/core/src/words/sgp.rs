use crate::error::{Error, Result};
use crate::graph::{Graph, Path};

use super::free::ReducedWord;

/// An element of the graph inverse semigroup: `0` or `(μ, ν)` with `s(μ) = s(ν)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SgpElement {
    Zero,
    Pair(Path, Path),
}

impl SgpElement {
    pub fn pair(g: &Graph, mu: Path, nu: Path) -> Result<SgpElement> {
        if g.source(&mu) != g.source(&nu) {
            return Err(Error::Composition(format!(
                "s({}) ≠ s({})",
                g.render_path(&mu),
                g.render_path(&nu)
            )));
        }
        Ok(SgpElement::Pair(mu, nu))
    }

    /// The idempotent `(μ, μ)`.
    pub fn idempotent(mu: Path) -> SgpElement {
        SgpElement::Pair(mu.clone(), mu)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SgpElement::Zero)
    }

    pub fn is_idempotent(&self) -> bool {
        matches!(self, SgpElement::Pair(m, n) if m == n)
    }

    pub fn render(&self, g: &Graph) -> String {
        match self {
            SgpElement::Zero => "0".into(),
            SgpElement::Pair(m, n) => format!("({}, {})", g.render_path(m), g.render_path(n)),
        }
    }

    pub fn parse(g: &Graph, s: &str) -> Result<SgpElement> {
        let t = s.trim();
        if t == "0" {
            return Ok(SgpElement::Zero);
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(s, "expected `(mu, nu)` or `0`"))?;
        let (m, n) = inner.split_once(',').ok_or_else(|| Error::parse(s, "expected a comma"))?;
        SgpElement::pair(g, g.parse_path(m)?, g.parse_path(n)?)
    }
}

/// Product in `S_E`. When `ν = ζν′` the result is `(μ, ην′)`: the
/// remainder of `ν` is appended to `η` at its source end.
pub fn sgp_mul(g: &Graph, x: &SgpElement, y: &SgpElement) -> SgpElement {
    let (SgpElement::Pair(mu, nu), SgpElement::Pair(zeta, eta)) = (x, y) else {
        return SgpElement::Zero;
    };
    if let Some(rest) = g.strip_prefix(nu, zeta) {
        let right = g.concat(eta, &rest).expect("r(ν′) = s(ζ) = s(η)");
        return SgpElement::Pair(mu.clone(), right);
    }
    if let Some(rest) = g.strip_prefix(zeta, nu) {
        let left = g.concat(mu, &rest).expect("r(ζ′) = s(ν) = s(μ)");
        return SgpElement::Pair(left, eta.clone());
    }
    SgpElement::Zero
}

pub fn sgp_star(x: &SgpElement) -> SgpElement {
    match x {
        SgpElement::Zero => SgpElement::Zero,
        SgpElement::Pair(m, n) => SgpElement::Pair(n.clone(), m.clone()),
    }
}

/// Meet in the semilattice of idempotents, identified with paths and 0.
pub fn slat_meet(mu: &Path, nu: &Path) -> Option<Path> {
    if mu.is_prefix_of(nu) {
        Some(nu.clone())
    } else if nu.is_prefix_of(mu) {
        Some(mu.clone())
    } else {
        None
    }
}

/// `σ(μ, ν) = μν⁻¹`.
pub fn sigma_graph(x: &SgpElement) -> Result<ReducedWord> {
    match x {
        SgpElement::Zero => Err(Error::Domain("σ is not defined at 0".into())),
        SgpElement::Pair(m, n) => Ok(ReducedWord::from_pair(m, n)),
    }
}

/// Every nonzero element whose paths have length at most `depth`.
pub fn sgp_elements(g: &Graph, depth: usize, width: u32) -> Vec<SgpElement> {
    let paths = g.all_paths(depth, width);
    let mut out = Vec::new();
    for m in &paths {
        for n in &paths {
            if g.source(m) == g.source(n) {
                out.push(SgpElement::Pair(m.clone(), n.clone()));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomFailure {
    NotMultiplicative { s: SgpElement, t: SgpElement },
    NotIdempotentPure { s: SgpElement },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialHomReport {
    pub pass: bool,
    pub elements: usize,
    pub products: usize,
    pub counterexample: Option<HomFailure>,
}

pub fn verify_partial_hom(g: &Graph, depth: usize) -> PartialHomReport {
    verify_partial_hom_with(g, depth, 2, |x| sigma_graph(x).expect("nonzero"))
}

/// Checks `σ(st) = σ(s)σ(t)` whenever `st ≠ 0`, and `σ(s) = e` only for idempotents,
/// for a caller-supplied map on nonzero elements.
pub fn verify_partial_hom_with(
    g: &Graph,
    depth: usize,
    width: u32,
    sigma: impl Fn(&SgpElement) -> ReducedWord,
) -> PartialHomReport {
    let elements = sgp_elements(g, depth, width);
    let images: Vec<ReducedWord> = elements.iter().map(&sigma).collect();
    let fail = |c, products| PartialHomReport { pass: false, elements: elements.len(), products, counterexample: Some(c) };
    for (s, img) in elements.iter().zip(&images) {
        if img.is_identity() != s.is_idempotent() {
            return fail(HomFailure::NotIdempotentPure { s: s.clone() }, 0);
        }
    }
    let mut products = 0;
    for (s, ss) in elements.iter().zip(&images) {
        for (t, tt) in elements.iter().zip(&images) {
            let st = sgp_mul(g, s, t);
            if st.is_zero() {
                continue;
            }
            products += 1;
            if sigma(&st) != ss.mul(tt) {
                return fail(HomFailure::NotMultiplicative { s: s.clone(), t: t.clone() }, products);
            }
        }
    }
    PartialHomReport { pass: true, elements: elements.len(), products, counterexample: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn el(g: &Graph, s: &str) -> SgpElement {
        SgpElement::parse(g, s).unwrap()
    }

    /// Products read off the Cuntz–Krieger normal form `s_μ s_ν* s_ζ s_η*`,
    /// by cancelling `s_ν* s_ζ` letter by letter.
    fn mul_oracle(g: &Graph, x: &SgpElement, y: &SgpElement) -> SgpElement {
        let (SgpElement::Pair(mu, nu), SgpElement::Pair(zeta, eta)) = (x, y) else {
            return SgpElement::Zero;
        };
        if nu.range() != zeta.range() {
            return SgpElement::Zero;
        }
        let (ne, ze) = (nu.edges(), zeta.edges());
        let k = ne.len().min(ze.len());
        if ne[..k] != ze[..k] {
            return SgpElement::Zero;
        }
        // s_ν* s_ζ leaves either s_{ν tail}* or s_{ζ tail}.
        let mut left = mu.edges().to_vec();
        left.extend_from_slice(&ze[k..]);
        let mut right = eta.edges().to_vec();
        right.extend_from_slice(&ne[k..]);
        let lp = g.path(mu.range(), left).unwrap();
        let rp = g.path(eta.range(), right).unwrap();
        SgpElement::Pair(lp, rp)
    }

    #[test]
    fn product_examples() {
        let g = corpus::g2();
        assert_eq!(sgp_mul(&g, &el(&g, "(a, v)"), &el(&g, "(v, b)")), el(&g, "(a, b)"));
        assert_eq!(sgp_mul(&g, &el(&g, "(a, b)"), &el(&g, "(a, b)")), SgpElement::Zero);
        assert_eq!(sgp_mul(&g, &el(&g, "(v, a)"), &el(&g, "(a.b, v)")), el(&g, "(b, v)"));
        // The branch where ν extends ζ: (b,b)(v,a) = (b, a.b).
        assert_eq!(sgp_mul(&g, &el(&g, "(b, b)"), &el(&g, "(v, a)")), el(&g, "(b, a.b)"));
    }

    #[test]
    fn star_and_meet() {
        let g = corpus::g2();
        assert_eq!(sgp_star(&el(&g, "(a, b)")), el(&g, "(b, a)"));
        assert_eq!(sgp_star(&el(&g, "(a.b, v)")), el(&g, "(v, a.b)"));
        assert_eq!(sgp_star(&SgpElement::Zero), SgpElement::Zero);
        let p = |s| g.parse_path(s).unwrap();
        assert_eq!(slat_meet(&p("a"), &p("a.b")), Some(p("a.b")));
        assert_eq!(slat_meet(&p("a"), &p("b")), None);
        assert_eq!(slat_meet(&p("a"), &p("a")), Some(p("a")));
    }

    #[test]
    fn sigma_examples() {
        let g = corpus::g2();
        assert_eq!(sigma_graph(&el(&g, "(a, b)")).unwrap().render(&g), "a.b^-1");
        assert!(sigma_graph(&el(&g, "(a.b, a.b)")).unwrap().is_identity());
        assert_eq!(sigma_graph(&el(&g, "(a.b, v)")).unwrap().render(&g), "a.b");
        assert!(matches!(sigma_graph(&SgpElement::Zero), Err(Error::Domain(_))));
    }

    #[test]
    fn product_matches_oracle_and_is_associative() {
        for g in [corpus::g2(), corpus::g3(), corpus::g4()] {
            let els = sgp_elements(&g, 2, 2);
            for x in &els {
                for y in &els {
                    let xy = sgp_mul(&g, x, y);
                    assert_eq!(xy, mul_oracle(&g, x, y));
                    if let SgpElement::Pair(m, n) = &xy {
                        assert_eq!(g.source(m), g.source(n));
                    }
                }
            }
            let small: Vec<_> = els.iter().filter(|x| matches!(x, SgpElement::Pair(m, n) if m.len() + n.len() <= 2)).collect();
            for x in &small {
                for y in &small {
                    for z in &small {
                        let l = sgp_mul(&g, &sgp_mul(&g, x, y), z);
                        let r = sgp_mul(&g, x, &sgp_mul(&g, y, z));
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_semigroup_identities() {
        let g = corpus::g2();
        for s in sgp_elements(&g, 2, 1) {
            let st = sgp_star(&s);
            assert_eq!(sgp_mul(&g, &sgp_mul(&g, &s, &st), &s), s);
            assert!(sgp_mul(&g, &st, &s).is_idempotent());
        }
    }

    #[test]
    fn meet_laws() {
        let g = corpus::g2();
        let ps = g.all_paths(3, 1);
        let meet = |a: Option<Path>, b: &Path| a.and_then(|a| slat_meet(&a, b));
        for a in &ps {
            for b in &ps {
                assert_eq!(slat_meet(a, b), slat_meet(b, a));
                for c in ps.iter().take(15) {
                    assert_eq!(meet(slat_meet(a, b), c), slat_meet(b, c).and_then(|bc| slat_meet(a, &bc)));
                }
            }
        }
    }

    #[test]
    fn partial_hom() {
        assert!(verify_partial_hom(&corpus::g2(), 2).pass);
        assert!(verify_partial_hom(&corpus::g1(), 3).pass);
        assert!(verify_partial_hom(&corpus::g3(), 2).pass);
        let g = corpus::g2();
        let bad = el(&g, "(a, v)");
        let report = verify_partial_hom_with(&g, 2, 1, |x| {
            if *x == bad {
                ReducedWord::identity()
            } else {
                sigma_graph(x).unwrap()
            }
        });
        assert!(!report.pass);
        assert_eq!(report.counterexample, Some(HomFailure::NotIdempotentPure { s: bad }));
    }
}
