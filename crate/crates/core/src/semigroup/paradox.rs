use num_integer::Integer;

use super::characters::OmegaCharacter;
use super::ideals::Ideal;
use super::{modulo, Element, Family};
use crate::error::{Error, Result};

/// `U(X; X₁, …, Xₙ) = {χ : χ(X) = 1, χ(X₁) = ⋯ = χ(Xₙ) = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicOpen {
    pub x: Ideal,
    pub exclusions: Vec<Ideal>,
}

impl BasicOpen {
    /// `X - X₁ - X₂` or `X ! X₁ ! X₂`.
    pub fn parse(fam: Family, s: &str) -> Result<BasicOpen> {
        let mut parts = s.split(['!', '∖', '\\']).flat_map(|p| p.split(" - "));
        let x = fam.parse_ideal(parts.next().unwrap_or(""))?;
        let exclusions = parts.map(|p| fam.parse_ideal(p)).collect::<Result<Vec<_>>>()?;
        Ok(BasicOpen { x, exclusions })
    }

    pub fn render(&self) -> String {
        std::iter::once(&self.x).chain(&self.exclusions).map(Ideal::render).collect::<Vec<_>>().join(" - ")
    }

    /// Membership of a character; `None` when it is undefined on some ideal.
    pub fn member(&self, fam: Family, chi: &OmegaCharacter) -> Option<bool> {
        let mut inside = chi.eval(fam, &self.x)?;
        for y in &self.exclusions {
            inside &= !chi.eval(fam, y)?;
        }
        Some(inside)
    }
}

/// `p, q ∈ P` with `pP ∩ qP = ∅`, searched among elements of size up to `bound`.
pub fn disjoint_pair(fam: Family, bound: usize) -> Result<(Element, Element)> {
    match fam {
        Family::Natural(_) | Family::Free(1) => Err(Error::Precondition(format!(
            "{fam} is left reversible: pP ∩ qP contains the larger of p and q, so no disjoint pair exists"
        ))),
        Family::Free(_) => Ok((Element::Word(vec![1]), Element::Word(vec![2]))),
        Family::Axb => {
            let whole = fam.whole();
            let els = fam.p_elements(bound);
            for (i, p) in els.iter().enumerate() {
                for q in &els[i + 1..] {
                    if fam.intersect(&fam.left_mul(p, &whole), &fam.left_mul(q, &whole)).is_empty() {
                        return Ok((p.clone(), q.clone()));
                    }
                }
            }
            Err(Error::Precondition(format!("no p, q of size up to {bound} with pP ∩ qP = ∅")))
        }
    }
}

/// Boundary characters enumerated for `U`: words of length `len` (ending in
/// `x^∞`), or residues modulo `len`.
fn boundary_stage(fam: Family, len: usize) -> Vec<OmegaCharacter> {
    match fam {
        Family::Free(_) => fam
            .p_elements(len)
            .into_iter()
            .filter_map(|p| match p {
                Element::Word(w) if w.len() == len => Some(OmegaCharacter::Word { prefix: w, period: vec![1] }),
                _ => None,
            })
            .collect(),
        Family::Axb => (0..len as i64).map(|r| OmegaCharacter::Tower { residue: r, modulus: len as i64 }).collect(),
        Family::Natural(_) => vec![OmegaCharacter::Infinity],
    }
}

/// The stage on which membership in `U` is decided: the longest word, or
/// the lcm of the moduli.
fn decisive_stage(fam: Family, u: &BasicOpen) -> usize {
    let all = std::iter::once(&u.x).chain(&u.exclusions);
    match fam {
        Family::Axb => all.fold(1i64, |acc, y| match y {
            Ideal::Coset { modulus, .. } => acc.lcm(modulus),
            _ => acc,
        }) as usize,
        _ => all.map(Ideal::size).max().unwrap_or(0),
    }
}

/// An ideal containing `χ` and disjoint from `X`, given `χ(X) = 0`.
fn separating_ideal(fam: Family, chi: &OmegaCharacter, x: &Ideal) -> Ideal {
    match (chi, x) {
        (_, Ideal::Empty) => fam.whole(),
        (OmegaCharacter::Word { prefix, period }, Ideal::Principal(w)) => {
            let n = w.len();
            let lead: Vec<i32> = prefix.iter().chain(period.iter().cycle()).take(n).copied().collect();
            Ideal::Principal(lead)
        }
        (&OmegaCharacter::Tower { residue, .. }, &Ideal::Coset { modulus, .. }) => Ideal::coset(residue, modulus),
        _ => unreachable!("maximal characters of this family vanish on no nonempty ideal"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryParadox {
    pub family: Family,
    pub u: BasicOpen,
    pub p: Element,
    pub q: Element,
    /// A maximal character in `U`; `None` when `U` meets no boundary point.
    pub chi: Option<OmegaCharacter>,
    /// `Y = X ∩ ⋂ Yᵢ`, every boundary point of which lies in `U`.
    pub y: Ideal,
    pub x: Element,
    pub g: Element,
    pub h: Element,
    pub verified_depth: usize,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl BoundaryParadox {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The pair `(xp, xq)` for `U`: pick a maximal `χ ∈ U`, separate it from
/// each `Xᵢ` by `Yᵢ`, choose `x` in `Y = X ∩ ⋂ Yᵢ`. Then `xp.∂Ω` and `xq.∂Ω`
/// are disjoint subsets of `U`. Verification runs over all boundary
/// characters at the deciding stage (words: at least `depth` letters).
pub fn boundary_paradox_witness(
    fam: Family,
    u: &BasicOpen,
    pair: Option<(Element, Element)>,
    depth: usize,
) -> Result<BoundaryParadox> {
    let (p, q) = match pair {
        Some((p, q)) => {
            let whole = fam.whole();
            if !fam.in_p(&p) || !fam.in_p(&q) {
                return Err(Error::Input("p and q must lie in P".into()));
            }
            if !fam.intersect(&fam.left_mul(&p, &whole), &fam.left_mul(&q, &whole)).is_empty() {
                return Err(Error::Precondition(format!(
                    "pP ∩ qP ≠ ∅ for p = {}, q = {}",
                    fam.render(&p),
                    fam.render(&q)
                )));
            }
            (p, q)
        }
        None => disjoint_pair(fam, 4)?,
    };
    let stage = decisive_stage(fam, u);
    let chi = boundary_stage(fam, stage).into_iter().find(|c| u.member(fam, c) == Some(true));
    let (y, x) = match &chi {
        Some(c) => {
            let y = u.exclusions.iter().fold(u.x.clone(), |acc, xi| fam.intersect(&acc, &separating_ideal(fam, c, xi)));
            let x = fam.least_element(&y).expect("χ(Y) = 1, so Y ≠ ∅");
            (y, x)
        }
        None => (Ideal::Empty, fam.identity()),
    };
    let g = fam.mul(&x, &p);
    let h = fam.mul(&x, &q);

    let whole = fam.whole();
    let (gp, hp) = (fam.left_mul(&g, &whole), fam.left_mul(&h, &whole));
    let mut failures = Vec::new();
    if !fam.intersect(&gp, &hp).is_empty() {
        failures.push(format!("{}P and {}P meet", fam.render(&g), fam.render(&h)));
    }
    let check_stage = match fam {
        Family::Free(_) => stage.max(depth),
        _ => stage,
    };
    let chars = boundary_stage(fam, check_stage);
    let mut checked = 0;
    if chi.is_some() {
        for c in &chars {
            checked += 1;
            let (gc, hc) = (c.act(fam, &g), c.act(fam, &h));
            for (name, moved) in [(&g, &gc), (&h, &hc)] {
                if u.member(fam, moved) != Some(true) {
                    failures.push(format!("{} sends {} out of U", fam.render(name), c.render(fam)));
                }
            }
            if gc.eval(fam, &hp) != Some(false) || hc.eval(fam, &gp) != Some(false) {
                failures.push(format!("the translates of {} meet", c.render(fam)));
            }
        }
    }
    Ok(BoundaryParadox {
        family: fam,
        u: u.clone(),
        p,
        q,
        chi,
        y,
        x,
        g,
        h,
        verified_depth: check_stage,
        checked,
        failures,
    })
}

/// `U(x + I; x₁ + I₁, …)` for the `ax+b` semigroup, with `Iᵢ ⊆ I ⊊ ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxbOpen {
    pub x: i64,
    pub m: i64,
    pub exclusions: Vec<(i64, i64)>,
}

impl AxbOpen {
    pub fn from_basic(u: &BasicOpen) -> Result<AxbOpen> {
        let coset = |y: &Ideal| match *y {
            Ideal::Coset { residue, modulus } => Ok((residue, modulus)),
            _ => Err(Error::Input(format!("{} is not a coset ideal", y.render()))),
        };
        let (x, m) = coset(&u.x)?;
        let exclusions = u.exclusions.iter().map(coset).collect::<Result<Vec<_>>>()?;
        Ok(AxbOpen { x, m, exclusions })
    }

    pub fn parse(s: &str) -> Result<AxbOpen> {
        AxbOpen::from_basic(&BasicOpen::parse(Family::Axb, s)?)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{}+{}Z", modulo(self.x, self.m), self.m);
        for (xi, mi) in &self.exclusions {
            out.push_str(&format!(" ! {}+{}Z", modulo(*xi, *mi), mi));
        }
        out
    }

    /// Empty exactly when `X ⊆ Xᵢ` for some `i`.
    pub fn is_empty(&self) -> bool {
        self.exclusions.iter().any(|&(xi, mi)| self.m % mi == 0 && modulo(self.x - xi, mi) == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxbWitness {
    pub u: AxbOpen,
    /// `J = I ∩ ⋂ Iᵢ = jℤ`.
    pub j: i64,
    pub a: i64,
    pub delta: i64,
    pub b1: i64,
    pub b2: i64,
    /// Modulus of the residue brute force, `a · m · j`.
    pub modulus: i64,
    pub u_empty: bool,
    /// `b_k + ax + aI ⊆ x + I`.
    pub contained: [bool; 2],
    /// `(xᵢ + Iᵢ) ∩ (b_k + ax + aI) = b_k + axᵢ + aIᵢ` for every `i`.
    pub exclusions_kept: [bool; 2],
    /// `(b₁ + ax + aI) ∩ (b₂ + ax + aI) = ∅`.
    pub disjoint: bool,
}

impl AxbWitness {
    pub fn pass(&self) -> bool {
        self.contained.iter().all(|&c| c) && self.exclusions_kept.iter().all(|&c| c) && self.disjoint
    }

    pub fn elements(&self) -> (Element, Element) {
        (Family::affine(self.b1, self.a), Family::affine(self.b2, self.a))
    }

    /// `(b_k, a).U = U(b_k + ax + aI; b_k + axᵢ + aIᵢ, …)`.
    pub fn image(&self, k: usize) -> AxbOpen {
        let b = if k == 0 { self.b1 } else { self.b2 };
        let (x, m, a) = (self.u.x, self.u.m, self.a);
        AxbOpen {
            x: modulo(b + a * x, a * m),
            m: a * m,
            exclusions: self.u.exclusions.iter().map(|&(xi, mi)| (modulo(b + a * xi, a * mi), a * mi)).collect(),
        }
    }
}

/// The three clauses for `(b₁, a)`, `(b₂, a)` on `U`, by brute force over
/// residues modulo `N`, which must be a multiple of `a·m` and every `a·mᵢ`.
pub fn axb_residue_oracle(u: &AxbOpen, a: i64, b1: i64, b2: i64, n: i64) -> ([bool; 2], [bool; 2], bool) {
    let on = |t: i64, x: i64, m: i64| modulo(t - x, m) == 0;
    let image = |t: i64, b: i64| on(t, b + a * u.x, a * u.m);
    let mut contained = [true; 2];
    let mut kept = [true; 2];
    let mut disjoint = true;
    for t in 0..n {
        for (k, b) in [b1, b2].into_iter().enumerate() {
            if image(t, b) && !on(t, u.x, u.m) {
                contained[k] = false;
            }
            for &(xi, mi) in &u.exclusions {
                if (on(t, xi, mi) && image(t, b)) != on(t, b + a * xi, a * mi) {
                    kept[k] = false;
                }
            }
        }
        if image(t, b1) && image(t, b2) {
            disjoint = false;
        }
    }
    (contained, kept, disjoint)
}

/// `a = 1 + j` (least positive element of `1 + J` other than `1`),
/// `δ` = least positive element of `J ∖ aℤ`, `b₁ = 0`, `b₂ = δ`.
pub fn axb_paradox_witness(u: &AxbOpen) -> Result<AxbWitness> {
    if u.m < 1 {
        return Err(Error::Input("moduli are positive".into()));
    }
    if u.m == 1 {
        return Err(Error::Input("I must be a proper ideal of Z, but I = Z".into()));
    }
    for &(xi, mi) in &u.exclusions {
        if mi < 1 || mi % u.m != 0 {
            return Err(Error::Input(format!("the exclusion ideal {mi}Z is not contained in {}Z", u.m)));
        }
        if modulo(xi - u.x, u.m) != 0 {
            return Err(Error::Input(format!(
                "the exclusion {}+{mi}Z misses {}+{}Z entirely and does not change U; drop it",
                modulo(xi, mi),
                modulo(u.x, u.m),
                u.m
            )));
        }
    }
    // J = I ∩ ⋂ Iᵢ: equal to ⋂ Iᵢ when there are exclusions, and I otherwise.
    let j = u.exclusions.iter().fold(u.m, |acc, &(_, mi)| acc.lcm(&mi));
    let a = 1 + j;
    let delta = (1..).map(|k| k * j).find(|d| d % a != 0).expect("a does not divide j");
    let (b1, b2) = (0, delta);
    let modulus = a * u.m * j;
    let (contained, exclusions_kept, disjoint) = axb_residue_oracle(u, a, b1, b2, modulus);
    Ok(AxbWitness {
        u: u.clone(),
        j,
        a,
        delta,
        b1,
        b2,
        modulus,
        u_empty: u.is_empty(),
        contained,
        exclusions_kept,
        disjoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_monoid_witness_below_an_exclusion() {
        let fam = Family::Free(2);
        let u = BasicOpen::parse(fam, "xP - xxP").unwrap();
        let w = boundary_paradox_witness(fam, &u, None, 8).unwrap();
        assert_eq!(fam.render(&w.x), "xy");
        assert_eq!((fam.render(&w.g).as_str(), fam.render(&w.h).as_str()), ("xyx", "xyy"));
        assert_eq!(w.y.render(), "xyP");
        assert!(w.pass() && w.verified_depth == 8 && w.checked == 256, "{:?}", w.failures);
    }

    #[test]
    fn free_monoid_full_space() {
        let fam = Family::Free(2);
        let u = BasicOpen::parse(fam, "P").unwrap();
        let w = boundary_paradox_witness(fam, &u, None, 8).unwrap();
        assert_eq!((fam.render(&w.g).as_str(), fam.render(&w.h).as_str()), ("x", "y"));
        assert!(w.pass());
    }

    #[test]
    fn free_monoid_checks_by_brute_force() {
        // Oracle: images of every length-6 word under g and h are
        // pairwise distinct prefixes, and land in U.
        let fam = Family::Free(2);
        let u = BasicOpen::parse(fam, "yP - yxP - yyxP").unwrap();
        let w = boundary_paradox_witness(fam, &u, None, 6).unwrap();
        let (Element::Word(g), Element::Word(h)) = (&w.g, &w.h) else { panic!() };
        assert!(!g.starts_with(h) && !h.starts_with(g));
        for p in fam.p_elements(6).into_iter().filter_map(|p| match p {
            Element::Word(v) if v.len() == 6 => Some(v),
            _ => None,
        }) {
            for pre in [g, h] {
                let img = [pre.as_slice(), &p].concat();
                assert!(img.starts_with(&[2]) && !img.starts_with(&[2, 1]) && !img.starts_with(&[2, 2, 1]));
            }
        }
        assert!(w.pass());
    }

    #[test]
    fn left_reversible_families_are_refused() {
        for fam in [Family::Natural(1), Family::Natural(3), Family::Free(1)] {
            let u = BasicOpen { x: fam.whole(), exclusions: Vec::new() };
            let err = boundary_paradox_witness(fam, &u, None, 4).unwrap_err();
            assert!(matches!(err, Error::Precondition(_)), "{fam}");
        }
    }

    #[test]
    fn axb_boundary_witness() {
        let fam = Family::Axb;
        assert_eq!(disjoint_pair(fam, 4).unwrap(), (Family::affine(0, 2), Family::affine(1, 2)));
        let u = BasicOpen::parse(fam, "0+2Z ! 0+6Z").unwrap();
        let w = boundary_paradox_witness(fam, &u, None, 8).unwrap();
        assert!(w.pass(), "{:?}", w.failures);
        assert_eq!(w.checked, 6);
    }

    #[test]
    fn axb_example() {
        let u = AxbOpen::parse("0+2Z ! 0+6Z").unwrap();
        let w = axb_paradox_witness(&u).unwrap();
        assert_eq!((w.a, w.delta, w.j, w.modulus), (7, 6, 6, 84));
        assert_eq!(w.elements(), (Family::affine(0, 7), Family::affine(6, 7)));
        assert!(w.pass() && !w.u_empty);
        assert_eq!(w.image(1).render(), "6+14Z ! 6+42Z");
    }

    #[test]
    fn axb_without_exclusions() {
        let u = AxbOpen::parse("1+3Z").unwrap();
        let w = axb_paradox_witness(&u).unwrap();
        assert_eq!((w.j, w.a, w.delta), (3, 4, 3));
        assert!(w.pass());
    }

    #[test]
    fn axb_refuses_the_whole_ring() {
        let u = AxbOpen::parse("0+1Z").unwrap();
        assert!(matches!(axb_paradox_witness(&u), Err(Error::Input(_))));
        let u = AxbOpen::parse("0+4Z ! 0+6Z").unwrap();
        assert!(matches!(axb_paradox_witness(&u), Err(Error::Input(_))));
        let u = AxbOpen::parse("0+2Z ! 1+2Z").unwrap();
        assert!(matches!(axb_paradox_witness(&u), Err(Error::Input(_))));
    }

    #[test]
    fn axb_degenerate_open() {
        let u = AxbOpen::parse("1+3Z ! 1+3Z").unwrap();
        let w = axb_paradox_witness(&u).unwrap();
        assert!(w.u_empty && w.pass());
        // Emptiness oracle: no tower character mod 9 lies in U.
        let basic = BasicOpen::parse(Family::Axb, "1+3Z ! 1+3Z").unwrap();
        assert!((0..9).all(|r| basic.member(Family::Axb, &OmegaCharacter::Tower { residue: r, modulus: 9 }) == Some(false)));
        let b = boundary_paradox_witness(Family::Axb, &basic, None, 8).unwrap();
        assert!(b.chi.is_none() && b.pass());
    }

    #[test]
    fn oracle_catches_bad_parameters() {
        let u = AxbOpen::parse("0+2Z ! 0+6Z").unwrap();
        // a = 3 shares a factor with 6: 6Z ∩ 6Z is not 18Z.
        let (c, k, d) = axb_residue_oracle(&u, 3, 0, 2, 3 * 2 * 6);
        assert!(c.iter().all(|&x| x) && d);
        assert_eq!(k, [false, false]);
        // δ divisible by a: the two images coincide.
        let (_, _, d) = axb_residue_oracle(&u, 7, 0, 42, 84);
        assert!(!d);
    }
}
