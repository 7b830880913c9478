use crate::boundary::{difference, points_up_to, BoundaryPoint, Cylinder};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::words::{Letter, ReducedWord};

use super::cocycle::{refine, require_finite, Cocycle, CocycleEntry, ALL_COPIES};
use super::homeo::PrefixHomeo;

/// A map `∂E → ℤ₊` that is constant on each cylinder of a partition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocallyConstant {
    pub parts: Vec<(Cylinder, u32)>,
}

impl LocallyConstant {
    pub fn eval(&self, x: &BoundaryPoint) -> Option<u32> {
        self.parts.iter().find(|(c, _)| c.member(x)).map(|&(_, v)| v)
    }

    /// The value on all of `Z(ρ)`, if one part contains it.
    fn constant_on(&self, g: &Graph, rho: &Path) -> Option<u32> {
        let inner = Cylinder::plain(rho.clone());
        self.parts
            .iter()
            .find(|(c, _)| difference(g, &inner, c).iter().all(|d| d.is_empty(g)))
            .map(|&(_, v)| v)
    }
}

/// `(k, l)` on `∂E` and `(k′, l′)` on `∂F`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OeData {
    pub k: LocallyConstant,
    pub l: LocallyConstant,
    pub k_prime: LocallyConstant,
    pub l_prime: LocallyConstant,
}

/// Reads `k`, `l` off `a(ζ⁻¹, ·) = λκ⁻¹` as `l(λ)`, `l(κ)`, with both `0` on
/// the finite points at singular vertices.
fn shifts_from(g: &Graph, a: &Cocycle) -> Result<(LocallyConstant, LocallyConstant)> {
    let mut k = LocallyConstant::default();
    let mut l = LocallyConstant::default();
    for en in a.entries.iter().filter(|en| en.generator.inv) {
        let (lambda, kappa) = en.value.positive_negative().ok_or_else(|| {
            Error::Form(format!("cocycle value {} is not of the form λκ⁻¹", en.value.render(g)))
        })?;
        k.parts.push((en.on.clone(), lambda.len() as u32));
        l.parts.push((en.on.clone(), kappa.len() as u32));
    }
    for v in g.vertices().filter(|&v| g.is_sink(v)) {
        k.parts.push((Cylinder::plain(Path::vertex(v)), 0));
        l.parts.push((Cylinder::plain(Path::vertex(v)), 0));
    }
    Ok((k, l))
}

pub fn coe_to_oe(e: &Graph, f: &Graph, a: &Cocycle, b: &Cocycle) -> Result<OeData> {
    require_finite(e)?;
    require_finite(f)?;
    let (k, l) = shifts_from(e, a)?;
    let (k_prime, l_prime) = shifts_from(f, b)?;
    Ok(OeData { k, l, k_prime, l_prime })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeFailure {
    /// `"E"` for the identity on `∂E`, `"F"` for the one on `∂F`.
    pub side: &'static str,
    pub point: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeReport {
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<OeFailure>,
}

#[allow(clippy::too_many_arguments)]
fn oe_side(
    e: &Graph,
    f: &Graph,
    phi: &PrefixHomeo,
    k: &LocallyConstant,
    l: &LocallyConstant,
    depth: usize,
    side: &'static str,
    failures: &mut Vec<OeFailure>,
) -> usize {
    let mut checked = 0;
    for z in points_up_to(e, depth, ALL_COPIES) {
        let fail = |reason: String| OeFailure { side, point: z.render(e), reason };
        let (Some(kz), Some(lz)) = (k.eval(&z), l.eval(&z)) else {
            failures.push(fail("no shift counts here".into()));
            continue;
        };
        let Ok(sz) = z.shift(e) else { continue };
        let (Some(left), Some(right)) = (
            phi.apply(e, f, &sz).and_then(|p| p.shift_by(f, kz as usize)),
            phi.apply(e, f, &z).and_then(|p| p.shift_by(f, lz as usize)),
        ) else {
            continue;
        };
        checked += 1;
        if left != right {
            failures.push(fail(format!(
                "σ^{kz}(φ(σ(x))) = {} but σ^{lz}(φ(x)) = {}",
                left.render(f),
                right.render(f)
            )));
        }
    }
    checked
}

/// `σ^k(φ(σ(ζ))) = σ^l(φ(ζ))` on `∂E` and the primed identity on `∂F`,
/// wherever the shifts are defined.
pub fn oe_check(e: &Graph, f: &Graph, phi: &PrefixHomeo, oe: &OeData, depth: usize) -> OeReport {
    let mut failures = Vec::new();
    let mut checked = oe_side(e, f, phi, &oe.k, &oe.l, depth, "E", &mut failures);
    checked += oe_side(f, e, &phi.inverse(), &oe.k_prime, &oe.l_prime, depth, "F", &mut failures);
    OeReport { pass: failures.is_empty(), checked, failures }
}

/// On each `Z(ρ) ⊆ Z(ζ)` fine enough that `k`, `l` are constant and the
/// images `Φ(σρ)`, `Φ(ρ)` are at least `k`, `l` long, set
/// `a(ζ⁻¹, ·) = λ′κ′⁻¹` with `λ′ = Φ(σρ)[..k]`, `κ′ = Φ(ρ)[..l]`; the value on
/// `ζ` is the inverse on the matching piece `Z(σρ)`. Pieces are found in
/// lexicographic order, coarsest first.
fn cocycle_from(
    e: &Graph,
    f: &Graph,
    phi: &PrefixHomeo,
    k: &LocallyConstant,
    l: &LocallyConstant,
    max_depth: usize,
) -> Result<Cocycle> {
    let mut entries = Vec::new();
    for zeta in e.all_instances(ALL_COPIES) {
        let pieces = refine(e, e.edge_path(zeta), max_depth, |rho| {
            let (kk, ll) = (k.constant_on(e, rho)? as usize, l.constant_on(e, rho)? as usize);
            let here = phi.apply_path(e, f, rho)?;
            let there = phi.apply_path(e, f, &e.suffix(rho, 1))?;
            (there.len() >= kk && here.len() >= ll)
                .then(|| ReducedWord::from_pair(&f.prefix(&there, kk), &f.prefix(&here, ll)))
        })?;
        for (rho, value) in pieces {
            entries.push(CocycleEntry { generator: Letter::pos(zeta), on: Cylinder::plain(e.suffix(&rho, 1)), value: value.inv() });
            entries.push(CocycleEntry { generator: Letter::neg(zeta), on: Cylinder::plain(rho), value });
        }
    }
    entries.sort_by(|x, y| (x.generator, &x.on).cmp(&(y.generator, &y.on)));
    Ok(Cocycle { entries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeToCoe {
    pub a: Cocycle,
    pub b: Cocycle,
}

/// Rebuilds cocycles from shift counts. Needs condition (L) on both graphs.
/// Running out of depth is inconclusive, not a refutation.
pub fn oe_to_coe(e: &Graph, f: &Graph, phi: &PrefixHomeo, oe: &OeData, max_depth: usize) -> Result<OeToCoe> {
    require_finite(e)?;
    require_finite(f)?;
    for (name, g) in [("first", e), ("second", f)] {
        let verdict = g.condition_l();
        if let Some(cycle) = verdict.witness() {
            return Err(Error::Precondition(format!(
                "the {name} graph violates condition (L): the loop {} has no entry",
                g.render_path(cycle)
            )));
        }
    }
    let a = cocycle_from(e, f, phi, &oe.k, &oe.l, max_depth)?;
    let b = cocycle_from(f, e, &phi.inverse(), &oe.k_prime, &oe.l_prime, max_depth)?;
    Ok(OeToCoe { a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::oe::cocycle::coe_check;
    use crate::oe::examples;

    #[test]
    fn identity_reads_off_zero_one() {
        let ex = examples::identity_g2();
        let oe = coe_to_oe(&ex.e, &ex.f, &ex.a, &ex.b).unwrap();
        assert!(oe.k.parts.iter().all(|&(_, v)| v == 0));
        assert!(oe.l.parts.iter().all(|&(_, v)| v == 1));
        assert!(oe_check(&ex.e, &ex.f, &ex.phi, &oe, 6).pass);
    }

    #[test]
    fn swap_reads_off_zero_one() {
        let ex = examples::swap_g2();
        let oe = coe_to_oe(&ex.e, &ex.f, &ex.a, &ex.b).unwrap();
        let za = Cylinder::plain(ex.e.parse_path("a").unwrap());
        assert_eq!(oe.k.parts.iter().find(|(c, _)| *c == za).map(|p| p.1), Some(0));
        assert_eq!(oe.l.parts.iter().find(|(c, _)| *c == za).map(|p| p.1), Some(1));
    }

    #[test]
    fn read_off_longer_values() {
        let g = corpus::g2();
        let a_inv = Letter::neg(g.parse_instance("a").unwrap());
        let a = Cocycle {
            entries: vec![CocycleEntry {
                generator: a_inv,
                on: Cylinder::plain(g.parse_path("a").unwrap()),
                value: ReducedWord::parse(&g, "a.b.a^-1").unwrap(),
            }],
        };
        let oe = coe_to_oe(&g, &g, &a, &Cocycle::default()).unwrap();
        assert_eq!(oe.k.parts[0].1, 2);
        assert_eq!(oe.l.parts[0].1, 1);
        let bad = Cocycle {
            entries: vec![CocycleEntry { generator: a_inv, on: a.entries[0].on.clone(), value: ReducedWord::parse(&g, "a^-1.b").unwrap() }],
        };
        assert!(matches!(coe_to_oe(&g, &g, &bad, &Cocycle::default()), Err(Error::Form(_))));
    }

    #[test]
    fn zero_shifts_fail_for_swap() {
        let ex = examples::swap_g2();
        let zero = LocallyConstant { parts: vec![(Cylinder::plain(Path::vertex(ex.e.vertex("v").unwrap())), 0)] };
        let oe = OeData { k: zero.clone(), l: zero.clone(), k_prime: zero.clone(), l_prime: zero };
        let r = oe_check(&ex.e, &ex.f, &ex.phi, &oe, 6);
        assert!(!r.pass);
    }

    #[test]
    fn one_point_space_always_passes() {
        let g = corpus::g1();
        let v = Cylinder::plain(Path::vertex(g.vertex("v").unwrap()));
        let any = LocallyConstant { parts: vec![(v, 3)] };
        let oe = OeData { k: any.clone(), l: LocallyConstant { parts: vec![(any.parts[0].0.clone(), 1)] }, k_prime: any.clone(), l_prime: any };
        assert!(oe_check(&g, &g, &PrefixHomeo::identity(&g), &oe, 6).pass);
        assert!(matches!(oe_to_coe(&g, &g, &PrefixHomeo::identity(&g), &oe, 6), Err(Error::Precondition(_))));
    }

    #[test]
    fn roundtrips() {
        for ex in examples::all() {
            let oe = coe_to_oe(&ex.e, &ex.f, &ex.a, &ex.b).unwrap();
            assert!(oe_check(&ex.e, &ex.f, &ex.phi, &oe, 6).pass, "{}", ex.name);
            let back = oe_to_coe(&ex.e, &ex.f, &ex.phi, &oe, 6).unwrap();
            let r = coe_check(&ex.e, &ex.f, &ex.phi, &back.a, &back.b, 6);
            assert!(r.pass, "{}: {:?}", ex.name, r.failures.first());
            let again = coe_to_oe(&ex.e, &ex.f, &back.a, &back.b).unwrap();
            for x in points_up_to(&ex.e, 5, ALL_COPIES) {
                assert_eq!(again.k.eval(&x), oe.k.eval(&x), "{}", ex.name);
                assert_eq!(again.l.eval(&x), oe.l.eval(&x), "{}", ex.name);
            }
        }
    }
}
