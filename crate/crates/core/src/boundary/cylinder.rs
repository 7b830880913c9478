use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeInstance, Graph, Multiplicity, Path, VertexId};

use super::point::BoundaryPoint;

/// `Z(μ ∖ F)`: boundary points starting with `μ` whose next edge, if any,
/// is not in the finite set `F ⊆ r⁻¹(s(μ))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub stem: Path,
    pub exclusions: BTreeSet<EdgeInstance>,
}

impl Cylinder {
    pub fn new(g: &Graph, stem: Path, exclusions: impl IntoIterator<Item = EdgeInstance>) -> Result<Cylinder> {
        let s = g.source(&stem);
        let exclusions: BTreeSet<_> = exclusions.into_iter().collect();
        for &e in &exclusions {
            g.check_instance(e)?;
            if g.range_of(e) != s {
                return Err(Error::Composition(format!(
                    "excluded edge {} does not extend {}",
                    g.render_instance(e),
                    g.render_path(&stem)
                )));
            }
        }
        Ok(Cylinder { stem, exclusions })
    }

    pub fn plain(stem: Path) -> Cylinder {
        Cylinder { stem, exclusions: BTreeSet::new() }
    }

    pub fn member(&self, x: &BoundaryPoint) -> bool {
        x.has_prefix(&self.stem) && x.edge_at(self.stem.len()).map_or(true, |e| !self.exclusions.contains(&e))
    }

    /// Edge instances at `s(μ)` left over by the exclusions, at most `width`
    /// per edge family.
    pub fn open_edges(&self, g: &Graph, width: u32) -> Vec<EdgeInstance> {
        let mut out = Vec::new();
        for &e in g.receivers(g.source(&self.stem)) {
            let spare = width.saturating_add(self.exclusions.len() as u32);
            out.extend(g.instances(e, spare).filter(|i| !self.exclusions.contains(i)).take(width as usize));
        }
        out
    }

    /// Members of complexity at most `l(μ) + extra`, finite points first.
    pub fn sample_points(&self, g: &Graph, extra: usize, width: u32) -> Vec<BoundaryPoint> {
        let tails: Vec<Path> = g
            .paths_from(g.source(&self.stem), extra, width)
            .into_iter()
            .filter(|t| t.first().map_or(true, |e| !self.exclusions.contains(&e)))
            .collect();
        let mut finite = Vec::new();
        let mut periodic = BTreeSet::new();
        for t in &tails {
            let head = g.concat(&self.stem, t).expect("tails start at s(μ)");
            if g.is_singular(g.source(&head)) {
                finite.push(BoundaryPoint::Finite(head.clone()));
            }
            for c in g.loops_at(g.source(&head), extra - t.len(), width) {
                if t.is_vertex() && c.first().is_some_and(|e| self.exclusions.contains(&e)) {
                    continue;
                }
                periodic.insert(BoundaryPoint::periodic(g, head.clone(), c).expect("a loop at s(head)"));
            }
        }
        finite.extend(periodic);
        finite
    }

    /// Every graph has boundary points above any vertex that reaches a
    /// singular vertex or a loop; the cylinder is empty when neither the
    /// stem's source is singular nor any open edge leads to such a vertex.
    pub fn is_empty(&self, g: &Graph) -> bool {
        let s = g.source(&self.stem);
        if g.is_singular(s) {
            return false;
        }
        for &e in g.receivers(s) {
            let excluded = self.exclusions.iter().filter(|x| x.edge == e).count() as u64;
            let left = match g.edge(e).multiplicity {
                Multiplicity::Infinite => true,
                Multiplicity::Finite(m) => u64::from(m) > excluded,
            };
            if left && has_boundary_above(g, g.edge(e).source) {
                return false;
            }
        }
        true
    }

    pub fn render(&self, g: &Graph) -> String {
        let stem = g.render_path(&self.stem);
        if self.exclusions.is_empty() {
            format!("Z({stem})")
        } else {
            let ex: Vec<_> = self.exclusions.iter().map(|&e| g.render_instance(e)).collect();
            format!("Z({stem} ∖ {{{}}})", ex.join(", "))
        }
    }

    /// Accepts `Z(a.b)`, `Z(a.b ∖ {c, f[2]})`; `-` and `\` also separate.
    pub fn parse(g: &Graph, s: &str) -> Result<Cylinder> {
        let t = s.trim();
        let inner = t
            .strip_prefix("Z(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(s, "expected `Z(...)`"))?;
        let cut = inner.find(['∖', '\\', '-']);
        let Some(i) = cut else {
            return Ok(Cylinder::plain(g.parse_path(inner)?));
        };
        let stem = g.parse_path(&inner[..i])?;
        let sep_len = inner[i..].chars().next().map_or(1, char::len_utf8);
        let rest = inner[i + sep_len..].trim();
        let list = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::parse(s, "expected `{...}` after the difference sign"))?;
        let mut ex = Vec::new();
        for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            ex.push(g.parse_instance(tok)?);
        }
        Cylinder::new(g, stem, ex)
    }
}

/// Is there a boundary point with range `v`?
pub(crate) fn has_boundary_above(g: &Graph, v: VertexId) -> bool {
    let up = g.upstream(v);
    g.vertices().any(|u| up[u.index()] && (g.is_singular(u) || g.on_loop(u)))
}

/// `A ∩ B` as a single cylinder, or `None` when the stems rule out overlap.
pub fn intersect(a: &Cylinder, b: &Cylinder) -> Option<Cylinder> {
    let (mu, nu) = (&a.stem, &b.stem);
    if mu == nu {
        return Some(Cylinder { stem: mu.clone(), exclusions: a.exclusions.union(&b.exclusions).copied().collect() });
    }
    if nu.is_prefix_of(mu) {
        return (!b.exclusions.contains(&mu.edges()[nu.len()])).then(|| a.clone());
    }
    if mu.is_prefix_of(nu) {
        return (!a.exclusions.contains(&nu.edges()[mu.len()])).then(|| b.clone());
    }
    None
}

/// `A ∖ B` as a disjoint list of cylinders (possibly empty ones).
pub fn difference(g: &Graph, a: &Cylinder, b: &Cylinder) -> Vec<Cylinder> {
    let (mu, nu) = (&a.stem, &b.stem);
    if mu == nu {
        return b
            .exclusions
            .difference(&a.exclusions)
            .map(|&e| Cylinder::plain(g.extend(mu, e).expect("excluded edges extend the stem")))
            .collect();
    }
    if nu.is_prefix_of(mu) {
        let next = mu.edges()[nu.len()];
        return if b.exclusions.contains(&next) { vec![a.clone()] } else { Vec::new() };
    }
    if !mu.is_prefix_of(nu) {
        return vec![a.clone()];
    }
    let first = nu.edges()[mu.len()];
    if a.exclusions.contains(&first) {
        return vec![a.clone()];
    }
    // Peel ν off one edge at a time: at each intermediate prefix keep the
    // points that leave ν there, then keep the excluded continuations of ν.
    let mut out = Vec::new();
    let mut ex = a.exclusions.clone();
    ex.insert(first);
    out.push(Cylinder { stem: mu.clone(), exclusions: ex });
    for i in mu.len() + 1..nu.len() {
        let stem = g.prefix(nu, i);
        out.push(Cylinder { stem, exclusions: BTreeSet::from([nu.edges()[i]]) });
    }
    for &e in &b.exclusions {
        out.push(Cylinder::plain(g.extend(nu, e).expect("excluded edges extend the stem")));
    }
    out
}

/// A finite disjoint union of nonempty cylinders, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CompactOpen {
    parts: Vec<Cylinder>,
}

impl CompactOpen {
    pub fn empty() -> CompactOpen {
        CompactOpen::default()
    }

    /// `∂E`, the union of all vertex cylinders.
    pub fn whole(g: &Graph) -> CompactOpen {
        normalize(g, g.vertices().map(|v| Cylinder::plain(Path::vertex(v))).collect())
    }

    pub fn cylinder(g: &Graph, c: Cylinder) -> CompactOpen {
        normalize(g, vec![c])
    }

    pub fn parts(&self) -> &[Cylinder] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn member(&self, x: &BoundaryPoint) -> bool {
        self.parts.iter().any(|c| c.member(x))
    }

    pub fn union(&self, g: &Graph, other: &CompactOpen) -> CompactOpen {
        normalize(g, self.parts.iter().chain(&other.parts).cloned().collect())
    }

    pub fn intersection(&self, g: &Graph, other: &CompactOpen) -> CompactOpen {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                out.extend(intersect(a, b));
            }
        }
        normalize(g, out)
    }

    pub fn difference(&self, g: &Graph, other: &CompactOpen) -> CompactOpen {
        let mut pieces = self.parts.clone();
        for b in &other.parts {
            pieces = pieces.iter().flat_map(|a| difference(g, a, b)).filter(|c| !c.is_empty(g)).collect();
        }
        normalize(g, pieces)
    }

    pub fn is_subset(&self, g: &Graph, other: &CompactOpen) -> bool {
        self.difference(g, other).is_empty()
    }

    /// Equality as sets of boundary points.
    pub fn same_set(&self, g: &Graph, other: &CompactOpen) -> bool {
        self.is_subset(g, other) && other.is_subset(g, self)
    }

    pub fn is_disjoint(&self, g: &Graph, other: &CompactOpen) -> bool {
        self.intersection(g, other).is_empty()
    }

    pub fn render(&self, g: &Graph) -> String {
        if self.parts.is_empty() {
            return "∅".into();
        }
        self.parts.iter().map(|c| c.render(g)).collect::<Vec<_>>().join(" + ")
    }

    /// A `+`-separated union of cylinders; `∅` or `0` for the empty set.
    pub fn parse(g: &Graph, s: &str) -> Result<CompactOpen> {
        let t = s.trim();
        if t == "∅" || t == "0" || t.is_empty() {
            return Ok(CompactOpen::empty());
        }
        let parts = t.split('+').map(|p| Cylinder::parse(g, p)).collect::<Result<Vec<_>>>()?;
        Ok(normalize(g, parts))
    }
}

/// Rewrites a union of cylinders as a sorted disjoint union of nonempty ones.
/// Longer stems go first, and every later cylinder has the earlier ones
/// subtracted, so nested overlaps resolve with few pieces.
pub fn normalize(g: &Graph, mut cylinders: Vec<Cylinder>) -> CompactOpen {
    cylinders.sort_by(|a, b| b.stem.len().cmp(&a.stem.len()).then_with(|| a.cmp(b)));
    let mut acc: Vec<Cylinder> = Vec::new();
    for c in cylinders {
        if c.is_empty(g) {
            continue;
        }
        let mut pieces = vec![c];
        for d in &acc {
            pieces = pieces.iter().flat_map(|p| difference(g, p, d)).filter(|p| !p.is_empty(g)).collect();
            if pieces.is_empty() {
                break;
            }
        }
        acc.extend(pieces);
    }
    acc.sort();
    CompactOpen { parts: acc }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::point::points_up_to;
    use crate::corpus;

    fn cyl(g: &Graph, s: &str) -> Cylinder {
        Cylinder::parse(g, s).unwrap()
    }

    fn pt(g: &Graph, s: &str) -> BoundaryPoint {
        BoundaryPoint::parse(g, s).unwrap()
    }

    #[test]
    fn membership_examples() {
        let g1 = corpus::g1();
        assert!(cyl(&g1, "Z(a.a)").member(&pt(&g1, "(a)^inf")));
        assert!(!cyl(&g1, "Z(a ∖ {a})").member(&pt(&g1, "(a)^inf")));
        let g3 = corpus::g3();
        assert!(!cyl(&g3, "Z(e)").member(&pt(&g3, "w")));
        assert!(cyl(&g3, "Z(e)").member(&pt(&g3, "e")));
    }

    #[test]
    fn normalize_examples() {
        let g2 = corpus::g2();
        let n = normalize(&g2, vec![cyl(&g2, "Z(a)"), cyl(&g2, "Z(a.b)")]);
        assert_eq!(n.parts(), &[cyl(&g2, "Z(a ∖ {b})"), cyl(&g2, "Z(a.b)")]);
        let n = normalize(&g2, vec![cyl(&g2, "Z(v)"), cyl(&g2, "Z(a)")]);
        assert_eq!(n.parts(), &[cyl(&g2, "Z(v ∖ {a})"), cyl(&g2, "Z(a)")]);
    }

    #[test]
    fn emptiness_examples() {
        let g2 = corpus::g2();
        assert!(cyl(&g2, "Z(v - {a, b})").is_empty(&g2));
        assert!(!cyl(&g2, "Z(v - {a})").is_empty(&g2));
        assert!(!cyl(&corpus::g1(), "Z(a)").is_empty(&corpus::g1()));
        assert!(!cyl(&corpus::g3(), "Z(e)").is_empty(&corpus::g3()));
        // Infinitely many copies can never all be excluded.
        let g5 = corpus::g5();
        assert!(!cyl(&g5, "Z(v - {f[0], f[1]})").is_empty(&g5));
    }

    #[test]
    fn text_forms() {
        let g = corpus::g5();
        let c = cyl(&g, "Z(f[1] \\ {f[0], f[3]})");
        assert_eq!(c.render(&g), "Z(f[1] ∖ {f[0], f[3]})");
        assert_eq!(cyl(&g, &c.render(&g)), c);
        let u = CompactOpen::parse(&g, "Z(f[0]) + Z(v - {f[0]})").unwrap();
        assert!(u.same_set(&g, &CompactOpen::whole(&g)));
    }

    /// Brute-force check of the set algebra on every small point.
    #[test]
    fn algebra_matches_membership() {
        for g in [corpus::g2(), corpus::g3(), corpus::g4(), corpus::two_vertex()] {
            let pts = points_up_to(&g, 7, 1);
            let mut cyls = Vec::new();
            for p in g.all_paths(2, 1) {
                cyls.push(Cylinder::plain(p.clone()));
                for e in g.receiver_instances(g.source(&p), 1) {
                    cyls.push(Cylinder::new(&g, p.clone(), [e]).unwrap());
                }
            }
            for a in &cyls {
                let has_point = pts.iter().any(|x| a.member(x));
                assert_eq!(!a.is_empty(&g), has_point, "{}", a.render(&g));
                let sampled = a.sample_points(&g, 3, 1);
                assert!(sampled.iter().all(|x| a.member(x)));
                assert_eq!(sampled.is_empty(), a.is_empty(&g));
                for b in &cyls {
                    let i = intersect(a, b);
                    let d = difference(&g, a, b);
                    for x in &pts {
                        let (ia, ib) = (a.member(x), b.member(x));
                        assert_eq!(i.as_ref().map_or(false, |c| c.member(x)), ia && ib);
                        let hits = d.iter().filter(|c| c.member(x)).count();
                        assert_eq!(hits, usize::from(ia && !ib), "{} ∖ {}", a.render(&g), b.render(&g));
                    }
                    let n = normalize(&g, vec![a.clone(), b.clone()]);
                    for x in &pts {
                        let hits = n.parts().iter().filter(|c| c.member(x)).count();
                        assert_eq!(hits, usize::from(a.member(x) || b.member(x)));
                    }
                }
            }
        }
    }
}
