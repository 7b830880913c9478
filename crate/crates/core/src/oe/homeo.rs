use std::collections::BTreeMap;

use crate::boundary::{points_up_to, BoundaryPoint, CompactOpen, Cylinder};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeInstance, Graph, Path, VertexId};

/// A graph isomorphism `E → F`, used to carry tails across a prefix rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIso {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl GraphIso {
    /// Maps each vertex and edge to the one named `renames[name]`, or to the
    /// same name when absent.
    pub fn by_names(e: &Graph, f: &Graph, renames: &BTreeMap<String, String>) -> Result<GraphIso> {
        let target = |name: &str| renames.get(name).map_or(name, String::as_str).to_string();
        let vertices = e
            .vertices()
            .map(|v| f.vertex(&target(e.vertex_name(v))))
            .collect::<Result<Vec<_>>>()?;
        let edges = e
            .edge_ids()
            .map(|id| f.edge_id(&target(&e.edge(id).id)))
            .collect::<Result<Vec<_>>>()?;
        let iso = GraphIso { vertices, edges };
        iso.check(e, f)?;
        Ok(iso)
    }

    pub fn identity(g: &Graph) -> GraphIso {
        GraphIso { vertices: g.vertices().collect(), edges: g.edge_ids().collect() }
    }

    fn check(&self, e: &Graph, f: &Graph) -> Result<()> {
        let bad = |m: String| Err(Error::Form(format!("tail map is not a graph isomorphism: {m}")));
        if e.vertex_count() != f.vertex_count() || e.edge_count() != f.edge_count() {
            return bad("sizes differ".into());
        }
        let mut hit_v = vec![false; f.vertex_count()];
        for &v in &self.vertices {
            if std::mem::replace(&mut hit_v[v.index()], true) {
                return bad(format!("vertex `{}` is hit twice", f.vertex_name(v)));
            }
        }
        let mut hit_e = vec![false; f.edge_count()];
        for (i, &t) in self.edges.iter().enumerate() {
            if std::mem::replace(&mut hit_e[t.index()], true) {
                return bad(format!("edge `{}` is hit twice", f.edge(t).id));
            }
            let src = e.edge(EdgeId(i as u32));
            let dst = f.edge(t);
            if self.vertices[src.range.index()] != dst.range
                || self.vertices[src.source.index()] != dst.source
                || src.multiplicity != dst.multiplicity
            {
                return bad(format!("`{}` ↦ `{}` breaks range, source or multiplicity", src.id, dst.id));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> GraphIso {
        let mut vertices = vec![VertexId(0); self.vertices.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            vertices[v.index()] = VertexId(i as u32);
        }
        let mut edges = vec![EdgeId(0); self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            edges[e.index()] = EdgeId(i as u32);
        }
        GraphIso { vertices, edges }
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vertices[v.index()]
    }

    pub fn instance(&self, e: EdgeInstance) -> EdgeInstance {
        EdgeInstance::new(self.edges[e.edge.index()], e.copy)
    }

    pub fn path(&self, p: &Path, f: &Graph) -> Path {
        f.path(self.vertex(p.range()), p.edges().iter().map(|&e| self.instance(e)).collect())
            .expect("isomorphisms preserve composability")
    }

    pub fn point(&self, x: &BoundaryPoint, f: &Graph) -> BoundaryPoint {
        match x {
            BoundaryPoint::Finite(p) => BoundaryPoint::Finite(self.path(p, f)),
            BoundaryPoint::Periodic { prefix, cycle } => {
                BoundaryPoint::periodic(f, self.path(prefix, f), self.path(cycle, f)).expect("loops map to loops")
            }
        }
    }

    /// Names of everything moved, for serialization.
    pub fn renames(&self, e: &Graph, f: &Graph) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for v in e.vertices() {
            let (a, b) = (e.vertex_name(v), f.vertex_name(self.vertex(v)));
            if a != b {
                out.insert(a.to_string(), b.to_string());
            }
        }
        for id in e.edge_ids() {
            let (a, b) = (&e.edge(id).id, &f.edge(self.edges[id.index()]).id);
            if a != b {
                out.insert(a.clone(), b.clone());
            }
        }
        out
    }
}

/// `φ(μᵢ x) = νᵢ τ(x)`: a homeomorphism `∂E → ∂F` from finitely many
/// prefix substitutions and a tail isomorphism `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixHomeo {
    pub rules: Vec<(Path, Path)>,
    pub tail: GraphIso,
}

impl PrefixHomeo {
    pub fn new(e: &Graph, f: &Graph, rules: Vec<(Path, Path)>, tail: GraphIso) -> Result<PrefixHomeo> {
        for (mu, nu) in &rules {
            if tail.vertex(e.source(mu)) != f.source(nu) {
                return Err(Error::Form(format!(
                    "rule ({}, {}): the tail map sends s({0}) to `{}`, not s({1})",
                    e.render_path(mu),
                    f.render_path(nu),
                    f.vertex_name(tail.vertex(e.source(mu)))
                )));
            }
        }
        Ok(PrefixHomeo { rules, tail })
    }

    pub fn identity(g: &Graph) -> PrefixHomeo {
        let rules = g.vertices().map(|v| (Path::vertex(v), Path::vertex(v))).collect();
        PrefixHomeo { rules, tail: GraphIso::identity(g) }
    }

    pub fn inverse(&self) -> PrefixHomeo {
        PrefixHomeo { rules: self.rules.iter().map(|(m, n)| (n.clone(), m.clone())).collect(), tail: self.tail.inverse() }
    }

    fn rule_for(&self, x: &BoundaryPoint) -> Option<&(Path, Path)> {
        self.rules.iter().find(|(mu, _)| x.has_prefix(mu))
    }

    pub fn apply(&self, e: &Graph, f: &Graph, x: &BoundaryPoint) -> Option<BoundaryPoint> {
        let (mu, nu) = self.rule_for(x)?;
        let rest = x.shift_by(e, mu.len())?;
        self.tail.point(&rest, f).prepend(f, nu).ok()
    }

    /// The image prefix `Φ(ρ)` with `φ(ρy) = Φ(ρ)τ(y)` for every `ρy ∈ ∂E`,
    /// once `ρ` extends a rule stem.
    pub fn apply_path(&self, e: &Graph, f: &Graph, rho: &Path) -> Option<Path> {
        let (mu, nu) = self.rules.iter().find(|(mu, _)| mu.is_prefix_of(rho))?;
        let rest = e.suffix(rho, mu.len());
        f.concat(nu, &self.tail.path(&rest, f)).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomeoReport {
    pub pass: bool,
    pub points_checked: usize,
    pub failures: Vec<String>,
}

fn partition_failures(g: &Graph, stems: &[&Path], side: &str) -> Vec<String> {
    let mut out = Vec::new();
    let cyls: Vec<Cylinder> = stems.iter().map(|&p| Cylinder::plain(p.clone())).collect();
    for (i, a) in cyls.iter().enumerate() {
        for b in &cyls[i + 1..] {
            let ab = CompactOpen::cylinder(g, a.clone()).intersection(g, &CompactOpen::cylinder(g, b.clone()));
            if !ab.is_empty() {
                out.push(format!("{side} stems {} and {} overlap", a.render(g), b.render(g)));
            }
        }
    }
    let missing = CompactOpen::whole(g).difference(g, &crate::boundary::normalize(g, cyls));
    if !missing.is_empty() {
        out.push(format!("{side} stems do not cover {}", missing.render(g)));
    }
    out
}

/// Checks that both stem lists partition their boundaries, and that `φ`
/// and `φ⁻¹` invert each other on every point of complexity at most `depth`.
pub fn validate_homeo(e: &Graph, f: &Graph, phi: &PrefixHomeo, depth: usize) -> HomeoReport {
    let mut failures = partition_failures(e, &phi.rules.iter().map(|r| &r.0).collect::<Vec<_>>(), "domain");
    failures.extend(partition_failures(f, &phi.rules.iter().map(|r| &r.1).collect::<Vec<_>>(), "range"));
    let inv = phi.inverse();
    let mut points = 0;
    if failures.is_empty() {
        for x in points_up_to(e, depth, 2) {
            points += 1;
            if phi.apply(e, f, &x).and_then(|y| inv.apply(f, e, &y)).as_ref() != Some(&x) {
                failures.push(format!("φ⁻¹φ moves {}", x.render(e)));
            }
        }
        for y in points_up_to(f, depth, 2) {
            points += 1;
            if inv.apply(f, e, &y).and_then(|x| phi.apply(e, f, &x)).as_ref() != Some(&y) {
                failures.push(format!("φφ⁻¹ moves {}", y.render(f)));
            }
        }
    }
    HomeoReport { pass: failures.is_empty(), points_checked: points, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn rules(e: &Graph, f: &Graph, pairs: &[(&str, &str)]) -> Vec<(Path, Path)> {
        pairs.iter().map(|(m, n)| (e.parse_path(m).unwrap(), f.parse_path(n).unwrap())).collect()
    }

    #[test]
    fn validation_examples() {
        let g = corpus::g2();
        assert!(validate_homeo(&g, &g, &PrefixHomeo::identity(&g), 6).pass);
        let first_letter = PrefixHomeo::new(&g, &g, rules(&g, &g, &[("a", "b"), ("b", "a")]), GraphIso::identity(&g)).unwrap();
        assert!(validate_homeo(&g, &g, &first_letter, 6).pass);
        let partial = PrefixHomeo::new(&g, &g, rules(&g, &g, &[("a", "a")]), GraphIso::identity(&g)).unwrap();
        let r = validate_homeo(&g, &g, &partial, 6);
        assert!(!r.pass && r.failures[0].contains("cover"));
        let renames = BTreeMap::from([("a".to_string(), "b".to_string()), ("b".to_string(), "a".to_string())]);
        let swap = PrefixHomeo::new(&g, &g, rules(&g, &g, &[("v", "v")]), GraphIso::by_names(&g, &g, &renames).unwrap()).unwrap();
        assert!(validate_homeo(&g, &g, &swap, 6).pass);
        let x = BoundaryPoint::parse(&g, "b.(a)^inf").unwrap();
        assert_eq!(swap.apply(&g, &g, &x).unwrap().render(&g), "a.(b)^inf");
    }

    #[test]
    fn isomorphism_checks() {
        let g = corpus::two_vertex();
        let ok = BTreeMap::from([
            ("v".to_string(), "w".to_string()),
            ("w".to_string(), "v".to_string()),
            ("a".to_string(), "d".to_string()),
            ("d".to_string(), "a".to_string()),
            ("b".to_string(), "c".to_string()),
            ("c".to_string(), "b".to_string()),
        ]);
        let iso = GraphIso::by_names(&g, &g, &ok).unwrap();
        assert_eq!(iso.inverse().inverse(), iso);
        assert_eq!(iso.renames(&g, &g), ok);
        let bad = BTreeMap::from([("a".to_string(), "d".to_string()), ("d".to_string(), "a".to_string())]);
        assert!(matches!(GraphIso::by_names(&g, &g, &bad), Err(Error::Form(_))));
        // A rule whose tail lands at the wrong vertex.
        let r = rules(&g, &g, &[("v", "v"), ("w", "w")]);
        assert!(PrefixHomeo::new(&g, &g, r, iso).is_err());
    }

    #[test]
    fn overlapping_stems_fail() {
        let g = corpus::g2();
        let r = rules(&g, &g, &[("v", "v"), ("a", "a")]);
        let phi = PrefixHomeo::new(&g, &g, r, GraphIso::identity(&g)).unwrap();
        let rep = validate_homeo(&g, &g, &phi, 4);
        assert!(!rep.pass && rep.failures.iter().any(|m| m.contains("overlap")));
    }
}
