//! Directed graphs with multiplicity-annotated edges, using the convention
//! that paths grow at the source: `μν` is defined when `r(ν) = s(μ)`.

mod conditions;
mod json;

pub use conditions::{
    CondKVerdict, CondLVerdict, MaximalTail, PiClause, PiVerdict, DEFAULT_TAIL_CAP,
};
pub use json::{GraphJson, EdgeJson, MultiplicityJson};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u32),
    Infinite,
}

impl Multiplicity {
    pub fn card(self) -> Card {
        match self {
            Multiplicity::Finite(n) => Card::Finite(n as u64),
            Multiplicity::Infinite => Card::Infinite,
        }
    }

    pub fn admits(self, copy: u32) -> bool {
        match self {
            Multiplicity::Finite(n) => copy < n,
            Multiplicity::Infinite => true,
        }
    }
}

/// A cardinality in ℕ ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Card {
    Finite(u64),
    Infinite,
}

impl Card {
    pub const ZERO: Card = Card::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Card::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Card::Finite(_))
    }
}

impl std::ops::Add for Card {
    type Output = Card;
    fn add(self, other: Card) -> Card {
        match (self, other) {
            (Card::Finite(a), Card::Finite(b)) => Card::Finite(a + b),
            _ => Card::Infinite,
        }
    }
}

impl std::iter::Sum for Card {
    fn sum<I: Iterator<Item = Card>>(iter: I) -> Card {
        iter.fold(Card::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub range: VertexId,
    pub source: VertexId,
    pub multiplicity: Multiplicity,
}

/// One member of a (possibly infinite) family of parallel edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeInstance {
    pub edge: EdgeId,
    pub copy: u32,
}

impl EdgeInstance {
    pub fn new(edge: EdgeId, copy: u32) -> Self {
        EdgeInstance { edge, copy }
    }
}

/// A finite path. Length-0 paths are vertices; `range` is `r(μ)` in all cases.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    range: VertexId,
    edges: Vec<EdgeInstance>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Self {
        Path { range: v, edges: Vec::new() }
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn edges(&self) -> &[EdgeInstance] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn first(&self) -> Option<EdgeInstance> {
        self.edges.first().copied()
    }

    pub fn last(&self) -> Option<EdgeInstance> {
        self.edges.last().copied()
    }

    /// `self` is an initial segment of `other` (vertices are prefixes of
    /// every path they are the range of).
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.range == other.range && other.edges.starts_with(&self.edges)
    }

    pub fn comparable(&self, other: &Path) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    receivers: Vec<Vec<EdgeId>>,
    emitters: Vec<Vec<EdgeId>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

fn valid_id(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Graph {
    /// Builds a graph from vertex names and `(id, range, source, multiplicity)` records.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String, Multiplicity)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if !valid_id(v) {
                return Err(Error::schema(format!("vertices[{i}]"), format!("invalid id `{v}`")));
            }
            if vertex_index.insert(v.clone(), VertexId(i as u32)).is_some() {
                return Err(Error::schema(format!("vertices[{i}]"), format!("duplicate vertex id `{v}`")));
            }
        }
        let mut edge_index = HashMap::new();
        let mut edge_list = Vec::new();
        for (i, (id, r, s, m)) in edges.into_iter().enumerate() {
            if !valid_id(&id) {
                return Err(Error::schema(format!("edges[{i}].id"), format!("invalid id `{id}`")));
            }
            if vertex_index.contains_key(&id) || edge_index.contains_key(&id) {
                return Err(Error::schema(format!("edges[{i}].id"), format!("duplicate id `{id}`")));
            }
            let range = *vertex_index
                .get(&r)
                .ok_or_else(|| Error::schema(format!("edges[{i}].range"), format!("undeclared vertex `{r}`")))?;
            let source = *vertex_index
                .get(&s)
                .ok_or_else(|| Error::schema(format!("edges[{i}].source"), format!("undeclared vertex `{s}`")))?;
            if m == Multiplicity::Finite(0) {
                return Err(Error::schema(format!("edges[{i}].multiplicity"), "multiplicity must be at least 1"));
            }
            edge_index.insert(id.clone(), EdgeId(i as u32));
            edge_list.push(Edge { id, range, source, multiplicity: m });
        }
        let mut receivers = vec![Vec::new(); vertices.len()];
        let mut emitters = vec![Vec::new(); vertices.len()];
        for (i, e) in edge_list.iter().enumerate() {
            receivers[e.range.index()].push(EdgeId(i as u32));
            emitters[e.source.index()].push(EdgeId(i as u32));
        }
        Ok(Graph { vertices, edges: edge_list, vertex_index, edge_index, receivers, emitters })
    }

    /// Convenience constructor for tests and built-in examples; panics on bad input.
    pub fn build(vertices: &[&str], edges: &[(&str, &str, &str, Multiplicity)]) -> Graph {
        Graph::new(
            vertices.iter().copied(),
            edges.iter().map(|(i, r, s, m)| (i.to_string(), r.to_string(), s.to_string(), *m)),
        )
        .expect("invalid built-in graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edge_index.get(name).copied().ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn range_of(&self, e: EdgeInstance) -> VertexId {
        self.edges[e.edge.index()].range
    }

    pub fn source_of(&self, e: EdgeInstance) -> VertexId {
        self.edges[e.edge.index()].source
    }

    /// Edge families with range `v`.
    pub fn receivers(&self, v: VertexId) -> &[EdgeId] {
        &self.receivers[v.index()]
    }

    /// Edge families with source `v`.
    pub fn emitters(&self, v: VertexId) -> &[EdgeId] {
        &self.emitters[v.index()]
    }

    /// `|r⁻¹(v)|` counted with multiplicity.
    pub fn in_degree(&self, v: VertexId) -> Card {
        self.receivers(v).iter().map(|&e| self.edge(e).multiplicity.card()).sum()
    }

    pub fn is_regular(&self, v: VertexId) -> bool {
        matches!(self.in_degree(v), Card::Finite(n) if n > 0)
    }

    pub fn is_singular(&self, v: VertexId) -> bool {
        !self.is_regular(v)
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.receivers(v).is_empty()
    }

    pub fn is_infinite_receiver(&self, v: VertexId) -> bool {
        self.in_degree(v) == Card::Infinite
    }

    pub fn has_infinite_edges(&self) -> bool {
        self.edges.iter().any(|e| e.multiplicity == Multiplicity::Infinite)
    }

    /// The first `width` instances of an edge family (all of them when finite and smaller).
    pub fn instances(&self, e: EdgeId, width: u32) -> impl Iterator<Item = EdgeInstance> {
        let n = match self.edge(e).multiplicity {
            Multiplicity::Finite(m) => m.min(width.max(1)),
            Multiplicity::Infinite => width.max(1),
        };
        (0..n).map(move |c| EdgeInstance::new(e, c))
    }

    /// Sampled instances of `r⁻¹(v)`.
    pub fn receiver_instances(&self, v: VertexId, width: u32) -> Vec<EdgeInstance> {
        self.receivers(v).iter().flat_map(|&e| self.instances(e, width)).collect()
    }

    /// Sampled instances of all of `E¹`.
    pub fn all_instances(&self, width: u32) -> Vec<EdgeInstance> {
        self.edge_ids().flat_map(|e| self.instances(e, width)).collect()
    }

    pub fn check_instance(&self, e: EdgeInstance) -> Result<()> {
        if e.edge.index() >= self.edges.len() {
            return Err(Error::UnknownEdge(format!("#{}", e.edge.0)));
        }
        if !self.edge(e.edge).multiplicity.admits(e.copy) {
            return Err(Error::Domain(format!(
                "copy index {} out of range for `{}`",
                e.copy,
                self.edge(e.edge).id
            )));
        }
        Ok(())
    }

    // ---- paths ----

    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path::vertex(v)
    }

    pub fn edge_path(&self, e: EdgeInstance) -> Path {
        Path { range: self.range_of(e), edges: vec![e] }
    }

    /// Validates composability and builds a path.
    pub fn path(&self, range: VertexId, edges: Vec<EdgeInstance>) -> Result<Path> {
        let mut at = range;
        for (i, &e) in edges.iter().enumerate() {
            self.check_instance(e)?;
            if self.range_of(e) != at {
                return Err(Error::Composition(format!(
                    "edge {} at position {i} has range `{}`, expected `{}`",
                    self.render_instance(e),
                    self.vertex_name(self.range_of(e)),
                    self.vertex_name(at)
                )));
            }
            at = self.source_of(e);
        }
        Ok(Path { range, edges })
    }

    /// Builds a path from a nonempty composable edge sequence.
    pub fn path_of(&self, edges: Vec<EdgeInstance>) -> Result<Path> {
        let first = edges.first().ok_or_else(|| Error::Composition("empty edge sequence".into()))?;
        self.path(self.range_of(*first), edges)
    }

    pub fn source(&self, p: &Path) -> VertexId {
        match p.edges.last() {
            Some(&e) => self.source_of(e),
            None => p.range,
        }
    }

    pub fn concat(&self, mu: &Path, nu: &Path) -> Result<Path> {
        let s = self.source(mu);
        if nu.range != s {
            return Err(Error::Composition(format!(
                "cannot extend {} (source `{}`) by {} (range `{}`)",
                self.render_path(mu),
                self.vertex_name(s),
                self.render_path(nu),
                self.vertex_name(nu.range)
            )));
        }
        let mut edges = mu.edges.clone();
        edges.extend_from_slice(&nu.edges);
        Ok(Path { range: mu.range, edges })
    }

    /// Appends one edge at the source end.
    pub fn extend(&self, mu: &Path, e: EdgeInstance) -> Result<Path> {
        self.concat(mu, &self.edge_path(e))
    }

    /// The first `k` edges of `p`.
    pub fn prefix(&self, p: &Path, k: usize) -> Path {
        Path { range: p.range, edges: p.edges[..k.min(p.len())].to_vec() }
    }

    /// `p` with its first `k` edges removed.
    pub fn suffix(&self, p: &Path, k: usize) -> Path {
        let k = k.min(p.len());
        let range = if k == 0 { p.range } else { self.source_of(p.edges[k - 1]) };
        Path { range, edges: p.edges[k..].to_vec() }
    }

    /// If `prefix` is an initial segment of `p`, the remainder.
    pub fn strip_prefix(&self, p: &Path, prefix: &Path) -> Option<Path> {
        prefix.is_prefix_of(p).then(|| self.suffix(p, prefix.len()))
    }

    /// Rotates a loop left by `k` positions.
    pub fn rotate(&self, cycle: &Path, k: usize) -> Path {
        if cycle.is_vertex() {
            return cycle.clone();
        }
        let k = k % cycle.len();
        let mut edges = cycle.edges[k..].to_vec();
        edges.extend_from_slice(&cycle.edges[..k]);
        Path { range: self.range_of(edges[0]), edges }
    }

    pub fn is_loop(&self, p: &Path) -> bool {
        !p.is_vertex() && self.source(p) == p.range
    }

    /// All paths with range `v` of length at most `max_len`, in shortlex order.
    pub fn paths_from(&self, v: VertexId, max_len: usize, width: u32) -> Vec<Path> {
        let mut out = vec![Path::vertex(v)];
        let mut frontier = vec![Path::vertex(v)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for e in self.receiver_instances(self.source(p), width) {
                    let mut q = p.clone();
                    q.edges.push(e);
                    next.push(q);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// All paths with source `u` of length at most `max_len`, in shortlex order
    /// of their reversed edge sequences.
    pub fn paths_into(&self, u: VertexId, max_len: usize, width: u32) -> Vec<Path> {
        let mut out = vec![Path::vertex(u)];
        let mut frontier = vec![Path::vertex(u)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for &e in self.emitters(p.range) {
                    for inst in self.instances(e, width) {
                        let mut edges = vec![inst];
                        edges.extend_from_slice(&p.edges);
                        next.push(Path { range: self.range_of(inst), edges });
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// All paths of length at most `max_len`.
    pub fn all_paths(&self, max_len: usize, width: u32) -> Vec<Path> {
        let mut out: Vec<Path> =
            self.vertices().flat_map(|v| self.paths_from(v, max_len, width)).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    // ---- text forms ----

    pub fn render_instance(&self, e: EdgeInstance) -> String {
        let edge = self.edge(e.edge);
        match edge.multiplicity {
            Multiplicity::Finite(1) => edge.id.clone(),
            _ => format!("{}[{}]", edge.id, e.copy),
        }
    }

    /// `a.b.c`, or the vertex name for length-0 paths.
    pub fn render_path(&self, p: &Path) -> String {
        if p.is_vertex() {
            return self.vertex_name(p.range).to_string();
        }
        p.edges.iter().map(|&e| self.render_instance(e)).collect::<Vec<_>>().join(".")
    }

    pub fn parse_instance(&self, s: &str) -> Result<EdgeInstance> {
        let s = s.trim();
        let (name, copy) = match s.find('[') {
            Some(i) => {
                let rest = s[i + 1..]
                    .strip_suffix(']')
                    .ok_or_else(|| Error::parse(s, "expected `]`"))?;
                let copy = rest.trim().parse::<u32>().map_err(|_| Error::parse(s, "bad copy index"))?;
                (&s[..i], copy)
            }
            None => (s, 0),
        };
        let e = EdgeInstance::new(self.edge_id(name.trim())?, copy);
        self.check_instance(e)?;
        Ok(e)
    }

    /// Parses `a.b.c` or a vertex name.
    pub fn parse_path(&self, s: &str) -> Result<Path> {
        let s = s.trim();
        if let Some(&v) = self.vertex_index.get(s) {
            return Ok(Path::vertex(v));
        }
        if s.is_empty() {
            return Err(Error::parse(s, "empty path"));
        }
        let edges = s.split('.').map(|t| self.parse_instance(t)).collect::<Result<Vec<_>>>()?;
        self.path_of(edges)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    range: self.vertex_name(e.range).to_string(),
                    source: self.vertex_name(e.source).to_string(),
                    multiplicity: Some(match e.multiplicity {
                        Multiplicity::Finite(n) => MultiplicityJson::Finite(n as u64),
                        Multiplicity::Infinite => MultiplicityJson::Symbolic("inf".into()),
                    }),
                })
                .collect(),
        }
    }

    /// Disjoint union; names of `other` are suffixed when they clash.
    pub fn disjoint_union(&self, other: &Graph, suffix: &str) -> Result<Graph> {
        let rename = |n: &str, taken: &HashMap<String, VertexId>, etaken: &HashMap<String, EdgeId>| {
            if taken.contains_key(n) || etaken.contains_key(n) {
                format!("{n}{suffix}")
            } else {
                n.to_string()
            }
        };
        let vmap: Vec<String> =
            other.vertices.iter().map(|v| rename(v, &self.vertex_index, &self.edge_index)).collect();
        let mut vertices = self.vertices.clone();
        vertices.extend(vmap.iter().cloned());
        let mut edges: Vec<(String, String, String, Multiplicity)> = self
            .edges
            .iter()
            .map(|e| {
                (e.id.clone(), self.vertex_name(e.range).into(), self.vertex_name(e.source).into(), e.multiplicity)
            })
            .collect();
        for e in &other.edges {
            edges.push((
                rename(&e.id, &self.vertex_index, &self.edge_index),
                vmap[e.range.index()].clone(),
                vmap[e.source.index()].clone(),
                e.multiplicity,
            ));
        }
        Graph::new(vertices, edges)
    }
}

/// Load a graph from its JSON description.
pub fn load_graph(raw: &str) -> Result<Graph> {
    let parsed: GraphJson =
        serde_json::from_str(raw).map_err(|e| Error::schema("document", e.to_string()))?;
    parsed.into_graph()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn vertex_classes() {
        let g2 = corpus::g2();
        assert!(g2.is_regular(g2.vertex("v").unwrap()));
        let g3 = corpus::g3();
        assert!(g3.is_singular(g3.vertex("w").unwrap()));
        assert!(g3.is_regular(g3.vertex("u").unwrap()));
        let g5 = corpus::g5();
        assert!(g5.is_singular(g5.vertex("v").unwrap()));
    }

    #[test]
    fn concat_rules() {
        let g2 = corpus::g2();
        let a = g2.parse_path("a").unwrap();
        let b = g2.parse_path("b").unwrap();
        let ab = g2.concat(&a, &b).unwrap();
        assert_eq!(ab.len(), 2);
        assert_eq!(g2.render_path(&ab), "a.b");
        let v = g2.parse_path("v").unwrap();
        assert_eq!(g2.concat(&v, &a).unwrap(), a);

        let g3 = corpus::g3();
        let e = g3.parse_path("e").unwrap();
        assert!(matches!(g3.concat(&e, &e), Err(Error::Composition(_))));
    }

    #[test]
    fn schema_errors_name_the_field() {
        let dup = r#"{"vertices":["v","v"],"edges":[]}"#;
        assert!(matches!(load_graph(dup), Err(Error::Schema { field, .. }) if field == "vertices[1]"));
        let dangling = r#"{"vertices":["v"],"edges":[{"id":"a","range":"v","source":"x"}]}"#;
        assert!(matches!(load_graph(dangling), Err(Error::Schema { field, .. }) if field == "edges[0].source"));
        let zero = r#"{"vertices":["v"],"edges":[{"id":"a","range":"v","source":"v","multiplicity":0}]}"#;
        assert!(matches!(load_graph(zero), Err(Error::Schema { field, .. }) if field == "edges[0].multiplicity"));
        let inf = r#"{"vertices":["v"],"edges":[{"id":"f","range":"v","source":"v","multiplicity":"inf"}]}"#;
        let g = load_graph(inf).unwrap();
        assert!(g.is_infinite_receiver(g.vertex("v").unwrap()));
    }

    #[test]
    fn path_text_roundtrip() {
        let g = corpus::g5();
        let p = g.parse_path("f[3].f[0]").unwrap();
        assert_eq!(g.render_path(&p), "f[3].f[0]");
        let g4 = corpus::g4();
        let p = g4.parse_path("a.a.c").unwrap();
        assert_eq!(g4.source(&p), g4.vertex("w").unwrap());
        assert_eq!(g4.render_path(&g4.suffix(&p, 2)), "c");
        assert!(g4.parse_path("c.a").is_err());
    }

    #[test]
    fn json_roundtrip() {
        for g in corpus::named() {
            let text = serde_json::to_string(&g.1.to_json()).unwrap();
            assert_eq!(load_graph(&text).unwrap(), g.1);
        }
    }
}
