use std::collections::{BTreeSet, VecDeque};

use super::{Card, EdgeInstance, Graph, Path, VertexId};
use crate::error::{Error, Result};

/// Vertex cap for the subset search in [`Graph::maximal_tails`].
pub const DEFAULT_TAIL_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondLVerdict {
    pub holds: bool,
    /// Every entry-less simple loop, one rotation each (based at its least vertex).
    pub entryless: Vec<Path>,
}

impl CondLVerdict {
    pub fn witness(&self) -> Option<&Path> {
        self.entryless.first()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondKVerdict {
    pub holds: bool,
    pub witness: Option<(VertexId, Path)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MaximalTail(pub BTreeSet<VertexId>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PiClause {
    BreakingVertices(Vec<VertexId>),
    ConditionK { vertex: VertexId, lone_loop: Path },
    TailWithoutLoop { tail: MaximalTail, vertex: VertexId },
}

impl PiClause {
    pub fn render(&self, g: &Graph) -> String {
        match self {
            PiClause::BreakingVertices(vs) => {
                let names: Vec<&str> = vs.iter().map(|&v| g.vertex_name(v)).collect();
                format!("breaking vertices {}", names.join(", "))
            }
            PiClause::ConditionK { vertex, lone_loop } => format!(
                "condition (K) fails at {} with the lone loop {}",
                g.vertex_name(*vertex),
                g.render_path(lone_loop)
            ),
            PiClause::TailWithoutLoop { vertex, .. } => {
                format!("{} lies in a maximal tail but connects to no loop in it", g.vertex_name(*vertex))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiVerdict {
    pub holds: bool,
    pub failed: Option<PiClause>,
}

impl Graph {
    /// `{v : w ← v}`: every vertex from which a path runs into `w`.
    pub fn upstream(&self, w: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        seen[w.index()] = true;
        let mut queue = VecDeque::from([w]);
        while let Some(x) = queue.pop_front() {
            for &e in self.receivers(x) {
                let s = self.edge(e).source;
                if !seen[s.index()] {
                    seen[s.index()] = true;
                    queue.push_back(s);
                }
            }
        }
        seen
    }

    /// `{w : w ← v}`: every vertex a path from `v` runs into.
    pub fn downstream(&self, v: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        seen[v.index()] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &e in self.emitters(x) {
                let r = self.edge(e).range;
                if !seen[r.index()] {
                    seen[r.index()] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// `w ← v`: some path has range `w` and source `v`. Reflexive.
    pub fn reaches(&self, w: VertexId, v: VertexId) -> bool {
        self.downstream(v)[w.index()]
    }

    pub fn reaches_by_name(&self, w: &str, v: &str) -> Result<bool> {
        Ok(self.reaches(self.vertex(w)?, self.vertex(v)?))
    }

    /// `Ω(v) = {w ≠ v : w ↚ v}`.
    pub fn omega_set(&self, v: VertexId) -> BTreeSet<VertexId> {
        let down = self.downstream(v);
        self.vertices().filter(|&w| w != v && !down[w.index()]).collect()
    }

    /// Count of `r⁻¹(v) ∖ s⁻¹(Ω(v))`.
    pub fn escaping_receivers(&self, v: VertexId) -> Card {
        let omega = self.omega_set(v);
        self.receivers(v)
            .iter()
            .filter(|&&e| !omega.contains(&self.edge(e).source))
            .map(|&e| self.edge(e).multiplicity.card())
            .sum()
    }

    pub fn breaking_vertices(&self) -> BTreeSet<VertexId> {
        self.vertices()
            .filter(|&v| {
                self.in_degree(v) == Card::Infinite
                    && matches!(self.escaping_receivers(v), Card::Finite(n) if n > 0)
            })
            .collect()
    }

    /// Simple loops based at `v`, with parallel copies sampled up to `width`.
    /// Stops after `limit` loops.
    pub fn simple_loops_at(&self, v: VertexId, width: u32, limit: usize) -> Vec<Path> {
        let mut out = Vec::new();
        let mut visited = vec![false; self.vertex_count()];
        let mut stack = Vec::new();
        self.simple_loop_dfs(v, v, width, limit, &mut visited, &mut stack, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn simple_loop_dfs(
        &self,
        base: VertexId,
        at: VertexId,
        width: u32,
        limit: usize,
        visited: &mut [bool],
        stack: &mut Vec<EdgeInstance>,
        out: &mut Vec<Path>,
    ) {
        for &e in self.receivers(at) {
            let next = self.edge(e).source;
            if next == base {
                for inst in self.instances(e, width) {
                    if out.len() >= limit {
                        return;
                    }
                    stack.push(inst);
                    out.push(Path { range: base, edges: stack.clone() });
                    stack.pop();
                }
            } else if !visited[next.index()] {
                visited[next.index()] = true;
                for inst in self.instances(e, width) {
                    stack.push(inst);
                    self.simple_loop_dfs(base, next, width, limit, visited, stack, out);
                    stack.pop();
                }
                visited[next.index()] = false;
            }
            if out.len() >= limit {
                return;
            }
        }
    }

    /// Every loop at `v` of length at most `max_len` (not only simple ones).
    pub fn loops_at(&self, v: VertexId, max_len: usize, width: u32) -> Vec<Path> {
        self.paths_from(v, max_len, width).into_iter().filter(|p| self.is_loop(p) && self.source(p) == v).collect()
    }

    pub fn on_loop(&self, v: VertexId) -> bool {
        !self.simple_loops_at(v, 1, 1).is_empty()
    }

    /// Condition (L): every loop has an entry. An entry-less loop can only
    /// pass through vertices with exactly one incoming edge instance, so it
    /// is found by walking those unique edges.
    pub fn condition_l(&self) -> CondLVerdict {
        let mut entryless = Vec::new();
        for v in self.vertices() {
            let mut edges = Vec::new();
            let mut at = v;
            let mut seen = BTreeSet::new();
            let closed = loop {
                if self.in_degree(at) != Card::Finite(1) || !seen.insert(at) {
                    break false;
                }
                let e = self.receivers(at)[0];
                edges.push(EdgeInstance::new(e, 0));
                at = self.edge(e).source;
                if at == v {
                    break true;
                }
            };
            // Keep one rotation per loop: the one based at its least vertex.
            if closed && seen.iter().next() == Some(&v) {
                entryless.push(Path { range: v, edges });
            }
        }
        CondLVerdict { holds: entryless.is_empty(), entryless }
    }

    /// Condition (K): two distinct simple loops at a vertex are incomparable,
    /// and all loops at a vertex with a single simple loop are its powers.
    pub fn condition_k(&self) -> CondKVerdict {
        for v in self.vertices() {
            let loops = self.simple_loops_at(v, 2, 2);
            if loops.len() == 1 {
                return CondKVerdict { holds: false, witness: Some((v, loops[0].clone())) };
            }
        }
        CondKVerdict { holds: true, witness: None }
    }

    fn masks(&self) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let n = self.vertex_count();
        let to_mask = |bits: Vec<bool>| bits.iter().enumerate().filter(|(_, &b)| b).fold(0u64, |m, (i, _)| m | 1 << i);
        let down: Vec<u64> = self.vertices().map(|v| to_mask(self.downstream(v))).collect();
        let up: Vec<u64> = self.vertices().map(|v| to_mask(self.upstream(v))).collect();
        let feeders: Vec<u64> = (0..n)
            .map(|i| self.receivers(VertexId(i as u32)).iter().fold(0u64, |m, &e| m | 1 << self.edge(e).source.index()))
            .collect();
        (down, up, feeders)
    }

    /// Brute force over vertex subsets.
    pub fn maximal_tails(&self) -> Result<Vec<MaximalTail>> {
        self.maximal_tails_capped(DEFAULT_TAIL_CAP)
    }

    pub fn maximal_tails_capped(&self, cap: usize) -> Result<Vec<MaximalTail>> {
        let n = self.vertex_count();
        if n > cap || n > 30 {
            return Err(Error::Size { what: "vertex count".into(), actual: n, cap: cap.min(30) });
        }
        let (down, up, feeders) = self.masks();
        let regular: Vec<bool> = self.vertices().map(|v| self.is_regular(v)).collect();
        let mut out = Vec::new();
        for m in 1u64..(1u64 << n) {
            let members = || (0..n).filter(move |i| m >> i & 1 == 1);
            if members().any(|w| down[w] & !m != 0) {
                continue;
            }
            if members().any(|v| regular[v] && feeders[v] & m == 0) {
                continue;
            }
            let common = members().all(|v| members().all(|w| up[v] & up[w] & m != 0));
            if common {
                out.push(MaximalTail(members().map(|i| VertexId(i as u32)).collect()));
            }
        }
        Ok(out)
    }

    pub fn condition_pi(&self) -> Result<PiVerdict> {
        self.condition_pi_capped(DEFAULT_TAIL_CAP)
    }

    pub fn condition_pi_capped(&self, cap: usize) -> Result<PiVerdict> {
        let breaking = self.breaking_vertices();
        if !breaking.is_empty() {
            let failed = PiClause::BreakingVertices(breaking.into_iter().collect());
            return Ok(PiVerdict { holds: false, failed: Some(failed) });
        }
        let k = self.condition_k();
        if let Some((vertex, lone_loop)) = k.witness {
            return Ok(PiVerdict { holds: false, failed: Some(PiClause::ConditionK { vertex, lone_loop }) });
        }
        let tails = self.maximal_tails_capped(cap)?;
        let looped: Vec<bool> = self.vertices().map(|v| self.on_loop(v)).collect();
        for tail in tails {
            for &v in &tail.0 {
                let up = self.upstream(v);
                let connects = tail.0.iter().any(|w| up[w.index()] && looped[w.index()]);
                if !connects {
                    return Ok(PiVerdict {
                        holds: false,
                        failed: Some(PiClause::TailWithoutLoop { tail, vertex: v }),
                    });
                }
            }
        }
        Ok(PiVerdict { holds: true, failed: None })
    }
}
