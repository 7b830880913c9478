use crate::error::{Error, Result};
use crate::graph::{EdgeInstance, Graph, Path, VertexId};

/// A boundary path that is either finite (ending at a singular vertex) or
/// eventually periodic, `prefix · cycle · cycle · …`.
///
/// Periodic points are kept canonical: the cycle is primitive and the prefix
/// does not end with the cycle's last edge, so equal sequences have equal
/// representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryPoint {
    Finite(Path),
    Periodic { prefix: Path, cycle: Path },
}

impl BoundaryPoint {
    pub fn finite(g: &Graph, p: Path) -> Result<BoundaryPoint> {
        if g.is_regular(g.source(&p)) {
            return Err(Error::Domain(format!(
                "{} ends at the regular vertex `{}`",
                g.render_path(&p),
                g.vertex_name(g.source(&p))
            )));
        }
        Ok(BoundaryPoint::Finite(p))
    }

    pub fn periodic(g: &Graph, prefix: Path, cycle: Path) -> Result<BoundaryPoint> {
        if !g.is_loop(&cycle) {
            return Err(Error::Domain(format!("{} is not a loop", g.render_path(&cycle))));
        }
        if g.source(&prefix) != cycle.range() {
            return Err(Error::Composition(format!(
                "{} does not continue {}",
                g.render_path(&cycle),
                g.render_path(&prefix)
            )));
        }
        Ok(canonical(g, prefix, cycle))
    }

    pub fn range(&self) -> VertexId {
        match self {
            BoundaryPoint::Finite(p) => p.range(),
            BoundaryPoint::Periodic { prefix, .. } => prefix.range(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BoundaryPoint::Finite(_))
    }

    /// Length of the finite data: `l(prefix) + l(cycle)` or `l(path)`.
    pub fn complexity(&self) -> usize {
        match self {
            BoundaryPoint::Finite(p) => p.len(),
            BoundaryPoint::Periodic { prefix, cycle } => prefix.len() + cycle.len(),
        }
    }

    /// The `i`-th edge, counting from 0.
    pub fn edge_at(&self, i: usize) -> Option<EdgeInstance> {
        match self {
            BoundaryPoint::Finite(p) => p.edges().get(i).copied(),
            BoundaryPoint::Periodic { prefix, cycle } => {
                let lp = prefix.len();
                Some(if i < lp { prefix.edges()[i] } else { cycle.edges()[(i - lp) % cycle.len()] })
            }
        }
    }

    /// The path of the first `n` edges, if the point is that long.
    pub fn initial(&self, g: &Graph, n: usize) -> Option<Path> {
        let edges: Option<Vec<_>> = (0..n).map(|i| self.edge_at(i)).collect();
        Some(g.path(self.range(), edges?).expect("boundary points are composable"))
    }

    pub fn has_prefix(&self, mu: &Path) -> bool {
        mu.range() == self.range() && mu.edges().iter().enumerate().all(|(i, &e)| self.edge_at(i) == Some(e))
    }

    /// `σᵏ(x)`, or `None` when `x` is a finite path shorter than `k`.
    pub fn shift_by(&self, g: &Graph, k: usize) -> Option<BoundaryPoint> {
        match self {
            BoundaryPoint::Finite(p) => (k <= p.len()).then(|| BoundaryPoint::Finite(g.suffix(p, k))),
            BoundaryPoint::Periodic { prefix, cycle } => {
                if k <= prefix.len() {
                    Some(canonical(g, g.suffix(prefix, k), cycle.clone()))
                } else {
                    let c = g.rotate(cycle, (k - prefix.len()) % cycle.len());
                    Some(BoundaryPoint::Periodic { prefix: Path::vertex(c.range()), cycle: c })
                }
            }
        }
    }

    /// Drops the first edge. Vertices have no shift.
    pub fn shift(&self, g: &Graph) -> Result<BoundaryPoint> {
        if matches!(self, BoundaryPoint::Finite(p) if p.is_vertex()) {
            return Err(Error::Domain("the shift is not defined on vertices".into()));
        }
        Ok(self.shift_by(g, 1).expect("length at least one"))
    }

    /// `μx`, for `s(μ) = r(x)`.
    pub fn prepend(&self, g: &Graph, mu: &Path) -> Result<BoundaryPoint> {
        match self {
            BoundaryPoint::Finite(p) => Ok(BoundaryPoint::Finite(g.concat(mu, p)?)),
            BoundaryPoint::Periodic { prefix, cycle } => Ok(canonical(g, g.concat(mu, prefix)?, cycle.clone())),
        }
    }

    /// Replaces the initial segment `beta` by `alpha`.
    pub fn replace_prefix(&self, g: &Graph, beta: &Path, alpha: &Path) -> Option<BoundaryPoint> {
        if !self.has_prefix(beta) {
            return None;
        }
        self.shift_by(g, beta.len())?.prepend(g, alpha).ok()
    }

    /// `a.b` for finite points, `a.(b.c)^inf` for periodic ones.
    pub fn render(&self, g: &Graph) -> String {
        match self {
            BoundaryPoint::Finite(p) => g.render_path(p),
            BoundaryPoint::Periodic { prefix, cycle } if prefix.is_vertex() => {
                format!("({})^inf", g.render_path(cycle))
            }
            BoundaryPoint::Periodic { prefix, cycle } => {
                format!("{}.({})^inf", g.render_path(prefix), g.render_path(cycle))
            }
        }
    }

    pub fn parse(g: &Graph, s: &str) -> Result<BoundaryPoint> {
        let t = s.trim();
        let Some(body) = t.strip_suffix(")^inf") else {
            return BoundaryPoint::finite(g, g.parse_path(t)?);
        };
        let open = body.rfind('(').ok_or_else(|| Error::parse(s, "unbalanced `(`"))?;
        let cycle = g.parse_path(&body[open + 1..])?;
        let head = &body[..open];
        let prefix = if head.is_empty() {
            Path::vertex(cycle.range())
        } else {
            let head = head.strip_suffix('.').ok_or_else(|| Error::parse(s, "expected `.` before `(`"))?;
            g.parse_path(head)?
        };
        BoundaryPoint::periodic(g, prefix, cycle)
    }
}

fn primitive_root(g: &Graph, cycle: &Path) -> Path {
    let n = cycle.len();
    let e = cycle.edges();
    for d in 1..n {
        if n % d == 0 && (0..n).all(|i| e[i] == e[i % d]) {
            return g.prefix(cycle, d);
        }
    }
    cycle.clone()
}

fn canonical(g: &Graph, prefix: Path, cycle: Path) -> BoundaryPoint {
    let mut cycle = primitive_root(g, &cycle);
    let mut prefix = prefix;
    while prefix.last().is_some() && prefix.last() == cycle.last() {
        prefix = g.prefix(&prefix, prefix.len() - 1);
        cycle = g.rotate(&cycle, cycle.len() - 1);
    }
    BoundaryPoint::Periodic { prefix, cycle }
}

/// Every finite or eventually periodic boundary point of complexity at most `n`.
pub fn points_up_to(g: &Graph, n: usize, width: u32) -> Vec<BoundaryPoint> {
    let mut out = Vec::new();
    let paths = g.all_paths(n, width);
    for p in &paths {
        if g.is_singular(g.source(p)) {
            out.push(BoundaryPoint::Finite(p.clone()));
        }
    }
    for p in &paths {
        if p.len() >= n {
            continue;
        }
        let s = g.source(p);
        for c in g.loops_at(s, n - p.len(), width) {
            if primitive_root(g, &c) != c || (p.last().is_some() && p.last() == c.last()) {
                continue;
            }
            out.push(BoundaryPoint::Periodic { prefix: p.clone(), cycle: c });
        }
    }
    out
}
