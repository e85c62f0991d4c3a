//! `W(k, L)` systems, Bourdon buildings, vertex links and Davis-ball cell
//! censuses.

use crate::classification::{is_hyperbolic, mask_members, nerve, HyperbolicityReport};
use crate::coxeter::{enumerate_ball, enumerate_ball_with_limit, CoxeterMatrix, CoxeterSystem, Label};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// A finite simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct LinkGraph {
    n: usize,
    names: Option<Vec<String>>,
    adj: Vec<Vec<bool>>,
}

/// JSON form: `{"vertices": n, "edges": [[a, b], …], "names": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl TryFrom<GraphFile> for LinkGraph {
    type Error = Error;

    fn try_from(f: GraphFile) -> Result<Self> {
        let mut g = LinkGraph::new(f.vertices, &f.edges)?;
        if let Some(names) = f.names {
            if names.len() != f.vertices {
                return Err(Error::InvalidGraph(format!("{} names for {} vertices", names.len(), f.vertices)));
            }
            g.names = Some(names);
        }
        Ok(g)
    }
}

impl From<LinkGraph> for GraphFile {
    fn from(g: LinkGraph) -> Self {
        GraphFile { vertices: g.n, edges: g.edges(), names: g.names }
    }
}

impl LinkGraph {
    /// Rejects loops, repeated edges and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at {a}")));
            }
            if adj[a][b] {
                return Err(Error::InvalidGraph(format!("double edge ({a}, {b})")));
            }
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Ok(LinkGraph { n, names: None, adj })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    /// The cycle `C_n`.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &edges).expect("n >= 3")
    }

    /// `K_{p,q}` with parts `0..p` and `p..p+q`.
    pub fn complete_bipartite(p: usize, q: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..p).flat_map(|i| (p..p + q).map(move |j| (i, j))).collect();
        Self::new(p + q, &edges).expect("simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::new(n, &edges).expect("simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| (a + 1..self.n).filter(move |&b| self.adj[a][b]).map(move |b| (a, b))).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&e| e).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for w in 0..self.n {
                if self.adj[v][w] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Length of a shortest cycle, `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for root in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for w in 0..self.n {
                    if !self.adj[v][w] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

/// `m_st = k/2` on edges of `L`, `∞` elsewhere.
pub fn matrix_from_graph(graph: &LinkGraph, k: u32) -> Result<CoxeterMatrix> {
    if k % 2 == 1 {
        return Err(Error::OddK(k));
    }
    if k < 4 {
        return Err(Error::KTooSmall(k));
    }
    CoxeterMatrix::from_fn(graph.vertex_count(), |i, j| {
        if i == j {
            Label::Finite(1)
        } else if graph.has_edge(i, j) {
            Label::Finite(k / 2)
        } else {
            Label::Infinity
        }
    })
}

/// `W(k, L)` with generator names taken from the graph when present.
pub fn system_from_graph(graph: &LinkGraph, k: u32) -> Result<CoxeterSystem> {
    let m = matrix_from_graph(graph, k)?;
    match graph.names() {
        Some(n) => CoxeterSystem::with_names(m, n.to_vec()),
        None => CoxeterSystem::new(m),
    }
}

/// Link of a vertex of the Davis complex: `s -- t` iff `m_st < ∞`.
pub fn davis_vertex_link(system: &CoxeterSystem) -> LinkGraph {
    let n = system.rank();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| system.label(i, j).is_finite())
        .collect();
    let mut g = LinkGraph::new(n, &edges).expect("simple");
    g.names = Some(system.names().to_vec());
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlReport {
    pub k: u32,
    pub girth: Option<usize>,
    /// 5 for `k = 4`, 4 for `k = 6`, none for `k ≥ 8`.
    pub required_girth: Option<usize>,
    pub girth_ok: bool,
    pub hyperbolicity: HyperbolicityReport,
}

impl KlReport {
    pub fn passed(&self) -> bool {
        self.girth_ok
    }
}

/// Girth condition on `L` for `W(k, L)`, with Moussong's criterion on the result.
pub fn validate_kl(graph: &LinkGraph, k: u32) -> Result<KlReport> {
    let system = CoxeterSystem::new(matrix_from_graph(graph, k)?)?;
    let required_girth = match k {
        4 => Some(5),
        6 => Some(4),
        _ => None,
    };
    let girth = graph.girth();
    let girth_ok = match (required_girth, girth) {
        (None, _) | (_, None) => true,
        (Some(r), Some(g)) => g >= r,
    };
    Ok(KlReport { k, girth, required_girth, girth_ok, hyperbolicity: is_hyperbolic(&system) })
}

/// `W(p, K_{q,q})`; left part `0..q`, right part `q..2q`.
pub fn bourdon_system(p: u32, q: usize) -> Result<CoxeterSystem> {
    if p % 2 == 1 {
        return Err(Error::OddP(p));
    }
    if p < 4 {
        return Err(Error::KTooSmall(p));
    }
    if q < 2 {
        return Err(Error::InvalidGraph(format!("q = {q} must be at least 2")));
    }
    CoxeterSystem::new(matrix_from_graph(&LinkGraph::complete_bipartite(q, q), p)?)
}

/// Replaces each generator `s` of `base` by `counts[s]` copies. Copies of one
/// generator are pairwise joined by `∞`; copies of distinct generators
/// inherit the base label. Copies are named `s1, s2, …` (a single copy keeps
/// the base name).
pub fn inflate(base: &CoxeterSystem, counts: &[usize]) -> Result<CoxeterSystem> {
    if counts.len() != base.rank() || counts.contains(&0) {
        return Err(Error::MatrixShape("one positive count per generator is required".into()));
    }
    let mut owner = Vec::new();
    let mut names = Vec::new();
    for (s, &c) in counts.iter().enumerate() {
        for i in 0..c {
            owner.push(s);
            names.push(if c == 1 { base.name(s).to_string() } else { format!("{}{}", base.name(s), i + 1) });
        }
    }
    let m = CoxeterMatrix::from_fn(owner.len(), |i, j| {
        if i == j {
            Label::Finite(1)
        } else if owner[i] == owner[j] {
            Label::Infinity
        } else {
            base.label(owner[i], owner[j])
        }
    })?;
    CoxeterSystem::with_names(m, names)
}

/// Cells `wW_T` of the Davis complex, `T` a nerve face, whose minimal coset
/// representative lies in the radius-`R` ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCensus {
    pub radius: usize,
    pub entries: Vec<CensusEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    #[serde(rename = "T")]
    pub subset: Vec<String>,
    pub count: usize,
}

impl CellCensus {
    pub fn count(&self, subset: &[&str]) -> Option<usize> {
        self.entries.iter().find(|e| e.subset.iter().map(String::as_str).eq(subset.iter().copied())).map(|e| e.count)
    }

    /// Total count over faces of a given size.
    pub fn count_by_size(&self, size: usize) -> usize {
        self.entries.iter().filter(|e| e.subset.len() == size).map(|e| e.count).sum()
    }
}

pub fn cell_census(system: &CoxeterSystem, radius: usize) -> Result<CellCensus> {
    cell_census_with_limit(system, radius, crate::coxeter::DEFAULT_MAX_VERTICES)
}

/// `w` is the minimal representative of `wW_T` iff no `t ∈ T` is a right
/// descent of `w`, so each count is a scan of the ball.
pub fn cell_census_with_limit(system: &CoxeterSystem, radius: usize, max_vertices: usize) -> Result<CellCensus> {
    let ball = if max_vertices == crate::coxeter::DEFAULT_MAX_VERTICES {
        enumerate_ball(system, radius)?
    } else {
        enumerate_ball_with_limit(system, radius, max_vertices)?
    };
    let descents: Vec<u64> = (0..ball.len())
        .map(|i| (0..system.rank()).filter(|&s| ball.is_right_descent(i, s)).fold(0u64, |m, s| m | 1 << s))
        .collect();
    let entries = nerve(system)
        .faces()
        .iter()
        .map(|&t| CensusEntry {
            subset: mask_members(t).iter().map(|&s| system.name(s).to_string()).collect(),
            count: descents.iter().filter(|&&d| d & t == 0).count(),
        })
        .collect();
    Ok(CellCensus { radius, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::presets;

    #[test]
    fn matrix_examples() {
        let edge = LinkGraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(matrix_from_graph(&edge, 6).unwrap(), CoxeterMatrix::linear(&[3]).unwrap());
        assert_eq!(matrix_from_graph(&edge, 5), Err(Error::OddK(5)));
        assert_eq!(matrix_from_graph(&edge, 2), Err(Error::KTooSmall(2)));
        let k33 = matrix_from_graph(&LinkGraph::complete_bipartite(3, 3), 6).unwrap();
        assert_eq!(k33.get(0, 3), Label::Finite(3));
        assert_eq!(k33.get(0, 1), Label::Infinity);
        assert_eq!(k33.get(4, 5), Label::Infinity);
    }

    #[test]
    fn graph_validation() {
        assert!(matches!(LinkGraph::new(2, &[(0, 0)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(LinkGraph::new(2, &[(0, 1), (1, 0)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(LinkGraph::new(2, &[(0, 2)]), Err(Error::InvalidGraph(_))));
        let g = LinkGraph::cycle(5);
        assert_eq!(LinkGraph::from_json(&g.to_json()).unwrap(), g);
        assert!(LinkGraph::from_json(r#"{"vertices": 2, "edges": [[0, 0]]}"#).is_err());
    }

    #[test]
    fn girths() {
        assert_eq!(LinkGraph::cycle(5).girth(), Some(5));
        assert_eq!(LinkGraph::cycle(4).girth(), Some(4));
        assert_eq!(LinkGraph::complete(3).girth(), Some(3));
        assert_eq!(LinkGraph::complete_bipartite(3, 3).girth(), Some(4));
        assert_eq!(LinkGraph::new(3, &[(0, 1), (1, 2)]).unwrap().girth(), None);
        // Petersen graph.
        let outer: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let inner: Vec<(usize, usize)> = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5)).collect();
        let spokes: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 5)).collect();
        let p = LinkGraph::new(10, &[outer, inner, spokes].concat()).unwrap();
        assert_eq!(p.girth(), Some(5));
    }

    #[test]
    fn links_round_trip() {
        for (g, k) in [(LinkGraph::cycle(5), 4), (LinkGraph::complete_bipartite(3, 3), 6), (LinkGraph::complete(4), 8)] {
            let sys = CoxeterSystem::new(matrix_from_graph(&g, k).unwrap()).unwrap();
            assert_eq!(davis_vertex_link(&sys).edges(), g.edges());
        }
        assert_eq!(davis_vertex_link(&presets::a2()).edges(), vec![(0, 1)]);
    }

    #[test]
    fn kl_reports() {
        assert!(!validate_kl(&LinkGraph::cycle(4), 4).unwrap().passed());
        assert!(validate_kl(&LinkGraph::complete_bipartite(3, 3), 6).unwrap().passed());
        let r = validate_kl(&LinkGraph::complete(3), 8).unwrap();
        assert!(r.passed() && r.hyperbolicity.hyperbolic);
        assert_eq!(validate_kl(&LinkGraph::cycle(5), 7), Err(Error::OddK(7)));
    }

    #[test]
    fn bourdon_examples() {
        assert_eq!(bourdon_system(6, 3).unwrap(), presets::bourdon_k33());
        assert!(bourdon_system(4, 2).is_ok());
        assert_eq!(bourdon_system(7, 3), Err(Error::OddP(7)));
    }

    #[test]
    fn h3_bar_labels() {
        let h = presets::h3_bar();
        assert_eq!(h.rank(), 7);
        assert_eq!(h.names(), &["s1", "s2", "s3", "t1", "t2", "t3", "u"]);
        let mut fives = 0;
        let mut infs = 0;
        for i in 0..7 {
            for j in i + 1..7 {
                match h.label(i, j) {
                    Label::Finite(5) => fives += 1,
                    Label::Infinity => infs += 1,
                    _ => {}
                }
            }
        }
        assert_eq!((fives, infs), (3, 6));
    }

    #[test]
    fn census_examples() {
        let c = cell_census(&presets::a2(), 3).unwrap();
        assert_eq!(c.count(&[]), Some(6));
        assert_eq!(c.count(&["s"]), Some(3));
        assert_eq!(c.count(&["t"]), Some(3));
        assert_eq!(c.count(&["s", "t"]), Some(1));
        let sys = presets::bourdon_k33();
        let c0 = cell_census(&sys, 0).unwrap();
        assert!(c0.entries.iter().all(|e| e.count == 1));
        assert_eq!(c0.count_by_size(2), 9);
    }
}
