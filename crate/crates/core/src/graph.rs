//! Undirected simple graphs over dense node ids `0..n`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::linalg::Matrix;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one node")]
    Empty,
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
    #[error("node {node} is out of range for a graph with {n} nodes")]
    OutOfRange { node: NodeId, n: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("leader set is empty")]
    NoLeaders,
    #[error("leader {0} listed more than once")]
    DuplicateLeader(NodeId),
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Undirected simple graph with sorted adjacency sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<BTreeSet<NodeId>>,
}

impl Graph {
    /// Edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Ok(Self {
            adjacency: vec![BTreeSet::new(); n],
        })
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    fn check(&self, node: NodeId) -> Result<(), GraphError> {
        if node >= self.node_count() {
            return Err(GraphError::OutOfRange {
                node,
                n: self.node_count(),
            });
        }
        Ok(())
    }

    /// Inserts the undirected edge `{u, v}`. Returns `true` when the edge was
    /// not present before.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let fresh = self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        Ok(fresh)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency.get(u).is_some_and(|a| a.contains(&v))
    }

    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[u].iter().copied()
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.range(u + 1..).map(move |&v| (u, v)))
    }

    /// All unordered pairs `u < v` that are not edges.
    pub fn non_edges(&self) -> Vec<(NodeId, NodeId)> {
        let n = self.node_count();
        let mut out = Vec::with_capacity(n * (n - 1) / 2 - self.edge_count());
        for u in 0..n {
            for v in u + 1..n {
                if !self.adjacency[u].contains(&v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// BFS hop counts from `source`; `None` marks unreachable nodes.
    pub fn bfs(&self, source: NodeId) -> Result<Vec<Option<usize>>, GraphError> {
        self.check(source)?;
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    /// Shortest-path hop count, or `None` if `v` is unreachable from `u`.
    pub fn distance(&self, u: NodeId, v: NodeId) -> Result<Option<usize>, GraphError> {
        self.check(v)?;
        Ok(self.bfs(u)?[v])
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0)
            .map(|d| d.iter().all(Option::is_some))
            .unwrap_or(false)
    }

    /// Largest pairwise distance. Fails with [`GraphError::Disconnected`]
    /// when some pair is unreachable.
    pub fn diameter(&self) -> Result<usize, GraphError> {
        let mut best = 0;
        for u in 0..self.node_count() {
            for d in self.bfs(u)? {
                best = best.max(d.ok_or(GraphError::Disconnected)?);
            }
        }
        Ok(best)
    }

    /// Combinatorial Laplacian `L = Degree - Adjacency`.
    pub fn laplacian(&self) -> Matrix {
        let n = self.node_count();
        let mut l = Matrix::zeros(n, n);
        for (u, adj) in self.adjacency.iter().enumerate() {
            l[(u, u)] = adj.len() as f64;
            for &v in adj {
                l[(u, v)] = -1.0;
            }
        }
        l
    }

    /// Graphviz rendering. Leaders are drawn filled; `labels` (one per node)
    /// replace the numeric node captions.
    pub fn to_dot(&self, labels: Option<&[String]>, leaders: Option<&LeaderSet>) -> String {
        let mut out = String::from("graph G {\n");
        for u in 0..self.node_count() {
            let mut attrs = Vec::new();
            if let Some(text) = labels.and_then(|l| l.get(u)) {
                attrs.push(format!("label=\"{}\"", text.replace('"', "\\\"")));
            }
            if leaders.is_some_and(|l| l.contains(u)) {
                attrs.push("style=filled".to_string());
                attrs.push("fillcolor=black".to_string());
                attrs.push("fontcolor=white".to_string());
            }
            if attrs.is_empty() {
                let _ = writeln!(out, "  {u};");
            } else {
                let _ = writeln!(out, "  {u} [{}];", attrs.join(", "));
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }

    /// Plain edge-list text: a `# nodes N` header, then one `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# nodes {}\n", self.node_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses [`Graph::to_edge_list`] output. Blank lines and other `#`
    /// comments are skipped. Without a `# nodes` header the node count is
    /// one past the largest id seen.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                if words.next() == Some("nodes") {
                    let n = words
                        .next()
                        .and_then(|w| w.parse::<usize>().ok())
                        .ok_or_else(|| GraphError::Parse {
                            line: lineno,
                            msg: "malformed `# nodes` header".into(),
                        })?;
                    declared = Some(n);
                }
                continue;
            }
            let ids: Vec<&str> = line.split_whitespace().collect();
            let [a, b] = ids.as_slice() else {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: format!("expected `u v`, got {line:?}"),
                });
            };
            let parse = |w: &str| {
                w.parse::<NodeId>().map_err(|_| GraphError::Parse {
                    line: lineno,
                    msg: format!("invalid node id {w:?}"),
                })
            };
            edges.push((parse(a)?, parse(b)?));
        }
        let n = match declared {
            Some(n) => n,
            None => edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0),
        };
        Self::from_edges(n, edges)
    }
}

/// Ordered, duplicate-free list of leader (input) nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeaderSet {
    leaders: Vec<NodeId>,
}

impl LeaderSet {
    /// Validates ids against a graph with `n` nodes.
    pub fn new(leaders: Vec<NodeId>, n: usize) -> Result<Self, GraphError> {
        if leaders.is_empty() {
            return Err(GraphError::NoLeaders);
        }
        let mut seen = BTreeSet::new();
        for &l in &leaders {
            if l >= n {
                return Err(GraphError::OutOfRange { node: l, n });
            }
            if !seen.insert(l) {
                return Err(GraphError::DuplicateLeader(l));
            }
        }
        Ok(Self { leaders })
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.leaders
    }

    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.leaders.contains(&node)
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.leaders.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn construction_and_edges() {
        assert_eq!(Graph::new(0), Err(GraphError::Empty));
        let g = Graph::new(1).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (1, 0));
        assert_eq!(
            Graph::new(5).unwrap().diameter(),
            Err(GraphError::Disconnected)
        );

        let mut g = Graph::new(2).unwrap();
        assert_eq!(g.add_edge(0, 1), Ok(true));
        assert_eq!(g.add_edge(1, 0), Ok(false));
        assert_eq!(g.edge_count(), 1);
        assert!(g.is_connected());
        assert_eq!(g.add_edge(0, 0), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            g.add_edge(0, 2),
            Err(GraphError::OutOfRange { node: 2, n: 2 })
        );
    }

    #[test]
    fn distances() {
        let p4 = path(4);
        assert_eq!(p4.distance(0, 3), Ok(Some(3)));
        assert_eq!(p4.distance(2, 2), Ok(Some(0)));
        assert_eq!(p4.diameter(), Ok(3));
        assert_eq!(complete(3).distance(0, 2), Ok(Some(1)));
        assert_eq!(complete(5).diameter(), Ok(1));
        assert_eq!(Graph::new(2).unwrap().distance(0, 1), Ok(None));
    }

    #[test]
    fn laplacian_small() {
        let l = path(2).laplacian();
        assert_eq!(l.row(0), &[1.0, -1.0]);
        assert_eq!(l.row(1), &[-1.0, 1.0]);
        let l = complete(3).laplacian();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(l[(i, j)], if i == j { 2.0 } else { -1.0 });
            }
        }
    }

    #[test]
    fn non_edges_small() {
        assert!(complete(3).non_edges().is_empty());
        assert_eq!(path(3).non_edges(), vec![(0, 2)]);
        assert_eq!(Graph::new(3).unwrap().non_edges().len(), 3);
    }

    #[test]
    fn dot_output() {
        assert!(path(2).to_dot(None, None).contains("0 -- 1"));
        let leaders = LeaderSet::new(vec![0], 2).unwrap();
        let dot = path(2).to_dot(None, Some(&leaders));
        assert!(dot.contains("0 [style=filled"));
        let dot = Graph::new(3).unwrap().to_dot(None, None);
        assert!(dot.contains("  2;") && !dot.contains("--"));
    }

    #[test]
    fn edge_list_parsing() {
        let g = Graph::from_edges(5, [(0, 1), (3, 1)]).unwrap();
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()), Ok(g));
        let g = Graph::parse_edge_list("0 1\n\n1 2\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert!(matches!(
            Graph::parse_edge_list("0 1 2"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::parse_edge_list("0 x"),
            Err(GraphError::Parse { .. })
        ));
    }

    #[test]
    fn leader_set_validation() {
        assert_eq!(LeaderSet::new(vec![], 3), Err(GraphError::NoLeaders));
        assert_eq!(
            LeaderSet::new(vec![1, 1], 3),
            Err(GraphError::DuplicateLeader(1))
        );
        assert_eq!(
            LeaderSet::new(vec![3], 3),
            Err(GraphError::OutOfRange { node: 3, n: 3 })
        );
        assert_eq!(LeaderSet::new(vec![2, 0], 3).unwrap().as_slice(), &[2, 0]);
    }
}
