//! Simple undirected graphs and the plain-text edge-list format.
//!
//! Vertices are compacted to `0..n` internally. The original labels from the
//! input file are retained so reports and state files can speak the caller's
//! vocabulary.
//!
//! Every edge `{u, v}` gives rise to two directed arcs `(u, v)` and `(v, u)`.
//! Arcs are laid out in CSR order: all arcs leaving vertex 0 (sorted by
//! target), then vertex 1, and so on.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// An undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<u64>,
    index: HashMap<u64, usize>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    arc_offsets: Vec<usize>,
}

impl Graph {
    /// Builds a graph on vertices `0..n` with labels equal to the indices.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels: Vec<u64> = (0..n as u64).collect();
        Self::build(labels, edges)
    }

    fn build(labels: Vec<u64>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u as u64));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v as u64));
            }
            if u == v {
                return Err(Error::SelfLoop(labels[u]));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(labels[u], labels[v]));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let mut arc_offsets = Vec::with_capacity(n + 1);
        arc_offsets.push(0);
        for nbrs in &adjacency {
            arc_offsets.push(arc_offsets.last().unwrap() + nbrs.len());
        }
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Ok(Graph {
            labels,
            index,
            adjacency,
            edges: seen.into_iter().collect(),
            arc_offsets,
        })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Original label of vertex `v`.
    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Internal index of an original label.
    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.index.get(&label).copied()
    }

    /// Number of directed arcs, `2m`.
    pub fn arc_count(&self) -> usize {
        2 * self.edges.len()
    }

    /// Range of arc indices leaving `v`; position `k` in the range is the
    /// arc towards `neighbors(v)[k]`.
    pub fn arcs_from(&self, v: usize) -> std::ops::Range<usize> {
        self.arc_offsets[v]..self.arc_offsets[v + 1]
    }

    /// Index of arc `(u, v)` if `{u, v}` is an edge.
    pub fn arc_index(&self, u: usize, v: usize) -> Option<usize> {
        self.adjacency[u]
            .binary_search(&v)
            .ok()
            .map(|k| self.arc_offsets[u] + k)
    }

    /// All arcs as `(from, to)` in index order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().map(move |&v| (u, v)))
    }

    /// Renders the graph in the edge-list format, using original labels.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# n={} m={}", self.n(), self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }

    /// Maps original labels to internal indices.
    pub fn resolve(&self, labels: &[u64]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|&l| self.index_of(l).ok_or(Error::UnknownVertex(l)))
            .collect()
    }
}

/// Builds a graph from labelled pairs. Labels are compacted to `0..n` in
/// ascending label order, so index order and label order agree.
pub fn load_graph(pairs: &[(u64, u64)]) -> Result<Graph> {
    if let Some(&(u, _)) = pairs.iter().find(|(u, v)| u == v) {
        return Err(Error::SelfLoop(u));
    }
    let mut labels: Vec<u64> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
    labels.sort_unstable();
    labels.dedup();
    let index: HashMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let edges: Vec<(usize, usize)> = pairs.iter().map(|(u, v)| (index[u], index[v])).collect();
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Graph::build(labels, &edges)
}

/// Parses the edge-list text format: two non-negative integers per line,
/// `#` starts a comment line, blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Vec<(u64, u64)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next = || -> Result<u64> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: lineno + 1,
                msg: "expected two vertex labels".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("invalid vertex label {tok:?}"),
            })
        };
        let u = next()?;
        let v = next()?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: "trailing fields".into(),
            });
        }
        pairs.push((u, v));
    }
    Ok(pairs)
}

/// Parses a marked-set file: one vertex label per line, `#` comments allowed.
pub fn parse_marked_list(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = line.parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            msg: format!("invalid vertex label {line:?}"),
        })?;
        out.push(v);
    }
    Ok(out)
}

/// Renders a marked set (internal indices) as a line-per-vertex file.
pub fn marked_to_text(g: &Graph, marked: &[usize]) -> String {
    let mut out = String::new();
    for &v in marked {
        let _ = writeln!(out, "{}", g.label(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = load_graph(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert_eq!(g.arc_count(), 6);
    }

    #[test]
    fn counterexample_shape() {
        // m1=10, m2=11, u1=20, u2=21, u3=22
        let g = load_graph(&[(10, 11), (20, 10), (21, 11), (22, 11), (21, 22)]).unwrap();
        assert_eq!((g.n(), g.m()), (5, 5));
        assert_eq!(g.labels(), &[10, 11, 20, 21, 22]);
        assert_eq!(g.degree(g.index_of(11).unwrap()), 3);
    }

    #[test]
    fn indices_follow_label_order() {
        let g = load_graph(&[(40, 7), (7, 3), (3, 40)]).unwrap();
        assert_eq!(g.labels(), &[3, 7, 40]);
        assert_eq!(g.index_of(40), Some(2));
    }

    #[test]
    fn rejects_self_loop() {
        assert_eq!(load_graph(&[(0, 1), (1, 1)]), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn rejects_duplicate() {
        assert_eq!(
            load_graph(&[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(1, 0))
        );
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(load_graph(&[]), Err(Error::EmptyGraph));
    }

    #[test]
    fn arc_layout() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        for (k, (u, v)) in g.arcs().enumerate() {
            assert_eq!(g.arc_index(u, v), Some(k));
        }
        assert_eq!(g.arc_index(0, 2), None);
        assert_eq!(g.arcs_from(1), 2..4);
    }

    #[test]
    fn parse_formats() {
        let text = "# header\n0 1\n\n  1 2 \n# tail\n";
        assert_eq!(parse_edge_list(text).unwrap(), vec![(0, 1), (1, 2)]);
        assert!(matches!(
            parse_edge_list("0 1\n2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_edge_list("0 1 2\n").is_err());
        assert_eq!(parse_marked_list("3\n# c\n4\n").unwrap(), vec![3, 4]);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = load_graph(&[(7, 3), (3, 9), (9, 7), (9, 12)]).unwrap();
        let back = load_graph(&parse_edge_list(&g.to_edge_list()).unwrap()).unwrap();
        assert_eq!(back.m(), g.m());
        for &(u, v) in g.edges() {
            let (lu, lv) = (g.label(u), g.label(v));
            let (bu, bv) = (back.index_of(lu).unwrap(), back.index_of(lv).unwrap());
            assert!(back.has_edge(bu, bv));
        }
    }
}
