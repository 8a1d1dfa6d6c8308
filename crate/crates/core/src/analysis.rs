//! Combinatorics of the marked component and of the unmarked remainder.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Which side of the marked bipartition a marked vertex lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    First,
    Second,
}

/// Structure of the marked set `M` inside `G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkedAnalysis {
    /// Sorted marked vertices.
    pub marked: Vec<usize>,
    pub bipartite: bool,
    /// `M1`; contains the lowest marked vertex. Empty when not bipartite.
    pub part1: Vec<usize>,
    /// `M2`. Empty when not bipartite.
    pub part2: Vec<usize>,
    /// `|E_M|`, edges with both endpoints marked.
    pub internal_edges: usize,
    /// `D^M̄`, edges between a marked and an unmarked vertex.
    pub boundary_edges: usize,
    /// `deg_G(M1)`.
    pub degsum1: usize,
    /// `deg_G(M2)`.
    pub degsum2: usize,
    #[serde(skip)]
    is_marked: Vec<bool>,
    #[serde(skip)]
    side: Vec<Option<Side>>,
}

impl MarkedAnalysis {
    pub fn is_marked(&self, v: usize) -> bool {
        self.is_marked[v]
    }

    /// Bipartition side of a marked vertex; `None` for unmarked vertices or a
    /// non-bipartite `M`.
    pub fn side(&self, v: usize) -> Option<Side> {
        self.side[v]
    }

    /// Edges inside `M`, `(u, v)` with `u < v`, in the graph's edge order.
    pub fn marked_edges<'g>(&'g self, g: &'g Graph) -> impl Iterator<Item = (usize, usize)> + 'g {
        g.edges()
            .iter()
            .copied()
            .filter(move |&(u, v)| self.is_marked[u] && self.is_marked[v])
    }

    /// `2m − 2|E_M| − D^M̄`, the number of arcs incident to unmarked vertices.
    pub fn unmarked_arc_count(&self, m: usize) -> usize {
        2 * m - 2 * self.internal_edges - self.boundary_edges
    }
}

/// Validates `marked` and computes its bipartition and edge counts.
///
/// The bipartition is a BFS 2-colouring of the induced subgraph seeded at
/// the lowest-labelled marked vertex, which always lands in `M1`.
pub fn analyze_marked(g: &Graph, marked: &[usize]) -> Result<MarkedAnalysis> {
    let n = g.n();
    let set: BTreeSet<usize> = marked.iter().copied().collect();
    if let Some(&v) = set.iter().find(|&&v| v >= n) {
        return Err(Error::UnknownVertex(v as u64));
    }
    if set.is_empty() {
        return Err(Error::EmptyMarked);
    }
    if set.len() == n {
        return Err(Error::AllMarked);
    }
    let marked: Vec<usize> = set.into_iter().collect();
    let mut is_marked = vec![false; n];
    for &v in &marked {
        is_marked[v] = true;
    }

    // 2-colour the induced subgraph; colour doubles as the visited marker.
    let mut colour: Vec<Option<Side>> = vec![None; n];
    let mut bipartite = true;
    let mut queue = VecDeque::from([marked[0]]);
    colour[marked[0]] = Some(Side::First);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        let cu = colour[u].unwrap();
        for &w in g.neighbors(u) {
            if !is_marked[w] {
                continue;
            }
            match colour[w] {
                None => {
                    colour[w] = Some(match cu {
                        Side::First => Side::Second,
                        Side::Second => Side::First,
                    });
                    reached += 1;
                    queue.push_back(w);
                }
                Some(cw) if cw == cu => bipartite = false,
                Some(_) => {}
            }
        }
    }
    if reached != marked.len() {
        return Err(Error::DisconnectedMarked);
    }

    let mut internal_edges = 0;
    let mut boundary_edges = 0;
    for &(u, v) in g.edges() {
        match (is_marked[u], is_marked[v]) {
            (true, true) => internal_edges += 1,
            (true, false) | (false, true) => boundary_edges += 1,
            _ => {}
        }
    }

    let (mut part1, mut part2) = (Vec::new(), Vec::new());
    let (mut degsum1, mut degsum2) = (0, 0);
    if bipartite {
        for &v in &marked {
            match colour[v] {
                Some(Side::First) => {
                    part1.push(v);
                    degsum1 += g.degree(v);
                }
                _ => {
                    part2.push(v);
                    degsum2 += g.degree(v);
                }
            }
        }
    } else {
        colour.iter_mut().for_each(|c| *c = None);
    }

    Ok(MarkedAnalysis {
        marked,
        bipartite,
        part1,
        part2,
        internal_edges,
        boundary_edges,
        degsum1,
        degsum2,
        is_marked,
        side: colour,
    })
}

/// Edges from one unmarked component to `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// `M` bipartite: edges to `M1` and to `M2` (`k_i1`, `k_i2`).
    Split { to_part1: usize, to_part2: usize },
    /// `M` not bipartite: total edges to `M` (`k_i`).
    Total(usize),
}

impl Boundary {
    pub fn total(&self) -> usize {
        match *self {
            Boundary::Split { to_part1, to_part2 } => to_part1 + to_part2,
            Boundary::Total(k) => k,
        }
    }

    /// `k_i1 − k_i2`, the coefficient of this component's amplitude in the
    /// balance constraint. Zero when `M` is not bipartite.
    pub fn imbalance(&self) -> f64 {
        match *self {
            Boundary::Split { to_part1, to_part2 } => to_part1 as f64 - to_part2 as f64,
            Boundary::Total(_) => 0.0,
        }
    }
}

/// A connected component `H_i` of the subgraph induced by `V ∖ M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnmarkedComponent {
    /// Sorted vertices.
    pub vertices: Vec<usize>,
    /// `|E_i|`.
    pub internal_edges: usize,
    pub boundary: Boundary,
}

impl UnmarkedComponent {
    /// Number of arcs leaving vertices of this component,
    /// `2|E_i| + k_i1 + k_i2`.
    pub fn out_arcs(&self) -> usize {
        2 * self.internal_edges + self.boundary.total()
    }

    /// Number of arcs with at least one endpoint in this component,
    /// `2(|E_i| + k_i1 + k_i2)`.
    pub fn incident_arcs(&self) -> usize {
        2 * (self.internal_edges + self.boundary.total())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnmarkedDecomposition {
    /// Components ordered by their lowest vertex.
    pub components: Vec<UnmarkedComponent>,
    #[serde(skip)]
    component_of: Vec<Option<usize>>,
}

impl UnmarkedDecomposition {
    /// Number of components, `r`.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Component index of an unmarked vertex.
    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.component_of[v]
    }

    /// Balance-constraint coefficients `k_i1 − k_i2` per component.
    pub fn imbalances(&self) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.boundary.imbalance())
            .collect()
    }

    /// Per-component out-arc counts `2|E_i| + k_i1 + k_i2`.
    pub fn out_arc_weights(&self) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.out_arcs() as f64)
            .collect()
    }
}

/// Splits `V ∖ M` into connected components and counts their edges to each
/// side of `M`.
pub fn decompose_unmarked(g: &Graph, ma: &MarkedAnalysis) -> UnmarkedDecomposition {
    let n = g.n();
    let mut component_of: Vec<Option<usize>> = vec![None; n];
    let mut components = Vec::new();
    for start in 0..n {
        if ma.is_marked(start) || component_of[start].is_some() {
            continue;
        }
        let id = components.len();
        component_of[start] = Some(id);
        let mut vertices = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !ma.is_marked(w) && component_of[w].is_none() {
                    component_of[w] = Some(id);
                    vertices.push(w);
                    stack.push(w);
                }
            }
        }
        vertices.sort_unstable();
        components.push(vertices);
    }

    let r = components.len();
    let mut internal = vec![0usize; r];
    let mut k = vec![[0usize; 2]; r];
    for &(u, v) in g.edges() {
        match (component_of[u], component_of[v]) {
            (Some(i), Some(_)) => internal[i] += 1,
            (Some(i), None) => k[i][side_slot(ma, v)] += 1,
            (None, Some(i)) => k[i][side_slot(ma, u)] += 1,
            (None, None) => {}
        }
    }

    let components = components
        .into_iter()
        .enumerate()
        .map(|(i, vertices)| UnmarkedComponent {
            vertices,
            internal_edges: internal[i],
            boundary: if ma.bipartite {
                Boundary::Split {
                    to_part1: k[i][0],
                    to_part2: k[i][1],
                }
            } else {
                Boundary::Total(k[i][0])
            },
        })
        .collect();
    UnmarkedDecomposition {
        components,
        component_of,
    }
}

fn side_slot(ma: &MarkedAnalysis, v: usize) -> usize {
    match ma.side(v) {
        Some(Side::Second) => 1,
        _ => 0,
    }
}
