//! Witness graphs and standard test families.
//!
//! Every generator returns a graph on `0..n` together with its marked set.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Instance = (Graph, Vec<usize>);

/// Marked edge `m1–m2` with three unmarked vertices split into two
/// components: `u1` hangs off `m1`, the edge `u2–u3` hangs off `m2` twice.
///
/// Vertex indices: `m1=0, m2=1, u1=2, u2=3, u3=4`.
///
/// `M` is bipartite with degree sums 2 and 3, yet a stationary state exists
/// because `V ∖ M` is disconnected: `a = (2, 1)`, `c(m1,m2) = −2`.
pub fn gen_counterexample() -> Instance {
    let g =
        Graph::new(5, &[(0, 1), (2, 0), (3, 1), (4, 1), (3, 4)]).expect("fixed instance is simple");
    (g, vec![0, 1])
}

/// Two isomorphic unmarked components attached identically to a marked edge,
/// so the balance constraint forces `a1 = −a2` and the stationary state has
/// zero overlap with the uniform state.
///
/// Vertex indices: `m1=0, m2=1, u1=2, u2=3, u3=4, u4=5`. Components
/// `H1 = {u1, u2}`, `H2 = {u3, u4}`, each with one internal edge, two edges
/// to `m1` and one edge to `m2`.
pub fn gen_zero_overlap() -> Instance {
    let g = Graph::new(
        6,
        &[
            (0, 1),
            (2, 3),
            (4, 5),
            (2, 0),
            (4, 0),
            (3, 1),
            (5, 1),
            (3, 0),
            (5, 0),
        ],
    )
    .expect("fixed instance is simple");
    (g, vec![0, 1])
}

/// Cycle `C_n` with `span` consecutive marked vertices `0..span`.
pub fn gen_cycle(n: usize, span: usize) -> Result<Instance> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    if span == 0 || span >= n {
        return Err(Error::InvalidParameter(format!(
            "cycle span must be in 1..{n}, got {span}"
        )));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok((Graph::new(n, &edges)?, (0..span).collect()))
}

/// Path `P_n` with marked vertices `start..start+span`.
pub fn gen_path(n: usize, start: usize, span: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "path needs n >= 2, got {n}"
        )));
    }
    if span == 0 || start + span > n || span == n {
        return Err(Error::InvalidParameter(format!(
            "marked range {start}..{} does not fit a proper subset of P_{n}",
            start + span
        )));
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Ok((Graph::new(n, &edges)?, (start..start + span).collect()))
}

/// Complete graph `K_n` with marked vertices `0..k`.
pub fn gen_complete(n: usize, k: usize) -> Result<Instance> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "complete graph needs n >= 3, got {n}"
        )));
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "marked count must be in 1..{n}, got {k}"
        )));
    }
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Ok((Graph::new(n, &edges)?, (0..k).collect()))
}

/// Star on `n` vertices (centre 0 plus `n − 1` leaves) with the centre marked.
pub fn gen_star(n: usize) -> Result<Instance> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "star needs n >= 3, got {n}"
        )));
    }
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Ok((Graph::new(n, &edges)?, vec![0]))
}

/// Marked edge `m1=0 – m2=1` with two random connected unmarked components.
///
/// Component `i` has `sizes[i]` vertices, a random spanning tree plus up to
/// `extra_edges` further internal edges, and exactly `k[i][j]` edges to
/// `m_{j+1}`, each from a distinct vertex of the component.
pub fn gen_two_component(
    sizes: [usize; 2],
    k: [[usize; 2]; 2],
    extra_edges: usize,
    seed: u64,
) -> Result<Instance> {
    for i in 0..2 {
        if sizes[i] == 0 {
            return Err(Error::InvalidParameter(
                "component sizes must be positive".into(),
            ));
        }
        if k[i][0] + k[i][1] == 0 {
            return Err(Error::InvalidParameter(format!(
                "component {} must touch the marked set",
                i + 1
            )));
        }
        if k[i][0] > sizes[i] || k[i][1] > sizes[i] {
            return Err(Error::InvalidParameter(format!(
                "component {} has {} vertices, cannot host {:?} boundary edges",
                i + 1,
                sizes[i],
                k[i]
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = vec![(0, 1)];
    let mut offset = 2;
    for i in 0..2 {
        let block: Vec<usize> = (offset..offset + sizes[i]).collect();
        let mut internal = Vec::new();
        for j in 1..block.len() {
            let p = rng.random_range(0..j);
            internal.push((block[p], block[j]));
        }
        let max_extra = sizes[i] * (sizes[i] - 1) / 2 - internal.len();
        let mut budget = extra_edges.min(max_extra);
        while budget > 0 {
            let a = block[rng.random_range(0..block.len())];
            let b = block[rng.random_range(0..block.len())];
            let key = (a.min(b), a.max(b));
            if a != b && !internal.contains(&key) && !internal.contains(&(key.1, key.0)) {
                internal.push(key);
                budget -= 1;
            }
        }
        edges.extend(internal);
        for (j, &count) in k[i].iter().enumerate() {
            let mut hosts = block.clone();
            hosts.shuffle(&mut rng);
            edges.extend(hosts.into_iter().take(count).map(|h| (h, j)));
        }
        offset += sizes[i];
    }
    Ok((Graph::new(offset, &edges)?, vec![0, 1]))
}

/// Random connected graph on `n` vertices (spanning tree plus `extra_edges`
/// distinct chords) with a connected marked set of `marked` vertices grown
/// by BFS from a random seed vertex.
pub fn gen_random_connected(
    n: usize,
    extra_edges: usize,
    marked: usize,
    seed: u64,
) -> Result<Instance> {
    if n < 2 || marked == 0 || marked >= n {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2 and 1 <= marked < n, got n={n} marked={marked}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for j in 1..n {
        let (a, b) = (order[rng.random_range(0..j)], order[j]);
        present[a][b] = true;
        present[b][a] = true;
        edges.push((a, b));
    }
    let mut budget = extra_edges.min(n * (n - 1) / 2 - edges.len());
    while budget > 0 {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b && !present[a][b] {
            present[a][b] = true;
            present[b][a] = true;
            edges.push((a, b));
            budget -= 1;
        }
    }
    let g = Graph::new(n, &edges)?;

    let start = rng.random_range(0..n);
    let mut chosen = vec![start];
    let mut in_set = vec![false; n];
    in_set[start] = true;
    while chosen.len() < marked {
        let frontier: Vec<usize> = chosen
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().copied())
            .filter(|&w| !in_set[w])
            .collect();
        let w = frontier[rng.random_range(0..frontier.len())];
        in_set[w] = true;
        chosen.push(w);
    }
    chosen.sort_unstable();
    Ok((g, chosen))
}

/// Named generator invocation, as accepted by the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Counterexample,
    ZeroOverlap,
    Cycle {
        n: usize,
        span: usize,
    },
    Path {
        n: usize,
        start: usize,
        span: usize,
    },
    Complete {
        n: usize,
        k: usize,
    },
    Star {
        n: usize,
    },
    TwoComponent {
        sizes: [usize; 2],
        k: [[usize; 2]; 2],
        extra_edges: usize,
        seed: u64,
    },
    RandomConnected {
        n: usize,
        extra_edges: usize,
        marked: usize,
        seed: u64,
    },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Instance> {
        match *self {
            FamilySpec::Counterexample => Ok(gen_counterexample()),
            FamilySpec::ZeroOverlap => Ok(gen_zero_overlap()),
            FamilySpec::Cycle { n, span } => gen_cycle(n, span),
            FamilySpec::Path { n, start, span } => gen_path(n, start, span),
            FamilySpec::Complete { n, k } => gen_complete(n, k),
            FamilySpec::Star { n } => gen_star(n),
            FamilySpec::TwoComponent {
                sizes,
                k,
                extra_edges,
                seed,
            } => gen_two_component(sizes, k, extra_edges, seed),
            FamilySpec::RandomConnected {
                n,
                extra_edges,
                marked,
                seed,
            } => gen_random_connected(n, extra_edges, marked, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze_marked, decompose_unmarked, Boundary};

    #[test]
    fn zero_overlap_counts() {
        let (g, m) = gen_zero_overlap();
        let ma = analyze_marked(&g, &m).unwrap();
        let ud = decompose_unmarked(&g, &ma);
        assert_eq!(ud.len(), 2);
        for c in &ud.components {
            assert_eq!(c.internal_edges, 1);
            assert_eq!(
                c.boundary,
                Boundary::Split {
                    to_part1: 2,
                    to_part2: 1
                }
            );
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(gen_cycle(2, 1).is_err());
        assert!(gen_cycle(6, 6).is_err());
        assert!(gen_cycle(6, 0).is_err());
        assert!(gen_complete(4, 4).is_err());
        assert!(gen_star(2).is_err());
        assert!(gen_path(4, 3, 2).is_err());
        assert!(gen_two_component([1, 1], [[2, 0], [1, 0]], 0, 0).is_err());
        assert!(gen_two_component([2, 2], [[0, 0], [1, 0]], 0, 0).is_err());
    }

    #[test]
    fn two_component_counts_exact() {
        for seed in 0..20 {
            let (g, m) = gen_two_component([4, 3], [[2, 1], [0, 3]], 2, seed).unwrap();
            let ma = analyze_marked(&g, &m).unwrap();
            let ud = decompose_unmarked(&g, &ma);
            assert_eq!(ud.len(), 2);
            assert_eq!(ud.components[0].vertices.len(), 4);
            assert_eq!(
                ud.components[0].boundary,
                Boundary::Split {
                    to_part1: 2,
                    to_part2: 1
                }
            );
            assert_eq!(
                ud.components[1].boundary,
                Boundary::Split {
                    to_part1: 0,
                    to_part2: 3
                }
            );
        }
    }

    #[test]
    fn random_connected_is_valid() {
        for seed in 0..20 {
            let (g, m) = gen_random_connected(9, 5, 3, seed).unwrap();
            assert_eq!(g.m(), 8 + 5);
            assert!(analyze_marked(&g, &m).is_ok());
        }
    }

    #[test]
    fn fixed_instances_are_constant() {
        assert_eq!(gen_counterexample(), gen_counterexample());
        assert_eq!(gen_zero_overlap(), gen_zero_overlap());
        assert_eq!(
            FamilySpec::Cycle { n: 6, span: 2 }.generate().unwrap(),
            gen_cycle(6, 2).unwrap()
        );
    }
}
