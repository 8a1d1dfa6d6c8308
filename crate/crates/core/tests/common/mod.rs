//! Test-only oracles shared by the integration suites.
//!
//! Nothing in here goes through the construction pipeline: graphs are
//! enumerated from scratch and stationarity is decided by a dense SVD of
//! `U' − I` restricted to the structural ansatz.

#![allow(dead_code)]

use std::collections::HashSet;

use nalgebra::DMatrix;
use qwalk_core::{
    analyze_marked, decompose_unmarked, gen_complete, gen_counterexample, gen_cycle, gen_path,
    gen_random_connected, gen_star, gen_two_component, gen_zero_overlap, Graph, MarkedAnalysis,
    UnmarkedDecomposition, WalkOperator,
};

/// Singular values below `RANK_TOL · max(1, σ_max)` count as zero.
pub const RANK_TOL: f64 = 1e-9;

fn pair_bit(i: usize, j: usize) -> u32 {
    let (a, b) = (i.min(j), i.max(j));
    1 << (b * (b - 1) / 2 + a)
}

fn code_under(adj: &[u8], perm: &[usize]) -> u32 {
    let n = adj.len();
    let mut code = 0;
    for u in 0..n {
        for v in u + 1..n {
            if adj[u] >> v & 1 == 1 {
                code |= pair_bit(perm[u], perm[v]);
            }
        }
    }
    code
}

/// Smallest edge code over all relabellings that list vertices by
/// non-decreasing degree.
fn canonical_code(adj: &[u8]) -> u32 {
    let n = adj.len();
    let deg: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| deg[v]);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if deg[c[0]] == deg[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }

    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let x = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    let class_perms: Vec<Vec<Vec<usize>>> = classes.iter().map(|c| permutations(c)).collect();
    let mut best = u32::MAX;
    let mut choice = vec![0usize; classes.len()];
    let mut perm = vec![0usize; n];
    loop {
        let mut pos = 0;
        for (ci, perms) in class_perms.iter().enumerate() {
            for &v in &perms[choice[ci]] {
                perm[v] = pos;
                pos += 1;
            }
        }
        best = best.min(code_under(adj, &perm));
        let mut k = 0;
        loop {
            if k == choice.len() {
                return best;
            }
            choice[k] += 1;
            if choice[k] < class_perms[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn decode(n: usize, code: u32) -> Vec<u8> {
    let mut adj = vec![0u8; n];
    for v in 1..n {
        for u in 0..v {
            if code & pair_bit(u, v) != 0 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
    }
    adj
}

fn to_graph(adj: &[u8]) -> Graph {
    let n = adj.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| {
            (u + 1..n)
                .filter(move |&v| adj[u] >> v & 1 == 1)
                .map(move |v| (u, v))
        })
        .collect();
    Graph::new(n, &edges).unwrap()
}

/// All connected graphs on `2..=max_n` vertices, one per isomorphism class.
///
/// Every connected graph has a vertex whose removal leaves it connected, so
/// each class on `n` vertices arises by attaching a new vertex to a class on
/// `n − 1` vertices.
pub fn connected_graphs(max_n: usize) -> Vec<Vec<Graph>> {
    assert!(max_n <= 8);
    let mut levels: Vec<Vec<u32>> = vec![vec![], vec![0]];
    for n in 2..=max_n {
        let mut seen = HashSet::new();
        let mut level = Vec::new();
        for &code in &levels[n - 1] {
            let base = decode(n - 1, code);
            for subset in 1u16..(1 << (n - 1)) {
                let mut adj = base.clone();
                adj.push(0);
                for u in 0..n - 1 {
                    if subset >> u & 1 == 1 {
                        adj[u] |= 1 << (n - 1);
                        adj[n - 1] |= 1 << u;
                    }
                }
                let c = canonical_code(&adj);
                if seen.insert(c) {
                    level.push(c);
                }
            }
        }
        levels.push(level);
    }
    levels
        .iter()
        .enumerate()
        .map(|(n, codes)| {
            if n < 2 {
                Vec::new()
            } else {
                codes.iter().map(|&c| to_graph(&decode(n, c))).collect()
            }
        })
        .collect()
}

/// Every nonempty proper vertex subset of `g`, as a sorted list.
pub fn proper_subsets(g: &Graph) -> impl Iterator<Item = Vec<usize>> + '_ {
    let n = g.n();
    (1u32..(1 << n) - 1).map(move |mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
}

/// Columns spanning the structural ansatz: one per unmarked component (1 on
/// every arc touching it), one per marked edge (1 on both of its arcs).
pub fn ansatz_basis(g: &Graph, ma: &MarkedAnalysis, ud: &UnmarkedDecomposition) -> DMatrix<f64> {
    let edges: Vec<(usize, usize)> = ma.marked_edges(g).collect();
    let r = ud.len();
    let mut p = DMatrix::zeros(g.arc_count(), r + edges.len());
    for (k, (u, v)) in g.arcs().enumerate() {
        let comp = ud.component_of(u).or(ud.component_of(v));
        match comp {
            Some(i) => p[(k, i)] = 1.0,
            None => {
                let e = (u.min(v), u.max(v));
                let j = edges.iter().position(|&x| x == e).unwrap();
                p[(k, r + j)] = 1.0;
            }
        }
    }
    p
}

fn rank(m: &DMatrix<f64>) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let cutoff = RANK_TOL * sv.max().max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Whether `U'` has a fixed point inside the structural ansatz with some
/// nonzero unmarked amplitude, decided by dense linear algebra.
///
/// Null vectors with all unmarked amplitudes zero are circulations inside
/// `M`; they exist exactly when the marked-edge block alone is rank
/// deficient, so the answer is `nullity(N) > nullity(N_marked)`.
pub fn ansatz_has_fixed_point(g: &Graph, marked: &[usize]) -> bool {
    let ma = analyze_marked(g, marked).unwrap();
    let ud = decompose_unmarked(g, &ma);
    let op = WalkOperator::new(g, &ma.marked).unwrap();
    let u = op.dense_matrix().unwrap();
    let dim = g.arc_count();
    let p = ansatz_basis(g, &ma, &ud);
    let n_full = (u - DMatrix::<f64>::identity(dim, dim)) * &p;
    let r = ud.len();
    let n_marked = n_full.columns(r, n_full.ncols() - r).into_owned();
    let nullity_full = n_full.ncols() - rank(&n_full);
    let nullity_marked = n_marked.ncols() - rank(&n_marked);
    nullity_full > nullity_marked
}

/// Named instances used across the suites.
pub fn corpus() -> Vec<(String, Graph, Vec<usize>)> {
    let mut out: Vec<(String, Graph, Vec<usize>)> = Vec::new();
    let mut push =
        |name: &str, inst: (Graph, Vec<usize>)| out.push((name.to_string(), inst.0, inst.1));
    push("counterexample", gen_counterexample());
    push("zero_overlap", gen_zero_overlap());
    push("C6_pair", gen_cycle(6, 2).unwrap());
    push("C20_pair", gen_cycle(20, 2).unwrap());
    push("C50_pair", gen_cycle(50, 2).unwrap());
    push("C100_pair", gen_cycle(100, 2).unwrap());
    push("C9_span3", gen_cycle(9, 3).unwrap());
    push("C4_single", gen_cycle(4, 1).unwrap());
    push("K4_triangle", gen_complete(4, 3).unwrap());
    push("K6_pair", gen_complete(6, 2).unwrap());
    push("K7_triangle", gen_complete(7, 3).unwrap());
    push("star8", gen_star(8).unwrap());
    push("P4_middle", gen_path(4, 1, 2).unwrap());
    push("P7_span3", gen_path(7, 2, 3).unwrap());
    for seed in 0..4 {
        push(
            &format!("two_component_s{seed}"),
            gen_two_component([4, 5], [[2, 1], [1, 3]], 3, seed).unwrap(),
        );
        push(
            &format!("random_s{seed}"),
            gen_random_connected(10, 6, 3, seed).unwrap(),
        );
    }
    out
}
