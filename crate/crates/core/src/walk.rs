//! Coined quantum walk with a marked-vertex query.
//!
//! One step is `U' = S · C · Q` acting on arc amplitudes:
//!
//! * `Q` negates every arc leaving a marked vertex,
//! * `C` applies the Grover diffusion `x ↦ 2·mean(x) − x` to the outgoing
//!   arcs of each vertex,
//! * `S` is the flip-flop shift, swapping the amplitudes of `(u, v)` and
//!   `(v, u)`.
//!
//! At a marked vertex `Q` followed by `C` is the negated diffusion
//! `x ↦ x − 2·mean(x)`. A vector is then fixed by `U'` exactly when it is
//! arc-symmetric, constant on the arcs around each unmarked vertex, and sums
//! to zero on the arcs leaving each marked vertex.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph for which [`WalkOperator::dense_matrix`] will build `U'`.
pub const DENSE_VERTEX_LIMIT: usize = 12;

/// Amplitudes indexed by directed arc, in the graph's CSR arc order.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcState {
    pub amplitudes: Vec<Complex64>,
}

impl ArcState {
    pub fn zeros(len: usize) -> Self {
        ArcState {
            amplitudes: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn from_real(values: &[f64]) -> Self {
        ArcState {
            amplitudes: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        self.amplitudes.iter_mut().for_each(|z| *z *= factor);
    }

    /// Amplitude on arc `(u, v)`, if that arc exists.
    pub fn amplitude(&self, g: &Graph, u: usize, v: usize) -> Option<Complex64> {
        g.arc_index(u, v).map(|k| self.amplitudes[k])
    }

    /// Real parts, for states known to be real.
    pub fn real_parts(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.re).collect()
    }

    /// Writes the state as CSV (`from,to,amplitude`) with 17 significant
    /// digits, using the graph's original labels. Imaginary parts are
    /// appended as a fourth column only when some amplitude is complex.
    pub fn to_csv(&self, g: &Graph) -> String {
        let complex = self.amplitudes.iter().any(|z| z.im != 0.0);
        let mut out = String::from(if complex {
            "from,to,amplitude,imag\n"
        } else {
            "from,to,amplitude\n"
        });
        for ((u, v), z) in g.arcs().zip(&self.amplitudes) {
            let _ = write!(out, "{},{},{:.16e}", g.label(u), g.label(v), z.re);
            if complex {
                let _ = write!(out, ",{:.16e}", z.im);
            }
            out.push('\n');
        }
        out
    }
}

/// `1/√(2m)` on every arc.
pub fn uniform_state(g: &Graph) -> Result<ArcState> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let amp = 1.0 / (g.arc_count() as f64).sqrt();
    Ok(ArcState::from_real(&vec![amp; g.arc_count()]))
}

/// The perturbed walk operator `U'` for a graph and marked set. Applied
/// matrix-free.
#[derive(Debug, Clone)]
pub struct WalkOperator<'g> {
    graph: &'g Graph,
    marked: Vec<bool>,
    reverse: Vec<usize>,
}

impl<'g> WalkOperator<'g> {
    /// `marked` may be empty, in which case `Q` is the identity.
    pub fn new(graph: &'g Graph, marked: &[usize]) -> Result<Self> {
        let mut flags = vec![false; graph.n()];
        for &v in marked {
            if v >= graph.n() {
                return Err(Error::UnknownVertex(v as u64));
            }
            flags[v] = true;
        }
        let reverse = graph
            .arcs()
            .map(|(u, v)| graph.arc_index(v, u).expect("adjacency is symmetric"))
            .collect();
        Ok(WalkOperator {
            graph,
            marked: flags,
            reverse,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.marked[v]
    }

    fn check_dim(&self, x: &ArcState) -> Result<()> {
        if x.len() != self.graph.arc_count() {
            return Err(Error::LengthMismatch {
                expected: self.graph.arc_count(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// One step `S · C · Q`, written into `out`.
    pub fn apply_into(&self, x: &ArcState, out: &mut ArcState) -> Result<()> {
        self.check_dim(x)?;
        self.check_dim(out)?;
        let g = self.graph;
        for v in 0..g.n() {
            let arcs = g.arcs_from(v);
            let deg = arcs.len() as f64;
            let mean: Complex64 = x.amplitudes[arcs.clone()].iter().sum::<Complex64>() / deg;
            let sign = if self.marked[v] { -1.0 } else { 1.0 };
            for a in arcs {
                out.amplitudes[self.reverse[a]] = (2.0 * mean - x.amplitudes[a]) * sign;
            }
        }
        Ok(())
    }

    /// One step of the walk.
    pub fn apply_step(&self, x: &ArcState) -> Result<ArcState> {
        let mut out = ArcState::zeros(x.len());
        self.apply_into(x, &mut out)?;
        Ok(out)
    }

    /// Probability mass on arcs leaving marked vertices.
    pub fn marked_mass(&self, x: &ArcState) -> f64 {
        (0..self.graph.n())
            .filter(|&v| self.marked[v])
            .flat_map(|v| self.graph.arcs_from(v))
            .map(|a| x.amplitudes[a].norm_sqr())
            .sum()
    }

    /// Builds `U'` densely as the product of separately assembled `S`, `C`
    /// and `Q`. Intended for cross-checks on small graphs only.
    pub fn dense_matrix(&self) -> Result<DMatrix<f64>> {
        let g = self.graph;
        if g.n() > DENSE_VERTEX_LIMIT {
            return Err(Error::TooLargeForDense {
                n: g.n(),
                limit: DENSE_VERTEX_LIMIT,
            });
        }
        let dim = g.arc_count();
        let mut shift = DMatrix::zeros(dim, dim);
        for (u, v) in g.arcs() {
            shift[(g.arc_index(v, u).unwrap(), g.arc_index(u, v).unwrap())] = 1.0;
        }
        let mut coin = DMatrix::zeros(dim, dim);
        let mut query = DMatrix::identity(dim, dim);
        for v in 0..g.n() {
            let arcs = g.arcs_from(v);
            let d = arcs.len() as f64;
            for i in arcs.clone() {
                for j in arcs.clone() {
                    coin[(i, j)] = 2.0 / d - if i == j { 1.0 } else { 0.0 };
                }
                if self.marked[v] {
                    query[(i, i)] = -1.0;
                }
            }
        }
        Ok(shift * coin * query)
    }
}

/// `p_M(t)` for `t = 0..=T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionTrace {
    pub p_series: Vec<f64>,
    pub max_p: f64,
    pub argmax_t: usize,
}

impl EvolutionTrace {
    /// CSV with columns `t,p_M`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,p_M\n");
        for (t, p) in self.p_series.iter().enumerate() {
            let _ = writeln!(out, "{t},{p:.16e}");
        }
        out
    }
}

/// Relative norm drift tolerated during [`simulate`].
pub const NORM_DRIFT_TOL: f64 = 1e-9;

/// Evolves `x0` for `steps` applications of `U'`, recording the probability
/// of measuring a marked vertex after each step (relative to `‖x0‖²`).
pub fn simulate(op: &WalkOperator<'_>, x0: &ArcState, steps: usize) -> Result<EvolutionTrace> {
    op.check_dim(x0)?;
    let norm0 = x0.norm_sqr();
    if norm0 == 0.0 {
        return Err(Error::ZeroState);
    }
    let root0 = norm0.sqrt();
    let mut cur = x0.clone();
    let mut next = ArcState::zeros(x0.len());
    let mut p_series = Vec::with_capacity(steps + 1);
    p_series.push(op.marked_mass(&cur) / norm0);
    for t in 1..=steps {
        op.apply_into(&cur, &mut next)?;
        std::mem::swap(&mut cur, &mut next);
        let drift = (cur.norm() - root0).abs() / root0;
        if drift > NORM_DRIFT_TOL {
            return Err(Error::NormDrift { step: t, drift });
        }
        p_series.push(op.marked_mass(&cur) / norm0);
    }
    let (argmax_t, max_p) =
        p_series
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (t, p)| {
                if p > best.1 {
                    (t, p)
                } else {
                    best
                }
            });
    Ok(EvolutionTrace {
        p_series,
        max_p,
        argmax_t,
    })
}

/// `‖U'x − x‖ / ‖x‖`.
pub fn check_stationary(op: &WalkOperator<'_>, x: &ArcState) -> Result<f64> {
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::ZeroState);
    }
    let y = op.apply_step(x)?;
    let diff: f64 = y
        .amplitudes
        .iter()
        .zip(&x.amplitudes)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok(diff.sqrt() / norm)
}

/// Probability of measuring each vertex, `Σ_c |ψ(v, c)|²`.
pub fn vertex_probabilities(g: &Graph, x: &ArcState) -> Vec<f64> {
    (0..g.n())
        .map(|v| g.arcs_from(v).map(|a| x.amplitudes[a].norm_sqr()).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_counterexample, gen_cycle};

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn uniform_amplitudes() {
        let tri = Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let u = uniform_state(&tri).unwrap();
        assert!(u
            .amplitudes
            .iter()
            .all(|z| (z.re - 1.0 / 6f64.sqrt()).abs() < 1e-15));
        let (c50, _) = gen_cycle(50, 2).unwrap();
        let u = uniform_state(&c50).unwrap();
        assert!(u.amplitudes.iter().all(|z| (z.re - 0.1).abs() < 1e-15));
        assert!((u.norm() - 1.0).abs() < 1e-14);
        let (gs, _) = gen_counterexample();
        assert_eq!(uniform_state(&gs).unwrap().len(), 10);
    }

    #[test]
    fn path_single_step() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let op = WalkOperator::new(&g, &[0]).unwrap();
        let out = op.apply_step(&ArcState::from_real(&[S, S])).unwrap();
        assert_eq!(out.real_parts(), vec![S, -S]);
    }

    #[test]
    fn unmarked_uniform_is_fixed() {
        let (g, _) = gen_cycle(7, 1).unwrap();
        let op = WalkOperator::new(&g, &[]).unwrap();
        let u = uniform_state(&g).unwrap();
        assert!(check_stationary(&op, &u).unwrap() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let (g, m) = gen_cycle(5, 1).unwrap();
        let op = WalkOperator::new(&g, &m).unwrap();
        assert!(matches!(
            op.apply_step(&ArcState::zeros(3)),
            Err(Error::LengthMismatch {
                expected: 10,
                got: 3
            })
        ));
    }

    #[test]
    fn zero_steps() {
        let (g, m) = gen_cycle(50, 2).unwrap();
        let op = WalkOperator::new(&g, &m).unwrap();
        let tr = simulate(&op, &uniform_state(&g).unwrap(), 0).unwrap();
        assert_eq!(tr.p_series.len(), 1);
        assert!((tr.p_series[0] - 0.04).abs() < 1e-15);
    }

    #[test]
    fn dense_matches_matrix_free() {
        let (g, m) = gen_counterexample();
        let op = WalkOperator::new(&g, &m).unwrap();
        let u = op.dense_matrix().unwrap();
        let x: Vec<f64> = (0..g.arc_count()).map(|k| (k as f64 * 0.7).sin()).collect();
        let y = op
            .apply_step(&ArcState::from_real(&x))
            .unwrap()
            .real_parts();
        let yd = &u * nalgebra::DVector::from_vec(x);
        for (a, b) in y.iter().zip(yd.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn dense_refuses_large() {
        let (g, m) = gen_cycle(13, 1).unwrap();
        let op = WalkOperator::new(&g, &m).unwrap();
        assert!(matches!(
            op.dense_matrix(),
            Err(Error::TooLargeForDense { .. })
        ));
    }

    #[test]
    fn shift_is_involution() {
        let (g, m) = gen_cycle(6, 2).unwrap();
        let op = WalkOperator::new(&g, &m).unwrap();
        for a in 0..g.arc_count() {
            assert_eq!(op.reverse[op.reverse[a]], a);
        }
    }

    #[test]
    fn csv_shapes() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let csv = ArcState::from_real(&[0.5, -0.25]).to_csv(&g);
        assert_eq!(
            csv,
            "from,to,amplitude\n0,1,5.0000000000000000e-1\n1,0,-2.5000000000000000e-1\n"
        );
        let tr = EvolutionTrace {
            p_series: vec![0.5, 0.25],
            max_p: 0.5,
            argmax_t: 0,
        };
        assert_eq!(tr.to_csv().lines().count(), 3);
    }
}
