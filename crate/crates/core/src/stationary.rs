//! Existence and construction of stationary states.
//!
//! A stationary state is built in three layers:
//!
//! 1. one real amplitude `a_i` per unmarked component `H_i`, shared by every
//!    arc touching `H_i`, chosen so the shortages on the two sides of a
//!    bipartite `M` balance: `Σ_i (k_i1 − k_i2)·a_i = 0`;
//! 2. the shortage of each marked vertex, the sum of `a` over its unmarked
//!    neighbours;
//! 3. amplitudes `c_e` on the edges inside `M` that cancel every shortage,
//!    taken as the minimum-norm solution of the unsigned incidence system.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::analysis::{MarkedAnalysis, Side, UnmarkedDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::walk::{check_stationary, ArcState, WalkOperator};

/// Tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for solver residuals and stationarity.
pub const SOLVER_TOL: f64 = 1e-10;

/// Why [`decide_existence`] reached its verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    /// `M` contains an odd cycle; shortages can always be neutralised.
    NonBipartiteM,
    /// `V ∖ M` connected and `deg_G(M1) = deg_G(M2)`.
    DegreeSumsEqual,
    /// `V ∖ M` has several components whose amplitudes can be balanced.
    DisconnectedUnmarked,
    /// `V ∖ M` connected and `deg_G(M1) ≠ deg_G(M2)`.
    NoSolutionConnectedCase,
}

impl Reason {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reason::NonBipartiteM => "NON_BIPARTITE_M",
            Reason::DegreeSumsEqual => "DEGREE_SUMS_EQUAL",
            Reason::DisconnectedUnmarked => "DISCONNECTED_UNMARKED",
            Reason::NoSolutionConnectedCase => "NO_SOLUTION_CONNECTED_CASE",
        }
    }
}

/// Decides whether a stationary state with nonzero unmarked amplitudes
/// exists.
pub fn decide_existence(ma: &MarkedAnalysis, ud: &UnmarkedDecomposition) -> (bool, Reason) {
    if !ma.bipartite {
        (true, Reason::NonBipartiteM)
    } else if ud.len() >= 2 {
        (true, Reason::DisconnectedUnmarked)
    } else if ma.degsum1 == ma.degsum2 {
        (true, Reason::DegreeSumsEqual)
    } else {
        (false, Reason::NoSolutionConnectedCase)
    }
}

/// How to pick among the balanced component amplitudes.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Objective {
    /// Unit-norm `a` maximising the overlap with the uniform state.
    #[default]
    MaxOverlap,
    /// The all-ones vector projected onto the balance hyperplane.
    Uniform,
    /// A caller-supplied vector, checked against the balance constraint.
    Custom(Vec<f64>),
}

/// Per-component unmarked amplitudes `a_1 … a_r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnmarkedAmplitudes {
    pub a: Vec<f64>,
    /// The objective's projection vanished and an arbitrary balanced vector
    /// was returned instead; its overlap with the uniform state is zero.
    pub zero_overlap_fallback: bool,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Orthogonal projection of `v` onto the hyperplane `{x : normal·x = 0}`.
fn project(v: &[f64], normal: &[f64]) -> Vec<f64> {
    let nn = dot(normal, normal);
    if nn == 0.0 {
        return v.to_vec();
    }
    let t = dot(v, normal) / nn;
    v.iter().zip(normal).map(|(x, n)| x - t * n).collect()
}

/// Deterministic unit vector orthogonal to `normal`: the normalised
/// projection of the coordinate axis that survives projection best.
fn hyperplane_vector(normal: &[f64]) -> Option<Vec<f64>> {
    let r = normal.len();
    let best = (0..r)
        .map(|j| {
            let mut e = vec![0.0; r];
            e[j] = 1.0;
            project(&e, normal)
        })
        .reduce(|best, x| if norm(&x) > norm(&best) { x } else { best })?;
    let len = norm(&best);
    (len > ALGEBRAIC_TOL).then(|| best.iter().map(|x| x / len).collect())
}

/// Chooses component amplitudes satisfying `Σ_i (k_i1 − k_i2)·a_i = 0`
/// (vacuous when `M` is not bipartite).
pub fn solve_component_amplitudes(
    ud: &UnmarkedDecomposition,
    ma: &MarkedAnalysis,
    objective: &Objective,
) -> Result<UnmarkedAmplitudes> {
    let r = ud.len();
    let normal = if ma.bipartite {
        ud.imbalances()
    } else {
        vec![0.0; r]
    };

    let project_or_fallback = |target: Vec<f64>, unit: bool| -> Result<UnmarkedAmplitudes> {
        let p = project(&target, &normal);
        let len = norm(&p);
        if len <= ALGEBRAIC_TOL * norm(&target) {
            let a = hyperplane_vector(&normal).ok_or(Error::NoBalancedAmplitudes)?;
            return Ok(UnmarkedAmplitudes {
                a,
                zero_overlap_fallback: true,
            });
        }
        let a = if unit {
            p.iter().map(|x| x / len).collect()
        } else {
            p
        };
        Ok(UnmarkedAmplitudes {
            a,
            zero_overlap_fallback: false,
        })
    };

    match objective {
        Objective::MaxOverlap => project_or_fallback(ud.out_arc_weights(), true),
        Objective::Uniform => project_or_fallback(vec![1.0; r], false),
        Objective::Custom(a) => {
            if a.len() != r {
                return Err(Error::LengthMismatch {
                    expected: r,
                    got: a.len(),
                });
            }
            if a.iter().all(|&x| x == 0.0) {
                return Err(Error::ZeroState);
            }
            let defect = dot(&normal, a);
            let scale: f64 = normal.iter().zip(a).map(|(n, x)| (n * x).abs()).sum();
            if defect.abs() > ALGEBRAIC_TOL * scale.max(1.0) {
                return Err(Error::Unbalanced { defect });
            }
            Ok(UnmarkedAmplitudes {
                a: a.clone(),
                zero_overlap_fallback: false,
            })
        }
    }
}

/// Shortages of the marked vertices for given component amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortageSums {
    /// `s(M1)`; for a non-bipartite `M`, the total over all of `M`.
    pub s1: f64,
    /// `s(M2)`; zero for a non-bipartite `M`.
    pub s2: f64,
    /// Shortage of each marked vertex.
    pub per_vertex: BTreeMap<usize, f64>,
}

/// Sums `a_{comp(u)}` over the unmarked neighbours `u` of each marked vertex.
pub fn compute_shortages(
    g: &Graph,
    ma: &MarkedAnalysis,
    ud: &UnmarkedDecomposition,
    a: &[f64],
) -> Result<ShortageSums> {
    if a.len() != ud.len() {
        return Err(Error::LengthMismatch {
            expected: ud.len(),
            got: a.len(),
        });
    }
    let mut per_vertex = BTreeMap::new();
    let (mut s1, mut s2) = (0.0, 0.0);
    for &v in &ma.marked {
        let s: f64 = g
            .neighbors(v)
            .iter()
            .filter_map(|&u| ud.component_of(u))
            .map(|i| a[i])
            .sum();
        per_vertex.insert(v, s);
        match ma.side(v) {
            Some(Side::Second) => s2 += s,
            _ => s1 += s,
        }
    }
    Ok(ShortageSums { s1, s2, per_vertex })
}

/// Amplitudes on the edges inside `M`, keyed by `(u, v)` with `u < v`.
pub type EdgeAmplitudes = BTreeMap<(usize, usize), f64>;

/// Finds `c` on the edges of `M` with `Σ_{e ∋ v} c_e = −shortage(v)` at every
/// marked vertex. Returns the minimum-norm least-squares solution and fails
/// with [`Error::Infeasible`] if it does not actually solve the system.
pub fn neutralize_shortages(
    g: &Graph,
    ma: &MarkedAnalysis,
    shortages: &ShortageSums,
) -> Result<EdgeAmplitudes> {
    let rows: BTreeMap<usize, usize> = ma.marked.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<(usize, usize)> = ma.marked_edges(g).collect();
    let rhs = DVector::from_iterator(
        ma.marked.len(),
        ma.marked
            .iter()
            .map(|v| -shortages.per_vertex.get(v).copied().unwrap_or(0.0)),
    );
    let scale = rhs.amax().max(1.0);

    if edges.is_empty() {
        let residual = rhs.amax();
        if residual > SOLVER_TOL * scale {
            return Err(Error::Infeasible { residual });
        }
        return Ok(EdgeAmplitudes::new());
    }

    let mut incidence = DMatrix::<f64>::zeros(ma.marked.len(), edges.len());
    for (j, &(u, v)) in edges.iter().enumerate() {
        incidence[(rows[&u], j)] = 1.0;
        incidence[(rows[&v], j)] = 1.0;
    }
    let svd = incidence.clone().svd(true, true);
    let cutoff = 1e-12 * svd.singular_values.max().max(1.0);
    let x = svd
        .solve(&rhs, cutoff)
        .map_err(|_| Error::Infeasible { residual: f64::NAN })?;
    let residual = (&incidence * &x - &rhs).amax();
    if residual > SOLVER_TOL * scale {
        return Err(Error::Infeasible { residual });
    }
    Ok(edges.into_iter().zip(x.iter().copied()).collect())
}

/// A state built from component and marked-edge amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryState {
    pub arc_amplitudes: ArcState,
    pub component_amps: Vec<f64>,
    pub marked_edge_amps: EdgeAmplitudes,
    pub normalized: bool,
    /// `⟨uniform|ψ⟩`, the arc sum scaled by `1/√(2m)`.
    pub overlap_with_initial: f64,
}

/// `‖ψ‖² = Σ_i 2a_i²(|E_i| + k_i) + 2Σ_e c_e²`.
pub fn state_norm_sqr(ud: &UnmarkedDecomposition, a: &[f64], c: &EdgeAmplitudes) -> f64 {
    let unmarked: f64 = ud
        .components
        .iter()
        .zip(a)
        .map(|(comp, ai)| comp.incident_arcs() as f64 * ai * ai)
        .sum();
    unmarked + 2.0 * c.values().map(|x| x * x).sum::<f64>()
}

/// Lays the amplitudes out on arcs. Arcs touching an unmarked vertex `w`
/// carry `a_{comp(w)}`; both arcs of a marked edge carry its `c`.
pub fn assemble_state(
    g: &Graph,
    ma: &MarkedAnalysis,
    ud: &UnmarkedDecomposition,
    a: &[f64],
    c: &EdgeAmplitudes,
    normalize: bool,
) -> Result<StationaryState> {
    if a.len() != ud.len() {
        return Err(Error::LengthMismatch {
            expected: ud.len(),
            got: a.len(),
        });
    }
    for e in ma.marked_edges(g) {
        if !c.contains_key(&e) {
            return Err(Error::InvalidParameter(format!(
                "missing amplitude for marked edge {}-{}",
                g.label(e.0),
                g.label(e.1)
            )));
        }
    }
    let norm_sqr = state_norm_sqr(ud, a, c);
    if norm_sqr == 0.0 {
        return Err(Error::ZeroState);
    }
    let factor = if normalize {
        norm_sqr.sqrt().recip()
    } else {
        1.0
    };

    let values: Vec<f64> = g
        .arcs()
        .map(|(u, v)| {
            let amp = match (ud.component_of(u), ud.component_of(v)) {
                (Some(i), _) | (None, Some(i)) => a[i],
                (None, None) => c[&(u.min(v), u.max(v))],
            };
            amp * factor
        })
        .collect();
    let mut state = StationaryState {
        arc_amplitudes: ArcState::from_real(&values),
        component_amps: a.iter().map(|x| x * factor).collect(),
        marked_edge_amps: c.iter().map(|(&e, x)| (e, x * factor)).collect(),
        normalized: normalize,
        overlap_with_initial: 0.0,
    };
    state.overlap_with_initial = overlap(&state, g);
    Ok(state)
}

/// `⟨uniform|ψ⟩ = (1/√(2m))·Σ_arcs ψ`.
pub fn overlap(state: &StationaryState, g: &Graph) -> f64 {
    let sum: f64 = state.arc_amplitudes.amplitudes.iter().map(|z| z.re).sum();
    sum / (g.arc_count() as f64).sqrt()
}

/// The same overlap from component data alone,
/// `(1/√(2m))·Σ_i a_i(2|E_i| + k_i)`. Agrees with [`overlap`] whenever every
/// marked vertex has zero outgoing sum.
pub fn component_overlap(ud: &UnmarkedDecomposition, a: &[f64], m: usize) -> f64 {
    dot(&ud.out_arc_weights(), a) / ((2 * m) as f64).sqrt()
}

/// Outcome of the full existence-and-construction pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryReport {
    pub exists: bool,
    pub reason: Reason,
    pub amplitudes: Option<UnmarkedAmplitudes>,
    pub state: Option<StationaryState>,
    /// `‖U'ψ − ψ‖/‖ψ‖` of the constructed state.
    pub residual_norm: Option<f64>,
}

/// Decides existence and, when a state exists, constructs and verifies a
/// normalised one.
pub fn construct_stationary(
    g: &Graph,
    ma: &MarkedAnalysis,
    ud: &UnmarkedDecomposition,
    objective: &Objective,
) -> Result<StationaryReport> {
    let (exists, reason) = decide_existence(ma, ud);
    if !exists {
        return Ok(StationaryReport {
            exists,
            reason,
            amplitudes: None,
            state: None,
            residual_norm: None,
        });
    }
    let amps = solve_component_amplitudes(ud, ma, objective)?;
    let shortages = compute_shortages(g, ma, ud, &amps.a)?;
    let c = neutralize_shortages(g, ma, &shortages)?;
    let state = assemble_state(g, ma, ud, &amps.a, &c, true)?;
    let op = WalkOperator::new(g, &ma.marked)?;
    let residual = check_stationary(&op, &state.arc_amplitudes)?;
    Ok(StationaryReport {
        exists,
        reason,
        amplitudes: Some(amps),
        state: Some(state),
        residual_norm: Some(residual),
    })
}
