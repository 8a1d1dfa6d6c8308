//! Normalisation bound `ā` on the unmarked amplitude and the resulting upper
//! bound on the probability of finding a marked vertex.

use serde::Serialize;

use crate::analysis::{analyze_marked, decompose_unmarked, MarkedAnalysis, UnmarkedDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::stationary::{
    compute_shortages, neutralize_shortages, EdgeAmplitudes, StationaryState, ALGEBRAIC_TOL,
};
use crate::walk::{simulate, uniform_state, ArcState, WalkOperator};

/// Slack allowed between a simulated probability and the bound.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// `ā = 1/√denom`.
    pub a_bar: f64,
    /// `2m − 2|E_M| − D^M̄`.
    pub denom: f64,
    /// `Σ c_e²` over the edges of `M`, unmarked amplitudes scaled to 1.
    pub c_sq_sum: f64,
    pub bound: f64,
    pub bound_clamped: f64,
    /// The uncorrected value `1/√(2m)`, kept for comparison.
    pub uncorrected_a: f64,
    pub sim_max_p: Option<f64>,
    pub sim_argmax_t: Option<usize>,
    pub sim_steps: Option<usize>,
    /// `sim_max_p > bound + VIOLATION_TOL`.
    pub violation: Option<bool>,
}

/// `Σ_{v ∉ M} deg_G(v)`, counted vertex by vertex.
pub fn unmarked_degree_sum(g: &Graph, ma: &MarkedAnalysis) -> usize {
    (0..g.n())
        .filter(|&v| !ma.is_marked(v))
        .map(|v| g.degree(v))
        .sum()
}

/// `ā = 1/√(2m − 2|E_M| − D^M̄)`.
pub fn compute_a_bar(ma: &MarkedAnalysis, m: usize) -> Result<f64> {
    let twice = 2 * m;
    let used = 2 * ma.internal_edges + ma.boundary_edges;
    if used >= twice {
        return Err(Error::NotApplicable(
            "no arcs touch an unmarked vertex".into(),
        ));
    }
    Ok(1.0 / ((twice - used) as f64).sqrt())
}

/// Checks `|a| ≤ ā` for a normalised state whose unmarked components all
/// carry amplitudes of the same magnitude `|a|`.
pub fn verify_a_bound(state: &StationaryState, a_bar: f64) -> Result<bool> {
    if !state.normalized {
        return Err(Error::NotApplicable("state is not normalised".into()));
    }
    let mags: Vec<f64> = state.component_amps.iter().map(|x| x.abs()).collect();
    let first = *mags
        .first()
        .ok_or_else(|| Error::NotApplicable("no unmarked components".into()))?;
    if mags
        .iter()
        .any(|&x| (x - first).abs() > ALGEBRAIC_TOL * first.max(1.0))
    {
        return Err(Error::NotApplicable(
            "unmarked components carry unequal amplitude magnitudes".into(),
        ));
    }
    Ok(first <= a_bar + ALGEBRAIC_TOL)
}

/// `ā` on every arc leaving an unmarked vertex, zero elsewhere. Not
/// stationary, but it has unit norm and attains `a = ā`.
pub fn equality_witness(g: &Graph, ma: &MarkedAnalysis) -> Result<ArcState> {
    let a_bar = compute_a_bar(ma, g.m())?;
    let values: Vec<f64> = g
        .arcs()
        .map(|(u, _)| if ma.is_marked(u) { 0.0 } else { a_bar })
        .collect();
    Ok(ArcState::from_real(&values))
}

/// Marked-edge amplitudes of the stationary state whose unmarked arcs all
/// carry amplitude exactly 1. Fails with [`Error::NotApplicable`] when no such
/// state exists.
pub fn unit_edge_amplitudes(
    g: &Graph,
    ma: &MarkedAnalysis,
    ud: &UnmarkedDecomposition,
) -> Result<EdgeAmplitudes> {
    if ma.bipartite && ma.degsum1 != ma.degsum2 {
        return Err(Error::NotApplicable(format!(
            "equal unmarked amplitudes cannot balance degree sums {} and {}",
            ma.degsum1, ma.degsum2
        )));
    }
    let ones = vec![1.0; ud.len()];
    let shortages = compute_shortages(g, ma, ud, &ones)?;
    neutralize_shortages(g, ma, &shortages).map_err(|e| Error::NotApplicable(e.to_string()))
}

/// `p_M ≤ 4/denom · (Σ c_e² + 2D^M̄ + 2|E_M|)`.
pub fn marked_probability_bound(
    ma: &MarkedAnalysis,
    m: usize,
    c: &EdgeAmplitudes,
) -> Result<BoundReport> {
    let a_bar = compute_a_bar(ma, m)?;
    let denom = ma.unmarked_arc_count(m) as f64;
    let c_sq_sum: f64 = c.values().map(|x| x * x).sum();
    let bound =
        4.0 / denom * (c_sq_sum + 2.0 * ma.boundary_edges as f64 + 2.0 * ma.internal_edges as f64);
    Ok(BoundReport {
        a_bar,
        denom,
        c_sq_sum,
        bound,
        bound_clamped: bound.min(1.0),
        uncorrected_a: 1.0 / ((2 * m) as f64).sqrt(),
        sim_max_p: None,
        sim_argmax_t: None,
        sim_steps: None,
        violation: None,
    })
}

/// Analyses `marked`, evaluates the bound, and simulates `steps` steps from
/// the uniform state to compare the largest observed `p_M(t)`.
pub fn compare_bound_to_simulation(
    g: &Graph,
    marked: &[usize],
    steps: usize,
) -> Result<BoundReport> {
    let ma = analyze_marked(g, marked)?;
    let ud = decompose_unmarked(g, &ma);
    let c = unit_edge_amplitudes(g, &ma, &ud)?;
    let mut report = marked_probability_bound(&ma, g.m(), &c)?;
    let op = WalkOperator::new(g, &ma.marked)?;
    let trace = simulate(&op, &uniform_state(g)?, steps)?;
    report.sim_max_p = Some(trace.max_p);
    report.sim_argmax_t = Some(trace.argmax_t);
    report.sim_steps = Some(steps);
    report.violation = Some(trace.max_p > report.bound + VIOLATION_TOL);
    Ok(report)
}
