//! Run reports: one self-describing document per run, serialised either as
//! JSON (stable key order) or as flat `key: value` text.
//!
//! Vertices are reported by their original labels.

use serde::Serialize;
use serde_json::Value;

use crate::analysis::{Boundary, MarkedAnalysis, UnmarkedDecomposition};
use crate::bounds::BoundReport;
use crate::graph::Graph;
use crate::stationary::{component_overlap, Reason, StationaryReport};
use crate::walk::EvolutionTrace;

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentSummary {
    pub vertices: Vec<u64>,
    pub internal_edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisSection {
    pub bipartite: bool,
    pub part1: Vec<u64>,
    pub part2: Vec<u64>,
    pub internal_edges: usize,
    pub boundary_edges: usize,
    pub degsum1: usize,
    pub degsum2: usize,
    pub components: Vec<ComponentSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExistenceSection {
    pub exists: bool,
    pub reason: Reason,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeAmplitude {
    pub u: u64,
    pub v: u64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateSection {
    pub a: Vec<f64>,
    pub zero_overlap_fallback: bool,
    pub c: Vec<EdgeAmplitude>,
    pub normalized: bool,
    pub overlap: f64,
    /// Overlap recomputed from component data only.
    pub overlap_from_components: f64,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSection {
    pub steps: usize,
    pub p0: f64,
    pub max_p: f64,
    pub argmax_t: usize,
    pub final_p: f64,
}

/// A complete run report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub graph: GraphSummary,
    pub marked: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub existence: Option<ExistenceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stationary: Option<StateSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundReport>,
}

fn labels(g: &Graph, vs: &[usize]) -> Vec<u64> {
    let mut out: Vec<u64> = vs.iter().map(|&v| g.label(v)).collect();
    out.sort_unstable();
    out
}

impl Report {
    pub fn new(command: &str, g: &Graph, marked: &[usize]) -> Self {
        let mut sorted = marked.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Report {
            command: command.to_string(),
            graph: GraphSummary { n: g.n(), m: g.m() },
            marked: labels(g, &sorted),
            analysis: None,
            existence: None,
            stationary: None,
            simulation: None,
            bound: None,
        }
    }

    pub fn with_analysis(
        mut self,
        g: &Graph,
        ma: &MarkedAnalysis,
        ud: &UnmarkedDecomposition,
    ) -> Self {
        let components = ud
            .components
            .iter()
            .map(|c| {
                let (k1, k2, k) = match c.boundary {
                    Boundary::Split { to_part1, to_part2 } => {
                        (Some(to_part1), Some(to_part2), None)
                    }
                    Boundary::Total(t) => (None, None, Some(t)),
                };
                ComponentSummary {
                    vertices: labels(g, &c.vertices),
                    internal_edges: c.internal_edges,
                    k1,
                    k2,
                    k,
                }
            })
            .collect();
        self.analysis = Some(AnalysisSection {
            bipartite: ma.bipartite,
            part1: labels(g, &ma.part1),
            part2: labels(g, &ma.part2),
            internal_edges: ma.internal_edges,
            boundary_edges: ma.boundary_edges,
            degsum1: ma.degsum1,
            degsum2: ma.degsum2,
            components,
        });
        self
    }

    pub fn with_existence(mut self, exists: bool, reason: Reason) -> Self {
        self.existence = Some(ExistenceSection { exists, reason });
        self
    }

    pub fn with_stationary(
        mut self,
        g: &Graph,
        ud: &UnmarkedDecomposition,
        rep: &StationaryReport,
    ) -> Self {
        self.existence = Some(ExistenceSection {
            exists: rep.exists,
            reason: rep.reason,
        });
        if let (Some(st), Some(amps), Some(res)) = (&rep.state, &rep.amplitudes, rep.residual_norm)
        {
            self.stationary = Some(StateSection {
                a: st.component_amps.clone(),
                zero_overlap_fallback: amps.zero_overlap_fallback,
                c: st
                    .marked_edge_amps
                    .iter()
                    .map(|(&(u, v), &amplitude)| EdgeAmplitude {
                        u: g.label(u),
                        v: g.label(v),
                        amplitude,
                    })
                    .collect(),
                normalized: st.normalized,
                overlap: st.overlap_with_initial,
                overlap_from_components: component_overlap(ud, &st.component_amps, g.m()),
                residual_norm: res,
            });
        }
        self
    }

    pub fn with_trace(mut self, trace: &EvolutionTrace) -> Self {
        self.simulation = Some(SimulationSection {
            steps: trace.p_series.len() - 1,
            p0: trace.p_series[0],
            max_p: trace.max_p,
            argmax_t: trace.argmax_t,
            final_p: *trace.p_series.last().unwrap(),
        });
        self
    }

    pub fn with_bound(mut self, bound: BoundReport) -> Self {
        self.bound = Some(bound);
        self
    }

    /// Pretty-printed JSON.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serialisable");
        s.push('\n');
        s
    }

    /// Flat `dotted.key: value` lines.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report is serialisable");
        let mut out = String::new();
        flatten("", &value, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, out);
            }
        }
        Value::Array(items) => {
            if let Some(parts) = items.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push_str(&format!("{prefix}: [{}]\n", parts.join(", ")));
            } else {
                for (i, child) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{i}]"), child, out);
                }
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", scalar(v).unwrap())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze_marked, decompose_unmarked};
    use crate::generators::gen_counterexample;
    use crate::stationary::{construct_stationary, Objective};

    #[test]
    fn text_and_json_agree_on_verdict() {
        let (g, m) = gen_counterexample();
        let ma = analyze_marked(&g, &m).unwrap();
        let ud = decompose_unmarked(&g, &ma);
        let rep = construct_stationary(&g, &ma, &ud, &Objective::MaxOverlap).unwrap();
        let report = Report::new("construct", &g, &m)
            .with_analysis(&g, &ma, &ud)
            .with_stationary(&g, &ud, &rep);
        let text = report.to_text();
        assert!(text.contains("existence.exists: true\n"));
        assert!(text.contains("existence.reason: DISCONNECTED_UNMARKED\n"));
        assert!(text.contains("analysis.components[1].vertices: [3, 4]\n"));
        assert!(text.contains("stationary.c[0].u: 0\n"));
        let json: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["existence"]["reason"], "DISCONNECTED_UNMARKED");
        assert_eq!(json["analysis"]["degsum2"], 3);
        assert_eq!(report.to_json(), report.clone().to_json());
    }
}
