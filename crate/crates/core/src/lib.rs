//! Stationary states of discrete-time coined quantum walks with a connected
//! set of marked vertices.
//!
//! The crate decides whether the perturbed walk `U' = S·C·Q` (flip-flop
//! shift, Grover coin, sign-flip query on marked vertices) has a stationary
//! state anchored on the unmarked vertices, constructs one when it does,
//! checks it against the matrix-free operator, and evaluates the resulting
//! upper bound on the probability of finding a marked vertex.
//!
//! ```
//! use qwalk_core::{analyze_marked, construct_stationary, decompose_unmarked, gen_counterexample, Objective};
//!
//! let (g, marked) = gen_counterexample();
//! let ma = analyze_marked(&g, &marked).unwrap();
//! let ud = decompose_unmarked(&g, &ma);
//! let report = construct_stationary(&g, &ma, &ud, &Objective::MaxOverlap).unwrap();
//! assert!(report.exists);
//! assert!(report.residual_norm.unwrap() < 1e-10);
//! ```

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod generators;
pub mod graph;
pub mod report;
pub mod stationary;
pub mod walk;

pub use analysis::{
    analyze_marked, decompose_unmarked, Boundary, MarkedAnalysis, Side, UnmarkedComponent,
    UnmarkedDecomposition,
};
pub use bounds::{
    compare_bound_to_simulation, compute_a_bar, equality_witness, marked_probability_bound,
    unit_edge_amplitudes, unmarked_degree_sum, verify_a_bound, BoundReport,
};
pub use error::{Error, Result};
pub use generators::{
    gen_complete, gen_counterexample, gen_cycle, gen_path, gen_random_connected, gen_star,
    gen_two_component, gen_zero_overlap, FamilySpec, Instance,
};
pub use graph::{load_graph, parse_edge_list, parse_marked_list, Graph};
pub use report::Report;
pub use stationary::{
    assemble_state, component_overlap, compute_shortages, construct_stationary, decide_existence,
    neutralize_shortages, overlap, solve_component_amplitudes, EdgeAmplitudes, Objective, Reason,
    ShortageSums, StationaryReport, StationaryState, UnmarkedAmplitudes,
};
pub use walk::{
    check_stationary, simulate, uniform_state, vertex_probabilities, ArcState, EvolutionTrace,
    WalkOperator,
};
