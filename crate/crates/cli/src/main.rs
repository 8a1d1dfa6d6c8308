//! `qwalk`: analyse marked sets, construct stationary states, simulate the
//! walk and evaluate the marked-probability bound.
//!
//! Exit codes:
//!
//! | code | meaning                                         |
//! |------|-------------------------------------------------|
//! | 0    | success                                         |
//! | 1    | internal failure (solver, stationarity check)   |
//! | 2    | unreadable input, parse error or bad arguments  |
//! | 3    | invalid marked set                              |
//! | 4    | no stationary state exists                      |
//! | 5    | bound not applicable to this marked set         |

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qwalk_core::{
    analyze_marked, compare_bound_to_simulation, construct_stationary, decide_existence,
    decompose_unmarked, load_graph, marked_probability_bound, parse_edge_list, parse_marked_list,
    simulate, uniform_state, unit_edge_amplitudes, Error, FamilySpec, Graph, MarkedAnalysis,
    Objective, Report, UnmarkedDecomposition, WalkOperator,
};

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bipartition, unmarked components and the existence verdict.
    Analyze(Input),
    /// Construct a stationary state and write it as arc-amplitude CSV.
    Construct(ConstructArgs),
    /// Evolve the uniform state and write p_M(t) as CSV.
    Simulate(SimulateArgs),
    /// Evaluate the marked-probability bound, optionally against simulation.
    Bound(BoundArgs),
    /// Write a built-in instance as an edge-list / marked-set file pair.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Debug, Args)]
struct Input {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    /// Marked-set file (one label per line) or comma-separated labels.
    #[arg(long)]
    marked: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[command(flatten)]
    input: Input,
    /// max-overlap, uniform, or custom:a1,a2,...
    #[arg(long, default_value = "max-overlap", value_parser = parse_objective)]
    objective: Objective,
    /// Where to write the state CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest acceptable stationarity residual.
    #[arg(long, default_value_t = 1e-10, value_parser = parse_positive)]
    tol_stationary: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    steps: usize,
    /// Where to write the p_M(t) CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    input: Input,
    /// Also simulate this many steps from the uniform state.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Counterexample,
    ZeroOverlap,
    Cycle,
    Path,
    Complete,
    Star,
    TwoComponent,
    Random,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    /// Output prefix; writes PREFIX.edges and PREFIX.marked.
    #[arg(long)]
    out: PathBuf,
    /// Vertex count (cycle, path, complete, star, random).
    #[arg(long)]
    n: Option<usize>,
    /// Marked vertex count (cycle span, path span, complete k, random).
    #[arg(long)]
    k: Option<usize>,
    /// First marked vertex on a path.
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Component sizes for two-component, e.g. 3,4.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Boundary counts k11,k12,k21,k22 for two-component.
    #[arg(long, value_delimiter = ',')]
    boundary: Option<Vec<usize>>,
    /// Extra random edges (two-component, random).
    #[arg(long, default_value_t = 0)]
    extra: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    match s {
        "max-overlap" => Ok(Objective::MaxOverlap),
        "uniform" => Ok(Objective::Uniform),
        _ => {
            let list = s
                .strip_prefix("custom:")
                .ok_or_else(|| format!("unknown objective {s:?}"))?;
            list.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()
                .map(Objective::Custom)
        }
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(x) => Err(format!("tolerance must be positive, got {x}")),
        Err(e) => Err(e.to_string()),
    }
}

/// An error with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn input_error(e: Error) -> Failure {
    Failure::new(2, e.to_string())
}

fn marked_error(e: Error) -> Failure {
    Failure::new(3, format!("invalid marked set: {e}"))
}

fn internal_error(e: Error) -> Failure {
    match e {
        Error::NotApplicable(_) => Failure::new(5, e.to_string()),
        _ => Failure::new(1, e.to_string()),
    }
}

struct Loaded {
    graph: Graph,
    marked: Vec<usize>,
}

impl Loaded {
    fn read(input: &Input) -> Result<Self, Failure> {
        let text = fs::read_to_string(&input.graph)
            .map_err(|e| Failure::new(2, format!("{}: {e}", input.graph.display())))?;
        let graph =
            load_graph(&parse_edge_list(&text).map_err(input_error)?).map_err(input_error)?;
        let labels = read_marked(&input.marked)?;
        let marked = graph.resolve(&labels).map_err(marked_error)?;
        Ok(Loaded { graph, marked })
    }

    fn analyse(&self) -> Result<(MarkedAnalysis, UnmarkedDecomposition), Failure> {
        let ma = analyze_marked(&self.graph, &self.marked).map_err(marked_error)?;
        let ud = decompose_unmarked(&self.graph, &ma);
        Ok((ma, ud))
    }
}

fn read_marked(spec: &str) -> Result<Vec<u64>, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{spec}: {e}")))?;
        return parse_marked_list(&text).map_err(input_error);
    }
    spec.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim().parse::<u64>().map_err(|_| {
                Failure::new(
                    2,
                    format!("--marked {spec:?} is neither a file nor a label list"),
                )
            })
        })
        .collect()
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Machine => print!("{}", report.to_json()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn cmd_analyze(args: &Input) -> Result<(), Failure> {
    let input = Loaded::read(args)?;
    let (ma, ud) = input.analyse()?;
    let (exists, reason) = decide_existence(&ma, &ud);
    let report = Report::new("analyze", &input.graph, &input.marked)
        .with_analysis(&input.graph, &ma, &ud)
        .with_existence(exists, reason);
    emit(&report, args.format);
    Ok(())
}

fn cmd_construct(args: &ConstructArgs) -> Result<(), Failure> {
    let input = Loaded::read(&args.input)?;
    let (ma, ud) = input.analyse()?;
    let g = &input.graph;
    let rep = construct_stationary(g, &ma, &ud, &args.objective).map_err(|e| match e {
        Error::Unbalanced { .. } | Error::LengthMismatch { .. } | Error::ZeroState => {
            Failure::new(2, format!("--objective: {e}"))
        }
        other => internal_error(other),
    })?;
    let report = Report::new("construct", g, &input.marked)
        .with_analysis(g, &ma, &ud)
        .with_stationary(g, &ud, &rep);
    emit(&report, args.input.format);
    let Some(state) = &rep.state else {
        return Err(Failure::new(
            4,
            format!("no stationary state: {}", rep.reason.as_str()),
        ));
    };
    if let Some(out) = &args.out {
        write_file(out, &state.arc_amplitudes.to_csv(g))?;
    }
    let residual = rep.residual_norm.unwrap_or(f64::NAN);
    if residual.is_nan() || residual > args.tol_stationary {
        return Err(Failure::new(
            1,
            format!(
                "residual {residual:e} exceeds tolerance {:e}",
                args.tol_stationary
            ),
        ));
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let input = Loaded::read(&args.input)?;
    let (ma, _) = input.analyse()?;
    let g = &input.graph;
    let op = WalkOperator::new(g, &ma.marked).map_err(internal_error)?;
    let x0 = uniform_state(g).map_err(input_error)?;
    let trace = simulate(&op, &x0, args.steps).map_err(internal_error)?;
    if let Some(out) = &args.out {
        write_file(out, &trace.to_csv())?;
    }
    emit(
        &Report::new("simulate", g, &input.marked).with_trace(&trace),
        args.input.format,
    );
    Ok(())
}

fn cmd_bound(args: &BoundArgs) -> Result<(), Failure> {
    let input = Loaded::read(&args.input)?;
    let (ma, ud) = input.analyse()?;
    let g = &input.graph;
    let bound = match args.steps {
        Some(steps) => compare_bound_to_simulation(g, &input.marked, steps),
        None => {
            unit_edge_amplitudes(g, &ma, &ud).and_then(|c| marked_probability_bound(&ma, g.m(), &c))
        }
    }
    .map_err(internal_error)?;
    let violation = bound.violation == Some(true);
    emit(
        &Report::new("bound", g, &input.marked)
            .with_analysis(g, &ma, &ud)
            .with_bound(bound),
        args.input.format,
    );
    if violation {
        return Err(Failure::new(1, "simulated probability exceeds the bound"));
    }
    Ok(())
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), Failure> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::new(2, format!("--{flag} is required for this family")))
    };
    let spec = match args.family {
        Family::Counterexample => FamilySpec::Counterexample,
        Family::ZeroOverlap => FamilySpec::ZeroOverlap,
        Family::Cycle => FamilySpec::Cycle {
            n: need(args.n, "n")?,
            span: need(args.k, "k")?,
        },
        Family::Path => FamilySpec::Path {
            n: need(args.n, "n")?,
            start: args.start,
            span: need(args.k, "k")?,
        },
        Family::Complete => FamilySpec::Complete {
            n: need(args.n, "n")?,
            k: need(args.k, "k")?,
        },
        Family::Star => FamilySpec::Star {
            n: need(args.n, "n")?,
        },
        Family::TwoComponent => {
            let sizes = args
                .sizes
                .as_deref()
                .filter(|s| s.len() == 2)
                .ok_or_else(|| Failure::new(2, "two-component needs --sizes s1,s2"))?;
            let k = args
                .boundary
                .as_deref()
                .filter(|k| k.len() == 4)
                .ok_or_else(|| Failure::new(2, "two-component needs --boundary k11,k12,k21,k22"))?;
            FamilySpec::TwoComponent {
                sizes: [sizes[0], sizes[1]],
                k: [[k[0], k[1]], [k[2], k[3]]],
                extra_edges: args.extra,
                seed: args.seed,
            }
        }
        Family::Random => FamilySpec::RandomConnected {
            n: need(args.n, "n")?,
            extra_edges: args.extra,
            marked: need(args.k, "k")?,
            seed: args.seed,
        },
    };
    let (g, marked) = spec.generate().map_err(input_error)?;
    let with_suffix = |suffix: &str| {
        let mut p = args.out.clone().into_os_string();
        p.push(suffix);
        PathBuf::from(p)
    };
    let edges_path = with_suffix(".edges");
    let marked_path = with_suffix(".marked");
    write_file(&edges_path, &g.to_edge_list())?;
    write_file(
        &marked_path,
        &qwalk_core::graph::marked_to_text(&g, &marked),
    )?;
    println!("edges: {}", edges_path.display());
    println!("marked: {}", marked_path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qwalk: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
