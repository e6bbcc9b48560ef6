//! `ssc`: build, verify and measure leader-selected maximal networks.
//!
//! Edge-list text is the interchange format between subcommands. Files
//! written by `construct` carry a `# leaders ...` comment that `verify` and
//! `oracle` pick up when `--leaders` is not given.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ssc_core::constructions::{build_g1_bar, build_g2_bar};
use ssc_core::grammar::{
    grammar_r1, grammar_r2, label_isomorphic, run_to_fixpoint_observed, GrammarError, LabeledGraph,
    R6Reading, SchedulePolicy,
};
use ssc_core::robustness::{self, format_sig, EigenError, RobustnessError, DEFAULT_TOL};
use ssc_core::ssc_oracle::randomized_ssc_check;
use ssc_core::zero_forcing::{analyze_process, is_maximal_for_zfs};
use ssc_core::{build, ConstructionError, ConstructionSpec, Family, Graph, GraphError, LeaderSet};

#[derive(Debug)]
enum CliError {
    /// Bad input file or argument that is not a design constraint.
    Input(String),
    Infeasible(String),
    VerificationFailed(String),
    NonConvergence(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Infeasible(_) => "infeasible-spec",
            CliError::VerificationFailed(_) => "verification-failed",
            CliError::NonConvergence(_) => "non-convergence",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::VerificationFailed(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (CliError::Input(msg)
        | CliError::Infeasible(msg)
        | CliError::VerificationFailed(msg)
        | CliError::NonConvergence(msg)) = self;
        f.write_str(msg)
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::DiameterMismatch { .. } => {
                CliError::VerificationFailed(e.to_string())
            }
            _ => CliError::Infeasible(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RobustnessError> for CliError {
    fn from(e: RobustnessError) -> Self {
        match e {
            RobustnessError::Eigen(EigenError::NoConvergence { .. }) => {
                CliError::NonConvergence(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GrammarError> for CliError {
    fn from(e: GrammarError) -> Self {
        match e {
            GrammarError::InvalidParameters(_) => CliError::Infeasible(e.to_string()),
            GrammarError::StepBudgetExceeded(_) | GrammarError::NotConverged { .. } => {
                CliError::NonConvergence(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(
    name = "ssc",
    version,
    about = "Leader-selected maximal networks: build, verify, measure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design and write its edge list, DOT rendering and layout.
    Construct(ConstructArgs),
    /// Check zero forcing, process uniqueness and edge-maximality.
    Verify(VerifyArgs),
    /// Laplacian spectrum, algebraic connectivity and Kirchhoff index.
    Spectrum(SpectrumArgs),
    /// Robustness of every family over a range of leader counts.
    Sweep(SweepArgs),
    /// Run a rewriting grammar to its fixpoint.
    Grammar(GrammarArgs),
    /// Sampled numeric controllability check.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Edgelist,
    Csv,
}

impl Format {
    fn require(self, allowed: &[Format], command: &str) -> CliResult {
        if allowed.contains(&self) {
            Ok(())
        } else {
            Err(CliError::Input(format!(
                "format {:?} is not supported by {command}",
                self.to_possible_value()
                    .map(|v| v.get_name().to_string())
                    .unwrap_or_default()
            )))
        }
    }
}

#[derive(Args)]
struct OutDir {
    /// Output directory.
    #[arg(long, env = "SSC_OUT_DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    family: Option<Family>,
    /// Total node count N.
    #[arg(long)]
    nodes: Option<usize>,
    /// Leader count N_L.
    #[arg(long)]
    leaders: Option<usize>,
    /// Requested diameter D.
    #[arg(long)]
    diameter: Option<usize>,
    /// `key=value` file with family, N, NL, D; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write only this graph format (plus the layout).
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args)]
struct GraphInput {
    /// Edge-list file.
    graph: PathBuf,
    /// Comma-separated leader ids; defaults to the file's `# leaders` line.
    #[arg(long, value_delimiter = ',')]
    leaders: Option<Vec<usize>>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: GraphInput,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Edge-list file.
    graph: PathBuf,
    /// Relative eigensolver tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// `csv` prints `index,eigenvalue` for the whole spectrum.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 60)]
    nodes: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [Family::G1Bar, Family::G2Bar, Family::G3Bar])]
    family: Vec<Family>,
    /// Comma-separated leader counts.
    #[arg(long, value_delimiter = ',', default_values_t = 2..=10)]
    leaders: Vec<usize>,
    /// Diameter for the mixed design; defaults to mid-range per point.
    #[arg(long)]
    diameter: Option<usize>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GrammarName {
    R1,
    R2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Policy {
    Uniform,
    Pi2Priority,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum R6 {
    AllFollowers,
    MatchingIndex,
}

#[derive(Args)]
struct GrammarArgs {
    #[arg(value_enum)]
    name: GrammarName,
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    leaders: usize,
    /// Layer count for R1; defaults to N / N_L.
    #[arg(long)]
    diameter: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Policy::Uniform)]
    policy: Policy,
    /// Reading of R2's follower-attachment rule.
    #[arg(long, value_enum, default_value_t = R6::AllFollowers)]
    r6: R6,
    /// Also write one DOT frame per step.
    #[arg(long)]
    frames: bool,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative rank tolerance.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// `csv` prints one line per trial after the summary.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> CliResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Edge list with a `# leaders` line after the header.
fn edge_list_with_leaders(g: &Graph, leaders: &LeaderSet) -> String {
    let ids: Vec<String> = leaders.iter().map(|l| l.to_string()).collect();
    let body = g.to_edge_list();
    let (header, rest) = body.split_once('\n').unwrap_or((&body, ""));
    format!("{header}\n# leaders {}\n{rest}", ids.join(" "))
}

fn leaders_comment(text: &str) -> Option<Result<Vec<usize>, CliError>> {
    text.lines().find_map(|line| {
        let rest = line
            .trim()
            .strip_prefix('#')?
            .trim_start()
            .strip_prefix("leaders")?;
        Some(
            rest.split_whitespace()
                .map(|w| {
                    w.parse()
                        .map_err(|_| CliError::Input(format!("invalid leader id {w:?}")))
                })
                .collect(),
        )
    })
}

fn load_graph(input: &GraphInput) -> Result<(Graph, LeaderSet), CliError> {
    let text = read(&input.graph)?;
    let g = Graph::parse_edge_list(&text)?;
    let ids = match &input.leaders {
        Some(ids) => ids.clone(),
        None => leaders_comment(&text).ok_or_else(|| {
            CliError::Input("no --leaders given and the file has no `# leaders` line".into())
        })??,
    };
    let leaders = LeaderSet::new(ids, g.node_count())?;
    Ok((g, leaders))
}

fn resolve_spec(args: &ConstructArgs) -> Result<ConstructionSpec, CliError> {
    let base = match &args.config {
        Some(path) => Some(ConstructionSpec::parse_config(&read(path)?)?),
        None => None,
    };
    let missing = |what: &str| CliError::Infeasible(format!("missing {what}"));
    Ok(ConstructionSpec {
        family: args
            .family
            .or(base.map(|b| b.family))
            .ok_or_else(|| missing("--family"))?,
        n: args
            .nodes
            .or(base.map(|b| b.n))
            .ok_or_else(|| missing("--nodes"))?,
        n_leaders: args
            .leaders
            .or(base.map(|b| b.n_leaders))
            .ok_or_else(|| missing("--leaders"))?,
        diameter: args.diameter.or(base.and_then(|b| b.diameter)),
    })
}

fn construct(args: ConstructArgs) -> CliResult {
    if let Some(f) = args.format {
        f.require(&[Format::Dot, Format::Edgelist], "construct")?;
    }
    let spec = resolve_spec(&args)?;
    let net = build(&spec)?;
    let diameter = net.graph.diameter()?;
    let stem = format!(
        "{}_N{}_NL{}_D{diameter}",
        net.family, spec.n, spec.n_leaders
    );
    let dir = &args.out.out;
    if args.format != Some(Format::Dot) {
        write(
            &dir.join(format!("{stem}.edges")),
            &edge_list_with_leaders(&net.graph, &net.leaders),
        )?;
    }
    if args.format != Some(Format::Edgelist) {
        write(&dir.join(format!("{stem}.dot")), &net.to_dot())?;
    }
    write(&dir.join(format!("{stem}.layout")), &net.layout_text())?;
    println!(
        "{} N={} NL={} D={diameter}: {} edges",
        net.family,
        spec.n,
        spec.n_leaders,
        net.graph.edge_count()
    );
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verify(args: VerifyArgs) -> CliResult {
    let (g, leaders) = load_graph(&args.input)?;
    let process = analyze_process(&g, &leaders);
    if !process.zfs {
        println!(
            "ZFS: no, unique process: {}, maximal: n/a",
            yes_no(process.unique)
        );
        return Err(CliError::VerificationFailed(
            "leaders are not a zero forcing set".into(),
        ));
    }
    let report = is_maximal_for_zfs(&g, &leaders).map_err(|e| CliError::Input(e.to_string()))?;
    println!(
        "ZFS: yes, unique process: {}, maximal: {}",
        yes_no(process.unique),
        yes_no(report.is_maximal())
    );
    for (u, v) in &report.violations {
        println!("violation: {u} {v}");
    }
    if report.is_maximal() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(format!(
            "{} non-edge(s) can be added without breaking zero forcing",
            report.violations.len()
        )))
    }
}

fn spectrum(args: SpectrumArgs) -> CliResult {
    if let Some(f) = args.format {
        f.require(&[Format::Csv], "spectrum")?;
    }
    let g = Graph::parse_edge_list(&read(&args.graph)?)?;
    let report = robustness::spectrum(&g, args.tol)?;
    if args.format == Some(Format::Csv) {
        println!("index,eigenvalue");
        for (i, l) in report.eigenvalues.iter().enumerate() {
            println!("{},{}", i + 1, format_sig(*l, 12));
        }
        return Ok(());
    }
    println!("nodes: {}", g.node_count());
    println!("edges: {}", g.edge_count());
    println!("lambda2: {}", format_sig(report.lambda2, 9));
    println!(
        "kirchhoff: {}",
        report
            .kirchhoff
            .map_or("inf".to_string(), |k| format_sig(k, 9))
    );
    Ok(())
}

fn sweep(args: SweepArgs) -> CliResult {
    let entries = robustness::sweep(args.nodes, &args.family, &args.leaders, args.diameter);
    let path = args.out.out.join(format!("sweep_N{}.csv", args.nodes));
    write(&path, &robustness::write_csv(&entries))?;
    let measured = entries.iter().filter(|e| e.row().is_some()).count();
    println!("{measured} of {} points measured", entries.len());
    Ok(())
}

fn grammar(args: GrammarArgs) -> CliResult {
    let (g, target, tag) = match args.name {
        GrammarName::R1 => {
            let d = match args.diameter {
                Some(d) => d,
                None if args.leaders > 0 && args.nodes.is_multiple_of(args.leaders) => {
                    args.nodes / args.leaders
                }
                None => {
                    return Err(ConstructionError::NotDivisible {
                        n: args.nodes,
                        n_leaders: args.leaders,
                    }
                    .into())
                }
            };
            if args.nodes != args.leaders * d {
                return Err(ConstructionError::NotLayered {
                    n: args.nodes,
                    n_leaders: args.leaders,
                    d,
                }
                .into());
            }
            (
                grammar_r1(args.leaders, d)?,
                build_g1_bar(args.nodes, args.leaders, d)?,
                "r1",
            )
        }
        GrammarName::R2 => {
            let reading = match args.r6 {
                R6::AllFollowers => R6Reading::AllFollowers,
                R6::MatchingIndex => R6Reading::MatchingIndex,
            };
            (
                grammar_r2(args.nodes, args.leaders, reading)?,
                build_g2_bar(args.nodes, args.leaders)?,
                "r2",
            )
        }
    };
    let policy = match args.policy {
        Policy::Uniform => SchedulePolicy::Uniform,
        Policy::Pi2Priority => SchedulePolicy::Pi2Priority,
    };
    let dir = &args.out.out;
    let mut frames = Vec::new();
    let initial = LabeledGraph::initial(args.nodes)?;
    let (last, schedule) =
        run_to_fixpoint_observed(&initial, &g, args.seed, policy, |k, state| {
            if args.frames {
                frames.push((k, state.to_dot()));
            }
        })?;
    for (k, dot) in &frames {
        write(&dir.join(format!("{tag}_frame_{k:04}.dot")), dot)?;
    }
    write(&dir.join(format!("{tag}_final.dot")), &last.to_dot())?;
    write(&dir.join(format!("{tag}_trace.txt")), &schedule.to_text())?;
    let iso = label_isomorphic(&last, &target)?;
    println!(
        "fixpoint after {} steps; label-isomorphic to {}: {}",
        schedule.steps.len(),
        target.family,
        yes_no(iso)
    );
    if iso {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(format!(
            "final graph differs from {}",
            target.family
        )))
    }
}

fn oracle(args: OracleArgs) -> CliResult {
    if let Some(f) = args.format {
        f.require(&[Format::Csv], "oracle")?;
    }
    let (g, leaders) = load_graph(&args.input)?;
    let report = randomized_ssc_check(&g, &leaders, args.trials, args.seed, args.tol);
    println!("{}", report.summary());
    if args.format == Some(Format::Csv) {
        print!("{}", report.trials_csv());
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(format!(
            "{} of {} trials not controllable",
            report.trials - report.pass_count,
            report.trials
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Sweep(a) => sweep(a),
        Command::Grammar(a) => grammar(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(e.exit_code())
        }
    }
}
