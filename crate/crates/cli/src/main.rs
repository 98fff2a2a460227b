//! `mechmatch` command line.
//!
//! Exit status: 0 on success, 2 when a run finds something (an SP
//! violation, a failed fixture, a hunt certificate), 1 on any usage or
//! input error. Errors are one line on stderr starting with
//! `mechmatch: error:`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mechmatch::audit::{approx_ratio, fixtures, hunt_flip_sp, HuntParams};
use mechmatch::corpus::{self, Tier};
use mechmatch::figures::FIGURE_NAMES;
use mechmatch::generate::{generate, Generator};
use mechmatch::io::{bundled_instance, write_results, InstanceFile, ResultRow};
use mechmatch::strategy::verify_sp;
use mechmatch::{utilities, LabeledGraph, Limits, Mechanism, MechanismKind, MixMode};

#[derive(Parser, Debug)]
#[command(name = "mechmatch", version, about = "Strategyproof matching mechanisms on agent-labeled graphs")]
struct Cli {
    /// Largest instance (in vertices) the brute-force oracles accept.
    /// Overrides MECHMATCH_ORACLE_BOUND.
    #[arg(long, global = true, value_name = "VERTICES")]
    oracle_bound: Option<usize>,

    /// Write output here instead of stdout (a directory for `corpus` and
    /// `hunt`).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit an instance file.
    Gen(GenArgs),
    /// Run one mechanism and print the matching and utilities.
    Solve(RunArgs),
    #[command(subcommand)]
    Audit(AuditCommand),
    #[command(subcommand)]
    Hunt(HuntCommand),
    /// Materialize the versioned test corpus.
    Corpus(CorpusArgs),
}

#[derive(Subcommand, Debug)]
enum AuditCommand {
    /// Search every hide-set of every agent for a profitable deviation.
    Sp(RunArgs),
    /// Compare the expected matching size with a maximum matching.
    Approx(RunArgs),
    /// Re-run every worked example.
    Fixtures,
}

#[derive(Subcommand, Debug)]
enum HuntCommand {
    /// Look for a profitable deviation from Flip-and-Match.
    FlipSp(HuntArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Path,
    Random,
    Figure,
}

#[derive(Args, Debug)]
struct GenArgs {
    kind: GenKind,
    /// Figure name (for `figure`).
    name: Option<String>,
    #[arg(long, default_value_t = 6)]
    vertices: u32,
    #[arg(long, default_value_t = 2)]
    agents: u32,
    /// Edge probability (for `random`).
    #[arg(short, long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_parser = parse_mechanism)]
    mechanism: MechanismKind,
    /// Agents on the first side, comma separated (e.g. "1,3").
    #[arg(long)]
    bipartition: Option<String>,
    /// Enumerate every outcome of a randomized mechanism (the default).
    #[arg(long, conflicts_with = "seed")]
    exact: bool,
    /// Sample one outcome of a randomized mechanism from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Print a results table instead of text.
    #[arg(long)]
    csv: bool,
    /// Instance files, or bundled figure names such as `fig1a`.
    #[arg(required = true)]
    inputs: Vec<String>,
}

#[derive(Args, Debug)]
struct HuntArgs {
    /// Exhaustive tier bound: all connected two-agent graphs up to this size.
    #[arg(long, default_value_t = 6)]
    max_vertices: usize,
    /// Number of extra seeded random graphs.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, default_value_t = 10)]
    random_max_vertices: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TierArg {
    Exhaustive,
    Random,
    All,
}

#[derive(Args, Debug)]
struct CorpusArgs {
    #[arg(long, value_enum, default_value_t = TierArg::All)]
    tier: TierArg,
}

fn parse_mechanism(s: &str) -> Result<MechanismKind, String> {
    s.parse().map_err(|e: mechmatch::Error| e.to_string())
}

/// What a successful run reports back.
#[derive(PartialEq, Eq)]
enum Status {
    Clean,
    Finding,
}

type CliResult<T> = Result<T, String>;

fn main() -> ExitCode {
    run(std::env::args_os())
}

fn run(argv: impl IntoIterator<Item = OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            return fail(&format!("usage: {first}"));
        }
    };
    match execute(&cli) {
        Ok(Status::Clean) => ExitCode::SUCCESS,
        Ok(Status::Finding) => ExitCode::from(2),
        Err(message) => fail(&message),
    }
}

fn fail(message: &str) -> ExitCode {
    eprintln!("mechmatch: error: {}", message.replace('\n', " "));
    ExitCode::from(1)
}

fn limits(cli: &Cli) -> CliResult<Limits> {
    let limits = Limits::from_env().map_err(|e| e.to_string())?;
    Ok(match cli.oracle_bound {
        Some(bound) => limits.with_oracle(bound),
        None => limits,
    })
}

fn execute(cli: &Cli) -> CliResult<Status> {
    let limits = limits(cli)?;
    let mut out = String::new();
    let status = match &cli.command {
        Command::Gen(args) => {
            let graph = gen(args)?;
            let mut file = InstanceFile::from_graph(&graph);
            if let GenKind::Figure = args.kind {
                file = file.with_name(args.name.clone().unwrap_or_default());
            }
            out.push_str(std::str::from_utf8(&file.to_bytes()).expect("instance files are UTF-8"));
            Status::Clean
        }
        Command::Solve(args) => solve(args, limits, &mut out)?,
        Command::Audit(AuditCommand::Sp(args)) => audit_sp(args, limits, &mut out)?,
        Command::Audit(AuditCommand::Approx(args)) => audit_approx(args, limits, &mut out)?,
        Command::Audit(AuditCommand::Fixtures) => audit_fixtures(limits, &mut out),
        Command::Hunt(HuntCommand::FlipSp(args)) => return hunt(args, limits, cli.out.as_deref()),
        Command::Corpus(args) => return write_corpus(args, cli.out.as_deref()),
    };
    emit(cli.out.as_deref(), out.as_bytes())?;
    Ok(status)
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(path) => fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => match std::io::stdout().write_all(bytes) {
            // A closed pipe (`| head`) is the reader's choice, not an error.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other.map_err(|e| format!("stdout: {e}")),
        },
    }
}

fn gen(args: &GenArgs) -> CliResult<LabeledGraph> {
    let generator = match args.kind {
        GenKind::Path => Generator::Path {
            vertices: args.vertices,
            agents: args.agents,
        },
        GenKind::Random => Generator::Random {
            vertices: args.vertices,
            agents: args.agents,
            p: args.p,
        },
        GenKind::Figure => {
            let name = args
                .name
                .clone()
                .ok_or_else(|| format!("gen figure needs a name (one of {})", FIGURE_NAMES.join(", ")))?;
            Generator::Figure(name)
        }
    };
    generate(&generator, args.seed).map_err(|e| e.to_string())
}

struct Instance {
    id: String,
    graph: LabeledGraph,
}

/// Reads every input, sorted by instance id (the file stem).
fn load(inputs: &[String]) -> CliResult<Vec<Instance>> {
    let mut instances = Vec::new();
    for input in inputs {
        let path = Path::new(input);
        let (id, bytes) = if path.exists() {
            let bytes = fs::read(path).map_err(|e| format!("{input}: {e}"))?;
            let stem = path.file_stem().map_or(input.clone(), |s| s.to_string_lossy().into_owned());
            (stem, bytes)
        } else if let Some(text) = bundled_instance(input) {
            (input.clone(), text.as_bytes().to_vec())
        } else {
            return Err(format!("{input}: no such file or bundled figure"));
        };
        let graph = mechmatch::io::read_instance(&bytes).map_err(|e| format!("{input}: {e}"))?;
        instances.push(Instance { id, graph });
    }
    instances.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(instances)
}

fn mechanism(args: &RunArgs, graph: &LabeledGraph, limits: Limits) -> CliResult<Box<dyn Mechanism>> {
    let mode = match args.seed {
        Some(seed) => MixMode::Sampled(seed),
        None => MixMode::Exact,
    };
    args.mechanism
        .instantiate(graph.num_agents(), args.bipartition.as_deref(), mode, limits)
        .map_err(|e| e.to_string())
}

fn fraction_vector(graph: &LabeledGraph, dist: &mechmatch::OutcomeDistribution) -> CliResult<String> {
    let parts = (1..=graph.num_agents())
        .map(|a| dist.expected_utility(graph, a).map(|u| u.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(format!("({})", parts.join(",")))
}

fn solve(args: &RunArgs, limits: Limits, out: &mut String) -> CliResult<Status> {
    let mut rows = Vec::new();
    for inst in load(&args.inputs)? {
        let mech = mechanism(args, &inst.graph, limits)?;
        let dist = mech.outcomes(&inst.graph).map_err(|e| format!("{}: {e}", inst.id))?;
        if args.csv {
            for outcome in dist.outcomes() {
                let mut row = ResultRow::outcome(&inst.id, &mech.name(), &inst.graph, outcome);
                row.bipartition = args.bipartition.clone();
                row.seed = args.seed;
                rows.push(row);
            }
            continue;
        }
        let _ = writeln!(out, "instance {} mechanism {}", inst.id, mech.name());
        match dist.as_point() {
            Some(m) => {
                let u = utilities(&inst.graph, m).map_err(|e| e.to_string())?;
                let _ = writeln!(out, "matching {m}");
                let _ = writeln!(out, "u = {u}");
            }
            None => {
                for o in dist.outcomes() {
                    let u = utilities(&inst.graph, &o.matching).map_err(|e| e.to_string())?;
                    let _ = writeln!(out, "outcome {} p={} matching {} u = {u}", o.label, o.probability, o.matching);
                }
                let _ = writeln!(out, "expected size {}", dist.expected_size());
                let _ = writeln!(out, "expected u = {}", fraction_vector(&inst.graph, &dist)?);
            }
        }
    }
    if args.csv {
        push_csv(out, &rows)?;
    }
    Ok(Status::Clean)
}

fn push_csv(out: &mut String, rows: &[ResultRow]) -> CliResult<()> {
    let bytes = write_results(rows).map_err(|e| e.to_string())?;
    out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
    Ok(())
}

fn audit_sp(args: &RunArgs, limits: Limits, out: &mut String) -> CliResult<Status> {
    let mut rows = Vec::new();
    let mut status = Status::Clean;
    for inst in load(&args.inputs)? {
        let mech = mechanism(args, &inst.graph, limits)?;
        let violations = verify_sp(&inst.graph, mech.as_ref(), &limits).map_err(|e| format!("{}: {e}", inst.id))?;
        if !violations.is_empty() {
            status = Status::Finding;
        }
        if args.csv {
            rows.extend(violations.iter().map(|v| ResultRow::violation(&inst.id, &mech.name(), v)));
            continue;
        }
        let verdict = if violations.is_empty() { "strategyproof" } else { "NOT strategyproof" };
        let _ = writeln!(out, "instance {} mechanism {}: {verdict}", inst.id, mech.name());
        for v in &violations {
            let _ = writeln!(out, "violation {v} (gain {})", v.gain());
        }
    }
    if args.csv {
        push_csv(out, &rows)?;
    }
    Ok(status)
}

fn audit_approx(args: &RunArgs, limits: Limits, out: &mut String) -> CliResult<Status> {
    let mut rows = Vec::new();
    for inst in load(&args.inputs)? {
        let mech = mechanism(args, &inst.graph, limits)?;
        let report = approx_ratio(&inst.graph, mech.as_ref()).map_err(|e| format!("{}: {e}", inst.id))?;
        if args.csv {
            let mut row = ResultRow::approx(&inst.id, &mech.name(), &report);
            row.bipartition = args.bipartition.clone();
            rows.push(row);
            continue;
        }
        let _ = writeln!(
            out,
            "instance {} mechanism {}: optimum {} expected {} ratio {}",
            inst.id,
            mech.name(),
            report.optimum,
            report.expected_size,
            report.ratio
        );
    }
    if args.csv {
        push_csv(out, &rows)?;
    }
    Ok(Status::Clean)
}

fn audit_fixtures(limits: Limits, out: &mut String) -> Status {
    let results = fixtures(&limits);
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        let mark = if r.passed { "ok" } else { "FAIL" };
        let _ = writeln!(out, "{mark:4} {}: {}", r.name, r.detail);
    }
    let _ = writeln!(out, "{} of {} fixtures pass", results.len() - failed, results.len());
    if failed == 0 {
        Status::Clean
    } else {
        Status::Finding
    }
}

fn hunt(args: &HuntArgs, limits: Limits, dir: Option<&Path>) -> CliResult<Status> {
    let params = HuntParams {
        exhaustive_max_vertices: args.max_vertices,
        random_count: args.random,
        random_max_vertices: args.random_max_vertices,
        seed: args.seed,
    };
    let report = hunt_flip_sp(&params, &limits).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "graphs {} deviations {} rejected {} certificates {}",
        report.graphs_checked,
        report.deviations_checked,
        report.rejected,
        report.certificates.len()
    );
    for c in &report.certificates {
        let _ = writeln!(out, "certificate {}: {}", c.instance_id, c.violation);
    }
    if report.none_found() {
        out.push_str("none found\n");
    }
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        for c in &report.certificates {
            let file = InstanceFile::from_graph(&c.graph)
                .with_name(c.instance_id.clone())
                .with_note(c.violation.to_string());
            let path = dir.join(format!("{}.json", c.instance_id));
            fs::write(&path, file.to_bytes()).map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }
    emit(None, out.as_bytes())?;
    Ok(if report.none_found() { Status::Clean } else { Status::Finding })
}

/// Without `--out`, lists the corpus; with it, writes one instance file per
/// entry into that directory.
fn write_corpus(args: &CorpusArgs, dir: Option<&Path>) -> CliResult<Status> {
    let tier = match args.tier {
        TierArg::Exhaustive => Tier::Exhaustive,
        TierArg::Random => Tier::Random,
        TierArg::All => Tier::All,
    };
    let mut instances = corpus::standard(tier);
    instances.sort_by(|a, b| a.id.cmp(&b.id));
    let mut listing = format!("# corpus v{}\n", corpus::CORPUS_VERSION);
    for inst in &instances {
        let g = &inst.graph;
        let _ = writeln!(
            listing,
            "{} agents={} vertices={} edges={}",
            inst.id,
            g.num_agents(),
            g.vertex_count(),
            g.edges().len()
        );
    }
    match dir {
        None => emit(None, listing.as_bytes())?,
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            for inst in &instances {
                let bytes = InstanceFile::from_graph(&inst.graph).with_name(inst.id.clone()).to_bytes();
                let path = dir.join(format!("{}.json", inst.id));
                fs::write(&path, bytes).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            fs::write(dir.join("index.txt"), listing).map_err(|e| format!("{}: {e}", dir.display()))?;
            emit(None, format!("wrote {} instances to {}\n", instances.len(), dir.display()).as_bytes())?;
        }
    }
    Ok(Status::Clean)
}
