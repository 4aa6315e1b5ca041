//! The `ept-lab` command line.
//!
//! Graph arguments and `-o` outputs accept `-` for standard input and
//! output. Every command records a run manifest (argument vector, input
//! hashes, parameters, seed, version and wall time) next to its output as
//! `<output>.manifest.json`, or on standard error when writing to standard
//! output. Exit status is 0 on success, 1 for usage errors and 2 for data
//! errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::assembly::{generate, AssemblyParams};
use crate::ast::{alpha_number_with, parse_sexpr, reify_dag, BinderSet};
use crate::belief::{run_chain, CouplingParams, PriorMode, Schedule};
use crate::communities::{girvan_newman, louvain, top_clusters};
use crate::error::{Error, Result};
use crate::experiments::{abductive_grid, ept_sweep, firewall_delta, prior_response};
use crate::format::{export_graph, from_json, partition_from_json, partition_to_json, to_json, GraphFormat};
use crate::graph::{classify_roles, degrees, from_edge_list, truncate_by_depth, ProofDag};
use crate::netstats::{degree_histogram, fit_exponential, fit_power_law, geometric_ks_distance, ks_critical_5pct};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "ept-lab", version, about = "Proof networks and epistemic phase transitions")]
struct Cli {
    /// Worker threads (defaults to EPT_LAB_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Where to write the run manifest.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a graph from a term dump or an edge list.
    Ingest(IngestArgs),
    /// Grow a synthetic assembly network.
    Gen(GenArgs),
    /// Keep the breadth-first layers around the theorem up to a node budget.
    Truncate(TruncateArgs),
    /// Degree statistics and histogram.
    Stats(StatsArgs),
    /// Module detection.
    Communities(CommunitiesArgs),
    /// Run the belief chain once.
    Simulate(SimulateArgs),
    /// Beliefs across a range of error rates.
    Sweep(SweepArgs),
    /// Posterior theorem belief as a function of the prior.
    PriorCurve(PriorCurveArgs),
    /// Beliefs over deductive and abductive error rates.
    Grid(GridArgs),
    /// Within-module versus random flip penalties.
    Firewall(FirewallArgs),
    /// Write a graph as JSON, DOT or an edge list.
    Export(ExportArgs),
}

#[derive(Args, Debug, Serialize)]
struct IngestArgs {
    /// Term dump (`.sexp`), `-` for standard input.
    input: Option<PathBuf>,
    /// Edge list (`.deps`) instead of a term dump.
    #[arg(long, conflicts_with = "input")]
    edges: Option<PathBuf>,
    /// Labels treated as binders during alpha numbering.
    #[arg(long = "binder", default_values_t = ["Lambda".to_string()])]
    binders: Vec<String>,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    #[arg(long, default_value_t = 10_000)]
    nodes: usize,
    #[arg(long, default_value_t = 3.0)]
    mean_deps: f64,
    #[arg(long, default_value_t = 0.8)]
    copy_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct TruncateArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    limit: usize,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DegreeKind {
    OutDegree,
    InDegree,
}

#[derive(Args, Debug, Serialize)]
struct StatsArgs {
    graph: PathBuf,
    /// Which degree sequence to fit and tabulate.
    #[arg(long, value_enum, default_value_t = DegreeKind::OutDegree)]
    fit: DegreeKind,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    GirvanNewman,
    /// Modularity heuristic for graphs too large for Girvan-Newman.
    Louvain,
}

#[derive(Args, Debug, Serialize)]
struct CommunitiesArgs {
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::GirvanNewman)]
    method: Method,
    /// Keep only the largest modules covering this fraction of nodes.
    #[arg(long)]
    coverage: Option<f64>,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ScheduleArgs {
    #[arg(long, default_value_t = 200)]
    burn_in: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 2)]
    stride: usize,
    #[arg(long, default_value_t = 8)]
    replicas: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ScheduleArgs {
    fn schedule(&self) -> Schedule {
        Schedule {
            burn_in_sweeps: self.burn_in,
            n_samples: self.samples,
            sample_stride_sweeps: self.stride,
            n_replicas: self.replicas,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Field,
    InitOnly,
}

impl From<ModeArg> for PriorMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Field => PriorMode::Field,
            ModeArg::InitOnly => PriorMode::InitOnly,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    eps_dep: f64,
    #[arg(long, default_value_t = 0.01)]
    eps_imp: f64,
    #[arg(long, default_value_t = 0.75)]
    prior: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Field)]
    prior_mode: ModeArg,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    graph: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.3,0.2,0.15,0.1,0.07,0.05,0.03,0.02,0.01")]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 0.75)]
    prior: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Field)]
    prior_mode: ModeArg,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct PriorCurveArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95")]
    priors: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Field)]
    prior_mode: ModeArg,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct GridArgs {
    graph: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.1,0.05,0.02,0.01,0.001")]
    eps_dep: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.1,0.05,0.02,0.01,0.001")]
    eps_imp: Vec<f64>,
    #[arg(long, default_value_t = 0.75)]
    prior: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Field)]
    prior_mode: ModeArg,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct FirewallArgs {
    graph: PathBuf,
    #[arg(long)]
    partition: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 10)]
    n_flip: usize,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct ExportArgs {
    graph: PathBuf,
    #[arg(long, default_value = "json")]
    format: String,
    /// Shorthand for `--format dot`.
    #[arg(long)]
    dot: bool,
    /// Colour modules from this partition (DOT only).
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Serialize)]
struct InputHash {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    argv: &'a [String],
    command: &'static str,
    inputs: Vec<InputHash>,
    params: serde_json::Value,
    seed: Option<u64>,
    version: &'static str,
    duration_secs: f64,
}

/// Input reading and hashing for one command invocation.
#[derive(Default)]
struct Session {
    inputs: Vec<InputHash>,
}

impl Session {
    fn read(&mut self, path: &Path) -> Result<String> {
        let mut text = String::new();
        if path == Path::new("-") {
            std::io::stdin().read_to_string(&mut text)?;
        } else {
            text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        }
        self.inputs
            .push(InputHash { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(text.as_bytes())) });
        Ok(text)
    }

    fn graph(&mut self, path: &Path) -> Result<ProofDag> {
        from_json(&self.read(path)?)
    }
}

fn write_output(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

/// `# key=value` header lines followed by nothing else; CSV writers append
/// their column header and rows.
fn csv_header(command: &str, params: &serde_json::Value, extra: &[(String, String)]) -> String {
    let mut out = format!("# ept-lab {VERSION} {command}\n");
    if let serde_json::Value::Object(map) = params {
        for (k, v) in map {
            let _ = writeln!(out, "# {k}={}", flat_value(v));
        }
    }
    for (k, v) in extra {
        let _ = writeln!(out, "# {k}={v}");
    }
    out
}

fn flat_value(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => items.iter().map(flat_value).collect::<Vec<_>>().join(","),
        serde_json::Value::Object(map) => {
            map.iter().map(|(k, v)| format!("{k}:{}", flat_value(v))).collect::<Vec<_>>().join(";")
        }
        other => other.to_string(),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

struct Outcome {
    output: PathBuf,
    seed: Option<u64>,
}

fn params_of<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).unwrap_or(serde_json::Value::Null)
}

fn execute(command: &Command, session: &mut Session) -> Result<Outcome> {
    match command {
        Command::Ingest(a) => {
            let dag = match (&a.input, &a.edges) {
                (_, Some(edges)) => from_edge_list(&session.read(edges)?)?,
                (Some(input), None) => {
                    let forest = parse_sexpr(&session.read(input)?)?;
                    reify_dag(&alpha_number_with(&forest, &BinderSet::new(a.binders.iter().cloned())))?
                }
                (None, None) => {
                    return Err(Error::Config("give a term dump or --edges <file>".into()));
                }
            };
            write_output(&a.output, &to_json(&dag)?)?;
            Ok(Outcome { output: a.output.clone(), seed: None })
        }
        Command::Gen(a) => {
            let dag = generate(&AssemblyParams {
                n_nodes: a.nodes,
                mean_deps: a.mean_deps,
                copy_prob: a.copy_prob,
                seed: a.seed,
            })?;
            write_output(&a.output, &to_json(&dag)?)?;
            Ok(Outcome { output: a.output.clone(), seed: Some(a.seed) })
        }
        Command::Truncate(a) => {
            let dag = session.graph(&a.graph)?;
            write_output(&a.output, &to_json(&truncate_by_depth(&dag, a.limit)?)?)?;
            Ok(Outcome { output: a.output.clone(), seed: None })
        }
        Command::Stats(a) => {
            let dag = session.graph(&a.graph)?;
            let table = degrees(&dag);
            let mut extra = vec![
                ("nodes".to_string(), dag.node_count().to_string()),
                ("edges".to_string(), dag.edge_count().to_string()),
            ];
            let values = match a.fit {
                DegreeKind::OutDegree => {
                    let line = match fit_power_law(&table.out_degree) {
                        Ok(f) => format!(
                            "alpha={} alpha_stderr={} d_min={} n_tail={} ks={} low_confidence={}",
                            f.alpha,
                            f.alpha_stderr,
                            f.d_min,
                            f.n_tail,
                            f.ks_distance,
                            f.is_low_confidence()
                        ),
                        Err(e) => format!("unavailable ({e})"),
                    };
                    extra.push(("power_law_fit".into(), line));
                    &table.out_degree
                }
                DegreeKind::InDegree => {
                    let line = match fit_exponential(&table.in_degree) {
                        Ok(f) => format!(
                            "mean={} rate={} geometric_ks={} ks_critical_5pct={}",
                            f.mean,
                            f.rate,
                            geometric_ks_distance(&table.in_degree, f.mean),
                            ks_critical_5pct(table.in_degree.len())
                        ),
                        Err(e) => format!("unavailable ({e})"),
                    };
                    extra.push(("exponential_fit".into(), line));
                    &table.in_degree
                }
            };
            let mut out = csv_header("stats", &params_of(a), &extra);
            out.push_str("degree,count,ccdf\n");
            for row in degree_histogram(values) {
                let _ = writeln!(out, "{},{},{}", row.degree, row.count, row.ccdf);
            }
            write_output(&a.output, &out)?;
            Ok(Outcome { output: a.output.clone(), seed: None })
        }
        Command::Communities(a) => {
            let dag = session.graph(&a.graph)?;
            let mut partition = match a.method {
                Method::GirvanNewman => girvan_newman(&dag),
                Method::Louvain => louvain(&dag),
            };
            if let Some(c) = a.coverage {
                if !(0.0..=1.0).contains(&c) {
                    return Err(Error::Config(format!("coverage must lie in [0, 1], got {c}")));
                }
                partition = top_clusters(&dag, &partition, c);
            }
            write_output(&a.output, &partition_to_json(&dag, &partition)?)?;
            Ok(Outcome { output: a.output.clone(), seed: None })
        }
        Command::Simulate(a) => {
            let dag = session.graph(&a.graph)?;
            let params =
                CouplingParams::from_error_rates(a.eps_dep, a.eps_imp, a.prior)?.with_mode(a.prior_mode.into());
            let s = run_chain(&dag, &params, &a.schedule.schedule())?;
            let d = &s.diagnostics;
            let extra = vec![
                ("beta_dep".into(), params.beta_dep.to_string()),
                ("beta_imp".into(), params.beta_imp.to_string()),
                ("mean_belief".into(), s.mean_belief.to_string()),
                ("mean_stderr".into(), d.mean_stderr.to_string()),
                ("theorem".into(), s.theorem.map(|t| dag.id(t).to_string()).unwrap_or_default()),
                ("theorem_belief".into(), opt(s.theorem_belief)),
                ("theorem_stderr".into(), d.theorem_stderr.to_string()),
                ("axiom_belief".into(), opt(s.axiom_belief)),
                ("split_half_max".into(), d.split_half_max.to_string()),
                ("split_half_mean".into(), d.split_half_mean.to_string()),
            ];
            let roles = classify_roles(&dag).ok();
            let mut out = csv_header("simulate", &params_of(a), &extra);
            out.push_str("id,role,belief\n");
            for n in dag.nodes() {
                let role = match &roles {
                    Some(r) if r.theorem == n => "theorem",
                    Some(r) if r.axioms.binary_search(&n).is_ok() => "axiom",
                    Some(_) => "interior",
                    None => "",
                };
                let _ = writeln!(out, "{},{role},{}", csv_field(dag.id(n)), s.beliefs[n.index()]);
            }
            write_output(&a.output, &out)?;
            Ok(Outcome { output: a.output.clone(), seed: Some(a.schedule.seed) })
        }
        Command::Sweep(a) => {
            let dag = session.graph(&a.graph)?;
            let result = ept_sweep(&dag, &a.eps, a.prior, a.prior_mode.into(), &a.schedule.schedule())?;
            let mut out = csv_header("sweep", &params_of(a), &[]);
            out.push_str("epsilon,beta,mean_belief,theorem_belief,axiom_belief,theorem_stderr,split_half_max\n");
            for r in &result.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.epsilon,
                    r.beta,
                    r.mean_belief,
                    opt(r.theorem_belief),
                    opt(r.axiom_belief),
                    r.theorem_stderr,
                    r.split_half_max
                );
            }
            write_output(&a.output, &out)?;
            Ok(Outcome { output: a.output.clone(), seed: Some(a.schedule.seed) })
        }
        Command::PriorCurve(a) => {
            let dag = session.graph(&a.graph)?;
            let rows = prior_response(&dag, a.eps, &a.priors, a.prior_mode.into(), &a.schedule.schedule())?;
            let mut out = csv_header("prior-curve", &params_of(a), &[]);
            out.push_str("prior,theorem_belief,theorem_stderr,replica_variance,mean_belief\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.prior, r.theorem_belief, r.theorem_stderr, r.replica_variance, r.mean_belief
                );
            }
            write_output(&a.output, &out)?;
            Ok(Outcome { output: a.output.clone(), seed: Some(a.schedule.seed) })
        }
        Command::Grid(a) => {
            let dag = session.graph(&a.graph)?;
            let g = abductive_grid(&dag, &a.eps_dep, &a.eps_imp, a.prior, a.prior_mode.into(), &a.schedule.schedule())?;
            let mut out = csv_header("grid", &params_of(a), &[]);
            out.push_str("eps_dep,eps_imp,theorem_belief,theorem_stderr,mean_belief\n");
            for (i, d) in g.eps_dep.iter().enumerate() {
                for (j, m) in g.eps_imp.iter().enumerate() {
                    let _ = writeln!(out, "{d},{m},{},{},{}", g.theorem[i][j], g.theorem_stderr[i][j], g.mean[i][j]);
                }
            }
            write_output(&a.output, &out)?;
            Ok(Outcome { output: a.output.clone(), seed: Some(a.schedule.seed) })
        }
        Command::Firewall(a) => {
            let dag = session.graph(&a.graph)?;
            let partition = partition_from_json(&dag, &session.read(&a.partition)?)?;
            let r = firewall_delta(&dag, &partition, a.beta, a.n_flip, &a.schedule.schedule())?;
            let extra = vec![
                ("delta_l1".into(), r.delta_l1.to_string()),
                ("delta_l1_stderr".into(), r.delta_l1_stderr.to_string()),
                ("within_mean".into(), r.within_mean.to_string()),
                ("baseline_mean".into(), r.baseline_mean.to_string()),
                ("baseline_stderr".into(), r.baseline_stderr.to_string()),
                ("n_states".into(), r.n_states.to_string()),
            ];
            let mut out = csv_header("firewall", &params_of(a), &extra);
            out.push_str("module,size,mean_penalty\n");
            for m in &r.modules {
                let _ = writeln!(out, "{},{},{}", m.module, m.size, m.mean_penalty);
            }
            write_output(&a.output, &out)?;
            Ok(Outcome { output: a.output.clone(), seed: Some(a.schedule.seed) })
        }
        Command::Export(a) => {
            let dag = session.graph(&a.graph)?;
            let format = if a.dot { GraphFormat::Dot } else { a.format.parse()? };
            let partition = match &a.partition {
                Some(p) => Some(partition_from_json(&dag, &session.read(p)?)?),
                None => None,
            };
            write_output(&a.output, &export_graph(&dag, format, partition.as_ref())?)?;
            Ok(Outcome { output: a.output.clone(), seed: None })
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn command_name(c: &Command) -> (&'static str, serde_json::Value) {
    match c {
        Command::Ingest(a) => ("ingest", params_of(a)),
        Command::Gen(a) => ("gen", params_of(a)),
        Command::Truncate(a) => ("truncate", params_of(a)),
        Command::Stats(a) => ("stats", params_of(a)),
        Command::Communities(a) => ("communities", params_of(a)),
        Command::Simulate(a) => ("simulate", params_of(a)),
        Command::Sweep(a) => ("sweep", params_of(a)),
        Command::PriorCurve(a) => ("prior-curve", params_of(a)),
        Command::Grid(a) => ("grid", params_of(a)),
        Command::Firewall(a) => ("firewall", params_of(a)),
        Command::Export(a) => ("export", params_of(a)),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Domain(_) => 1,
        _ => 2,
    }
}

fn thread_count(flag: Option<usize>) -> std::result::Result<Option<usize>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("EPT_LAB_THREADS") {
        Ok(v) => {
            v.trim().parse().map(Some).map_err(|_| format!("EPT_LAB_THREADS must be a positive integer, got `{v}`"))
        }
        Err(_) => Ok(None),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let threads = match thread_count(cli.threads) {
        Ok(Some(0)) => {
            eprintln!("error: thread count must be at least 1");
            return 1;
        }
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return 2;
        }
    };

    let started = Instant::now();
    let mut session = Session::default();
    let result = pool.install(|| execute(&cli.command, &mut session));
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };

    let (name, params) = command_name(&cli.command);
    let manifest = RunManifest {
        argv: &argv,
        command: name,
        inputs: session.inputs,
        params,
        seed: outcome.seed,
        version: VERSION,
        duration_secs: started.elapsed().as_secs_f64(),
    };
    let text = match serde_json::to_string_pretty(&manifest) {
        Ok(t) => t + "\n",
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let target = cli.manifest.clone().or_else(|| {
        (outcome.output != Path::new("-")).then(|| {
            let mut p = outcome.output.clone().into_os_string();
            p.push(".manifest.json");
            PathBuf::from(p)
        })
    });
    match target {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write manifest {}: {e}", path.display());
                return 2;
            }
        }
        None => eprint!("{text}"),
    }
    0
}
