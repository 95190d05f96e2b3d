//! Command-line front end for projected model counting.
//!
//! Exit codes: 0 success, 2 unusable input (I/O or parse), 3 resource limit,
//! 4 internal invariant failure.

mod bench;

use std::fs;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use projmc::blocking::{self, EnumError, EnumOptions};
use projmc::cnf::{BigCount, CnfFormula, ProjectedCnf, Var};
use projmc::counter::{self, Branching, CounterError, CounterOptions};
use projmc::ddnnf;
use projmc::dimacs;
use projmc::gen::{Family, GenSpec};
use projmc::oracle;

const EXIT_PARSE: u8 = 2;
const EXIT_LIMIT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "projmc", version, about = "Projected model counting toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the projected models of a DIMACS CNF file.
    Count {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Dsharp)]
        method: Method,
        /// Priority variables, overriding any in-file declaration.
        #[arg(long, num_args = 0.., value_name = "VAR")]
        proj: Option<Vec<u32>>,
        /// Wall-clock budget in seconds.
        #[arg(long, value_name = "SECONDS")]
        time_limit: Option<f64>,
        /// Branch by smallest variable index instead of VSADS.
        #[arg(long)]
        by_index: bool,
    },
    /// Compile a CNF file into Decision-DNNF (c2d text format).
    Compile {
        file: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Re-encode a projected d-DNNF as CNF whose model count is the
    /// projected count.
    D2c {
        /// CNF input; compiled to d-DNNF internally.
        file: Option<PathBuf>,
        /// Pre-compiled .nnf input used instead of internal compilation.
        #[arg(long, value_name = "FILE", conflicts_with = "file")]
        nnf_in: Option<PathBuf>,
        #[arg(long, num_args = 0.., value_name = "VAR")]
        proj: Option<Vec<u32>>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Generate benchmark instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run an instance x method matrix and emit CSV rows.
    Bench {
        /// File listing one instance path per line.
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = Method::ALL)]
        methods: Vec<Method>,
        /// Per-cell wall-clock budget in seconds.
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        /// Worker threads running cells in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Uniform random 3-SAT.
    Uf3sat {
        #[arg(long)]
        vars: u32,
        #[arg(long)]
        clauses: u32,
        #[arg(long)]
        proj_count: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Random Boolean circuit from gate definitions.
    Circuit {
        #[arg(long)]
        inputs: u32,
        #[arg(long)]
        rounds: u32,
        #[arg(long)]
        proj_count: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Brute-force reference enumeration.
    Oracle,
    /// Priority-first DPLL counting with component caching.
    Dsharp,
    /// Blocking-clause enumeration with cube minimization.
    Blocking,
    /// Blocking-clause enumeration without minimization.
    Enum,
    /// Compile, project, re-encode, count.
    D2c,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Oracle, Method::Dsharp, Method::Blocking, Method::Enum, Method::D2c];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Dsharp => "dsharp",
            Method::Blocking => "blocking",
            Method::Enum => "enum",
            Method::D2c => "d2c",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Failure modes mapped onto the exit-code table.
pub enum CmdError {
    Input(String),
    Limit(String),
    Internal(String),
}

impl CmdError {
    fn exit(&self) -> u8 {
        match self {
            CmdError::Input(_) => EXIT_PARSE,
            CmdError::Limit(_) => EXIT_LIMIT,
            CmdError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Input(m) | CmdError::Limit(m) | CmdError::Internal(m) => m,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count { file, method, proj, time_limit, by_index } => {
            cmd_count(&file, method, proj, time_limit, by_index)
        }
        Command::Compile { file, output } => cmd_compile(&file, output.as_deref()),
        Command::D2c { file, nnf_in, proj, output } => {
            cmd_d2c(file.as_deref(), nnf_in.as_deref(), proj, output.as_deref())
        }
        Command::Gen(family) => cmd_gen(family),
        Command::Bench { manifest, methods, time_limit, jobs } => {
            bench::cmd_bench(&manifest, &methods, time_limit, jobs)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit())
        }
    }
}

fn read_input(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path)
        .map_err(|e| CmdError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn load_projected(path: &Path, proj: Option<Vec<u32>>) -> Result<ProjectedCnf, CmdError> {
    let text = read_input(path)?;
    let pf = dimacs::parse_dimacs(&text)
        .map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?;
    apply_projection(pf, proj)
}

fn apply_projection(
    pf: ProjectedCnf,
    proj: Option<Vec<u32>>,
) -> Result<ProjectedCnf, CmdError> {
    let Some(vars) = proj else { return Ok(pf) };
    let num_vars = pf.formula().num_vars();
    let mut priority = std::collections::BTreeSet::new();
    for v in vars {
        if v == 0 || v > num_vars {
            return Err(CmdError::Input(format!(
                "projection variable {v} out of range 1..={num_vars}"
            )));
        }
        priority.insert(Var::new(v));
    }
    Ok(ProjectedCnf::new(pf.formula().clone(), priority))
}

fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CmdError> {
    match path {
        Some(p) => fs::write(p, contents)
            .map_err(|e| CmdError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{contents}");
            std::io::stdout()
                .flush()
                .map_err(|e| CmdError::Internal(format!("stdout: {e}")))
        }
    }
}

/// Solver verdict for one run: the exact count plus `c stat` lines.
pub struct MethodOutcome {
    pub count: BigCount,
    pub decisions: u64,
    /// Cube quality log2(#sols / #cubes); blocking methods only.
    pub r_stat: Option<f64>,
    /// Emitted DIMACS byte size of the d2c encoding; d2c only.
    pub s_bytes: Option<usize>,
    pub extra: Vec<(String, String)>,
}

/// Runs one counting method, converting panics into internal errors so the
/// process can exit with a distinct code.
pub fn run_method(
    pf: &ProjectedCnf,
    method: Method,
    time_limit: Option<Duration>,
    by_index: bool,
) -> Result<MethodOutcome, CmdError> {
    let run = || run_method_inner(pf, method, time_limit, by_index);
    match panic::catch_unwind(AssertUnwindSafe(run)) {
        Ok(result) => result,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            Err(CmdError::Internal(format!("invariant failure: {msg}")))
        }
    }
}

fn counter_options(time_limit: Option<Duration>, by_index: bool) -> CounterOptions {
    CounterOptions {
        branching: if by_index {
            Branching::ByIndex
        } else {
            CounterOptions::default().branching
        },
        time_limit,
        ..CounterOptions::default()
    }
}

fn run_method_inner(
    pf: &ProjectedCnf,
    method: Method,
    time_limit: Option<Duration>,
    by_index: bool,
) -> Result<MethodOutcome, CmdError> {
    match method {
        Method::Oracle => {
            let count = oracle::count_projected_bruteforce(pf)
                .map_err(|e| CmdError::Limit(e.to_string()))?;
            Ok(MethodOutcome {
                count,
                decisions: 0,
                r_stat: None,
                s_bytes: None,
                extra: Vec::new(),
            })
        }
        Method::Dsharp => {
            let opts = counter_options(time_limit, by_index);
            let (count, stats) =
                counter::count_projected(pf, &opts).map_err(|e| match e {
                    CounterError::LimitReached { .. } => CmdError::Limit(e.to_string()),
                })?;
            Ok(MethodOutcome {
                count,
                decisions: stats.decisions,
                r_stat: None,
                s_bytes: None,
                extra: vec![
                    ("cache_hits".into(), stats.cache_hits.to_string()),
                    ("cache_stores".into(), stats.cache_stores.to_string()),
                    ("cubes".into(), stats.cubes_detected.to_string()),
                ],
            })
        }
        Method::Blocking | Method::Enum => {
            let opts = EnumOptions {
                minimize: method == Method::Blocking,
                time_limit,
                ..EnumOptions::default()
            };
            let (count, stats) = blocking::enumerate_with(pf, opts).map_err(|e| match e {
                EnumError::LimitReached { .. } => CmdError::Limit(e.to_string()),
            })?;
            Ok(MethodOutcome {
                count,
                decisions: stats.decisions,
                r_stat: stats.r_statistic(),
                s_bytes: None,
                extra: vec![
                    ("cubes".into(), stats.num_cubes.to_string()),
                    ("max_live_blocking".into(), stats.max_live_blocking.to_string()),
                ],
            })
        }
        Method::D2c => {
            let opts = counter_options(time_limit, by_index);
            let (count, stats) = ddnnf::count_via_d2c(pf, &opts).map_err(|e| match e {
                CounterError::LimitReached { .. } => CmdError::Limit(e.to_string()),
            })?;
            Ok(MethodOutcome {
                count,
                decisions: stats.compile_decisions + stats.count_decisions,
                r_stat: None,
                s_bytes: Some(stats.cnf_bytes),
                extra: Vec::new(),
            })
        }
    }
}

fn cmd_count(
    path: &Path,
    method: Method,
    proj: Option<Vec<u32>>,
    time_limit: Option<f64>,
    by_index: bool,
) -> Result<(), CmdError> {
    let pf = load_projected(path, proj)?;
    let limit = time_limit.map(Duration::from_secs_f64);
    let start = Instant::now();
    let outcome = run_method(&pf, method, limit, by_index)?;
    let elapsed = start.elapsed().as_secs_f64();
    println!("c stat method={}", method.name());
    println!("c stat priority_vars={}", pf.priority().len());
    println!("c stat T={elapsed:.3}");
    println!("c stat D={}", outcome.decisions);
    if let Some(r) = outcome.r_stat {
        println!("c stat R={r:.2}");
    }
    if let Some(s) = outcome.s_bytes {
        println!("c stat S={s}");
    }
    for (k, v) in &outcome.extra {
        println!("c stat {k}={v}");
    }
    println!("s {}", outcome.count);
    Ok(())
}

fn cmd_compile(path: &Path, output: Option<&Path>) -> Result<(), CmdError> {
    let pf = load_projected(path, None)?;
    let (graph, _) = counter::compile_ddnnf(pf.formula(), &CounterOptions::default())
        .map_err(|e| CmdError::Limit(e.to_string()))?;
    write_output(output, &ddnnf::nnf_to_string(&graph))
}

fn cmd_d2c(
    cnf_in: Option<&Path>,
    nnf_in: Option<&Path>,
    proj: Option<Vec<u32>>,
    output: Option<&Path>,
) -> Result<(), CmdError> {
    let (graph, priority) = match (cnf_in, nnf_in) {
        (Some(path), None) => {
            let pf = load_projected(path, proj)?;
            let (graph, _) = counter::compile_ddnnf(pf.formula(), &CounterOptions::default())
                .map_err(|e| CmdError::Limit(e.to_string()))?;
            (graph, pf.priority().clone())
        }
        (None, Some(path)) => {
            let text = read_input(path)?;
            let graph = ddnnf::parse_nnf(&text)
                .map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?;
            let vars = proj.ok_or_else(|| {
                CmdError::Input("--proj is required with --nnf-in".to_string())
            })?;
            let template = ProjectedCnf::all_priority(CnfFormula::empty(graph.num_vars()));
            let pf = apply_projection(template, Some(vars))?;
            (graph, pf.priority().clone())
        }
        _ => return Err(CmdError::Input("provide a CNF file or --nnf-in".to_string())),
    };

    let encoded = ddnnf::d2c(&graph, &priority);
    let (compacted, mapping) = ddnnf::compact_vars(&encoded);
    let mut text = String::new();
    for (old, new) in &mapping {
        text.push_str(&format!("c d2c-map {old} {new}\n"));
    }
    let mut body = Vec::new();
    dimacs::write_dimacs_plain(&compacted, &mut body)
        .map_err(|e| CmdError::Internal(e.to_string()))?;
    text.push_str(&String::from_utf8(body).expect("DIMACS is ASCII"));
    write_output(output, &text)
}

fn cmd_gen(family: GenCommand) -> Result<(), CmdError> {
    let (spec, output) = match family {
        GenCommand::Uf3sat { vars, clauses, proj_count, seed, output } => (
            GenSpec { family: Family::Uf3Sat { vars, clauses }, proj_count, seed },
            output,
        ),
        GenCommand::Circuit { inputs, rounds, proj_count, seed, output } => (
            GenSpec { family: Family::Circuit { inputs, rounds }, proj_count, seed },
            output,
        ),
    };
    let pf = spec.generate().map_err(|e| CmdError::Input(e.to_string()))?;
    let text = format!("{}\n{}", spec.comment_line(), dimacs::dimacs_to_string(&pf));
    write_output(output.as_deref(), &text)
}
