//! `slocc`: overlaps, the 2×3×3 table, witness checks, PPT bounds, GHZ/W thresholds and the
//! class hierarchy.
//!
//! Exit codes: 0 success (or witness confirmed), 1 witness violated, 2 bad state id or
//! arguments, 3 dimension mismatch, 4 trivial witness, 5 dimension budget exceeded, 6 other.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use slocc_core::ghzw::{threshold_row, SupSearch};
use slocc_core::hierarchy::HierarchyGraph;
use slocc_core::overlap::TableSummary;
use slocc_core::sdp::{build_ppt_relaxation, ppt_bound_lambda, BoundConfig, SolverSettings};
use slocc_core::witness::{build_witness, embed, verify_slocc_witness, witness_json, Verdict};
use slocc_core::{maximize_slocc_overlap, overlap_table, representative, Error, OptimizerConfig, StateId};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "slocc", version, about = "SLOCC overlaps, witnesses and PPT bounds")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Base seed of every randomized routine.
    #[arg(long, global = true, env = "SLOCC_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Optimizer restarts.
    #[arg(long, global = true, default_value_t = 200)]
    restarts: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal squared overlap between a target state and the orbit of another.
    Overlap {
        #[arg(long)]
        target: String,
        #[arg(long)]
        orbit: String,
    },
    /// The overlap table over the fully entangled 2×3×3 representatives.
    Table233 {
        /// Comma-separated state ids (default psi6..psi17).
        #[arg(long, value_delimiter = ',')]
        ids: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// DOT graph of the saturated cells of a table (CSV or JSON).
    Hierarchy {
        table: PathBuf,
        /// Keep only edges not implied by longer paths.
        #[arg(long)]
        reduce: bool,
    },
    /// Check whether `lambda·1 − |phi⟩⟨phi|` is nonnegative on the orbit.
    WitnessCheck {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        orbit: String,
    },
    /// Smallest lambda certified by the PPT relaxation of the two-copy embedding.
    SdpBound {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        /// Largest relaxation dimension attempted.
        #[arg(long, default_value_t = slocc_core::sdp::DEFAULT_MAX_DIM)]
        max_dim: usize,
        #[arg(long, default_value_t = 1e-3)]
        bisect_tol: f64,
        /// Also write the relaxation at the returned lambda as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Analytic, parametric and optimizer values of the GHZ_N / W_N threshold.
    Ghzw {
        #[arg(long)]
        n: usize,
        /// Starts of the parametric search.
        #[arg(long, default_value_t = 64)]
        trials: usize,
        /// Let the phases vary in the parametric search.
        #[arg(long)]
        free_beta: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

/// Error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidStateId(_) => 2,
            Error::Shape(_) | Error::InvalidParty { .. } => 3,
            Error::BudgetExceeded { .. } => 5,
            _ => 6,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 6, message: e.to_string() }
    }
}

fn parse_id(s: &str) -> Result<StateId, Failure> {
    let id: StateId = s.parse()?;
    if id == StateId::Custom {
        return Err(Error::InvalidStateId("custom has no representative".into()).into());
    }
    Ok(id)
}

fn optimizer(g: &Global) -> OptimizerConfig {
    OptimizerConfig::default().with_seed(g.seed).with_restarts(g.restarts)
}

fn envelope(kind: &str, g: &Global, body: Value) -> Value {
    json!({ "schemaVersion": SCHEMA_VERSION, "version": VERSION, "command": kind, "seed": g.seed, "result": body })
}

fn emit(text: &str) {
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"));
}

fn cmd_overlap(g: &Global, target: &str, orbit: &str) -> Result<u8, Failure> {
    let (t, o) = (parse_id(target)?, parse_id(orbit)?);
    let (phi, psi) = (representative(&t)?, representative(&o)?);
    if phi.dims() != psi.dims() {
        return Err(Error::Shape(format!("{t} has dims {:?}, {o} has {:?}", phi.dims(), psi.dims())).into());
    }
    let body = if t == o {
        json!({ "target": t, "orbit": o, "lambda": 1.0, "selfPair": true })
    } else {
        let r = maximize_slocc_overlap(&phi, &psi, &optimizer(g))?;
        json!({ "target": t, "orbit": o, "lambda": r.lambda, "selfPair": false, "overlap": r })
    };
    print_json(&envelope("overlap", g, body));
    Ok(0)
}

fn cmd_table(g: &Global, ids: Option<&[String]>, format: Format, output: Option<&PathBuf>) -> Result<u8, Failure> {
    let ids = match ids {
        Some(list) => list.iter().map(|s| parse_id(s.trim())).collect::<Result<Vec<_>, _>>()?,
        None => StateId::all_psi(),
    };
    let table = overlap_table(&ids, &optimizer(g))?;
    let text = match format {
        Format::Csv => table.summary().to_csv(),
        Format::Text => table.summary().to_text(),
        Format::Json => serde_json::to_string_pretty(&table.to_json(VERSION)).expect("serializable") + "\n",
    };
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => emit(&text),
    }
    Ok(0)
}

fn cmd_hierarchy(path: &PathBuf, reduce: bool) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: 6, message: format!("{}: {e}", path.display()) })?;
    let table = TableSummary::parse(&text)
        .map_err(|e| Failure { code: 6, message: format!("{}: malformed table: {e}", path.display()) })?;
    let graph = HierarchyGraph::from_table(&table);
    let graph = if reduce { graph.transitive_reduction() } else { graph };
    emit(&graph.to_dot());
    Ok(0)
}

fn cmd_witness(g: &Global, lambda: f64, phi: &str, orbit: &str) -> Result<u8, Failure> {
    let (p, o) = (parse_id(phi)?, parse_id(orbit)?);
    let phi_state = representative(&p)?;
    let psi_dims = representative(&o)?.dims().to_vec();
    if phi_state.dims() != psi_dims {
        return Err(Error::Shape(format!("{p} has dims {:?}, {o} has {psi_dims:?}", phi_state.dims())).into());
    }
    let w = build_witness(lambda, &phi_state, o)?;
    let report = verify_slocc_witness(&w, &optimizer(g))?;
    print_json(&envelope("witness-check", g, witness_json(&w, Some(&p), &report)));
    Ok(match report.verdict {
        Verdict::Witness { .. } => 0,
        Verdict::Violated { .. } => 1,
        Verdict::Trivial => 4,
    })
}

fn cmd_sdp(g: &Global, phi: &str, psi: &str, max_dim: usize, bisect_tol: f64, dump: Option<&PathBuf>) -> Result<u8, Failure> {
    let (p, q) = (parse_id(phi)?, parse_id(psi)?);
    let (phi_state, psi_state) = (representative(&p)?, representative(&q)?);
    let cfg = BoundConfig {
        bisect_tol,
        solver: SolverSettings { max_dim, ..SolverSettings::default() },
        ..BoundConfig::default()
    };
    let bound = ppt_bound_lambda(&phi_state, &psi_state, &cfg)?;
    if let Some(path) = dump {
        let e = embed(&build_witness(bound.lambda, &phi_state, q.clone())?, &psi_state)?;
        let problem = build_ppt_relaxation(&e).to_json();
        std::fs::write(path, serde_json::to_string_pretty(&problem).expect("serializable"))?;
    }
    let body = json!({
        "phi": p,
        "psi": q,
        "lambda": bound.lambda,
        "trivial": bound.lambda >= 1.0 - cfg.bisect_tol,
        "bisectTol": cfg.bisect_tol,
        "steps": bound.steps,
    });
    print_json(&envelope("sdp-bound", g, body));
    Ok(0)
}

fn cmd_ghzw(g: &Global, n: usize, trials: usize, free_beta: bool) -> Result<u8, Failure> {
    let search = SupSearch { trials, seed: g.seed, free_beta, ..SupSearch::default() };
    let row = threshold_row(n, &search, &optimizer(g))?;
    print_json(&envelope("ghzw", g, json!(row)));
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Overlap { target, orbit } => cmd_overlap(g, target, orbit),
        Command::Table233 { ids, format, output } => cmd_table(g, ids.as_deref(), *format, output.as_ref()),
        Command::Hierarchy { table, reduce } => cmd_hierarchy(table, *reduce),
        Command::WitnessCheck { lambda, phi, orbit } => cmd_witness(g, *lambda, phi, orbit),
        Command::SdpBound { phi, psi, max_dim, bisect_tol, dump } => {
            cmd_sdp(g, phi, psi, *max_dim, *bisect_tol, dump.as_ref())
        }
        Command::Ghzw { n, trials, free_beta } => cmd_ghzw(g, *n, *trials, *free_beta),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("slocc: {e}");
            return ExitCode::from(6);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("slocc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
