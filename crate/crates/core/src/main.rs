use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nugraph::analyze::run_suite;
use nugraph::config::{load_config, InstanceConfig};
use nugraph::{export, svg};

/// Build, check, evaluate and render regular weighted nu-graphs.
#[derive(Parser)]
#[command(name = "nugraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Instance description (JSON).
    config: PathBuf,
    /// Overrides the tolerance given in the config file.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print k, d, tau, u, v (and the residue-class subgraphs when d > 1).
    Build(Common),
    /// Run every check; exit 0 when all applicable checks pass, 1 otherwise.
    Check(Common),
    /// Print the sorted ordinates of the graph above q.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
    },
    /// Write an SVG of the window.
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the component functions as CSV.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
    },
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn fail(kind: &str, message: impl ToString) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message.to_string() }));
    ExitCode::from(EXIT_INPUT)
}

fn load(common: &Common) -> Result<InstanceConfig, ExitCode> {
    let mut cfg = load_config(&common.config).map_err(|e| {
        eprintln!("{}", e.to_json_line());
        ExitCode::from(EXIT_INPUT)
    })?;
    if let Some(tol) = common.tolerance {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(fail("UsageError", "--tolerance must be a finite number > 0"));
        }
        cfg.tolerance = tol;
    }
    Ok(cfg)
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExitCode> {
    std::fs::write(path, contents).map_err(|e| fail("IoError", format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<ExitCode, ExitCode> {
    let common = match &command {
        Command::Build(c) | Command::Check(c) => c,
        Command::Eval { common, .. } | Command::Plot { common, .. } | Command::Export { common, .. } => common,
    };
    let cfg = load(common)?;
    let graph = cfg.graph().map_err(|e| fail("ValidationError", e))?;
    let (t_lo, t_hi) = (cfg.window.t_min, cfg.window.t_max);
    let w = graph.weights();

    match &command {
        Command::Build(_) => print_json(&json!({
            "l": w.l(), "m": w.m(), "n": w.n(), "k": w.k(), "d": w.d(),
            "tau": graph.tau(),
            "sigma": graph.rho().sigma(),
            "u": graph.u(),
            "v": graph.v(),
            "subgraphs": graph.subgraphs(),
        })),
        Command::Check(_) => {
            let report = run_suite(&graph, t_lo, t_hi, cfg.tolerance).map_err(|e| fail("ValidationError", e))?;
            print_json(&json!({ "all_pass": report.all_pass(), "checks": report.entries }));
            if !report.all_pass() {
                return Ok(ExitCode::from(EXIT_CHECK_FAILED));
            }
        }
        Command::Eval { q, .. } => {
            if !(*q >= 0.0) {
                return Err(fail("UsageError", format!("--q must be non-negative, got {q}")));
            }
            let values = graph.evaluate(*q).map_err(|e| fail("UsageError", e))?;
            print_json(&json!({ "q": q, "values": values, "sum": values.iter().sum::<f64>() }));
        }
        Command::Plot { out, .. } => {
            let text = svg::render(&graph, t_lo, t_hi).map_err(|e| fail("ValidationError", e))?;
            write_file(out, &text)?;
            let segments = graph.segments_in_window(t_lo, t_hi).map_err(|e| fail("ValidationError", e))?.len();
            print_json(&json!({ "out": out, "segments": segments }));
        }
        Command::Export { out, .. } => {
            let sys = graph.component_functions(t_lo, t_hi).map_err(|e| fail("ValidationError", e))?;
            write_file(out, &export::to_csv_string(&sys, cfg.samples_per_piece))?;
            print_json(&json!({ "out": out, "pieces": sys.pieces.len() }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(cli.command).unwrap_or_else(|code| code)
}
