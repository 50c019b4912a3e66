//! `hodge-spectra`: Helmholtzian matrices, spectra and invariant checks from
//! the command line.
//!
//! Exit status: 0 on success (and when every check passes), 1 when a check
//! fails, 2 on bad input.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use rayon::prelude::*;

use hodge_core::combinatorics::DEFAULT_ORACLE_BUDGET;
use hodge_core::io::parse_graph6_lines;
use hodge_core::report::{render, run_command, Command, Format, Input, RunReport};
use hodge_core::spectral::DEFAULT_CLUSTER_TOL;
use hodge_core::verify::VerifyOptions;

#[derive(Debug, Parser)]
#[command(name = "hodge-spectra", version, about = "Helmholtzian (Hodge 1-Laplacian) spectra of simple graphs")]
#[command(group(ArgGroup::new("source").args(["input", "graph6", "family", "batch"]).required(true)))]
struct Cli {
    /// matrix, spectrum, charpoly, nullity, triangles, bounds, family or verify.
    command: Command,

    /// Edge-list file (`-` for stdin).
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,

    /// A graph6 string.
    #[arg(long, value_name = "STR")]
    graph6: Option<String>,

    /// A family spec such as `split:4,2` or `join(complete:3,cycle:4)`.
    #[arg(long, value_name = "SPEC")]
    family: Option<String>,

    /// A file with one graph6 string per line; lines are processed in parallel.
    #[arg(long, value_name = "FILE")]
    batch: Option<PathBuf>,

    #[arg(long, default_value = "json")]
    format: Format,

    #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
    cluster_tol: f64,

    /// Partial-state budget for the basic-subgraph enumeration.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    oracle_budget: u64,

    /// Seed for random vectors and orientations in `verify`.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn read_source(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn status(report: &RunReport) -> u8 {
    if report.passed() {
        0
    } else {
        EXIT_CHECK_FAILED
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    if !(cli.cluster_tol > 0.0 && cli.cluster_tol < 1.0) {
        return Err(format!("--cluster-tol must lie in (0, 1), got {}", cli.cluster_tol));
    }
    let opts = VerifyOptions {
        cluster_tol: cli.cluster_tol,
        oracle_budget: cli.oracle_budget,
        seed: cli.seed,
        ..VerifyOptions::default()
    };
    if let Some(path) = &cli.batch {
        return run_batch(cli, &read_source(path)?, &opts);
    }
    let input = if let Some(path) = &cli.input {
        Input::EdgeList { source: path.display().to_string(), text: read_source(path)? }
    } else if let Some(s) = &cli.graph6 {
        Input::Graph6(s.clone())
    } else {
        Input::Family(cli.family.clone().expect("clap requires one source"))
    };
    let report = run_command(cli.command, &input, &opts).map_err(|e| e.to_string())?;
    print!("{}", render(&report, cli.format));
    Ok(status(&report))
}

fn run_batch(cli: &Cli, text: &str, opts: &VerifyOptions) -> Result<u8, String> {
    let (lines, warnings) = parse_graph6_lines(text);
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let results: Vec<(usize, Result<RunReport, String>)> = lines
        .par_iter()
        .map(|(line, parsed)| {
            let r = match parsed {
                Ok(_) => {
                    let s = text.lines().nth(line - 1).unwrap_or_default().to_string();
                    run_command(cli.command, &Input::Graph6(s), opts).map_err(|e| e.to_string())
                }
                Err(e) => Err(e.to_string()),
            };
            (*line, r)
        })
        .collect();
    let mut code = 0u8;
    let mut json_items = Vec::new();
    for (line, r) in &results {
        match r {
            Ok(report) => {
                code = code.max(status(report));
                if cli.format == Format::Json {
                    json_items.push(serde_json::json!({ "line": line, "report": report }));
                } else {
                    print!("# line {line}\n{}", render(report, cli.format));
                }
            }
            Err(e) => {
                code = EXIT_INPUT;
                eprintln!("error: line {line}: {e}");
                if cli.format == Format::Json {
                    json_items.push(serde_json::json!({ "line": line, "error": e }));
                }
            }
        }
    }
    if cli.format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&json_items).expect("reports serialize"));
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
