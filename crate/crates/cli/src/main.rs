//! Command-line driver: build, solve, verify, sweep, and render matchstick
//! constructions.
//!
//! Exit codes: 0 on success, 1 when verification fails, 2 on usage errors,
//! 3 on construction, solve, or I/O errors.

use clap::{Args, Parser, Subcommand};
use matchstick_core::{
    parse_script, render_svg, solve_param_with, sweep, sweep_to_csv, verify, CheckConfig,
    Construction, Embedding, RenderOptions, SolveResult,
};
use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "matchstick",
    version,
    about = "Executes ruler-compass construction scripts for matchstick graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a construction and write the embedding as JSON.
    Build(BuildArgs),
    /// Solve the free parameter so the closing edge reaches its target.
    Solve(SolveArgs),
    /// Check degrees, girth, unit lengths, crossings, clearance, symmetry.
    Verify(VerifyArgs),
    /// Sample the free parameter across a range and write CSV.
    Sweep(SweepArgs),
    /// Draw the embedding as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Construction script to execute.
    #[arg(
        value_name = "SCRIPT",
        required_unless_present = "builtin",
        conflicts_with = "builtin"
    )]
    script: Option<PathBuf>,
    /// Use the bundled 54-vertex construction instead of a script file.
    #[arg(long)]
    builtin: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Override a declared parameter (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_override)]
    params: Vec<(String, f64)>,
    /// Solve the free parameter first and build at the solution.
    #[arg(long)]
    at_solved: bool,
    /// Write to a file instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Lower bracket end in degrees (defaults to the script's directive).
    #[arg(long, requires = "hi")]
    lo: Option<f64>,
    /// Upper bracket end in degrees.
    #[arg(long, requires = "lo")]
    hi: Option<f64>,
    /// Residual tolerance on the closing length.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Write the solve report JSON to a file instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Construction script to execute and verify.
    #[arg(
        value_name = "SCRIPT",
        required_unless_present_any = ["builtin", "embedding"],
        conflicts_with_all = ["builtin", "embedding"]
    )]
    script: Option<PathBuf>,
    /// Use the bundled 54-vertex construction.
    #[arg(long, conflicts_with = "embedding")]
    builtin: bool,
    /// Verify a previously built embedding JSON file instead.
    #[arg(long, value_name = "FILE")]
    embedding: Option<PathBuf>,
    /// Override a declared parameter (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_override,
          conflicts_with = "embedding")]
    params: Vec<(String, f64)>,
    /// Solve the free parameter first and verify at the solution.
    #[arg(long, conflicts_with = "embedding")]
    at_solved: bool,
    /// Maximum allowed deviation of edge lengths from 1.
    #[arg(long, default_value_t = 1e-9)]
    unit_tol: f64,
    /// Minimum required clearance between nonadjacent features.
    #[arg(long, default_value_t = 1e-6)]
    clearance_floor: f64,
    /// Write the report JSON to a file instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Lower end of the sampled range (defaults to the script's bracket).
    #[arg(long, requires = "hi")]
    lo: Option<f64>,
    /// Upper end of the sampled range.
    #[arg(long, requires = "lo")]
    hi: Option<f64>,
    /// Number of uniform samples, endpoints included.
    #[arg(long, default_value_t = 201)]
    steps: usize,
    /// Write the CSV to a file instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Override a declared parameter (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_override)]
    params: Vec<(String, f64)>,
    /// Solve the free parameter first and render at the solution.
    #[arg(long)]
    at_solved: bool,
    /// Pixels per unit length.
    #[arg(long, default_value_t = 60.0)]
    scale: f64,
    /// Draw vertex names next to the markers.
    #[arg(long)]
    labels: bool,
    #[arg(long, default_value = "gray")]
    edge_color: String,
    #[arg(long, default_value = "red")]
    vertex_color: String,
    /// Vertex marker radius in pixels.
    #[arg(long, default_value_t = 3.0)]
    vertex_radius: f64,
    /// Padding around the drawing in pixels.
    #[arg(long, default_value_t = 12.0)]
    margin: f64,
    /// Write the SVG to a file instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(String),
}

fn run_err(e: impl Display) -> Failure {
    Failure::Run(e.to_string())
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("empty parameter name in '{s}'"));
    }
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("'{}' is not a number", value.trim()))?;
    Ok((name.to_string(), value))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Run(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Render(args) => cmd_render(args),
    }
}

fn load(source: &SourceArgs) -> Result<Construction, Failure> {
    load_from(source.script.as_ref(), source.builtin)
}

fn load_from(script: Option<&PathBuf>, builtin: bool) -> Result<Construction, Failure> {
    if builtin {
        return Ok(matchstick_core::builtin_graph54());
    }
    let path = script.expect("clap guarantees a source");
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Run(format!("cannot read {}: {e}", path.display())))?;
    parse_script(&text).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

/// Unknown parameter names are usage errors, caught before execution.
fn check_overrides(c: &Construction, params: &[(String, f64)]) -> Result<(), Failure> {
    for (name, _) in params {
        if !c.parameters.contains_key(name) {
            let known: Vec<&str> = c.parameters.keys().map(String::as_str).collect();
            return Err(Failure::Usage(format!(
                "unknown parameter '{name}'; the script declares: {}",
                known.join(", ")
            )));
        }
    }
    Ok(())
}

fn solve_default(c: &Construction) -> Result<SolveResult, Failure> {
    solve_param_with(c, None, 1e-12).map_err(run_err)
}

/// Applies overrides and, when requested, the solved parameter value on top.
fn build_embedding(
    c: &Construction,
    params: &[(String, f64)],
    at_solved: bool,
) -> Result<Embedding, Failure> {
    let mut overrides: Vec<(String, f64)> = params.to_vec();
    if at_solved {
        let solved = solve_default(c)?;
        overrides.push((solved.param_name, solved.value));
    }
    let refs: Vec<(&str, f64)> = overrides.iter().map(|(n, v)| (n.as_str(), *v)).collect();
    c.execute_with(&refs).map_err(run_err)
}

fn write_out(path: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match path {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn bracket_of(lo: Option<f64>, hi: Option<f64>) -> Option<(f64, f64)> {
    lo.zip(hi)
}

fn cmd_build(args: BuildArgs) -> Result<ExitCode, Failure> {
    let c = load(&args.source)?;
    check_overrides(&c, &args.params)?;
    let e = build_embedding(&c, &args.params, args.at_solved)?;
    write_out(args.output.as_ref(), &e.to_json_string())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Failure> {
    let c = load(&args.source)?;
    let result = solve_param_with(&c, bracket_of(args.lo, args.hi), args.tol).map_err(run_err)?;
    println!("{} = {:.12}", result.param_name, result.value);
    let json = serde_json::to_string_pretty(&result).map_err(run_err)?;
    write_out(args.output.as_ref(), &format!("{json}\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let e = match &args.embedding {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Run(format!("cannot read {}: {e}", path.display())))?;
            Embedding::from_json_str(&text)
                .map_err(|e| Failure::Run(format!("{}: {e}", path.display())))?
        }
        None => {
            let c = load_from(args.script.as_ref(), args.builtin)?;
            check_overrides(&c, &args.params)?;
            build_embedding(&c, &args.params, args.at_solved)?
        }
    };
    let config = CheckConfig {
        unit_tol: args.unit_tol,
        clearance_floor: args.clearance_floor,
        ..CheckConfig::default()
    };
    let report = verify(&e, &config);
    let json = serde_json::to_string_pretty(&report).map_err(run_err)?;
    write_out(args.output.as_ref(), &format!("{json}\n"))?;
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Failure> {
    let c = load(&args.source)?;
    let samples = sweep(&c, bracket_of(args.lo, args.hi), args.steps).map_err(run_err)?;
    write_out(args.output.as_ref(), &sweep_to_csv(&samples))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_render(args: RenderArgs) -> Result<ExitCode, Failure> {
    let c = load(&args.source)?;
    check_overrides(&c, &args.params)?;
    let e = build_embedding(&c, &args.params, args.at_solved)?;
    let opts = RenderOptions {
        scale: args.scale,
        show_labels: args.labels,
        edge_color: args.edge_color,
        vertex_color: args.vertex_color,
        vertex_radius: args.vertex_radius,
        margin: args.margin,
    };
    let svg = render_svg(&e, &opts).map_err(run_err)?;
    write_out(args.output.as_ref(), &svg)?;
    Ok(ExitCode::SUCCESS)
}
