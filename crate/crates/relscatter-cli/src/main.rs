//! Command-line front end: kernel evaluation, Lippmann-Schwinger solves,
//! far-field diagnostics, verification suites and report merging.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 configuration
//! or usage error.

mod config;
mod suites;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use config::RunConfig;
use relscatter::farfield;
use relscatter::grids::{build_ball_grid, build_radial_grid};
use relscatter::kernels::{g_boundary, Sign};
use relscatter::solver::{born_iterate, nystrom_solve_radial, BornOptions, ScatteredSolution};
use relscatter::Real;
use suites::CheckResult;

#[derive(Parser)]
#[command(name = "relscatter", version, about = "Resolvent kernels and eigenfunction solvers for the square-root Laplacian with a potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the boundary resolvent kernel at given radii.
    EvalKernel {
        #[arg(long)]
        lambda: Real,
        /// Boundary-value sign, "+" or "-".
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
        /// Radius; repeat for several rows.
        #[arg(long, required = true)]
        r: Vec<Real>,
    },
    /// Solve the modified Lippmann-Schwinger equation per the config file.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Overrides [output].csv from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Scattering amplitude and decay-rate fits along the default rays.
    Farfield {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run named verification suites and emit one JSON line per check.
    Verify {
        /// Suite name; repeat for several. Defaults to the config list.
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Merge JSON-lines check outputs into one summary table.
    Report {
        /// Input files produced by `verify`.
        inputs: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("RELSCATTER_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Ok(true) = clean run, Ok(false) = a check failed, Err = config error.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::EvalKernel { lambda, sign, r } => eval_kernel(lambda, &sign, &r),
        Command::Solve { config, output } => solve(&config, output.as_deref()),
        Command::Farfield { config } => run_farfield(&config),
        Command::Verify { suite, config } => verify(&suite, config.as_deref()),
        Command::Report { inputs } => report(&inputs),
    }
}

fn eval_kernel(lambda: Real, sign: &str, radii: &[Real]) -> Result<bool> {
    let sign: Sign = sign.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for &r in radii {
        let k = g_boundary(lambda, sign, r).map_err(|e| anyhow::anyhow!("{e}"))?;
        let row = serde_json::json!({
            "lambda": lambda,
            "sign": sign.as_str(),
            "r": r,
            "riesz": k.riesz_part,
            "wave_re": k.wave_part.re,
            "wave_im": k.wave_part.im,
            "correction": k.correction,
        });
        writeln!(out, "{row}")?;
    }
    Ok(true)
}

fn solve_from_config(cfg: &RunConfig) -> Result<ScatteredSolution> {
    cfg.validate_for_solve()?;
    let v = cfg.potential()?;
    let sign = cfg.sign()?;
    let sol = match cfg.solver.mode.as_str() {
        "nystrom-radial" => {
            let grid = build_radial_grid(cfg.grid.r_dom, cfg.grid.n_r, cfg.grid.n_ang, cfg.grid.n_phi)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            nystrom_solve_radial(cfg.solver.lambda, sign, &v, &grid, cfg.solver.tol)
        }
        "born" => {
            let grid = build_ball_grid(cfg.grid.r_dom, cfg.grid.n_r, cfg.grid.n_ang)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let opts = BornOptions {
                tol: cfg.solver.tol,
                max_iter: cfg.solver.max_iter,
                relax: cfg.solver.relaxation,
                initial: None,
            };
            born_iterate([0.0, 0.0, cfg.solver.lambda], sign, &v, &grid, &opts)
        }
        other => bail!("unknown solver mode {other:?}"),
    }
    .map_err(|e| anyhow::anyhow!("solve failed: {e}"))?;
    Ok(sol)
}

/// 17 significant digits, locale-independent.
fn fmt17(x: Real) -> String {
    format!("{x:.16e}")
}

fn solve(config: &std::path::Path, output: Option<&std::path::Path>) -> Result<bool> {
    let cfg = RunConfig::load(config)?;
    let sol = solve_from_config(&cfg)?;
    let mut csv = String::new();
    for (pos, phi) in sol.node_positions().iter().zip(&sol.phi) {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt17(pos[0]),
            fmt17(pos[1]),
            fmt17(pos[2]),
            fmt17(phi.re),
            fmt17(phi.im)
        ));
    }
    let meta = serde_json::json!({
        "lambda": sol.lambda,
        "sign": sol.sign.as_str(),
        "mode": cfg.solver.mode,
        "nodes": sol.phi.len(),
        "residual": sol.residual,
        "iterations": sol.iterations,
    });
    let csv_path = output
        .map(|p| p.to_path_buf())
        .or_else(|| cfg.output.csv.as_ref().map(PathBuf::from));
    match csv_path {
        Some(path) => {
            std::fs::write(&path, csv)
                .with_context(|| format!("cannot write {}", path.display()))?;
            println!("{meta}");
        }
        None => {
            // metadata to stderr so stdout stays a clean CSV stream
            print!("{csv}");
            eprintln!("{meta}");
        }
    }
    Ok(true)
}

fn run_farfield(config: &std::path::Path) -> Result<bool> {
    let cfg = RunConfig::load(config)?;
    let sol = solve_from_config(&cfg)?;
    let v = cfg.potential()?;
    let lambda = sol.lambda;
    let omega_k = [sol.k[0] / lambda, sol.k[1] / lambda, sol.k[2] / lambda];
    let radii = farfield::default_radii();
    let opts = farfield::FieldOptions::default();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for ray in farfield::default_rays(omega_k) {
        let f = farfield::scattering_amplitude(lambda, ray, omega_k, &sol, &v)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let fit = farfield::planewave_diff_decay(&sol, &v, ray, &radii, &opts)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let row = serde_json::json!({
            "ray": ray,
            "amplitude_re": f.re,
            "amplitude_im": f.im,
            "exponent": fit.exponent,
            "std_error": fit.std_error,
        });
        writeln!(out, "{row}")?;
    }
    Ok(true)
}

fn verify(requested: &[String], config: Option<&std::path::Path>) -> Result<bool> {
    let cfg = match config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.validate()?;
    let names: Vec<String> = if requested.is_empty() {
        cfg.verify.suites.clone()
    } else {
        requested.to_vec()
    };
    if names.is_empty() {
        bail!("no suites requested; available: {}", suites::SUITES.join(", "));
    }
    let mut results = Vec::new();
    for name in &names {
        results.extend(suites::run_suite(name, cfg.verify.tolerance_scale)?);
    }
    let mut text = String::new();
    for check in &results {
        text.push_str(&serde_json::to_string(check)?);
        text.push('\n');
    }
    match &cfg.output.json {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("cannot write {path}"))?
        }
        None => print!("{text}"),
    }
    Ok(results.iter().all(|c| c.pass))
}

fn report(inputs: &[PathBuf]) -> Result<bool> {
    if inputs.is_empty() {
        bail!("report needs at least one input file");
    }
    let mut merged: BTreeMap<String, CheckResult> = BTreeMap::new();
    for path in inputs {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let check: CheckResult = serde_json::from_str(line)
                .with_context(|| format!("bad check row in {}", path.display()))?;
            let key = format!("{}/{}", check.suite, check.check);
            if merged.insert(key.clone(), check).is_some() {
                eprintln!("warning: duplicate check {key}, keeping the last occurrence");
            }
        }
    }
    println!("{:<42} {:>13} {:>13}  {}", "check", "measured", "bound", "status");
    for (key, check) in &merged {
        println!(
            "{:<42} {:>13.4e} {:>13.4e}  {}",
            key,
            check.value,
            check.bound,
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(true)
}
