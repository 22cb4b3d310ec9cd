//! Command line entry point.
//!
//! Exit codes: 0 on success, 2 for configuration and bounds errors (bad
//! config file, bad flags), 3 when a resource cap would be exceeded, 1 for
//! everything else (domain or numerical failures, I/O).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prefractal::error::Error;
use prefractal::geom::Vec2;
use prefractal_cli::{classify_points, parse_config, pgm, run_report, RunConfig};

#[derive(Parser)]
#[command(name = "prefractal", version, about = "Finite-depth self-similar boundary analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all configured analyses and emit a JSON report.
    Analyze {
        /// Configuration file (line-oriented `key = value`).
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write an SVG rendering of the scene and witnesses.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Override the configured depth.
        #[arg(long)]
        depth: Option<u32>,
        /// Override the configured grid resolution (cells per unit).
        #[arg(long)]
        resolution: Option<u32>,
        /// Record wall-clock stage timings in the report (makes report
        /// bytes vary run to run).
        #[arg(long)]
        timings: bool,
        /// Write the final-depth occupancy grid as a binary PGM.
        #[arg(long)]
        pgm_occupancy: Option<PathBuf>,
        /// Write the final-depth distance field as a 16-bit binary PGM.
        #[arg(long)]
        pgm_distance: Option<PathBuf>,
    },
    /// Decide which complementary component each point lies in and whether
    /// the radial maps based at them are homotopic.
    Classify {
        /// Configuration file defining the scene.
        #[arg(long)]
        config: PathBuf,
        /// Query point as `X,Y`; give at least two.
        #[arg(long = "point", value_name = "X,Y", value_parser = parse_point)]
        points: Vec<Vec2>,
    },
}

fn parse_point(text: &str) -> Result<Vec2, String> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| format!("`{text}` is not a point; expected `X,Y`"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{}` is not a number", s.trim()))
            .and_then(|v| if v.is_finite() { Ok(v) } else { Err(format!("`{s}` is not finite")) })
    };
    Ok(Vec2 { x: parse(x)?, y: parse(y)? })
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Config(_) | Error::Bounds(_) => 2,
            Error::Resource(_) => 3,
            Error::Domain(_) | Error::Numerical(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("prefractal: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            config,
            out,
            svg,
            depth,
            resolution,
            timings,
            pgm_occupancy,
            pgm_distance,
        } => {
            let mut run_config = load_config(&config)?;
            run_config.apply_overrides(depth, resolution)?;
            run_config.timings = timings;
            let output = run_report(&run_config)?;
            let json = output.report.to_json_bytes();
            match &out {
                Some(path) => write_file(path, &json)?,
                None => print_bytes(&json)?,
            }
            if let Some(path) = &svg {
                write_file(path, output.render_svg().as_bytes())?;
            }
            if let Some(path) = &pgm_occupancy {
                write_file(path, &pgm::occupancy_pgm(&output.grid))?;
            }
            if let Some(path) = &pgm_distance {
                write_file(path, &pgm::distance_pgm(&output.field))?;
            }
            Ok(())
        }
        Command::Classify { config, points } => {
            let run_config = load_config(&config)?;
            let outcome = classify_points(&run_config, &points)?;
            for (i, (p, label)) in points.iter().zip(&outcome.labels).enumerate() {
                println!("point {i} ({}, {}): component label {label}", p.x, p.y);
            }
            for (i, j, equivalent) in &outcome.verdicts {
                let verdict = if *equivalent { "equivalent" } else { "distinct" };
                println!("points {i} and {j}: radial maps {verdict}");
            }
            Ok(())
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read config {}: {e}", path.display()),
    })?;
    Ok(parse_config(&text)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure {
        code: 1,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn print_bytes(bytes: &[u8]) -> Result<(), Failure> {
    use std::io::Write;
    std::io::stdout()
        .write_all(bytes)
        .map_err(|e| Failure { code: 1, message: format!("cannot write to stdout: {e}") })
}
