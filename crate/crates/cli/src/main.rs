//! `circwell` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use circwell::io::read_file;
use circwell::scenario::{parse_config_with_overrides, run_scenario, RunError};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "circwell",
    version,
    about = "Circular-well spectra, wave packets and revivals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate Bessel zeros (cache format).
    Zeros(Opts),
    /// Dump a spectrum table.
    Spectrum(Opts),
    /// Expand a Gaussian packet and report its moments.
    Expand(Opts),
    /// Expand, evolve and detect revivals.
    Evolve(Opts),
    /// Periodic-orbit geometry and classical timing.
    Orbits(Opts),
    /// 1D infinite well packet dynamics.
    Oned(Opts),
    /// Check the equilateral-triangle revival phases.
    TriangleCheck(Opts),
}

impl Command {
    fn parts(&self) -> (&'static str, &Opts) {
        match self {
            Command::Zeros(o) => ("zeros", o),
            Command::Spectrum(o) => ("spectrum", o),
            Command::Expand(o) => ("expand", o),
            Command::Evolve(o) => ("evolve", o),
            Command::Orbits(o) => ("orbits", o),
            Command::Oned(o) => ("oned", o),
            Command::TriangleCheck(o) => ("triangle_check", o),
        }
    }
}

/// Flags override keys of the same name in the config file.
#[derive(Args)]
struct Opts {
    /// Scenario file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    mass: Option<String>,
    #[arg(long)]
    hbar: Option<String>,
    #[arg(long = "R")]
    radius: Option<String>,
    #[arg(long = "L")]
    side: Option<String>,
    #[arg(long = "R-inner")]
    inner_radius: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p0x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p0y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p0: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    m_max: Option<String>,
    #[arg(long)]
    n_r_max: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    t_max: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    /// `T0` or `absolute`.
    #[arg(long)]
    time_units: Option<String>,
    /// Comma-separated `[kind@]center:half_width` list.
    #[arg(long)]
    windows: Option<String>,
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long = "E")]
    energy: Option<String>,
    #[arg(long)]
    p_max: Option<String>,
    #[arg(long)]
    tol: Option<String>,
}

impl Opts {
    fn overrides(&self, run: &str) -> Vec<(String, String)> {
        let pairs: [(&str, &Option<String>); 26] = [
            ("kind", &self.kind),
            ("mass", &self.mass),
            ("hbar", &self.hbar),
            ("R", &self.radius),
            ("L", &self.side),
            ("R_inner", &self.inner_radius),
            ("x0", &self.x0),
            ("y0", &self.y0),
            ("p0x", &self.p0x),
            ("p0y", &self.p0y),
            ("p0", &self.p0),
            ("b", &self.b),
            ("m_max", &self.m_max),
            ("n_r_max", &self.n_r_max),
            ("n_max", &self.n_max),
            ("t_max", &self.t_max),
            ("dt", &self.dt),
            ("time_units", &self.time_units),
            ("windows", &self.windows),
            ("threshold", &self.threshold),
            ("p", &self.p),
            ("q", &self.q),
            ("E", &self.energy),
            ("p_max", &self.p_max),
            ("tol", &self.tol),
            ("out", &self.out),
        ];
        std::iter::once(("run".to_string(), run.to_string()))
            .chain(
                pairs
                    .iter()
                    .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))),
            )
            .collect()
    }
}

fn execute(cli: &Cli) -> Result<Vec<String>, RunError> {
    let (run, opts) = cli.command.parts();
    let text = match &opts.config {
        Some(path) => read_file(path).map_err(|e| RunError {
            code: "io",
            detail: e.to_string(),
        })?,
        None => String::new(),
    };
    let scenario = parse_config_with_overrides(&text, &opts.overrides(run))?;
    let report = run_scenario(&scenario)?;
    let mut lines = report.summary;
    lines.extend(
        report
            .files
            .iter()
            .map(|f| format!("wrote {}", f.display())),
    );
    Ok(lines)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}
