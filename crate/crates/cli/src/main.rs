use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use bmoa_lab::commands::EXIT_ERROR;
use bmoa_lab::config::{Format, RunConfig};
use bmoa_lab::{run, Command};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

/// Weighted BMOA seminorms and weighted composition operators on the disk.
///
/// Exit codes: 0 positive outcome, 2 negative outcome, 3 inconclusive,
/// 1 invalid input or runtime failure.
#[derive(Parser)]
#[command(name = "bmoa-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Check the admissibility conditions of a weight.
    Admissible,
    /// Seminorm of --f by one or all routes.
    Seminorm,
    /// Sample the symbol functions of (--psi, --phi) on the grid.
    Alphabeta,
    /// Boundedness verdict for (--psi, --phi).
    Bounded,
    /// Compactness verdict for (--psi, --phi).
    Compact,
    /// Run the packaged example cases.
    Examples,
    /// Grid data for plotting.
    Plotdata,
}

#[derive(Args)]
struct Opts {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    weight: Option<String>,
    /// Override the weight's exponent margin.
    #[arg(long, global = true)]
    eps0: Option<f64>,
    #[arg(long, global = true)]
    psi: Option<String>,
    #[arg(long, global = true)]
    phi: Option<String>,
    #[arg(long, global = true)]
    f: Option<String>,
    /// garsia, carleson, arc or all.
    #[arg(long, global = true)]
    route: Option<String>,
    /// Exponent of the oscillation, 1 or 2.
    #[arg(long, global = true)]
    p: Option<u8>,
    /// Example case, or all.
    #[arg(long, global = true)]
    which: Option<String>,
    #[arg(long, global = true)]
    nodes: Option<usize>,
    #[arg(long, global = true)]
    max_k: Option<u32>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    grid_levels: Option<u32>,
    #[arg(long, global = true)]
    grid_angles: Option<usize>,
    /// table, csv or json.
    #[arg(long, global = true)]
    format: Option<Format>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

impl Opts {
    fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($flag:expr => $slot:expr) => {
                if let Some(v) = $flag {
                    $slot = v;
                }
            };
        }
        set!(self.weight => cfg.weight.spec);
        set!(self.route => cfg.run.route);
        set!(self.p => cfg.run.p);
        set!(self.which => cfg.run.which);
        set!(self.seed => cfg.run.seed);
        set!(self.nodes => cfg.quadrature.nodes);
        set!(self.max_k => cfg.quadrature.max_k);
        set!(self.tol => cfg.quadrature.tol);
        set!(self.grid_levels => cfg.grid.levels);
        set!(self.grid_angles => cfg.grid.angles);
        set!(self.format => cfg.output.format);
        if self.eps0.is_some() {
            cfg.weight.eps0 = self.eps0;
        }
        if self.psi.is_some() {
            cfg.symbols.psi = self.psi;
        }
        if self.phi.is_some() {
            cfg.symbols.phi = self.phi;
        }
        if self.f.is_some() {
            cfg.symbols.f = self.f;
        }
        if self.out.is_some() {
            cfg.output.out = self.out;
        }
        Ok(cfg)
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("BMOA_LAB_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("BMOA_LAB_THREADS={v:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<i32> {
    configure_threads()?;
    let command = match cli.command {
        Sub::Admissible => Command::Admissible,
        Sub::Seminorm => Command::Seminorm,
        Sub::Alphabeta => Command::Alphabeta,
        Sub::Bounded => Command::Bounded,
        Sub::Compact => Command::Compact,
        Sub::Examples => Command::Examples,
        Sub::Plotdata => Command::Plotdata,
    };
    let cfg = cli.opts.into_config()?;
    let report = run(command, &cfg)?;
    let text = report.render(cfg.output.format)?;
    match &cfg.output.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_ERROR as u8),
            };
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
