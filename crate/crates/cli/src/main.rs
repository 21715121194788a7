mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ghznet::protocol::Engine;

use config::RunConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "ghznet", version, about = "GHZ preparation on all-to-all exchange-coupled qubit networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_parser = parse_engine)]
    engine: Option<Engine>,

    /// Optimizer seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Reference coupling g/2π in MHz; times are also reported in ns.
    #[arg(long, global = true)]
    report_mhz: Option<f64>,

    #[arg(long, global = true)]
    n_qubits: Option<usize>,

    /// XY coupling.
    #[arg(long, global = true, allow_negative_numbers = true)]
    g: Option<f64>,

    /// ZZ coupling.
    #[arg(long, global = true, allow_negative_numbers = true)]
    gz: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic and brute-force eigenvalues of the symmetric sector.
    Eigs,
    /// Compile and verify the GHZ protocol.
    Protocol,
    /// Optimize entangling time and final rotations for a perturbed graph.
    Optimize,
    /// Three-qubit optimization sweep over eta13.
    Sweep,
    /// Complete-graph capacitance equivalent to a star.
    Star2delta {
        #[arg(allow_negative_numbers = true)]
        c_star: f64,
        n: usize,
    },
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    match s {
        "dense" => Ok(Engine::Dense),
        "symmetric" => Ok(Engine::Symmetric),
        _ => Err(format!("unknown engine `{s}`, expected dense or symmetric")),
    }
}

impl Cli {
    fn run_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = self.engine {
            cfg.engine = v;
        }
        if let Some(v) = self.seed {
            cfg.optimizer.seed = v;
        }
        if let Some(v) = self.report_mhz {
            cfg.report_mhz = Some(v);
        }
        if let Some(v) = self.n_qubits {
            cfg.n_qubits = v;
        }
        if let Some(v) = self.g {
            cfg.g = v;
        }
        if let Some(v) = self.gz {
            cfg.gz = v;
        }
        Ok(cfg)
    }
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn state_path(cfg: &RunConfig) -> Option<PathBuf> {
    if let Some(p) = &cfg.state_out {
        return Some(p.clone());
    }
    let out = cfg.out.as_ref()?;
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Some(out.with_file_name(format!("{stem}_state.csv")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = cli.run_config()?;
    let report = match &cli.command {
        Command::Eigs => commands::eigs(&cfg)?,
        Command::Protocol => commands::protocol(&cfg)?,
        Command::Optimize => commands::optimize_cmd(&cfg)?,
        Command::Sweep => commands::sweep_cmd(&cfg)?,
        Command::Star2delta { c_star, n } => commands::star2delta(*c_star, *n)?,
    };
    write_to(cfg.out.as_deref(), &report.primary)?;
    if let Some(text) = &report.secondary {
        match state_path(&cfg) {
            Some(p) => write_to(Some(&p), text)?,
            None => write_to(None, &format!("\n{text}"))?,
        }
    }
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
