use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use skewlab::arithmetic::Frac128;
use skewlab_cli::{cmd_build, cmd_report, cmd_rpk, cmd_verify, ExperimentConfig, Outcome};

#[derive(Parser)]
#[command(
    name = "skewlab",
    version,
    about = "Skew products on tori: coboundary chains, conjugacies, probes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the chain and the system; writes chain.json and spec.json.
    Build(Common),
    /// Run the selected probes; writes report.json and CSV data.
    Verify(Common),
    /// Certify regional proximality for the configured pairs.
    Rpk(Common),
    /// Summarize report.json and certificates.json.
    Report(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// No randomness is used anywhere; accepted for explicitness.
    #[arg(long, default_value_t = true)]
    seedless: bool,
    /// Overrides `alpha`.
    #[arg(long)]
    alpha: Option<String>,
    /// Overrides `eps`.
    #[arg(long)]
    eps: Option<f64>,
}

impl Common {
    fn load(&self) -> Result<(ExperimentConfig, PathBuf)> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(a) = &self.alpha {
            Frac128::parse(a).context("--alpha")?;
            cfg.alpha = Some(a.clone());
        }
        if let Some(e) = self.eps {
            cfg.eps = Some(e);
        }
        let out = self.out.clone().unwrap_or_else(|| {
            let dir = cfg.out_dir();
            match self.config.parent() {
                Some(base) if dir.is_relative() => base.join(dir),
                _ => dir,
            }
        });
        Ok((cfg, out))
    }
}

type Handler = fn(&ExperimentConfig, &Path) -> Result<Outcome>;

fn run(cli: Cli) -> Result<Outcome> {
    let (common, f): (&Common, Handler) = match &cli.command {
        Command::Build(c) => (c, cmd_build),
        Command::Verify(c) => (c, cmd_verify),
        Command::Rpk(c) => (c, cmd_rpk),
        Command::Report(c) => (c, cmd_report),
    };
    let (cfg, out) = common.load()?;
    f(&cfg, &out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) => {
            for w in &o.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", o.text);
            if o.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: an identity check exceeded its tolerance");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
