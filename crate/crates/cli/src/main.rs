use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use fock_cli::config::{RunConfig, Suite};
use fock_cli::report::Status;
use fock_cli::{grid, io, suites};

#[derive(Parser)]
#[command(name = "fock", version, about = "Numerical checks for weighted Fock spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and write a JSON report.
    Verify(Overrides),
    /// Evaluate closed-form and numeric values on the configured grid as CSV.
    Grid(Overrides),
    /// Print the measured normalization constants as JSON.
    Constants(Overrides),
}

#[derive(Args)]
struct Overrides {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    suite: Option<Suite>,
    #[arg(long, allow_negative_numbers = true)]
    beta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta2: Option<f64>,
    /// Off-diagonal entry of A for H_A.
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// kappa of H_{kappa,l} and the model domain.
    #[arg(long)]
    kl_kappa: Option<f64>,
    /// beta of H_beta.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    l_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    l_im: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long = "trunc-N")]
    trunc_n: Option<usize>,
    #[arg(long)]
    quad_m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Output file; defaults to the paths in the `[output]` section.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($flag:ident => $($field:ident).+;)*) => {
                $(if let Some(v) = self.$flag { c.$($field).+ = v; })*
            };
        }
        set! {
            suite => suite;
            beta1 => ha.beta1;
            beta2 => ha.beta2;
            kappa => ha.kappa;
            kl_kappa => kl.kappa;
            beta => hbeta.beta;
            l_re => kl.l_re;
            l_im => kl.l_im;
            tau => kl.tau;
            trunc_n => trunc_n;
            quad_m => quad_m;
            seed => seed;
            samples => samples;
        }
        c.validate()?;
        Ok(c)
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Verify(o) => {
            let cfg = o.resolve().map_err(Usage)?;
            let report = suites::run_suite(&cfg);
            let path = o.out.clone().unwrap_or_else(|| cfg.output.report.clone());
            io::write_atomic(&path, report.to_json().as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skip",
                };
                match c.value {
                    Some(v) => println!("{tag} {:<40} {v:.3e} (tol {:.0e})", c.name, c.tolerance),
                    None => println!("{tag} {:<40} {}", c.name, c.reason.as_deref().unwrap_or("")),
                }
            }
            for f in &report.findings {
                println!("note {:<40} {:.3e}", f.name, f.max_deviation);
            }
            println!("{} checks, {} failed; report at {}", report.checks.len(), report.failed(), path.display());
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Grid(o) => {
            let cfg = o.resolve().map_err(Usage)?;
            let csv = grid::eval_grid(&cfg)?;
            let path = o.out.clone().unwrap_or_else(|| cfg.output.grid.clone());
            io::write_atomic(&path, csv.as_bytes()).with_context(|| format!("writing {}", path.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Constants(o) => {
            let cfg = o.resolve().map_err(Usage)?;
            let c = suites::measure_constants(&cfg)?;
            let mut text = serde_json::to_string_pretty(&c)?;
            text.push('\n');
            match &o.out {
                Some(p) => io::write_atomic(p, text.as_bytes()).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Debug)]
struct Usage(anyhow::Error);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
