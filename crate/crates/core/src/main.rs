use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use palms::cli::{self, RunConfig};
use palms::Error;

#[derive(Parser)]
#[command(name = "palms", version, about = "Distributed network reconstruction from nodal dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a network and its dynamics into a dataset directory.
    Generate(Common),
    /// Reconstruct the network behind a dataset directory.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Dataset directory written by `generate`.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Score an estimate (edge list or scores .csv) against a true edge list.
    Evaluate {
        #[command(flatten)]
        common: Common,
        truth: Option<PathBuf>,
        estimate: Option<PathBuf>,
    },
    /// Run a comparison suite (table2, table3, table4, table5 or custom).
    Bench(Common),
}

#[derive(Args)]
struct Common {
    /// key=value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    reps: Option<String>,
    #[arg(long)]
    suite: Option<String>,
    /// Any other configuration key, e.g. `--set density=0.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn overrides(&self) -> Result<Vec<(String, String)>, Error> {
        let mut out = Vec::new();
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("--set expects KEY=VALUE, got {kv:?}")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        let flags = [
            ("method", &self.method),
            ("k", &self.k),
            ("m", &self.m),
            ("workers", &self.workers),
            ("tau", &self.tau),
            ("seed", &self.seed),
            ("reps", &self.reps),
            ("suite", &self.suite),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                out.push((k.to_string(), v.clone()));
            }
        }
        if let Some(p) = &self.out {
            out.push(("out".into(), p.display().to_string()));
        }
        Ok(out)
    }

    fn load(&self, extra: &[(&str, &Option<PathBuf>)]) -> Result<RunConfig, Error> {
        let mut overrides = self.overrides()?;
        for (k, v) in extra {
            if let Some(p) = v {
                overrides.push((k.to_string(), p.display().to_string()));
            }
        }
        RunConfig::load(self.config.as_deref(), &overrides)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate(common) => {
            let cfg = common.load(&[])?;
            let dir = cli::cmd_generate(&cfg)?;
            println!("wrote {}", dir.display());
        }
        Command::Reconstruct { common, data } => {
            let cfg = common.load(&[("data", &data)])?;
            let metrics = cli::cmd_reconstruct(&cfg)?;
            println!("wrote {}", cfg.out.display());
            if let Some(m) = metrics {
                print!("{}", cli::evaluation_csv(&m));
            }
        }
        Command::Evaluate {
            common,
            truth,
            estimate,
        } => {
            let cfg = common.load(&[("truth", &truth), ("estimate", &estimate)])?;
            let m = cli::cmd_evaluate(&cfg)?;
            print!("{}", cli::evaluation_csv(&m));
        }
        Command::Bench(common) => {
            let cfg = common.load(&[])?;
            for p in cli::cmd_bench(&cfg)? {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
