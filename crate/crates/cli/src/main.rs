use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod run;

use run::CliError;

/// Scenario-driven runs of the nonlocal transport solvers.
#[derive(Debug, Parser)]
#[command(name = "nonlocal", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario and write snapshots, diagnostics and a summary
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Plateau value of the smoothed kernel (overrides kernel.alpha)
        #[arg(long)]
        alpha: Option<f64>,
        /// Smoothing index of the smoothed kernel (overrides kernel.n)
        #[arg(long)]
        n: Option<u32>,
    },
    /// Run the (alpha, n) concentration study of a scenario
    Study {
        #[command(flatten)]
        common: Common,
    },
    /// Print the existence-time bounds for a scenario
    Bounds {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Config file, or the name of a built-in scenario
    config: String,
    /// Output directory (defaults to output.dir, then out/<name>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for studies
    #[arg(long)]
    threads: Option<usize>,
    /// Config override as key=value (repeatable)
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { common, alpha, n } => {
            let mut overrides = common.overrides.clone();
            if let Some(a) = alpha {
                overrides.push(format!("kernel.alpha={a:?}"));
            }
            if let Some(n) = n {
                overrides.push(format!("kernel.n={n}"));
            }
            setup(&common).and_then(|_| run::simulate(&common.config, &overrides, common.out.as_deref()))
        }
        Command::Study { common } => {
            setup(&common).and_then(|_| run::study(&common.config, &common.overrides, common.out.as_deref()))
        }
        Command::Bounds { common } => run::bounds(&common.config, &common.overrides, common.out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn setup(common: &Common) -> Result<(), CliError> {
    if let Some(k) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| CliError::Config(anyhow::anyhow!("cannot start {k} worker threads: {e}")))?;
    }
    Ok(())
}
