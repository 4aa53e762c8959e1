use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crocco_prandtl::acceptance::{self, Suite};
use crocco_prandtl::config::parse_config;
use crocco_prandtl::scenario::{precheck, run_to_dir};
use crocco_prandtl::{Error, Execution, VERSION};

#[derive(Parser)]
#[command(name = "crocco-prandtl", about = "Prandtl boundary layers in Crocco variables: solver and estimate lab")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output` key.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a config and run every pre-compute check.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the acceptance suite over a directory of catalog configs.
    Acceptance {
        #[arg(long)]
        suite: PathBuf,
        /// Directory for acceptance.csv and summary.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Version,
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn verdict(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(config: &Path, out: Option<PathBuf>, exec: Execution) -> Result<bool, Error> {
    let c = parse_config(config)?;
    let dir = out
        .or_else(|| c.output.clone())
        .ok_or_else(|| Error::Config(format!("{}: no --out given and no `output` key", config.display())))?;
    let report = run_to_dir(&c, &dir, exec)?;
    for (check, pass) in &report.verdicts {
        println!("{check}: {}", if *pass { "pass" } else { "fail" });
    }
    println!("artifacts in {}", dir.display());
    Ok(report.passed())
}

fn validate(config: &Path) -> Result<(), Error> {
    let c = parse_config(config)?;
    match precheck(&c)? {
        Some(report) => println!("{}: ok ({}, C0 = {:.4})", config.display(), c.scenario, report.c0),
        None => println!("{}: ok ({})", config.display(), c.scenario),
    }
    Ok(())
}

fn run_acceptance(dir: &Path, out: Option<PathBuf>, exec: Execution) -> Result<bool, Error> {
    let suite = Suite::load(dir)?;
    let results = acceptance::run_suite(&suite, exec);
    let csv = acceptance::to_csv(&results, &suite);
    let summary = acceptance::summary(&results);
    print!("{summary}");
    match out {
        Some(o) => {
            std::fs::create_dir_all(&o).map_err(|e| Error::Io(format!("{}: {e}", o.display())))?;
            std::fs::write(o.join("acceptance.csv"), &csv)?;
            std::fs::write(o.join("summary.txt"), &summary)?;
        }
        None => print!("\n{csv}"),
    }
    Ok(acceptance::all_passed(&results))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let result = match cli.command {
        Command::Run { config, out } => run(&config, out, exec),
        Command::Validate { config } => validate(&config).map(|()| true),
        Command::Acceptance { suite, out } => run_acceptance(&suite, out, exec),
        Command::Version => {
            println!("crocco-prandtl {VERSION}");
            Ok(true)
        }
    };
    match result {
        Ok(pass) => verdict(pass),
        Err(e) => fail(&e),
    }
}
