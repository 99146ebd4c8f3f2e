// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod dataset;
mod error;
mod quantity;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use args::{Cli, Command, OutputArgs};
use dataset::Dataset;
use error::CliError;

fn emit(data: &Dataset, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => data.write_to(path, output.format),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(data.render(output.format).as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn version(verbose: bool) {
    println!("itlab {}", env!("CARGO_PKG_VERSION"));
    if verbose {
        let c = itlab::units::constants();
        println!("hbar = {} (atomic units)", itlab::units::HBAR);
        println!("atomic unit of time = {:e} s", c.au_time_in_seconds);
        println!("bohr radius = {:e} m", c.bohr_in_meters);
        println!("atomic unit of velocity = {:e} m/s", c.bohr_velocity_in_mps);
        println!("hartree = {} eV", c.hartree_in_ev);
        println!(
            "default mu = {}, omega = {}",
            itlab::states::DEFAULT_MU,
            itlab::states::DEFAULT_OMEGA
        );
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.version {
        version(cli.verbose);
        return Ok(());
    }
    let Some(command) = cli.command else {
        let _ = Cli::command().print_help();
        return Err(CliError::Usage("a subcommand is required".into()));
    };
    match command {
        Command::Timespectrum(a) => emit(&commands::timespectrum(&a)?, &a.output),
        Command::Momentum(a) => emit(&commands::momentum(&a)?, &a.output),
        Command::Trajectories(a) => emit(&commands::trajectories(&a)?, &a.output),
        Command::Simulate(a) => {
            let sets = commands::simulate(&a)?;
            fs::create_dir_all(&a.out).map_err(|source| CliError::Io {
                path: a.out.clone(),
                source,
            })?;
            for (name, data) in &sets {
                let path = a.out.join(format!("{name}.{}", a.format.extension()));
                data.write_to(&path, a.format)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Selfcheck => {
            let checks = commands::selfcheck()?;
            for c in &checks {
                let verdict = if c.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{verdict} {}: {:.3e} (tolerance {:.0e})",
                    c.name, c.value, c.tolerance
                );
            }
            match checks.iter().filter(|c| !c.passed()).count() {
                0 => Ok(()),
                failed => Err(CliError::SelfCheck(failed)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
