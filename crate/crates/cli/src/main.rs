use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lfframe::{Exec, Normalization};
use lfframe_cli::config::RunConfig;
use lfframe_cli::{commands, CliError, CliResult, Outcome};

#[derive(Parser)]
#[command(name = "lfframe", version, about = "Exact wavelet-frame checks on F_q((t))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Paper,
    Unitary,
}

impl From<Mode> for Normalization {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Paper => Normalization::Paper,
            Mode::Unitary => Normalization::Unitary,
        }
    }
}

#[derive(clap::Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the suite seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the dilation normalization.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Run every loop on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Describe the field and tabulate u(n) for n < 32.
    FieldInfo {
        #[command(flatten)]
        common: Common,
    },
    /// Print u(n) for the given n.
    Uindex {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        n: Vec<u64>,
    },
    /// Fourier transform of a step-function CSV dump.
    Transform {
        /// Input CSV dump.
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        inverse: bool,
        /// Use the direct double sum instead of the butterfly.
        #[arg(long)]
        naive: bool,
    },
    /// Partition, Gram, Bessel, two-scale and frame-ratio checks.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Periodic-system checks on the fundamental domain.
    Periodic {
        #[command(flatten)]
        common: Common,
    },
    /// Write the refinable function and wavelets as CSV dumps.
    DumpWavelets {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> CliResult<(RunConfig, PathBuf)> {
    let (mut cfg, base) = RunConfig::load(&common.config)?;
    cfg.override_seed(common.seed);
    cfg.override_mode(common.mode.map(Into::into));
    Ok((cfg, base))
}

fn exec(common: &Common) -> Exec {
    if common.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn write_out(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    let (outcome, out) = match cli.command {
        Command::FieldInfo { common } => {
            let (cfg, _) = load(&common)?;
            let (text, json) = commands::field_info(&cfg, 32)?;
            print!("{text}");
            if let Some(out) = &common.out {
                write_out(Some(out), &json)?;
            }
            return Ok(0);
        }
        Command::Uindex { common, n } => {
            let (cfg, _) = load(&common)?;
            let (text, json) = commands::uindex(&cfg, &n)?;
            print!("{text}");
            if let Some(out) = &common.out {
                write_out(Some(out), &json)?;
            }
            return Ok(0);
        }
        Command::Transform { input, out, inverse, naive } => {
            (Outcome::ok(commands::transform_csv(&input, inverse, naive)?), out)
        }
        Command::Verify { common } => {
            let (cfg, base) = load(&common)?;
            (commands::verify(&cfg, &base, exec(&common))?, common.out)
        }
        Command::Periodic { common } => {
            let (cfg, base) = load(&common)?;
            (commands::periodic(&cfg, &base, exec(&common))?, common.out)
        }
        Command::DumpWavelets { common } => {
            let (cfg, base) = load(&common)?;
            let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("wavelets"));
            let manifest = commands::dump_wavelets(&cfg, &base, &dir)?;
            write_out(Some(&dir.join("manifest.json")), &manifest)?;
            eprintln!("wrote {}", dir.display());
            return Ok(0);
        }
    };
    write_out(out.as_deref(), &outcome.output)?;
    if let Some(s) = outcome.summary {
        eprintln!("{s}");
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
