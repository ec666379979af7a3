use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lattk_cli::{export, lattice_info, read_gram_file, verify, CliError, Format, EXIT_USAGE};
use lattk_core::suite::{check_names, SweepConfig};

#[derive(Parser)]
#[command(name = "lattk", version, about = "Exact lattice computations and verification checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect lattice files
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Run verification checks
    Verify {
        /// Run every registered check (the default)
        #[arg(long, conflicts_with = "check")]
        all: bool,
        /// Run a single check by name
        #[arg(long, value_name = "NAME")]
        check: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Write a built-in lattice as a Gram file
    Export {
        /// U, E8minus, K3, Mukai, PicSP, TwistedAlg or TX
        name: String,
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Print rank, signature, determinant and discriminant form
    Info { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Lattice {
            command: LatticeCommand::Info { file },
        } => {
            let gram = read_gram_file(&file)?;
            print!("{}", lattice_info(&gram)?);
            Ok(0)
        }
        Command::Verify {
            all: _,
            check,
            format,
            seed,
            samples,
        } => {
            if let Some(name) = &check {
                if !check_names().contains(&name.as_str()) {
                    return Err(CliError::Usage(format!(
                        "unknown check {name:?}; registered checks:\n  {}",
                        check_names().join("\n  ")
                    )));
                }
            }
            let format = match format {
                OutputFormat::Text => Format::Text,
                OutputFormat::Json => Format::Json,
            };
            let config = SweepConfig {
                samples,
                seed,
                ..SweepConfig::default()
            };
            let (text, code) = verify(check.as_deref(), format, &config)?;
            print!("{text}");
            Ok(code)
        }
        Command::Export { name, file } => {
            export(&name, &file)?;
            println!("wrote {name} to {}", file.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("lattk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
