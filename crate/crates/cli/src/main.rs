use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gradedcontact::commands::{self, FileCommand, Format};
use gradedcontact::selftest::{Config, Suite};

#[derive(Parser)]
#[command(name = "gradedcontact", version, about = "Jacobi structures as contact NQ-manifolds, checked exactly")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Cartan,
    Structures,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the structure is Jacobi and print the residuals.
    Check { file: PathBuf },
    /// Print the homological contact field Q of the structure.
    BuildQ { file: PathBuf },
    /// Print the Poissonization and its Schouten square.
    Poissonize { file: PathBuf },
    /// Run every identity of the symplectization/Poissonization square.
    VerifyDiagram { file: PathBuf },
    /// Randomized identity suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, env = "GRADEDCONTACT_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    let outcome = match cli.command {
        Command::Check { file } => commands::run_file(FileCommand::Check, file),
        Command::BuildQ { file } => commands::run_file(FileCommand::BuildQ, file),
        Command::Poissonize { file } => commands::run_file(FileCommand::Poissonize, file),
        Command::VerifyDiagram { file } => commands::run_file(FileCommand::VerifyDiagram, file),
        Command::Selftest { suite, seed, trials } => {
            let suite = match suite {
                SuiteArg::Cartan => Suite::Cartan,
                SuiteArg::Structures => Suite::Structures,
                SuiteArg::All => Suite::All,
            };
            commands::run_selftest(&Config { suite, seed, trials })
        }
    };
    let _ = std::io::stdout().write_all(outcome.render(format).as_bytes());
    if let Some(err) = &outcome.error {
        eprintln!("gradedcontact: {err}");
    }
    ExitCode::from(outcome.status.code() as u8)
}
