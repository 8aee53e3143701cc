use std::io::{self, IsTerminal};
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use funcadd::{cmd_repl, cmd_run, RunConfig, EXIT_SUCCESS, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "funcadd", version, about = "Run programs with sequential choice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an entry expression against a program file.
    Run {
        file: Option<PathBuf>,
        /// Expression to evaluate.
        #[arg(long, default_value = "main()")]
        entry: String,
        /// Stream rule applications to standard error.
        #[arg(long)]
        trace: bool,
        /// Maximum nesting of function calls.
        #[arg(long)]
        depth_limit: Option<NonZeroUsize>,
        /// Cross-check the result against the reference search.
        #[arg(long)]
        oracle_check: bool,
        /// Depth bound for the reference search.
        #[arg(long, default_value = "16", requires = "oracle_check")]
        oracle_bound: NonZeroUsize,
    },
    /// Start an interactive session.
    Repl { file: Option<PathBuf> },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_SUCCESS } as u8);
        }
    };
    let code = match cli.command {
        Command::Run { file, entry, trace, depth_limit, oracle_check, oracle_bound } => {
            let config =
                RunConfig { program_path: file, entry, trace, depth_limit, oracle_check, oracle_bound };
            cmd_run(&config, &mut io::stdout().lock(), &mut io::stderr().lock())
        }
        Command::Repl { file } => {
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            cmd_repl(
                file.as_deref(),
                &mut stdin.lock(),
                &mut io::stdout().lock(),
                &mut io::stderr().lock(),
                prompt,
            )
        }
    };
    ExitCode::from(code as u8)
}
