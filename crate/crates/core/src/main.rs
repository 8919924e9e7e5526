use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kzrat::cli::{execute, Command, Request, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "kzrat",
    version,
    about = "Exact Frobenius series and rational solutions of KZ-type Fuchsian systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Compute the Frobenius series at the chosen center.
    Series(Shared),
    /// Reconstruct a rational solution from the series and check the ODE.
    Verify(Shared),
    /// Print the local expansion of the system matrix.
    Expand(Shared),
}

#[derive(Args)]
struct Shared {
    /// JSON system description.
    #[arg(long)]
    config: PathBuf,
    /// Compare against the built-in reference tables (series only).
    #[arg(long)]
    golden: bool,
    /// Like --golden, also accepting a match under d -> -d.
    #[arg(long)]
    golden_dual: bool,
    /// Write the full JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Series/expansion order N (overrides the config).
    #[arg(long)]
    order: Option<usize>,
    /// 1-based index of the expansion point (overrides the config).
    #[arg(long)]
    center: Option<usize>,
    /// derived-taylor or literal-paper (overrides the config).
    #[arg(long)]
    convention: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let (command, shared) = match cli.command {
        Sub::Series(s) => (Command::Series, s),
        Sub::Verify(s) => (Command::Verify, s),
        Sub::Expand(s) => (Command::Expand, s),
    };
    let config_text = match std::fs::read_to_string(&shared.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", shared.config.display());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let request = Request {
        command,
        config_text,
        golden: shared.golden,
        golden_dual: shared.golden_dual,
        order: shared.order,
        center: shared.center,
        convention: shared.convention,
    };
    let outcome = execute(&request);
    print!("{}", outcome.text);
    if let Some(path) = &shared.json {
        if let Err(e) = std::fs::write(path, outcome.report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    ExitCode::from(outcome.exit_code() as u8)
}
