use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use simploc_cli::{check_source, run_source, Options, Outcome};

#[derive(Parser)]
#[command(name = "simploc", version, about = "Truncating invariants of simple varieties from construction scripts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Run every command in a script.
    Run {
        script: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also write JSON-lines records to this file.
        #[arg(long)]
        records_out: Option<PathBuf>,
        /// Tighten Schubert j-sequences before building trees.
        #[arg(long)]
        normalize_j: bool,
    },
    /// Validate and classify the script's trees only.
    Check {
        script: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        normalize_j: bool,
    },
}

fn read(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn emit(out: &Outcome, format: Format, records_out: Option<&Path>) -> ExitCode {
    match format {
        Format::Text => print!("{}", out.text),
        Format::Records => print!("{}", out.records_jsonl()),
    }
    eprint!("{}", out.stderr);
    if let Some(path) = records_out {
        if let Err(e) = std::fs::write(path, out.records_jsonl()) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(out.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (path, normalize_j) = match &cli.command {
        Command::Run { script, normalize_j, .. } | Command::Check { script, normalize_j, .. } => (script, *normalize_j),
    };
    let src = match read(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let opts = Options { normalize_j, base_dir };
    match &cli.command {
        Command::Run { format, records_out, .. } => emit(&run_source(&src, &opts), *format, records_out.as_deref()),
        Command::Check { format, .. } => emit(&check_source(&src, &opts), *format, None),
    }
}
