//! Command-line front end: the workspace DSL, command dispatch, and
//! deterministic JSON/DOT exports.

pub mod commands;
pub mod export;
pub mod print;
pub mod syntax;
pub mod workspace;

use std::path::{Path, PathBuf};

use clap::Parser;

pub use commands::{run, CliError, Emit, Options, Report};
pub use workspace::{DslError, Provenance, Workspace};

#[derive(Debug, Parser)]
#[command(name = "toposfactor", version, about = "Finite-scale checks for essential geometric morphisms")]
pub struct Cli {
    /// Workspace files to load (`.cat`, `.diag`); positional arguments
    /// with these extensions are loaded too.
    #[arg(short = 'w', long = "workspace")]
    pub workspace: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
    /// Write the rendering here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated checks for `proetale build`.
    #[arg(long, value_delimiter = ',')]
    pub check: Vec<String>,
    /// Include wall-clock timing in the report (breaks byte-identity).
    #[arg(long)]
    pub timing: bool,
    /// The command and its names.
    pub args: Vec<String>,
}

/// What a process run produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn is_workspace_file(s: &str) -> bool {
    matches!(Path::new(s).extension().and_then(|e| e.to_str()), Some("cat" | "diag"))
}

/// Parses the command line, loads the workspace, runs the command and
/// renders the report. Writes `--out` when given.
pub fn main_with(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let fail = |e: CliError| Outcome {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    };
    let mut files = cli.workspace.clone();
    let mut args = Vec::new();
    for a in &cli.args {
        if is_workspace_file(a) {
            files.push(PathBuf::from(a));
        } else {
            args.push(a.clone());
        }
    }
    let ws = match Workspace::load(&files) {
        Ok(ws) => ws,
        Err(e) => return fail(e.into()),
    };
    let opts = Options {
        emit: cli.emit,
        seed: cli.seed,
        checks: cli.check.clone(),
        timing: cli.timing,
    };
    let text = match run(&ws, &args, &opts).and_then(|r| r.render(cli.emit)) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code: 0, stdout: String::new(), stderr: String::new() },
            Err(e) => fail(CliError::Io(format!("{}: {e}", path.display()))),
        },
        None => Outcome { code: 0, stdout: text, stderr: String::new() },
    }
}
