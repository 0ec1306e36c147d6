//! `ctqw` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a `verify` check breaches tolerance,
//! 2 for usage, configuration, or environment errors.

mod commands;
mod config;
mod svg;

use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config, or an environment problem. Exit 2.
    Usage(String),
    /// A verification tolerance was breached. Exit 1.
    Verification(String),
}

const USAGE: &str = "\
usage: ctqw <command> [--flag value ...]

commands:
  graph     build a graph; structured text to stdout, DOT via --out-dot,
            spectrum CSV via --out-csv
  unitary   closed-system probability trace (CSV/SVG)
  sweep     sweep J, omega, or branches; per-value traces plus a summary
            CSV with the fitted log-log slope
  lindblad  density-matrix runs across an omega list; diagonal trace CSVs
            plus a cumulative-probability summary
  verify    closed-form versus numeric cross-checks; exit 1 on any breach

shared flags:
  --family {star|spider|cayley|cycle}   --branches N       --length N
  --coord N (cayley alias)              --levels N (cayley alias)
  --central-hopping J                   --off-hopping W
  --generator {adjacency|laplacian}
  --state {basis:<v>|balanced|phased|cayley-branch|file:<path>}
  --vertices 1,4,7      --tmax T        --dt DT            --stride K
  --cumulative {true|false}
  --omega W[,W...]      --dissipator {paper|standard}
  --sweep {J|omega|branches}            --values V[,V...]
  --out-csv PATH        --out-dot PATH  --out-svg PATH
  --config PATH         (flat `key = value` file; flags override it)
";

fn run() -> Result<(), CliError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = args.first() else {
        return Err(CliError::Usage("missing command".into()));
    };
    let rest = &args[1..];
    let opts = config::resolve(command, rest)?;
    match command.as_str() {
        "graph" => commands::cmd_graph(&opts),
        "unitary" => commands::cmd_unitary(&opts),
        "sweep" => commands::cmd_sweep(&opts),
        "lindblad" => commands::cmd_lindblad(&opts),
        "verify" => commands::cmd_verify(&opts),
        other => Err(CliError::Usage(format!("unknown command '{other}'"))),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!();
            eprintln!("{USAGE}");
            ExitCode::from(2)
        }
    }
}
