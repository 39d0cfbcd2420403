use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qclite::cli::{repl_loop, run_script, Session, SessionConfig};
use qclite::machine::DEFAULT_DENSE_LIMIT;

#[derive(Parser)]
#[command(version, about = "Run qclite programs or start an interactive session")]
struct Args {
    /// Program to run; without one an interactive session starts.
    script: Option<PathBuf>,
    /// Number of qubits of the machine.
    #[arg(short = 'n', long = "qubits", default_value_t = 32)]
    qubits: usize,
    /// Seed for measurement outcomes and random().
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    /// Continue interactively after running the script.
    #[arg(short)]
    interactive: bool,
    /// Do not print the state after each statement.
    #[arg(long)]
    no_echo: bool,
    /// Skip the runtime emptiness checks.
    #[arg(long)]
    no_checks: bool,
    /// Most qubits held in the dense state vector.
    #[arg(long, default_value_t = DEFAULT_DENSE_LIMIT)]
    dense_limit: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = SessionConfig {
        total_qubits: args.qubits,
        seed: args.seed,
        echo: !args.no_echo,
        checks: !args.no_checks,
        dense_limit: args.dense_limit,
    };
    let mut session = match Session::new(&config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut out = io::stdout();
    if let Some(path) = &args.script {
        let src = match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        };
        session.set_echo(false);
        let status = run_script(&mut session, &src, &mut out, &mut io::stderr());
        if !args.interactive {
            return ExitCode::from(status as u8);
        }
        session.set_echo(config.echo);
    }
    let stdin = io::stdin();
    let show_input = !stdin.is_terminal();
    match repl_loop(&mut session, stdin.lock(), &mut out, show_input) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
