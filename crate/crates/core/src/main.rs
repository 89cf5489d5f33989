use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mgideal::script::{exit, run_script, OrderSpec, RunConfig};

/// Run a session script of multigraded ideal computations and checks.
#[derive(Debug, Parser)]
#[command(name = "mgideal", version)]
struct Cli {
    /// Script file; `-` or nothing reads standard input.
    script: Option<PathBuf>,

    /// Run-level seed; trials and sampled orders derive from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Field characteristic, overriding the script's ring declaration.
    #[arg(long = "char")]
    characteristic: Option<u32>,

    /// Term order: degrevlex, lex or weight:w1,w2,...
    #[arg(long, default_value = "degrevlex", value_parser = parse_order)]
    order: OrderSpec,

    /// Block significance for the term order, e.g. 2,1.
    #[arg(long, value_delimiter = ',')]
    block_priority: Option<Vec<usize>>,

    /// Emit one JSON report per command.
    #[arg(long)]
    json: bool,

    /// Random coordinate changes per generic initial ideal.
    #[arg(long, default_value_t = 3)]
    trials: usize,

    /// Abort when a Gröbner basis grows past this many elements.
    #[arg(long, default_value_t = 5000)]
    max_basis: usize,
}

fn parse_order(s: &str) -> Result<OrderSpec, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    let text = match &cli.script {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read script: {e}");
            return ExitCode::from(exit::USAGE as u8);
        }
    };
    let config = RunConfig {
        seed: cli.seed,
        characteristic: cli.characteristic,
        order: cli.order,
        block_priority: cli.block_priority,
        json: cli.json,
        trials: cli.trials,
        max_basis: cli.max_basis,
    };
    let outcome = run_script(&text, &config, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(outcome.exit_code as u8)
}
