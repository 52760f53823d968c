use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nambu_cli::{
    cmd_bracket, cmd_lax, cmd_reconstruct, cmd_simulate, cmd_verify, parse_convention, parse_x0, CliError,
    Outcome,
};
use nambu_core::identities::DEFAULT_CASES;
use nambu_core::random::seed_from_env;

#[derive(Parser)]
#[command(name = "nambu", version, about = "Nambu mechanics, vector Hamiltonians and Lax invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the symbolic suite; exit 1 if an asserted property fails.
    Verify {
        #[arg(long, default_value = "frenet")]
        system: String,
        #[arg(long, default_value = "unit")]
        convention: String,
        /// Randomized cases per identity.
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: usize,
        #[arg(long)]
        json: bool,
    },
    /// Integrate with RK4 and write a CSV trajectory.
    Simulate {
        #[arg(long, default_value = "frenet")]
        system: String,
        #[arg(long, default_value = "1,0,0", allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long = "T", default_value_t = 100.0)]
        horizon: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the radial-gauge potential of a closed form read from JSON.
    Reconstruct {
        file: PathBuf,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the Nambu bracket {H, F, G}.
    Bracket {
        #[arg(allow_hyphen_values = true)]
        h: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value = "unit")]
        convention: String,
    },
    /// Lax pair report for the builtin system.
    Lax {
        #[arg(long, default_value = "frenet")]
        system: String,
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        perturb: bool,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Verify { system, convention, cases, json } => {
            cmd_verify(&system, parse_convention(&convention)?, seed_from_env(), cases, json)
        }
        Command::Simulate { system, x0, dt, horizon, out, json } => {
            cmd_simulate(&system, parse_x0(&x0)?, dt, horizon, &out, json)
        }
        Command::Reconstruct { file, check, json } => cmd_reconstruct(&file, check, json),
        Command::Bracket { h, f, g, convention } => cmd_bracket(&h, &f, &g, parse_convention(&convention)?),
        Command::Lax { system, json, perturb } => cmd_lax(&system, json, perturb),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("nambu: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
