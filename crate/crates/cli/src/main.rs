use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sinc_nystrom::benchmarks::DEFAULT_EPS;
use sinc_nystrom::Method;
use sinc_nystrom_cli::{cmd_converge, cmd_list, cmd_solve, DEFAULT_EVAL_POINTS, DEFAULT_N_LIST};

/// SE/DE Sinc-Nystrom solver for linear Volterra integro-differential equations.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the reference problems with their (alpha, d_sup) recipes.
    List,
    /// Solve one case at one N and print a JSON report.
    Solve {
        #[arg(long)]
        case: String,
        /// se or de
        #[arg(long)]
        method: Method,
        #[arg(long)]
        n: usize,
        /// Margin subtracted from the strip-width supremum.
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_EVAL_POINTS)]
        eval_points: usize,
    },
    /// Sweep N for both methods; writes a CSV and a JSON fit summary.
    Converge {
        #[arg(long)]
        case: String,
        /// Comma-separated, strictly ascending.
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::List => Ok(cmd_list()),
        Command::Solve {
            case,
            method,
            n,
            eps,
            eval_points,
        } => cmd_solve(&case, method, n, eps, eval_points),
        Command::Converge {
            case,
            n_list,
            eps,
            out,
        } => {
            let n_list = n_list.unwrap_or_else(|| DEFAULT_N_LIST.to_vec());
            cmd_converge(&case, &n_list, eps, &out)
        }
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
