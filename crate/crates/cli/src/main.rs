use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spectral_kernel::{
    cmd_bc_ideal, cmd_example, cmd_member, cmd_reduce, cmd_verify, parse_session, CmdError, Format,
};

const USAGE: u8 = 1;

/// Burchnall-Chaundy ideals of commuting differential operators.
///
/// Commands read a session from `--input` or from standard input, so
/// `spectral-kernel example exponential | spectral-kernel bc-ideal` works.
#[derive(Parser)]
#[command(name = "spectral-kernel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Session file (standard input when omitted)
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Print the relations R(i,j) generating the ideal
    BcIdeal(Common),
    /// Write an operator in the module basis {1, G1, ...} over C[L]
    Reduce {
        #[command(flatten)]
        common: Common,
        /// Operator expression over the session names, e.g. "G1*G2"
        #[arg(long)]
        target: String,
    },
    /// Decide membership of a polynomial in l, mu1, mu2, ...
    Member {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: String,
    },
    /// Check the basis, the relations and the resultant cross-check
    Verify(Common),
    /// Print a built-in session
    Example {
        #[arg(value_parser = ["exponential", "elliptic", "elliptic-sub"])]
        name: String,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn read_input(path: &Option<PathBuf>) -> Result<String, String> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("standard input: {e}"))?;
            Ok(s)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("SPECTRAL_KERNEL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("SPECTRAL_KERNEL_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        return fail(USAGE, msg);
    }

    let common = match &cli.command {
        Command::Example { name } => {
            print!("{}", cmd_example(name).expect("validated by clap"));
            return ExitCode::SUCCESS;
        }
        Command::BcIdeal(c) | Command::Verify(c) => c,
        Command::Reduce { common, .. } | Command::Member { common, .. } => common,
    };
    let text = match read_input(&common.input) {
        Ok(t) => t,
        Err(msg) => return fail(USAGE, msg),
    };
    let session = match parse_session(&text) {
        Ok(s) => s,
        Err(e) => return fail(e.exit_code() as u8, e),
    };
    let format = common.format;
    let result: Result<String, CmdError> = match &cli.command {
        Command::BcIdeal(_) => cmd_bc_ideal(&session, format),
        Command::Reduce { target, .. } => cmd_reduce(&session, target, format),
        Command::Member { poly, .. } => cmd_member(&session, poly, format),
        Command::Verify(_) => {
            let (report, ok) = cmd_verify(&session, format);
            print!("{report}");
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(3) };
        }
        Command::Example { .. } => unreachable!(),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.exit_code() as u8, e),
    }
}
