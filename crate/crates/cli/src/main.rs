//! `vgv`: classify curves `y^p - y = xR(x)` and `z^{p^r} - z = xR(x)`, verify maximality
//! criteria, search families and count points.

mod classify;
mod config;
mod count;
mod errors;
mod output;
mod search;
mod spec_args;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Envelope, Format, GlobalArgs, RunConfig};
use errors::{CliError, EXIT_MATH, EXIT_OK, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "vgv", version, about = "Maximality of van der Geer-van der Vlugt curves: exact L-polynomials, criteria and point counts")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus, abelian subgroup data, eigenvalues, L-polynomial, verdict table and criteria for one curve.
    Classify(classify::ClassifyArgs),
    /// Run a criterion over its parameter grid and compare predictions with formula and oracle.
    Verify(verify::VerifyArgs),
    /// Stream certified maximal/minimal curves of a family as JSONL.
    Search(search::SearchArgs),
    /// Point count over F_{q^k} by enumeration.
    Count(count::CountArgs),
}

fn execute(cli: &Cli, cfg: &RunConfig) -> Result<u8, CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let io = |e: std::io::Error| CliError::Resource(e.to_string());
    match &cli.cmd {
        Command::Classify(a) => {
            let rep = classify::run(a, cfg)?;
            output::classify(&mut out, &Envelope::new("classify", cfg, &rep), cfg.format).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let rep = verify::run(a, cfg)?;
            output::verify(&mut out, &Envelope::new("verify", cfg, &rep), cfg.format).map_err(io)?;
            Ok(if rep.pass { EXIT_OK } else { EXIT_MATH })
        }
        Command::Count(a) => {
            let row = count::run(a, cfg)?;
            output::count(&mut out, &Envelope::new("count", cfg, &row), cfg.format).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Search(a) => {
            if cfg.format == Format::Tsv {
                output::tsv_header(&mut out, true).map_err(io)?;
            }
            let format = cfg.format;
            let mut sink = |c: &search::Certificate| -> std::io::Result<()> {
                match format {
                    Format::Json => search::write_jsonl(&mut out, c)?,
                    Format::Tsv => output::certificate_tsv(&mut out, c)?,
                    Format::Pretty => output::certificate_pretty(&mut out, c)?,
                }
                out.flush()
            };
            search::run(a, cfg, &mut sink)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = RunConfig::from(&cli.global);
    if cfg.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global() {
            eprintln!("vgv: {e}");
        }
    }
    match execute(&cli, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("vgv: {e}");
            ExitCode::from(e.code())
        }
    }
}
