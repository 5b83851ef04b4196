use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use weelcp::WeeParams;
use weelcp_cli::{
    cmd_bench, cmd_build, cmd_lcp, cmd_space, cmd_verify, BenchOptions, BuildOptions, LcpQuery,
    Repr,
};

/// Build and query succinct LCP indexes.
///
/// Machine-readable results go to stdout as JSON lines, a human summary to
/// stderr.
#[derive(Parser)]
#[command(name = "weelcp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index a text file and write a bundle.
    Build {
        /// Text file; must not contain 0x00 bytes.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Representations to store.
        #[arg(long, value_delimiter = ',', default_value = "plain,sadakane,wee")]
        repr: Vec<Repr>,
        #[arg(long, default_value_t = WeeParams::DEFAULT_DELTA)]
        delta: f64,
        #[arg(long)]
        kappa: Option<usize>,
        #[arg(long)]
        lambda: Option<usize>,
    },
    /// Print LCP values.
    Lcp {
        #[command(flatten)]
        index: IndexArg,
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        pos: Option<usize>,
        /// Inclusive range `a..b`.
        #[arg(long)]
        range: Option<String>,
        /// Representation to read (defaults to the most compact one stored).
        #[arg(long)]
        repr: Option<Repr>,
    },
    /// Recompute everything from the text and compare.
    Verify {
        #[command(flatten)]
        index: IndexArg,
    },
    /// Time random LCP queries.
    Bench {
        #[command(flatten)]
        index: IndexArg,
        #[arg(long, default_value_t = 100_000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Artificial delay added to every suffix-array access.
        #[arg(long, default_value_t = 0)]
        sa_delay_ns: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_delimiter = ',')]
        repr: Option<Vec<Repr>>,
    },
    /// Print per-component space usage.
    Space {
        #[command(flatten)]
        index: IndexArg,
    },
}

#[derive(Args)]
struct IndexArg {
    /// Bundle written by `build`.
    #[arg(long)]
    input: PathBuf,
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    match s.split_once("..") {
        Some((a, b)) => Ok((a.trim().parse()?, b.trim().parse()?)),
        None => bail!("range must look like a..b, got {s:?}"),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let ok = match cli.command {
        Command::Build {
            input,
            output,
            repr,
            delta,
            kappa,
            lambda,
        } => {
            let opts = BuildOptions {
                reprs: repr,
                delta,
                kappa,
                lambda,
            };
            cmd_build(&input, &output, &opts, &mut out)?;
            true
        }
        Command::Lcp {
            index,
            pos,
            range,
            repr,
        } => {
            let query = match (pos, range) {
                (Some(i), _) => LcpQuery::Pos(i),
                (None, Some(r)) => {
                    let (a, b) = parse_range(&r)?;
                    LcpQuery::Range(a, b)
                }
                (None, None) => bail!("one of --pos or --range is required"),
            };
            cmd_lcp(&index.input, query, repr, &mut out)?;
            true
        }
        Command::Verify { index } => cmd_verify(&index.input, &mut out)?,
        Command::Bench {
            index,
            queries,
            seed,
            sa_delay_ns,
            threads,
            repr,
        } => {
            let opts = BenchOptions {
                queries,
                seed,
                sa_delay: Duration::from_nanos(sa_delay_ns),
                threads,
                reprs: repr,
            };
            cmd_bench(&index.input, &opts, &mut out)?
        }
        Command::Space { index } => {
            cmd_space(&index.input, &mut out)?;
            true
        }
    };
    out.flush()?;
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
