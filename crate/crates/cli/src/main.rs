use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gaugefree::group::GaugeGroup;
use gaugefree::leavitt::OracleOptions;
use gaugefree::report::{self, FreenessReport, Outcome};

const EXIT_USAGE: u8 = 1;
const EXIT_DISAGREEMENT: u8 = 2;
const EXIT_RESOURCE_CAP: u8 = 3;

/// Decide freeness of gauge actions on graph C*-algebras and Cuntz-Pimsner
/// algebras of finite-dimensional commutative correspondences.
#[derive(Parser)]
#[command(name = "gaugefree", version)]
#[command(after_help = "\
Input is JSON in graph form
  {\"vertices\": [\"u\",\"v\"], \"edges\": [{\"id\":\"e\",\"src\":\"u\",\"dst\":\"v\"}], \"infinite\": []}
or matrix form
  {\"points\": [\"u\",\"v\"], \"dims\": [[0,1],[0,\"inf\"]]}

Exit codes: 0 success or agreement, 1 usage or parse error,
2 verify disagreement, 3 oracle resource cap exceeded.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide freeness for each group from the dimension matrix.
    Analyze(Common),
    /// Analyze, then cross-check each verdict with the Leavitt path
    /// algebra oracle.
    ///
    /// The oracle is one-sided: it can certify freeness by exhibiting a
    /// strong-grading certificate but never proves non-freeness. A "not
    /// free" verdict with an undecided oracle therefore counts as
    /// AGREEMENT. Disagreement (exit 2) means the analyzer says free and
    /// the oracle found no certificate within --max-len, or the oracle
    /// certified a case the analyzer calls not free.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Input document; `-` reads standard input.
    input: PathBuf,
    /// Comma-separated groups: `full` for the circle, `k` or `Z/k` (k >= 2)
    /// for the cyclic subgroup of order k.
    #[arg(long, default_value = "full,2,3")]
    groups: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Longest factor `|μ| + |ν|` the oracle searches.
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    /// Edges used to represent each infinite bundle.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    oracle_bundle_size: u64,
    /// Cap on monomials plus products formed per oracle check.
    #[arg(long, default_value_t = OracleOptions::default().max_products)]
    max_products: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .context("reading standard input")?;
        Ok(buf)
    } else {
        std::fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn prepare(common: &Common) -> Result<(report::InputDocument, Vec<GaugeGroup>)> {
    let groups = report::parse_groups(&common.groups).context("--groups")?;
    let bytes = read_input(&common.input)?;
    let doc = report::parse_input(&bytes)
        .with_context(|| format!("invalid input {}", common.input.display()))?;
    Ok((doc, groups))
}

fn emit(report: &FreenessReport, format: Format) -> Result<()> {
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let (report, format) = match cli.command {
        Command::Analyze(common) => {
            let (doc, groups) = prepare(&common)?;
            (report::analyze(&doc, &groups)?, common.format)
        }
        Command::Verify(args) => {
            let (doc, groups) = prepare(&args.common)?;
            let options = OracleOptions {
                bundle_size: args.oracle_bundle_size as usize,
                max_products: args.max_products,
            };
            (
                report::verify(&doc, &groups, args.max_len, &options)?,
                args.common.format,
            )
        }
    };
    emit(&report, format)?;
    Ok(match report.outcome() {
        Outcome::Success => ExitCode::SUCCESS,
        Outcome::Disagreement => ExitCode::from(EXIT_DISAGREEMENT),
        Outcome::ResourceCap => ExitCode::from(EXIT_RESOURCE_CAP),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
