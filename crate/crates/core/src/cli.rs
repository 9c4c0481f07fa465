// SPDX-License-Identifier: Apache-2.0

//! `rwa-risk score` command.
//!
//! Exit codes: 0 on success, 1 on validation or usage errors, 2 on I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::ingest::{parse_snapshot_file, InputFormat, ParseOptions};
use crate::metrics::derive_all;
use crate::report::{emit_report, OutputFormat, RunConfig};
use crate::scoring::{score_set, ScoringConfig, WeightScheme};
use crate::snapshot::{ChainDimension, SnapshotSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;

/// Tickers of the ten-asset pilot snapshot shipped in `fixtures/`.
pub const PILOT_TICKERS: [&str; 10] = [
    "BUIDL", "BENJI", "OUSG", "USTB", "USDC", "USDY", "HLSCOPE", "STAC", "PAXG", "XAUT",
];
pub const PILOT_BENCHMARK: &str = "USDC";

#[derive(Debug, Parser)]
#[command(
    name = "rwa-risk",
    version,
    about = "Explainable liquidity, concentration and market-quality risk scores for tokenized assets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a snapshot and print metrics, ranked scores and weight sensitivity.
    Score(ScoreArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InFormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormatArg {
    Csv,
    Markdown,
    Json,
}

#[derive(Debug, clap::Args)]
struct ScoreArgs {
    /// Snapshot file (CSV or JSON).
    #[arg(long)]
    input: PathBuf,
    /// Long-format chain distribution CSV: ticker,dimension,chain_id,weight.
    #[arg(long)]
    chains: Option<PathBuf>,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    in_format: Option<InFormatArg>,
    #[arg(long, value_enum, alias = "out", default_value = "markdown")]
    out_format: OutFormatArg,
    /// Ticker reported as a benchmark rather than ranked. Repeatable.
    #[arg(long = "benchmark", value_name = "TICKER")]
    benchmarks: Vec<String>,
    /// Weight scheme as NAME=L,C,M or L,C,M. Repeatable; replaces the built-in schemes.
    #[arg(long = "weights", value_name = "NAME=L,C,M")]
    weights: Vec<String>,
    /// Scheme that orders the ranking. Defaults to `equal`, or the first --weights scheme.
    #[arg(long)]
    sort: Option<String>,
    /// Leave benchmark assets out of the normalization bounds.
    #[arg(long)]
    no_benchmark_bounds: bool,
    /// Decimals for scores (0-6).
    #[arg(long, default_value_t = 2)]
    precision: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses `NAME=L,C,M` or `L,C,M`; unnamed schemes are called `custom1`, `custom2`, ...
pub fn parse_weight_specs(specs: &[String]) -> Result<Vec<WeightScheme>> {
    let mut unnamed = 0;
    specs
        .iter()
        .map(|spec| {
            let (name, triple) = match spec.split_once('=') {
                Some((name, triple)) => (name.trim().to_string(), triple),
                None => {
                    unnamed += 1;
                    (format!("custom{unnamed}"), spec.as_str())
                }
            };
            let parts: Vec<&str> = triple.split(',').map(str::trim).collect();
            let weights: Vec<f64> = parts
                .iter()
                .map(|p| p.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidWeights {
                    name: name.clone(),
                    reason: format!("`{triple}` is not a list of numbers"),
                })?;
            match weights[..] {
                [l, c, m] => WeightScheme::new(name, l, c, m),
                _ => Err(Error::InvalidWeights {
                    name,
                    reason: format!("expected three weights L,C,M, got {}", weights.len()),
                }),
            }
        })
        .collect()
}

impl ScoreArgs {
    fn into_config(self) -> Result<RunConfig> {
        let schemes = if self.weights.is_empty() {
            WeightScheme::canonical()
        } else {
            parse_weight_specs(&self.weights)?
        };
        let sort_scheme = self.sort.unwrap_or_else(|| schemes[0].name().to_string());
        let config = RunConfig {
            format_in: match self.in_format {
                Some(InFormatArg::Csv) => InputFormat::Csv,
                Some(InFormatArg::Json) => InputFormat::Json,
                None => InputFormat::from_path(&self.input),
            },
            format_out: match self.out_format {
                OutFormatArg::Csv => OutputFormat::Csv,
                OutFormatArg::Markdown => OutputFormat::Markdown,
                OutFormatArg::Json => OutputFormat::Json,
            },
            input_path: self.input,
            chain_dist_path: self.chains,
            benchmark_tickers: (!self.benchmarks.is_empty()).then_some(self.benchmarks),
            schemes,
            sort_scheme,
            include_benchmarks_in_bounds: !self.no_benchmark_bounds,
            precision: self.precision,
            output_path: self.output,
        };
        config.validate()?;
        Ok(config)
    }
}

fn is_pilot(set: &SnapshotSet) -> bool {
    set.len() == PILOT_TICKERS.len() && PILOT_TICKERS.iter().all(|t| set.get(t).is_some())
}

/// Loads, scores and renders according to `config`.
pub fn run(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let opts = ParseOptions {
        chains_path: config.chain_dist_path.clone(),
        benchmarks: Vec::new(),
        as_of: None,
    };
    let parsed = parse_snapshot_file(&config.input_path, config.format_in, &opts)?;
    let benchmarks = match &config.benchmark_tickers {
        Some(list) => list.clone(),
        None if is_pilot(&parsed) => vec![PILOT_BENCHMARK.to_string()],
        None => Vec::new(),
    };
    let set = parsed.with_benchmarks(&benchmarks)?;

    let scoring = ScoringConfig {
        include_benchmarks_in_bounds: config.include_benchmarks_in_bounds,
        sort_scheme: config.sort_scheme.clone(),
        nhhi_source: ChainDimension::Holders,
    };
    let mut table = score_set(&set, &config.schemes, &scoring)?;
    for b in &benchmarks {
        if set.get(&b.trim().to_uppercase()).is_none() {
            table.warnings.push(format!(
                "benchmark ticker `{b}` does not appear in the input"
            ));
        }
    }
    let metrics = derive_all(&set, scoring.nhhi_source)?;
    Ok(emit_report(&table, &metrics, config, set.as_of()))
}

/// Runs the command line `args` (including the program name).
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
        }
    };
    let Command::Score(args) = cli.command;
    let result = args.into_config().and_then(|config| {
        let report = run(&config)?;
        match &config.output_path {
            Some(path) => fs::write(path, report).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            }),
            None => stdout
                .write_all(report.as_bytes())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                }),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_io() {
                EXIT_IO
            } else {
                EXIT_VALIDATION
            }
        }
    }
}
