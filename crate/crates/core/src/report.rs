// SPDX-License-Identifier: Apache-2.0

//! Rendering of derived metrics, score tables and sensitivity matrices.
//!
//! All renderers are deterministic: fixed column order, fixed decimal
//! formatting, LF line endings.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::InputFormat;
use crate::metrics::AssetMetrics;
use crate::normalize::Direction;
use crate::scoring::{sensitivity_sweep, RiskScores, ScoreTable, WeightScheme};

pub const MAX_PRECISION: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
    Json,
}

/// Everything one scoring run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub chain_dist_path: Option<PathBuf>,
    pub format_in: InputFormat,
    pub format_out: OutputFormat,
    /// `None` selects the default: `USDC` for the pilot fixture, none otherwise.
    pub benchmark_tickers: Option<Vec<String>>,
    pub schemes: Vec<WeightScheme>,
    pub sort_scheme: String,
    pub include_benchmarks_in_bounds: bool,
    /// Decimals used for scores.
    pub precision: usize,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>) -> Self {
        let input_path = input_path.into();
        Self {
            format_in: InputFormat::from_path(&input_path),
            input_path,
            chain_dist_path: None,
            format_out: OutputFormat::Markdown,
            benchmark_tickers: None,
            schemes: WeightScheme::canonical(),
            sort_scheme: "equal".into(),
            include_benchmarks_in_bounds: true,
            precision: 2,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision > MAX_PRECISION {
            return Err(Error::Config(format!(
                "precision must be between 0 and {MAX_PRECISION}, got {}",
                self.precision
            )));
        }
        if !self.schemes.iter().any(|s| s.name() == self.sort_scheme) {
            return Err(Error::Config(format!(
                "sort scheme `{}` is not among the weight schemes",
                self.sort_scheme
            )));
        }
        Ok(())
    }
}

/// Fixed-point formatting that never renders a negative zero.
pub fn format_fixed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

const RATIO_DECIMALS: usize = 4;
const USD_DECIMALS: usize = 0;

fn metric_cells(m: &AssetMetrics) -> [String; 8] {
    let d = &m.metrics;
    [
        format_fixed(d.turnover, RATIO_DECIMALS),
        format_fixed(d.active_ratio, RATIO_DECIMALS),
        format_fixed(d.transfer_intensity, RATIO_DECIMALS),
        d.avg_transfer_size
            .map_or_else(|| "n/a".to_string(), |v| format_fixed(v, USD_DECIMALS)),
        format_fixed(d.avg_value_per_holder, USD_DECIMALS),
        format_fixed(d.nhhi, RATIO_DECIMALS),
        format_fixed(d.hhi_active, RATIO_DECIMALS),
        format_fixed(d.hhi_volume, RATIO_DECIMALS),
    ]
}

pub fn emit_report(
    table: &ScoreTable,
    metrics: &[AssetMetrics],
    config: &RunConfig,
    as_of: &str,
) -> String {
    match config.format_out {
        OutputFormat::Markdown => markdown(table, metrics, config.precision, as_of),
        OutputFormat::Csv => csv_report(table, metrics, config.precision),
        OutputFormat::Json => json_report(table, metrics, config.precision, as_of),
    }
}

fn md_row(out: &mut String, cells: &[String]) {
    out.push('|');
    for c in cells {
        let _ = write!(out, " {} |", c.replace('|', "\\|"));
    }
    out.push('\n');
}

fn md_header(out: &mut String, names: &[&str], text_cols: usize) {
    md_row(
        out,
        &names.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    );
    out.push('|');
    for i in 0..names.len() {
        out.push_str(if i < text_cols { " --- |" } else { " ---: |" });
    }
    out.push('\n');
}

fn score_cells(r: &RiskScores, sort_scheme: &str, p: usize) -> Vec<String> {
    vec![
        r.ticker.clone(),
        r.category.clone(),
        format_fixed(r.liquidity, p),
        format_fixed(r.concentration, p),
        format_fixed(r.market_quality, p),
        format_fixed(r.composite(sort_scheme).unwrap_or(f64::NAN), p),
    ]
}

fn markdown(table: &ScoreTable, metrics: &[AssetMetrics], p: usize, as_of: &str) -> String {
    let mut out = String::from("# Risk scores\n\n");
    if !as_of.is_empty() {
        let _ = writeln!(out, "Snapshot: {as_of}\n");
    }

    out.push_str("## Derived metrics\n\n");
    md_header(
        &mut out,
        &[
            "Ticker",
            "Category",
            "Turnover",
            "Active ratio",
            "Transfer intensity",
            "ATS",
            "AVH",
            "NHHI",
            "HHI active",
            "HHI volume",
        ],
        2,
    );
    for m in metrics {
        let mut cells = vec![m.ticker.clone(), m.category.clone()];
        cells.extend(metric_cells(m));
        md_row(&mut out, &cells);
    }

    let _ = writeln!(
        out,
        "\n## Scores (sorted by {} composite)\n",
        table.sort_scheme
    );
    let header = ["Ticker", "Category", "L", "C", "M", "Composite"];
    md_header(&mut out, &header, 2);
    for r in &table.rows {
        md_row(&mut out, &score_cells(r, &table.sort_scheme, p));
    }

    out.push_str("\n## Sensitivity\n\n");
    let sweep = sensitivity_sweep(table, &table.schemes).expect("schemes validated when scoring");
    let mut names = vec!["Ticker"];
    names.extend(sweep.schemes.iter().map(String::as_str));
    md_header(&mut out, &names, 1);
    for row in &sweep.rows {
        let mut cells = vec![row.ticker.clone()];
        cells.extend(row.values.iter().map(|v| format_fixed(*v, p)));
        md_row(&mut out, &cells);
    }

    out.push_str("\n## Benchmarks\n\n");
    if table.benchmark_rows.is_empty() {
        out.push_str("None.\n");
    } else {
        md_header(&mut out, &header, 2);
        for r in &table.benchmark_rows {
            md_row(&mut out, &score_cells(r, &table.sort_scheme, p));
        }
    }

    out.push_str("\n## Warnings\n\n");
    if table.warnings.is_empty() {
        out.push_str("None.\n");
    }
    for w in &table.warnings {
        let _ = writeln!(out, "- {w}");
    }
    out
}

fn csv_report(table: &ScoreTable, metrics: &[AssetMetrics], p: usize) -> String {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    let mut header: Vec<String> = ["section", "rank", "ticker", "category", "L", "C", "M"]
        .map(String::from)
        .to_vec();
    header.extend(table.schemes.iter().map(|s| s.name().to_string()));
    w.write_record(&header).expect("in-memory write");

    let score_record = |section: &str, rank: String, r: &RiskScores| {
        let mut rec = vec![
            section.to_string(),
            rank,
            r.ticker.clone(),
            r.category.clone(),
            format_fixed(r.liquidity, p),
            format_fixed(r.concentration, p),
            format_fixed(r.market_quality, p),
        ];
        rec.extend(r.composites.iter().map(|(_, v)| format_fixed(*v, p)));
        rec
    };
    for (i, r) in table.rows.iter().enumerate() {
        w.write_record(score_record("ranked", (i + 1).to_string(), r))
            .expect("in-memory write");
    }
    for r in &table.benchmark_rows {
        w.write_record(score_record("benchmark", String::new(), r))
            .expect("in-memory write");
    }
    let mut out = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "ticker",
        "category",
        "role",
        "turnover",
        "active_ratio",
        "transfer_intensity",
        "ats",
        "avh",
        "nhhi",
        "hhi_active",
        "hhi_volume",
    ])
    .expect("in-memory write");
    for m in metrics {
        let mut rec = vec![m.ticker.clone(), m.category.clone(), m.role.to_string()];
        rec.extend(metric_cells(m));
        w.write_record(&rec).expect("in-memory write");
    }
    out.push('\n');
    out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));

    if !table.warnings.is_empty() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["warning"]).expect("in-memory write");
        for msg in &table.warnings {
            w.write_record([msg]).expect("in-memory write");
        }
        out.push('\n');
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
    }
    out
}

#[derive(Serialize)]
struct JsonValue {
    value: f64,
    display: String,
}

#[derive(Serialize)]
struct JsonComposite {
    scheme: String,
    value: f64,
    display: String,
}

#[derive(Serialize)]
struct JsonScoreRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    ticker: String,
    category: String,
    role: String,
    liquidity: JsonValue,
    concentration: JsonValue,
    market_quality: JsonValue,
    composites: Vec<JsonComposite>,
}

#[derive(Serialize)]
struct JsonScheme {
    name: String,
    liquidity: f64,
    concentration: f64,
    market_quality: f64,
}

#[derive(Serialize)]
struct JsonBounds {
    metric: String,
    direction: Direction,
    min: f64,
    max: f64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    as_of: &'a str,
    sort_scheme: &'a str,
    precision: usize,
    schemes: Vec<JsonScheme>,
    reference_tickers: &'a [String],
    bounds: Vec<JsonBounds>,
    metrics: &'a [AssetMetrics],
    rows: Vec<JsonScoreRow>,
    benchmark_rows: Vec<JsonScoreRow>,
    warnings: &'a [String],
}

fn json_report(table: &ScoreTable, metrics: &[AssetMetrics], p: usize, as_of: &str) -> String {
    let value = |v: f64| JsonValue {
        value: v,
        display: format_fixed(v, p),
    };
    let row = |rank: Option<usize>, r: &RiskScores| JsonScoreRow {
        rank,
        ticker: r.ticker.clone(),
        category: r.category.clone(),
        role: r.role.to_string(),
        liquidity: value(r.liquidity),
        concentration: value(r.concentration),
        market_quality: value(r.market_quality),
        composites: r
            .composites
            .iter()
            .map(|(scheme, v)| JsonComposite {
                scheme: scheme.clone(),
                value: *v,
                display: format_fixed(*v, p),
            })
            .collect(),
    };
    let report = JsonReport {
        as_of,
        sort_scheme: &table.sort_scheme,
        precision: p,
        schemes: table
            .schemes
            .iter()
            .map(|s| {
                let (l, c, m) = s.weights();
                JsonScheme {
                    name: s.name().to_string(),
                    liquidity: l,
                    concentration: c,
                    market_quality: m,
                }
            })
            .collect(),
        reference_tickers: table.context.reference_tickers(),
        bounds: table
            .context
            .metrics()
            .map(|(metric, b)| JsonBounds {
                metric: metric.name().to_string(),
                direction: b.direction,
                min: b.min,
                max: b.max,
            })
            .collect(),
        metrics,
        rows: table
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| row(Some(i + 1), r))
            .collect(),
        benchmark_rows: table.benchmark_rows.iter().map(|r| row(None, r)).collect(),
        warnings: &table.warnings,
    };
    let mut out = serde_json::to_string_pretty(&report).expect("serializable");
    out.push('\n');
    out
}
