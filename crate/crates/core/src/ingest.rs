// SPDX-License-Identifier: Apache-2.0

//! Reading and writing snapshot files.
//!
//! Two layouts are supported. CSV uses one wide row per asset plus an
//! optional long-format companion file `ticker,dimension,chain_id,weight`
//! for chain distributions. JSON carries one object per asset with a nested
//! `chain_distributions` block.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Locus, Result};
use crate::snapshot::{
    normalize_chain_shares, AssetRole, AssetSnapshot, ChainDimension, ChainDistribution,
    SnapshotSet, UNKNOWN_CHAIN,
};

pub const SNAPSHOT_COLUMNS: [&str; 7] = [
    "ticker",
    "category",
    "asset_value",
    "holders",
    "active_addresses_30d",
    "transfer_volume_30d",
    "transfer_count_30d",
];
/// Accepted in addition to [`SNAPSHOT_COLUMNS`]; `role` carries scored/benchmark.
pub const OPTIONAL_COLUMN_ROLE: &str = "role";
pub const CHAIN_COLUMNS: [&str; 4] = ["ticker", "dimension", "chain_id", "weight"];

/// Band within which directly supplied shares are accepted and renormalized.
pub const SHARE_SUM_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Json,
}

impl InputFormat {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Companion chain-distribution file (CSV input only).
    pub chains_path: Option<PathBuf>,
    /// Tickers forced to the benchmark role.
    pub benchmarks: Vec<String>,
    /// Snapshot date label; JSON input may carry its own.
    pub as_of: Option<String>,
}

pub fn parse_snapshot_file(
    path: &Path,
    format: InputFormat,
    opts: &ParseOptions,
) -> Result<SnapshotSet> {
    let text = read_file(path)?;
    let name = path.display().to_string();
    match format {
        InputFormat::Csv => {
            let chains = match &opts.chains_path {
                Some(p) => Some((p.display().to_string(), read_file(p)?)),
                None => None,
            };
            let chains = chains.as_ref().map(|(n, t)| (n.as_str(), t.as_str()));
            parse_csv_str(&name, &text, chains, opts)
        }
        InputFormat::Json => {
            if opts.chains_path.is_some() {
                return Err(Error::Config(
                    "a chains file is only used with CSV input; JSON carries chain_distributions inline"
                        .into(),
                ));
            }
            parse_json_str(&name, &text, opts)
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| match source.kind() {
        io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })
}

fn canonical_ticker(raw: &str) -> String {
    raw.trim().to_uppercase()
}

/// Raw weights collected for one (ticker, dimension), with the line they came from.
type RawWeights = Vec<(String, f64, Option<u64>)>;

#[derive(Default)]
struct RawChains {
    by_asset: HashMap<String, BTreeMap<ChainDimension, RawWeights>>,
}

impl RawChains {
    fn push(
        &mut self,
        ticker: String,
        dim: ChainDimension,
        chain: String,
        weight: f64,
        line: Option<u64>,
    ) {
        self.by_asset
            .entry(ticker)
            .or_default()
            .entry(dim)
            .or_default()
            .push((chain, weight, line));
    }
}

/// Builds a distribution from raw weights.
///
/// Weights that are all at most 1 with at least one fractional value are read
/// as shares and must sum to 1 within [`SHARE_SUM_TOLERANCE`]; anything else
/// is read as counts.
fn distribution_from_weights(raw: &RawWeights, file: &str) -> Result<ChainDistribution> {
    let first_line = raw.iter().filter_map(|(_, _, l)| *l).min();
    let locus = Locus::new(file, first_line);
    let pairs: Vec<(&str, f64)> = raw.iter().map(|(c, w, _)| (c.as_str(), *w)).collect();
    let looks_like_shares =
        pairs.iter().all(|(_, w)| *w <= 1.0) && pairs.iter().any(|(_, w)| w.fract() != 0.0);
    if looks_like_shares {
        let total: f64 = pairs.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > SHARE_SUM_TOLERANCE {
            return Err(Error::Value {
                locus,
                message: format!("chain shares sum to {total}, expected 1"),
            });
        }
    }
    normalize_chain_shares(&pairs).map_err(|e| match e {
        Error::Value { message, .. } => Error::Value { locus, message },
        Error::AllZeroWeights => Error::Value {
            locus,
            message: "chain weights are all zero".into(),
        },
        other => other,
    })
}

/// Resolves the three distributions of one asset, defaulting missing
/// dimensions to a single `unknown` chain and recording a note.
fn resolve_distributions(
    ticker: &str,
    raw: Option<&BTreeMap<ChainDimension, RawWeights>>,
    file: &str,
    notes: &mut Vec<String>,
) -> Result<[ChainDistribution; 3]> {
    let mut missing = Vec::new();
    let mut out = Vec::with_capacity(3);
    for dim in ChainDimension::ALL {
        match raw.and_then(|m| m.get(&dim)) {
            Some(weights) => out.push(distribution_from_weights(weights, file)?),
            None => {
                missing.push(dim.as_str());
                out.push(ChainDistribution::single(UNKNOWN_CHAIN));
            }
        }
    }
    if !missing.is_empty() {
        notes.push(format!(
            "{ticker}: no chain distribution for {}; assumed a single `{UNKNOWN_CHAIN}` chain",
            missing.join(", ")
        ));
    }
    let [h, a, v]: [ChainDistribution; 3] = out.try_into().expect("three dimensions");
    Ok([h, a, v])
}

fn check_header(
    file: &str,
    headers: &csv::StringRecord,
    required: &[&str],
    optional: &[&str],
) -> Result<HashMap<String, usize>> {
    let locus = || Locus::new(file, Some(1));
    let mut index = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        let h = h.trim();
        if !required.contains(&h) && !optional.contains(&h) {
            return Err(Error::Schema {
                locus: locus(),
                message: format!("unknown column `{h}`"),
            });
        }
        if index.insert(h.to_string(), i).is_some() {
            return Err(Error::Schema {
                locus: locus(),
                message: format!("column `{h}` appears twice"),
            });
        }
    }
    for col in required {
        if !index.contains_key(*col) {
            return Err(Error::Schema {
                locus: locus(),
                message: format!("missing column `{col}`"),
            });
        }
    }
    Ok(index)
}

struct Row<'a> {
    file: &'a str,
    line: Option<u64>,
    record: &'a csv::StringRecord,
    index: &'a HashMap<String, usize>,
}

impl Row<'_> {
    fn locus(&self) -> Locus {
        Locus::new(self.file, self.line)
    }

    fn cell(&self, col: &str) -> Option<&str> {
        self.index
            .get(col)
            .and_then(|&i| self.record.get(i))
            .map(str::trim)
    }

    fn text(&self, col: &str) -> Result<&str> {
        self.cell(col).ok_or_else(|| Error::Schema {
            locus: self.locus(),
            message: format!("missing field `{col}`"),
        })
    }

    fn count(&self, col: &str) -> Result<u64> {
        let raw = self.text(col)?;
        raw.parse::<u64>().map_err(|_| Error::Value {
            locus: self.locus(),
            message: format!("column `{col}`: expected a non-negative integer, got `{raw}`"),
        })
    }

    fn amount(&self, col: &str) -> Result<f64> {
        let raw = self.text(col)?;
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
            _ => Err(Error::Value {
                locus: self.locus(),
                message: format!("column `{col}`: expected a non-negative number, got `{raw}`"),
            }),
        }
    }
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn csv_error(file: &str, err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line());
    let message = match err.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => format!("expected {expected_len} fields, found {len}"),
        _ => err.to_string(),
    };
    Error::Schema {
        locus: Locus::new(file, line),
        message,
    }
}

fn parse_chains_csv(file: &str, text: &str, known: &HashSet<String>) -> Result<RawChains> {
    let mut reader = csv_reader(text);
    let headers = reader.headers().map_err(|e| csv_error(file, e))?.clone();
    let index = check_header(file, &headers, &CHAIN_COLUMNS, &[])?;
    let mut chains = RawChains::default();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(file, e))?;
        let row = Row {
            file,
            line: record.position().map(|p| p.line()),
            record: &record,
            index: &index,
        };
        let ticker = canonical_ticker(row.text("ticker")?);
        if !known.contains(&ticker) {
            return Err(Error::Schema {
                locus: row.locus(),
                message: format!("ticker `{ticker}` does not appear in the snapshot file"),
            });
        }
        let dim =
            ChainDimension::from_str(row.text("dimension")?).map_err(|message| Error::Value {
                locus: row.locus(),
                message,
            })?;
        let chain = row.text("chain_id")?.to_string();
        if chain.is_empty() {
            return Err(Error::Value {
                locus: row.locus(),
                message: "empty chain_id".into(),
            });
        }
        let weight = row.amount("weight")?;
        chains.push(ticker, dim, chain, weight, row.line);
    }
    // Per-row loci for duplicate chains.
    for dims in chains.by_asset.values() {
        for weights in dims.values() {
            let mut seen = HashSet::new();
            for (chain, _, line) in weights {
                if !seen.insert(chain.as_str()) {
                    return Err(Error::Value {
                        locus: Locus::new(file, *line),
                        message: format!(
                            "chain `{chain}` listed twice for the same asset and dimension"
                        ),
                    });
                }
            }
        }
    }
    Ok(chains)
}

fn resolve_role(ticker: &str, stated: AssetRole, benchmarks: &[String]) -> AssetRole {
    if benchmarks.iter().any(|b| canonical_ticker(b) == ticker) {
        AssetRole::Benchmark
    } else {
        stated
    }
}

/// Parses CSV text. `chains` is the optional companion file as `(name, text)`.
pub fn parse_csv_str(
    file: &str,
    text: &str,
    chains: Option<(&str, &str)>,
    opts: &ParseOptions,
) -> Result<SnapshotSet> {
    let mut reader = csv_reader(text);
    let headers = reader.headers().map_err(|e| csv_error(file, e))?.clone();
    let index = check_header(file, &headers, &SNAPSHOT_COLUMNS, &[OPTIONAL_COLUMN_ROLE])?;

    struct Pending {
        asset: AssetSnapshot,
        locus: Locus,
    }
    let mut pending: Vec<Pending> = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(file, e))?;
        let row = Row {
            file,
            line: record.position().map(|p| p.line()),
            record: &record,
            index: &index,
        };
        let ticker = canonical_ticker(row.text("ticker")?);
        if ticker.is_empty() {
            return Err(Error::Value {
                locus: row.locus(),
                message: "empty ticker".into(),
            });
        }
        if !seen.insert(ticker.clone()) {
            return Err(Error::DuplicateTicker {
                ticker,
                locus: row.locus(),
            });
        }
        let stated = match row.cell(OPTIONAL_COLUMN_ROLE) {
            Some(raw) if !raw.is_empty() => {
                AssetRole::from_str(raw).map_err(|message| Error::Value {
                    locus: row.locus(),
                    message,
                })?
            }
            _ => AssetRole::Scored,
        };
        let asset = AssetSnapshot {
            role: resolve_role(&ticker, stated, &opts.benchmarks),
            category: row.text("category")?.to_string(),
            asset_value: row.amount("asset_value")?,
            holders: row.count("holders")?,
            active_addresses_30d: row.count("active_addresses_30d")?,
            transfer_volume_30d: row.amount("transfer_volume_30d")?,
            transfer_count_30d: row.count("transfer_count_30d")?,
            holder_chain_dist: ChainDistribution::single(UNKNOWN_CHAIN),
            active_chain_dist: ChainDistribution::single(UNKNOWN_CHAIN),
            volume_chain_dist: ChainDistribution::single(UNKNOWN_CHAIN),
            ticker,
        };
        asset.validate(&row.locus())?;
        pending.push(Pending {
            asset,
            locus: row.locus(),
        });
    }

    let raw_chains = match chains {
        Some((chain_file, chain_text)) => {
            Some((chain_file, parse_chains_csv(chain_file, chain_text, &seen)?))
        }
        None => None,
    };
    let mut notes = Vec::new();
    let mut assets = Vec::with_capacity(pending.len());
    for Pending { mut asset, locus } in pending {
        let (chain_file, raw) = match &raw_chains {
            Some((f, c)) => (*f, c.by_asset.get(&asset.ticker)),
            None => (locus.file.as_str(), None),
        };
        let [h, a, v] = resolve_distributions(&asset.ticker, raw, chain_file, &mut notes)?;
        asset.holder_chain_dist = h;
        asset.active_chain_dist = a;
        asset.volume_chain_dist = v;
        assets.push(asset);
    }
    let as_of = opts.as_of.clone().unwrap_or_default();
    Ok(SnapshotSet::new(assets, as_of)?.with_notes(notes))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonChainEntry {
    chain_id: String,
    #[serde(alias = "share")]
    weight: f64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonChains {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    holders: Option<Vec<JsonChainEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    active: Option<Vec<JsonChainEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    volume: Option<Vec<JsonChainEntry>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonAsset {
    ticker: String,
    category: String,
    asset_value: f64,
    holders: u64,
    active_addresses_30d: u64,
    transfer_volume_30d: f64,
    transfer_count_30d: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    role: Option<AssetRole>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chain_distributions: Option<JsonChains>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSnapshot {
    #[serde(default)]
    as_of: Option<String>,
    assets: Vec<JsonAsset>,
}

fn json_error(file: &str, err: serde_json::Error) -> Error {
    let locus = Locus::new(file, Some(err.line() as u64));
    let message = err.to_string();
    if message.contains("missing field") || message.contains("unknown field") {
        Error::Schema { locus, message }
    } else {
        Error::Value { locus, message }
    }
}

/// Parses JSON text: either `{"as_of": ..., "assets": [...]}` or a bare array
/// of asset objects.
pub fn parse_json_str(file: &str, text: &str, opts: &ParseOptions) -> Result<SnapshotSet> {
    // Dispatch on the top-level shape; an untagged enum would hide field-level errors.
    let trimmed = text.trim_start();
    let (as_of, json_assets) = if trimmed.starts_with('[') {
        let assets: Vec<JsonAsset> = serde_json::from_str(text).map_err(|e| json_error(file, e))?;
        (None, assets)
    } else {
        let doc: JsonSnapshot = serde_json::from_str(text).map_err(|e| json_error(file, e))?;
        (doc.as_of, doc.assets)
    };

    let mut notes = Vec::new();
    let mut assets = Vec::with_capacity(json_assets.len());
    let mut seen = HashSet::new();
    for (i, ja) in json_assets.into_iter().enumerate() {
        let ticker = canonical_ticker(&ja.ticker);
        let locus = Locus::new(format!("{file}, asset #{} ({ticker})", i + 1), None);
        if ticker.is_empty() {
            return Err(Error::Value {
                locus,
                message: "empty ticker".into(),
            });
        }
        if !seen.insert(ticker.clone()) {
            return Err(Error::DuplicateTicker { ticker, locus });
        }
        let mut raw = BTreeMap::new();
        if let Some(chains) = ja.chain_distributions {
            for (dim, entries) in [
                (ChainDimension::Holders, chains.holders),
                (ChainDimension::Active, chains.active),
                (ChainDimension::Volume, chains.volume),
            ] {
                if let Some(entries) = entries {
                    let weights: RawWeights = entries
                        .into_iter()
                        .map(|e| (e.chain_id, e.weight, None))
                        .collect();
                    raw.insert(dim, weights);
                }
            }
        }
        let chain_file = locus.to_string();
        let [h, a, v] = resolve_distributions(&ticker, Some(&raw), &chain_file, &mut notes)?;
        let asset = AssetSnapshot {
            role: resolve_role(&ticker, ja.role.unwrap_or_default(), &opts.benchmarks),
            category: ja.category.trim().to_string(),
            asset_value: ja.asset_value,
            holders: ja.holders,
            active_addresses_30d: ja.active_addresses_30d,
            transfer_volume_30d: ja.transfer_volume_30d,
            transfer_count_30d: ja.transfer_count_30d,
            holder_chain_dist: h,
            active_chain_dist: a,
            volume_chain_dist: v,
            ticker,
        };
        asset.validate(&locus)?;
        assets.push(asset);
    }
    let as_of = opts.as_of.clone().or(as_of).unwrap_or_default();
    Ok(SnapshotSet::new(assets, as_of)?.with_notes(notes))
}

/// Writes a set as `(snapshot csv, chains csv)`. Floats use the shortest
/// representation that parses back to the same value.
pub fn emit_csv(set: &SnapshotSet) -> (String, String) {
    let mut main = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = SNAPSHOT_COLUMNS.to_vec();
    header.push(OPTIONAL_COLUMN_ROLE);
    main.write_record(&header).expect("in-memory write");
    let mut chains = csv::Writer::from_writer(Vec::new());
    chains.write_record(CHAIN_COLUMNS).expect("in-memory write");
    for a in set.assets() {
        main.write_record([
            a.ticker.clone(),
            a.category.clone(),
            a.asset_value.to_string(),
            a.holders.to_string(),
            a.active_addresses_30d.to_string(),
            a.transfer_volume_30d.to_string(),
            a.transfer_count_30d.to_string(),
            a.role.to_string(),
        ])
        .expect("in-memory write");
        for dim in ChainDimension::ALL {
            for e in a.distribution(dim).entries() {
                chains
                    .write_record([
                        a.ticker.as_str(),
                        dim.as_str(),
                        e.chain_id.as_str(),
                        &e.share.to_string(),
                    ])
                    .expect("in-memory write");
            }
        }
    }
    let finish = |w: csv::Writer<Vec<u8>>| {
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    };
    (finish(main), finish(chains))
}

pub fn emit_json(set: &SnapshotSet) -> String {
    let entries = |d: &ChainDistribution| {
        Some(
            d.entries()
                .iter()
                .map(|e| JsonChainEntry {
                    chain_id: e.chain_id.clone(),
                    weight: e.share,
                })
                .collect(),
        )
    };
    let doc = JsonSnapshot {
        as_of: Some(set.as_of().to_string()),
        assets: set
            .assets()
            .iter()
            .map(|a| JsonAsset {
                ticker: a.ticker.clone(),
                category: a.category.clone(),
                asset_value: a.asset_value,
                holders: a.holders,
                active_addresses_30d: a.active_addresses_30d,
                transfer_volume_30d: a.transfer_volume_30d,
                transfer_count_30d: a.transfer_count_30d,
                role: Some(a.role),
                chain_distributions: Some(JsonChains {
                    holders: entries(&a.holder_chain_dist),
                    active: entries(&a.active_chain_dist),
                    volume: entries(&a.volume_chain_dist),
                }),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}
