// SPDX-License-Identifier: Apache-2.0

//! Asset snapshot data model.
//!
//! A [`SnapshotSet`] is the validated, immutable input to scoring: one
//! [`AssetSnapshot`] per token with its raw observables and three chain
//! distributions (holders, active addresses, transfer volume).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Locus, Result};

/// Chain id used when an asset has no chain distribution on file.
pub const UNKNOWN_CHAIN: &str = "unknown";

/// Sums this close to 1 are treated as already canonical and kept verbatim,
/// which makes normalization idempotent.
const CANONICAL_SUM_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainShare {
    pub chain_id: String,
    pub share: f64,
}

/// Shares of an asset across networks; shares are non-negative and sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDistribution {
    entries: Vec<ChainShare>,
}

impl ChainDistribution {
    pub fn single(chain_id: &str) -> Self {
        Self {
            entries: vec![ChainShare {
                chain_id: chain_id.to_string(),
                share: 1.0,
            }],
        }
    }

    pub fn entries(&self) -> &[ChainShare] {
        &self.entries
    }

    pub fn shares(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.share)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_unknown(&self) -> bool {
        self.entries.len() == 1 && self.entries[0].chain_id == UNKNOWN_CHAIN
    }
}

/// Divides raw chain weights (counts or shares) by their sum.
///
/// Chain ids must be unique and non-empty and every weight finite and
/// non-negative. Input whose weights already sum to 1 is returned unchanged.
pub fn normalize_chain_shares<S: AsRef<str>>(raw: &[(S, f64)]) -> Result<ChainDistribution> {
    if raw.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let locus = || Locus::new("chain distribution", None);
    let mut seen = HashSet::new();
    for (chain, weight) in raw {
        let chain = chain.as_ref();
        if chain.trim().is_empty() {
            return Err(Error::Value {
                locus: locus(),
                message: "empty chain id".into(),
            });
        }
        if !seen.insert(chain) {
            return Err(Error::Value {
                locus: locus(),
                message: format!("chain `{chain}` listed twice"),
            });
        }
        if !weight.is_finite() || *weight < 0.0 {
            return Err(Error::Value {
                locus: locus(),
                message: format!("chain `{chain}` has invalid weight {weight}"),
            });
        }
    }
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return Err(Error::AllZeroWeights);
    }
    let keep = (total - 1.0).abs() <= CANONICAL_SUM_EPS;
    let entries = raw
        .iter()
        .map(|(chain, weight)| ChainShare {
            chain_id: chain.as_ref().to_string(),
            share: if keep { *weight } else { weight / total },
        })
        .collect();
    Ok(ChainDistribution { entries })
}

/// Whether an asset is ranked or only contributes to normalization bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssetRole {
    #[default]
    Scored,
    Benchmark,
}

impl AssetRole {
    pub fn as_str(self) -> &'static str {
        match self {
            AssetRole::Scored => "scored",
            AssetRole::Benchmark => "benchmark",
        }
    }
}

impl fmt::Display for AssetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AssetRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scored" => Ok(AssetRole::Scored),
            "benchmark" => Ok(AssetRole::Benchmark),
            other => Err(format!(
                "unknown role `{other}` (expected scored or benchmark)"
            )),
        }
    }
}

/// The three per-chain breakdowns carried for each asset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainDimension {
    Holders,
    Active,
    Volume,
}

impl ChainDimension {
    pub const ALL: [ChainDimension; 3] = [
        ChainDimension::Holders,
        ChainDimension::Active,
        ChainDimension::Volume,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChainDimension::Holders => "holders",
            ChainDimension::Active => "active",
            ChainDimension::Volume => "volume",
        }
    }
}

impl FromStr for ChainDimension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "holders" => Ok(ChainDimension::Holders),
            "active" => Ok(ChainDimension::Active),
            "volume" => Ok(ChainDimension::Volume),
            other => Err(format!(
                "unknown dimension `{other}` (expected holders, active or volume)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssetSnapshot {
    pub ticker: String,
    pub category: String,
    /// USD.
    pub asset_value: f64,
    pub holders: u64,
    pub active_addresses_30d: u64,
    /// USD.
    pub transfer_volume_30d: f64,
    pub transfer_count_30d: u64,
    pub holder_chain_dist: ChainDistribution,
    pub active_chain_dist: ChainDistribution,
    pub volume_chain_dist: ChainDistribution,
    pub role: AssetRole,
}

impl AssetSnapshot {
    pub fn distribution(&self, dim: ChainDimension) -> &ChainDistribution {
        match dim {
            ChainDimension::Holders => &self.holder_chain_dist,
            ChainDimension::Active => &self.active_chain_dist,
            ChainDimension::Volume => &self.volume_chain_dist,
        }
    }

    /// Checks the per-asset invariants, reporting problems against `locus`.
    pub fn validate(&self, locus: &Locus) -> Result<()> {
        let bad = |message: String| Error::Value {
            locus: locus.clone(),
            message,
        };
        if self.ticker.is_empty() {
            return Err(bad("ticker is empty".into()));
        }
        if self.ticker.chars().any(|c| c.is_lowercase()) {
            return Err(bad(format!("ticker `{}` is not uppercase", self.ticker)));
        }
        if !self.asset_value.is_finite() || self.asset_value < 0.0 {
            return Err(bad(format!(
                "asset_value must be a non-negative number, got {}",
                self.asset_value
            )));
        }
        if !self.transfer_volume_30d.is_finite() || self.transfer_volume_30d < 0.0 {
            return Err(bad(format!(
                "transfer_volume_30d must be a non-negative number, got {}",
                self.transfer_volume_30d
            )));
        }
        if self.holders == 0 {
            return Err(bad("holders must be at least 1".into()));
        }
        if self.transfer_volume_30d > 0.0 && self.transfer_count_30d == 0 {
            return Err(bad(
                "transfer_volume_30d is positive but transfer_count_30d is 0".into(),
            ));
        }
        Ok(())
    }
}

/// An ordered, validated collection of asset snapshots taken at one date.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSet {
    assets: Vec<AssetSnapshot>,
    as_of: String,
    notes: Vec<String>,
}

impl SnapshotSet {
    /// Validates set-level invariants: unique tickers, at least two assets,
    /// at least one scored asset.
    pub fn new(assets: Vec<AssetSnapshot>, as_of: impl Into<String>) -> Result<Self> {
        let set_locus = || Locus::new("snapshot set", None);
        let mut seen = HashSet::new();
        for (i, asset) in assets.iter().enumerate() {
            let locus = Locus::new(format!("asset #{} ({})", i + 1, asset.ticker), None);
            asset.validate(&locus)?;
            if !seen.insert(asset.ticker.as_str()) {
                return Err(Error::DuplicateTicker {
                    ticker: asset.ticker.clone(),
                    locus: set_locus(),
                });
            }
        }
        if assets.len() < 2 {
            return Err(Error::Value {
                locus: set_locus(),
                message: format!("need at least 2 assets, got {}", assets.len()),
            });
        }
        if !assets.iter().any(|a| a.role == AssetRole::Scored) {
            return Err(Error::Value {
                locus: set_locus(),
                message: "no asset has role `scored`".into(),
            });
        }
        Ok(Self {
            assets,
            as_of: as_of.into(),
            notes: Vec::new(),
        })
    }

    /// Marks the listed tickers as benchmarks, keeping every other role.
    pub fn with_benchmarks(self, tickers: &[String]) -> Result<Self> {
        let notes = self.notes;
        let assets = self
            .assets
            .into_iter()
            .map(|mut a| {
                if tickers
                    .iter()
                    .any(|t| t.trim().eq_ignore_ascii_case(&a.ticker))
                {
                    a.role = AssetRole::Benchmark;
                }
                a
            })
            .collect();
        Ok(Self::new(assets, self.as_of)?.with_notes(notes))
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }

    pub fn assets(&self) -> &[AssetSnapshot] {
        &self.assets
    }

    pub fn as_of(&self) -> &str {
        &self.as_of
    }

    /// Ingest notes, e.g. assets whose chain distributions were defaulted.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn get(&self, ticker: &str) -> Option<&AssetSnapshot> {
        self.assets.iter().find(|a| a.ticker == ticker)
    }

    pub fn len(&self) -> usize {
        self.assets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assets.is_empty()
    }
}
