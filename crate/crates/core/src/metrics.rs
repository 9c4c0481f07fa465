// SPDX-License-Identifier: Apache-2.0

//! Derived liquidity, concentration and market-quality indicators.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::snapshot::{AssetRole, AssetSnapshot, ChainDimension, ChainDistribution, SnapshotSet};

/// Indicators computed from one asset snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedMetrics {
    /// 30-day transfer volume over asset value.
    pub turnover: f64,
    /// 30-day active addresses over holders. Can exceed 1.
    pub active_ratio: f64,
    /// 30-day transfers per holder.
    pub transfer_intensity: f64,
    /// USD per transfer; `None` when there were no transfers.
    pub avg_transfer_size: Option<f64>,
    /// USD per holder.
    pub avg_value_per_holder: f64,
    /// HHI of the cross-chain distribution selected as the network source.
    pub nhhi: f64,
    pub hhi_active: f64,
    pub hhi_volume: f64,
}

pub fn compute_turnover(a: &AssetSnapshot) -> Result<f64> {
    if a.asset_value <= 0.0 {
        return Err(Error::ZeroAssetValue(a.ticker.clone()));
    }
    Ok(a.transfer_volume_30d / a.asset_value)
}

pub fn compute_active_ratio(a: &AssetSnapshot) -> f64 {
    a.active_addresses_30d as f64 / a.holders as f64
}

pub fn compute_transfer_intensity(a: &AssetSnapshot) -> f64 {
    a.transfer_count_30d as f64 / a.holders as f64
}

pub fn compute_avg_transfer_size(a: &AssetSnapshot) -> Option<f64> {
    (a.transfer_count_30d > 0).then(|| a.transfer_volume_30d / a.transfer_count_30d as f64)
}

pub fn compute_avg_value_per_holder(a: &AssetSnapshot) -> f64 {
    a.asset_value / a.holders as f64
}

/// Herfindahl-Hirschman index: the sum of squared shares, in `[1/k, 1]`.
pub fn compute_hhi(d: &ChainDistribution) -> f64 {
    d.shares().map(|s| s * s).sum()
}

/// Computes all indicators, taking NHHI from the holder distribution.
pub fn derive_metrics(a: &AssetSnapshot) -> Result<DerivedMetrics> {
    derive_metrics_with(a, ChainDimension::Holders)
}

/// Like [`derive_metrics`] with an explicit distribution feeding NHHI.
pub fn derive_metrics_with(
    a: &AssetSnapshot,
    nhhi_source: ChainDimension,
) -> Result<DerivedMetrics> {
    Ok(DerivedMetrics {
        turnover: compute_turnover(a)?,
        active_ratio: compute_active_ratio(a),
        transfer_intensity: compute_transfer_intensity(a),
        avg_transfer_size: compute_avg_transfer_size(a),
        avg_value_per_holder: compute_avg_value_per_holder(a),
        nhhi: compute_hhi(a.distribution(nhhi_source)),
        hhi_active: compute_hhi(&a.active_chain_dist),
        hhi_volume: compute_hhi(&a.volume_chain_dist),
    })
}

/// One asset's metrics together with the identity fields scoring needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssetMetrics {
    pub ticker: String,
    pub category: String,
    pub role: AssetRole,
    pub holders: u64,
    pub metrics: DerivedMetrics,
}

pub fn derive_all(set: &SnapshotSet, nhhi_source: ChainDimension) -> Result<Vec<AssetMetrics>> {
    set.assets()
        .iter()
        .map(|a| {
            Ok(AssetMetrics {
                ticker: a.ticker.clone(),
                category: a.category.clone(),
                role: a.role,
                holders: a.holders,
                metrics: derive_metrics_with(a, nhhi_source)?,
            })
        })
        .collect()
}

/// The normalizable columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Turnover,
    ActiveRatio,
    TransferIntensity,
    AvgTransferSize,
    Holders,
    AvgValuePerHolder,
    Nhhi,
    HhiActive,
    HhiVolume,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::Turnover,
        Metric::ActiveRatio,
        Metric::TransferIntensity,
        Metric::AvgTransferSize,
        Metric::Holders,
        Metric::AvgValuePerHolder,
        Metric::Nhhi,
        Metric::HhiActive,
        Metric::HhiVolume,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Turnover => "turnover",
            Metric::ActiveRatio => "active_ratio",
            Metric::TransferIntensity => "transfer_intensity",
            Metric::AvgTransferSize => "ats",
            Metric::Holders => "holders",
            Metric::AvgValuePerHolder => "avh",
            Metric::Nhhi => "nhhi",
            Metric::HhiActive => "hhi_active",
            Metric::HhiVolume => "hhi_volume",
        }
    }

    /// The column value for an asset; `None` only for an undefined ATS.
    pub fn value_of(self, row: &AssetMetrics) -> Option<f64> {
        let m = &row.metrics;
        match self {
            Metric::Turnover => Some(m.turnover),
            Metric::ActiveRatio => Some(m.active_ratio),
            Metric::TransferIntensity => Some(m.transfer_intensity),
            Metric::AvgTransferSize => m.avg_transfer_size,
            Metric::Holders => Some(row.holders as f64),
            Metric::AvgValuePerHolder => Some(m.avg_value_per_holder),
            Metric::Nhhi => Some(m.nhhi),
            Metric::HhiActive => Some(m.hhi_active),
            Metric::HhiVolume => Some(m.hhi_volume),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMetric(s.to_string()))
    }
}
