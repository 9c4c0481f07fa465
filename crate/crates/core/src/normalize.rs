// SPDX-License-Identifier: Apache-2.0

//! Directional min-max rescaling onto a 0-100 risk scale.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{AssetMetrics, Metric};
use crate::snapshot::AssetRole;

/// Score assigned to every asset when a column has no spread.
pub const DEGENERATE_SCORE: f64 = 50.0;
/// Score assigned to an undefined value (an asset with no transfers has no ATS).
pub const UNDEFINED_SCORE: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Higher values mean lower risk.
    Protective,
    /// Higher values mean higher risk.
    RiskIncreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricBounds {
    pub min: f64,
    pub max: f64,
    pub direction: Direction,
}

impl MetricBounds {
    pub fn is_degenerate(&self) -> bool {
        self.max == self.min
    }

    /// Maps `x` onto [0, 100], clamping values outside the bounds.
    pub fn scale(&self, x: f64) -> f64 {
        if self.is_degenerate() {
            return DEGENERATE_SCORE;
        }
        let span = self.max - self.min;
        let score = match self.direction {
            Direction::RiskIncreasing => 100.0 * (x - self.min) / span,
            Direction::Protective => 100.0 * (self.max - x) / span,
        };
        score.clamp(0.0, 100.0)
    }
}

/// Per-metric bounds over a reference set of assets. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationContext {
    bounds: BTreeMap<Metric, MetricBounds>,
    reference_tickers: Vec<String>,
    warnings: Vec<String>,
}

impl NormalizationContext {
    pub fn bounds(&self, metric: Metric) -> Option<&MetricBounds> {
        self.bounds.get(&metric)
    }

    pub fn metrics(&self) -> impl Iterator<Item = (Metric, &MetricBounds)> {
        self.bounds.iter().map(|(m, b)| (*m, b))
    }

    pub fn reference_tickers(&self) -> &[String] {
        &self.reference_tickers
    }

    /// Degenerate-column warnings raised while building the context.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Computes min/max per metric over scored assets, plus benchmarks when
/// `include_benchmarks` is set. Undefined values are left out of the bounds.
pub fn build_context(
    rows: &[AssetMetrics],
    metrics: &[(Metric, Direction)],
    include_benchmarks: bool,
) -> Result<NormalizationContext> {
    let reference: Vec<&AssetMetrics> = rows
        .iter()
        .filter(|r| include_benchmarks || r.role == AssetRole::Scored)
        .collect();
    if reference.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }

    let mut bounds = BTreeMap::new();
    let mut warnings = Vec::new();
    for &(metric, direction) in metrics {
        let (min, max) = reference
            .iter()
            .filter_map(|r| metric.value_of(r))
            .fold(None, |acc: Option<(f64, f64)>, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
            .unwrap_or_else(|| {
                warnings.push(format!(
                    "metric `{metric}` has no defined value in the reference set"
                ));
                (0.0, 0.0)
            });
        if min == max {
            warnings.push(format!(
                "metric `{metric}` is constant ({min}) across the reference set; every asset scores {DEGENERATE_SCORE} on it"
            ));
        }
        bounds.insert(
            metric,
            MetricBounds {
                min,
                max,
                direction,
            },
        );
    }

    Ok(NormalizationContext {
        bounds,
        reference_tickers: reference.iter().map(|r| r.ticker.clone()).collect(),
        warnings,
    })
}

/// Rescales one value of `metric` against the context bounds.
pub fn risk_norm(value: Option<f64>, metric: Metric, ctx: &NormalizationContext) -> Result<f64> {
    let bounds = ctx
        .bounds(metric)
        .ok_or_else(|| Error::UnknownMetric(metric.name().to_string()))?;
    Ok(match value {
        None => UNDEFINED_SCORE,
        Some(x) => bounds.scale(x),
    })
}
