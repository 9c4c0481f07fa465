// SPDX-License-Identifier: Apache-2.0

//! Liquidity (L), concentration (C) and market-quality (M) sub-scores,
//! weighted composites and ranking.
//!
//! Each sub-score is the unweighted mean of its normalized components:
//!
//! * L: turnover, active ratio, transfer intensity (protective) and average
//!   transfer size (risk-increasing).
//! * C: holders (protective), average value per holder and network HHI
//!   (risk-increasing).
//! * M: HHI of active addresses and of transfer volume by chain
//!   (risk-increasing).
//!
//! Only the weights combining L, C and M into a composite are configurable.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::metrics::{derive_all, AssetMetrics, DerivedMetrics, Metric};
use crate::normalize::{build_context, risk_norm, Direction, NormalizationContext};
use crate::snapshot::{AssetRole, ChainDimension, SnapshotSet};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

pub const LIQUIDITY_COMPONENTS: [(Metric, Direction); 4] = [
    (Metric::Turnover, Direction::Protective),
    (Metric::ActiveRatio, Direction::Protective),
    (Metric::TransferIntensity, Direction::Protective),
    (Metric::AvgTransferSize, Direction::RiskIncreasing),
];

pub const CONCENTRATION_COMPONENTS: [(Metric, Direction); 3] = [
    (Metric::Holders, Direction::Protective),
    (Metric::AvgValuePerHolder, Direction::RiskIncreasing),
    (Metric::Nhhi, Direction::RiskIncreasing),
];

pub const MARKET_QUALITY_COMPONENTS: [(Metric, Direction); 2] = [
    (Metric::HhiActive, Direction::RiskIncreasing),
    (Metric::HhiVolume, Direction::RiskIncreasing),
];

/// Every metric the three sub-scores normalize, with its risk direction.
pub fn scoring_metrics() -> Vec<(Metric, Direction)> {
    LIQUIDITY_COMPONENTS
        .iter()
        .chain(&CONCENTRATION_COMPONENTS)
        .chain(&MARKET_QUALITY_COMPONENTS)
        .copied()
        .collect()
}

/// A named convex weighting of (L, C, M).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightScheme {
    name: String,
    liquidity: f64,
    concentration: f64,
    market_quality: f64,
}

impl WeightScheme {
    pub fn new(
        name: impl Into<String>,
        liquidity: f64,
        concentration: f64,
        market_quality: f64,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidWeights {
            name: name.clone(),
            reason,
        };
        if name.trim().is_empty() {
            return Err(invalid("scheme name is empty".into()));
        }
        for w in [liquidity, concentration, market_quality] {
            if !w.is_finite() || w < 0.0 {
                return Err(invalid(format!("weight {w} is not a non-negative number")));
            }
        }
        let sum = liquidity + concentration + market_quality;
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(invalid(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self {
            name,
            liquidity,
            concentration,
            market_quality,
        })
    }

    pub fn equal() -> Self {
        Self::new("equal", 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).expect("valid weights")
    }

    pub fn liquidity_heavy() -> Self {
        Self::new("liquidity-heavy", 0.5, 0.25, 0.25).expect("valid weights")
    }

    pub fn concentration_heavy() -> Self {
        Self::new("concentration-heavy", 0.25, 0.5, 0.25).expect("valid weights")
    }

    pub fn market_quality_heavy() -> Self {
        Self::new("market-quality-heavy", 0.25, 0.25, 0.5).expect("valid weights")
    }

    /// Equal, liquidity-heavy, concentration-heavy and market-quality-heavy.
    pub fn canonical() -> Vec<Self> {
        vec![
            Self::equal(),
            Self::liquidity_heavy(),
            Self::concentration_heavy(),
            Self::market_quality_heavy(),
        ]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weights(&self) -> (f64, f64, f64) {
        (self.liquidity, self.concentration, self.market_quality)
    }
}

pub fn composite(liquidity: f64, concentration: f64, market_quality: f64, w: &WeightScheme) -> f64 {
    w.liquidity * liquidity + w.concentration * concentration + w.market_quality * market_quality
}

fn mean_risk_norm(
    components: &[(Metric, Direction)],
    row: &AssetMetrics,
    ctx: &NormalizationContext,
) -> Result<f64> {
    let mut total = 0.0;
    for &(metric, _) in components {
        total += risk_norm(metric.value_of(row), metric, ctx)?;
    }
    Ok(total / components.len() as f64)
}

fn metrics_row(holders: u64, m: &DerivedMetrics) -> AssetMetrics {
    AssetMetrics {
        ticker: String::new(),
        category: String::new(),
        role: AssetRole::Scored,
        holders,
        metrics: *m,
    }
}

pub fn liquidity_score(m: &DerivedMetrics, ctx: &NormalizationContext) -> Result<f64> {
    mean_risk_norm(&LIQUIDITY_COMPONENTS, &metrics_row(1, m), ctx)
}

pub fn concentration_score(
    holders: u64,
    m: &DerivedMetrics,
    ctx: &NormalizationContext,
) -> Result<f64> {
    mean_risk_norm(&CONCENTRATION_COMPONENTS, &metrics_row(holders, m), ctx)
}

pub fn market_quality_score(m: &DerivedMetrics, ctx: &NormalizationContext) -> Result<f64> {
    mean_risk_norm(&MARKET_QUALITY_COMPONENTS, &metrics_row(1, m), ctx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskScores {
    pub ticker: String,
    pub category: String,
    pub role: AssetRole,
    pub liquidity: f64,
    pub concentration: f64,
    pub market_quality: f64,
    /// One entry per scheme, in scheme order.
    pub composites: Vec<(String, f64)>,
}

impl RiskScores {
    pub fn composite(&self, scheme: &str) -> Option<f64> {
        self.composites
            .iter()
            .find(|(name, _)| name == scheme)
            .map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone)]
pub struct ScoringConfig {
    pub include_benchmarks_in_bounds: bool,
    /// Scheme whose composite orders the ranked rows.
    pub sort_scheme: String,
    /// Distribution feeding NHHI.
    pub nhhi_source: ChainDimension,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        Self {
            include_benchmarks_in_bounds: true,
            sort_scheme: "equal".into(),
            nhhi_source: ChainDimension::Holders,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScoreTable {
    /// Scored assets, by the sort scheme's composite descending, then ticker.
    pub rows: Vec<RiskScores>,
    /// Benchmarks, in input order; never ranked.
    pub benchmark_rows: Vec<RiskScores>,
    pub warnings: Vec<String>,
    pub schemes: Vec<WeightScheme>,
    pub sort_scheme: String,
    pub context: NormalizationContext,
}

fn check_schemes(schemes: &[WeightScheme]) -> Result<()> {
    if schemes.is_empty() {
        return Err(Error::Config(
            "at least one weight scheme is required".into(),
        ));
    }
    let mut names = HashSet::new();
    for s in schemes {
        if !names.insert(s.name()) {
            return Err(Error::Config(format!(
                "weight scheme `{}` given twice",
                s.name()
            )));
        }
    }
    Ok(())
}

pub fn score_asset(
    row: &AssetMetrics,
    ctx: &NormalizationContext,
    schemes: &[WeightScheme],
) -> Result<RiskScores> {
    let liquidity = mean_risk_norm(&LIQUIDITY_COMPONENTS, row, ctx)?;
    let concentration = mean_risk_norm(&CONCENTRATION_COMPONENTS, row, ctx)?;
    let market_quality = mean_risk_norm(&MARKET_QUALITY_COMPONENTS, row, ctx)?;
    Ok(RiskScores {
        ticker: row.ticker.clone(),
        category: row.category.clone(),
        role: row.role,
        liquidity,
        concentration,
        market_quality,
        composites: schemes
            .iter()
            .map(|w| {
                (
                    w.name().to_string(),
                    composite(liquidity, concentration, market_quality, w),
                )
            })
            .collect(),
    })
}

fn ranking_order(sort_scheme: &str) -> impl Fn(&RiskScores, &RiskScores) -> Ordering + '_ {
    move |a, b| {
        let key = |r: &RiskScores| r.composite(sort_scheme).unwrap_or(f64::NEG_INFINITY);
        key(b)
            .total_cmp(&key(a))
            .then_with(|| a.ticker.cmp(&b.ticker))
    }
}

/// Scores every asset against one shared normalization context and ranks the
/// scored assets. Benchmarks are scored and reported separately.
pub fn score_set(
    set: &SnapshotSet,
    schemes: &[WeightScheme],
    config: &ScoringConfig,
) -> Result<ScoreTable> {
    let metrics = derive_all(set, config.nhhi_source)?;
    score_metrics(&metrics, schemes, config, set.notes())
}

/// [`score_set`] over already derived metrics.
pub fn score_metrics(
    metrics: &[AssetMetrics],
    schemes: &[WeightScheme],
    config: &ScoringConfig,
    notes: &[String],
) -> Result<ScoreTable> {
    check_schemes(schemes)?;
    if !schemes.iter().any(|s| s.name() == config.sort_scheme) {
        return Err(Error::Config(format!(
            "sort scheme `{}` is not among the weight schemes",
            config.sort_scheme
        )));
    }
    let ctx = build_context(
        metrics,
        &scoring_metrics(),
        config.include_benchmarks_in_bounds,
    )?;

    let mut rows = Vec::new();
    let mut benchmark_rows = Vec::new();
    for m in metrics {
        let scores = score_asset(m, &ctx, schemes)?;
        match m.role {
            AssetRole::Scored => rows.push(scores),
            AssetRole::Benchmark => benchmark_rows.push(scores),
        }
    }
    rows.sort_by(ranking_order(&config.sort_scheme));

    let mut warnings: Vec<String> = ctx.warnings().to_vec();
    warnings.extend(notes.iter().cloned());
    for b in &benchmark_rows {
        warnings.push(format!(
            "{} is a benchmark: {} normalization bounds, excluded from the ranking",
            b.ticker,
            if config.include_benchmarks_in_bounds {
                "included in"
            } else {
                "not included in"
            }
        ));
    }

    Ok(ScoreTable {
        rows,
        benchmark_rows,
        warnings,
        schemes: schemes.to_vec(),
        sort_scheme: config.sort_scheme.clone(),
        context: ctx,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityRow {
    pub ticker: String,
    /// One composite per scheme, in scheme order.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityMatrix {
    pub schemes: Vec<String>,
    pub rows: Vec<SensitivityRow>,
}

/// Recomputes composites of the ranked rows under each scheme from the stored
/// L/C/M, without renormalizing. Row order follows the table.
pub fn sensitivity_sweep(
    table: &ScoreTable,
    schemes: &[WeightScheme],
) -> Result<SensitivityMatrix> {
    check_schemes(schemes)?;
    Ok(SensitivityMatrix {
        schemes: schemes.iter().map(|s| s.name().to_string()).collect(),
        rows: table
            .rows
            .iter()
            .map(|r| SensitivityRow {
                ticker: r.ticker.clone(),
                values: schemes
                    .iter()
                    .map(|w| composite(r.liquidity, r.concentration, r.market_quality, w))
                    .collect(),
            })
            .collect(),
    })
}
