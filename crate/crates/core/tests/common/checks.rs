// SPDX-License-Identifier: Apache-2.0

//! Property checks shared by the proptest suite and the acceptance runner.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use rwa_risk::metrics::{derive_all, AssetMetrics};
use rwa_risk::normalize::{build_context, Direction, MetricBounds};
use rwa_risk::report::{emit_report, OutputFormat, RunConfig};
use rwa_risk::scoring::scoring_metrics;
use rwa_risk::{
    composite, compute_hhi, risk_norm, score_set, ChainDimension, Metric, ScoringConfig,
    SnapshotSet, WeightScheme,
};

use super::oracle;

const EPS: f64 = 1e-9;

fn in_range(x: f64) -> bool {
    (0.0..=100.0).contains(&x)
}

/// Scores in [0, 100] and composite betweenness for every scheme.
pub fn check_ranges_and_betweenness(
    set: &SnapshotSet,
    extra: &WeightScheme,
) -> Result<(), TestCaseError> {
    let mut schemes = WeightScheme::canonical();
    schemes.push(extra.clone());
    let table = score_set(set, &schemes, &ScoringConfig::default())
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    for r in table.rows.iter().chain(&table.benchmark_rows) {
        let parts = [r.liquidity, r.concentration, r.market_quality];
        prop_assert!(
            parts.iter().all(|v| in_range(*v)),
            "{} sub-score out of range: {parts:?}",
            r.ticker
        );
        let lo = parts.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = parts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (name, v) in &r.composites {
            prop_assert!(
                in_range(*v) || (*v > -EPS && *v < 100.0 + EPS),
                "{name} composite {v}"
            );
            prop_assert!(
                *v >= lo - EPS && *v <= hi + EPS,
                "{name}: {v} outside [{lo}, {hi}]"
            );
        }
    }
    Ok(())
}

/// Engine L/C/M equal the straight-line oracle within 1e-9.
pub fn check_oracle(set: &SnapshotSet, include_benchmarks: bool) -> Result<(), TestCaseError> {
    let cfg = ScoringConfig {
        include_benchmarks_in_bounds: include_benchmarks,
        ..Default::default()
    };
    let table = score_set(set, &WeightScheme::canonical(), &cfg)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    for o in oracle::score(set, include_benchmarks) {
        let r = table
            .rows
            .iter()
            .chain(&table.benchmark_rows)
            .find(|r| r.ticker == o.ticker)
            .expect("every asset scored");
        prop_assert!(
            (r.liquidity - o.l).abs() <= EPS,
            "{} L {} vs {}",
            o.ticker,
            r.liquidity,
            o.l
        );
        prop_assert!(
            (r.concentration - o.c).abs() <= EPS,
            "{} C {} vs {}",
            o.ticker,
            r.concentration,
            o.c
        );
        prop_assert!(
            (r.market_quality - o.m).abs() <= EPS,
            "{} M {} vs {}",
            o.ticker,
            r.market_quality,
            o.m
        );
    }
    Ok(())
}

/// Protective + risk-increasing scores of the same value sum to 100.
pub fn check_direction_duality(set: &SnapshotSet) -> Result<(), TestCaseError> {
    let metrics =
        derive_all(set, ChainDimension::Holders).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let ctx = build_context(&metrics, &scoring_metrics(), true)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    for (metric, b) in ctx.metrics() {
        if b.is_degenerate() {
            continue;
        }
        let flipped = MetricBounds {
            direction: match b.direction {
                Direction::Protective => Direction::RiskIncreasing,
                Direction::RiskIncreasing => Direction::Protective,
            },
            ..*b
        };
        for row in &metrics {
            if let Some(x) = metric.value_of(row) {
                let sum = b.scale(x) + flipped.scale(x);
                prop_assert!((sum - 100.0).abs() <= EPS, "{metric}: {sum}");
            }
        }
    }
    Ok(())
}

fn transform(row: &AssetMetrics, metric: Metric, a: f64, b: f64) -> AssetMetrics {
    let mut out = row.clone();
    let m = &mut out.metrics;
    let f = |x: f64| a * x + b;
    match metric {
        Metric::Turnover => m.turnover = f(m.turnover),
        Metric::ActiveRatio => m.active_ratio = f(m.active_ratio),
        Metric::TransferIntensity => m.transfer_intensity = f(m.transfer_intensity),
        Metric::AvgTransferSize => m.avg_transfer_size = m.avg_transfer_size.map(f),
        Metric::AvgValuePerHolder => m.avg_value_per_holder = f(m.avg_value_per_holder),
        Metric::Nhhi => m.nhhi = f(m.nhhi),
        Metric::HhiActive => m.hhi_active = f(m.hhi_active),
        Metric::HhiVolume => m.hhi_volume = f(m.hhi_volume),
        Metric::Holders => {}
    }
    out
}

/// A positive affine map of a whole column leaves its risk_norm outputs unchanged.
pub fn check_affine_invariance(set: &SnapshotSet, a: f64, b: f64) -> Result<(), TestCaseError> {
    let metrics =
        derive_all(set, ChainDimension::Holders).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let specs = scoring_metrics();
    let ctx =
        build_context(&metrics, &specs, true).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for &(metric, _) in &specs {
        if metric == Metric::Holders {
            continue;
        }
        let moved: Vec<AssetMetrics> = metrics.iter().map(|r| transform(r, metric, a, b)).collect();
        let moved_ctx =
            build_context(&moved, &specs, true).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let bounds = ctx.bounds(metric).unwrap();
        // Columns whose spread vanishes relative to the shift cannot be compared in floating point.
        let scale = bounds.max.abs().max(bounds.min.abs()).max(1.0);
        if (bounds.max - bounds.min) / scale < 1e-6 {
            continue;
        }
        for (orig, new) in metrics.iter().zip(&moved) {
            let before = risk_norm(metric.value_of(orig), metric, &ctx).unwrap();
            let after = risk_norm(metric.value_of(new), metric, &moved_ctx).unwrap();
            let tol = 1e-9 * (1.0 + b.abs() / (a * (bounds.max - bounds.min)));
            prop_assert!(
                (before - after).abs() <= tol.max(EPS),
                "{metric}: {before} vs {after}"
            );
        }
    }
    Ok(())
}

/// Ordering by risk_norm follows raw value (reversed for protective metrics).
pub fn check_rank_preservation(set: &SnapshotSet) -> Result<(), TestCaseError> {
    let metrics =
        derive_all(set, ChainDimension::Holders).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let ctx = build_context(&metrics, &scoring_metrics(), true)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    for (metric, b) in ctx.metrics() {
        let values: Vec<f64> = metrics.iter().filter_map(|r| metric.value_of(r)).collect();
        for x in &values {
            for y in &values {
                if x < y {
                    let (sx, sy) = (b.scale(*x), b.scale(*y));
                    match b.direction {
                        Direction::RiskIncreasing => prop_assert!(sx <= sy),
                        Direction::Protective => prop_assert!(sx >= sy),
                    }
                }
            }
        }
    }
    Ok(())
}

/// HHI within [1/k, 1] for every distribution in the set.
pub fn check_hhi_bounds(set: &SnapshotSet) -> Result<(), TestCaseError> {
    for a in set.assets() {
        for dim in ChainDimension::ALL {
            let d = a.distribution(dim);
            let h = compute_hhi(d);
            let k = d.len() as f64;
            prop_assert!(
                h >= 1.0 / k - EPS && h <= 1.0 + EPS,
                "{} {dim:?}: {h} with k={k}",
                a.ticker
            );
        }
    }
    Ok(())
}

/// Two full runs produce byte-identical reports in every format.
pub fn check_determinism(set: &SnapshotSet) -> Result<(), TestCaseError> {
    for format in [
        OutputFormat::Markdown,
        OutputFormat::Csv,
        OutputFormat::Json,
    ] {
        let render = || {
            let mut cfg = RunConfig::new("synthetic.csv");
            cfg.format_out = format;
            let table = score_set(set, &cfg.schemes, &ScoringConfig::default()).unwrap();
            let metrics = derive_all(set, ChainDimension::Holders).unwrap();
            emit_report(&table, &metrics, &cfg, set.as_of())
        };
        prop_assert_eq!(render(), render());
    }
    Ok(())
}

/// Composite is linear in the weights.
pub fn check_weight_linearity(
    set: &SnapshotSet,
    w1: (f64, f64, f64),
    w2: (f64, f64, f64),
) -> Result<(), TestCaseError> {
    let s1 = WeightScheme::new("w1", w1.0, w1.1, w1.2).unwrap();
    let s2 = WeightScheme::new("w2", w2.0, w2.1, w2.2).unwrap();
    let mid = WeightScheme::new(
        "mid",
        0.5 * w1.0 + 0.5 * w2.0,
        0.5 * w1.1 + 0.5 * w2.1,
        0.5 * w1.2 + 0.5 * w2.2,
    )
    .unwrap();
    let cfg = ScoringConfig {
        sort_scheme: "w1".into(),
        ..Default::default()
    };
    let table = score_set(set, &[s1.clone(), s2.clone()], &cfg).unwrap();
    for r in &table.rows {
        let (l, c, m) = (r.liquidity, r.concentration, r.market_quality);
        let lhs = composite(l, c, m, &mid);
        let rhs = 0.5 * composite(l, c, m, &s1) + 0.5 * composite(l, c, m, &s2);
        prop_assert!((lhs - rhs).abs() <= EPS);
    }
    Ok(())
}
