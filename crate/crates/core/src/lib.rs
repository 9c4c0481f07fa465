// SPDX-License-Identifier: Apache-2.0

//! Explainable risk scoring for tokenized real-world assets.
//!
//! Pipeline: [`ingest`] reads a snapshot into a [`SnapshotSet`], [`metrics`]
//! derives per-asset indicators, [`normalize`] rescales them onto a 0-100
//! risk scale with directional min-max bounds, and [`scoring`] averages them
//! into liquidity, concentration and market-quality scores and weighted
//! composites. [`report`] and [`cli`] render the results.

pub mod cli;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod normalize;
pub mod report;
pub mod scoring;
pub mod snapshot;

pub use error::{Error, Locus, Result};
pub use ingest::{parse_snapshot_file, InputFormat, ParseOptions};
pub use metrics::{compute_hhi, derive_metrics, AssetMetrics, DerivedMetrics, Metric};
pub use normalize::{build_context, risk_norm, Direction, NormalizationContext};
pub use report::{emit_report, OutputFormat, RunConfig};
pub use scoring::{
    composite, score_set, sensitivity_sweep, RiskScores, ScoreTable, ScoringConfig, WeightScheme,
};
pub use snapshot::{
    normalize_chain_shares, AssetRole, AssetSnapshot, ChainDimension, ChainDistribution,
    SnapshotSet,
};
