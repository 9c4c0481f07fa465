// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

pub mod checks;
pub mod cli;
pub mod oracle;
pub mod strategies;

use std::path::PathBuf;

use rwa_risk::{parse_snapshot_file, InputFormat, ParseOptions, SnapshotSet};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

/// The ten-asset pilot snapshot with USDC as benchmark.
pub fn pilot_set() -> SnapshotSet {
    let opts = ParseOptions {
        chains_path: Some(fixture("pilot_chains.csv")),
        benchmarks: vec!["USDC".into()],
        as_of: Some("2026-05".into()),
    };
    parse_snapshot_file(&fixture("pilot_snapshot.csv"), InputFormat::Csv, &opts)
        .expect("pilot fixture parses")
}

/// Reference derived-metrics table: (ticker, turnover, active ratio,
/// transfer intensity, AVH, NHHI).
pub const REFERENCE_METRICS: [(&str, f64, f64, f64, f64, f64); 10] = [
    ("BUIDL", 0.4391, 0.2222, 0.8148, 23033839.0, 0.4939),
    ("BENJI", 0.0122, 0.0154, 0.0172, 744273.0, 1.0000),
    ("OUSG", 0.1809, 0.2727, 0.6182, 11136273.0, 0.6626),
    ("USTB", 0.3963, 0.2121, 7.1616, 7283374.0, 0.8141),
    ("USDC", 58.3145, 0.4383, 17.0613, 1706.0, 0.1414),
    ("USDY", 0.2643, 0.2984, 10.9189, 147905.0, 0.2660),
    ("HLSCOPE", 0.0283, 0.1333, 0.0667, 96880.0, 1.0000),
    ("STAC", 0.0350, 0.2500, 0.2500, 25330971.0, 1.0000),
    ("PAXG", 0.8934, 0.1356, 3.1369, 50212.0, 1.0000),
    ("XAUT", 1.6361, 0.3114, 3.0730, 45878.0, 0.9050),
];

/// Reference (ticker, L, C) for the assets whose values follow from the
/// snapshot inputs.
pub const REFERENCE_LC: [(&str, f64, f64); 7] = [
    ("BUIDL", 86.42, 77.33),
    ("BENJI", 76.06, 67.64),
    ("OUSG", 65.39, 68.22),
    ("HLSCOPE", 68.02, 66.79),
    ("STAC", 67.92, 100.00),
    ("PAXG", 62.96, 66.66),
    ("XAUT", 52.37, 62.99),
];

/// Reference rows whose L and C disagree with the snapshot inputs.
pub const INCONSISTENT_REFERENCE_ROWS: [&str; 2] = ["USTB", "USDY"];

pub const SINGLE_CHAIN_ASSETS: [&str; 4] = ["BENJI", "HLSCOPE", "STAC", "PAXG"];

/// STAC under equal, liquidity-, concentration- and market-quality-heavy weights.
pub const REFERENCE_STAC_SENSITIVITY: [f64; 4] = [89.31, 83.96, 91.98, 91.98];

pub fn within(actual: f64, expected: f64, tol: f64) -> bool {
    (actual - expected).abs() <= tol
}
