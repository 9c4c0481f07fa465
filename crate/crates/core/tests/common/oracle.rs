// SPDX-License-Identifier: Apache-2.0

//! Straight-line recomputation of L, C and M from raw snapshot numbers.
//! Shares nothing with the library beyond reading the input struct fields.

use rwa_risk::{AssetRole, AssetSnapshot, SnapshotSet};

pub struct OracleScores {
    pub ticker: String,
    pub l: f64,
    pub c: f64,
    pub m: f64,
}

struct Raw {
    ticker: String,
    benchmark: bool,
    turnover: f64,
    ar: f64,
    ti: f64,
    ats: Option<f64>,
    holders: f64,
    avh: f64,
    nhhi: f64,
    hhi_a: f64,
    hhi_v: f64,
}

fn hhi(weights: &[f64]) -> f64 {
    let mut total = 0.0;
    for w in weights {
        total += w;
    }
    let mut sum = 0.0;
    for w in weights {
        let s = w / total;
        sum += s * s;
    }
    sum
}

fn raw(a: &AssetSnapshot) -> Raw {
    let shares = |d: &rwa_risk::ChainDistribution| -> Vec<f64> {
        d.entries().iter().map(|e| e.share).collect()
    };
    let holders = a.holders as f64;
    Raw {
        ticker: a.ticker.clone(),
        benchmark: a.role == AssetRole::Benchmark,
        turnover: a.transfer_volume_30d / a.asset_value,
        ar: a.active_addresses_30d as f64 / holders,
        ti: a.transfer_count_30d as f64 / holders,
        ats: if a.transfer_count_30d == 0 {
            None
        } else {
            Some(a.transfer_volume_30d / a.transfer_count_30d as f64)
        },
        holders,
        avh: a.asset_value / holders,
        nhhi: hhi(&shares(&a.holder_chain_dist)),
        hhi_a: hhi(&shares(&a.active_chain_dist)),
        hhi_v: hhi(&shares(&a.volume_chain_dist)),
    }
}

fn norm(x: Option<f64>, column: &[Option<f64>], protective: bool) -> f64 {
    let Some(x) = x else { return 100.0 };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in column.iter().flatten() {
        if *v < lo {
            lo = *v;
        }
        if *v > hi {
            hi = *v;
        }
    }
    if lo >= hi {
        return 50.0;
    }
    let s = if protective {
        100.0 * (hi - x) / (hi - lo)
    } else {
        100.0 * (x - lo) / (hi - lo)
    };
    s.clamp(0.0, 100.0)
}

pub fn score(set: &SnapshotSet, include_benchmarks: bool) -> Vec<OracleScores> {
    let all: Vec<Raw> = set.assets().iter().map(raw).collect();
    let reference: Vec<&Raw> = all
        .iter()
        .filter(|r| include_benchmarks || !r.benchmark)
        .collect();
    let col = |f: &dyn Fn(&Raw) -> Option<f64>| -> Vec<Option<f64>> {
        reference.iter().map(|r| f(r)).collect()
    };
    let turnover = col(&|r| Some(r.turnover));
    let ar = col(&|r| Some(r.ar));
    let ti = col(&|r| Some(r.ti));
    let ats = col(&|r| r.ats);
    let holders = col(&|r| Some(r.holders));
    let avh = col(&|r| Some(r.avh));
    let nhhi = col(&|r| Some(r.nhhi));
    let hhi_a = col(&|r| Some(r.hhi_a));
    let hhi_v = col(&|r| Some(r.hhi_v));

    all.iter()
        .map(|r| OracleScores {
            ticker: r.ticker.clone(),
            l: (norm(Some(r.turnover), &turnover, true)
                + norm(Some(r.ar), &ar, true)
                + norm(Some(r.ti), &ti, true)
                + norm(r.ats, &ats, false))
                / 4.0,
            c: (norm(Some(r.holders), &holders, true)
                + norm(Some(r.avh), &avh, false)
                + norm(Some(r.nhhi), &nhhi, false))
                / 3.0,
            m: (norm(Some(r.hhi_a), &hhi_a, false) + norm(Some(r.hhi_v), &hhi_v, false)) / 2.0,
        })
        .collect()
}
