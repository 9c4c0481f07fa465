// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use rwa_risk::{normalize_chain_shares, AssetRole, AssetSnapshot, ChainDistribution, SnapshotSet};

pub fn chain_weights() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..10_000, 1..6)
}

fn distribution(weights: &[u32]) -> ChainDistribution {
    let raw: Vec<(String, f64)> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| (format!("chain{i}"), *w as f64))
        .collect();
    normalize_chain_shares(&raw).expect("positive weights")
}

prop_compose! {
    pub fn asset_snapshot(index: usize)(
        asset_value in 1.0f64..1e12,
        holders in 1u64..100_000_000,
        active in 0u64..100_000_000,
        count in prop_oneof![Just(0u64), 1u64..1_000_000_000],
        volume in 0.0f64..1e13,
        holder_w in chain_weights(),
        active_w in chain_weights(),
        volume_w in chain_weights(),
        benchmark in prop::bool::weighted(0.15),
        category in "[A-Za-z][A-Za-z ,\"]{0,10}[A-Za-z]",
    ) -> AssetSnapshot {
        AssetSnapshot {
            ticker: format!("T{index}"),
            category,
            asset_value,
            holders,
            active_addresses_30d: active,
            transfer_volume_30d: if count == 0 { 0.0 } else { volume },
            transfer_count_30d: count,
            holder_chain_dist: distribution(&holder_w),
            active_chain_dist: distribution(&active_w),
            volume_chain_dist: distribution(&volume_w),
            role: if benchmark && index > 0 { AssetRole::Benchmark } else { AssetRole::Scored },
        }
    }
}

/// Valid snapshot sets of `min..=max` assets; the first asset is always scored.
pub fn snapshot_set(min: usize, max: usize) -> impl Strategy<Value = SnapshotSet> {
    (min..=max).prop_flat_map(|n| {
        (0..n)
            .map(asset_snapshot)
            .collect::<Vec<_>>()
            .prop_map(|assets| SnapshotSet::new(assets, "synthetic").expect("valid set"))
    })
}

/// A convex weight triple.
pub fn weights() -> impl Strategy<Value = (f64, f64, f64)> {
    (0u32..=1000, 0u32..=1000).prop_map(|(a, b)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let l = lo as f64 / 1000.0;
        let c = (hi - lo) as f64 / 1000.0;
        (l, c, 1.0 - l - c)
    })
}
