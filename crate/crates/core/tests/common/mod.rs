//! Helpers shared by the integration-test binaries.
#![allow(dead_code)]

use circle_pursuit::{wrap_angle, BugConfiguration64};
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

/// Shorter of the two arcs between `a` and `b`.
pub fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Distance from `x` to the nearest point of {0, π} on the circle.
pub fn dist_to_half_turns(x: f64) -> f64 {
    let m = x.rem_euclid(TAU);
    m.min(TAU - m).min((m - PI).abs())
}

/// True when `x` (mod 2π) is at least `margin` away from both 0 and π.
pub fn clear_of_half_turns(x: f64, margin: f64) -> bool {
    dist_to_half_turns(x) > margin
}

/// Configurations with every pairwise separation at least 4×`margin` and
/// every chase gap at least `margin` away from the 0/π decision boundaries.
/// Such configurations advance rigidly (no merges, no direction flips) for
/// any step shorter than `margin`/2, with label order decoupled from
/// spatial order by the shuffle.
pub fn spread_config(margin: f64) -> impl Strategy<Value = BugConfiguration64> {
    (2usize..=12)
        .prop_flat_map(move |n| {
            (proptest::collection::vec(0.2f64..1.0, n), 0.0..TAU)
                .prop_map(move |(weights, base)| {
                    let total: f64 = weights.iter().sum();
                    let free = TAU - 4.0 * margin * n as f64;
                    let mut acc = base;
                    let mut positions = Vec::with_capacity(n);
                    for w in &weights {
                        positions.push(acc);
                        acc += 4.0 * margin + free * w / total;
                    }
                    positions
                })
                .prop_shuffle()
        })
        .prop_filter_map("chase gaps clear of direction boundaries", move |raw| {
            let config = BugConfiguration64::from_angles(&raw).unwrap();
            let n = config.n_bugs();
            let wrap_gap = config.angle(n - 1).ccw_gap_to(config.angle(0));
            let interior_clear = config
                .gaps()
                .iter()
                .all(|&g| clear_of_half_turns(g, margin));
            (interior_clear && clear_of_half_turns(wrap_gap, margin)).then_some(config)
        })
}

/// Arbitrary configurations, coincidences and near-events included.
pub fn any_config() -> impl Strategy<Value = BugConfiguration64> {
    proptest::collection::vec(0.0..TAU, 2..=10)
        .prop_map(|angles| BugConfiguration64::from_angles(&angles).unwrap())
}

/// Stationary grouping configurations: bugs piled on a random base point and
/// its antipode, at least one on each.
pub fn groups_config() -> impl Strategy<Value = BugConfiguration64> {
    (2usize..=10)
        .prop_flat_map(|n| (0.0..TAU, proptest::collection::vec(any::<bool>(), n - 1)))
        .prop_filter("need both antipodes occupied", |(_, hops)| {
            hops.iter().any(|&b| b)
        })
        .prop_map(|(base, hops)| {
            let antipode = wrap_angle(base + PI);
            let mut on_antipode = false;
            let mut angles = vec![base];
            for hop in hops {
                on_antipode ^= hop;
                angles.push(if on_antipode { antipode } else { base });
            }
            BugConfiguration64::from_angles(&angles).unwrap()
        })
}
