//! Path loss and seeded Rayleigh fading: the empirical mean of the drawn
//! gains approaches the mean channel.
//!
//! cargo run --example fading_channel

use svb::channel::{sample_realization_at, Scenario};

fn main() {
    let scenario = Scenario::default();
    let mean = scenario.mean_channel();
    println!("mean gains: g_s {:.3e}, g_b {:.3e}", mean.g_s, mean.g_b);
    for n in [10u64, 1000, 100_000] {
        let (s, b) = (0..n).fold((0.0, 0.0), |(s, b), i| {
            let ch = sample_realization_at(&scenario, 7, i);
            (s + ch.g_s, b + ch.g_b)
        });
        println!("n = {n:>6}: g_s / mean {:.4}, g_b / mean {:.4}", s / n as f64 / mean.g_s, b / n as f64 / mean.g_b);
    }
    let a = sample_realization_at(&scenario, 7, 3);
    let b = sample_realization_at(&scenario, 7, 3);
    assert_eq!(a, b);
    println!("stream 3 of seed 7 is reproducible: g_s {:.3e}", a.g_s);
}
