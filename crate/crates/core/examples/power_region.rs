//! Minimum transmit power of each scheme for one set of targets, checked by
//! re-evaluating the rates at the returned allocation.
//!
//! cargo run --release --example power_region [sigma eps rate]

use svb::channel::{sample_realization, Scenario};
use svb::power::{meets_targets, min_power, PowerTargets};
use svb::search::GridSpec;
use svb::Scheme;

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (sigma, eps, rate) = match args[..] {
        [a, b, c] => (a, b, c),
        _ => (0.12e6, 0.8, 0.8e6),
    };
    let targets = PowerTargets::new(sigma, eps, rate).unwrap();
    let scenario = Scenario::default();
    for seed in 0..4 {
        let ch = sample_realization(&scenario, seed);
        print!("seed {seed}:");
        for scheme in Scheme::ALL {
            match min_power(scheme, &scenario, &ch, &targets, &GridSpec::default()) {
                Ok(sol) => {
                    let ok = meets_targets(&scenario, &ch, &targets, &sol, 1e-6);
                    print!("  {scheme} {:.3e} W{}", sol.min_power, if ok { "" } else { " (unverified)" });
                }
                Err(e) => print!("  {scheme} infeasible: {e}"),
            }
        }
        println!();
    }
}
