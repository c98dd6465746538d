//! The two water-filling primitives: the best split of a power budget over
//! two bands, and the cheapest split meeting a rate.
//!
//! cargo run --example water_filling

use svb::boundary::water_fill_max;
use svb::power::water_fill_min;

fn main() {
    let (w_m, w_b) = (4e5, 6e5);
    let rate = |h_m: f64, h_b: f64, p: (f64, f64)| w_m * (1.0 + p.0 * h_m).log2() + w_b * (1.0 + p.1 * h_b).log2();
    for (h_m, h_b) in [(50.0, 50.0), (400.0, 20.0), (0.5, 300.0)] {
        let split = water_fill_max(h_m, h_b, w_m, w_b, 1.0);
        let r = rate(h_m, h_b, split);
        let back = water_fill_min(h_m, h_b, w_m, w_b, r).unwrap();
        println!(
            "h = ({h_m}, {h_b}): P = 1 W -> ({:.4}, {:.4}) at {:.0} bit/s; that rate costs {:.6} W",
            split.0,
            split.1,
            r,
            back.0 + back.1
        );
    }
}
