//! Fits the logistic similarity model to noisy samples drawn from the
//! built-in table and compares the recovered parameters.
//!
//! cargo run --example fit_logistic

use rand::Rng;
use svb::channel::fading_rng;
use svb::similarity::{fit_logistic, ParamTable, SimilaritySample};

fn main() {
    let table = ParamTable::synthetic_illustrative();
    let mut rng = fading_rng(1, 0);
    for truth in table.iter() {
        let samples: Vec<SimilaritySample> = (0..=80)
            .map(|i| {
                let snr_db = -20.0 + 0.5 * i as f64;
                let noise = rng.gen_range(-0.01..0.01);
                SimilaritySample { k: truth.k, snr_db, similarity: (truth.eval(snr_db) + noise).clamp(0.0, 1.0) }
            })
            .collect();
        let fit = fit_logistic(&samples).expect("fit");
        let p = fit.params;
        println!(
            "K={}  A1 {:.3}/{:.3}  A2 {:.3}/{:.3}  C1 {:.3}/{:.3}  C2 {:.2}/{:.2}  mse {:.2e}",
            truth.k, p.a_low, truth.a_low, p.a_high, truth.a_high, p.growth, truth.growth, p.offset, truth.offset, fit.mse
        );
    }
    let p = table.get(4).unwrap();
    println!("K=4 needs {:.2} dB for similarity 0.8", p.invert(0.8).unwrap());
}
