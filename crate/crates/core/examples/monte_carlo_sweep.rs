//! Average minimum power over Rayleigh fading as the semantic-rate target
//! grows. Pass a sweep spec to run it instead.
//!
//! cargo run --release --example monte_carlo_sweep [spec.json]

use svb::montecarlo::{run_sweep, SweepSpec, SweptVariable};
use svb::power::PowerTargets;
use svb::search::GridSpec;
use svb::Scheme;

fn main() {
    let spec = match std::env::args().nth(1) {
        Some(path) => SweepSpec::from_path(path).unwrap(),
        None => SweepSpec {
            scenario: Default::default(),
            targets: PowerTargets::new(1e5, 0.8, 8e5).unwrap(),
            variable: SweptVariable::SigmaTarget,
            values: (1..=11).map(|i| 2e4 * i as f64).collect(),
            n_realizations: 100,
            base_seed: 2024,
            grid: GridSpec::with_grid_n(256),
            schemes: Scheme::ALL.to_vec(),
            enforce_budget: false,
        },
    };
    let res = run_sweep(&spec).unwrap();
    println!("{:>10} {:>12} {:>12} {:>12}", spec.variable.as_str(), "OMA", "NOMA", "semi");
    for &v in &spec.values {
        let p = |s| res.cell(v, s).map_or(f64::NAN, |c| c.mean_power_w);
        println!("{v:>10} {:>12.4e} {:>12.4e} {:>12.4e}", p(Scheme::Oma), p(Scheme::Noma), p(Scheme::Semi));
    }
}
