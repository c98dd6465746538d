//! Rate-region frontiers of the three schemes on the mean channel, with the
//! pairwise containment verdicts.
//!
//! cargo run --release --example rate_regions [d_s]

use svb::boundary::{check_containment, noma_boundary, oma_boundary, semi_boundary_at, RegionBoundary};
use svb::channel::Scenario;
use svb::search::GridSpec;

fn main() {
    let d_s = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20.0);
    let scenario = Scenario { d_s, ..Scenario::default() };
    let ch = scenario.mean_channel();
    let grid = GridSpec::default();

    let oma = oma_boundary(&scenario, &ch, 11, &grid).unwrap();
    let noma = noma_boundary(&scenario, &ch, 11).ok();
    let mut sigmas: Vec<f64> = oma.points.iter().map(|p| p.sem_rate_norm).collect();
    let semi_table = semi_boundary_at(&scenario, &ch, &sigmas, &grid).unwrap();
    // compare NOMA against semi at the NOMA sample points too
    sigmas.extend(noma.iter().flat_map(|b| b.points.iter().map(|p| p.sem_rate_norm)));
    sigmas.sort_by(f64::total_cmp);
    sigmas.dedup();
    let semi = semi_boundary_at(&scenario, &ch, &sigmas, &grid).unwrap();

    println!("{:>12} {:>14} {:>14}", "sigma", "OMA bit/s", "semi bit/s");
    for (o, s) in oma.points.iter().zip(&semi_table.points) {
        println!("{:>12.0} {:>14.0} {:>14.0}", o.sem_rate_norm, o.bit_rate, s.bit_rate);
    }
    let Some(noma) = noma else {
        println!("NOMA region is empty at d_s = {d_s} m");
        return;
    };
    println!("\nNOMA from sigma {:.0} to {:.0}", noma.points[0].sem_rate_norm, noma.points.last().unwrap().sem_rate_norm);

    let tol = 1e-6 * oma.points[0].bit_rate;
    let show = |name: &str, inner: &RegionBoundary, outer: &RegionBoundary| {
        let v = check_containment(inner, outer, tol).unwrap();
        println!("{name:<12} {}", if v.is_contained() { "yes".to_string() } else { format!("no ({v:?})") });
    };
    show("OMA in semi", &oma, &semi);
    show("NOMA in semi", &noma, &semi);
    show("OMA in NOMA", &oma, &noma);
    show("NOMA in OMA", &noma, &oma);
}
