//! Minimum transmit power (power region) for given targets
//! `(sigma_target, min_similarity, bit_target)`.
//!
//! There is no power budget here: each solver returns the least total power
//! at which the targets lie inside the scheme's SvB rate region.

use serde::{Deserialize, Serialize};

use crate::boundary::{oma_bandwidth_bounds, semantic_power};
use crate::channel::{ChannelRealization, Scenario};
use crate::rates::{Allocation, NomaAllocation, OmaAllocation, SemiAllocation};
use crate::search::{self, GridSpec, Prefer};
use crate::{exp2_m1, Error, Result, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTargets {
    /// Normalized semantic rate `S * L / I`.
    pub sigma_target: f64,
    pub min_similarity: f64,
    /// bits/s
    pub bit_target: f64,
}

impl PowerTargets {
    pub fn new(sigma_target: f64, min_similarity: f64, bit_target: f64) -> Result<Self> {
        let ok = sigma_target.is_finite()
            && sigma_target >= 0.0
            && bit_target.is_finite()
            && bit_target >= 0.0
            && (0.0..1.0).contains(&min_similarity);
        if !ok {
            return Err(Error::InvalidInput(format!(
                "targets must satisfy sigma >= 0, 0 <= eps < 1, R >= 0 (got {sigma_target}, {min_similarity}, {bit_target})"
            )));
        }
        Ok(PowerTargets { sigma_target, min_similarity, bit_target })
    }
}

/// Which requirement makes a target triple infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Infeasibility {
    /// `sigma K` exceeds the total bandwidth.
    BandwidthBound,
    /// The similarity floor is not below the logistic ceiling.
    SimilarityAsymptote,
    /// The semantic rate would need a similarity at or above the ceiling.
    RateAsymptote,
    /// A positive bit rate is required but no bandwidth is left for bits.
    NoBitBandwidth,
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Infeasibility::BandwidthBound => "semantic-rate target needs more than the total bandwidth",
            Infeasibility::SimilarityAsymptote => "similarity floor is at or above the logistic ceiling",
            Infeasibility::RateAsymptote => "semantic-rate target needs a similarity at or above the logistic ceiling",
            Infeasibility::NoBitBandwidth => "bit-rate target leaves no bandwidth for the bit stream",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSolution {
    pub scheme: Scheme,
    pub min_power: f64,
    pub allocation: Allocation,
}

fn scenario_with_floor(scenario: &Scenario, targets: &PowerTargets) -> Scenario {
    Scenario { min_similarity: targets.min_similarity, ..scenario.clone() }
}

/// Checks that hold for every scheme.
fn common_feasibility(scenario: &Scenario, targets: &PowerTargets) -> Result<()> {
    let params = scenario.logistic();
    let w = scenario.total_bandwidth;
    if targets.min_similarity >= params.a_high {
        return Err(Error::Infeasible(Infeasibility::SimilarityAsymptote));
    }
    let needed = targets.sigma_target * params.k as f64;
    if needed > w {
        return Err(Error::Infeasible(Infeasibility::BandwidthBound));
    }
    if needed / w >= params.a_high {
        return Err(Error::Infeasible(Infeasibility::RateAsymptote));
    }
    Ok(())
}

/// Power for rate `rate` on a band of width `w` with per-watt SNR gain `h`.
fn single_band_power(w: f64, h: f64, rate: f64) -> f64 {
    if rate <= 0.0 {
        0.0
    } else if w <= 0.0 {
        f64::INFINITY
    } else {
        exp2_m1(rate / w) / h
    }
}

fn oma_candidate(scenario: &Scenario, channel: &ChannelRealization, targets: &PowerTargets, w_sem: f64) -> Option<OmaAllocation> {
    let w = scenario.total_bandwidth;
    let p_sem = if w_sem <= 0.0 {
        if targets.sigma_target > 0.0 {
            return None;
        }
        0.0
    } else {
        semantic_power(scenario, channel.g_s, targets.sigma_target, w_sem)?
    };
    let w_bit = w - w_sem;
    let p_bit = single_band_power(w_bit, channel.g_b / (w_bit * scenario.noise_psd), targets.bit_target);
    p_bit.is_finite().then_some(OmaAllocation { w_sem, w_bit, p_sem, p_bit })
}

/// OMA minimum power by one-dimensional search over the semantic bandwidth
/// in `[W_low, W_up]`; per candidate the power is the sum of the semantic
/// requirement and the single-band bit power.
pub fn oma_min_power(
    scenario: &Scenario,
    channel: &ChannelRealization,
    targets: &PowerTargets,
    grid: &GridSpec,
) -> Result<PowerSolution> {
    common_feasibility(scenario, targets)?;
    let sc = scenario_with_floor(scenario, targets);
    let (w_low, w_up) = oma_bandwidth_bounds(&sc, targets.sigma_target)
        .map_err(|_| Error::Infeasible(Infeasibility::BandwidthBound))?;
    let total = |ws: f64| oma_candidate(&sc, channel, targets, ws).map_or(f64::INFINITY, |a| a.p_sem + a.p_bit);
    let best = search::minimize(w_low, w_up, grid, Prefer::Lower, &[], total);
    match oma_candidate(&sc, channel, targets, best.x) {
        Some(a) if best.value.is_finite() => {
            Ok(PowerSolution { scheme: Scheme::Oma, min_power: a.p_sem + a.p_bit, allocation: Allocation::Oma(a) })
        }
        _ if targets.bit_target > 0.0 && w_low >= scenario.total_bandwidth => {
            Err(Error::Infeasible(Infeasibility::NoBitBandwidth))
        }
        _ => Err(Error::Infeasible(Infeasibility::RateAsymptote)),
    }
}

/// NOMA minimum power in closed form: the semantic stream takes the larger
/// of its rate and similarity requirements over the full band, and the bit
/// stream is inverted against the resulting interference at the weaker user.
pub fn noma_min_power(scenario: &Scenario, channel: &ChannelRealization, targets: &PowerTargets) -> Result<PowerSolution> {
    common_feasibility(scenario, targets)?;
    let sc = scenario_with_floor(scenario, targets);
    let w = scenario.total_bandwidth;
    let p_sem = semantic_power(&sc, channel.g_s, targets.sigma_target, w)
        .ok_or(Error::Infeasible(Infeasibility::RateAsymptote))?;
    let g = channel.g_eff;
    let p_bit = (p_sem * g + w * scenario.noise_psd) / g * exp2_m1(targets.bit_target / w);
    Ok(PowerSolution { scheme: Scheme::Noma, min_power: p_sem + p_bit, allocation: Allocation::Noma(NomaAllocation { p_sem, p_bit }) })
}

/// Least total power `(p_m, p_o)` for which
/// `w_m log2(1 + p_m h_m) + w_b log2(1 + p_o h_b) = rate_target`.
///
/// The unconstrained water level is
/// `lambda = 2^(R/W) / ((w_m h_m)^(w_m/W) (w_b h_b)^(w_b/W))`; if either
/// band's share `lambda w - 1/h` is non-positive, the other band carries the
/// whole rate with its exact single-band power.
pub fn water_fill_min(h_m: f64, h_b: f64, w_m: f64, w_b: f64, rate_target: f64) -> Result<(f64, f64)> {
    if !(rate_target > 0.0) {
        return Ok((0.0, 0.0));
    }
    if w_m <= 0.0 && w_b <= 0.0 {
        return Err(Error::Infeasible(Infeasibility::NoBitBandwidth));
    }
    if w_b <= 0.0 {
        return Ok((single_band_power(w_m, h_m, rate_target), 0.0));
    }
    if w_m <= 0.0 {
        return Ok((0.0, single_band_power(w_b, h_b, rate_target)));
    }
    let w = w_m + w_b;
    let log2_lambda =
        rate_target / w - (w_m / w) * (w_m * h_m).log2() - (w_b / w) * (w_b * h_b).log2();
    let lambda = log2_lambda.exp2();
    let p_m = lambda * w_m - 1.0 / h_m;
    let p_o = lambda * w_b - 1.0 / h_b;
    if p_m <= 0.0 {
        Ok((0.0, single_band_power(w_b, h_b, rate_target)))
    } else if p_o <= 0.0 {
        Ok((single_band_power(w_m, h_m, rate_target), 0.0))
    } else {
        Ok((p_m, p_o))
    }
}

/// Semi-NOMA allocation with shared bandwidth `w_shared`, or `None` if the
/// targets cannot be met there.
pub fn semi_candidate(
    scenario: &Scenario,
    channel: &ChannelRealization,
    targets: &PowerTargets,
    w_shared: f64,
) -> Option<SemiAllocation> {
    let sc = scenario_with_floor(scenario, targets);
    semi_candidate_inner(&sc, channel, targets, w_shared)
}

fn semi_candidate_inner(
    sc: &Scenario,
    channel: &ChannelRealization,
    targets: &PowerTargets,
    w_shared: f64,
) -> Option<SemiAllocation> {
    let w = sc.total_bandwidth;
    let n0 = sc.noise_psd;
    let p_sem = if w_shared <= 0.0 {
        if targets.sigma_target > 0.0 {
            return None;
        }
        0.0
    } else {
        semantic_power(sc, channel.g_s, targets.sigma_target, w_shared)?
    };
    let w_bit = w - w_shared;
    let g = channel.g_eff;
    let h_m = if w_shared > 0.0 { g / (p_sem * g + w_shared * n0) } else { 0.0 };
    let h_b = if w_bit > 0.0 { channel.g_b / (w_bit * n0) } else { 0.0 };
    let (p_bit_shared, p_bit_orth) = water_fill_min(h_m, h_b, w_shared, w_bit, targets.bit_target).ok()?;
    let alloc = SemiAllocation { w_shared, w_bit, p_sem, p_bit_shared, p_bit_orth };
    (p_bit_shared + p_bit_orth).is_finite().then_some(alloc)
}

fn semi_total(a: &Option<SemiAllocation>) -> f64 {
    a.map_or(f64::INFINITY, |a| a.p_sem + a.p_bit_shared + a.p_bit_orth)
}

/// Semi-NOMA minimum power by one-dimensional search over the shared
/// bandwidth in `[0, W]`, with the bit power water-filled per candidate.
/// The OMA optimum is seeded as a candidate; ties go to the smaller `W_m`.
pub fn semi_min_power(
    scenario: &Scenario,
    channel: &ChannelRealization,
    targets: &PowerTargets,
    grid: &GridSpec,
) -> Result<PowerSolution> {
    common_feasibility(scenario, targets)?;
    let sc = scenario_with_floor(scenario, targets);
    let seeds: Vec<f64> = match oma_min_power(scenario, channel, targets, grid) {
        Ok(PowerSolution { allocation: Allocation::Oma(a), .. }) => vec![a.w_sem],
        _ => vec![],
    };
    let w = scenario.total_bandwidth;
    let best = search::minimize(0.0, w, grid, Prefer::Lower, &seeds, |wm| {
        semi_total(&semi_candidate_inner(&sc, channel, targets, wm))
    });
    match semi_candidate_inner(&sc, channel, targets, best.x) {
        Some(a) if best.value.is_finite() => Ok(PowerSolution {
            scheme: Scheme::Semi,
            min_power: a.p_sem + a.p_bit_shared + a.p_bit_orth,
            allocation: Allocation::Semi(a),
        }),
        _ => Err(Error::Infeasible(Infeasibility::RateAsymptote)),
    }
}

/// Minimum power of one scheme.
pub fn min_power(
    scheme: Scheme,
    scenario: &Scenario,
    channel: &ChannelRealization,
    targets: &PowerTargets,
    grid: &GridSpec,
) -> Result<PowerSolution> {
    match scheme {
        Scheme::Oma => oma_min_power(scenario, channel, targets, grid),
        Scheme::Noma => noma_min_power(scenario, channel, targets),
        Scheme::Semi => semi_min_power(scenario, channel, targets, grid),
    }
}

/// Re-evaluates the rates at a solution's allocation and checks every target
/// within `rel_tol`.
pub fn meets_targets(
    scenario: &Scenario,
    channel: &ChannelRealization,
    targets: &PowerTargets,
    solution: &PowerSolution,
    rel_tol: f64,
) -> bool {
    let r = solution.allocation.rates(scenario, channel);
    let ge = |got: f64, want: f64| got >= want - rel_tol * want.abs();
    let semantic_on = match solution.allocation {
        Allocation::Oma(a) => a.w_sem > 0.0,
        Allocation::Semi(a) => a.w_shared > 0.0,
        Allocation::Noma(_) => true,
    };
    // a zero-width semantic band carries no semantic stream at all
    let similarity_ok = !semantic_on || ge(r.similarity, targets.min_similarity);
    ge(r.sem_rate_norm, targets.sigma_target) && similarity_ok && ge(r.bit_rate, targets.bit_target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::semi_rates;

    fn setup() -> (Scenario, ChannelRealization) {
        let s = Scenario::default();
        let c = s.mean_channel();
        (s, c)
    }

    #[test]
    fn zero_targets_need_zero_power() {
        let (s, c) = setup();
        let t = PowerTargets::new(0.0, 0.0, 0.0).unwrap();
        let g = GridSpec::with_grid_n(64);
        assert_eq!(oma_min_power(&s, &c, &t, &g).unwrap().min_power, 0.0);
        assert_eq!(semi_min_power(&s, &c, &t, &g).unwrap().min_power, 0.0);
        // NOMA always spends power on the semantic stream over the full band
        assert!(noma_min_power(&s, &c, &t).unwrap().min_power >= 0.0);
    }

    #[test]
    fn noma_closed_form_and_plug_back() {
        let (s, c) = setup();
        let t = PowerTargets::new(0.15e6, 0.8, 2e6).unwrap();
        let sol = noma_min_power(&s, &c, &t).unwrap();
        let r = sol.allocation.rates(&s, &c);
        assert!((r.bit_rate - 2e6).abs() < 1e-9 * 2e6);
        assert!((r.similarity - 0.8).abs() < 1e-9);
        let t0 = PowerTargets { bit_target: 0.0, ..t };
        let sol0 = noma_min_power(&s, &c, &t0).unwrap();
        let Allocation::Noma(a) = sol0.allocation else { panic!() };
        assert_eq!(a.p_bit, 0.0);
        assert_eq!(sol0.min_power, a.p_sem);
    }

    #[test]
    fn noma_flat_in_sigma_below_floor() {
        let (s, c) = setup();
        let at = |sigma| noma_min_power(&s, &c, &PowerTargets::new(sigma, 0.8, 0.8e6).unwrap()).unwrap().min_power;
        let base = at(0.0);
        for sigma in [0.05e6, 0.1e6, 0.15e6, 0.2e6] {
            assert_eq!(at(sigma), base);
        }
        assert!(at(0.21e6) > base);
    }

    #[test]
    fn water_fill_min_cases() {
        assert_eq!(water_fill_min(1.0, 1.0, 1.0, 1.0, 0.0).unwrap(), (0.0, 0.0));
        let (a, b) = water_fill_min(2.0, 2.0, 1.0, 1.0, 3.0).unwrap();
        assert!((a - b).abs() < 1e-12);
        // plug back
        let (h_m, h_b, w_m, w_b, r) = (0.7, 3.0, 0.4, 0.6, 2.5);
        let (pm, po) = water_fill_min(h_m, h_b, w_m, w_b, r).unwrap();
        let got = w_m * (1.0 + pm * h_m).log2() + w_b * (1.0 + po * h_b).log2();
        assert!((got - r).abs() < 1e-12);
        assert!(water_fill_min(1.0, 1.0, 0.0, 0.0, 1.0).is_err());
        // single-band fallback is exact
        let (pm, po) = water_fill_min(1e-6, 5.0, 0.5, 0.5, 1.0).unwrap();
        assert_eq!(pm, 0.0);
        assert!((0.5 * (1.0 + po * 5.0).log2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn semi_bit_only_target() {
        let (s, c) = setup();
        let t = PowerTargets::new(0.0, 0.0, 1e6).unwrap();
        let sol = semi_min_power(&s, &c, &t, &GridSpec::default()).unwrap();
        let want = s.noise_power() / c.g_b * (2f64.powf(1e6 / s.total_bandwidth) - 1.0);
        assert!((sol.min_power - want).abs() < 1e-12 * want, "{} vs {want}", sol.min_power);
    }

    #[test]
    fn dominance_and_plug_back() {
        let (s, c) = setup();
        let g = GridSpec::default();
        for (sigma, eps, r) in [(0.05e6, 0.8, 0.8e6), (0.15e6, 0.8, 2e6), (0.21e6, 0.7, 0.5e6), (0.1e6, 0.5, 3e6)] {
            let t = PowerTargets::new(sigma, eps, r).unwrap();
            let o = oma_min_power(&s, &c, &t, &g).unwrap();
            let n = noma_min_power(&s, &c, &t).unwrap();
            let m = semi_min_power(&s, &c, &t, &g).unwrap();
            assert!(m.min_power <= o.min_power.min(n.min_power) + 1e-9);
            for sol in [&o, &n, &m] {
                assert!(meets_targets(&s, &c, &t, sol, 1e-6), "{sol:?}");
            }
            if let Allocation::Semi(a) = m.allocation {
                assert!(semi_rates(&s, &c, &a).bit_rate >= r * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn infeasibility_causes() {
        let (s, c) = setup();
        let g = GridSpec::with_grid_n(32);
        let too_similar = PowerTargets::new(0.1e6, 0.95, 1e6).unwrap();
        assert!(matches!(oma_min_power(&s, &c, &too_similar, &g), Err(Error::Infeasible(Infeasibility::SimilarityAsymptote))));
        let too_wide = PowerTargets::new(0.3e6, 0.5, 1e6).unwrap();
        assert!(matches!(semi_min_power(&s, &c, &too_wide, &g), Err(Error::Infeasible(Infeasibility::BandwidthBound))));
        let at_ceiling = PowerTargets::new(0.235e6, 0.5, 1e6).unwrap();
        assert!(matches!(noma_min_power(&s, &c, &at_ceiling), Err(Error::Infeasible(Infeasibility::RateAsymptote))));
        assert!(PowerTargets::new(-1.0, 0.5, 0.0).is_err());
        assert!(PowerTargets::new(0.0, 1.0, 0.0).is_err());
    }
}
