//! Semantic-versus-bit (SvB) rate-region frontiers.
//!
//! For a target normalized semantic rate `sigma`, each scheme's frontier value
//! is the largest bit rate achievable while meeting `sigma` and the similarity
//! floor with total power at most `P`:
//!
//! - OMA: one-dimensional search over the semantic sub-band `W_s` inside the
//!   interval from [`oma_bandwidth_bounds`]; the semantic stream gets exactly its
//!   minimum power and the rest goes to bits.
//! - NOMA: the band is fully shared, so the frontier is traced by sweeping the
//!   semantic power from the similarity-floor power up to `P`.
//! - Semi-NOMA: one-dimensional search over the shared sub-band `W_m`, with
//!   the leftover power water-filled across the shared and orthogonal bands.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, Scenario};
use crate::rates::{
    noma_rates, Allocation, NomaAllocation, OmaAllocation, RatePair, SemiAllocation,
};
use crate::search::{self, GridSpec, Prefer};
use crate::similarity::{required_power_for_semantic_rate, required_power_for_similarity};
use crate::{db_to_linear, linear_to_db, shannon_rate, Error, Result, Scheme};

/// Lower limit of the shared band, as a fraction of `W`.
pub const TINY_SHARED_FRACTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmaExtremes {
    /// Largest normalized semantic rate: `S_max` when power-sufficient,
    /// the reduced `S~_max` when power-limited.
    pub sigma_max: f64,
    /// All resources on the bit stream.
    pub r_max: f64,
    pub power_limited: bool,
    /// Semantic bandwidth at `sigma_max` (`W`, or `W_s^p < W` when power-limited).
    pub w_sem_at_max: f64,
    pub similarity_at_max: f64,
}

/// Extreme points `(sigma_max, 0)` and `(0, R_max)` shared by OMA and semi-NOMA.
pub fn oma_extremes(scenario: &Scenario, channel: &ChannelRealization) -> OmaExtremes {
    let params = scenario.logistic();
    let w = scenario.total_bandwidth;
    let p = scenario.max_power;
    let n0 = scenario.noise_psd;
    let k = params.k as f64;
    let r_max = shannon_rate(w, p * channel.g_b / (w * n0));
    let eps_full = params.eval(linear_to_db(p * channel.g_s / (w * n0)));
    let floor = scenario.min_similarity;
    if floor <= eps_full {
        return OmaExtremes { sigma_max: w / k * eps_full, r_max, power_limited: false, w_sem_at_max: w, similarity_at_max: eps_full };
    }
    // only part of the band can carry the full power at the floor SNR
    let w_p = match params.invert(floor) {
        Ok(snr_db) => (p * channel.g_s / (n0 * db_to_linear(snr_db))).min(w),
        Err(_) => 0.0,
    };
    OmaExtremes { sigma_max: w_p / k * floor, r_max, power_limited: true, w_sem_at_max: w_p, similarity_at_max: floor }
}

/// Whether full power over the full band still misses the similarity floor.
pub fn is_power_limited(scenario: &Scenario, channel: &ChannelRealization) -> bool {
    oma_extremes(scenario, channel).power_limited
}

/// Interval `[W_low, W_up]` containing the optimal OMA semantic bandwidth
/// for the normalized target `sigma`: `W_low = sigma K`,
/// `W_up = min(sigma K / eps_min, W)`.
pub fn oma_bandwidth_bounds(scenario: &Scenario, sigma: f64) -> Result<(f64, f64)> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidInput(format!("negative semantic-rate target {sigma}")));
    }
    let w = scenario.total_bandwidth;
    let w_low = sigma * scenario.k as f64;
    if w_low > w {
        return Err(Error::InfeasibleTarget { sigma, needed: w_low, available: w });
    }
    let w_up = if scenario.min_similarity > 0.0 { (w_low / scenario.min_similarity).min(w) } else { w };
    Ok((w_low, w_up))
}

/// Normalized NOMA semantic-rate floor `(W / K) * eps_min`.
pub fn noma_sigma_min(scenario: &Scenario) -> f64 {
    scenario.total_bandwidth / scenario.k as f64 * scenario.min_similarity
}

/// Bit rate at the NOMA extreme point `(sigma_min, R_max^N)`.
pub fn noma_r_max(scenario: &Scenario, channel: &ChannelRealization) -> Result<f64> {
    if is_power_limited(scenario, channel) {
        return Err(Error::EmptyRegion);
    }
    let p_min = noma_floor_power(scenario, channel)?;
    let g = channel.g_eff;
    let w = scenario.total_bandwidth;
    Ok(shannon_rate(w, (scenario.max_power - p_min) * g / (p_min * g + w * scenario.noise_psd)))
}

fn noma_floor_power(scenario: &Scenario, channel: &ChannelRealization) -> Result<f64> {
    required_power_for_similarity(
        scenario.logistic(),
        scenario.min_similarity,
        scenario.total_bandwidth,
        channel.g_s,
        scenario.noise_psd,
    )
}

/// A frontier point and the allocation that achieves it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub bit_rate: f64,
    pub allocation: Allocation,
}

/// Power the semantic stream needs on a band of width `w` to meet both the
/// rate target and the similarity floor. `None` when unreachable.
pub(crate) fn semantic_power(scenario: &Scenario, g_s: f64, sigma: f64, w: f64) -> Option<f64> {
    let params = scenario.logistic();
    let n0 = scenario.noise_psd;
    let rate = required_power_for_semantic_rate(params, sigma, w, g_s, n0).ok()?;
    let floor = required_power_for_similarity(params, scenario.min_similarity, w, g_s, n0).ok()?;
    Some(rate.max(floor))
}

/// OMA bit rate with semantic bandwidth `w_sem`, or 0 if `sigma` cannot be
/// met within the power budget there.
pub fn oma_candidate(scenario: &Scenario, channel: &ChannelRealization, sigma: f64, w_sem: f64) -> BoundaryPoint {
    let w = scenario.total_bandwidth;
    let p = scenario.max_power;
    let infeasible = BoundaryPoint {
        bit_rate: 0.0,
        allocation: Allocation::Oma(OmaAllocation { w_sem, w_bit: w - w_sem, p_sem: p, p_bit: 0.0 }),
    };
    let p_sem = if w_sem <= 0.0 {
        if sigma > 0.0 {
            return infeasible;
        }
        0.0
    } else {
        match semantic_power(scenario, channel.g_s, sigma, w_sem) {
            Some(ps) if ps <= p => ps,
            _ => return infeasible,
        }
    };
    let w_bit = w - w_sem;
    let p_bit = p - p_sem;
    let bit_rate = if w_bit > 0.0 { shannon_rate(w_bit, p_bit * channel.g_b / (w_bit * scenario.noise_psd)) } else { 0.0 };
    BoundaryPoint { bit_rate, allocation: Allocation::Oma(OmaAllocation { w_sem, w_bit, p_sem, p_bit }) }
}

/// Largest OMA bit rate meeting the normalized semantic target `sigma`.
///
/// Candidates whose semantic power exceeds `P` score zero; ties go to the
/// smaller semantic bandwidth.
pub fn oma_boundary_point(
    scenario: &Scenario,
    channel: &ChannelRealization,
    sigma: f64,
    grid: &GridSpec,
) -> Result<BoundaryPoint> {
    let (w_low, w_up) = oma_bandwidth_bounds(scenario, sigma)?;
    let best = search::maximize(w_low, w_up, grid, Prefer::Lower, &[], |ws| {
        oma_candidate(scenario, channel, sigma, ws).bit_rate
    });
    Ok(oma_candidate(scenario, channel, sigma, best.x))
}

/// Power split maximizing `w_m log2(1 + p_m h_m) + w_b log2(1 + p_o h_b)`
/// subject to `p_m + p_o <= budget`.
///
/// `h_m`, `h_b` are per-watt SINR gains of the two bands. Returns
/// `(p_m, p_o)`; when one band's share is non-positive the other band takes
/// the whole budget.
pub fn water_fill_max(h_m: f64, h_b: f64, w_m: f64, w_b: f64, budget: f64) -> (f64, f64) {
    if !(budget > 0.0) {
        return (0.0, 0.0);
    }
    if w_b <= 0.0 {
        return (budget, 0.0);
    }
    if w_m <= 0.0 {
        return (0.0, budget);
    }
    let lambda = (w_m + w_b) / (budget + 1.0 / h_m + 1.0 / h_b);
    let p_m = w_m / lambda - 1.0 / h_m;
    let p_o = w_b / lambda - 1.0 / h_b;
    if p_m <= 0.0 {
        (0.0, budget)
    } else if p_o <= 0.0 {
        (budget, 0.0)
    } else {
        let p_m = p_m.min(budget);
        (p_m, budget - p_m)
    }
}

/// Semi-NOMA bit rate with shared bandwidth `w_shared`, or 0 if `sigma`
/// cannot be met within the power budget there.
pub fn semi_candidate(scenario: &Scenario, channel: &ChannelRealization, sigma: f64, w_shared: f64) -> BoundaryPoint {
    let w = scenario.total_bandwidth;
    let p = scenario.max_power;
    let n0 = scenario.noise_psd;
    let w_bit = w - w_shared;
    let infeasible = BoundaryPoint {
        bit_rate: 0.0,
        allocation: Allocation::Semi(SemiAllocation { w_shared, w_bit, p_sem: p, p_bit_shared: 0.0, p_bit_orth: 0.0 }),
    };
    let p_sem = if w_shared <= 0.0 {
        if sigma > 0.0 {
            return infeasible;
        }
        0.0
    } else {
        match semantic_power(scenario, channel.g_s, sigma, w_shared) {
            Some(ps) if ps <= p => ps,
            _ => return infeasible,
        }
    };
    let budget = p - p_sem;
    let g = channel.g_eff;
    let h_m = if w_shared > 0.0 { g / (p_sem * g + w_shared * n0) } else { 0.0 };
    let h_b = if w_bit > 0.0 { channel.g_b / (w_bit * n0) } else { 0.0 };
    let (p_bit_shared, p_bit_orth) = water_fill_max(h_m, h_b, w_shared, w_bit, budget);
    let bit_rate = shannon_rate(w_shared, p_bit_shared * h_m) + shannon_rate(w_bit, p_bit_orth * h_b);
    BoundaryPoint {
        bit_rate,
        allocation: Allocation::Semi(SemiAllocation { w_shared, w_bit, p_sem, p_bit_shared, p_bit_orth }),
    }
}

/// Largest semi-NOMA bit rate meeting the normalized semantic target `sigma`.
///
/// Searches `W_m` over `[max(sigma K, 1e-9 W), W]` with water-filled bit
/// power per candidate; ties go to the larger shared band. The exact
/// `W_m = 0` allocation (pure OMA bit transmission) is included when
/// `sigma = 0`, and the OMA optimum is seeded as a candidate since every OMA
/// allocation is a semi-NOMA allocation with no shared bit power.
pub fn semi_boundary_point(
    scenario: &Scenario,
    channel: &ChannelRealization,
    sigma: f64,
    grid: &GridSpec,
) -> Result<BoundaryPoint> {
    let w = scenario.total_bandwidth;
    let (w_low, _) = oma_bandwidth_bounds(scenario, sigma)?;
    let lo = w_low.max(w * TINY_SHARED_FRACTION);
    let seeds: Vec<f64> = if sigma > 0.0 {
        match oma_boundary_point(scenario, channel, sigma, grid)?.allocation {
            Allocation::Oma(a) if a.w_sem > 0.0 => vec![a.w_sem],
            _ => vec![],
        }
    } else {
        vec![]
    };
    let best = search::maximize(lo, w, grid, Prefer::Upper, &seeds, |wm| {
        semi_candidate(scenario, channel, sigma, wm).bit_rate
    });
    let mut point = semi_candidate(scenario, channel, sigma, best.x);
    if sigma == 0.0 {
        let collapse = semi_candidate(scenario, channel, 0.0, 0.0);
        if collapse.bit_rate > point.bit_rate {
            point = collapse;
        }
    }
    Ok(point)
}

/// Frontier of one scheme's SvB rate region, sorted by ascending `sigma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBoundary {
    pub scheme: Scheme,
    pub points: Vec<RatePair>,
    pub grid: GridSpec,
    pub power_limited: bool,
}

impl RegionBoundary {
    pub fn sigma_range(&self) -> Option<(f64, f64)> {
        Some((self.points.first()?.sem_rate_norm, self.points.last()?.sem_rate_norm))
    }

    /// Frontier bit rate at `sigma` by linear interpolation; `None` outside
    /// the covered range.
    pub fn bit_rate_at(&self, sigma: f64) -> Option<f64> {
        let (lo, hi) = self.sigma_range()?;
        let slack = 1e-9 * hi.abs().max(1.0);
        if sigma < lo - slack || sigma > hi + slack {
            return None;
        }
        let pts = &self.points;
        let idx = pts.partition_point(|p| p.sem_rate_norm < sigma);
        // best rate among points sitting exactly at sigma
        let exact = pts[idx..].iter().take_while(|p| p.sem_rate_norm == sigma).map(|p| p.bit_rate).fold(None, |m: Option<f64>, r| {
            Some(m.map_or(r, |m| m.max(r)))
        });
        if let Some(r) = exact {
            return Some(r);
        }
        if idx == 0 {
            return Some(pts[0].bit_rate);
        }
        if idx == pts.len() {
            return Some(pts[pts.len() - 1].bit_rate);
        }
        let (a, b) = (&pts[idx - 1], &pts[idx]);
        let t = (sigma - a.sem_rate_norm) / (b.sem_rate_norm - a.sem_rate_norm);
        Some(a.bit_rate + t * (b.bit_rate - a.bit_rate))
    }
}

/// Evenly spaced targets `sigma_i = sigma_max * i / (n - 1)`.
pub fn sigma_grid(sigma_max: f64, n_points: usize) -> Vec<f64> {
    match n_points {
        0 => vec![],
        1 => vec![0.0],
        n => (0..n).map(|i| if i == n - 1 { sigma_max } else { sigma_max * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// A point achieving `sigma_j` also achieves every `sigma_i < sigma_j`, so
/// the frontier is the running maximum from the right.
fn enforce_pareto(points: &mut [RatePair]) {
    for i in (0..points.len().saturating_sub(1)).rev() {
        if points[i + 1].bit_rate > points[i].bit_rate {
            points[i].bit_rate = points[i + 1].bit_rate;
            points[i].similarity = points[i + 1].similarity;
        }
    }
}

fn searched_boundary(
    scenario: &Scenario,
    channel: &ChannelRealization,
    scheme: Scheme,
    sigmas: &[f64],
    grid: &GridSpec,
) -> Result<RegionBoundary> {
    let ext = oma_extremes(scenario, channel);
    let mut sorted: Vec<f64> = sigmas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut points = sorted
        .par_iter()
        .map(|&sigma| -> Result<RatePair> {
            if sigma >= ext.sigma_max {
                // all resources on the semantic stream
                return Ok(RatePair { sem_rate_norm: ext.sigma_max, bit_rate: 0.0, similarity: ext.similarity_at_max });
            }
            let point = match scheme {
                Scheme::Oma => oma_boundary_point(scenario, channel, sigma, grid)?,
                Scheme::Semi => semi_boundary_point(scenario, channel, sigma, grid)?,
                Scheme::Noma => unreachable!("NOMA frontier is traced by a power sweep"),
            };
            let achieved = point.allocation.rates(scenario, channel);
            let similarity = if point.bit_rate > 0.0 || sigma == 0.0 { achieved.similarity } else { 0.0 };
            Ok(RatePair { sem_rate_norm: sigma, bit_rate: point.bit_rate, similarity })
        })
        .collect::<Result<Vec<_>>>()?;
    enforce_pareto(&mut points);
    Ok(RegionBoundary { scheme, points, grid: *grid, power_limited: ext.power_limited })
}

pub fn oma_boundary(
    scenario: &Scenario,
    channel: &ChannelRealization,
    n_points: usize,
    grid: &GridSpec,
) -> Result<RegionBoundary> {
    let ext = oma_extremes(scenario, channel);
    searched_boundary(scenario, channel, Scheme::Oma, &sigma_grid(ext.sigma_max, n_points), grid)
}

pub fn semi_boundary(
    scenario: &Scenario,
    channel: &ChannelRealization,
    n_points: usize,
    grid: &GridSpec,
) -> Result<RegionBoundary> {
    let ext = oma_extremes(scenario, channel);
    semi_boundary_at(scenario, channel, &sigma_grid(ext.sigma_max, n_points), grid)
}

/// Semi-NOMA frontier evaluated at the given targets (clipped to `sigma_max`).
pub fn semi_boundary_at(
    scenario: &Scenario,
    channel: &ChannelRealization,
    sigmas: &[f64],
    grid: &GridSpec,
) -> Result<RegionBoundary> {
    searched_boundary(scenario, channel, Scheme::Semi, sigmas, grid)
}

/// OMA frontier evaluated at the given targets (clipped to `sigma_max`).
pub fn oma_boundary_at(
    scenario: &Scenario,
    channel: &ChannelRealization,
    sigmas: &[f64],
    grid: &GridSpec,
) -> Result<RegionBoundary> {
    searched_boundary(scenario, channel, Scheme::Oma, sigmas, grid)
}

/// NOMA frontier from `n_points` semantic powers evenly spaced between the
/// similarity-floor power and `P`; the bit stream gets the rest.
pub fn noma_boundary(scenario: &Scenario, channel: &ChannelRealization, n_points: usize) -> Result<RegionBoundary> {
    let ext = oma_extremes(scenario, channel);
    if ext.power_limited {
        return Err(Error::EmptyRegion);
    }
    let p = scenario.max_power;
    let p_min = noma_floor_power(scenario, channel)?.min(p);
    let powers: Vec<f64> = match n_points {
        0 => vec![],
        1 => vec![p_min],
        n => (0..n).map(|i| if i == n - 1 { p } else { p_min + (p - p_min) * i as f64 / (n - 1) as f64 }).collect(),
    };
    let points = powers
        .iter()
        .map(|&p_sem| noma_rates(scenario, channel, &NomaAllocation { p_sem, p_bit: p - p_sem }).0)
        .collect();
    Ok(RegionBoundary { scheme: Scheme::Noma, points, grid: GridSpec::default(), power_limited: false })
}

/// Frontier of any scheme with `n_points` samples.
pub fn sweep_boundary(
    scenario: &Scenario,
    channel: &ChannelRealization,
    scheme: Scheme,
    n_points: usize,
    grid: &GridSpec,
) -> Result<RegionBoundary> {
    match scheme {
        Scheme::Oma => oma_boundary(scenario, channel, n_points, grid),
        Scheme::Noma => noma_boundary(scenario, channel, n_points),
        Scheme::Semi => semi_boundary(scenario, channel, n_points, grid),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Containment {
    Contained,
    NotContained {
        witness_sigma: f64,
        inner_bit_rate: f64,
        /// `None` when the outer region does not reach `witness_sigma`.
        outer_bit_rate: Option<f64>,
    },
}

impl Containment {
    pub fn is_contained(&self) -> bool {
        matches!(self, Containment::Contained)
    }
}

/// Whether every `inner` frontier point lies within the `outer` region up to
/// `tol` bits/s. The witness is the lowest-`sigma` violating point.
pub fn check_containment(inner: &RegionBoundary, outer: &RegionBoundary, tol: f64) -> Result<Containment> {
    let (Some((i_lo, i_hi)), Some((o_lo, o_hi))) = (inner.sigma_range(), outer.sigma_range()) else {
        return Err(Error::DomainMismatch);
    };
    let slack = 1e-9 * i_hi.abs().max(o_hi.abs()).max(1.0);
    if i_hi < o_lo - slack || i_lo > o_hi + slack {
        return Err(Error::DomainMismatch);
    }
    for p in &inner.points {
        let outer_rate = outer.bit_rate_at(p.sem_rate_norm);
        let ok = matches!(outer_rate, Some(r) if r >= p.bit_rate - tol);
        if !ok {
            return Ok(Containment::NotContained { witness_sigma: p.sem_rate_norm, inner_bit_rate: p.bit_rate, outer_bit_rate: outer_rate });
        }
    }
    Ok(Containment::Contained)
}
