//! Closed-form semantic and bit rates for a given resource allocation.
//!
//! Semantic rates are normalized by `I/L`: `sigma = (W_sem / K) * similarity`.
//! Zero-bandwidth cases are exact zeros.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, Scenario};
use crate::{linear_to_db, shannon_rate, Scheme};

/// Achieved (normalized semantic rate, bit rate) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    /// `S * L / I`.
    pub sem_rate_norm: f64,
    /// bits/s
    pub bit_rate: f64,
    /// Achieved similarity; 0 when the semantic stream has no bandwidth.
    pub similarity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmaAllocation {
    pub w_sem: f64,
    pub w_bit: f64,
    pub p_sem: f64,
    pub p_bit: f64,
}

/// Both streams occupy the full band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NomaAllocation {
    pub p_sem: f64,
    pub p_bit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiAllocation {
    /// Shared sub-band `W_m`.
    pub w_shared: f64,
    /// Orthogonal bit-only sub-band `W_b`.
    pub w_bit: f64,
    pub p_sem: f64,
    pub p_bit_shared: f64,
    pub p_bit_orth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum Allocation {
    Oma(OmaAllocation),
    Noma(NomaAllocation),
    Semi(SemiAllocation),
}

impl Allocation {
    pub fn scheme(&self) -> Scheme {
        match self {
            Allocation::Oma(_) => Scheme::Oma,
            Allocation::Noma(_) => Scheme::Noma,
            Allocation::Semi(_) => Scheme::Semi,
        }
    }

    pub fn total_power(&self) -> f64 {
        match *self {
            Allocation::Oma(a) => a.p_sem + a.p_bit,
            Allocation::Noma(a) => a.p_sem + a.p_bit,
            Allocation::Semi(a) => a.p_sem + a.p_bit_shared + a.p_bit_orth,
        }
    }

    /// Checks non-negativity and that the bandwidth parts add up to the
    /// scenario total. The power budget is not checked here.
    pub fn is_consistent(&self, scenario: &Scenario) -> bool {
        let w = scenario.total_bandwidth;
        let tol = 1e-9 * w;
        let (parts, powers): (Vec<f64>, Vec<f64>) = match *self {
            Allocation::Oma(a) => (vec![a.w_sem, a.w_bit], vec![a.p_sem, a.p_bit]),
            Allocation::Noma(a) => (vec![w], vec![a.p_sem, a.p_bit]),
            Allocation::Semi(a) => (vec![a.w_shared, a.w_bit], vec![a.p_sem, a.p_bit_shared, a.p_bit_orth]),
        };
        parts.iter().chain(&powers).all(|v| *v >= 0.0) && (parts.iter().sum::<f64>() - w).abs() <= tol
    }

    /// Rates achieved by this allocation.
    pub fn rates(&self, scenario: &Scenario, channel: &ChannelRealization) -> RatePair {
        match self {
            Allocation::Oma(a) => oma_rates(scenario, channel, a),
            Allocation::Noma(a) => noma_rates(scenario, channel, a).0,
            Allocation::Semi(a) => semi_rates(scenario, channel, a),
        }
    }
}

/// Semantic stream alone on a band of width `w` with power `p`.
pub(crate) fn semantic_link(scenario: &Scenario, g_s: f64, w: f64, p: f64, interference: f64) -> (f64, f64) {
    if w <= 0.0 {
        return (0.0, 0.0);
    }
    let params = scenario.logistic();
    let sinr = p * g_s / (interference + w * scenario.noise_psd);
    let eps = params.eval(linear_to_db(sinr));
    (w / params.k as f64 * eps, eps)
}

pub fn oma_rates(scenario: &Scenario, channel: &ChannelRealization, alloc: &OmaAllocation) -> RatePair {
    let (sigma, eps) = semantic_link(scenario, channel.g_s, alloc.w_sem, alloc.p_sem, 0.0);
    let bit = if alloc.w_bit > 0.0 {
        shannon_rate(alloc.w_bit, alloc.p_bit * channel.g_b / (alloc.w_bit * scenario.noise_psd))
    } else {
        0.0
    };
    RatePair { sem_rate_norm: sigma, bit_rate: bit, similarity: eps }
}

/// Rates at which each user decodes the NOMA bit stream (first SIC stage).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NomaDecodeRates {
    pub r_b_to_s: f64,
    pub r_b_to_b: f64,
}

/// The bit stream is decoded first at both users treating the semantic
/// stream as noise; its rate is the smaller of the two decodable rates.
pub fn noma_rates(
    scenario: &Scenario,
    channel: &ChannelRealization,
    alloc: &NomaAllocation,
) -> (RatePair, NomaDecodeRates) {
    let w = scenario.total_bandwidth;
    let n = w * scenario.noise_psd;
    let sinr = |g: f64| alloc.p_bit * g / (alloc.p_sem * g + n);
    let decode = NomaDecodeRates { r_b_to_s: shannon_rate(w, sinr(channel.g_s)), r_b_to_b: shannon_rate(w, sinr(channel.g_b)) };
    let (sigma, eps) = semantic_link(scenario, channel.g_s, w, alloc.p_sem, 0.0);
    let pair = RatePair { sem_rate_norm: sigma, bit_rate: decode.r_b_to_s.min(decode.r_b_to_b), similarity: eps };
    (pair, decode)
}

pub fn semi_rates(scenario: &Scenario, channel: &ChannelRealization, alloc: &SemiAllocation) -> RatePair {
    let n0 = scenario.noise_psd;
    let (sigma, eps) = semantic_link(scenario, channel.g_s, alloc.w_shared, alloc.p_sem, 0.0);
    let shared = if alloc.w_shared > 0.0 {
        let g = channel.g_eff;
        shannon_rate(alloc.w_shared, alloc.p_bit_shared * g / (alloc.p_sem * g + alloc.w_shared * n0))
    } else {
        0.0
    };
    let orth = if alloc.w_bit > 0.0 {
        shannon_rate(alloc.w_bit, alloc.p_bit_orth * channel.g_b / (alloc.w_bit * n0))
    } else {
        0.0
    };
    RatePair { sem_rate_norm: sigma, bit_rate: shared + orth, similarity: eps }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Scenario, ChannelRealization) {
        let s = Scenario::default();
        let c = ChannelRealization::new(6.25e-9, 30f64.powi(-4) * 1e-3);
        (s, c)
    }

    #[test]
    fn oma_zero_bandwidth_and_power() {
        let (s, c) = setup();
        let r = oma_rates(&s, &c, &OmaAllocation { w_sem: 0.0, w_bit: 1e6, p_sem: 0.5, p_bit: 0.5 });
        assert_eq!(r.sem_rate_norm, 0.0);
        assert_eq!(r.similarity, 0.0);
        let r = oma_rates(&s, &c, &OmaAllocation { w_sem: 0.5e6, w_bit: 0.5e6, p_sem: 0.5, p_bit: 0.0 });
        assert_eq!(r.bit_rate, 0.0);
    }

    #[test]
    fn oma_matches_scripted_formulas() {
        // independent evaluation of (W_s/K) eps(10 log10(p g/(W N0))) and W_b log2(1 + p g/(W N0))
        let (s, c) = setup();
        let p = s.logistic();
        let (ws, wb, ps, pb) = (0.5e6, 0.5e6, 0.01, 0.99);
        let snr_s: f64 = ps * c.g_s / (ws * s.noise_psd);
        let eps = p.a_low + (p.a_high - p.a_low) / (1.0 + (-(p.growth * 10.0 * snr_s.log10() + p.offset)).exp());
        let bit = wb * (1.0 + pb * c.g_b / (wb * s.noise_psd)).log2();
        let r = oma_rates(&s, &c, &OmaAllocation { w_sem: ws, w_bit: wb, p_sem: ps, p_bit: pb });
        assert!((r.sem_rate_norm - ws / 4.0 * eps).abs() <= 1e-12 * r.sem_rate_norm);
        assert!((r.bit_rate - bit).abs() <= 1e-12 * bit);
    }

    #[test]
    fn noma_without_semantic_power_is_single_user() {
        let (s, c) = setup();
        let (r, _) = noma_rates(&s, &c, &NomaAllocation { p_sem: 0.0, p_bit: 1.0 });
        let single = s.total_bandwidth * (1.0 + c.g_eff / s.noise_power()).log2();
        assert!((r.bit_rate - single).abs() <= 1e-12 * single);
    }

    #[test]
    fn noma_symmetric_channel_decode_rates_agree() {
        let s = Scenario::default();
        let c = ChannelRealization::new(2e-9, 2e-9);
        let (_, d) = noma_rates(&s, &c, &NomaAllocation { p_sem: 0.3, p_bit: 0.7 });
        assert_eq!(d.r_b_to_s, d.r_b_to_b);
    }

    #[test]
    fn semi_reduces_to_noma_and_oma() {
        let (s, c) = setup();
        let semi = semi_rates(
            &s,
            &c,
            &SemiAllocation { w_shared: 1e6, w_bit: 0.0, p_sem: 0.2, p_bit_shared: 0.8, p_bit_orth: 0.0 },
        );
        let (noma, _) = noma_rates(&s, &c, &NomaAllocation { p_sem: 0.2, p_bit: 0.8 });
        assert!((semi.bit_rate - noma.bit_rate).abs() <= 1e-12 * noma.bit_rate);
        assert_eq!(semi.sem_rate_norm, noma.sem_rate_norm);

        let semi = semi_rates(
            &s,
            &c,
            &SemiAllocation { w_shared: 0.3e6, w_bit: 0.7e6, p_sem: 0.2, p_bit_shared: 0.0, p_bit_orth: 0.8 },
        );
        let oma = oma_rates(&s, &c, &OmaAllocation { w_sem: 0.3e6, w_bit: 0.7e6, p_sem: 0.2, p_bit: 0.8 });
        assert_eq!(semi, oma);
    }

    #[test]
    fn zero_bandwidth_continuity() {
        let (s, c) = setup();
        let w = 1e-9 * s.total_bandwidth;
        let r = oma_rates(&s, &c, &OmaAllocation { w_sem: w, w_bit: w, p_sem: 0.5, p_bit: 0.5 });
        assert!(r.sem_rate_norm < 1e-3 && r.bit_rate < 1.0, "{r:?}");
    }

    #[test]
    fn allocation_consistency() {
        let s = Scenario::default();
        assert!(Allocation::Oma(OmaAllocation { w_sem: 0.4e6, w_bit: 0.6e6, p_sem: 0.1, p_bit: 0.2 }).is_consistent(&s));
        assert!(!Allocation::Oma(OmaAllocation { w_sem: 0.4e6, w_bit: 0.4e6, p_sem: 0.1, p_bit: 0.2 }).is_consistent(&s));
        assert!(!Allocation::Noma(NomaAllocation { p_sem: -0.1, p_bit: 0.2 }).is_consistent(&s));
    }
}
