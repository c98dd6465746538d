use proptest::prelude::*;

use svb::boundary::{oma_boundary, water_fill_max};
use svb::channel::{ChannelRealization, Scenario};
use svb::power::{meets_targets, min_power, water_fill_min, PowerTargets};
use svb::rates::{oma_rates, semi_rates, OmaAllocation, SemiAllocation};
use svb::search::GridSpec;
use svb::similarity::{LogisticParams, ParamTable};
use svb::Scheme;

fn params() -> impl Strategy<Value = LogisticParams> {
    (0.0..0.3f64, 0.5..0.99f64, 0.05..2.0f64, -10.0..10.0f64)
        .prop_map(|(lo, hi, g, c)| LogisticParams::new(4, lo, hi, g, c).unwrap())
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (12.0..45.0f64, 12.0..45.0f64, -1.0..0.3f64, 3u32..=8, 0.5..0.85f64).prop_map(|(d_s, d_b, lp, k, eps)| Scenario {
        d_s,
        d_b,
        max_power: 10f64.powf(lp),
        k,
        min_similarity: eps,
        ..Scenario::default()
    })
}

fn channel(s: &Scenario, fs: f64, fb: f64) -> ChannelRealization {
    let m = s.mean_channel();
    ChannelRealization::new(m.g_s * fs, m.g_b * fb)
}

fn grid() -> GridSpec {
    GridSpec::with_grid_n(128)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn logistic_inverse_round_trips(p in params(), t in 0.01..0.99f64) {
        let y = p.a_low + t * (p.a_high - p.a_low);
        let x = p.invert(y).unwrap();
        prop_assert!((p.eval(x) - y).abs() < 1e-9);
    }

    #[test]
    fn logistic_is_increasing(p in params(), x in -40.0..40.0f64, dx in 0.01..5.0f64) {
        prop_assert!(p.eval(x + dx) >= p.eval(x));
        prop_assert!(p.eval(x) >= p.a_low && p.eval(x) <= p.a_high);
    }

    #[test]
    fn semi_never_needs_more_power(s in scenario(), fs in 0.2..3.0f64, fb in 0.2..3.0f64,
                                   u in 0.05..0.9f64, eps in 0.5..0.85f64, r in 1e4..2e6f64) {
        let ch = channel(&s, fs, fb);
        let ceiling = s.logistic().a_high;
        let sigma = u * ceiling * s.total_bandwidth / s.k as f64;
        let targets = PowerTargets::new(sigma, eps.min(ceiling - 0.01), r).unwrap();
        let g = grid();
        let semi = min_power(Scheme::Semi, &s, &ch, &targets, &g).unwrap();
        prop_assert!(meets_targets(&s, &ch, &targets, &semi, 1e-6));
        for scheme in [Scheme::Oma, Scheme::Noma] {
            if let Ok(other) = min_power(scheme, &s, &ch, &targets, &g) {
                prop_assert!(semi.min_power <= other.min_power * (1.0 + 1e-9), "{scheme}: {} > {}", semi.min_power, other.min_power);
            }
        }
    }

    #[test]
    fn power_grows_with_bit_target(s in scenario(), u in 0.1..0.8f64, r in 1e4..1e6f64, f in 1.01..3.0f64) {
        let ch = s.mean_channel();
        let sigma = u * s.logistic().a_high * s.total_bandwidth / s.k as f64;
        let lo = PowerTargets::new(sigma, s.min_similarity, r).unwrap();
        let hi = PowerTargets::new(sigma, s.min_similarity, r * f).unwrap();
        for scheme in Scheme::ALL {
            let a = min_power(scheme, &s, &ch, &lo, &grid()).unwrap().min_power;
            let b = min_power(scheme, &s, &ch, &hi, &grid()).unwrap().min_power;
            prop_assert!(b >= a * (1.0 - 1e-9), "{scheme}: {a} -> {b}");
        }
    }

    #[test]
    fn rates_are_continuous_in_power(s in scenario(), ws in 0.1..0.9f64, ps in 0.01..0.99f64) {
        let ch = s.mean_channel();
        let w = s.total_bandwidth;
        let p = s.max_power;
        let at = |ps: f64| oma_rates(&s, &ch, &OmaAllocation { w_sem: ws * w, w_bit: (1.0 - ws) * w, p_sem: ps * p, p_bit: (1.0 - ps) * p });
        let semi_at = |ps: f64| semi_rates(&s, &ch, &SemiAllocation {
            w_shared: ws * w, w_bit: (1.0 - ws) * w, p_sem: ps * p, p_bit_shared: 0.3 * (1.0 - ps) * p, p_bit_orth: 0.7 * (1.0 - ps) * p,
        });
        let h = 1e-9;
        let (a, b) = (at(ps), at(ps + h));
        prop_assert!((a.sem_rate_norm - b.sem_rate_norm).abs() <= 1e-4 * w);
        prop_assert!((a.bit_rate - b.bit_rate).abs() <= 1e-4 * w);
        let (a, b) = (semi_at(ps), semi_at(ps + h));
        prop_assert!((a.sem_rate_norm - b.sem_rate_norm).abs() <= 1e-4 * w);
        prop_assert!((a.bit_rate - b.bit_rate).abs() <= 1e-4 * w);
    }

    #[test]
    fn semi_rates_reduce_to_oma(s in scenario(), ws in 0.0..1.0f64, ps in 0.0..1.0f64) {
        // no bit power on the shared band: semi-NOMA is OMA
        let ch = s.mean_channel();
        let (w, p) = (s.total_bandwidth, s.max_power);
        let o = oma_rates(&s, &ch, &OmaAllocation { w_sem: ws * w, w_bit: (1.0 - ws) * w, p_sem: ps * p, p_bit: (1.0 - ps) * p });
        let m = semi_rates(&s, &ch, &SemiAllocation { w_shared: ws * w, w_bit: (1.0 - ws) * w, p_sem: ps * p, p_bit_shared: 0.0, p_bit_orth: (1.0 - ps) * p });
        prop_assert!((o.sem_rate_norm - m.sem_rate_norm).abs() <= 1e-9 * w);
        prop_assert!((o.bit_rate - m.bit_rate).abs() <= 1e-9 * w);
    }

    #[test]
    fn water_fill_min_meets_rate_and_beats_single_bands(hm in 1e-3..1e3f64, hb in 1e-3..1e3f64,
                                                       wm in 1e4..1e6f64, wb in 1e4..1e6f64, r in 1e3..4e6f64) {
        let rate = |a: f64, b: f64| wm * (1.0 + a * hm).log2() + wb * (1.0 + b * hb).log2();
        let (a, b) = water_fill_min(hm, hb, wm, wb, r).unwrap();
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert!(rate(a, b) >= r * (1.0 - 1e-9));
        let only_m = ((r / wm).exp2() - 1.0) / hm;
        let only_b = ((r / wb).exp2() - 1.0) / hb;
        prop_assert!(a + b <= only_m.min(only_b) * (1.0 + 1e-9));
        // a small move along the budget line never lowers the power
        for t in [0.99, 1.01] {
            if a > 0.0 && b > 0.0 {
                let a2 = a * t;
                let need_b = (((r - wm * (1.0 + a2 * hm).log2()) / wb).exp2() - 1.0) / hb;
                prop_assert!(a2 + need_b >= (a + b) * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn water_fill_max_spends_budget_and_beats_corners(hm in 1e-3..1e3f64, hb in 1e-3..1e3f64,
                                                     wm in 1e4..1e6f64, wb in 1e4..1e6f64, p in 1e-3..10.0f64) {
        let rate = |a: f64, b: f64| wm * (1.0 + a * hm).log2() + wb * (1.0 + b * hb).log2();
        let (a, b) = water_fill_max(hm, hb, wm, wb, p);
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert!(((a + b) - p).abs() <= 1e-12 * p.max(1.0));
        let best = rate(a, b);
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            prop_assert!(best >= rate(t * p, (1.0 - t) * p) * (1.0 - 1e-9));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oma_frontier_is_non_increasing(s in scenario()) {
        let ch = s.mean_channel();
        let b = oma_boundary(&s, &ch, 24, &grid()).unwrap();
        prop_assert!(b.points.windows(2).all(|w| w[1].bit_rate <= w[0].bit_rate && w[1].sem_rate_norm > w[0].sem_rate_norm));
    }
}

#[test]
fn synthetic_table_is_valid_and_ordered() {
    let t = ParamTable::synthetic_illustrative();
    assert!(t.len() >= 6);
    for p in t.iter() {
        p.validate().unwrap();
    }
}
