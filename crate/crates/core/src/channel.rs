//! Scenario configuration, distance-based path loss and seeded Rayleigh fading.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::similarity::{LogisticParams, ParamTable};
use crate::{Error, Result};

/// Radio resources, user placement, and the semantic configuration.
///
/// All quantities are linear SI: Hz, W, W/Hz, meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioFile", into = "ScenarioFile")]
pub struct Scenario {
    /// Total bandwidth `W` (Hz).
    pub total_bandwidth: f64,
    /// Power budget `P` (W).
    pub max_power: f64,
    /// Noise power spectral density `N0` (W/Hz).
    pub noise_psd: f64,
    /// Semantic symbols per word.
    pub k: u32,
    /// Minimum semantic similarity.
    pub min_similarity: f64,
    /// AP to S-user distance (m).
    pub d_s: f64,
    /// AP to B-user distance (m).
    pub d_b: f64,
    /// Path-loss gain at 1 m (linear).
    pub pathloss_ref: f64,
    pub pathloss_exp: f64,
    pub params: ParamTable,
}

impl Default for Scenario {
    /// W = 1 MHz, N0 = -140 dBm/Hz, rho0 = -30 dB, beta = 4, P = 30 dBm,
    /// d_s = 20 m, d_b = 30 m, K = 4, min similarity 0.8.
    fn default() -> Self {
        Scenario {
            total_bandwidth: 1e6,
            max_power: 1.0,
            noise_psd: 1e-17,
            k: 4,
            min_similarity: 0.8,
            d_s: 20.0,
            d_b: 30.0,
            pathloss_ref: 1e-3,
            pathloss_exp: 4.0,
            params: ParamTable::synthetic_illustrative(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerUnits {
    /// `max_power` in W and `noise_psd` in W/Hz.
    #[default]
    #[serde(rename = "linear", alias = "W")]
    Linear,
    /// `max_power` in dBm and `noise_psd` in dBm/Hz.
    #[serde(rename = "dBm", alias = "dbm")]
    Dbm,
}

/// On-disk scenario. Missing fields take [`Scenario::default`] values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub units: PowerUnits,
    pub total_bandwidth: Option<f64>,
    pub max_power: Option<f64>,
    pub noise_psd: Option<f64>,
    pub k: Option<u32>,
    pub min_similarity: Option<f64>,
    pub d_s: Option<f64>,
    pub d_b: Option<f64>,
    pub pathloss_ref: Option<f64>,
    pub pathloss_exp: Option<f64>,
    pub params: Option<ParamTable>,
}

impl TryFrom<ScenarioFile> for Scenario {
    type Error = Error;

    fn try_from(f: ScenarioFile) -> Result<Self> {
        let d = Scenario::default();
        let dbm_to_w = |dbm: f64| 1e-3 * 10f64.powf(dbm / 10.0);
        let (max_power, noise_psd) = match f.units {
            PowerUnits::Linear => (f.max_power.unwrap_or(d.max_power), f.noise_psd.unwrap_or(d.noise_psd)),
            PowerUnits::Dbm => (
                f.max_power.map(dbm_to_w).unwrap_or(d.max_power),
                f.noise_psd.map(dbm_to_w).unwrap_or(d.noise_psd),
            ),
        };
        let s = Scenario {
            total_bandwidth: f.total_bandwidth.unwrap_or(d.total_bandwidth),
            max_power,
            noise_psd,
            k: f.k.unwrap_or(d.k),
            min_similarity: f.min_similarity.unwrap_or(d.min_similarity),
            d_s: f.d_s.unwrap_or(d.d_s),
            d_b: f.d_b.unwrap_or(d.d_b),
            pathloss_ref: f.pathloss_ref.unwrap_or(d.pathloss_ref),
            pathloss_exp: f.pathloss_exp.unwrap_or(d.pathloss_exp),
            params: f.params.unwrap_or(d.params),
        };
        s.validate()?;
        Ok(s)
    }
}

impl From<Scenario> for ScenarioFile {
    fn from(s: Scenario) -> Self {
        ScenarioFile::from(&s)
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        ScenarioFile {
            units: PowerUnits::Linear,
            total_bandwidth: Some(s.total_bandwidth),
            max_power: Some(s.max_power),
            noise_psd: Some(s.noise_psd),
            k: Some(s.k),
            min_similarity: Some(s.min_similarity),
            d_s: Some(s.d_s),
            d_b: Some(s.d_b),
            pathloss_ref: Some(s.pathloss_ref),
            pathloss_exp: Some(s.pathloss_exp),
            params: Some(s.params.clone()),
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("total_bandwidth", self.total_bandwidth),
            ("max_power", self.max_power),
            ("noise_psd", self.noise_psd),
            ("pathloss_ref", self.pathloss_ref),
            ("pathloss_exp", self.pathloss_exp),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")));
            }
        }
        for (name, d) in [("d_s", self.d_s), ("d_b", self.d_b)] {
            if !(d.is_finite() && d >= 1.0) {
                return Err(Error::InvalidInput(format!("{name} must be at least 1 m, got {d}")));
            }
        }
        if !(0.0..1.0).contains(&self.min_similarity) {
            return Err(Error::InvalidInput(format!("min_similarity must lie in [0, 1), got {}", self.min_similarity)));
        }
        self.params.get(self.k)?;
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(json).map_err(|e| Error::json("scenario", e))?;
        Scenario::try_from(file)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Scenario::from_json(&text)
    }

    /// Canonical JSON (linear units, every field present).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScenarioFile::from(self)).expect("scenario serializes")
    }

    /// Logistic parameters for this scenario's `K`.
    pub fn logistic(&self) -> &LogisticParams {
        self.params.get(self.k).expect("validated scenario has params for its K")
    }

    pub fn with_k(&self, k: u32) -> Result<Self> {
        let s = Scenario { k, ..self.clone() };
        s.validate()?;
        Ok(s)
    }

    /// Noise power over the full band.
    pub fn noise_power(&self) -> f64 {
        self.total_bandwidth * self.noise_psd
    }

    /// Realization with unit fading on both links (path loss only).
    pub fn mean_channel(&self) -> ChannelRealization {
        let g_s = path_loss(self.d_s, self.pathloss_ref, self.pathloss_exp).expect("validated distance");
        let g_b = path_loss(self.d_b, self.pathloss_ref, self.pathloss_exp).expect("validated distance");
        ChannelRealization::new(g_s, g_b)
    }
}

/// Linear power gains of one channel draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    /// S-user gain `|h_s|^2`.
    pub g_s: f64,
    /// B-user gain `|h_b|^2`.
    pub g_b: f64,
    /// Gain governing a bit stream both users must decode, `min(g_s, g_b)`.
    pub g_eff: f64,
}

impl ChannelRealization {
    pub fn new(g_s: f64, g_b: f64) -> Self {
        ChannelRealization { g_s, g_b, g_eff: g_s.min(g_b) }
    }
}

/// `pathloss_ref * d^-pathloss_exp`.
pub fn path_loss(d: f64, pathloss_ref: f64, pathloss_exp: f64) -> Result<f64> {
    if !(d >= 1.0) {
        return Err(Error::DistanceBelowReference(d));
    }
    Ok(pathloss_ref * d.powf(-pathloss_exp))
}

/// Deterministic generator for fading stream `stream` under `seed`.
///
/// ChaCha8 is counter based: each (seed, stream) pair is an independent
/// sequence, so realization `i` of a sweep does not depend on which thread
/// or in which order it is drawn.
pub fn fading_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Unit-mean exponential variate by inverse CDF.
#[inline]
pub fn exponential_draw<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    -(-u).ln_1p()
}

/// Channel draw for realization `index` of the ensemble seeded by `base_seed`.
pub fn sample_realization_at(scenario: &Scenario, base_seed: u64, index: u64) -> ChannelRealization {
    let mean = scenario.mean_channel();
    let mut rng = fading_rng(base_seed, index);
    let e_s = exponential_draw(&mut rng);
    let e_b = exponential_draw(&mut rng);
    ChannelRealization::new(mean.g_s * e_s, mean.g_b * e_b)
}

/// Independent Rayleigh draws on both links: `g = path_loss(d) * e` with
/// `e ~ Exp(1)`. Same seed, same output.
pub fn sample_realization(scenario: &Scenario, seed: u64) -> ChannelRealization {
    sample_realization_at(scenario, seed, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_loss_values() {
        assert_eq!(path_loss(1.0, 1e-3, 4.0).unwrap(), 1e-3);
        assert!((path_loss(10.0, 1e-3, 4.0).unwrap() - 1e-7).abs() < 1e-22);
        assert!((path_loss(20.0, 1e-3, 4.0).unwrap() - 6.25e-9).abs() < 1e-23);
        assert!(matches!(path_loss(0.5, 1e-3, 4.0), Err(Error::DistanceBelowReference(_))));
    }

    #[test]
    fn effective_gain_is_min() {
        let r = ChannelRealization::new(2e-9, 3e-9);
        assert_eq!(r.g_eff, 2e-9);
    }

    #[test]
    fn same_seed_same_draw() {
        let s = Scenario::default();
        assert_eq!(sample_realization(&s, 42), sample_realization(&s, 42));
        assert_ne!(sample_realization(&s, 42), sample_realization(&s, 43));
        assert_ne!(sample_realization_at(&s, 42, 1), sample_realization_at(&s, 42, 2));
    }

    #[test]
    fn exponential_mean_law_of_large_numbers() {
        let mut rng = fading_rng(5, 0);
        let n = 1_000_000;
        let mean = (0..n).map(|_| exponential_draw(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.005, "{mean}");
    }

    #[test]
    fn exponential_ks_statistic() {
        let mut rng = fading_rng(11, 3);
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n).map(|_| exponential_draw(&mut rng)).collect();
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let cdf = 1.0 - (-x).exp();
                (cdf - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - cdf).abs())
            })
            .fold(0.0, f64::max);
        assert!(d < 0.01, "KS statistic {d}");
    }

    #[test]
    fn scenario_file_dbm_conversion() {
        let s = Scenario::from_json(r#"{"units":"dBm","max_power":30,"noise_psd":-140,"d_s":30}"#).unwrap();
        assert!((s.max_power - 1.0).abs() < 1e-12);
        assert!((s.noise_psd - 1e-17).abs() < 1e-29);
        assert_eq!(s.d_s, 30.0);
        assert_eq!(s.k, 4);
    }

    #[test]
    fn scenario_validation() {
        assert!(Scenario::from_json(r#"{"k":9}"#).is_err());
        assert!(Scenario::from_json(r#"{"d_b":0.5}"#).is_err());
        assert!(Scenario::from_json(r#"{"min_similarity":1.0}"#).is_err());
        assert!(Scenario::from_json(r#"{"bogus":1.0}"#).is_err());
        let s = Scenario::default();
        let back = Scenario::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
