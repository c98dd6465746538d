//! Semantic-versus-bit (SvB) rate and power regions for heterogeneous
//! semantic and bit downlink transmission.
//!
//! An access point serves one semantics-interested user (S-user) and one
//! bit-interested user (B-user) with one of three multiple-access schemes:
//!
//! - **OMA**: the two streams use disjoint sub-bands.
//! - **NOMA**: both streams share the full band; the bit stream is decoded
//!   first at both receivers (SIC), so its rate is set by the weaker channel.
//! - **Semi-NOMA**: the bit stream is split between a sub-band shared with the
//!   semantic stream and an orthogonal bit-only sub-band.
//!
//! Semantic similarity is modeled per encoding level `K` by a generalized
//! logistic function of the received SNR in dB ([`similarity`]). Semantic
//! rates are reported normalized by `I/L`, i.e. `sigma = (W/K) * similarity`.
//!
//! The crate is organized bottom-up:
//!
//! | module | contents |
//! |---|---|
//! | [`similarity`] | logistic model, inversion, MMSE fitting, required power |
//! | [`channel`] | scenario, path loss, seeded Rayleigh fading |
//! | [`rates`] | closed-form rates for a given allocation |
//! | [`boundary`] | SvB rate-region frontiers and containment checks |
//! | [`power`] | minimum-power solvers (power region) |
//! | [`montecarlo`] | seeded ensemble sweeps |
//! | [`io`] | CSV/JSON export and run manifests |
//! | [`cli`] | the `svb` command-line front end |
//!
//! ```
//! use svb::channel::{sample_realization, Scenario};
//! use svb::power::{noma_min_power, semi_min_power, PowerTargets};
//! use svb::search::GridSpec;
//!
//! let scenario = Scenario::default();
//! let channel = sample_realization(&scenario, 7);
//! let targets = PowerTargets::new(0.12e6, 0.8, 0.8e6).unwrap();
//! let semi = semi_min_power(&scenario, &channel, &targets, &GridSpec::with_grid_n(256)).unwrap();
//! let noma = noma_min_power(&scenario, &channel, &targets).unwrap();
//! assert!(semi.min_power <= noma.min_power + 1e-9);
//! ```

pub mod boundary;
pub mod channel;
pub mod cli;
pub mod io;
pub mod montecarlo;
pub mod power;
pub mod rates;
pub mod search;
pub mod similarity;

mod error;

pub use error::{Error, Result};

/// Multiple-access scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Oma,
    Noma,
    Semi,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Oma, Scheme::Noma, Scheme::Semi];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Oma => "oma",
            Scheme::Noma => "noma",
            Scheme::Semi => "semi",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oma" => Ok(Scheme::Oma),
            "noma" => Ok(Scheme::Noma),
            "semi" | "semi-noma" | "semi_noma" => Ok(Scheme::Semi),
            other => Err(Error::InvalidInput(format!("unknown scheme `{other}`"))),
        }
    }
}

/// `log2(1 + x)` without cancellation for small `x`.
#[inline]
pub(crate) fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

/// Shannon rate `bandwidth * log2(1 + snr)`, defined as 0 on a zero-width band.
#[inline]
pub(crate) fn shannon_rate(bandwidth: f64, snr: f64) -> f64 {
    if bandwidth <= 0.0 {
        0.0
    } else {
        bandwidth * log2_1p(snr)
    }
}

/// `2^x - 1` without cancellation for small `x`.
#[inline]
pub(crate) fn exp2_m1(x: f64) -> f64 {
    (x * std::f64::consts::LN_2).exp_m1()
}

#[inline]
pub(crate) fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub(crate) fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
