//! Generalized logistic model of semantic similarity versus received SNR.
//!
//! For one encoding level `K` (semantic symbols per word) the similarity is
//!
//! ```text
//! eps(gamma_db) = a_low + (a_high - a_low) / (1 + exp(-(growth * gamma_db + offset)))
//! ```
//!
//! with the SNR argument in dB. Conversion to linear SNR happens only in the
//! `required_power_*` helpers, which turn a similarity (or normalized
//! semantic-rate) requirement into the minimum transmit power on a link.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{db_to_linear, Error};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimilarityError {
    /// The target is at or below the lower asymptote; zero power suffices.
    #[error("target similarity {target} is at or below the floor {a_low}")]
    TargetBelowFloor { target: f64, a_low: f64 },
    /// The target is at or above the upper asymptote; no power suffices.
    #[error("target similarity {target} is not below the ceiling {a_high}")]
    TargetUnreachable { target: f64, a_high: f64 },
    /// The normalized semantic-rate target maps to a similarity at or above the ceiling.
    #[error("semantic-rate target {sigma} needs similarity {needed} but the ceiling is {a_high}")]
    RateUnreachable { sigma: f64, needed: f64, a_high: f64 },
    #[error("fit needs at least 4 distinct SNR values, got {0}")]
    InsufficientData(usize),
    #[error("all similarity samples are equal; growth is not identifiable")]
    DegenerateData,
    #[error("invalid logistic parameters: {0}")]
    InvalidParams(String),
}

/// Fitted logistic parameters for one encoding level `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct LogisticParams {
    pub k: u32,
    pub a_low: f64,
    pub a_high: f64,
    pub growth: f64,
    pub offset: f64,
}

#[derive(Deserialize)]
struct RawParams {
    k: u32,
    a_low: f64,
    a_high: f64,
    growth: f64,
    offset: f64,
}

impl TryFrom<RawParams> for LogisticParams {
    type Error = SimilarityError;

    fn try_from(r: RawParams) -> Result<Self, Self::Error> {
        LogisticParams::new(r.k, r.a_low, r.a_high, r.growth, r.offset)
    }
}

impl LogisticParams {
    pub fn new(k: u32, a_low: f64, a_high: f64, growth: f64, offset: f64) -> Result<Self, SimilarityError> {
        let p = LogisticParams { k, a_low, a_high, growth, offset };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SimilarityError> {
        let bad = |m: String| Err(SimilarityError::InvalidParams(m));
        if self.k == 0 {
            return bad("k must be positive".into());
        }
        if ![self.a_low, self.a_high, self.growth, self.offset].iter().all(|v| v.is_finite()) {
            return bad(format!("non-finite parameter for K = {}", self.k));
        }
        if !(0.0 <= self.a_low && self.a_low < self.a_high && self.a_high <= 1.0) {
            return bad(format!(
                "need 0 <= a_low < a_high <= 1, got a_low = {}, a_high = {} (K = {})",
                self.a_low, self.a_high, self.k
            ));
        }
        if self.growth <= 0.0 {
            return bad(format!("growth must be positive, got {} (K = {})", self.growth, self.k));
        }
        Ok(())
    }

    /// Similarity at the given received SNR (dB).
    #[inline]
    pub fn eval(&self, snr_db: f64) -> f64 {
        let z = self.growth * snr_db + self.offset;
        self.a_low + (self.a_high - self.a_low) / (1.0 + (-z).exp())
    }

    /// SNR (dB) at which the model reaches `target`.
    pub fn invert(&self, target: f64) -> Result<f64, SimilarityError> {
        if target <= self.a_low {
            return Err(SimilarityError::TargetBelowFloor { target, a_low: self.a_low });
        }
        if target >= self.a_high {
            return Err(SimilarityError::TargetUnreachable { target, a_high: self.a_high });
        }
        // ln((a_high - a_low)/(t - a_low) - 1) == ln(a_high - t) - ln(t - a_low)
        let log_ratio = (self.a_high - target).ln() - (target - self.a_low).ln();
        Ok((-self.offset - log_ratio) / self.growth)
    }

    /// SNR (dB) of the logistic mid-point.
    pub fn midpoint_db(&self) -> f64 {
        -self.offset / self.growth
    }
}

/// `eps(K, gamma)` sample, e.g. from running a semantic transceiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilaritySample {
    pub k: u32,
    pub snr_db: f64,
    pub similarity: f64,
}

/// Logistic parameters keyed by `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableFile", into = "TableFile")]
pub struct ParamTable {
    entries: BTreeMap<u32, LogisticParams>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    entries: Vec<LogisticParams>,
}

impl TryFrom<TableFile> for ParamTable {
    type Error = Error;

    fn try_from(f: TableFile) -> Result<Self, Error> {
        ParamTable::from_entries(f.entries)
    }
}

impl From<ParamTable> for TableFile {
    fn from(t: ParamTable) -> Self {
        TableFile { entries: t.entries.into_values().collect() }
    }
}

/// Illustrative curves; NOT fitted to any measured transceiver data.
///
/// Shape follows the qualitative behaviour of measured text-similarity
/// curves: S-shaped in dB, upper asymptote growing and saturating with `K`,
/// and larger `K` reaching a given similarity at lower SNR.
const SYNTHETIC_ILLUSTRATIVE: [(u32, f64, f64, f64, f64); 8] = [
    (3, 0.20, 0.900, 0.40, -1.60),
    (4, 0.22, 0.920, 0.42, -1.05),
    (5, 0.24, 0.935, 0.44, -0.66),
    (6, 0.25, 0.945, 0.45, -0.36),
    (7, 0.26, 0.950, 0.46, -0.138),
    (8, 0.27, 0.955, 0.47, 0.0),
    (10, 0.28, 0.960, 0.48, 0.24),
    (20, 0.30, 0.965, 0.50, 0.75),
];

impl ParamTable {
    pub fn from_entries(entries: impl IntoIterator<Item = LogisticParams>) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for p in entries {
            p.validate()?;
            if map.insert(p.k, p).is_some() {
                return Err(Error::InvalidInput(format!("duplicate parameter entry for K = {}", p.k)));
            }
        }
        Ok(ParamTable { entries: map })
    }

    /// The bundled SYNTHETIC-ILLUSTRATIVE table, one entry per
    /// `K` in {3, 4, 5, 6, 7, 8, 10, 20}.
    pub fn synthetic_illustrative() -> Self {
        let entries = SYNTHETIC_ILLUSTRATIVE
            .iter()
            .map(|&(k, a_low, a_high, growth, offset)| LogisticParams { k, a_low, a_high, growth, offset });
        ParamTable::from_entries(entries).expect("bundled table is valid")
    }

    pub fn get(&self, k: u32) -> Result<&LogisticParams, Error> {
        self.entries.get(&k).ok_or(Error::MissingParams(k))
    }

    pub fn contains(&self, k: u32) -> bool {
        self.entries.contains_key(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LogisticParams> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, params: LogisticParams) -> Result<Option<LogisticParams>, SimilarityError> {
        params.validate()?;
        Ok(self.entries.insert(params.k, params))
    }
}

impl Default for ParamTable {
    fn default() -> Self {
        ParamTable::synthetic_illustrative()
    }
}

/// Minimum transmit power (W) for which a link of the given bandwidth,
/// power gain and noise PSD reaches `target` similarity.
///
/// Returns 0 when the target is at or below the floor `a_low`.
pub fn required_power_for_similarity(
    params: &LogisticParams,
    target: f64,
    bandwidth: f64,
    channel_gain: f64,
    noise_psd: f64,
) -> Result<f64, Error> {
    check_link(bandwidth, channel_gain, noise_psd)?;
    match params.invert(target) {
        Ok(snr_db) => Ok(bandwidth * noise_psd / channel_gain * db_to_linear(snr_db)),
        Err(SimilarityError::TargetBelowFloor { .. }) => Ok(0.0),
        Err(e) => Err(e.into()),
    }
}

/// Minimum transmit power (W) for a normalized semantic rate
/// `sigma = (bandwidth / K) * similarity` on the given link.
pub fn required_power_for_semantic_rate(
    params: &LogisticParams,
    target_norm_rate: f64,
    bandwidth: f64,
    channel_gain: f64,
    noise_psd: f64,
) -> Result<f64, Error> {
    check_link(bandwidth, channel_gain, noise_psd)?;
    if !(target_norm_rate >= 0.0) {
        return Err(Error::InvalidInput(format!("negative semantic-rate target {target_norm_rate}")));
    }
    if target_norm_rate == 0.0 {
        return Ok(0.0);
    }
    let needed = target_norm_rate * params.k as f64 / bandwidth;
    if needed >= params.a_high {
        return Err(SimilarityError::RateUnreachable { sigma: target_norm_rate, needed, a_high: params.a_high }.into());
    }
    required_power_for_similarity(params, needed, bandwidth, channel_gain, noise_psd)
}

fn check_link(bandwidth: f64, channel_gain: f64, noise_psd: f64) -> Result<(), Error> {
    if bandwidth > 0.0 && channel_gain > 0.0 && noise_psd > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "link needs positive bandwidth, gain and noise PSD (got {bandwidth}, {channel_gain}, {noise_psd})"
        )))
    }
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

/// Coarse-grid resolution and ranges for the initialization search.
pub const GROWTH_GRID: (f64, f64, usize) = (0.05, 2.0, 32);
pub const OFFSET_GRID: (f64, f64, usize) = (-10.0, 10.0, 64);
const MAX_REFINE_ITERS: usize = 500;
const REL_IMPROVEMENT_STOP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticFit {
    pub params: LogisticParams,
    /// Mean squared error of the returned parameters.
    pub mse: f64,
    /// Mean squared error of the best grid-initialization candidate.
    pub grid_mse: f64,
    pub iterations: usize,
}

/// MMSE fit of the generalized logistic to samples of a single `K`.
///
/// A coarse grid over (growth, offset) is scanned with the asymptotes solved
/// in closed form (box-constrained least squares) per cell; the best cell is
/// then refined by coordinate descent with golden-section line searches.
pub fn fit_logistic(samples: &[SimilaritySample]) -> Result<LogisticFit, Error> {
    let k = match samples.first() {
        Some(s) => s.k,
        None => return Err(SimilarityError::InsufficientData(0).into()),
    };
    if samples.iter().any(|s| s.k != k) {
        return Err(Error::InvalidInput("fit_logistic expects samples of a single K".into()));
    }
    for s in samples {
        if !s.snr_db.is_finite() || !(0.0..=1.0).contains(&s.similarity) {
            return Err(Error::InvalidInput(format!(
                "sample (snr_db = {}, similarity = {}) out of range",
                s.snr_db, s.similarity
            )));
        }
    }
    let mut xs: Vec<f64> = samples.iter().map(|s| s.snr_db).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 4 {
        return Err(SimilarityError::InsufficientData(xs.len()).into());
    }
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.similarity), hi.max(s.similarity)));
    if hi - lo <= 1e-12 {
        return Err(SimilarityError::DegenerateData.into());
    }

    let problem = FitProblem {
        x: samples.iter().map(|s| s.snr_db).collect(),
        y: samples.iter().map(|s| s.similarity).collect(),
    };

    let (g_lo, g_hi, g_n) = GROWTH_GRID;
    let (o_lo, o_hi, o_n) = OFFSET_GRID;
    let g_step = (g_hi - g_lo) / (g_n - 1) as f64;
    let o_step = (o_hi - o_lo) / (o_n - 1) as f64;

    let mut best = (f64::INFINITY, g_lo, o_lo);
    for i in 0..g_n {
        let g = g_lo + g_step * i as f64;
        for j in 0..o_n {
            let o = o_lo + o_step * j as f64;
            let mse = problem.profile_mse(g, o);
            if mse < best.0 {
                best = (mse, g, o);
            }
        }
    }
    let grid_mse = best.0;
    let (mut f, mut g, mut o) = best;
    let (mut dg, mut dof) = (g_step, o_step);

    let mut iterations = 0;
    while iterations < MAX_REFINE_ITERS && f > 0.0 {
        iterations += 1;
        let f_prev = f;

        let (g_new, f_g) = golden_min(|v| problem.profile_mse(v, o), (g - dg).max(1e-9), g + dg);
        if f_g < f {
            dg = (4.0 * (g_new - g).abs()).max(1e-12);
            g = g_new;
            f = f_g;
        } else {
            dg = (dg * 0.5).max(1e-12);
        }

        let (o_new, f_o) = golden_min(|v| problem.profile_mse(g, v), o - dof, o + dof);
        if f_o < f {
            dof = (4.0 * (o_new - o).abs()).max(1e-12);
            o = o_new;
            f = f_o;
        } else {
            dof = (dof * 0.5).max(1e-12);
        }

        if (f_prev - f) <= REL_IMPROVEMENT_STOP * f_prev && dg < 1e-9 && dof < 1e-9 {
            break;
        }
    }

    let (a_low, a_high, _) = problem.asymptotes(g, o);
    let params = LogisticParams::new(k, a_low, a_high, g, o)?;
    Ok(LogisticFit { params, mse: problem.mse(&params), grid_mse, iterations })
}

struct FitProblem {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl FitProblem {
    fn mse(&self, p: &LogisticParams) -> f64 {
        let n = self.x.len() as f64;
        self.x.iter().zip(&self.y).map(|(&x, &y)| (p.eval(x) - y).powi(2)).sum::<f64>() / n
    }

    fn profile_mse(&self, growth: f64, offset: f64) -> f64 {
        self.asymptotes(growth, offset).2
    }

    /// Least-squares asymptotes for fixed (growth, offset), constrained to
    /// `0 <= a_low < a_high <= 1`. Returns `(a_low, a_high, mse)`.
    fn asymptotes(&self, growth: f64, offset: f64) -> (f64, f64, f64) {
        // y ~ a_low * u + a_high * v with v the logistic basis, u = 1 - v.
        let (mut suu, mut suv, mut svv, mut suy, mut svy, mut sy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let n = self.x.len() as f64;
        for (&x, &y) in self.x.iter().zip(&self.y) {
            let v = 1.0 / (1.0 + (-(growth * x + offset)).exp());
            let u = 1.0 - v;
            suu += u * u;
            suv += u * v;
            svv += v * v;
            suy += u * y;
            svy += v * y;
            sy += y;
        }
        let syy: f64 = self.y.iter().map(|y| y * y).sum();
        let sse = |a: f64, b: f64| {
            (a * a * suu + 2.0 * a * b * suv + b * b * svv - 2.0 * a * suy - 2.0 * b * svy + syy).max(0.0)
        };

        let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(4);
        let det = suu * svv - suv * suv;
        if det > 1e-12 * (suu * svv).max(1e-300) {
            let a = (suy * svv - svy * suv) / det;
            let b = (svy * suu - suy * suv) / det;
            if 0.0 <= a && a <= b && b <= 1.0 {
                candidates.push((a, b));
            }
        }
        // edges of the feasible triangle 0 <= a_low <= a_high <= 1
        if svv > 0.0 {
            candidates.push((0.0, (svy / svv).clamp(0.0, 1.0)));
        }
        if suu > 0.0 {
            candidates.push((((suy - suv) / suu).clamp(0.0, 1.0), 1.0));
        }
        let c = (sy / n).clamp(0.0, 1.0);
        candidates.push((c, c));

        let (mut a, mut b) = candidates
            .into_iter()
            .min_by(|p, q| sse(p.0, p.1).total_cmp(&sse(q.0, q.1)))
            .expect("at least one candidate");
        a = a.min(1.0 - 1e-9);
        if b - a < 1e-9 {
            b = (a + 1e-9).min(1.0);
            a = b - 1e-9;
        }
        (a, b, sse(a, b) / n)
    }
}

/// Golden-section minimization on `[lo, hi]`; returns the best evaluated point.
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc < fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> LogisticParams {
        LogisticParams::new(4, 0.2, 0.9, 0.5, 0.0).unwrap()
    }

    #[test]
    fn eval_matches_scripted_value() {
        // 0.2 + 0.7 / (1 + e^-1), computed independently
        assert!((toy().eval(2.0) - 0.711_741_005_041_003_3).abs() < 1e-15);
    }

    #[test]
    fn eval_midpoint_and_asymptote() {
        let p = LogisticParams::new(5, 0.1, 0.95, 0.4, -1.0).unwrap();
        assert!((p.eval(p.midpoint_db()) - 0.525).abs() < 1e-15);
        assert!((p.eval(1e4) - p.a_high).abs() < 1e-9);
        assert!((p.eval(-1e4) - p.a_low).abs() < 1e-9);
    }

    #[test]
    fn invert_midpoint_and_errors() {
        let p = LogisticParams::new(5, 0.1, 0.95, 0.4, -1.0).unwrap();
        assert!((p.invert(0.525).unwrap() - 2.5).abs() < 1e-12);
        assert!(matches!(p.invert(0.95), Err(SimilarityError::TargetUnreachable { .. })));
        assert!(matches!(p.invert(0.1), Err(SimilarityError::TargetBelowFloor { .. })));
        assert!(matches!(p.invert(0.05), Err(SimilarityError::TargetBelowFloor { .. })));
    }

    #[test]
    fn params_validation() {
        assert!(LogisticParams::new(4, 0.5, 0.5, 0.3, 0.0).is_err());
        assert!(LogisticParams::new(4, -0.1, 0.5, 0.3, 0.0).is_err());
        assert!(LogisticParams::new(4, 0.1, 1.1, 0.3, 0.0).is_err());
        assert!(LogisticParams::new(4, 0.1, 0.9, 0.0, 0.0).is_err());
        assert!(LogisticParams::new(0, 0.1, 0.9, 0.3, 0.0).is_err());
        assert!(LogisticParams::new(4, 0.0, 1.0, 0.3, 0.0).is_ok());
    }

    #[test]
    fn required_power_midpoint_unit_budget() {
        let p = toy();
        // bandwidth * noise / gain == 1
        let got = required_power_for_similarity(&p, 0.55, 1.0, 1.0, 1.0).unwrap();
        assert!((got - 10f64.powf(p.midpoint_db() / 10.0)).abs() < 1e-15);
        assert_eq!(required_power_for_similarity(&p, 0.2, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(required_power_for_similarity(&p, 0.1, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(required_power_for_similarity(&p, 0.9, 1.0, 1.0, 1.0).is_err());
        assert!(required_power_for_similarity(&p, 0.5, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn required_power_for_rate_cases() {
        let p = LogisticParams::new(4, 0.1, 0.9, 0.5, -1.0).unwrap();
        let bw = 2.0;
        assert_eq!(required_power_for_semantic_rate(&p, 0.0, bw, 1.0, 0.5).unwrap(), 0.0);
        let mid_rate = bw * (p.a_low + p.a_high) / (2.0 * p.k as f64);
        let got = required_power_for_semantic_rate(&p, mid_rate, bw, 1.0, 0.5).unwrap();
        assert!((got - 10f64.powf(p.midpoint_db() / 10.0)).abs() < 1e-12);
        let ceiling = bw * p.a_high / p.k as f64;
        assert!(matches!(
            required_power_for_semantic_rate(&p, ceiling, bw, 1.0, 0.5),
            Err(Error::Similarity(SimilarityError::RateUnreachable { .. }))
        ));
    }

    #[test]
    fn required_power_is_linear_in_link_budget() {
        let p = toy();
        let base = required_power_for_similarity(&p, 0.7, 1e6, 1e-9, 1e-17).unwrap();
        let scaled = required_power_for_similarity(&p, 0.7, 2e6, 0.5e-9, 1e-17).unwrap();
        assert!((scaled / base - 4.0).abs() < 1e-12);
    }

    fn synthetic_samples(p: &LogisticParams) -> Vec<SimilaritySample> {
        (-10..=20).map(|x| SimilaritySample { k: p.k, snr_db: x as f64, similarity: p.eval(x as f64) }).collect()
    }

    #[test]
    fn fit_recovers_noiseless_parameters() {
        let truth = LogisticParams::new(4, 0.1, 0.95, 0.4, -1.0).unwrap();
        let fit = fit_logistic(&synthetic_samples(&truth)).unwrap();
        let p = fit.params;
        for (got, want) in [(p.a_low, 0.1), (p.a_high, 0.95), (p.growth, 0.4), (p.offset, -1.0)] {
            assert!((got - want).abs() < 1e-2, "{p:?}");
        }
        assert!(fit.mse <= fit.grid_mse);
    }

    #[test]
    fn fit_rejects_flat_and_short_data() {
        let flat: Vec<_> = (0..10).map(|i| SimilaritySample { k: 3, snr_db: i as f64, similarity: 0.5 }).collect();
        assert!(matches!(fit_logistic(&flat), Err(Error::Similarity(SimilarityError::DegenerateData))));
        let short: Vec<_> = (0..3).map(|i| SimilaritySample { k: 3, snr_db: i as f64, similarity: 0.1 * i as f64 }).collect();
        assert!(matches!(fit_logistic(&short), Err(Error::Similarity(SimilarityError::InsufficientData(3)))));
        // repeated abscissae do not count
        let repeated: Vec<_> =
            (0..12).map(|i| SimilaritySample { k: 3, snr_db: (i % 3) as f64, similarity: 0.1 * i as f64 / 2.0 }).collect();
        assert!(matches!(fit_logistic(&repeated), Err(Error::Similarity(SimilarityError::InsufficientData(3)))));
    }

    #[test]
    fn fit_clamps_asymptotes_to_unit_interval() {
        // data that would prefer a_high > 1 and a_low < 0
        let samples: Vec<_> = (-10..=20)
            .map(|x| {
                let x = x as f64;
                SimilaritySample { k: 6, snr_db: x, similarity: (-0.2 + 1.4 / (1.0 + (-(0.3 * x)).exp())).clamp(0.0, 1.0) }
            })
            .collect();
        let fit = fit_logistic(&samples).unwrap();
        assert!(fit.params.a_low >= 0.0 && fit.params.a_high <= 1.0);
        assert!(fit.params.a_low < fit.params.a_high);
    }

    #[test]
    fn bundled_table_shape() {
        let t = ParamTable::synthetic_illustrative();
        let ks: Vec<u32> = t.iter().map(|p| p.k).collect();
        assert_eq!(ks, vec![3, 4, 5, 6, 7, 8, 10, 20]);
        // larger K reaches a similarity of 0.6 at lower SNR
        let snr: Vec<f64> = t.iter().map(|p| p.invert(0.6).unwrap()).collect();
        assert!(snr.windows(2).all(|w| w[1] < w[0]), "{snr:?}");
    }

    #[test]
    fn table_json_round_trip_and_duplicates() {
        let t = ParamTable::synthetic_illustrative();
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.starts_with("{\"entries\":[{\"k\":3,"));
        let back: ParamTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let dup = r#"{"entries":[{"k":4,"a_low":0.1,"a_high":0.9,"growth":0.4,"offset":0},
                                 {"k":4,"a_low":0.1,"a_high":0.9,"growth":0.4,"offset":0}]}"#;
        assert!(serde_json::from_str::<ParamTable>(dup).is_err());
        let invalid = r#"{"entries":[{"k":4,"a_low":0.9,"a_high":0.1,"growth":0.4,"offset":0}]}"#;
        assert!(serde_json::from_str::<ParamTable>(invalid).is_err());
    }
}
