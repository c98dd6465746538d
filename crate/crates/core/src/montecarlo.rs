//! Seeded Monte-Carlo sweeps of the minimum transmit power.
//!
//! Realization `i` of every sweep value is drawn from stream `i` of
//! `base_seed`, so a given spec yields bit-identical output regardless of
//! thread count. Infeasible realizations are left out of the mean and
//! counted in `infeasible_frac`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{sample_realization_at, Scenario};
use crate::power::{min_power, PowerTargets};
use crate::search::GridSpec;
use crate::{Error, Result, Scheme};

pub const DEFAULT_REALIZATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptVariable {
    SigmaTarget,
    MinSimilarity,
    K,
    BitTarget,
    MaxPower,
}

impl SweptVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweptVariable::SigmaTarget => "sigma_target",
            SweptVariable::MinSimilarity => "min_similarity",
            SweptVariable::K => "k",
            SweptVariable::BitTarget => "bit_target",
            SweptVariable::MaxPower => "max_power",
        }
    }
}

fn default_realizations() -> usize {
    DEFAULT_REALIZATIONS
}

fn default_schemes() -> Vec<Scheme> {
    Scheme::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub scenario: Scenario,
    /// Targets held fixed except for the swept one.
    pub targets: PowerTargets,
    pub variable: SweptVariable,
    pub values: Vec<f64>,
    #[serde(default = "default_realizations")]
    pub n_realizations: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<Scheme>,
    /// Count realizations whose minimum power exceeds `max_power` as
    /// infeasible.
    #[serde(default)]
    pub enforce_budget: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_realizations == 0 {
            return Err(Error::InvalidInput("n_realizations must be at least 1".into()));
        }
        if self.values.is_empty() {
            return Err(Error::InvalidInput("sweep needs at least one value".into()));
        }
        if self.values.windows(2).any(|w| !(w[1] > w[0])) || self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("sweep values must be finite and strictly increasing".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidInput("no schemes selected".into()));
        }
        if self.grid.grid_n == 0 || !(self.grid.zoom > 1.0) {
            return Err(Error::InvalidInput("grid_n must be positive and zoom > 1".into()));
        }
        for &v in &self.values {
            self.cell_inputs(v)?;
        }
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(json).map_err(|e| Error::json("sweep spec", e))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_json(&text)
    }

    /// Scenario and targets for one sweep value.
    pub fn cell_inputs(&self, value: f64) -> Result<(Scenario, PowerTargets)> {
        let t = self.targets;
        let (scenario, targets) = match self.variable {
            SweptVariable::SigmaTarget => (self.scenario.clone(), PowerTargets::new(value, t.min_similarity, t.bit_target)?),
            SweptVariable::MinSimilarity => (self.scenario.clone(), PowerTargets::new(t.sigma_target, value, t.bit_target)?),
            SweptVariable::BitTarget => (self.scenario.clone(), PowerTargets::new(t.sigma_target, t.min_similarity, value)?),
            SweptVariable::K => {
                if value.fract() != 0.0 || value < 1.0 || value > u32::MAX as f64 {
                    return Err(Error::InvalidInput(format!("k sweep value {value} is not a positive integer")));
                }
                (self.scenario.with_k(value as u32)?, t)
            }
            SweptVariable::MaxPower => {
                let s = Scenario { max_power: value, ..self.scenario.clone() };
                s.validate()?;
                (s, t)
            }
        };
        Ok((scenario, targets))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub sweep_value: f64,
    pub scheme: Scheme,
    /// Mean over feasible realizations; NaN when none is feasible.
    pub mean_power_w: f64,
    /// Standard error of the mean; 0 with a single feasible realization.
    pub stderr: f64,
    pub infeasible_frac: f64,
    pub n_feasible: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub variable: SweptVariable,
    pub n_realizations: usize,
    pub base_seed: u64,
    /// Ordered by sweep value, then by scheme as listed in the spec.
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, sweep_value: f64, scheme: Scheme) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.sweep_value == sweep_value && c.scheme == scheme)
    }

    /// Cells of one scheme in sweep order.
    pub fn curve(&self, scheme: Scheme) -> Vec<SweepCell> {
        self.cells.iter().filter(|c| c.scheme == scheme).copied().collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("sweep_value,scheme,mean_power_w,stderr,infeasible_frac\n");
        for c in &self.cells {
            let _ = writeln!(s, "{},{},{},{},{}", c.sweep_value, c.scheme, c.mean_power_w, c.stderr, c.infeasible_frac);
        }
        s
    }
}

fn summarize(sweep_value: f64, scheme: Scheme, powers: &[Option<f64>]) -> SweepCell {
    let feasible: Vec<f64> = powers.iter().flatten().copied().collect();
    let n = feasible.len();
    let infeasible_frac = (powers.len() - n) as f64 / powers.len() as f64;
    let (mean, stderr) = match n {
        0 => (f64::NAN, f64::NAN),
        1 => (feasible[0], 0.0),
        _ => {
            let mean = feasible.iter().sum::<f64>() / n as f64;
            let var = feasible.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (mean, (var / n as f64).sqrt())
        }
    };
    SweepCell { sweep_value, scheme, mean_power_w: mean, stderr, infeasible_frac, n_feasible: n }
}

/// Runs every (value, scheme, realization) cell. Solver failures count as
/// infeasible realizations and never abort the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut cells = Vec::with_capacity(spec.values.len() * spec.schemes.len());
    for &value in &spec.values {
        let (scenario, targets) = spec.cell_inputs(value)?;
        let per_realization: Vec<Vec<Option<f64>>> = (0..spec.n_realizations as u64)
            .into_par_iter()
            .map(|i| {
                let ch = sample_realization_at(&scenario, spec.base_seed, i);
                spec.schemes
                    .iter()
                    .map(|&scheme| {
                        min_power(scheme, &scenario, &ch, &targets, &spec.grid)
                            .ok()
                            .map(|sol| sol.min_power)
                            .filter(|p| p.is_finite() && (!spec.enforce_budget || *p <= scenario.max_power))
                    })
                    .collect()
            })
            .collect();
        for (j, &scheme) in spec.schemes.iter().enumerate() {
            let powers: Vec<Option<f64>> = per_realization.iter().map(|r| r[j]).collect();
            cells.push(summarize(value, scheme, &powers));
        }
    }
    Ok(SweepResult { variable: spec.variable, n_realizations: spec.n_realizations, base_seed: spec.base_seed, cells })
}
