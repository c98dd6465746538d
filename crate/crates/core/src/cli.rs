//! The `svb` command-line front end.
//!
//! ```text
//! svb fit    <samples.csv> <table.json>
//! svb region <scenario.json> [--scheme all|oma|noma|semi] [--seed N] [--points N] [--grid N] [--no-fading] --out DIR
//! svb power  <scenario.json> --targets SIGMA,EPS,RBAR [--seed N] [--grid N] [--no-fading] [--verify] [--out DIR]
//! svb sweep  <spec.json> --out DIR
//! ```
//!
//! Exit codes: 0 success, 1 internal error, 2 malformed input, 3 empty NOMA
//! region, 4 every scheme infeasible.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::boundary::{self, check_containment, oma_extremes, Containment, RegionBoundary};
use crate::channel::{sample_realization, ChannelRealization, Scenario};
use crate::io::{self, BoundaryMeta, PowerRow, RunManifest};
use crate::montecarlo::{run_sweep, SweepSpec};
use crate::power::{meets_targets, min_power, PowerSolution, PowerTargets};
use crate::search::GridSpec;
use crate::similarity::{fit_logistic, ParamTable, SimilaritySample};
use crate::{Error, Scheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_EMPTY_REGION: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

/// Relative tolerance of the `--verify` plug-back check.
pub const VERIFY_REL_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "svb", version, about = "Semantic-versus-bit rate and power regions for OMA, NOMA and semi-NOMA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    All,
    Oma,
    Noma,
    Semi,
}

impl SchemeArg {
    fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeArg::All => Scheme::ALL.to_vec(),
            SchemeArg::Oma => vec![Scheme::Oma],
            SchemeArg::Noma => vec![Scheme::Noma],
            SchemeArg::Semi => vec![Scheme::Semi],
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit one logistic curve per K to `k,snr_db,similarity` samples.
    Fit { input: PathBuf, output: PathBuf },
    /// Trace SvB rate-region frontiers and check containment.
    Region {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = crate::search::DEFAULT_GRID_N)]
        grid: usize,
        /// Use the mean (path-loss only) channel instead of a fading draw.
        #[arg(long)]
        no_fading: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Minimum transmit power per scheme for one target triple.
    Power {
        scenario: PathBuf,
        /// `sigma,eps,rbar`: normalized semantic rate, similarity floor, bit rate.
        #[arg(long, allow_hyphen_values = true)]
        targets: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::search::DEFAULT_GRID_N)]
        grid: usize,
        #[arg(long)]
        no_fading: bool,
        /// Re-evaluate the rates at each solution and check the targets.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo power sweep described by a JSON spec.
    Sweep {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EmptyRegion => EXIT_EMPTY_REGION,
            Error::Infeasible(_) | Error::InfeasibleTarget { .. } => EXIT_INFEASIBLE,
            Error::Io { .. } => EXIT_INTERNAL,
            _ => EXIT_MALFORMED,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let recorded = recorded_args(&args);
    let result = match cli.command {
        Command::Fit { input, output } => {
            let recorded = vec!["fit".to_string(), input.to_string_lossy().into_owned()];
            cmd_fit(&input, &output, recorded)
        }
        Command::Region { scenario, scheme, seed, points, grid, no_fading, out } => {
            cmd_region(&scenario, scheme, seed, points, grid, no_fading, &out, recorded)
        }
        Command::Power { scenario, targets, seed, grid, no_fading, verify, out } => {
            cmd_power(&scenario, &targets, seed, grid, no_fading, verify, out.as_deref(), recorded)
        }
        Command::Sweep { spec, out } => cmd_sweep(&spec, &out, recorded),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("SVB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // fails harmlessly if the global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Arguments after the program name with the `--out` directory dropped, so
/// reruns into another directory record the same manifest. `fit` records
/// only its input path.
fn recorded_args(args: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut iter = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = iter.next() {
        if a == "--out" {
            iter.next();
        } else if !a.starts_with("--out=") {
            out.push(a);
        }
    }
    out
}

fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("reading {}: {e}", path.display())))?;
    Scenario::from_json(&text).map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", path.display())))
}

fn grid_spec(grid_n: usize) -> Result<GridSpec, Failure> {
    if grid_n < 2 {
        return Err(Failure::new(EXIT_MALFORMED, "--grid must be at least 2"));
    }
    Ok(GridSpec::with_grid_n(grid_n))
}

fn channel_for(scenario: &Scenario, seed: u64, no_fading: bool) -> ChannelRealization {
    if no_fading {
        scenario.mean_channel()
    } else {
        sample_realization(scenario, seed)
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    io::write_text(path, text).map_err(Failure::from)
}

fn prepare_out(dir: &Path) -> Result<(), Failure> {
    io::ensure_dir(dir).map_err(Failure::from)
}

/// Manifest path written next to a fitted table: `table.json` gets
/// `table.manifest.json`.
pub fn fit_manifest_path(output: &Path) -> PathBuf {
    output.with_extension("manifest.json")
}

fn cmd_fit(input: &Path, output: &Path, args: Vec<String>) -> CliResult {
    let bytes = std::fs::read(input)
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("reading {}: {e}", input.display())))?;
    let samples = io::read_samples_csv(bytes.as_slice())
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", input.display())))?;
    let mut by_k: BTreeMap<u32, Vec<SimilaritySample>> = BTreeMap::new();
    for s in samples {
        by_k.entry(s.k).or_default().push(s);
    }
    let mut fitted = Vec::with_capacity(by_k.len());
    for (k, group) in &by_k {
        let fit = fit_logistic(group).map_err(|e| Failure::new(EXIT_MALFORMED, format!("K = {k}: {e}")))?;
        println!("k={k} mse={:e}", fit.mse);
        fitted.push(fit.params);
    }
    let table = ParamTable::from_entries(fitted)?;
    write(output, &io::to_json_pretty(&table))?;
    let mut manifest = RunManifest::new("fit", args);
    manifest.inputs = Some(serde_json::json!({ "samples_sha256": io::sha256_hex(&bytes) }));
    write(&fit_manifest_path(output), &io::to_json_pretty(&manifest))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ContainmentEntry {
    inner: Scheme,
    outer: Scheme,
    contained: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<Containment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn containment_entry(inner: &RegionBoundary, outer: &RegionBoundary, tol: f64) -> ContainmentEntry {
    let (contained, detail, note) = match check_containment(inner, outer, tol) {
        Ok(c) => (Some(c.is_contained()), Some(c), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    ContainmentEntry { inner: inner.scheme, outer: outer.scheme, contained, detail, note }
}

#[derive(Serialize)]
struct ContainmentReport {
    tolerance: f64,
    verdicts: BTreeMap<&'static str, ContainmentEntry>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_region(
    scenario_path: &Path,
    scheme: SchemeArg,
    seed: u64,
    points: usize,
    grid_n: usize,
    no_fading: bool,
    out: &Path,
    args: Vec<String>,
) -> CliResult {
    let scenario = load_scenario(scenario_path)?;
    let grid = grid_spec(grid_n)?;
    if points == 0 {
        return Err(Failure::new(EXIT_MALFORMED, "--points must be at least 1"));
    }
    let channel = channel_for(&scenario, seed, no_fading);
    let ext = oma_extremes(&scenario, &channel);
    let schemes = scheme.schemes();
    let want = |s: Scheme| schemes.contains(&s);

    let noma = if want(Scheme::Noma) { Some(boundary::noma_boundary(&scenario, &channel, points)) } else { None };
    let noma_ok = noma.as_ref().and_then(|r| r.as_ref().ok());
    let sigmas = boundary::sigma_grid(ext.sigma_max, points);
    let oma = if want(Scheme::Oma) { Some(boundary::oma_boundary_at(&scenario, &channel, &sigmas, &grid)?) } else { None };
    let semi = if want(Scheme::Semi) {
        // evaluate semi also at the NOMA samples so containment is checked
        // at matched rates
        let mut semi_sigmas = sigmas.clone();
        if let Some(n) = noma_ok {
            semi_sigmas.extend(n.points.iter().map(|p| p.sem_rate_norm));
        }
        Some(boundary::semi_boundary_at(&scenario, &channel, &semi_sigmas, &grid)?)
    } else {
        None
    };

    prepare_out(out)?;
    let mut files = Vec::new();
    for b in [oma.as_ref(), noma_ok, semi.as_ref()].into_iter().flatten() {
        let name = b.scheme.as_str();
        write(&out.join(format!("{name}.csv")), &io::boundary_csv(b))?;
        write(&out.join(format!("{name}.json")), &io::to_json_pretty(&BoundaryMeta::new(b, (!no_fading).then_some(seed))))?;
        files.push(format!("{name}.csv"));
    }

    let tol = 1e-6 * ext.r_max;
    let mut verdicts = BTreeMap::new();
    if let (Some(s), Some(o)) = (&semi, &oma) {
        verdicts.insert("semi_contains_oma", containment_entry(o, s, tol));
    }
    if let (Some(s), Some(n)) = (&semi, noma_ok) {
        verdicts.insert("semi_contains_noma", containment_entry(n, s, tol));
    }
    if let (Some(n), Some(o)) = (noma_ok, &oma) {
        verdicts.insert("noma_contains_oma", containment_entry(o, n, tol));
        verdicts.insert("oma_contains_noma", containment_entry(n, o, tol));
    }
    if !verdicts.is_empty() {
        write(&out.join("containment.json"), &io::to_json_pretty(&ContainmentReport { tolerance: tol, verdicts }))?;
    }

    let mut manifest = RunManifest::new("region", args);
    manifest.scenario_hash = Some(io::scenario_hash(&scenario));
    manifest.seeds = if no_fading { vec![] } else { vec![seed] };
    manifest.grid = Some(grid);
    manifest.inputs = Some(serde_json::json!({ "scenario": scenario }));
    write(&out.join("manifest.json"), &io::to_json_pretty(&manifest))?;

    for f in &files {
        println!("wrote {}", out.join(f).display());
    }
    if let Some(Err(e)) = noma {
        eprintln!("error: {e}");
        eprintln!(
            "the S-user cannot reach similarity {} even with power {} W over the full band",
            scenario.min_similarity, scenario.max_power
        );
        return Ok(EXIT_EMPTY_REGION);
    }
    Ok(EXIT_OK)
}

fn parse_targets(text: &str) -> Result<PowerTargets, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Failure::new(EXIT_MALFORMED, format!("--targets expects sigma,eps,rbar (got `{text}`)"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    PowerTargets::new(v[0], v[1], v[2]).map_err(Failure::from)
}

#[derive(Serialize)]
struct PowerEntry {
    scheme: Scheme,
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    solution: Option<PowerSolution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

#[derive(Serialize)]
struct PowerReport {
    targets: PowerTargets,
    seed: Option<u64>,
    channel: ChannelRealization,
    results: Vec<PowerEntry>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_power(
    scenario_path: &Path,
    targets: &str,
    seed: u64,
    grid_n: usize,
    no_fading: bool,
    verify: bool,
    out: Option<&Path>,
    args: Vec<String>,
) -> CliResult {
    let scenario = load_scenario(scenario_path)?;
    let targets = parse_targets(targets)?;
    let grid = grid_spec(grid_n)?;
    let channel = channel_for(&scenario, seed, no_fading);
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut failed_verification = false;
    for scheme in Scheme::ALL {
        let entry = match min_power(scheme, &scenario, &channel, &targets, &grid) {
            Ok(sol) => {
                let verified = verify.then(|| meets_targets(&scenario, &channel, &targets, &sol, VERIFY_REL_TOL));
                failed_verification |= verified == Some(false);
                rows.push(PowerRow { targets, scheme, min_power_w: Some(sol.min_power) });
                PowerEntry { scheme, feasible: true, solution: Some(sol), reason: None, verified }
            }
            Err(e) => {
                rows.push(PowerRow { targets, scheme, min_power_w: None });
                PowerEntry { scheme, feasible: false, solution: None, reason: Some(e.to_string()), verified: None }
            }
        };
        results.push(entry);
    }
    let all_infeasible = results.iter().all(|r| !r.feasible);
    let report = PowerReport { targets, seed: (!no_fading).then_some(seed), channel, results };
    let json = io::to_json_pretty(&report);
    print!("{json}");
    if let Some(out) = out {
        prepare_out(out)?;
        write(&out.join("power.csv"), &io::power_csv(&rows))?;
        write(&out.join("power.json"), &json)?;
        let mut manifest = RunManifest::new("power", args);
        manifest.scenario_hash = Some(io::scenario_hash(&scenario));
        manifest.seeds = if no_fading { vec![] } else { vec![seed] };
        manifest.grid = Some(grid);
        manifest.inputs = Some(serde_json::json!({ "scenario": scenario, "targets": targets }));
        write(&out.join("manifest.json"), &io::to_json_pretty(&manifest))?;
    }
    if failed_verification {
        return Err(Failure::new(EXIT_INTERNAL, "plug-back verification failed"));
    }
    if all_infeasible {
        eprintln!("error: targets are infeasible for every scheme");
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(EXIT_OK)
}

fn cmd_sweep(spec_path: &Path, out: &Path, args: Vec<String>) -> CliResult {
    let text = std::fs::read_to_string(spec_path)
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("reading {}: {e}", spec_path.display())))?;
    let spec = SweepSpec::from_json(&text).map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", spec_path.display())))?;
    let result = run_sweep(&spec)?;
    prepare_out(out)?;
    write(&out.join("sweep.csv"), &result.to_csv())?;
    let mut manifest = RunManifest::new("sweep", args);
    manifest.scenario_hash = Some(io::scenario_hash(&spec.scenario));
    manifest.seeds = vec![spec.base_seed];
    manifest.grid = Some(spec.grid);
    manifest.inputs = Some(serde_json::json!({ "spec": spec }));
    write(&out.join("manifest.json"), &io::to_json_pretty(&manifest))?;
    println!("wrote {} ({} cells, {} realizations each)", out.join("sweep.csv").display(), result.cells.len(), spec.n_realizations);
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_dir_is_not_recorded() {
        let args: Vec<OsString> = ["svb", "region", "s.json", "--out", "x", "--seed", "3", "--out=y"].iter().map(OsString::from).collect();
        assert_eq!(recorded_args(&args), vec!["region", "s.json", "--seed", "3"]);
    }

    #[test]
    fn target_parsing() {
        assert_eq!(parse_targets("1e5, 0.8, 8e5").unwrap(), PowerTargets::new(1e5, 0.8, 8e5).unwrap());
        assert_eq!(parse_targets("1,2").unwrap_err().code, EXIT_MALFORMED);
        assert_eq!(parse_targets("a,0.5,1").unwrap_err().code, EXIT_MALFORMED);
        assert_eq!(parse_targets("1,1.5,1").unwrap_err().code, EXIT_MALFORMED);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["svb"]), EXIT_MALFORMED);
        assert_eq!(run(["svb", "region"]), EXIT_MALFORMED);
        assert_eq!(run(["svb", "--help"]), EXIT_OK);
    }
}
