//! Command-line front end: simulate, fit, surrogate lookup, closed-form
//! evaluation, Monte-Carlo comparison, and Q-Q export.
//!
//! Every command is a pure function of its flags, input files, and seed;
//! stochastic commands require an explicit `--seed` (no wall-clock
//! default), and reruns produce byte-identical output data. Each output
//! file is accompanied by a `<file>.manifest.json` recording the fully
//! resolved parameter set. Exit codes: 0 success, 1 compute failure,
//! 2 usage error.

use crate::chansim::{mc_capacity, mc_outage, run_monte_carlo, SampleSet};
use crate::correlation::SystemConfig;
use crate::evd::{EvdParams, MeanValue};
use crate::fit::{fit_gev_mle, fit_gumbel_mle, FitError, FitReport};
use crate::numeric::fmt_g17;
use crate::perf::{
    abs_error, ec_gev, ec_gumbel, op_gev, op_gumbel, qq_points, write_perf_csv,
    write_qq_csv, AbsError, PerfPoint, PerfSource,
};
use crate::surrogate::{gev_params_surrogate, gumbel_params_surrogate, RangePolicy};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("simulation: {0}")]
    ChanSim(#[from] crate::chansim::ChanSimError),
    #[error("configuration: {0}")]
    Config(#[from] crate::correlation::ConfigError),
    #[error("surrogate: {0}")]
    Surrogate(#[from] crate::surrogate::SurrogateError),
    #[error("fit: {0}")]
    Fit(#[from] FitError),
    #[error("performance: {0}")]
    Perf(#[from] crate::perf::PerfError),
    #[error("fit did not converge; best-so-far report written to {0}")]
    FitDidNotConverge(PathBuf),
    #[error("{path}: {err}")]
    Io { path: PathBuf, err: std::io::Error },
    #[error("{path}: {err}")]
    Json { path: PathBuf, err: serde_json::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fas-evt",
    version,
    about = "Outage and capacity of fluid antenna systems via extreme value fitting"
)]
pub struct Cli {
    /// JSON file supplying default parameter values; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo simulation of the FAS channel maximum.
    Simulate(SimulateArgs),
    /// Maximum-likelihood EVD fit of a simulated sample set.
    Fit(FitArgs),
    /// Polynomial surrogate parameters for a geometry (no simulation).
    Surrogate(SurrogateArgs),
    /// Closed-form OP/EC sweep over an SNR grid.
    Eval(EvalArgs),
    /// Monte Carlo vs closed-form comparison table.
    Compare(CompareArgs),
    /// Quantile-quantile pairs of a sample set against a fitted law.
    Qq(QqArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistKind {
    Gumbel,
    Gev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Op,
    Ec,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Number of ports N (≥ 2).
    #[arg(long)]
    pub ports: Option<usize>,
    /// Antenna size W in wavelengths.
    #[arg(long)]
    pub aperture: Option<f64>,
    /// Number of Monte Carlo experiments M.
    #[arg(long)]
    pub samples: Option<usize>,
    /// PRNG seed (required; reruns reproduce the data bytes exactly).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Which family to fit.
    #[arg(long, value_enum)]
    pub dist: Option<DistKind>,
    /// Input sample-set CSV (simulate's output format).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output report JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurrogateArgs {
    #[arg(long, value_enum)]
    pub dist: Option<DistKind>,
    #[arg(long)]
    pub ports: Option<usize>,
    #[arg(long)]
    pub aperture: Option<f64>,
    /// Evaluate outside the fitted (W, ρ) box instead of refusing.
    #[arg(long)]
    pub force_surrogate: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub dist: Option<DistKind>,
    /// Parameter JSON file (family-tagged, or a fit report).
    #[arg(long, conflicts_with = "surrogate")]
    pub params: Option<PathBuf>,
    /// Take parameters from the polynomial surrogate at (--ports, --aperture).
    #[arg(long)]
    pub surrogate: bool,
    #[arg(long)]
    pub ports: Option<usize>,
    #[arg(long)]
    pub aperture: Option<f64>,
    /// Which metric the sweep is for (both columns are always written).
    #[arg(long, value_enum)]
    pub metric: Option<MetricKind>,
    /// Decoding SNR threshold in dB.
    #[arg(long)]
    pub threshold_db: Option<f64>,
    /// Sweep grid `START:END:STEP` in dB.
    #[arg(long)]
    pub snr_db_range: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub ports: Option<usize>,
    #[arg(long)]
    pub aperture: Option<f64>,
    #[arg(long)]
    pub threshold_db: Option<f64>,
    #[arg(long)]
    pub snr_db_range: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QqArgs {
    /// Input sample-set CSV.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub dist: Option<DistKind>,
    /// Parameter JSON file (family-tagged, or a fit report).
    #[arg(long, conflicts_with = "surrogate")]
    pub params: Option<PathBuf>,
    /// Take parameters from the surrogate at the input file's (N, W).
    #[arg(long)]
    pub surrogate: bool,
    /// Number of quantile pairs (≥ 2).
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Optional JSON defaults, keyed like the flags. Explicit flags override.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDefaults {
    ports: Option<usize>,
    aperture: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
    threshold_db: Option<f64>,
    snr_db_range: Option<String>,
    points: Option<usize>,
    out: Option<PathBuf>,
}

/// Every output file is accompanied by one of these, so a run can be
/// reproduced from the manifest alone. The timestamp lives here, never in
/// the data files.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<String>,
    pub created_unix: u64,
}

fn write_manifest(out: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    let path = manifest_path(out);
    let body = serde_json::to_string_pretty(manifest)
        .map_err(|err| CliError::Json { path: path.clone(), err })?;
    std::fs::write(&path, body).map_err(|err| CliError::Io { path, err })
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut os = out.as_os_str().to_os_string();
    os.push(".manifest.json");
    PathBuf::from(os)
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn manifest(
    command: &str,
    parameters: serde_json::Value,
    seed: Option<u64>,
    outputs: &[&Path],
) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        parameters,
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        created_unix: now_unix(),
    }
}

// ---------------------------------------------------------------------------
// Flag/config resolution
// ---------------------------------------------------------------------------

fn load_defaults(path: &Option<PathBuf>) -> Result<ConfigDefaults, CliError> {
    match path {
        None => Ok(ConfigDefaults::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|err| CliError::Io { path: p.clone(), err })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))
        }
    }
}

fn require<T>(flag: Option<T>, fallback: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(fallback)
        .ok_or_else(|| CliError::Usage(format!("missing required --{name}")))
}

/// Inclusive dB grid `START:END:STEP`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnrRange {
    pub start_db: f64,
    pub end_db: f64,
    pub step_db: f64,
}

impl SnrRange {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let usage =
            || CliError::Usage(format!("--snr-db-range must be START:END:STEP, got {text:?}"));
        if parts.len() != 3 {
            return Err(usage());
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| usage())?;
        let (start_db, end_db, step_db) = (nums[0], nums[1], nums[2]);
        let step_ok = step_db.is_finite() && step_db > 0.0;
        if !start_db.is_finite() || !end_db.is_finite() || !step_ok || end_db < start_db {
            return Err(usage());
        }
        Ok(Self { start_db, end_db, step_db })
    }

    pub fn points_db(&self) -> Vec<f64> {
        let count =
            ((self.end_db - self.start_db) / self.step_db + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start_db + i as f64 * self.step_db).collect()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn read_params_file(path: &Path) -> Result<EvdParams, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|err| CliError::Io { path: path.into(), err })?;
    if let Ok(p) = serde_json::from_str::<EvdParams>(&text) {
        return Ok(p);
    }
    // also accept a whole fit report
    serde_json::from_str::<FitReport>(&text)
        .map(|r| r.params)
        .map_err(|e| CliError::Usage(format!("{}: not a parameter JSON: {e}", path.display())))
}

fn params_match_dist(params: &EvdParams, dist: DistKind) -> Result<(), CliError> {
    let ok = matches!(
        (params, dist),
        (EvdParams::Gumbel { .. }, DistKind::Gumbel) | (EvdParams::Gev { .. }, DistKind::Gev)
    );
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--dist {} does not match the parameter file's family",
            match dist {
                DistKind::Gumbel => "gumbel",
                DistKind::Gev => "gev",
            }
        )))
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_simulate(args: SimulateArgs, defaults: ConfigDefaults) -> Result<(), CliError> {
    let ports = require(args.ports, defaults.ports, "ports")?;
    let aperture = require(args.aperture, defaults.aperture, "aperture")?;
    let samples = require(args.samples, defaults.samples, "samples")?;
    let seed = require(args.seed, defaults.seed, "seed")?;
    let out = require(args.out, defaults.out, "out")?;
    if ports < 2 {
        return Err(CliError::Usage(format!("--ports must be at least 2, got {ports}")));
    }
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let config = SystemConfig::unit_power(ports, aperture)?;
    let set = run_monte_carlo(&config, samples, seed)?;
    set.write_csv_path(&out)?;
    write_manifest(
        &out,
        &manifest(
            "simulate",
            serde_json::json!({
                "ports": ports,
                "aperture": aperture,
                "samples": samples,
                "seed": seed,
                "rayleigh_scale": config.rayleigh_scale,
                "out": out.display().to_string(),
            }),
            Some(seed),
            &[&out],
        ),
    )?;
    Ok(())
}

fn cmd_fit(args: FitArgs, defaults: ConfigDefaults) -> Result<(), CliError> {
    let dist = require(args.dist, None, "dist")?;
    let input = require(args.input, None, "input")?;
    let out = require(args.out, defaults.out, "out")?;
    // an unparseable sample file is a usage error (exit 2)
    let set = SampleSet::read_csv_path(&input)
        .map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
    let result = match dist {
        DistKind::Gumbel => fit_gumbel_mle(&set),
        DistKind::Gev => fit_gev_mle(&set),
    };
    let meta = *set.meta();
    let write_report = |report: &FitReport| -> Result<(), CliError> {
        std::fs::write(&out, report.to_json())
            .map_err(|err| CliError::Io { path: out.clone(), err })?;
        write_manifest(
            &out,
            &manifest(
                "fit",
                serde_json::json!({
                    "dist": dist,
                    "input": input.display().to_string(),
                    "input_meta": meta,
                    "out": out.display().to_string(),
                }),
                Some(meta.seed),
                &[&out],
            ),
        )
    };
    match result {
        Ok(report) => {
            write_report(&report)?;
            Ok(())
        }
        Err(FitError::Convergence { report }) => {
            write_report(&report)?;
            Err(CliError::FitDidNotConverge(out))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_surrogate(args: SurrogateArgs, defaults: ConfigDefaults) -> Result<(), CliError> {
    let dist = require(args.dist, None, "dist")?;
    let ports = require(args.ports, defaults.ports, "ports")?;
    let aperture = require(args.aperture, defaults.aperture, "aperture")?;
    let policy =
        if args.force_surrogate { RangePolicy::Override } else { RangePolicy::Enforce };
    if args.force_surrogate {
        if let Err(v) = crate::surrogate::validity_check(ports, aperture) {
            eprintln!("warning: extrapolating the surrogate: {v}");
        }
    }
    let params: EvdParams = match dist {
        DistKind::Gumbel => gumbel_params_surrogate(ports, aperture, policy)?.into(),
        DistKind::Gev => gev_params_surrogate(ports, aperture, policy)?.into(),
    };
    let mut stdout = std::io::stdout().lock();
    writeln!(
        stdout,
        "{}",
        serde_json::to_string_pretty(&params).expect("params serialize")
    )
    .map_err(|err| CliError::Io { path: PathBuf::from("<stdout>"), err })?;
    Ok(())
}

fn eval_point(params: &EvdParams, gamma_th: f64, snr: f64) -> PerfPoint {
    match *params {
        EvdParams::Gumbel { location, scale } => {
            let p = crate::evd::GumbelParams { location, scale };
            PerfPoint {
                avg_snr: snr,
                outage: op_gumbel(&p, gamma_th, snr),
                capacity: MeanValue::Finite(ec_gumbel(&p, snr)),
                source: PerfSource::ClosedFormGumbel,
            }
        }
        EvdParams::Gev { location, scale, shape } => {
            let p = crate::evd::GevParams { shape, location, scale };
            PerfPoint {
                avg_snr: snr,
                outage: op_gev(&p, gamma_th, snr),
                capacity: ec_gev(&p, snr),
                source: PerfSource::ClosedFormGev,
            }
        }
    }
}

fn cmd_eval(args: EvalArgs, defaults: ConfigDefaults) -> Result<(), CliError> {
    let dist = require(args.dist, None, "dist")?;
    let metric = require(args.metric, None, "metric")?;
    let threshold_db = require(args.threshold_db, defaults.threshold_db, "threshold-db")?;
    let range_text =
        require(args.snr_db_range, defaults.snr_db_range, "snr-db-range")?;
    let out = require(args.out, defaults.out, "out")?;
    let range = SnrRange::parse(&range_text)?;

    let params = match (&args.params, args.surrogate) {
        (Some(path), false) => {
            let p = read_params_file(path)?;
            params_match_dist(&p, dist)?;
            p
        }
        (None, true) => {
            let ports = require(args.ports, defaults.ports, "ports")?;
            let aperture = require(args.aperture, defaults.aperture, "aperture")?;
            match dist {
                DistKind::Gumbel => {
                    gumbel_params_surrogate(ports, aperture, RangePolicy::Enforce)?.into()
                }
                DistKind::Gev => {
                    gev_params_surrogate(ports, aperture, RangePolicy::Enforce)?.into()
                }
            }
        }
        (None, false) => {
            return Err(CliError::Usage(
                "exactly one parameter source required: --params PATH or --surrogate".into(),
            ))
        }
        (Some(_), true) => unreachable!("clap conflicts_with"),
    };

    let gamma_th = db_to_linear(threshold_db);
    let points: Vec<PerfPoint> = range
        .points_db()
        .iter()
        .map(|&snr_db| eval_point(&params, gamma_th, db_to_linear(snr_db)))
        .collect();

    let file = std::fs::File::create(&out)
        .map_err(|err| CliError::Io { path: out.clone(), err })?;
    write_perf_csv(&points, std::io::BufWriter::new(file))?;
    write_manifest(
        &out,
        &manifest(
            "eval",
            serde_json::json!({
                "dist": dist,
                "metric": metric,
                "params": params,
                "params_file": args.params.as_ref().map(|p| p.display().to_string()),
                "surrogate": args.surrogate,
                "ports": args.ports,
                "aperture": args.aperture,
                "threshold_db": threshold_db,
                "snr_db_range": range,
                "out": out.display().to_string(),
            }),
            None,
            &[&out],
        ),
    )?;
    Ok(())
}

fn cmd_compare(args: CompareArgs, defaults: ConfigDefaults) -> Result<(), CliError> {
    let ports = require(args.ports, defaults.ports, "ports")?;
    let aperture = require(args.aperture, defaults.aperture, "aperture")?;
    let threshold_db = require(args.threshold_db, defaults.threshold_db, "threshold-db")?;
    let range_text =
        require(args.snr_db_range, defaults.snr_db_range, "snr-db-range")?;
    let samples = require(args.samples, defaults.samples, "samples")?;
    let seed = require(args.seed, defaults.seed, "seed")?;
    let out = require(args.out, defaults.out, "out")?;
    let range = SnrRange::parse(&range_text)?;
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }

    let gumbel = gumbel_params_surrogate(ports, aperture, RangePolicy::Enforce)?;
    let gev = gev_params_surrogate(ports, aperture, RangePolicy::Enforce)?;
    let config = SystemConfig::unit_power(ports, aperture)?;
    let set = run_monte_carlo(&config, samples, seed)?;
    let floor = 1.0 / samples as f64;
    let gamma_th = db_to_linear(threshold_db);

    let file = std::fs::File::create(&out)
        .map_err(|err| CliError::Io { path: out.clone(), err })?;
    let mut w = std::io::BufWriter::new(file);
    let io_err = |err: std::io::Error| CliError::Io { path: out.clone(), err };
    writeln!(
        w,
        "snr_db,mc_outage,mc_capacity_nats,gumbel_outage,gumbel_capacity_nats,\
         gev_outage,gev_capacity_nats,gev_capacity_unbounded,\
         gumbel_op_log_error,gumbel_op_floored,gev_op_log_error,gev_op_floored,\
         gumbel_ec_abs_error,gev_ec_abs_error,gev_ec_unbounded"
    )
    .map_err(io_err)?;
    for snr_db in range.points_db() {
        let snr = db_to_linear(snr_db);
        let gamma_hat = (gamma_th / snr).sqrt();
        let sim_op = mc_outage(&set, gamma_hat);
        let sim_ec = mc_capacity(&set, snr);
        let gum_op = op_gumbel(&gumbel, gamma_th, snr);
        let gum_ec = ec_gumbel(&gumbel, snr);
        let gev_op = op_gev(&gev, gamma_th, snr);
        let gev_ec = ec_gev(&gev, snr);
        let le_gum = crate::perf::log_error(sim_op, gum_op, floor);
        let le_gev = crate::perf::log_error(sim_op, gev_op, floor);
        let ae_gum = abs_error(MeanValue::Finite(sim_ec), MeanValue::Finite(gum_ec));
        let ae_gev = abs_error(MeanValue::Finite(sim_ec), gev_ec);
        let (gev_ec_text, gev_ec_flag) = match gev_ec {
            MeanValue::Finite(c) => (fmt_g17(c), 0),
            MeanValue::Unbounded => ("inf".into(), 1),
        };
        let (ae_gev_text, ae_gev_flag) = match ae_gev {
            AbsError::Finite(v) => (fmt_g17(v), 0),
            AbsError::Unbounded => ("inf".into(), 1),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_g17(snr_db),
            fmt_g17(sim_op),
            fmt_g17(sim_ec),
            fmt_g17(gum_op),
            fmt_g17(gum_ec),
            fmt_g17(gev_op),
            gev_ec_text,
            gev_ec_flag,
            fmt_g17(le_gum.value),
            le_gum.floored as u8,
            fmt_g17(le_gev.value),
            le_gev.floored as u8,
            fmt_g17(ae_gum.finite().expect("both finite")),
            ae_gev_text,
            ae_gev_flag,
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    write_manifest(
        &out,
        &manifest(
            "compare",
            serde_json::json!({
                "ports": ports,
                "aperture": aperture,
                "threshold_db": threshold_db,
                "snr_db_range": range,
                "samples": samples,
                "seed": seed,
                "floor": floor,
                "out": out.display().to_string(),
            }),
            Some(seed),
            &[&out],
        ),
    )?;
    Ok(())
}

fn cmd_qq(args: QqArgs, defaults: ConfigDefaults) -> Result<(), CliError> {
    let input = require(args.input, None, "input")?;
    let dist = require(args.dist, None, "dist")?;
    let n_points = require(args.points, defaults.points, "points")?;
    let out = require(args.out, defaults.out, "out")?;
    if n_points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {n_points}"
        )));
    }
    let set = SampleSet::read_csv_path(&input)
        .map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
    let params = match (&args.params, args.surrogate) {
        (Some(path), false) => {
            let p = read_params_file(path)?;
            params_match_dist(&p, dist)?;
            p
        }
        (None, true) => {
            let meta = set.meta();
            match dist {
                DistKind::Gumbel => gumbel_params_surrogate(
                    meta.n_ports,
                    meta.aperture_w,
                    RangePolicy::Enforce,
                )?
                .into(),
                DistKind::Gev => gev_params_surrogate(
                    meta.n_ports,
                    meta.aperture_w,
                    RangePolicy::Enforce,
                )?
                .into(),
            }
        }
        (None, false) => {
            return Err(CliError::Usage(
                "exactly one parameter source required: --params PATH or --surrogate".into(),
            ))
        }
        (Some(_), true) => unreachable!("clap conflicts_with"),
    };
    let pairs = qq_points(&set, &params, n_points)?;
    let file = std::fs::File::create(&out)
        .map_err(|err| CliError::Io { path: out.clone(), err })?;
    write_qq_csv(&pairs, std::io::BufWriter::new(file))?;
    write_manifest(
        &out,
        &manifest(
            "qq",
            serde_json::json!({
                "input": input.display().to_string(),
                "input_meta": set.meta(),
                "dist": dist,
                "params": params,
                "surrogate": args.surrogate,
                "points": n_points,
                "out": out.display().to_string(),
            }),
            Some(set.meta().seed),
            &[&out],
        ),
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Parse and run from an explicit argument list (first element is the
/// program name). Used directly by tests.
pub fn run_with<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)
        .map_err(|e| CliError::Usage(e.render().to_string()))?;
    dispatch(cli)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let defaults = load_defaults(&cli.config)?;
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args, defaults),
        Command::Fit(args) => cmd_fit(args, defaults),
        Command::Surrogate(args) => cmd_surrogate(args, defaults),
        Command::Eval(args) => cmd_eval(args, defaults),
        Command::Compare(args) => cmd_compare(args, defaults),
        Command::Qq(args) => cmd_qq(args, defaults),
    }
}

/// Binary entry point. Returns the process exit code.
pub fn run() -> i32 {
    // let clap handle --help/--version and flag errors natively (exit 2)
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_range_parses_and_grids() {
        let r = SnrRange::parse("0:20:0.5").unwrap();
        let pts = r.points_db();
        assert_eq!(pts.len(), 41);
        assert_eq!(pts[0], 0.0);
        assert_eq!(*pts.last().unwrap(), 20.0);
        assert!(SnrRange::parse("5:1:1").is_err());
        assert!(SnrRange::parse("0:10:0").is_err());
        assert!(SnrRange::parse("0:10").is_err());
        assert!(SnrRange::parse("a:b:c").is_err());
    }

    #[test]
    fn db_conversion() {
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((db_to_linear(0.0) - 1.0).abs() < 1e-15);
        assert!((db_to_linear(-10.0) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn manifest_path_appends_suffix() {
        assert_eq!(
            manifest_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.csv.manifest.json")
        );
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::FitDidNotConverge(PathBuf::from("r.json")).exit_code(),
            1
        );
    }
}
