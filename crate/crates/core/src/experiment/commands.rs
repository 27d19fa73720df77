use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{
    bound_amini, bound_hajek_renyi_classic, bound_rao, bound_theorem1, moment_profile, slln_series_check,
    BoundReport, MomentProfile, Provenance, SeriesReport, SllnSeriesSpec,
};
use crate::distributions::{derive_seed, RandomSequenceSpec};
use crate::error::{Error, Result};
use crate::event::{Event, MaxEvent, Process};
use crate::report::{fmt_f64, write_json, Envelope};
use crate::sequences::TrajectoryBatch;
use crate::shape::ScaleFunction;
use crate::simulation::{
    demi_check, enumerate_exact, estimate_event, slln_trajectory, verify_bound, DemiCheckReport, DemiProcess,
    Evidence, ExactProbability, MonteCarloEstimate, SllnTrajectoryReport, Verdict, Verification,
};

use super::config::{BoundChoice, DemiProcessChoice, EnumerateEvent, ExperimentConfig};

/// Environment variable that overrides the configured output directory.
pub const OUT_ENV: &str = "HRBOUNDS_OUT";
pub const DEFAULT_OUT_DIR: &str = "hrbounds-out";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FLAGGED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bound,
    Verify,
    CheckDemi,
    Slln,
    Enumerate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Verify => "verify",
            Command::CheckDemi => "check-demi",
            Command::Slln => "slln",
            Command::Enumerate => "enumerate",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub kinds: Option<Vec<BoundChoice>>,
    /// Test hook: push every bound past its evidence so `verify` must fail.
    pub corrupt_bound: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// `--out`, then `HRBOUNDS_OUT`, then the config, then the default.
pub fn resolve_out_dir(cli: Option<&Path>, config: &ExperimentConfig) -> PathBuf {
    if let Some(p) = cli {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    config.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

/// Applies flag overrides and validates.
pub fn apply_overrides(mut config: ExperimentConfig, opts: &RunOptions) -> Result<ExperimentConfig> {
    if let Some(seed) = opts.seed {
        config.master_seed = seed;
    }
    if let Some(reps) = opts.reps {
        config.replications = reps;
    }
    if let Some(kinds) = &opts.kinds {
        config.bound.kinds = kinds.clone();
    }
    config.validate()?;
    Ok(config)
}

pub fn run(command: Command, config: ExperimentConfig, opts: &RunOptions) -> Result<Outcome> {
    let config = apply_overrides(config, opts)?;
    match opts.threads {
        Some(0) => Err(Error::domain("threads", "must be >= 1")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(|| dispatch(command, &config, opts)),
        None => dispatch(command, &config, opts),
    }
}

fn dispatch(command: Command, config: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome> {
    let out = resolve_out_dir(opts.out.as_deref(), config);
    let writer = Writer::new(out, config)?;
    match command {
        Command::Bound => {
            let report = run_bound(config)?;
            let json = writer.json("bound.json", &report)?;
            let values: Vec<String> = report
                .reports
                .iter()
                .map(|r| format!("{:?}={}", r.bound_kind, fmt_f64(r.value)))
                .collect();
            Ok(Outcome {
                exit_code: EXIT_OK,
                files: vec![json],
                summary: values.join(" "),
            })
        }
        Command::Verify => {
            let report = run_verify(config, opts.corrupt_bound)?;
            let json = writer.json("verify.json", &report)?;
            let csv = writer.csv("verify.csv", |w| report.write_csv(w))?;
            Ok(Outcome {
                exit_code: if report.violations > 0 { EXIT_FLAGGED } else { EXIT_OK },
                files: vec![json, csv],
                summary: format!("{} checks, {} violations", report.checks, report.violations),
            })
        }
        Command::CheckDemi => {
            let report = run_demi(config)?;
            let json = writer.json("demi.json", &report)?;
            let csv = writer.csv("demi.csv", |w| write_demi_csv(&report, w))?;
            Ok(Outcome {
                exit_code: if report.passed { EXIT_OK } else { EXIT_FLAGGED },
                files: vec![json, csv],
                summary: format!(
                    "{} of {} pairs flagged (allowance {}), flagged j = {:?}",
                    report.flagged_count,
                    report.pairs.len(),
                    report.allowance,
                    report.flagged_j
                ),
            })
        }
        Command::Slln => {
            let report = run_slln(config)?;
            let json = writer.json("slln.json", &report)?;
            let csv = writer.csv("slln.csv", |w| report.trajectory.write_csv(w))?;
            Ok(Outcome {
                exit_code: EXIT_OK,
                files: vec![json, csv],
                summary: format!(
                    "series {:?}; |S|/b q95 decreasing: {}",
                    report.series.verdict, report.trajectory.abs_q95_decreasing
                ),
            })
        }
        Command::Enumerate => {
            let report = run_enumerate(config)?;
            let json = writer.json("enumerate.json", &report)?;
            Ok(Outcome {
                exit_code: EXIT_OK,
                files: vec![json],
                summary: format!("{}/{} = {}", report.favorable, report.total, fmt_f64(report.probability)),
            })
        }
    }
}

struct Writer {
    dir: PathBuf,
    digest: String,
    seed: u64,
}

impl Writer {
    fn new(dir: PathBuf, config: &ExperimentConfig) -> Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            digest: config.digest(),
            seed: config.master_seed,
        })
    }

    fn json<T: Serialize>(&self, name: &str, report: &T) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let envelope = Envelope {
            config_digest: &self.digest,
            master_seed: self.seed,
            report,
        };
        write_json(&path, &envelope)?;
        Ok(path)
    }

    fn csv(&self, name: &str, body: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let mut buf = format!("# config_digest={},master_seed={}\n", self.digest, self.seed).into_bytes();
        body(&mut buf)?;
        std::fs::write(&path, buf)?;
        Ok(path)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCommandReport {
    pub scenario: String,
    pub moment_provenance: Option<Provenance>,
    pub reports: Vec<BoundReport>,
}

fn needs_profile(kinds: &[BoundChoice]) -> bool {
    kinds.iter().any(|k| matches!(k, BoundChoice::Theorem1 | BoundChoice::Rao))
}

fn profile_for(config: &ExperimentConfig, n: usize) -> Result<MomentProfile> {
    let spec = RandomSequenceSpec { n, ..config.spec() };
    moment_profile(
        &spec,
        &config.phi,
        config.bound.moments,
        config.moment_replications(),
        derive_seed(config.master_seed, "moments"),
    )
}

fn second_moments(config: &ExperimentConfig, mp: Option<&MomentProfile>) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = config.n();
    let family = config.family();
    let ex2 = mp.and_then(|m| m.ex2.clone()).or_else(|| family.second_moment().map(|v| vec![v; n]));
    let sigma = mp.and_then(|m| m.sigma.clone()).or_else(|| family.std_dev().map(|v| vec![v; n]));
    match (ex2, sigma) {
        (Some(e), Some(s)) => Ok((e, s)),
        _ => Err(Error::NonIntegrable {
            detail: format!("{family:?} has no finite second moment"),
        }),
    }
}

/// Every configured bound for scale function `chi` and max-event threshold
/// `epsilon`, all tied to the configured sequence.
fn bounds_for(
    config: &ExperimentConfig,
    mp: Option<&MomentProfile>,
    chi: &ScaleFunction,
    epsilon: f64,
) -> Result<Vec<BoundReport>> {
    let n = config.n();
    let family = config.family();
    config
        .bound
        .kinds
        .iter()
        .map(|kind| {
            let report = match kind {
                BoundChoice::Theorem1 => bound_theorem1(&config.phi, chi, &config.weights, mp.expect("profile"))?,
                BoundChoice::Rao => bound_rao(
                    &config.phi,
                    chi,
                    &config.weights,
                    &mp.expect("profile").e_phi_u,
                    Process::U,
                )?,
                BoundChoice::HajekRenyi => {
                    let (ex2, _) = second_moments(config, mp)?;
                    bound_hajek_renyi_classic(&ex2, &config.weights, config.bound.m, n, epsilon, config.bound.sided)?
                }
                BoundChoice::Amini => {
                    let (_, sigma) = second_moments(config, mp)?;
                    bound_amini(&sigma, &config.weights, n, epsilon)?
                }
            };
            Ok(report.for_sequence(family))
        })
        .collect()
}

fn checked_profile(config: &ExperimentConfig) -> Result<Option<MomentProfile>> {
    if !needs_profile(&config.bound.kinds) {
        return Ok(None);
    }
    Ok(Some(profile_for(config, config.n())?))
}

pub fn run_bound(config: &ExperimentConfig) -> Result<BoundCommandReport> {
    let mp = checked_profile(config)?;
    let reports = bounds_for(config, mp.as_ref(), &config.chi, config.threshold())?;
    Ok(BoundCommandReport {
        scenario: config.scenario.clone(),
        moment_provenance: mp.map(|m| m.provenance),
        reports,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyRow {
    pub epsilon: f64,
    pub bound: BoundReport,
    pub estimate: MonteCarloEstimate,
    pub exact: Option<ExactProbability>,
    pub verifications: Vec<Verification>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyCommandReport {
    pub scenario: String,
    pub rows: Vec<VerifyRow>,
    pub checks: usize,
    pub violations: usize,
}

impl VerifyCommandReport {
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "epsilon",
            "bound_kind",
            "bound_value",
            "evidence",
            "p",
            "p_low",
            "p_high",
            "verdict",
        ])?;
        for row in &self.rows {
            for v in &row.verifications {
                w.write_record([
                    fmt_f64(row.epsilon),
                    serde_json::to_value(v.bound_kind)?.as_str().unwrap_or_default().to_string(),
                    fmt_f64(v.bound_value),
                    v.evidence.clone(),
                    fmt_f64(v.p),
                    fmt_f64(v.p_low),
                    fmt_f64(v.p_high),
                    serde_json::to_value(v.verdict)?.as_str().unwrap_or_default().to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn corrupt(report: &mut BoundReport) {
    let bad = if report.bound_kind.is_lower() { 1.0 + 1e-3 } else { -1e-3 };
    report.value = bad;
    report.raw_value = bad;
}

fn exact_if_enumerable(config: &ExperimentConfig, event: &Event) -> Result<Option<ExactProbability>> {
    if !config.verify.exact || config.family().finite_support().is_none() {
        return Ok(None);
    }
    match enumerate_exact(&config.family(), event) {
        Ok(p) => Ok(Some(p)),
        Err(Error::StateSpaceTooLarge { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Bounds against Monte Carlo estimates (and the exact oracle when the
/// state space is small) for every configured ε.
pub fn run_verify(config: &ExperimentConfig, corrupt_bound: bool) -> Result<VerifyCommandReport> {
    let mp = checked_profile(config)?;
    let epsilons: Vec<Option<f64>> = if config.verify.epsilons.is_empty() {
        vec![None]
    } else {
        config.verify.epsilons.iter().copied().map(Some).collect()
    };
    let event_seed = derive_seed(config.master_seed, "events");
    let mut rows = Vec::new();
    for eps in epsilons {
        let chi = eps.map_or(config.chi, |e| config.chi.with_epsilon(e));
        let threshold = eps.unwrap_or_else(|| config.threshold());
        for mut bound in bounds_for(config, mp.as_ref(), &chi, threshold)? {
            if corrupt_bound {
                corrupt(&mut bound);
            }
            let event = &bound.event.event;
            let estimate = estimate_event(&config.spec(), event, config.replications, event_seed, config.verify.level)?;
            let exact = exact_if_enumerable(config, event)?;
            let mut verifications = vec![verify_bound(Evidence::Estimate(&estimate), &bound)?];
            if let Some(p) = &exact {
                verifications.push(verify_bound(Evidence::Exact(p), &bound)?);
            }
            rows.push(VerifyRow {
                epsilon: threshold,
                bound,
                estimate,
                exact,
                verifications,
            });
        }
    }
    let all = rows.iter().flat_map(|r| &r.verifications);
    let checks = all.clone().count();
    let violations = all.filter(|v| v.verdict == Verdict::Violation).count();
    Ok(VerifyCommandReport {
        scenario: config.scenario.clone(),
        rows,
        checks,
        violations,
    })
}

pub fn run_demi(config: &ExperimentConfig) -> Result<DemiCheckReport> {
    let batch = TrajectoryBatch::generate(&config.spec(), config.replications, config.master_seed)?;
    let process = match config.demi.process {
        DemiProcessChoice::S => DemiProcess::S,
        DemiProcessChoice::U => DemiProcess::U,
        DemiProcessChoice::V => DemiProcess::V,
        DemiProcessChoice::PhiOfSPlus => DemiProcess::PhiOfSPlus { phi: config.phi },
    };
    demi_check(&batch, process, &config.demi.family, config.demi.level)
}

fn write_demi_csv<W: std::io::Write>(report: &DemiCheckReport, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["j", "g", "margin", "se", "flagged", "negative_pointwise"])?;
    for p in &report.pairs {
        w.write_record([
            p.j.to_string(),
            p.g.clone(),
            fmt_f64(p.margin),
            fmt_f64(p.se),
            p.flagged.to_string(),
            p.negative_pointwise.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SllnCommandReport {
    pub scenario: String,
    pub trajectory: SllnTrajectoryReport,
    pub series: SeriesReport,
}

pub fn run_slln(config: &ExperimentConfig) -> Result<SllnCommandReport> {
    let checkpoints = config.checkpoints();
    let trajectory = slln_trajectory(
        &config.spec(),
        &config.phi,
        &config.chi,
        &config.weights,
        config.replications,
        config.master_seed,
        &checkpoints,
    )?;
    let horizon = config
        .slln
        .series_horizon
        .unwrap_or(*checkpoints.last().expect("nonempty"));
    let window = config.slln.tail_window.unwrap_or(horizon / 10).max(1);
    let mp = profile_for(config, horizon)?;
    if let Some(diag) = mp.integrability.as_ref().filter(|d| d.non_integrable) {
        return Err(Error::NonIntegrable {
            detail: diag.describe(),
        });
    }
    let series_spec = SllnSeriesSpec::from_profile(&mp, &config.chi, config.weights.clone());
    let series = slln_series_check(&series_spec, horizon, window)?;
    Ok(SllnCommandReport {
        scenario: config.scenario.clone(),
        trajectory,
        series,
    })
}

pub fn run_enumerate(config: &ExperimentConfig) -> Result<ExactProbability> {
    let n = config.n();
    let event = match config.enumerate.event {
        EnumerateEvent::AllWithin => Event::all_within(config.phi, config.chi, config.weights.clone(), n),
        EnumerateEvent::MaxExceeds => Event::MaxExceeds(MaxEvent {
            weights: config.weights.clone(),
            epsilon: config.threshold(),
            m: config.bound.m,
            n,
            sided: config.bound.sided,
            inclusive: config.enumerate.inclusive,
        }),
    };
    enumerate_exact(&config.family(), &event)
}
