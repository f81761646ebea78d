use std::path::{Path, PathBuf};

use netdeploy::stats::{build_report, ReportOptions, StatReport};
use netdeploy::{
    deploy_automatic, deploy_planned, Deployment, DeploymentPlan, NetworkConfig, Origin,
    RandomStream,
};
use rayon::prelude::*;

use crate::io::{self, Format, RunFiles};
use crate::CliError;

/// Output options shared by `deploy` and `plan`.
#[derive(Debug, Clone)]
pub struct OutputOptions {
    pub runs: u64,
    pub out_dir: PathBuf,
    pub format: Format,
    pub plot_data: bool,
}

/// Planned runs use stream `run * 2^32 + sector index`.
pub const PLAN_RUN_STRIDE: u64 = 1 << 32;

/// Runs `opts.runs` automatic deployments; run `k` draws from stream `k`.
/// Returns one summary line per run, in run order.
pub fn deploy(config: &NetworkConfig, opts: &OutputOptions) -> Result<Vec<String>, CliError> {
    let config = config.validated()?;
    check_runs(opts.runs)?;
    (0..opts.runs)
        .into_par_iter()
        .map(|run| {
            let mut stream = RandomStream::new(config.seed, run);
            let d = deploy_automatic(&config, &mut stream)?;
            let files = io::write_run(&opts.out_dir, &d, run, opts.format, opts.plot_data)?;
            Ok(summary(&d, run, &files))
        })
        .collect()
}

pub fn plan(plan_path: &Path, seed: u64, opts: &OutputOptions) -> Result<Vec<String>, CliError> {
    let plan: DeploymentPlan = io::read_plan(plan_path)?;
    check_runs(opts.runs)?;
    (0..opts.runs)
        .into_par_iter()
        .map(|run| {
            let d = deploy_planned(&plan, seed, run * PLAN_RUN_STRIDE)?;
            let files = io::write_run(&opts.out_dir, &d, run, opts.format, opts.plot_data)?;
            Ok(summary(&d, run, &files))
        })
        .collect()
}

fn check_runs(runs: u64) -> Result<(), CliError> {
    if runs == 0 {
        return Err(CliError::Invalid("--runs must be >= 1".into()));
    }
    if runs >= PLAN_RUN_STRIDE {
        return Err(CliError::Invalid(format!(
            "--runs must be < {PLAN_RUN_STRIDE}"
        )));
    }
    Ok(())
}

fn summary(d: &Deployment, run: u64, files: &RunFiles) -> String {
    let head = match &d.origin {
        Origin::Automatic { plan, .. } => format!(
            "run {run}: {} points, n_L={} n_in={} n_out={}",
            d.points.len(),
            plan.layer_count(),
            plan.n_in,
            plan.n_out
        ),
        Origin::Planned { plan, .. } => format!(
            "run {run}: {} points in {} sectors",
            d.points.len(),
            plan.sectors().len()
        ),
    };
    format!("{head} -> {}", files.points.display())
}

/// Result of `validate`: the report and where it was written.
#[derive(Debug)]
pub struct Validation {
    pub report: StatReport,
    pub report_path: PathBuf,
}

/// Re-reads a run, checks it, and writes the JSON report.
///
/// A report is written even when checks fail; the failure is returned
/// afterwards as [`CliError::ValidationFailed`].
pub fn validate(
    points_path: &Path,
    meta_path: Option<&Path>,
    report_path: Option<&Path>,
    opts: &ReportOptions,
) -> Result<Validation, CliError> {
    let meta_path = meta_path.map_or_else(|| io::meta_path_for(points_path), Path::to_path_buf);
    let meta = io::read_meta(&meta_path)?;
    let points = io::read_points(points_path)?;
    let d = meta.into_deployment(points)?;
    let report = build_report(&d, opts).map_err(|e| CliError::Parse(e.to_string()))?;

    let report_path =
        report_path.map_or_else(|| default_report_path(&meta_path), Path::to_path_buf);
    io::write_json(&report_path, &report)?;

    if report.pass {
        Ok(Validation {
            report,
            report_path,
        })
    } else {
        Err(CliError::ValidationFailed(failure_summary(&report)))
    }
}

/// `<stem>.meta.json` maps to `<stem>.report.json`.
fn default_report_path(meta: &Path) -> PathBuf {
    let name = meta
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let stem = name.strip_suffix(".meta.json").unwrap_or(&name);
    meta.with_file_name(format!("{stem}.report.json"))
}

fn failure_summary(r: &StatReport) -> String {
    let mut lines = Vec::new();
    if !r.counts_match {
        for s in r.per_sector.iter().filter(|s| s.count != s.expected) {
            lines.push(format!(
                "sector {}: {} points, expected {}",
                s.index, s.count, s.expected
            ));
        }
    }
    for m in &r.misplaced {
        lines.push(format!(
            "point {} at radius {} lies outside its sector {}",
            m.index, m.radius, m.sector
        ));
    }
    for t in r.radial_ks.iter().filter(|t| !t.outcome.pass) {
        lines.push(format!(
            "sector {}: radial KS {} >= {}",
            t.sector, t.outcome.statistic, t.outcome.critical
        ));
    }
    for t in r.areal_chi2.iter().filter(|t| !t.outcome.pass) {
        lines.push(format!(
            "sector {}: areal chi-square {} >= {}",
            t.sector, t.outcome.statistic, t.outcome.critical
        ));
    }
    if let Some(a) = r.angular_chi2.as_ref().filter(|a| !a.outcome.pass) {
        lines.push(format!(
            "angular chi-square {} >= {}",
            a.outcome.statistic, a.outcome.critical
        ));
    }
    lines.join("\n")
}
