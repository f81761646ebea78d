//! On-disk formats: points (CSV or JSON), per-run metadata JSON, plan files
//! and plot data.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use netdeploy::{
    AutoDeploymentPlan, Deployment, DeploymentPlan, LayerSet, NetworkConfig, Origin, Point,
    SectorSpec, Shape,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Metadata written next to every automatic run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutoMeta {
    #[serde(rename = "L")]
    pub size: f64,
    #[serde(rename = "n_Lmax")]
    pub max_layers: usize,
    #[serde(rename = "n_S")]
    pub nodes: usize,
    pub seed: u64,
    pub run: u64,
    #[serde(rename = "n_L")]
    pub layers: usize,
    pub radii: Vec<f64>,
    pub n_in: usize,
    pub n_out: usize,
}

/// Metadata written next to every planned run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanMeta {
    pub seed: u64,
    pub run: u64,
    #[serde(rename = "n_S")]
    pub nodes: usize,
    pub sectors: Vec<SectorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RunMeta {
    Auto(AutoMeta),
    Plan(PlanMeta),
}

impl RunMeta {
    pub fn for_deployment(d: &Deployment, run: u64) -> Self {
        match &d.origin {
            Origin::Automatic { config, plan } => RunMeta::Auto(AutoMeta {
                size: config.size,
                max_layers: config.max_layers,
                nodes: config.nodes,
                seed: config.seed,
                run,
                layers: plan.layer_count(),
                radii: plan.layer_set.radii().to_vec(),
                n_in: plan.n_in,
                n_out: plan.n_out,
            }),
            Origin::Planned { plan, seed } => RunMeta::Plan(PlanMeta {
                seed: *seed,
                run,
                nodes: plan.total_nodes(),
                sectors: plan.sectors().to_vec(),
            }),
        }
    }

    /// Rebuilds a deployment from re-read points and this metadata.
    pub fn into_deployment(self, points: Vec<Point>) -> Result<Deployment, CliError> {
        let origin = match self {
            RunMeta::Auto(m) => {
                if m.radii.len() + 1 != m.layers {
                    return Err(CliError::Parse(format!(
                        "metadata lists {} radii for n_L = {}",
                        m.radii.len(),
                        m.layers
                    )));
                }
                let layer_set = LayerSet::new(m.size, m.radii)
                    .map_err(|e| CliError::Parse(format!("metadata: {e}")))?;
                Origin::Automatic {
                    config: NetworkConfig::new(m.size, m.max_layers, m.nodes, m.seed),
                    plan: AutoDeploymentPlan {
                        n_in: m.n_in,
                        n_out: m.n_out,
                        layer_set,
                    },
                }
            }
            RunMeta::Plan(m) => Origin::Planned {
                plan: DeploymentPlan::new(m.sectors)
                    .map_err(|e| CliError::Parse(format!("metadata: {e}")))?,
                seed: m.seed,
            },
        };
        Ok(Deployment { points, origin })
    }
}

/// Paths of the files written for one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunFiles {
    pub points: PathBuf,
    pub meta: PathBuf,
    pub plot: Option<(PathBuf, PathBuf)>,
}

pub fn run_stem(run: u64) -> String {
    format!("run_{run:04}")
}

/// Metadata path belonging to a points file: `<stem>.points.<ext>` maps to
/// `<stem>.meta.json`.
pub fn meta_path_for(points: &Path) -> PathBuf {
    let name = points
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or_default();
    let stem = name
        .strip_suffix(".points.csv")
        .or_else(|| name.strip_suffix(".points.json"))
        .unwrap_or_else(|| name.rsplit_once('.').map_or(name, |(s, _)| s));
    points.with_file_name(format!("{stem}.meta.json"))
}

pub fn write_run(
    dir: &Path,
    d: &Deployment,
    run: u64,
    format: Format,
    plot_data: bool,
) -> Result<RunFiles, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let stem = run_stem(run);
    let points = dir.join(format!("{stem}.points.{}", format.extension()));
    match format {
        Format::Csv => write_points_csv(&points, &d.points)?,
        Format::Json => write_json(&points, &d.points)?,
    }
    let meta = dir.join(format!("{stem}.meta.json"));
    write_json(&meta, &RunMeta::for_deployment(d, run))?;

    let plot = if plot_data {
        let scatter = dir.join(format!("{stem}.plot.txt"));
        let rings = dir.join(format!("{stem}.rings.txt"));
        write_plot_data(&scatter, &rings, d)?;
        Some((scatter, rings))
    } else {
        None
    };
    Ok(RunFiles { points, meta, plot })
}

pub fn write_points_csv(path: &Path, points: &[Point]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    for p in points {
        w.serialize(p)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_points(path: &Path) -> Result<Vec<Point>, CliError> {
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())));
    }
    let mut r = csv::Reader::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    r.deserialize()
        .collect::<Result<Vec<Point>, _>>()
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, value)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    w.write_all(b"\n").map_err(|e| CliError::io(path, e))?;
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_meta(path: &Path) -> Result<RunMeta, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Reads a plan file: a JSON array of sector objects.
///
/// Parse errors carry serde's line and column; invalid sectors are named by
/// their 1-based position.
pub fn read_plan(path: &Path) -> Result<DeploymentPlan, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let sectors: Vec<SectorSpec> = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    DeploymentPlan::new(sectors).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

/// Whitespace-separated `x y sector` rows plus one ring radius per line.
pub fn write_plot_data(scatter: &Path, rings: &Path, d: &Deployment) -> Result<(), CliError> {
    let mut out = String::with_capacity(d.points.len() * 48);
    for p in &d.points {
        out.push_str(&format!("{} {} {}\n", p.x, p.y, p.sector));
    }
    fs::write(scatter, out).map_err(|e| CliError::io(scatter, e))?;

    let mut radii: Vec<f64> = match &d.origin {
        Origin::Automatic { plan, .. } => {
            let mut r = plan.layer_set.radii().to_vec();
            r.push(plan.layer_set.size());
            r
        }
        Origin::Planned { plan, .. } => plan
            .sectors()
            .iter()
            .filter_map(|s| match s.shape {
                Shape::Annulus { r_inner, r_outer } => Some(vec![r_inner, r_outer]),
                Shape::Disk { r } => Some(vec![r]),
                Shape::Rect { .. } => None,
            })
            .flatten()
            .filter(|&r| r > 0.0)
            .collect(),
    };
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let text: String = radii.iter().map(|r| format!("{r}\n")).collect();
    fs::write(rings, text).map_err(|e| CliError::io(rings, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meta_path_mapping() {
        assert_eq!(
            meta_path_for(Path::new("out/run_0003.points.csv")),
            PathBuf::from("out/run_0003.meta.json")
        );
        assert_eq!(
            meta_path_for(Path::new("run_0001.points.json")),
            PathBuf::from("run_0001.meta.json")
        );
        assert_eq!(
            meta_path_for(Path::new("a/b.csv")),
            PathBuf::from("a/b.meta.json")
        );
    }

    #[test]
    fn auto_meta_key_order() {
        let meta = RunMeta::Auto(AutoMeta {
            size: 1.0,
            max_layers: 5,
            nodes: 100,
            seed: 42,
            run: 0,
            layers: 3,
            radii: vec![0.25, 0.5],
            n_in: 34,
            n_out: 33,
        });
        assert_eq!(
            serde_json::to_string(&meta).unwrap(),
            r#"{"L":1.0,"n_Lmax":5,"n_S":100,"seed":42,"run":0,"n_L":3,"radii":[0.25,0.5],"n_in":34,"n_out":33}"#
        );
    }

    #[test]
    fn meta_variants_parse() {
        let auto: RunMeta = serde_json::from_str(
            r#"{"L":1.0,"n_Lmax":5,"n_S":100,"seed":42,"run":0,"n_L":2,"radii":[0.5],"n_in":50,"n_out":50}"#,
        )
        .unwrap();
        assert!(matches!(auto, RunMeta::Auto(_)));
        let plan: RunMeta = serde_json::from_str(
            r#"{"seed":1,"run":0,"n_S":3,"sectors":[{"shape":"disk","r":1.0,"n":3}]}"#,
        )
        .unwrap();
        assert!(matches!(plan, RunMeta::Plan(_)));
    }
}
