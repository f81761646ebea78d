use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netdeploy::stats::{ReportOptions, DEFAULT_CHI2_ALPHA, DEFAULT_KS_ALPHA};
use netdeploy::NetworkConfig;
use netdeploy_cli::bench::{self, BenchPlan};
use netdeploy_cli::commands::{self, OutputOptions};
use netdeploy_cli::io::{self, Format};
use netdeploy_cli::CliError;

#[derive(Parser)]
#[command(
    name = "netdeploy",
    version,
    about = "Inhomogeneous random node deployment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Automatic layered deployment from size, maximum layers and node count.
    Deploy {
        /// Network radius L.
        #[arg(long)]
        size: f64,
        /// Maximum number of layers n_Lmax.
        #[arg(long = "max-layers")]
        max_layers: usize,
        /// Total node count n_S.
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Deployment over designer-specified sectors read from a JSON plan.
    Plan {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check a generated run and write a JSON report.
    Validate {
        /// Points file (`.points.csv` or `.points.json`).
        #[arg(long)]
        points: PathBuf,
        /// Metadata file; defaults to the `.meta.json` next to the points.
        #[arg(long)]
        meta: Option<PathBuf>,
        /// Report path; defaults to `<run>.report.json` next to the metadata.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Significance level for every test. Without it, KS uses 0.01 and
        /// chi-square tests use 0.001.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Time worst-case deployments (n_L = n_Lmax) over node and layer ladders.
    Bench {
        #[arg(long = "out-dir", default_value = ".")]
        out_dir: PathBuf,
        #[arg(long = "node-ladder", value_delimiter = ',', default_values_t = [10_000usize, 100_000, 1_000_000, 10_000_000])]
        node_ladder: Vec<usize>,
        /// n_Lmax during the node sweep.
        #[arg(long = "max-layers", default_value_t = 10)]
        max_layers: usize,
        #[arg(long = "layer-ladder", value_delimiter = ',', default_values_t = [10usize, 100, 1_000, 10_000])]
        layer_ladder: Vec<usize>,
        /// n_S during the layer sweep.
        #[arg(long, default_value_t = 100_000)]
        nodes: usize,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, default_value_t = 1)]
    runs: u64,
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write `x y sector` scatter and ring-radius files.
    #[arg(long = "plot-data")]
    plot_data: bool,
}

impl From<OutArgs> for OutputOptions {
    fn from(a: OutArgs) -> Self {
        OutputOptions {
            runs: a.runs,
            out_dir: a.out_dir,
            format: a.format,
            plot_data: a.plot_data,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Deploy {
            size,
            max_layers,
            nodes,
            seed,
            out,
        } => {
            let config = NetworkConfig::new(size, max_layers, nodes, seed);
            for line in commands::deploy(&config, &out.into())? {
                println!("{line}");
            }
        }
        Command::Plan { plan, seed, out } => {
            for line in commands::plan(&plan, seed, &out.into())? {
                println!("{line}");
            }
        }
        Command::Validate {
            points,
            meta,
            report,
            alpha,
        } => {
            let opts = ReportOptions {
                ks_alpha: alpha.unwrap_or(DEFAULT_KS_ALPHA),
                chi2_alpha: alpha.unwrap_or(DEFAULT_CHI2_ALPHA),
                ..ReportOptions::default()
            };
            let v = commands::validate(&points, meta.as_deref(), report.as_deref(), &opts)?;
            println!(
                "pass: {} points, {} sectors -> {}",
                v.report.total_points,
                v.report.per_sector.len(),
                v.report_path.display()
            );
        }
        Command::Bench {
            out_dir,
            node_ladder,
            max_layers,
            layer_ladder,
            nodes,
            repeats,
            seed,
        } => {
            let plan = BenchPlan {
                node_ladder,
                sweep_layers: max_layers,
                layer_ladder,
                sweep_nodes: nodes,
                repeats,
                seed,
            };
            let result = bench::run(&plan)?;
            fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
            let csv_path = out_dir.join("bench.csv");
            fs::write(&csv_path, result.to_csv()).map_err(|e| CliError::io(&csv_path, e))?;
            let fit = serde_json::json!({
                "node_exponent": result.node_exponent,
                "layer_exponent": result.layer_exponent,
            });
            io::write_json(&out_dir.join("bench.fit.json"), &fit)?;
            print!("{}", result.to_csv());
            println!(
                "fitted exponent: n_S {:.3}, n_Lmax {:.3}",
                result.node_exponent.unwrap_or(f64::NAN),
                result.layer_exponent.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
