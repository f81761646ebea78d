//! Worst-case timing of automatic deployment, with the layer count pinned to
//! its maximum instead of drawn.

use std::time::Instant;

use netdeploy::{deploy_with_layer_count, NetworkConfig, RandomStream};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub nodes: usize,
    pub max_layers: usize,
    pub seconds: f64,
}

impl Timing {
    /// `n_S,n_Lmax,seconds` row.
    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.nodes, self.max_layers, self.seconds)
    }
}

pub const CSV_HEADER: &str = "n_S,n_Lmax,seconds";

/// Fastest of `repeats` worst-case deployments (`n_L = n_Lmax`) on a unit disk.
pub fn time_worst_case(
    nodes: usize,
    max_layers: usize,
    repeats: usize,
    seed: u64,
) -> Result<Timing, CliError> {
    let config = NetworkConfig::new(1.0, max_layers, nodes, seed).validated()?;
    let mut best = f64::INFINITY;
    for rep in 0..repeats.max(1) {
        let mut stream = RandomStream::new(seed, rep as u64);
        let start = Instant::now();
        let d = deploy_with_layer_count(&config, max_layers, &mut stream)?;
        let elapsed = start.elapsed().as_secs_f64();
        std::hint::black_box(&d);
        best = best.min(elapsed);
    }
    Ok(Timing {
        nodes,
        max_layers,
        seconds: best,
    })
}

/// Least-squares slope of `ln(seconds)` against `ln(x)`.
pub fn fit_exponent(samples: &[(f64, f64)]) -> Option<f64> {
    if samples.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, t)| (x.ln(), t.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub node_ladder: Vec<usize>,
    /// `n_Lmax` used during the node sweep.
    pub sweep_layers: usize,
    pub layer_ladder: Vec<usize>,
    /// `n_S` held fixed during the layer sweep.
    pub sweep_nodes: usize,
    pub repeats: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct BenchResult {
    pub node_sweep: Vec<Timing>,
    pub layer_sweep: Vec<Timing>,
    pub node_exponent: Option<f64>,
    pub layer_exponent: Option<f64>,
}

pub fn run(plan: &BenchPlan) -> Result<BenchResult, CliError> {
    let node_sweep = plan
        .node_ladder
        .iter()
        .map(|&n| time_worst_case(n, plan.sweep_layers, plan.repeats, plan.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let layer_sweep = plan
        .layer_ladder
        .iter()
        .map(|&l| time_worst_case(plan.sweep_nodes, l, plan.repeats, plan.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let node_exponent = fit_exponent(
        &node_sweep
            .iter()
            .map(|t| (t.nodes as f64, t.seconds))
            .collect::<Vec<_>>(),
    );
    let layer_exponent = fit_exponent(
        &layer_sweep
            .iter()
            .map(|t| (t.max_layers as f64, t.seconds))
            .collect::<Vec<_>>(),
    );
    Ok(BenchResult {
        node_sweep,
        layer_sweep,
        node_exponent,
        layer_exponent,
    })
}

impl BenchResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for t in self.node_sweep.iter().chain(&self.layer_sweep) {
            out.push_str(&t.csv_row());
            out.push('\n');
        }
        out
    }
}
