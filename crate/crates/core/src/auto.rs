//! Automatic layered deployment.
//!
//! The disk of radius `L` is cut into `n_L` concentric layers by `n_L - 1`
//! sorted uniform radii. The innermost layer gets `n_in` nodes and each outer
//! layer gets `n_out = floor(n_S / n_L)`, with `n_in` absorbing the remainder.
//! Every layer is filled uniformly by area, so layer densities differ with
//! the random layer widths.
//!
//! Variates are consumed in a fixed order: one for the layer count, one per
//! radius, then two per point (radius, angle), innermost layer first.

use std::f64::consts::TAU;

use crate::config::NetworkConfig;
use crate::deployment::{Deployment, Origin, Point};
use crate::error::{domain, Result};
use crate::rng::{discrete_uniform_via_threshold, UniformSource};

/// Sorted layer radii partitioning the disk of radius `size` into annuli.
///
/// Radii are non-decreasing; two equal radii (a floating collision) give a
/// zero-width layer whose points all sit at its inner radius.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerSet {
    size: f64,
    radii: Vec<f64>,
}

impl LayerSet {
    /// Builds a layer set from radii that are already sorted.
    pub fn new(size: f64, radii: Vec<f64>) -> Result<Self> {
        if !(size > 0.0 && size.is_finite()) {
            return Err(domain(format!("network size {size} must be > 0")));
        }
        if radii.is_empty() {
            return Err(domain("a layer set needs at least one radius"));
        }
        if let Some(r) = radii.iter().find(|r| !(**r >= 0.0 && **r < size)) {
            return Err(domain(format!("layer radius {r} outside [0, {size})")));
        }
        if radii.windows(2).any(|w| w[0] > w[1]) {
            return Err(domain("layer radii must be sorted ascending"));
        }
        Ok(Self { size, radii })
    }

    pub fn size(&self) -> f64 {
        self.size
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Number of layers, `radii.len() + 1`.
    pub fn layer_count(&self) -> usize {
        self.radii.len() + 1
    }

    /// `(L1, L2)` of layer `j` (1-based).
    pub fn bounds(&self, j: usize) -> Option<(f64, f64)> {
        let n = self.layer_count();
        if j == 0 || j > n {
            return None;
        }
        let inner = if j == 1 { 0.0 } else { self.radii[j - 2] };
        let outer = if j == n { self.size } else { self.radii[j - 1] };
        Some((inner, outer))
    }

    pub fn widths(&self) -> Vec<f64> {
        (1..=self.layer_count())
            .map(|j| {
                let (a, b) = self.bounds(j).expect("index in range");
                b - a
            })
            .collect()
    }

    /// Layer containing radius `r` under `[L1, L2)` membership, closed at
    /// `L` for the outermost layer.
    pub fn layer_of(&self, r: f64) -> Option<usize> {
        if !(r >= 0.0 && r <= self.size) {
            return None;
        }
        // first radius strictly above r marks the layer's outer edge
        Some(self.radii.partition_point(|&b| b <= r) + 1)
    }
}

/// Layer count, node split and layer radii of one automatic run.
#[derive(Debug, Clone, PartialEq)]
pub struct AutoDeploymentPlan {
    pub n_in: usize,
    pub n_out: usize,
    pub layer_set: LayerSet,
}

impl AutoDeploymentPlan {
    pub fn layer_count(&self) -> usize {
        self.layer_set.layer_count()
    }

    pub fn total_nodes(&self) -> usize {
        self.n_in + (self.layer_count() - 1) * self.n_out
    }
}

pub fn sample_layer_count<S: UniformSource + ?Sized>(
    max_layers: usize,
    s: &mut S,
) -> Result<usize> {
    discrete_uniform_via_threshold(s, max_layers)
}

/// Returns `(n_in, n_out)`: `n_out = floor(n_S / n_L)` for every outer
/// layer and `n_in = n_S - (n_L - 1) n_out` for the innermost one.
pub fn split_nodes(nodes: usize, layers: usize) -> Result<(usize, usize)> {
    if layers < 2 {
        return Err(domain(format!("layer count must be >= 2, got {layers}")));
    }
    if nodes < layers {
        return Err(domain(format!(
            "{nodes} nodes cannot fill {layers} layers with at least one node each"
        )));
    }
    let n_out = nodes / layers;
    let n_in = nodes - (layers - 1) * n_out;
    Ok((n_in, n_out))
}

/// Draws `layers - 1` radii from `U[0, size)` in stream order and sorts them.
pub fn sample_layer_radii<S: UniformSource + ?Sized>(
    size: f64,
    layers: usize,
    s: &mut S,
) -> Result<LayerSet> {
    if !(size > 0.0 && size.is_finite()) {
        return Err(domain(format!("network size {size} must be > 0")));
    }
    if layers < 2 {
        return Err(domain(format!("layer count must be >= 2, got {layers}")));
    }
    let mut radii: Vec<f64> = (0..layers - 1).map(|_| s.uniform01() * size).collect();
    radii.sort_unstable_by(f64::total_cmp);
    LayerSet::new(size, radii)
}

/// Uniform point in the annulus `inner <= r < outer` by inverse transform on
/// the radius, `r = sqrt(inner^2 + u (outer^2 - inner^2))`, and a uniform
/// angle. Draws the radial variate first, then the angular one.
pub fn sample_point_in_annulus<S: UniformSource + ?Sized>(
    inner: f64,
    outer: f64,
    s: &mut S,
) -> Result<(f64, f64)> {
    if !(0.0..outer).contains(&inner) || !outer.is_finite() {
        return Err(domain(format!(
            "annulus needs 0 <= inner < outer, got [{inner}, {outer})"
        )));
    }
    Ok(annulus_point_unchecked(inner, outer, s))
}

#[inline]
fn annulus_point_unchecked<S: UniformSource + ?Sized>(
    inner: f64,
    outer: f64,
    s: &mut S,
) -> (f64, f64) {
    let u_r = s.uniform01();
    let u_t = s.uniform01();
    let inner_sq = inner * inner;
    let r = (inner_sq + u_r * (outer * outer - inner_sq)).sqrt();
    let (sin, cos) = (TAU * u_t).sin_cos();
    (r * cos, r * sin)
}

/// Runs the full automatic deployment for a validated config.
pub fn deploy_automatic<S: UniformSource + ?Sized>(
    config: &NetworkConfig,
    s: &mut S,
) -> Result<Deployment> {
    let config = config.validated()?;
    let layers = sample_layer_count(config.max_layers, s)?;
    deploy_layers(&config, layers, s)
}

/// Same as [`deploy_automatic`] with the layer count fixed to `layers`
/// instead of drawn, so no variate is spent on it.
///
/// Used to time the worst case `n_L = n_Lmax` and to replay a known plan.
pub fn deploy_with_layer_count<S: UniformSource + ?Sized>(
    config: &NetworkConfig,
    layers: usize,
    s: &mut S,
) -> Result<Deployment> {
    let config = config.validated()?;
    if !(2..=config.max_layers).contains(&layers) {
        return Err(domain(format!(
            "layer count {layers} outside [2, {}]",
            config.max_layers
        )));
    }
    deploy_layers(&config, layers, s)
}

fn deploy_layers<S: UniformSource + ?Sized>(
    config: &NetworkConfig,
    layers: usize,
    s: &mut S,
) -> Result<Deployment> {
    let (n_in, n_out) = split_nodes(config.nodes, layers)?;
    let layer_set = sample_layer_radii(config.size, layers, s)?;

    let mut points = Vec::with_capacity(config.nodes);
    for j in 1..=layers {
        let (inner, outer) = layer_set.bounds(j).expect("layer index in range");
        let quota = if j == 1 { n_in } else { n_out };
        let sector = j as u32;
        for _ in 0..quota {
            // zero-width layers are allowed here, unlike the public sampler
            let (x, y) = annulus_point_unchecked(inner, outer, s);
            points.push(Point { x, y, sector });
        }
    }

    Ok(Deployment {
        points,
        origin: Origin::Automatic {
            config: *config,
            plan: AutoDeploymentPlan {
                n_in,
                n_out,
                layer_set,
            },
        },
    })
}
