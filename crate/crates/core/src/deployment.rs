use serde::{Deserialize, Serialize};

use crate::auto::AutoDeploymentPlan;
use crate::config::NetworkConfig;
use crate::geometry::Shape;
use crate::planned::DeploymentPlan;

/// A generated node position tagged with its 1-based sector (layer) index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub sector: u32,
}

impl Point {
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// How a deployment was produced, carrying everything needed to check it.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    Automatic {
        config: NetworkConfig,
        plan: AutoDeploymentPlan,
    },
    Planned {
        plan: DeploymentPlan,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub points: Vec<Point>,
    pub origin: Origin,
}

/// Membership tolerance for points whose radius is recomputed from
/// Cartesian coordinates. `hypot(r cos t, r sin t)` is within a few ulp of `r`.
pub const MEMBERSHIP_RTOL: f64 = 1e-12;

impl Deployment {
    pub fn sector_count(&self) -> usize {
        match &self.origin {
            Origin::Automatic { plan, .. } => plan.layer_count(),
            Origin::Planned { plan, .. } => plan.sectors().len(),
        }
    }

    /// Domain of sector `index` (1-based).
    pub fn sector_shape(&self, index: usize) -> Option<Shape> {
        match &self.origin {
            Origin::Automatic { plan, .. } => {
                let (r_inner, r_outer) = plan.layer_set.bounds(index)?;
                Some(Shape::Annulus { r_inner, r_outer })
            }
            Origin::Planned { plan, .. } => {
                plan.sectors().get(index.checked_sub(1)?).map(|s| s.shape)
            }
        }
    }

    /// Node count each sector is supposed to hold.
    pub fn expected_counts(&self) -> Vec<usize> {
        match &self.origin {
            Origin::Automatic { plan, .. } => (1..=plan.layer_count())
                .map(|j| if j == 1 { plan.n_in } else { plan.n_out })
                .collect(),
            Origin::Planned { plan, .. } => plan.sectors().iter().map(|s| s.n).collect(),
        }
    }

    /// Whether `point` lies in the domain of the sector it is tagged with.
    ///
    /// Automatic layers use `[L1, L2)` (closed at `L` for the outermost
    /// layer); planned sectors use closed domains. Both are widened by
    /// [`MEMBERSHIP_RTOL`] relative to the outer scale.
    pub fn point_in_sector(&self, point: &Point) -> bool {
        let index = point.sector as usize;
        match &self.origin {
            Origin::Automatic { plan, .. } => {
                let Some((lo, hi)) = plan.layer_set.bounds(index) else {
                    return false;
                };
                let tol = MEMBERSHIP_RTOL * plan.layer_set.size();
                let r = point.radius();
                let below_hi = if index == plan.layer_count() {
                    r <= hi + tol
                } else {
                    r < hi + tol
                };
                r >= lo - tol && below_hi
            }
            Origin::Planned { .. } => match self.sector_shape(index) {
                Some(shape) => {
                    let scale = match shape {
                        Shape::Rect { x0, y0, x1, y1 } => {
                            [x0, y0, x1, y1].iter().fold(1.0f64, |m, v| m.max(v.abs()))
                        }
                        _ => shape.radial_bounds().map_or(1.0, |(_, hi)| hi.max(1.0)),
                    };
                    shape.contains(point.x, point.y, MEMBERSHIP_RTOL * scale)
                }
                None => false,
            },
        }
    }
}
