//! Designer-planned deployment: explicit non-overlapping sectors, each
//! filled uniformly with its own node quota, then concatenated.

use crate::auto::sample_point_in_annulus;
use crate::deployment::{Deployment, Origin, Point};
use crate::error::{Error, Result};
use crate::geometry::{SectorSpec, Shape};
use crate::rng::{RandomStream, UniformSource};

#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentPlan {
    sectors: Vec<SectorSpec>,
}

impl DeploymentPlan {
    /// Validates every sector and pairwise non-overlap.
    pub fn new(sectors: Vec<SectorSpec>) -> Result<Self> {
        if sectors.is_empty() {
            return Err(Error::Domain("a plan needs at least one sector".into()));
        }
        for (i, s) in sectors.iter().enumerate() {
            s.validate()
                .map_err(|e| Error::Domain(format!("sector {}: {e}", i + 1)))?;
        }
        check_non_overlap(&sectors)?;
        Ok(Self { sectors })
    }

    pub fn sectors(&self) -> &[SectorSpec] {
        &self.sectors
    }

    /// Total node count across sectors.
    pub fn total_nodes(&self) -> usize {
        self.sectors.iter().map(|s| s.n).sum()
    }

    /// Summed sector area.
    pub fn total_area(&self) -> f64 {
        self.sectors
            .iter()
            .map(|s| s.shape.area().expect("validated at construction"))
            .sum()
    }
}

pub fn sample_point_in_sector<S: UniformSource + ?Sized>(
    sector: &SectorSpec,
    s: &mut S,
) -> Result<(f64, f64)> {
    sector.shape.validate()?;
    match sector.shape {
        Shape::Annulus { r_inner, r_outer } => sample_point_in_annulus(r_inner, r_outer, s),
        Shape::Disk { r } => sample_point_in_annulus(0.0, r, s),
        Shape::Rect { x0, y0, x1, y1 } => {
            let x = x0 + s.uniform01() * (x1 - x0);
            let y = y0 + s.uniform01() * (y1 - y0);
            Ok((x, y))
        }
    }
}

/// Finds the first pair of sectors (1-based, in list order) whose interiors
/// intersect. Touching boundaries do not count as overlap.
pub fn check_non_overlap(sectors: &[SectorSpec]) -> Result<()> {
    for i in 0..sectors.len() {
        for j in i + 1..sectors.len() {
            if interiors_intersect(&sectors[i].shape, &sectors[j].shape) {
                return Err(Error::Overlap {
                    first: i + 1,
                    second: j + 1,
                });
            }
        }
    }
    Ok(())
}

fn interiors_intersect(a: &Shape, b: &Shape) -> bool {
    match (a.radial_bounds(), b.radial_bounds()) {
        (Some((a_in, a_out)), Some((b_in, b_out))) => a_in.max(b_in) < a_out.min(b_out),
        (Some(ring), None) => ring_meets_rect(ring, b),
        (None, Some(ring)) => ring_meets_rect(ring, a),
        (None, None) => {
            let (
                Shape::Rect {
                    x0: ax0,
                    y0: ay0,
                    x1: ax1,
                    y1: ay1,
                },
                Shape::Rect {
                    x0: bx0,
                    y0: by0,
                    x1: bx1,
                    y1: by1,
                },
            ) = (a, b)
            else {
                unreachable!("non-circular shapes are rectangles")
            };
            ax0.max(*bx0) < ax1.min(*bx1) && ay0.max(*by0) < ay1.min(*by1)
        }
    }
}

/// The distances from the origin to points of an open box fill the open
/// interval between its nearest-point distance and its farthest-corner
/// distance, so the box meets the open ring iff those intervals intersect.
fn ring_meets_rect((r_in, r_out): (f64, f64), rect: &Shape) -> bool {
    let Shape::Rect { x0, y0, x1, y1 } = *rect else {
        unreachable!("caller passes a rectangle")
    };
    let nearest_x = 0.0f64.clamp(x0, x1);
    let nearest_y = 0.0f64.clamp(y0, y1);
    let d_min = nearest_x.hypot(nearest_y);
    let d_max = x0.abs().max(x1.abs()).hypot(y0.abs().max(y1.abs()));
    r_in.max(d_min) < r_out.min(d_max)
}

/// Fills each sector from its own substream `(seed, stream_base + i)` for
/// 1-based sector index `i`, and concatenates the results in sector order.
pub fn deploy_planned(plan: &DeploymentPlan, seed: u64, stream_base: u64) -> Result<Deployment> {
    let mut points = Vec::with_capacity(plan.total_nodes());
    for (i, sector) in plan.sectors().iter().enumerate() {
        let index = i + 1;
        let mut stream = RandomStream::new(seed, stream_base + index as u64);
        points.extend(sector_points(sector, index as u32, &mut stream)?);
    }
    Ok(Deployment {
        points,
        origin: Origin::Planned {
            plan: plan.clone(),
            seed,
        },
    })
}

fn sector_points<S: UniformSource + ?Sized>(
    sector: &SectorSpec,
    tag: u32,
    s: &mut S,
) -> Result<Vec<Point>> {
    (0..sector.n)
        .map(|_| sample_point_in_sector(sector, s).map(|(x, y)| Point { x, y, sector: tag }))
        .collect()
}
