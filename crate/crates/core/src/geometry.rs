//! Sector shapes, their areas and number densities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Area of the annulus `r_inner <= |p| <= r_outer`.
pub fn annulus_area(r_inner: f64, r_outer: f64) -> Result<f64> {
    if r_inner.is_nan() || r_inner < 0.0 {
        return Err(domain(format!("inner radius {r_inner} must be >= 0")));
    }
    if r_inner >= r_outer || !r_outer.is_finite() {
        return Err(domain(format!(
            "inner radius {r_inner} must be below outer radius {r_outer}"
        )));
    }
    Ok(PI * (r_outer * r_outer - r_inner * r_inner))
}

/// Support domain of a sector. Circular shapes are centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Shape {
    Annulus { r_inner: f64, r_outer: f64 },
    Disk { r: f64 },
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
}

impl Shape {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Shape::Annulus { r_inner, r_outer } => annulus_area(r_inner, r_outer).map(drop),
            Shape::Disk { r } => {
                if r > 0.0 && r.is_finite() {
                    Ok(())
                } else {
                    Err(domain(format!("disk radius {r} must be > 0")))
                }
            }
            Shape::Rect { x0, y0, x1, y1 } => {
                let finite = [x0, y0, x1, y1].iter().all(|v| v.is_finite());
                if finite && x0 < x1 && y0 < y1 {
                    Ok(())
                } else {
                    Err(domain(format!(
                        "rectangle ({x0}, {y0})-({x1}, {y1}) needs x0 < x1 and y0 < y1"
                    )))
                }
            }
        }
    }

    pub fn area(&self) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            Shape::Annulus { r_inner, r_outer } => annulus_area(r_inner, r_outer)?,
            Shape::Disk { r } => PI * r * r,
            Shape::Rect { x0, y0, x1, y1 } => (x1 - x0) * (y1 - y0),
        })
    }

    /// Radial bounds `(inner, outer)` for circular shapes, `None` for rectangles.
    pub fn radial_bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Shape::Annulus { r_inner, r_outer } => Some((r_inner, r_outer)),
            Shape::Disk { r } => Some((0.0, r)),
            Shape::Rect { .. } => None,
        }
    }

    /// Closed-domain membership, widened by `tol` on every boundary.
    pub fn contains(&self, x: f64, y: f64, tol: f64) -> bool {
        match *self {
            Shape::Rect { x0, y0, x1, y1 } => {
                x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol
            }
            _ => {
                let (lo, hi) = self.radial_bounds().expect("circular shape");
                let r = x.hypot(y);
                r >= lo - tol && r <= hi + tol
            }
        }
    }
}

/// One sub-region of a planned deployment together with its node quota.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    #[serde(flatten)]
    pub shape: Shape,
    pub n: usize,
}

impl SectorSpec {
    pub fn new(shape: Shape, n: usize) -> Self {
        Self { shape, n }
    }

    pub fn annulus(r_inner: f64, r_outer: f64, n: usize) -> Self {
        Self::new(Shape::Annulus { r_inner, r_outer }, n)
    }

    pub fn disk(r: f64, n: usize) -> Self {
        Self::new(Shape::Disk { r }, n)
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64, n: usize) -> Self {
        Self::new(Shape::Rect { x0, y0, x1, y1 }, n)
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if self.n == 0 {
            return Err(domain("sector node count must be >= 1"));
        }
        Ok(())
    }
}

pub fn sector_area(sector: &SectorSpec) -> Result<f64> {
    sector.validate()?;
    sector.shape.area()
}

/// Number density `n / A` of a sector.
pub fn sector_density(sector: &SectorSpec) -> Result<f64> {
    Ok(sector.n as f64 / sector_area(sector)?)
}
