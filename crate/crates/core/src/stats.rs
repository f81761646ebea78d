//! Goodness-of-fit checks for generated deployments.

use std::f64::consts::TAU;

use serde::Serialize;
use statrs::function::gamma::{gamma_lr, gamma_ur};

use crate::deployment::{Deployment, Point};
use crate::error::{domain, Error, Result};
use crate::geometry::{annulus_area, Shape};

pub const DEFAULT_KS_ALPHA: f64 = 0.01;
pub const DEFAULT_CHI2_ALPHA: f64 = 0.001;

/// Smallest sample the asymptotic KS critical value is used for.
pub const KS_MIN_POINTS: usize = 30;
/// Minimum expected count per chi-square cell.
pub const MIN_EXPECTED_PER_CELL: usize = 5;

/// Survival function of the Kolmogorov distribution,
/// `Q(t) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 t^2)`.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 0.3 {
        // the alternating series converges slowly here; the value is 1 to
        // well below double precision anyway
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * t * t).exp();
        sum += sign * term;
        if term < 1e-18 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// `c(alpha)` with `Q(c) = alpha`; `c(0.01) ~ 1.628`.
pub fn kolmogorov_critical(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (mut lo, mut hi) = (0.3, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Upper-tail probability of the chi-square distribution.
pub fn chi2_sf(stat: f64, dof: usize) -> f64 {
    if stat <= 0.0 {
        return 1.0;
    }
    gamma_ur(dof as f64 / 2.0, stat / 2.0)
}

/// `x` with `P(X > x) = alpha` for `X ~ chi2(dof)`, found by bisection on the
/// regularized lower incomplete gamma function.
pub fn chi2_critical(alpha: f64, dof: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if dof == 0 {
        return Err(domain("chi-square needs at least one degree of freedom"));
    }
    let k = dof as f64;
    let target = 1.0 - alpha;
    let mut hi = k.max(1.0);
    while gamma_lr(k / 2.0, hi / 2.0) < target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-10 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if gamma_lr(k / 2.0, mid / 2.0) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "significance level {alpha} must be in (0, 1)"
        )))
    }
}

/// Outcome of a one-sample KS test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub critical: f64,
    pub pass: bool,
}

/// Outcome of a Pearson chi-square test against equal expected counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chi2Outcome {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub p_value: f64,
    pub pass: bool,
}

/// Sup-distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut u: Vec<f64> = samples.iter().map(|&x| cdf(x).clamp(0.0, 1.0)).collect();
    u.sort_unstable_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, &f)| ((i + 1) as f64 / n - f).max(f - i as f64 / n))
        .fold(0.0, f64::max)
}

/// Radius CDF of a uniform point in the annulus `[inner, outer]`.
pub fn annulus_radial_cdf(inner: f64, outer: f64) -> impl Fn(f64) -> f64 {
    let inner_sq = inner * inner;
    let span = outer * outer - inner_sq;
    move |r| (r * r - inner_sq) / span
}

/// KS test of point radii against `F(r) = (r^2 - inner^2) / (outer^2 - inner^2)`.
pub fn radial_ks(points: &[Point], inner: f64, outer: f64, alpha: f64) -> Result<KsOutcome> {
    annulus_area(inner, outer)?;
    if points.len() < KS_MIN_POINTS {
        return Err(Error::TooFewPoints {
            needed: KS_MIN_POINTS,
            got: points.len(),
        });
    }
    let radii: Vec<f64> = points.iter().map(Point::radius).collect();
    let statistic = ks_statistic(&radii, annulus_radial_cdf(inner, outer));
    let critical = kolmogorov_critical(alpha)? / (points.len() as f64).sqrt();
    Ok(KsOutcome {
        statistic,
        critical,
        pass: statistic < critical,
    })
}

/// Pearson chi-square of observed cell counts against a uniform expectation.
pub fn chi2_uniform(counts: &[usize], alpha: f64) -> Result<Chi2Outcome> {
    if counts.len() < 2 {
        return Err(domain("chi-square needs at least two cells"));
    }
    let n: usize = counts.iter().sum();
    let expected = n as f64 / counts.len() as f64;
    let statistic = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = counts.len() - 1;
    let critical = chi2_critical(alpha, dof)?;
    Ok(Chi2Outcome {
        statistic,
        dof,
        critical,
        p_value: chi2_sf(statistic, dof),
        pass: statistic < critical,
    })
}

fn angle(p: &Point) -> f64 {
    let t = p.y.atan2(p.x);
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

fn bin(fraction: f64, bins: usize) -> usize {
    ((fraction * bins as f64) as usize).min(bins - 1)
}

fn check_sample(points: usize, cells: usize) -> Result<()> {
    if cells < 2 {
        return Err(domain(format!(
            "{cells} cell(s) leave no degrees of freedom"
        )));
    }
    let needed = MIN_EXPECTED_PER_CELL * cells;
    if points < needed {
        return Err(Error::TooFewPoints {
            needed,
            got: points,
        });
    }
    Ok(())
}

/// Chi-square of the polar angle histogram (`bins` equal wedges) against uniform.
pub fn angular_chi2(points: &[Point], bins: usize, alpha: f64) -> Result<Chi2Outcome> {
    check_sample(points.len(), bins)?;
    let mut counts = vec![0usize; bins];
    for p in points {
        counts[bin(angle(p) / TAU, bins)] += 1;
    }
    chi2_uniform(&counts, alpha)
}

/// Radial boundaries `b_j = sqrt(inner^2 + (j / k) (outer^2 - inner^2))`,
/// `j = 0..=k`, splitting an annulus into `k` equal-area shells.
pub fn equal_area_shells(inner: f64, outer: f64, k: usize) -> Vec<f64> {
    let inner_sq = inner * inner;
    let span = outer * outer - inner_sq;
    (0..=k)
        .map(|j| (inner_sq + j as f64 / k as f64 * span).sqrt())
        .collect()
}

/// Chi-square over `radial_bins x angular_bins` equal-area annulus cells.
pub fn areal_chi2(
    points: &[Point],
    inner: f64,
    outer: f64,
    radial_bins: usize,
    angular_bins: usize,
    alpha: f64,
) -> Result<Chi2Outcome> {
    annulus_area(inner, outer)?;
    if radial_bins == 0 || angular_bins == 0 {
        return Err(domain("bin counts must be >= 1"));
    }
    check_sample(points.len(), radial_bins * angular_bins)?;
    let cdf = annulus_radial_cdf(inner, outer);
    let mut counts = vec![0usize; radial_bins * angular_bins];
    for p in points {
        // the radial CDF is the fraction of annulus area inside radius r
        let shell = bin(cdf(p.radius()).clamp(0.0, 1.0), radial_bins);
        let wedge = bin(angle(p) / TAU, angular_bins);
        counts[shell * angular_bins + wedge] += 1;
    }
    chi2_uniform(&counts, alpha)
}

/// Tally of points per 1-based sector index; element `i` is sector `i + 1`.
///
/// The result covers at least `sectors` entries and grows to the largest
/// tag seen.
pub fn count_per_sector(points: &[Point], sectors: usize) -> Result<Vec<usize>> {
    let mut counts = vec![0usize; sectors];
    for (index, p) in points.iter().enumerate() {
        if p.sector == 0 {
            return Err(Error::UntaggedPoint { index });
        }
        let slot = p.sector as usize - 1;
        if slot >= counts.len() {
            counts.resize(slot + 1, 0);
        }
        counts[slot] += 1;
    }
    Ok(counts)
}

/// Realized `count / area` for every sector of a deployment.
pub fn empirical_density_profile(d: &Deployment) -> Result<Vec<(usize, f64)>> {
    let counts = count_per_sector(&d.points, d.sector_count())?;
    (1..=d.sector_count())
        .map(|i| {
            let area = sector_area_of(d, i)?;
            Ok((i, counts[i - 1] as f64 / area))
        })
        .collect()
}

fn sector_area_of(d: &Deployment, index: usize) -> Result<f64> {
    let shape = d
        .sector_shape(index)
        .ok_or_else(|| domain(format!("no sector {index}")))?;
    match shape {
        // automatic layers may legitimately have zero width
        Shape::Annulus { r_inner, r_outer } if r_inner == r_outer => Ok(0.0),
        _ => shape.area(),
    }
}

/// Population standard deviation over mean.
pub fn coefficient_of_variation(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    var.sqrt() / mean
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorSummary {
    pub index: usize,
    pub expected: usize,
    pub count: usize,
    pub area: f64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorKs {
    pub sector: usize,
    #[serde(flatten)]
    pub outcome: KsOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorChi2 {
    pub sector: usize,
    pub radial_bins: usize,
    pub angular_bins: usize,
    #[serde(flatten)]
    pub outcome: Chi2Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularChi2 {
    pub bins: usize,
    #[serde(flatten)]
    pub outcome: Chi2Outcome,
}

/// A point lying outside the domain of the sector it is tagged with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Misplaced {
    pub index: usize,
    pub sector: u32,
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

/// Everything `validate` checks about one deployment.
///
/// Tests that need more points than a sector holds are listed in `skipped`
/// instead of being run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatReport {
    pub total_points: usize,
    pub per_sector: Vec<SectorSummary>,
    pub counts_match: bool,
    pub misplaced: Vec<Misplaced>,
    pub radial_ks: Vec<SectorKs>,
    pub angular_chi2: Option<AngularChi2>,
    pub areal_chi2: Vec<SectorChi2>,
    pub density_cv: f64,
    pub ks_alpha: f64,
    pub chi2_alpha: f64,
    pub skipped: Vec<String>,
    pub pass: bool,
}

/// Significance levels and binning used by [`build_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub ks_alpha: f64,
    pub chi2_alpha: f64,
    pub angular_bins: usize,
    pub areal_bins: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            ks_alpha: DEFAULT_KS_ALPHA,
            chi2_alpha: DEFAULT_CHI2_ALPHA,
            angular_bins: 36,
            areal_bins: 8,
        }
    }
}

pub fn build_report(d: &Deployment, opts: &ReportOptions) -> Result<StatReport> {
    check_alpha(opts.ks_alpha)?;
    check_alpha(opts.chi2_alpha)?;
    let sectors = d.sector_count();
    let counts = count_per_sector(&d.points, sectors)?;
    let expected = d.expected_counts();
    let mut skipped = Vec::new();

    let mut per_sector = Vec::with_capacity(sectors);
    for i in 1..=sectors {
        let area = sector_area_of(d, i)?;
        let count = counts[i - 1];
        per_sector.push(SectorSummary {
            index: i,
            expected: expected[i - 1],
            count,
            area,
            density: count as f64 / area,
        });
    }
    let counts_match = counts == expected;

    let misplaced: Vec<Misplaced> = d
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| !d.point_in_sector(p))
        .map(|(index, p)| Misplaced {
            index,
            sector: p.sector,
            x: p.x,
            y: p.y,
            radius: p.radius(),
        })
        .collect();

    let mut by_sector: Vec<Vec<Point>> = vec![Vec::new(); counts.len()];
    for p in &d.points {
        by_sector[p.sector as usize - 1].push(*p);
    }

    let mut radial = Vec::new();
    let mut areal = Vec::new();
    let mut circular_points = Vec::new();
    for i in 1..=sectors {
        let pts = &by_sector[i - 1];
        let shape = d.sector_shape(i).expect("sector in range");
        match shape.radial_bounds() {
            Some((inner, outer)) if inner < outer => {
                circular_points.extend_from_slice(pts);
                if pts.len() >= KS_MIN_POINTS {
                    radial.push(SectorKs {
                        sector: i,
                        outcome: radial_ks(pts, inner, outer, opts.ks_alpha)?,
                    });
                } else {
                    skipped.push(format!("radial KS for sector {i}: {} points", pts.len()));
                }
                match grid_side(pts.len(), opts.areal_bins) {
                    Some(k) => areal.push(SectorChi2 {
                        sector: i,
                        radial_bins: k,
                        angular_bins: k,
                        outcome: areal_chi2(pts, inner, outer, k, k, opts.chi2_alpha)?,
                    }),
                    None => skipped.push(format!(
                        "areal chi-square for sector {i}: {} points",
                        pts.len()
                    )),
                }
            }
            Some(_) => skipped.push(format!("sector {i} has zero width")),
            None => {
                let Shape::Rect { x0, y0, x1, y1 } = shape else {
                    unreachable!()
                };
                match grid_side(pts.len(), opts.areal_bins) {
                    Some(k) => areal.push(SectorChi2 {
                        sector: i,
                        radial_bins: k,
                        angular_bins: k,
                        outcome: rect_chi2(pts, (x0, y0, x1, y1), k, opts.chi2_alpha)?,
                    }),
                    None => skipped.push(format!(
                        "grid chi-square for sector {i}: {} points",
                        pts.len()
                    )),
                }
            }
        }
    }

    let bins = opts
        .angular_bins
        .min(circular_points.len() / MIN_EXPECTED_PER_CELL);
    let angular = if bins >= 2 {
        Some(AngularChi2 {
            bins,
            outcome: angular_chi2(&circular_points, bins, opts.chi2_alpha)?,
        })
    } else {
        skipped.push(format!(
            "angular chi-square: {} points",
            circular_points.len()
        ));
        None
    };

    let densities: Vec<f64> = per_sector.iter().map(|s| s.density).collect();
    let density_cv = coefficient_of_variation(&densities);

    let pass = counts_match
        && misplaced.is_empty()
        && radial.iter().all(|t| t.outcome.pass)
        && areal.iter().all(|t| t.outcome.pass)
        && angular.as_ref().is_none_or(|t| t.outcome.pass);

    Ok(StatReport {
        total_points: d.points.len(),
        per_sector,
        counts_match,
        misplaced,
        radial_ks: radial,
        angular_chi2: angular,
        areal_chi2: areal,
        density_cv,
        ks_alpha: opts.ks_alpha,
        chi2_alpha: opts.chi2_alpha,
        skipped,
        pass,
    })
}

/// Largest `k <= max_side` with at least `MIN_EXPECTED_PER_CELL` expected
/// points in each of `k * k` cells, if `k >= 2`.
fn grid_side(points: usize, max_side: usize) -> Option<usize> {
    (2..=max_side)
        .rev()
        .find(|k| points >= MIN_EXPECTED_PER_CELL * k * k)
}

fn rect_chi2(
    points: &[Point],
    (x0, y0, x1, y1): (f64, f64, f64, f64),
    k: usize,
    alpha: f64,
) -> Result<Chi2Outcome> {
    check_sample(points.len(), k * k)?;
    let mut counts = vec![0usize; k * k];
    for p in points {
        let cx = bin(((p.x - x0) / (x1 - x0)).clamp(0.0, 1.0), k);
        let cy = bin(((p.y - y0) / (y1 - y0)).clamp(0.0, 1.0), k);
        counts[cy * k + cx] += 1;
    }
    chi2_uniform(&counts, alpha)
}
