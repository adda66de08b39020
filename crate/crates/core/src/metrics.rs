//! Quality measures over final shapes: inflections, perimeter and area
//! ratios, total curvature, covered area, density distortion and cover
//! radii, based on equidistant boundary sampling.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, turning_angle, union_many, ArcShape, Bbox, Point};
use crate::patterns::Pattern;

/// Turn classification of a boundary sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    Clockwise,
    CounterClockwise,
    Straight,
}

pub const THETA_STRAIGHT: f64 = 1e-3;

/// Equidistant samples along one loop with turn classification.
#[derive(Debug, Clone)]
pub struct LoopSamples {
    pub points: Vec<Point>,
    pub turns: Vec<Turn>,
    pub spacing: f64,
}

fn loop_point_at_arclength(l: &crate::geom::Loop, s: f64) -> Point {
    let mut acc = 0.0;
    for e in &l.edges {
        let len = e.length();
        if acc + len >= s {
            return e.point_at(((s - acc) / len).clamp(0.0, 1.0));
        }
        acc += len;
    }
    l.edges.last().map(|e| e.end()).unwrap_or(Point::new(0.0, 0.0))
}

/// Sample every loop of the shape at (approximately) the given arc-length
/// spacing; the actual spacing divides each loop length exactly.
pub fn sample_boundary(shape: &ArcShape, spacing: f64) -> Result<Vec<LoopSamples>> {
    if !(spacing > 0.0) {
        return Err(Error::InvalidInput("sampling spacing must be positive".into()));
    }
    let mut out = Vec::new();
    for l in &shape.loops {
        let len = l.length();
        if spacing > len {
            return Err(Error::InvalidInput(format!(
                "sampling spacing {spacing} exceeds loop length {len}"
            )));
        }
        let n = ((len / spacing).floor() as usize).max(3);
        let actual = len / n as f64;
        let points: Vec<Point> = (0..n)
            .map(|k| loop_point_at_arclength(l, k as f64 * actual))
            .collect();
        let turns: Vec<Turn> = (0..n)
            .map(|k| {
                let a = points[(k + n - 1) % n];
                let b = points[k];
                let c = points[(k + 1) % n];
                match turning_angle(a, b, c) {
                    Ok(t) if t > THETA_STRAIGHT => Turn::CounterClockwise,
                    Ok(t) if t < -THETA_STRAIGHT => Turn::Clockwise,
                    _ => Turn::Straight,
                }
            })
            .collect();
        out.push(LoopSamples {
            points,
            turns,
            spacing: actual,
        });
    }
    Ok(out)
}

/// Number of curvature sign changes over all loops; straight samples are
/// transparent.
pub fn inflections(shape: &ArcShape, spacing: f64) -> Result<usize> {
    let mut total = 0usize;
    for l in sample_boundary(shape, spacing)? {
        let signs: Vec<Turn> = l
            .turns
            .iter()
            .copied()
            .filter(|&t| t != Turn::Straight)
            .collect();
        if signs.len() < 2 {
            continue;
        }
        let n = signs.len();
        total += (0..n).filter(|&k| signs[k] != signs[(k + 1) % n]).count();
    }
    Ok(total)
}

fn hull_of_shape(shape: &ArcShape) -> Result<Vec<Point>> {
    // Dense boundary sampling is accurate to O(1/n^2) for the hull measures.
    let mut pts = Vec::new();
    for l in &shape.loops {
        let len = l.length();
        let n = 4096usize;
        for k in 0..n {
            pts.push(loop_point_at_arclength(l, k as f64 * len / n as f64));
        }
        // Vertices exactly, so polygonal corners are not cut.
        for e in &l.edges {
            pts.push(e.start());
        }
    }
    convex_hull(&pts)
}

fn polygon_perimeter(poly: &[Point]) -> f64 {
    (0..poly.len())
        .map(|i| poly[i].dist(poly[(i + 1) % poly.len()]))
        .sum()
}

fn polygon_area(poly: &[Point]) -> f64 {
    (0..poly.len())
        .map(|i| poly[i].cross(poly[(i + 1) % poly.len()]))
        .sum::<f64>()
        / 2.0
}

/// (perimeter(shape)/perimeter(hull), area(hull)/area(shape)); both ≥ 1,
/// both exactly 1 for convex shapes without holes.
pub fn shape_ratios(shape: &ArcShape) -> Result<(f64, f64)> {
    let area = shape.area();
    if area <= 0.0 {
        return Err(Error::Geometry("zero-area shape in metrics".into()));
    }
    let hull = hull_of_shape(shape)?;
    if hull.len() < 3 {
        return Err(Error::Geometry("degenerate hull in metrics".into()));
    }
    let pr = shape.perimeter() / polygon_perimeter(&hull);
    let ar = polygon_area(&hull) / area;
    Ok((pr.max(1.0), ar.max(1.0)))
}

/// Total absolute turning over all loops minus 2π (once per shape).
pub fn total_curvature(shape: &ArcShape, spacing: f64) -> Result<f64> {
    let mut total = 0.0;
    for l in sample_boundary(shape, spacing)? {
        let n = l.points.len();
        for k in 0..n {
            let a = l.points[(k + n - 1) % n];
            let b = l.points[k];
            let c = l.points[(k + 1) % n];
            if let Ok(t) = turning_angle(a, b, c) {
                total += t.abs();
            }
        }
    }
    Ok((total - std::f64::consts::TAU).max(0.0))
}

/// Percentage of the point bounding box covered by the union of the shapes.
pub fn covered_area(shapes: &[ArcShape], points: &[Point]) -> Result<f64> {
    let bbox = Bbox::from_points(points.iter().copied());
    let area = bbox.width() * bbox.height();
    if area <= 0.0 {
        return Err(Error::DegenerateBbox);
    }
    let union = union_many(shapes)?;
    Ok(union.area() / area * 100.0)
}

/// Per-set |point fraction − area fraction|; returns (avg, max).
pub fn density_distortion(
    shapes_by_set: &[Vec<ArcShape>],
    counts_by_set: &[usize],
) -> Result<(f64, f64)> {
    let n_total: usize = counts_by_set.iter().sum();
    let areas: Vec<f64> = shapes_by_set
        .iter()
        .map(|shapes| union_many(shapes).map(|u| u.area()))
        .collect::<Result<_>>()?;
    let area_total: f64 = areas.iter().sum();
    if n_total == 0 || area_total <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let ds: Vec<f64> = areas
        .iter()
        .zip(counts_by_set)
        .map(|(&a, &c)| (c as f64 / n_total as f64 - a / area_total).abs())
        .collect();
    let avg = ds.iter().sum::<f64>() / ds.len() as f64;
    let max = ds.iter().fold(0.0f64, |m, &d| m.max(d));
    Ok((avg, max))
}

#[derive(Debug, Clone)]
pub struct MetricsReport {
    pub shapes: usize,
    pub inflections: usize,
    pub covered_area_pct: f64,
    pub perimeter_ratio_avg: f64,
    pub perimeter_ratio_max: f64,
    pub area_ratio_avg: f64,
    pub area_ratio_max: f64,
    pub curvature_avg: f64,
    pub curvature_max: f64,
    pub density_distortion_avg: f64,
    pub density_distortion_max: f64,
    pub cover_radius_avg: f64,
    pub cover_radius_max: f64,
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

impl MetricsReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "shapes,inflections,covered_area_pct,perimeter_ratio_avg,perimeter_ratio_max,\
             area_ratio_avg,area_ratio_max,curvature_avg,curvature_max,\
             density_distortion_avg,density_distortion_max,cover_radius_avg,cover_radius_max\n",
        );
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.shapes,
            self.inflections,
            fmt(self.covered_area_pct),
            fmt(self.perimeter_ratio_avg),
            fmt(self.perimeter_ratio_max),
            fmt(self.area_ratio_avg),
            fmt(self.area_ratio_max),
            fmt(self.curvature_avg),
            fmt(self.curvature_max),
            fmt(self.density_distortion_avg),
            fmt(self.density_distortion_max),
            fmt(self.cover_radius_avg),
            fmt(self.cover_radius_max),
        );
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "shapes:               {}", self.shapes);
        let _ = writeln!(s, "inflections:          {}", self.inflections);
        let _ = writeln!(s, "covered area:         {}%", fmt(self.covered_area_pct));
        let _ = writeln!(
            s,
            "perimeter ratio:      {} / {}",
            fmt(self.perimeter_ratio_avg),
            fmt(self.perimeter_ratio_max)
        );
        let _ = writeln!(
            s,
            "area ratio:           {} / {}",
            fmt(self.area_ratio_avg),
            fmt(self.area_ratio_max)
        );
        let _ = writeln!(
            s,
            "total curvature:      {} / {}",
            fmt(self.curvature_avg),
            fmt(self.curvature_max)
        );
        let _ = writeln!(
            s,
            "density distortion:   {} / {}",
            fmt(self.density_distortion_avg),
            fmt(self.density_distortion_max)
        );
        let _ = writeln!(
            s,
            "cover radius:         {} / {}",
            fmt(self.cover_radius_avg),
            fmt(self.cover_radius_max)
        );
        s
    }
}

/// Assemble the full report for a partition's final shapes.
pub fn report(
    patterns: &[Pattern],
    shapes: &[ArcShape],
    points: &[Point],
    r_d: f64,
) -> Result<MetricsReport> {
    if shapes.len() != patterns.len() {
        return Err(Error::InvalidInput(
            "shape and pattern counts differ".into(),
        ));
    }
    let spacing = r_d / 4.0;
    let mut infl = 0usize;
    let mut prs = Vec::new();
    let mut ars = Vec::new();
    let mut curvs = Vec::new();
    for s in shapes {
        infl += inflections(s, spacing)?;
        let (pr, ar) = shape_ratios(s)?;
        prs.push(pr);
        ars.push(ar);
        curvs.push(total_curvature(s, spacing)?);
    }
    let covered = covered_area(shapes, points)?;
    // Group by category for density distortion.
    let mut cats: Vec<usize> = patterns.iter().map(|p| p.category).collect();
    cats.sort();
    cats.dedup();
    let shapes_by_set: Vec<Vec<ArcShape>> = cats
        .iter()
        .map(|&c| {
            patterns
                .iter()
                .zip(shapes)
                .filter(|(p, _)| p.category == c)
                .map(|(_, s)| s.clone())
                .collect()
        })
        .collect();
    let counts: Vec<usize> = cats
        .iter()
        .map(|&c| {
            patterns
                .iter()
                .filter(|p| p.category == c)
                .map(|p| p.points.len())
                .sum()
        })
        .collect();
    let (dd_avg, dd_max) = density_distortion(&shapes_by_set, &counts)?;
    let covers: Vec<f64> = patterns
        .iter()
        .map(|p| p.cover_radius())
        .collect::<Result<_>>()?;
    let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    let max = |v: &[f64]| v.iter().fold(0.0f64, |m, &x| m.max(x));
    Ok(MetricsReport {
        shapes: shapes.len(),
        inflections: infl,
        covered_area_pct: covered,
        perimeter_ratio_avg: avg(&prs),
        perimeter_ratio_max: max(&prs),
        area_ratio_avg: avg(&ars),
        area_ratio_max: max(&ars),
        curvature_avg: avg(&curvs),
        curvature_max: max(&curvs),
        density_distortion_avg: dd_avg,
        density_distortion_max: dd_max,
        cover_radius_avg: avg(&covers),
        cover_radius_max: max(&covers),
    })
}
