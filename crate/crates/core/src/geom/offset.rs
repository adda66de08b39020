//! Disk-Minkowski dilation and erosion.
//!
//! Dilation of a region by a disk is the union of the region with the
//! sausages (per-edge Minkowski sums) of its boundary edges; erosion is the
//! region minus those sausages. Dilations of points, polylines and convex
//! hulls are built directly in closed form.

use std::f64::consts::PI;

use super::boolean::{boolean, BoolOp};
use super::{ArcShape, Disk, Edge, Loop, Point, EPS_GEOM};
use crate::error::Result;

/// A point dilates to a disk.
pub fn dilate_point(p: Point, r: f64) -> ArcShape {
    ArcShape::disk(Disk::new(p, r))
}

/// Stadium: Minkowski sum of the segment `ab` with a disk of radius `r`.
pub fn stadium(a: Point, b: Point, r: f64) -> ArcShape {
    if a.dist(b) < EPS_GEOM {
        return dilate_point(a, r);
    }
    let d = (b - a).normalized();
    let n = d.perp();
    let theta = (-n).angle();
    let edges = vec![
        Edge::segment(a - n * r, b - n * r),
        Edge::arc(b, r, theta, PI),
        Edge::segment(b + n * r, a + n * r),
        Edge::arc(a, r, theta + PI, PI),
    ];
    ArcShape {
        loops: vec![Loop::new(edges)],
    }
}

/// Axis-free thin rectangle spanning `a` to `b` with the given half-width.
pub fn thin_rect(a: Point, b: Point, half_width: f64) -> ArcShape {
    if a.dist(b) < EPS_GEOM {
        return ArcShape::empty();
    }
    let n = (b - a).normalized().perp() * half_width;
    ArcShape::polygon(&[a - n, b - n, b + n, a + n])
}

/// Minkowski sum of an open polyline with a disk: the union of the stadiums
/// of its segments.
pub fn dilate_polyline(pts: &[Point], r: f64) -> Result<ArcShape> {
    match pts.len() {
        0 => Ok(ArcShape::empty()),
        1 => Ok(dilate_point(pts[0], r)),
        _ => {
            let mut acc = stadium(pts[0], pts[1], r);
            for w in pts[1..].windows(2) {
                acc = boolean(&acc, &stadium(w[0], w[1], r), BoolOp::Union)?;
            }
            Ok(acc)
        }
    }
}

/// Exact outward offset of a convex polygon given by ccw vertices: edges
/// translate outward by `r` and vertices become arcs of radius `r`.
pub fn dilate_hull(hull: &[Point], r: f64) -> ArcShape {
    match hull.len() {
        0 => ArcShape::empty(),
        1 => dilate_point(hull[0], r),
        2 => stadium(hull[0], hull[1], r),
        n => {
            let mut edges = Vec::with_capacity(2 * n);
            for i in 0..n {
                let prev = hull[(i + n - 1) % n];
                let cur = hull[i];
                let next = hull[(i + 1) % n];
                let out_prev = -(cur - prev).normalized().perp();
                let out_cur = -(next - cur).normalized().perp();
                let a0 = out_prev.angle();
                let sweep = super::norm_angle(out_cur.angle() - a0);
                if sweep > EPS_GEOM {
                    edges.push(Edge::arc(cur, r, a0, sweep));
                }
                edges.push(Edge::segment(cur + out_cur * r, next + out_cur * r));
            }
            ArcShape {
                loops: vec![Loop::new(edges)],
            }
        }
    }
}

/// Minkowski sum of a single boundary edge with a disk of radius `r`.
pub fn edge_sausage(e: &Edge, r: f64) -> Result<ArcShape> {
    match e {
        Edge::Segment(s) => Ok(stadium(s.start, s.end, r)),
        Edge::Arc(a) => {
            let big = ArcShape::disk(Disk::new(a.center, a.radius + r));
            let ring = if a.radius - r > EPS_GEOM * 10.0 {
                boolean(
                    &big,
                    &ArcShape::disk(Disk::new(a.center, a.radius - r)),
                    BoolOp::Difference,
                )?
            } else {
                big
            };
            if a.is_full_circle() {
                return Ok(ring);
            }
            // Clip the ring to the angular span, then add the end caps.
            let width = a.sweep.abs();
            let start = if a.sweep >= 0.0 {
                a.start_angle
            } else {
                a.start_angle + a.sweep
            };
            let sector = angular_sector(a.center, a.radius + r * 2.0 + 1.0, start, width);
            let mut out = boolean(&ring, &sector, BoolOp::Intersection)?;
            out = boolean(&out, &dilate_point(a.start(), r), BoolOp::Union)?;
            out = boolean(&out, &dilate_point(a.end(), r), BoolOp::Union)?;
            Ok(out)
        }
    }
}

/// Pie-slice region at `center` with radius `radius` spanning ccw from
/// `start` over `width` radians (width < 2*pi).
fn angular_sector(center: Point, radius: f64, start: f64, width: f64) -> ArcShape {
    let p0 = center + Point::from_angle(start) * radius;
    let p1 = center + Point::from_angle(start + width) * radius;
    ArcShape {
        loops: vec![Loop::new(vec![
            Edge::segment(center, p0),
            Edge::arc(center, radius, start, width),
            Edge::segment(p1, center),
        ])],
    }
}

/// Minkowski dilation of an arbitrary shape by a disk of radius `r`.
pub fn dilate_shape(s: &ArcShape, r: f64) -> Result<ArcShape> {
    let mut acc = s.clone();
    for e in s.edges() {
        acc = boolean(&acc, &edge_sausage(e, r)?, BoolOp::Union)?;
    }
    Ok(acc)
}

/// Minkowski erosion of a shape by a disk of radius `r`; the result may be
/// empty or consist of multiple components.
pub fn erode_shape(s: &ArcShape, r: f64) -> Result<ArcShape> {
    let mut acc = s.clone();
    for e in s.edges() {
        if acc.is_empty() {
            break;
        }
        acc = boolean(&acc, &edge_sausage(e, r)?, BoolOp::Difference)?;
    }
    Ok(acc)
}

/// Morphological opening: erosion followed by dilation.
pub fn open_shape(s: &ArcShape, r: f64) -> Result<ArcShape> {
    dilate_shape(&erode_shape(s, r)?, r)
}

/// Morphological closing: dilation followed by erosion.
pub fn close_shape(s: &ArcShape, r: f64) -> Result<ArcShape> {
    erode_shape(&dilate_shape(s, r)?, r)
}
