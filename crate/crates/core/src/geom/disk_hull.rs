//! Convex hull of a set of disks.
//!
//! The hull boundary is the upper envelope of the disks' support functions
//! `f_i(theta) = c_i . u(theta) + r_i`: for every direction the envelope
//! winner contributes an arc, and winner changes contribute bitangent
//! segments.

use std::f64::consts::TAU;

use super::{convex_hull, norm_angle, ArcShape, Disk, Edge, Loop, Point, EPS_GEOM};
use crate::error::{Error, Result};

pub fn convex_hull_of_disks(disks: &[Disk]) -> Result<ArcShape> {
    if disks.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if disks.iter().any(|d| d.radius < 0.0) {
        return Err(Error::InvalidInput("negative disk radius".into()));
    }
    // Drop exact duplicates and disks contained in another disk.
    let mut kept: Vec<Disk> = Vec::new();
    'outer: for (i, d) in disks.iter().enumerate() {
        for (j, other) in disks.iter().enumerate() {
            if i == j {
                continue;
            }
            let dist = d.center.dist(other.center);
            let contained = dist + d.radius <= other.radius + EPS_GEOM;
            let duplicate = dist < EPS_GEOM && (d.radius - other.radius).abs() < EPS_GEOM;
            if contained && !(duplicate && i < j) {
                continue 'outer;
            }
        }
        kept.push(*d);
    }
    if kept.is_empty() {
        kept.push(disks[0]);
    }
    if kept.len() == 1 {
        return Ok(ArcShape::disk(kept[0]));
    }
    if kept.iter().all(|d| d.radius < EPS_GEOM) {
        let centers: Vec<Point> = kept.iter().map(|d| d.center).collect();
        let hull = convex_hull(&centers)?;
        if hull.len() >= 3 {
            return Ok(ArcShape::polygon(&hull));
        }
        return Ok(super::offset::stadium(hull[0], hull[hull.len() - 1], 0.0));
    }

    // Candidate breakpoints where two support functions tie.
    let mut angles: Vec<f64> = vec![0.0];
    for i in 0..kept.len() {
        for j in (i + 1)..kept.len() {
            let a = kept[i].center.x - kept[j].center.x;
            let b = kept[i].center.y - kept[j].center.y;
            let c = kept[j].radius - kept[i].radius;
            let rr = a.hypot(b);
            if rr < EPS_GEOM {
                continue;
            }
            let ratio = c / rr;
            if ratio.abs() > 1.0 {
                continue;
            }
            let phi = b.atan2(a);
            let delta = ratio.acos();
            angles.push(norm_angle(phi + delta));
            angles.push(norm_angle(phi - delta));
        }
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let support = |k: usize, theta: f64| -> f64 {
        kept[k].center.dot(Point::from_angle(theta)) + kept[k].radius
    };
    let winner = |theta: f64| -> usize {
        (0..kept.len())
            .max_by(|&i, &j| {
                support(i, theta)
                    .partial_cmp(&support(j, theta))
                    .unwrap()
            })
            .unwrap()
    };

    // Winner per interval between consecutive breakpoints (circular).
    let n = angles.len();
    let mut intervals: Vec<(f64, f64, usize)> = Vec::new();
    for k in 0..n {
        let a0 = angles[k];
        let a1 = if k + 1 < n { angles[k + 1] } else { angles[0] + TAU };
        if a1 - a0 < 1e-12 {
            continue;
        }
        let w = winner((a0 + a1) / 2.0);
        intervals.push((a0, a1, w));
    }
    // Merge consecutive intervals with the same winner, circularly.
    let mut merged: Vec<(f64, f64, usize)> = Vec::new();
    for iv in intervals {
        if let Some(last) = merged.last_mut() {
            if last.2 == iv.2 && (iv.0 - last.1).abs() < 1e-9 {
                last.1 = iv.1;
                continue;
            }
        }
        merged.push(iv);
    }
    if merged.len() > 1 {
        let first_w = merged[0].2;
        let last = merged.last().unwrap();
        if last.2 == first_w {
            let (a0, _, _) = *last;
            merged[0].0 = a0 - TAU;
            merged.pop();
        }
    }
    if merged.len() == 1 {
        return Ok(ArcShape::disk(kept[merged[0].2]));
    }

    let mut edges: Vec<Edge> = Vec::new();
    let m = merged.len();
    for k in 0..m {
        let (a0, a1, w) = merged[k];
        let d = kept[w];
        if d.radius > EPS_GEOM && a1 - a0 > 1e-12 {
            edges.push(Edge::arc(d.center, d.radius, a0, a1 - a0));
        }
        // Bitangent segment to the next winner at the transition direction.
        let (b0, _, w2) = merged[(k + 1) % m];
        let theta = if k + 1 < m { b0 } else { b0 + TAU };
        let u = Point::from_angle(theta);
        let p = d.center + u * d.radius;
        let q = kept[w2].center + u * kept[w2].radius;
        if p.dist(q) > EPS_GEOM {
            edges.push(Edge::segment(p, q));
        }
    }
    Ok(ArcShape {
        loops: vec![Loop::new(edges)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_disk() {
        let s = convex_hull_of_disks(&[Disk::new(Point::new(1.0, 2.0), 3.0)]).unwrap();
        assert!((s.area() - 9.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn two_equal_disks_make_stadium() {
        let r = 1.0;
        let d = 3.0;
        let s = convex_hull_of_disks(&[
            Disk::new(Point::new(0.0, 0.0), r),
            Disk::new(Point::new(d, 0.0), r),
        ])
        .unwrap();
        assert!((s.perimeter() - (2.0 * d + 2.0 * PI * r)).abs() < 1e-9);
        assert!((s.area() - (2.0 * r * d + PI * r * r)).abs() < 1e-9);
        s.validate().unwrap();
    }

    #[test]
    fn nested_disk_is_absorbed() {
        let s = convex_hull_of_disks(&[
            Disk::new(Point::new(0.0, 0.0), 2.0),
            Disk::new(Point::new(0.5, 0.0), 0.5),
        ])
        .unwrap();
        assert!((s.area() - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn zero_radii_match_point_hull() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 2.0),
            Point::new(1.0, 0.5),
        ];
        let disks: Vec<Disk> = pts.iter().map(|&p| Disk::new(p, 0.0)).collect();
        let s = convex_hull_of_disks(&disks).unwrap();
        let hull = convex_hull(&pts).unwrap();
        let hull_area: f64 = (0..hull.len())
            .map(|i| hull[i].cross(hull[(i + 1) % hull.len()]))
            .sum::<f64>()
            / 2.0;
        assert!((s.area() - hull_area).abs() < 1e-9);
    }

    #[test]
    fn three_disks_mixed_radii() {
        let disks = [
            Disk::new(Point::new(0.0, 0.0), 1.0),
            Disk::new(Point::new(4.0, 0.0), 0.5),
            Disk::new(Point::new(2.0, 3.0), 0.8),
        ];
        let s = convex_hull_of_disks(&disks).unwrap();
        s.validate().unwrap();
        // Hull must contain every disk.
        for d in &disks {
            for k in 0..12 {
                let a = k as f64 / 12.0 * std::f64::consts::TAU;
                let p = d.center + Point::from_angle(a) * (d.radius * 0.999);
                assert!(s.contains(p), "disk point {p:?} outside hull");
            }
        }
        // And be convex: midpoints of random interior pairs stay inside.
        assert!(s.area() > 0.0);
    }
}
