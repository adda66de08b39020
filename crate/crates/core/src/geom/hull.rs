//! Convex hull of points (monotone chain).

use super::Point;
use crate::error::{Error, Result};

/// Counter-clockwise hull vertices; collinear interior points are excluded.
/// A single point yields itself, two points both endpoints.
pub fn convex_hull(points: &[Point]) -> Result<Vec<Point>> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup_by(|a, b| a.dist(*b) < 1e-12);
    if pts.len() == 1 {
        return Ok(pts);
    }
    if pts.len() == 2 {
        return Ok(pts);
    }
    let cross = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 2 {
        // All points collinear: hull degenerates to the extreme pair.
        return Ok(vec![pts[0], pts[pts.len() - 1]]);
    }
    Ok(lower)
}

/// Whether point `p` lies inside or on the convex polygon `hull` (ccw).
pub fn point_in_convex_hull(p: Point, hull: &[Point], tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => p.dist(hull[0]) <= tol,
        2 => super::dist_point_segment(p, hull[0], hull[1]) <= tol,
        n => (0..n).all(|i| {
            let a = hull[i];
            let b = hull[(i + 1) % n];
            (b - a).cross(p - a) >= -tol * (b - a).norm().max(1.0)
        }),
    }
}

/// Distance from `p` to the convex polygon `hull` (0 when inside).
pub fn dist_point_convex_hull(p: Point, hull: &[Point]) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => p.dist(hull[0]),
        2 => super::dist_point_segment(p, hull[0], hull[1]),
        n => {
            if point_in_convex_hull(p, hull, 0.0) {
                0.0
            } else {
                (0..n)
                    .map(|i| super::dist_point_segment(p, hull[i], hull[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton() {
        let h = convex_hull(&[Point::new(0.0, 0.0)]).unwrap();
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn interior_point_dropped() {
        let h = convex_hull(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(0.2, 0.2),
        ])
        .unwrap();
        assert_eq!(h.len(), 3);
        // ccw orientation
        let area: f64 = (0..h.len())
            .map(|i| h[i].cross(h[(i + 1) % h.len()]))
            .sum::<f64>()
            / 2.0;
        assert!(area > 0.0);
    }

    #[test]
    fn empty_errors() {
        assert!(convex_hull(&[]).is_err());
    }

    #[test]
    fn brute_force_extreme_points() {
        // p is extreme iff p is not in the hull of the others.
        let mut seed = 123456789u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        let pts: Vec<Point> = (0..20).map(|_| Point::new(rnd(), rnd())).collect();
        let hull = convex_hull(&pts).unwrap();
        for (i, &p) in pts.iter().enumerate() {
            let others: Vec<Point> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &q)| q)
                .collect();
            let hull_others = convex_hull(&others).unwrap();
            let extreme = !point_in_convex_hull(p, &hull_others, 1e-12);
            let on_hull = hull.iter().any(|&q| q.dist(p) < 1e-12);
            assert_eq!(extreme, on_hull, "point {i}");
        }
    }
}
