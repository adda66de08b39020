//! Patterns: singletons, banks (polylines) and islands (convex hulls),
//! bank validity rules and cover radii.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    convex_hull, dist_point_segment, turning_angle, voronoi_clipped_to_hull, ArcShape, Point,
    EPS_GEOM,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoricalPoint {
    pub id: usize,
    pub pos: Point,
    pub category: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternKind {
    Singleton,
    Bank,
    Island,
}

/// Validity thresholds for banks.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BankThresholds {
    pub max_bends: usize,
    /// Maximum |turning angle| at any vertex, radians.
    pub max_turn: f64,
    /// Maximum total turning Σ|θ|, radians.
    pub max_total_turn: f64,
}

impl Default for BankThresholds {
    fn default() -> Self {
        BankThresholds {
            max_bends: 2,
            max_turn: 70.0f64.to_radians(),
            max_total_turn: 180.0f64.to_radians(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    pub kind: PatternKind,
    /// Member points; for banks, in polyline order.
    pub points: Vec<CategoricalPoint>,
    pub category: usize,
}

impl Pattern {
    pub fn singleton(p: CategoricalPoint) -> Pattern {
        Pattern {
            kind: PatternKind::Singleton,
            category: p.category,
            points: vec![p],
        }
    }

    pub fn bank(points: Vec<CategoricalPoint>) -> Pattern {
        debug_assert!(points.len() >= 2);
        Pattern {
            kind: PatternKind::Bank,
            category: points[0].category,
            points,
        }
    }

    pub fn island(points: Vec<CategoricalPoint>) -> Pattern {
        debug_assert!(points.len() >= 2);
        Pattern {
            kind: PatternKind::Island,
            category: points[0].category,
            points,
        }
    }

    pub fn ids(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.id).collect()
    }

    pub fn positions(&self) -> Vec<Point> {
        self.points.iter().map(|p| p.pos).collect()
    }

    /// Vertices of the undilated region: the point, the polyline, or the
    /// convex hull (ccw).
    pub fn region_vertices(&self) -> Result<Vec<Point>> {
        match self.kind {
            PatternKind::Singleton | PatternKind::Bank => Ok(self.positions()),
            PatternKind::Island => convex_hull(&self.positions()),
        }
    }

    /// The region dilated by radius `r` as an arc shape.
    pub fn dilated(&self, r: f64) -> Result<ArcShape> {
        match self.kind {
            PatternKind::Singleton => Ok(crate::geom::dilate_point(self.points[0].pos, r)),
            PatternKind::Bank => crate::geom::dilate_polyline(&self.positions(), r),
            PatternKind::Island => {
                let hull = convex_hull(&self.positions())?;
                Ok(crate::geom::dilate_hull(&hull, r))
            }
        }
    }

    /// Distance from a point to the undilated region.
    pub fn dist_to_point(&self, q: Point) -> f64 {
        match self.kind {
            PatternKind::Singleton => self.points[0].pos.dist(q),
            PatternKind::Bank => {
                let pts = self.positions();
                pts.windows(2)
                    .map(|w| dist_point_segment(q, w[0], w[1]))
                    .fold(f64::INFINITY, f64::min)
            }
            PatternKind::Island => {
                let hull = match convex_hull(&self.positions()) {
                    Ok(h) => h,
                    Err(_) => return f64::INFINITY,
                };
                crate::geom::dist_point_convex_hull(q, &hull)
            }
        }
    }

    pub fn cover_radius(&self) -> Result<f64> {
        match self.kind {
            PatternKind::Singleton => Ok(0.0),
            PatternKind::Bank => {
                let pts = self.positions();
                Ok(pts
                    .windows(2)
                    .map(|w| w[0].dist(w[1]))
                    .fold(0.0f64, f64::max)
                    / 2.0)
            }
            PatternKind::Island => {
                let verts = voronoi_clipped_to_hull(&self.positions())?;
                Ok(verts.iter().map(|&(_, d)| d).fold(0.0f64, f64::max))
            }
        }
    }

    pub fn validate(&self, thresholds: &BankThresholds) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if self.points.iter().any(|p| p.category != self.category) {
            return Err(Error::InvalidInput("mixed categories in pattern".into()));
        }
        if self.kind == PatternKind::Bank
            && !is_valid_bank(&self.positions(), thresholds)
        {
            return Err(Error::InvalidInput("invalid bank polyline".into()));
        }
        Ok(())
    }
}

/// Turning angles at the interior vertices of a polyline. Errors on
/// zero-length segments.
pub fn turning_angles(polyline: &[Point]) -> Result<Vec<f64>> {
    polyline
        .windows(3)
        .map(|w| turning_angle(w[0], w[1], w[2]))
        .collect()
}

/// Number of bends: maximal runs of same-sign turning angles. Exact-zero
/// angles carry no sign; they neither extend nor break a run.
pub fn count_bends(polyline: &[Point]) -> Result<usize> {
    let angles = turning_angles(polyline)?;
    let mut bends = 0usize;
    let mut current: i8 = 0;
    for a in angles {
        let sign = if a > EPS_GEOM {
            1
        } else if a < -EPS_GEOM {
            -1
        } else {
            0
        };
        if sign != 0 && sign != current {
            bends += 1;
            current = sign;
        }
    }
    Ok(bends)
}

fn polyline_is_simple(pts: &[Point]) -> bool {
    let n = pts.len();
    if pts
        .windows(2)
        .any(|w| w[0].dist(w[1]) < EPS_GEOM)
    {
        return false;
    }
    for i in 0..n.saturating_sub(1) {
        for j in (i + 1)..n - 1 {
            let (a, b) = (pts[i], pts[i + 1]);
            let (c, d) = (pts[j], pts[j + 1]);
            let shared = j == i + 1;
            let r = b - a;
            let s = d - c;
            let denom = r.cross(s);
            if denom.abs() < EPS_GEOM * r.norm() * s.norm() {
                // Parallel: overlapping collinear segments are not simple.
                if shared {
                    continue;
                }
                if (c - a).cross(r).abs() < EPS_GEOM * r.norm().max(1.0) {
                    let t0 = (c - a).dot(r) / r.norm_sq();
                    let t1 = (d - a).dot(r) / r.norm_sq();
                    let (lo, hi) = (t0.min(t1), t0.max(t1));
                    if hi > EPS_GEOM && lo < 1.0 - EPS_GEOM {
                        return false;
                    }
                }
                continue;
            }
            let t = (c - a).cross(s) / denom;
            let u = (c - a).cross(r) / denom;
            let inside =
                |x: f64| x > EPS_GEOM && x < 1.0 - EPS_GEOM;
            if shared {
                // Adjacent segments meet at b == c; any other contact means
                // the polyline folds onto itself.
                if inside(t) && u > EPS_GEOM && u < 1.0 - EPS_GEOM {
                    return false;
                }
            } else if t >= -EPS_GEOM
                && t <= 1.0 + EPS_GEOM
                && u >= -EPS_GEOM
                && u <= 1.0 + EPS_GEOM
                && (inside(t) || inside(u))
            {
                return false;
            }
        }
    }
    true
}

/// Bank validity: at most `max_bends` bends, every |θ| ≤ max_turn,
/// Σ|θ| ≤ max_total_turn, and the polyline is simple.
pub fn is_valid_bank(polyline: &[Point], thresholds: &BankThresholds) -> bool {
    if polyline.len() < 2 {
        return false;
    }
    let angles = match turning_angles(polyline) {
        Ok(a) => a,
        Err(_) => return false,
    };
    let bends = match count_bends(polyline) {
        Ok(b) => b,
        Err(_) => return false,
    };
    let tol = 1e-12;
    bends <= thresholds.max_bends
        && angles.iter().all(|a| a.abs() <= thresholds.max_turn + tol)
        && angles.iter().map(|a| a.abs()).sum::<f64>() <= thresholds.max_total_turn + tol
        && polyline_is_simple(polyline)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn cp(id: usize, x: f64, y: f64) -> CategoricalPoint {
        CategoricalPoint {
            id,
            pos: p(x, y),
            category: 0,
        }
    }

    #[test]
    fn bend_counting() {
        assert_eq!(count_bends(&[p(0.0, 0.0), p(1.0, 0.0)]).unwrap(), 0);
        // Sign sequence (+, +, -, -, +) -> 3 bends.
        let mut pts = vec![p(0.0, 0.0), p(1.0, 0.0)];
        let mut dir: f64 = 0.0;
        for turn in [10f64, 10.0, -10.0, -10.0, 10.0] {
            dir += turn.to_radians();
            let last = *pts.last().unwrap();
            pts.push(last + Point::from_angle(dir));
        }
        assert_eq!(count_bends(&pts).unwrap(), 3);
        // All-positive -> 1 bend.
        let arc: Vec<Point> = (0..6)
            .map(|i| Point::from_angle(i as f64 * 0.3))
            .collect();
        assert_eq!(count_bends(&arc).unwrap(), 1);
        // Collinear triple in the middle does not break a run.
        let run = vec![
            p(0.0, 0.0),
            p(1.0, 0.0),
            p(2.0, 0.2),
            p(3.0, 0.4),
            p(4.0, 0.7),
        ];
        assert_eq!(count_bends(&run).unwrap(), 1);
    }

    #[test]
    fn bank_validity() {
        let th = BankThresholds::default();
        assert!(is_valid_bank(&[p(0.0, 0.0), p(5.0, 0.0)], &th));
        // One 80-degree turn fails.
        let dir = 80f64.to_radians();
        let sharp = vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 0.0) + Point::from_angle(dir)];
        assert!(!is_valid_bank(&sharp, &th));
        // 3 bends of 30 degrees fail only on bend count.
        let mut pts = vec![p(0.0, 0.0), p(1.0, 0.0)];
        let mut d: f64 = 0.0;
        for turn in [30f64, -30.0, 30.0] {
            d += turn.to_radians();
            let last = *pts.last().unwrap();
            pts.push(last + Point::from_angle(d));
        }
        assert_eq!(count_bends(&pts).unwrap(), 3);
        let total: f64 = turning_angles(&pts)
            .unwrap()
            .iter()
            .map(|a| a.abs())
            .sum();
        assert!(total <= th.max_total_turn);
        assert!(!is_valid_bank(&pts, &th));
        // Self-intersecting polyline is rejected.
        assert!(!polyline_is_simple(&[
            p(0.0, 0.0),
            p(4.0, 0.0),
            p(3.0, 1.0),
            p(1.0, -1.0)
        ]));
        // A plain zigzag is fine.
        assert!(polyline_is_simple(&[
            p(0.0, 0.0),
            p(4.0, 0.0),
            p(0.0, 0.05),
            p(4.0, 0.1)
        ]));
    }

    #[test]
    fn validity_invariances() {
        let th = BankThresholds::default();
        let pts = vec![p(0.0, 0.0), p(1.0, 0.1), p(2.0, 0.0), p(3.0, -0.3)];
        assert!(is_valid_bank(&pts, &th));
        let rev: Vec<Point> = pts.iter().rev().copied().collect();
        assert!(is_valid_bank(&rev, &th));
        let rot: Vec<Point> = pts
            .iter()
            .map(|&q| {
                let (s, c) = 0.83f64.sin_cos();
                Point::new(c * q.x - s * q.y, s * q.x + c * q.y) + p(11.0, -4.0)
            })
            .collect();
        assert!(is_valid_bank(&rot, &th));
        // Sub-polylines of a valid bank remain valid.
        for i in 0..pts.len() - 1 {
            for j in (i + 2)..=pts.len() {
                assert!(is_valid_bank(&pts[i..j], &th));
            }
        }
    }

    #[test]
    fn cover_radii() {
        let s = Pattern::singleton(cp(0, 3.0, 4.0));
        assert_eq!(s.cover_radius().unwrap(), 0.0);
        let b = Pattern::bank(vec![cp(0, 0.0, 0.0), cp(1, 3.0, 0.0)]);
        assert!((b.cover_radius().unwrap() - 1.5).abs() < 1e-12);
        let h = 3f64.sqrt() / 2.0;
        let i = Pattern::island(vec![cp(0, 0.0, 0.0), cp(1, 1.0, 0.0), cp(2, 0.5, h)]);
        assert!((i.cover_radius().unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn island_cover_radius_matches_grid_oracle() {
        let mut seed = 5u64;
        let mut rnd = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..5 {
            let pts: Vec<CategoricalPoint> = (0..7)
                .map(|i| cp(i, rnd() * 10.0, rnd() * 10.0))
                .collect();
            let island = Pattern::island(pts.clone());
            let c = island.cover_radius().unwrap();
            let hull = convex_hull(&island.positions()).unwrap();
            if hull.len() < 3 {
                continue;
            }
            let bbox = crate::geom::Bbox::from_points(island.positions().into_iter());
            let mut oracle = 0.0f64;
            let steps = 400;
            for i in 0..=steps {
                for j in 0..=steps {
                    let q = Point::new(
                        bbox.min.x + bbox.width() * i as f64 / steps as f64,
                        bbox.min.y + bbox.height() * j as f64 / steps as f64,
                    );
                    if crate::geom::point_in_convex_hull(q, &hull, 0.0) {
                        let d = pts
                            .iter()
                            .map(|m| m.pos.dist(q))
                            .fold(f64::INFINITY, f64::min);
                        oracle = oracle.max(d);
                    }
                }
            }
            assert!(
                (c - oracle).abs() <= 0.01 * oracle.max(1e-9),
                "cover {c} vs oracle {oracle}"
            );
        }
    }
}
