//! Boundary edge primitives: straight segments and circular arcs.

use serde::{Deserialize, Serialize};

use super::{norm_angle, Bbox, Point, EPS_GEOM};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
}

impl Segment {
    pub fn new(start: Point, end: Point) -> Self {
        Segment { start, end }
    }

    pub fn length(&self) -> f64 {
        self.start.dist(self.end)
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.start.lerp(self.end, t)
    }

    pub fn direction(&self) -> Point {
        (self.end - self.start).normalized()
    }
}

/// Circular arc from `start_angle` sweeping by `sweep` radians
/// (positive = counter-clockwise). `|sweep|` may be up to `2*pi` (full circle).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularArc {
    pub center: Point,
    pub radius: f64,
    pub start_angle: f64,
    pub sweep: f64,
}

impl CircularArc {
    pub fn new(center: Point, radius: f64, start_angle: f64, sweep: f64) -> Self {
        debug_assert!(radius >= 0.0);
        debug_assert!(sweep.abs() <= std::f64::consts::TAU + 1e-9);
        CircularArc {
            center,
            radius,
            start_angle,
            sweep,
        }
    }

    /// Full counter-clockwise circle.
    pub fn full_circle(center: Point, radius: f64) -> Self {
        CircularArc::new(center, radius, 0.0, std::f64::consts::TAU)
    }

    pub fn start(&self) -> Point {
        self.center + Point::from_angle(self.start_angle) * self.radius
    }

    pub fn end(&self) -> Point {
        self.center + Point::from_angle(self.start_angle + self.sweep) * self.radius
    }

    pub fn point_at(&self, t: f64) -> Point {
        let a = self.start_angle + self.sweep * t;
        self.center + Point::from_angle(a) * self.radius
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep.abs()
    }

    pub fn is_full_circle(&self) -> bool {
        (self.sweep.abs() - std::f64::consts::TAU).abs() < 1e-12
    }

    /// Unit tangent at parameter `t`, pointing along the sweep direction.
    pub fn tangent_at(&self, t: f64) -> Point {
        let a = self.start_angle + self.sweep * t;
        let radial = Point::from_angle(a);
        if self.sweep >= 0.0 {
            radial.perp()
        } else {
            -radial.perp()
        }
    }

    /// Whether absolute angle `theta` lies within the swept range.
    pub fn angle_in_span(&self, theta: f64, tol: f64) -> bool {
        let ang_tol = if self.radius > tol { tol / self.radius } else { tol };
        if self.sweep >= 0.0 {
            norm_angle(theta - self.start_angle) <= self.sweep + ang_tol
                || norm_angle(theta - self.start_angle) >= std::f64::consts::TAU - ang_tol
        } else {
            norm_angle(self.start_angle - theta) <= -self.sweep + ang_tol
                || norm_angle(self.start_angle - theta) >= std::f64::consts::TAU - ang_tol
        }
    }

    /// Parameter in [0,1] for an absolute angle assumed within the span.
    pub fn param_of_angle(&self, theta: f64) -> f64 {
        if self.sweep.abs() < 1e-300 {
            return 0.0;
        }
        let d = if self.sweep >= 0.0 {
            norm_angle(theta - self.start_angle)
        } else {
            -norm_angle(self.start_angle - theta)
        };
        (d / self.sweep).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Edge {
    Segment(Segment),
    Arc(CircularArc),
}

impl Edge {
    pub fn segment(a: Point, b: Point) -> Self {
        Edge::Segment(Segment::new(a, b))
    }

    pub fn arc(center: Point, radius: f64, start_angle: f64, sweep: f64) -> Self {
        Edge::Arc(CircularArc::new(center, radius, start_angle, sweep))
    }

    pub fn start(&self) -> Point {
        match self {
            Edge::Segment(s) => s.start,
            Edge::Arc(a) => a.start(),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Edge::Segment(s) => s.end,
            Edge::Arc(a) => a.end(),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        match self {
            Edge::Segment(s) => s.point_at(t),
            Edge::Arc(a) => a.point_at(t),
        }
    }

    pub fn midpoint(&self) -> Point {
        self.point_at(0.5)
    }

    pub fn length(&self) -> f64 {
        match self {
            Edge::Segment(s) => s.length(),
            Edge::Arc(a) => a.length(),
        }
    }

    pub fn reversed(&self) -> Edge {
        match self {
            Edge::Segment(s) => Edge::segment(s.end, s.start),
            Edge::Arc(a) => Edge::arc(
                a.center,
                a.radius,
                a.start_angle + a.sweep,
                -a.sweep,
            ),
        }
    }

    /// Unit tangent along the edge direction at parameter `t`.
    pub fn tangent_at(&self, t: f64) -> Point {
        match self {
            Edge::Segment(s) => s.direction(),
            Edge::Arc(a) => a.tangent_at(t),
        }
    }

    /// Unit normal pointing to the left of the travel direction.
    pub fn left_normal_at(&self, t: f64) -> Point {
        self.tangent_at(t).perp()
    }

    pub fn bbox(&self) -> Bbox {
        match self {
            Edge::Segment(s) => Bbox::from_points([s.start, s.end]),
            Edge::Arc(a) => {
                let mut b = Bbox::from_points([a.start(), a.end()]);
                // Extremes at cardinal angles within the span.
                for (k, dir) in [
                    (0.0, Point::new(1.0, 0.0)),
                    (std::f64::consts::FRAC_PI_2, Point::new(0.0, 1.0)),
                    (std::f64::consts::PI, Point::new(-1.0, 0.0)),
                    (3.0 * std::f64::consts::FRAC_PI_2, Point::new(0.0, -1.0)),
                ] {
                    if a.angle_in_span(k, EPS_GEOM) {
                        b.expand(a.center + dir * a.radius);
                    }
                }
                b
            }
        }
    }

    /// Contribution of this edge to the signed area integral
    /// `(1/2) * integral(x dy - y dx)`.
    pub fn signed_area_contribution(&self) -> f64 {
        match self {
            Edge::Segment(s) => s.start.cross(s.end) / 2.0,
            Edge::Arc(a) => {
                let chord = a.start().cross(a.end()) / 2.0;
                let seg = 0.5 * a.radius * a.radius * (a.sweep - a.sweep.sin());
                chord + seg
            }
        }
    }

    /// Distance from a point to this edge.
    pub fn dist_to_point(&self, p: Point) -> f64 {
        match self {
            Edge::Segment(s) => super::dist_point_segment(p, s.start, s.end),
            Edge::Arc(a) => {
                let v = p - a.center;
                let theta = v.angle();
                if a.angle_in_span(theta, EPS_GEOM) {
                    (v.norm() - a.radius).abs()
                } else {
                    p.dist(a.start()).min(p.dist(a.end()))
                }
            }
        }
    }

    /// Parameter of a point lying on this edge (within `tol`), if any.
    pub fn param_of_point(&self, p: Point, tol: f64) -> Option<f64> {
        match self {
            Edge::Segment(s) => {
                let d = s.end - s.start;
                let len2 = d.dot(d);
                if len2 <= 0.0 {
                    return None;
                }
                let t = ((p - s.start).dot(d) / len2).clamp(0.0, 1.0);
                (p.dist(s.point_at(t)) <= tol).then_some(t)
            }
            Edge::Arc(a) => {
                let v = p - a.center;
                if (v.norm() - a.radius).abs() > tol {
                    return None;
                }
                let theta = v.angle();
                if !a.angle_in_span(theta, tol) {
                    return None;
                }
                Some(a.param_of_angle(theta))
            }
        }
    }

    /// Split this edge at the given sorted interior parameters.
    pub fn split_at(&self, params: &[f64]) -> Vec<Edge> {
        let mut cuts: Vec<f64> = params
            .iter()
            .copied()
            .filter(|&t| t > 1e-12 && t < 1.0 - 1e-12)
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if cuts.is_empty() {
            return vec![*self];
        }
        let mut out = Vec::with_capacity(cuts.len() + 1);
        let mut prev = 0.0;
        let mut bounds = cuts.clone();
        bounds.push(1.0);
        for t in bounds {
            match self {
                Edge::Segment(s) => {
                    out.push(Edge::segment(s.point_at(prev), s.point_at(t)));
                }
                Edge::Arc(a) => {
                    out.push(Edge::arc(
                        a.center,
                        a.radius,
                        a.start_angle + a.sweep * prev,
                        a.sweep * (t - prev),
                    ));
                }
            }
            prev = t;
        }
        out
    }

    /// Chord-based flattening into a polyline with `n` segments (used only for
    /// sampling fallbacks, never inside geometric operations).
    pub fn flatten(&self, n: usize) -> Vec<Point> {
        (0..=n).map(|i| self.point_at(i as f64 / n as f64)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn circle_area_and_length() {
        let e = Edge::Arc(CircularArc::full_circle(Point::new(0.0, 0.0), 2.0));
        assert!((e.length() - TAU * 2.0).abs() < 1e-12);
        assert!((e.signed_area_contribution() - PI * 4.0).abs() < 1e-12);
    }

    #[test]
    fn arc_split_preserves_length() {
        let e = Edge::arc(Point::new(1.0, 1.0), 3.0, 0.3, -2.1);
        let parts = e.split_at(&[0.25, 0.7]);
        assert_eq!(parts.len(), 3);
        let total: f64 = parts.iter().map(|p| p.length()).sum();
        assert!((total - e.length()).abs() < 1e-12);
        assert!(parts[0].start().dist(e.start()) < 1e-12);
        assert!(parts[2].end().dist(e.end()) < 1e-12);
        assert!(parts[0].end().dist(parts[1].start()) < 1e-12);
    }

    #[test]
    fn reversed_swaps_endpoints() {
        let e = Edge::arc(Point::new(0.0, 0.0), 1.0, 0.0, PI / 3.0);
        let r = e.reversed();
        assert!(r.start().dist(e.end()) < 1e-12);
        assert!(r.end().dist(e.start()) < 1e-12);
    }

    #[test]
    fn dist_to_arc() {
        // Quarter circle in the first quadrant, radius 1.
        let e = Edge::arc(Point::new(0.0, 0.0), 1.0, 0.0, PI / 2.0);
        let d = e.dist_to_point(Point::new(2.0, 2.0));
        assert!((d - (8f64.sqrt() - 1.0)).abs() < 1e-12);
        // Point whose angle is outside the span snaps to an endpoint.
        let d = e.dist_to_point(Point::new(-1.0, -1.0));
        assert!((d - Point::new(-1.0, -1.0).dist(Point::new(0.0, 1.0)).min(Point::new(-1.0,-1.0).dist(Point::new(1.0,0.0)))).abs() < 1e-12);
    }
}
