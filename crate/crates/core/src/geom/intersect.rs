//! Pairwise intersection of boundary edges. All routines return parameter
//! pairs `(t_self, t_other)` in `[0, 1]`. Collinear / concentric overlaps are
//! reported via the endpoints of the overlapping portion so callers can split
//! edges there.

use super::{CircularArc, Edge, Point, Segment, EPS_GEOM};

const PARAM_EPS: f64 = 1e-12;

fn in_unit(t: f64) -> bool {
    (-PARAM_EPS..=1.0 + PARAM_EPS).contains(&t)
}

/// Intersections of the infinite line `p + t*d` with the circle `(c, r)`,
/// returned as line parameters `t`.
pub fn line_circle_params(p: Point, d: Point, c: Point, r: f64) -> Vec<f64> {
    let f = p - c;
    let a = d.norm_sq();
    let b = 2.0 * f.dot(d);
    let cc = f.norm_sq() - r * r;
    let disc = b * b - 4.0 * a * cc;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    if sq < 1e-14 * a.max(1.0) {
        vec![-b / (2.0 * a)]
    } else {
        vec![(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)]
    }
}

/// Intersection points of two circles.
pub fn circle_circle_points(c1: Point, r1: f64, c2: Point, r2: f64) -> Vec<Point> {
    let d = c1.dist(c2);
    if d < EPS_GEOM {
        return Vec::new(); // concentric: no transversal intersection
    }
    if d > r1 + r2 || d < (r1 - r2).abs() {
        return Vec::new();
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h_sq = r1 * r1 - a * a;
    let h = if h_sq > 0.0 { h_sq.sqrt() } else { 0.0 };
    let dir = (c2 - c1) * (1.0 / d);
    let mid = c1 + dir * a;
    if h < 1e-14 * (r1 + r2).max(1.0) {
        vec![mid]
    } else {
        let off = dir.perp() * h;
        vec![mid + off, mid - off]
    }
}

fn seg_seg(s1: &Segment, s2: &Segment) -> Vec<(f64, f64)> {
    let r = s1.end - s1.start;
    let s = s2.end - s2.start;
    let denom = r.cross(s);
    let qp = s2.start - s1.start;
    let scale = r.norm().max(s.norm()).max(1.0);
    if denom.abs() < 1e-14 * scale * scale {
        // Parallel. If collinear and overlapping, report overlap endpoints.
        if qp.cross(r).abs() > EPS_GEOM * scale {
            return Vec::new();
        }
        let mut out = Vec::new();
        let rr = r.norm_sq();
        let ss = s.norm_sq();
        if rr < 1e-300 || ss < 1e-300 {
            return Vec::new();
        }
        for (p, t2) in [(s2.start, 0.0), (s2.end, 1.0)] {
            let t1 = (p - s1.start).dot(r) / rr;
            if in_unit(t1) {
                out.push((t1.clamp(0.0, 1.0), t2));
            }
        }
        for (p, t1) in [(s1.start, 0.0), (s1.end, 1.0)] {
            let t2 = (p - s2.start).dot(s) / ss;
            if in_unit(t2) {
                out.push((t1, t2.clamp(0.0, 1.0)));
            }
        }
        return out;
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if in_unit(t) && in_unit(u) {
        vec![(t.clamp(0.0, 1.0), u.clamp(0.0, 1.0))]
    } else {
        Vec::new()
    }
}

fn seg_arc(s: &Segment, a: &CircularArc) -> Vec<(f64, f64)> {
    let d = s.end - s.start;
    if d.norm() < 1e-300 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for t in line_circle_params(s.start, d, a.center, a.radius) {
        if !in_unit(t) {
            continue;
        }
        let p = s.point_at(t.clamp(0.0, 1.0));
        let theta = (p - a.center).angle();
        if a.angle_in_span(theta, EPS_GEOM * 10.0) {
            out.push((t.clamp(0.0, 1.0), a.param_of_angle(theta)));
        }
    }
    out
}

fn arc_arc(a1: &CircularArc, a2: &CircularArc) -> Vec<(f64, f64)> {
    let concentric = a1.center.dist(a2.center) < EPS_GEOM
        && (a1.radius - a2.radius).abs() < EPS_GEOM;
    if concentric {
        // Overlapping portions split at each other's endpoints.
        let mut out = Vec::new();
        for (p, t2) in [(a2.start(), 0.0), (a2.end(), 1.0)] {
            let theta = (p - a1.center).angle();
            if a1.angle_in_span(theta, EPS_GEOM * 10.0) {
                out.push((a1.param_of_angle(theta), t2));
            }
        }
        for (p, t1) in [(a1.start(), 0.0), (a1.end(), 1.0)] {
            let theta = (p - a2.center).angle();
            if a2.angle_in_span(theta, EPS_GEOM * 10.0) {
                out.push((t1, a2.param_of_angle(theta)));
            }
        }
        return out;
    }
    let mut out = Vec::new();
    for p in circle_circle_points(a1.center, a1.radius, a2.center, a2.radius) {
        let th1 = (p - a1.center).angle();
        let th2 = (p - a2.center).angle();
        if a1.angle_in_span(th1, EPS_GEOM * 10.0) && a2.angle_in_span(th2, EPS_GEOM * 10.0) {
            out.push((a1.param_of_angle(th1), a2.param_of_angle(th2)));
        }
    }
    out
}

/// All intersections between two edges as `(t_a, t_b)` parameter pairs.
pub fn edge_edge_intersections(a: &Edge, b: &Edge) -> Vec<(f64, f64)> {
    if !a.bbox().inflated(EPS_GEOM).intersects(&b.bbox().inflated(EPS_GEOM)) {
        return Vec::new();
    }
    match (a, b) {
        (Edge::Segment(s1), Edge::Segment(s2)) => seg_seg(s1, s2),
        (Edge::Segment(s), Edge::Arc(arc)) => seg_arc(s, arc),
        (Edge::Arc(arc), Edge::Segment(s)) => seg_arc(s, arc)
            .into_iter()
            .map(|(ts, ta)| (ta, ts))
            .collect(),
        (Edge::Arc(a1), Edge::Arc(a2)) => arc_arc(a1, a2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn crossing_segments() {
        let a = Edge::segment(Point::new(0.0, 0.0), Point::new(2.0, 2.0));
        let b = Edge::segment(Point::new(0.0, 2.0), Point::new(2.0, 0.0));
        let xs = edge_edge_intersections(&a, &b);
        assert_eq!(xs.len(), 1);
        assert!((xs[0].0 - 0.5).abs() < 1e-12);
        assert!((xs[0].1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn segment_through_circle() {
        let s = Edge::segment(Point::new(-2.0, 0.0), Point::new(2.0, 0.0));
        let c = Edge::Arc(CircularArc::full_circle(Point::new(0.0, 0.0), 1.0));
        let mut xs = edge_edge_intersections(&s, &c);
        xs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(xs.len(), 2);
        let p0 = s.point_at(xs[0].0);
        assert!(p0.dist(Point::new(-1.0, 0.0)) < 1e-9);
    }

    #[test]
    fn two_circles_lens() {
        let c1 = Edge::Arc(CircularArc::full_circle(Point::new(0.0, 0.0), 1.0));
        let c2 = Edge::Arc(CircularArc::full_circle(Point::new(1.0, 0.0), 1.0));
        let xs = edge_edge_intersections(&c1, &c2);
        assert_eq!(xs.len(), 2);
        for (t1, _) in xs {
            let p = c1.point_at(t1);
            assert!((p.x - 0.5).abs() < 1e-9);
            assert!((p.y.abs() - (3f64.sqrt() / 2.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn arc_out_of_span_is_skipped() {
        // Upper half circle vs a segment crossing only the lower half.
        let a = Edge::arc(Point::new(0.0, 0.0), 1.0, 0.0, PI);
        let s = Edge::segment(Point::new(-2.0, -0.5), Point::new(2.0, -0.5));
        assert!(edge_edge_intersections(&a, &s).is_empty());
    }

    #[test]
    fn collinear_overlap_reports_endpoints() {
        let a = Edge::segment(Point::new(0.0, 0.0), Point::new(2.0, 0.0));
        let b = Edge::segment(Point::new(1.0, 0.0), Point::new(3.0, 0.0));
        let xs = edge_edge_intersections(&a, &b);
        assert!(xs.iter().any(|&(t1, _)| (t1 - 0.5).abs() < 1e-9));
    }
}
