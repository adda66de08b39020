//! Closed regions bounded by line segments and circular arcs.

use serde::{Deserialize, Serialize};

use super::intersect::line_circle_params;
use super::{Bbox, Disk, Edge, Point, EPS_GEOM, EPS_WELD};
use crate::error::{Error, Result};

/// A closed loop of edges. Consecutive edge endpoints coincide within the
/// welding tolerance; the last edge closes back to the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Loop {
    pub edges: Vec<Edge>,
}

impl Loop {
    pub fn new(edges: Vec<Edge>) -> Self {
        Loop { edges }
    }

    pub fn signed_area(&self) -> f64 {
        self.edges.iter().map(|e| e.signed_area_contribution()).sum()
    }

    pub fn length(&self) -> f64 {
        self.edges.iter().map(|e| e.length()).sum()
    }

    pub fn reversed(&self) -> Loop {
        Loop::new(self.edges.iter().rev().map(|e| e.reversed()).collect())
    }

    pub fn bbox(&self) -> Bbox {
        let mut b = Bbox::empty();
        for e in &self.edges {
            b = b.union(&e.bbox());
        }
        b
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let n = self.edges.len();
        (0..n).all(|i| self.edges[i].end().dist(self.edges[(i + 1) % n].start()) <= tol)
    }

    /// A generic point on the loop boundary (not a vertex).
    pub fn boundary_point(&self) -> Point {
        self.edges[0].point_at(0.372_846_12)
    }

    /// Even-odd containment of `p` with respect to this loop alone.
    pub fn contains(&self, p: Point) -> bool {
        ray_parity(std::slice::from_ref(self), p)
    }
}

/// A region of the plane bounded by one or more loops. Outer boundaries are
/// counter-clockwise (positive signed area), holes clockwise. Membership is
/// even-odd over all loops, so nested components are supported.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ArcShape {
    pub loops: Vec<Loop>,
}

impl ArcShape {
    pub fn empty() -> Self {
        ArcShape { loops: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    pub fn from_loops(loops: Vec<Loop>) -> Self {
        ArcShape { loops }.normalized()
    }

    pub fn disk(d: Disk) -> Self {
        ArcShape {
            loops: vec![Loop::new(vec![Edge::Arc(super::CircularArc::full_circle(
                d.center, d.radius,
            ))])],
        }
    }

    /// Simple polygon from ccw vertices.
    pub fn polygon(vertices: &[Point]) -> Self {
        let n = vertices.len();
        let edges = (0..n)
            .map(|i| Edge::segment(vertices[i], vertices[(i + 1) % n]))
            .collect();
        ArcShape {
            loops: vec![Loop::new(edges)],
        }
        .normalized()
    }

    pub fn rect(min: Point, max: Point) -> Self {
        Self::polygon(&[
            min,
            Point::new(max.x, min.y),
            max,
            Point::new(min.x, max.y),
        ])
    }

    /// Fix loop orientations from their nesting depth: loops at even depth
    /// become counter-clockwise outer boundaries, odd depth clockwise holes.
    pub fn normalized(mut self) -> Self {
        let probes: Vec<Point> = self.loops.iter().map(|l| l.boundary_point()).collect();
        let mut oriented = Vec::with_capacity(self.loops.len());
        for (i, l) in self.loops.iter().enumerate() {
            let depth = self
                .loops
                .iter()
                .enumerate()
                .filter(|(j, other)| *j != i && other.contains(probes[i]))
                .count();
            let area = l.signed_area();
            let want_ccw = depth % 2 == 0;
            if (area >= 0.0) == want_ccw {
                oriented.push(l.clone());
            } else {
                oriented.push(l.reversed());
            }
        }
        self.loops = oriented;
        self
    }

    pub fn area(&self) -> f64 {
        self.loops.iter().map(|l| l.signed_area()).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.loops.iter().map(|l| l.length()).sum()
    }

    pub fn bbox(&self) -> Bbox {
        let mut b = Bbox::empty();
        for l in &self.loops {
            b = b.union(&l.bbox());
        }
        b
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.loops.iter().flat_map(|l| l.edges.iter())
    }

    /// Even-odd membership test via ray casting. Points on the boundary may be
    /// classified either way; use `on_boundary` to detect them.
    pub fn contains(&self, p: Point) -> bool {
        ray_parity(&self.loops, p)
    }

    pub fn dist_to_boundary(&self, p: Point) -> f64 {
        self.edges()
            .map(|e| e.dist_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn on_boundary(&self, p: Point, tol: f64) -> bool {
        self.dist_to_boundary(p) <= tol
    }

    pub fn validate(&self) -> Result<()> {
        for l in &self.loops {
            if !l.is_closed(EPS_WELD.max(self.bbox().diagonal() * 1e-9)) {
                return Err(Error::Geometry("loop is not closed".into()));
            }
        }
        Ok(())
    }

    pub fn translated(&self, d: Point) -> ArcShape {
        let loops = self
            .loops
            .iter()
            .map(|l| {
                Loop::new(
                    l.edges
                        .iter()
                        .map(|e| match e {
                            Edge::Segment(s) => Edge::segment(s.start + d, s.end + d),
                            Edge::Arc(a) => {
                                Edge::arc(a.center + d, a.radius, a.start_angle, a.sweep)
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        ArcShape { loops }
    }
}

/// Even-odd ray-cast over a set of loops, retrying the ray direction when an
/// intersection is too close to a vertex or tangency to be trusted.
fn ray_parity(loops: &[Loop], p: Point) -> bool {
    let mut angle: f64 = 0.577_215_664; // arbitrary non-axis-aligned start
    for _ in 0..48 {
        let dir = Point::from_angle(angle);
        match cast_ray(loops, p, dir) {
            Some(crossings) => return crossings % 2 == 1,
            None => angle += 2.399_963_229_7, // golden angle
        }
    }
    // Give up on robustness and take the last answer unconditionally.
    let dir = Point::from_angle(angle);
    count_ray_crossings(loops, p, dir).0 % 2 == 1
}

fn cast_ray(loops: &[Loop], p: Point, dir: Point) -> Option<usize> {
    let (count, suspicious) = count_ray_crossings(loops, p, dir);
    if suspicious {
        None
    } else {
        Some(count)
    }
}

fn count_ray_crossings(loops: &[Loop], p: Point, dir: Point) -> (usize, bool) {
    let mut count = 0usize;
    let mut suspicious = false;
    for l in loops {
        for e in &l.edges {
            match e {
                Edge::Segment(s) => {
                    let r = s.end - s.start;
                    let denom = dir.cross(r);
                    let scale = r.norm().max(1.0);
                    if denom.abs() < 1e-12 * scale {
                        // Parallel: suspicious only if the segment line passes near p.
                        if (s.start - p).cross(dir).abs() < EPS_WELD * scale {
                            suspicious = true;
                        }
                        continue;
                    }
                    let qp = s.start - p;
                    let t = qp.cross(r) / denom; // along ray
                    let u = qp.cross(dir) / denom; // along segment
                    if t > 0.0 && (0.0..=1.0).contains(&u) {
                        if t < EPS_WELD || u < 1e-9 || u > 1.0 - 1e-9 {
                            suspicious = true;
                        }
                        count += 1;
                    } else if t > 0.0 && (u.abs() < 1e-9 || (u - 1.0).abs() < 1e-9) {
                        suspicious = true;
                    }
                }
                Edge::Arc(a) => {
                    let ts = line_circle_params(p, dir, a.center, a.radius);
                    if ts.len() == 1 {
                        // Tangential hit.
                        if ts[0] > 0.0 {
                            suspicious = true;
                        }
                        continue;
                    }
                    for t in ts {
                        if t <= 0.0 {
                            if t > -EPS_WELD {
                                suspicious = true;
                            }
                            continue;
                        }
                        let q = p + dir * t;
                        let theta = (q - a.center).angle();
                        if a.angle_in_span(theta, EPS_GEOM) {
                            let u = a.param_of_angle(theta);
                            if t < EPS_WELD || u < 1e-9 || u > 1.0 - 1e-9 {
                                suspicious = true;
                            }
                            count += 1;
                        } else if a.angle_in_span(theta, EPS_WELD * 100.0) {
                            suspicious = true;
                        }
                    }
                }
            }
        }
    }
    (count, suspicious)
}
