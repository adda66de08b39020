//! Self-contained 2-D kernel: points, disks, shapes bounded by line segments
//! and circular arcs, boolean operations, disk-Minkowski sums and differences,
//! Voronoi diagrams, arrangements, and convex hulls of disks.

pub mod arc;
pub mod arrangement;
pub mod boolean;
pub mod disk_hull;
pub mod hull;
pub mod intersect;
pub mod offset;
pub mod shape;
pub mod voronoi;

pub use arc::{CircularArc, Edge, Segment};
pub use arrangement::{build_arrangement, Arrangement, BoundaryPiece, Face};
pub use boolean::{boolean, intersection_area, union_many, BoolOp};
pub use disk_hull::convex_hull_of_disks;
pub use hull::{convex_hull, dist_point_convex_hull, point_in_convex_hull};
pub use offset::{
    close_shape, dilate_hull, dilate_point, dilate_polyline, dilate_shape, edge_sausage,
    erode_shape, open_shape, stadium, thin_rect,
};
pub use shape::{ArcShape, Loop};
pub use voronoi::voronoi_clipped_to_hull;

use serde::{Deserialize, Serialize};

/// Geometric tolerance in world units.
pub const EPS_GEOM: f64 = 1e-9;

/// Endpoint welding tolerance used when stitching boolean/arrangement output.
pub const EPS_WELD: f64 = 1e-6;

/// Offset used to sample a point slightly to the side of an edge when
/// classifying boolean sub-edges.
pub const SIDE_DELTA: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(&self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(&self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(&self, other: Point) -> f64 {
        (*self - other).norm()
    }

    pub fn normalized(&self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    /// Rotate 90 degrees counter-clockwise.
    pub fn perp(&self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn from_angle(theta: f64) -> Point {
        Point::new(theta.cos(), theta.sin())
    }

    pub fn lerp(&self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl std::ops::Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Disk { center, radius }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.center.dist(p) <= self.radius + EPS_GEOM
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bbox {
    pub min: Point,
    pub max: Point,
}

impl Bbox {
    pub fn empty() -> Self {
        Bbox {
            min: Point::new(f64::INFINITY, f64::INFINITY),
            max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn from_points<I: IntoIterator<Item = Point>>(points: I) -> Self {
        let mut b = Bbox::empty();
        for p in points {
            b.expand(p);
        }
        b
    }

    pub fn expand(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&self, other: &Bbox) -> Bbox {
        let mut b = *self;
        b.expand(other.min);
        b.expand(other.max);
        b
    }

    pub fn inflated(&self, pad: f64) -> Bbox {
        Bbox {
            min: Point::new(self.min.x - pad, self.min.y - pad),
            max: Point::new(self.max.x + pad, self.max.y + pad),
        }
    }

    pub fn width(&self) -> f64 {
        (self.max.x - self.min.x).max(0.0)
    }

    pub fn height(&self) -> f64 {
        (self.max.y - self.min.y).max(0.0)
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn intersects(&self, other: &Bbox) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }

    pub fn contains_point(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Normalize an angle into `[0, 2*pi)`.
pub fn norm_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut a = a % two_pi;
    if a < 0.0 {
        a += two_pi;
    }
    a
}

/// Signed angle from direction `xy` to direction `yz`, in `(-pi, pi]`.
/// Counter-clockwise turns are positive.
pub fn turning_angle(x: Point, y: Point, z: Point) -> crate::error::Result<f64> {
    let u = y - x;
    let v = z - y;
    if u.norm() <= EPS_GEOM || v.norm() <= EPS_GEOM {
        return Err(crate::error::Error::InvalidInput(
            "zero-length segment in turning angle".into(),
        ));
    }
    Ok(u.cross(v).atan2(u.dot(v)))
}

/// Distance from point `p` to the segment `ab`.
pub fn dist_point_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq <= EPS_GEOM * EPS_GEOM {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}
