//! Voronoi diagram of point sites clipped to their convex hull, reported as
//! the arrangement vertices annotated with the distance to the nearest site.
//! Built on a Bowyer-Watson Delaunay triangulation.

use super::hull::{convex_hull, point_in_convex_hull};
use super::{Bbox, Point, EPS_GEOM};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Triangle {
    v: [usize; 3],
    circumcenter: Point,
    circumradius_sq: f64,
}

fn circumcircle(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-14 * (a.norm() + b.norm() + c.norm() + 1.0).powi(2) {
        return None;
    }
    let ux = ((a.norm_sq()) * (b.y - c.y)
        + (b.norm_sq()) * (c.y - a.y)
        + (c.norm_sq()) * (a.y - b.y))
        / d;
    let uy = ((a.norm_sq()) * (c.x - b.x)
        + (b.norm_sq()) * (a.x - c.x)
        + (c.norm_sq()) * (b.x - a.x))
        / d;
    let center = Point::new(ux, uy);
    Some((center, center.dist(a)))
}

/// Directions of the three symbolic "super" vertices at infinity. The
/// triangulation treats them symbolically so that real triangles with huge
/// circumcircles (near-collinear sites) are never suppressed by a finite
/// super vertex landing inside.
const SUPER_DIR: [Point; 3] = [
    Point { x: -2.0, y: -1.0 },
    Point { x: 2.0, y: -1.0 },
    Point { x: 0.0, y: 2.0 },
];

/// Limit of the in-circumcircle predicate for a triangle that may contain
/// super vertices (indices `>= n`). With the supers at infinity, circles
/// through one or two of them degenerate into half-planes.
fn in_circumcircle(t: &Triangle, p: Point, verts: &[Point], n: usize) -> bool {
    let supers: Vec<usize> = t.v.iter().copied().filter(|&i| i >= n).collect();
    match supers.len() {
        0 => t.circumcenter.dist(p).powi(2) <= t.circumradius_sq * (1.0 + 1e-12),
        1 => {
            // Half-plane bounded by the real edge, on the super's side.
            let u = SUPER_DIR[supers[0] - n];
            let mut real = t.v.iter().copied().filter(|&i| i < n);
            let a = verts[real.next().unwrap()];
            let b = verts[real.next().unwrap()];
            let d = b - a;
            d.cross(p - a) * d.cross(u) > 0.0
        }
        2 => {
            // Circle through one real vertex and two infinite directions
            // u_i, u_j: the limit is the half-plane { p : (p - a) . w > 0 }
            // where w solves u_i . w = |u_i|^2, u_j . w = |u_j|^2.
            let (ui, uj) = (SUPER_DIR[supers[0] - n], SUPER_DIR[supers[1] - n]);
            let a = verts[t.v.iter().copied().find(|&i| i < n).unwrap()];
            let det = ui.cross(uj);
            let w = Point::new(
                (ui.norm_sq() * uj.y - uj.norm_sq() * ui.y) / det,
                (ui.x * uj.norm_sq() - uj.x * ui.norm_sq()) / det,
            );
            (p - a).dot(w) > 0.0
        }
        _ => true, // the initial super triangle contains everything
    }
}

fn delaunay(points: &[Point]) -> Vec<Triangle> {
    let bbox = Bbox::from_points(points.iter().copied());
    let diag = bbox.diagonal().max(1.0);
    let mid = Point::new(
        (bbox.min.x + bbox.max.x) / 2.0,
        (bbox.min.y + bbox.max.y) / 2.0,
    );
    let m = 20.0 * diag;
    let n = points.len();
    let mut verts: Vec<Point> = points.to_vec();
    for u in SUPER_DIR {
        verts.push(mid + u * m);
    }

    let make = |v: [usize; 3], verts: &[Point]| -> Option<Triangle> {
        if v.iter().any(|&i| i >= n) {
            // Super-vertex triangles never use their numeric circumcircle.
            return Some(Triangle {
                v,
                circumcenter: Point::new(0.0, 0.0),
                circumradius_sq: 0.0,
            });
        }
        let (c, r) = circumcircle(verts[v[0]], verts[v[1]], verts[v[2]])?;
        Some(Triangle {
            v,
            circumcenter: c,
            circumradius_sq: r * r,
        })
    };

    let mut tris: Vec<Triangle> = vec![make([n, n + 1, n + 2], &verts).unwrap()];
    for (pi, &p) in points.iter().enumerate() {
        let mut bad: Vec<usize> = Vec::new();
        for (ti, t) in tris.iter().enumerate() {
            if in_circumcircle(t, p, &verts, n) {
                bad.push(ti);
            }
        }
        // Boundary of the cavity: edges of bad triangles not shared by two bad ones.
        let mut boundary: Vec<(usize, usize)> = Vec::new();
        for &ti in &bad {
            let t = tris[ti];
            for k in 0..3 {
                let e = (t.v[k], t.v[(k + 1) % 3]);
                let mut shared = false;
                for &tj in &bad {
                    if tj == ti {
                        continue;
                    }
                    let u = tris[tj].v;
                    for k2 in 0..3 {
                        let f = (u[k2], u[(k2 + 1) % 3]);
                        if (f.0 == e.1 && f.1 == e.0) || (f.0 == e.0 && f.1 == e.1) {
                            shared = true;
                        }
                    }
                }
                if !shared {
                    boundary.push(e);
                }
            }
        }
        let mut keep: Vec<Triangle> = Vec::new();
        for (ti, t) in tris.iter().enumerate() {
            if !bad.contains(&ti) {
                keep.push(*t);
            }
        }
        for (a, b) in boundary {
            if let Some(t) = make([a, b, pi], &verts) {
                keep.push(t);
            }
        }
        tris = keep;
    }
    tris.retain(|t| t.v.iter().all(|&i| i < n));
    tris
}

/// Vertices of the Voronoi diagram of `sites` clipped to their convex hull:
/// interior Voronoi vertices, intersections of Voronoi edges with hull edges,
/// and the hull vertices themselves (distance zero). Each vertex carries its
/// distance to the nearest site.
pub fn voronoi_clipped_to_hull(sites: &[Point]) -> Result<Vec<(Point, f64)>> {
    if sites.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut pts: Vec<Point> = Vec::new();
    for &p in sites {
        if !pts.iter().any(|q| q.dist(p) < EPS_GEOM) {
            pts.push(p);
        }
    }
    if pts.len() == 1 {
        return Ok(vec![(pts[0], 0.0)]);
    }
    let hull = convex_hull(&pts)?;
    if hull.len() == 2 {
        // Collinear: the clipped diagram is the hull segment split at the
        // midpoints of consecutive sites.
        let dir = (hull[1] - hull[0]).normalized();
        let mut ordered = pts.clone();
        ordered.sort_by(|a, b| a.dot(dir).partial_cmp(&b.dot(dir)).unwrap());
        let mut out: Vec<(Point, f64)> = ordered.iter().map(|&p| (p, 0.0)).collect();
        for w in ordered.windows(2) {
            let mid = w[0].lerp(w[1], 0.5);
            out.push((mid, mid.dist(w[0])));
        }
        return Ok(out);
    }

    let tris = delaunay(&pts);
    let tol = Bbox::from_points(pts.iter().copied()).diagonal() * 1e-9;
    let mut out: Vec<(Point, f64)> = Vec::new();
    for &v in &hull {
        out.push((v, 0.0));
    }
    for t in &tris {
        if point_in_convex_hull(t.circumcenter, &hull, tol) {
            out.push((t.circumcenter, t.circumradius_sq.sqrt()));
        }
    }

    // Voronoi edges: duals of Delaunay edges. Shared edges connect two
    // circumcenters; hull-boundary edges extend outward as a long ray.
    let diag = Bbox::from_points(pts.iter().copied()).diagonal().max(1.0);
    let mut edge_map: std::collections::HashMap<(usize, usize), Vec<usize>> =
        std::collections::HashMap::new();
    for (ti, t) in tris.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t.v[k], t.v[(k + 1) % 3]);
            let key = (a.min(b), a.max(b));
            edge_map.entry(key).or_default().push(ti);
        }
    }
    for (&(a, b), tlist) in &edge_map {
        let (p0, p1) = match tlist.len() {
            2 => (tris[tlist[0]].circumcenter, tris[tlist[1]].circumcenter),
            1 => {
                let t = &tris[tlist[0]];
                let opp = t.v.iter().copied().find(|&v| v != a && v != b).unwrap();
                // The unbounded dual edge runs along the perpendicular
                // bisector of (a, b), away from the opposite vertex.
                let mid = pts[a].lerp(pts[b], 0.5);
                let mut dir = (pts[b] - pts[a]).perp().normalized();
                if dir.dot(mid - pts[opp]) < 0.0 {
                    dir = -dir;
                }
                // Skinny triangles put the circumcenter far outside the
                // hull, so the ray must be long enough to travel back
                // across it.
                let len = t.circumcenter.dist(mid) + 10.0 * diag;
                (t.circumcenter, t.circumcenter + dir * len)
            }
            _ => continue,
        };
        // Intersections of this (bounded) Voronoi edge with hull edges.
        let m = hull.len();
        for i in 0..m {
            let (h0, h1) = (hull[i], hull[(i + 1) % m]);
            let r = p1 - p0;
            let s = h1 - h0;
            let denom = r.cross(s);
            if denom.abs() < 1e-14 * diag * diag {
                continue;
            }
            let qp = h0 - p0;
            let t = qp.cross(s) / denom;
            let u = qp.cross(r) / denom;
            if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
                let x = p0 + r * t;
                out.push((x, x.dist(pts[a])));
            }
        }
    }

    // Deduplicate coincident vertices, keeping the smallest distance.
    let mut dedup: Vec<(Point, f64)> = Vec::new();
    for (p, d) in out {
        if let Some(existing) = dedup.iter_mut().find(|(q, _)| q.dist(p) < tol.max(1e-12)) {
            existing.1 = existing.1.min(d);
        } else {
            dedup.push((p, d));
        }
    }
    Ok(dedup)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site() {
        let v = voronoi_clipped_to_hull(&[Point::new(1.0, 1.0)]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].1, 0.0);
    }

    #[test]
    fn two_sites_split_at_midpoint() {
        let v =
            voronoi_clipped_to_hull(&[Point::new(0.0, 0.0), Point::new(4.0, 0.0)]).unwrap();
        let max = v.iter().map(|&(_, d)| d).fold(0.0f64, f64::max);
        assert!((max - 2.0).abs() < 1e-9);
        assert!(v.iter().any(|&(p, _)| p.dist(Point::new(2.0, 0.0)) < 1e-9));
    }

    #[test]
    fn equilateral_triangle_circumradius() {
        let h = 3f64.sqrt() / 2.0;
        let v = voronoi_clipped_to_hull(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, h),
        ])
        .unwrap();
        let max = v.iter().map(|&(_, d)| d).fold(0.0f64, f64::max);
        assert!((max - 1.0 / 3f64.sqrt()).abs() < 1e-9, "max = {max}");
    }

    #[test]
    fn thin_triangle_keeps_its_voronoi_structure() {
        // Near-collinear sites push the circumcenter far outside the hull;
        // the cover distance at the hull boundary must still be found.
        let v = voronoi_clipped_to_hull(&[
            Point::new(96.75, 73.5),
            Point::new(84.875, 79.375),
            Point::new(63.625, 90.375),
        ])
        .unwrap();
        let max = v.iter().map(|&(_, d)| d).fold(0.0f64, f64::max);
        assert!((max - 11.9644).abs() < 1e-3, "max = {max}");
    }

    #[test]
    fn square_grid_vertex() {
        let v = voronoi_clipped_to_hull(&[
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        let max = v.iter().map(|&(_, d)| d).fold(0.0f64, f64::max);
        assert!((max - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn matches_grid_oracle_on_random_sites() {
        let mut seed = 99u64;
        let mut rnd = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _case in 0..10 {
            let pts: Vec<Point> = (0..8).map(|_| Point::new(rnd() * 10.0, rnd() * 10.0)).collect();
            let hull = convex_hull(&pts).unwrap();
            if hull.len() < 3 {
                continue;
            }
            let v = voronoi_clipped_to_hull(&pts).unwrap();
            let max = v.iter().map(|&(_, d)| d).fold(0.0f64, f64::max);
            // Grid oracle: farthest point of the hull to its nearest site.
            let bbox = Bbox::from_points(pts.iter().copied());
            let mut oracle = 0.0f64;
            let steps = 300;
            for i in 0..=steps {
                for j in 0..=steps {
                    let p = Point::new(
                        bbox.min.x + bbox.width() * i as f64 / steps as f64,
                        bbox.min.y + bbox.height() * j as f64 / steps as f64,
                    );
                    if point_in_convex_hull(p, &hull, 0.0) {
                        let d = pts.iter().map(|q| q.dist(p)).fold(f64::INFINITY, f64::min);
                        oracle = oracle.max(d);
                    }
                }
            }
            assert!(
                (max - oracle).abs() <= 0.02 * oracle.max(1e-9),
                "max {max} vs oracle {oracle}"
            );
        }
    }
}
