//! Arrangement of arc-shape boundaries: faces of the overlay, each with its
//! containing-shape set, a representative interior point, boundary provenance
//! and face adjacency.

use std::collections::{BTreeSet, HashMap};

use super::intersect::edge_edge_intersections;
use super::{ArcShape, Edge, Loop, Point};
use crate::error::{Error, Result};

/// A boundary piece of a face, remembering which input shape it came from.
#[derive(Debug, Clone)]
pub struct BoundaryPiece {
    pub shape: usize,
    pub edge: Edge,
}

#[derive(Debug, Clone)]
pub struct Face {
    pub id: usize,
    /// Outer cycle followed by hole cycles.
    pub loops: Vec<Loop>,
    /// D(f): indices of input shapes containing this face.
    pub containing_shapes: BTreeSet<usize>,
    pub representative_point: Point,
    pub area: f64,
    /// Ids of bounded faces sharing a boundary edge with this one.
    pub adjacent: BTreeSet<usize>,
    /// Whether this face touches the unbounded face across an edge.
    pub touches_unbounded: bool,
    pub boundary: Vec<BoundaryPiece>,
}

impl Face {
    pub fn region(&self) -> ArcShape {
        ArcShape {
            loops: self.loops.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    pub shapes: Vec<ArcShape>,
    /// Bounded faces only; the unbounded face is implicit.
    pub faces: Vec<Face>,
}

impl Arrangement {
    pub fn face_count_including_unbounded(&self) -> usize {
        self.faces.len() + 1
    }

    /// The bounded face containing a generic point, if any.
    pub fn face_at(&self, p: Point) -> Option<usize> {
        self.faces.iter().find(|f| face_contains(f, p)).map(|f| f.id)
    }
}

fn face_contains(f: &Face, p: Point) -> bool {
    if f.loops.is_empty() {
        return false;
    }
    let outer = &f.loops[0];
    if !outer.contains(p) {
        return false;
    }
    !f.loops[1..].iter().any(|h| h.contains(p))
}

struct HalfEdge {
    edge: Edge,
    shape: usize,
    from: usize,
    to: usize,
    twin: usize,
    cycle: usize,
}

fn curvature_key(e: &Edge) -> f64 {
    match e {
        Edge::Segment(_) => 0.0,
        Edge::Arc(a) => {
            if a.sweep >= 0.0 {
                1.0 / a.radius
            } else {
                -1.0 / a.radius
            }
        }
    }
}

/// Build the arrangement of a set of shapes.
pub fn build_arrangement(shapes: &[ArcShape]) -> Result<Arrangement> {
    let mut bbox = super::Bbox::empty();
    for s in shapes {
        bbox = bbox.union(&s.bbox());
    }
    let scale = bbox.diagonal().max(1.0);
    let weld = scale * 1e-7;
    let probe_delta = scale * super::SIDE_DELTA;

    // Tagged edges, split at intersections with edges of *other* shapes.
    let mut tagged: Vec<(usize, Edge)> = Vec::new();
    for (si, s) in shapes.iter().enumerate() {
        for e in s.edges() {
            tagged.push((si, *e));
        }
    }
    let mut params: Vec<Vec<f64>> = vec![Vec::new(); tagged.len()];
    for i in 0..tagged.len() {
        for j in (i + 1)..tagged.len() {
            if tagged[i].0 == tagged[j].0 {
                continue;
            }
            for (ti, tj) in edge_edge_intersections(&tagged[i].1, &tagged[j].1) {
                params[i].push(ti);
                params[j].push(tj);
            }
        }
    }
    let mut sub: Vec<(usize, Edge)> = Vec::new();
    for (i, (si, e)) in tagged.iter().enumerate() {
        for part in e.split_at(&params[i]) {
            if part.length() >= weld {
                sub.push((*si, part));
            }
        }
    }

    // Weld endpoints into nodes.
    let mut nodes: Vec<Point> = Vec::new();
    let node_of = |p: Point, nodes: &mut Vec<Point>| -> usize {
        for (i, &q) in nodes.iter().enumerate() {
            if q.dist(p) <= weld {
                return i;
            }
        }
        nodes.push(p);
        nodes.len() - 1
    };

    let mut hes: Vec<HalfEdge> = Vec::new();
    for (si, e) in sub {
        let a = node_of(e.start(), &mut nodes);
        let b = node_of(e.end(), &mut nodes);
        let idx = hes.len();
        hes.push(HalfEdge {
            edge: e,
            shape: si,
            from: a,
            to: b,
            twin: idx + 1,
            cycle: usize::MAX,
        });
        hes.push(HalfEdge {
            edge: e.reversed(),
            shape: si,
            from: b,
            to: a,
            twin: idx,
            cycle: usize::MAX,
        });
    }

    // Rotation order of outgoing half-edges around each node.
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, he) in hes.iter().enumerate() {
        rot[he.from].push(i);
    }
    for list in rot.iter_mut() {
        list.sort_by(|&a, &b| {
            let ta = hes[a].edge.tangent_at(0.0);
            let tb = hes[b].edge.tangent_at(0.0);
            let ka = (ta.angle(), curvature_key(&hes[a].edge));
            let kb = (tb.angle(), curvature_key(&hes[b].edge));
            ka.partial_cmp(&kb).unwrap()
        });
    }
    let pos_in_rot: HashMap<usize, usize> = rot
        .iter()
        .flat_map(|list| list.iter().enumerate().map(|(k, &h)| (h, k)))
        .collect();

    // Trace cycles: successor of h is the rotation predecessor of twin(h)
    // at the head node, which keeps the face on the left.
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..hes.len() {
        if hes[start].cycle != usize::MAX {
            continue;
        }
        let cid = cycles.len();
        let mut cyc = Vec::new();
        let mut cur = start;
        loop {
            hes[cur].cycle = cid;
            cyc.push(cur);
            let twin = hes[cur].twin;
            let node = hes[cur].to;
            let list = &rot[node];
            let k = pos_in_rot[&twin];
            let next = list[(k + list.len() - 1) % list.len()];
            if next == start {
                break;
            }
            if hes[next].cycle != usize::MAX {
                return Err(Error::Geometry("face tracing collided".into()));
            }
            cur = next;
        }
        cycles.push(cyc);
    }

    // Classify cycles by signed area.
    let cycle_area: Vec<f64> = cycles
        .iter()
        .map(|c| {
            c.iter()
                .map(|&h| hes[h].edge.signed_area_contribution())
                .sum()
        })
        .collect();
    let cycle_loop = |c: &Vec<usize>| Loop::new(c.iter().map(|&h| hes[h].edge).collect());

    let mut face_of_cycle: Vec<Option<usize>> = vec![None; cycles.len()];
    let mut faces: Vec<Face> = Vec::new();
    let min_area = (weld * 10.0) * (weld * 10.0);
    for (ci, c) in cycles.iter().enumerate() {
        if cycle_area[ci] > min_area {
            let id = faces.len();
            face_of_cycle[ci] = Some(id);
            faces.push(Face {
                id,
                loops: vec![cycle_loop(c)],
                containing_shapes: BTreeSet::new(),
                representative_point: Point::new(0.0, 0.0),
                area: cycle_area[ci],
                adjacent: BTreeSet::new(),
                touches_unbounded: false,
                boundary: c
                    .iter()
                    .map(|&h| BoundaryPiece {
                        shape: hes[h].shape,
                        edge: hes[h].edge,
                    })
                    .collect(),
            });
        }
    }
    // Assign negative cycles (holes) to the smallest positive cycle
    // containing a probe just left of the cycle.
    for (ci, c) in cycles.iter().enumerate() {
        if face_of_cycle[ci].is_some() || c.is_empty() {
            continue;
        }
        let e = &hes[c[0]].edge;
        let probe = e.midpoint() + e.left_normal_at(0.5) * probe_delta;
        let mut best: Option<usize> = None;
        for f in &faces {
            if f.loops[0].contains(probe) {
                if best.map_or(true, |b| faces[b].area > f.area) {
                    best = Some(f.id);
                }
            }
        }
        if let Some(fid) = best {
            face_of_cycle[ci] = Some(fid);
            faces[fid].loops.push(cycle_loop(c));
            faces[fid].area += cycle_area[ci];
            faces[fid].boundary.extend(c.iter().map(|&h| BoundaryPiece {
                shape: hes[h].shape,
                edge: hes[h].edge,
            }));
        }
        // Otherwise the cycle bounds the unbounded face.
    }

    // Representative points and containing-shape sets.
    for f in faces.iter_mut() {
        f.representative_point = find_representative(f, probe_delta)?;
        f.containing_shapes = shapes
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(f.representative_point))
            .map(|(i, _)| i)
            .collect();
    }

    // Adjacency through twins.
    let mut by_id: Vec<usize> = (0..faces.len()).collect();
    by_id.sort();
    for (hi, he) in hes.iter().enumerate() {
        if hi % 2 != 0 {
            continue;
        }
        let fa = face_of_cycle[he.cycle];
        let fb = face_of_cycle[hes[he.twin].cycle];
        match (fa, fb) {
            (Some(a), Some(b)) if a != b => {
                faces[a].adjacent.insert(b);
                faces[b].adjacent.insert(a);
            }
            (Some(a), None) => faces[a].touches_unbounded = true,
            (None, Some(b)) => faces[b].touches_unbounded = true,
            _ => {}
        }
    }

    Ok(Arrangement {
        shapes: shapes.to_vec(),
        faces,
    })
}

fn find_representative(f: &Face, delta: f64) -> Result<Point> {
    for scale in [1.0, 0.3, 0.1, 3.0, 0.03] {
        for l in &f.loops {
            for e in &l.edges {
                for t in [0.5, 0.25, 0.75] {
                    let p = e.point_at(t) + e.left_normal_at(t) * (delta * scale);
                    if face_contains(f, p) {
                        return Ok(p);
                    }
                }
            }
        }
    }
    Err(Error::Geometry(
        "could not find representative point for face".into(),
    ))
}
