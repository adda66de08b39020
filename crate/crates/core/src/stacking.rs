//! Local stacking orders for overlapping dilated shapes: overlap components,
//! pairwise preference relations, the relation hypergraph, cycle removal and
//! per-face total orders.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::geom::{Arrangement, Edge, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Below,
    Equal,
    Above,
}

/// Relative order of shape `i` with respect to shape `j` (i < j) within one
/// overlap component.
#[derive(Debug, Clone)]
pub struct StackingRelation {
    pub i: usize,
    pub j: usize,
    pub component: usize,
    /// Preference from the pairwise rules; Equal when no rule discriminates.
    pub preference: Order,
    /// Which rule produced the preference (1..=3), 0 for Equal.
    pub rule: u8,
    /// Final value after cycle resolution; never Equal.
    pub resolved: Order,
    pub flipped: bool,
}

#[derive(Debug, Clone)]
pub struct OverlapComponent {
    pub id: usize,
    pub faces: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct StackingResult {
    pub relations: Vec<StackingRelation>,
    /// Components of faces with both i and j, keyed by (i, j), i < j.
    pub pairwise_components: BTreeMap<(usize, usize), Vec<OverlapComponent>>,
    /// Components of faces with i and at least one other shape, keyed by i.
    pub single_components: BTreeMap<usize, Vec<OverlapComponent>>,
    /// Per bounded face: D(f) sorted bottom to top.
    pub face_orders: BTreeMap<usize, Vec<usize>>,
    pub total_flips: usize,
}

fn connected_components(face_ids: &[usize], arr: &Arrangement) -> Vec<Vec<usize>> {
    let set: BTreeSet<usize> = face_ids.iter().copied().collect();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in face_ids {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            for &n in &arr.faces[f].adjacent {
                if set.contains(&n) && seen.insert(n) {
                    comp.push(n);
                    stack.push(n);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// C_{i,j} and C_i per the component definitions.
pub fn compute_components(
    arr: &Arrangement,
) -> (
    BTreeMap<(usize, usize), Vec<OverlapComponent>>,
    BTreeMap<usize, Vec<OverlapComponent>>,
) {
    let n = arr.shapes.len();
    let mut pairwise = BTreeMap::new();
    let mut single = BTreeMap::new();
    let mut next_id = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let faces: Vec<usize> = arr
                .faces
                .iter()
                .filter(|f| f.containing_shapes.contains(&i) && f.containing_shapes.contains(&j))
                .map(|f| f.id)
                .collect();
            if faces.is_empty() {
                continue;
            }
            let comps: Vec<OverlapComponent> = connected_components(&faces, arr)
                .into_iter()
                .map(|faces| {
                    let c = OverlapComponent { id: next_id, faces };
                    next_id += 1;
                    c
                })
                .collect();
            pairwise.insert((i, j), comps);
        }
    }
    for i in 0..n {
        let faces: Vec<usize> = arr
            .faces
            .iter()
            .filter(|f| f.containing_shapes.contains(&i) && f.containing_shapes.len() >= 2)
            .map(|f| f.id)
            .collect();
        if faces.is_empty() {
            continue;
        }
        let comps: Vec<OverlapComponent> = connected_components(&faces, arr)
            .into_iter()
            .map(|faces| {
                let c = OverlapComponent { id: next_id, faces };
                next_id += 1;
                c
            })
            .collect();
        single.insert(i, comps);
    }
    (pairwise, single)
}

fn point_in_component(p: Point, comp: &OverlapComponent, arr: &Arrangement) -> bool {
    comp.faces.iter().any(|&f| {
        let face = &arr.faces[f];
        let outer = &face.loops[0];
        outer.contains(p) && !face.loops[1..].iter().any(|h| h.contains(p))
    })
}

/// Boundary length of shape `k` on the faces of `comp`, split into
/// (segment length, arc length).
fn covered_boundary_lengths(
    k: usize,
    comp: &OverlapComponent,
    arr: &Arrangement,
) -> (f64, f64) {
    let (mut seg, mut arc) = (0.0, 0.0);
    for &f in &comp.faces {
        for piece in &arr.faces[f].boundary {
            if piece.shape != k {
                continue;
            }
            match piece.edge {
                Edge::Segment(_) => seg += piece.edge.length(),
                Edge::Arc(_) => arc += piece.edge.length(),
            }
        }
    }
    (seg, arc)
}

/// Nearest boundary edge type of shape `k` to point `p`: true if segment.
fn nearest_boundary_is_segment(k: usize, p: Point, arr: &Arrangement) -> bool {
    let mut best = f64::INFINITY;
    let mut is_seg = true;
    for e in arr.shapes[k].edges() {
        let d = e.dist_to_point(p);
        if d < best {
            best = d;
            is_seg = matches!(e, Edge::Segment(_));
        }
    }
    is_seg
}

/// The three Fig.-11 preference rules, in priority order; returns the
/// preferred order of `i` relative to `j` and the rule number that decided.
pub fn pairwise_preference(
    i: usize,
    j: usize,
    comp: &OverlapComponent,
    shape_points: &[Vec<Point>],
    arr: &Arrangement,
) -> (Order, u8) {
    let pts_i_inside: Vec<Point> = shape_points[i]
        .iter()
        .copied()
        .filter(|&p| point_in_component(p, comp, arr))
        .collect();
    let pts_j_inside: Vec<Point> = shape_points[j]
        .iter()
        .copied()
        .filter(|&p| point_in_component(p, comp, arr))
        .collect();
    // i on top needs cut-outs iff points of the lower pattern j lie in the
    // component, and vice versa.
    let i_top_cuts = !pts_j_inside.is_empty();
    let j_top_cuts = !pts_i_inside.is_empty();
    match (i_top_cuts, j_top_cuts) {
        (false, true) => return (Order::Above, 1),
        (true, false) => return (Order::Below, 1),
        (true, true) => {
            // Rule 2: prefer cut-outs that modify segments of the top shape
            // rather than arcs.
            let arcs_if_i_top = pts_j_inside
                .iter()
                .filter(|&&p| !nearest_boundary_is_segment(i, p, arr))
                .count();
            let arcs_if_j_top = pts_i_inside
                .iter()
                .filter(|&&p| !nearest_boundary_is_segment(j, p, arr))
                .count();
            if arcs_if_i_top < arcs_if_j_top {
                return (Order::Above, 2);
            }
            if arcs_if_j_top < arcs_if_i_top {
                return (Order::Below, 2);
            }
        }
        (false, false) => {}
    }
    // Rule 3: prefer covering segment boundary of the lower shape over
    // covering arc boundary.
    let (_, arc_i) = covered_boundary_lengths(i, comp, arr);
    let (_, arc_j) = covered_boundary_lengths(j, comp, arr);
    let tol = 1e-9 * (arc_i + arc_j).max(1.0);
    if arc_j < arc_i - tol {
        // i on top covers j's boundary, which has strictly less arc.
        (Order::Above, 3)
    } else if arc_i < arc_j - tol {
        (Order::Below, 3)
    } else {
        (Order::Equal, 0)
    }
}

/// Hyperedges: maximal R(f) relation sets over all faces.
pub fn build_hypergraph(face_relations: &[BTreeSet<usize>]) -> Vec<BTreeSet<usize>> {
    let mut sets: Vec<BTreeSet<usize>> = Vec::new();
    for r in face_relations {
        if r.is_empty() || sets.contains(r) {
            continue;
        }
        sets.push(r.clone());
    }
    let maximal: Vec<BTreeSet<usize>> = sets
        .iter()
        .filter(|r| !sets.iter().any(|s| *r != s && r.is_subset(s)))
        .cloned()
        .collect();
    maximal
}

/// Kahn topological sort with smallest-index tie-breaking; returns bottom to
/// top order, or None if cyclic.
fn topo_order(verts: &BTreeSet<usize>, above: &[(usize, usize)]) -> Option<Vec<usize>> {
    // Edge (a, b) means a is above b; we emit bottom-most first.
    let mut below_count: BTreeMap<usize, usize> = verts.iter().map(|&v| (v, 0)).collect();
    for &(a, _b) in above {
        *below_count.get_mut(&a).unwrap() += 1;
    }
    let mut order = Vec::new();
    let mut remaining = above.to_vec();
    let mut left: BTreeSet<usize> = verts.clone();
    while !left.is_empty() {
        let next = left
            .iter()
            .copied()
            .find(|v| below_count[v] == 0)?;
        left.remove(&next);
        order.push(next);
        remaining.retain(|&(a, b)| {
            if b == next {
                *below_count.get_mut(&a).unwrap() -= 1;
                false
            } else {
                true
            }
        });
    }
    Some(order)
}

/// Resolve one hyperedge: find a total order of its shapes consistent with
/// the (possibly flipped) preferences, flipping as few preference edges as
/// possible.
pub fn resolve_hyperedge(
    edge: &BTreeSet<usize>,
    relations: &mut [StackingRelation],
) -> Result<(Vec<usize>, usize)> {
    let verts: BTreeSet<usize> = edge
        .iter()
        .flat_map(|&r| [relations[r].i, relations[r].j])
        .collect();
    // Directed preference edges: (above, below, relation id).
    let pref_edges: Vec<(usize, usize, usize)> = edge
        .iter()
        .filter_map(|&r| match relations[r].preference {
            Order::Above => Some((relations[r].i, relations[r].j, r)),
            Order::Below => Some((relations[r].j, relations[r].i, r)),
            Order::Equal => None,
        })
        .collect();
    let m = pref_edges.len();

    let try_flips = |flips: &[usize],
                     relations: &mut [StackingRelation]|
     -> Option<Vec<usize>> {
        let above: Vec<(usize, usize)> = pref_edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b, _))| if flips.contains(&k) { (b, a) } else { (a, b) })
            .collect();
        let order = topo_order(&verts, &above)?;
        // Positions bottom to top.
        let pos: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(p, &v)| (v, p)).collect();
        for &r in edge {
            let rel = &mut relations[r];
            if rel.resolved != Order::Equal {
                continue; // already fixed by an earlier hyperedge
            }
            rel.resolved = if pos[&rel.i] > pos[&rel.j] {
                Order::Above
            } else {
                Order::Below
            };
            rel.flipped = rel.preference != Order::Equal && rel.resolved != rel.preference;
        }
        Some(order)
    };

    // Acyclic preference graphs resolve directly regardless of size.
    if let Some(order) = try_flips(&[], relations) {
        return Ok((order, 0));
    }
    // Cycle removal brute-forces flip subsets; cap the search space.
    if verts.len() > 12 {
        return Err(Error::StackingTooEntangled(verts.len()));
    }

    // Try flipping subsets of increasing size; within a size, prefer
    // flipping weaker rules (3 before 2 before 1), then lexicographic.
    let weakness = |k: usize| {
        let r = &relations[pref_edges[k].2];
        (std::cmp::Reverse(r.rule), r.i, r.j, r.component)
    };
    let mut by_weakness: Vec<usize> = (0..m).collect();
    by_weakness.sort_by_key(|&k| weakness(k));
    for size in 1..=m {
        // Lexicographic combinations over the weakness-sorted edge list.
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let flips: Vec<usize> = combo.iter().map(|&c| by_weakness[c]).collect();
            if let Some(order) = try_flips(&flips, relations) {
                return Ok((order, size));
            }
            // Advance to the next combination.
            let mut k = size;
            while k > 0 {
                k -= 1;
                if combo[k] < m - (size - k) {
                    combo[k] += 1;
                    for l in (k + 1)..size {
                        combo[l] = combo[l - 1] + 1;
                    }
                    break;
                }
                if k == 0 {
                    combo.clear();
                }
            }
            if combo.is_empty() {
                break;
            }
        }
    }
    Err(Error::Geometry("hyperedge unresolvable".into()))
}

/// Full stacking pipeline over an arrangement of dilated shapes.
/// `shape_points` holds the data points of the pattern behind each shape.
pub fn compute_stacking(arr: &Arrangement, shape_points: &[Vec<Point>]) -> Result<StackingResult> {
    let (pairwise, single) = compute_components(arr);
    let mut relations: Vec<StackingRelation> = Vec::new();
    let mut relation_of_face: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); arr.faces.len()];
    for (&(i, j), comps) in &pairwise {
        for comp in comps {
            let (preference, rule) = pairwise_preference(i, j, comp, shape_points, arr);
            let rid = relations.len();
            relations.push(StackingRelation {
                i,
                j,
                component: comp.id,
                preference,
                rule,
                resolved: Order::Equal,
                flipped: false,
            });
            for &f in &comp.faces {
                relation_of_face[f].insert(rid);
            }
        }
    }

    let hyperedges = build_hypergraph(&relation_of_face);
    let mut total_flips = 0usize;
    let mut hyper_orders: Vec<Vec<usize>> = Vec::with_capacity(hyperedges.len());
    for e in &hyperedges {
        let (order, flips) = resolve_hyperedge(e, &mut relations)?;
        hyper_orders.push(order);
        total_flips += flips;
    }
    // Relations not referenced by any face (cannot happen) or left Equal in
    // empty hypergraphs: default by index.
    for rel in relations.iter_mut() {
        if rel.resolved == Order::Equal {
            rel.resolved = Order::Below;
        }
    }

    // Per-face total order, bottom to top: each face inherits the total
    // order of a covering hyperedge restricted to D(f).
    let mut face_orders: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for f in &arr.faces {
        let d: BTreeSet<usize> = f.containing_shapes.iter().copied().collect();
        if d.len() <= 1 {
            face_orders.insert(f.id, d.into_iter().collect());
            continue;
        }
        let rset = &relation_of_face[f.id];
        let cover = hyperedges
            .iter()
            .position(|e| rset.is_subset(e))
            .ok_or_else(|| Error::Geometry("face without covering hyperedge".into()))?;
        let order: Vec<usize> = hyper_orders[cover]
            .iter()
            .copied()
            .filter(|v| d.contains(v))
            .collect();
        face_orders.insert(f.id, order);
    }

    Ok(StackingResult {
        relations,
        pairwise_components: pairwise,
        single_components: single,
        face_orders,
        total_flips,
    })
}
