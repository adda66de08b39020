//! Greedy incremental discrete-event simulation merging patterns into banks
//! and islands, producing a filtration of partitions indexed by time.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{boolean, convex_hull, point_in_convex_hull, BoolOp, Point, EPS_GEOM};
use crate::patterns::{BankThresholds, CategoricalPoint, Pattern, PatternKind};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionConfig {
    /// Dilation radius, world units.
    pub r_d: f64,
    pub enable_intersection_delay: bool,
    pub bank_thresholds: BankThresholds,
}

impl PartitionConfig {
    pub fn new(r_d: f64) -> Result<PartitionConfig> {
        if !(r_d > 0.0) || !r_d.is_finite() {
            return Err(Error::InvalidInput("dilation radius must be positive".into()));
        }
        Ok(PartitionConfig {
            r_d,
            enable_intersection_delay: true,
            bank_thresholds: BankThresholds::default(),
        })
    }
}

/// A candidate merge in the event queue.
#[derive(Debug, Clone)]
pub struct MergeEvent {
    pub time: f64,
    pub source1: usize,
    pub source2: usize,
    pub target: Pattern,
    pub base_cover: f64,
    pub delay_regularity: f64,
    pub delay_intersection: f64,
    pub seq: u64,
}

impl PartialEq for MergeEvent {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}
impl Eq for MergeEvent {}
impl PartialOrd for MergeEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for MergeEvent {
    // Min-heap on (time, seq): earlier times first, FIFO among ties.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .partial_cmp(&self.time)
            .unwrap_or(Ordering::Equal)
            .then(other.seq.cmp(&self.seq))
    }
}

/// An executed merge, as recorded in the filtration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExecutedMerge {
    /// Event time (cover radius plus delays).
    pub time: f64,
    /// Monotone execution time: event time clamped to the previous
    /// execution, so queries by time are well defined even when a delayed
    /// merge spawns an event in the past.
    pub executed_at: f64,
    pub source_ids: [Vec<usize>; 2],
    pub target: Pattern,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Filtration {
    pub version: u32,
    pub config: PartitionConfig,
    pub points: Vec<CategoricalPoint>,
    pub merges: Vec<ExecutedMerge>,
}

impl Filtration {
    /// The partition at time `t`: all merges with execution time ≤ t applied
    /// in order.
    pub fn partition_at(&self, t: f64) -> Vec<Pattern> {
        let mut patterns: Vec<Pattern> =
            self.points.iter().map(|&p| Pattern::singleton(p)).collect();
        for m in &self.merges {
            if m.executed_at > t {
                break;
            }
            let target_ids = m.target.ids();
            patterns.retain(|p| !p.points.iter().all(|q| target_ids.contains(&q.id)));
            patterns.push(m.target.clone());
        }
        patterns.sort_by_key(|p| p.points.iter().map(|q| q.id).min().unwrap_or(usize::MAX));
        patterns
    }

    pub fn final_partition(&self) -> Vec<Pattern> {
        self.partition_at(f64::INFINITY)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Filtration> {
        Ok(serde_json::from_str(s)?)
    }
}

/// δ_r = c(P*) − max(c(P1), c(P2)), clamped at zero; zero when both sources
/// are single points.
pub fn regularity_delay(c1: f64, c2: f64, c_star: f64) -> f64 {
    (c_star - c1.max(c2)).max(0.0)
}

/// δ_i = sqrt(a/π) with a = area((D* \ (D1 ∪ D2)) ∩ D_U), all regions
/// dilated by `r_d` and D_U the union of the dilated data points.
pub fn intersection_delay(
    target: &Pattern,
    p1: &Pattern,
    p2: &Pattern,
    all_points: &[CategoricalPoint],
    r_d: f64,
) -> Result<f64> {
    // Only points whose dilation disk can reach the dilated target matter.
    let member_ids = target.ids();
    let nearby: Vec<Point> = all_points
        .iter()
        .filter(|p| !member_ids.contains(&p.id))
        .filter(|p| target.dist_to_point(p.pos) < 2.0 * r_d)
        .map(|p| p.pos)
        .collect();
    if nearby.is_empty() {
        return Ok(0.0);
    }
    let d_star = target.dilated(r_d)?;
    let d1 = p1.dilated(r_d)?;
    let d2 = p2.dilated(r_d)?;
    let sources = boolean(&d1, &d2, BoolOp::Union)?;
    let added = boolean(&d_star, &sources, BoolOp::Difference)?;
    if added.is_empty() {
        return Ok(0.0);
    }
    let mut d_u = crate::geom::dilate_point(nearby[0], r_d);
    for &p in &nearby[1..] {
        d_u = boolean(&d_u, &crate::geom::dilate_point(p, r_d), BoolOp::Union)?;
    }
    let a = boolean(&added, &d_u, BoolOp::Intersection)?.area();
    Ok((a / std::f64::consts::PI).sqrt())
}

/// True iff no data point outside the target lies within r_d/2 of the
/// target's region.
pub fn proximity_admissible(
    target: &Pattern,
    all_points: &[CategoricalPoint],
    r_d: f64,
) -> bool {
    let member_ids = target.ids();
    all_points
        .iter()
        .filter(|p| !member_ids.contains(&p.id))
        .all(|p| target.dist_to_point(p.pos) > r_d / 2.0)
}

/// Positive-area overlap between two undilated pattern regions; transversal
/// polyline crossings also count. Pure boundary tangency does not.
pub fn patterns_overlap(a: &Pattern, b: &Pattern) -> Result<bool> {
    let tol = -10.0 * EPS_GEOM; // strict interior
    let strictly_inside = |q: Point, hull: &[Point]| -> bool {
        hull.len() >= 3 && point_in_convex_hull(q, hull, tol)
    };
    let hull_of = |p: &Pattern| -> Result<Option<Vec<Point>>> {
        if p.kind == PatternKind::Island {
            let h = convex_hull(&p.positions())?;
            if h.len() >= 3 {
                return Ok(Some(h));
            }
        }
        Ok(None)
    };
    let ha = hull_of(a)?;
    let hb = hull_of(b)?;
    match (&ha, &hb) {
        (Some(h1), Some(h2)) => {
            let s1 = crate::geom::ArcShape::polygon(h1);
            let s2 = crate::geom::ArcShape::polygon(h2);
            let inter = boolean(&s1, &s2, BoolOp::Intersection)?;
            let scale = s1.bbox().union(&s2.bbox()).diagonal();
            Ok(inter.area() > (1e-6 * scale).powi(2))
        }
        (Some(h), None) | (None, Some(h)) => {
            let other = if ha.is_some() { b } else { a };
            // Any vertex or sampled segment point strictly inside the hull.
            let pts = other.positions();
            if pts.iter().any(|&q| strictly_inside(q, h)) {
                return Ok(true);
            }
            for w in pts.windows(2) {
                for k in 1..8 {
                    let q = w[0].lerp(w[1], k as f64 / 8.0);
                    if strictly_inside(q, h) {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        (None, None) => {
            let pa = a.positions();
            let pb = b.positions();
            if pa.len() >= 2 && pb.len() >= 2 {
                // Transversal polyline crossing.
                for w in pa.windows(2) {
                    for v in pb.windows(2) {
                        if segments_cross(w[0], w[1], v[0], v[1]) {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            } else if pa.len() == 1 && pb.len() == 1 {
                Ok(false)
            } else {
                let (single, line) = if pa.len() == 1 { (pa[0], pb) } else { (pb[0], pa) };
                Ok(line
                    .windows(2)
                    .any(|w| crate::geom::dist_point_segment(single, w[0], w[1]) < EPS_GEOM))
            }
        }
    }
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    if denom.abs() < EPS_GEOM * r.norm() * s.norm() {
        return false;
    }
    let t = (c - a).cross(s) / denom;
    let u = (c - a).cross(r) / denom;
    let eps = 1e-9;
    t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps
}

/// Build the candidate merge targets for two patterns: a single island when
/// either source is an island, otherwise the valid end-to-end bank
/// concatenations plus an island candidate.
fn candidate_targets(p1: &Pattern, p2: &Pattern, cfg: &PartitionConfig) -> Vec<Pattern> {
    let mut out: Vec<Pattern> = Vec::new();
    let island = {
        let mut pts = p1.points.clone();
        pts.extend(p2.points.iter().cloned());
        Pattern::island(pts)
    };
    if p1.kind == PatternKind::Island || p2.kind == PatternKind::Island {
        return vec![island];
    }
    let orients = |p: &Pattern| -> Vec<Vec<CategoricalPoint>> {
        let fwd = p.points.clone();
        if fwd.len() == 1 {
            vec![fwd]
        } else {
            let rev: Vec<_> = fwd.iter().rev().cloned().collect();
            vec![fwd, rev]
        }
    };
    for o1 in orients(p1) {
        for o2 in orients(&p2.clone()) {
            let mut pts = o1.clone();
            pts.extend(o2.iter().cloned());
            let poly: Vec<Point> = pts.iter().map(|p| p.pos).collect();
            if !crate::patterns::is_valid_bank(&poly, &cfg.bank_thresholds) {
                continue;
            }
            // Deduplicate against reversals already collected.
            let ids: Vec<usize> = pts.iter().map(|p| p.id).collect();
            let dup = out.iter().any(|c| {
                let e: Vec<usize> = c.ids();
                e == ids || e.iter().rev().copied().collect::<Vec<_>>() == ids
            });
            if !dup {
                out.push(Pattern::bank(pts));
            }
        }
    }
    // Island candidate for bank/singleton pairs; a two-point island is the
    // same geometry as the two-point bank, so skip it then.
    if island.points.len() > 2 {
        out.push(island);
    } else if out.is_empty() {
        out.push(Pattern::bank(island.points));
    }
    out
}

struct SimState {
    patterns: Vec<Option<Pattern>>,
    covers: Vec<f64>,
    heap: BinaryHeap<MergeEvent>,
    seq: u64,
}

/// Run the merge simulation over `points` and return the filtration.
pub fn run_simulation(
    points: &[CategoricalPoint],
    cfg: &PartitionConfig,
) -> Result<Filtration> {
    validate_points(points)?;
    let mut state = SimState {
        patterns: points
            .iter()
            .map(|&p| Some(Pattern::singleton(p)))
            .collect(),
        covers: vec![0.0; points.len()],
        heap: BinaryHeap::new(),
        seq: 0,
    };
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].category == points[j].category {
                push_pair_events(&mut state, i, j, points, cfg)?;
            }
        }
    }

    let mut merges: Vec<ExecutedMerge> = Vec::new();
    let mut last_exec = 0.0f64;
    while let Some(ev) = state.heap.pop() {
        let (s1, s2) = (ev.source1, ev.source2);
        if state.patterns[s1].is_none() || state.patterns[s2].is_none() {
            continue;
        }
        // Skip if the target overlaps any current pattern other than the
        // sources.
        let mut blocked = false;
        for (k, slot) in state.patterns.iter().enumerate() {
            if k == s1 || k == s2 {
                continue;
            }
            if let Some(q) = slot {
                if patterns_overlap(&ev.target, q)? {
                    blocked = true;
                    break;
                }
            }
        }
        if blocked {
            continue;
        }
        let src1 = state.patterns[s1].take().unwrap();
        let src2 = state.patterns[s2].take().unwrap();
        let new_id = state.patterns.len();
        state.patterns.push(Some(ev.target.clone()));
        state.covers.push(ev.base_cover);
        last_exec = last_exec.max(ev.time);
        merges.push(ExecutedMerge {
            time: ev.time,
            executed_at: last_exec,
            source_ids: [src1.ids(), src2.ids()],
            target: ev.target.clone(),
        });
        for k in 0..new_id {
            if state.patterns[k]
                .as_ref()
                .map_or(false, |q| q.category == ev.target.category)
            {
                push_pair_events(&mut state, new_id, k, points, cfg)?;
            }
        }
    }

    Ok(Filtration {
        version: 1,
        config: cfg.clone(),
        points: points.to_vec(),
        merges,
    })
}

fn push_pair_events(
    state: &mut SimState,
    i: usize,
    j: usize,
    points: &[CategoricalPoint],
    cfg: &PartitionConfig,
) -> Result<()> {
    let p1 = state.patterns[i].clone().unwrap();
    let p2 = state.patterns[j].clone().unwrap();
    let (c1, c2) = (state.covers[i], state.covers[j]);
    let both_singletons =
        p1.kind == PatternKind::Singleton && p2.kind == PatternKind::Singleton;
    for target in candidate_targets(&p1, &p2, cfg) {
        if !proximity_admissible(&target, points, cfg.r_d) {
            continue;
        }
        let base_cover = target.cover_radius()?;
        let delay_regularity = if both_singletons {
            0.0
        } else {
            regularity_delay(c1, c2, base_cover)
        };
        let delay_intersection = if cfg.enable_intersection_delay {
            intersection_delay(&target, &p1, &p2, points, cfg.r_d)?
        } else {
            0.0
        };
        state.seq += 1;
        state.heap.push(MergeEvent {
            time: base_cover + delay_regularity + delay_intersection,
            source1: i,
            source2: j,
            target,
            base_cover,
            delay_regularity,
            delay_intersection,
            seq: state.seq,
        });
    }
    Ok(())
}

fn validate_points(points: &[CategoricalPoint]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    for (i, p) in points.iter().enumerate() {
        if !p.pos.x.is_finite() || !p.pos.y.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinates for point {}",
                p.id
            )));
        }
        for q in &points[..i] {
            if q.id == p.id {
                return Err(Error::InvalidInput(format!("duplicate point id {}", p.id)));
            }
            if q.pos.dist(p.pos) < EPS_GEOM && q.category == p.category {
                return Err(Error::DuplicatePoint(p.pos.x, p.pos.y, p.category));
            }
        }
    }
    Ok(())
}
