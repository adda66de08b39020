//! Curve modification for stacked shapes: grow exclusion/inclusion disks,
//! cut disks or disk hulls out of upper shapes, and smooth the result by
//! morphological opening and closing restricted to the cut neighbourhoods.

use crate::error::{Error, Result};
use crate::geom::{
    boolean, convex_hull_of_disks, dilate_shape, erode_shape, union_many, ArcShape, Arrangement,
    BoolOp, Disk, Edge, Point, EPS_GEOM,
};
use crate::stacking::StackingResult;

#[derive(Debug, Clone, Copy)]
pub struct SmoothingParams {
    pub r_d: f64,
    /// Exclusion-disk cap.
    pub r_c: f64,
    /// Smoothing radius.
    pub r_s: f64,
}

impl SmoothingParams {
    pub fn from_dilation_radius(r_d: f64) -> SmoothingParams {
        SmoothingParams {
            r_d,
            r_c: 5.0 / 8.0 * r_d,
            r_s: r_d / 5.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GrownDisks {
    /// Exclusion disks at foreign points below the shape.
    pub exclusion: Vec<Disk>,
    /// Inclusion disks at the shape's own data points.
    pub inclusion: Vec<Disk>,
}

/// Simultaneous uniform growth of exclusion ("red") disks at `red_centers`
/// and inclusion ("green") disks at `green_centers`. Red–green contact stops
/// both; red caps at r_c, green at r_d; same-colour contacts are ignored.
pub fn grow_disks(
    red_centers: &[Point],
    green_centers: &[Point],
    params: &SmoothingParams,
) -> Result<GrownDisks> {
    for &r in red_centers {
        for &g in green_centers {
            if r.dist(g) < EPS_GEOM {
                return Err(Error::Geometry(
                    "exclusion disk coincides with inclusion disk".into(),
                ));
            }
        }
    }
    let nr = red_centers.len();
    let ng = green_centers.len();
    // stop[k] = None while still growing.
    let mut red_stop: Vec<Option<f64>> = vec![None; nr];
    let mut green_stop: Vec<Option<f64>> = vec![None; ng];
    loop {
        // Next event: smallest radius at which a cap or a red–green contact
        // happens among still-growing disks.
        let mut next: Option<(f64, Vec<(bool, usize, f64)>)> = None;
        let mut propose = |radius: f64, stops: Vec<(bool, usize, f64)>| {
            if let Some((best, _)) = &next {
                if radius >= *best - 1e-15 && radius <= *best + 1e-15 {
                    return; // handled by merging below; keep first
                }
                if radius >= *best {
                    return;
                }
            }
            next = Some((radius, stops));
        };
        for (i, stop) in red_stop.iter().enumerate() {
            if stop.is_none() {
                propose(params.r_c, vec![(true, i, params.r_c)]);
            }
        }
        for (j, stop) in green_stop.iter().enumerate() {
            if stop.is_none() {
                propose(params.r_d, vec![(false, j, params.r_d)]);
            }
        }
        for i in 0..nr {
            for j in 0..ng {
                let d = red_centers[i].dist(green_centers[j]);
                match (red_stop[i], green_stop[j]) {
                    (None, None) => {
                        let r = d / 2.0;
                        propose(r, vec![(true, i, r), (false, j, r)]);
                    }
                    (None, Some(gs)) => {
                        let r = d - gs;
                        if r > gs - 1e-15 {
                            propose(r, vec![(true, i, r)]);
                        }
                    }
                    (Some(rs), None) => {
                        let r = d - rs;
                        if r > rs - 1e-15 {
                            propose(r, vec![(false, j, r)]);
                        }
                    }
                    (Some(_), Some(_)) => {}
                }
            }
        }
        match next {
            None => break,
            Some((_, stops)) => {
                for (is_red, k, r) in stops {
                    let slot = if is_red {
                        &mut red_stop[k]
                    } else {
                        &mut green_stop[k]
                    };
                    if slot.is_none() {
                        *slot = Some(r);
                    }
                }
            }
        }
    }
    Ok(GrownDisks {
        exclusion: red_centers
            .iter()
            .zip(&red_stop)
            .map(|(&c, s)| Disk::new(c, s.unwrap().min(params.r_c)))
            .collect(),
        inclusion: green_centers
            .iter()
            .zip(&green_stop)
            .map(|(&c, s)| Disk::new(c, s.unwrap().min(params.r_d)))
            .collect(),
    })
}

/// How an exclusion disk meets the boundary of the shape it is cut from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DiskSite {
    Interior,
    SegmentsOnly,
    TouchesArc,
}

fn classify_disk(d: &Disk, shape: &ArcShape) -> DiskSite {
    let mut hits_seg = false;
    let mut hits_arc = false;
    for e in shape.edges() {
        if e.dist_to_point(d.center) <= d.radius {
            match e {
                Edge::Segment(_) => hits_seg = true,
                Edge::Arc(_) => hits_arc = true,
            }
        }
    }
    if hits_arc {
        DiskSite::TouchesArc
    } else if hits_seg {
        DiskSite::SegmentsOnly
    } else {
        DiskSite::Interior
    }
}

/// Regions to subtract from `shape` for the grown disks: group cuts (convex
/// hulls of clusters of candidate disks), separate cuts for disks touching
/// arc boundary, and slit rectangles for fully interior disks. Inclusion
/// disks are protected by subtracting them from every cut region.
pub fn group_cut_regions(
    grown: &GrownDisks,
    shape: &ArcShape,
    params: &SmoothingParams,
) -> Result<Vec<ArcShape>> {
    let eps_slit = params.r_s / 4.0;
    let active: Vec<&Disk> = grown.exclusion.iter().filter(|d| d.radius > EPS_GEOM).collect();
    if active.is_empty() {
        return Ok(Vec::new());
    }
    let sites: Vec<DiskSite> = active.iter().map(|d| classify_disk(d, shape)).collect();

    // Cluster candidates (segment-only and interior) by overlap of their
    // r_s-expanded disks.
    let cand: Vec<usize> = (0..active.len())
        .filter(|&k| sites[k] != DiskSite::TouchesArc)
        .collect();
    let mut comp_of: Vec<usize> = (0..cand.len()).collect();
    fn find(comp: &mut Vec<usize>, k: usize) -> usize {
        if comp[k] != k {
            let r = find(comp, comp[k]);
            comp[k] = r;
        }
        comp[k]
    }
    for a in 0..cand.len() {
        for b in (a + 1)..cand.len() {
            let (da, db) = (active[cand[a]], active[cand[b]]);
            if da.center.dist(db.center) < da.radius + db.radius + 2.0 * params.r_s {
                let (ra, rb) = (find(&mut comp_of, a), find(&mut comp_of, b));
                if ra != rb {
                    comp_of[ra] = rb;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for a in 0..cand.len() {
        let root = find(&mut comp_of, a);
        groups.entry(root).or_default().push(cand[a]);
    }

    let protect = |region: ArcShape| -> Result<ArcShape> {
        let mut out = region;
        for y in &grown.inclusion {
            if y.radius <= EPS_GEOM || out.is_empty() {
                continue;
            }
            let ybb = crate::geom::Bbox {
                min: y.center - Point::new(y.radius, y.radius),
                max: y.center + Point::new(y.radius, y.radius),
            };
            if !out.bbox().intersects(&ybb) {
                continue;
            }
            out = boolean(&out, &ArcShape::disk(*y), BoolOp::Difference)?;
        }
        Ok(out)
    };

    let mut regions: Vec<ArcShape> = Vec::new();
    for members in groups.values() {
        let disks: Vec<Disk> = members.iter().map(|&k| *active[k]).collect();
        let mut region = convex_hull_of_disks(&disks)?;
        // Slit rectangles tether fully interior disks to the boundary so the
        // cut pierces the shape.
        for &k in members {
            if sites[k] != DiskSite::Interior {
                continue;
            }
            let d = active[k];
            let q = nearest_boundary_point(shape, d.center);
            let dir = (q - d.center).normalized();
            let end = q + dir * params.r_s;
            let slit = crate::geom::thin_rect(d.center, end, eps_slit);
            region = boolean(&region, &slit, BoolOp::Union)?;
        }
        let region = protect(region)?;
        if !region.is_empty() {
            regions.push(region);
        }
    }
    // Arc-touching disks are cut out separately, never grouped.
    for k in 0..active.len() {
        if sites[k] == DiskSite::TouchesArc {
            let region = protect(ArcShape::disk(*active[k]))?;
            if !region.is_empty() {
                regions.push(region);
            }
        }
    }
    Ok(regions)
}

fn nearest_boundary_point(shape: &ArcShape, p: Point) -> Point {
    let mut best = (f64::INFINITY, p);
    for e in shape.edges() {
        // Sample finely; exact enough for the slit construction.
        for k in 0..=32 {
            let q = e.point_at(k as f64 / 32.0);
            let d = q.dist(p);
            if d < best.0 {
                best = (d, q);
            }
        }
    }
    best.1
}

/// Subtract the cut regions from `shape` and smooth (open then close with
/// r_s), restricting all changes to the neighbourhood of the cuts so the
/// rest of the boundary is untouched.
pub fn subtract_and_smooth(
    shape: &ArcShape,
    cut_regions: &[ArcShape],
    params: &SmoothingParams,
) -> Result<ArcShape> {
    if cut_regions.is_empty() {
        return Ok(shape.clone());
    }
    let mut cut = shape.clone();
    for c in cut_regions {
        cut = boolean(&cut, c, BoolOp::Difference)?;
    }
    // Neighbourhood of the cuts: everything the smoothing may touch.
    let all_cuts = union_many(cut_regions)?;
    let hood = dilate_shape(&all_cuts, 2.0 * params.r_s)?;

    let eroded = erode_shape(&cut, params.r_s)?;
    if eroded.is_empty() {
        // Pathologically thin region: keep the unsmoothed cut.
        return Ok(cut);
    }
    let opened = dilate_shape(&eroded, params.r_s)?;
    let closed = erode_shape(&dilate_shape(&opened, params.r_s)?, params.r_s)?;

    // Splice: smoothed geometry inside the neighbourhood, original outside.
    let outside = boolean(&cut, &hood, BoolOp::Difference)?;
    let inside = boolean(&closed, &hood, BoolOp::Intersection)?;
    boolean(&outside, &inside, BoolOp::Union)
}

/// Apply grow → cut → smooth for every shape against the patterns stacked
/// below it, returning the final shape per pattern.
///
/// `shape_points[i]` are the data points of the pattern behind shape `i`.
pub fn modify_all(
    dilated: &[ArcShape],
    arr: &Arrangement,
    stacking: &StackingResult,
    shape_points: &[Vec<Point>],
    params: &SmoothingParams,
) -> Result<Vec<ArcShape>> {
    let mut out: Vec<ArcShape> = Vec::with_capacity(dilated.len());
    for i in 0..dilated.len() {
        let mut cut_regions: Vec<ArcShape> = Vec::new();
        if let Some(comps) = stacking.single_components.get(&i) {
            for comp in comps {
                // Foreign points of patterns stacked below i inside this
                // component's faces.
                let mut reds: Vec<Point> = Vec::new();
                for &f in &comp.faces {
                    let order = &stacking.face_orders[&f];
                    let pos_i = match order.iter().position(|&s| s == i) {
                        Some(p) => p,
                        None => continue,
                    };
                    for &j in &order[..pos_i] {
                        for &p in &shape_points[j] {
                            let face = &arr.faces[f];
                            let inside = face.loops[0].contains(p)
                                && !face.loops[1..].iter().any(|h| h.contains(p));
                            if inside && !reds.iter().any(|q| q.dist(p) < EPS_GEOM) {
                                reds.push(p);
                            }
                        }
                    }
                }
                if reds.is_empty() {
                    continue;
                }
                let grown = grow_disks(&reds, &shape_points[i], params)?;
                cut_regions.extend(group_cut_regions(&grown, &dilated[i], params)?);
            }
        }
        out.push(subtract_and_smooth(&dilated[i], &cut_regions, params)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::build_arrangement;
    use crate::stacking::compute_stacking;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn isolated_disks_reach_caps() {
        let params = SmoothingParams::from_dilation_radius(1.0);
        let g = grow_disks(&[p(0.0, 0.0)], &[p(100.0, 0.0)], &params).unwrap();
        assert!((g.exclusion[0].radius - params.r_c).abs() < 1e-12);
        assert!((g.inclusion[0].radius - params.r_d).abs() < 1e-12);
    }

    #[test]
    fn red_green_contact_stops_both() {
        let params = SmoothingParams::from_dilation_radius(1.0);
        let d = 0.8; // d/2 = 0.4 < r_c = 0.625
        let g = grow_disks(&[p(0.0, 0.0)], &[p(d, 0.0)], &params).unwrap();
        assert!((g.exclusion[0].radius - d / 2.0).abs() < 1e-12);
        assert!((g.inclusion[0].radius - d / 2.0).abs() < 1e-12);
    }

    #[test]
    fn capped_red_lets_green_keep_growing() {
        let params = SmoothingParams::from_dilation_radius(1.0);
        // d/2 > r_c: red caps at r_c first, green continues until contact
        // at d - r_c (or its own cap).
        let d = 1.5;
        let g = grow_disks(&[p(0.0, 0.0)], &[p(d, 0.0)], &params).unwrap();
        assert!((g.exclusion[0].radius - params.r_c).abs() < 1e-12);
        let expect_green = (d - params.r_c).min(params.r_d);
        assert!((g.inclusion[0].radius - expect_green).abs() < 1e-12);
        // Disks end interior-disjoint.
        assert!(g.exclusion[0].radius + g.inclusion[0].radius <= d + 1e-12);
    }

    #[test]
    fn grouping_by_expanded_overlap() {
        let params = SmoothingParams::from_dilation_radius(1.0);
        let shape = ArcShape::rect(p(-10.0, -10.0), p(10.0, 10.0));
        let grown = GrownDisks {
            exclusion: vec![
                Disk::new(p(-9.9, 0.0), 0.5),
                Disk::new(p(-9.0, 0.0), 0.5),
                Disk::new(p(5.0, 0.0), 0.5),
            ],
            inclusion: vec![],
        };
        let regions = group_cut_regions(&grown, &shape, &params).unwrap();
        // First two cluster (gap 0.9 < 0.5+0.5+2*0.2); third is interior and
        // separate.
        assert_eq!(regions.len(), 2);
        let hull_area = regions.iter().map(|r| r.area()).fold(0.0f64, f64::max);
        // Stadium hull of the pair: area > two disks.
        assert!(hull_area > 2.0 * std::f64::consts::PI * 0.25);
    }

    #[test]
    fn interior_disk_gets_slit() {
        let params = SmoothingParams::from_dilation_radius(1.0);
        let shape = ArcShape::rect(p(0.0, 0.0), p(10.0, 10.0));
        let grown = GrownDisks {
            exclusion: vec![Disk::new(p(5.0, 1.0), 0.5)],
            inclusion: vec![],
        };
        let regions = group_cut_regions(&grown, &shape, &params).unwrap();
        assert_eq!(regions.len(), 1);
        // The slit reaches past the bottom edge.
        assert!(regions[0].bbox().min.y < 0.0);
        let cut = subtract_and_smooth(&shape, &regions, &params).unwrap();
        // The disk interior is exposed.
        assert!(!cut.contains(p(5.0, 1.0)));
        // Far side of the shape untouched.
        assert!(cut.contains(p(5.0, 9.0)));
    }

    #[test]
    fn no_cuts_is_identity() {
        let params = SmoothingParams::from_dilation_radius(1.0);
        let shape = ArcShape::disk(Disk::new(p(0.0, 0.0), 3.0));
        let out = subtract_and_smooth(&shape, &[], &params).unwrap();
        assert_eq!(out.area(), shape.area());
    }

    #[test]
    fn notch_in_straight_edge_smooths_locally() {
        let params = SmoothingParams::from_dilation_radius(1.0);
        let shape = ArcShape::rect(p(0.0, 0.0), p(10.0, 4.0));
        let cut = ArcShape::disk(Disk::new(p(5.0, 0.0), 0.6));
        let out = subtract_and_smooth(&shape, &[cut], &params).unwrap();
        // Notch exposed.
        assert!(!out.contains(p(5.0, 0.3)));
        // Boundary far from the cut is unchanged: corner points remain.
        for q in [p(0.0, 0.0), p(10.0, 0.0), p(10.0, 4.0), p(0.0, 4.0)] {
            assert!(out.on_boundary(q, 1e-9), "corner {q:?} moved");
        }
        // Area close to rectangle minus half disk, up to fillet corrections.
        let half_disk = std::f64::consts::PI * 0.36 / 2.0;
        assert!((out.area() - (40.0 - half_disk)).abs() < 0.1);
    }

    #[test]
    fn overlapping_patterns_expose_foreign_point() {
        // Both patterns have a point inside the overlap, so both orders need
        // cut-outs; the default order puts shape 1 above and it must notch
        // out the foreign point while keeping its own.
        let r_d = 1.0;
        let params = SmoothingParams::from_dilation_radius(r_d);
        let d0 = ArcShape::disk(Disk::new(p(0.0, 0.0), r_d));
        let d1 = ArcShape::disk(Disk::new(p(1.2, 0.0), r_d));
        let pts = vec![
            vec![p(0.0, 0.0), p(0.35, 0.0)],
            vec![p(1.2, 0.0), p(0.95, 0.0)],
        ];
        let arr = build_arrangement(&[d0.clone(), d1.clone()]).unwrap();
        let stack = compute_stacking(&arr, &pts).unwrap();
        assert_eq!(stack.relations[0].resolved, crate::stacking::Order::Below);
        let finals = modify_all(&[d0.clone(), d1.clone()], &arr, &stack, &pts, &params).unwrap();
        // Shape 0 is at the bottom and stays untouched.
        assert!((finals[0].area() - d0.area()).abs() < 1e-9);
        // Shape 1 cut a notch exposing the foreign point.
        assert!(finals[1].area() < d1.area() - 1e-6);
        assert!(!finals[1].contains(p(0.35, 0.0)));
        // Visible clearance: the grown exclusion radius minus smoothing.
        let cleared: f64 = 0.5 * (0.95 - 0.35); // red-green contact radius
        let radius = 0.95 * (cleared.min(params.r_c) - params.r_s);
        for k in 0..16 {
            let a = k as f64 / 16.0 * std::f64::consts::TAU;
            let q = p(0.35, 0.0) + Point::from_angle(a) * radius;
            assert!(!finals[1].contains(q), "covered at {q:?}");
        }
        // Own points remain inside.
        assert!(finals[1].contains(p(1.2, 0.0)));
        assert!(finals[1].contains(p(0.95, 0.0)));
    }
}
