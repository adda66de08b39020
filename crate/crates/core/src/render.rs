//! SVG output: per-face painting in stacking order, category palette and
//! point glyphs. Arcs are emitted as native path arc commands.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::{boolean, ArcShape, Arrangement, BoolOp, Edge};
use crate::patterns::CategoricalPoint;
use crate::stacking::StackingResult;

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct RenderStyle {
    /// Fill/stroke hex colors per category id.
    pub palette: Vec<(String, String)>,
    /// Point glyph radius as a fraction of r_d.
    pub point_radius_factor: f64,
    pub stroke_width_factor: f64,
    pub background: String,
    /// Canvas padding in multiples of r_d.
    pub padding_factor: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        // Okabe-Ito colorblind-safe palette with darker strokes.
        let palette = [
            ("#e69f00", "#8a5f00"),
            ("#56b4e9", "#2c6c94"),
            ("#009e73", "#005c43"),
            ("#f0e442", "#91890f"),
            ("#0072b2", "#00405e"),
            ("#d55e00", "#7e3700"),
            ("#cc79a7", "#7d4262"),
            ("#999999", "#4d4d4d"),
        ];
        RenderStyle {
            palette: palette
                .iter()
                .map(|&(f, s)| (f.to_string(), s.to_string()))
                .collect(),
            point_radius_factor: 1.0 / 3.0,
            stroke_width_factor: 1.0 / 12.0,
            background: "#ffffff".to_string(),
            padding_factor: 1.5,
        }
    }
}

impl RenderStyle {
    fn colors(&self, category: usize) -> Result<(&str, &str)> {
        self.palette
            .get(category)
            .map(|(f, s)| (f.as_str(), s.as_str()))
            .ok_or(Error::MissingPaletteEntry(category))
    }
}

fn coord(v: f64) -> String {
    // Fixed 1e-6 rounding for deterministic bytes; normalize negative zero.
    let r = (v * 1e6).round() / 1e6;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r}")
}

/// SVG path data for a shape, in a y-up coordinate system (the document
/// applies the flip).
pub fn path_data(shape: &ArcShape) -> String {
    let mut d = String::new();
    for l in &shape.loops {
        if l.edges.is_empty() {
            continue;
        }
        let start = l.edges[0].start();
        let _ = write!(d, "M {} {} ", coord(start.x), coord(start.y));
        for e in &l.edges {
            match e {
                Edge::Segment(s) => {
                    let _ = write!(d, "L {} {} ", coord(s.end.x), coord(s.end.y));
                }
                Edge::Arc(a) => {
                    // SVG cannot express a full circle in one arc command;
                    // split every arc at its midpoint.
                    for (t0, t1) in [(0.0, 0.5), (0.5, 1.0)] {
                        let p1 = e.point_at(t1);
                        let half_sweep = a.sweep * (t1 - t0);
                        let large = if half_sweep.abs() > std::f64::consts::PI {
                            1
                        } else {
                            0
                        };
                        let sweep_flag = if a.sweep >= 0.0 { 1 } else { 0 };
                        let _ = write!(
                            d,
                            "A {} {} 0 {} {} {} {} ",
                            coord(a.radius),
                            coord(a.radius),
                            large,
                            sweep_flag,
                            coord(p1.x),
                            coord(p1.y)
                        );
                    }
                }
            }
        }
        d.push_str("Z ");
    }
    d.trim_end().to_string()
}

/// Render the final drawing. `arr` is the arrangement of the dilated shapes
/// used for stacking, `finals` the post-cutout shapes, `shape_category` the
/// category of each shape.
pub fn render_svg(
    arr: &Arrangement,
    finals: &[ArcShape],
    stacking: &StackingResult,
    shape_category: &[usize],
    points: &[CategoricalPoint],
    style: &RenderStyle,
    r_d: f64,
) -> Result<String> {
    for p in points {
        style.colors(p.category)?;
    }
    for &c in shape_category {
        style.colors(c)?;
    }
    let mut bbox = crate::geom::Bbox::from_points(points.iter().map(|p| p.pos));
    for s in finals {
        if !s.is_empty() {
            bbox = bbox.union(&s.bbox());
        }
    }
    let pad = style.padding_factor * r_d;
    let (x0, y0) = (bbox.min.x - pad, bbox.min.y - pad);
    let (w, h) = (bbox.width() + 2.0 * pad, bbox.height() + 2.0 * pad);
    let stroke_w = style.stroke_width_factor * r_d;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        coord(x0),
        coord(-y0 - h),
        coord(w),
        coord(h)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
        coord(x0),
        coord(-y0 - h),
        coord(w),
        coord(h),
        style.background
    );
    let _ = writeln!(svg, r#"<g transform="scale(1,-1)">"#);

    // Paint each bounded face bottom-to-top with the faces' shapes clipped
    // to their final (post-cutout) geometry.
    for f in &arr.faces {
        let order = stacking
            .face_orders
            .get(&f.id)
            .cloned()
            .unwrap_or_else(|| f.containing_shapes.iter().copied().collect());
        for k in order {
            let clipped = boolean(&f.region(), &finals[k], BoolOp::Intersection)?;
            if clipped.area() <= 0.0 {
                continue;
            }
            let (fill, stroke) = style.colors(shape_category[k])?;
            let _ = writeln!(
                svg,
                r#"<path d="{}" fill="{}" stroke="{}" stroke-width="{}" fill-rule="evenodd"/>"#,
                path_data(&clipped),
                fill,
                stroke,
                coord(stroke_w)
            );
        }
    }

    // Data points on top.
    let glyph_r = style.point_radius_factor * r_d;
    for p in points {
        let (fill, stroke) = style.colors(p.category)?;
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}" stroke="{}" stroke-width="{}"/>"#,
            coord(p.pos.x),
            coord(p.pos.y),
            coord(glyph_r),
            fill,
            stroke,
            coord(stroke_w)
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{build_arrangement, Disk, Point};
    use crate::stacking::compute_stacking;

    fn cp(id: usize, x: f64, y: f64, category: usize) -> CategoricalPoint {
        CategoricalPoint {
            id,
            pos: Point::new(x, y),
            category,
        }
    }

    #[test]
    fn single_singleton_svg() {
        let pts = vec![cp(0, 1.0, 2.0, 0)];
        let shape = ArcShape::disk(Disk::new(Point::new(1.0, 2.0), 1.0));
        let arr = build_arrangement(std::slice::from_ref(&shape)).unwrap();
        let stack = compute_stacking(&arr, &[vec![Point::new(1.0, 2.0)]]).unwrap();
        let svg = render_svg(
            &arr,
            &[shape],
            &stack,
            &[0],
            &pts,
            &RenderStyle::default(),
            1.0,
        )
        .unwrap();
        assert!(svg.contains("<svg"));
        assert!(svg.contains("<circle"));
        assert!(svg.matches("<path").count() >= 1);
    }

    #[test]
    fn deterministic_bytes() {
        let pts = vec![cp(0, 0.0, 0.0, 0), cp(1, 1.4, 0.0, 1)];
        let shapes = vec![
            ArcShape::disk(Disk::new(Point::new(0.0, 0.0), 1.0)),
            ArcShape::disk(Disk::new(Point::new(1.4, 0.0), 1.0)),
        ];
        let arr = build_arrangement(&shapes).unwrap();
        let sp = vec![vec![Point::new(0.0, 0.0)], vec![Point::new(1.4, 0.0)]];
        let stack = compute_stacking(&arr, &sp).unwrap();
        let style = RenderStyle::default();
        let a = render_svg(&arr, &shapes, &stack, &[0, 1], &pts, &style, 1.0).unwrap();
        let b = render_svg(&arr, &shapes, &stack, &[0, 1], &pts, &style, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_palette_entry_errors() {
        let pts = vec![cp(0, 0.0, 0.0, 42)];
        let shape = ArcShape::disk(Disk::new(Point::new(0.0, 0.0), 1.0));
        let arr = build_arrangement(std::slice::from_ref(&shape)).unwrap();
        let stack = compute_stacking(&arr, &[vec![Point::new(0.0, 0.0)]]).unwrap();
        let out = render_svg(
            &arr,
            &[shape],
            &stack,
            &[42],
            &pts,
            &RenderStyle::default(),
            1.0,
        );
        assert!(matches!(out, Err(Error::MissingPaletteEntry(42))));
    }

    #[test]
    fn overlap_painted_by_top_shape() {
        // Shape 1 above shape 0 (rule 1): the lens must be painted last with
        // shape 1's color in the emitted order.
        let shapes = vec![
            ArcShape::disk(Disk::new(Point::new(0.0, 0.0), 1.0)),
            ArcShape::disk(Disk::new(Point::new(1.2, 0.0), 1.0)),
        ];
        let arr = build_arrangement(&shapes).unwrap();
        let sp = vec![vec![Point::new(0.0, 0.0)], vec![Point::new(0.7, 0.0)]];
        let stack = compute_stacking(&arr, &sp).unwrap();
        let pts = vec![cp(0, 0.0, 0.0, 0), cp(1, 0.7, 0.0, 1)];
        let svg = render_svg(
            &arr,
            &shapes,
            &stack,
            &[0, 1],
            &pts,
            &RenderStyle::default(),
            1.0,
        )
        .unwrap();
        // The lens face paints category 0 then category 1; the last path
        // fill before the glyphs belonging to the lens is the upper color.
        let style = RenderStyle::default();
        let c0 = &style.palette[0].0;
        let c1 = &style.palette[1].0;
        assert!(svg.contains(c0.as_str()));
        assert!(svg.contains(c1.as_str()));
    }
}
