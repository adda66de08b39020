//! Archipelago: partitioning of categorical point sets into islands and
//! banks, rendered as smooth stacked enclosing shapes.

pub mod cutouts;
pub mod error;
pub mod geom;
pub mod metrics;
pub mod partition;
pub mod patterns;
pub mod render;
pub mod stacking;

pub use error::{Error, Result};

/// Everything needed to render or measure one partition of a filtration.
pub struct Drawing {
    pub patterns: Vec<patterns::Pattern>,
    pub dilated: Vec<geom::ArcShape>,
    pub arrangement: geom::Arrangement,
    pub stacking: stacking::StackingResult,
    /// Post-cutout shape per pattern.
    pub finals: Vec<geom::ArcShape>,
}

/// Run stacking and cutouts for the partition of `filtration` at time `t`.
pub fn build_drawing(filtration: &partition::Filtration, t: f64) -> Result<Drawing> {
    let r_d = filtration.config.r_d;
    let patterns = filtration.partition_at(t);
    let dilated: Vec<geom::ArcShape> = patterns
        .iter()
        .map(|p| p.dilated(r_d))
        .collect::<Result<_>>()?;
    let arrangement = geom::build_arrangement(&dilated)?;
    let shape_points: Vec<Vec<geom::Point>> =
        patterns.iter().map(|p| p.positions()).collect();
    let stacking = stacking::compute_stacking(&arrangement, &shape_points)?;
    let params = cutouts::SmoothingParams::from_dilation_radius(r_d);
    let finals = cutouts::modify_all(&dilated, &arrangement, &stacking, &shape_points, &params)?;
    Ok(Drawing {
        patterns,
        dilated,
        arrangement,
        stacking,
        finals,
    })
}

impl Drawing {
    pub fn render_svg(
        &self,
        filtration: &partition::Filtration,
        style: &render::RenderStyle,
    ) -> Result<String> {
        let cats: Vec<usize> = self.patterns.iter().map(|p| p.category).collect();
        render::render_svg(
            &self.arrangement,
            &self.finals,
            &self.stacking,
            &cats,
            &filtration.points,
            style,
            filtration.config.r_d,
        )
    }

    pub fn metrics(&self, filtration: &partition::Filtration) -> Result<metrics::MetricsReport> {
        let pos: Vec<geom::Point> = filtration.points.iter().map(|p| p.pos).collect();
        metrics::report(&self.patterns, &self.finals, &pos, filtration.config.r_d)
    }
}
