//! End-to-end planning: regions in, world-frame coverage plans out.

use thiserror::Error;

use crate::decompose::{
    find_events_in_frame, partition_cells_in_frame, region_to_frame, sweep_angle_from_wind,
    DecompositionError, SweepFrame,
};
use crate::merge::{build_adjacency, merge_components, MergeError};
use crate::offset::{offset_region, OffsetError};
use crate::pathgen::{generate_zigzag, link_paths, to_world, CoveragePlan, PathError, SpacingSpec};
use crate::region::{classify_chains, ChainSet, RegionError, RegionOfInterest};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("region: {0}")]
    Region(#[from] RegionError),
    #[error("offset (region {roi}): {source}")]
    Offset { roi: usize, source: OffsetError },
    #[error("decomposition (region {roi}): {source}")]
    Decomposition {
        roi: usize,
        source: DecompositionError,
    },
    #[error("merge (region {roi}): {source}")]
    Merge { roi: usize, source: MergeError },
    #[error("path generation (region {roi}): {source}")]
    Path { roi: usize, source: PathError },
}

impl PipelineError {
    /// Stage that raised the error.
    pub fn stage(&self) -> &'static str {
        match self {
            PipelineError::Config(_) => "config",
            PipelineError::Region(_) => "region",
            PipelineError::Offset { .. } => "offset",
            PipelineError::Decomposition { .. } => "decompose",
            PipelineError::Merge { .. } => "merge",
            PipelineError::Path { .. } => "pathgen",
        }
    }

    /// True for failures of valid input to yield a plan (collapse, overlap,
    /// unroutable transitions, ...), false for malformed input.
    pub fn is_geometric(&self) -> bool {
        match self {
            PipelineError::Config(_) | PipelineError::Region(_) => false,
            PipelineError::Offset { source, .. } => {
                !matches!(source, OffsetError::InvalidDistance(_))
            }
            PipelineError::Path { source, .. } => !matches!(
                source,
                PathError::InvalidOverlap(_) | PathError::InvalidSpacing(_)
            ),
            PipelineError::Decomposition { .. } | PipelineError::Merge { .. } => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegionInput {
    /// Unlabelled closed chains; outers and holes are told apart by nesting.
    Chains(ChainSet),
    /// Regions with outer and holes already given.
    Explicit(Vec<RegionOfInterest>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    /// Direction of the wind in degrees; flight lines run across it.
    pub wind_direction_deg: f64,
    /// Flight-line direction in degrees, overriding the wind.
    pub sweep_angle_override_deg: Option<f64>,
    pub safe_distance: f64,
    pub spacing: SpacingSpec,
}

impl PlannerConfig {
    pub fn sweep_frame(&self) -> SweepFrame {
        match self.sweep_angle_override_deg {
            Some(a) => SweepFrame::from_sweep_angle(a),
            None => sweep_angle_from_wind(self.wind_direction_deg),
        }
    }

    fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        if !self.wind_direction_deg.is_finite() {
            return bad(format!("wind direction {}", self.wind_direction_deg));
        }
        if let Some(a) = self.sweep_angle_override_deg {
            if !a.is_finite() {
                return bad(format!("sweep angle {a}"));
            }
        }
        if !self.safe_distance.is_finite() || self.safe_distance < 0.0 {
            return bad(format!("safe distance {}", self.safe_distance));
        }
        let s = &self.spacing;
        if !(s.spacing_d.is_finite() && s.spacing_d > 0.0) {
            return bad(format!("line spacing {}", s.spacing_d));
        }
        if !(s.swath_width.is_finite() && s.swath_width > 0.0) {
            return bad(format!("swath width {}", s.swath_width));
        }
        if !(0.0..1.0).contains(&s.sidelap) {
            return bad(format!("sidelap {}", s.sidelap));
        }
        Ok(())
    }
}

/// Resolves the input into regions of interest.
pub fn regions_of(input: &RegionInput) -> Result<Vec<RegionOfInterest>, PipelineError> {
    match input {
        RegionInput::Chains(cs) => Ok(classify_chains(cs)?),
        RegionInput::Explicit(rois) if rois.is_empty() => Err(RegionError::Empty.into()),
        RegionInput::Explicit(rois) => Ok(rois.clone()),
    }
}

/// Plans every region. The safety offset may split a region into pieces;
/// each piece gets its own plan. Pieces whose every cell is thinner than the
/// line spacing get no plan; if nothing at all can be flown the result is an
/// `EmptyPath` error.
pub fn run_pipeline(
    input: &RegionInput,
    config: &PlannerConfig,
) -> Result<Vec<CoveragePlan>, PipelineError> {
    config.validate()?;
    let rois = regions_of(input)?;
    let frame = config.sweep_frame();
    let mut plans = Vec::new();
    for (k, roi) in rois.iter().enumerate() {
        plans.extend(plan_region(roi, k, &frame, config)?);
    }
    if plans.is_empty() {
        return Err(PipelineError::Path {
            roi: 0,
            source: PathError::EmptyPath,
        });
    }
    Ok(plans)
}

fn plan_region(
    roi: &RegionOfInterest,
    k: usize,
    frame: &SweepFrame,
    config: &PlannerConfig,
) -> Result<Vec<CoveragePlan>, PipelineError> {
    let in_frame = region_to_frame(roi, frame);
    let pieces = offset_region(&in_frame, config.safe_distance)
        .map_err(|source| PipelineError::Offset { roi: k, source })?;
    let mut plans = Vec::new();
    for piece in &pieces {
        let decomp = |source| PipelineError::Decomposition { roi: k, source };
        let events = find_events_in_frame(piece).map_err(decomp)?;
        let cells = partition_cells_in_frame(piece, &events).map_err(decomp)?;
        let graph = build_adjacency(&cells);
        let merged = merge_components(&graph, &cells)
            .map_err(|source| PipelineError::Merge { roi: k, source })?;
        let mut paths = Vec::new();
        for region in &merged {
            match generate_zigzag(region, &config.spacing) {
                Ok(p) => paths.push(p),
                Err(PathError::EmptyPath) => {}
                Err(source) => return Err(PipelineError::Path { roi: k, source }),
            }
        }
        if paths.is_empty() {
            continue;
        }
        let mut plan = link_paths(
            paths,
            piece,
            *frame,
            config.spacing,
            config.safe_distance,
        )
        .map_err(|source| PipelineError::Path { roi: k, source })?;
        plan.source = in_frame.clone();
        plans.push(to_world(&plan));
    }
    Ok(plans)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point2D, Ring};
    use crate::pathgen::FirstLineMode;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Ring {
        Ring::new(vec![
            Point2D::new(x0, y0),
            Point2D::new(x1, y0),
            Point2D::new(x1, y1),
            Point2D::new(x0, y1),
        ])
        .unwrap()
    }

    fn config(wind: f64, safe: f64, d: f64) -> PlannerConfig {
        PlannerConfig {
            wind_direction_deg: wind,
            sweep_angle_override_deg: None,
            safe_distance: safe,
            spacing: SpacingSpec::from_distance(d, FirstLineMode::PaperRule).unwrap(),
        }
    }

    #[test]
    fn convex_square_one_path() {
        let roi = RegionOfInterest::new(rect(0., 0., 10., 10.), vec![]).unwrap();
        let plans = run_pipeline(&RegionInput::Explicit(vec![roi]), &config(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(plans.len(), 1);
        assert_eq!(plans[0].paths.len(), 1);
        assert!(plans[0].transitions.is_empty());
    }

    #[test]
    fn square_with_hole_two_paths() {
        let roi = RegionOfInterest::new(rect(0., 0., 10., 10.), vec![rect(4., 4., 6., 6.)]).unwrap();
        let plans = run_pipeline(&RegionInput::Explicit(vec![roi.clone()]), &config(0.0, 0.5, 1.0))
            .unwrap();
        assert_eq!(plans.len(), 1);
        let plan = &plans[0];
        assert_eq!(plan.paths.len(), 2);
        assert_eq!(plan.transitions.len(), 1);
        let hole = &roi.holes()[0];
        for p in plan.paths.iter().flat_map(|p| &p.waypoints) {
            assert!(hole.distance_to_boundary(*p) >= 0.5 - 1e-6);
        }
    }

    #[test]
    fn bad_config_is_not_geometric() {
        let roi = RegionOfInterest::new(rect(0., 0., 1., 1.), vec![]).unwrap();
        let err = run_pipeline(&RegionInput::Explicit(vec![roi]), &config(0.0, -1.0, 1.0)).unwrap_err();
        assert_eq!(err.stage(), "config");
        assert!(!err.is_geometric());
    }

    #[test]
    fn collapse_is_geometric() {
        let roi = RegionOfInterest::new(rect(0., 0., 4., 1.), vec![]).unwrap();
        let err = run_pipeline(&RegionInput::Explicit(vec![roi]), &config(0.0, 0.6, 0.1)).unwrap_err();
        assert_eq!(err.stage(), "offset");
        assert!(err.is_geometric());
    }
}
