//! Coverage path planning for UAV surveys over concave regions with exclusion
//! zones.
//!
//! The pipeline runs in stages: [`region`] identifies outer boundaries and
//! holes, [`offset`] applies the standoff distance with straight-skeleton
//! offsets, [`decompose`] cuts the region into sweep-monotone cells at split
//! and merge events, [`merge`] recombines adjacent cells while they stay
//! monotone, and [`pathgen`] lays boustrophedon legs inside each merged region
//! and links them. [`pipeline`] wires the stages together.

pub mod decompose;
pub mod geom;
pub mod merge;
pub mod offset;
pub mod pathgen;
pub mod pipeline;
pub mod region;

pub use decompose::{
    find_events, is_monotone, partition_cells, sweep_angle_from_wind, Cell, DecompositionError,
    EventKind, EventPoint, SweepFrame,
};
pub use geom::{
    cross2, is_convex, ring_contains_point, rotate, signed_area, BoundingBox, Containment,
    GeomError, Orientation, Point2D, Ring, RotationFrame, Segment, Tolerance, Vec2D,
};
pub use merge::{build_adjacency, merge_components, AdjacencyGraph, MergeError, MergedRegion};
pub use offset::{
    build_straight_skeleton, offset_region, offset_ring, OffsetDirection, OffsetError, OffsetSpec,
    StraightSkeleton,
};
pub use pathgen::{
    generate_zigzag, line_family_world, link_paths, spacing_from_overlap, to_world,
    BoustrophedonPath, CoveragePlan, FirstLineMode, PathError, SpacingSpec, Transition, WorldLine,
};
pub use pipeline::{regions_of, run_pipeline, PipelineError, PlannerConfig, RegionInput};
pub use region::{classify_chains, containment_matrix, ChainSet, RegionError, RegionOfInterest};
