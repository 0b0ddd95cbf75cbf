//! Boustrophedon legs inside merged regions, and linking them into a plan.
//!
//! Everything here works in the sweep frame, where flight lines are
//! horizontal; [`to_world`] carries a finished plan back.

use std::collections::BinaryHeap;

use thiserror::Error;

use crate::decompose::SweepFrame;
use crate::geom::{segment_contact, Containment, Point2D, Ring, Rotate, SegmentContact};
use crate::merge::MergedRegion;
use crate::region::RegionOfInterest;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("sidelap must lie in [0, 1), got {0}")]
    InvalidOverlap(f64),
    #[error("swath width and line spacing must be finite and positive, got {0}")]
    InvalidSpacing(f64),
    #[error("no flight line fits inside the region")]
    EmptyPath,
    #[error("flight line at y={y} meets the region boundary {count} times")]
    NonMonotone { y: f64, count: usize },
    #[error("no path through free space from {from} to {to}")]
    UnroutableTransition { from: Point2D, to: Point2D },
    #[error("nothing to link")]
    NoPaths,
}

/// Where the first flight line goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FirstLineMode {
    /// Lines at `y_min + n d` for `n = 1, 2, ...`, strictly below `y_max`.
    #[default]
    PaperRule,
    /// The fewest lines spaced `d` apart that leave at most `d / 2` uncovered
    /// at either end, centred on the region.
    Centered,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingSpec {
    pub swath_width: f64,
    pub sidelap: f64,
    pub spacing_d: f64,
    pub first_line_mode: FirstLineMode,
}

impl SpacingSpec {
    /// Spacing given directly as a distance between lines.
    pub fn from_distance(d: f64, mode: FirstLineMode) -> Result<Self, PathError> {
        if !d.is_finite() || d <= 0.0 {
            return Err(PathError::InvalidSpacing(d));
        }
        Ok(SpacingSpec {
            swath_width: d,
            sidelap: 0.0,
            spacing_d: d,
            first_line_mode: mode,
        })
    }

    pub fn with_mode(mut self, mode: FirstLineMode) -> Self {
        self.first_line_mode = mode;
        self
    }
}

/// Line spacing from the camera footprint and the overlap between adjacent
/// images across track.
pub fn spacing_from_overlap(swath_width: f64, sidelap: f64) -> Result<SpacingSpec, PathError> {
    if !swath_width.is_finite() || swath_width <= 0.0 {
        return Err(PathError::InvalidSpacing(swath_width));
    }
    if !(0.0..1.0).contains(&sidelap) {
        return Err(PathError::InvalidOverlap(sidelap));
    }
    Ok(SpacingSpec {
        swath_width,
        sidelap,
        spacing_d: swath_width * (1.0 - sidelap),
        first_line_mode: FirstLineMode::PaperRule,
    })
}

/// Heights of the flight lines over `[y_min, y_max]`.
pub fn line_levels(y_min: f64, y_max: f64, spacing: &SpacingSpec, eps: f64) -> Vec<f64> {
    let d = spacing.spacing_d;
    let h = y_max - y_min;
    if h <= eps {
        return Vec::new();
    }
    match spacing.first_line_mode {
        FirstLineMode::PaperRule => {
            let mut out = Vec::new();
            let mut n = 1.0;
            loop {
                let y = y_min + n * d;
                if y >= y_max - eps {
                    break;
                }
                out.push(y);
                n += 1.0;
            }
            out
        }
        FirstLineMode::Centered => {
            let k = (h / d).ceil().max(1.0);
            let margin = 0.5 * (h - (k - 1.0) * d);
            (0..k as usize).map(|i| y_min + margin + i as f64 * d).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoustrophedonPath {
    /// Flight lines joined by turns. A turn follows the region boundary, so it
    /// may pass through boundary vertices between two lines.
    pub waypoints: Vec<Point2D>,
    /// `waypoints[i] -> waypoints[i + 1]` is a flight line for every `i` here.
    pub leg_starts: Vec<usize>,
    pub region: MergedRegion,
    /// Number of flight lines.
    pub line_count: usize,
}

impl BoustrophedonPath {
    pub fn first(&self) -> Point2D {
        self.waypoints[0]
    }

    pub fn last(&self) -> Point2D {
        self.waypoints[self.waypoints.len() - 1]
    }

    /// The flight lines in flying order, each as (start, end).
    pub fn legs(&self) -> impl Iterator<Item = (Point2D, Point2D)> + '_ {
        self.leg_starts
            .iter()
            .map(|&i| (self.waypoints[i], self.waypoints[i + 1]))
    }

    pub fn reversed(&self) -> Self {
        let n = self.waypoints.len();
        let mut out = self.clone();
        out.waypoints.reverse();
        out.leg_starts = self.leg_starts.iter().rev().map(|&i| n - 2 - i).collect();
        out
    }
}

/// Closed cross-section of a monotone ring at height `y`.
fn cross_section(ring: &Ring, y: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (a, b) in ring.edges() {
        let (ylo, yhi) = (a.y.min(b.y), a.y.max(b.y));
        if y < ylo || y > yhi {
            continue;
        }
        let xs = if a.y == b.y {
            [a.x, b.x]
        } else if y == a.y {
            [a.x, a.x]
        } else if y == b.y {
            [b.x, b.x]
        } else {
            let x = a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x);
            [x, x]
        };
        for x in xs {
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Left and right boundary chains of a monotone counter-clockwise ring, both
/// listed bottom to top.
fn side_chains(ring: &Ring) -> (Vec<Point2D>, Vec<Point2D>) {
    let v = ring.vertices();
    let n = v.len();
    let pick = |better: &dyn Fn(Point2D, Point2D) -> bool| {
        (0..n).fold(0, |best, i| if better(v[i], v[best]) { i } else { best })
    };
    let bottom_right = pick(&|a, b| a.y < b.y || (a.y == b.y && a.x > b.x));
    let bottom_left = pick(&|a, b| a.y < b.y || (a.y == b.y && a.x < b.x));
    let top_right = pick(&|a, b| a.y > b.y || (a.y == b.y && a.x > b.x));
    let top_left = pick(&|a, b| a.y > b.y || (a.y == b.y && a.x < b.x));
    let walk = |from: usize, to: usize| {
        let mut out = vec![v[from]];
        let mut i = from;
        while i != to {
            i = (i + 1) % n;
            out.push(v[i]);
        }
        out
    };
    let right = walk(bottom_right, top_right);
    let mut left = walk(top_left, bottom_left);
    left.reverse();
    (left, right)
}

/// Position of `q` along `chain`: `k + t` on segment `k`.
fn chain_position(chain: &[Point2D], q: Point2D) -> f64 {
    let mut best = (0.0, f64::INFINITY);
    for (i, w) in chain.windows(2).enumerate() {
        let d = w[1] - w[0];
        let l2 = d.dot(d);
        let t = if l2 == 0.0 {
            0.0
        } else {
            ((q - w[0]).dot(d) / l2).clamp(0.0, 1.0)
        };
        let dist = q.distance(w[0] + d * t);
        if dist < best.1 {
            best = (i as f64 + t, dist);
        }
    }
    best.0
}

/// Chain vertices strictly between the positions of `a` and `b`, skipping
/// any that coincide with either end.
fn along_chain(chain: &[Point2D], a: Point2D, b: Point2D, eps: f64) -> Vec<Point2D> {
    let (sa, sb) = (chain_position(chain, a), chain_position(chain, b));
    (0..chain.len())
        .filter(|&k| sa < k as f64 && (k as f64) < sb)
        .map(|k| chain[k])
        .filter(|q| q.distance(a) > eps && q.distance(b) > eps)
        .collect()
}

/// Zig-zag over a monotone region in frame coordinates. The first line runs
/// left to right, the next right to left, and so on; turns follow the
/// boundary so the whole path stays inside the region.
pub fn generate_zigzag(
    region: &MergedRegion,
    spacing: &SpacingSpec,
) -> Result<BoustrophedonPath, PathError> {
    let ring = &region.boundary;
    let bb = ring.bbox();
    let eps = ring.tolerance().point;
    let vertex_level = |y: f64| ring.vertices().iter().any(|v| v.y == y);
    let mut legs: Vec<(Point2D, Point2D)> = Vec::new();
    for y in line_levels(bb.min.y, bb.max.y, spacing, eps) {
        if !vertex_level(y) {
            let count = ring.horizontal_crossings(y).len();
            if count != 2 {
                return Err(PathError::NonMonotone { y, count });
            }
        }
        let Some((xl, xr)) = cross_section(ring, y) else {
            continue;
        };
        if xr - xl <= eps {
            continue;
        }
        let (l, r) = (Point2D { x: xl, y }, Point2D { x: xr, y });
        legs.push(if legs.len().is_multiple_of(2) { (l, r) } else { (r, l) });
    }
    if legs.is_empty() {
        return Err(PathError::EmptyPath);
    }
    let (left, right) = side_chains(ring);
    let mut waypoints = Vec::with_capacity(2 * legs.len());
    let mut leg_starts = Vec::with_capacity(legs.len());
    for (k, &(s, e)) in legs.iter().enumerate() {
        if k > 0 {
            let prev = waypoints[waypoints.len() - 1];
            let chain = if k % 2 == 1 { &right } else { &left };
            waypoints.extend(along_chain(chain, prev, s, eps));
        }
        leg_starts.push(waypoints.len());
        waypoints.push(s);
        waypoints.push(e);
    }
    Ok(BoustrophedonPath {
        line_count: legs.len(),
        waypoints,
        leg_starts,
        region: region.clone(),
    })
}

/// A world-frame flight line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WorldLine {
    /// `y = slope x + intercept`.
    Sloped { slope: f64, intercept: f64 },
    /// `x = x`, for lines flown due north-south.
    Vertical { x: f64 },
}

/// World image of frame line `y' = n d`.
pub fn line_family_world(spacing: &SpacingSpec, frame: &SweepFrame, n: i64) -> WorldLine {
    let c = n as f64 * spacing.spacing_d;
    let a = frame.sweep_angle();
    if a == 90.0 {
        // Frame +y maps to world -x.
        return WorldLine::Vertical { x: -c };
    }
    let m = a.to_radians().tan();
    WorldLine::Sloped {
        slope: m,
        intercept: c * (m * m + 1.0).sqrt(),
    }
}

/// Connector between consecutive paths; a straight segment unless it had to
/// bend around an obstacle.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub waypoints: Vec<Point2D>,
}

impl Transition {
    pub fn length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    pub fn is_straight(&self) -> bool {
        self.waypoints.len() == 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoordinateSpace {
    Frame,
    World,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveragePlan {
    pub paths: Vec<BoustrophedonPath>,
    /// `transitions[k]` joins the end of `paths[k]` to the start of
    /// `paths[k + 1]`.
    pub transitions: Vec<Transition>,
    pub sweep_frame: SweepFrame,
    pub spacing: SpacingSpec,
    pub safe_distance: f64,
    /// The region the paths were planned in (after the safety offset).
    pub free_space: RegionOfInterest,
    /// The region as given, before offsetting.
    pub source: RegionOfInterest,
    pub space: CoordinateSpace,
}

impl CoveragePlan {
    pub fn waypoint_count(&self) -> usize {
        self.paths.iter().map(|p| p.waypoints.len()).sum()
    }

    /// Paths and transitions interleaved into one flight.
    pub fn flight(&self) -> Vec<Point2D> {
        let mut out: Vec<Point2D> = Vec::new();
        for (k, p) in self.paths.iter().enumerate() {
            if k > 0 {
                let t = &self.transitions[k - 1].waypoints;
                out.extend(&t[1..t.len() - 1]);
            }
            out.extend(&p.waypoints);
        }
        out
    }
}

/// Whether the closed segment `ab` stays inside the closed region.
pub fn segment_in_region(a: Point2D, b: Point2D, roi: &RegionOfInterest) -> bool {
    let eps = roi.tolerance().point;
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 <= eps * eps {
        return roi.contains(a) != Containment::Outside;
    }
    let param = |p: Point2D| ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    let mut ts = vec![0.0, 1.0];
    for ring in roi.rings() {
        for (p, q) in ring.edges() {
            match segment_contact(a, b, p, q, eps) {
                SegmentContact::Disjoint => {}
                SegmentContact::Proper(x) | SegmentContact::Touch(x) => ts.push(param(x)),
                SegmentContact::Overlap(x, y) => {
                    ts.push(param(x));
                    ts.push(param(y));
                }
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.windows(2).all(|w| {
        w[1] - w[0] <= 1e-12 || roi.contains(a + ab * (0.5 * (w[0] + w[1]))) != Containment::Outside
    })
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Min-heap on distance, then on node index.
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Shortest polyline from `from` to `to` inside `roi`, through boundary
/// vertices of the region.
pub fn route(from: Point2D, to: Point2D, roi: &RegionOfInterest) -> Result<Vec<Point2D>, PathError> {
    if segment_in_region(from, to, roi) {
        return Ok(vec![from, to]);
    }
    let mut nodes = vec![from, to];
    nodes.extend(roi.rings().flat_map(|r| r.vertices().iter().copied()));
    let n = nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[0] = 0.0;
    heap.push(Entry(0.0, 0));
    while let Some(Entry(d, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == 1 {
            break;
        }
        for v in 0..n {
            if done[v] || v == u {
                continue;
            }
            let nd = d + nodes[u].distance(nodes[v]);
            if nd < dist[v] && segment_in_region(nodes[u], nodes[v], roi) {
                dist[v] = nd;
                prev[v] = u;
                heap.push(Entry(nd, v));
            }
        }
    }
    if !done[1] {
        return Err(PathError::UnroutableTransition { from, to });
    }
    let mut out = vec![to];
    let mut k = 1;
    while k != 0 {
        k = prev[k];
        out.push(nodes[k]);
    }
    out.reverse();
    Ok(out)
}

/// Orders paths greedily by nearest endpoint and joins them with transitions
/// that stay inside `roi`. Inputs and output are in frame coordinates.
pub fn link_paths(
    paths: Vec<BoustrophedonPath>,
    roi: &RegionOfInterest,
    frame: SweepFrame,
    spacing: SpacingSpec,
    safe_distance: f64,
) -> Result<CoveragePlan, PathError> {
    if paths.is_empty() {
        return Err(PathError::NoPaths);
    }
    let start = (0..paths.len())
        .min_by(|&i, &j| paths[i].first().lex_cmp(&paths[j].first()).then(i.cmp(&j)))
        .expect("non-empty");
    let mut used = vec![false; paths.len()];
    used[start] = true;
    let mut ordered = vec![paths[start].clone()];
    while ordered.len() < paths.len() {
        let here = ordered.last().expect("non-empty").last();
        let mut best: Option<(f64, usize, bool)> = None;
        for (i, p) in paths.iter().enumerate() {
            if used[i] {
                continue;
            }
            for (d, rev) in [(here.distance(p.first()), false), (here.distance(p.last()), true)] {
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, rev));
                }
            }
        }
        let (_, i, rev) = best.expect("an unused path remains");
        used[i] = true;
        ordered.push(if rev { paths[i].reversed() } else { paths[i].clone() });
    }
    let transitions = ordered
        .windows(2)
        .map(|w| route(w[0].last(), w[1].first(), roi).map(|waypoints| Transition { waypoints }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoveragePlan {
        paths: ordered,
        transitions,
        sweep_frame: frame,
        spacing,
        safe_distance,
        free_space: roi.clone(),
        source: roi.clone(),
        space: CoordinateSpace::Frame,
    })
}

fn region_rotated(roi: &RegionOfInterest, r: &crate::geom::RotationFrame) -> RegionOfInterest {
    RegionOfInterest::from_parts(
        roi.outer().rotated(r),
        roi.holes().iter().map(|h| h.rotated(r)).collect(),
        roi.nesting_depth(),
    )
}

/// Carries a frame plan back to world coordinates; a world plan is returned
/// unchanged.
pub fn to_world(plan: &CoveragePlan) -> CoveragePlan {
    if plan.space == CoordinateSpace::World {
        return plan.clone();
    }
    let inv = plan.sweep_frame.rotation().inverse();
    CoveragePlan {
        paths: plan
            .paths
            .iter()
            .map(|p| BoustrophedonPath {
                waypoints: p.waypoints.rotated(&inv),
                leg_starts: p.leg_starts.clone(),
                region: MergedRegion {
                    boundary: p.region.boundary.rotated(&inv),
                    member_cells: p.region.member_cells.clone(),
                },
                line_count: p.line_count,
            })
            .collect(),
        transitions: plan
            .transitions
            .iter()
            .map(|t| Transition {
                waypoints: t.waypoints.rotated(&inv),
            })
            .collect(),
        free_space: region_rotated(&plan.free_space, &inv),
        source: region_rotated(&plan.source, &inv),
        space: CoordinateSpace::World,
        ..plan.clone()
    }
}
