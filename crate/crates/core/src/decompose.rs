//! Sweep-line decomposition into monotone cells.
//!
//! The region is rotated into a sweep frame where flight lines are horizontal.
//! Vertices are classified by comparing each vertex with its two ring
//! neighbours; a vertex with both neighbours below it starts a new interval of
//! the horizontal cross-section (a split when the vertex is reflex), one with
//! both neighbours above ends one (a merge when reflex). Cuts are placed along
//! the horizontal lines through split and merge vertices.
//!
//! Cells are assembled from slab trapezoids: the region between two
//! consecutive vertex levels is a set of trapezoids, and trapezoids are glued
//! across every level that carries no event.

use thiserror::Error;

use crate::geom::{BoundingBox, Point2D, Ring, Rotate, RotationFrame, Segment, Tolerance};
use crate::region::RegionOfInterest;

/// Relative shear applied to y for event classification only.
pub const EPS_SHEAR_REL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompositionError {
    #[error("edge ending at ({x}, {y}) lies on a sweep line even after perturbation")]
    HorizontalEdgeDegeneracy { x: f64, y: f64 },
    #[error("slab at y={y} has an odd number of boundary crossings")]
    OddCrossings { y: f64 },
    #[error("could not assemble cell boundary: {0}")]
    CellBoundary(String),
}

/// Orientation of the sweep: flight lines run at `sweep_angle` degrees
/// (counter-clockwise from +x) in the world frame and are horizontal in the
/// frame reached through `rotation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepFrame {
    sweep_angle: f64,
    rotation: RotationFrame,
}

impl SweepFrame {
    /// Any finite angle; it is reduced modulo 180 degrees.
    pub fn from_sweep_angle(deg: f64) -> Self {
        let mut a = deg.rem_euclid(180.0);
        if a >= 180.0 {
            a -= 180.0;
        }
        // Represent the line direction in (-90, 90] so that the frame's +y axis
        // maps to a world normal with non-negative y component.
        let phi = if a <= 90.0 { a } else { a - 180.0 };
        SweepFrame {
            sweep_angle: a,
            rotation: RotationFrame::new(-phi.to_radians(), Point2D::default()),
        }
    }

    /// Degrees in `[0, 180)`.
    pub fn sweep_angle(&self) -> f64 {
        self.sweep_angle
    }

    /// World to frame.
    pub fn rotation(&self) -> RotationFrame {
        self.rotation
    }

    pub fn to_frame<G: Rotate>(&self, g: &G) -> G {
        g.rotated(&self.rotation)
    }

    pub fn to_world<G: Rotate>(&self, g: &G) -> G {
        g.rotated(&self.rotation.inverse())
    }
}

/// Flight lines fly perpendicular to the wind.
pub fn sweep_angle_from_wind(wind_direction_deg: f64) -> SweepFrame {
    SweepFrame::from_sweep_angle(wind_direction_deg + 90.0)
}

/// Region rotated into the sweep frame.
pub fn region_to_frame(roi: &RegionOfInterest, frame: &SweepFrame) -> RegionOfInterest {
    RegionOfInterest::from_parts(
        frame.to_frame(roi.outer()),
        roi.holes().iter().map(|h| frame.to_frame(h)).collect(),
        roi.nesting_depth(),
    )
}

/// Region rotated from the sweep frame back to the world.
pub fn region_to_world(roi: &RegionOfInterest, frame: &SweepFrame) -> RegionOfInterest {
    RegionOfInterest::from_parts(
        frame.to_world(roi.outer()),
        roi.holes().iter().map(|h| frame.to_world(h)).collect(),
        roi.nesting_depth(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Split,
    Merge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventPoint {
    /// Frame y of the cut line.
    pub y: f64,
    pub kind: EventKind,
    /// Frame coordinates.
    pub location: Point2D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    /// Local top where the cross-section gains an interval.
    Start,
    /// Local bottom where an interval disappears.
    End,
    Split,
    Merge,
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalVertex {
    pub kind: VertexKind,
    pub location: Point2D,
    /// 0 for the outer ring, `k + 1` for hole `k`.
    pub ring: usize,
    pub index: usize,
}

impl CriticalVertex {
    /// Change in the horizontal intersection count when the sweep passes
    /// downward through this vertex.
    pub fn count_change(&self) -> i32 {
        match self.kind {
            VertexKind::Start | VertexKind::Split => 2,
            VertexKind::End | VertexKind::Merge => -2,
            VertexKind::Regular => 0,
        }
    }
}

struct Shear {
    x0: f64,
    k: f64,
}

impl Shear {
    fn new(bb: &BoundingBox) -> Self {
        let w = bb.width();
        let k = if w > 0.0 {
            EPS_SHEAR_REL * bb.height() / w
        } else {
            0.0
        };
        Shear { x0: bb.min.x, k }
    }

    fn y(&self, p: Point2D) -> f64 {
        p.y + self.k * (p.x - self.x0)
    }

    fn point(&self, p: Point2D) -> Point2D {
        Point2D {
            x: p.x,
            y: self.y(p),
        }
    }

    /// Sweep order: higher sheared y first, ties by ascending x.
    fn above(&self, a: Point2D, b: Point2D) -> bool {
        let (ya, yb) = (self.y(a), self.y(b));
        ya > yb || (ya == yb && a.x < b.x)
    }
}

/// Classifies every vertex of a frame-aligned region. Returned in sweep order
/// (decreasing y, ties by ascending x); regular vertices are omitted.
pub fn classify_vertices(roi: &RegionOfInterest) -> Result<Vec<CriticalVertex>, DecompositionError> {
    let shear = Shear::new(&roi.bbox());
    let mut out = Vec::new();
    for (ri, ring) in roi.rings().enumerate() {
        let v = ring.vertices();
        let n = v.len();
        for i in 0..n {
            let prev = v[(i + n - 1) % n];
            let cur = v[i];
            let next = v[(i + 1) % n];
            if shear.y(cur) == shear.y(next) && cur.y != next.y {
                return Err(DecompositionError::HorizontalEdgeDegeneracy { x: cur.x, y: cur.y });
            }
            let prev_below = shear.above(cur, prev);
            let next_below = shear.above(cur, next);
            let (sp, sc, sn) = (shear.point(prev), shear.point(cur), shear.point(next));
            let turn = (sc - sp).cross(sn - sc);
            let kind = match (prev_below, next_below) {
                (true, true) if turn > 0.0 => VertexKind::Start,
                (true, true) => VertexKind::Split,
                (false, false) if turn > 0.0 => VertexKind::End,
                (false, false) => VertexKind::Merge,
                _ => VertexKind::Regular,
            };
            if kind != VertexKind::Regular {
                out.push(CriticalVertex {
                    kind,
                    location: cur,
                    ring: ri,
                    index: i,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        if shear.above(a.location, b.location) {
            std::cmp::Ordering::Less
        } else if shear.above(b.location, a.location) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    Ok(out)
}

/// Split and merge events of `roi` (world coordinates) in the sweep frame,
/// ordered from the top of the frame down.
pub fn find_events(
    roi: &RegionOfInterest,
    frame: &SweepFrame,
) -> Result<Vec<EventPoint>, DecompositionError> {
    find_events_in_frame(&region_to_frame(roi, frame))
}

/// [`find_events`] for a region already expressed in frame coordinates.
pub fn find_events_in_frame(roi: &RegionOfInterest) -> Result<Vec<EventPoint>, DecompositionError> {
    Ok(classify_vertices(roi)?
        .into_iter()
        .filter_map(|c| {
            let kind = match c.kind {
                VertexKind::Split => EventKind::Split,
                VertexKind::Merge => EventKind::Merge,
                _ => return None,
            };
            Some(EventPoint {
                y: c.location.y,
                kind,
                location: c.location,
            })
        })
        .collect())
}

/// Horizontal slab piece bounded by two non-horizontal edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trapezoid {
    pub y_bot: f64,
    pub y_top: f64,
    pub xl_bot: f64,
    pub xr_bot: f64,
    pub xl_top: f64,
    pub xr_top: f64,
}

impl Trapezoid {
    pub fn area(&self) -> f64 {
        0.5 * ((self.xr_bot - self.xl_bot) + (self.xr_top - self.xl_top)) * (self.y_top - self.y_bot)
    }
}

/// Sweep-monotone piece of the region, in frame coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub boundary: Ring,
    /// Horizontal cuts shared with neighbouring cells.
    pub partition_edges: Vec<Segment>,
}

impl Cell {
    pub fn new(boundary: Ring, partition_edges: Vec<Segment>) -> Self {
        Cell {
            boundary,
            partition_edges,
        }
    }

    pub fn area(&self) -> f64 {
        self.boundary.area()
    }
}

/// Cuts the region (world coordinates) along every event line.
pub fn partition_cells(
    roi: &RegionOfInterest,
    events: &[EventPoint],
    frame: &SweepFrame,
) -> Result<Vec<Cell>, DecompositionError> {
    partition_cells_in_frame(&region_to_frame(roi, frame), events)
}

/// [`partition_cells`] for a region already expressed in frame coordinates.
pub fn partition_cells_in_frame(
    roi: &RegionOfInterest,
    events: &[EventPoint],
) -> Result<Vec<Cell>, DecompositionError> {
    let eps = roi.tolerance().point;
    let edges: Vec<(Point2D, Point2D)> = roi.rings().flat_map(|r| r.edges()).collect();

    let mut levels: Vec<f64> = roi
        .rings()
        .flat_map(|r| r.vertices().iter().map(|p| p.y))
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|b, a| (*b - *a).abs() <= eps);

    let is_event_level: Vec<bool> = levels
        .iter()
        .map(|&y| events.iter().any(|e| (e.y - y).abs() <= eps))
        .collect();

    // Trapezoids per slab.
    let mut slabs: Vec<Vec<Trapezoid>> = Vec::with_capacity(levels.len().saturating_sub(1));
    for k in 0..levels.len().saturating_sub(1) {
        let (y0, y1) = (levels[k], levels[k + 1]);
        let ym = 0.5 * (y0 + y1);
        let mut crossing: Vec<(f64, f64, f64)> = edges
            .iter()
            .filter(|(a, b)| (a.y > ym) != (b.y > ym))
            .map(|&(a, b)| (x_at(a, b, ym), x_at(a, b, y0), x_at(a, b, y1)))
            .collect();
        if !crossing.len().is_multiple_of(2) {
            return Err(DecompositionError::OddCrossings { y: ym });
        }
        crossing.sort_by(|a, b| a.0.total_cmp(&b.0));
        slabs.push(
            crossing
                .chunks(2)
                .map(|pair| Trapezoid {
                    y_bot: y0,
                    y_top: y1,
                    xl_bot: pair[0].1,
                    xr_bot: pair[1].1,
                    xl_top: pair[0].2,
                    xr_top: pair[1].2,
                })
                .collect(),
        );
    }

    // Flattened trapezoid ids.
    let mut offsets = Vec::with_capacity(slabs.len());
    let mut total = 0;
    for s in &slabs {
        offsets.push(total);
        total += s.len();
    }
    let mut uf = UnionFind::new(total);
    // (lower id, upper id, overlap segment) across levels that are not glued.
    let mut cuts: Vec<(usize, usize, Segment)> = Vec::new();

    for k in 1..slabs.len() {
        let below = &slabs[k - 1];
        let above = &slabs[k];
        let y = levels[k];
        let mut pairs = Vec::new();
        for (i, a) in below.iter().enumerate() {
            for (j, b) in above.iter().enumerate() {
                let lo = a.xl_top.max(b.xl_bot);
                let hi = a.xr_top.min(b.xr_bot);
                if hi - lo > eps {
                    pairs.push((i, j, lo, hi));
                }
            }
        }
        for &(i, j, lo, hi) in &pairs {
            let one_to_one = pairs.iter().filter(|p| p.0 == i).count() == 1
                && pairs.iter().filter(|p| p.1 == j).count() == 1;
            let (ia, ib) = (offsets[k - 1] + i, offsets[k] + j);
            if one_to_one && !is_event_level[k] {
                uf.union(ia, ib);
            } else {
                let seg = Segment {
                    a: Point2D { x: lo, y },
                    b: Point2D { x: hi, y },
                };
                cuts.push((ia, ib, seg));
            }
        }
    }

    // Group trapezoids into cells.
    let mut roots: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<Trapezoid>> = Vec::new();
    let mut cell_of = vec![0usize; total];
    for (k, slab) in slabs.iter().enumerate() {
        for (i, t) in slab.iter().enumerate() {
            let id = offsets[k] + i;
            let r = uf.find(id);
            let c = match roots.iter().position(|&x| x == r) {
                Some(c) => c,
                None => {
                    roots.push(r);
                    members.push(Vec::new());
                    roots.len() - 1
                }
            };
            cell_of[id] = c;
            members[c].push(*t);
        }
    }

    let mut partition: Vec<Vec<Segment>> = vec![Vec::new(); members.len()];
    for (ia, ib, seg) in &cuts {
        partition[cell_of[*ia]].push(*seg);
        partition[cell_of[*ib]].push(*seg);
    }

    let mut cells = Vec::with_capacity(members.len());
    for (traps, parts) in members.iter().zip(partition) {
        let pins: Vec<Point2D> = parts.iter().flat_map(|s| [s.a, s.b]).collect();
        let boundary = stack_ring(traps, &pins, eps)?;
        cells.push(Cell::new(boundary, parts));
    }

    // Top-down, then left to right.
    cells.sort_by(|a, b| {
        let (ta, tb) = (top_left(&a.boundary), top_left(&b.boundary));
        tb.y.total_cmp(&ta.y).then(ta.x.total_cmp(&tb.x))
    });
    Ok(cells)
}

fn top_left(r: &Ring) -> Point2D {
    *r.vertices()
        .iter()
        .max_by(|a, b| a.y.total_cmp(&b.y).then(b.x.total_cmp(&a.x)))
        .expect("ring has vertices")
}

fn x_at(a: Point2D, b: Point2D, y: f64) -> f64 {
    if y == a.y {
        return a.x;
    }
    if y == b.y {
        return b.x;
    }
    a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x)
}

/// Boundary of a vertical stack of trapezoids (one per slab, bottom to top).
/// Points in `pins` that fall on horizontal boundary pieces are kept as
/// vertices; other collinear vertices are dropped.
pub(crate) fn stack_ring(
    traps: &[Trapezoid],
    pins: &[Point2D],
    eps: f64,
) -> Result<Ring, DecompositionError> {
    let mut raw: Vec<Point2D> = Vec::with_capacity(4 * traps.len());
    for t in traps {
        raw.push(Point2D { x: t.xr_bot, y: t.y_bot });
        raw.push(Point2D { x: t.xr_top, y: t.y_top });
    }
    for t in traps.iter().rev() {
        raw.push(Point2D { x: t.xl_top, y: t.y_top });
        raw.push(Point2D { x: t.xl_bot, y: t.y_bot });
    }

    // Insert pins on horizontal edges.
    let n = raw.len();
    let mut with_pins: Vec<Point2D> = Vec::with_capacity(n + pins.len());
    for i in 0..n {
        let a = raw[i];
        let b = raw[(i + 1) % n];
        with_pins.push(a);
        if (a.y - b.y).abs() <= eps {
            let (lo, hi) = (a.x.min(b.x), a.x.max(b.x));
            let mut on: Vec<Point2D> = pins
                .iter()
                .filter(|p| (p.y - a.y).abs() <= eps && p.x > lo + eps && p.x < hi - eps)
                .map(|p| Point2D { x: p.x, y: a.y })
                .collect();
            on.sort_by(|p, q| p.x.total_cmp(&q.x));
            if b.x < a.x {
                on.reverse();
            }
            with_pins.extend(on);
        }
    }

    let is_pin = |p: &Point2D| pins.iter().any(|q| q.distance(*p) <= eps);
    let mut pts = with_pins;
    loop {
        let n = pts.len();
        if n < 3 {
            return Err(DecompositionError::CellBoundary("fewer than 3 vertices".into()));
        }
        let mut changed = false;
        for i in 0..n {
            let prev = pts[(i + n - 1) % n];
            let cur = pts[i];
            let next = pts[(i + 1) % n];
            if cur.distance(next) <= eps {
                // Keep whichever of the two is pinned.
                let drop = if is_pin(&cur) { (i + 1) % n } else { i };
                pts.remove(drop);
                changed = true;
                break;
            }
            let base = next.distance(prev);
            let collinear = base > eps
                && crate::geom::orient(prev, next, cur).abs() / base <= eps
                && (cur - prev).dot(next - cur) >= 0.0;
            if collinear && !is_pin(&cur) {
                pts.remove(i);
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }
    Ring::new(pts).map_err(|e| DecompositionError::CellBoundary(e.to_string()))
}

/// Exact horizontal monotonicity: between every pair of consecutive distinct
/// vertex levels the horizontal line meets the boundary in exactly two points.
pub fn is_monotone(ring: &Ring) -> bool {
    let eps = ring.tolerance().point;
    let mut ys: Vec<f64> = ring.vertices().iter().map(|p| p.y).collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup_by(|b, a| (*b - *a).abs() <= eps);
    ys.windows(2)
        .all(|w| ring.horizontal_crossings(0.5 * (w[0] + w[1])).len() == 2)
}

/// Stacks the given disjoint monotone rings into one trapezoid per slab if
/// their union is itself monotone and connected; `None` otherwise.
pub(crate) fn monotone_union(rings: &[&Ring], eps: f64) -> Option<Vec<Trapezoid>> {
    let mut levels: Vec<f64> = rings
        .iter()
        .flat_map(|r| r.vertices().iter().map(|p| p.y))
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|b, a| (*b - *a).abs() <= eps);
    let mut traps: Vec<Trapezoid> = Vec::with_capacity(levels.len());
    for w in levels.windows(2) {
        let (y0, y1) = (w[0], w[1]);
        let ym = 0.5 * (y0 + y1);
        let mut found: Option<Trapezoid> = None;
        for r in rings {
            let mut hits: Vec<(f64, Point2D, Point2D)> = r
                .edges()
                .filter(|(a, b)| (a.y > ym) != (b.y > ym))
                .map(|(a, b)| (x_at(a, b, ym), a, b))
                .collect();
            match hits.len() {
                0 => continue,
                2 => {}
                _ => return None,
            }
            if found.is_some() {
                return None;
            }
            hits.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (l, r) = (hits[0], hits[1]);
            found = Some(Trapezoid {
                y_bot: y0,
                y_top: y1,
                xl_bot: x_at(l.1, l.2, y0),
                xr_bot: x_at(r.1, r.2, y0),
                xl_top: x_at(l.1, l.2, y1),
                xr_top: x_at(r.1, r.2, y1),
            });
        }
        let t = found?;
        if let Some(prev) = traps.last() {
            let lo = prev.xl_top.max(t.xl_bot);
            let hi = prev.xr_top.min(t.xr_bot);
            if hi - lo <= eps {
                return None;
            }
        }
        traps.push(t);
    }
    if traps.is_empty() {
        None
    } else {
        Some(traps)
    }
}

pub(crate) fn tolerance_of(rings: &[&Ring]) -> Tolerance {
    let bb = rings
        .iter()
        .map(|r| r.bbox())
        .reduce(|a, b| a.union(&b))
        .expect("at least one ring");
    Tolerance::for_bbox(&bb)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so that grouping is order independent.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
