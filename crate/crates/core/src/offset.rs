//! Straight-skeleton offsetting.
//!
//! Every edge of a ring translates along its normal at unit speed; the moving
//! polygon (the wavefront) is tracked as a set of closed chains of kinetic
//! vertices. Two kinds of events change its topology:
//!
//! * **edge collapse**: an edge shrinks to zero length and its two end vertices
//!   merge;
//! * **split**: a reflex vertex runs into a non-adjacent edge and the chain it
//!   belongs to splits in two.
//!
//! The next event is found by scanning all candidates (O(n^2) for splits), the
//! chain is updated, and degenerate leftovers (coincident vertices, zero-width
//! spikes, collinear neighbours) are cleaned up at the event time. An offset at
//! distance `d` is the wavefront snapshot at time `d`, so corners stay mitered.
//!
//! Outward offsets run the same engine on the reversed ring, where the region
//! "to the left" of the chain is the exterior.

use thiserror::Error;

use crate::geom::{
    polygon_signed_area, BoundingBox, Containment, Orientation, Point2D, Ring, Segment, Vec2D,
};
use crate::region::RegionOfInterest;

/// Events closer than this in time are treated as simultaneous.
pub const TIME_TIE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OffsetError {
    #[error("offset distance must be finite and non-negative, got {0}")]
    InvalidDistance(f64),
    #[error("outward propagation needs a finite max time")]
    UnboundedOutward,
    #[error("numerical degeneracy in wavefront propagation: {0}")]
    NumericalDegeneracy(String),
    #[error("outer boundary collapsed under inward offset")]
    RegionCollapsed,
    #[error("offset rings {first} and {second} overlap")]
    OffsetOverlap { first: RingId, second: RingId },
}

/// Identifies a ring of a region in error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingId {
    /// Piece `k` of the inward-offset outer boundary.
    Outer(usize),
    Hole(usize),
}

impl std::fmt::Display for RingId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingId::Outer(k) => write!(f, "outer#{k}"),
            RingId::Hole(k) => write!(f, "hole#{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OffsetDirection {
    Inward,
    Outward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetSpec {
    distance: f64,
    direction: OffsetDirection,
}

impl OffsetSpec {
    pub fn new(distance: f64, direction: OffsetDirection) -> Result<Self, OffsetError> {
        if !distance.is_finite() || distance < 0.0 {
            return Err(OffsetError::InvalidDistance(distance));
        }
        Ok(Self {
            distance,
            direction,
        })
    }

    pub fn inward(distance: f64) -> Result<Self, OffsetError> {
        Self::new(distance, OffsetDirection::Inward)
    }

    pub fn outward(distance: f64) -> Result<Self, OffsetError> {
        Self::new(distance, OffsetDirection::Outward)
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn direction(&self) -> OffsetDirection {
        self.direction
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WavefrontEventKind {
    EdgeCollapse,
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefrontEvent {
    pub time: f64,
    pub kind: WavefrontEventKind,
    pub location: Point2D,
}

/// Trace of one wavefront vertex between two times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkeletonArc {
    pub segment: Segment,
    pub start_time: f64,
    pub end_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StraightSkeleton {
    /// The normalized ring the wavefront started from. For outward
    /// propagation this is the reversed (clockwise) ring.
    pub source: Ring,
    pub direction: OffsetDirection,
    pub arcs: Vec<SkeletonArc>,
    /// Ordered by non-decreasing time.
    pub events: Vec<WavefrontEvent>,
}

/// Runs the wavefront until it vanishes (inward) or until `max_time`.
pub fn build_straight_skeleton(
    ring: &Ring,
    direction: OffsetDirection,
    max_time: f64,
) -> Result<StraightSkeleton, OffsetError> {
    if max_time.is_nan() || max_time < 0.0 {
        return Err(OffsetError::InvalidDistance(max_time));
    }
    if direction == OffsetDirection::Outward && !max_time.is_finite() {
        return Err(OffsetError::UnboundedOutward);
    }
    let source = normalized_source(ring, direction);
    let mut wf = Wavefront::new(&source);
    wf.run(max_time)?;
    if max_time.is_finite() {
        wf.close_surviving_arcs(max_time);
    }
    Ok(StraightSkeleton {
        source,
        direction,
        arcs: wf.arcs,
        events: wf.events,
    })
}

/// Wavefront snapshot at `spec.distance`. Returned rings are counter-clockwise.
/// An empty list means the ring collapsed entirely.
///
/// Outward offsets return the single grown boundary; pockets of exterior that
/// the growing front encloses are filled.
pub fn offset_ring(ring: &Ring, spec: OffsetSpec) -> Result<Vec<Ring>, OffsetError> {
    if spec.distance == 0.0 {
        return Ok(vec![ring.oriented(Orientation::Ccw)]);
    }
    let source = normalized_source(ring, spec.direction);
    let mut wf = Wavefront::new(&source);
    wf.run(spec.distance)?;
    let loops = wf.snapshot(spec.distance);
    let mut out = Vec::new();
    match spec.direction {
        OffsetDirection::Inward => {
            for pts in loops {
                if polygon_signed_area(&pts) > 0.0 {
                    out.push(finish_ring(pts, wf.tol.pos)?);
                }
            }
            out.sort_by(|a, b| least(a).lex_cmp(&least(b)));
        }
        OffsetDirection::Outward => {
            let outer = loops
                .into_iter()
                .filter(|pts| polygon_signed_area(pts) < 0.0)
                .min_by(|a, b| polygon_signed_area(a).total_cmp(&polygon_signed_area(b)))
                .ok_or_else(|| {
                    OffsetError::NumericalDegeneracy("outward front vanished".into())
                })?;
            let mut pts = outer;
            pts.reverse();
            out.push(finish_ring(pts, wf.tol.pos)?);
        }
    }
    Ok(out)
}

/// Shrinks the outer boundary and grows every hole by `safe_distance`.
///
/// The inward offset of the outer ring may split it into several pieces; one
/// region is returned per piece, carrying the grown holes that fall inside it.
/// Any contact between offset rings is an error, as is a grown hole that is not
/// strictly inside a piece of the shrunk outer ring.
pub fn offset_region(
    roi: &RegionOfInterest,
    safe_distance: f64,
) -> Result<Vec<RegionOfInterest>, OffsetError> {
    if !safe_distance.is_finite() || safe_distance < 0.0 {
        return Err(OffsetError::InvalidDistance(safe_distance));
    }
    if safe_distance == 0.0 {
        return Ok(vec![roi.clone()]);
    }
    let pieces = offset_ring(roi.outer(), OffsetSpec::inward(safe_distance)?)?;
    if pieces.is_empty() {
        return Err(OffsetError::RegionCollapsed);
    }
    let mut grown = Vec::with_capacity(roi.holes().len());
    for hole in roi.holes() {
        let mut rings = offset_ring(hole, OffsetSpec::outward(safe_distance)?)?;
        grown.push(rings.remove(0).oriented(Orientation::Cw));
    }
    let eps = roi.tolerance().point;

    for i in 0..grown.len() {
        for j in i + 1..grown.len() {
            let nested = grown[i].classify_point(grown[j].vertex(0), eps) != Containment::Outside
                || grown[j].classify_point(grown[i].vertex(0), eps) != Containment::Outside;
            if nested || grown[i].boundary_meets(&grown[j], eps) {
                return Err(OffsetError::OffsetOverlap {
                    first: RingId::Hole(i),
                    second: RingId::Hole(j),
                });
            }
        }
    }

    let mut holes_of: Vec<Vec<Ring>> = vec![Vec::new(); pieces.len()];
    for (h, hole) in grown.iter().enumerate() {
        let mut home = None;
        for (k, piece) in pieces.iter().enumerate() {
            if piece.boundary_meets(hole, eps) {
                return Err(OffsetError::OffsetOverlap {
                    first: RingId::Outer(k),
                    second: RingId::Hole(h),
                });
            }
            if piece.classify_point(hole.vertex(0), eps) == Containment::Inside {
                home = Some(k);
            }
        }
        match home {
            Some(k) => holes_of[k].push(hole.clone()),
            None => {
                return Err(OffsetError::OffsetOverlap {
                    first: RingId::Outer(0),
                    second: RingId::Hole(h),
                })
            }
        }
    }

    Ok(pieces
        .into_iter()
        .zip(holes_of)
        .map(|(outer, holes)| RegionOfInterest::from_parts(outer, holes, roi.nesting_depth()))
        .collect())
}

fn least(r: &Ring) -> Point2D {
    *r.vertices()
        .iter()
        .min_by(|a, b| a.lex_cmp(b))
        .expect("ring has vertices")
}

fn finish_ring(pts: Vec<Point2D>, eps: f64) -> Result<Ring, OffsetError> {
    let ring = Ring::new(pts.clone())
        .or_else(|_| {
            // Retry after dropping near-collinear leftovers.
            Ring::from_trusted(pts)
                .simplified(eps)
                .ok_or(crate::geom::GeomError::ZeroArea)
                .and_then(|r| Ring::new(r.vertices().to_vec()))
        })
        .map_err(|e| OffsetError::NumericalDegeneracy(format!("offset ring invalid: {e}")))?;
    Ok(ring)
}

/// Collinear-merged copy of `ring`, counter-clockwise for inward propagation
/// and clockwise for outward.
fn normalized_source(ring: &Ring, direction: OffsetDirection) -> Ring {
    let eps = ring.tolerance().point;
    let simple = ring.simplified(eps).unwrap_or_else(|| ring.clone());
    match direction {
        OffsetDirection::Inward => simple.oriented(Orientation::Ccw),
        OffsetDirection::Outward => simple.oriented(Orientation::Cw),
    }
}

#[derive(Debug, Clone, Copy)]
struct Tol {
    /// Position coincidence.
    pos: f64,
    /// Area below which a chain has vanished.
    area: f64,
}

/// Supporting line of a source edge, `normal . x = offset + t` at time `t`.
#[derive(Debug, Clone, Copy)]
struct Line {
    dir: Vec2D,
    normal: Vec2D,
    offset: f64,
}

impl Line {
    fn at(&self, t: f64) -> f64 {
        self.offset + t
    }
}

#[derive(Debug, Clone, Copy)]
struct Vertex {
    anchor: Point2D,
    anchor_time: f64,
    vel: Vec2D,
    birth: Point2D,
    birth_time: f64,
}

impl Vertex {
    fn pos(&self, t: f64) -> Point2D {
        self.anchor + self.vel * (t - self.anchor_time)
    }
}

/// Closed chain: `edges[k]` joins `verts[k]` to `verts[k + 1]`.
#[derive(Debug, Clone)]
struct Chain {
    verts: Vec<Vertex>,
    edges: Vec<usize>,
}

impl Chain {
    fn len(&self) -> usize {
        self.verts.len()
    }

    fn in_edge(&self, k: usize) -> usize {
        let n = self.len();
        self.edges[(k + n - 1) % n]
    }

    fn out_edge(&self, k: usize) -> usize {
        self.edges[k]
    }

    fn positions(&self, t: f64) -> Vec<Point2D> {
        self.verts.iter().map(|v| v.pos(t)).collect()
    }

    /// Rotates so that vertex `k` becomes index 0.
    fn rotated_to(&self, k: usize) -> Chain {
        let mut verts = self.verts.clone();
        let mut edges = self.edges.clone();
        verts.rotate_left(k);
        edges.rotate_left(k);
        Chain { verts, edges }
    }
}

#[derive(Debug, Clone, Copy)]
enum CandidateKind {
    Edge { chain: usize, edge: usize },
    Split { chain: usize, vertex: usize, edge: usize },
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    time: f64,
    location: Point2D,
    kind: CandidateKind,
}

#[derive(Debug, Clone)]
struct Wavefront {
    /// Internal coordinates are relative to this origin.
    origin: Point2D,
    lines: Vec<Line>,
    chains: Vec<Chain>,
    time: f64,
    tol: Tol,
    arcs: Vec<SkeletonArc>,
    events: Vec<WavefrontEvent>,
    /// Snapshots run on a scratch copy that must not log arcs or events.
    recording: bool,
}

impl Wavefront {
    fn new(source: &Ring) -> Self {
        let bb = source.bbox();
        let origin = bb.min;
        let diag = bb.diagonal();
        let pts: Vec<Point2D> = source
            .vertices()
            .iter()
            .map(|p| Point2D {
                x: p.x - origin.x,
                y: p.y - origin.y,
            })
            .collect();
        let n = pts.len();
        let lines: Vec<Line> = (0..n)
            .map(|i| {
                let a = pts[i];
                let b = pts[(i + 1) % n];
                let dir = (b - a).normalized();
                let normal = dir.perp();
                Line {
                    dir,
                    normal,
                    offset: normal.dx * a.x + normal.dy * a.y,
                }
            })
            .collect();
        let pos_tol = 1e-9 * diag;
        let mut wf = Wavefront {
            origin,
            lines,
            chains: Vec::new(),
            time: 0.0,
            tol: Tol {
                pos: pos_tol,
                area: pos_tol * diag,
            },
            arcs: Vec::new(),
            events: Vec::new(),
            recording: true,
        };
        let verts = (0..n)
            .map(|i| wf.make_vertex(pts[i], 0.0, (i + n - 1) % n, i))
            .collect();
        wf.chains.push(Chain {
            verts,
            edges: (0..n).collect(),
        });
        wf
    }

    fn world(&self, p: Point2D) -> Point2D {
        Point2D {
            x: p.x + self.origin.x,
            y: p.y + self.origin.y,
        }
    }

    fn velocity(&self, in_line: usize, out_line: usize) -> Vec2D {
        let n1 = self.lines[in_line].normal;
        let n2 = self.lines[out_line].normal;
        let denom = 1.0 + n1.dot(n2);
        if denom <= 1e-14 {
            // Antiparallel neighbours; removed by cleanup before any use.
            return Vec2D::default();
        }
        (n1 + n2) * (1.0 / denom)
    }

    /// Vertex at the intersection of the two lines at time `t`, falling back to
    /// `hint` when the lines are nearly parallel.
    fn make_vertex(&self, hint: Point2D, t: f64, in_line: usize, out_line: usize) -> Vertex {
        let l1 = self.lines[in_line];
        let l2 = self.lines[out_line];
        let det = l1.normal.cross(l2.normal);
        let mut pos = hint;
        if det.abs() > 1e-6 {
            let c1 = l1.at(t);
            let c2 = l2.at(t);
            let x = (c1 * l2.normal.dy - c2 * l1.normal.dy) / det;
            let y = (l1.normal.dx * c2 - l2.normal.dx * c1) / det;
            let candidate = Point2D { x, y };
            if candidate.distance(hint) <= 1e3 * self.tol.pos.max(f64::EPSILON) || t == 0.0 {
                pos = candidate;
            }
        }
        Vertex {
            anchor: pos,
            anchor_time: t,
            vel: self.velocity(in_line, out_line),
            birth: pos,
            birth_time: t,
        }
    }

    fn record_arc(&mut self, v: &Vertex, t: f64) {
        let end = v.pos(t);
        if self.recording && v.birth.distance(end) > self.tol.pos {
            self.arcs.push(SkeletonArc {
                segment: Segment {
                    a: self.world(v.birth),
                    b: self.world(end),
                },
                start_time: v.birth_time,
                end_time: t,
            });
        }
    }

    fn record_event(&mut self, time: f64, kind: WavefrontEventKind, loc: Point2D) {
        if !self.recording {
            return;
        }
        let location = self.world(loc);
        self.events.push(WavefrontEvent {
            time,
            kind,
            location,
        });
    }

    fn is_reflex(&self, chain: &Chain, k: usize) -> bool {
        let din = self.lines[chain.in_edge(k)].dir;
        let dout = self.lines[chain.out_edge(k)].dir;
        din.cross(dout) < -1e-12
    }

    fn next_event(&self) -> Option<Candidate> {
        let now = self.time;
        let mut cands: Vec<Candidate> = Vec::new();
        for (ci, chain) in self.chains.iter().enumerate() {
            let n = chain.len();
            let pos: Vec<Point2D> = chain.positions(now);
            for k in 0..n {
                let a = &chain.verts[k];
                let b = &chain.verts[(k + 1) % n];
                let dir = self.lines[chain.edges[k]].dir;
                let len = dir.dot(pos[(k + 1) % n] - pos[k]);
                let rate = dir.dot(b.vel - a.vel);
                if rate < -1e-12 {
                    let t = now + (len.max(0.0) / -rate);
                    let location = a.pos(t).midpoint(b.pos(t));
                    cands.push(Candidate {
                        time: t,
                        location,
                        kind: CandidateKind::Edge { chain: ci, edge: k },
                    });
                }
            }
            for i in 0..n {
                if !self.is_reflex(chain, i) {
                    continue;
                }
                let v = &chain.verts[i];
                for j in 0..n {
                    if j == i || (j + 1) % n == i {
                        continue;
                    }
                    let line = self.lines[chain.edges[j]];
                    let rate = line.normal.dot(v.vel) - 1.0;
                    if rate >= -1e-12 {
                        continue;
                    }
                    let s = line.normal.dot(pos[i] - Point2D::default()) - line.at(now);
                    if s < -self.tol.pos {
                        continue;
                    }
                    let t = now + s.max(0.0) / -rate;
                    let q = v.pos(t);
                    let ea = chain.verts[j].pos(t);
                    let eb = chain.verts[(j + 1) % n].pos(t);
                    let elen = line.dir.dot(eb - ea);
                    if elen <= self.tol.pos {
                        continue;
                    }
                    let u = line.dir.dot(q - ea);
                    if u < -self.tol.pos || u > elen + self.tol.pos {
                        continue;
                    }
                    cands.push(Candidate {
                        time: t,
                        location: q,
                        kind: CandidateKind::Split {
                            chain: ci,
                            vertex: i,
                            edge: j,
                        },
                    });
                }
            }
        }
        let tmin = cands.iter().map(|c| c.time).fold(f64::INFINITY, f64::min);
        cands
            .into_iter()
            .filter(|c| c.time <= tmin + TIME_TIE)
            .min_by(|a, b| {
                a.location
                    .lex_cmp(&b.location)
                    .then_with(|| kind_rank(&a.kind).cmp(&kind_rank(&b.kind)))
            })
            .map(|mut c| {
                // Simultaneous events all happen at the earliest time.
                c.time = c.time.max(self.time);
                c
            })
    }

    fn run(&mut self, max_time: f64) -> Result<(), OffsetError> {
        let n0: usize = self.chains.iter().map(Chain::len).sum();
        let budget = 16 * (n0 + 4) * (n0 + 4);
        let mut steps = 0usize;
        while !self.chains.is_empty() {
            let Some(c) = self.next_event() else {
                if max_time.is_finite() {
                    break;
                }
                return Err(OffsetError::NumericalDegeneracy(
                    "bounded wavefront with no pending event".into(),
                ));
            };
            if c.time > max_time + TIME_TIE {
                break;
            }
            steps += 1;
            if steps > budget {
                return Err(OffsetError::NumericalDegeneracy(format!(
                    "event budget of {budget} exhausted"
                )));
            }
            self.time = c.time;
            self.process(c);
        }
        Ok(())
    }

    fn process(&mut self, c: Candidate) {
        let t = c.time;
        let ci = match c.kind {
            CandidateKind::Edge { chain, .. } | CandidateKind::Split { chain, .. } => chain,
        };
        let chain = self.chains.remove(ci);
        if self.has_vanished(&chain, t) {
            self.vanish(chain, t);
            return;
        }
        let produced = match c.kind {
            CandidateKind::Edge { edge, .. } => {
                let merged = self.collapse_edge(chain, edge, t, c.location);
                vec![merged]
            }
            CandidateKind::Split { vertex, edge, .. } => {
                self.split(chain, vertex, edge, t, c.location)
            }
        };
        let mut survivors = Vec::new();
        for ch in produced {
            if let Some(ch) = self.cleanup(ch, t) {
                survivors.push(ch);
            }
        }
        // Keep chain order stable for determinism.
        for (k, ch) in survivors.into_iter().enumerate() {
            self.chains.insert((ci + k).min(self.chains.len()), ch);
        }
    }

    fn has_vanished(&self, chain: &Chain, t: f64) -> bool {
        chain.len() < 3 || polygon_signed_area(&chain.positions(t)).abs() <= self.tol.area
    }

    fn vanish(&mut self, chain: Chain, t: f64) {
        let pos = chain.positions(t);
        for v in &chain.verts {
            self.record_arc(v, t);
        }
        let mut distinct: Vec<Point2D> = Vec::new();
        for p in &pos {
            if !distinct.iter().any(|q| q.distance(*p) <= self.tol.pos * 1e3) {
                distinct.push(*p);
            }
        }
        // Spine pieces between consecutive distinct positions.
        let n = pos.len();
        let mut spines: Vec<(Point2D, Point2D)> = Vec::new();
        for k in 0..n {
            let a = pos[k];
            let b = pos[(k + 1) % n];
            if a.distance(b) <= self.tol.pos * 1e3 {
                continue;
            }
            let dup = spines.iter().any(|(p, q)| {
                (p.distance(a) <= self.tol.pos * 1e3 && q.distance(b) <= self.tol.pos * 1e3)
                    || (p.distance(b) <= self.tol.pos * 1e3 && q.distance(a) <= self.tol.pos * 1e3)
            });
            if !dup {
                spines.push((a, b));
            }
        }
        for (a, b) in spines.into_iter().filter(|_| self.recording) {
            self.arcs.push(SkeletonArc {
                segment: Segment {
                    a: self.world(a),
                    b: self.world(b),
                },
                start_time: t,
                end_time: t,
            });
        }
        distinct.sort_by(|a, b| a.lex_cmp(b));
        for p in distinct {
            self.record_event(t, WavefrontEventKind::EdgeCollapse, p);
        }
    }

    fn collapse_edge(&mut self, chain: Chain, k: usize, t: f64, loc: Point2D) -> Chain {
        let ch = chain.rotated_to(k);
        let a = ch.verts[0];
        let b = ch.verts[1];
        self.record_arc(&a, t);
        self.record_arc(&b, t);
        self.record_event(t, WavefrontEventKind::EdgeCollapse, loc);
        let n = ch.len();
        let in_line = ch.edges[n - 1];
        let out_line = ch.edges[1];
        let v = self.make_vertex(loc, t, in_line, out_line);
        let mut verts = Vec::with_capacity(n - 1);
        verts.push(v);
        verts.extend_from_slice(&ch.verts[2..]);
        let edges = ch.edges[1..].to_vec();
        Chain { verts, edges }
    }

    fn split(&mut self, chain: Chain, i: usize, j: usize, t: f64, loc: Point2D) -> Vec<Chain> {
        let n = chain.len();
        let ch = chain.rotated_to(i);
        let j = (j + n - i) % n;
        debug_assert!(j >= 1 && j <= n - 2);
        let v = ch.verts[0];
        self.record_arc(&v, t);
        self.record_event(t, WavefrontEventKind::Split, loc);

        let e_in = ch.edges[n - 1];
        let e_out = ch.edges[0];
        let e_hit = ch.edges[j];

        let v1 = self.make_vertex(loc, t, e_in, e_hit);
        let mut a_verts = vec![v1];
        a_verts.extend_from_slice(&ch.verts[j + 1..]);
        let a_edges = ch.edges[j..].to_vec();

        let v2 = self.make_vertex(loc, t, e_hit, e_out);
        let mut b_verts = vec![v2];
        b_verts.extend_from_slice(&ch.verts[1..=j]);
        let b_edges = ch.edges[..=j].to_vec();

        vec![
            Chain {
                verts: a_verts,
                edges: a_edges,
            },
            Chain {
                verts: b_verts,
                edges: b_edges,
            },
        ]
    }

    /// Removes coincident vertices, zero-width spikes and collinear neighbours
    /// at time `t`. Returns `None` when the chain vanished.
    fn cleanup(&mut self, mut ch: Chain, t: f64) -> Option<Chain> {
        loop {
            if self.has_vanished(&ch, t) {
                self.vanish(ch, t);
                return None;
            }
            let n = ch.len();
            let pos = ch.positions(t);

            if let Some(k) = (0..n).find(|&k| pos[k].distance(pos[(k + 1) % n]) <= self.tol.pos) {
                let loc = pos[k].midpoint(pos[(k + 1) % n]);
                ch = self.collapse_edge(ch, k, t, loc);
                continue;
            }

            let parallel = (0..n).find(|&k| {
                let n1 = self.lines[ch.in_edge(k)].normal;
                let n2 = self.lines[ch.out_edge(k)].normal;
                n1.cross(n2).abs() <= 1e-10
            });
            if let Some(k) = parallel {
                let e_in = ch.in_edge(k);
                let e_out = ch.out_edge(k);
                let same = self.lines[e_in].normal.dot(self.lines[e_out].normal) > 0.0;
                let removed = ch.verts[k];
                self.record_arc(&removed, t);
                let prev = (k + n - 1) % n;
                let next = (k + 1) % n;
                if same {
                    // Collinear: the edge before `k` absorbs the edge after it.
                    let old = ch.verts[next];
                    let mut v = self.make_vertex(pos[next], t, e_in, ch.out_edge(next));
                    v.birth = old.birth;
                    v.birth_time = old.birth_time;
                    ch.verts[next] = v;
                    ch.verts.remove(k);
                    ch.edges.remove(k);
                } else {
                    // Spike tip: keep the longer side's line for the gap.
                    let d_in = pos[prev].distance(pos[k]);
                    let d_out = pos[next].distance(pos[k]);
                    if d_in >= d_out {
                        let pn = pos[next];
                        let keep_birth = ch.verts[next];
                        ch.verts[next] = self.make_vertex(pn, t, e_in, ch.out_edge(next));
                        self.record_arc(&keep_birth, t);
                        ch.verts.remove(k);
                        ch.edges.remove(k);
                    } else {
                        let pp = pos[prev];
                        let keep_birth = ch.verts[prev];
                        ch.verts[prev] = self.make_vertex(pp, t, ch.in_edge(prev), e_out);
                        self.record_arc(&keep_birth, t);
                        ch.verts.remove(k);
                        ch.edges.remove(prev);
                    }
                }
                continue;
            }
            return Some(ch);
        }
    }

    /// Snapshot of every chain at time `t` after cleanup, in world coordinates.
    fn snapshot(&self, t: f64) -> Vec<Vec<Point2D>> {
        let mut scratch = self.clone();
        scratch.recording = false;
        let chains = std::mem::take(&mut scratch.chains);
        let mut out = Vec::new();
        for ch in chains {
            if let Some(ch) = scratch.cleanup(ch, t) {
                let pts: Vec<Point2D> = ch.positions(t).into_iter().map(|p| self.world(p)).collect();
                out.push(pts);
            }
        }
        out
    }

    fn close_surviving_arcs(&mut self, t: f64) {
        let verts: Vec<Vertex> = self.chains.iter().flat_map(|c| c.verts.clone()).collect();
        for v in verts {
            self.record_arc(&v, t);
        }
    }
}

fn kind_rank(k: &CandidateKind) -> u8 {
    match k {
        CandidateKind::Edge { .. } => 0,
        CandidateKind::Split { .. } => 1,
    }
}

/// Bounding box of a skeleton's arcs (useful for plotting).
pub fn skeleton_bbox(sk: &StraightSkeleton) -> BoundingBox {
    let mut bb = sk.source.bbox();
    for a in &sk.arcs {
        bb.include(a.segment.a);
        bb.include(a.segment.b);
    }
    bb
}
