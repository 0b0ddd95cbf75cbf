//! Planar primitives shared by every stage of the planner.
//!
//! Coordinates are `f64` meters in a local planar frame. Coincidence tests use
//! a scale-free tolerance of `1e-9` times the bounding-box diagonal of the
//! geometry being tested (see [`Tolerance`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Relative factor applied to a bounding-box diagonal to obtain the point
/// coincidence tolerance.
pub const EPS_POINT_REL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("non-finite coordinate ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("segment endpoints coincide at ({0}, {1})")]
    DegenerateSegment(f64, f64),
    #[error("ring needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("ring vertices {0} and {1} coincide")]
    CoincidentVertices(usize, usize),
    #[error("ring has zero signed area")]
    ZeroArea,
    #[error("ring edges {0} and {1} intersect")]
    SelfIntersection(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    /// Panics on non-finite input; use [`Point2D::try_new`] for untrusted data.
    pub fn new(x: f64, y: f64) -> Self {
        assert!(x.is_finite() && y.is_finite(), "non-finite point ({x}, {y})");
        Self { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self, GeomError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeomError::NonFinite(x, y))
        }
    }

    pub fn distance(self, other: Point2D) -> f64 {
        (other - self).norm()
    }

    pub fn midpoint(self, other: Point2D) -> Point2D {
        Point2D {
            x: 0.5 * (self.x + other.x),
            y: 0.5 * (self.y + other.y),
        }
    }

    /// Lexicographic (x, then y) comparison.
    pub fn lex_cmp(&self, other: &Point2D) -> std::cmp::Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

impl fmt::Display for Point2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2D {
    pub dx: f64,
    pub dy: f64,
}

impl Vec2D {
    pub fn new(dx: f64, dy: f64) -> Self {
        assert!(dx.is_finite() && dy.is_finite(), "non-finite vector");
        Self { dx, dy }
    }

    pub fn dot(self, other: Vec2D) -> f64 {
        self.dx * other.dx + self.dy * other.dy
    }

    pub fn cross(self, other: Vec2D) -> f64 {
        cross2(self, other)
    }

    pub fn norm(self) -> f64 {
        self.dx.hypot(self.dy)
    }

    /// Unit vector in the same direction; the zero vector stays zero.
    pub fn normalized(self) -> Vec2D {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            Vec2D {
                dx: self.dx / n,
                dy: self.dy / n,
            }
        }
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2D {
        Vec2D {
            dx: -self.dy,
            dy: self.dx,
        }
    }
}

impl Sub for Point2D {
    type Output = Vec2D;
    fn sub(self, rhs: Point2D) -> Vec2D {
        Vec2D {
            dx: self.x - rhs.x,
            dy: self.y - rhs.y,
        }
    }
}

impl Add<Vec2D> for Point2D {
    type Output = Point2D;
    fn add(self, rhs: Vec2D) -> Point2D {
        Point2D {
            x: self.x + rhs.dx,
            y: self.y + rhs.dy,
        }
    }
}

impl Sub<Vec2D> for Point2D {
    type Output = Point2D;
    fn sub(self, rhs: Vec2D) -> Point2D {
        Point2D {
            x: self.x - rhs.dx,
            y: self.y - rhs.dy,
        }
    }
}

impl Add for Vec2D {
    type Output = Vec2D;
    fn add(self, rhs: Vec2D) -> Vec2D {
        Vec2D {
            dx: self.dx + rhs.dx,
            dy: self.dy + rhs.dy,
        }
    }
}

impl Sub for Vec2D {
    type Output = Vec2D;
    fn sub(self, rhs: Vec2D) -> Vec2D {
        Vec2D {
            dx: self.dx - rhs.dx,
            dy: self.dy - rhs.dy,
        }
    }
}

impl Mul<f64> for Vec2D {
    type Output = Vec2D;
    fn mul(self, k: f64) -> Vec2D {
        Vec2D {
            dx: self.dx * k,
            dy: self.dy * k,
        }
    }
}

impl Neg for Vec2D {
    type Output = Vec2D;
    fn neg(self) -> Vec2D {
        Vec2D {
            dx: -self.dx,
            dy: -self.dy,
        }
    }
}

/// `u.dx * w.dy - u.dy * w.dx`. Positive when `w` points to the left of `u`.
pub fn cross2(u: Vec2D, w: Vec2D) -> f64 {
    u.dx * w.dy - u.dy * w.dx
}

/// Sidedness of `p` against the directed line `a -> b`, computed as
/// `(b - a) x (p - a)`.
pub fn orient(a: Point2D, b: Point2D, p: Point2D) -> f64 {
    cross2(b - a, p - a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2D,
    pub b: Point2D,
}

impl Segment {
    pub fn new(a: Point2D, b: Point2D) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment(a.x, a.y));
        }
        Ok(Self { a, b })
    }

    /// Rejects endpoints closer than `eps`.
    pub fn with_tolerance(a: Point2D, b: Point2D, eps: f64) -> Result<Self, GeomError> {
        if a.distance(b) <= eps {
            return Err(GeomError::DegenerateSegment(a.x, a.y));
        }
        Ok(Self { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn direction(&self) -> Vec2D {
        self.b - self.a
    }

    pub fn point_at(&self, t: f64) -> Point2D {
        self.a + self.direction() * t
    }

    pub fn distance_to(&self, p: Point2D) -> f64 {
        point_segment_distance(p, self.a, self.b)
    }

    pub fn reversed(&self) -> Segment {
        Segment {
            a: self.b,
            b: self.a,
        }
    }
}

pub fn point_segment_distance(p: Point2D, a: Point2D, b: Point2D) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentContact {
    Disjoint,
    /// Interiors cross at a single point.
    Proper(Point2D),
    /// They meet at a single point that is an endpoint of at least one of them.
    Touch(Point2D),
    /// Collinear with an overlap of positive length.
    Overlap(Point2D, Point2D),
}

impl SegmentContact {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, SegmentContact::Disjoint)
    }
}

fn side(d: f64, eps: f64) -> i8 {
    if d > eps {
        1
    } else if d < -eps {
        -1
    } else {
        0
    }
}

/// Classifies the contact between segments `p1p2` and `q1q2`. Distances below
/// `eps` count as zero.
pub fn segment_contact(p1: Point2D, p2: Point2D, q1: Point2D, q2: Point2D, eps: f64) -> SegmentContact {
    let lp = p1.distance(p2);
    let lq = q1.distance(q2);
    if lp <= eps || lq <= eps {
        // Degenerate input: treat the short one as a point.
        let (pt, a, b) = if lp <= eps { (p1, q1, q2) } else { (q1, p1, p2) };
        return if point_segment_distance(pt, a, b) <= eps {
            SegmentContact::Touch(pt)
        } else {
            SegmentContact::Disjoint
        };
    }
    let d1 = orient(p1, p2, q1) / lp;
    let d2 = orient(p1, p2, q2) / lp;
    let d3 = orient(q1, q2, p1) / lq;
    let d4 = orient(q1, q2, p2) / lq;
    let (s1, s2, s3, s4) = (side(d1, eps), side(d2, eps), side(d3, eps), side(d4, eps));

    if s1 == 0 && s2 == 0 {
        // Collinear: intersect parameter intervals along p1p2.
        let dir = (p2 - p1) * (1.0 / lp);
        let ta = (q1 - p1).dot(dir);
        let tb = (q2 - p1).dot(dir);
        let lo = ta.min(tb).max(0.0);
        let hi = ta.max(tb).min(lp);
        if hi - lo > eps {
            return SegmentContact::Overlap(p1 + dir * lo, p1 + dir * hi);
        }
        if hi - lo >= -eps {
            let t = 0.5 * (lo + hi);
            return SegmentContact::Touch(p1 + dir * t.clamp(0.0, lp));
        }
        return SegmentContact::Disjoint;
    }

    if s1 * s2 < 0 && s3 * s4 < 0 {
        let t = d3 / (d3 - d4);
        return SegmentContact::Proper(p1 + (p2 - p1) * t);
    }

    let on = |pt: Point2D, a: Point2D, b: Point2D| point_segment_distance(pt, a, b) <= eps;
    if s1 == 0 && on(q1, p1, p2) {
        return SegmentContact::Touch(q1);
    }
    if s2 == 0 && on(q2, p1, p2) {
        return SegmentContact::Touch(q2);
    }
    if s3 == 0 && on(p1, q1, q2) {
        return SegmentContact::Touch(p1);
    }
    if s4 == 0 && on(p2, q1, q2) {
        return SegmentContact::Touch(p2);
    }
    SegmentContact::Disjoint
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Point2D,
    pub max: Point2D,
}

impl BoundingBox {
    pub fn from_points<'a, I: IntoIterator<Item = &'a Point2D>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut bb = BoundingBox {
            min: first,
            max: first,
        };
        for p in it {
            bb.include(*p);
        }
        Some(bb)
    }

    pub fn include(&mut self, p: Point2D) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&self, other: &BoundingBox) -> BoundingBox {
        let mut bb = *self;
        bb.include(other.min);
        bb.include(other.max);
        bb
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }
}

/// Scale-aware tolerances derived from a bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Point coincidence distance (`EPS_POINT`).
    pub point: f64,
}

impl Tolerance {
    pub fn for_bbox(bb: &BoundingBox) -> Self {
        let diag = bb.diagonal();
        // Keep a floor so that degenerate boxes still get a usable epsilon.
        let scale = if diag > 0.0 { diag } else { 1.0 };
        Tolerance {
            point: EPS_POINT_REL * scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Cw,
    Ccw,
}

/// Result of a point-in-ring query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Containment {
    Inside,
    Outside,
    OnBoundary,
}

/// Closed simple polygonal chain. The last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    vertices: Vec<Point2D>,
    orientation: Orientation,
}

impl Ring {
    /// Validates and builds a ring. Vertices must not repeat the first vertex at
    /// the end.
    pub fn new(vertices: Vec<Point2D>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        for p in &vertices {
            Point2D::try_new(p.x, p.y)?;
        }
        let bb = BoundingBox::from_points(&vertices).expect("non-empty");
        let eps = Tolerance::for_bbox(&bb).point;
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i].distance(vertices[j]) <= eps {
                return Err(GeomError::CoincidentVertices(i, j));
            }
        }
        let area = shoelace(&vertices);
        if area.abs() <= eps * bb.diagonal() {
            return Err(GeomError::ZeroArea);
        }
        if let Some((i, j)) = first_self_intersection(&vertices, eps) {
            return Err(GeomError::SelfIntersection(i, j));
        }
        let orientation = if area > 0.0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        };
        Ok(Ring {
            vertices,
            orientation,
        })
    }

    /// Builds a ring known to be valid (e.g. an exact rigid image of a valid ring).
    pub(crate) fn from_trusted(vertices: Vec<Point2D>) -> Self {
        let orientation = if shoelace(&vertices) > 0.0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        };
        Ring {
            vertices,
            orientation,
        }
    }

    pub fn vertices(&self) -> &[Point2D] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn vertex(&self, i: usize) -> Point2D {
        self.vertices[i % self.vertices.len()]
    }

    /// Directed edges `(v[i], v[i+1])`, closing edge included.
    pub fn edges(&self) -> impl Iterator<Item = (Point2D, Point2D)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox::from_points(&self.vertices).expect("ring has vertices")
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::for_bbox(&self.bbox())
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(self)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.distance(b)).sum()
    }

    pub fn reversed(&self) -> Ring {
        let mut v = self.vertices.clone();
        v.reverse();
        Ring {
            vertices: v,
            orientation: match self.orientation {
                Orientation::Cw => Orientation::Ccw,
                Orientation::Ccw => Orientation::Cw,
            },
        }
    }

    /// Returns a copy with the requested orientation.
    pub fn oriented(&self, orientation: Orientation) -> Ring {
        if self.orientation == orientation {
            self.clone()
        } else {
            self.reversed()
        }
    }

    pub fn contains(&self, p: Point2D) -> Containment {
        ring_contains_point(self, p)
    }

    /// Containment with an explicit boundary tolerance.
    pub fn classify_point(&self, p: Point2D, eps: f64) -> Containment {
        classify_point(&self.vertices, p, eps)
    }

    pub fn distance_to_boundary(&self, p: Point2D) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Sorted x coordinates where the horizontal line at `y` crosses the ring,
    /// using the half-open rule (an edge counts when exactly one endpoint is
    /// strictly above `y`). Horizontal edges never count.
    pub fn horizontal_crossings(&self, y: f64) -> Vec<f64> {
        let mut xs: Vec<f64> = self
            .edges()
            .filter_map(|(a, b)| crossing_x(a, b, y))
            .collect();
        xs.sort_by(f64::total_cmp);
        xs
    }

    /// Copy with collinear and duplicate vertices removed. Returns `None` if
    /// fewer than three vertices survive.
    pub fn simplified(&self, eps: f64) -> Option<Ring> {
        let cleaned = remove_collinear(&self.vertices, eps);
        if cleaned.len() < 3 {
            None
        } else {
            Some(Ring::from_trusted(cleaned))
        }
    }

    /// Whether any edge of `self` meets any edge of `other` (touching counts).
    pub fn boundary_meets(&self, other: &Ring, eps: f64) -> bool {
        let bb1 = self.bbox();
        let bb2 = other.bbox();
        if bb1.max.x + eps < bb2.min.x
            || bb2.max.x + eps < bb1.min.x
            || bb1.max.y + eps < bb2.min.y
            || bb2.max.y + eps < bb1.min.y
        {
            return false;
        }
        self.edges().any(|(a, b)| {
            other
                .edges()
                .any(|(c, d)| !segment_contact(a, b, c, d, eps).is_disjoint())
        })
    }
}

/// x where segment `a-b` crosses the horizontal line `y` under the half-open rule.
pub fn crossing_x(a: Point2D, b: Point2D, y: f64) -> Option<f64> {
    if (a.y > y) != (b.y > y) {
        let t = (y - a.y) / (b.y - a.y);
        Some(a.x + t * (b.x - a.x))
    } else {
        None
    }
}

fn shoelace(v: &[Point2D]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    // Shift to the first vertex to limit cancellation on large coordinates.
    let o = v[0];
    let mut acc = 0.0;
    for i in 1..n - 1 {
        let p = v[i] - o;
        let q = v[i + 1] - o;
        acc += p.dx * q.dy - q.dx * p.dy;
    }
    0.5 * acc
}

/// Shoelace area of an arbitrary vertex list (closed implicitly).
pub fn polygon_signed_area(v: &[Point2D]) -> f64 {
    shoelace(v)
}

/// Shoelace area; positive iff the ring is counter-clockwise.
pub fn signed_area(ring: &Ring) -> f64 {
    shoelace(&ring.vertices)
}

fn first_self_intersection(v: &[Point2D], eps: f64) -> Option<(usize, usize)> {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (v[j], v[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let contact = segment_contact(a, b, c, d, eps);
            if adjacent {
                // Neighbours may only share their common vertex.
                if let SegmentContact::Overlap(..) = contact {
                    return Some((i, j));
                }
                if n == 3 {
                    continue;
                }
                // A touch away from the shared vertex means a fold-back.
                if let SegmentContact::Touch(p) = contact {
                    let shared = if j == i + 1 { b } else { a };
                    if p.distance(shared) > eps {
                        return Some((i, j));
                    }
                }
            } else if !contact.is_disjoint() {
                return Some((i, j));
            }
        }
    }
    None
}

fn classify_point(v: &[Point2D], p: Point2D, eps: f64) -> Containment {
    let n = v.len();
    let mut inside = false;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        if point_segment_distance(p, a, b) < eps {
            return Containment::OnBoundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

/// Even-odd ray-cast classification with the ring's own `EPS_POINT`.
pub fn ring_contains_point(ring: &Ring, p: Point2D) -> Containment {
    classify_point(&ring.vertices, p, ring.tolerance().point)
}

/// True iff no interior angle exceeds 180 degrees.
pub fn is_convex(ring: &Ring) -> bool {
    let v = &ring.vertices;
    let n = v.len();
    let mut sign = 0i8;
    for i in 0..n {
        let e1 = v[(i + 1) % n] - v[i];
        let e2 = v[(i + 2) % n] - v[(i + 1) % n];
        let c = cross2(e1, e2);
        let scale = e1.norm() * e2.norm();
        let s = side(c, 1e-12 * scale);
        if s == 0 {
            continue;
        }
        if sign == 0 {
            sign = s;
        } else if s != sign {
            return false;
        }
    }
    true
}

fn remove_collinear(v: &[Point2D], eps: f64) -> Vec<Point2D> {
    let mut pts: Vec<Point2D> = v.to_vec();
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let mut removed = false;
        for i in 0..n {
            let prev = pts[(i + n - 1) % n];
            let cur = pts[i];
            let next = pts[(i + 1) % n];
            let dup = cur.distance(prev) <= eps;
            let base = next.distance(prev);
            let collinear = base > eps
                && orient(prev, next, cur).abs() / base <= eps
                && (cur - prev).dot(next - cur) >= 0.0;
            if dup || collinear {
                pts.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return pts;
        }
    }
}

/// Rigid rotation by `theta` radians (counter-clockwise) about `origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationFrame {
    pub theta: f64,
    pub origin: Point2D,
}

impl RotationFrame {
    pub fn new(theta: f64, origin: Point2D) -> Self {
        Self { theta, origin }
    }

    pub fn identity() -> Self {
        Self {
            theta: 0.0,
            origin: Point2D::default(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            theta: -self.theta,
            origin: self.origin,
        }
    }

    pub fn apply(&self, p: Point2D) -> Point2D {
        if self.theta == 0.0 {
            return p;
        }
        let (s, c) = self.theta.sin_cos();
        let d = p - self.origin;
        Point2D {
            x: self.origin.x + c * d.dx - s * d.dy,
            y: self.origin.y + s * d.dx + c * d.dy,
        }
    }

    pub fn apply_vec(&self, v: Vec2D) -> Vec2D {
        let (s, c) = self.theta.sin_cos();
        Vec2D {
            dx: c * v.dx - s * v.dy,
            dy: s * v.dx + c * v.dy,
        }
    }
}

/// Geometry that can be carried through a [`RotationFrame`].
pub trait Rotate {
    fn rotated(&self, frame: &RotationFrame) -> Self;
}

impl Rotate for Point2D {
    fn rotated(&self, frame: &RotationFrame) -> Self {
        frame.apply(*self)
    }
}

impl Rotate for Segment {
    fn rotated(&self, frame: &RotationFrame) -> Self {
        Segment {
            a: frame.apply(self.a),
            b: frame.apply(self.b),
        }
    }
}

impl Rotate for Vec<Point2D> {
    fn rotated(&self, frame: &RotationFrame) -> Self {
        self.iter().map(|p| frame.apply(*p)).collect()
    }
}

impl Rotate for Ring {
    fn rotated(&self, frame: &RotationFrame) -> Self {
        Ring {
            vertices: self.vertices.rotated(frame),
            orientation: self.orientation,
        }
    }
}

pub fn rotate<G: Rotate>(frame: &RotationFrame, g: &G) -> G {
    g.rotated(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    fn unit_square() -> Ring {
        Ring::new(vec![p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]).unwrap()
    }

    fn l_ring() -> Ring {
        Ring::new(vec![
            p(0., 0.),
            p(2., 0.),
            p(2., 1.),
            p(1., 1.),
            p(1., 2.),
            p(0., 2.),
        ])
        .unwrap()
    }

    #[test]
    fn cross_of_unit_basis() {
        assert_eq!(cross2(Vec2D::new(1., 0.), Vec2D::new(0., 1.)), 1.0);
        assert_eq!(cross2(Vec2D::new(0., 1.), Vec2D::new(1., 0.)), -1.0);
        assert_eq!(cross2(Vec2D::new(2., 0.), Vec2D::new(3., 0.)), 0.0);
    }

    #[test]
    fn shoelace_signs() {
        let sq = unit_square();
        assert_eq!(signed_area(&sq), 1.0);
        assert_eq!(signed_area(&sq.reversed()), -1.0);
        let tri = Ring::new(vec![p(0., 0.), p(2., 0.), p(0., 2.)]).unwrap();
        assert_eq!(signed_area(&tri), 2.0);
        assert_eq!(tri.orientation(), Orientation::Ccw);
    }

    #[test]
    fn containment_cases() {
        let sq = unit_square();
        assert_eq!(sq.contains(p(0.5, 0.5)), Containment::Inside);
        assert_eq!(sq.contains(p(2.0, 0.5)), Containment::Outside);
        assert_eq!(sq.contains(p(1.0, 0.5)), Containment::OnBoundary);
        assert_eq!(sq.contains(p(0.0, 0.0)), Containment::OnBoundary);
        assert_eq!(l_ring().contains(p(1.5, 1.5)), Containment::Outside);
        assert_eq!(l_ring().contains(p(0.5, 1.5)), Containment::Inside);
    }

    #[test]
    fn convexity() {
        assert!(is_convex(&unit_square()));
        assert!(!is_convex(&l_ring()));
        assert!(is_convex(
            &Ring::new(vec![p(0., 0.), p(2., 0.), p(0., 2.)]).unwrap()
        ));
        // Collinear vertex does not break convexity.
        assert!(is_convex(
            &Ring::new(vec![p(0., 0.), p(1., 0.), p(2., 0.), p(2., 2.)]).unwrap()
        ));
    }

    #[test]
    fn quarter_turn_and_identity() {
        let f = RotationFrame::new(FRAC_PI_2, Point2D::default());
        let q = f.apply(p(1., 0.));
        assert!((q.x - 0.0).abs() < 1e-15 && (q.y - 1.0).abs() < 1e-15);
        let id = RotationFrame::identity();
        assert_eq!(id.apply(p(3., -4.)), p(3., -4.));
        let sq = rotate(&RotationFrame::new(std::f64::consts::FRAC_PI_4, p(0.3, 0.2)), &unit_square());
        assert!((signed_area(&sq) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ring_validation_errors() {
        assert_eq!(
            Ring::new(vec![p(0., 0.), p(1., 0.)]).unwrap_err(),
            GeomError::TooFewVertices(2)
        );
        assert!(matches!(
            Ring::new(vec![p(0., 0.), p(1., 0.), p(1., 0.), p(0., 1.)]),
            Err(GeomError::CoincidentVertices(1, 2))
        ));
        assert_eq!(
            Ring::new(vec![p(0., 0.), p(1., 0.), p(2., 0.)]).unwrap_err(),
            GeomError::ZeroArea
        );
        // Bow tie.
        assert!(matches!(
            Ring::new(vec![p(0., 0.), p(2., 2.), p(2., 0.), p(0., 1.)]),
            Err(GeomError::SelfIntersection(..))
        ));
        assert!(Point2D::try_new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn segment_contacts() {
        let e = 1e-12;
        assert!(matches!(
            segment_contact(p(0., 0.), p(2., 2.), p(0., 2.), p(2., 0.), e),
            SegmentContact::Proper(q) if (q.x - 1.0).abs() < 1e-12
        ));
        assert!(matches!(
            segment_contact(p(0., 0.), p(2., 0.), p(1., 0.), p(1., 1.), e),
            SegmentContact::Touch(_)
        ));
        assert!(matches!(
            segment_contact(p(0., 0.), p(2., 0.), p(1., 0.), p(3., 0.), e),
            SegmentContact::Overlap(..)
        ));
        assert!(segment_contact(p(0., 0.), p(1., 0.), p(2., 0.), p(3., 0.), e).is_disjoint());
        assert!(segment_contact(p(0., 0.), p(1., 0.), p(0., 1.), p(1., 1.), e).is_disjoint());
    }

    #[test]
    fn crossings_half_open() {
        let sq = unit_square();
        assert_eq!(sq.horizontal_crossings(0.5), vec![0.0, 1.0]);
        // Through vertices: each vertex counted once overall.
        assert_eq!(l_ring().horizontal_crossings(1.0).len() % 2, 0);
    }

    #[test]
    fn simplify_drops_collinear() {
        let r = Ring::new(vec![p(0., 0.), p(1., 0.), p(2., 0.), p(2., 2.), p(0., 2.)]).unwrap();
        assert_eq!(r.simplified(1e-12).unwrap().len(), 4);
    }
}
