//! Fixtures, random generators and brute-force oracles shared by the test
//! suites. The oracles deliberately avoid the library's own predicates.

use std::f64::consts::PI;

use covplan_core::{Point2D, RegionOfInterest, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod checks;

pub fn p(x: f64, y: f64) -> Point2D {
    Point2D::new(x, y)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Ring {
    Ring::new(vec![p(x0, y0), p(x1, y0), p(x1, y1), p(x0, y1)]).unwrap()
}

pub fn square(cx: f64, cy: f64, side: f64) -> Ring {
    let h = side / 2.0;
    rect(cx - h, cy - h, cx + h, cy + h)
}

/// Outer ring of the U-shaped test polygon.
pub fn u_ring() -> Ring {
    Ring::new(vec![
        p(0., 0.),
        p(3., 0.),
        p(3., 3.),
        p(2., 3.),
        p(1.5, 1.),
        p(1., 3.),
        p(0., 3.),
    ])
    .unwrap()
}

pub fn u_polygon() -> RegionOfInterest {
    RegionOfInterest::new(u_ring(), vec![]).unwrap()
}

/// 10 x 10 square with a centred 2 x 2 hole.
pub fn square_with_hole() -> RegionOfInterest {
    RegionOfInterest::new(square(5., 5., 10.), vec![square(5., 5., 2.)]).unwrap()
}

/// Survey field with a notch cut into its northern side and a building
/// in the south-west part.
pub fn notched_field() -> RegionOfInterest {
    let outer = Ring::new(vec![
        p(0., 0.),
        p(400., 0.),
        p(420., 180.),
        p(380., 300.),
        p(260., 300.),
        p(200., 140.),
        p(150., 300.),
        p(20., 280.),
    ])
    .unwrap();
    let hole = Ring::new(vec![p(80., 60.), p(140., 50.), p(150., 110.), p(90., 120.)]).unwrap();
    RegionOfInterest::new(outer, vec![hole]).unwrap()
}

fn sorted_angles<R: Rng>(r: &mut R, n: usize) -> Vec<f64> {
    // Jittered uniform angles keep every gap below 1.5 * 2 pi / n.
    let step = 2.0 * PI / n as f64;
    let start = r.gen_range(0.0..2.0 * PI);
    (0..n)
        .map(|i| start + step * (i as f64 + r.gen_range(-0.25..0.25)))
        .collect()
}

/// Random convex polygon: points on an ellipse at jittered angles.
pub fn random_convex<R: Rng>(r: &mut R, n: usize) -> Ring {
    let (cx, cy) = (r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0));
    let (a, b) = (r.gen_range(1.0..4.0), r.gen_range(1.0..4.0));
    let tilt = r.gen_range(0.0..PI);
    let (s, c) = tilt.sin_cos();
    let pts = sorted_angles(r, n)
        .into_iter()
        .map(|t| {
            let (x, y) = (a * t.cos(), b * t.sin());
            p(cx + c * x - s * y, cy + s * x + c * y)
        })
        .collect();
    Ring::new(pts).unwrap()
}

/// Random star-shaped polygon of radius about `radius` around `(cx, cy)`,
/// with radii drawn from `[lo, 1] * radius`.
pub fn random_star<R: Rng>(r: &mut R, n: usize, cx: f64, cy: f64, radius: f64, lo: f64) -> Ring {
    let pts = sorted_angles(r, n)
        .into_iter()
        .map(|t| {
            let rr = radius * r.gen_range(lo..1.0);
            p(cx + rr * t.cos(), cy + rr * t.sin())
        })
        .collect();
    Ring::new(pts).unwrap()
}

/// Random region: a star-shaped outer ring of radius `radius` (at least 6
/// vertices, so it contains the disk of radius `0.42 radius`) with `holes`
/// small star-shaped holes well inside it.
pub fn random_region<R: Rng>(r: &mut R, radius: f64, holes: usize) -> RegionOfInterest {
    assert!(holes <= 3);
    let n = r.gen_range(6..14);
    let outer = random_star(r, n, 0.0, 0.0, radius, 0.6);
    let base = r.gen_range(0.0..2.0 * PI);
    let hs = (0..holes)
        .map(|j| {
            let t = base + 2.0 * PI * j as f64 / holes as f64;
            let rc = if holes == 1 { r.gen_range(0.0..0.25) } else { 0.25 } * radius;
            let m = r.gen_range(3..8);
            random_star(r, m, rc * t.cos(), rc * t.sin(), 0.08 * radius, 0.5)
        })
        .collect();
    RegionOfInterest::new(outer, hs).unwrap()
}

/// Signed area by the shoelace formula.
pub fn shoelace(pts: &[Point2D]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        / 2.0
}

/// Inward offset of a convex counter-clockwise polygon by intersecting the
/// shifted half-planes (Sutherland-Hodgman clipping of the polygon itself).
pub fn convex_inward_offset(pts: &[Point2D], d: f64) -> Vec<Point2D> {
    let n = pts.len();
    let mut poly: Vec<Point2D> = pts.to_vec();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let (ex, ey) = (b.x - a.x, b.y - a.y);
        let len = ex.hypot(ey);
        // Inward normal of a CCW edge.
        let (nx, ny) = (-ey / len, ex / len);
        let c = nx * a.x + ny * a.y + d;
        let f = |q: Point2D| nx * q.x + ny * q.y - c;
        let m = poly.len();
        let mut out = Vec::with_capacity(m + 1);
        for k in 0..m {
            let (u, v) = (poly[k], poly[(k + 1) % m]);
            let (fu, fv) = (f(u), f(v));
            if fu >= 0.0 {
                out.push(u);
            }
            if (fu >= 0.0) != (fv >= 0.0) {
                let t = fu / (fu - fv);
                out.push(p(u.x + t * (v.x - u.x), u.y + t * (v.y - u.y)));
            }
        }
        poly = out;
        if poly.len() < 3 {
            return Vec::new();
        }
    }
    poly
}

/// Number of ring edges crossed by the horizontal line at `y`. Lines through
/// a vertex are not meaningful for this oracle; callers sample generic `y`.
pub fn crossing_count(rings: &[&Ring], y: f64) -> usize {
    rings
        .iter()
        .flat_map(|r| {
            let v = r.vertices();
            (0..v.len()).map(move |i| (v[i], v[(i + 1) % v.len()]))
        })
        .filter(|(a, b)| (a.y < y && b.y > y) || (a.y > y && b.y < y))
        .count()
}

/// Winding number of `rings` around `q` (non-zero means inside).
pub fn winding_number(pts: &[Point2D], q: Point2D) -> i32 {
    let n = pts.len();
    let mut w = 0;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let side = (b.x - a.x) * (q.y - a.y) - (q.x - a.x) * (b.y - a.y);
        if a.y <= q.y {
            if b.y > q.y && side > 0.0 {
                w += 1;
            }
        } else if b.y <= q.y && side < 0.0 {
            w -= 1;
        }
    }
    w
}

pub fn inside_ring(r: &Ring, q: Point2D) -> bool {
    winding_number(r.vertices(), q) != 0
}

/// Inside the outer ring and outside every hole.
pub fn inside_region(roi: &RegionOfInterest, q: Point2D) -> bool {
    inside_ring(roi.outer(), q) && roi.holes().iter().all(|h| !inside_ring(h, q))
}

pub fn dist_point_segment(q: Point2D, a: Point2D, b: Point2D) -> f64 {
    let (ex, ey) = (b.x - a.x, b.y - a.y);
    let l2 = ex * ex + ey * ey;
    let t = if l2 == 0.0 {
        0.0
    } else {
        (((q.x - a.x) * ex + (q.y - a.y) * ey) / l2).clamp(0.0, 1.0)
    };
    (q.x - a.x - t * ex).hypot(q.y - a.y - t * ey)
}

pub fn dist_to_ring(r: &Ring, q: Point2D) -> f64 {
    let v = r.vertices();
    (0..v.len())
        .map(|i| dist_point_segment(q, v[i], v[(i + 1) % v.len()]))
        .fold(f64::INFINITY, f64::min)
}

/// Points along `a -> b` every `step` or closer, both ends included.
pub fn sample_segment(a: Point2D, b: Point2D, step: f64) -> Vec<Point2D> {
    let len = a.distance(b);
    let k = (len / step).ceil().max(1.0) as usize;
    (0..=k)
        .map(|i| {
            let t = i as f64 / k as f64;
            p(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
        })
        .collect()
}

/// Whether the open segment `ab` passes through the interior of the
/// axis-aligned box, tested by dense sampling.
fn crosses_box(a: Point2D, b: Point2D, lo: Point2D, hi: Point2D) -> bool {
    let strictly = |q: Point2D| q.x > lo.x + 1e-9 && q.x < hi.x - 1e-9 && q.y > lo.y + 1e-9 && q.y < hi.y - 1e-9;
    sample_segment(a, b, 1e-3).into_iter().any(strictly)
}

/// Shortest path from `a` to `b` around an axis-aligned box obstacle, by
/// enumerating every ordered subset of the box corners as intermediate stops.
pub fn box_detour_length(a: Point2D, b: Point2D, lo: Point2D, hi: Point2D) -> f64 {
    let corners = [lo, p(hi.x, lo.y), hi, p(lo.x, hi.y)];
    let mut best = f64::INFINITY;
    let mut order: Vec<usize> = Vec::new();
    fn go(
        order: &mut Vec<usize>,
        corners: &[Point2D; 4],
        a: Point2D,
        b: Point2D,
        lo: Point2D,
        hi: Point2D,
        best: &mut f64,
    ) {
        let mut pts = vec![a];
        pts.extend(order.iter().map(|&i| corners[i]));
        pts.push(b);
        if pts.windows(2).all(|w| !crosses_box(w[0], w[1], lo, hi)) {
            let len: f64 = pts.windows(2).map(|w| w[0].distance(w[1])).sum();
            *best = best.min(len);
        }
        for i in 0..4 {
            if !order.contains(&i) {
                order.push(i);
                go(order, corners, a, b, lo, hi, best);
                order.pop();
            }
        }
    }
    go(&mut order, &corners, a, b, lo, hi, &mut best);
    best
}
