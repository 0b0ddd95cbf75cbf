//! Property checks over finished plans. Each returns a description of the
//! first violation found.

use covplan_core::decompose::classify_vertices;
use covplan_core::geom::Rotate;
use covplan_core::{CoveragePlan, Point2D, RegionOfInterest, Ring, RotationFrame};
use rand::Rng;

use crate::{crossing_count, dist_to_ring, inside_region, inside_ring, p, sample_segment};

/// Every sampled point of every path and transition keeps `safe` from the
/// holes of `source` and stays inside its outer ring.
pub fn clearance(plan: &CoveragePlan, source: &RegionOfInterest, safe: f64) -> Result<(), String> {
    let step = plan.spacing.spacing_d / 10.0;
    let polylines = plan
        .paths
        .iter()
        .map(|p| &p.waypoints)
        .chain(plan.transitions.iter().map(|t| &t.waypoints));
    for line in polylines {
        for w in line.windows(2) {
            for q in sample_segment(w[0], w[1], step) {
                if !inside_ring(source.outer(), q) && dist_to_ring(source.outer(), q) > 1e-6 {
                    return Err(format!("{q} leaves the outer ring"));
                }
                for (k, h) in source.holes().iter().enumerate() {
                    let d = dist_to_ring(h, q);
                    if inside_ring(h, q) || d < safe - 1e-6 {
                        return Err(format!("{q} is {d} from hole {k}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Consecutive flight lines of every path point in opposite directions.
pub fn alternation(plan: &CoveragePlan) -> Result<(), String> {
    for (k, path) in plan.paths.iter().enumerate() {
        let legs: Vec<(Point2D, Point2D)> = path.legs().collect();
        for (i, w) in legs.windows(2).enumerate() {
            let dot = (w[0].1 - w[0].0).dot(w[1].1 - w[1].0);
            if dot >= 0.0 {
                return Err(format!("path {k}: legs {i} and {} do not alternate", i + 1));
            }
        }
    }
    Ok(())
}

/// Every point of an `n x n` grid over the free space lies within half a line
/// spacing (across track) of a flight line of the path covering it.
pub fn coverage(plan: &CoveragePlan, n: usize) -> Result<(), String> {
    let d = plan.spacing.spacing_d;
    let fs = &plan.free_space;
    let bb = fs.bbox();
    for a in 0..n {
        for b in 0..n {
            let q = p(
                bb.min.x + (a as f64 + 0.5) / n as f64 * bb.width(),
                bb.min.y + (b as f64 + 0.5) / n as f64 * bb.height(),
            );
            if !inside_region(fs, q) {
                continue;
            }
            let covered = plan
                .paths
                .iter()
                .filter(|path| {
                    inside_ring(&path.region.boundary, q)
                        || dist_to_ring(&path.region.boundary, q) <= 1e-9 * bb.diagonal()
                })
                .any(|path| {
                    path.legs().any(|(s, e)| {
                        let u = (e - s).normalized();
                        (q - s).cross(u).abs() <= d / 2.0 + 1e-6
                    })
                });
            if !covered {
                return Err(format!("{q} is not covered"));
            }
        }
    }
    Ok(())
}

/// All flight lines are parallel to the world direction `deg`.
pub fn leg_angle(plan: &CoveragePlan, deg: f64, tol_deg: f64) -> Result<(), String> {
    for path in &plan.paths {
        for (s, e) in path.legs() {
            let a = (e.y - s.y).atan2(e.x - s.x).to_degrees().rem_euclid(180.0);
            let diff = (a - deg.rem_euclid(180.0)).abs();
            let diff = diff.min(180.0 - diff);
            if diff > tol_deg {
                return Err(format!("leg {s} -> {e} runs at {a} degrees"));
            }
        }
    }
    Ok(())
}

/// Brute-force check of the sweep events of a region given in frame
/// coordinates: at `samples` random levels, the number of boundary crossings
/// predicted by the critical vertices above the level equals the count
/// obtained by intersecting every edge.
pub fn events_match_counts<R: Rng>(
    roi_in_frame: &RegionOfInterest,
    samples: usize,
    rng: &mut R,
) -> Result<(), String> {
    let crit = classify_vertices(roi_in_frame).map_err(|e| e.to_string())?;
    let rings: Vec<&Ring> = roi_in_frame.rings().collect();
    let bb = roi_in_frame.bbox();
    for _ in 0..samples {
        let y = rng.gen_range(bb.min.y..bb.max.y);
        if rings.iter().any(|r| r.vertices().iter().any(|v| v.y == y)) {
            continue;
        }
        let predicted: i32 = crit
            .iter()
            .filter(|c| c.location.y > y)
            .map(|c| c.count_change())
            .sum();
        let actual = crossing_count(&rings, y) as i32;
        if predicted != actual {
            return Err(format!("at y={y}: predicted {predicted} crossings, counted {actual}"));
        }
    }
    Ok(())
}

/// Whether `plan` equals `other` rotated by `rot`, waypoint by waypoint
/// within `tol`.
pub fn plans_match(plan: &CoveragePlan, other: &CoveragePlan, rot: &RotationFrame, tol: f64) -> Result<(), String> {
    if plan.paths.len() != other.paths.len() || plan.transitions.len() != other.transitions.len() {
        return Err("different number of paths or transitions".into());
    }
    let lines = |pl: &CoveragePlan| -> Vec<Vec<Point2D>> {
        pl.paths
            .iter()
            .map(|p| p.waypoints.clone())
            .chain(pl.transitions.iter().map(|t| t.waypoints.clone()))
            .collect()
    };
    for (a, b) in lines(plan).iter().zip(lines(other)) {
        if a.len() != b.len() {
            return Err("different waypoint counts".into());
        }
        for (u, v) in a.iter().zip(b) {
            let v = v.rotated(rot);
            if u.distance(v) > tol {
                return Err(format!("{u} vs {v}"));
            }
        }
    }
    Ok(())
}

