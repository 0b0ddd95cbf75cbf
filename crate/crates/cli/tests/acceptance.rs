//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use covplan::{read_plan_geojson, LineKind};
use covplan_core::decompose::{find_events_in_frame, partition_cells_in_frame, region_to_frame};
use covplan_core::{
    build_adjacency, generate_zigzag, is_monotone, merge_components, offset_ring, run_pipeline,
    Cell, FirstLineMode, MergedRegion, OffsetSpec, PathError, PlannerConfig, Point2D, RegionInput,
    RegionOfInterest, Ring, SpacingSpec, SweepFrame,
};
use covplan_testkit::checks::{
    alternation, clearance, coverage, events_match_counts, leg_angle, plans_match,
};
use covplan_testkit::{
    convex_inward_offset, crossing_count, dist_point_segment, notched_field, p, random_convex,
    random_region, rect, rng, shoelace, square, square_with_hole, u_polygon,
};
use rand::Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cells_in_frame(f: &RegionOfInterest) -> Result<Vec<Cell>, String> {
    let ev = find_events_in_frame(f).map_err(|e| e.to_string())?;
    partition_cells_in_frame(f, &ev).map_err(|e| e.to_string())
}

fn two_crossings(r: &Ring) -> bool {
    let mut ys: Vec<f64> = r.vertices().iter().map(|v| v.y).collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys.windows(2).all(|w| crossing_count(&[r], 0.5 * (w[0] + w[1])) == 2)
}

fn config(wind: f64, safe: f64, d: f64, mode: FirstLineMode) -> PlannerConfig {
    PlannerConfig {
        wind_direction_deg: wind,
        sweep_angle_override_deg: None,
        safe_distance: safe,
        spacing: SpacingSpec::from_distance(d, mode).unwrap(),
    }
}

fn plan(roi: &RegionOfInterest, cfg: &PlannerConfig) -> Result<Vec<covplan_core::CoveragePlan>, String> {
    run_pipeline(&RegionInput::Explicit(vec![roi.clone()]), cfg).map_err(|e| e.to_string())
}

fn offset_oracle() -> Outcome {
    let inward = |r: &Ring, d: f64| offset_ring(r, OffsetSpec::inward(d).unwrap()).map_err(|e| e.to_string());
    let sq = inward(&square(0.5, 0.5, 1.0), 0.1)?;
    ensure(sq.len() == 1 && (sq[0].area() - 0.64).abs() < 1e-9, || format!("unit square: {sq:?}"))?;
    let tri = Ring::new(vec![p(0., 0.), p(2., 0.), p(1., 3f64.sqrt())]).unwrap();
    let t = inward(&tri, 0.2)?;
    ensure(t.len() == 1 && t[0].len() == 3, || "triangle shape".into())?;
    let v = t[0].vertices();
    for i in 0..3 {
        let side = v[i].distance(v[(i + 1) % 3]);
        ensure((side - 1.307_179_676_972_449).abs() < 1e-6, || format!("triangle side {side}"))?;
    }
    ensure(inward(&rect(0., 0., 4., 1.), 0.5)?.is_empty(), || "4x1 rectangle survives".into())?;

    let mut r = rng(101);
    for k in 0..200 {
        let n = r.gen_range(3..12);
        let ring = random_convex(&mut r, n);
        let bb = ring.bbox();
        let d = r.gen_range(0.0..0.3) * bb.width().min(bb.height());
        let tol = 1e-6 * bb.diagonal();
        let expect = convex_inward_offset(ring.vertices(), d);
        let got = inward(&ring, d)?;
        if expect.len() < 3 || shoelace(&expect) < tol * tol {
            ensure(got.iter().all(|g| g.area() < tol), || format!("convex {k}: expected collapse"))?;
            continue;
        }
        ensure(got.len() == 1, || format!("convex {k}: {} pieces", got.len()))?;
        let near = |q: Point2D, poly: &[Point2D]| {
            (0..poly.len())
                .map(|i| dist_point_segment(q, poly[i], poly[(i + 1) % poly.len()]))
                .fold(f64::INFINITY, f64::min)
        };
        let gap = got[0]
            .vertices()
            .iter()
            .map(|&q| near(q, &expect))
            .chain(expect.iter().map(|&q| near(q, got[0].vertices())))
            .fold(0.0, f64::max);
        ensure(gap < tol, || format!("convex {k}: boundaries {gap} apart"))?;
    }
    Ok(())
}

fn event_oracle() -> Outcome {
    let mut r = rng(102);
    for i in 0..100 {
        let roi = random_region(&mut r, 50.0, i % 4);
        let f = region_to_frame(&roi, &SweepFrame::from_sweep_angle(r.gen_range(0.0..180.0)));
        events_match_counts(&f, 10_000, &mut r).map_err(|e| format!("polygon {i}: {e}"))?;
    }
    Ok(())
}

fn decomposition_conservation() -> Outcome {
    let mut r = rng(103);
    for i in 0..100 {
        let roi = random_region(&mut r, 50.0, i % 4);
        let f = region_to_frame(&roi, &SweepFrame::from_sweep_angle(r.gen_range(0.0..180.0)));
        let cells = cells_in_frame(&f)?;
        let total: f64 = cells.iter().map(Cell::area).sum();
        let expect = roi.outer().area() - roi.holes().iter().map(Ring::area).sum::<f64>();
        ensure((total - expect).abs() <= 1e-6 * expect, || format!("polygon {i}: {total} vs {expect}"))?;
        ensure(cells.iter().all(|c| two_crossings(&c.boundary)), || format!("polygon {i}: non-monotone cell"))?;
    }
    Ok(())
}

fn merged(roi: &RegionOfInterest) -> Result<(usize, Vec<MergedRegion>), String> {
    let f = region_to_frame(roi, &SweepFrame::from_sweep_angle(0.0));
    let cells = cells_in_frame(&f)?;
    let m = merge_components(&build_adjacency(&cells), &cells).map_err(|e| e.to_string())?;
    Ok((cells.len(), m))
}

fn merging() -> Outcome {
    let check = |name: &str, roi: RegionOfInterest, expect: Vec<Vec<usize>>| -> Outcome {
        let (n, regions) = merged(&roi)?;
        let sets: Vec<Vec<usize>> = regions.iter().map(|m| m.member_cells.clone()).collect();
        ensure(sets == expect, || format!("{name}: regions {sets:?}"))?;
        ensure(
            regions.iter().all(|m| two_crossings(&m.boundary) && is_monotone(&m.boundary)),
            || format!("{name}: non-monotone region"),
        )?;
        let mut all: Vec<usize> = sets.concat();
        all.sort_unstable();
        ensure(all == (0..n).collect::<Vec<_>>(), || format!("{name}: cells not partitioned"))
    };
    // U: cells are left prong, right prong, base.
    check("U polygon", u_polygon(), vec![vec![0, 2], vec![1]])?;
    // Square with hole: cells are top, left, right, bottom.
    check("square with hole", square_with_hole(), vec![vec![0, 1, 3], vec![2]])
}

fn path_correctness() -> Outcome {
    let single = |r: Ring| MergedRegion {
        boundary: r,
        member_cells: vec![0],
    };
    let s = SpacingSpec::from_distance(0.25, FirstLineMode::PaperRule).unwrap();
    let path = generate_zigzag(&single(rect(0., 0., 4., 1.)), &s).map_err(|e| e.to_string())?;
    let expect = [p(0., 0.25), p(4., 0.25), p(4., 0.5), p(0., 0.5), p(0., 0.75), p(4., 0.75)];
    ensure(
        path.waypoints.len() == 6 && path.waypoints.iter().zip(expect).all(|(a, b)| a.distance(b) <= 1e-9),
        || format!("rectangle: {:?}", path.waypoints),
    )?;
    let mut r = rng(105);
    let mut checked = 0;
    for i in 0..100 {
        let roi = random_region(&mut r, 50.0, i % 4);
        let f = region_to_frame(&roi, &SweepFrame::from_sweep_angle(r.gen_range(0.0..180.0)));
        let cells = cells_in_frame(&f)?;
        for m in merge_components(&build_adjacency(&cells), &cells).map_err(|e| e.to_string())? {
            match generate_zigzag(&m, &SpacingSpec::from_distance(2.0, FirstLineMode::PaperRule).unwrap()) {
                Ok(path) => {
                    let legs: Vec<_> = path.legs().collect();
                    for w in legs.windows(2) {
                        ensure((w[0].1 - w[0].0).dot(w[1].1 - w[1].0) < 0.0, || format!("region {i}: legs do not alternate"))?;
                    }
                    checked += 1;
                }
                Err(PathError::EmptyPath) => {}
                Err(e) => return Err(format!("region {i}: {e}")),
            }
        }
    }
    ensure(checked >= 100, || format!("only {checked} paths generated"))
}

fn line_family() -> Outcome {
    let d = 1.25;
    for m in [0.0f64, 1.0, -2.0] {
        let frame = SweepFrame::from_sweep_angle(m.atan().to_degrees());
        for n in 1..=5 {
            let y = n as f64 * d;
            for x in [-40.0, 25.0] {
                let q = frame.to_world(&p(x, y));
                let expect = m * q.x + n as f64 * d * (m * m + 1.0).sqrt();
                ensure((q.y - expect).abs() < 1e-9, || format!("m={m} n={n}: {} vs {expect}", q.y))?;
            }
        }
        // The same lines produced by the path generator.
        let region = MergedRegion {
            boundary: rect(-10., 0., 10., 6.),
            member_cells: vec![0],
        };
        let path = generate_zigzag(&region, &SpacingSpec::from_distance(d, FirstLineMode::PaperRule).unwrap())
            .map_err(|e| e.to_string())?;
        for (k, (a, b)) in path.legs().enumerate() {
            let n = (k + 1) as f64;
            for q in [frame.to_world(&a), frame.to_world(&b)] {
                let expect = m * q.x + n * d * (m * m + 1.0).sqrt();
                ensure((q.y - expect).abs() < 1e-9, || format!("m={m} leg {k}: {} vs {expect}", q.y))?;
            }
        }
    }
    Ok(())
}

fn clearance_and_containment() -> Outcome {
    let roi = square_with_hole();
    for pl in plan(&roi, &config(0.0, 0.5, 1.0, FirstLineMode::PaperRule))? {
        clearance(&pl, &roi, 0.5).map_err(|e| format!("square with hole: {e}"))?;
    }
    let mut r = rng(107);
    for i in 0..50 {
        let roi = random_region(&mut r, 100.0, i % 4);
        let safe = r.gen_range(1.0..4.0);
        let cfg = config(r.gen_range(0.0..360.0), safe, r.gen_range(3.0..8.0), FirstLineMode::PaperRule);
        for pl in plan(&roi, &cfg).map_err(|e| format!("roi {i}: {e}"))? {
            clearance(&pl, &roi, safe).map_err(|e| format!("roi {i}: {e}"))?;
        }
    }
    Ok(())
}

fn coverage_centered() -> Outcome {
    let mut r = rng(108);
    for i in 0..20 {
        let roi = random_region(&mut r, 100.0, i % 4);
        let cfg = config(r.gen_range(0.0..360.0), 2.0, r.gen_range(4.0..8.0), FirstLineMode::Centered);
        for pl in plan(&roi, &cfg).map_err(|e| format!("roi {i}: {e}"))? {
            coverage(&pl, 100).map_err(|e| format!("roi {i}: {e}"))?;
            alternation(&pl).map_err(|e| format!("roi {i}: {e}"))?;
        }
    }
    Ok(())
}

fn equivariance() -> Outcome {
    let mut r = rng(109);
    for i in 0..20 {
        let roi = random_region(&mut r, 100.0, i % 4);
        let cfg = config(r.gen_range(0.0..360.0), 2.0, 5.0, FirstLineMode::PaperRule);
        let frame = cfg.sweep_frame();
        let aligned = PlannerConfig {
            sweep_angle_override_deg: Some(0.0),
            ..cfg
        };
        let a = plan(&roi, &cfg)?;
        let b = plan(&region_to_frame(&roi, &frame), &aligned)?;
        ensure(a.len() == b.len(), || format!("roi {i}: plan counts differ"))?;
        for (x, y) in a.iter().zip(&b) {
            plans_match(x, y, &frame.rotation().inverse(), 1e-6 * roi.bbox().diagonal())
                .map_err(|e| format!("roi {i}: {e}"))?;
        }
    }
    Ok(())
}

fn write_field_geojson(path: &Path, roi: &RegionOfInterest) {
    let ring = |r: &Ring| {
        let mut v: Vec<[f64; 2]> = r.vertices().iter().map(|q| [q.x, q.y]).collect();
        v.push(v[0]);
        v
    };
    let mut rings = vec![ring(roi.outer())];
    rings.extend(roi.holes().iter().map(ring));
    let text = serde_json::json!({ "type": "Polygon", "coordinates": rings }).to_string();
    std::fs::write(path, text).unwrap();
}

fn run_cli(input: &Path, out: &Path, extra: &[&str]) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_covplan"))
        .args(["--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .args(extra)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())
}

fn field_analog() -> Outcome {
    let roi = notched_field();
    let plans = plan(&roi, &config(45.0, 10.0, 20.0, FirstLineMode::PaperRule))?;
    ensure(plans.len() == 1, || format!("{} plans", plans.len()))?;
    let pl = &plans[0];
    ensure(pl.paths.len() >= 2, || format!("{} paths", pl.paths.len()))?;
    ensure(pl.transitions.len() == pl.paths.len() - 1, || "transition count".into())?;
    leg_angle(pl, 135.0, 1e-6)?;
    clearance(pl, &roi, 10.0)?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("field.geojson");
    write_field_geojson(&input, &roi);
    let out = dir.path().join("plan");
    run_cli(&input, &out, &["--wind-deg", "45", "--safe-dist", "10", "--swath", "100", "--sidelap", "0.8"])?;
    for ext in ["geojson", "svg", "csv"] {
        let f = dir.path().join(format!("plan.{ext}"));
        let len = std::fs::metadata(&f).map_err(|e| format!("{}: {e}", f.display()))?.len();
        ensure(len > 0, || format!("{} is empty", f.display()))?;
    }
    let svg = std::fs::read_to_string(dir.path().join("plan.svg")).unwrap();
    ensure(svg.contains("viewBox=\"0 0 1000 1000\"") && svg.contains("stroke-dasharray"), || "svg content".into())?;
    println!("    field analog: {} paths, {} transitions", pl.paths.len(), pl.transitions.len());
    Ok(())
}

fn cli_determinism_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("field.geojson");
    let roi = notched_field();
    write_field_geojson(&input, &roi);
    let args = ["--wind-deg", "30", "--safe-dist", "8", "--swath", "60", "--sidelap", "0.7", "--first-line", "centered"];
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_cli(&input, &a, &args)?;
    run_cli(&input, &b, &args)?;
    for ext in ["geojson", "csv"] {
        let x = std::fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let y = std::fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        ensure(x == y, || format!("{ext} outputs differ between runs"))?;
    }
    let text = std::fs::read_to_string(dir.path().join("a.geojson")).unwrap();
    let lines = read_plan_geojson(&text, None).map_err(|e| e.to_string())?;
    let cfg = PlannerConfig {
        wind_direction_deg: 30.0,
        sweep_angle_override_deg: None,
        safe_distance: 8.0,
        spacing: covplan_core::spacing_from_overlap(60.0, 0.7).unwrap().with_mode(FirstLineMode::Centered),
    };
    let plans = plan(&roi, &cfg)?;
    let paths: Vec<&covplan::PlanLine> = lines.iter().filter(|l| l.kind == LineKind::Path).collect();
    let expect: Vec<&Vec<Point2D>> = plans.iter().flat_map(|pl| pl.paths.iter().map(|p| &p.waypoints)).collect();
    ensure(paths.len() == expect.len(), || "path count differs after reload".into())?;
    for (got, want) in paths.iter().zip(expect) {
        ensure(got.points.len() == want.len(), || "waypoint count differs".into())?;
        for (g, w) in got.points.iter().zip(want) {
            ensure(g.distance(*w) <= 1e-9, || format!("{g} vs {w}"))?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 offset oracle", offset_oracle),
        ("2 event oracle", event_oracle),
        ("3 decomposition conservation", decomposition_conservation),
        ("4 merging", merging),
        ("5 path correctness", path_correctness),
        ("6 line family equivalence", line_family),
        ("7 clearance and containment", clearance_and_containment),
        ("8 coverage", coverage_centered),
        ("9 equivariance", equivariance),
        ("10 concave field at 45 degrees", field_analog),
        ("11 CLI determinism and round trip", cli_determinism_round_trip),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("PASS  {name} ({secs:.2}s)"),
            Err(e) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.2}s): {e}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
