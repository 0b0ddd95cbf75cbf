use covplan_core::decompose::{find_events_in_frame, partition_cells_in_frame, region_to_frame};
use covplan_core::pathgen::CoordinateSpace;
use covplan_core::{
    build_adjacency, generate_zigzag, line_family_world, link_paths, merge_components, to_world,
    FirstLineMode, MergedRegion, PathError, Point2D, RegionOfInterest, Ring, SpacingSpec, SweepFrame,
    WorldLine,
};
use covplan_testkit::{box_detour_length, dist_to_ring, p, random_region, rect, rng};
use rand::Rng;

fn single(r: Ring) -> MergedRegion {
    MergedRegion {
        boundary: r,
        member_cells: vec![0],
    }
}

fn spacing(d: f64, mode: FirstLineMode) -> SpacingSpec {
    SpacingSpec::from_distance(d, mode).unwrap()
}

#[test]
fn rectangle_waypoints() {
    let path = generate_zigzag(&single(rect(0., 0., 4., 1.)), &spacing(0.25, FirstLineMode::PaperRule)).unwrap();
    let expect = [p(0., 0.25), p(4., 0.25), p(4., 0.5), p(0., 0.5), p(0., 0.75), p(4., 0.75)];
    assert_eq!(path.waypoints.len(), expect.len());
    for (a, b) in path.waypoints.iter().zip(expect) {
        assert!(a.distance(b) <= 1e-9);
    }
}

#[test]
fn wider_spacing_than_region_is_empty() {
    let r = single(rect(0., 0., 5., 1.));
    assert_eq!(generate_zigzag(&r, &spacing(1.5, FirstLineMode::PaperRule)), Err(PathError::EmptyPath));
}

#[test]
fn alternation_and_boundary_waypoints() {
    let mut rg = rng(41);
    for i in 0..100 {
        let roi = random_region(&mut rg, 50.0, i % 4);
        let f = region_to_frame(&roi, &SweepFrame::from_sweep_angle(rg.gen_range(0.0..180.0)));
        let cells = partition_cells_in_frame(&f, &find_events_in_frame(&f).unwrap()).unwrap();
        let merged = merge_components(&build_adjacency(&cells), &cells).unwrap();
        let mode = if i % 2 == 0 { FirstLineMode::PaperRule } else { FirstLineMode::Centered };
        for m in &merged {
            let path = match generate_zigzag(m, &spacing(1.5, mode)) {
                Ok(p) => p,
                Err(PathError::EmptyPath) => continue,
                Err(e) => panic!("{e}"),
            };
            let legs: Vec<(Point2D, Point2D)> = path.legs().collect();
            assert_eq!(legs.len(), path.line_count);
            for w in legs.windows(2) {
                assert!((w[0].1 - w[0].0).dot(w[1].1 - w[1].0) < 0.0);
            }
            let tol = 1e-6 * m.boundary.bbox().diagonal();
            for q in &path.waypoints {
                assert!(dist_to_ring(&m.boundary, *q) <= tol);
            }
        }
    }
}

#[test]
fn frame_lines_match_the_line_family() {
    let d = 0.7;
    for m in [0.0f64, 1.0, -2.0] {
        let frame = SweepFrame::from_sweep_angle(m.atan().to_degrees());
        let region = single(rect(-10., 0., 10., 6.));
        let path = generate_zigzag(&region, &spacing(d, FirstLineMode::PaperRule)).unwrap();
        for (n, (a, b)) in path.legs().enumerate() {
            let n = (n + 1) as f64;
            for q in [frame.to_world(&a), frame.to_world(&b)] {
                let y = m * q.x + n * d * (m * m + 1.0).sqrt();
                assert!((q.y - y).abs() < 1e-9, "m={m} n={n}: {} vs {y}", q.y);
            }
        }
        for n in 1..=5 {
            match line_family_world(&spacing(d, FirstLineMode::PaperRule), &frame, n) {
                WorldLine::Sloped { slope, intercept } => {
                    assert!((slope - m).abs() < 1e-12);
                    assert!((intercept - n as f64 * d * (m * m + 1.0).sqrt()).abs() < 1e-12);
                }
                WorldLine::Vertical { .. } => panic!("m={m} is not vertical"),
            }
        }
    }
}

#[test]
fn frame_round_trip() {
    let mut r = rng(42);
    for _ in 0..100 {
        let f = SweepFrame::from_sweep_angle(r.gen_range(-360.0..360.0));
        let q = p(r.gen_range(-1e3..1e3), r.gen_range(-1e3..1e3));
        assert!(f.to_world(&f.to_frame(&q)).distance(q) <= 1e-9 * 2e3);
    }
}

#[test]
fn side_by_side_paths_get_one_straight_transition() {
    let roi = RegionOfInterest::new(rect(0., 0., 9., 1.), vec![]).unwrap();
    let s = spacing(0.25, FirstLineMode::PaperRule);
    let a = generate_zigzag(&single(rect(0., 0., 4., 1.)), &s).unwrap();
    let b = generate_zigzag(&single(rect(5., 0., 9., 1.)), &s).unwrap();
    let plan = link_paths(vec![b, a], &roi, SweepFrame::from_sweep_angle(0.0), s, 0.0).unwrap();
    assert_eq!(plan.transitions.len(), 1);
    let t = &plan.transitions[0];
    assert!(t.is_straight());
    // The left path starts first and ends at (4, 0.75); the right path's
    // start (5, 0.25) is nearer than its end (9, 0.75).
    assert_eq!(plan.paths[0].first(), p(0., 0.25));
    assert_eq!(t.waypoints, vec![p(4., 0.75), p(5., 0.25)]);
}

#[test]
fn transition_detours_around_hole() {
    let roi = RegionOfInterest::new(rect(0., 0., 10., 10.), vec![rect(4., 4., 6., 6.)]).unwrap();
    let s = spacing(1.0, FirstLineMode::PaperRule);
    // One line each, on either side of the hole at mid height.
    let a = generate_zigzag(&single(rect(0., 4.5, 3., 5.5)), &s.with_mode(FirstLineMode::Centered)).unwrap();
    let b = generate_zigzag(&single(rect(7., 4.5, 10., 5.5)), &s.with_mode(FirstLineMode::Centered)).unwrap();
    let plan = link_paths(vec![a, b], &roi, SweepFrame::from_sweep_angle(0.0), s, 0.0).unwrap();
    let t = &plan.transitions[0];
    assert!(t.waypoints.len() > 2);
    let (from, to) = (t.waypoints[0], *t.waypoints.last().unwrap());
    assert_eq!((from, to), (p(3., 5.), p(7., 5.)));
    let expect = box_detour_length(from, to, p(4., 4.), p(6., 6.));
    assert!((t.length() - expect).abs() < 1e-9, "{} vs {expect}", t.length());
}

#[test]
fn quarter_turn_back_to_world() {
    let roi = RegionOfInterest::new(rect(0., 0., 2., 1.), vec![]).unwrap();
    let s = spacing(0.5, FirstLineMode::Centered);
    let path = generate_zigzag(&single(roi.outer().clone()), &s).unwrap();
    let plan = link_paths(vec![path], &roi, SweepFrame::from_sweep_angle(90.0), s, 0.0).unwrap();
    let world = to_world(&plan);
    assert_eq!(world.space, CoordinateSpace::World);
    // Frame (x, y) is world (-y, x) under a quarter turn.
    for (f, w) in plan.paths[0].waypoints.iter().zip(&world.paths[0].waypoints) {
        assert!(w.distance(p(-f.y, f.x)) < 1e-12);
    }
    assert_eq!(to_world(&world), world);
}
