//! Writing plans as GeoJSON, CSV and SVG, and reading plan GeoJSON back.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use covplan_core::offset::{build_straight_skeleton, OffsetDirection, StraightSkeleton};
use covplan_core::{BoundingBox, CoveragePlan, Point2D, RegionOfInterest, Ring};
use geojson::{Feature, FeatureCollection, GeoJson, Geometry, JsonObject, Value};
use serde_json::json;

use crate::projection::LocalProjection;
use crate::CliError;

/// One flown polyline, in flight order.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanLine {
    pub kind: LineKind,
    /// Position among lines of the same kind.
    pub index: usize,
    pub plan: usize,
    /// Flight lines in a path; 0 for transitions.
    pub line_count: usize,
    pub points: Vec<Point2D>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Path,
    Transition,
}

impl LineKind {
    fn as_str(self) -> &'static str {
        match self {
            LineKind::Path => "path",
            LineKind::Transition => "transition",
        }
    }
}

/// Paths and transitions of all plans, in the order they are flown.
pub fn flight_lines(plans: &[CoveragePlan]) -> Vec<PlanLine> {
    let mut out = Vec::new();
    let (mut np, mut nt) = (0, 0);
    for (k, plan) in plans.iter().enumerate() {
        for (i, path) in plan.paths.iter().enumerate() {
            if i > 0 {
                out.push(PlanLine {
                    kind: LineKind::Transition,
                    index: nt,
                    plan: k,
                    line_count: 0,
                    points: plan.transitions[i - 1].waypoints.clone(),
                });
                nt += 1;
            }
            out.push(PlanLine {
                kind: LineKind::Path,
                index: np,
                plan: k,
                line_count: path.line_count,
                points: path.waypoints.clone(),
            });
            np += 1;
        }
    }
    out
}

fn position(p: Point2D, proj: Option<&LocalProjection>) -> Vec<f64> {
    match proj {
        Some(pr) => {
            let (lon, lat) = pr.unproject(p);
            vec![lon, lat]
        }
        None => vec![p.x, p.y],
    }
}

pub fn plan_geojson(plans: &[CoveragePlan], proj: Option<&LocalProjection>) -> String {
    let features = flight_lines(plans)
        .into_iter()
        .map(|line| {
            let mut props = JsonObject::new();
            props.insert("kind".into(), json!(line.kind.as_str()));
            props.insert("index".into(), json!(line.index));
            props.insert("plan".into(), json!(line.plan));
            if line.kind == LineKind::Path {
                props.insert("line_count".into(), json!(line.line_count));
            }
            let coords = line.points.iter().map(|&p| position(p, proj)).collect();
            Feature {
                bbox: None,
                geometry: Some(Geometry::new(Value::LineString(coords))),
                id: None,
                properties: Some(props),
                foreign_members: None,
            }
        })
        .collect();
    let fc = FeatureCollection {
        bbox: None,
        features,
        foreign_members: None,
    };
    let mut s = GeoJson::FeatureCollection(fc).to_string();
    s.push('\n');
    s
}

pub fn plan_csv(plans: &[CoveragePlan], proj: Option<&LocalProjection>) -> String {
    let mut s = String::from("path_index,waypoint_index,x,y");
    if proj.is_some() {
        s.push_str(",lon,lat");
    }
    s.push('\n');
    for line in flight_lines(plans) {
        if line.kind != LineKind::Path {
            continue;
        }
        for (i, p) in line.points.iter().enumerate() {
            let _ = write!(s, "{},{},{},{}", line.index, i, p.x, p.y);
            if let Some(pr) = proj {
                let (lon, lat) = pr.unproject(*p);
                let _ = write!(s, ",{lon},{lat}");
            }
            s.push('\n');
        }
    }
    s
}

struct Viewport {
    min: Point2D,
    scale: f64,
    off: (f64, f64),
}

const VIEW: f64 = 1000.0;

impl Viewport {
    fn fit(bb: &BoundingBox) -> Self {
        let margin = 0.05 * VIEW;
        let span = bb.width().max(bb.height()).max(f64::MIN_POSITIVE);
        let scale = (VIEW - 2.0 * margin) / span;
        Viewport {
            min: bb.min,
            scale,
            off: (
                0.5 * (VIEW - bb.width() * scale),
                0.5 * (VIEW - bb.height() * scale),
            ),
        }
    }

    /// Screen coordinates, y pointing down.
    fn map(&self, p: Point2D) -> (f64, f64) {
        (
            self.off.0 + (p.x - self.min.x) * self.scale,
            VIEW - (self.off.1 + (p.y - self.min.y) * self.scale),
        )
    }

    fn points(&self, pts: &[Point2D]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn plan_svg(plans: &[CoveragePlan]) -> String {
    let mut sources: Vec<&RegionOfInterest> = Vec::new();
    for p in plans {
        if !sources.contains(&&p.source) {
            sources.push(&p.source);
        }
    }
    let bb = sources
        .iter()
        .map(|r| r.bbox())
        .reduce(|a, b| a.union(&b))
        .unwrap_or(BoundingBox {
            min: Point2D::default(),
            max: Point2D { x: 1.0, y: 1.0 },
        });
    let vp = Viewport::fit(&bb);
    let poly = |r: &Ring, style: &str| {
        format!("  <polygon points=\"{}\" {style}/>\n", vp.points(r.vertices()))
    };
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{VIEW}\" height=\"{VIEW}\" viewBox=\"0 0 {VIEW} {VIEW}\">\n"
    );
    s.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for src in &sources {
        s.push_str(&poly(src.outer(), "fill=\"#f3f7ee\" stroke=\"#333\" stroke-width=\"2\""));
        for h in src.holes() {
            s.push_str(&poly(h, "fill=\"#999\" stroke=\"#333\" stroke-width=\"1.5\""));
        }
    }
    for p in plans {
        s.push_str(&poly(
            p.free_space.outer(),
            "fill=\"none\" stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"4 3\"",
        ));
        for h in p.free_space.holes() {
            s.push_str(&poly(h, "fill=\"#e06666\" fill-opacity=\"0.35\" stroke=\"#c00\" stroke-width=\"1\""));
        }
    }
    for line in flight_lines(plans) {
        let style = match line.kind {
            LineKind::Path => "fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\"",
            LineKind::Transition => {
                "fill=\"none\" stroke=\"#e69500\" stroke-width=\"2\" stroke-dasharray=\"8 5\""
            }
        };
        let _ = writeln!(s, "  <polyline points=\"{}\" {style}/>", vp.points(&line.points));
    }
    s.push_str("</svg>\n");
    s
}

fn write(path: PathBuf, content: &str) -> Result<PathBuf, CliError> {
    std::fs::write(&path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

/// Writes `<prefix>.geojson`, `<prefix>.csv` and `<prefix>.svg`.
pub fn emit_outputs(
    plans: &[CoveragePlan],
    proj: Option<&LocalProjection>,
    prefix: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    Ok(vec![
        write(with_suffix(prefix, ".geojson"), &plan_geojson(plans, proj))?,
        write(with_suffix(prefix, ".csv"), &plan_csv(plans, proj))?,
        write(with_suffix(prefix, ".svg"), &plan_svg(plans))?,
    ])
}

/// Reads a plan written by [`plan_geojson`]. Coordinates are projected back
/// through `proj` when given.
pub fn read_plan_geojson(text: &str, proj: Option<&LocalProjection>) -> Result<Vec<PlanLine>, CliError> {
    let gj: GeoJson = text.parse().map_err(|e: geojson::Error| CliError::Parse(e.to_string()))?;
    let GeoJson::FeatureCollection(fc) = gj else {
        return Err(CliError::Parse("expected a feature collection".into()));
    };
    let bad = |m: &str| CliError::Parse(format!("plan feature: {m}"));
    fc.features
        .iter()
        .map(|f| {
            let props = f.properties.as_ref().ok_or_else(|| bad("no properties"))?;
            let num = |k: &str| props.get(k).and_then(|v| v.as_u64()).map(|v| v as usize);
            let kind = match props.get("kind").and_then(|v| v.as_str()) {
                Some("path") => LineKind::Path,
                Some("transition") => LineKind::Transition,
                _ => return Err(bad("unknown kind")),
            };
            let Some(Geometry {
                value: Value::LineString(coords),
                ..
            }) = &f.geometry
            else {
                return Err(bad("geometry is not a line string"));
            };
            let points = coords
                .iter()
                .map(|c| match (c.as_slice(), proj) {
                    ([x, y, ..], Some(pr)) => Ok(pr.project(*x, *y)),
                    ([x, y, ..], None) => Ok(Point2D { x: *x, y: *y }),
                    _ => Err(bad("short position")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PlanLine {
                kind,
                index: num("index").ok_or_else(|| bad("no index"))?,
                plan: num("plan").unwrap_or(0),
                line_count: num("line_count").unwrap_or(0),
                points,
            })
        })
        .collect()
}

fn skeleton_json(name: &str, sk: &StraightSkeleton) -> serde_json::Value {
    json!({
        "ring": name,
        "direction": match sk.direction {
            OffsetDirection::Inward => "inward",
            OffsetDirection::Outward => "outward",
        },
        "arcs": sk.arcs.iter().map(|a| json!({
            "from": [a.segment.a.x, a.segment.a.y],
            "to": [a.segment.b.x, a.segment.b.y],
            "start_time": a.start_time,
            "end_time": a.end_time,
        })).collect::<Vec<_>>(),
        "events": sk.events.iter().map(|e| json!({
            "time": e.time,
            "kind": format!("{:?}", e.kind),
            "at": [e.location.x, e.location.y],
        })).collect::<Vec<_>>(),
    })
}

/// Straight skeletons of every ring: outers shrink until they vanish, holes
/// grow to `safe_distance`.
pub fn skeleton_dump(rois: &[RegionOfInterest], safe_distance: f64) -> Result<String, CliError> {
    let mut rings = Vec::new();
    let geo = |e: covplan_core::OffsetError| CliError::Pipeline {
        stage: "offset",
        geometric: true,
        message: e.to_string(),
    };
    for (k, roi) in rois.iter().enumerate() {
        let sk = build_straight_skeleton(roi.outer(), OffsetDirection::Inward, f64::INFINITY).map_err(geo)?;
        rings.push(skeleton_json(&format!("region{k}/outer"), &sk));
        for (h, hole) in roi.holes().iter().enumerate() {
            let sk = build_straight_skeleton(hole, OffsetDirection::Outward, safe_distance).map_err(geo)?;
            rings.push(skeleton_json(&format!("region{k}/hole{h}"), &sk));
        }
    }
    Ok(format!("{}\n", json!({ "skeletons": rings })))
}
