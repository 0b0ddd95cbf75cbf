//! Reading survey regions from GeoJSON or CSV.

use std::path::Path;

use covplan_core::{BoundingBox, ChainSet, Point2D, RegionInput, RegionOfInterest, Ring, Tolerance};
use geojson::{GeoJson, Value};

use crate::projection::LocalProjection;
use crate::CliError;

/// How to read input coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoordMode {
    /// GeoJSON whose coordinates all look like longitude/latitude within a
    /// one-degree window is geographic; everything else is planar.
    #[default]
    Auto,
    Planar,
    Geographic,
}

#[derive(Debug, Clone)]
pub struct ParsedRegion {
    pub input: RegionInput,
    /// Set when the input was geographic; planar coordinates are metres in
    /// this projection.
    pub projection: Option<LocalProjection>,
}

/// Rings as read, before projection.
enum Raw {
    /// Each polygon is its exterior ring followed by its interior rings.
    Polygons(Vec<Vec<Vec<[f64; 2]>>>),
    Chains(Vec<Vec<[f64; 2]>>),
}

pub fn parse_region(
    path: &Path,
    mode: CoordMode,
    origin: Option<(f64, f64)>,
) -> Result<ParsedRegion, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let is_json = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("geojson") || e.eq_ignore_ascii_case("json"))
        .unwrap_or(false)
        || text.trim_start().starts_with('{');
    let raw = if is_json {
        parse_geojson(&text)?
    } else {
        Raw::Chains(parse_csv(&text)?)
    };
    let geographic = match mode {
        CoordMode::Planar => false,
        CoordMode::Geographic => true,
        CoordMode::Auto => is_json && looks_geographic(&raw),
    };
    let projection = geographic.then(|| {
        let (lon, lat) = origin.unwrap_or_else(|| centroid(&raw));
        LocalProjection::new(lon, lat)
    });
    let to_point = |c: [f64; 2]| -> Result<Point2D, CliError> {
        let p = match &projection {
            Some(pr) => pr.project(c[0], c[1]),
            None => Point2D { x: c[0], y: c[1] },
        };
        Point2D::try_new(p.x, p.y).map_err(|e| CliError::Parse(e.to_string()))
    };
    let build = |k: usize, coords: &[[f64; 2]]| -> Result<Vec<Point2D>, CliError> {
        coords.iter().map(|&c| to_point(c)).collect::<Result<Vec<_>, _>>().and_then(|pts| close_ring(k, pts))
    };

    let input = match raw {
        Raw::Polygons(polys) => {
            let mut rois = Vec::with_capacity(polys.len());
            let mut k = 0;
            for rings in polys {
                let mut built = Vec::with_capacity(rings.len());
                for r in &rings {
                    built.push(ring(k, build(k, r)?)?);
                    k += 1;
                }
                let outer = built.remove(0);
                rois.push(RegionOfInterest::new(outer, built).map_err(|e| CliError::Region(e.to_string()))?);
            }
            RegionInput::Explicit(rois)
        }
        Raw::Chains(chains) => {
            let mut built = Vec::with_capacity(chains.len());
            for (k, c) in chains.iter().enumerate() {
                built.push(ring(k, build(k, c)?)?);
            }
            RegionInput::Chains(ChainSet::new(built).map_err(|e| CliError::Region(e.to_string()))?)
        }
    };
    Ok(ParsedRegion { input, projection })
}

fn ring(k: usize, pts: Vec<Point2D>) -> Result<Ring, CliError> {
    Ring::new(pts).map_err(|e| CliError::Region(format!("ring {k}: {e}")))
}

/// Drops the repeated closing vertex; a chain whose ends do not meet is an
/// error.
fn close_ring(k: usize, mut pts: Vec<Point2D>) -> Result<Vec<Point2D>, CliError> {
    if pts.len() < 2 {
        return Err(CliError::Parse(format!("ring {k} has {} points", pts.len())));
    }
    let bb = BoundingBox::from_points(&pts).expect("non-empty");
    let eps = Tolerance::for_bbox(&bb).point;
    let gap = pts[0].distance(pts[pts.len() - 1]);
    if gap > eps {
        return Err(CliError::OpenChain { chain: k, gap });
    }
    pts.pop();
    Ok(pts)
}

fn pairs(positions: &[Vec<f64>]) -> Result<Vec<[f64; 2]>, CliError> {
    positions
        .iter()
        .map(|p| match p.as_slice() {
            [x, y, ..] => Ok([*x, *y]),
            _ => Err(CliError::Parse("position with fewer than two coordinates".into())),
        })
        .collect()
}

fn parse_geojson(text: &str) -> Result<Raw, CliError> {
    let gj: GeoJson = text.parse().map_err(|e: geojson::Error| CliError::Parse(e.to_string()))?;
    let polygon = |rings: &Vec<Vec<Vec<f64>>>| -> Result<Vec<Vec<[f64; 2]>>, CliError> {
        rings.iter().map(|r| pairs(r)).collect()
    };
    let explicit = |v: &Value| -> Result<Option<Raw>, CliError> {
        Ok(match v {
            Value::Polygon(rings) => Some(Raw::Polygons(vec![polygon(rings)?])),
            Value::MultiPolygon(polys) => Some(Raw::Polygons(
                polys.iter().map(polygon).collect::<Result<_, _>>()?,
            )),
            _ => None,
        })
    };
    let unsupported = |what: &str| CliError::Parse(format!("unsupported geometry: {what}"));
    match gj {
        GeoJson::Geometry(g) => explicit(&g.value)?.ok_or_else(|| unsupported(g.value.type_name())),
        GeoJson::Feature(f) => {
            let g = f.geometry.ok_or_else(|| CliError::Parse("feature without geometry".into()))?;
            explicit(&g.value)?.ok_or_else(|| unsupported(g.value.type_name()))
        }
        GeoJson::FeatureCollection(fc) => {
            let mut chains = Vec::new();
            for f in &fc.features {
                let Some(g) = &f.geometry else { continue };
                match &g.value {
                    Value::LineString(line) => chains.push(pairs(line)?),
                    Value::MultiLineString(lines) => {
                        for l in lines {
                            chains.push(pairs(l)?);
                        }
                    }
                    Value::Polygon(rings) => chains.extend(polygon(rings)?),
                    Value::MultiPolygon(polys) => {
                        for rings in polys {
                            chains.extend(polygon(rings)?);
                        }
                    }
                    other => return Err(unsupported(other.type_name())),
                }
            }
            if chains.is_empty() {
                return Err(CliError::Parse("feature collection has no rings".into()));
            }
            Ok(Raw::Chains(chains))
        }
    }
}

/// Blocks of `x,y` rows separated by blank lines. Lines starting with `#`
/// are comments.
fn parse_csv(text: &str) -> Result<Vec<Vec<[f64; 2]>>, CliError> {
    let mut chains = Vec::new();
    let mut cur: Vec<[f64; 2]> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !cur.is_empty() {
                chains.push(std::mem::take(&mut cur));
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::Parse(format!("line {}: bad number {s:?}", no + 1)))
        };
        match fields.as_slice() {
            [x, y] => cur.push([parse(x)?, parse(y)?]),
            _ => return Err(CliError::Parse(format!("line {}: expected x,y", no + 1))),
        }
    }
    if !cur.is_empty() {
        chains.push(cur);
    }
    if chains.is_empty() {
        return Err(CliError::Parse("no coordinates".into()));
    }
    Ok(chains)
}

fn all_coords(raw: &Raw) -> Vec<[f64; 2]> {
    match raw {
        Raw::Polygons(ps) => ps.iter().flatten().flatten().copied().collect(),
        Raw::Chains(cs) => cs.iter().flatten().copied().collect(),
    }
}

fn looks_geographic(raw: &Raw) -> bool {
    let c = all_coords(raw);
    let in_range = c
        .iter()
        .all(|p| (-180.0..=180.0).contains(&p[0]) && (-90.0..=90.0).contains(&p[1]));
    let span = |i: usize| {
        let (lo, hi) = c
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[i]), hi.max(p[i])));
        hi - lo
    };
    in_range && span(0) < 1.0 && span(1) < 1.0
}

/// Mean of the distinct vertices (closing repeats excluded).
fn centroid(raw: &Raw) -> (f64, f64) {
    let rings: Vec<&Vec<[f64; 2]>> = match raw {
        Raw::Polygons(ps) => ps.iter().flatten().collect(),
        Raw::Chains(cs) => cs.iter().collect(),
    };
    let mut sum = (0.0, 0.0);
    let mut n = 0.0;
    for r in rings {
        let m = if r.len() > 1 && r[0] == r[r.len() - 1] { r.len() - 1 } else { r.len() };
        for p in &r[..m] {
            sum.0 += p[0];
            sum.1 += p[1];
            n += 1.0;
        }
    }
    (sum.0 / n, sum.1 / n)
}
