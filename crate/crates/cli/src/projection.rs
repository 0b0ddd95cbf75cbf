//! Equirectangular projection onto a local tangent plane.

use covplan_core::Point2D;

pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Maps longitude/latitude in degrees to metres east and north of `origin`.
/// Accurate enough for survey areas a few kilometres across.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalProjection {
    /// (longitude, latitude) in degrees.
    pub origin: (f64, f64),
    pub earth_radius: f64,
}

impl LocalProjection {
    pub fn new(lon: f64, lat: f64) -> Self {
        LocalProjection {
            origin: (lon, lat),
            earth_radius: EARTH_RADIUS_M,
        }
    }

    pub fn project(&self, lon: f64, lat: f64) -> Point2D {
        let (lon0, lat0) = self.origin;
        let r = self.earth_radius;
        Point2D {
            x: r * lat0.to_radians().cos() * (lon - lon0).to_radians(),
            y: r * (lat - lat0).to_radians(),
        }
    }

    /// Inverse of [`LocalProjection::project`], returning (longitude, latitude).
    pub fn unproject(&self, p: Point2D) -> (f64, f64) {
        let (lon0, lat0) = self.origin;
        let r = self.earth_radius;
        (
            lon0 + (p.x / (r * lat0.to_radians().cos())).to_degrees(),
            lat0 + (p.y / r).to_degrees(),
        )
    }
}
