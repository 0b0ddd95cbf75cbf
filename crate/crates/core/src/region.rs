//! Regions of interest: one outer boundary with zero or more exclusion-zone
//! holes, either given explicitly or recovered from a flat set of chains by
//! containment parity.

use thiserror::Error;

use crate::geom::{BoundingBox, Containment, Orientation, Point2D, Ring, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("chain set is empty")]
    Empty,
    #[error("chains {0} and {1} intersect or touch")]
    ChainsIntersect(usize, usize),
    #[error("chain {inner} is partly inside and partly outside chain {outer}")]
    AmbiguousNesting { inner: usize, outer: usize },
    #[error("hole {0} is not strictly inside the outer boundary")]
    HoleOutsideOuter(usize),
    #[error("holes {0} and {1} overlap, touch or nest")]
    HolesOverlap(usize, usize),
}

/// Unordered closed chains as read from input, before hole identification.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSet {
    chains: Vec<Ring>,
}

impl ChainSet {
    /// Rejects any pair of chains whose boundaries cross or touch.
    pub fn new(chains: Vec<Ring>) -> Result<Self, RegionError> {
        if chains.is_empty() {
            return Err(RegionError::Empty);
        }
        let eps = set_tolerance(&chains).point;
        for i in 0..chains.len() {
            for j in i + 1..chains.len() {
                if chains[i].boundary_meets(&chains[j], eps) {
                    return Err(RegionError::ChainsIntersect(i, j));
                }
            }
        }
        Ok(ChainSet { chains })
    }

    pub fn chains(&self) -> &[Ring] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn bbox(&self) -> BoundingBox {
        bbox_of(&self.chains)
    }
}

fn bbox_of(rings: &[Ring]) -> BoundingBox {
    rings
        .iter()
        .map(Ring::bbox)
        .reduce(|a, b| a.union(&b))
        .expect("at least one ring")
}

fn set_tolerance(rings: &[Ring]) -> Tolerance {
    Tolerance::for_bbox(&bbox_of(rings))
}

/// A survey region: counter-clockwise outer boundary and clockwise holes.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionOfInterest {
    outer: Ring,
    holes: Vec<Ring>,
    nesting_depth: usize,
}

impl RegionOfInterest {
    /// Explicit outer + holes. Orientations are normalized; holes must be
    /// strictly inside the outer ring and pairwise disjoint.
    pub fn new(outer: Ring, holes: Vec<Ring>) -> Result<Self, RegionError> {
        Self::with_depth(outer, holes, 0)
    }

    pub(crate) fn with_depth(
        outer: Ring,
        holes: Vec<Ring>,
        nesting_depth: usize,
    ) -> Result<Self, RegionError> {
        let outer = outer.oriented(Orientation::Ccw);
        let holes: Vec<Ring> = holes
            .into_iter()
            .map(|h| h.oriented(Orientation::Cw))
            .collect();
        let mut all = vec![outer.clone()];
        all.extend(holes.iter().cloned());
        let eps = set_tolerance(&all).point;
        for (i, h) in holes.iter().enumerate() {
            let strictly_inside = h
                .vertices()
                .iter()
                .all(|p| outer.classify_point(*p, eps) == Containment::Inside);
            if !strictly_inside || h.boundary_meets(&outer, eps) {
                return Err(RegionError::HoleOutsideOuter(i));
            }
        }
        for i in 0..holes.len() {
            for j in i + 1..holes.len() {
                let (a, b) = (&holes[i], &holes[j]);
                let nested = a.classify_point(b.vertex(0), eps) != Containment::Outside
                    || b.classify_point(a.vertex(0), eps) != Containment::Outside;
                if nested || a.boundary_meets(b, eps) {
                    return Err(RegionError::HolesOverlap(i, j));
                }
            }
        }
        Ok(RegionOfInterest {
            outer,
            holes,
            nesting_depth,
        })
    }

    /// Builds without validation; callers guarantee the invariants.
    pub(crate) fn from_parts(outer: Ring, holes: Vec<Ring>, nesting_depth: usize) -> Self {
        RegionOfInterest {
            outer,
            holes,
            nesting_depth,
        }
    }

    pub fn outer(&self) -> &Ring {
        &self.outer
    }

    pub fn holes(&self) -> &[Ring] {
        &self.holes
    }

    pub fn nesting_depth(&self) -> usize {
        self.nesting_depth
    }

    /// Outer ring first, then holes.
    pub fn rings(&self) -> impl Iterator<Item = &Ring> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn bbox(&self) -> BoundingBox {
        self.outer.bbox()
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::for_bbox(&self.bbox())
    }

    /// Outer area minus hole areas.
    pub fn area(&self) -> f64 {
        self.outer.area() - self.holes.iter().map(Ring::area).sum::<f64>()
    }

    pub fn contains(&self, p: Point2D) -> Containment {
        let eps = self.tolerance().point;
        match self.outer.classify_point(p, eps) {
            Containment::Outside => return Containment::Outside,
            Containment::OnBoundary => return Containment::OnBoundary,
            Containment::Inside => {}
        }
        for h in &self.holes {
            match h.classify_point(p, eps) {
                Containment::Inside => return Containment::Outside,
                Containment::OnBoundary => return Containment::OnBoundary,
                Containment::Outside => {}
            }
        }
        Containment::Inside
    }
}

/// `m[i][j]` is true iff chain `i` lies strictly inside chain `j`.
pub fn containment_matrix(cs: &ChainSet) -> Result<Vec<Vec<bool>>, RegionError> {
    let chains = cs.chains();
    let n = chains.len();
    let eps = set_tolerance(chains).point;
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut inside = 0usize;
            let mut other = 0usize;
            for p in chains[i].vertices() {
                match chains[j].classify_point(*p, eps) {
                    Containment::Inside => inside += 1,
                    _ => other += 1,
                }
            }
            if inside > 0 && other > 0 {
                return Err(RegionError::AmbiguousNesting { inner: i, outer: j });
            }
            m[i][j] = other == 0;
        }
    }
    Ok(m)
}

/// Splits chains into regions by nesting parity: even depth chains are outer
/// boundaries, odd depth chains are holes of their immediate container.
pub fn classify_chains(cs: &ChainSet) -> Result<Vec<RegionOfInterest>, RegionError> {
    let m = containment_matrix(cs)?;
    let chains = cs.chains();
    let n = chains.len();
    let depth: Vec<usize> = (0..n).map(|i| m[i].iter().filter(|&&b| b).count()).collect();

    let mut holes_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        if depth[i] % 2 == 1 {
            let parent = (0..n)
                .find(|&j| m[i][j] && depth[j] + 1 == depth[i])
                .expect("odd-depth chain has an immediate container");
            holes_of[parent].push(i);
        }
    }

    let mut rois = Vec::new();
    for i in (0..n).filter(|&i| depth[i].is_multiple_of(2)) {
        let outer = chains[i].oriented(Orientation::Ccw);
        let mut holes: Vec<Ring> = holes_of[i]
            .iter()
            .map(|&h| chains[h].oriented(Orientation::Cw))
            .collect();
        holes.sort_by(|a, b| least_vertex(a).lex_cmp(&least_vertex(b)));
        rois.push(RegionOfInterest::from_parts(outer, holes, depth[i]));
    }
    rois.sort_by(|a, b| least_vertex(a.outer()).lex_cmp(&least_vertex(b.outer())));
    Ok(rois)
}

fn least_vertex(r: &Ring) -> Point2D {
    *r.vertices()
        .iter()
        .min_by(|a, b| a.lex_cmp(b))
        .expect("ring has vertices")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(cx: f64, cy: f64, side: f64) -> Ring {
        let h = side / 2.0;
        Ring::new(vec![
            Point2D::new(cx - h, cy - h),
            Point2D::new(cx + h, cy - h),
            Point2D::new(cx + h, cy + h),
            Point2D::new(cx - h, cy + h),
        ])
        .unwrap()
    }

    #[test]
    fn concentric_pair_matrix() {
        let cs = ChainSet::new(vec![square(5., 5., 10.), square(5., 5., 2.)]).unwrap();
        let m = containment_matrix(&cs).unwrap();
        assert_eq!(m, vec![vec![false, false], vec![true, false]]);
    }

    #[test]
    fn disjoint_squares() {
        let cs = ChainSet::new(vec![square(0., 0., 1.), square(5., 0., 1.)]).unwrap();
        let m = containment_matrix(&cs).unwrap();
        assert!(m.iter().flatten().all(|b| !b));
        let rois = classify_chains(&cs).unwrap();
        assert_eq!(rois.len(), 2);
        assert!(rois.iter().all(|r| r.holes().is_empty()));
    }

    #[test]
    fn three_level_tower() {
        let cs = ChainSet::new(vec![
            square(5., 5., 2.),
            square(5., 5., 10.),
            square(5., 5., 6.),
        ])
        .unwrap();
        let m = containment_matrix(&cs).unwrap();
        assert!(m[0][1] && m[0][2] && m[2][1]);
        assert!(!m[1][0] && !m[1][2] && !m[2][0]);
        let rois = classify_chains(&cs).unwrap();
        assert_eq!(rois.len(), 2);
        let big = rois.iter().find(|r| (r.outer().area() - 100.0).abs() < 1e-9).unwrap();
        assert_eq!(big.holes().len(), 1);
        assert!((big.holes()[0].area() - 36.0).abs() < 1e-9);
        let island = rois.iter().find(|r| (r.outer().area() - 4.0).abs() < 1e-9).unwrap();
        assert!(island.holes().is_empty());
        assert_eq!(island.nesting_depth(), 2);
    }

    #[test]
    fn orientation_normalized() {
        let cs = ChainSet::new(vec![square(5., 5., 10.).reversed(), square(5., 5., 2.)]).unwrap();
        let rois = classify_chains(&cs).unwrap();
        assert!(rois[0].outer().signed_area() > 0.0);
        assert!(rois[0].holes()[0].signed_area() < 0.0);
    }

    #[test]
    fn crossing_and_touching_chains_rejected() {
        assert!(matches!(
            ChainSet::new(vec![square(0., 0., 2.), square(1., 1., 2.)]),
            Err(RegionError::ChainsIntersect(0, 1))
        ));
        // Corner-to-corner pinch.
        assert!(matches!(
            ChainSet::new(vec![square(0., 0., 2.), square(2., 2., 2.)]),
            Err(RegionError::ChainsIntersect(0, 1))
        ));
    }

    #[test]
    fn explicit_mode_validation() {
        let roi = RegionOfInterest::new(square(5., 5., 10.), vec![square(5., 5., 2.)]).unwrap();
        assert_eq!(roi.outer().orientation(), Orientation::Ccw);
        assert_eq!(roi.holes()[0].orientation(), Orientation::Cw);
        assert!((roi.area() - 96.0).abs() < 1e-12);
        assert_eq!(
            RegionOfInterest::new(square(5., 5., 10.), vec![square(12., 5., 2.)]).unwrap_err(),
            RegionError::HoleOutsideOuter(0)
        );
        assert_eq!(
            RegionOfInterest::new(
                square(5., 5., 10.),
                vec![square(4., 5., 2.), square(5., 5., 2.)]
            )
            .unwrap_err(),
            RegionError::HolesOverlap(0, 1)
        );
        assert_eq!(
            roi.contains(Point2D::new(5., 5.)),
            Containment::Outside
        );
        assert_eq!(roi.contains(Point2D::new(1., 1.)), Containment::Inside);
        assert_eq!(roi.contains(Point2D::new(4., 5.)), Containment::OnBoundary);
    }
}
