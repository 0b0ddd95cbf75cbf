//! Recombining monotone cells.
//!
//! Cells that share a cut are adjacent. A depth-first traversal grows one
//! region at a time from the lowest-index unvisited cell and absorbs a
//! neighbour only while the union stays monotone with respect to the sweep;
//! plain connected components would glue the concave region back together.

use thiserror::Error;

use crate::decompose::{monotone_union, stack_ring, tolerance_of, Cell};
use crate::geom::{Point2D, Ring, Segment};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MergeError {
    #[error("union of cells {0:?} is not a simple ring: {1}")]
    NonSimpleUnion(Vec<usize>, String),
}

/// Cell adjacency over shared cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyGraph {
    nodes: usize,
    /// `(i, j, shared)` with `i < j`, sorted.
    edges: Vec<(usize, usize, Segment)>,
}

impl AdjacencyGraph {
    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize, Segment)] {
        &self.edges
    }

    /// Neighbours of `i` in ascending order.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b, _)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges.iter().any(|e| e.0 == a && e.1 == b)
    }
}

/// Union of adjacent cells, in frame coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedRegion {
    pub boundary: Ring,
    /// Indices into the cell list, in the order they were absorbed.
    pub member_cells: Vec<usize>,
}

impl MergedRegion {
    pub fn area(&self) -> f64 {
        self.boundary.area()
    }
}

fn same_point(a: Point2D, b: Point2D, eps: f64) -> bool {
    a.distance(b) <= eps
}

fn same_segment(s: &Segment, t: &Segment, eps: f64) -> bool {
    (same_point(s.a, t.a, eps) && same_point(s.b, t.b, eps))
        || (same_point(s.a, t.b, eps) && same_point(s.b, t.a, eps))
}

fn has_vertex(r: &Ring, p: Point2D, eps: f64) -> bool {
    r.vertices().iter().any(|&v| same_point(v, p, eps))
}

/// Two cells are adjacent when a cut of one is also a cut of the other and
/// both of its end points are vertices of both boundaries.
pub fn build_adjacency(cells: &[Cell]) -> AdjacencyGraph {
    let mut edges = Vec::new();
    if cells.is_empty() {
        return AdjacencyGraph { nodes: 0, edges };
    }
    let rings: Vec<&Ring> = cells.iter().map(|c| &c.boundary).collect();
    let eps = tolerance_of(&rings).point;
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let shared = cells[i].partition_edges.iter().find(|s| {
                cells[j].partition_edges.iter().any(|t| same_segment(s, t, eps))
                    && [s.a, s.b].iter().all(|&p| {
                        has_vertex(&cells[i].boundary, p, eps)
                            && has_vertex(&cells[j].boundary, p, eps)
                    })
            });
            if let Some(s) = shared {
                edges.push((i, j, *s));
            }
        }
    }
    AdjacencyGraph {
        nodes: cells.len(),
        edges,
    }
}

/// Constrained depth-first merge. Every cell ends up in exactly one region;
/// regions come out in traversal order.
pub fn merge_components(
    graph: &AdjacencyGraph,
    cells: &[Cell],
) -> Result<Vec<MergedRegion>, MergeError> {
    if cells.is_empty() {
        return Ok(Vec::new());
    }
    let all: Vec<&Ring> = cells.iter().map(|c| &c.boundary).collect();
    let eps = tolerance_of(&all).point;
    let mut visited = vec![false; cells.len()];
    let mut regions = Vec::new();

    for seed in 0..cells.len() {
        if visited[seed] {
            continue;
        }
        visited[seed] = true;
        let mut members = vec![seed];
        let mut stack = vec![seed];
        while let Some(&top) = stack.last() {
            let next = graph.neighbors(top).into_iter().find(|&nb| {
                if visited[nb] {
                    return false;
                }
                let mut trial: Vec<&Ring> = members.iter().map(|&m| &cells[m].boundary).collect();
                trial.push(&cells[nb].boundary);
                monotone_union(&trial, eps).is_some()
            });
            match next {
                Some(nb) => {
                    visited[nb] = true;
                    members.push(nb);
                    stack.push(nb);
                }
                None => {
                    stack.pop();
                }
            }
        }
        regions.push(assemble(&members, graph, cells, eps)?);
    }
    Ok(regions)
}

fn assemble(
    members: &[usize],
    graph: &AdjacencyGraph,
    cells: &[Cell],
    eps: f64,
) -> Result<MergedRegion, MergeError> {
    let rings: Vec<&Ring> = members.iter().map(|&m| &cells[m].boundary).collect();
    let fail = |msg: String| MergeError::NonSimpleUnion(members.to_vec(), msg);
    let traps = monotone_union(&rings, eps).ok_or_else(|| fail("not monotone".into()))?;

    // Cuts towards cells outside the region stay on the boundary; keep their
    // end points so the neighbours still see them as vertices.
    let internal = |s: &Segment| {
        graph.edges().iter().any(|(i, j, t)| {
            members.contains(i) && members.contains(j) && same_segment(s, t, eps)
        })
    };
    let pins: Vec<Point2D> = members
        .iter()
        .flat_map(|&m| cells[m].partition_edges.iter())
        .filter(|s| !internal(s))
        .flat_map(|s| [s.a, s.b])
        .collect();
    let boundary = stack_ring(&traps, &pins, eps).map_err(|e| fail(e.to_string()))?;
    Ok(MergedRegion {
        boundary,
        member_cells: members.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{find_events, is_monotone, partition_cells, SweepFrame};
    use crate::region::RegionOfInterest;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    fn cells_of(roi: &RegionOfInterest) -> Vec<Cell> {
        let f = SweepFrame::from_sweep_angle(0.0);
        partition_cells(roi, &find_events(roi, &f).unwrap(), &f).unwrap()
    }

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Ring {
        Ring::new(vec![p(x0, y0), p(x1, y0), p(x1, y1), p(x0, y1)]).unwrap()
    }

    #[test]
    fn u_polygon() {
        let roi = RegionOfInterest::new(
            Ring::new(vec![
                p(0., 0.),
                p(3., 0.),
                p(3., 3.),
                p(2., 3.),
                p(1.5, 1.),
                p(1., 3.),
                p(0., 3.),
            ])
            .unwrap(),
            vec![],
        )
        .unwrap();
        let cells = cells_of(&roi);
        let g = build_adjacency(&cells);
        assert_eq!(g.neighbors(2), vec![0, 1]);
        assert!(!g.contains_edge(0, 1));
        let merged = merge_components(&g, &cells).unwrap();
        assert_eq!(merged.len(), 2);
        assert_eq!(merged[0].member_cells, vec![0, 2]);
        assert_eq!(merged[1].member_cells, vec![1]);
        assert!(merged.iter().all(|m| is_monotone(&m.boundary)));
        let total: f64 = merged.iter().map(MergedRegion::area).sum();
        assert!((total - roi.area()).abs() < 1e-12);
    }

    #[test]
    fn square_with_hole_c_shape() {
        let roi = RegionOfInterest::new(rect(0., 0., 10., 10.), vec![rect(4., 4., 6., 6.)]).unwrap();
        let cells = cells_of(&roi);
        let g = build_adjacency(&cells);
        assert_eq!(g.edges().len(), 4);
        for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert!(g.contains_edge(i, j));
        }
        let merged = merge_components(&g, &cells).unwrap();
        assert_eq!(merged.len(), 2);
        assert_eq!(merged[0].member_cells, vec![0, 1, 3]);
        assert_eq!(merged[1].member_cells, vec![2]);
        assert!((merged[0].area() - 88.0).abs() < 1e-12);
        assert!(is_monotone(&merged[0].boundary));
    }

    #[test]
    fn convex_is_one_region() {
        let roi = RegionOfInterest::new(rect(0., 0., 3., 2.), vec![]).unwrap();
        let cells = cells_of(&roi);
        let merged = merge_components(&build_adjacency(&cells), &cells).unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].boundary, cells[0].boundary);
    }

    #[test]
    fn single_point_contact_is_not_adjacent() {
        let a = Cell::new(rect(0., 0., 1., 1.), vec![]);
        let b = Cell::new(rect(1., 1., 2., 2.), vec![]);
        assert!(build_adjacency(&[a, b]).edges().is_empty());
    }
}
