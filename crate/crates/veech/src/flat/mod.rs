//! Flat geometry on a translation surface: Delaunay retriangulation by
//! edge flips with exact in-circle predicates, Voronoi staples, saddle
//! connection enumeration by chart unfolding, and the convex bodies that
//! the Voronoi 2-cells embed onto in the model cone.
//!
//! Voronoi data is always read off the dual Delaunay triangulation. A
//! staple is a non-degenerate Delaunay edge taken with both orientations;
//! edges whose two adjacent triangles are exactly cocircular carry a
//! zero-length dual 1-cell and are excluded.

mod angles;
mod convex;
mod segments;

pub use angles::AngleIndex;
pub use convex::{convex_body, ConvexBody, ConvexBodyError};
pub use segments::{edge_as_connection, enumerate_segments, SaddleConnection};

use crate::exactnum::FieldElement;
use crate::geom::incircle_outside_sign;
use crate::mesh::Mesh;
use crate::surface::TranslationSurface;

/// A Delaunay triangulation of a translation surface.
#[derive(Clone, Debug)]
pub struct Triangulation {
    mesh: Mesh,
    flips: usize,
    angles: AngleIndex,
}

impl Triangulation {
    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn flip_count(&self) -> usize {
        self.flips
    }

    pub fn angles(&self) -> &AngleIndex {
        &self.angles
    }

    /// Exact local Delaunay test for the edge through half-edge `h`:
    /// the unfolded opposite vertex is on or outside the circumcircle.
    pub fn edge_is_delaunay(&self, h: usize) -> bool {
        edge_incircle_sign(&self.mesh, h) >= 0
    }

    /// Is the edge degenerate (adjacent triangles exactly cocircular)?
    pub fn edge_is_degenerate(&self, h: usize) -> bool {
        edge_incircle_sign(&self.mesh, h) == 0
    }
}

fn edge_incircle_sign(mesh: &Mesh, h: usize) -> i32 {
    let (q, r, s) = mesh.unfolded_quad(h);
    incircle_outside_sign(&q, &r, &s)
}

/// Flip until every edge is locally Delaunay. Terminates on every flat
/// surface; the iteration cap only guards against implementation bugs.
pub fn delaunay(surface: &TranslationSurface) -> Triangulation {
    let mut mesh = surface.mesh().clone();
    let mut flips = 0usize;
    let n = mesh.half_edge_count();
    let cap = 400 * n * n + 10_000;
    let mut queue: Vec<usize> = (0..n).filter(|&h| h < mesh.opp(h)).collect();
    while let Some(h) = queue.pop() {
        if edge_incircle_sign(&mesh, h) < 0 {
            debug_assert!(mesh.flippable(h), "non-Delaunay edge must be flippable");
            mesh.flip(h);
            flips += 1;
            assert!(flips < cap, "Delaunay flip loop exceeded its cap");
            let h2 = mesh.opp(h);
            for e in [
                mesh.next(h),
                mesh.next(mesh.next(h)),
                mesh.next(h2),
                mesh.next(mesh.next(h2)),
            ] {
                queue.push(e.min(mesh.opp(e)));
            }
        }
    }
    debug_assert!(mesh.validate().is_ok());
    debug_assert!((0..n)
        .filter(|&h| h < mesh.opp(h))
        .all(|h| edge_incircle_sign(&mesh, h) >= 0));
    let angles = AngleIndex::build(&mesh);
    Triangulation { mesh, flips, angles }
}

/// One staple: a Delaunay edge with both orientations recorded as saddle
/// connections with marked-segment angle data.
#[derive(Clone, Debug)]
pub struct Staple {
    pub forward: SaddleConnection,
    pub backward: SaddleConnection,
}

#[derive(Clone, Debug)]
pub struct StapleSet {
    pub staples: Vec<Staple>,
    /// squared maximal staple length
    pub max_len_sq: FieldElement,
}

impl StapleSet {
    pub fn len(&self) -> usize {
        self.staples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.staples.is_empty()
    }

    /// All oriented staple segments.
    pub fn oriented(&self) -> impl Iterator<Item = &SaddleConnection> {
        self.staples.iter().flat_map(|s| [&s.forward, &s.backward])
    }
}

/// The Voronoi staples of a Delaunay triangulation: one per non-degenerate
/// Delaunay edge.
pub fn voronoi_staples(tri: &Triangulation) -> StapleSet {
    let mesh = &tri.mesh;
    let mut staples = Vec::new();
    let mut max_len_sq = FieldElement::zero(&mesh.spec);
    for h in mesh.edges() {
        if tri.edge_is_degenerate(h) {
            continue;
        }
        let fwd = segments::edge_as_connection(tri, h);
        let bwd = segments::edge_as_connection(tri, mesh.opp(h));
        let l2 = fwd.length_sq.clone();
        if l2.compare(&max_len_sq) == std::cmp::Ordering::Greater {
            max_len_sq = l2;
        }
        staples.push(Staple { forward: fwd, backward: bwd });
    }
    StapleSet { staples, max_len_sq }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactnum::FieldElement;

    #[test]
    fn square_torus_delaunay_trivial() {
        let s = catalog::square_torus().unwrap();
        let t = delaunay(&s);
        assert_eq!(t.mesh().edge_count(), 3);
        for h in t.mesh().edges() {
            assert!(t.edge_is_delaunay(h));
        }
        // the two diagonal-adjacent triangles of the unit square are
        // exactly cocircular: one degenerate edge, two staples
        let st = voronoi_staples(&t);
        assert_eq!(st.len(), 2);
        assert_eq!(st.max_len_sq, FieldElement::from_int(s.spec(), 1));
    }

    #[test]
    fn l_surface_staples_unit_length() {
        let s = catalog::l_surface_default().unwrap();
        let t = delaunay(&s);
        assert_eq!(t.mesh().edge_count(), 9);
        let st = voronoi_staples(&t);
        // three cocircular square diagonals are excluded; six unit edges remain
        assert_eq!(st.len(), 6);
        assert_eq!(st.max_len_sq, FieldElement::from_int(s.spec(), 1));
        for staple in &st.staples {
            assert_eq!(staple.forward.length_sq, FieldElement::from_int(s.spec(), 1));
        }
    }

    #[test]
    fn hex_torus_three_staples() {
        let s = catalog::hex_torus().unwrap();
        let t = delaunay(&s);
        let st = voronoi_staples(&t);
        assert_eq!(st.len(), 3);
    }

    #[test]
    fn tall_rectangle_torus_is_degenerate_delaunay() {
        // the 1 x N rectangle torus: every cell of the rectangle grid is
        // cocircular, so the initial triangulation is already (weakly)
        // Delaunay; all edges pass the in-circle oracle and stay within
        // the diameter bound 4 R^2 = 1 + N^2
        use crate::exactnum::FieldSpec;
        use crate::geom::{incircle_outside_sign, Vec2};
        use crate::surface::{build_surface, PolygonalPresentation};
        let q = FieldSpec::rationals();
        let n = 7i64;
        let poly = vec![
            Vec2::from_ints(&q, 0, 0),
            Vec2::from_ints(&q, 1, 0),
            Vec2::from_ints(&q, 1, n),
            Vec2::from_ints(&q, 0, n),
        ];
        let pres = PolygonalPresentation {
            field: q.clone(),
            polygons: vec![poly],
            gluings: vec![((0, 0), (0, 2)), ((0, 1), (0, 3))],
        };
        let s = build_surface(pres, vec![(0, 0)]).unwrap();
        let t = delaunay(&s);
        let bound = FieldElement::from_int(&q, 1 + n * n);
        for h in t.mesh().edges() {
            let (a, b, c) = t.mesh().unfolded_quad(h);
            assert!(incircle_outside_sign(&a, &b, &c) >= 0, "in-circle oracle");
            assert!(t.mesh().vec(h).norm_sq().compare(&bound) != std::cmp::Ordering::Greater);
        }
        // the long diagonals are exactly cocircular, so only the four
        // unit-and-height edges survive as staples
        let st = voronoi_staples(&t);
        assert_eq!(st.len(), 2);
    }

    #[test]
    fn sheared_torus_flips_to_delaunay() {
        // torus for the lattice (1,0), (3,1): the presentation's long
        // diagonal and side must flip down to the short lattice vectors
        use crate::exactnum::FieldSpec;
        use crate::geom::Vec2;
        use crate::surface::{build_surface, PolygonalPresentation};
        let q = FieldSpec::rationals();
        let poly = vec![
            Vec2::from_ints(&q, 0, 0),
            Vec2::from_ints(&q, 1, 0),
            Vec2::from_ints(&q, 4, 1),
            Vec2::from_ints(&q, 3, 1),
        ];
        let pres = PolygonalPresentation {
            field: q.clone(),
            polygons: vec![poly],
            gluings: vec![((0, 0), (0, 2)), ((0, 1), (0, 3))],
        };
        let s = build_surface(pres, vec![(0, 0)]).unwrap();
        let t = delaunay(&s);
        assert!(t.flip_count() > 0);
        // Delaunay edges of this lattice are (1,0), (0,1), (1,1) up to sign
        let bound = FieldElement::from_int(&q, 2);
        for h in t.mesh().edges() {
            assert!(t.edge_is_delaunay(h));
            assert!(t.mesh().vec(h).norm_sq().compare(&bound) != std::cmp::Ordering::Greater);
        }
    }
}
