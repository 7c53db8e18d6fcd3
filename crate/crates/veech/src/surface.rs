//! Polygonal presentations of translation surfaces.
//!
//! A presentation is a list of simple, positively oriented polygons with
//! field-element coordinates and a perfect matching of boundary edges by
//! translations. Building a surface ear-clips each polygon, glues the
//! pieces into a half-edge mesh, classifies vertices by walking corners,
//! and assigns each class its cone order. Angles are never represented as
//! numbers: a class of total angle 2*pi*(d+1) is recognized by counting,
//! with exact sign tests, how many times its corner fan sweeps past the
//! horizontal direction.

use crate::exactnum::{FieldElement, FieldSpec};
use crate::geom::{cross_sign, ear_clip, same_direction, segments_intersect,
    strictly_inside_convex_sector, Mat2, Vec2};
use crate::mesh::Mesh;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub enum SurfaceError {
    TooFewVertices(usize),
    DuplicateVertex { polygon: usize },
    NotPositivelyOriented { polygon: usize },
    NotSimple { polygon: usize },
    EdgeNotGlued { polygon: usize, edge: usize },
    EdgeGluedTwice { polygon: usize, edge: usize },
    GluingNotTranslation { first: (usize, usize), second: (usize, usize) },
    GluingOutOfRange { polygon: usize, edge: usize },
    SelfGluedEdge { polygon: usize, edge: usize },
    Disconnected,
    MarkedVertexOutOfRange { polygon: usize, vertex: usize },
    EarClippingFailed { polygon: usize },
    VertexRemovalFailed(String),
    MeshInvariant(String),
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::TooFewVertices(p) => write!(f, "polygon {p} has fewer than 3 vertices"),
            SurfaceError::DuplicateVertex { polygon } => {
                write!(f, "polygon {polygon} repeats a vertex")
            }
            SurfaceError::NotPositivelyOriented { polygon } => {
                write!(f, "polygon {polygon} is not counterclockwise")
            }
            SurfaceError::NotSimple { polygon } => write!(f, "polygon {polygon} self-intersects"),
            SurfaceError::EdgeNotGlued { polygon, edge } => {
                write!(f, "edge ({polygon},{edge}) appears in no gluing pair")
            }
            SurfaceError::EdgeGluedTwice { polygon, edge } => {
                write!(f, "edge ({polygon},{edge}) appears in more than one gluing pair")
            }
            SurfaceError::GluingNotTranslation { first, second } => write!(
                f,
                "glued edges ({},{}) and ({},{}) are not parallel of equal length with opposite direction",
                first.0, first.1, second.0, second.1
            ),
            SurfaceError::GluingOutOfRange { polygon, edge } => {
                write!(f, "gluing names nonexistent edge ({polygon},{edge})")
            }
            SurfaceError::SelfGluedEdge { polygon, edge } => {
                write!(f, "edge ({polygon},{edge}) is glued to itself")
            }
            SurfaceError::Disconnected => write!(f, "surface is not connected"),
            SurfaceError::MarkedVertexOutOfRange { polygon, vertex } => {
                write!(f, "marked vertex ({polygon},{vertex}) does not exist")
            }
            SurfaceError::EarClippingFailed { polygon } => {
                write!(f, "polygon {polygon} could not be triangulated")
            }
            SurfaceError::VertexRemovalFailed(m) => write!(f, "removing a regular vertex failed: {m}"),
            SurfaceError::MeshInvariant(m) => write!(f, "mesh invariant violated: {m}"),
        }
    }
}

impl std::error::Error for SurfaceError {}

/// Directed edge `index` of polygon `polygon`: from vertex `index` to `index+1`.
pub type EdgeRef = (usize, usize);

#[derive(Clone, Debug)]
pub struct PolygonalPresentation {
    pub field: Arc<FieldSpec>,
    pub polygons: Vec<Vec<Vec2>>,
    pub gluings: Vec<(EdgeRef, EdgeRef)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConePoint {
    pub id: usize,
    /// order d: the cone angle is 2*pi*(d+1); d == 0 marks a removable singularity
    pub order: usize,
    /// representative outgoing half-edge in the surface mesh
    pub rep_half_edge: usize,
}

#[derive(Clone)]
pub struct TranslationSurface {
    presentation: PolygonalPresentation,
    marked: Vec<(usize, usize)>,
    mesh: Mesh,
    cone_points: Vec<ConePoint>,
    genus: usize,
}

impl fmt::Debug for TranslationSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TranslationSurface")
            .field("polygons", &self.presentation.polygons.len())
            .field("stratum", &self.stratum())
            .field("genus", &self.genus)
            .finish()
    }
}

impl PolygonalPresentation {
    pub fn validate(&self) -> Result<(), SurfaceError> {
        for (pi, poly) in self.polygons.iter().enumerate() {
            if poly.len() < 3 {
                return Err(SurfaceError::TooFewVertices(pi));
            }
            for i in 0..poly.len() {
                for j in (i + 1)..poly.len() {
                    if poly[i] == poly[j] {
                        return Err(SurfaceError::DuplicateVertex { polygon: pi });
                    }
                }
            }
            if shoelace_double_area(poly).sign() <= 0 {
                return Err(SurfaceError::NotPositivelyOriented { polygon: pi });
            }
            if !is_simple(poly) {
                return Err(SurfaceError::NotSimple { polygon: pi });
            }
        }
        // perfect matching of edges
        let mut seen: HashMap<EdgeRef, usize> = HashMap::new();
        for &(a, b) in &self.gluings {
            for e in [a, b] {
                let (p, i) = e;
                if p >= self.polygons.len() || i >= self.polygons[p].len() {
                    return Err(SurfaceError::GluingOutOfRange { polygon: p, edge: i });
                }
                *seen.entry(e).or_insert(0) += 1;
            }
            if a == b {
                return Err(SurfaceError::SelfGluedEdge { polygon: a.0, edge: a.1 });
            }
            let va = edge_vector(&self.polygons[a.0], a.1);
            let vb = edge_vector(&self.polygons[b.0], b.1);
            if va != vb.neg() {
                return Err(SurfaceError::GluingNotTranslation { first: a, second: b });
            }
        }
        for (pi, poly) in self.polygons.iter().enumerate() {
            for e in 0..poly.len() {
                match seen.get(&(pi, e)) {
                    None => return Err(SurfaceError::EdgeNotGlued { polygon: pi, edge: e }),
                    Some(1) => {}
                    Some(_) => return Err(SurfaceError::EdgeGluedTwice { polygon: pi, edge: e }),
                }
            }
        }
        Ok(())
    }

    /// Apply a positive-determinant linear map to every vertex.
    pub fn transform(&self, m: &Mat2) -> PolygonalPresentation {
        PolygonalPresentation {
            field: self.field.clone(),
            polygons: self
                .polygons
                .iter()
                .map(|poly| poly.iter().map(|v| m.apply(v)).collect())
                .collect(),
            gluings: self.gluings.clone(),
        }
    }
}

fn edge_vector(poly: &[Vec2], i: usize) -> Vec2 {
    let n = poly.len();
    poly[(i + 1) % n].sub(&poly[i])
}

fn shoelace_double_area(poly: &[Vec2]) -> FieldElement {
    let mut acc = FieldElement::zero(poly[0].spec());
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        acc = acc.add(&poly[i].cross(&poly[j]));
    }
    acc
}

fn is_simple(poly: &[Vec2]) -> bool {
    let n = poly.len();
    for i in 0..n {
        let i1 = (i + 1) % n;
        for j in (i + 1)..n {
            let j1 = (j + 1) % n;
            // adjacent edges share exactly their common endpoint
            if j == i1 || j1 == i {
                continue;
            }
            if segments_intersect(&poly[i], &poly[i1], &poly[j], &poly[j1]) {
                return false;
            }
        }
    }
    // consecutive edges must not fold back onto each other
    for i in 0..n {
        let prev = edge_vector(poly, (i + n - 1) % n);
        let cur = edge_vector(poly, i);
        if cross_sign(&prev, &cur) == 0 && prev.dot(&cur).sign() < 0 {
            return false;
        }
    }
    true
}

/// Sweep of a triangle corner (rays `a` ccw to `b`, spanning less than a
/// half turn) past the positive horizontal direction, counting the start
/// ray inclusively and the end ray exclusively.
fn corner_crosses_horizontal(a: &Vec2, b: &Vec2, e1: &Vec2) -> bool {
    same_direction(a, e1) || strictly_inside_convex_sector(a, b, e1)
}

pub fn build_surface(
    presentation: PolygonalPresentation,
    marked: Vec<(usize, usize)>,
) -> Result<TranslationSurface, SurfaceError> {
    presentation.validate()?;
    for &(p, v) in &marked {
        if p >= presentation.polygons.len() || v >= presentation.polygons[p].len() {
            return Err(SurfaceError::MarkedVertexOutOfRange { polygon: p, vertex: v });
        }
    }
    let spec = presentation.field.clone();

    // triangulate each polygon, remembering which half-edge realizes each
    // polygon boundary edge and which polygon corner each origin is
    let mut next: Vec<usize> = Vec::new();
    let mut vecs: Vec<Vec2> = Vec::new();
    let mut origin_corner: Vec<(usize, usize)> = Vec::new();
    let mut boundary: HashMap<EdgeRef, usize> = HashMap::new();
    let mut diagonal: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut opp: Vec<usize> = Vec::new();

    for (pi, poly) in presentation.polygons.iter().enumerate() {
        let tris = ear_clip(poly).ok_or(SurfaceError::EarClippingFailed { polygon: pi })?;
        let npoly = poly.len();
        for tri in tris {
            let base = next.len();
            for k in 0..3 {
                let from = tri[k];
                let to = tri[(k + 1) % 3];
                let h = base + k;
                next.push(base + (k + 1) % 3);
                vecs.push(poly[to].sub(&poly[from]));
                origin_corner.push((pi, from));
                opp.push(usize::MAX);
                if to == (from + 1) % npoly {
                    boundary.insert((pi, from), h);
                } else {
                    // interior diagonal: key by unordered vertex pair
                    let key = (pi, from.min(to), from.max(to));
                    if let Some(&other) = diagonal.get(&key) {
                        opp[h] = other;
                        opp[other] = h;
                    } else {
                        diagonal.insert(key, h);
                    }
                }
            }
        }
    }
    for &(a, b) in &presentation.gluings {
        let ha = *boundary.get(&a).expect("validated boundary edge");
        let hb = *boundary.get(&b).expect("validated boundary edge");
        opp[ha] = hb;
        opp[hb] = ha;
    }
    if opp.iter().any(|&o| o == usize::MAX) {
        return Err(SurfaceError::MeshInvariant("unmatched half-edge after gluing".into()));
    }

    let mesh = Mesh::from_parts(spec.clone(), next, opp, vecs).map_err(SurfaceError::MeshInvariant)?;
    if !mesh.is_connected() {
        return Err(SurfaceError::Disconnected);
    }

    // vertex classes named by marked corners
    let mut marked_classes: Vec<usize> = Vec::new();
    for &(p, v) in &marked {
        // find a half-edge whose origin corner is (p, v)
        let h = (0..mesh.half_edge_count())
            .find(|&h| origin_corner[h] == (p, v))
            .ok_or(SurfaceError::MarkedVertexOutOfRange { polygon: p, vertex: v })?;
        let class = mesh.origin(h);
        if !marked_classes.contains(&class) {
            marked_classes.push(class);
        }
    }

    // remove unmarked regular vertices until none remain
    let mut mesh = mesh;
    let mut marked_classes = marked_classes;
    loop {
        let reps = mesh.vertex_representatives();
        let mut to_remove = None;
        for (class, &rep) in reps.iter().enumerate() {
            if marked_classes.contains(&class) {
                continue;
            }
            if cone_turns(&mesh, rep) == 1 {
                to_remove = Some(rep);
                break;
            }
        }
        let Some(rep) = to_remove else { break };
        let old_classes = marked_classes.clone();
        let (new_mesh, trace) = mesh
            .remove_flat_vertex(rep)
            .map_err(SurfaceError::VertexRemovalFailed)?;
        mesh = new_mesh;
        marked_classes = old_classes
            .iter()
            .map(|&mc| {
                (0..trace.origins_before_delete.len())
                    .find_map(|h| {
                        if trace.origins_before_delete[h] == mc {
                            trace.remap[h].map(|nh| mesh.origin(nh))
                        } else {
                            None
                        }
                    })
                    .ok_or_else(|| {
                        SurfaceError::VertexRemovalFailed("lost marked vertex in rebuild".into())
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        marked_classes.sort_unstable();
        marked_classes.dedup();
    }

    // cone points
    let reps = mesh.vertex_representatives();
    let mut cone_points = Vec::with_capacity(reps.len());
    for (class, &rep) in reps.iter().enumerate() {
        let turns = cone_turns(&mesh, rep);
        debug_assert!(turns >= 1);
        cone_points.push(ConePoint {
            id: class,
            order: turns - 1,
            rep_half_edge: rep,
        });
    }

    // genus from the Euler characteristic
    let v = mesh.vertex_count() as i64;
    let e = mesh.edge_count() as i64;
    let f = mesh.triangle_count() as i64;
    let chi = v - e + f;
    debug_assert!(chi <= 2 && chi % 2 == 0);
    let genus = ((2 - chi) / 2) as usize;
    let sum_orders: usize = cone_points.iter().map(|c| c.order).sum();
    debug_assert_eq!(sum_orders as i64, 2 * genus as i64 - 2);

    Ok(TranslationSurface {
        presentation,
        marked,
        mesh,
        cone_points,
        genus,
    })
}

/// Number of full turns in the cone angle at the vertex of `h0`:
/// the cone angle is 2*pi*turns.
pub fn cone_turns(mesh: &Mesh, h0: usize) -> usize {
    let spec = &mesh.spec;
    let e1 = Vec2::from_ints(spec, 1, 0);
    let mut crossings = 0usize;
    for h in mesh.vertex_star(h0) {
        let (a, b) = mesh.corner_rays(h);
        if corner_crosses_horizontal(&a, &b, &e1) {
            crossings += 1;
        }
    }
    crossings
}

impl TranslationSurface {
    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.presentation.field
    }

    pub fn presentation(&self) -> &PolygonalPresentation {
        &self.presentation
    }

    pub fn marked(&self) -> &[(usize, usize)] {
        &self.marked
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn cone_points(&self) -> &[ConePoint] {
        &self.cone_points
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// The stratum as cone orders sorted descending, zeros included for
    /// marked regular points.
    pub fn stratum(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.cone_points.iter().map(|c| c.order).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Exact total area.
    pub fn total_area(&self) -> FieldElement {
        let two = FieldElement::from_int(self.spec(), 2);
        self.mesh.double_area().div(&two).expect("two is invertible")
    }

    /// The image surface under a positive-determinant matrix.
    pub fn transform(&self, m: &Mat2) -> Result<TranslationSurface, SurfaceError> {
        assert!(m.det().is_positive(), "transform requires det > 0");
        build_surface(self.presentation.transform(m), self.marked.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactnum::rat_int;

    #[test]
    fn l_surface_is_h2() {
        let s = catalog::l_surface_default().unwrap();
        assert_eq!(s.stratum(), vec![2]);
        assert_eq!(s.genus(), 2);
        assert_eq!(s.total_area(), FieldElement::from_int(s.spec(), 3));
        assert_eq!(s.cone_points().len(), 1);
        // Euler characteristic forces 9 edges and 6 triangles
        assert_eq!(s.mesh().edge_count(), 9);
        assert_eq!(s.mesh().triangle_count(), 6);
    }

    #[test]
    fn square_torus_marked() {
        let s = catalog::square_torus().unwrap();
        assert_eq!(s.stratum(), vec![0]);
        assert_eq!(s.genus(), 1);
        assert_eq!(s.total_area(), FieldElement::from_int(s.spec(), 1));
        assert_eq!(s.mesh().edge_count(), 3);
        assert_eq!(s.mesh().triangle_count(), 2);
    }

    #[test]
    fn hex_torus_two_marked_points() {
        let s = catalog::hex_torus().unwrap();
        assert_eq!(s.stratum(), vec![0, 0]);
        assert_eq!(s.genus(), 1);
        assert_eq!(s.cone_points().len(), 2);
    }

    #[test]
    fn mcmullen_is_h11() {
        let s = catalog::mcmullen_genus2_sqrt3().unwrap();
        assert_eq!(s.stratum(), vec![1, 1]);
        assert_eq!(s.genus(), 2);
        // area = (2+a) + (1+2a)a with a = 1 + sqrt3: 12 + 6 sqrt3
        let spec = s.spec().clone();
        let expect = FieldElement::new(spec, vec![rat_int(12), rat_int(6)]).unwrap();
        assert_eq!(s.total_area(), expect);
    }

    #[test]
    fn area_invariant_under_unimodular_transform() {
        let s = catalog::l_surface_default().unwrap();
        let m = Mat2::from_ints(s.spec(), 1, 1, 0, 1);
        let t = s.transform(&m).unwrap();
        assert_eq!(t.total_area(), s.total_area());
        assert_eq!(t.stratum(), s.stratum());
    }

    #[test]
    fn deterministic_build() {
        let a = catalog::l_surface_default().unwrap();
        let b = catalog::l_surface_default().unwrap();
        assert_eq!(a.mesh().half_edge_count(), b.mesh().half_edge_count());
        for h in 0..a.mesh().half_edge_count() {
            assert_eq!(a.mesh().vec(h), b.mesh().vec(h));
            assert_eq!(a.mesh().next(h), b.mesh().next(h));
            assert_eq!(a.mesh().opp(h), b.mesh().opp(h));
        }
    }

    #[test]
    fn unmarked_flat_vertex_is_removed() {
        // square torus with an extra vertex in the middle of the bottom edge,
        // not marked: must build to the plain torus combinatorics
        let q = FieldSpec::rationals();
        let half = crate::exactnum::rat(1, 2);
        let v = |x: crate::exactnum::Rat, y: crate::exactnum::Rat| {
            Vec2::new(FieldElement::from_rat(&q, x), FieldElement::from_rat(&q, y))
        };
        let poly = vec![
            v(rat_int(0), rat_int(0)),
            v(half.clone(), rat_int(0)),
            v(rat_int(1), rat_int(0)),
            v(rat_int(1), rat_int(1)),
            v(half, rat_int(1)),
            v(rat_int(0), rat_int(1)),
        ];
        let pres = PolygonalPresentation {
            field: q,
            polygons: vec![poly],
            gluings: vec![((0, 0), (0, 4)), ((0, 1), (0, 3)), ((0, 2), (0, 5))],
        };
        // mark only the corner class; the two mid-edge flat points merge into
        // one class which is removed
        let s = build_surface(pres, vec![(0, 0)]).unwrap();
        assert_eq!(s.stratum(), vec![0]);
        assert_eq!(s.mesh().vertex_count(), 1);
        assert_eq!(s.mesh().triangle_count(), 2);
    }

    #[test]
    fn bad_gluing_is_rejected() {
        let q = FieldSpec::rationals();
        let poly = vec![
            Vec2::from_ints(&q, 0, 0),
            Vec2::from_ints(&q, 1, 0),
            Vec2::from_ints(&q, 1, 1),
            Vec2::from_ints(&q, 0, 1),
        ];
        let pres = PolygonalPresentation {
            field: q,
            polygons: vec![poly],
            gluings: vec![((0, 0), (0, 1)), ((0, 2), (0, 3))],
        };
        assert!(matches!(
            pres.validate(),
            Err(SurfaceError::GluingNotTranslation { .. })
        ));
    }
}

#[cfg(test)]
mod removal_stress {
    use super::*;
    use crate::exactnum::{rat, FieldSpec};

    /// Tori with extra unmarked points subdividing the boundary in varied
    /// patterns: all must build down to the one-vertex torus with the
    /// area and stratum intact.
    #[test]
    fn subdivided_tori_flatten_cleanly() {
        let q = FieldSpec::rationals();
        let fe = |n: i64, d: i64| FieldElement::from_rat(&q, rat(n, d));
        // shear parameters and subdivision fractions to mix geometry
        let cases: Vec<(i64, Vec<(i64, i64)>)> = vec![
            (0, vec![(1, 2)]),
            (0, vec![(1, 3), (2, 3)]),
            (1, vec![(1, 2)]),
            (3, vec![(1, 4), (1, 2), (3, 4)]),
            (-2, vec![(2, 5)]),
        ];
        for (shear, cuts) in cases {
            // parallelogram spanned by (1,0) and (shear, 1), bottom and
            // top subdivided at the same fractions
            let mut bottom: Vec<Vec2> = vec![Vec2::from_ints(&q, 0, 0)];
            for &(n, d) in &cuts {
                bottom.push(Vec2::new(fe(n, d), fe(0, 1)));
            }
            bottom.push(Vec2::from_ints(&q, 1, 0));
            let offset = Vec2::new(fe(shear, 1), fe(1, 1));
            let mut poly = bottom.clone();
            for v in bottom.iter().rev() {
                poly.push(v.add(&offset));
            }
            // edges: k bottom pieces, right side, k top pieces, left side
            let k = cuts.len() + 1;
            let mut gluings: Vec<(EdgeRef, EdgeRef)> = Vec::new();
            for i in 0..k {
                // bottom piece i runs between fractions i..i+1; its top
                // partner is traversed in reverse order
                gluings.push(((0, i), (0, 2 * k - i)));
            }
            gluings.push(((0, k), (0, 2 * k + 1)));
            let pres = PolygonalPresentation {
                field: q.clone(),
                polygons: vec![poly],
                gluings,
            };
            let s = build_surface(pres, vec![(0, 0)]).unwrap();
            assert_eq!(s.stratum(), vec![0], "shear {shear}, cuts {cuts:?}");
            assert_eq!(s.mesh().vertex_count(), 1);
            assert_eq!(s.total_area(), FieldElement::one(&q));
        }
    }
}
