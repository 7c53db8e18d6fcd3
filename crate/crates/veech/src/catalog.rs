//! Named surface builders.

use crate::exactnum::{rat_int, FieldElement, FieldSpec, Rat};
use crate::geom::Vec2;
use crate::surface::{build_surface, PolygonalPresentation, SurfaceError, TranslationSurface};
use num_traits::Zero;
use std::sync::Arc;

fn v(spec: &Arc<FieldSpec>, x: FieldElement, y: FieldElement) -> Vec2 {
    let _ = spec;
    Vec2::new(x, y)
}

/// Unit square with opposite sides identified and its vertex marked.
pub fn square_torus() -> Result<TranslationSurface, SurfaceError> {
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
        gluings: vec![((0, 0), (0, 2)), ((0, 1), (0, 3))],
    };
    build_surface(pres, vec![(0, 0)])
}

/// Regular hexagon of side two over Q(sqrt 3), opposite sides identified,
/// both vertex classes marked.
pub fn hex_torus() -> Result<TranslationSurface, SurfaceError> {
    let f = FieldSpec::quadratic_sqrt(3);
    let s = FieldElement::generator(&f); // sqrt 3
    let fe = |n: i64| FieldElement::from_int(&f, n);
    let poly = vec![
        v(&f, fe(0), fe(0)),
        v(&f, fe(2), fe(0)),
        v(&f, fe(3), s.clone()),
        v(&f, fe(2), s.mul_rat(&rat_int(2))),
        v(&f, fe(0), s.mul_rat(&rat_int(2))),
        v(&f, fe(-1), s.clone()),
    ];
    let pres = PolygonalPresentation {
        field: f,
        polygons: vec![poly],
        gluings: vec![((0, 0), (0, 3)), ((0, 1), (0, 4)), ((0, 2), (0, 5))],
    };
    build_surface(pres, vec![(0, 0), (0, 1)])
}

/// L-shaped surface: a horizontal arm of length `a` and a vertical arm of
/// height `b`, both of width one, opposite sides identified. In the
/// stratum H(2) for any a, b > 1.
pub fn l_surface(a: FieldElement, b: FieldElement) -> Result<TranslationSurface, SurfaceError> {
    let f = a.spec().clone();
    let one = FieldElement::one(&f);
    let zero = FieldElement::zero(&f);
    assert!(
        a.sub(&one).is_positive() && b.sub(&one).is_positive(),
        "L(a,b) requires a, b > 1"
    );
    let poly = vec![
        v(&f, zero.clone(), zero.clone()),
        v(&f, one.clone(), zero.clone()),
        v(&f, a.clone(), zero.clone()),
        v(&f, a.clone(), one.clone()),
        v(&f, one.clone(), one.clone()),
        v(&f, one.clone(), b.clone()),
        v(&f, zero.clone(), b.clone()),
        v(&f, zero.clone(), one.clone()),
    ];
    let pres = PolygonalPresentation {
        field: f,
        polygons: vec![poly],
        gluings: vec![
            ((0, 0), (0, 5)), // bottom [0,1] <-> top of the tall arm
            ((0, 1), (0, 3)), // bottom [1,a] <-> top of the wide arm
            ((0, 2), (0, 7)), // right x=a <-> left x=0, y in [0,1]
            ((0, 4), (0, 6)), // right x=1, y in [1,b] <-> left x=0, y in [1,b]
        ],
    };
    build_surface(pres, vec![])
}

/// The three-unit-square L: L(2,2).
pub fn l_surface_default() -> Result<TranslationSurface, SurfaceError> {
    let q = FieldSpec::rationals();
    l_surface(FieldElement::from_int(&q, 2), FieldElement::from_int(&q, 2))
}

/// McMullen's genus-two surface in H(1,1) for parameter `a`: the slit
/// connected sum of the torus of sides 2+a and 1 with the torus of sides
/// 1+2a and a, along a horizontal slit of length 1+a, the second torus
/// drawn offset by (1,1). The vertical and horizontal directions are parabolic at
/// a = 1 + sqrt(3) and its family companions.
pub fn mcmullen_genus2(a: FieldElement) -> Result<TranslationSurface, SurfaceError> {
    let f = a.spec().clone();
    assert!(a.is_positive(), "mcmullen-genus2 requires a > 0");
    let fe = |n: i64| FieldElement::from_int(&f, n);
    let one = fe(1);
    let one_a = one.add(&a); // 1+a: the slit length
    let two_a = fe(2).add(&a); // 2+a: width of the lower torus
    let two_2a = fe(2).add(&a).add(&a); // 2+2a: right edge of the upper torus as drawn
    let one_plus_a_1 = one_a.add(&one); // 2+a: slit right end in the upper torus

    // lower torus [0, 2+a] x [0, 1], bottom and top split at the slit end 1+a
    let p0 = vec![
        v(&f, fe(0), fe(0)),
        v(&f, one_a.clone(), fe(0)),
        v(&f, two_a.clone(), fe(0)),
        v(&f, two_a.clone(), one.clone()),
        v(&f, one_a.clone(), one.clone()),
        v(&f, fe(0), one.clone()),
    ];
    // upper torus drawn at [1, 2+2a] x [1, 1+a], bottom and top split at 2+a
    let y_top = one.add(&a);
    let p1 = vec![
        v(&f, one.clone(), one.clone()),
        v(&f, one_plus_a_1.clone(), one.clone()),
        v(&f, two_2a.clone(), one.clone()),
        v(&f, two_2a.clone(), y_top.clone()),
        v(&f, one_plus_a_1.clone(), y_top.clone()),
        v(&f, one.clone(), y_top.clone()),
    ];
    let pres = PolygonalPresentation {
        field: f,
        polygons: vec![p0, p1],
        gluings: vec![
            ((0, 0), (1, 4)), // slit: lower lip of T1 <-> upper lip of T2
            ((0, 4), (1, 0)), // slit: upper lip of T1 <-> lower lip of T2
            ((0, 1), (0, 3)), // T1 bottom rest <-> top rest
            ((0, 2), (0, 5)), // T1 right <-> left
            ((1, 1), (1, 3)), // T2 bottom rest <-> top rest
            ((1, 2), (1, 5)), // T2 right <-> left
        ],
    };
    build_surface(pres, vec![])
}

/// McMullen surface at a = 1 + sqrt(3).
pub fn mcmullen_genus2_sqrt3() -> Result<TranslationSurface, SurfaceError> {
    let f = FieldSpec::quadratic_sqrt(3);
    let a = FieldElement::new(f.clone(), vec![rat_int(1), rat_int(1)]).unwrap();
    mcmullen_genus2(a)
}

/// Element helper used by builders taking rational parameters.
pub fn rational_element(spec: &Arc<FieldSpec>, q: Rat) -> FieldElement {
    if q.is_zero() {
        FieldElement::zero(spec)
    } else {
        FieldElement::from_rat(spec, q)
    }
}
