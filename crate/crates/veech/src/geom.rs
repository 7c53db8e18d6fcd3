//! Planar vectors and 2x2 matrices over a number field, with the exact
//! sign predicates the flat-geometry code is built on.

use crate::exactnum::{FieldElement, FieldSpec, Rat};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vec2 {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Vec2 {
    pub fn new(x: FieldElement, y: FieldElement) -> Vec2 {
        Vec2 { x, y }
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Vec2 {
        Vec2::new(FieldElement::zero(spec), FieldElement::zero(spec))
    }

    pub fn from_ints(spec: &Arc<FieldSpec>, x: i64, y: i64) -> Vec2 {
        Vec2::new(FieldElement::from_int(spec, x), FieldElement::from_int(spec, y))
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.x.spec()
    }

    pub fn add(&self, o: &Vec2) -> Vec2 {
        Vec2::new(self.x.add(&o.x), self.y.add(&o.y))
    }

    pub fn sub(&self, o: &Vec2) -> Vec2 {
        Vec2::new(self.x.sub(&o.x), self.y.sub(&o.y))
    }

    pub fn neg(&self) -> Vec2 {
        Vec2::new(self.x.neg(), self.y.neg())
    }

    pub fn scale(&self, s: &FieldElement) -> Vec2 {
        Vec2::new(self.x.mul(s), self.y.mul(s))
    }

    pub fn scale_rat(&self, q: &Rat) -> Vec2 {
        Vec2::new(self.x.mul_rat(q), self.y.mul_rat(q))
    }

    pub fn dot(&self, o: &Vec2) -> FieldElement {
        self.x.mul(&o.x).add(&self.y.mul(&o.y))
    }

    pub fn cross(&self, o: &Vec2) -> FieldElement {
        self.x.mul(&o.y).sub(&self.y.mul(&o.x))
    }

    pub fn norm_sq(&self) -> FieldElement {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Rotate by +90 degrees.
    pub fn perp(&self) -> Vec2 {
        Vec2::new(self.y.neg(), self.x.clone())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// sign of the cross product: +1 if `b` is counterclockwise of `a` by less
/// than a half turn, -1 if clockwise, 0 if parallel.
pub fn cross_sign(a: &Vec2, b: &Vec2) -> i32 {
    a.cross(b).sign()
}

pub fn dot_sign(a: &Vec2, b: &Vec2) -> i32 {
    a.dot(b).sign()
}

/// Nonzero vectors point the same direction (positively parallel).
pub fn same_direction(a: &Vec2, b: &Vec2) -> bool {
    cross_sign(a, b) == 0 && dot_sign(a, b) > 0
}

/// Does direction `w` lie strictly inside the counterclockwise sector from
/// `a` to `b`, where the sector spans less than a half turn?
pub fn strictly_inside_convex_sector(a: &Vec2, b: &Vec2, w: &Vec2) -> bool {
    debug_assert!(cross_sign(a, b) > 0, "sector must be convex and positively oriented");
    cross_sign(a, w) > 0 && cross_sign(w, b) > 0
}

/// Does direction `w` lie in the counterclockwise arc from `a` (exclusive)
/// to `b` (inclusive)? The arc is the one swept counterclockwise from `a`
/// by the rotation taking `a`'s direction to `b`'s going the short way
/// determined by the sign data; `sweep_upper` selects the reflex arc when
/// the two directions are antiparallel or the sweep exceeds a half turn.
pub fn in_ccw_arc_exclusive_inclusive(a: &Vec2, b: &Vec2, w: &Vec2) -> bool {
    let cab = cross_sign(a, b);
    let dab = dot_sign(a, b);
    if cab == 0 {
        if dab > 0 {
            // zero sweep: empty arc
            return false;
        }
        // half-turn sweep: (a, -a]
        return same_direction(w, b) || cross_sign(a, w) > 0;
    }
    if same_direction(w, b) {
        return true;
    }
    if same_direction(w, a) {
        return false;
    }
    if cab > 0 {
        // sweep < half turn
        cross_sign(a, w) > 0 && cross_sign(w, b) > 0
    } else {
        // sweep > half turn: complement of the ccw arc from b to a
        !(cross_sign(b, w) > 0 && cross_sign(w, a) > 0)
    }
}

/// Exact in-circle predicate. For a counterclockwise triangle (origin, b, c),
/// returns +1 when `d` lies strictly outside the circumcircle, 0 when
/// cocircular, -1 when strictly inside. All four points are given in a
/// common chart with the first triangle corner at the origin. An edge is
/// locally Delaunay exactly when this sign is >= 0 for the opposite vertex.
pub fn incircle_outside_sign(b: &Vec2, c: &Vec2, d: &Vec2) -> i32 {
    // det [ bx by |b|^2 ; cx cy |c|^2 ; dx dy |d|^2 ]
    let b2 = b.norm_sq();
    let c2 = c.norm_sq();
    let d2 = d.norm_sq();
    let term1 = b.x.mul(&c.y.mul(&d2).sub(&d.y.mul(&c2)));
    let term2 = b.y.mul(&c.x.mul(&d2).sub(&d.x.mul(&c2)));
    let term3 = b2.mul(&c.x.mul(&d.y).sub(&d.x.mul(&c.y)));
    term1.sub(&term2).add(&term3).sign()
}

/// Do closed segments a0-a1 and b0-b1 intersect?
pub fn segments_intersect(a0: &Vec2, a1: &Vec2, b0: &Vec2, b1: &Vec2) -> bool {
    let d1 = cross_sign(&a1.sub(a0), &b0.sub(a0));
    let d2 = cross_sign(&a1.sub(a0), &b1.sub(a0));
    let d3 = cross_sign(&b1.sub(b0), &a0.sub(b0));
    let d4 = cross_sign(&b1.sub(b0), &a1.sub(b0));
    if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)) {
        return true;
    }
    let on = |p: &Vec2, q0: &Vec2, q1: &Vec2| -> bool {
        cross_sign(&q1.sub(q0), &p.sub(q0)) == 0 && q0.sub(p).dot(&q1.sub(p)).sign() <= 0
    };
    (d1 == 0 && on(b0, a0, a1))
        || (d2 == 0 && on(b1, a0, a1))
        || (d3 == 0 && on(a0, b0, b1))
        || (d4 == 0 && on(a1, b0, b1))
}

pub fn point_in_closed_triangle(p: &Vec2, a: &Vec2, b: &Vec2, c: &Vec2) -> bool {
    cross_sign(&b.sub(a), &p.sub(a)) >= 0
        && cross_sign(&c.sub(b), &p.sub(b)) >= 0
        && cross_sign(&a.sub(c), &p.sub(c)) >= 0
}

/// Ear-clip a simple ccw polygon. Returns triangles as triples of vertex
/// indices, counterclockwise.
pub fn ear_clip(poly: &[Vec2]) -> Option<Vec<[usize; 3]>> {
    let n = poly.len();
    if n < 3 {
        return None;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for j in 0..m {
            let ia = idx[(j + m - 1) % m];
            let ib = idx[j];
            let ic = idx[(j + 1) % m];
            let a = &poly[ia];
            let b = &poly[ib];
            let c = &poly[ic];
            if cross_sign(&b.sub(a), &c.sub(b)) <= 0 {
                continue;
            }
            let mut empty = true;
            for &other in &idx {
                if other == ia || other == ib || other == ic {
                    continue;
                }
                if point_in_closed_triangle(&poly[other], a, b, c) {
                    empty = false;
                    break;
                }
            }
            if empty {
                out.push([ia, ib, ic]);
                idx.remove(j);
                clipped = true;
                break;
            }
        }
        if !clipped {
            return None;
        }
    }
    let (a, b, c) = (idx[0], idx[1], idx[2]);
    if cross_sign(&poly[b].sub(&poly[a]), &poly[c].sub(&poly[b])) <= 0 {
        return None;
    }
    out.push([a, b, c]);
    Some(out)
}

/// 2x2 matrix over the field, acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Mat2 {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity(spec: &Arc<FieldSpec>) -> Mat2 {
        Mat2::new(
            FieldElement::one(spec),
            FieldElement::zero(spec),
            FieldElement::zero(spec),
            FieldElement::one(spec),
        )
    }

    pub fn from_ints(spec: &Arc<FieldSpec>, a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::new(
            FieldElement::from_int(spec, a),
            FieldElement::from_int(spec, b),
            FieldElement::from_int(spec, c),
            FieldElement::from_int(spec, d),
        )
    }

    pub fn from_rats(spec: &Arc<FieldSpec>, a: Rat, b: Rat, c: Rat, d: Rat) -> Mat2 {
        Mat2::new(
            FieldElement::from_rat(spec, a),
            FieldElement::from_rat(spec, b),
            FieldElement::from_rat(spec, c),
            FieldElement::from_rat(spec, d),
        )
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.a.spec()
    }

    pub fn det(&self) -> FieldElement {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn trace(&self) -> FieldElement {
        self.a.add(&self.d)
    }

    pub fn frobenius_norm_sq(&self) -> FieldElement {
        self.a
            .square()
            .add(&self.b.square())
            .add(&self.c.square())
            .add(&self.d.square())
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            self.a.mul(&v.x).add(&self.b.mul(&v.y)),
            self.c.mul(&v.x).add(&self.d.mul(&v.y)),
        )
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        )
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(self.a.neg(), self.b.neg(), self.c.neg(), self.d.neg())
    }

    /// Inverse for determinant-one matrices.
    pub fn inv_unimodular(&self) -> Mat2 {
        debug_assert!(self.det().is_one());
        Mat2::new(self.d.clone(), self.b.neg(), self.c.neg(), self.a.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        self.is_identity() || self.neg().is_identity()
    }

    /// Orthogonal with determinant one: a == d, b == -c, a^2 + b^2 == 1.
    pub fn is_rotation(&self) -> bool {
        self.a == self.d
            && self.b == self.c.neg()
            && self.a.square().add(&self.b.square()).is_one()
    }

    /// Canonical representative of {A, -A}: first nonzero entry positive
    /// in the order a, b, c, d.
    pub fn psl_canonical(&self) -> Mat2 {
        for entry in [&self.a, &self.b, &self.c, &self.d] {
            match entry.sign() {
                1 => return self.clone(),
                -1 => return self.neg(),
                _ => continue,
            }
        }
        self.clone()
    }

    /// Deterministic structural ordering on entries.
    pub fn lex_cmp(&self, o: &Mat2) -> Ordering {
        crate::exactnum::lex_cmp(&self.a, &o.a)
            .then_with(|| crate::exactnum::lex_cmp(&self.b, &o.b))
            .then_with(|| crate::exactnum::lex_cmp(&self.c, &o.c))
            .then_with(|| crate::exactnum::lex_cmp(&self.d, &o.d))
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}
