//! Certified areas of hyperbolic polygons.
//!
//! The full area comes from the angle defect: (n-2) pi minus the interior
//! angle sum, with ideal vertices contributing zero and any free arc
//! making the area infinite. The vertex angles have exact cosines of the
//! form q / sqrt(s) with q, s in the coordinate field, so each angle is
//! an interval-arccos of certified data.
//!
//! The area inside the agreement ball walks the boundary, clips each side
//! to the ball, and sums hyperbolic triangle fans from i plus circular
//! sectors where the ball boundary is exposed; a sector of angle phi has
//! area phi (cosh r - 1). All the clipping runs in interval arithmetic
//! and reports failure instead of guessing when a predicate does not
//! resolve at the working precision.

use super::polygon::{HPolygon, SideData};
use super::{BallData, Geodesic, IdealPoint, Vertex};
use crate::exactnum::FieldElement;
use crate::numeric::Interval;
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub enum PolygonArea {
    Finite(Interval),
    Infinite,
}

/// Direction of travel along a side in the boundary walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Travel {
    /// vertical side, y increasing / decreasing
    Up,
    Down,
    /// circular side, x increasing / decreasing
    XInc,
    XDec,
}

fn travel_of(side: &SideData) -> Travel {
    match &side.hp.geodesic {
        Geodesic::Vertical { .. } => {
            // order endpoints by y^2 (ideal finite = 0, infinity on top)
            let rank = |v: &Vertex| -> Option<FieldElement> {
                match v {
                    Vertex::Interior { y_sq, .. } => Some(y_sq.clone()),
                    Vertex::Ideal(IdealPoint::Finite(_)) => None, // zero
                    Vertex::Ideal(IdealPoint::Infinity) => None,
                }
            };
            let up = match (&side.from, &side.to) {
                (_, Vertex::Ideal(IdealPoint::Infinity)) => true,
                (Vertex::Ideal(IdealPoint::Infinity), _) => false,
                (Vertex::Ideal(IdealPoint::Finite(_)), _) => true,
                (_, Vertex::Ideal(IdealPoint::Finite(_))) => false,
                (a, b) => {
                    let ya = rank(a).expect("interior");
                    let yb = rank(b).expect("interior");
                    ya.compare(&yb) == Ordering::Less
                }
            };
            if up {
                Travel::Up
            } else {
                Travel::Down
            }
        }
        Geodesic::Circle { .. } => {
            let xa = side.from.x_surd().expect("circle endpoints finite");
            let xb = side.to.x_surd().expect("circle endpoints finite");
            if xa.cmp_surd(&xb) == Ordering::Less {
                Travel::XInc
            } else {
                Travel::XDec
            }
        }
    }
}

/// The exact data of the interior angle at a junction of two sides
/// meeting at the interior vertex (x, y_sq): returns (q, s) with
/// cos(theta) = q / sqrt(s).
pub(super) fn angle_cos_data_pub(
    incoming: &SideData,
    outgoing: &SideData,
    x: &FieldElement,
    y_sq: &FieldElement,
) -> (FieldElement, FieldElement) {
    // tangent along the walk at (x, y): vertical (0, s); circle s(-y, x-m).
    // dot products only involve y^2, so everything stays in the field.
    let spec = x.spec().clone();
    let one = FieldElement::one(&spec);
    // represent a tangent as (a + b*y, c) meaning (horizontal, vertical)
    // components: vertical side: (0, sigma); circle: sigma*(-y, x-m).
    // the only mixed products are handled case by case.
    let t_in = travel_of(incoming);
    let t_out = travel_of(outgoing);
    let dot_and_norms = |s1: &SideData, tr1: Travel, s2: &SideData, tr2: Travel| {
        match (&s1.hp.geodesic, &s2.hp.geodesic) {
            (Geodesic::Vertical { .. }, Geodesic::Vertical { .. }) => {
                unreachable!("two verticals never meet in the plane")
            }
            (Geodesic::Vertical { .. }, Geodesic::Circle { center, .. }) => {
                let s1v = if tr1 == Travel::Up { 1 } else { -1 };
                let s2v = if tr2 == Travel::XDec { 1 } else { -1 };
                // (0, s1) . s2(-y, x - m) = s1 s2 (x - m)
                let q = x.sub(center).mul_rat(&crate::exactnum::rat_int(s1v * s2v));
                let n1 = one.clone();
                let n2 = y_sq.add(&x.sub(center).square());
                (q, n1, n2)
            }
            (Geodesic::Circle { center, .. }, Geodesic::Vertical { .. }) => {
                let s1v = if tr1 == Travel::XDec { 1 } else { -1 };
                let s2v = if tr2 == Travel::Up { 1 } else { -1 };
                let q = x.sub(center).mul_rat(&crate::exactnum::rat_int(s1v * s2v));
                let n1 = y_sq.add(&x.sub(center).square());
                let n2 = one.clone();
                (q, n1, n2)
            }
            (
                Geodesic::Circle { center: m1, .. },
                Geodesic::Circle { center: m2, .. },
            ) => {
                let s1v = if tr1 == Travel::XDec { 1 } else { -1 };
                let s2v = if tr2 == Travel::XDec { 1 } else { -1 };
                let q = y_sq
                    .add(&x.sub(m1).mul(&x.sub(m2)))
                    .mul_rat(&crate::exactnum::rat_int(s1v * s2v));
                let n1 = y_sq.add(&x.sub(m1).square());
                let n2 = y_sq.add(&x.sub(m2).square());
                (q, n1, n2)
            }
        }
    };
    let (dot, n1, n2) = dot_and_norms(incoming, t_in, outgoing, t_out);
    // interior angle between -T_in and T_out
    (dot.neg(), n1.mul(&n2))
}

/// Gauss-Bonnet area of the polygon as a certified interval, or Infinite
/// when the boundary has free arcs.
pub fn gauss_bonnet_area(poly: &HPolygon, precision: usize) -> PolygonArea {
    if poly.has_free_arc() {
        return PolygonArea::Infinite;
    }
    let sides: Vec<&SideData> = poly.sides().collect();
    let n = sides.len();
    debug_assert!(n >= 3, "finite-area polygon needs at least three sides");
    let pi = Interval::pi(precision);
    let mut area = pi.mul(&Interval::from_i64(n as i64 - 2, precision));
    for i in 0..n {
        let incoming = sides[i];
        let outgoing = sides[(i + 1) % n];
        match &incoming.to {
            Vertex::Ideal(_) => {} // zero angle
            Vertex::Interior { x, y_sq } => {
                let (q, s) = angle_cos_data_pub(incoming, outgoing, x, y_sq);
                let (qlo, qhi) = q.to_interval(precision as u32);
                let (slo, shi) = s.to_interval(precision as u32);
                let qi = Interval::from_rational_bounds(&qlo, &qhi, precision);
                let si = Interval::from_rational_bounds(&slo, &shi, precision);
                let denom = si.sqrt().expect("norm product positive");
                let cosv = qi.div(&denom).expect("nonzero norms");
                let theta = cosv.acos().expect("cosine in range");
                area = area.sub(&theta);
            }
        }
    }
    PolygonArea::Finite(area)
}

#[derive(Clone, Debug)]
struct NumPoint {
    x: Interval,
    y: Interval,
}

#[derive(Clone, Debug)]
struct Piece {
    start: NumPoint,
    end: NumPoint,
    start_is_vertex: bool,
    end_is_vertex: bool,
    side_index: usize,
}

fn field_interval(x: &FieldElement, p: usize) -> Interval {
    let (lo, hi) = x.to_interval(p as u32);
    Interval::from_rational_bounds(&lo, &hi, p)
}

/// Clip one side to the ball. Returns Ok(None) when the side avoids the
/// ball, Ok(Some(piece)) when a single sub-segment lies inside, Err(())
/// when the working precision cannot resolve the geometry.
fn clip_side(
    side: &SideData,
    side_index: usize,
    ball: &BallData,
    p: usize,
) -> Result<Option<Piece>, ()> {
    let travel = travel_of(side);
    let ch = &ball.cosh;
    let sh = &ball.sinh;
    match &side.hp.geodesic {
        Geodesic::Vertical { x } => {
            let xi = field_interval(x, p);
            let disc = sh.mul(sh).sub(&xi.mul(&xi));
            if disc.is_strictly_negative() {
                return Ok(None);
            }
            if !disc.is_strictly_positive() {
                return Err(()); // tangency unresolved
            }
            let half = disc.sqrt().ok_or(())?;
            let (chord_lo, chord_hi) = (ch.sub(&half), ch.add(&half));
            // side parameter range in y, ordered by the walk
            let yv = |v: &Vertex| -> Result<Option<Interval>, ()> {
                match v {
                    Vertex::Interior { y_sq, .. } => {
                        Ok(Some(field_interval(y_sq, p).sqrt().ok_or(())?))
                    }
                    Vertex::Ideal(IdealPoint::Finite(_)) => Ok(Some(Interval::from_i64(0, p))),
                    Vertex::Ideal(IdealPoint::Infinity) => Ok(None),
                }
            };
            let y_from = yv(&side.from)?;
            let y_to = yv(&side.to)?;
            let (lo_v, hi_v) = if travel == Travel::Up {
                (y_from, y_to)
            } else {
                (y_to, y_from)
            };
            // intersect [lo, hi] (None = unbounded above for hi, 0 for lo)
            let lo_bound = lo_v.unwrap_or_else(|| Interval::from_i64(0, p));
            let (clip_lo, lo_is_vertex) = interval_max(&lo_bound, &chord_lo)?;
            let (clip_hi, hi_is_vertex) = match hi_v {
                Some(h) => {
                    let (m, from_side) = interval_min(&h, &chord_hi)?;
                    (m, from_side)
                }
                None => (chord_hi.clone(), false),
            };
            match clip_lo.lt(&clip_hi) {
                Some(true) => {}
                Some(false) => return Ok(None),
                None => return Err(()),
            }
            let p_lo = NumPoint { x: xi.clone(), y: clip_lo };
            let p_hi = NumPoint { x: xi, y: clip_hi };
            let (start, end, siv, eiv) = if travel == Travel::Up {
                (p_lo, p_hi, lo_is_vertex, hi_is_vertex)
            } else {
                (p_hi, p_lo, hi_is_vertex, lo_is_vertex)
            };
            Ok(Some(Piece {
                start,
                end,
                start_is_vertex: siv,
                end_is_vertex: eiv,
                side_index,
            }))
        }
        Geodesic::Circle { center, radius_sq } => {
            let m = field_interval(center, p);
            let rho = field_interval(radius_sq, p);
            // radical line y = alpha x + beta of the geodesic circle and
            // the euclidean ball circle (center (0, ch), radius sh)
            let alpha = m.div(ch).ok_or(())?;
            let ch2 = ch.mul(ch);
            let sh2 = sh.mul(sh);
            let beta = rho
                .sub(&sh2)
                .sub(&m.mul(&m))
                .add(&ch2)
                .div(&ch.mul(&Interval::from_i64(2, p)))
                .ok_or(())?;
            // substitute into (x - m)^2 + y^2 = rho
            let a = Interval::from_i64(1, p).add(&alpha.mul(&alpha));
            let b = alpha.mul(&beta).mul(&Interval::from_i64(2, p)).sub(&m.mul(&Interval::from_i64(2, p)));
            let c = m.mul(&m).add(&beta.mul(&beta)).sub(&rho);
            let disc = b.mul(&b).sub(&a.mul(&c).mul(&Interval::from_i64(4, p)));
            if disc.is_strictly_negative() {
                return Ok(None);
            }
            if !disc.is_strictly_positive() {
                return Err(());
            }
            let root = disc.sqrt().ok_or(())?;
            let two_a = a.mul(&Interval::from_i64(2, p));
            let x_minus = b.neg().sub(&root).div(&two_a).ok_or(())?;
            let x_plus = b.neg().add(&root).div(&two_a).ok_or(())?;
            // side range in x ordered along increasing x
            let sx = |v: &Vertex| -> Result<Interval, ()> {
                let s = v.x_surd().ok_or(())?;
                let a = field_interval(&s.a, p);
                let b = field_interval(&s.b, p);
                let r = field_interval(&s.r, p).sqrt().ok_or(())?;
                Ok(a.add(&b.mul(&r)))
            };
            let xa = sx(&side.from)?;
            let xb = sx(&side.to)?;
            let (x_lo_side, x_hi_side) = if travel == Travel::XInc {
                (xa, xb)
            } else {
                (xb, xa)
            };
            let (clip_lo, lo_is_vertex) = interval_max(&x_lo_side, &x_minus)?;
            let (clip_hi, hi_is_vertex) = interval_min(&x_hi_side, &x_plus)?;
            match clip_lo.lt(&clip_hi) {
                Some(true) => {}
                Some(false) => return Ok(None),
                None => return Err(()),
            }
            let y_at = |x: &Interval| -> Result<Interval, ()> {
                let y_sq = rho.sub(&x.sub(&m).mul(&x.sub(&m)));
                y_sq.sqrt().ok_or(())
            };
            let p_lo = NumPoint { y: y_at(&clip_lo)?, x: clip_lo };
            let p_hi = NumPoint { y: y_at(&clip_hi)?, x: clip_hi };
            let (start, end, siv, eiv) = if travel == Travel::XInc {
                (p_lo, p_hi, lo_is_vertex, hi_is_vertex)
            } else {
                (p_hi, p_lo, hi_is_vertex, lo_is_vertex)
            };
            Ok(Some(Piece {
                start,
                end,
                start_is_vertex: siv,
                end_is_vertex: eiv,
                side_index,
            }))
        }
    }
}

/// max of two intervals with provenance: true when the first (the side
/// bound) wins strictly.
fn interval_max(side_bound: &Interval, chord: &Interval) -> Result<(Interval, bool), ()> {
    match chord.lt(side_bound) {
        Some(true) => Ok((side_bound.clone(), true)),
        Some(false) => Ok((chord.clone(), false)),
        None => Err(()),
    }
}

fn interval_min(side_bound: &Interval, chord: &Interval) -> Result<(Interval, bool), ()> {
    match side_bound.lt(chord) {
        Some(true) => Ok((side_bound.clone(), true)),
        Some(false) => Ok((chord.clone(), false)),
        None => Err(()),
    }
}

/// Initial tangent direction at i of the geodesic from i toward `q`:
/// the division-free form (2 q_x, |q|^2 - 1), which always points toward
/// `q` (the tangent-chord angle of a geodesic is acute). Vanishes only
/// at q = i, which cannot occur.
fn radial_tangent_at_center(q: &NumPoint, p: usize) -> Result<(Interval, Interval), ()> {
    let one = Interval::from_i64(1, p);
    let two = Interval::from_i64(2, p);
    let tx = two.mul(&q.x);
    let ty = q.x.mul(&q.x).add(&q.y.mul(&q.y)).sub(&one);
    if tx.contains_zero() && ty.contains_zero() {
        return Err(());
    }
    Ok((tx, ty))
}

/// Tangent of a side at a numeric point, oriented along the walk.
fn side_tangent_at(
    side: &SideData,
    at: &NumPoint,
    p: usize,
) -> (Interval, Interval) {
    match &side.hp.geodesic {
        Geodesic::Vertical { .. } => {
            let sgn = if travel_of(side) == Travel::Up { 1 } else { -1 };
            (Interval::from_i64(0, p), Interval::from_i64(sgn, p))
        }
        Geodesic::Circle { center, .. } => {
            let m = field_interval(center, p);
            // (-y, x - m) decreases x
            let t = (at.y.neg(), at.x.sub(&m));
            if travel_of(side) == Travel::XDec {
                t
            } else {
                (t.0.neg(), t.1.neg())
            }
        }
    }
}

/// Tangent at `at` of the geodesic from `at` toward i: the division-free
/// form (-2 x y, 2 x^2 - |at|^2 + 1), always oriented toward i.
fn tangent_toward_center(at: &NumPoint, p: usize) -> Result<(Interval, Interval), ()> {
    let one = Interval::from_i64(1, p);
    let two = Interval::from_i64(2, p);
    let tx = two.mul(&at.x).mul(&at.y).neg();
    let norm = at.x.mul(&at.x).add(&at.y.mul(&at.y));
    let ty = two.mul(&at.x).mul(&at.x).sub(&norm).add(&one);
    if tx.contains_zero() && ty.contains_zero() {
        return Err(());
    }
    debug_assert!(
        !tx.mul(&at.x.neg())
            .add(&ty.mul(&one.sub(&at.y)))
            .is_strictly_negative(),
        "tangent must point toward the center"
    );
    Ok((tx, ty))
}

fn angle_between(t1: &(Interval, Interval), t2: &(Interval, Interval)) -> Result<Interval, ()> {
    let dot = t1.0.mul(&t2.0).add(&t1.1.mul(&t2.1));
    let n1 = t1.0.mul(&t1.0).add(&t1.1.mul(&t1.1));
    let n2 = t2.0.mul(&t2.0).add(&t2.1.mul(&t2.1));
    let denom = n1.mul(&n2).sqrt().ok_or(())?;
    let c = dot.div(&denom).ok_or(())?;
    c.acos().ok_or(())
}

/// Hyperbolic area of the triangle (i, p, q) with p -> q counterclockwise.
fn triangle_area(
    side: &SideData,
    piece: &Piece,
    precision: usize,
) -> Result<Interval, ()> {
    let p = precision;
    let pi = Interval::pi(p);
    let a = &piece.start;
    let b = &piece.end;
    // angle at i between radials toward a and b
    let ra = radial_tangent_at_center(a, p)?;
    let rb = radial_tangent_at_center(b, p)?;
    let at_i = angle_between(&ra, &rb)?;
    // angle at a between (a -> i) and the side toward b
    let ta_i = tangent_toward_center(a, p)?;
    let ta_s = side_tangent_at(side, a, p);
    let at_a = angle_between(&ta_i, &ta_s)?;
    // angle at b between the side arriving (reversed) and (b -> i)
    let tb_s = side_tangent_at(side, b, p);
    let tb_rev = (tb_s.0.neg(), tb_s.1.neg());
    let tb_i = tangent_toward_center(b, p)?;
    let at_b = angle_between(&tb_rev, &tb_i)?;
    Ok(pi.sub(&at_i).sub(&at_a).sub(&at_b))
}

/// Direction angle at i toward a point, in [0, 2 pi) as an interval.
fn fan_angle(q: &NumPoint, p: usize) -> Result<Interval, ()> {
    let t = radial_tangent_at_center(q, p)?;
    Interval::atan2(&t.1, &t.0).ok_or(())
}

/// Area of the polygon intersected with the ball B(i, r), as a certified
/// interval. `None` when the geometry does not resolve at this precision.
pub fn area_in_ball(poly: &HPolygon, ball: &BallData, precision: usize) -> Option<Interval> {
    let p = precision;
    let sides: Vec<&SideData> = poly.sides().collect();
    let two_pi = Interval::two_pi(p);
    let cosh_minus_one = ball.cosh.sub(&Interval::from_i64(1, p));
    if sides.is_empty() {
        return Some(two_pi.mul(&cosh_minus_one));
    }
    let mut pieces: Vec<Piece> = Vec::new();
    for (idx, s) in sides.iter().enumerate() {
        match clip_side(s, idx, ball, p) {
            Ok(Some(piece)) => pieces.push(piece),
            Ok(None) => {}
            Err(()) => return None,
        }
    }
    if pieces.is_empty() {
        // no side enters the ball: the ball is contained in the polygon
        return Some(two_pi.mul(&cosh_minus_one));
    }
    let mut total = Interval::from_i64(0, p);
    let n = pieces.len();
    for (k, piece) in pieces.iter().enumerate() {
        let side = sides[piece.side_index];
        total = total.add(&triangle_area(side, piece, p).ok()?);
        // gap to the next piece
        let next = &pieces[(k + 1) % n];
        let shared_vertex = piece.end_is_vertex
            && next.start_is_vertex
            && consecutive_sides(piece.side_index, next.side_index, sides.len(), poly);
        if shared_vertex {
            continue;
        }
        let phi_end = fan_angle(&piece.end, p).ok()?;
        let phi_start = fan_angle(&next.start, p).ok()?;
        let mut delta = phi_start.sub(&phi_end);
        if delta.is_strictly_negative() {
            delta = delta.add(&two_pi);
        } else if delta.contains_zero() && n == 1 {
            // single piece wrapping almost fully cannot be told from a
            // zero gap at this precision
            return None;
        } else if delta.contains_zero() {
            // adjacent exits at the same point: zero gap
            delta = delta.max(&Interval::from_i64(0, p));
        }
        total = total.add(&delta.mul(&cosh_minus_one));
    }
    Some(total)
}

/// Are the two side indices adjacent in the boundary (sharing a vertex,
/// possibly with no arcs between them)?
fn consecutive_sides(a: usize, b: usize, n_sides: usize, poly: &HPolygon) -> bool {
    let _ = poly;
    b == (a + 1) % n_sides
}

/// Euclidean center and radius data of the ball, exposed for rendering.
pub fn ball_euclidean_data(ball: &BallData) -> (f64, f64) {
    (ball.cosh.mid_f64(), ball.sinh.mid_f64())
}
