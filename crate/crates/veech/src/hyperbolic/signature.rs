//! Side pairings and the Fuchsian signature of a finite-area domain.
//!
//! The side on the bisector of A is matched onto the side on the bisector
//! of A^{-1} by the isometry A^{-1}, reversing the boundary orientation;
//! an order-two element pairs its side with itself and the side is split
//! at the exact fixed point. Vertex cycles are walked through the
//! pairings; the cycle transformation is computed exactly in the matrix
//! group, which certifies elliptic orders and parabolic cusps, and the
//! interval angle sums are checked against 2 pi / m. These checks are
//! precisely the Poincare conditions: when they pass, the polygon is a
//! fundamental domain of the group its pairings generate.

use super::area::angle_cos_data_pub as angle_cos_data;
use super::polygon::{point_strictly_inside_side, HPolygon, SideData};
use super::{IdealPoint, Surd, Vertex};
use crate::exactnum::FieldElement;
use crate::geom::Mat2;
use crate::numeric::Interval;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub genus: usize,
    /// orders of the elliptic points, sorted ascending
    pub elliptic_orders: Vec<usize>,
    pub cusps: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.genus)?;
        let mut first = true;
        for m in &self.elliptic_orders {
            write!(f, "{} {m}", if first { ";" } else { "," })?;
            first = false;
        }
        for _ in 0..self.cusps {
            write!(f, "{} inf", if first { ";" } else { "," })?;
            first = false;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug)]
pub enum SignatureError {
    FreeBoundary,
    UnpairedSide,
    PairingMismatch,
    FixedPointOffSide,
    BadCycle,
    Unresolved,
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::FreeBoundary => write!(f, "domain has free boundary"),
            SignatureError::UnpairedSide => write!(f, "a side has no partner with the inverse tag"),
            SignatureError::PairingMismatch => {
                write!(f, "the inverse element does not map the side onto its partner")
            }
            SignatureError::FixedPointOffSide => {
                write!(f, "order-two fixed point does not lie on its side")
            }
            SignatureError::BadCycle => write!(f, "vertex cycle transformation is inconsistent"),
            SignatureError::Unresolved => write!(f, "angle sums did not resolve at this precision"),
        }
    }
}

impl std::error::Error for SignatureError {}

/// Exact image of an interior point (x, y^2) under a Mobius matrix with
/// determinant one.
pub fn mobius_interior(g: &Mat2, x: &FieldElement, y_sq: &FieldElement) -> (FieldElement, FieldElement) {
    let cxd = g.c.mul(x).add(&g.d);
    let denom = cxd.square().add(&g.c.square().mul(y_sq));
    let axb = g.a.mul(x).add(&g.b);
    let num_x = axb.mul(&cxd).add(&g.a.mul(&g.c).mul(y_sq));
    let x2 = num_x.div(&denom).expect("image denominator positive");
    let y_sq2 = y_sq.div(&denom.square()).expect("image denominator positive");
    (x2, y_sq2)
}

/// Exact image of an ideal point.
pub fn mobius_ideal(g: &Mat2, p: &IdealPoint) -> IdealPoint {
    match p {
        IdealPoint::Infinity => {
            if g.c.is_zero() {
                IdealPoint::Infinity
            } else {
                IdealPoint::Finite(Surd::rational(g.a.div(&g.c).expect("c nonzero")))
            }
        }
        IdealPoint::Finite(s) => {
            // (a s + b) / (c s + d) with s = p + q sqrt(r)
            let n0 = g.a.mul(&s.a).add(&g.b);
            let n1 = g.a.mul(&s.b);
            let d0 = g.c.mul(&s.a).add(&g.d);
            let d1 = g.c.mul(&s.b);
            let denom = Surd::new(d0.clone(), d1.clone(), s.r.clone());
            if denom.sign() == 0 {
                return IdealPoint::Infinity;
            }
            // multiply by the conjugate of the denominator
            let norm = d0.square().sub(&d1.square().mul(&s.r));
            let real = n0.mul(&d0).sub(&n1.mul(&d1).mul(&s.r));
            let rad = n1.mul(&d0).sub(&n0.mul(&d1));
            IdealPoint::Finite(Surd::new(
                real.div(&norm).expect("nonzero norm"),
                rad.div(&norm).expect("nonzero norm"),
                s.r.clone(),
            ))
        }
    }
}

pub fn mobius_vertex(g: &Mat2, v: &Vertex) -> Vertex {
    match v {
        Vertex::Interior { x, y_sq } => {
            let (x2, y2) = mobius_interior(g, x, y_sq);
            Vertex::Interior { x: x2, y_sq: y2 }
        }
        Vertex::Ideal(p) => Vertex::Ideal(mobius_ideal(g, p)),
    }
}

struct Edge {
    side: SideData,
    partner: usize,
    /// maps this edge onto its partner, from -> partner.to, to -> partner.from
    map: Mat2,
}

/// Verify the side pairings of a finite-area domain and compute its
/// signature. Returns the signature and one generator per side pair.
pub fn side_pairings_and_signature(
    poly: &HPolygon,
    precision: usize,
) -> Result<(Signature, Vec<Mat2>), SignatureError> {
    if poly.has_free_arc() {
        return Err(SignatureError::FreeBoundary);
    }
    let sides: Vec<SideData> = poly.sides().cloned().collect();
    let n = sides.len();
    if n < 3 {
        return Err(SignatureError::BadCycle);
    }

    // split self-paired sides (tags of order two) at their fixed points
    let mut edges: Vec<Edge> = Vec::with_capacity(n + 4);
    for s in &sides {
        let a = &s.hp.matrix;
        let a_inv_canon = a.inv_unimodular().psl_canonical();
        if a_inv_canon == *a && !a.is_plus_minus_identity() {
            // elliptic of order two: fixed point x = (a-d)/(2c),
            // y^2 = (4 - tr^2) / (4 c^2)
            let spec = a.spec().clone();
            let two_c = a.c.mul_rat(&crate::exactnum::rat_int(2));
            if two_c.is_zero() {
                return Err(SignatureError::PairingMismatch);
            }
            let fx = a.a.sub(&a.d).div(&two_c).expect("c nonzero");
            let tr = a.trace();
            let fy = FieldElement::from_int(&spec, 4)
                .sub(&tr.square())
                .div(&two_c.square())
                .expect("c nonzero");
            if !fy.is_positive() {
                return Err(SignatureError::PairingMismatch);
            }
            if !point_strictly_inside_side(s, &fx, &fy) {
                return Err(SignatureError::FixedPointOffSide);
            }
            // the map must swap the side endpoints
            if mobius_vertex(a, &s.from) != s.to || mobius_vertex(a, &s.to) != s.from {
                return Err(SignatureError::PairingMismatch);
            }
            let fixed = Vertex::Interior { x: fx, y_sq: fy };
            let i0 = edges.len();
            edges.push(Edge {
                side: SideData { hp: s.hp.clone(), from: s.from.clone(), to: fixed.clone() },
                partner: i0 + 1,
                map: a.clone(),
            });
            edges.push(Edge {
                side: SideData { hp: s.hp.clone(), from: fixed, to: s.to.clone() },
                partner: i0,
                map: a.inv_unimodular(),
            });
        } else {
            edges.push(Edge {
                side: s.clone(),
                partner: usize::MAX,
                map: a.inv_unimodular(),
            });
        }
    }
    // match the remaining pairs by inverse tags
    let m = edges.len();
    for i in 0..m {
        if edges[i].partner != usize::MAX {
            continue;
        }
        let tag = edges[i].side.hp.matrix.clone();
        let want = tag.inv_unimodular().psl_canonical();
        let j = (0..m)
            .find(|&j| j != i && edges[j].partner == usize::MAX && edges[j].side.hp.matrix == want)
            .ok_or(SignatureError::UnpairedSide)?;
        // verify the map carries endpoints across, reversing orientation
        let g = edges[i].map.clone();
        if mobius_vertex(&g, &edges[i].side.from) != edges[j].side.to
            || mobius_vertex(&g, &edges[i].side.to) != edges[j].side.from
        {
            return Err(SignatureError::PairingMismatch);
        }
        edges[i].partner = j;
        edges[j].partner = i;
    }

    // vertex cycles: vertex k sits between edge k-1 and edge k (it is
    // from(edge k)); the pairing of edge k sends it to from(partner + 1)
    let next_vertex = |k: usize| -> usize { (edges[k].partner + 1) % m };
    let mut visited = vec![false; m];
    let mut elliptic: Vec<usize> = Vec::new();
    let mut cusps = 0usize;
    let mut cycles = 0usize;
    let spec = sides[0].hp.matrix.spec().clone();
    let two = FieldElement::from_int(&spec, 2);
    for k0 in 0..m {
        if visited[k0] {
            continue;
        }
        cycles += 1;
        let mut transform = Mat2::identity(&spec);
        let ideal_cycle = matches!(edges[k0].side.from, Vertex::Ideal(_));
        let mut angle_sum = Interval::from_i64(0, precision);
        let mut k = k0;
        loop {
            visited[k] = true;
            debug_assert_eq!(
                matches!(edges[k].side.from, Vertex::Ideal(_)),
                ideal_cycle,
                "cycle mixes interior and ideal vertices"
            );
            if let Vertex::Interior { x, y_sq } = &edges[k].side.from {
                let incoming = &edges[(k + m - 1) % m].side;
                let outgoing = &edges[k].side;
                let (q, s) = angle_cos_data(incoming, outgoing, x, y_sq);
                let qi = field_interval(&q, precision);
                let si = field_interval(&s, precision);
                let denom = si.sqrt().ok_or(SignatureError::Unresolved)?;
                let c = qi.div(&denom).ok_or(SignatureError::Unresolved)?;
                let theta = c.acos().ok_or(SignatureError::Unresolved)?;
                angle_sum = angle_sum.add(&theta);
            }
            transform = edges[k].map.mul(&transform);
            k = next_vertex(k);
            if k == k0 {
                break;
            }
        }
        if ideal_cycle {
            // the cycle transformation must be parabolic
            let tr_sq = transform.trace().square();
            let is_parabolic =
                tr_sq == FieldElement::from_int(&spec, 4) && !transform.is_plus_minus_identity();
            if !is_parabolic {
                return Err(SignatureError::BadCycle);
            }
            cusps += 1;
        } else {
            // exact order of the cycle transformation in PSL
            let mut order = 0usize;
            let mut power = Mat2::identity(&spec);
            for step in 1..=64 {
                power = transform.mul(&power);
                if power.is_plus_minus_identity() {
                    order = step;
                    break;
                }
            }
            if order == 0 {
                return Err(SignatureError::BadCycle);
            }
            // certified angle check: the sum must be 2 pi / order, and the
            // only multiple of 2 pi / order below 4 pi / order is itself
            let pi = Interval::pi(precision);
            let target_hi = pi
                .mul(&Interval::from_i64(4, precision))
                .div(&Interval::from_i64(order as i64, precision))
                .expect("order positive");
            match angle_sum.lt(&target_hi) {
                Some(true) => {}
                _ => return Err(SignatureError::Unresolved),
            }
            if !angle_sum.is_strictly_positive() {
                return Err(SignatureError::Unresolved);
            }
            let _ = &two;
            if order > 1 {
                elliptic.push(order);
            }
        }
    }

    let e_pairs = m / 2;
    debug_assert_eq!(m % 2, 0);
    let chi = cycles as i64 - e_pairs as i64 + 1;
    if (2 - chi) % 2 != 0 || chi > 2 {
        return Err(SignatureError::BadCycle);
    }
    let genus = ((2 - chi) / 2) as usize;
    elliptic.sort_unstable();

    let mut generators: Vec<Mat2> = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        if i < e.partner {
            generators.push(e.map.clone());
        }
    }
    Ok((
        Signature {
            genus,
            elliptic_orders: elliptic,
            cusps,
        },
        generators,
    ))
}

fn field_interval(x: &FieldElement, p: usize) -> Interval {
    let (lo, hi) = x.to_interval(p as u32);
    Interval::from_rational_bounds(&lo, &hi, p)
}
