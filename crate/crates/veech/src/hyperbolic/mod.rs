//! Upper half-plane geometry for Dirichlet domains centered at i.
//!
//! For a determinant-one matrix A with entries in the coordinate field,
//! the half-plane of points nearer to i than to A*i is bounded by a
//! geodesic whose data (a vertical line, or a semicircle centered on the
//! real axis) again lies in the field: clearing denominators in the
//! equal-cosh-distance equation gives
//!     E_A(x, y) = (1 - c^2 - d^2)(x^2 + y^2) + 2(ac + bd) x + (1 - a^2 - b^2)
//! with the kept side E_A <= 0. Polygon vertices are represented as
//! (x, y^2) pairs of exact field elements, ideal vertices as quadratic
//! surds, and every incidence decision is an exact sign test. Only areas
//! are numeric: they are certified intervals and feed the stopping test,
//! which is conservative by construction.

mod area;
pub mod polygon;
mod signature;
mod surd;

pub use area::{area_in_ball, ball_euclidean_data, gauss_bonnet_area, PolygonArea};
pub use polygon::{ArcData, HPolygon, Item, SideData};
pub use signature::{side_pairings_and_signature, Signature, SignatureError};
pub use surd::{sign_a_plus_b_sqrt, Surd};

use crate::exactnum::{FieldElement, Rat};
use crate::geom::Mat2;
use crate::membership::nu_sq;
use crate::numeric::Interval;
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone)]
pub enum HyperbolicError {
    FixesCenter,
    NormBelowMinimum,
}

impl fmt::Display for HyperbolicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperbolicError::FixesCenter => write!(f, "matrix fixes i: no bisector half-plane"),
            HyperbolicError::NormBelowMinimum => write!(f, "Frobenius norm below sqrt 2"),
        }
    }
}

impl std::error::Error for HyperbolicError {}

/// A complete geodesic of the upper half-plane with exact field data.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Geodesic {
    Vertical { x: FieldElement },
    /// semicircle centered on the real axis
    Circle { center: FieldElement, radius_sq: FieldElement },
}

impl fmt::Debug for Geodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Geodesic::Vertical { x } => write!(f, "x = {x}"),
            Geodesic::Circle { center, radius_sq } => {
                write!(f, "|z - {center}|^2 = {radius_sq}")
            }
        }
    }
}

/// Which side of the geodesic is kept (closed).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    /// x <= x0 for verticals, inside for circles
    LowInside,
    /// x >= x0 for verticals, outside for circles
    HighOutside,
}

/// The half-plane {z : d(z, i) <= d(z, A i)}.
#[derive(Clone, Debug)]
pub struct HalfPlane {
    pub geodesic: Geodesic,
    pub keep: Keep,
    /// PSL-canonical source matrix
    pub matrix: Mat2,
}

/// Classification of a point against a closed half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    In,
    On,
    Out,
}

/// A point of the ideal boundary, ordered as the real line with infinity
/// as the maximum (the circle closes from +infinity back to -infinity).
#[derive(Clone, Debug)]
pub enum IdealPoint {
    Finite(Surd),
    Infinity,
}

impl IdealPoint {
    pub fn cmp_ideal(&self, other: &IdealPoint) -> Ordering {
        match (self, other) {
            (IdealPoint::Infinity, IdealPoint::Infinity) => Ordering::Equal,
            (IdealPoint::Infinity, _) => Ordering::Greater,
            (_, IdealPoint::Infinity) => Ordering::Less,
            (IdealPoint::Finite(a), IdealPoint::Finite(b)) => a.cmp_surd(b),
        }
    }
}

impl PartialEq for IdealPoint {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_ideal(other) == Ordering::Equal
    }
}

impl Eq for IdealPoint {}

/// A polygon vertex: an interior point carried as (x, y^2), or ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vertex {
    Interior { x: FieldElement, y_sq: FieldElement },
    Ideal(IdealPoint),
}

impl Vertex {
    pub fn ideal_finite(s: Surd) -> Vertex {
        Vertex::Ideal(IdealPoint::Finite(s))
    }

    pub fn x_surd(&self) -> Option<Surd> {
        match self {
            Vertex::Interior { x, .. } => Some(Surd::rational(x.clone())),
            Vertex::Ideal(IdealPoint::Finite(s)) => Some(s.clone()),
            Vertex::Ideal(IdealPoint::Infinity) => None,
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        match self {
            Vertex::Interior { x, y_sq } => (x.to_f64(), y_sq.to_f64().max(0.0).sqrt()),
            Vertex::Ideal(IdealPoint::Finite(s)) => (s.to_f64(), 0.0),
            Vertex::Ideal(IdealPoint::Infinity) => (f64::INFINITY, f64::INFINITY),
        }
    }
}

impl HalfPlane {
    /// The bisector half-plane {z : d(z, i) <= d(z, A i)}, defined when A
    /// does not fix i.
    pub fn from_matrix(m: &Mat2) -> Result<HalfPlane, HyperbolicError> {
        let spec = m.spec().clone();
        let one = FieldElement::one(&spec);
        let beta = m.c.square().add(&m.d.square());
        let gamma = m.a.mul(&m.c).add(&m.b.mul(&m.d));
        let delta = one.sub(&m.a.square()).sub(&m.b.square());
        let beta_minus_one = beta.sub(&one);
        if beta_minus_one.is_zero() {
            if gamma.is_zero() {
                return Err(HyperbolicError::FixesCenter);
            }
            // boundary 2 gamma x + delta = 0
            let x0 = delta
                .neg()
                .div(&gamma.mul_rat(&crate::exactnum::rat_int(2)))
                .expect("gamma nonzero");
            let keep = if gamma.sign() > 0 { Keep::LowInside } else { Keep::HighOutside };
            return Ok(HalfPlane {
                geodesic: Geodesic::Vertical { x: x0 },
                keep,
                matrix: m.psl_canonical(),
            });
        }
        // E = (1 - beta)[(x - center)^2 + y^2 - radius_sq]
        let center = gamma.div(&beta_minus_one).expect("beta != 1");
        let radius_sq = center.square().add(&delta.div(&beta_minus_one).expect("beta != 1"));
        debug_assert!(radius_sq.is_positive(), "bisector circle has positive radius");
        let keep = if beta_minus_one.sign() < 0 {
            // 1 - beta > 0: E <= 0 is the inside
            Keep::LowInside
        } else {
            Keep::HighOutside
        };
        Ok(HalfPlane {
            geodesic: Geodesic::Circle { center, radius_sq },
            keep,
            matrix: m.psl_canonical(),
        })
    }

    /// Classify an interior point given as (x, y^2).
    pub fn classify_interior(&self, x: &FieldElement, y_sq: &FieldElement) -> PointClass {
        let sign = match &self.geodesic {
            Geodesic::Vertical { x: x0 } => x.sub(x0).sign(),
            Geodesic::Circle { center, radius_sq } => {
                x.sub(center).square().add(y_sq).sub(radius_sq).sign()
            }
        };
        self.side_from_sign(sign)
    }

    /// Classify an ideal point.
    pub fn classify_ideal(&self, p: &IdealPoint) -> PointClass {
        match (p, &self.geodesic) {
            (IdealPoint::Infinity, Geodesic::Vertical { .. }) => PointClass::On,
            (IdealPoint::Infinity, Geodesic::Circle { .. }) => match self.keep {
                Keep::LowInside => PointClass::Out,
                Keep::HighOutside => PointClass::In,
            },
            (IdealPoint::Finite(s), Geodesic::Vertical { x: x0 }) => {
                let sign = match s.cmp_field(x0) {
                    Ordering::Less => -1,
                    Ordering::Equal => 0,
                    Ordering::Greater => 1,
                };
                self.side_from_sign(sign)
            }
            (IdealPoint::Finite(s), Geodesic::Circle { center, radius_sq }) => {
                // sign of (x - m)^2 - rho at the surd
                let one = FieldElement::one(center.spec());
                let q1 = center.mul_rat(&crate::exactnum::rat_int(-2));
                let q0 = center.square().sub(radius_sq);
                let sign = s.quadratic_sign(&one, &q1, &q0);
                self.side_from_sign(sign)
            }
        }
    }

    pub fn classify_vertex(&self, v: &Vertex) -> PointClass {
        match v {
            Vertex::Interior { x, y_sq } => self.classify_interior(x, y_sq),
            Vertex::Ideal(p) => self.classify_ideal(p),
        }
    }

    fn side_from_sign(&self, sign: i32) -> PointClass {
        let flipped = match self.keep {
            Keep::LowInside => sign,
            Keep::HighOutside => -sign,
        };
        match flipped {
            0 => PointClass::On,
            s if s < 0 => PointClass::In,
            _ => PointClass::Out,
        }
    }

    /// Ideal endpoints of the boundary geodesic, ordered so that walking
    /// the boundary counterclockwise around the kept side runs from the
    /// first to the second.
    pub fn oriented_ideal_endpoints(&self) -> (IdealPoint, IdealPoint) {
        match (&self.geodesic, self.keep) {
            (Geodesic::Vertical { x }, Keep::LowInside) => (
                IdealPoint::Finite(Surd::rational(x.clone())),
                IdealPoint::Infinity,
            ),
            (Geodesic::Vertical { x }, Keep::HighOutside) => (
                IdealPoint::Infinity,
                IdealPoint::Finite(Surd::rational(x.clone())),
            ),
            (Geodesic::Circle { center, radius_sq }, Keep::LowInside) => {
                let one = FieldElement::one(center.spec());
                (
                    IdealPoint::Finite(Surd::new(center.clone(), one.clone(), radius_sq.clone())),
                    IdealPoint::Finite(Surd::new(center.clone(), one.neg(), radius_sq.clone())),
                )
            }
            (Geodesic::Circle { center, radius_sq }, Keep::HighOutside) => {
                let one = FieldElement::one(center.spec());
                (
                    IdealPoint::Finite(Surd::new(center.clone(), one.clone().neg(), radius_sq.clone())),
                    IdealPoint::Finite(Surd::new(center.clone(), one, radius_sq.clone())),
                )
            }
        }
    }
}

/// Hyperbolic distance from i to A*i as a certified interval:
/// d = 2 log nu(|A|). Errors when A fixes i.
pub fn dist_center(m: &Mat2, precision_bits: u32) -> Result<Interval, HyperbolicError> {
    let one = FieldElement::one(m.spec());
    let beta = m.c.square().add(&m.d.square());
    let gamma = m.a.mul(&m.c).add(&m.b.mul(&m.d));
    if beta.sub(&one).is_zero() && gamma.is_zero() {
        return Err(HyperbolicError::FixesCenter);
    }
    let norm_sq = m.frobenius_norm_sq();
    let nu = nu_sq(&norm_sq, precision_bits).map_err(|_| HyperbolicError::NormBelowMinimum)?;
    // 2 log nu = log(nu^2)
    Ok(nu.interval.ln().expect("nu^2 >= 1"))
}

/// cosh and sinh of the agreement-ball radius log nu(a), plus the radius
/// itself, from the squared Frobenius norm bound.
pub struct BallData {
    pub radius: Interval,
    pub cosh: Interval,
    pub sinh: Interval,
}

pub fn ball_data(a_sq: &Rat, spec: &std::sync::Arc<crate::exactnum::FieldSpec>, precision_bits: u32) -> Result<BallData, HyperbolicError> {
    let a_sq_el = FieldElement::from_rat(spec, a_sq.clone());
    let nu2 = nu_sq(&a_sq_el, precision_bits).map_err(|_| HyperbolicError::NormBelowMinimum)?;
    let p = precision_bits as usize;
    let nu = nu2.interval.sqrt().expect("nu^2 positive");
    let inv = Interval::from_i64(1, p).div(&nu).expect("nu >= 1");
    let half = Interval::from_rational(&crate::exactnum::rat(1, 2), p);
    let cosh = nu.add(&inv).mul(&half);
    let sinh = nu.sub(&inv).mul(&half);
    let radius = nu2.interval.ln().expect("nu^2 >= 1").mul(&half);
    Ok(BallData { radius, cosh, sinh })
}

/// Certified three-valued verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifiedBool {
    True,
    False,
    Unresolved,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int, FieldSpec};

    #[test]
    fn translation_gives_vertical_bisector() {
        let q = FieldSpec::rationals();
        // z -> z + 1: bisector x = 1/2, keep x <= 1/2
        let t = Mat2::from_ints(&q, 1, 1, 0, 1);
        let h = HalfPlane::from_matrix(&t).unwrap();
        match &h.geodesic {
            Geodesic::Vertical { x } => {
                assert_eq!(x, &FieldElement::from_rat(&q, rat(1, 2)));
            }
            _ => panic!("expected vertical"),
        }
        assert_eq!(h.keep, Keep::LowInside);
        // i is strictly inside
        assert_eq!(
            h.classify_interior(&FieldElement::zero(&q), &FieldElement::one(&q)),
            PointClass::In
        );
    }

    #[test]
    fn diagonal_gives_circle_bisector() {
        let q = FieldSpec::rationals();
        // diag(2, 1/2): A i = 4i, bisector |z| = 2, keep inside
        let m = Mat2::from_rats(&q, rat_int(2), rat_int(0), rat_int(0), rat(1, 2));
        let h = HalfPlane::from_matrix(&m).unwrap();
        match &h.geodesic {
            Geodesic::Circle { center, radius_sq } => {
                assert!(center.is_zero());
                assert_eq!(radius_sq, &FieldElement::from_int(&q, 4));
            }
            _ => panic!("expected circle"),
        }
        assert_eq!(h.keep, Keep::LowInside);
        // and the reciprocal keeps the outside of |z| = 1/2
        let m2 = Mat2::from_rats(&q, rat(1, 2), rat_int(0), rat_int(0), rat_int(2));
        let h2 = HalfPlane::from_matrix(&m2).unwrap();
        match &h2.geodesic {
            Geodesic::Circle { center, radius_sq } => {
                assert!(center.is_zero());
                assert_eq!(radius_sq, &FieldElement::from_rat(&q, rat(1, 4)));
            }
            _ => panic!("expected circle"),
        }
        assert_eq!(h2.keep, Keep::HighOutside);
    }

    #[test]
    fn rotation_is_rejected() {
        let q = FieldSpec::rationals();
        let s = Mat2::from_ints(&q, 0, -1, 1, 0);
        assert!(HalfPlane::from_matrix(&s).is_err());
        assert!(dist_center(&s, 64).is_err());
    }

    #[test]
    fn dist_center_values() {
        let q = FieldSpec::rationals();
        // diag(2, 1/2): d(i, 4i) = log 4
        let m = Mat2::from_rats(&q, rat_int(2), rat_int(0), rat_int(0), rat(1, 2));
        let d = dist_center(&m, 96).unwrap();
        let expect = 4f64.ln();
        assert!(d.lo_f64() <= expect && expect <= d.hi_f64());
        assert!(d.width_f64() < 1e-20);
        // shear (1,1;0,1): cosh d(i, i+1) = 3/2
        let t = Mat2::from_ints(&q, 1, 1, 0, 1);
        let d = dist_center(&t, 96).unwrap();
        let expect = 1.5f64.acosh();
        assert!(d.lo_f64() <= expect && expect <= d.hi_f64());
    }

    #[test]
    fn half_plane_contains_agreement_ball() {
        // B(i, log nu(|A|)) inside H_i(A), sampled
        let q = FieldSpec::rationals();
        for m in [
            Mat2::from_ints(&q, 1, 1, 0, 1),
            Mat2::from_ints(&q, 1, 0, 2, 1),
            Mat2::from_rats(&q, rat_int(2), rat_int(0), rat_int(0), rat(1, 2)),
            Mat2::from_ints(&q, 2, 1, 1, 1),
        ] {
            let h = HalfPlane::from_matrix(&m).unwrap();
            let norm = m.frobenius_norm_sq();
            let (_, hi) = norm.to_interval(64);
            let ball = ball_data(&hi, &q, 128).unwrap();
            let ch = ball.cosh.mid_f64();
            let sh = ball.sinh.mid_f64();
            // sample the euclidean circle (0, ch) radius sh slightly shrunk
            for k in 0..64 {
                let ang = (k as f64) * std::f64::consts::TAU / 64.0;
                let x = 0.9999 * sh * ang.cos();
                let y = ch + 0.9999 * sh * ang.sin();
                let xf = FieldElement::from_rat(&q, crate::exactnum::rat((x * 1e9) as i64, 1_000_000_000));
                let yf = FieldElement::from_rat(&q, crate::exactnum::rat((y * 1e9) as i64, 1_000_000_000));
                let cls = h.classify_interior(&xf, &yf.square());
                assert!(cls != PointClass::Out, "ball point left {:?}", m);
            }
        }
    }
}
