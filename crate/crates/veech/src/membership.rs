//! The Veech group membership test.
//!
//! A determinant-one matrix belongs to the Veech group exactly when the
//! induced affine map of the model surface carries every marked Voronoi
//! staple, orientation pairs and all, onto marked segments of the surface,
//! up to one global translation of the model. The candidate matrices of a
//! Frobenius-norm bound are produced by mapping one fixed independent
//! staple pair onto all pairs of enumerated holonomies within the singular
//! value bound; every group element of that norm appears among them.

use crate::exactnum::{rat_int, FieldElement, Rat};
use crate::flat::StapleSet;
use crate::geom::{Mat2, Vec2};
use crate::model::{apply_fa, apply_trans, MarkedSegment, MarkedSegmentSet, TransElement};
use crate::numeric::{rational_upper_bound, Interval};
use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone)]
pub enum MembershipError {
    DeterminantNotOne,
    NormBelowMinimum,
    IndexRadiusTooSmall { needed: Rat },
    NoIndependentStaplePair,
}

impl fmt::Display for MembershipError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipError::DeterminantNotOne => write!(f, "matrix determinant is not one"),
            MembershipError::NormBelowMinimum => {
                write!(f, "squared Frobenius norm below 2 is impossible for det 1")
            }
            MembershipError::IndexRadiusTooSmall { needed } => {
                write!(f, "marked segment index needs squared radius at least {needed}")
            }
            MembershipError::NoIndependentStaplePair => {
                write!(f, "no two staples with independent holonomies")
            }
        }
    }
}

impl std::error::Error for MembershipError {}

/// Squared Frobenius norm, exact.
pub fn frobenius_norm_sq(m: &Mat2) -> FieldElement {
    m.frobenius_norm_sq()
}

/// The squared maximal singular value of a determinant-one matrix with
/// squared Frobenius norm `a_sq`: nu^2 = (a^2 + sqrt(a^4 - 4)) / 2.
/// Returned as a certified interval together with an exact rational upper
/// bound for enumeration radii.
#[derive(Clone, Debug)]
pub struct NuSq {
    pub interval: Interval,
    pub rational_upper: Rat,
}

pub fn nu_sq(a_sq: &FieldElement, precision_bits: u32) -> Result<NuSq, MembershipError> {
    let two = FieldElement::from_int(a_sq.spec(), 2);
    if a_sq.compare(&two) == Ordering::Less {
        return Err(MembershipError::NormBelowMinimum);
    }
    let p = precision_bits as usize;
    let (lo, hi) = a_sq.to_interval(precision_bits);
    let a2 = Interval::from_rational_bounds(&lo, &hi, p);
    let four = Interval::from_i64(4, p);
    let disc = a2.mul(&a2).sub(&four);
    let root = disc.sqrt().expect("a^4 - 4 is nonnegative");
    let half = Interval::from_rational(&crate::exactnum::rat(1, 2), p);
    let nu2 = a2.add(&root).mul(&half);
    let upper = rational_upper_bound(&nu2);
    Ok(NuSq {
        interval: nu2,
        rational_upper: upper,
    })
}

/// A candidate group element: determinant one, with provenance.
#[derive(Clone, Debug)]
pub struct CandidateMatrix {
    pub matrix: Mat2,
    pub norm_sq: FieldElement,
}

/// Generate all candidate matrices of squared Frobenius norm at most
/// `a_sq` by mapping one fixed pair of independent staple holonomies onto
/// enumerated marked-segment holonomies within the singular value bound.
/// Every Veech group element with norm in range appears in the output.
/// The image of a determinant-one matrix keeps the pair's cross product,
/// so pairs are rejected on that one product before any matrix is built.
pub fn candidate_matrices(
    staples: &StapleSet,
    index: &MarkedSegmentSet,
    a_sq: &Rat,
    precision_bits: u32,
) -> Result<Vec<CandidateMatrix>, MembershipError> {
    let (v1, v2) = independent_staple_pair(staples)?;
    let spec = v1.spec().clone();
    let a_sq_el = FieldElement::from_rat(&spec, a_sq.clone());
    let nu = nu_sq(&a_sq_el, precision_bits)?;
    // |w_i|^2 <= ub(nu^2) |v_i|^2: slight over-enumeration is sound
    let bound1 = v1.norm_sq().mul_rat(&nu.rational_upper);
    let bound2 = v2.norm_sq().mul_rat(&nu.rational_upper);
    let needed = bound1.clone().max(bound2.clone());
    if index.radius_sq().compare(&needed) == Ordering::Less {
        let (_, hi) = needed.to_interval(64);
        return Err(MembershipError::IndexRadiusTooSmall { needed: hi });
    }

    // precompute [v1 v2]^{-1} = (1/det) [v2y -v2x; -v1y v1x]
    let det = v1.cross(&v2);
    let inv_det = det.inv().expect("independent pair has nonzero determinant");

    let w1s: Vec<&Vec2> = index
        .iter()
        .map(|m| &m.holonomy)
        .filter(|w| w.norm_sq().compare(&bound1) != Ordering::Greater)
        .collect();
    let w2s: Vec<&Vec2> = index
        .iter()
        .map(|m| &m.holonomy)
        .filter(|w| w.norm_sq().compare(&bound2) != Ordering::Greater)
        .collect();

    let mut seen: HashSet<Mat2> = HashSet::new();
    let mut out = Vec::new();
    for w1 in &w1s {
        for w2 in &w2s {
            // det(A) = cross(w1, w2) / cross(v1, v2) must be one
            if w1.cross(w2) != det {
                continue;
            }
            // A [v1 v2] = [w1 w2]
            let a = w1.x.mul(&v2.y).sub(&w2.x.mul(&v1.y)).mul(&inv_det);
            let b = w2.x.mul(&v1.x).sub(&w1.x.mul(&v2.x)).mul(&inv_det);
            let c = w1.y.mul(&v2.y).sub(&w2.y.mul(&v1.y)).mul(&inv_det);
            let d = w2.y.mul(&v1.x).sub(&w1.y.mul(&v2.x)).mul(&inv_det);
            let m = Mat2::new(a, b, c, d);
            debug_assert!(m.det().is_one());
            let norm_sq = m.frobenius_norm_sq();
            if norm_sq.compare(&a_sq_el) == Ordering::Greater {
                continue;
            }
            if seen.insert(m.clone()) {
                out.push(CandidateMatrix { matrix: m, norm_sq });
            }
        }
    }
    Ok(out)
}

/// The two shortest oriented staple holonomies that are linearly
/// independent; short sources keep the image search small.
fn independent_staple_pair(staples: &StapleSet) -> Result<(Vec2, Vec2), MembershipError> {
    let mut sorted: Vec<&Vec2> = staples.oriented().map(|s| &s.holonomy).collect();
    sorted.sort_by(|a, b| {
        a.norm_sq()
            .compare(&b.norm_sq())
            .then_with(|| crate::exactnum::lex_cmp(&a.x, &b.x))
            .then_with(|| crate::exactnum::lex_cmp(&a.y, &b.y))
    });
    let first = sorted.first().ok_or(MembershipError::NoIndependentStaplePair)?;
    for w in sorted.iter().skip(1) {
        if !first.cross(w).is_zero() {
            return Ok(((*first).clone(), (*w).clone()));
        }
    }
    Err(MembershipError::NoIndependentStaplePair)
}

/// The marked Voronoi staples as orientation pairs.
pub fn marked_staples(staples: &StapleSet) -> Vec<(MarkedSegment, MarkedSegment)> {
    staples
        .staples
        .iter()
        .map(|s| {
            (
                MarkedSegment::of_connection(&s.forward),
                MarkedSegment::of_connection(&s.backward),
            )
        })
        .collect()
}

/// The Voronoi staple membership criterion: `a` is in the Veech group iff
/// some translation of the model carries every marked staple to a marked
/// segment with the pairing respected. The index must contain all marked
/// segments up to radius nu(|a|) * l, which the caller guarantees.
pub fn is_member(
    a: &Mat2,
    staple_pairs: &[(MarkedSegment, MarkedSegment)],
    trans: &[TransElement],
    turns: &[usize],
    index: &MarkedSegmentSet,
) -> Result<bool, MembershipError> {
    if !a.det().is_one() {
        return Err(MembershipError::DeterminantNotOne);
    }
    // the index must reach nu(|A|) * l, else a miss would be meaningless
    let max_staple_sq = staple_pairs
        .iter()
        .map(|(f, _)| f.holonomy.norm_sq())
        .max()
        .expect("staple set is nonempty");
    let needed = required_radius_sq(&a.frobenius_norm_sq(), &max_staple_sq, 64)?;
    let needed_el = FieldElement::from_rat(max_staple_sq.spec(), needed.clone());
    if index.radius_sq().compare(&needed_el) == Ordering::Less {
        return Err(MembershipError::IndexRadiusTooSmall { needed });
    }
    // images of all staples under f_A, computed once
    let images: Vec<(MarkedSegment, MarkedSegment)> = staple_pairs
        .iter()
        .map(|(f, b)| (apply_fa(a, turns, f), apply_fa(a, turns, b)))
        .collect();
    'trans: for t in trans {
        for (fi, bi) in &images {
            let tf = apply_trans(t, turns, fi);
            let Some(if_) = index.find(&tf) else {
                continue 'trans;
            };
            let tb = apply_trans(t, turns, bi);
            let Some(ib) = index.find(&tb) else {
                continue 'trans;
            };
            if index.pair_index(if_) != ib {
                continue 'trans;
            }
        }
        return Ok(true);
    }
    Ok(false)
}

/// Required squared index radius for testing a matrix of squared norm
/// `norm_sq` against staples of squared maximal length `max_staple_sq`:
/// an exact rational upper bound on nu^2 * l^2.
pub fn required_radius_sq(
    norm_sq: &FieldElement,
    max_staple_sq: &FieldElement,
    precision_bits: u32,
) -> Result<Rat, MembershipError> {
    let two = FieldElement::from_int(norm_sq.spec(), 2);
    let norm = norm_sq.clone().max(two);
    let nu = nu_sq(&norm, precision_bits)?;
    let needed = max_staple_sq.mul_rat(&nu.rational_upper);
    let (_, hi) = needed.to_interval(64);
    // small head room so equal-length lookups stay inside
    Ok(hi + rat_int(1) / rat_int(16))
}
