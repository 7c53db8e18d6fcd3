//! The model cone surface for a stratum: marked segments, the finite
//! translation group, and the affine action.
//!
//! The model surface is one infinite cone of angle 2*pi*(d+1) per cone
//! point and is never materialized; the only data are marked segments
//! (cone id, holonomy, sector) and the finite group acting on them. A
//! positive-determinant matrix acts on a marked segment by mapping its
//! holonomy and shifting its sector when the rotating image direction is
//! pushed across the positive horizontal axis. The continuous lift of the
//! circle action is pinned by lift(0) in (-pi, pi], so composing a map
//! with its inverse returns every segment unchanged away from the
//! antipodal branch locus.

use crate::exactnum::FieldElement;
use crate::flat::SaddleConnection;
use crate::geom::{in_ccw_arc_exclusive_inclusive, Mat2, Vec2};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedSegment {
    pub cone: usize,
    pub holonomy: Vec2,
    pub sector: usize,
}

impl MarkedSegment {
    pub fn of_connection(c: &SaddleConnection) -> MarkedSegment {
        MarkedSegment {
            cone: c.source,
            holonomy: c.holonomy.clone(),
            sector: c.source_sector,
        }
    }

    /// The orientation-paired marked segment of a connection.
    pub fn pair_of_connection(c: &SaddleConnection) -> MarkedSegment {
        MarkedSegment {
            cone: c.target,
            holonomy: c.holonomy.neg(),
            sector: c.target_sector,
        }
    }
}

#[derive(Debug, Clone)]
pub enum ModelError {
    UnpairedSegment(usize),
    DuplicateSegment(usize),
    BadTransElement,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::UnpairedSegment(i) => {
                write!(f, "segment {i} has no orientation pair in the set")
            }
            ModelError::DuplicateSegment(i) => write!(f, "segment {i} appears twice"),
            ModelError::BadTransElement => write!(f, "translation element does not fit the stratum"),
        }
    }
}

impl std::error::Error for ModelError {}

/// The marked segments of a set of saddle connections, indexed for exact
/// lookup and closed under orientation pairing.
#[derive(Clone, Debug)]
pub struct MarkedSegmentSet {
    segments: Vec<MarkedSegment>,
    pair: Vec<usize>,
    index: HashMap<MarkedSegment, usize>,
    radius_sq: FieldElement,
}

impl MarkedSegmentSet {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn radius_sq(&self) -> &FieldElement {
        &self.radius_sq
    }

    pub fn get(&self, i: usize) -> &MarkedSegment {
        &self.segments[i]
    }

    pub fn find(&self, m: &MarkedSegment) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn pair_index(&self, i: usize) -> usize {
        self.pair[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &MarkedSegment> {
        self.segments.iter()
    }
}

/// Lift saddle connections to marked segments with pairing links
/// installed. The connection list must be closed under reversal;
/// `radius_sq` records the enumeration radius it was built from.
pub fn mark_segments(
    segs: &[SaddleConnection],
    radius_sq: FieldElement,
) -> Result<MarkedSegmentSet, ModelError> {
    let mut segments = Vec::with_capacity(segs.len());
    let mut index: HashMap<MarkedSegment, usize> = HashMap::with_capacity(segs.len());
    for (i, c) in segs.iter().enumerate() {
        let m = MarkedSegment::of_connection(c);
        if index.insert(m.clone(), i).is_some() {
            return Err(ModelError::DuplicateSegment(i));
        }
        segments.push(m);
    }
    let mut pair = Vec::with_capacity(segs.len());
    for (i, c) in segs.iter().enumerate() {
        let rev = MarkedSegment::pair_of_connection(c);
        let j = *index.get(&rev).ok_or(ModelError::UnpairedSegment(i))?;
        pair.push(j);
    }
    for (i, &j) in pair.iter().enumerate() {
        if pair[j] != i {
            return Err(ModelError::UnpairedSegment(i));
        }
    }
    Ok(MarkedSegmentSet {
        segments,
        pair,
        index,
        radius_sq,
    })
}

/// One translation automorphism of the model surface: a permutation of
/// cone ids preserving cone orders, with a rotation offset on each cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransElement {
    pub perm: Vec<usize>,
    pub rot: Vec<usize>,
}

impl TransElement {
    pub fn identity(n: usize) -> TransElement {
        TransElement {
            perm: (0..n).collect(),
            rot: vec![0; n],
        }
    }
}

/// Apply a translation element: cone permuted, sector rotated, holonomy
/// unchanged.
pub fn apply_trans(t: &TransElement, turns: &[usize], m: &MarkedSegment) -> MarkedSegment {
    MarkedSegment {
        cone: t.perm[m.cone],
        holonomy: m.holonomy.clone(),
        sector: (m.sector + t.rot[m.cone]) % turns[m.cone],
    }
}

/// Enumerate the full translation group of the model surface for cone
/// points with the given orders: all order-preserving permutations
/// combined with all per-cone rotations. The group order is the product
/// of the factorials of the multiplicity classes times the product of
/// (order + 1) over all cones.
pub fn trans_group(orders: &[usize]) -> Vec<TransElement> {
    let n = orders.len();
    // permutations preserving the order multiset, built classwise
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &d) in orders.iter().enumerate() {
        classes.entry(d).or_default().push(i);
    }
    let mut class_list: Vec<&Vec<usize>> = classes.values().collect();
    class_list.sort_by_key(|v| v[0]);
    let mut perms: Vec<Vec<usize>> = vec![vec![usize::MAX; n]];
    for class in class_list {
        let mut extended = Vec::new();
        for base in &perms {
            for arrangement in permutations(class) {
                let mut p = base.clone();
                for (src, dst) in class.iter().zip(&arrangement) {
                    p[*src] = *dst;
                }
                extended.push(p);
            }
        }
        perms = extended;
    }
    // rotation offsets: product over cones of Z_{d_i + 1}
    let mut out = Vec::new();
    for perm in perms {
        let mut rots: Vec<Vec<usize>> = vec![Vec::new()];
        for &d in orders {
            let mut next = Vec::new();
            for r in &rots {
                for k in 0..=d {
                    let mut r2 = r.clone();
                    r2.push(k);
                    next.push(r2);
                }
            }
            rots = next;
        }
        for rot in rots {
            out.push(TransElement { perm: perm.clone(), rot });
        }
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest: Vec<usize> = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Apply the affine diffeomorphism with derivative `a` (det > 0) to a
/// marked segment. The sector shifts by the winding of the image
/// direction past the positive horizontal axis, with the lift of the
/// circle action pinned by lift(0) in (-pi, pi].
pub fn apply_fa(a: &Mat2, turns: &[usize], m: &MarkedSegment) -> MarkedSegment {
    debug_assert!(a.det().is_positive(), "apply_fa requires det > 0");
    let image = a.apply(&m.holonomy);
    // u0 = A e1 = first column; lift(0) negative exactly when it points
    // strictly below the axis
    let u0 = Vec2::new(a.a.clone(), a.c.clone());
    let base = if a.c.sign() < 0 { -1i64 } else { 0 };
    let e1 = Vec2::from_ints(a.spec(), 1, 0);
    let crossings = i64::from(in_ccw_arc_exclusive_inclusive(&u0, &image, &e1));
    let t = turns[m.cone] as i64;
    let sector = (m.sector as i64 + base + crossings).rem_euclid(t) as usize;
    MarkedSegment {
        cone: m.cone,
        holonomy: image,
        sector,
    }
}
