//! Convex bodies on the model cone: the closure of a Voronoi 2-cell as
//! the intersection of bisector half-spaces of the saddle connections
//! leaving its center.
//!
//! A segment with holonomy v and sector k constrains the cone directions
//! within a quarter turn of its own direction: there the boundary radius
//! along direction u is |v|^2 / (2 <u, v>). The cell boundary is the
//! lower envelope of these curves, traced by an exact angular sweep once
//! around the cone; consecutive envelope pieces meet at bisector
//! intersections. Positions on the cone are (sector, direction) pairs and
//! every comparison is an exact sign test. Full turns act as the identity
//! on planar coordinates, so all bisector algebra is planar.

use super::angles::circle_pos_cmp;
use super::segments::SaddleConnection;
use crate::exactnum::FieldElement;
use crate::geom::{cross_sign, dot_sign, Vec2};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvexBodyError {
    /// Some direction is not cut off by any constraint: the supplied
    /// segments do not reach far enough to bound the cell.
    InsufficientRadius,
    NoSegments,
}

impl fmt::Display for ConvexBodyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexBodyError::InsufficientRadius => {
                write!(f, "segment set too small: convex body is unbounded")
            }
            ConvexBodyError::NoSegments => write!(f, "no segments from this cone point"),
        }
    }
}

impl std::error::Error for ConvexBodyError {}

/// Position on the cone circle: a sector index and a nonzero direction.
#[derive(Clone, Debug)]
pub struct ConePos {
    pub sector: usize,
    pub dir: Vec2,
}

/// Total order anchored at (sector 0, direction (1,0)).
fn anchored_cmp(a: &ConePos, b: &ConePos) -> Ordering {
    a.sector
        .cmp(&b.sector)
        .then_with(|| circle_pos_cmp(&a.dir, &b.dir))
}

/// Cyclic sweep order: positions strictly after `from` come first.
/// Returns the ordering of a and b by cyclic distance ahead of `from`.
fn cyclic_cmp_from(from: &ConePos, a: &ConePos, b: &ConePos) -> Ordering {
    let ka = anchored_cmp(a, from) == Ordering::Greater;
    let kb = anchored_cmp(b, from) == Ordering::Greater;
    match (ka, kb) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => anchored_cmp(a, b),
    }
}

/// A vertex of the convex body: an exact planar point with its sector.
#[derive(Clone, Debug)]
pub struct BodyVertex {
    pub sector: usize,
    pub point: Vec2,
}

/// The convex body of one cone point, traced counterclockwise. The edge
/// into vertex `i` (from vertex `i-1`, cyclically) lies on the
/// perpendicular bisector of `incoming_support[i]`.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    pub cone: usize,
    pub turns: usize,
    pub vertices: Vec<BodyVertex>,
    pub incoming_support: Vec<SaddleConnection>,
}

impl ConvexBody {
    /// Exact area: the fan from the cone point. Planar cross products are
    /// valid across sector boundaries because full turns develop to the
    /// identity.
    pub fn area(&self) -> FieldElement {
        let spec = self.vertices[0].point.spec().clone();
        let mut acc = FieldElement::zero(&spec);
        let n = self.vertices.len();
        for i in 0..n {
            let p = &self.vertices[i].point;
            let q = &self.vertices[(i + 1) % n].point;
            acc = acc.add(&p.cross(q));
        }
        let two = FieldElement::from_int(&spec, 2);
        acc.div(&two).expect("two is invertible")
    }

    /// Does the midpoint of the supporting segment of the edge into
    /// vertex `i` lie on that edge (between the two vertices)?
    pub fn midpoint_on_incoming_edge(&self, i: usize) -> bool {
        let n = self.vertices.len();
        let a = &self.vertices[(i + n - 1) % n].point;
        let b = &self.vertices[i].point;
        let half = crate::exactnum::rat(1, 2);
        let m = self.incoming_support[i].holonomy.scale_rat(&half);
        cross_sign(&b.sub(a), &m.sub(a)) == 0 && a.sub(&m).dot(&b.sub(&m)).sign() <= 0
    }
}

/// Wrap count w with theta(v) - theta(u) = delta0 + 2*pi*w where delta0 is
/// the representative of the angle difference in (-pi, pi] and theta are
/// the planar angles in [0, 2*pi).
fn wrap_count(u: &Vec2, v: &Vec2) -> i64 {
    let mod_sign = match cross_sign(u, v) {
        0 => {
            if dot_sign(u, v) > 0 {
                0
            } else {
                1 // delta0 = pi exactly
            }
        }
        s => s,
    };
    match circle_pos_cmp(u, v) {
        Ordering::Equal => 0,
        Ordering::Less => {
            if mod_sign >= 0 {
                0
            } else {
                1
            }
        }
        Ordering::Greater => {
            if mod_sign <= 0 {
                0
            } else {
                -1
            }
        }
    }
}

/// Is the constraint of a segment (sector k_s, holonomy v) active at cone
/// position `pos`, i.e. is the cone angle difference strictly less than a
/// quarter turn?
fn active_at(turns: usize, k_s: usize, v: &Vec2, pos: &ConePos) -> bool {
    if dot_sign(&pos.dir, v) <= 0 {
        return false;
    }
    // theta_s - theta_pos = 2 pi (k_s + w - k_pos) + delta0 with delta0 in
    // (-pi/2, pi/2); in-window means the multiple of 2 pi vanishes
    let w = wrap_count(&pos.dir, v);
    (k_s as i64 + w - pos.sector as i64).rem_euclid(turns as i64) == 0
}

/// Compare boundary radii of two constraints active at direction `u`:
/// r_s vs r_t is |v_s|^2 <u, v_t> vs |v_t|^2 <u, v_s> (both dots positive).
fn radius_cmp(u: &Vec2, vs: &Vec2, vt: &Vec2) -> Ordering {
    let lhs = vs.norm_sq().mul(&u.dot(vt));
    let rhs = vt.norm_sq().mul(&u.dot(vs));
    lhs.compare(&rhs)
}

/// The planar intersection point of the perpendicular bisectors of vs, vt.
fn bisector_intersection(vs: &Vec2, vt: &Vec2) -> Option<Vec2> {
    let det = vs.cross(vt);
    if det.is_zero() {
        return None;
    }
    let half = crate::exactnum::rat(1, 2);
    let bs = vs.norm_sq().mul_rat(&half);
    let bt = vt.norm_sq().mul_rat(&half);
    let qx = bs.mul(&vt.y).sub(&bt.mul(&vs.y)).div(&det).ok()?;
    let qy = vs.x.mul(&bt).sub(&vt.x.mul(&bs)).div(&det).ok()?;
    Some(Vec2::new(qx, qy))
}

/// Cone position of a point on the bisector of (k_s, vs): every point of
/// the bisector is within a quarter turn of the segment direction, which
/// pins its sector.
fn position_on_bisector(turns: usize, k_s: usize, vs: &Vec2, q: &Vec2) -> ConePos {
    debug_assert!(dot_sign(q, vs) > 0);
    let w = wrap_count(q, vs);
    let sector = (k_s as i64 + w).rem_euclid(turns as i64) as usize;
    ConePos { sector, dir: q.clone() }
}

/// Compare the angular offsets of two segment directions relative to a
/// common direction `u` (both within a quarter turn of `u`). The boundary
/// radius of a constraint grows like tan(theta - theta_s) just past a
/// crossing, so at a concurrent vertex the envelope continues along the
/// constraint with the larger offset.
fn offset_cmp(u: &Vec2, va: &Vec2, vb: &Vec2) -> Ordering {
    let da = u.dot(va);
    let db = u.dot(vb);
    debug_assert!(da.is_positive() && db.is_positive());
    let lhs = u.cross(va).mul(&db);
    let rhs = u.cross(vb).mul(&da);
    lhs.compare(&rhs)
}

/// Compute the convex body of the cone point `cone` from the saddle
/// connections leaving it. `turns` is d+1 for a cone point of order d.
pub fn convex_body(
    cone: usize,
    turns: usize,
    segments: &[SaddleConnection],
) -> Result<ConvexBody, ConvexBodyError> {
    let sources: Vec<&SaddleConnection> = segments.iter().filter(|c| c.source == cone).collect();
    if sources.is_empty() {
        return Err(ConvexBodyError::NoSegments);
    }
    let spec = sources[0].holonomy.spec().clone();
    let anchor = ConePos {
        sector: 0,
        dir: Vec2::from_ints(&spec, 1, 0),
    };

    // the envelope constraint at the anchor: minimal radius, ties to the
    // most counterclockwise segment (its edge extends forward)
    let mut cur: Option<usize> = None;
    for (i, c) in sources.iter().enumerate() {
        if !active_at(turns, c.source_sector, &c.holonomy, &anchor) {
            continue;
        }
        cur = match cur {
            None => Some(i),
            Some(j) => {
                let take = match radius_cmp(&anchor.dir, &c.holonomy, &sources[j].holonomy) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        offset_cmp(&anchor.dir, &c.holonomy, &sources[j].holonomy)
                            == Ordering::Greater
                    }
                };
                if take {
                    Some(i)
                } else {
                    Some(j)
                }
            }
        };
    }
    let mut cur = cur.ok_or(ConvexBodyError::InsufficientRadius)?;

    let mut vertices: Vec<BodyVertex> = Vec::new();
    let mut incoming_support: Vec<SaddleConnection> = Vec::new();
    let mut pos = anchor;
    let mut wrapped = 0usize;
    let mut first_vertex: Option<ConePos> = None;
    let cap = 8 * sources.len() + 8 * turns + 64;
    let mut closed = false;
    for _ in 0..cap {
        let vs = &sources[cur].holonomy;
        let ks = sources[cur].source_sector;
        let mut best: Option<(ConePos, Vec2, usize)> = None;
        for (i, c) in sources.iter().enumerate() {
            if i == cur {
                continue;
            }
            let Some(q) = bisector_intersection(vs, &c.holonomy) else {
                continue;
            };
            if dot_sign(&q, vs) <= 0 || dot_sign(&q, &c.holonomy) <= 0 {
                continue;
            }
            let qpos = position_on_bisector(turns, ks, vs, &q);
            let qpos_other = position_on_bisector(turns, c.source_sector, &c.holonomy, &q);
            if qpos.sector != qpos_other.sector {
                // the bisectors cross in the plane but not on the cone
                continue;
            }
            if anchored_cmp(&qpos, &pos) == Ordering::Equal {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bpos, _, bi)) => match cyclic_cmp_from(&pos, &qpos, bpos) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        // concurrent bisectors: continue along the segment
                        // whose radius grows slowest past the crossing
                        offset_cmp(&q, &c.holonomy, &sources[*bi].holonomy) == Ordering::Greater
                    }
                },
            };
            if better {
                best = Some((qpos, q, i));
            }
        }
        let Some((qpos, q, next_i)) = best else {
            return Err(ConvexBodyError::InsufficientRadius);
        };
        // the edge of `cur` must reach the crossing before its quarter-turn
        // window closes; otherwise the cell is unbounded in between
        let window_end = window_end_pos(turns, ks, vs);
        if cyclic_cmp_from(&pos, &window_end, &qpos) == Ordering::Less {
            return Err(ConvexBodyError::InsufficientRadius);
        }
        let wrapped_now = wrapped + usize::from(anchored_cmp(&qpos, &pos) != Ordering::Greater);
        if let Some(fv) = &first_vertex {
            if wrapped_now >= 1 && anchored_cmp(&qpos, fv) != Ordering::Less {
                debug_assert!(
                    anchored_cmp(&qpos, fv) == Ordering::Equal
                        && q == vertices[0].point,
                    "sweep must close at its first vertex"
                );
                closed = true;
                break;
            }
        }
        wrapped = wrapped_now;
        if first_vertex.is_none() {
            first_vertex = Some(qpos.clone());
        }
        vertices.push(BodyVertex { sector: qpos.sector, point: q });
        incoming_support.push(sources[cur].clone());
        pos = qpos;
        cur = next_i;
    }
    if !closed || vertices.is_empty() {
        return Err(ConvexBodyError::InsufficientRadius);
    }
    Ok(ConvexBody {
        cone,
        turns,
        vertices,
        incoming_support,
    })
}

/// Position of theta_s + pi/2, the closing end of a segment's window.
fn window_end_pos(turns: usize, k_s: usize, vs: &Vec2) -> ConePos {
    let perp = vs.perp(); // rotate +90 degrees
    let wraps = circle_pos_cmp(&perp, vs) == Ordering::Less;
    let sector = (k_s + usize::from(wraps)) % turns;
    ConePos { sector, dir: perp }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactnum::FieldElement;
    use crate::flat::{delaunay, enumerate_segments, voronoi_staples};

    #[test]
    fn square_torus_cell_is_unit_square() {
        let s = catalog::square_torus().unwrap();
        let t = delaunay(&s);
        let segs = enumerate_segments(&t, &FieldElement::from_int(s.spec(), 4));
        let body = convex_body(0, 1, &segs).unwrap();
        assert_eq!(body.vertices.len(), 4);
        assert_eq!(body.area(), FieldElement::from_int(s.spec(), 1));
        // vertices are the four half-integer corners
        for v in &body.vertices {
            let two = FieldElement::from_int(s.spec(), 2);
            let x2 = v.point.x.mul(&two);
            let y2 = v.point.y.mul(&two);
            assert!(x2.abs().is_one() && y2.abs().is_one());
        }
        for i in 0..body.vertices.len() {
            assert!(body.midpoint_on_incoming_edge(i));
        }
    }

    #[test]
    fn l_surface_cells_tile_the_surface() {
        let s = catalog::l_surface_default().unwrap();
        let t = delaunay(&s);
        let st = voronoi_staples(&t);
        let two = FieldElement::from_int(s.spec(), 2);
        let radius = st.max_len_sq.mul(&two).mul(&two); // (2 l)^2
        let segs = enumerate_segments(&t, &radius);
        let body = convex_body(0, 3, &segs).unwrap();
        assert_eq!(body.area(), s.total_area());
        // twelve unit-square sides around the 6 pi cone
        assert_eq!(body.vertices.len(), 12);
    }

    #[test]
    fn hex_torus_cells_partition_area() {
        let s = catalog::hex_torus().unwrap();
        let t = delaunay(&s);
        let st = voronoi_staples(&t);
        let two = FieldElement::from_int(s.spec(), 2);
        let radius = st.max_len_sq.mul(&two).mul(&two);
        let segs = enumerate_segments(&t, &radius);
        let total: FieldElement = {
            let a = convex_body(0, 1, &segs).unwrap().area();
            let b = convex_body(1, 1, &segs).unwrap().area();
            a.add(&b)
        };
        assert_eq!(total, s.total_area());
    }

    #[test]
    fn insufficient_radius_is_detected() {
        let s = catalog::square_torus().unwrap();
        let t = delaunay(&s);
        // only horizontal segments: vertical directions are uncovered
        let segs: Vec<_> = enumerate_segments(&t, &FieldElement::from_int(s.spec(), 1))
            .into_iter()
            .filter(|c| c.holonomy.y.is_zero())
            .collect();
        assert_eq!(segs.len(), 2);
        assert!(matches!(
            convex_body(0, 1, &segs),
            Err(ConvexBodyError::InsufficientRadius)
        ));
    }
}
