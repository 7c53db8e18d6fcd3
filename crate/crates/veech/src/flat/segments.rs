//! Saddle connection enumeration by breadth-first chart unfolding.
//!
//! From every corner of every cone point the search keeps a wedge of
//! directions and a window segment it must cross, unfolds the neighboring
//! triangle across the window, splits the wedge at the unfolded apex, and
//! prunes whenever the window clipped to the wedge leaves the search disk.
//! All pruning and visibility decisions are exact sign tests, so the
//! output is exactly the set of saddle connections of length at most the
//! radius, each with sector data at both endpoints.

use crate::exactnum::FieldElement;
use crate::flat::Triangulation;
use crate::geom::{cross_sign, Vec2};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SaddleConnection {
    pub source: usize,
    pub target: usize,
    pub holonomy: Vec2,
    /// sector of the outgoing direction at the source cone point
    pub source_sector: usize,
    /// sector of the reversed direction at the target cone point
    pub target_sector: usize,
    pub length_sq: FieldElement,
}

impl SaddleConnection {
    /// The orientation-reversed saddle connection.
    pub fn reversed(&self) -> SaddleConnection {
        SaddleConnection {
            source: self.target,
            target: self.source,
            holonomy: self.holonomy.neg(),
            source_sector: self.target_sector,
            target_sector: self.source_sector,
            length_sq: self.length_sq.clone(),
        }
    }
}

/// A triangulation edge as an oriented saddle connection.
pub fn edge_as_connection(tri: &Triangulation, h: usize) -> SaddleConnection {
    let mesh = tri.mesh();
    let holonomy = mesh.vec(h).clone();
    SaddleConnection {
        source: mesh.origin(h),
        target: mesh.head(h),
        length_sq: holonomy.norm_sq(),
        source_sector: tri.angles().sector_of_ray(mesh, h),
        target_sector: tri.angles().sector_of_ray(mesh, mesh.opp(h)),
        holonomy,
    }
}

struct WedgeState {
    /// half-edge whose segment is the current window, oriented pa -> pb
    window: usize,
    pa: Vec2,
    pb: Vec2,
    /// exclusive direction bounds; invariant cross(lo, hi) > 0
    lo: Vec2,
    hi: Vec2,
}

/// All saddle connections of squared length at most `r_sq`, closed under
/// orientation reversal, each with sector data at both endpoints.
pub fn enumerate_segments(tri: &Triangulation, r_sq: &FieldElement) -> Vec<SaddleConnection> {
    assert!(r_sq.is_positive(), "radius must be positive");
    let mesh = tri.mesh();
    let angles = tri.angles();
    let mut out: Vec<SaddleConnection> = Vec::new();

    for h in 0..mesh.half_edge_count() {
        // the corner at h: rays from vec(h) to vec(ccw(h)); the edge h is
        // the corner's start ray and is reported from this corner
        if mesh.vec(h).norm_sq().compare(r_sq) != Ordering::Greater {
            out.push(edge_as_connection(tri, h));
        }
        let (source, pos) = angles.position_of(h);
        let window = mesh.next(h);
        let pa = mesh.vec(h).clone();
        let pb = pa.add(mesh.vec(window));
        let mut stack = vec![WedgeState {
            window,
            lo: pa.clone(),
            hi: pb.clone(),
            pa,
            pb,
        }];
        let mut steps = 0usize;
        while let Some(st) = stack.pop() {
            steps += 1;
            assert!(steps < 50_000_000, "unfolding search exceeded its cap");
            if window_out_of_reach(&st, r_sq) {
                continue;
            }
            let w2 = mesh.opp(st.window);
            let c = mesh.next(w2);
            let d = mesh.next(c);
            let apex = st.pa.add(mesh.vec(c));
            let c_lo_s = cross_sign(&st.lo, &apex);
            let c_s_hi = cross_sign(&apex, &st.hi);
            if c_lo_s > 0 && c_s_hi > 0 {
                // apex visible: report if within radius
                let len_sq = apex.norm_sq();
                if len_sq.compare(r_sq) != Ordering::Greater {
                    let target = mesh.origin(d);
                    let back = apex.neg();
                    let (tv, tpos) = angles.position_of(d);
                    debug_assert_eq!(tv, target);
                    let target_sector = angles.sector_in_corner(mesh, tv, tpos, &back);
                    out.push(SaddleConnection {
                        source,
                        target,
                        source_sector: angles.sector_in_corner(mesh, source, pos, &apex),
                        target_sector,
                        length_sq: len_sq,
                        holonomy: apex.clone(),
                    });
                }
                stack.push(WedgeState {
                    window: c,
                    pa: st.pa.clone(),
                    pb: apex.clone(),
                    lo: st.lo.clone(),
                    hi: apex.clone(),
                });
                stack.push(WedgeState {
                    window: d,
                    pa: apex.clone(),
                    pb: st.pb.clone(),
                    lo: apex,
                    hi: st.hi.clone(),
                });
            } else if c_lo_s <= 0 {
                // whole wedge is counterclockwise of the apex: cross side d
                stack.push(WedgeState {
                    window: d,
                    pa: apex,
                    pb: st.pb.clone(),
                    lo: st.lo.clone(),
                    hi: st.hi.clone(),
                });
            } else {
                // whole wedge is clockwise of the apex: cross side c
                debug_assert!(c_s_hi <= 0);
                stack.push(WedgeState {
                    window: c,
                    pa: st.pa.clone(),
                    pb: apex,
                    lo: st.lo.clone(),
                    hi: st.hi.clone(),
                });
            }
        }
    }
    sort_connections(&mut out);
    debug_assert!(connections_unique(&out));
    out
}

/// Exact test: does the window, clipped to the closed wedge, lie entirely
/// outside the disk of squared radius `r_sq`?
fn window_out_of_reach(st: &WedgeState, r_sq: &FieldElement) -> bool {
    // quick accept: an endpoint already within reach keeps the window
    if st.pa.norm_sq().compare(r_sq) != Ordering::Greater
        || st.pb.norm_sq().compare(r_sq) != Ordering::Greater
    {
        return false;
    }
    // parametrize x(s) = pa + s (pb - pa), s in [0, 1]; the direction of
    // x(s) sweeps monotonically from pa to pb, so the wedge clip is an
    // interval [s_lo, s_hi]
    let dir = st.pb.sub(&st.pa);
    let s_lo = clip_param(&st.lo, &st.pa, &st.pb);
    let s_hi = clip_param(&st.hi, &st.pa, &st.pb);
    debug_assert!(s_lo.compare(&s_hi) != Ordering::Greater);
    // unconstrained foot of the perpendicular from the origin
    let dd = dir.norm_sq();
    let foot = st.pa.dot(&dir).neg().div(&dd).expect("window has positive length");
    let s = clamp(&foot, &s_lo, &s_hi);
    let x = st.pa.add(&dir.scale(&s));
    x.norm_sq().compare(r_sq) == Ordering::Greater
}

/// The parameter where the window direction equals `ray`, or the nearest
/// endpoint when the ray misses the window's angular range.
fn clip_param(ray: &Vec2, pa: &Vec2, pb: &Vec2) -> FieldElement {
    let fa = ray.cross(pa);
    let fb = ray.cross(pb);
    // f(s) = (1-s) fa + s fb; direction passes the ray where f = 0
    match (fa.sign(), fb.sign()) {
        (0, _) => FieldElement::zero(fa.spec()),
        (_, 0) => FieldElement::one(fa.spec()),
        _ => {
            let denom = fa.sub(&fb);
            if denom.is_zero() {
                // window parallel to the ray and never aligned: clamp low
                return FieldElement::zero(fa.spec());
            }
            let s = fa.div(&denom).expect("nonzero denominator");
            let zero = FieldElement::zero(fa.spec());
            let one = FieldElement::one(fa.spec());
            clamp(&s, &zero, &one)
        }
    }
}

fn clamp(x: &FieldElement, lo: &FieldElement, hi: &FieldElement) -> FieldElement {
    if x.compare(lo) == Ordering::Less {
        lo.clone()
    } else if x.compare(hi) == Ordering::Greater {
        hi.clone()
    } else {
        x.clone()
    }
}

pub(crate) fn sort_connections(list: &mut [SaddleConnection]) {
    list.sort_by(|a, b| {
        a.length_sq
            .compare(&b.length_sq)
            .then_with(|| a.source.cmp(&b.source))
            .then_with(|| a.source_sector.cmp(&b.source_sector))
            .then_with(|| crate::exactnum::lex_cmp(&a.holonomy.x, &b.holonomy.x))
            .then_with(|| crate::exactnum::lex_cmp(&a.holonomy.y, &b.holonomy.y))
    });
}

fn connections_unique(list: &[SaddleConnection]) -> bool {
    let mut seen = std::collections::HashSet::new();
    for c in list {
        if !seen.insert((c.source, c.source_sector, c.holonomy.clone())) {
            return false;
        }
    }
    true
}
