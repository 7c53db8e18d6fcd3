//! Convex hyperbolic polygons containing i, as cyclic boundary walks.
//!
//! The boundary is a counterclockwise cyclic list of geodesic sides and
//! free arcs of the ideal boundary. Clipping by a half-plane that
//! strictly contains i removes exactly one contiguous boundary run (the
//! part strictly outside) and splices in one new side; every decision is
//! an exact sign test on (x, y^2) vertices and surd ideal points.

use super::surd::Surd;
use super::{Geodesic, HalfPlane, IdealPoint, PointClass, Vertex};
use crate::exactnum::FieldElement;
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct SideData {
    pub hp: HalfPlane,
    pub from: Vertex,
    pub to: Vertex,
}

#[derive(Clone, Debug)]
pub struct ArcData {
    pub from: IdealPoint,
    pub to: IdealPoint,
}

#[derive(Clone, Debug)]
pub enum Item {
    Side(SideData),
    Arc(ArcData),
}

impl Item {
    pub fn from_vertex(&self) -> Vertex {
        match self {
            Item::Side(s) => s.from.clone(),
            Item::Arc(a) => Vertex::Ideal(a.from.clone()),
        }
    }

    pub fn to_vertex(&self) -> Vertex {
        match self {
            Item::Side(s) => s.to.clone(),
            Item::Arc(a) => Vertex::Ideal(a.to.clone()),
        }
    }
}

/// A convex region of the upper half-plane containing i, cut out by
/// finitely many bisector half-planes. An empty item list is the whole
/// plane.
#[derive(Clone, Debug, Default)]
pub struct HPolygon {
    items: Vec<Item>,
}

impl HPolygon {
    pub fn full() -> HPolygon {
        HPolygon { items: Vec::new() }
    }

    pub fn is_full(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn sides(&self) -> impl Iterator<Item = &SideData> {
        self.items.iter().filter_map(|i| match i {
            Item::Side(s) => Some(s),
            Item::Arc(_) => None,
        })
    }

    pub fn side_count(&self) -> usize {
        self.sides().count()
    }

    pub fn has_free_arc(&self) -> bool {
        self.is_full() || self.items.iter().any(|i| matches!(i, Item::Arc(_)))
    }

    /// Classify a point with exact (x, y^2) coordinates against the
    /// region: On if some side boundary passes through it, else In/Out.
    pub fn classify_point(&self, x: &FieldElement, y_sq: &FieldElement) -> PointClass {
        let mut on = false;
        for s in self.sides() {
            match s.hp.classify_interior(x, y_sq) {
                PointClass::Out => return PointClass::Out,
                PointClass::On => on = true,
                PointClass::In => {}
            }
        }
        if on {
            PointClass::On
        } else {
            PointClass::In
        }
    }

    /// Intersect with a half-plane strictly containing i.
    pub fn clip(&self, h: &HalfPlane) -> HPolygon {
        if self.is_full() {
            let (a, b) = h.oriented_ideal_endpoints();
            return HPolygon {
                items: vec![
                    Item::Side(SideData {
                        hp: h.clone(),
                        from: Vertex::Ideal(a.clone()),
                        to: Vertex::Ideal(b.clone()),
                    }),
                    Item::Arc(ArcData { from: b, to: a }),
                ],
            };
        }
        // a side on the same geodesic makes the clip a no-op (both keep i)
        for s in self.sides() {
            if s.hp.geodesic == h.geodesic {
                debug_assert_eq!(s.hp.keep, h.keep, "opposite half-planes cannot both hold i");
                return self.clone();
            }
        }

        let mut pieces: Vec<(PointClass, Item)> = Vec::new();
        for item in &self.items {
            match item {
                Item::Side(s) => split_side(s, h, &mut pieces),
                Item::Arc(a) => split_arc(a, h, &mut pieces),
            }
        }
        let n = pieces.len();
        let out_count = pieces.iter().filter(|(k, _)| *k == PointClass::Out).count();
        if out_count == 0 {
            return self.clone();
        }
        debug_assert!(out_count < n, "center i cannot be cut away");
        // the strictly-outside run must be cyclically contiguous
        let transitions = (0..n)
            .filter(|&i| {
                pieces[i].0 != PointClass::Out && pieces[(i + 1) % n].0 == PointClass::Out
            })
            .count();
        debug_assert_eq!(transitions, 1, "outside run must be contiguous");
        let start_out = (0..n)
            .find(|&i| {
                pieces[i].0 == PointClass::Out && pieces[(i + n - 1) % n].0 != PointClass::Out
            })
            .expect("an outside piece exists");
        let end_out = {
            let mut j = start_out;
            while pieces[(j + 1) % n].0 == PointClass::Out {
                j = (j + 1) % n;
            }
            j
        };
        let exit_vertex = pieces[start_out].1.from_vertex();
        let entry_vertex = pieces[(end_out) % n].1.to_vertex();
        let mut items: Vec<Item> = Vec::with_capacity(n);
        items.push(Item::Side(SideData {
            hp: h.clone(),
            from: exit_vertex,
            to: entry_vertex,
        }));
        let mut i = (end_out + 1) % n;
        while i != start_out {
            items.push(pieces[i].1.clone());
            i = (i + 1) % n;
        }
        let merged = merge_arcs(items);
        debug_assert!(boundary_is_closed(&merged), "boundary endpoints must chain");
        HPolygon { items: merged }
    }

    /// All polygon vertices in boundary order (junctions of consecutive
    /// items).
    pub fn vertices(&self) -> Vec<Vertex> {
        let n = self.items.len();
        (0..n).map(|i| self.items[i].from_vertex()).collect()
    }
}

fn boundary_is_closed(items: &[Item]) -> bool {
    let n = items.len();
    if n == 0 {
        return true;
    }
    (0..n).all(|i| items[i].to_vertex() == items[(i + 1) % n].from_vertex())
}

/// Merge runs of adjacent arcs into single arcs.
fn merge_arcs(items: Vec<Item>) -> Vec<Item> {
    let mut out: Vec<Item> = Vec::with_capacity(items.len());
    for item in items {
        if let (Some(Item::Arc(prev)), Item::Arc(cur)) = (out.last_mut(), &item) {
            debug_assert!(prev.to == cur.from);
            prev.to = cur.to.clone();
            continue;
        }
        out.push(item);
    }
    // the seam may also join the last and first arcs
    if out.len() >= 2 {
        if let (Item::Arc(first), Item::Arc(last)) = (&out[0].clone(), out.last().unwrap()) {
            if last.to == first.from {
                let last = out.pop().unwrap();
                if let (Item::Arc(mut l), Item::Arc(f)) = (last, out.remove(0)) {
                    l.to = f.to;
                    out.insert(0, Item::Arc(l));
                }
            }
        }
    }
    out
}

fn split_side(s: &SideData, h: &HalfPlane, pieces: &mut Vec<(PointClass, Item)>) {
    let c_from = h.classify_vertex(&s.from);
    let c_to = h.classify_vertex(&s.to);
    if let Some((x, y_sq)) = interior_crossing(&s.hp.geodesic, &h.geodesic) {
        if point_strictly_inside_side(s, &x, &y_sq) {
            debug_assert!(
                c_from != PointClass::On && c_to != PointClass::On && c_from != c_to,
                "transversal crossing must separate the endpoints"
            );
            let q = Vertex::Interior { x, y_sq };
            pieces.push((
                c_from,
                Item::Side(SideData {
                    hp: s.hp.clone(),
                    from: s.from.clone(),
                    to: q.clone(),
                }),
            ));
            pieces.push((
                c_to,
                Item::Side(SideData {
                    hp: s.hp.clone(),
                    from: q,
                    to: s.to.clone(),
                }),
            ));
            return;
        }
    }
    let kind = match (c_from, c_to) {
        (PointClass::On, PointClass::On) => {
            unreachable!("two shared boundary points force equal geodesics")
        }
        (PointClass::On, k) | (k, PointClass::On) => k,
        (a, b) => {
            debug_assert_eq!(a, b, "side without crossing cannot change sides");
            a
        }
    };
    pieces.push((kind, Item::Side(s.clone())));
}

fn split_arc(a: &ArcData, h: &HalfPlane, pieces: &mut Vec<(PointClass, Item)>) {
    debug_assert!(a.from != a.to, "degenerate arc");
    // footprint of h on the ideal boundary: the arc from B to A where the
    // new side would run from A to B
    let (fa, fb) = h.oriented_ideal_endpoints();
    let mut cuts: Vec<IdealPoint> = Vec::new();
    for p in [&fa, &fb] {
        if ideal_strictly_inside_arc(&a.from, &a.to, p) {
            cuts.push(p.clone());
        }
    }
    cuts.sort_by(|p, q| arc_order(&a.from, p, q));
    let mut points = vec![a.from.clone()];
    points.extend(cuts);
    points.push(a.to.clone());
    for w in points.windows(2) {
        let (from, to) = (w[0].clone(), w[1].clone());
        if from == to {
            continue;
        }
        let c_from = h.classify_ideal(&from);
        let c_to = h.classify_ideal(&to);
        let kind = match (c_from, c_to) {
            (PointClass::On, PointClass::On) => {
                // both endpoints are feet of h: the sub-arc is the
                // footprint exactly when it runs from B to A
                if from == fb && to == fa {
                    PointClass::In
                } else {
                    debug_assert!(from == fa && to == fb);
                    PointClass::Out
                }
            }
            (PointClass::On, k) | (k, PointClass::On) => k,
            (x, y) => {
                debug_assert_eq!(x, y, "arc piece cannot change sides without a cut");
                x
            }
        };
        pieces.push((kind, Item::Arc(ArcData { from, to })));
    }
}

/// Is p strictly inside the ccw ideal arc from `from` to `to`?
fn ideal_strictly_inside_arc(from: &IdealPoint, to: &IdealPoint, p: &IdealPoint) -> bool {
    if p == from || p == to {
        return false;
    }
    match from.cmp_ideal(to) {
        Ordering::Less => {
            from.cmp_ideal(p) == Ordering::Less && p.cmp_ideal(to) == Ordering::Less
        }
        Ordering::Greater => {
            from.cmp_ideal(p) == Ordering::Less || p.cmp_ideal(to) == Ordering::Less
        }
        Ordering::Equal => unreachable!("degenerate arc"),
    }
}

/// Order two points along the arc starting at `from`.
fn arc_order(from: &IdealPoint, p: &IdealPoint, q: &IdealPoint) -> Ordering {
    // distance along the circle from `from`: points above `from` come in
    // increasing order, then the wrap
    let kp = from.cmp_ideal(p) == Ordering::Less;
    let kq = from.cmp_ideal(q) == Ordering::Less;
    match (kp, kq) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => p.cmp_ideal(q),
    }
}

/// Interior intersection point of two distinct geodesics, if any.
fn interior_crossing(g1: &Geodesic, g2: &Geodesic) -> Option<(FieldElement, FieldElement)> {
    match (g1, g2) {
        (Geodesic::Vertical { .. }, Geodesic::Vertical { .. }) => None,
        (Geodesic::Vertical { x }, Geodesic::Circle { center, radius_sq })
        | (Geodesic::Circle { center, radius_sq }, Geodesic::Vertical { x }) => {
            let y_sq = radius_sq.sub(&x.sub(center).square());
            if y_sq.is_positive() {
                Some((x.clone(), y_sq))
            } else {
                None
            }
        }
        (
            Geodesic::Circle { center: m1, radius_sq: r1 },
            Geodesic::Circle { center: m2, radius_sq: r2 },
        ) => {
            let dm = m2.sub(m1);
            if dm.is_zero() {
                return None;
            }
            // subtract the two circle equations
            let num = r1.sub(r2).add(&m2.square()).sub(&m1.square());
            let x = num
                .div(&dm.mul_rat(&crate::exactnum::rat_int(2)))
                .expect("distinct centers");
            let y_sq = r1.sub(&x.sub(m1).square());
            if y_sq.is_positive() {
                Some((x, y_sq))
            } else {
                None
            }
        }
    }
}

/// Is the interior point strictly between the side's endpoints?
pub(super) fn point_strictly_inside_side(s: &SideData, x: &FieldElement, y_sq: &FieldElement) -> bool {
    match &s.hp.geodesic {
        Geodesic::Vertical { .. } => {
            // parametrize by y^2: endpoints have y^2 exact, 0 (ideal
            // finite), or infinity
            let q = Surd::rational(y_sq.clone());
            let lo_hi = |v: &Vertex| -> Option<Surd> {
                match v {
                    Vertex::Interior { y_sq, .. } => Some(Surd::rational(y_sq.clone())),
                    Vertex::Ideal(IdealPoint::Finite(_)) => {
                        Some(Surd::rational(FieldElement::zero(y_sq.spec())))
                    }
                    Vertex::Ideal(IdealPoint::Infinity) => None,
                }
            };
            let a = lo_hi(&s.from);
            let b = lo_hi(&s.to);
            let above = |bound: &Option<Surd>| match bound {
                Some(s0) => s0.cmp_surd(&q) == Ordering::Less,
                None => false, // infinity is never below
            };
            let below = |bound: &Option<Surd>| match bound {
                Some(s0) => s0.cmp_surd(&q) == Ordering::Greater,
                None => true, // infinity is above
            };
            (above(&a) && below(&b)) || (above(&b) && below(&a))
        }
        Geodesic::Circle { .. } => {
            // x is strictly monotone along a semicircular side
            let q = Surd::rational(x.clone());
            let _ = y_sq;
            let xa = s.from.x_surd().expect("circle side has finite endpoints");
            let xb = s.to.x_surd().expect("circle side has finite endpoints");
            let ca = xa.cmp_surd(&q);
            let cb = xb.cmp_surd(&q);
            matches!(
                (ca, cb),
                (Ordering::Less, Ordering::Greater) | (Ordering::Greater, Ordering::Less)
            )
        }
    }
}
