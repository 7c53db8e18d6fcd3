//! Cross-module invariants: dualities, closure properties, nesting and
//! determinism of the full pipeline.

use std::cmp::Ordering;
use veech::catalog;
use veech::driver::{compute, ComputeOptions, Pipeline};
use veech::exactnum::{rat_int, FieldElement};
use veech::flat::{convex_body, delaunay, enumerate_segments, voronoi_staples};
use veech::geom::Mat2;
use veech::hyperbolic::{gauss_bonnet_area, HPolygon, HalfPlane, PointClass, PolygonArea};

/// Every staple's lifted midpoint lies on an edge of the convex body at
/// its source cone, and the supporting segments of the body are exactly
/// the staples.
#[test]
fn staple_voronoi_duality() {
    for surface in [
        catalog::square_torus().unwrap(),
        catalog::hex_torus().unwrap(),
        catalog::l_surface_default().unwrap(),
        catalog::mcmullen_genus2_sqrt3().unwrap(),
    ] {
        let tri = delaunay(&surface);
        let staples = voronoi_staples(&tri);
        let four = FieldElement::from_int(surface.spec(), 4);
        let segs = enumerate_segments(&tri, &staples.max_len_sq.mul(&four));
        for cone in surface.cone_points() {
            let body = convex_body(cone.id, cone.order + 1, &segs).unwrap();
            for i in 0..body.vertices.len() {
                assert!(
                    body.midpoint_on_incoming_edge(i),
                    "edge {i} of the cell at cone {} misses its staple midpoint",
                    cone.id
                );
            }
            // each body edge is supported by a staple from this cone
            for s in &body.incoming_support {
                assert!(
                    staples.oriented().any(|t| t.source == s.source
                        && t.source_sector == s.source_sector
                        && t.holonomy == s.holonomy),
                    "cell edge supported by a non-staple segment"
                );
            }
        }
    }
}

/// Observed group closure: products and inverses of found members are
/// members whenever their norm stays in the tested range.
#[test]
fn member_closure_under_product_and_inverse() {
    let surface = catalog::l_surface_default().unwrap();
    let mut pipe = Pipeline::new(surface).unwrap();
    let members = pipe.members_up_to(&rat_int(8)).unwrap();
    assert!(!members.is_empty());
    let bound = FieldElement::from_int(pipe.surface.spec(), 50);
    for (a, _) in &members {
        assert!(pipe.is_member(&a.inv_unimodular()).unwrap(), "inverse of {a:?}");
        for (b, _) in &members {
            let ab = a.mul(b);
            if ab.frobenius_norm_sq().compare(&bound) != Ordering::Greater {
                assert!(pipe.is_member(&ab).unwrap(), "product {ab:?}");
            }
        }
    }
}

/// Result determinism: two runs produce identical element streams.
#[test]
fn deterministic_element_stream() {
    let surface = catalog::l_surface_default().unwrap();
    let opts = ComputeOptions {
        max_norm_sq: rat_int(32),
        ..Default::default()
    };
    let r1 = compute(&surface, &opts).unwrap();
    let r2 = compute(&surface, &opts).unwrap();
    assert_eq!(r1.elements.len(), r2.elements.len());
    for ((a, _), (b, _)) in r1.elements.iter().zip(&r2.elements) {
        assert_eq!(a, b);
    }
    // every reported element passes membership in isolation, and the
    // list is closed under inverses (equal norms) in PSL form
    let mut pipe = Pipeline::new(surface).unwrap();
    for (m, _) in &r1.elements {
        assert!(pipe.is_member(m).unwrap());
        let inv = m.inv_unimodular().psl_canonical();
        assert!(
            r1.elements.iter().any(|(e, _)| *e == inv),
            "inverse of {m:?} missing from the reported list"
        );
    }
}

/// Nesting: the half-plane intersection of a larger norm bound sits
/// inside the smaller one; verified by sampling vertices of the inner
/// polygon and a grid of points.
#[test]
fn domain_nesting_under_norm_growth() {
    let torus = catalog::square_torus().unwrap();
    let (_, moved, _) = veech::driver::shift_surface(&torus, None).unwrap();
    let mut pipe = Pipeline::new(moved).unwrap();
    let build = |pipe: &mut Pipeline, a_sq: i64| -> HPolygon {
        let members = pipe.members_up_to(&rat_int(a_sq)).unwrap();
        let mut poly = HPolygon::full();
        for (m, _) in &members {
            poly = poly.clip(&HalfPlane::from_matrix(m).unwrap());
        }
        poly
    };
    let outer = build(&mut pipe, 4);
    let inner = build(&mut pipe, 16);
    let q = pipe.surface.spec().clone();
    for ix in -30..=30 {
        for iy in 1..=30 {
            let x = FieldElement::from_rat(&q, veech::exactnum::rat(ix, 10));
            let y_sq = FieldElement::from_rat(&q, veech::exactnum::rat(iy * iy, 100));
            if inner.classify_point(&x, &y_sq) != PointClass::Out {
                assert_ne!(
                    outer.classify_point(&x, &y_sq),
                    PointClass::Out,
                    "point in the refined domain escaped the coarse one"
                );
            }
        }
    }
}

/// Gauss-Bonnet area against a Monte-Carlo integral of dx dy / y^2 over
/// the domain, within three standard errors.
#[test]
fn gauss_bonnet_matches_monte_carlo() {
    let surface = catalog::l_surface_default().unwrap();
    let opts = ComputeOptions {
        max_norm_sq: rat_int(32),
        ..Default::default()
    };
    let res = compute(&surface, &opts).unwrap();
    let poly = &res.domain;
    let area = match gauss_bonnet_area(poly, 96) {
        PolygonArea::Finite(a) => a.mid_f64(),
        PolygonArea::Infinite => panic!("terminated domain must be finite"),
    };
    // sample a box covering the domain; the domain here lives within
    // |x| <= 2, 0 < y <= 4 and has its cusps going up with finite mass
    let q = surface.spec().clone();
    let mut state = 0xD1CE5EEDu64 | 1;
    let mut rand = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let (x_lo, x_hi, y_lo, y_hi) = (-2.0, 2.0, 0.02, 60.0);
    let n = 400_000usize;
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    for _ in 0..n {
        let x = x_lo + (x_hi - x_lo) * rand();
        let y = y_lo + (y_hi - y_lo) * rand();
        let xf = FieldElement::from_rat(&q, veech::exactnum::rat((x * 1e6) as i64, 1_000_000));
        let yf = FieldElement::from_rat(&q, veech::exactnum::rat((y * 1e6) as i64, 1_000_000));
        let v = if poly.classify_point(&xf, &yf.square()) != PointClass::Out {
            1.0 / (y * y)
        } else {
            0.0
        };
        acc += v;
        acc_sq += v * v;
    }
    let volume = (x_hi - x_lo) * (y_hi - y_lo);
    let mean = acc / n as f64;
    let var = (acc_sq / n as f64 - mean * mean).max(0.0);
    let estimate = mean * volume;
    let sigma = volume * (var / n as f64).sqrt();
    assert!(
        (estimate - area).abs() < 3.0 * sigma + 0.02,
        "monte carlo {estimate} +- {sigma} vs certified {area}"
    );
}

/// The conjugation relation between membership on X and on M X, sampled
/// on catalog fixtures.
#[test]
fn membership_conjugation_relation() {
    let surface = catalog::l_surface_default().unwrap();
    let q = surface.spec().clone();
    let m = Mat2::from_rats(&q, rat_int(1), rat_int(0), veech::exactnum::rat(1, 2), rat_int(1));
    let moved = surface.transform(&m).unwrap();
    let mut px = Pipeline::new(surface).unwrap();
    let mut pmx = Pipeline::new(moved).unwrap();
    for b in [
        Mat2::from_ints(&q, 1, 0, 2, 1),
        Mat2::from_ints(&q, 0, -1, 1, 0),
        Mat2::from_ints(&q, 2, 1, -1, 0),
        Mat2::from_ints(&q, 1, 1, 0, 1),
        Mat2::from_ints(&q, 1, 0, 1, 1),
        Mat2::from_ints(&q, 3, 2, 1, 1),
    ] {
        let lhs = px.is_member(&b).unwrap();
        let conj = m.mul(&b).mul(&m.inv_unimodular());
        let rhs = pmx.is_member(&conj).unwrap();
        assert_eq!(lhs, rhs, "conjugation relation failed for {b:?}");
    }
}

/// Degenerate stopping inputs: nothing found gives the full plane, one
/// parabolic pair gives an infinite strip; both fail the test.
#[test]
fn stopping_test_rejects_infinite_domains() {
    use veech::driver::stopping_test;
    use veech::exactnum::FieldSpec;
    use veech::hyperbolic::CertifiedBool;
    let q = FieldSpec::rationals();
    let opts = ComputeOptions::default();
    let (verdict, poly) = stopping_test(&[], &rat_int(2), &opts).unwrap();
    assert_eq!(verdict, CertifiedBool::False);
    assert!(poly.is_full());

    let t = Mat2::from_ints(&q, 1, 1, 0, 1);
    let pair = [t.clone(), t.inv_unimodular()];
    let (verdict, poly) = stopping_test(&pair, &rat_int(3), &opts).unwrap();
    assert_eq!(verdict, CertifiedBool::False);
    assert!(poly.has_free_arc());
    assert_eq!(poly.side_count(), 2);
}

/// Certified ball area of the modular-style domain against a plain
/// floating-point Monte-Carlo integral.
#[test]
fn ball_area_matches_monte_carlo_on_modular_domain() {
    use veech::hyperbolic::{area_in_ball, ball_data};
    let torus = catalog::square_torus().unwrap();
    let (_, moved, _) = veech::driver::shift_surface(&torus, None).unwrap();
    let mut pipe = Pipeline::new(moved).unwrap();
    let members = pipe.members_up_to(&rat_int(8)).unwrap();
    let mut poly = HPolygon::full();
    let mut float_sides: Vec<(f64, f64, bool)> = Vec::new(); // center, radius_sq, keep_inside (verticals as (x, NAN, left))
    let mut vertical_sides: Vec<(f64, bool)> = Vec::new();
    for (m, _) in &members {
        let h = HalfPlane::from_matrix(m).unwrap();
        match &h.geodesic {
            veech::hyperbolic::Geodesic::Vertical { x } => {
                vertical_sides.push((x.to_f64(), h.keep == veech::hyperbolic::Keep::LowInside));
            }
            veech::hyperbolic::Geodesic::Circle { center, radius_sq } => {
                float_sides.push((
                    center.to_f64(),
                    radius_sq.to_f64(),
                    h.keep == veech::hyperbolic::Keep::LowInside,
                ));
            }
        }
        poly = poly.clip(&h);
    }
    let ball = ball_data(&rat_int(8), torus.spec(), 128).unwrap();
    let certified = area_in_ball(&poly, &ball, 128).unwrap();

    let (ch, sh) = (ball.cosh.mid_f64(), ball.sinh.mid_f64());
    let inside = |x: f64, y: f64| -> bool {
        if x * x + (y - ch) * (y - ch) > sh * sh {
            return false;
        }
        for (c, keep_left) in &vertical_sides {
            if (x <= *c) != *keep_left && (x - c).abs() > 0.0 {
                return false;
            }
        }
        for (c, r_sq, keep_in) in &float_sides {
            let d = (x - c) * (x - c) + y * y;
            if (d <= *r_sq) != *keep_in {
                return false;
            }
        }
        true
    };
    let mut state = 0xABCDEF12345u64 | 1;
    let mut rand = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let (x_lo, x_hi) = (-sh - 0.01, sh + 0.01);
    let (y_lo, y_hi) = (ch - sh - 0.01, ch + sh + 0.01);
    let n = 6_000_000usize;
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    for _ in 0..n {
        let x = x_lo + (x_hi - x_lo) * rand();
        let y = y_lo + (y_hi - y_lo) * rand();
        let v = if inside(x, y) { 1.0 / (y * y) } else { 0.0 };
        acc += v;
        acc_sq += v * v;
    }
    let volume = (x_hi - x_lo) * (y_hi - y_lo);
    let mean = acc / n as f64;
    let estimate = mean * volume;
    let sigma = volume * (((acc_sq / n as f64 - mean * mean).max(0.0)) / n as f64).sqrt();
    let err = (estimate - certified.mid_f64()).abs();
    assert!(
        err < 1e-3f64.max(3.0 * sigma),
        "monte carlo {estimate} +- {sigma:.2e} vs certified {}",
        certified.mid_f64()
    );
}

/// Membership verdicts are unchanged when the staple set is enlarged by
/// the degenerate (exactly cocircular) Delaunay edges.
#[test]
fn membership_invariant_under_staple_superset() {
    use veech::membership::{is_member, marked_staples};
    use veech::model::{mark_segments, trans_group, MarkedSegment};
    let surface = catalog::l_surface_default().unwrap();
    let tri = delaunay(&surface);
    let staples = voronoi_staples(&tri);
    let base_pairs = marked_staples(&staples);

    // enlarge by the degenerate Delaunay edges, keeping reversal closure
    let mut big_pairs = base_pairs.clone();
    let mesh = tri.mesh();
    for h in mesh.edges() {
        if tri.edge_is_degenerate(h) {
            let f = veech::flat::edge_as_connection(&tri, h);
            let b = veech::flat::edge_as_connection(&tri, mesh.opp(h));
            big_pairs.push((MarkedSegment::of_connection(&f), MarkedSegment::of_connection(&b)));
        }
    }
    assert!(big_pairs.len() > base_pairs.len(), "the L surface has degenerate edges");

    let orders: Vec<usize> = surface.cone_points().iter().map(|c| c.order).collect();
    let turns: Vec<usize> = orders.iter().map(|d| d + 1).collect();
    let trans = trans_group(&orders);
    let r = FieldElement::from_int(surface.spec(), 40);
    let segs = enumerate_segments(&tri, &r);
    let index = mark_segments(&segs, r).unwrap();

    let q = surface.spec();
    for m in [
        Mat2::from_ints(q, 1, 0, 1, 1),
        Mat2::from_ints(q, 1, 0, 2, 1),
        Mat2::from_ints(q, 0, -1, 1, 0),
        Mat2::from_ints(q, 2, 1, -1, 0),
        Mat2::from_ints(q, 1, 1, 0, 1),
    ] {
        let small = is_member(&m, &base_pairs, &trans, &turns, &index).unwrap();
        let big = is_member(&m, &big_pairs, &trans, &turns, &index).unwrap();
        assert_eq!(small, big, "verdict changed for {m:?}");
    }
}

/// The hexagonal torus with its two marked points terminates over
/// Q(sqrt 3): signature (0; 3, inf, inf) with covolume 4 pi / 3, which is
/// exactly the Gauss-Bonnet value of that signature.
#[test]
fn hex_torus_terminates_with_consistent_signature() {
    use veech::driver::Status;
    let surface = catalog::hex_torus().unwrap();
    let opts = ComputeOptions {
        max_norm_sq: rat_int(64),
        ..Default::default()
    };
    let res = compute(&surface, &opts).unwrap();
    assert_eq!(res.status, Status::Terminated);
    let sig = res.signature.unwrap();
    assert_eq!(sig.genus, 0);
    assert_eq!(sig.elliptic_orders, vec![3]);
    assert_eq!(sig.cusps, 2);
    let (area, width) = res.domain_area.unwrap();
    let expect = 4.0 * std::f64::consts::PI / 3.0;
    assert!(width < 1e-9);
    assert!((area - expect).abs() < 1e-9, "area {area} vs 4 pi / 3");
    assert!(res.contains_minus_identity);
}

/// The golden L surface, both arms of length (1+sqrt 5)/2, is a lattice
/// surface whose group is the (2, 5, inf) triangle group with covolume
/// 3 pi / 5; the whole pipeline runs here over Q(sqrt 5).
#[test]
fn golden_l_is_the_2_5_infinity_triangle_group() {
    use num_bigint::BigInt;
    use veech::driver::Status;
    use veech::exactnum::FieldSpec;
    let f = FieldSpec::new(
        vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)],
        (rat_int(1), rat_int(2)),
    )
    .unwrap();
    let phi = FieldElement::generator(&f);
    let surface = catalog::l_surface(phi.clone(), phi).unwrap();
    assert_eq!(surface.stratum(), vec![2]);
    let opts = ComputeOptions {
        max_norm_sq: rat_int(32),
        ..Default::default()
    };
    let res = compute(&surface, &opts).unwrap();
    assert_eq!(res.status, Status::Terminated);
    let sig = res.signature.unwrap();
    assert_eq!(sig.genus, 0);
    assert_eq!(sig.elliptic_orders, vec![2, 5]);
    assert_eq!(sig.cusps, 1);
    let (area, _) = res.domain_area.unwrap();
    let expect = 3.0 * std::f64::consts::PI / 5.0;
    assert!((area - expect).abs() < 1e-9, "area {area} vs 3 pi / 5");
}

/// The slit-torus family behind the genus-two builder: the parameter
/// a = 2 + sqrt 7 keeps both direction parabolics in the group (over a
/// third quadratic field), and a = 1 gives a square-tiled member whose
/// group is a lattice, certified end to end with both cone points and
/// their swapping translations in play.
#[test]
fn mcmullen_family_other_members() {
    use veech::driver::Status;
    use veech::exactnum::FieldSpec;
    let f7 = FieldSpec::quadratic_sqrt(7);
    let a7 = FieldElement::new(f7.clone(), vec![rat_int(2), rat_int(1)]).unwrap();
    let s7 = catalog::mcmullen_genus2(a7.clone()).unwrap();
    assert_eq!(s7.stratum(), vec![1, 1]);
    let mut pipe = Pipeline::new(s7).unwrap();
    let p1 = Mat2::from_ints(&f7, 1, 0, 1, 1);
    let p2 = Mat2::new(
        FieldElement::one(&f7),
        FieldElement::from_int(&f7, 2).add(&a7),
        FieldElement::zero(&f7),
        FieldElement::one(&f7),
    );
    assert!(pipe.is_member(&p1).unwrap());
    assert!(pipe.is_member(&p2).unwrap());

    let q = FieldSpec::rationals();
    let s1 = catalog::mcmullen_genus2(FieldElement::one(&q)).unwrap();
    assert_eq!(s1.stratum(), vec![1, 1]);
    assert_eq!(s1.total_area(), FieldElement::from_int(&q, 6));
    let opts = ComputeOptions {
        max_norm_sq: rat_int(64),
        ..Default::default()
    };
    let res = compute(&s1, &opts).unwrap();
    assert_eq!(res.status, Status::Terminated);
    let sig = res.signature.unwrap();
    assert_eq!((sig.genus, sig.cusps), (0, 2));
    assert_eq!(sig.elliptic_orders, vec![3]);
    let (area, _) = res.domain_area.unwrap();
    assert!((area - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
}
