//! Completeness cross-checks for the enumeration and candidate layers.

use std::cmp::Ordering;
use veech::catalog;
use veech::exactnum::{rat_int, FieldElement};
use veech::flat::{delaunay, enumerate_segments, voronoi_staples};
use veech::geom::Mat2;
use veech::membership::{candidate_matrices, is_member, marked_staples, nu_sq};
use veech::model::{apply_fa, apply_trans, mark_segments, trans_group, MarkedSegment};

/// A group element acts on the model as a bijection of the marked
/// segments, up to one global translation. Finding that translation from
/// the staples and then pushing every enumerated segment through it is a
/// strong completeness oracle: any segment the unfolding search had
/// missed would break the bijection.
#[test]
fn member_action_permutes_enumerated_segments() {
    let surface = catalog::l_surface_default().unwrap();
    let tri = delaunay(&surface);
    let staples = voronoi_staples(&tri);
    let staple_pairs = marked_staples(&staples);
    let orders: Vec<usize> = surface.cone_points().iter().map(|c| c.order).collect();
    let turns: Vec<usize> = orders.iter().map(|d| d + 1).collect();
    let trans = trans_group(&orders);

    let big_r = FieldElement::from_int(surface.spec(), 36);
    let segs = enumerate_segments(&tri, &big_r);
    let index = mark_segments(&segs, big_r).unwrap();

    for b in [
        Mat2::from_ints(surface.spec(), 1, 0, 2, 1),
        Mat2::from_ints(surface.spec(), 2, 1, -1, 0),
        Mat2::from_ints(surface.spec(), 0, -1, 1, 0),
    ] {
        assert!(is_member(&b, &staple_pairs, &trans, &turns, &index).unwrap());
        // the witness translation that pairs the staple images
        let witness = trans
            .iter()
            .find(|t| {
                staple_pairs.iter().all(|(f, bk)| {
                    let imf = apply_trans(t, &turns, &apply_fa(&b, &turns, f));
                    let imb = apply_trans(t, &turns, &apply_fa(&b, &turns, bk));
                    match (index.find(&imf), index.find(&imb)) {
                        (Some(i), Some(j)) => index.pair_index(i) == j,
                        _ => false,
                    }
                })
            })
            .expect("member has a witness translation");
        // every enumerated segment short enough that its image fits in
        // the index must map onto another enumerated segment
        let nu = nu_sq(&b.frobenius_norm_sq(), 96).unwrap();
        let mut checked = 0usize;
        for c in &segs {
            let image_len = c.length_sq.mul_rat(&nu.rational_upper);
            if image_len.compare(index.radius_sq()) == Ordering::Greater {
                continue;
            }
            let m = MarkedSegment::of_connection(c);
            let image = apply_trans(witness, &turns, &apply_fa(&b, &turns, &m));
            assert!(
                index.find(&image).is_some(),
                "image of {m:?} under {b:?} missing from the enumeration"
            );
            checked += 1;
        }
        assert!(checked > 20, "the oracle must cover a real sample");
    }
}

/// Candidate generation is staple-pair independent: any fixed independent
/// pair yields the same member set at a given norm bound.
#[test]
fn members_do_not_depend_on_the_generating_pair() {
    use veech::flat::{StapleSet, Staple};
    let surface = catalog::l_surface_default().unwrap();
    let tri = delaunay(&surface);
    let staples = voronoi_staples(&tri);
    let staple_pairs = marked_staples(&staples);
    let orders: Vec<usize> = surface.cone_points().iter().map(|c| c.order).collect();
    let turns: Vec<usize> = orders.iter().map(|d| d + 1).collect();
    let trans = trans_group(&orders);
    let a_sq = rat_int(16);
    let r = FieldElement::from_int(surface.spec(), 64);
    let segs = enumerate_segments(&tri, &r);
    let index = mark_segments(&segs, r).unwrap();

    let member_set = |st: &StapleSet| -> Vec<Mat2> {
        let mut out: Vec<Mat2> = candidate_matrices(st, &index, &a_sq, 96)
            .unwrap()
            .into_iter()
            .map(|c| c.matrix.psl_canonical())
            .collect::<std::collections::HashSet<_>>()
            .into_iter()
            .filter(|m| is_member(m, &staple_pairs, &trans, &turns, &index).unwrap())
            .collect();
        out.sort_by(|x, y| x.lex_cmp(y));
        out.dedup();
        out
    };

    let base = member_set(&staples);
    assert!(!base.is_empty());
    // force every distinct independent generating pair by offering the
    // generator exactly two staples at a time
    let mut tried = 0usize;
    for i in 0..staples.staples.len() {
        for j in (i + 1)..staples.staples.len() {
            let a = &staples.staples[i];
            let b = &staples.staples[j];
            if a.forward.holonomy.cross(&b.forward.holonomy).is_zero() {
                continue;
            }
            let alt = StapleSet {
                staples: vec![a.clone(), b.clone()],
                max_len_sq: staples.max_len_sq.clone(),
            };
            assert_eq!(member_set(&alt), base, "pair ({i},{j}) changed the members");
            tried += 1;
        }
    }
    assert!(tried >= 4, "several distinct pairs must be exercised");
}
