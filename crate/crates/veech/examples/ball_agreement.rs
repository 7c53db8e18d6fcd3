//! The half-plane intersections of norm-bounded element sets agree with
//! the full Dirichlet domain inside an explicit ball: here the partial
//! domains for norm bounds 2 and 4 of the sheared square-torus group are
//! sampled on ten thousand points of the agreement ball of the smaller
//! bound, with zero disagreements.
//!
//! Run with: cargo run --release --example ball_agreement

use veech::catalog;
use veech::driver::{shift_surface, Pipeline};
use veech::exactnum::{rat, rat_int, FieldElement, FieldSpec};
use veech::hyperbolic::{HPolygon, HalfPlane, PointClass};

fn main() {
    let torus = catalog::square_torus().unwrap();
    let (_, moved, n) = shift_surface(&torus, None).unwrap();
    println!("sheared square torus by 1/{n}; its group is a conjugate of the modular group");
    let mut pipe = Pipeline::new(moved).unwrap();

    let build = |pipe: &mut Pipeline, a_sq: i64| -> HPolygon {
        let members = pipe.members_up_to(&rat_int(a_sq)).unwrap();
        let mut poly = HPolygon::full();
        for (m, _) in &members {
            poly = poly.clip(&HalfPlane::from_matrix(m).unwrap());
        }
        println!("norm^2 <= {a_sq}: {} elements, {} sides", members.len(), poly.side_count());
        poly
    };
    let omega_a = build(&mut pipe, 4);
    let omega_b = build(&mut pipe, 16);

    // the agreement ball for a = 2: nu^2 = 2 + sqrt 3, and the euclidean
    // picture of B(i, log nu) is the circle of center (0, sqrt(3/2)) and
    // radius sqrt(1/2); membership of rational points is an exact test
    let q = FieldSpec::rationals();
    let cosh_sq = rat(3, 2);
    let mut rng = 0x2545f4914f6cdd1du64;
    let mut next = move || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        (rng >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut tested = 0usize;
    let mut disagreements = 0usize;
    while tested < 10_000 {
        let x = (2.0 * next() - 1.0) * 0.7072;
        let y = 1.2247 + (2.0 * next() - 1.0) * 0.7072;
        let xf = FieldElement::from_rat(&q, rat((x * 1e6) as i64, 1_000_000));
        let yf = FieldElement::from_rat(&q, rat((y * 1e6) as i64, 1_000_000));
        // exact hyperbolic ball test: cosh d(i, z) < cosh r, i.e.
        // (1 + (x^2 + (y-1)^2) / (2y))^2 < 3/2
        let one = FieldElement::one(&q);
        let two = FieldElement::from_int(&q, 2);
        let dist_sq = xf.square().add(&yf.sub(&one).square());
        let cosh_d = one.add(&dist_sq.div(&two.mul(&yf)).unwrap());
        if !cosh_d.square().le_rat(&cosh_sq) {
            continue;
        }
        tested += 1;
        let ya = yf.square();
        let in_a = omega_a.classify_point(&xf, &ya) != PointClass::Out;
        let in_b = omega_b.classify_point(&xf, &ya) != PointClass::Out;
        if in_a != in_b {
            disagreements += 1;
        }
    }
    println!("{tested} sampled points in the agreement ball, {disagreements} disagreements");
    assert_eq!(disagreements, 0);
}
