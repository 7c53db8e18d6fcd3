//! Compute the Veech group of the three-square L surface end to end.
//!
//! The group terminates as a lattice: a Fuchsian triangle group of
//! signature (0; 2, inf, inf) with fundamental domain area pi, generated
//! by an order-four rotation and a parabolic-free hyperbolic pair.
//!
//! Run with: cargo run --release --example l_surface

use veech::catalog;
use veech::driver::{compute, ComputeOptions};
use veech::exactnum::rat_int;
use veech::geom::Mat2;

fn main() {
    let surface = catalog::l_surface_default().expect("catalog surface");
    println!(
        "L surface: stratum {:?}, genus {}, area {}",
        surface.stratum(),
        surface.genus(),
        surface.total_area()
    );

    let started = std::time::Instant::now();
    let options = ComputeOptions {
        max_norm_sq: rat_int(64),
        ..Default::default()
    };
    let result = compute(&surface, &options).expect("pipeline");
    println!("status: {:?} in {:.2?}", result.status, started.elapsed());
    if let Some((m, n)) = &result.shift {
        println!("sheared by {:?} (n = {n}) to clear the rotation stabilizer", m);
    }
    println!("contains -I: {}", result.contains_minus_identity);
    println!(
        "signature: {}",
        result.signature.as_ref().map(|s| s.to_string()).unwrap_or_default()
    );
    if let Some((area, width)) = result.domain_area {
        println!("domain area: {area} (certified within {width:.2e})");
    }
    println!("elements found up to norm^2 = {}:", result.final_norm_sq);
    for (m, n) in &result.elements {
        println!("  {:?}  norm^2 = {}", m, n);
    }
    println!("side-pairing generators (original frame):");
    for g in &result.generators {
        println!("  {:?}", g);
    }

    // the generators the group is known to have
    let q = surface.spec();
    let s_mat = Mat2::from_ints(q, 0, -1, 1, 0);
    let a_mat = Mat2::from_ints(q, 2, 1, -1, 0);
    let found = |m: &Mat2| {
        result
            .elements
            .iter()
            .any(|(e, _)| *e == m.psl_canonical())
    };
    println!("S = [[0,-1],[1,0]] among elements: {}", found(&s_mat));
    println!("A = [[2,1],[-1,0]] among elements: {}", found(&a_mat));
}
