//! Probe the infinitely generated Veech group of McMullen's genus-two
//! surface at a = 1 + sqrt(3): enumerate every element of Frobenius norm
//! at most 12 and reduce each one into the subgroup generated by -I and
//! the two parabolics
//!     P1 = (1 0; 1 1),   P2 = (1 2+a; 0 1).
//! All of them land in the subgroup; the group being infinitely generated
//! only shows up much further out in the norm ordering.
//!
//! Run with: cargo run --release --example mcmullen_probe

use veech::catalog;
use veech::driver::{compute, in_parabolic_subgroup, ComputeOptions};
use veech::exactnum::{rat_int, FieldElement};

fn main() {
    let surface = catalog::mcmullen_genus2_sqrt3().expect("catalog surface");
    println!(
        "McMullen surface: stratum {:?}, area {}",
        surface.stratum(),
        surface.total_area()
    );
    let a = FieldElement::new(surface.spec().clone(), vec![rat_int(1), rat_int(1)]).unwrap();

    let started = std::time::Instant::now();
    let options = ComputeOptions {
        max_norm_sq: rat_int(144), // norm 12
        ..Default::default()
    };
    let result = compute(&surface, &options).expect("pipeline");
    println!(
        "found {} elements with norm <= 12 in {:.1?} ({:?})",
        result.elements.len(),
        started.elapsed(),
        result.status
    );

    let mut inside = 0usize;
    for (m, n) in &result.elements {
        match in_parabolic_subgroup(m, &a, 100_000) {
            Some(true) => inside += 1,
            Some(false) => println!("  OUTSIDE <-I, P1, P2>: {:?} norm^2 {}", m, n),
            None => println!("  reduction stalled: {:?}", m),
        }
    }
    println!(
        "{inside} of {} elements lie in <-I, P1, P2>",
        result.elements.len()
    );
}
