//! The staple membership criterion on the L surface, including the
//! instructive failure: the unit shear maps marked segments onto marked
//! segments yet breaks the orientation pairing, so it is rejected, while
//! its square is a genuine group element.
//!
//! Run with: cargo run --release --example membership

use veech::catalog;
use veech::driver::Pipeline;
use veech::geom::Mat2;

fn main() {
    let surface = catalog::l_surface_default().expect("catalog surface");
    let mut pipe = Pipeline::new(surface.clone()).expect("pipeline");
    let q = surface.spec();

    let tests = [
        ("unit shear (fails the pairing)", Mat2::from_ints(q, 1, 0, 1, 1)),
        ("double shear", Mat2::from_ints(q, 1, 0, 2, 1)),
        ("quarter rotation S", Mat2::from_ints(q, 0, -1, 1, 0)),
        ("hyperbolic A", Mat2::from_ints(q, 2, 1, -1, 0)),
        ("minus identity", Mat2::identity(q).neg()),
        ("horizontal unit shear", Mat2::from_ints(q, 1, 1, 0, 1)),
        ("horizontal double shear", Mat2::from_ints(q, 1, 2, 0, 1)),
    ];
    for (label, m) in tests {
        let verdict = pipe.is_member(&m).expect("membership");
        println!("{label:32} {:?}  ->  {}", m, if verdict { "member" } else { "not a member" });
    }
}
