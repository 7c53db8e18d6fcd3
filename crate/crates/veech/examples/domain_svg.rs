//! Render the Dirichlet domain of the L-surface group, with the agreement
//! ball of the final norm bound, to an SVG file.
//!
//! Run with: cargo run --release --example domain_svg [-- output.svg]

use veech::catalog;
use veech::cli;
use veech::driver::{compute, ComputeOptions};
use veech::exactnum::rat_int;
use veech::hyperbolic::ball_data;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "l_domain.svg".into());
    let surface = catalog::l_surface_default().expect("catalog surface");
    let options = ComputeOptions {
        max_norm_sq: rat_int(64),
        ..Default::default()
    };
    let result = compute(&surface, &options).expect("pipeline");
    let ball = ball_data(&result.final_norm_sq, surface.spec(), 64)
        .ok()
        .map(|b| (b.cosh.mid_f64(), b.sinh.mid_f64()));
    let svg = cli::render_domain_svg(&result, ball);
    std::fs::write(&path, &svg).expect("write svg");
    println!(
        "wrote {path}: {} sides, signature {}",
        result.domain.side_count(),
        result.signature.map(|s| s.to_string()).unwrap_or_default()
    );
}
