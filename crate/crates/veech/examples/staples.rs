//! Voronoi staples of the catalog surfaces: the non-degenerate Delaunay
//! edges that staple the convex bodies back into the surface.
//!
//! Run with: cargo run --release --example staples

use veech::catalog;
use veech::flat::{delaunay, voronoi_staples};
use veech::surface::TranslationSurface;

fn report(name: &str, surface: &TranslationSurface) {
    let tri = delaunay(surface);
    let staples = voronoi_staples(&tri);
    println!(
        "{name}: {} staples after {} flips, max length^2 = {}",
        staples.len(),
        tri.flip_count(),
        staples.max_len_sq
    );
    for s in &staples.staples {
        println!(
            "  cone {} sector {} -> cone {} sector {}   holonomy ({}, {})",
            s.forward.source,
            s.forward.source_sector,
            s.forward.target,
            s.forward.target_sector,
            s.forward.holonomy.x,
            s.forward.holonomy.y,
        );
    }
}

fn main() {
    report("square torus", &catalog::square_torus().unwrap());
    report("hexagonal torus", &catalog::hex_torus().unwrap());
    report("L surface", &catalog::l_surface_default().unwrap());
    report("McMullen genus two", &catalog::mcmullen_genus2_sqrt3().unwrap());
}
