//! Convex bodies on the model cone: the closures of the Voronoi 2-cells.
//! Their areas add up exactly to the surface area, which reconstructs the
//! surface from the model pieces.
//!
//! Run with: cargo run --release --example convex_bodies

use veech::catalog;
use veech::exactnum::FieldElement;
use veech::flat::{convex_body, delaunay, enumerate_segments, voronoi_staples};
use veech::surface::TranslationSurface;

fn report(name: &str, surface: &TranslationSurface) {
    let tri = delaunay(surface);
    let staples = voronoi_staples(&tri);
    // segments of length up to twice the longest staple bound every cell
    let four = FieldElement::from_int(surface.spec(), 4);
    let radius = staples.max_len_sq.mul(&four);
    let segs = enumerate_segments(&tri, &radius);
    let mut total = FieldElement::zero(surface.spec());
    println!("{name}:");
    for cone in surface.cone_points() {
        let body = convex_body(cone.id, cone.order + 1, &segs).expect("bounded cell");
        let area = body.area();
        println!(
            "  cone {} (order {}): {} boundary vertices, area {}",
            cone.id,
            cone.order,
            body.vertices.len(),
            area
        );
        total = total.add(&area);
    }
    println!(
        "  total cell area {} vs surface area {}  ({})",
        total,
        surface.total_area(),
        if total == surface.total_area() { "exact match" } else { "MISMATCH" }
    );
}

fn main() {
    report("square torus", &catalog::square_torus().unwrap());
    report("hexagonal torus", &catalog::hex_torus().unwrap());
    report("L surface", &catalog::l_surface_default().unwrap());
    report("McMullen genus two", &catalog::mcmullen_genus2_sqrt3().unwrap());
}
