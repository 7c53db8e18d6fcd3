//! Saddle connection enumeration by chart unfolding. On the marked square
//! torus the connections are exactly the primitive lattice vectors, which
//! makes an easy independent check.
//!
//! Run with: cargo run --release --example segments

use num_integer::Integer;
use veech::catalog;
use veech::exactnum::FieldElement;
use veech::flat::{delaunay, enumerate_segments};

fn main() {
    let torus = catalog::square_torus().unwrap();
    let tri = delaunay(&torus);
    for r_sq in [1i64, 2, 4, 9, 25, 100] {
        let segs = enumerate_segments(&tri, &FieldElement::from_int(torus.spec(), r_sq));
        let primitive = count_primitive(r_sq);
        println!(
            "square torus, length^2 <= {r_sq:3}: {} connections (primitive vectors: {primitive})",
            segs.len()
        );
        assert_eq!(segs.len(), primitive);
    }

    let l = catalog::l_surface_default().unwrap();
    let tri = delaunay(&l);
    let segs = enumerate_segments(&tri, &FieldElement::from_int(l.spec(), 9));
    println!("\nL surface, length^2 <= 9: {} connections", segs.len());
    for c in segs.iter().take(12) {
        println!(
            "  sector {} holonomy ({}, {}) length^2 {}",
            c.source_sector, c.holonomy.x, c.holonomy.y, c.length_sq
        );
    }
    println!("  ...");
    // closure under reversal
    for c in &segs {
        assert!(segs.contains(&c.reversed()));
    }
    println!("closed under orientation reversal: ok");
}

fn count_primitive(r_sq: i64) -> usize {
    let bound = (r_sq as f64).sqrt() as i64 + 1;
    let mut count = 0;
    for x in -bound..=bound {
        for y in -bound..=bound {
            if (x, y) != (0, 0) && x * x + y * y <= r_sq && x.gcd(&y) == 1 {
                count += 1;
            }
        }
    }
    count
}
