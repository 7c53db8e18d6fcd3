//! Sector bookkeeping around cone points.
//!
//! Directions out of a cone point of angle 2*pi*(d+1) live on d+1 copies
//! of the plane; the copy index of a direction is its sector. Sectors are
//! measured from a fixed reference: the first horizontal-right ray met in
//! the corner walk starting at the mesh's deterministic representative
//! half-edge. No angle is ever computed; a direction's sector is the
//! number of times the corner fan sweeps past horizontal before it.

use crate::geom::{cross_sign, same_direction, strictly_inside_convex_sector, Vec2};
use crate::mesh::Mesh;

#[derive(Clone, Debug)]
struct VertexFan {
    /// outgoing half-edges in ccw order
    star: Vec<usize>,
    /// number of full turns in the cone angle: d + 1
    turns: usize,
    /// prefix[j] = number of horizontal crossings among corners 0..j
    prefix: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct AngleIndex {
    fans: Vec<VertexFan>,
    /// (vertex class, position in star) per half-edge
    position: Vec<(usize, usize)>,
}

impl AngleIndex {
    pub fn build(mesh: &Mesh) -> AngleIndex {
        let e1 = Vec2::from_ints(&mesh.spec, 1, 0);
        let reps = mesh.vertex_representatives();
        let mut fans = Vec::with_capacity(reps.len());
        let mut position = vec![(usize::MAX, usize::MAX); mesh.half_edge_count()];
        for (class, &rep) in reps.iter().enumerate() {
            let star = mesh.vertex_star(rep);
            let mut prefix = Vec::with_capacity(star.len() + 1);
            prefix.push(0usize);
            for (j, &h) in star.iter().enumerate() {
                let (a, b) = mesh.corner_rays(h);
                let crosses = same_direction(&a, &e1) || strictly_inside_convex_sector(&a, &b, &e1);
                prefix.push(prefix[j] + usize::from(crosses));
                position[h] = (class, j);
            }
            let turns = prefix[star.len()];
            debug_assert!(turns >= 1, "cone angle is a positive multiple of 2*pi");
            fans.push(VertexFan { star, turns, prefix });
        }
        AngleIndex { fans, position }
    }

    pub fn turns(&self, vertex: usize) -> usize {
        self.fans[vertex].turns
    }

    /// Vertex class and star position of an outgoing half-edge.
    pub fn position_of(&self, h: usize) -> (usize, usize) {
        self.position[h]
    }

    /// Sector of the ray along half-edge `h` at its origin cone point.
    pub fn sector_of_ray(&self, mesh: &Mesh, h: usize) -> usize {
        let (vertex, pos) = self.position[h];
        self.sector_in_corner(mesh, vertex, pos, mesh.vec(h))
    }

    /// Sector of a direction `u` known to lie in the corner at star
    /// position `pos` of `vertex` (closed at the corner's start ray, open
    /// at its end ray).
    pub fn sector_in_corner(&self, mesh: &Mesh, vertex: usize, pos: usize, u: &Vec2) -> usize {
        let fan = &self.fans[vertex];
        let start = mesh.vec(fan.star[pos]);
        debug_assert!(self.direction_in_corner(mesh, vertex, pos, u));
        let e1 = Vec2::from_ints(&mesh.spec, 1, 0);
        // does the closed sweep [start, u] pass horizontal?
        let partial = if same_direction(start, &e1) {
            true
        } else if same_direction(u, start) {
            false
        } else {
            same_direction(u, &e1) || strictly_inside_convex_sector(start, u, &e1)
        };
        let raw = fan.prefix[pos] as i64 + i64::from(partial) - 1;
        raw.rem_euclid(fan.turns as i64) as usize
    }

    /// Does direction `u` lie in corner `pos` ([start, end) convention)?
    pub fn direction_in_corner(&self, mesh: &Mesh, vertex: usize, pos: usize, u: &Vec2) -> bool {
        let fan = &self.fans[vertex];
        let h = fan.star[pos];
        let (a, b) = mesh.corner_rays(h);
        same_direction(&a, u) || strictly_inside_convex_sector(&a, &b, u)
    }

    /// Locate the corner ([start, end) convention) containing direction
    /// `u` at `vertex`, starting the search from star position `hint`.
    pub fn corner_of_direction(&self, mesh: &Mesh, vertex: usize, hint: usize, u: &Vec2) -> usize {
        let fan = &self.fans[vertex];
        let n = fan.star.len();
        for step in 0..n {
            let pos = (hint + step) % n;
            if self.direction_in_corner(mesh, vertex, pos, u) {
                return pos;
            }
        }
        unreachable!("direction must lie in some corner");
    }

    pub fn star(&self, vertex: usize) -> &[usize] {
        &self.fans[vertex].star
    }

    /// Check: the corner-crossing prefix equals the cone order plus one.
    pub fn consistent_with_orders(&self, orders: &[usize]) -> bool {
        self.fans.len() == orders.len()
            && self
                .fans
                .iter()
                .zip(orders)
                .all(|(f, &d)| f.turns == d + 1)
    }
}

/// Exact comparison of planar directions by angle in [0, 2*pi).
pub fn circle_pos_cmp(u: &Vec2, w: &Vec2) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let half = |v: &Vec2| -> u8 {
        // 0 for angle in [0, pi), 1 for [pi, 2*pi)
        match v.y.sign() {
            1 => 0,
            -1 => 1,
            _ => {
                if v.x.sign() > 0 {
                    0
                } else {
                    1
                }
            }
        }
    };
    let (hu, hw) = (half(u), half(w));
    if hu != hw {
        return hu.cmp(&hw);
    }
    match cross_sign(u, w) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => {
            if same_direction(u, w) {
                Ordering::Equal
            } else {
                // opposite directions in the same half cannot happen
                unreachable!("antipodal directions classified in one half circle")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::flat::delaunay;

    #[test]
    fn l_surface_fan_has_three_turns() {
        let s = catalog::l_surface_default().unwrap();
        let t = delaunay(&s);
        let idx = t.angles();
        assert_eq!(idx.turns(0), 3);
        let orders: Vec<usize> = s.cone_points().iter().map(|c| c.order).collect();
        assert!(idx.consistent_with_orders(&orders));
    }

    #[test]
    fn square_torus_single_sector() {
        let s = catalog::square_torus().unwrap();
        let t = delaunay(&s);
        let idx = t.angles();
        assert_eq!(idx.turns(0), 1);
        for h in 0..t.mesh().half_edge_count() {
            assert_eq!(idx.sector_of_ray(t.mesh(), h), 0);
        }
    }

    #[test]
    fn sectors_cover_all_residues_on_l() {
        let s = catalog::l_surface_default().unwrap();
        let t = delaunay(&s);
        let idx = t.angles();
        let mut seen = [false; 3];
        for h in 0..t.mesh().half_edge_count() {
            seen[idx.sector_of_ray(t.mesh(), h)] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn circle_order_is_total() {
        let q = crate::exactnum::FieldSpec::rationals();
        let dirs = [
            Vec2::from_ints(&q, 1, 0),
            Vec2::from_ints(&q, 2, 1),
            Vec2::from_ints(&q, 0, 1),
            Vec2::from_ints(&q, -1, 1),
            Vec2::from_ints(&q, -1, 0),
            Vec2::from_ints(&q, -1, -1),
            Vec2::from_ints(&q, 0, -1),
            Vec2::from_ints(&q, 1, -1),
        ];
        for i in 0..dirs.len() {
            for j in 0..dirs.len() {
                let c = circle_pos_cmp(&dirs[i], &dirs[j]);
                assert_eq!(c, i.cmp(&j), "{i} vs {j}");
            }
        }
    }
}
