//! Half-edge mesh for triangulated translation surfaces.
//!
//! Every half-edge carries the planar vector from its origin to its head
//! in the chart of its own triangle. Gluings are translations, so the
//! opposite half-edge always carries the negated vector, and a triangle is
//! a next-cycle of three half-edges whose vectors sum to zero with
//! positive orientation. This is all the geometry a translation surface
//! needs: flips, circumscribing-circle tests and chart unfolding are local
//! vector operations.

use crate::exactnum::FieldSpec;
use crate::geom::{cross_sign, Vec2};
use std::sync::Arc;

/// Bookkeeping from a vertex removal: `remap` maps pre-removal half-edge
/// ids to post-removal ids (None for deleted ones), and
/// `origins_before_delete` is the vertex class of every pre-removal
/// half-edge just before the star was deleted.
#[derive(Clone, Debug)]
pub struct RemovalTrace {
    pub remap: Vec<Option<usize>>,
    pub origins_before_delete: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub spec: Arc<FieldSpec>,
    next: Vec<usize>,
    opp: Vec<usize>,
    vec: Vec<Vec2>,
    origin: Vec<usize>, // vertex class id of the half-edge origin
    num_vertices: usize,
}

impl Mesh {
    /// Assemble from raw arrays. `origin` may be empty, in which case
    /// vertex classes are computed from the combinatorics.
    pub fn from_parts(
        spec: Arc<FieldSpec>,
        next: Vec<usize>,
        opp: Vec<usize>,
        vec: Vec<Vec2>,
    ) -> Result<Mesh, String> {
        let mut mesh = Mesh {
            spec,
            next,
            opp,
            vec,
            origin: Vec::new(),
            num_vertices: 0,
        };
        mesh.recompute_vertices();
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn half_edge_count(&self) -> usize {
        self.next.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.next.len() / 3
    }

    pub fn vertex_count(&self) -> usize {
        self.num_vertices
    }

    /// Undirected edge count.
    pub fn edge_count(&self) -> usize {
        self.next.len() / 2
    }

    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }

    pub fn prev(&self, h: usize) -> usize {
        self.next[self.next[h]]
    }

    pub fn opp(&self, h: usize) -> usize {
        self.opp[h]
    }

    pub fn vec(&self, h: usize) -> &Vec2 {
        &self.vec[h]
    }

    pub fn origin(&self, h: usize) -> usize {
        self.origin[h]
    }

    pub fn head(&self, h: usize) -> usize {
        self.origin[self.next[h]]
    }

    /// Next outgoing half-edge counterclockwise around the origin vertex.
    pub fn ccw_around_origin(&self, h: usize) -> usize {
        self.opp[self.prev(h)]
    }

    /// Corner at the origin of `h`: the rays bounding the triangle corner,
    /// counterclockwise from `vec(h)` to `vec(ccw_around_origin(h))`.
    pub fn corner_rays(&self, h: usize) -> (Vec2, Vec2) {
        (self.vec[h].clone(), self.vec[self.ccw_around_origin(h)].clone())
    }

    /// One representative half-edge per undirected edge.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.next.len()).filter(move |&h| h < self.opp[h])
    }

    /// One representative half-edge per triangle (the smallest in its cycle).
    pub fn triangles(&self) -> Vec<usize> {
        let mut seen = vec![false; self.next.len()];
        let mut reps = Vec::with_capacity(self.triangle_count());
        for h in 0..self.next.len() {
            if seen[h] {
                continue;
            }
            reps.push(h);
            let mut cur = h;
            for _ in 0..3 {
                seen[cur] = true;
                cur = self.next[cur];
            }
        }
        reps
    }

    /// All outgoing half-edges at a vertex, in ccw order starting from `h0`.
    pub fn vertex_star(&self, h0: usize) -> Vec<usize> {
        let mut star = vec![h0];
        let mut cur = self.ccw_around_origin(h0);
        while cur != h0 {
            star.push(cur);
            cur = self.ccw_around_origin(cur);
        }
        star
    }

    pub fn degree(&self, h0: usize) -> usize {
        self.vertex_star(h0).len()
    }

    /// A deterministic representative outgoing half-edge per vertex class.
    pub fn vertex_representatives(&self) -> Vec<usize> {
        let mut rep = vec![usize::MAX; self.num_vertices];
        for h in 0..self.next.len() {
            let v = self.origin[h];
            if rep[v] == usize::MAX {
                rep[v] = h;
            }
        }
        rep
    }

    pub fn recompute_vertices(&mut self) {
        let n = self.next.len();
        self.origin = vec![usize::MAX; n];
        let mut count = 0;
        for h0 in 0..n {
            if self.origin[h0] != usize::MAX {
                continue;
            }
            let v = count;
            count += 1;
            let mut cur = h0;
            loop {
                self.origin[cur] = v;
                cur = self.opp[self.next[self.next[cur]]];
                if cur == h0 {
                    break;
                }
            }
        }
        self.num_vertices = count;
    }

    pub fn validate(&self) -> Result<(), String> {
        let n = self.next.len();
        if n % 3 != 0 {
            return Err("half-edge count not a multiple of 3".into());
        }
        for h in 0..n {
            if self.next[self.next[self.next[h]]] != h {
                return Err(format!("next is not a 3-cycle at {h}"));
            }
            if self.opp[self.opp[h]] != h || self.opp[h] == h {
                return Err(format!("opp is not an involution at {h}"));
            }
            if self.vec[self.opp[h]] != self.vec[h].neg() {
                return Err(format!("gluing is not a translation at {h}"));
            }
        }
        for &t in &self.triangles() {
            let a = &self.vec[t];
            let b = &self.vec[self.next[t]];
            let c = &self.vec[self.next[self.next[t]]];
            if !a.add(b).add(c).is_zero() {
                return Err(format!("triangle at {t} does not close"));
            }
            if cross_sign(a, b) <= 0 {
                return Err(format!("triangle at {t} is not positively oriented"));
            }
        }
        Ok(())
    }

    /// Is the surface connected (triangles reachable through gluings)?
    pub fn is_connected(&self) -> bool {
        let t = self.triangle_count();
        if t == 0 {
            return false;
        }
        let mut tri_id = vec![usize::MAX; self.next.len()];
        for (i, &rep) in self.triangles().iter().enumerate() {
            let mut cur = rep;
            for _ in 0..3 {
                tri_id[cur] = i;
                cur = self.next[cur];
            }
        }
        let mut seen = vec![false; t];
        let mut stack = vec![0usize];
        seen[0] = true;
        let reps = self.triangles();
        while let Some(i) = stack.pop() {
            let mut cur = reps[i];
            for _ in 0..3 {
                let j = tri_id[self.opp[cur]];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
                cur = self.next[cur];
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Twice the total area (sum over triangles of the cross product).
    pub fn double_area(&self) -> crate::exactnum::FieldElement {
        let mut acc = crate::exactnum::FieldElement::zero(&self.spec);
        for t in self.triangles() {
            let a = &self.vec[t];
            let b = &self.vec[self.next[t]];
            acc = acc.add(&a.cross(b));
        }
        acc
    }

    /// Flip the undirected edge through `h`. The half-edge ids of the
    /// surrounding four edges are untouched; `h` and `opp(h)` become the
    /// new diagonal. Panics if the surrounding quad is not strictly convex.
    pub fn flip(&mut self, h: usize) {
        let h2 = self.opp[h];
        let a = self.next[h];
        let b = self.next[a];
        let c = self.next[h2];
        let d = self.next[c];
        debug_assert!(b != h && d != h2);
        let va = self.vec[a].clone();
        let vd = self.vec[d].clone();
        // new diagonal R -> S
        let new_vec = va.add(&vd).neg();
        debug_assert!(
            cross_sign(&self.vec[d], &self.vec[a]) > 0
                && cross_sign(&self.vec[b], &self.vec[c]) > 0,
            "flip quad must be strictly convex"
        );
        // triangle (d, a, h): S->Q, Q->R, R->S
        self.next[d] = a;
        self.next[a] = h;
        self.next[h] = d;
        // triangle (c, h2, b): P->S, S->R, R->P
        self.next[c] = h2;
        self.next[h2] = b;
        self.next[b] = c;
        self.vec[h] = new_vec.clone();
        self.vec[h2] = new_vec.neg();
        // origins: h starts at R = origin(b), h2 starts at S = origin(d)
        self.origin[h] = self.origin[b];
        self.origin[h2] = self.origin[d];
    }

    /// Is the quad around edge `h` strictly convex (so `flip` is legal)?
    pub fn flippable(&self, h: usize) -> bool {
        let h2 = self.opp[h];
        let a = self.next[h];
        let b = self.next[a];
        let c = self.next[h2];
        let d = self.next[c];
        // quad P, S, Q, R in the unfolded chart; strict convexity at the
        // four corners reduces to these two sign tests plus the two that
        // hold automatically in a valid mesh (triangle orientations).
        cross_sign(&self.vec[d], &self.vec[a]) > 0 && cross_sign(&self.vec[b], &self.vec[c]) > 0
    }

    /// The neighboring triangle unfolded into the chart where origin(h)
    /// sits at the origin: returns (Q, R, S) with Q = head of h, R = apex
    /// of h's own triangle, S = apex across the edge. The neighbor is
    /// (h2: Q->P, c: P->S, d: S->Q), so S = Q + vec(h2) + vec(c).
    pub fn unfolded_quad(&self, h: usize) -> (Vec2, Vec2, Vec2) {
        let h2 = self.opp[h];
        let a = self.next[h];
        let c = self.next[h2];
        let q = self.vec[h].clone();
        let r = q.add(&self.vec[a]);
        let s = q.add(&self.vec[h2]).add(&self.vec[c]);
        (q, r, s)
    }

    /// Remove a vertex whose cone angle is exactly one full turn. The star
    /// of the vertex unfolds into a simple planar polygon (its link);
    /// the star triangles are replaced by an ear-clipped triangulation of
    /// that polygon, which needs no vertex at the removed point. Returns
    /// the compacted mesh and a trace for re-identifying surviving
    /// vertices: `origins_before_delete` names each old half-edge's vertex
    /// class and `remap` carries old ids to new ids.
    pub fn remove_flat_vertex(self, h0: usize) -> Result<(Mesh, RemovalTrace), String> {
        let star = self.vertex_star(h0);
        let n = star.len();
        if n < 3 {
            return Err("flat vertex of degree < 3".into());
        }
        // outer edge of the i-th star triangle: w_i -> w_{i+1}
        let outer: Vec<usize> = star.iter().map(|&s| self.next[s]).collect();
        // unfold the link polygon around the vertex (chart pinned at it)
        let mut link: Vec<Vec2> = Vec::with_capacity(n);
        let mut pos = self.vec[star[0]].clone();
        for i in 0..n {
            link.push(pos.clone());
            pos = pos.add(&self.vec[outer[i]]);
        }
        if pos != link[0] {
            return Err("link does not close: vertex is not flat".into());
        }
        let tris = crate::geom::ear_clip(&link).ok_or("link polygon has no ear clipping")?;

        let dead: std::collections::HashSet<usize> =
            star.iter().flat_map(|&s| [s, self.opp[s]]).collect();
        let old_count = self.next.len();
        let kept: Vec<usize> = (0..old_count).filter(|h| !dead.contains(h)).collect();
        let mut remap: Vec<Option<usize>> = vec![None; old_count];
        for (i, &h) in kept.iter().enumerate() {
            remap[h] = Some(i);
        }
        let mut next: Vec<usize> = vec![usize::MAX; kept.len()];
        let mut opp: Vec<usize> = vec![usize::MAX; kept.len()];
        let mut vecs: Vec<Vec2> = Vec::with_capacity(kept.len() + 6 * (n - 2));
        for &h in &kept {
            vecs.push(self.vec[h].clone());
        }
        for &h in &kept {
            let nh = remap[h].unwrap();
            if !outer.contains(&h) {
                next[nh] = remap[self.next[h]].ok_or("dangling next in removal")?;
            }
            opp[nh] = remap[self.opp[h]].ok_or("dangling opp in removal")?;
        }
        // add the link triangulation: boundary edges reuse outer ids,
        // diagonals get fresh paired ids
        let mut diag: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        let mut edge_id = |from: usize,
                           to: usize,
                           next_arr: &mut Vec<usize>,
                           opp_arr: &mut Vec<usize>,
                           vec_arr: &mut Vec<Vec2>|
         -> usize {
            if to == (from + 1) % n {
                return remap[outer[from]].unwrap();
            }
            if let Some(&h) = diag.get(&(from, to)) {
                return h;
            }
            let h = next_arr.len();
            let h2 = h + 1;
            next_arr.push(usize::MAX);
            next_arr.push(usize::MAX);
            opp_arr.push(h2);
            opp_arr.push(h);
            vec_arr.push(link[to].sub(&link[from]));
            vec_arr.push(link[from].sub(&link[to]));
            diag.insert((from, to), h);
            diag.insert((to, from), h2);
            h
        };
        for tri in tris {
            let e01 = edge_id(tri[0], tri[1], &mut next, &mut opp, &mut vecs);
            let e12 = edge_id(tri[1], tri[2], &mut next, &mut opp, &mut vecs);
            let e20 = edge_id(tri[2], tri[0], &mut next, &mut opp, &mut vecs);
            next[e01] = e12;
            next[e12] = e20;
            next[e20] = e01;
        }
        if next.iter().any(|&x| x == usize::MAX) || opp.iter().any(|&x| x == usize::MAX) {
            return Err("incomplete link retriangulation".into());
        }
        let trace = RemovalTrace {
            remap,
            origins_before_delete: self.origin.clone(),
        };
        let mesh = Mesh::from_parts(self.spec.clone(), next, opp, vecs)?;
        Ok((mesh, trace))
    }
}
