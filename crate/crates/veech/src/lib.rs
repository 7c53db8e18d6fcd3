//! Veech groups of translation surfaces.
//!
//! A translation surface enters as polygons with translation-glued sides
//! over a real-embedded number field. The crate finds the derivatives of
//! its affine self-maps in increasing Frobenius norm by testing candidate
//! matrices against the marked Voronoi staples on a model cone surface,
//! and assembles the hyperbolic half-plane intersection of the elements
//! found. When that domain's certified area drops below twice its share
//! inside the agreement ball of the current norm bound, the elements
//! provably generate the whole group: side pairings and vertex cycles are
//! then verified exactly, yielding a fundamental domain and the Fuchsian
//! signature.
//!
//! The combinatorial and group-theoretic layers are exact (field
//! arithmetic, quadratic surds, sign predicates); certified interval
//! arithmetic enters only for areas and the stopping comparison, which
//! are designed so that imprecision can delay an answer but never wrongly
//! assert one.
//!
//! See the `examples/` directory for runnable entry points per
//! capability, or the `veech` binary for the command line.

// FieldElement hashing and equality read only the immutable coefficient
// vector; the interior root-refinement cache never influences either, so
// field elements are sound map keys.
#![allow(clippy::mutable_key_type)]

pub mod catalog;
pub mod cli;
pub mod driver;
pub mod exactnum;
pub mod flat;
pub mod geom;
pub mod hyperbolic;
pub mod membership;
pub mod mesh;
pub mod model;
pub mod numeric;
pub mod surface;
