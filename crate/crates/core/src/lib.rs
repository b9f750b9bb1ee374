//! Constructions of symplectic surfaces in symplectic 4-manifolds, made
//! executable.
//!
//! - [`plane`]: exact classification of linear planes in `(C^2, w0)`.
//! - [`chart`]: surfaces as graphs over a Darboux chart, the perturbation
//!   pipelines that make multiple intersections complex-like and then nice,
//!   node resolution and grid verification.
//! - [`kahler`]: the Kähler form of a Hermitian line bundle chart and the
//!   flat gluing moves.
//! - [`divisor`]: intersection lattices, adjunction genus, blow-ups,
//!   divisor realizability and Seifert bundle homology.
//! - [`scenario`], [`suite`] and [`report`]: JSON scenario runner and
//!   verification suites behind the `sympsurf` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod chart;
pub mod divisor;
pub mod kahler;
pub mod plane;
pub mod report;
pub mod scenario;
pub mod suite;
