//! Equivariant K-homology of the 17 plane crystallographic (wallpaper)
//! groups.
//!
//! The computation runs entirely over exact arithmetic and follows the
//! fixed-point route: enumerate the conjugacy classes of finite-order
//! elements, take their fixed sets and centralizers, form the quotient
//! spaces, compute integral homology by Smith normal form, and assemble the
//! even and odd direct sums into K0 and K1. Every group can be processed in
//! two equivalent models — the affine plane with the full group acting, or
//! the torus with the finite point group acting — and the two must agree.
//!
//! Entry points:
//! - [`catalog::catalog`] returns a validated group from the built-in tables;
//! - [`khomology::k_homology`] runs the whole pipeline for one group;
//! - [`verify::verify_against_paper`] compares against the shipped reference
//!   tables, with known misprints annotated.

pub mod algebra;
pub mod catalog;
pub mod complex;
pub mod conjugacy;
pub mod fixed;
pub mod isometry;
pub mod khomology;
pub mod output;
pub mod quotient;
pub mod render;
pub mod verify;

pub use algebra::{FinAbGroup, Rat};
pub use catalog::{catalog, group_names, GroupSpec, PointGroupElement};
pub use isometry::AffineIso;
