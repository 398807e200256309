//! Generalized Thurston sphere packings on ideally triangulated compact
//! 3-manifolds with boundary.
//!
//! The crate is organised bottom-up:
//!
//! - [`hyptrig`]: scalar hyperbolic trigonometry (pentagon, hexagon and
//!   triangle cosine laws).
//! - [`trunctet`]: a single truncated (hyper-ideal) tetrahedron: edge
//!   lengths from radii, the nondegeneracy polynomials, dihedral angles and
//!   their derivative matrices, relative volume via the Schläfli differential.
//! - [`complex`]: triangulations with explicit edge records, weights, radii.
//! - [`curvature`]: metric states, Ricci/scalar curvature, curvature Hessian
//!   and rigidity certificates.
//! - [`solver`]: damped Newton solver for prescribed scalar curvature and the
//!   path-integral potential.
//! - [`suites`]: seeded property suites driven by `hyperpack verify`.

// `!(x < tol)` comparisons are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod curvature;
mod error;
pub mod hyptrig;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod solver;
pub mod suites;
pub mod trunctet;

pub use error::{Error, Result};
