//! Immersed finite element (IFE) spaces for the planar linear-elasticity
//! interface problem on interface-independent Cartesian meshes.
//!
//! The library builds linear, bilinear and rotated Q1 vector finite element
//! spaces whose shape functions satisfy displacement- and traction-jump
//! conditions across a material interface described by a level set, without
//! fitting the mesh to the interface. On cut elements the shape functions
//! are piecewise polynomials glued across the interface chord; their
//! coefficients come from a small Sherman-Morrison system that is provably
//! solvable for the bilinear and rotated Q1 spaces regardless of the
//! interface position and the Lamé parameters.
//!
//! The crate covers the full pipeline: mesh and degree-of-freedom layout,
//! interface classification and cut geometry, shape-function construction
//! and evaluation, cut-cell quadrature, Galerkin assembly with a conjugate
//! gradient solver, Lagrange interpolation, piecewise error norms, and a
//! convergence-study driver with CSV/markdown output. See the `examples/`
//! directory for one runnable program per capability and the `ife-elasticity`
//! binary for the command-line harness.

pub mod assembly;
pub mod convergence;
pub mod cut;
pub mod error;
pub mod exact;
pub mod jump;
pub mod levelset;
pub mod mesh;
pub mod poly;
pub mod quadrature;
pub mod shapes;
pub mod space;

pub use error::{Error, Result};
