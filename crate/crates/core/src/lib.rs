//! Numerical laboratory for extremals of anisotropic critical diffusion on convex cones.
//!
//! The crate evaluates anisotropic norms and their duals, builds the explicit
//! extremal profiles ("bubbles") of the sharp (weighted) anisotropic Sobolev
//! inequality on convex cones, and verifies — by quadrature, finite differences,
//! and discrete optimal transport — the identities those extremals satisfy:
//!
//! * the critical equation `div(a(∇u)) + u^{p*-1} = 0` with conormal boundary
//!   conditions, where `a(ξ) = H^{p-1}(ξ)∇H(ξ)`;
//! * decay laws for the profile and its gradient, and Caccioppoli-type growth
//!   bounds for second-order quantities;
//! * the pointwise differential identity behind the rigidity argument, the
//!   Newton inequality for second symmetric functions, and the resulting
//!   `∇[a(∇v)] = λ·Id` structure of the transformed extremal;
//! * the monotone-transport inequality chain that proves sharpness, link by
//!   link, including its equality cases.
//!
//! Everything is deterministic given a seed; Monte Carlo sampling uses
//! counter-based streams so results do not depend on thread count.

pub mod bubble;
pub mod cone;
pub mod error;
pub mod fd;
pub mod fields;
pub mod grid;
pub mod norm;
pub mod operators;
pub mod report;
pub mod rng;
pub mod search;
pub mod sobolev;
pub mod special;
pub mod tol;
pub mod transport;
pub mod vecops;

pub use bubble::{BubbleParams, BubbleShape};
pub use cone::{ConeSpec, WeightSpec};
pub use error::{Error, Result};
pub use grid::{QuadResult, RadialGrid, Tail};
pub use norm::NormSpec;
pub use report::VerificationReport;
pub use search::RadialProfile;
