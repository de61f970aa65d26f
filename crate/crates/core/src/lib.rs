//! Exact propagators for driven quantum systems whose Hamiltonian lives in a
//! three-generator Lie algebra.
//!
//! A Hamiltonian of the form
//!
//! ```text
//! H(t) = ω(t)·( ½ sinθ(t) e^{−iφ(t)} A + ½ sinθ(t) e^{iφ(t)} B + cosθ(t) C ) + c₀(t)·1
//! ```
//!
//! with [A, B] = nC, [C, A] = mA, [C, B] = −mB admits exact solutions built
//! from a dynamical invariant: two auxiliary angles (a, b) obey a closed pair
//! of ordinary differential equations, a unitary V(t) generated by the ladder
//! operators diagonalizes the invariant, and each solution of the
//! time-dependent Schrödinger equation is an invariant eigenvector times a
//! phase that splits into dynamical, geometric, and c-number parts.
//!
//! The crate provides the generator representations, the auxiliary-equation
//! solver on both the rotation-like (elliptic) and boost-like (hyperbolic)
//! branches, the transformation and phase machinery, the supersymmetric
//! multi-photon Jaynes–Cummings construction, and a brute-force time-ordered
//! propagator used to certify every solution against direct integration.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod evolution;
pub mod hamiltonian;
pub mod invariant;
pub mod linalg;
pub mod ode;
pub mod oracle;
pub mod schedule;
pub mod susy_jc;

pub use algebra::{AlgebraSpec, Branch, ClosureReport, Representation};
pub use catalog::{CatalogListing, ExcludedModel, ModelPreset};
pub use error::{Error, Result};
pub use hamiltonian::ConservedModel;
pub use schedule::{CoefficientSchedule, ComplexTimeFunction, TimeFunction};
