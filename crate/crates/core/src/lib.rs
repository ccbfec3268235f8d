//! Numerical toolkit for the bound states of the two-dimensional hydrogen atom.
//!
//! Everything is expressed in excitonic Rydberg units: the Coulomb potential is
//! `-2/ρ`, bound-state energies are `E_n = -1/(n + 1/2)^2` and `q0 = sqrt(-E)`.
//!
//! The crate is organised by subsystem:
//!
//! - [`specfun`]: associated Legendre and Laguerre functions, Bessel `J_m`,
//!   spherical harmonics and their phase factors.
//! - [`quadrature`]: adaptive Gauss–Kronrod, a lobe-wise accelerated engine
//!   for Bessel-oscillatory integrals on `[0, ∞)`, and a product grid on the
//!   unit sphere.
//! - [`eigenstates`]: closed-form energies and wavefunctions in real and
//!   momentum space, plus the Hankel-transform bridge between them.
//! - [`focksphere`]: stereographic projection of momentum space onto the unit
//!   sphere, the Nyström discretization of the sphere integral equation and the
//!   rotation-generator check.
//! - [`identity`]: the Legendre–Bessel–Laguerre integral relation and its scans.
//! - [`radial`]: finite-volume radial solver used as an independent spectrum oracle.
//! - [`operators`]: finite-difference Runge–Lenz operator algebra on a 2D grid.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigenstates;
pub mod error;
pub mod focksphere;
pub mod identity;
pub mod operators;
pub mod quadrature;
pub mod radial;
pub mod report;
pub mod specfun;
pub mod tridiag;

pub use error::{Error, Result};
pub use report::VerificationReport;
