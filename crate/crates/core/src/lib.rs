//! Exact Bergman projection on the unit ball of ℂⁿ, restricted to the dense
//! subspace of polynomials in `z` and `z̄`, together with the machinery built
//! on top of it:
//!
//! * [`poly`]: multi-indices, Gaussian rationals, mixed polynomials and the
//!   `L²(Bₙ)` inner product for the normalized measure (`μ(Bₙ) = 1`).
//! * [`projection`]: the closed-form monomial projection and an independent
//!   kernel-series route.
//! * [`fields`]: real linear vector fields `(Ax)ᵗ d/dx`, their Wirtinger form
//!   and their exact action on polynomials.
//! * [`commutator`]: `[X, P]` on polynomials, norm-ratio scans and the exact
//!   tangent-field check.
//! * [`filtration`]: iterated commutators, degree truncation and the
//!   commutator semi-norms.
//! * [`matcalc`]: spectrum, resolvent, Neumann series, Gelfand radius and the
//!   contour-integral functional calculus on dense complex matrices.
//! * [`kernels`]: reproducing kernels of the ball, weighted disk and Fock
//!   spaces.
//!
//! Heavy sweeps take an [`Exec`] to pick between rayon and a plain sequential
//! loop; without the `parallel` feature both run sequentially.

pub mod commutator;
pub mod error;
pub mod exec;
pub mod fields;
pub mod filtration;
pub mod kernels;
pub mod matcalc;
pub mod poly;
pub mod projection;
pub mod sampling;
pub mod selftest;

pub use error::{Error, Result};
pub use exec::Exec;
pub use poly::{Degree, GaussianRational, MixedPolynomial, MultiIndex};
