//! Exact arithmetic on mixed polynomials `Σ c_{αβ} z^α z̄^β` with Gaussian
//! rational coefficients, and the `L²(Bₙ)` inner product on them.
//!
//! The measure on the ball is normalized so that `μ(Bₙ) = 1`. Under that
//! normalization
//!
//! ```text
//! ∫ z^a z̄^b dμ = n! a! / (n + |a|)!   if a = b,   0 otherwise
//! ```
//!
//! which is all the inner product needs.

mod gaussian;
mod inner;
mod json;
mod multiindex;
mod polynomial;
mod rational;

pub use gaussian::GaussianRational;
pub use inner::{inner_product, monomial_inner_product, monomial_norm_sq, norm_sq};
pub use json::{PolynomialJson, TermJson};
pub use multiindex::MultiIndex;
pub use polynomial::{Degree, MixedPolynomial};
pub use rational::{factorial, format_rational, parse_rational, rational_to_f64};
