use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::rational::factorial;
use super::{GaussianRational, MixedPolynomial, MultiIndex};
use crate::error::{check_dim, Result};

/// `∫ |z^s|² dμ = n! s! / (n + |s|)!` for the normalized ball measure.
pub(crate) fn moment(n: usize, s: &MultiIndex) -> BigRational {
    let num = factorial(n as u64) * s.factorial();
    let den = factorial(n as u64 + s.degree());
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `‖z^α z̄^β‖² = n! (α+β)! / (n + |α+β|)!`.
pub fn monomial_norm_sq(alpha: &MultiIndex, beta: &MultiIndex) -> Result<BigRational> {
    check_dim(alpha.dim(), beta.dim())?;
    Ok(moment(alpha.dim(), &(alpha + beta)))
}

/// `⟨z^α z̄^β, z^γ z̄^δ⟩ = ∫ z^{α+δ} z̄^{β+γ} dμ`, which is
/// `n!(α+δ)!/(n+|α+δ|)!` when `α+δ = β+γ` and zero otherwise.
pub fn monomial_inner_product(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    gamma: &MultiIndex,
    delta: &MultiIndex,
) -> Result<GaussianRational> {
    let n = alpha.dim();
    check_dim(n, beta.dim())?;
    check_dim(n, gamma.dim())?;
    check_dim(n, delta.dim())?;
    let left = alpha + delta;
    if left != beta + gamma {
        return Ok(GaussianRational::zero());
    }
    Ok(GaussianRational::from_rational(moment(n, &left)))
}

/// Charge `α − β ∈ ℤⁿ`; monomials of different charge are orthogonal.
pub(crate) fn charge(alpha: &MultiIndex, beta: &MultiIndex) -> Vec<i64> {
    alpha
        .entries()
        .iter()
        .zip(beta.entries())
        .map(|(&a, &b)| a as i64 - b as i64)
        .collect()
}

/// `⟨f, g⟩ = ∫ f ḡ dμ`: linear in `f`, conjugate-linear in `g`.
pub fn inner_product(f: &MixedPolynomial, g: &MixedPolynomial) -> Result<GaussianRational> {
    check_dim(f.dim(), g.dim())?;
    let n = f.dim();
    let mut by_charge: HashMap<Vec<i64>, Vec<(&MultiIndex, &MultiIndex, GaussianRational)>> =
        HashMap::new();
    for (a, b, c) in g.terms() {
        by_charge.entry(charge(a, b)).or_default().push((a, b, c.conj()));
    }
    let mut acc = GaussianRational::zero();
    for (a, b, c) in f.terms() {
        let Some(partners) = by_charge.get(&charge(a, b)) else {
            continue;
        };
        for (_, g_b, g_c) in partners {
            // z^α z̄^β · conj(z^γ z̄^δ) integrates as the moment at α+δ
            let s = a + g_b;
            let w = moment(n, &s);
            acc += &(c * g_c).scale(&w);
        }
    }
    Ok(acc)
}

/// `‖f‖²`, exact and real.
pub fn norm_sq(f: &MixedPolynomial) -> BigRational {
    inner_product(f, f)
        .expect("same polynomial")
        .re()
        .clone()
}
