//! The Bergman projection `P : L²(Bₙ) → 𝓗²(Bₙ)` on polynomials.
//!
//! Two independent routes are provided. [`project_monomial`] uses the closed
//! form
//!
//! ```text
//! P(z^α z̄^β) = α!/(n+|α|)! · (|α−β|+n)!/(α−β)! · z^{α−β}   if α ≥ β,
//!            = 0                                           otherwise,
//! ```
//!
//! while [`project_via_kernel_series`] pairs `f` with the expansion of the
//! kernel `1/(1 − z·w̄)^{n+1}`, truncated at `deg f`. Every kernel term of
//! higher degree is orthogonal to `f`, so the truncation is exact.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{check_dim, Error, Result};
use crate::poly::{factorial, inner_product, GaussianRational, MixedPolynomial, MultiIndex};

/// Dimension of the ball the projection acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionConfig {
    n: usize,
}

impl ProjectionConfig {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(ProjectionConfig { n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coefficient of `z^γ w̄^γ` in `1/(1 − z·w̄)^{n+1}`:
    /// `(k+n)!/(k! n!) · k!/γ! = (k+n)!/(n! γ!)` with `k = |γ|`.
    pub fn kernel_coefficient(&self, gamma: &MultiIndex) -> BigRational {
        let k = gamma.degree();
        let num = factorial(k + self.n as u64);
        let den = factorial(self.n as u64) * gamma.factorial();
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    /// The kernel series `Σ_{|γ| ≤ degree} c_γ z^γ w̄^γ`, viewed as the
    /// holomorphic polynomial `K_w(z)` for a fixed point `w`.
    pub fn kernel_section(&self, w: &[GaussianRational], degree: u32) -> Result<MixedPolynomial> {
        check_dim(self.n, w.len())?;
        let wbar: Vec<GaussianRational> = w.iter().map(GaussianRational::conj).collect();
        let zeros = MultiIndex::zeros(self.n);
        let mut out = MixedPolynomial::zero(self.n);
        for gamma in MultiIndex::all_up_to_degree(self.n, degree) {
            let mut c = GaussianRational::from_rational(self.kernel_coefficient(&gamma));
            for (j, &e) in gamma.entries().iter().enumerate() {
                for _ in 0..e {
                    c = &c * &wbar[j];
                }
            }
            out.add_term(gamma, zeros.clone(), c);
        }
        Ok(out)
    }

    pub fn project_monomial(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Result<MixedPolynomial> {
        check_dim(self.n, alpha.dim())?;
        check_dim(self.n, beta.dim())?;
        let Some(gamma) = alpha.checked_sub(beta) else {
            return Ok(MixedPolynomial::zero(self.n));
        };
        let n = self.n as u64;
        let num = alpha.factorial() * factorial(gamma.degree() + n);
        let den = factorial(n + alpha.degree()) * gamma.factorial();
        let c = BigRational::new(BigInt::from(num), BigInt::from(den));
        MixedPolynomial::monomial(gamma, MultiIndex::zeros(self.n), c.into())
    }

    pub fn project(&self, f: &MixedPolynomial) -> Result<MixedPolynomial> {
        check_dim(self.n, f.dim())?;
        f.linear_map(self.n, |a, b| self.project_monomial(a, b))
    }

    /// `(Pf)(z) = Σ_γ c_γ ⟨f, w^γ⟩ z^γ` over `|γ| ≤ deg f`.
    pub fn project_via_kernel_series(&self, f: &MixedPolynomial) -> Result<MixedPolynomial> {
        check_dim(self.n, f.dim())?;
        let Some(deg) = f.degree().finite() else {
            return Ok(MixedPolynomial::zero(self.n));
        };
        let zeros = MultiIndex::zeros(self.n);
        let mut out = MixedPolynomial::zero(self.n);
        for gamma in MultiIndex::all_up_to_degree(self.n, deg as u32) {
            let w_gamma = MixedPolynomial::monomial(
                gamma.clone(),
                zeros.clone(),
                GaussianRational::one(),
            )?;
            let pairing = inner_product(f, &w_gamma)?;
            if pairing.is_zero() {
                continue;
            }
            let c = pairing.scale(&self.kernel_coefficient(&gamma));
            out.add_term(gamma, zeros.clone(), c);
        }
        Ok(out)
    }
}

pub fn project_monomial(alpha: &MultiIndex, beta: &MultiIndex) -> Result<MixedPolynomial> {
    ProjectionConfig::new(alpha.dim())?.project_monomial(alpha, beta)
}

pub fn project(f: &MixedPolynomial) -> Result<MixedPolynomial> {
    ProjectionConfig::new(f.dim())?.project(f)
}

pub fn project_via_kernel_series(f: &MixedPolynomial) -> Result<MixedPolynomial> {
    ProjectionConfig::new(f.dim())?.project_via_kernel_series(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn mono(a: &[u32], b: &[u32]) -> MixedPolynomial {
        MixedPolynomial::monomial(mi(a), mi(b), GaussianRational::one()).unwrap()
    }

    fn rat(p: i64, q: i64) -> GaussianRational {
        GaussianRational::from_ratios(p, q, 0, 1)
    }

    #[test]
    fn monomial_examples() {
        assert_eq!(project_monomial(&mi(&[2]), &mi(&[1])).unwrap(), mono(&[1], &[0]).scale(&rat(2, 3)));
        assert!(project_monomial(&mi(&[1, 0]), &mi(&[0, 1])).unwrap().is_zero());
        assert_eq!(project_monomial(&mi(&[1]), &mi(&[1])).unwrap(), MixedPolynomial::constant(1, rat(1, 2)));
    }

    #[test]
    fn linear_extension_examples() {
        let f = &mono(&[2], &[1]) + &MixedPolynomial::constant(1, rat(5, 1));
        let expected = &mono(&[1], &[0]).scale(&rat(2, 3)) + &MixedPolynomial::constant(1, rat(5, 1));
        assert_eq!(project(&f).unwrap(), expected);
        assert!(project(&MixedPolynomial::zero(1)).unwrap().is_zero());
        assert!(project(&mono(&[0], &[1])).unwrap().is_zero());
    }

    #[test]
    fn kernel_series_examples() {
        assert_eq!(
            project_via_kernel_series(&mono(&[2], &[1])).unwrap(),
            mono(&[1], &[0]).scale(&rat(2, 3))
        );
        assert_eq!(project_via_kernel_series(&MixedPolynomial::one(1)).unwrap(), MixedPolynomial::one(1));
        assert!(project_via_kernel_series(&mono(&[0], &[2])).unwrap().is_zero());
    }

    #[test]
    fn dimension_checks() {
        let cfg = ProjectionConfig::new(2).unwrap();
        assert!(cfg.project(&MixedPolynomial::one(1)).is_err());
        assert_eq!(ProjectionConfig::new(0), Err(Error::ZeroDimension));
    }
}
