use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{GaussianRational, MultiIndex};
use crate::error::{check_dim, Error, Result};

/// Total degree of a polynomial. The zero polynomial has degree `NegInfinity`,
/// which compares below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u64),
}

impl Degree {
    pub fn finite(self) -> Option<u64> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

type Key = (MultiIndex, MultiIndex);

/// `Σ c_{αβ} z^α z̄^β` over the Gaussian rationals.
///
/// Stored coefficients are never zero and every key has length `n`, so two
/// polynomials are equal exactly when their term maps are.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MixedPolynomial {
    n: usize,
    terms: BTreeMap<Key, GaussianRational>,
}

impl MixedPolynomial {
    pub fn zero(n: usize) -> Self {
        MixedPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        Self::monomial(MultiIndex::zeros(n), MultiIndex::zeros(n), c)
            .expect("zero indices share a dimension")
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, GaussianRational::one())
    }

    /// `c · z^α z̄^β`.
    pub fn monomial(alpha: MultiIndex, beta: MultiIndex, c: GaussianRational) -> Result<Self> {
        check_dim(alpha.dim(), beta.dim())?;
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, beta, c);
        Ok(p)
    }

    /// The coordinate function `z_i` (zero-based).
    pub fn z(n: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, i), MultiIndex::zeros(n), GaussianRational::one())
            .expect("same dimension")
    }

    /// The coordinate function `z̄_i` (zero-based).
    pub fn zbar(n: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::zeros(n), MultiIndex::unit(n, i), GaussianRational::one())
            .expect("same dimension")
    }

    /// The real coordinate `x_k` on `ℝ²ⁿ`, zero-based, with the interleaved
    /// convention `z_j = x_{2j} + i x_{2j+1}`.
    pub fn real_coordinate(n: usize, k: usize) -> Self {
        let j = k / 2;
        let half = GaussianRational::from_ratios(1, 2, 0, 1);
        let half_i = GaussianRational::from_ratios(0, 1, 1, 2);
        if k.is_multiple_of(2) {
            // (z + z̄)/2
            &Self::z(n, j).scale(&half) + &Self::zbar(n, j).scale(&half)
        } else {
            // (z − z̄)/(2i) = −(i/2) z + (i/2) z̄
            &Self::z(n, j).scale(&-&half_i) + &Self::zbar(n, j).scale(&half_i)
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &GaussianRational)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn coefficient(&self, alpha: &MultiIndex, beta: &MultiIndex) -> GaussianRational {
        self.terms
            .get(&(alpha.clone(), beta.clone()))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|(a, b)| a.degree() + b.degree())
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// No `z̄` appears.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|(_, b)| b.is_zero())
    }

    /// Takes real values on `ℂⁿ`, i.e. equals its own conjugate.
    pub fn is_real_valued(&self) -> bool {
        self.conj() == *self
    }

    /// Adds `c · z^α z̄^β` in place, dropping the term if it cancels.
    ///
    /// Panics if the indices do not have length `n`.
    pub fn add_term(&mut self, alpha: MultiIndex, beta: MultiIndex, c: GaussianRational) {
        assert!(alpha.dim() == self.n && beta.dim() == self.n, "term dimension mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry((alpha, beta)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &MixedPolynomial, c: &GaussianRational) -> Result<()> {
        check_dim(self.n, other.n)?;
        if c.is_zero() {
            return Ok(());
        }
        for ((a, b), v) in &other.terms {
            self.add_term(a.clone(), b.clone(), v * c);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MixedPolynomial) -> Result<MixedPolynomial> {
        let mut out = self.clone();
        out.add_scaled(other, &GaussianRational::one())?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MixedPolynomial) -> Result<MixedPolynomial> {
        let mut out = self.clone();
        out.add_scaled(other, &-GaussianRational::one())?;
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MixedPolynomial) -> Result<MixedPolynomial> {
        check_dim(self.n, other.n)?;
        let mut out = Self::zero(self.n);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> MixedPolynomial {
        let mut out = Self::zero(self.n);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        out
    }

    /// Pointwise complex conjugate: `c z^α z̄^β ↦ c̄ z^β z̄^α`.
    pub fn conj(&self) -> MixedPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|((a, b), c)| ((b.clone(), a.clone()), c.conj()))
            .collect();
        MixedPolynomial { n: self.n, terms }
    }

    /// Extends a map defined on monomials `z^α z̄^β` linearly.
    pub fn linear_map<F>(&self, image_dim: usize, mut f: F) -> Result<MixedPolynomial>
    where
        F: FnMut(&MultiIndex, &MultiIndex) -> Result<MixedPolynomial>,
    {
        let mut out = Self::zero(image_dim);
        for ((a, b), c) in &self.terms {
            let img = f(a, b)?;
            out.add_scaled(&img, c)?;
        }
        Ok(out)
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        check_dim(self.n, point.len())?;
        let conj: Vec<GaussianRational> = point.iter().map(GaussianRational::conj).collect();
        let mut acc = GaussianRational::zero();
        for ((a, b), c) in &self.terms {
            let mut t = c.clone();
            for j in 0..self.n {
                for _ in 0..a.entries()[j] {
                    t = &t * &point[j];
                }
                for _ in 0..b.entries()[j] {
                    t = &t * &conj[j];
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &[Complex64]) -> Result<Complex64> {
        check_dim(self.n, point.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), c) in &self.terms {
            let mut t = c.to_complex64();
            for j in 0..self.n {
                t *= point[j].powu(a.entries()[j]) * point[j].conj().powu(b.entries()[j]);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Builds a polynomial from raw terms, summing duplicates and validating
    /// dimensions.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<MixedPolynomial>
    where
        I: IntoIterator<Item = (MultiIndex, MultiIndex, GaussianRational)>,
    {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut p = Self::zero(n);
        for (a, b, c) in terms {
            check_dim(n, a.dim())?;
            check_dim(n, b.dim())?;
            p.add_term(a, b, c);
        }
        Ok(p)
    }
}

impl Add for &MixedPolynomial {
    type Output = MixedPolynomial;
    /// Panics on a dimension mismatch; see [`MixedPolynomial::checked_add`].
    fn add(self, o: &MixedPolynomial) -> MixedPolynomial {
        self.checked_add(o).expect("polynomial dimension mismatch")
    }
}

impl Sub for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn sub(self, o: &MixedPolynomial) -> MixedPolynomial {
        self.checked_sub(o).expect("polynomial dimension mismatch")
    }
}

impl Mul for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn mul(self, o: &MixedPolynomial) -> MixedPolynomial {
        self.checked_mul(o).expect("polynomial dimension mismatch")
    }
}

impl Neg for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn neg(self) -> MixedPolynomial {
        self.scale(&-GaussianRational::one())
    }
}

impl fmt::Display for MixedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (j, &e) in a.entries().iter().enumerate() {
                if e > 0 {
                    write!(f, "·z{}^{e}", j + 1)?;
                }
            }
            for (j, &e) in b.entries().iter().enumerate() {
                if e > 0 {
                    write!(f, "·z̄{}^{e}", j + 1)?;
                }
            }
        }
        Ok(())
    }
}
