//! Linear vector fields `X = (Ax)ᵗ d/dx` on `ℝ²ⁿ ≅ ℂⁿ`.
//!
//! Real coordinates are interleaved: `z_j = x_{2j} + i x_{2j+1}` (zero-based).
//! The Wirtinger matrices `(B, C)` returned by [`complexify`] depend on this
//! ordering. With it,
//!
//! ```text
//! X = Σ_j (Σ_k B_jk z_k + C_jk z̄_k) ∂/∂z_j + conjugate,
//! ```
//!
//! where the conjugate part has coefficients `C̄ z + B̄ z̄` in front of `∂/∂z̄_j`.

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::poly::{rational_to_f64, GaussianRational, MixedPolynomial, MultiIndex};

/// `A ∈ M_{2n}(ℚ)` defining `X = (Ax)ᵗ d/dx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealLinearVectorField {
    n: usize,
    a: Vec<Vec<BigRational>>,
}

impl RealLinearVectorField {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 || !size.is_multiple_of(2) {
            return Err(Error::Malformed(format!(
                "vector-field matrix must be 2n×2n with n ≥ 1, got {size} rows"
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::Malformed(format!(
                "matrix is not square: row of length {} in a {size}-row matrix",
                r.len()
            )));
        }
        Ok(RealLinearVectorField { n: size / 2, a: rows })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn zero(n: usize) -> Self {
        RealLinearVectorField { n, a: vec![vec![BigRational::zero(); 2 * n]; 2 * n] }
    }

    /// Ambient complex dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.a
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.a[i][j]
    }

    /// `max |A + Aᵗ|` entrywise; zero exactly when `A` is antisymmetric.
    pub fn antisymmetry_defect(&self) -> BigRational {
        let m = 2 * self.n;
        let mut worst = BigRational::zero();
        for i in 0..m {
            for j in i..m {
                let s = (&self.a[i][j] + &self.a[j][i]).abs();
                if s > worst {
                    worst = s;
                }
            }
        }
        worst
    }

    /// `X` is tangent to `S^{2n−1}` iff `A + Aᵗ = 0`.
    pub fn is_tangent(&self) -> bool {
        self.antisymmetry_defect().is_zero()
    }

    /// `A` commutes with multiplication by `i`, i.e. the flow `e^{As}` is
    /// complex linear on `ℂⁿ`. Tangent fields with this property generate
    /// unitary flows.
    pub fn is_complex_linear(&self) -> bool {
        for j in 0..self.n {
            for k in 0..self.n {
                let (r0, r1, c0, c1) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
                // AJ = JA on the (j, k) 2×2 block, J = [[0, -1], [1, 0]]
                if self.a[r0][c0] != self.a[r1][c1] || self.a[r0][c1] != -&self.a[r1][c0] {
                    return false;
                }
            }
        }
        true
    }

    /// `xᵗ A x`, exact.
    pub fn quadratic_form(&self, x: &[BigRational]) -> Result<BigRational> {
        check_dim(2 * self.n, x.len())?;
        let mut acc = BigRational::zero();
        for (i, row) in self.a.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                acc += &x[i] * v * &x[j];
            }
        }
        Ok(acc)
    }

    /// `(Ax)_k` as a polynomial in `z, z̄`.
    pub fn image_coordinate(&self, k: usize) -> MixedPolynomial {
        let mut out = MixedPolynomial::zero(self.n);
        for (l, v) in self.a[k].iter().enumerate() {
            out.add_scaled(&MixedPolynomial::real_coordinate(self.n, l), &v.clone().into())
                .expect("same dimension");
        }
        out
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let m = 2 * self.n;
        DMatrix::from_fn(m, m, |i, j| rational_to_f64(&self.a[i][j]))
    }
}

/// Wirtinger form of a real linear field: the `∂/∂z_j` coefficient is
/// `Σ_k B_jk z_k + C_jk z̄_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexLinearVectorField {
    n: usize,
    b: Vec<Vec<GaussianRational>>,
    c: Vec<Vec<GaussianRational>>,
}

impl ComplexLinearVectorField {
    pub fn new(b: Vec<Vec<GaussianRational>>, c: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let n = b.len();
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        check_dim(n, c.len())?;
        for row in b.iter().chain(&c) {
            check_dim(n, row.len())?;
        }
        Ok(ComplexLinearVectorField { n, b, c })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> &[Vec<GaussianRational>] {
        &self.b
    }

    pub fn c(&self) -> &[Vec<GaussianRational>] {
        &self.c
    }

    pub fn to_field(&self) -> VectorField {
        let n = self.n;
        let mut dz = Vec::with_capacity(n);
        let mut dzbar = Vec::with_capacity(n);
        for j in 0..n {
            let mut p = MixedPolynomial::zero(n);
            let mut q = MixedPolynomial::zero(n);
            for k in 0..n {
                let zk = MixedPolynomial::z(n, k);
                let zbk = MixedPolynomial::zbar(n, k);
                p.add_scaled(&zk, &self.b[j][k]).expect("same dimension");
                p.add_scaled(&zbk, &self.c[j][k]).expect("same dimension");
                q.add_scaled(&zk, &self.c[j][k].conj()).expect("same dimension");
                q.add_scaled(&zbk, &self.b[j][k].conj()).expect("same dimension");
            }
            dz.push(p);
            dzbar.push(q);
        }
        VectorField { n, dz, dzbar }
    }

    pub fn apply(&self, f: &MixedPolynomial) -> Result<MixedPolynomial> {
        self.to_field().apply(f)
    }
}

/// Rewrites `X = (Ax)ᵗ d/dx` in Wirtinger form using
/// `∂/∂x_{2j} = ∂/∂z_j + ∂/∂z̄_j` and `∂/∂x_{2j+1} = i(∂/∂z_j − ∂/∂z̄_j)`.
pub fn complexify(field: &RealLinearVectorField) -> ComplexLinearVectorField {
    let n = field.n;
    let a = &field.a;
    let half = BigRational::new(1.into(), 2.into());
    let mut b = vec![vec![GaussianRational::zero(); n]; n];
    let mut c = vec![vec![GaussianRational::zero(); n]; n];
    for j in 0..n {
        // u_k = A[2j][k] + i A[2j+1][k]: the ∂/∂z_j coefficient is Σ_k u_k x_k
        let u = |k: usize| GaussianRational::new(a[2 * j][k].clone(), a[2 * j + 1][k].clone());
        for l in 0..n {
            let even = u(2 * l).scale(&half);
            let odd = &u(2 * l + 1).scale(&half) * &GaussianRational::i();
            // x_{2l} = (z_l + z̄_l)/2, x_{2l+1} = −(i/2) z_l + (i/2) z̄_l
            b[j][l] = &even - &odd;
            c[j][l] = &even + &odd;
        }
    }
    ComplexLinearVectorField { n, b, c }
}

/// A first-order operator `Σ_j p_j ∂/∂z_j + q_j ∂/∂z̄_j` with polynomial
/// coefficients. Covers the Wirtinger derivatives, their constant
/// combinations and the linear fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    n: usize,
    dz: Vec<MixedPolynomial>,
    dzbar: Vec<MixedPolynomial>,
}

impl VectorField {
    pub fn zero(n: usize) -> Self {
        VectorField {
            n,
            dz: vec![MixedPolynomial::zero(n); n],
            dzbar: vec![MixedPolynomial::zero(n); n],
        }
    }

    /// `∂/∂z_i`, zero-based.
    pub fn dz(n: usize, i: usize) -> Result<Self> {
        Self::constant(&unit_vector(n, i)?, &vec![GaussianRational::zero(); n])
    }

    /// `∂/∂z̄_i`, zero-based.
    pub fn dzbar(n: usize, i: usize) -> Result<Self> {
        Self::constant(&vec![GaussianRational::zero(); n], &unit_vector(n, i)?)
    }

    /// `Σ a_j ∂/∂z_j + b_j ∂/∂z̄_j` with constant coefficients.
    pub fn constant(a: &[GaussianRational], b: &[GaussianRational]) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        check_dim(n, b.len())?;
        Ok(VectorField {
            n,
            dz: a.iter().map(|c| MixedPolynomial::constant(n, c.clone())).collect(),
            dzbar: b.iter().map(|c| MixedPolynomial::constant(n, c.clone())).collect(),
        })
    }

    pub fn from_linear(field: &ComplexLinearVectorField) -> Self {
        field.to_field()
    }

    pub fn from_real(field: &RealLinearVectorField) -> Self {
        complexify(field).to_field()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn dz_coefficients(&self) -> &[MixedPolynomial] {
        &self.dz
    }

    pub fn dzbar_coefficients(&self) -> &[MixedPolynomial] {
        &self.dzbar
    }

    pub fn checked_add(&self, other: &VectorField) -> Result<VectorField> {
        check_dim(self.n, other.n)?;
        let dz = self.dz.iter().zip(&other.dz).map(|(a, b)| a + b).collect();
        let dzbar = self.dzbar.iter().zip(&other.dzbar).map(|(a, b)| a + b).collect();
        Ok(VectorField { n: self.n, dz, dzbar })
    }

    pub fn scale(&self, c: &GaussianRational) -> VectorField {
        VectorField {
            n: self.n,
            dz: self.dz.iter().map(|p| p.scale(c)).collect(),
            dzbar: self.dzbar.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `X(f)` by the power rule on each monomial.
    pub fn apply(&self, f: &MixedPolynomial) -> Result<MixedPolynomial> {
        check_dim(self.n, f.dim())?;
        let mut out = MixedPolynomial::zero(self.n);
        for j in 0..self.n {
            if !self.dz[j].is_zero() {
                let d = wirtinger_dz(j, f)?;
                out.add_scaled(&self.dz[j].checked_mul(&d)?, &GaussianRational::one())?;
            }
            if !self.dzbar[j].is_zero() {
                let d = wirtinger_dzbar(j, f)?;
                out.add_scaled(&self.dzbar[j].checked_mul(&d)?, &GaussianRational::one())?;
            }
        }
        Ok(out)
    }
}

fn unit_vector(n: usize, i: usize) -> Result<Vec<GaussianRational>> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let mut v = vec![GaussianRational::zero(); n];
    v[i] = GaussianRational::one();
    Ok(v)
}

fn partial(i: usize, f: &MixedPolynomial, conjugate: bool) -> Result<MixedPolynomial> {
    let n = f.dim();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let mut out = MixedPolynomial::zero(n);
    for (a, b, c) in f.terms() {
        let (e, shifted) = if conjugate {
            (b.entries()[i], b.shifted(i, -1).map(|nb| (a.clone(), nb)))
        } else {
            (a.entries()[i], a.shifted(i, -1).map(|na| (na, b.clone())))
        };
        if let Some((na, nb)) = shifted {
            out.add_term(na, nb, c * &GaussianRational::from_integer(e as i64));
        }
    }
    Ok(out)
}

/// `∂f/∂z_i` (zero-based `i`).
pub fn wirtinger_dz(i: usize, f: &MixedPolynomial) -> Result<MixedPolynomial> {
    partial(i, f, false)
}

/// `∂f/∂z̄_i` (zero-based `i`).
pub fn wirtinger_dzbar(i: usize, f: &MixedPolynomial) -> Result<MixedPolynomial> {
    partial(i, f, true)
}

/// `e^{As}` in double precision (Padé scaling and squaring).
pub fn flow_matrix(field: &RealLinearVectorField, s: f64) -> DMatrix<f64> {
    (field.to_f64() * s).exp()
}

/// Monomials `z^α z̄^β` with `|α| + |β| ≤ d`, graded by total degree.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<(MultiIndex, MultiIndex)> {
    let mut out = Vec::new();
    for total in 0..=d {
        for joint in MultiIndex::all_of_degree(2 * n, total) {
            let (a, b) = joint.entries().split_at(n);
            out.push((MultiIndex::new(a.to_vec()), MultiIndex::new(b.to_vec())));
        }
    }
    out
}
