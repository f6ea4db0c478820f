//! Spectral tools on `M_k(ℂ)`: spectrum, resolvent, Neumann series, Gelfand's
//! spectral-radius formula and the Cauchy-integral functional calculus
//!
//! ```text
//! f(a) = (1/2πi) ∮_Γ f(z) (z − a)⁻¹ dz
//! ```
//!
//! on a single circle, discretized by the trapezoid rule.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;

/// A finite square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix(DMatrix<Complex64>);

impl SquareMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Malformed(format!(
                "matrix must be square and non-empty, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Malformed("matrix has non-finite entries".into()));
        }
        Ok(SquareMatrix(m))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Malformed("rows must all have length equal to the row count".into()));
        }
        Self::new(DMatrix::from_fn(k, k, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn diagonal(values: &[Complex64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values)))
    }

    pub fn identity(k: usize) -> Self {
        SquareMatrix(DMatrix::identity(k, k))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalues with multiplicity from a complex Schur form, sorted by `(re, im)`.
pub fn spectrum(a: &SquareMatrix) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(a.0.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut eig: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    eig.sort_by(cmp_complex);
    Ok(eig)
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Spectral norm `‖a‖₂`.
pub fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

pub const SPECTRUM_GUARD: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-10;

/// `R_a(z) = (z − a)⁻¹`.
pub fn resolvent(a: &SquareMatrix, z: Complex64) -> Result<SquareMatrix> {
    let eig = spectrum(a)?;
    if eig.iter().any(|l| (l - z).norm() < SPECTRUM_GUARD) {
        return Err(Error::Singular(format!("{z}")));
    }
    resolvent_unchecked(a, z)
}

fn shifted(a: &DMatrix<Complex64>, z: Complex64) -> DMatrix<Complex64> {
    let k = a.nrows();
    DMatrix::<Complex64>::identity(k, k) * z - a
}

fn resolvent_unchecked(a: &SquareMatrix, z: Complex64) -> Result<SquareMatrix> {
    let k = a.size();
    let m = shifted(&a.0, z);
    let r = m
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular(format!("{z}")))?;
    let residual = max_abs(&(&m * &r - DMatrix::<Complex64>::identity(k, k)));
    if residual >= RESIDUAL_TOL {
        return Err(Error::Numerical(format!("resolvent residual {residual:e} at {z}")));
    }
    Ok(SquareMatrix(r))
}

#[derive(Clone, Debug)]
pub struct NeumannResult {
    pub inverse: SquareMatrix,
    /// Highest power included, `N`.
    pub terms: usize,
    pub norm: f64,
    /// `max |Σ aⁿ − (e − a)⁻¹|` against a direct solve.
    pub residual: f64,
}

/// `(e − a)⁻¹ = Σ_{n ≤ N} aⁿ` with `N` the least power such that
/// `‖a‖^{N+1} / (1 − ‖a‖) < tol`.
pub fn von_neumann_inverse(a: &SquareMatrix, tol: f64) -> Result<NeumannResult> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let norm = operator_norm(&a.0);
    if norm >= 1.0 {
        return Err(Error::Precondition(format!("‖a‖₂ = {norm} is not below 1")));
    }
    let mut terms = 0usize;
    while norm.powi(terms as i32 + 1) / (1.0 - norm) >= tol {
        terms += 1;
    }
    let k = a.size();
    let mut sum = DMatrix::<Complex64>::identity(k, k);
    let mut power = DMatrix::<Complex64>::identity(k, k);
    for _ in 0..terms {
        power = &power * &a.0;
        sum += &power;
    }
    let direct = resolvent_unchecked(a, Complex64::new(1.0, 0.0))?;
    let residual = max_abs(&(&sum - &direct.0));
    if residual >= 10.0 * tol {
        return Err(Error::Numerical(format!("Neumann residual {residual:e} exceeds 10·tol")));
    }
    Ok(NeumannResult { inverse: SquareMatrix(sum), terms, norm, residual })
}

#[derive(Clone, Debug, Serialize)]
pub struct GelfandResult {
    /// `‖a^{2^k}‖₂^{1/2^k}` for `k = 0, 1, …`.
    pub sequence: Vec<f64>,
    pub value: f64,
}

/// Gelfand's `ρ(a) = lim ‖aⁿ‖^{1/n}` along `n = 2^k` by repeated squaring.
///
/// The iterate is renormalized each step, carrying `log ‖a^{2^k}‖` separately,
/// so nothing overflows.
pub fn gelfand_radius(a: &SquareMatrix, max_doublings: usize) -> GelfandResult {
    let mut sequence = Vec::with_capacity(max_doublings + 1);
    let first = operator_norm(&a.0);
    sequence.push(first);
    if first == 0.0 {
        return GelfandResult { value: 0.0, sequence };
    }
    let mut b = &a.0 / Complex64::new(first, 0.0);
    let mut log_norm = first.ln();
    let mut power = 1.0f64;
    for _ in 0..max_doublings {
        let sq = &b * &b;
        let nu = operator_norm(&sq);
        power *= 2.0;
        if nu == 0.0 {
            sequence.push(0.0);
            return GelfandResult { value: 0.0, sequence };
        }
        log_norm = 2.0 * log_norm + nu.ln();
        b = sq / Complex64::new(nu, 0.0);
        sequence.push((log_norm / power).exp());
    }
    let value = *sequence.last().expect("non-empty");
    GelfandResult { sequence, value }
}

/// A circle `|z − center| = radius` sampled at `nodes` equispaced points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Contour {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

pub const MIN_NODES: usize = 16;
pub const DEFAULT_NODES: usize = 256;
pub const DEFAULT_RADIUS_FACTOR: f64 = 1.5;
pub const CONDITIONING_FRACTION: f64 = 0.01;

impl Contour {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Precondition(format!("contour radius must be positive, got {radius}")));
        }
        if nodes < MIN_NODES {
            return Err(Error::Precondition(format!("contour needs at least {MIN_NODES} nodes")));
        }
        Ok(Contour { center, radius, nodes })
    }

    /// Circle about the spectral centroid with radius `factor` times the
    /// largest eigenvalue distance from it (or `factor` when the spectrum is
    /// a single point).
    pub fn around(a: &SquareMatrix, factor: f64, nodes: usize) -> Result<Self> {
        let eig = spectrum(a)?;
        let center = eig.iter().sum::<Complex64>() / eig.len() as f64;
        let spread = eig.iter().map(|l| (l - center).norm()).fold(0.0, f64::max);
        let base = if spread > 1e-8 * (1.0 + center.norm()) { spread } else { 1.0 };
        Self::new(center, factor * base, nodes)
    }

    pub fn node(&self, j: usize) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / self.nodes as f64;
        self.center + Complex64::from_polar(self.radius, theta)
    }
}

/// Scalar functions offered on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarFunction {
    One,
    Exp,
    Identity,
    /// `Σ c_k z^k`.
    Poly(Vec<Complex64>),
}

impl ScalarFunction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            ScalarFunction::One => Complex64::new(1.0, 0.0),
            ScalarFunction::Exp => z.exp(),
            ScalarFunction::Identity => z,
            ScalarFunction::Poly(c) => c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, ck| acc * z + ck),
        }
    }

    /// `f(a)` without the contour: Horner for polynomials, Padé for `exp`.
    pub fn apply_direct(&self, a: &SquareMatrix) -> SquareMatrix {
        let k = a.size();
        match self {
            ScalarFunction::One => SquareMatrix::identity(k),
            ScalarFunction::Exp => SquareMatrix(a.0.exp()),
            ScalarFunction::Identity => a.clone(),
            ScalarFunction::Poly(c) => SquareMatrix(power_series(&a.0, c)),
        }
    }
}

/// `Σ c_k a^k`.
pub fn power_series(a: &DMatrix<Complex64>, coeffs: &[Complex64]) -> DMatrix<Complex64> {
    let k = a.nrows();
    let mut acc = DMatrix::<Complex64>::zeros(k, k);
    for c in coeffs.iter().rev() {
        acc = &acc * a + DMatrix::<Complex64>::identity(k, k) * *c;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct CalculusResult {
    pub matrix: SquareMatrix,
    pub contour: Contour,
    /// Distance from the spectrum to the contour.
    pub min_distance: f64,
    /// Set when `min_distance < radius/100`.
    pub conditioning_warning: bool,
}

fn pairwise_sum(mut terms: Vec<DMatrix<Complex64>>) -> DMatrix<Complex64> {
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().expect("at least one node")
}

/// Trapezoid rule on the circle: with `z_j = c + r e^{iθ_j}`,
/// `f(a) ≈ (1/N) Σ_j f(z_j) (z_j − c) R_a(z_j)`.
///
/// `f` must be holomorphic on and inside the contour; that is not checked.
pub fn holomorphic_calculus<F>(a: &SquareMatrix, f: F, contour: &Contour, exec: Exec) -> Result<CalculusResult>
where
    F: Fn(Complex64) -> Complex64 + Sync + Send,
{
    let eig = spectrum(a)?;
    let min_distance = eig
        .iter()
        .map(|l| contour.radius - (l - contour.center).norm())
        .fold(f64::INFINITY, f64::min);
    if min_distance <= 0.0 {
        return Err(Error::Precondition("contour does not enclose the spectrum".into()));
    }
    let idx: Vec<usize> = (0..contour.nodes).collect();
    let terms = exec.try_map(&idx, |&j| {
        let z = contour.node(j);
        let r = resolvent_unchecked(a, z)?;
        Ok::<_, Error>(r.0 * (f(z) * (z - contour.center)))
    })?;
    let matrix = pairwise_sum(terms) / Complex64::new(contour.nodes as f64, 0.0);
    Ok(CalculusResult {
        matrix: SquareMatrix(matrix),
        contour: *contour,
        min_distance,
        conditioning_warning: min_distance < CONDITIONING_FRACTION * contour.radius,
    })
}

#[derive(Clone, Debug)]
pub struct SubalgebraReport {
    pub inverse: SquareMatrix,
    /// Largest strictly-lower entry of the computed inverse.
    pub max_lower: f64,
    pub passed: bool,
}

pub const TRIANGULAR_TOL: f64 = 1e-12;

/// Inverts an invertible upper-triangular matrix by a general solve and checks
/// the inverse is again upper triangular.
pub fn spectra_agree_under_subalgebra(a: &SquareMatrix) -> Result<SubalgebraReport> {
    let k = a.size();
    for i in 0..k {
        for j in 0..i {
            if a.0[(i, j)] != Complex64::new(0.0, 0.0) {
                return Err(Error::Precondition("matrix is not upper triangular".into()));
            }
        }
    }
    if (0..k).any(|i| a.0[(i, i)] == Complex64::new(0.0, 0.0)) {
        return Err(Error::Singular("0".into()));
    }
    let inv = a
        .0
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular("0".into()))?;
    let mut max_lower = 0.0f64;
    for i in 0..k {
        for j in 0..i {
            max_lower = max_lower.max(inv[(i, j)].norm());
        }
    }
    Ok(SubalgebraReport { inverse: SquareMatrix(inv), max_lower, passed: max_lower < TRIANGULAR_TOL })
}
