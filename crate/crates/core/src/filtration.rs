//! Desk-scale commutator filtration: iterated commutators of operators on
//! polynomials, their compressions to the degree-`≤ d` span, and the
//! recursive semi-norms
//!
//! ```text
//! q_k(a) = q_{k−1}(a) + Σ_{A ∈ V} q_{k−1}([A, a]),     q_0 = operator norm.
//! ```
//!
//! Compressions are taken in the orthonormal basis obtained by Gram–Schmidt
//! on the monomials `z^α z̄^β`, `|α|+|β| ≤ d`, in graded order. Monomials of
//! different charge `α − β` are orthogonal, so the orthogonalization runs
//! independently, and exactly, inside each charge class. Only the final
//! `1/√(D_r D_c)` scaling is done in floating point.
//!
//! Verdicts in [`filtration_report`] are evidence heuristics, not proofs.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::exec::Exec;
use crate::fields::{monomials_up_to, VectorField};
use crate::poly::{rational_to_f64, GaussianRational, MixedPolynomial, MultiIndex};
use crate::projection::ProjectionConfig;

/// A linear map on polynomials, evaluated exactly.
#[derive(Clone, Debug)]
pub enum Operator {
    Identity(usize),
    Zero(usize),
    Projection(usize),
    Field(VectorField),
    Scaled(GaussianRational, Arc<Operator>),
    Sum(Arc<Operator>, Arc<Operator>),
    /// `Compose(a, b) = a ∘ b`.
    Compose(Arc<Operator>, Arc<Operator>),
    /// `Commutator(a, b) = a∘b − b∘a`.
    Commutator(Arc<Operator>, Arc<Operator>),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Identity(n) | Operator::Zero(n) | Operator::Projection(n) => *n,
            Operator::Field(f) => f.dim(),
            Operator::Scaled(_, a) => a.dim(),
            Operator::Sum(a, _) | Operator::Compose(a, _) | Operator::Commutator(a, _) => a.dim(),
        }
    }

    pub fn scaled(&self, c: GaussianRational) -> Operator {
        Operator::Scaled(c, Arc::new(self.clone()))
    }

    pub fn sum(&self, other: &Operator) -> Result<Operator> {
        check_dim(self.dim(), other.dim())?;
        Ok(Operator::Sum(Arc::new(self.clone()), Arc::new(other.clone())))
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        check_dim(self.dim(), other.dim())?;
        Ok(Operator::Compose(Arc::new(self.clone()), Arc::new(other.clone())))
    }

    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        check_dim(self.dim(), other.dim())?;
        Ok(Operator::Commutator(Arc::new(self.clone()), Arc::new(other.clone())))
    }

    pub fn apply(&self, f: &MixedPolynomial) -> Result<MixedPolynomial> {
        check_dim(self.dim(), f.dim())?;
        match self {
            Operator::Identity(_) => Ok(f.clone()),
            Operator::Zero(n) => Ok(MixedPolynomial::zero(*n)),
            Operator::Projection(n) => ProjectionConfig::new(*n)?.project(f),
            Operator::Field(x) => x.apply(f),
            Operator::Scaled(c, a) => Ok(a.apply(f)?.scale(c)),
            Operator::Sum(a, b) => a.apply(f)?.checked_add(&b.apply(f)?),
            Operator::Compose(a, b) => a.apply(&b.apply(f)?),
            Operator::Commutator(a, b) => {
                let ab = a.apply(&b.apply(f)?)?;
                let ba = b.apply(&a.apply(f)?)?;
                ab.checked_sub(&ba)
            }
        }
    }
}

/// An ordered system `[A₁, …, A_k]`, `k ≥ 1`.
#[derive(Clone, Debug)]
pub struct CommutatorSystem(Vec<Operator>);

impl CommutatorSystem {
    pub fn new(ops: Vec<Operator>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return Err(Error::Precondition("commutator system must be non-empty".into()));
        };
        let n = first.dim();
        for op in &ops {
            check_dim(n, op.dim())?;
        }
        Ok(CommutatorSystem(ops))
    }

    pub fn operators(&self) -> &[Operator] {
        &self.0
    }
}

/// `ad[A₁,…,A_k](B) = ad[A_k](ad[A₁,…,A_{k−1}](B))` with `ad[A](B) = [A, B]`.
pub fn iterated_commutator(system: &CommutatorSystem, b: &Operator) -> Result<Operator> {
    system.0.iter().try_fold(b.clone(), |acc, a| a.commutator(&acc))
}

fn charge(a: &MultiIndex, b: &MultiIndex) -> Vec<i64> {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(&x, &y)| x as i64 - y as i64)
        .collect()
}

/// Orthonormal basis of the polynomials of degree `≤ d` in `z, z̄`.
///
/// Vector `c` is `u_c = w_c / √D_c` with `w_c = Σ_k W_kc m_k` a rational
/// combination of monomials of the same charge, `W` unit upper triangular.
#[derive(Debug)]
pub struct TruncationBasis {
    n: usize,
    degree: u32,
    monomials: Vec<(MultiIndex, MultiIndex)>,
    index: HashMap<(MultiIndex, MultiIndex), usize>,
    class_ids: HashMap<Vec<i64>, usize>,
    local_pos: Vec<usize>,
    classes: Vec<Vec<usize>>,
    /// `(global index k, W_kc)` for each column `c`.
    combos: Vec<Vec<(usize, BigRational)>>,
    norms_sq: Vec<BigRational>,
    /// `∫ |z^s|² dμ` for `|s| ≤ 2d`.
    moments: HashMap<MultiIndex, BigRational>,
}

impl TruncationBasis {
    pub fn new(n: usize, degree: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let monomials = monomials_up_to(n, degree);
        let index: HashMap<_, _> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut class_ids: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut local_pos = Vec::with_capacity(monomials.len());
        for (i, (a, b)) in monomials.iter().enumerate() {
            let next = classes.len();
            let id = *class_ids.entry(charge(a, b)).or_insert(next);
            if id == next {
                classes.push(Vec::new());
            }
            local_pos.push(classes[id].len());
            classes[id].push(i);
        }
        let class_ids: HashMap<Vec<i64>, usize> = class_ids.into_iter().collect();

        let mut combos = vec![Vec::new(); monomials.len()];
        let mut norms_sq = vec![BigRational::zero(); monomials.len()];
        for members in &classes {
            let s = members.len();
            // real symmetric Gram matrix of the class
            let gram: Vec<Vec<BigRational>> = members
                .iter()
                .map(|&i| {
                    members
                        .iter()
                        .map(|&j| {
                            let (a, b) = &monomials[i];
                            let (c, d) = &monomials[j];
                            crate::poly::monomial_inner_product(a, b, c, d)
                                .expect("same dimension")
                                .re()
                                .clone()
                        })
                        .collect()
                })
                .collect();
            // columns of W in class-local coordinates
            let mut w: Vec<Vec<BigRational>> = Vec::with_capacity(s);
            let mut dn: Vec<BigRational> = Vec::with_capacity(s);
            for c in 0..s {
                let mut col = vec![BigRational::zero(); s];
                col[c] = BigRational::from_integer(1.into());
                for j in 0..c {
                    // ⟨m_c, w_j⟩ = Σ_k W_kj G_ck
                    let proj: BigRational =
                        (0..=j).map(|k| &w[j][k] * &gram[c][k]).fold(BigRational::zero(), |x, y| x + y);
                    if proj.is_zero() {
                        continue;
                    }
                    let coef = proj / &dn[j];
                    for k in 0..=j {
                        col[k] -= &coef * &w[j][k];
                    }
                }
                let mut d = BigRational::zero();
                for i in 0..=c {
                    for k in 0..=c {
                        if !col[i].is_zero() && !col[k].is_zero() {
                            d += &col[i] * &col[k] * &gram[i][k];
                        }
                    }
                }
                w.push(col);
                dn.push(d);
            }
            for (c, &gc) in members.iter().enumerate() {
                combos[gc] = (0..=c)
                    .filter(|&k| !w[c][k].is_zero())
                    .map(|k| (members[k], w[c][k].clone()))
                    .collect();
                norms_sq[gc] = dn[c].clone();
            }
        }
        let moments = (0..=2 * degree)
            .flat_map(|k| MultiIndex::all_of_degree(n, k))
            .map(|s| {
                let m = crate::poly::monomial_norm_sq(&s, &MultiIndex::zeros(n)).expect("same dimension");
                (s, m)
            })
            .collect();
        Ok(TruncationBasis { n, degree, monomials, index, class_ids, local_pos, classes, combos, norms_sq, moments })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[(MultiIndex, MultiIndex)] {
        &self.monomials
    }

    /// `w_c` as a polynomial (unnormalized).
    pub fn orthogonal_vector(&self, c: usize) -> MixedPolynomial {
        let mut p = MixedPolynomial::zero(self.n);
        for (k, w) in &self.combos[c] {
            let (a, b) = &self.monomials[*k];
            p.add_term(a.clone(), b.clone(), w.clone().into());
        }
        p
    }

    /// `‖w_c‖²`, exact.
    pub fn norm_sq(&self, c: usize) -> &BigRational {
        &self.norms_sq[c]
    }

    fn class_members(&self, ch: &[i64]) -> Option<&[usize]> {
        self.class_ids.get(ch).map(|&id| self.classes[id].as_slice())
    }

    /// Exact `⟨p, w_r⟩` for every basis row `r`, plus whether `p` lies in the span.
    fn pair_with_rows(&self, p: &MixedPolynomial) -> (Vec<(usize, GaussianRational)>, bool) {
        let mut in_span = true;
        let mut by_class: BTreeMap<Vec<i64>, Vec<(&MultiIndex, &MultiIndex, &GaussianRational)>> =
            BTreeMap::new();
        for (a, b, c) in p.terms() {
            if !self.index.contains_key(&(a.clone(), b.clone())) {
                in_span = false;
            }
            by_class.entry(charge(a, b)).or_default().push((a, b, c));
        }
        let mut out = Vec::new();
        for (ch, terms) in by_class {
            let Some(members) = self.class_members(&ch) else {
                continue;
            };
            // h_k = ⟨p, m_k⟩ for the class members
            let h: Vec<GaussianRational> = members
                .iter()
                .map(|&k| {
                    let (_, beta_k) = &self.monomials[k];
                    let mut acc = GaussianRational::zero();
                    // same charge, so ⟨z^a z̄^b, z^α z̄^β⟩ = ∫|z^{a+β}|² dμ
                    for (a, _, c) in &terms {
                        let s = *a + beta_k;
                        match self.moments.get(&s) {
                            Some(m) => acc += &c.scale(m),
                            None => acc += &c.scale(&crate::poly::monomial_norm_sq(&s, &MultiIndex::zeros(self.n)).expect("dim")),
                        }
                    }
                    acc
                })
                .collect();
            for &r in members {
                let mut g = GaussianRational::zero();
                for (k, w) in &self.combos[r] {
                    g += &h[self.local_pos[*k]].scale(w);
                }
                if !g.is_zero() {
                    out.push((r, g));
                }
            }
        }
        (out, in_span)
    }
}

/// Matrix `M[r][c] = ⟨T u_c, u_r⟩` of an operator on the degree-`≤ d` span.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub degree: u32,
    pub basis: Arc<TruncationBasis>,
    pub matrix: DMatrix<Complex64>,
    /// `T` mapped every basis vector back into the span, so the compression
    /// is the restriction of `T`.
    pub span_preserved: bool,
}

pub fn truncate(op: &Operator, degree: u32, exec: Exec) -> Result<TruncatedOperator> {
    let basis = Arc::new(TruncationBasis::new(op.dim(), degree)?);
    truncate_in(op, &basis, exec)
}

pub fn truncate_in(op: &Operator, basis: &Arc<TruncationBasis>, exec: Exec) -> Result<TruncatedOperator> {
    check_dim(basis.dim(), op.dim())?;
    let cols: Vec<usize> = (0..basis.len()).collect();
    let columns = exec.try_map(&cols, |&c| {
        let image = op.apply(&basis.orthogonal_vector(c))?;
        Ok::<_, Error>(basis.pair_with_rows(&image))
    })?;
    Ok(assemble(basis, columns))
}

/// Images `T m_i` of every basis monomial.
fn monomial_images(op: &Operator, basis: &TruncationBasis, exec: Exec) -> Result<Vec<MixedPolynomial>> {
    exec.try_map(basis.monomials(), |(a, b)| {
        op.apply(&MixedPolynomial::monomial(a.clone(), b.clone(), GaussianRational::one())?)
    })
}

/// Coordinates of each image in the monomial basis, or `None` if some image
/// leaves the span.
fn span_coordinates(images: &[MixedPolynomial], basis: &TruncationBasis) -> Option<Vec<Vec<(usize, GaussianRational)>>> {
    images
        .iter()
        .map(|img| {
            img.terms()
                .map(|(a, b, c)| basis.index.get(&(a.clone(), b.clone())).map(|&k| (k, c.clone())))
                .collect()
        })
        .collect()
}

/// `[A, T] m = A(T m) − T(A m)` from the images of `T` and the monomial
/// coordinates of `A m`.
fn commutator_images(
    field: &Operator,
    field_coords: &[Vec<(usize, GaussianRational)>],
    images: &[MixedPolynomial],
    exec: Exec,
) -> Result<Vec<MixedPolynomial>> {
    let idx: Vec<usize> = (0..images.len()).collect();
    exec.try_map(&idx, |&m| {
        let mut out = field.apply(&images[m])?;
        for (k, c) in &field_coords[m] {
            out.add_scaled(&images[*k], &-c.clone())?;
        }
        Ok(out)
    })
}

fn truncate_from_images(images: &[MixedPolynomial], basis: &Arc<TruncationBasis>, exec: Exec) -> Result<TruncatedOperator> {
    let cols: Vec<usize> = (0..basis.len()).collect();
    let columns = exec.try_map(&cols, |&c| {
        let mut image = MixedPolynomial::zero(basis.dim());
        for (k, w) in &basis.combos[c] {
            image.add_scaled(&images[*k], &GaussianRational::from_rational(w.clone()))?;
        }
        Ok::<_, Error>(basis.pair_with_rows(&image))
    })?;
    Ok(assemble(basis, columns))
}

fn assemble(basis: &Arc<TruncationBasis>, columns: Vec<(Vec<(usize, GaussianRational)>, bool)>) -> TruncatedOperator {
    let size = basis.len();
    let mut matrix = DMatrix::<Complex64>::zeros(size, size);
    let mut span_preserved = true;
    for (c, (entries, in_span)) in columns.into_iter().enumerate() {
        span_preserved &= in_span;
        for (r, g) in entries {
            let scale = rational_to_f64(&(basis.norm_sq(r) * basis.norm_sq(c))).sqrt();
            matrix[(r, c)] = g.to_complex64() / scale;
        }
    }
    TruncatedOperator { degree: basis.degree(), basis: basis.clone(), matrix, span_preserved }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub const NORM_REL_TOL: f64 = 1e-10;
pub const NORM_MAX_ITER: usize = 10_000;

/// Largest singular value by power iteration on `M*M`.
pub fn truncated_norm(t: &TruncatedOperator) -> NormEstimate {
    matrix_norm(&t.matrix)
}

pub fn matrix_norm(m: &DMatrix<Complex64>) -> NormEstimate {
    let cols = m.ncols();
    if cols == 0 || m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return NormEstimate { value: 0.0, iterations: 0, converged: true };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b5e_55ed);
    let mut v = DVector::from_fn(cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    v /= Complex64::new(v.norm(), 0.0);
    let adjoint = m.adjoint();
    let mut lambda = 0.0f64;
    for it in 1..=NORM_MAX_ITER {
        let w = m * &v;
        let next = w.norm_squared();
        let u = &adjoint * w;
        let un = u.norm();
        let done = (next - lambda).abs() <= NORM_REL_TOL * next;
        lambda = next;
        if un == 0.0 || done {
            return NormEstimate { value: lambda.sqrt(), iterations: it, converged: true };
        }
        v = u / Complex64::new(un, 0.0);
    }
    NormEstimate { value: lambda.sqrt(), iterations: NORM_MAX_ITER, converged: false }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeminormEstimate {
    pub value: f64,
    pub converged: bool,
}

/// `q_0, …, q_{k_max}` of `a` at truncation degree `d`.
pub fn seminorm_levels(
    a: &Operator,
    fields: &[Operator],
    k_max: usize,
    basis: &Arc<TruncationBasis>,
    exec: Exec,
) -> Result<Vec<SeminormEstimate>> {
    for f in fields {
        check_dim(a.dim(), f.dim())?;
    }
    // q_0 of ad[w](a) for every word w of length ≤ k_max
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k_max {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..fields.len() {
                let mut x: Vec<usize> = w.clone();
                x.push(i);
                next.push(x);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut base: HashMap<Vec<usize>, SeminormEstimate> = HashMap::new();
    let mut record = |w: &Vec<usize>, t: &TruncatedOperator| {
        let e = truncated_norm(t);
        base.insert(w.clone(), SeminormEstimate { value: e.value, converged: e.converged });
    };

    // When every field keeps the degree-≤ d span, the images of ad[w](a) on
    // the basis monomials are built one letter at a time from those of the
    // prefix. Otherwise each word is expanded and applied on its own.
    let field_images = fields
        .iter()
        .map(|f| monomial_images(f, basis, exec))
        .collect::<Result<Vec<_>>>()?;
    let field_coords: Option<Vec<_>> = field_images.iter().map(|imgs| span_coordinates(imgs, basis)).collect();
    match field_coords {
        Some(coords) => {
            let mut images: HashMap<Vec<usize>, Vec<MixedPolynomial>> = HashMap::new();
            for w in &words {
                let img = match w.split_last() {
                    None => monomial_images(a, basis, exec)?,
                    Some((&i, prefix)) => commutator_images(&fields[i], &coords[i], &images[prefix], exec)?,
                };
                record(w, &truncate_from_images(&img, basis, exec)?);
                if w.len() < k_max {
                    images.insert(w.clone(), img);
                }
            }
        }
        None => {
            for w in &words {
                let op = if w.is_empty() {
                    a.clone()
                } else {
                    let system = CommutatorSystem::new(w.iter().map(|&i| fields[i].clone()).collect())?;
                    iterated_commutator(&system, a)?
                };
                record(w, &truncate_in(&op, basis, exec)?);
            }
        }
    }

    fn q(
        k: usize,
        w: &[usize],
        nfields: usize,
        base: &HashMap<Vec<usize>, SeminormEstimate>,
    ) -> SeminormEstimate {
        if k == 0 {
            return base[w];
        }
        let mut acc = q(k - 1, w, nfields, base);
        for i in 0..nfields {
            let mut x = w.to_vec();
            x.push(i);
            let t = q(k - 1, &x, nfields, base);
            acc.value += t.value;
            acc.converged &= t.converged;
        }
        acc
    }
    Ok((0..=k_max).map(|k| q(k, &[], fields.len(), &base)).collect())
}

pub fn seminorm_estimate(
    a: &Operator,
    fields: &[Operator],
    k: usize,
    degree: u32,
    exec: Exec,
) -> Result<SeminormEstimate> {
    let basis = Arc::new(TruncationBasis::new(a.dim(), degree)?);
    Ok(seminorm_levels(a, fields, k, &basis, exec)?[k])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Diverging,
    Inconclusive,
}

pub const STABLE_SPREAD: f64 = 0.05;
pub const DIVERGING_RATIO: f64 = 10.0;

/// `Stable` if the top half of the estimates (at least two of them, when
/// there are two) spreads by less than 5%; `Diverging` if strictly
/// increasing with last/first above 10.
pub fn classify(values: &[f64]) -> Verdict {
    if values.is_empty() {
        return Verdict::Inconclusive;
    }
    let start = (values.len() / 2).min(values.len().saturating_sub(2));
    let top = &values[start..];
    let hi = top.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = top.iter().cloned().fold(f64::INFINITY, f64::min);
    if hi == 0.0 || (hi - lo) < STABLE_SPREAD * hi.abs() {
        return Verdict::Stable;
    }
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    if increasing && values[0] > 0.0 && values[values.len() - 1] / values[0] > DIVERGING_RATIO {
        return Verdict::Diverging;
    }
    Verdict::Inconclusive
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeEstimate {
    pub d: u32,
    pub value: f64,
    /// `"converged"` or `"not-converged"`.
    pub flag: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    pub k: usize,
    pub estimates: Vec<DegreeEstimate>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiltrationReport {
    pub provenance: String,
    pub levels: Vec<LevelReport>,
}

pub fn filtration_report(
    a: &Operator,
    fields: &[Operator],
    k_max: usize,
    degrees: &[u32],
    exec: Exec,
) -> Result<FiltrationReport> {
    let mut table = Vec::with_capacity(degrees.len());
    for &d in degrees {
        let basis = Arc::new(TruncationBasis::new(a.dim(), d)?);
        table.push(seminorm_levels(a, fields, k_max, &basis, exec)?);
    }
    let levels = (0..=k_max)
        .map(|k| {
            let estimates: Vec<DegreeEstimate> = degrees
                .iter()
                .zip(&table)
                .map(|(&d, row)| DegreeEstimate {
                    d,
                    value: row[k].value,
                    flag: if row[k].converged { "converged" } else { "not-converged" },
                })
                .collect();
            let values: Vec<f64> = estimates.iter().map(|e| e.value).collect();
            LevelReport { k, verdict: classify(&values), estimates }
        })
        .collect();
    Ok(FiltrationReport { provenance: format!("float({NORM_REL_TOL:e})"), levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::RealLinearVectorField;

    fn rotation() -> Operator {
        let a = RealLinearVectorField::from_integers(&[vec![0, 1], vec![-1, 0]]).unwrap();
        Operator::Field(VectorField::from_real(&a))
    }

    #[test]
    fn iterated_commutator_examples() {
        let p = Operator::Projection(1);
        let basis = Arc::new(TruncationBasis::new(1, 5).unwrap());
        for sys in [vec![rotation()], vec![rotation(), rotation()]] {
            let op = iterated_commutator(&CommutatorSystem::new(sys).unwrap(), &p).unwrap();
            for c in 0..basis.len() {
                assert!(op.apply(&basis.orthogonal_vector(c)).unwrap().is_zero());
            }
        }
        let dz = Operator::Field(VectorField::dz(1, 0).unwrap());
        let op = iterated_commutator(&CommutatorSystem::new(vec![dz]).unwrap(), &Operator::Identity(1)).unwrap();
        assert!(op.apply(&MixedPolynomial::z(1, 0)).unwrap().is_zero());
        assert!(CommutatorSystem::new(vec![]).is_err());
    }

    #[test]
    fn basis_is_orthonormal() {
        let basis = TruncationBasis::new(2, 4).unwrap();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let g = crate::poly::inner_product(&basis.orthogonal_vector(i), &basis.orthogonal_vector(j)).unwrap();
                if i == j {
                    assert_eq!(g.re(), basis.norm_sq(i));
                } else {
                    assert!(g.is_zero(), "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn truncation_examples() {
        let id = truncate(&Operator::Identity(1), 3, Exec::Sequential).unwrap();
        let eye = DMatrix::<Complex64>::identity(id.matrix.nrows(), id.matrix.ncols());
        assert!((id.matrix - eye).norm() < 1e-14);
        let zero = truncate(&Operator::Zero(2), 2, Exec::Sequential).unwrap();
        assert!(zero.matrix.iter().all(|z| z.norm() == 0.0));
        assert_eq!(truncated_norm(&zero).value, 0.0);
        let p = truncate(&Operator::Projection(1), 2, Exec::Sequential).unwrap();
        assert!(p.span_preserved);
        assert!((truncated_norm(&p).value - 1.0).abs() < 1e-12);
        let two = truncate(&Operator::Identity(1).scaled(GaussianRational::from_integer(2)), 3, Exec::Sequential).unwrap();
        assert!((truncated_norm(&two).value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn verdicts() {
        assert_eq!(classify(&[1.0, 1.0, 1.0, 1.0]), Verdict::Stable);
        assert_eq!(classify(&[0.0, 0.0]), Verdict::Stable);
        assert_eq!(classify(&[1.0, 5.0, 20.0, 40.0]), Verdict::Diverging);
        assert_eq!(classify(&[1.0, 2.0, 3.0, 4.0]), Verdict::Inconclusive);
        assert_eq!(classify(&[1.0, 4.0]), Verdict::Inconclusive);
        assert_eq!(classify(&[7.0]), Verdict::Stable);
    }

    #[test]
    fn empty_family_keeps_base_norm() {
        let p = Operator::Projection(1);
        for k in 0..3 {
            let e = seminorm_estimate(&p, &[], k, 4, Exec::Sequential).unwrap();
            assert!((e.value - 1.0).abs() < 1e-12);
        }
    }
}
