//! Reproducing kernels of three holomorphic function spaces, each normalized
//! so that `‖1‖ = 1`:
//!
//! | space | measure | `‖z^γ‖²` | `K(z, w)` |
//! |---|---|---|---|
//! | ball `Bₙ` | normalized volume | `n! γ! / (n+|γ|)!` | `(1 − z·w̄)^{−(n+1)}` |
//! | disk, weight `a > −1` | `(a+1)/π (1−|z|²)^a dA` | `k! Γ(a+2) / Γ(k+a+2)` | `(1 − z w̄)^{−(2+a)}` |
//! | Fock, parameter `t > 0` | `(πt)^{−n} e^{−|z|²/t} dA` | `γ! t^{|γ|}` | `e^{z·w̄/t}` |
//!
//! Kernels are holomorphic in the first argument and conjugate-holomorphic in
//! the second. In every case `K(z, w) = Σ_γ c_γ z^γ w̄^γ` with
//! `c_γ = 1/‖z^γ‖²`.
//!
//! Exact routines turn the real parameters `a` and `t` into the rationals
//! their `f64` values denote, so no rounding happens there.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::exec::Exec;
use crate::poly::{self, factorial, rational_to_f64, GaussianRational, MixedPolynomial, MultiIndex};
use crate::projection::ProjectionConfig;
use crate::sampling;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelSpace {
    Ball { n: usize },
    WeightedDisk { a: f64 },
    Fock { n: usize, t: f64 },
}

impl KernelSpace {
    pub fn ball(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(KernelSpace::Ball { n })
    }

    pub fn weighted_disk(a: f64) -> Result<Self> {
        if !(a > -1.0 && a.is_finite()) {
            return Err(Error::Precondition(format!("disk weight must satisfy a > −1, got {a}")));
        }
        Ok(KernelSpace::WeightedDisk { a })
    }

    pub fn fock(n: usize, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Precondition(format!("Fock parameter must be positive, got {t}")));
        }
        Ok(KernelSpace::Fock { n, t })
    }

    /// Parses `ball:n`, `disk:a` or `fock:t`; `fock_dim` is the dimension
    /// used for a Fock space.
    pub fn parse(s: &str, fock_dim: usize) -> Result<Self> {
        let (kind, param) = s
            .split_once(':')
            .ok_or_else(|| Error::Malformed(format!("expected kind:parameter, got {s:?}")))?;
        let bad = |_| Error::Malformed(format!("bad parameter in {s:?}"));
        match kind {
            "ball" => Self::ball(param.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?),
            "disk" => Self::weighted_disk(param.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?),
            "fock" => Self::fock(fock_dim, param.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?),
            _ => Err(Error::Malformed(format!("unknown space {kind:?}"))),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            KernelSpace::Ball { n } | KernelSpace::Fock { n, .. } => n,
            KernelSpace::WeightedDisk { .. } => 1,
        }
    }

    pub fn is_bounded_domain(&self) -> bool {
        !matches!(self, KernelSpace::Fock { .. })
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        check_dim(self.dim(), z.len())?;
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Malformed("non-finite point".into()));
        }
        if self.is_bounded_domain() && z.iter().map(|c| c.norm_sqr()).sum::<f64>() >= 1.0 {
            return Err(Error::Precondition("point outside the open unit ball".into()));
        }
        Ok(())
    }

    fn check_exact_point(&self, z: &[GaussianRational]) -> Result<()> {
        check_dim(self.dim(), z.len())?;
        if self.is_bounded_domain() {
            let s: BigRational = z.iter().map(GaussianRational::norm_sq).sum();
            if s >= BigRational::one() {
                return Err(Error::Precondition("point outside the open unit ball".into()));
            }
        }
        Ok(())
    }

    fn exact_param(x: f64) -> BigRational {
        BigRational::from_float(x).expect("validated finite parameter")
    }

    /// `‖z^γ‖²` for holomorphic monomials, exact.
    ///
    /// The ball uses the moment formula of the volume measure; the disk and
    /// Fock norms come from the radial recurrences
    /// `‖z^k‖² = k/(k+a+1) · ‖z^{k−1}‖²` and `‖z^k‖² = t k ‖z^{k−1}‖²`.
    pub fn monomial_norm_sq(&self, gamma: &MultiIndex) -> Result<BigRational> {
        check_dim(self.dim(), gamma.dim())?;
        match *self {
            KernelSpace::Ball { n } => poly::monomial_norm_sq(gamma, &MultiIndex::zeros(n)),
            KernelSpace::WeightedDisk { a } => {
                let a = Self::exact_param(a);
                let mut v = BigRational::one();
                for k in 1..=gamma.entries()[0] {
                    let k = BigRational::from_integer(BigInt::from(k));
                    v = v * &k / (&k + &a + BigRational::one());
                }
                Ok(v)
            }
            KernelSpace::Fock { t, .. } => {
                let t = Self::exact_param(t);
                let mut v = BigRational::one();
                for &e in gamma.entries() {
                    for k in 1..=e {
                        v = v * &t * BigRational::from_integer(BigInt::from(k));
                    }
                }
                Ok(v)
            }
        }
    }

    /// `c_γ`, the coefficient of `z^γ w̄^γ` in the kernel, exact and from the
    /// closed forms rather than by inverting [`Self::monomial_norm_sq`].
    pub fn kernel_coefficient(&self, gamma: &MultiIndex) -> Result<BigRational> {
        check_dim(self.dim(), gamma.dim())?;
        match *self {
            KernelSpace::Ball { n } => Ok(ProjectionConfig::new(n)?.kernel_coefficient(gamma)),
            KernelSpace::WeightedDisk { a } => {
                // Γ(k+a+2)/(k! Γ(a+2)) = Π_{j ≤ k} (j+a+1)/j
                let a = Self::exact_param(a);
                let mut c = BigRational::one();
                for j in 1..=gamma.entries()[0] {
                    let j = BigRational::from_integer(BigInt::from(j));
                    c = c * (&j + &a + BigRational::one()) / j;
                }
                Ok(c)
            }
            KernelSpace::Fock { t, .. } => {
                let t = Self::exact_param(t);
                let k = gamma.degree() as i32;
                let den = BigRational::from_integer(BigInt::from(gamma.factorial())) * num_traits::pow::Pow::pow(&t, k);
                Ok(den.recip())
            }
        }
    }

    fn kernel_coefficient_f64(&self, gamma: &MultiIndex, ln_fact: &[f64]) -> f64 {
        let sum_ln: f64 = gamma.entries().iter().map(|&e| ln_fact[e as usize]).sum();
        let k = gamma.degree() as usize;
        match *self {
            KernelSpace::Ball { n } => (ln_fact[n + k] - ln_fact[n] - sum_ln).exp(),
            KernelSpace::WeightedDisk { a } => (1..=k).fold(1.0, |c, j| c * (j as f64 + a + 1.0) / j as f64),
            KernelSpace::Fock { t, .. } => (-sum_ln - k as f64 * t.ln()).exp(),
        }
    }

    /// Radial coefficient `b_k` with `K(z, w) = Σ_k b_k ⟨z, w⟩^k`.
    fn radial_coefficient(&self, k: usize, ln_fact: &[f64]) -> f64 {
        match *self {
            KernelSpace::Ball { n } => (ln_fact[n + k] - ln_fact[n] - ln_fact[k]).exp(),
            KernelSpace::WeightedDisk { .. } => self.kernel_coefficient_f64(&MultiIndex::new(vec![k as u32]), ln_fact),
            KernelSpace::Fock { t, .. } => (-ln_fact[k] - k as f64 * t.ln()).exp(),
        }
    }
}

impl fmt::Display for KernelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpace::Ball { n } => write!(f, "ball:{n}"),
            KernelSpace::WeightedDisk { a } => write!(f, "disk:{a}"),
            KernelSpace::Fock { n, t } => write!(f, "fock:{t} (n={n})"),
        }
    }
}

fn ln_factorials(up_to: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(up_to + 1);
    let mut acc = 0.0f64;
    v.push(0.0);
    for k in 1..=up_to {
        acc += (k as f64).ln();
        v.push(acc);
    }
    v
}

/// `⟨z, w⟩ = Σ z_j w̄_j`.
fn pairing(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

/// Closed-form `K(z, w)`.
pub fn kernel_eval(space: &KernelSpace, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    space.check_point(z)?;
    space.check_point(w)?;
    let s = pairing(z, w);
    let one = Complex64::new(1.0, 0.0);
    Ok(match *space {
        KernelSpace::Ball { n } => (one - s).powi(-(n as i32 + 1)),
        KernelSpace::WeightedDisk { a } => (one - s).powf(-(2.0 + a)),
        KernelSpace::Fock { t, .. } => (s / t).exp(),
    })
}

/// `Σ_{|γ| ≤ K} e_γ(z) ē_γ(w)` over the orthonormal monomial basis
/// `e_γ = z^γ / ‖z^γ‖`.
pub fn basis_partial_sum(space: &KernelSpace, z: &[Complex64], w: &[Complex64], k_max: u32) -> Result<Complex64> {
    space.check_point(z)?;
    space.check_point(w)?;
    let n = space.dim();
    let ln_fact = ln_factorials(k_max as usize + n);
    let products: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| a * b.conj()).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for gamma in MultiIndex::all_up_to_degree(n, k_max) {
        let mono = gamma
            .entries()
            .iter()
            .zip(&products)
            .fold(Complex64::new(1.0, 0.0), |acc, (&e, p)| acc * p.powu(e));
        total += mono * space.kernel_coefficient_f64(&gamma, &ln_fact);
    }
    Ok(total)
}

/// Upper bound for `|K(z, w) − Σ_{|γ| ≤ K} …|`: the radial tail
/// `Σ_{k > K} b_k r^k` with `r = |z||w|`.
pub fn series_tail_bound(space: &KernelSpace, z: &[Complex64], w: &[Complex64], k_max: u32) -> Result<f64> {
    space.check_point(z)?;
    space.check_point(w)?;
    let norm = |v: &[Complex64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let r = norm(z) * norm(w);
    if r == 0.0 {
        return Ok(0.0);
    }
    let limit = k_max as usize + 20_000;
    let ln_fact = ln_factorials(limit + space.dim());
    let mut tail = 0.0;
    for k in (k_max as usize + 1)..=limit {
        let term = space.radial_coefficient(k, &ln_fact) * r.powi(k as i32);
        tail += term;
        if term <= f64::EPSILON * 1e-6 * tail && k > 2 * (k_max as usize + 1) {
            break;
        }
    }
    Ok(tail)
}

/// `K_w = Σ_{|γ| ≤ degree} c_γ w̄^γ z^γ`, the kernel at `w` truncated as a
/// holomorphic polynomial in `z`.
pub fn kernel_section(space: &KernelSpace, w: &[GaussianRational], degree: u32) -> Result<MixedPolynomial> {
    space.check_exact_point(w)?;
    let n = space.dim();
    let wbar: Vec<GaussianRational> = w.iter().map(GaussianRational::conj).collect();
    let zeros = MultiIndex::zeros(n);
    let mut out = MixedPolynomial::zero(n);
    for gamma in MultiIndex::all_up_to_degree(n, degree) {
        let mut c = GaussianRational::from_rational(space.kernel_coefficient(&gamma)?);
        for (j, &e) in gamma.entries().iter().enumerate() {
            for _ in 0..e {
                c = &c * &wbar[j];
            }
        }
        out.add_term(gamma, zeros.clone(), c);
    }
    Ok(out)
}

/// The space's inner product on holomorphic polynomials, exact.
pub fn holomorphic_inner_product(space: &KernelSpace, f: &MixedPolynomial, g: &MixedPolynomial) -> Result<GaussianRational> {
    check_dim(space.dim(), f.dim())?;
    check_dim(space.dim(), g.dim())?;
    if !f.is_holomorphic() || !g.is_holomorphic() {
        return Err(Error::Precondition("holomorphic polynomials required".into()));
    }
    if let KernelSpace::Ball { .. } = space {
        return poly::inner_product(f, g);
    }
    let mut acc = GaussianRational::zero();
    for (a, _, c) in f.terms() {
        let d = g.coefficient(a, &MultiIndex::zeros(space.dim()));
        if d.is_zero() {
            continue;
        }
        acc += &(c * &d.conj()).scale(&space.monomial_norm_sq(a)?);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproduceReport {
    /// `⟨f, K_z⟩`.
    #[serde(serialize_with = "serialize_gaussian")]
    pub pairing: GaussianRational,
    /// `f(z)` by direct evaluation.
    #[serde(serialize_with = "serialize_gaussian")]
    pub direct: GaussianRational,
    pub equal: bool,
}

fn serialize_gaussian<S: serde::Serializer>(g: &GaussianRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(g)
}

/// `⟨f, K_z⟩` computed exactly with the kernel truncated at `deg f`; every
/// higher kernel term is orthogonal to `f`.
pub fn reproduce_polynomial(space: &KernelSpace, f: &MixedPolynomial, z: &[GaussianRational]) -> Result<ReproduceReport> {
    check_dim(space.dim(), f.dim())?;
    if !f.is_holomorphic() {
        return Err(Error::Precondition("reproduction is only checked on holomorphic polynomials".into()));
    }
    space.check_exact_point(z)?;
    let degree = f.degree().finite().unwrap_or(0) as u32;
    let section = kernel_section(space, z, degree)?;
    let pairing = holomorphic_inner_product(space, f, &section)?;
    let direct = f.eval(z)?;
    let equal = pairing == direct;
    Ok(ReproduceReport { pairing, direct, equal })
}

/// Counts for one float inequality family; `worst` is the largest
/// `lhs / rhs` seen.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckTally {
    pub checked: usize,
    pub failures: usize,
    pub worst: f64,
}

impl CheckTally {
    fn from_ratios(ratios: &[f64], tol: f64) -> Self {
        CheckTally {
            checked: ratios.len(),
            failures: ratios.iter().filter(|&&r| !(r <= 1.0 + tol)).count(),
            worst: ratios.iter().cloned().fold(0.0, f64::max),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SemigroupTally {
    pub checked: usize,
    /// Pairs where `⟨K_u, K_z⟩ ≠ K_u(z)` in exact arithmetic.
    pub exact_failures: usize,
    pub degree: u32,
    pub max_tail_bound: f64,
    /// Largest `|K(z, u) − K_D(z, u)|` against the float closed form.
    pub max_gap: f64,
    pub gap_within_bound: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub pairs: usize,
    pub polynomials: usize,
    pub polynomial_degree: u32,
    pub semigroup_pairs: usize,
    pub semigroup_degree: u32,
    pub radius: f64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            pairs: 50,
            polynomials: 20,
            polynomial_degree: 4,
            semigroup_pairs: 10,
            semigroup_degree: 8,
            radius: 0.7,
            seed: 42,
        }
    }
}

pub const RKHS_REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RkhsReport {
    pub space: String,
    pub seed: u64,
    pub provenance: String,
    /// `|K(w, z)|² ≤ K(z, z) K(w, w)`.
    pub cauchy_schwarz: CheckTally,
    /// `K(z, w) = conj K(w, z)`, as `|difference| / |K|`.
    pub conjugate_symmetry: CheckTally,
    /// `|F(z)|² ≤ K(z, z) ‖F‖²` with `‖F‖²` exact.
    pub point_evaluation: CheckTally,
    pub semigroup: SemigroupTally,
    pub passed: bool,
}

/// The kernel inequalities over seeded random samples. Sample generation is
/// sequential; evaluation is spread over `exec`.
pub fn rkhs_inequality_suite(space: &KernelSpace, config: &SuiteConfig, exec: Exec) -> Result<RkhsReport> {
    let n = space.dim();
    let radius = config.radius;
    if space.is_bounded_domain() && !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Precondition("sample radius must lie in (0, 1)".into()));
    }

    let mut rng = sampling::substream(config.seed, 1);
    let pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..config.pairs)
        .map(|i| {
            let z = sampling::complex_ball_point(&mut rng, n, radius);
            // every tenth pair lies on the diagonal, where Cauchy–Schwarz is an equality
            let w = if i % 10 == 0 { z.clone() } else { sampling::complex_ball_point(&mut rng, n, radius) };
            (z, w)
        })
        .collect();
    let evaluated = exec.try_map(&pairs, |(z, w)| {
        let kzw = kernel_eval(space, z, w)?;
        let kwz = kernel_eval(space, w, z)?;
        let kzz = kernel_eval(space, z, z)?.re;
        let kww = kernel_eval(space, w, w)?.re;
        let cs = kwz.norm_sqr() / (kzz * kww);
        let sym = (kzw - kwz.conj()).norm() / kzw.norm() / RKHS_REL_TOL;
        Ok::<_, Error>((cs, sym))
    })?;
    let cs: Vec<f64> = evaluated.iter().map(|p| p.0).collect();
    let sym: Vec<f64> = evaluated.iter().map(|p| p.1).collect();
    let cauchy_schwarz = CheckTally::from_ratios(&cs, RKHS_REL_TOL);
    let conjugate_symmetry = CheckTally::from_ratios(&sym, 0.0);

    let mut rng = sampling::substream(config.seed, 2);
    let polys: Vec<(MixedPolynomial, Vec<GaussianRational>)> = (0..config.polynomials)
        .map(|_| {
            let f = sampling::holomorphic_polynomial(&mut rng, n, config.polynomial_degree, 5);
            let z = sampling::ball_point(&mut rng, n, radius);
            (f, z)
        })
        .collect();
    let ratios = exec.try_map(&polys, |(f, z)| {
        let norm = rational_to_f64(holomorphic_inner_product(space, f, f)?.re());
        let value = f.eval(z)?.to_complex64().norm_sqr();
        let zf: Vec<Complex64> = z.iter().map(GaussianRational::to_complex64).collect();
        let kzz = kernel_eval(space, &zf, &zf)?.re;
        Ok::<_, Error>(if value == 0.0 { 0.0 } else { value / (kzz * norm) })
    })?;
    let point_evaluation = CheckTally::from_ratios(&ratios, RKHS_REL_TOL);

    let mut rng = sampling::substream(config.seed, 3);
    let sg_pairs: Vec<(Vec<GaussianRational>, Vec<GaussianRational>)> = (0..config.semigroup_pairs)
        .map(|_| (sampling::ball_point(&mut rng, n, radius), sampling::ball_point(&mut rng, n, radius)))
        .collect();
    let d = config.semigroup_degree;
    let sg = exec.try_map(&sg_pairs, |(z, u)| {
        let ku = kernel_section(space, u, d)?;
        let kz = kernel_section(space, z, d)?;
        let lhs = holomorphic_inner_product(space, &ku, &kz)?;
        let truncated = ku.eval(z)?;
        let zf: Vec<Complex64> = z.iter().map(GaussianRational::to_complex64).collect();
        let uf: Vec<Complex64> = u.iter().map(GaussianRational::to_complex64).collect();
        let gap = (kernel_eval(space, &zf, &uf)? - truncated.to_complex64()).norm();
        let bound = series_tail_bound(space, &zf, &uf, d)?;
        Ok::<_, Error>((lhs == truncated, gap, bound))
    })?;
    let gap_within_bound = sg.iter().all(|&(_, gap, bound)| gap <= bound * (1.0 + 1e-9) + 1e-13);
    let semigroup = SemigroupTally {
        checked: sg.len(),
        exact_failures: sg.iter().filter(|r| !r.0).count(),
        degree: d,
        max_tail_bound: sg.iter().map(|r| r.2).fold(0.0, f64::max),
        max_gap: sg.iter().map(|r| r.1).fold(0.0, f64::max),
        gap_within_bound,
    };

    let passed = cauchy_schwarz.failures == 0
        && conjugate_symmetry.failures == 0
        && point_evaluation.failures == 0
        && semigroup.exact_failures == 0
        && semigroup.gap_within_bound;
    Ok(RkhsReport {
        space: space.to_string(),
        seed: config.seed,
        provenance: format!("float({RKHS_REL_TOL:e})"),
        cauchy_schwarz,
        conjugate_symmetry,
        point_evaluation,
        semigroup,
        passed,
    })
}

/// One Peetre comparison, in logarithms so large `l` cannot overflow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeetreResult {
    /// `ln ⟨w+μ⟩^l`.
    pub log_lhs: f64,
    /// `ln 2^{|l|}⟨w⟩^{|l|}⟨μ⟩^l`.
    pub log_rhs: f64,
    /// `log_rhs − log_lhs`, non-negative when the inequality holds.
    pub log_slack: f64,
    pub passed: bool,
}

fn log_bracket(x: &[f64]) -> f64 {
    0.5 * (1.0 + x.iter().map(|v| v * v).sum::<f64>()).ln()
}

/// `⟨w+μ⟩^l ≤ 2^{|l|} ⟨w⟩^{|l|} ⟨μ⟩^l` with `⟨x⟩ = (1+|x|²)^{1/2}`.
pub fn verify_peetre(w: &[f64], mu: &[f64], l: f64) -> Result<PeetreResult> {
    check_dim(w.len(), mu.len())?;
    if !l.is_finite() || w.iter().chain(mu).any(|v| !v.is_finite()) {
        return Err(Error::Malformed("non-finite Peetre input".into()));
    }
    let sum: Vec<f64> = w.iter().zip(mu).map(|(a, b)| a + b).collect();
    let log_lhs = l * log_bracket(&sum);
    let log_rhs = l.abs() * std::f64::consts::LN_2 + l.abs() * log_bracket(w) + l * log_bracket(mu);
    let log_slack = log_rhs - log_lhs;
    let passed = log_slack >= -1e-12 * (1.0 + log_rhs.abs());
    Ok(PeetreResult { log_lhs, log_rhs, log_slack, passed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeetreSweep {
    pub samples: usize,
    pub dim: usize,
    pub seed: u64,
    pub failures: usize,
    pub min_log_slack: f64,
    pub passed: bool,
}

/// Random `w, μ ∈ [−10, 10]^dim` and `l ∈ [−5, 5]`.
pub fn peetre_sweep(samples: usize, dim: usize, seed: u64, exec: Exec) -> Result<PeetreSweep> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut rng = sampling::substream(seed, 4);
    let inputs: Vec<(Vec<f64>, Vec<f64>, f64)> = (0..samples)
        .map(|_| {
            let w = (0..dim).map(|_| rng.random_range(-10.0..10.0)).collect();
            let mu = (0..dim).map(|_| rng.random_range(-10.0..10.0)).collect();
            (w, mu, rng.random_range(-5.0..=5.0))
        })
        .collect();
    let results = exec.try_map(&inputs, |(w, mu, l)| verify_peetre(w, mu, *l))?;
    let failures = results.iter().filter(|r| !r.passed).count();
    Ok(PeetreSweep {
        samples,
        dim,
        seed,
        failures,
        min_log_slack: results.iter().map(|r| r.log_slack).fold(f64::INFINITY, f64::min),
        passed: failures == 0,
    })
}

/// `‖z^k‖² = k! tᵏ` in the one-variable Fock space, built by the recurrence
/// `‖z^k‖² = t k ‖z^{k−1}‖²` and returned together with the closed form.
pub fn fock_norm_recurrence(t: &BigRational, k: u32) -> (BigRational, BigRational) {
    let mut v = BigRational::one();
    for j in 1..=k {
        v = v * t * BigRational::from_integer(BigInt::from(j));
    }
    let closed = BigRational::from_integer(BigInt::from(factorial(k as u64))) * num_traits::pow::Pow::pow(t, k as i32);
    (v, closed)
}

/// `‖z^k‖² = k! (a+1)! / (k+a+1)!` in the disk space with integer weight.
pub fn disk_norm_exact(a: u32, k: u32) -> BigRational {
    let num = factorial(k as u64) * factorial(a as u64 + 1);
    let den = factorial(k as u64 + a as u64 + 1);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
