//! `[X, P] = X∘P − P∘X` on polynomials.
//!
//! Unboundedness is never asserted as a norm. A scan reports exact ratios
//! `‖[X,P] f_m‖² / ‖f_m‖²` along a witness family `f_m = z_i^{p(m)} z̄_i^{q(m)}`
//! and the first `m` at which each supplied threshold `c` is exceeded.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::exec::Exec;
use crate::fields::{complexify, monomials_up_to, RealLinearVectorField, VectorField};
use crate::poly::{
    factorial, format_rational, monomial_norm_sq, norm_sq, rational_to_f64, GaussianRational,
    MixedPolynomial, MultiIndex, PolynomialJson,
};
use crate::projection::ProjectionConfig;

/// `[X, P] f = X(Pf) − P(Xf)`.
pub fn commutator_apply(field: &VectorField, f: &MixedPolynomial) -> Result<MixedPolynomial> {
    check_dim(field.dim(), f.dim())?;
    let proj = ProjectionConfig::new(f.dim())?;
    let xp = field.apply(&proj.project(f)?)?;
    let px = proj.project(&field.apply(f)?)?;
    xp.checked_sub(&px)
}

/// `m ↦ slope·m + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub slope: u32,
    pub offset: u32,
}

impl Affine {
    pub fn eval(self, m: u32) -> u32 {
        self.slope * m + self.offset
    }
}

/// Witnesses `z_i^{p(m)} z̄_i^{q(m)}` on one coordinate (zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessFamily {
    pub coordinate: usize,
    pub p: Affine,
    pub q: Affine,
}

impl WitnessFamily {
    /// `p = 2m`, `q = m`.
    pub fn standard(coordinate: usize) -> Self {
        WitnessFamily {
            coordinate,
            p: Affine { slope: 2, offset: 0 },
            q: Affine { slope: 1, offset: 0 },
        }
    }

    pub fn exponents(&self, m: u32) -> (u32, u32) {
        (self.p.eval(m), self.q.eval(m))
    }

    pub fn witness(&self, n: usize, m: u32) -> Result<MixedPolynomial> {
        if self.coordinate >= n {
            return Err(Error::IndexOutOfRange { index: self.coordinate, n });
        }
        let (p, q) = self.exponents(m);
        let mut a = MultiIndex::zeros(n);
        let mut b = MultiIndex::zeros(n);
        a = a.shifted(self.coordinate, p as i64).expect("non-negative");
        b = b.shifted(self.coordinate, q as i64).expect("non-negative");
        MixedPolynomial::monomial(a, b, GaussianRational::one())
    }

    /// Checks `q(m) ≥ 1` for `m ≥ 1`, and `p(m) > q(m)` for the `∂/∂z` kind.
    pub fn validate(&self, kind: &ScanField) -> Result<()> {
        let malformed = |why: &str| Err(Error::Malformed(format!("witness family: {why}")));
        if self.q.eval(1) < 1 {
            return malformed("q(m) must be at least 1");
        }
        if matches!(kind, ScanField::Dz) {
            // affine maps: p > q at m = 1 and non-decreasing gap suffice
            if self.p.eval(1) <= self.q.eval(1) || self.p.slope < self.q.slope {
                return malformed("∂/∂z witnesses need p(m) > q(m)");
            }
        }
        Ok(())
    }
}

/// The operator whose commutator with `P` is scanned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanField {
    /// `∂/∂z_i` on the family's coordinate.
    Dz,
    /// `∂/∂z̄_i` on the family's coordinate; reported as `[P, ∂/∂z̄_i]`.
    Dzbar,
    Custom(VectorField),
}

impl ScanField {
    fn resolve(&self, n: usize, coordinate: usize) -> Result<VectorField> {
        match self {
            ScanField::Dz => VectorField::dz(n, coordinate),
            ScanField::Dzbar => VectorField::dzbar(n, coordinate),
            ScanField::Custom(f) => {
                check_dim(n, f.dim())?;
                Ok(f.clone())
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ScanField::Dz => "dz",
            ScanField::Dzbar => "dzbar",
            ScanField::Custom(_) => "custom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioPoint {
    pub m: u32,
    #[serde(serialize_with = "ser_rational")]
    pub ratio_sq: BigRational,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl RatioPoint {
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.ratio_sq)
    }
}

fn frac(num: num_bigint::BigUint, den: num_bigint::BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Closed forms for the single-derivative witnesses `z^p z̄^q`:
///
/// ```text
/// ∂/∂z :  q² p!² (p−q−1+n)! / ((n+p)!² (p−q−1)!) · (n+p+q)!/(p+q)!     (p > q)
/// ∂/∂z̄:  q² p!² (p−q+1+n)! / ((n+p)!² (p−q+1)!) · (n+p+q)!/(p+q)!     (p ≥ q)
/// ```
pub fn ratio_sq_closed_form(n: usize, p: u32, q: u32, kind: &ScanField) -> Result<BigRational> {
    let (n, p, q) = (n as u64, p as u64, q as u64);
    let gap = match kind {
        ScanField::Dz if p > q => p - q - 1,
        ScanField::Dzbar if p + 1 >= q => p + 1 - q,
        ScanField::Custom(_) => {
            return Err(Error::Precondition("no closed form for a custom field".into()))
        }
        _ => return Err(Error::Precondition(format!("no closed form for p={p}, q={q}"))),
    };
    let pf = factorial(p);
    let npf = factorial(n + p);
    let num = BigInt::from(q * q) * BigInt::from(&pf * &pf * factorial(gap + n));
    let den = BigInt::from(&npf * &npf * factorial(gap));
    Ok(BigRational::new(num, den) * frac(factorial(n + p + q), factorial(p + q)))
}

/// `‖[X,P] f_m‖² / ‖f_m‖²`, exact, by evaluating the commutator.
pub fn ratio_sq(n: usize, family: &WitnessFamily, m: u32, kind: &ScanField) -> Result<BigRational> {
    family.validate(kind)?;
    let field = kind.resolve(n, family.coordinate)?;
    let f = family.witness(n, m)?;
    let image = commutator_apply(&field, &f)?;
    let (a, b) = f.terms().next().map(|(a, b, _)| (a.clone(), b.clone())).expect("monomial");
    Ok(norm_sq(&image) / monomial_norm_sq(&a, &b)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdCrossing {
    pub threshold: f64,
    /// Smallest scanned `m` with `ratio_sq > threshold`.
    pub first_m: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub kind: &'static str,
    pub family: WitnessFamily,
    pub points: Vec<RatioPoint>,
    /// Least-squares slope of `log ratio_sq` against `log m` over the upper
    /// half of the range; `None` when a ratio vanishes.
    pub slope: Option<f64>,
    pub crossings: Vec<ThresholdCrossing>,
    /// Every point agrees exactly with the closed form; `None` for custom fields.
    pub closed_form_agrees: Option<bool>,
    /// `ratio_sq(m+1) > ratio_sq(m)` for every consecutive pair.
    pub strictly_increasing: bool,
}

impl ScanReport {
    pub fn exceeds_all(&self) -> bool {
        self.crossings.iter().all(|c| c.first_m.is_some())
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || ys.iter().any(|&y| y <= 0.0 || !y.is_finite()) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn divergence_scan(
    n: usize,
    family: &WitnessFamily,
    kind: &ScanField,
    m_max: u32,
    thresholds: &[f64],
    exec: Exec,
) -> Result<ScanReport> {
    if m_max < 10 {
        return Err(Error::Precondition(format!("m_max must be at least 10, got {m_max}")));
    }
    family.validate(kind)?;
    let ms: Vec<u32> = (1..=m_max).collect();
    let ratios = exec.try_map(&ms, |&m| ratio_sq(n, family, m, kind))?;
    let closed_form_agrees = match kind {
        ScanField::Custom(_) => None,
        _ => {
            let closed = exec.try_map(&ms, |&m| {
                let (p, q) = family.exponents(m);
                ratio_sq_closed_form(n, p, q, kind)
            })?;
            Some(closed == ratios)
        }
    };
    let points: Vec<RatioPoint> = ms
        .iter()
        .zip(ratios)
        .map(|(&m, ratio_sq)| RatioPoint { m, ratio_sq })
        .collect();

    let lo = (m_max / 2) as usize;
    let upper = &points[lo - 1..];
    let xs: Vec<f64> = upper.iter().map(|p| p.m as f64).collect();
    let ys: Vec<f64> = upper.iter().map(RatioPoint::to_f64).collect();
    let slope = log_log_slope(&xs, &ys);

    let crossings = thresholds
        .iter()
        .map(|&c| ThresholdCrossing {
            threshold: c,
            first_m: points.iter().find(|p| p.to_f64() > c).map(|p| p.m),
        })
        .collect();
    let strictly_increasing = points.windows(2).all(|w| w[1].ratio_sq > w[0].ratio_sq);

    Ok(ScanReport {
        n,
        kind: kind.label(),
        family: *family,
        points,
        slope,
        crossings,
        closed_form_agrees,
        strictly_increasing,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    /// `[X,P] z^α z̄^β` as canonical polynomial JSON.
    pub image: PolynomialJson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentReport {
    pub n: usize,
    pub degree: u32,
    pub monomials_checked: usize,
    pub passed: bool,
    /// Whether `A` also commutes with multiplication by `i`.
    pub complex_linear: bool,
    pub counterexample: Option<Counterexample>,
}

/// Exact check that `[X, P]` kills every monomial of total degree `≤ d`.
///
/// Refuses non-tangent input. The first counterexample in graded order is
/// reported.
pub fn verify_tangent_commutes(
    field: &RealLinearVectorField,
    degree: u32,
    exec: Exec,
) -> Result<TangentReport> {
    if !field.is_tangent() {
        return Err(Error::Precondition(format!(
            "field is not tangent: antisymmetry defect {}",
            format_rational(&field.antisymmetry_defect())
        )));
    }
    let n = field.dim();
    let x = complexify(field).to_field();
    let monomials = monomials_up_to(n, degree);
    let images = exec.try_map(&monomials, |(a, b)| {
        let f = MixedPolynomial::monomial(a.clone(), b.clone(), GaussianRational::one())?;
        commutator_apply(&x, &f)
    })?;
    let counterexample = monomials.iter().zip(&images).find(|(_, img)| !img.is_zero()).map(
        |((a, b), img)| Counterexample {
            alpha: a.entries().to_vec(),
            beta: b.entries().to_vec(),
            image: PolynomialJson::from(img),
        },
    );
    Ok(TangentReport {
        n,
        degree,
        monomials_checked: monomials.len(),
        passed: counterexample.is_none(),
        complex_linear: field.is_complex_linear(),
        counterexample,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombinationReport {
    /// Zero-based coordinate whose witnesses were used.
    pub coordinate: usize,
    #[serde(serialize_with = "ser_rational")]
    pub weight: BigRational,
    /// The scan of `Σ a_i ∂_i` on the chosen witnesses.
    pub scan: ScanReport,
    /// `ratio(Σ a_i ∂_i) = |a_j|² · ratio(∂_j)` at every `m`, exactly.
    pub matches_scaled_single: bool,
}

/// Scan for `X = Σ a_i ∂/∂z_i` (or `∂/∂z̄_i`) along the witnesses of the first
/// coordinate `j` with `a_j ≠ 0`, where the other terms vanish.
pub fn linear_combination_unbounded(
    coeffs: &[GaussianRational],
    kind: &ScanField,
    m_max: u32,
    thresholds: &[f64],
    exec: Exec,
) -> Result<CombinationReport> {
    let n = coeffs.len();
    let Some(j) = coeffs.iter().position(|a| !a.is_zero()) else {
        return Err(Error::Precondition("all coefficients are zero".into()));
    };
    let zeros = vec![GaussianRational::zero(); n];
    let field = match kind {
        ScanField::Dz => VectorField::constant(coeffs, &zeros)?,
        ScanField::Dzbar => VectorField::constant(&zeros, coeffs)?,
        ScanField::Custom(_) => {
            return Err(Error::Precondition("combination scans take dz or dzbar".into()))
        }
    };
    let family = WitnessFamily::standard(j);
    let scan = divergence_scan(n, &family, &ScanField::Custom(field), m_max, thresholds, exec)?;
    let weight = coeffs[j].norm_sq();
    let ms: Vec<u32> = (1..=m_max).collect();
    let single = exec.try_map(&ms, |&m| ratio_sq(n, &family, m, kind))?;
    let matches_scaled_single = scan
        .points
        .iter()
        .zip(&single)
        .all(|(p, s)| p.ratio_sq == s * &weight);
    let mut scan = scan;
    scan.kind = kind.label();
    scan.closed_form_agrees = None;
    Ok(CombinationReport { coordinate: j, weight, scan, matches_scaled_single })
}

/// True when `∂/∂z̄_i ∘ P` vanishes on `f` for every coordinate.
pub fn dzbar_kills_projection(f: &MixedPolynomial) -> Result<bool> {
    let pf = ProjectionConfig::new(f.dim())?.project(f)?;
    for i in 0..f.dim() {
        if !crate::fields::wirtinger_dzbar(i, &pf)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
