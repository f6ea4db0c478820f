//! A small exact engine written independently of `bergman-core`, used as the
//! reference the library is checked against.
//!
//! Polynomials are maps from `(α, β)` to `Complex<BigRational>` coefficients
//! of `z^α z̄^β`. The inner product is the normalized-volume one on the unit
//! ball, computed from the moment formula
//! `∫ z^p z̄^q dμ = δ_{pq} n! p! / (n+|p|)!`.

#![allow(dead_code)]

use std::collections::BTreeMap;

use bergman_core::MixedPolynomial;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type C = Complex<Q>;
pub type Key = (Vec<u32>, Vec<u32>);

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub n: usize,
    pub terms: BTreeMap<Key, C>,
}

pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn c(re: Q, im: Q) -> C {
    Complex::new(re, im)
}

pub fn real(r: Q) -> C {
    Complex::new(r, Q::zero())
}

pub fn fact(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

fn multi_fact(a: &[u32]) -> BigInt {
    a.iter().fold(BigInt::one(), |acc, &e| acc * fact(e as u64))
}

fn deg(a: &[u32]) -> u64 {
    a.iter().map(|&e| e as u64).sum()
}

/// `∫ z^p z̄^p dμ` on the ball in `ℂ^n`.
pub fn moment(n: usize, p: &[u32]) -> Q {
    Q::new(fact(n as u64) * multi_fact(p), fact(n as u64 + deg(p)))
}

/// Coefficient of `z^γ w̄^γ` in `(1 − z·w̄)^{−(n+1)}`, expanded by the
/// multinomial theorem.
pub fn ball_kernel_coefficient(n: usize, gamma: &[u32]) -> Q {
    Q::new(fact(n as u64 + deg(gamma)), fact(n as u64) * multi_fact(gamma))
}

fn add_idx(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn monomial(a: Vec<u32>, b: Vec<u32>, coeff: C) -> Self {
        let mut p = Poly::zero(a.len());
        p.add(a, b, coeff);
        p
    }

    pub fn add(&mut self, a: Vec<u32>, b: Vec<u32>, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        let key = (a, b);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for ((a, b), v) in &other.terms {
            out.add(a.clone(), b.clone(), v.clone());
        }
        out
    }

    pub fn minus(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for ((a, b), v) in &other.terms {
            out.add(a.clone(), b.clone(), -v.clone());
        }
        out
    }

    pub fn times(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for ((a, b), v) in &self.terms {
            for ((c2, d), w) in &other.terms {
                out.add(add_idx(a, c2), add_idx(b, d), v * w);
            }
        }
        out
    }

    pub fn d_z(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for ((a, b), v) in &self.terms {
            if a[i] > 0 {
                let mut a2 = a.clone();
                a2[i] -= 1;
                out.add(a2, b.clone(), v * real(Q::from_integer(a[i].into())));
            }
        }
        out
    }

    pub fn d_zbar(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for ((a, b), v) in &self.terms {
            if b[i] > 0 {
                let mut b2 = b.clone();
                b2[i] -= 1;
                out.add(a.clone(), b2, v * real(Q::from_integer(b[i].into())));
            }
        }
        out
    }

    /// `P f = ⟨f, K_z⟩`: pairing a monomial with `K_z(w) = Σ c_γ w^γ z̄^γ`
    /// leaves only `γ = α − β`.
    pub fn project(&self) -> Poly {
        let n = self.n;
        let mut out = Poly::zero(n);
        for ((a, b), v) in &self.terms {
            if a.iter().zip(b).any(|(x, y)| x < y) {
                continue;
            }
            let gamma: Vec<u32> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let w = ball_kernel_coefficient(n, &gamma) * moment(n, a);
            out.add(gamma, vec![0; n], v * real(w));
        }
        out
    }

    pub fn inner(&self, other: &Poly) -> C {
        let mut acc = real(Q::zero());
        for ((a, b), v) in &self.terms {
            for ((c2, d), w) in &other.terms {
                let p = add_idx(a, d);
                if p == add_idx(b, c2) {
                    acc += v * w.conj() * real(moment(self.n, &p));
                }
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> Q {
        self.inner(self).re
    }

    pub fn eval(&self, z: &[C]) -> C {
        let mut acc = real(Q::zero());
        for ((a, b), v) in &self.terms {
            let mut t = v.clone();
            for j in 0..self.n {
                for _ in 0..a[j] {
                    t *= z[j].clone();
                }
                for _ in 0..b[j] {
                    t *= z[j].conj();
                }
            }
            acc += t;
        }
        acc
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(|(a, b)| deg(a) + deg(b)).max().unwrap_or(0)
    }
}

pub fn from_core(f: &MixedPolynomial) -> Poly {
    let mut p = Poly::zero(f.dim());
    for (a, b, v) in f.terms() {
        p.add(a.entries().to_vec(), b.entries().to_vec(), c(v.re().clone(), v.im().clone()));
    }
    p
}

/// The real field `(Ax)ᵗ d/dx` on `ℂ^n`, `z_j = x_{2j} + i x_{2j+1}`.
pub struct RealField {
    pub n: usize,
    /// `U_j`, `V_j` with `X = Σ U_j ∂/∂z_j + V_j ∂/∂z̄_j`.
    pub u: Vec<Poly>,
    pub v: Vec<Poly>,
}

impl RealField {
    pub fn new(a: &[Vec<Q>]) -> Self {
        let n = a.len() / 2;
        let half = q(1, 2);
        let unit = |j: usize, conj: bool| {
            let mut idx = vec![0u32; n];
            idx[j] = 1;
            if conj {
                Poly::monomial(vec![0; n], idx, real(Q::one()))
            } else {
                Poly::monomial(idx, vec![0; n], real(Q::one()))
            }
        };
        let scale = |p: &Poly, s: C| {
            let mut out = Poly::zero(n);
            for ((x, y), w) in &p.terms {
                out.add(x.clone(), y.clone(), w * s.clone());
            }
            out
        };
        // x_{2l} = (z_l + z̄_l)/2 and x_{2l+1} = (z_l − z̄_l)/(2i)
        let x: Vec<Poly> = (0..2 * n)
            .map(|k| {
                let l = k / 2;
                if k % 2 == 0 {
                    scale(&unit(l, false).plus(&unit(l, true)), real(half.clone()))
                } else {
                    scale(&unit(l, false).minus(&unit(l, true)), c(Q::zero(), -half.clone()))
                }
            })
            .collect();
        let ax: Vec<Poly> = (0..2 * n)
            .map(|r| {
                (0..2 * n).fold(Poly::zero(n), |acc, k| acc.plus(&scale(&x[k], real(a[r][k].clone()))))
            })
            .collect();
        let i = c(Q::zero(), Q::one());
        let u = (0..n).map(|j| ax[2 * j].plus(&scale(&ax[2 * j + 1], i.clone()))).collect();
        let v = (0..n).map(|j| ax[2 * j].minus(&scale(&ax[2 * j + 1], i.clone()))).collect();
        RealField { n, u, v }
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        (0..self.n).fold(Poly::zero(self.n), |acc, j| {
            acc.plus(&self.u[j].times(&f.d_z(j))).plus(&self.v[j].times(&f.d_zbar(j)))
        })
    }

    pub fn commutator_with_projection(&self, f: &Poly) -> Poly {
        self.apply(&f.project()).minus(&self.apply(f).project())
    }
}

/// All `(α, β)` with `|α| + |β| ≤ d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Key> {
    fn rec(left: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for e in 0..=budget {
            cur.push(e);
            rec(left - 1, budget - e, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(2 * n, d, &mut Vec::new(), &mut all);
    all.into_iter().map(|v| (v[..n].to_vec(), v[n..].to_vec())).collect()
}

pub fn to_f64(r: &Q) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("finite")
}
