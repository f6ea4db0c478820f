//! Seeded random generators for test inputs.
//!
//! Everything draws from a [`ChaCha8Rng`], so a seed pins down every sample
//! on every platform.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::RealLinearVectorField;
use crate::poly::{GaussianRational, MixedPolynomial, MultiIndex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for sub-task `tag`.
pub fn substream(seed: u64, tag: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(tag);
    r
}

/// `p/den` with `|p| ≤ bound`.
pub fn rational<R: Rng>(rng: &mut R, bound: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.random_range(-bound..=bound)), BigInt::from(den))
}

/// `p/q` with `|p| ≤ bound` and `1 ≤ q ≤ max_den`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> BigRational {
    let den = rng.random_range(1..=max_den);
    rational(rng, bound, den)
}

pub fn gaussian<R: Rng>(rng: &mut R, bound: i64, den: i64) -> GaussianRational {
    GaussianRational::new(rational(rng, bound, den), rational(rng, bound, den))
}

fn random_index<R: Rng>(rng: &mut R, n: usize, degree: u32) -> MultiIndex {
    let mut e = vec![0u32; n];
    for _ in 0..degree {
        e[rng.random_range(0..n)] += 1;
    }
    MultiIndex::new(e)
}

fn small_gaussian<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> GaussianRational {
    let den = rng.random_range(1..=max_den);
    gaussian(rng, bound, den)
}

/// A mixed polynomial with up to `terms` monomials of total degree at most
/// `max_degree` and small Gaussian-rational coefficients.
pub fn polynomial<R: Rng>(rng: &mut R, n: usize, max_degree: u32, terms: usize) -> MixedPolynomial {
    let mut f = MixedPolynomial::zero(n);
    for _ in 0..terms {
        let d = rng.random_range(0..=max_degree);
        let split = rng.random_range(0..=d);
        let alpha = random_index(rng, n, split);
        let beta = random_index(rng, n, d - split);
        f.add_term(alpha, beta, small_gaussian(rng, 9, 6));
    }
    f
}

pub fn holomorphic_polynomial<R: Rng>(rng: &mut R, n: usize, max_degree: u32, terms: usize) -> MixedPolynomial {
    let mut f = MixedPolynomial::zero(n);
    for _ in 0..terms {
        let d = rng.random_range(0..=max_degree);
        f.add_term(random_index(rng, n, d), MultiIndex::zeros(n), small_gaussian(rng, 9, 6));
    }
    f
}

/// A real antisymmetric `2n × 2n` matrix with entries `p/q`, `|p| ≤ 6`, `q ≤ 4`.
pub fn antisymmetric<R: Rng>(rng: &mut R, n: usize) -> RealLinearVectorField {
    let m = 2 * n;
    let zero = BigRational::from_integer(0.into());
    let mut rows = vec![vec![zero; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let v = small_rational(rng, 6, 4);
            rows[j][i] = -v.clone();
            rows[i][j] = v;
        }
    }
    RealLinearVectorField::new(rows).expect("square, even size")
}

/// A real `2n × 2n` matrix with no imposed structure.
pub fn general_matrix<R: Rng>(rng: &mut R, n: usize) -> RealLinearVectorField {
    let m = 2 * n;
    let rows = (0..m)
        .map(|_| (0..m).map(|_| small_rational(rng, 6, 4)).collect())
        .collect();
    RealLinearVectorField::new(rows).expect("square, even size")
}

/// The real form of a random skew-Hermitian `H ∈ u(n)`: block `(j, l)` is
/// `[[Re H_jl, −Im H_jl], [Im H_jl, Re H_jl]]`. Such a field is tangent and
/// commutes with the complex structure.
pub fn unitary_generator<R: Rng>(rng: &mut R, n: usize) -> RealLinearVectorField {
    let zero = || BigRational::from_integer(0.into());
    let mut re = vec![vec![zero(); n]; n];
    let mut im = vec![vec![zero(); n]; n];
    for j in 0..n {
        im[j][j] = small_rational(rng, 6, 4);
        for l in (j + 1)..n {
            let a = small_rational(rng, 6, 4);
            let b = small_rational(rng, 6, 4);
            re[l][j] = -a.clone();
            re[j][l] = a;
            im[l][j] = b.clone();
            im[j][l] = b;
        }
    }
    let mut rows = vec![vec![zero(); 2 * n]; 2 * n];
    for j in 0..n {
        for l in 0..n {
            rows[2 * j][2 * l] = re[j][l].clone();
            rows[2 * j][2 * l + 1] = -im[j][l].clone();
            rows[2 * j + 1][2 * l] = im[j][l].clone();
            rows[2 * j + 1][2 * l + 1] = re[j][l].clone();
        }
    }
    RealLinearVectorField::new(rows).expect("square, even size")
}

/// A nonzero rational vector in `ℝ^dim`.
pub fn real_point<R: Rng>(rng: &mut R, dim: usize) -> Vec<BigRational> {
    loop {
        let x: Vec<BigRational> = (0..dim).map(|_| small_rational(rng, 20, 7)).collect();
        if x.iter().any(|v| *v != BigRational::from_integer(0.into())) {
            return x;
        }
    }
}

/// A Gaussian-rational point with `|z|² < radius²`, denominators 100.
pub fn ball_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<GaussianRational> {
    let bound = (radius * 100.0).floor() as i64;
    let r_sq = BigRational::from_float(radius * radius).expect("finite radius");
    loop {
        let z: Vec<GaussianRational> = (0..n).map(|_| gaussian(rng, bound, 100)).collect();
        let norm: BigRational = z.iter().map(GaussianRational::norm_sq).sum();
        if norm < r_sq {
            return z;
        }
    }
}

/// A point of `ℂ^n` uniform in the box `[−r, r]^{2n}` then pulled into the
/// ball of radius `r`.
pub fn complex_ball_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<Complex64> {
    loop {
        let z: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-radius..radius), rng.random_range(-radius..radius)))
            .collect();
        if z.iter().map(|c| c.norm_sqr()).sum::<f64>() < radius * radius {
            return z;
        }
    }
}

/// Entries uniform in the unit square.
pub fn complex_matrix<R: Rng>(rng: &mut R, k: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(k, k, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_respect_their_contracts() {
        let mut r = rng(7);
        for n in 1..=3 {
            assert!(antisymmetric(&mut r, n).is_tangent());
            let u = unitary_generator(&mut r, n);
            assert!(u.is_tangent() && u.is_complex_linear());
            assert!(holomorphic_polynomial(&mut r, n, 5, 4).is_holomorphic());
            let p = polynomial(&mut r, n, 5, 6);
            assert!(p.degree().finite().unwrap_or(0) <= 5);
            let z = ball_point(&mut r, n, 0.7);
            let s: BigRational = z.iter().map(GaussianRational::norm_sq).sum();
            assert!(s < BigRational::new(49.into(), 100.into()));
        }
    }

    #[test]
    fn same_seed_same_samples() {
        let a = polynomial(&mut rng(3), 2, 6, 5);
        let b = polynomial(&mut rng(3), 2, 6, 5);
        assert_eq!(a, b);
        let s0: f64 = substream(3, 0).random();
        let s1: f64 = substream(3, 1).random();
        assert_ne!(s0, s1);
    }
}
