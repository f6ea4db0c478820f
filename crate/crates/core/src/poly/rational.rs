use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const FACTORIAL_TABLE: usize = 1024;

fn table() -> &'static [BigUint] {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACTORIAL_TABLE);
        let mut acc = BigUint::one();
        t.push(acc.clone());
        for k in 1..FACTORIAL_TABLE as u64 {
            acc *= k;
            t.push(acc.clone());
        }
        t
    })
}

/// `k!` as an exact natural.
pub fn factorial(k: u64) -> BigUint {
    let t = table();
    if (k as usize) < t.len() {
        return t[k as usize].clone();
    }
    let mut acc = t[t.len() - 1].clone();
    for j in t.len() as u64..=k {
        acc *= j;
    }
    acc
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational \"p/q\": {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(p, q))
}

/// Canonical `"p/q"` form: reduced, positive denominator, always with a slash.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
