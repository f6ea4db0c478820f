use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::rational_to_f64;
use crate::error::{Error, Result};

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational(Complex<BigRational>);

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational(Complex::new(re, im))
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational(Complex::new(re, BigRational::zero()))
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `p/q + (r/s) i`, for literals in tests and examples.
    pub fn from_ratios(p: i64, q: i64, r: i64, s: i64) -> Self {
        GaussianRational::new(
            BigRational::new(p.into(), q.into()),
            BigRational::new(r.into(), s.into()),
        )
    }

    pub fn zero() -> Self {
        GaussianRational(Complex::zero())
    }

    pub fn one() -> Self {
        GaussianRational(Complex::one())
    }

    pub fn i() -> Self {
        GaussianRational(Complex::i())
    }

    pub fn re(&self) -> &BigRational {
        &self.0.re
    }

    pub fn im(&self) -> &BigRational {
        &self.0.im
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.0.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational(self.0.conj())
    }

    /// `|w|² = re² + im²`, exact.
    pub fn norm_sq(&self) -> BigRational {
        self.0.norm_sqr()
    }

    pub fn checked_div(&self, other: &GaussianRational) -> Result<GaussianRational> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = other.norm_sq();
        let num = &self.0 * other.0.conj();
        Ok(GaussianRational(Complex::new(num.re / &d, num.im / d)))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussianRational(Complex::new(&self.0.re * r, &self.0.im * r))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.0.re), rational_to_f64(&self.0.im))
    }

    pub fn as_complex(&self) -> &Complex<BigRational> {
        &self.0
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational(&self.0 + &o.0)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: GaussianRational) -> GaussianRational {
        GaussianRational(self.0 + o.0)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational(&self.0 - &o.0)
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: GaussianRational) -> GaussianRational {
        GaussianRational(self.0 - o.0)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational(&self.0 * &o.0)
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: GaussianRational) -> GaussianRational {
        GaussianRational(self.0 * o.0)
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational(-self.0)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational(-self.0.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.0 += &o.0;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.0 -= &o.0;
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (&self.0.re, &self.0.im);
        match (re.is_zero(), im.is_zero()) {
            (_, true) => write!(f, "{re}"),
            (true, false) => write!(f, "{im}i"),
            (false, false) => {
                let sign = if im.is_negative() { '-' } else { '+' };
                write!(f, "{re}{sign}{}i", im.abs())
            }
        }
    }
}
