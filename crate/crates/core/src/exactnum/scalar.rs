use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Which arithmetic a computation runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

/// A field of complex numbers closed under conjugation.
///
/// Implemented by [`Qi`] (Gaussian rationals, exact) and [`Cf`] (complex doubles).
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `p/q`; panics when `q == 0`.
    fn ratio(p: i64, q: i64) -> Self;
    fn from_qi(v: &Qi) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// `None` exactly when `self` is zero (float: when both parts are exactly zero).
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Euclidean modulus as a double, for reporting and float tolerances.
    fn modulus(&self) -> f64;
    fn to_complex(&self) -> Complex64;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }
    fn mul_i(&self) -> Self {
        self.mul(&Self::i())
    }
    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|r| self.mul(&r))
    }
}

/// Exact Gaussian rational `re + im i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Qi {
    pub re: BigRational,
    pub im: BigRational,
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

impl Qi {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Qi { re, im }
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Qi { re: q(re.0, re.1), im: q(im.0, im.1) }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Squared modulus, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Qi {
    /// Renders in the spec-file syntax: `p/q`, `r/s i`, or `p/q+r/s i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{} i", fmt_rat(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "" } else { "+" };
                write!(f, "{}{}{} i", fmt_rat(&self.re), sign, fmt_rat(&self.im))
            }
        }
    }
}

impl fmt::Debug for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: scale both down first
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Scalar for Qi {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Qi { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn one() -> Self {
        Qi { re: BigRational::one(), im: BigRational::zero() }
    }
    fn i() -> Self {
        Qi { re: BigRational::zero(), im: BigRational::one() }
    }
    fn from_i64(v: i64) -> Self {
        Qi { re: BigRational::from_integer(BigInt::from(v)), im: BigRational::zero() }
    }
    fn ratio(p: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Qi { re: q(p, d), im: BigRational::zero() }
    }
    fn from_qi(v: &Qi) -> Self {
        v.clone()
    }

    fn add(&self, o: &Self) -> Self {
        Qi { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Self) -> Self {
        Qi { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        // purely real or imaginary factors are the common case
        if self.im.is_zero() {
            if o.im.is_zero() {
                return Qi { re: &self.re * &o.re, im: BigRational::zero() };
            }
            return Qi { re: &self.re * &o.re, im: &self.re * &o.im };
        }
        if o.im.is_zero() {
            return Qi { re: &self.re * &o.re, im: &self.im * &o.re };
        }
        Qi {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn neg(&self) -> Self {
        Qi { re: -&self.re, im: -&self.im }
    }
    fn conj(&self) -> Self {
        Qi { re: self.re.clone(), im: -&self.im }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Qi { re: &self.re / &n, im: -(&self.im / &n) })
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn modulus(&self) -> f64 {
        rat_to_f64(&self.re).hypot(rat_to_f64(&self.im))
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn mul_i(&self) -> Self {
        Qi { re: -&self.im, im: self.re.clone() }
    }
}

/// Complex double-precision scalar.
#[derive(Clone, Copy, PartialEq)]
pub struct Cf(pub Complex64);

impl fmt::Display for Cf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Cf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for Cf {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Cf(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Cf(Complex64::new(1.0, 0.0))
    }
    fn i() -> Self {
        Cf(Complex64::new(0.0, 1.0))
    }
    fn from_i64(v: i64) -> Self {
        Cf(Complex64::new(v as f64, 0.0))
    }
    fn ratio(p: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Cf(Complex64::new(p as f64 / d as f64, 0.0))
    }
    fn from_qi(v: &Qi) -> Self {
        Cf(v.to_complex())
    }

    fn add(&self, o: &Self) -> Self {
        Cf(self.0 + o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        Cf(self.0 - o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Cf(self.0 * o.0)
    }
    fn neg(&self) -> Self {
        Cf(-self.0)
    }
    fn conj(&self) -> Self {
        Cf(self.0.conj())
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Cf(self.0.inv()))
        }
    }
    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }
    fn modulus(&self) -> f64 {
        self.0.norm()
    }
    fn to_complex(&self) -> Complex64 {
        self.0
    }
}
