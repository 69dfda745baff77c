//! Exact coefficient ring for symbols and ladder expressions.
//!
//! A [`Scalar`] is a Laurent polynomial in the formal generator
//! `t = sqrt(hbar / 2)` with complex-rational coefficients. Position and
//! momentum are `x = t (alpha + conj(alpha))` and `p = -i t (alpha - conj(alpha))`,
//! so every conversion between `x, p` and `alpha` stays inside this ring.
//! `hbar` itself is `2 t^2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, BigRational, Complex, One, ToPrimitive, Zero};

/// Complex number with exact rational real and imaginary parts.
pub type ComplexRational = Complex<BigRational>;

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn complex_rational(re: BigRational, im: BigRational) -> ComplexRational {
    Complex::new(re, im)
}

fn conj_rational(c: &ComplexRational) -> ComplexRational {
    Complex::new(c.re.clone(), -c.im.clone())
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Very large numerator/denominator pairs: divide in floating point.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Element of `Q(i)[t, 1/t]` with `t = sqrt(hbar/2)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    // exponent of t -> coefficient, never storing zeros
    terms: BTreeMap<i32, ComplexRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Scalar::from_rational(rational(numer, denom))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::monomial(0, Complex::new(q, BigRational::zero()))
    }

    pub fn from_complex(c: ComplexRational) -> Self {
        Scalar::monomial(0, c)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::monomial(0, Complex::new(BigRational::zero(), BigRational::one()))
    }

    /// `t^exponent` where `t = sqrt(hbar/2)`.
    pub fn t_pow(exponent: i32) -> Self {
        Scalar::monomial(exponent, Complex::new(BigRational::one(), BigRational::zero()))
    }

    /// `hbar = 2 t^2`.
    pub fn hbar() -> Self {
        Scalar::monomial(2, Complex::new(rational(2, 1), BigRational::zero()))
    }

    /// `hbar^k` for any integer `k`.
    pub fn hbar_pow(k: i32) -> Self {
        let two = rational(2, 1);
        let factor = if k >= 0 {
            num::pow(two, k as usize)
        } else {
            num::pow(two, (-k) as usize).recip()
        };
        Scalar::monomial(2 * k, Complex::new(factor, BigRational::zero()))
    }

    pub fn monomial(exponent: i32, coefficient: ComplexRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(exponent, coefficient);
        }
        Scalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    /// Iterates `(t exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &ComplexRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Returns the single `(exponent, coefficient)` pair if this is a monomial in `t`.
    pub fn as_monomial(&self) -> Option<(i32, &ComplexRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    /// Rational constant, if the scalar is a real rational without `t` dependence.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        match self.as_monomial() {
            Some((0, c)) if c.im.is_zero() => Some(c.re.clone()),
            _ => None,
        }
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn conj(&self) -> Self {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, conj_rational(c)))
                .collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, Complex::new(&c.re * q, &c.im * q)))
                .collect(),
        }
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Scalar {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Multiplicative inverse, defined only for monomials in `t`.
    pub fn inverse(&self) -> Option<Self> {
        let (e, c) = self.as_monomial()?;
        let norm = &c.re * &c.re + &c.im * &c.im;
        let inv = Complex::new(&c.re / &norm, -&c.im / &norm);
        Some(Scalar::monomial(-e, inv))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes a numeric `hbar > 0`.
    pub fn eval(&self, hbar: f64) -> Complex64 {
        let t = (hbar / 2.0).sqrt();
        self.terms
            .iter()
            .map(|(e, c)| {
                Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im)) * t.powi(*e)
            })
            .sum()
    }

    /// Whether every coefficient is real (imaginary parts vanish).
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    fn add_term(&mut self, exponent: i32, coefficient: &ComplexRational) {
        if coefficient.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(coefficient.clone());
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + coefficient;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("({} + {}i)t^{}", c.re, c.im, e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c);
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_is_twice_t_squared() {
        let t = Scalar::t_pow(1);
        assert_eq!(&(&t * &t) * &Scalar::from_int(2), Scalar::hbar());
        assert!((Scalar::hbar().eval(0.7) - Complex64::new(0.7, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hbar_pow_negative() {
        let inv = Scalar::hbar_pow(-1);
        assert_eq!(&inv * &Scalar::hbar(), Scalar::one());
        assert_eq!(Scalar::hbar().inverse().unwrap(), inv);
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = &Scalar::hbar() + &Scalar::one();
        let b = &a - &Scalar::hbar();
        assert!(b.is_one());
        assert!((&b - &Scalar::one()).is_zero());
    }

    #[test]
    fn conj_of_i() {
        let i = Scalar::i();
        assert_eq!(&i * &i, Scalar::from_int(-1));
        assert_eq!(&i * &i.conj(), Scalar::one());
    }

    #[test]
    fn eval_with_half_powers() {
        // t^3 at hbar = 2 is 1
        assert!((Scalar::t_pow(3).eval(2.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((Scalar::t_pow(1).eval(1.0).re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn non_monomial_has_no_inverse() {
        let s = &Scalar::one() + &Scalar::hbar();
        assert!(s.inverse().is_none());
        assert!(Scalar::zero().inverse().is_none());
    }
}
