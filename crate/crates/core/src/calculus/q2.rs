//! The quadratic extension Q(sqrt2), just large enough for the shifted
//! inverse identities.

use crate::expr::Rational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// `re + rad * sqrt2` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Q2 {
    pub re: Rational,
    pub rad: Rational,
}

impl Q2 {
    pub fn zero() -> Q2 {
        Q2::default()
    }

    pub fn one() -> Q2 {
        Q2::from_rational(Rational::one())
    }

    pub fn from_rational(re: Rational) -> Q2 {
        Q2 { re, rad: Rational::zero() }
    }

    pub fn sqrt2() -> Q2 {
        Q2 { re: Rational::zero(), rad: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.rad.is_zero()
    }

    pub fn add(&self, o: &Q2) -> Q2 {
        Q2 { re: &self.re + &o.re, rad: &self.rad + &o.rad }
    }

    pub fn sub(&self, o: &Q2) -> Q2 {
        Q2 { re: &self.re - &o.re, rad: &self.rad - &o.rad }
    }

    pub fn neg(&self) -> Q2 {
        Q2 { re: -self.re.clone(), rad: -self.rad.clone() }
    }

    pub fn mul(&self, o: &Q2) -> Q2 {
        // (p + q s)(r + t s) = pr + 2qt + (pt + qr) s, s^2 = 2.
        Q2 {
            re: &self.re * &o.re + &self.rad * &o.rad * Rational::from_integer(2.into()),
            rad: &self.re * &o.rad + &self.rad * &o.re,
        }
    }

    /// Multiplicative inverse via the conjugate; `self` must be nonzero
    /// (the norm `p^2 - 2 q^2` never vanishes for nonzero rationals).
    pub fn inv(&self) -> Q2 {
        let norm = &self.re * &self.re
            - &self.rad * &self.rad * Rational::from_integer(2.into());
        assert!(!norm.is_zero(), "inverse of zero in Q(sqrt2)");
        Q2 { re: &self.re / &norm, rad: -(&self.rad / &norm) }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.re) + rational_to_f64(&self.rad) * std::f64::consts::SQRT_2
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for Q2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rad.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*sqrt2", self.rad);
        }
        if self.rad.is_negative() {
            write!(f, "{} - {}*sqrt2", self.re, -self.rad.clone())
        } else {
            write!(f, "{} + {}*sqrt2", self.re, self.rad)
        }
    }
}
