//! Bivariate polynomials in `(u, w)` over `Q(sqrt2)` and their field of
//! fractions. Fractions are kept only lightly reduced (leading-coefficient
//! normalisation plus common-monomial cancellation); equality is the
//! semantic cross-multiplication test, which is exact regardless.

use super::q2::Q2;
use crate::expr::Rational;
use std::collections::BTreeMap;
use std::fmt;

/// Sparse polynomial in `u, w` over [`Q2`], keyed by `(deg_u, deg_w)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QPoly2 {
    terms: BTreeMap<(u16, u16), Q2>,
}

impl QPoly2 {
    pub fn zero() -> QPoly2 {
        QPoly2::default()
    }

    pub fn one() -> QPoly2 {
        QPoly2::constant(Q2::one())
    }

    pub fn constant(c: Q2) -> QPoly2 {
        let mut p = QPoly2::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn var_u() -> QPoly2 {
        let mut p = QPoly2::zero();
        p.add_term(1, 0, Q2::one());
        p
    }

    pub fn var_w() -> QPoly2 {
        let mut p = QPoly2::zero();
        p.add_term(0, 1, Q2::one());
        p
    }

    /// The radicand `Q = u^4/2 - 2w`.
    pub fn q_poly() -> QPoly2 {
        let mut p = QPoly2::zero();
        p.add_term(4, 0, Q2::from_rational(Rational::new(1.into(), 2.into())));
        p.add_term(0, 1, Q2::from_rational(Rational::from_integer((-2).into())));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, du: u16, dw: u16, c: Q2) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((du, dw)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, o: &QPoly2) -> QPoly2 {
        let mut out = self.clone();
        for ((du, dw), c) in &o.terms {
            out.add_term(*du, *dw, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &QPoly2) -> QPoly2 {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> QPoly2 {
        QPoly2 {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn mul(&self, o: &QPoly2) -> QPoly2 {
        let mut out = QPoly2::zero();
        for ((a, b), c1) in &self.terms {
            for ((x, y), c2) in &o.terms {
                out.add_term(a + x, b + y, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Q2) -> QPoly2 {
        if c.is_zero() {
            return QPoly2::zero();
        }
        QPoly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect(),
        }
    }

    pub fn partial_u(&self) -> QPoly2 {
        let mut out = QPoly2::zero();
        for ((du, dw), c) in &self.terms {
            if *du > 0 {
                let factor = Q2::from_rational(Rational::from_integer((*du as i64).into()));
                out.add_term(du - 1, *dw, c.mul(&factor));
            }
        }
        out
    }

    fn leading(&self) -> Option<(&(u16, u16), &Q2)> {
        self.terms.iter().next_back()
    }

    fn min_exps(&self) -> (u16, u16) {
        let mut mu = u16::MAX;
        let mut mw = u16::MAX;
        for (du, dw) in self.terms.keys() {
            mu = mu.min(*du);
            mw = mw.min(*dw);
        }
        (mu, mw)
    }

    fn shift_down(&self, su: u16, sw: u16) -> QPoly2 {
        QPoly2 {
            terms: self
                .terms
                .iter()
                .map(|((du, dw), c)| ((du - su, dw - sw), c.clone()))
                .collect(),
        }
    }

    pub fn eval_f64(&self, u: f64, w: f64) -> f64 {
        self.terms
            .iter()
            .map(|((du, dw), c)| c.to_f64() * u.powi(*du as i32) * w.powi(*dw as i32))
            .sum()
    }
}

impl fmt::Display for QPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, ((du, dw), c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if *du > 0 {
                write!(f, "*u^{du}")?;
            }
            if *dw > 0 {
                write!(f, "*w^{dw}")?;
            }
        }
        Ok(())
    }
}

/// Quotient of two [`QPoly2`]; the denominator is nonzero.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: QPoly2,
    den: QPoly2,
}

impl RatFunc {
    pub fn new(num: QPoly2, den: QPoly2) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc { num, den };
        r.normalize();
        r
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(QPoly2::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(QPoly2::one())
    }

    pub fn from_poly(p: QPoly2) -> RatFunc {
        RatFunc { num: p, den: QPoly2::one() }
    }

    pub fn constant(c: Q2) -> RatFunc {
        RatFunc::from_poly(QPoly2::constant(c))
    }

    pub fn num(&self) -> &QPoly2 {
        &self.num
    }

    pub fn den(&self) -> &QPoly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = QPoly2::one();
            return;
        }
        // Cancel common monomial factors.
        let (nu, nw) = self.num.min_exps();
        let (du, dw) = self.den.min_exps();
        let (cu, cw) = (nu.min(du), nw.min(dw));
        if cu > 0 || cw > 0 {
            self.num = self.num.shift_down(cu, cw);
            self.den = self.den.shift_down(cu, cw);
        }
        // Make the denominator's leading coefficient 1.
        let lc = self.den.leading().expect("nonzero").1.clone();
        if lc != Q2::one() {
            let inv = lc.inv();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        // Exact cancellation when the denominator divides the numerator is
        // cheap to detect for the monomial case handled above; beyond that,
        // semantic equality does not need reduced forms.
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Q2) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }

    /// Formal `d/du` by the quotient rule.
    pub fn d_du(&self) -> RatFunc {
        let n = self.num.partial_u().mul(&self.den).sub(&self.num.mul(&self.den.partial_u()));
        RatFunc::new(n, self.den.mul(&self.den))
    }

    pub fn eval_f64(&self, u: f64, w: f64) -> f64 {
        self.num.eval_f64(u, w) / self.den.eval_f64(u, w)
    }
}

/// Semantic equality by cross-multiplication.
impl PartialEq for RatFunc {
    fn eq(&self, other: &RatFunc) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == QPoly2::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    fn q(n: i64, d: i64) -> Q2 {
        Q2::from_rational(rat(n, d))
    }

    #[test]
    fn rational_function_arithmetic() {
        let u = RatFunc::from_poly(QPoly2::var_u());
        let w = RatFunc::from_poly(QPoly2::var_w());
        let r = u.div(&w); // u/w
        let s = r.add(&r); // 2u/w
        assert_eq!(s, u.scale(&q(2, 1)).div(&w));
        assert!(r.sub(&r).is_zero());
        assert_eq!(r.mul(&r.inv()), RatFunc::one());
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/du (u^2 / w) = 2u / w
        let u = QPoly2::var_u();
        let w = QPoly2::var_w();
        let r = RatFunc::new(u.mul(&u), w.clone());
        assert_eq!(r.d_du(), RatFunc::new(u.scale(&q(2, 1)), w));
        // d/du of a w-only function vanishes
        let s = RatFunc::new(QPoly2::var_w(), QPoly2::one());
        assert!(s.d_du().is_zero());
    }

    #[test]
    fn semantic_equality_ignores_representation() {
        let u = QPoly2::var_u();
        let w = QPoly2::var_w();
        let a = RatFunc::new(u.mul(&w), w.mul(&w)); // uw / w^2 == u / w
        let b = RatFunc::new(u, w);
        assert_eq!(a, b);
    }
}
