//! Elements of the differential field and the log-bearing expressions used
//! for antiderivatives.

use super::parse::CalcError;
use super::q2::Q2;
use super::ratfunc::{QPoly2, RatFunc};
use std::fmt;

/// `plain + radical * sqrtQ` with rational-function coordinates; closed
/// under the field operations via `sqrtQ^2 = Q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SqrtQScalar {
    pub plain: RatFunc,
    pub radical: RatFunc,
}

impl SqrtQScalar {
    pub fn zero() -> SqrtQScalar {
        SqrtQScalar { plain: RatFunc::zero(), radical: RatFunc::zero() }
    }

    pub fn one() -> SqrtQScalar {
        SqrtQScalar { plain: RatFunc::one(), radical: RatFunc::zero() }
    }

    pub fn from_plain(plain: RatFunc) -> SqrtQScalar {
        SqrtQScalar { plain, radical: RatFunc::zero() }
    }

    pub fn sqrt_q() -> SqrtQScalar {
        SqrtQScalar { plain: RatFunc::zero(), radical: RatFunc::one() }
    }

    fn q() -> RatFunc {
        RatFunc::from_poly(QPoly2::q_poly())
    }

    pub fn is_zero(&self) -> bool {
        self.plain.is_zero() && self.radical.is_zero()
    }

    pub fn add(&self, o: &SqrtQScalar) -> SqrtQScalar {
        SqrtQScalar {
            plain: self.plain.add(&o.plain),
            radical: self.radical.add(&o.radical),
        }
    }

    pub fn sub(&self, o: &SqrtQScalar) -> SqrtQScalar {
        SqrtQScalar {
            plain: self.plain.sub(&o.plain),
            radical: self.radical.sub(&o.radical),
        }
    }

    pub fn neg(&self) -> SqrtQScalar {
        SqrtQScalar { plain: self.plain.neg(), radical: self.radical.neg() }
    }

    pub fn mul(&self, o: &SqrtQScalar) -> SqrtQScalar {
        // (r + s sqrtQ)(r' + s' sqrtQ) = rr' + ss'Q + (rs' + sr') sqrtQ
        let q = SqrtQScalar::q();
        SqrtQScalar {
            plain: self.plain.mul(&o.plain).add(&self.radical.mul(&o.radical).mul(&q)),
            radical: self.plain.mul(&o.radical).add(&self.radical.mul(&o.plain)),
        }
    }

    /// Inverse via the radical conjugate: `(r - s sqrtQ) / (r^2 - s^2 Q)`.
    pub fn inv(&self) -> SqrtQScalar {
        let q = SqrtQScalar::q();
        let norm = self.plain.mul(&self.plain).sub(&self.radical.mul(&self.radical).mul(&q));
        assert!(!norm.is_zero(), "inverse of zero scalar (Q is not a square)");
        SqrtQScalar {
            plain: self.plain.div(&norm),
            radical: self.radical.neg().div(&norm),
        }
    }

    pub fn scale(&self, c: &Q2) -> SqrtQScalar {
        SqrtQScalar { plain: self.plain.scale(c), radical: self.radical.scale(c) }
    }

    /// Formal derivative: `d(sqrtQ) = u^3 sqrtQ / Q`.
    pub fn d_du(&self) -> SqrtQScalar {
        let u3_over_q = RatFunc::new(
            {
                let mut p = QPoly2::zero();
                p.add_term(3, 0, Q2::one());
                p
            },
            QPoly2::q_poly(),
        );
        SqrtQScalar {
            plain: self.plain.d_du(),
            radical: self.radical.d_du().add(&self.radical.mul(&u3_over_q)),
        }
    }

    pub fn eval_f64(&self, u: f64, w: f64) -> f64 {
        let q = 0.5 * u.powi(4) - 2.0 * w;
        self.plain.eval_f64(u, w) + self.radical.eval_f64(u, w) * q.sqrt()
    }
}

impl fmt::Display for SqrtQScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.plain.is_zero(), self.radical.is_zero()) {
            (true, true) => f.write_str("0"),
            (false, true) => write!(f, "{}", self.plain),
            (true, false) => write!(f, "({})*sqrtQ", self.radical),
            (false, false) => write!(f, "{} + ({})*sqrtQ", self.plain, self.radical),
        }
    }
}

/// `scalar + a*A + b*B + c*C`: the span of the primitives over the scalar
/// field. Closed under addition, scalar multiplication, and `d/du`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffElem {
    pub scalar: SqrtQScalar,
    pub a: SqrtQScalar,
    pub b: SqrtQScalar,
    pub c: SqrtQScalar,
}

impl DiffElem {
    pub fn zero() -> DiffElem {
        DiffElem {
            scalar: SqrtQScalar::zero(),
            a: SqrtQScalar::zero(),
            b: SqrtQScalar::zero(),
            c: SqrtQScalar::zero(),
        }
    }

    pub fn from_scalar(scalar: SqrtQScalar) -> DiffElem {
        DiffElem { scalar, ..DiffElem::zero() }
    }

    pub fn primitive_a() -> DiffElem {
        DiffElem { a: SqrtQScalar::one(), ..DiffElem::zero() }
    }

    pub fn primitive_b() -> DiffElem {
        DiffElem { b: SqrtQScalar::one(), ..DiffElem::zero() }
    }

    pub fn primitive_c() -> DiffElem {
        DiffElem { c: SqrtQScalar::one(), ..DiffElem::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// True when the element has no transcendental part.
    pub fn is_scalar(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn add(&self, o: &DiffElem) -> DiffElem {
        DiffElem {
            scalar: self.scalar.add(&o.scalar),
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
            c: self.c.add(&o.c),
        }
    }

    pub fn sub(&self, o: &DiffElem) -> DiffElem {
        DiffElem {
            scalar: self.scalar.sub(&o.scalar),
            a: self.a.sub(&o.a),
            b: self.b.sub(&o.b),
            c: self.c.sub(&o.c),
        }
    }

    pub fn neg(&self) -> DiffElem {
        DiffElem {
            scalar: self.scalar.neg(),
            a: self.a.neg(),
            b: self.b.neg(),
            c: self.c.neg(),
        }
    }

    pub fn scale(&self, s: &SqrtQScalar) -> DiffElem {
        DiffElem {
            scalar: self.scalar.mul(s),
            a: self.a.mul(s),
            b: self.b.mul(s),
            c: self.c.mul(s),
        }
    }

    /// Formal derivative: `A' = sqrtQ/Q`, `B' = u^2 sqrtQ/Q`,
    /// `C' = u sqrtQ/Q` (the 1/sqrtQ kernels written with radical degree
    /// at most one).
    pub fn d_du(&self) -> DiffElem {
        let kernel = |du: u16| {
            let mut p = QPoly2::zero();
            p.add_term(du, 0, Q2::one());
            SqrtQScalar {
                plain: RatFunc::zero(),
                radical: RatFunc::new(p, QPoly2::q_poly()),
            }
        };
        let mut scalar = self.scalar.d_du();
        scalar = scalar.add(&self.a.mul(&kernel(0)));
        scalar = scalar.add(&self.b.mul(&kernel(2)));
        scalar = scalar.add(&self.c.mul(&kernel(1)));
        DiffElem {
            scalar,
            a: self.a.d_du(),
            b: self.b.d_du(),
            c: self.c.d_du(),
        }
    }

    /// Evaluate with supplied primitive values (from quadrature).
    pub fn eval_f64(&self, u: f64, w: f64, abc: (f64, f64, f64)) -> f64 {
        self.scalar.eval_f64(u, w)
            + self.a.eval_f64(u, w) * abc.0
            + self.b.eval_f64(u, w) * abc.1
            + self.c.eval_f64(u, w) * abc.2
    }
}

impl fmt::Display for DiffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.scalar.is_zero() {
            write!(f, "{}", self.scalar)?;
            wrote = true;
        }
        for (coeff, name) in [(&self.a, "A"), (&self.b, "B"), (&self.c, "C")] {
            if !coeff.is_zero() {
                if wrote {
                    f.write_str(" + ")?;
                }
                write!(f, "({coeff})*{name}")?;
                wrote = true;
            }
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A [`DiffElem`] plus logarithmic terms `coeff * ln(arg)`; the form taken
/// by antiderivatives. Only scalar arguments and constant coefficients are
/// meaningful here, which is all the identity suite needs.
#[derive(Clone, Debug)]
pub struct CalcElem {
    pub elem: DiffElem,
    pub logs: Vec<(SqrtQScalar, SqrtQScalar)>,
}

impl CalcElem {
    pub fn from_elem(elem: DiffElem) -> CalcElem {
        CalcElem { elem, logs: Vec::new() }
    }

    pub fn from_scalar(s: SqrtQScalar) -> CalcElem {
        CalcElem::from_elem(DiffElem::from_scalar(s))
    }

    pub fn ln(arg: SqrtQScalar) -> CalcElem {
        CalcElem { elem: DiffElem::zero(), logs: vec![(SqrtQScalar::one(), arg)] }
    }

    pub fn add(&self, o: &CalcElem) -> CalcElem {
        let mut logs = self.logs.clone();
        logs.extend(o.logs.iter().cloned());
        CalcElem { elem: self.elem.add(&o.elem), logs }
    }

    pub fn sub(&self, o: &CalcElem) -> CalcElem {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CalcElem {
        CalcElem {
            elem: self.elem.neg(),
            logs: self.logs.iter().map(|(c, g)| (c.neg(), g.clone())).collect(),
        }
    }

    /// Extract the pure scalar value, if that is what this is.
    pub fn as_scalar(&self) -> Option<&SqrtQScalar> {
        (self.logs.is_empty() && self.elem.is_scalar()).then_some(&self.elem.scalar)
    }

    pub fn mul(&self, o: &CalcElem) -> Result<CalcElem, CalcError> {
        if let Some(s) = o.as_scalar() {
            return Ok(self.scale(s));
        }
        if let Some(s) = self.as_scalar() {
            return Ok(o.scale(s));
        }
        Err(CalcError::NonScalarProduct)
    }

    pub fn div(&self, o: &CalcElem) -> Result<CalcElem, CalcError> {
        match o.as_scalar() {
            Some(s) if !s.is_zero() => Ok(self.scale(&s.inv())),
            _ => Err(CalcError::DivisorNotScalar),
        }
    }

    pub fn scale(&self, s: &SqrtQScalar) -> CalcElem {
        CalcElem {
            elem: self.elem.scale(s),
            logs: self.logs.iter().map(|(c, g)| (c.mul(s), g.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<CalcElem, CalcError> {
        let mut out = CalcElem::from_scalar(SqrtQScalar::one());
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn eval_f64(&self, u: f64, w: f64, abc: (f64, f64, f64)) -> f64 {
        let mut v = self.elem.eval_f64(u, w, abc);
        for (c, g) in &self.logs {
            v += c.eval_f64(u, w) * g.eval_f64(u, w).ln();
        }
        v
    }
}
