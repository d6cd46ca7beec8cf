//! Sparse exact-rational multivariate polynomials in the state variables
//! `x, y, z` and the parameter symbols `a, b, c, d, m, alpha`.
//!
//! Coefficients are arbitrary-precision rationals, always in lowest terms;
//! no zero coefficient and no zero exponent is ever stored, so equality is
//! structural equality of canonical forms. The monomial order is
//! lexicographic on the fixed symbol order `x > y > z > a > b > c > d > m
//! > alpha`; printing follows that order, so output is deterministic and
//! round-trips through [`Poly::parse`].

pub mod json;
mod parse;
mod print;

pub use json::PolyRepr;
pub use parse::{parse_rational, ParseError};

use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision rational number, always normalized in lowest terms
/// with a positive denominator.
pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;

/// `n/d` as a [`Rational`]; panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

/// `n` as a [`Rational`].
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

pub const NUM_VARS: usize = 9;

/// The nine symbols of the toolkit. `x, y, z` are state variables; the rest
/// are parameters (they contribute nothing to state degree or weight).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    X,
    Y,
    Z,
    A,
    B,
    C,
    D,
    M,
    Alpha,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarKind {
    State,
    Parameter,
}

impl VarId {
    pub const ALL: [VarId; NUM_VARS] = [
        VarId::X,
        VarId::Y,
        VarId::Z,
        VarId::A,
        VarId::B,
        VarId::C,
        VarId::D,
        VarId::M,
        VarId::Alpha,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            VarId::X => "x",
            VarId::Y => "y",
            VarId::Z => "z",
            VarId::A => "a",
            VarId::B => "b",
            VarId::C => "c",
            VarId::D => "d",
            VarId::M => "m",
            VarId::Alpha => "alpha",
        }
    }

    pub fn from_name(name: &str) -> Option<VarId> {
        VarId::ALL.iter().copied().find(|v| v.name() == name)
    }

    pub fn kind(self) -> VarKind {
        match self {
            VarId::X | VarId::Y | VarId::Z => VarKind::State,
            _ => VarKind::Parameter,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A power product of the nine symbols. The derived `Ord` on the exponent
/// array is exactly the declared lexicographic order with `x` most
/// significant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    exps: [u16; NUM_VARS],
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial::one().with_exp(v, 1)
    }

    pub fn with_exp(mut self, v: VarId, e: u16) -> Monomial {
        self.exps[v.index()] = e;
        self
    }

    pub fn exp(&self, v: VarId) -> u16 {
        self.exps[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e += o;
        }
        Monomial { exps }
    }

    /// Componentwise quotient, or `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = e.checked_sub(*o)?;
        }
        Some(Monomial { exps })
    }

    /// Total degree counting only the state variables `x, y, z`.
    pub fn state_degree(&self) -> u32 {
        self.exps[..3].iter().map(|&e| e as u32).sum()
    }

    /// Total degree over all nine symbols.
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn weight(&self, w: &WeightSpec) -> u32 {
        w.s_x * self.exp(VarId::X) as u32
            + w.s_y * self.exp(VarId::Y) as u32
            + w.s_z * self.exp(VarId::Z) as u32
    }

    pub fn vars(&self) -> impl Iterator<Item = (VarId, u16)> + '_ {
        VarId::ALL
            .iter()
            .copied()
            .filter_map(move |v| match self.exp(v) {
                0 => None,
                e => Some((v, e)),
            })
    }
}

/// Weight exponents for the quasi-homogeneous grading; parameters always
/// weigh 0. The grading used throughout the crate is the default `(1, 2, 2)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WeightSpec {
    pub s_x: u32,
    pub s_y: u32,
    pub s_z: u32,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec { s_x: 1, s_y: 2, s_z: 2 }
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(v: VarId) -> Poly {
        Poly::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms in decreasing monomial order (the canonical printing order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading term in the canonical order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Exact partial derivative with respect to any symbol.
    pub fn partial(&self, v: VarId) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            let e = m.exp(v);
            if e > 0 {
                let dm = m.with_exp(v, e - 1);
                out.add_term(dm, c * Rational::from_integer(Integer::from(e)));
            }
        }
        out
    }

    /// Simultaneous substitution of polynomials for symbols. Substitution is
    /// a ring homomorphism; symbols absent from `assignments` are untouched.
    pub fn substitute(&self, assignments: &BTreeMap<VarId, Poly>) -> Poly {
        // Cache powers per substituted variable.
        let mut pow_cache: BTreeMap<(VarId, u16), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            let mut term = Poly::constant(c.clone());
            let mut plain = Monomial::one();
            for (v, e) in m.vars() {
                if let Some(sub) = assignments.get(&v) {
                    let p = pow_cache
                        .entry((v, e))
                        .or_insert_with(|| sub.pow(e as u32))
                        .clone();
                    term = term.mul(&p);
                } else {
                    plain = plain.with_exp(v, e);
                }
            }
            out = out.add(&term.mul_term(&plain, &Rational::one()));
        }
        out
    }

    /// Substitute rational values for a subset of symbols.
    pub fn substitute_values(&self, values: &BTreeMap<VarId, Rational>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            let mut coeff = c.clone();
            let mut rest = Monomial::one();
            for (v, e) in m.vars() {
                if let Some(val) = values.get(&v) {
                    let mut p = Rational::one();
                    for _ in 0..e {
                        p *= val;
                    }
                    coeff *= p;
                } else {
                    rest = rest.with_exp(v, e);
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// Evaluate fully; symbols missing from `values` evaluate as 0.
    pub fn eval(&self, values: &BTreeMap<VarId, Rational>) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in self.terms() {
            let mut term = c.clone();
            let mut dead = false;
            for (v, e) in m.vars() {
                match values.get(&v) {
                    Some(val) if !val.is_zero() => {
                        for _ in 0..e {
                            term *= val;
                        }
                    }
                    _ => {
                        dead = true;
                        break;
                    }
                }
            }
            if !dead {
                acc += term;
            }
        }
        acc
    }

    /// Total degree counting only state variables; 0 for the zero polynomial.
    pub fn state_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.state_degree()).max().unwrap_or(0)
    }

    /// Largest weight of any monomial (0 for the zero polynomial).
    pub fn max_weight(&self, w: &WeightSpec) -> u32 {
        self.terms.keys().map(|m| m.weight(w)).max().unwrap_or(0)
    }

    /// Weight degree of a weight-homogeneous polynomial; `None` when the
    /// terms mix weights. The zero polynomial reports weight 0.
    pub fn weight_degree(&self, w: &WeightSpec) -> Option<u32> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(0),
            Some(m) => m.weight(w),
        };
        it.all(|m| m.weight(w) == first).then_some(first)
    }

    /// Split into weight-homogeneous components, listed in strictly
    /// decreasing weight degree. The components sum back to `self`.
    pub fn weight_components(&self, w: &WeightSpec) -> Vec<(u32, Poly)> {
        let mut buckets: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in self.terms() {
            buckets
                .entry(m.weight(w))
                .or_insert_with(Poly::zero)
                .add_term(*m, c.clone());
        }
        buckets.into_iter().rev().collect()
    }

    /// Highest power of `v` that occurs.
    pub fn degree_in(&self, v: VarId) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// View as a univariate polynomial in `v`: index `i` holds the
    /// coefficient of `v^i`, with `v` stripped out.
    pub fn coeffs_in(&self, v: VarId) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in self.terms() {
            let e = m.exp(v) as usize;
            out[e].add_term(m.with_exp(v, 0), c.clone());
        }
        out
    }

    /// The symbols that actually occur.
    pub fn used_vars(&self) -> Vec<VarId> {
        VarId::ALL
            .iter()
            .copied()
            .filter(|v| self.terms.keys().any(|m| m.exp(*v) > 0))
            .collect()
    }

    /// Exact division: `self / divisor` when the quotient is a polynomial.
    /// Returns `None` as soon as a leading term fails to divide, which for a
    /// (graded) lexicographic order decides exact divisibility.
    pub fn checked_div(&self, divisor: &Poly) -> Option<Poly> {
        let (dm, dc) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.checked_div(dm)?;
            let qc = rc / dc;
            quo.add_term(qm, qc.clone());
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
        }
        Some(quo)
    }

    pub fn parse(text: &str) -> Result<Poly, ParseError> {
        parse::parse_poly(text)
    }
}

impl FromStr for Poly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Poly::parse(s)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::fmt_poly(self, f)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

/// Check the scaling law of the grading directly: replacing
/// `(x, y, z) -> (t x, t^2 y, t^2 z)` must multiply a weight-homogeneous
/// polynomial of weight `d` by `t^d` exactly. Used by tests as the
/// independent definition of weight homogeneity.
pub fn scaling_test(p: &Poly, w: &WeightSpec, t: &Rational) -> Option<u32> {
    let d = p.weight_degree(w)?;
    let mut scaled = Poly::zero();
    for (m, c) in p.terms() {
        let mut factor = Rational::one();
        for _ in 0..m.weight(w) {
            factor *= t;
        }
        scaled.add_term(*m, c * factor);
    }
    let mut td = Rational::one();
    for _ in 0..d {
        td *= t;
    }
    (scaled == p.scale(&td)).then_some(d)
}

#[cfg(test)]
mod tests;
