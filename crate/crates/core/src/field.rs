//! Vector fields, the Lie derivative, the graded operator `L`, and the
//! alpha-scaling conjugation linking the FitzHugh-Nagumo field, its
//! assistant deformation, and the scaled family.

use crate::expr::{rat, rat_int, Monomial, Poly, Rational, VarId, WeightSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A polynomial vector field `x' = P, y' = Q, z' = R`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct VectorField {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
    #[serde(rename = "label")]
    pub label: String,
}

impl VectorField {
    pub fn new(p: Poly, q: Poly, r: Poly, label: impl Into<String>) -> VectorField {
        VectorField { p, q, r, label: label.into() }
    }

    /// Apply the field as a derivation: `P f_x + Q f_y + R f_z`.
    pub fn lie_derivative(&self, f: &Poly) -> Poly {
        let fx = f.partial(VarId::X);
        let fy = f.partial(VarId::Y);
        let fz = f.partial(VarId::Z);
        self.p.mul(&fx).add(&self.q.mul(&fy)).add(&self.r.mul(&fz))
    }

    /// Substitute polynomials for symbols in every component.
    pub fn substitute(&self, assignments: &BTreeMap<VarId, Poly>) -> VectorField {
        VectorField {
            p: self.p.substitute(assignments),
            q: self.q.substitute(assignments),
            r: self.r.substitute(assignments),
            label: self.label.clone(),
        }
    }

    /// Substitute rational values for parameter symbols.
    pub fn substitute_values(&self, values: &BTreeMap<VarId, Rational>) -> VectorField {
        VectorField {
            p: self.p.substitute_values(values),
            q: self.q.substitute_values(values),
            r: self.r.substitute_values(values),
            label: self.label.clone(),
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.label)?;
        writeln!(f, "  x' = {}", self.p)?;
        writeln!(f, "  y' = {}", self.q)?;
        write!(f, "  z' = {}", self.r)
    }
}

/// The FitzHugh-Nagumo travelling-wave field with symbolic parameters:
/// `x' = z`, `y' = b(x - dy)`, `z' = x(x-1)(x-a) + y + cz`.
pub fn fn_system() -> VectorField {
    let x = Poly::var(VarId::X);
    let y = Poly::var(VarId::Y);
    let z = Poly::var(VarId::Z);
    let a = Poly::var(VarId::A);
    let b = Poly::var(VarId::B);
    let c = Poly::var(VarId::C);
    let d = Poly::var(VarId::D);
    let q = b.mul(&x.sub(&d.mul(&y)));
    let r = x
        .mul(&x.sub(&Poly::one()))
        .mul(&x.sub(&a))
        .add(&y)
        .add(&c.mul(&z));
    VectorField::new(z, q, r, "fitzhugh-nagumo")
}

/// The assistant field: FitzHugh-Nagumo with the extra term `m x z` in the
/// y-component. Setting `m = 0` recovers [`fn_system`] exactly.
pub fn assistant_system() -> VectorField {
    let mut v = fn_system();
    let mxz = Poly::term(
        Monomial::var(VarId::M)
            .mul(&Monomial::var(VarId::X))
            .mul(&Monomial::var(VarId::Z)),
        rat_int(1),
    );
    v.q = v.q.add(&mxz);
    v.label = "assistant".into();
    v
}

/// The assistant field after the weight change of variables
/// `(X, Y, Z, T) = (alpha x, alpha^2 y, alpha^2 z, alpha^-1 t)`, with the
/// scaled states written as the ordinary symbols `x, y, z`:
///
/// ```text
/// x' = z
/// y' = -alpha bd y + alpha^2 b x + m x z
/// z' = x^3 - alpha [(a+1) x^2 - y - c z] + alpha^2 a x
/// ```
///
/// Setting `alpha = 1` recovers [`assistant_system`].
pub fn scaled_system() -> VectorField {
    let x = Poly::var(VarId::X);
    let y = Poly::var(VarId::Y);
    let z = Poly::var(VarId::Z);
    let a = Poly::var(VarId::A);
    let b = Poly::var(VarId::B);
    let c = Poly::var(VarId::C);
    let d = Poly::var(VarId::D);
    let m = Poly::var(VarId::M);
    let al = Poly::var(VarId::Alpha);
    let al2 = al.pow(2);

    let q = al
        .mul(&b)
        .mul(&d)
        .mul(&y)
        .neg()
        .add(&al2.mul(&b).mul(&x))
        .add(&m.mul(&x).mul(&z));
    let bracket = a
        .add(&Poly::one())
        .mul(&x.pow(2))
        .sub(&y)
        .sub(&c.mul(&z));
    let r = x.pow(3).sub(&al.mul(&bracket)).add(&al2.mul(&a).mul(&x));
    VectorField::new(
        z,
        q,
        r,
        "scaled by (X, Y, Z, T) = (alpha x, alpha^2 y, alpha^2 z, t / alpha)",
    )
}

/// The graded operator `L = z d/dx + m x z d/dy + x^3 d/dz` (with `m` a
/// symbol). Maps a weight-homogeneous polynomial of weight `w` to weight
/// `w + 1` or zero.
pub fn op_l(f: &Poly) -> Poly {
    let z = Poly::var(VarId::Z);
    let mxz = Poly::term(
        Monomial::var(VarId::M)
            .mul(&Monomial::var(VarId::X))
            .mul(&Monomial::var(VarId::Z)),
        rat_int(1),
    );
    let x3 = Poly::var(VarId::X).pow(3);
    z.mul(&f.partial(VarId::X))
        .add(&mxz.mul(&f.partial(VarId::Y)))
        .add(&x3.mul(&f.partial(VarId::Z)))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaConjugateError {
    pub requested: u32,
    pub max_weight: u32,
}

impl fmt::Display for AlphaConjugateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "embedding weight {} is below the top weight {} of the polynomial",
            self.requested, self.max_weight
        )
    }
}

impl std::error::Error for AlphaConjugateError {}

/// Homogenise `f` in the scaling symbol: each term of weight `w` (under
/// `(1,2,2)`) acquires the factor `alpha^(l - w)`. Requires `l` at least the
/// top weight of `f`; restriction to `alpha = 1` gives back `f`.
pub fn alpha_conjugate(f: &Poly, l: u32) -> Result<Poly, AlphaConjugateError> {
    let w = WeightSpec::default();
    let max_weight = f.max_weight(&w);
    if l < max_weight {
        return Err(AlphaConjugateError { requested: l, max_weight });
    }
    let mut out = Poly::zero();
    for (m, c) in f.terms() {
        let e = l - m.weight(&w);
        let am = m.mul(&Monomial::one().with_exp(VarId::Alpha, e as u16));
        out.add_term(am, c.clone());
    }
    Ok(out)
}

/// [`alpha_conjugate`] at the natural embedding weight (the polynomial's own
/// top weight).
pub fn alpha_conjugate_default(f: &Poly) -> Poly {
    let l = f.max_weight(&WeightSpec::default());
    alpha_conjugate(f, l).expect("top weight always embeds")
}

/// The quartic first integral of the zero-parameter flow,
/// `1/4 x^4 - 1/2 z^2` as a polynomial; weight 4 under `(1,2,2)` and a
/// characteristic invariant of `L`.
pub fn invariant_w() -> Poly {
    let x = Poly::var(VarId::X);
    let z = Poly::var(VarId::Z);
    x.pow(4).scale(&rat(1, 4)).sub(&z.pow(2).scale(&rat(1, 2)))
}

/// The other characteristic invariant of `L`: `y - 1/2 m x^2` (weight 2).
pub fn invariant_v() -> Poly {
    let y = Poly::var(VarId::Y);
    let mx2 = Poly::term(
        Monomial::var(VarId::M).mul(&Monomial::var(VarId::X).mul(&Monomial::var(VarId::X))),
        rat(1, 2),
    );
    y.sub(&mx2)
}
