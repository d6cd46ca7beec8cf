//! JSON form of a polynomial: an array of terms
//! `{"exps": {"x": 4, ...}, "num": "1", "den": "2"}` with the
//! arbitrary-precision integers carried as decimal strings and zero
//! exponents omitted. Terms are emitted in decreasing monomial order.

use super::{Integer, Monomial, Poly, Rational, VarId};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    exps: BTreeMap<String, u16>,
    num: String,
    den: String,
}

/// Serde-friendly wrapper used wherever a [`Poly`] crosses the JSON surface.
#[derive(Clone, Debug)]
pub struct PolyRepr(pub Poly);

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms_desc()
            .map(|(m, c)| TermRepr {
                exps: m
                    .vars()
                    .map(|(v, e)| (v.name().to_string(), e))
                    .collect(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Poly, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut poly = Poly::zero();
        for t in terms {
            let mut m = Monomial::one();
            for (name, e) in &t.exps {
                let v = VarId::from_name(name)
                    .ok_or_else(|| D::Error::custom(format!("unknown symbol `{name}`")))?;
                m = m.with_exp(v, *e);
            }
            let num: Integer = t
                .num
                .parse()
                .map_err(|_| D::Error::custom(format!("bad integer `{}`", t.num)))?;
            let den: Integer = t
                .den
                .parse()
                .map_err(|_| D::Error::custom(format!("bad integer `{}`", t.den)))?;
            if den == Integer::from(0) {
                return Err(D::Error::custom("zero denominator"));
            }
            poly.add_term(m, Rational::new(num, den));
        }
        Ok(poly)
    }
}

impl Serialize for VarId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for VarId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<VarId, D::Error> {
        let name = String::deserialize(deserializer)?;
        VarId::from_name(&name).ok_or_else(|| D::Error::custom(format!("unknown symbol `{name}`")))
    }
}

/// `#[serde(with = "rational_string")]` — rationals as `"p/q"` strings.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        crate::expr::parse_rational(&text).map_err(D::Error::custom)
    }

    pub fn to_string(r: &Rational) -> String {
        use num_traits::One;
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
}

/// `#[serde(with = "rational_vec_string")]` — vectors of rationals as
/// `"p/q"` strings.
pub mod rational_vec_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(rational_string::to_string).collect();
        strings.serialize(s)
    }

    #[allow(dead_code)]
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|t| crate::expr::parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}

impl Serialize for PolyRepr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolyRepr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<PolyRepr, D::Error> {
        Poly::deserialize(deserializer).map(PolyRepr)
    }
}
