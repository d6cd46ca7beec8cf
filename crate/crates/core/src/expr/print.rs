//! Canonical deterministic printing. Terms appear in decreasing monomial
//! order; rational coefficients with a denominator print parenthesised, so
//! the output re-parses to the same polynomial.

use super::{Poly, Rational};
use num_traits::{One, Signed};
use std::fmt;

pub(super) fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (i, (m, c)) in p.terms_desc().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                f.write_str("-")?;
            }
        } else if neg {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        let mag = c.abs();
        if m.is_one() {
            write!(f, "{}", fmt_rat(&mag))?;
        } else {
            if !mag.is_one() {
                write!(f, "{}*", fmt_rat(&mag))?;
            }
            let mut first = true;
            for (v, e) in m.vars() {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
    }
    Ok(())
}

fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}
