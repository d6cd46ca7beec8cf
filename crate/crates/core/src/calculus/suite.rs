//! The identity suite: a machine-readable manifest of reduction identities,
//! each checked by formal differentiation and cross-checked by quadrature.

use super::elem::{CalcElem, DiffElem};
use super::parse::{parse_calc, CalcError};
use super::quad::integrate_adaptive;
use serde::{Deserialize, Serialize};

/// Built-in manifest, auditable entry by entry.
pub const MANIFEST_JSON: &str = include_str!("appendix_manifest.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrand: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antiderivative: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// `d/du` of an antiderivative expression, with the logarithmic terms folded
/// back into the field (`d(c ln g) = c g'/g`, `c` constant).
pub fn d_du_checked(e: &CalcElem) -> Result<DiffElem, CalcError> {
    let mut out = e.elem.d_du();
    for (coeff, arg) in &e.logs {
        if !coeff.d_du().is_zero() {
            return Err(CalcError::NonConstantLogCoefficient);
        }
        let darg = arg.d_du();
        out = out.add(&DiffElem::from_scalar(coeff.mul(&darg.mul(&arg.inv()))));
    }
    Ok(out)
}

/// Formal check: `d/du antiderivative - integrand` normalises to zero.
pub fn check_identity(integrand: &DiffElem, antiderivative: &CalcElem) -> Result<bool, CalcError> {
    Ok(d_du_checked(antiderivative)?.sub(integrand).is_zero())
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericCheck {
    /// Antiderivative difference over the test interval.
    pub antiderivative_delta: f64,
    /// Quadrature of the integrand over the same interval.
    pub quadrature: f64,
    pub rel_err: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IdentityOutcome {
    Passed,
    Failed { residual: String },
    Skipped { reason: String },
    Malformed { error: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    #[serde(flatten)]
    pub outcome: IdentityOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub entries: Vec<IdentityReport>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl AppendixReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
            && self
                .entries
                .iter()
                .all(|e| !matches!(e.outcome, IdentityOutcome::Malformed { .. }))
    }
}

/// Quadrature interval and surface for the numeric cross-check.
const U0: f64 = 2.0;
const U1: f64 = 3.0;
const W: f64 = 1.0;
const QUAD_TOL: f64 = 1e-13;

fn primitives_at(u: f64) -> (f64, f64, f64) {
    let q = |t: f64| (0.5 * t.powi(4) - 2.0 * W).sqrt();
    (
        integrate_adaptive(&|t| 1.0 / q(t), U0, u, QUAD_TOL),
        integrate_adaptive(&|t| t * t / q(t), U0, u, QUAD_TOL),
        integrate_adaptive(&|t| t / q(t), U0, u, QUAD_TOL),
    )
}

fn numeric_check(integrand: &DiffElem, antiderivative: &CalcElem) -> NumericCheck {
    let abc1 = primitives_at(U1);
    let delta = antiderivative.eval_f64(U1, W, abc1)
        - antiderivative.eval_f64(U0, W, (0.0, 0.0, 0.0));
    let quadrature = integrate_adaptive(
        &|u| integrand.eval_f64(u, W, (0.0, 0.0, 0.0)),
        U0,
        U1,
        QUAD_TOL,
    );
    let rel_err = (delta - quadrature).abs() / quadrature.abs().max(1e-30);
    NumericCheck { antiderivative_delta: delta, quadrature, rel_err }
}

fn run_entry(entry: &ManifestEntry) -> IdentityReport {
    if let Some(reason) = &entry.skipped {
        return IdentityReport {
            name: entry.name.clone(),
            outcome: IdentityOutcome::Skipped { reason: reason.clone() },
            numeric: None,
        };
    }
    let (Some(int_text), Some(anti_text)) = (&entry.integrand, &entry.antiderivative) else {
        return IdentityReport {
            name: entry.name.clone(),
            outcome: IdentityOutcome::Malformed {
                error: "entry is neither skipped nor a complete identity".into(),
            },
            numeric: None,
        };
    };
    let parsed = parse_calc(int_text).and_then(|integrand| {
        let integrand = integrand
            .as_scalar()
            .map(|s| DiffElem::from_scalar(s.clone()))
            .or_else(|| integrand.logs.is_empty().then(|| integrand.elem.clone()))
            .filter(|e| e.is_scalar())
            .ok_or(CalcError::NonScalarProduct)?;
        let anti = parse_calc(anti_text)?;
        Ok((integrand, anti))
    });
    match parsed {
        Err(e) => IdentityReport {
            name: entry.name.clone(),
            outcome: IdentityOutcome::Malformed { error: e.to_string() },
            numeric: None,
        },
        Ok((integrand, anti)) => {
            let numeric = Some(numeric_check(&integrand, &anti));
            match d_du_checked(&anti) {
                Err(e) => IdentityReport {
                    name: entry.name.clone(),
                    outcome: IdentityOutcome::Malformed { error: e.to_string() },
                    numeric,
                },
                Ok(derived) => {
                    let residual = derived.sub(&integrand);
                    let outcome = if residual.is_zero() {
                        IdentityOutcome::Passed
                    } else {
                        IdentityOutcome::Failed { residual: residual.to_string() }
                    };
                    IdentityReport { name: entry.name.clone(), outcome, numeric }
                }
            }
        }
    }
}

/// Run the built-in manifest (or a caller-supplied one) identity by
/// identity; entries run in parallel under the `parallel` feature.
pub fn appendix_suite_from(entries: &[ManifestEntry]) -> AppendixReport {
    let reports = crate::par::map(entries, run_entry);
    let passed = reports
        .iter()
        .filter(|r| matches!(r.outcome, IdentityOutcome::Passed))
        .count();
    let failed = reports
        .iter()
        .filter(|r| matches!(r.outcome, IdentityOutcome::Failed { .. }))
        .count();
    let skipped = reports
        .iter()
        .filter(|r| matches!(r.outcome, IdentityOutcome::Skipped { .. }))
        .count();
    AppendixReport { entries: reports, passed, failed, skipped }
}

pub fn appendix_suite() -> AppendixReport {
    let entries: Vec<ManifestEntry> =
        serde_json::from_str(MANIFEST_JSON).expect("built-in manifest is valid JSON");
    appendix_suite_from(&entries)
}
