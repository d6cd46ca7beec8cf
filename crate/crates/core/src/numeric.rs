//! Floating-point dynamical validation: integrate the flow with a classical
//! fixed-step 4th-order scheme and confirm the exponential transport law
//! `f(t) = f(0) exp(int_0^t k ds)` of certified Darboux pairs, exactly the
//! integrated form of `X(f) = k f`.

use crate::calculus::rational_to_f64;
use crate::darboux::ParamPoint;
use crate::expr::{Poly, VarId};
use crate::field::VectorField;
use crate::sample::SplitMix64;
use serde::Serialize;
use std::fmt;

/// Phase-space point with its time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct State {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl State {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> State {
        State { t, x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// A state polynomial compiled for fast evaluation: coefficients converted
/// to doubles once (exactly where representable), then evaluated by nested
/// Horner sweeps in `x`, `y`, `z`. At the degrees used here (<= 8 per
/// variable) the rounding budget stays within ~1e3 ulp of the exact value.
#[derive(Clone, Debug)]
pub struct PolyEval {
    // coeffs[i][j][k] of x^i y^j z^k, densely per x-slice.
    coeffs: Vec<Vec<Vec<f64>>>,
}

impl PolyEval {
    /// Compile a state-only polynomial. Panics on parameter symbols; callers
    /// substitute the parameter point first.
    pub fn compile(p: &Poly) -> PolyEval {
        let dx = p.degree_in(VarId::X) as usize;
        let dy = p.degree_in(VarId::Y) as usize;
        let dz = p.degree_in(VarId::Z) as usize;
        let mut coeffs = vec![vec![vec![0.0; dz + 1]; dy + 1]; dx + 1];
        for (m, c) in p.terms() {
            for v in VarId::ALL {
                if v.kind() == crate::expr::VarKind::Parameter {
                    assert_eq!(m.exp(v), 0, "parameter `{v}` must be substituted first");
                }
            }
            coeffs[m.exp(VarId::X) as usize][m.exp(VarId::Y) as usize]
                [m.exp(VarId::Z) as usize] += rational_to_f64(c);
        }
        PolyEval { coeffs }
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        let mut acc_x = 0.0;
        for slice_x in self.coeffs.iter().rev() {
            let mut acc_y = 0.0;
            for slice_y in slice_x.iter().rev() {
                let mut acc_z = 0.0;
                for &c in slice_y.iter().rev() {
                    acc_z = acc_z * z + c;
                }
                acc_y = acc_y * y + acc_z;
            }
            acc_x = acc_x * x + acc_y;
        }
        acc_x
    }
}

/// Right-hand side of the flow plus the cofactor integrand, compiled.
#[derive(Clone, Debug)]
pub struct CompiledField {
    p: PolyEval,
    q: PolyEval,
    r: PolyEval,
    k: Option<PolyEval>,
}

impl CompiledField {
    pub fn new(v: &VectorField) -> CompiledField {
        CompiledField {
            p: PolyEval::compile(&v.p),
            q: PolyEval::compile(&v.q),
            r: PolyEval::compile(&v.r),
            k: None,
        }
    }

    pub fn with_cofactor(v: &VectorField, k: &Poly) -> CompiledField {
        let mut c = CompiledField::new(v);
        c.k = Some(PolyEval::compile(k));
        c
    }

    /// `(x', y', z', I')` where `I` accumulates the cofactor integral.
    fn rhs(&self, s: [f64; 4]) -> [f64; 4] {
        let [x, y, z, _] = s;
        [
            self.p.eval(x, y, z),
            self.q.eval(x, y, z),
            self.r.eval(x, y, z),
            self.k.as_ref().map_or(0.0, |k| k.eval(x, y, z)),
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub states: Vec<State>,
    /// Accumulated cofactor integral at each state (zeros when no cofactor
    /// was attached).
    pub cofactor_integral: Vec<f64>,
    /// True when integration stopped early on a non-finite state.
    pub diverged: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub enum NumericError {
    BadStep { step: f64 },
    BadHorizon { t_end: f64 },
    NoRoot,
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::BadStep { step } => write!(f, "step must be positive, got {step}"),
            NumericError::BadHorizon { t_end } => write!(f, "horizon must be positive, got {t_end}"),
            NumericError::NoRoot => write!(f, "no real root found in the box"),
        }
    }
}

impl std::error::Error for NumericError {}

/// Classical fixed-step 4th-order integration with dense output at every
/// step. Deterministic given its inputs; aborts (with the partial
/// trajectory flagged) if the state leaves the finite range.
pub fn integrate(
    field: &CompiledField,
    s0: State,
    t_end: f64,
    step: f64,
) -> Result<Trajectory, NumericError> {
    if step.is_nan() || step <= 0.0 {
        return Err(NumericError::BadStep { step });
    }
    if t_end.is_nan() || t_end <= 0.0 {
        return Err(NumericError::BadHorizon { t_end });
    }
    let nsteps = (t_end / step).round() as usize;
    let mut states = Vec::with_capacity(nsteps + 1);
    let mut integrals = Vec::with_capacity(nsteps + 1);
    let mut s = [s0.x, s0.y, s0.z, 0.0];
    let mut t = s0.t;
    states.push(s0);
    integrals.push(0.0);
    for _ in 0..nsteps {
        let k1 = field.rhs(s);
        let k2 = field.rhs(add(s, scale(k1, step / 2.0)));
        let k3 = field.rhs(add(s, scale(k2, step / 2.0)));
        let k4 = field.rhs(add(s, scale(k3, step)));
        for i in 0..4 {
            s[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += step;
        let state = State::new(t, s[0], s[1], s[2]);
        if !state.is_finite() || !s[3].is_finite() {
            return Ok(Trajectory { states, cofactor_integral: integrals, diverged: true });
        }
        states.push(state);
        integrals.push(s[3]);
    }
    Ok(Trajectory { states, cofactor_integral: integrals, diverged: false })
}

fn add(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn scale(a: [f64; 4], c: f64) -> [f64; 4] {
    [a[0] * c, a[1] * c, a[2] * c, a[3] * c]
}

/// One sampled comparison between the observed value of `f` and the
/// transport prediction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DriftSample {
    pub t: f64,
    pub value: f64,
    pub predicted: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DriftReport {
    pub max_relative_error: f64,
    pub samples: Vec<DriftSample>,
    pub diverged: bool,
}

/// Compare `f` along the trajectory from `s0` with the prediction
/// `f(s0) exp(int_0^t k)`, the integral accumulated by the same scheme.
/// The relative error is measured against `max(|f|, 1e-300)`.
pub fn darboux_drift(
    v: &VectorField,
    f: &Poly,
    k: &Poly,
    s0: State,
    t_end: f64,
    step: f64,
) -> Result<DriftReport, NumericError> {
    let field = CompiledField::with_cofactor(v, k);
    let feval = PolyEval::compile(f);
    let traj = integrate(&field, s0, t_end, step)?;
    let f0 = feval.eval(s0.x, s0.y, s0.z);
    let mut max_rel = 0.0f64;
    let mut samples = Vec::new();
    let n = traj.states.len();
    for (i, (state, integral)) in traj.states.iter().zip(&traj.cofactor_integral).enumerate() {
        let value = feval.eval(state.x, state.y, state.z);
        let predicted = f0 * integral.exp();
        let rel = (value - predicted).abs() / value.abs().max(1e-300);
        max_rel = max_rel.max(rel);
        // Keep a small, deterministic set of samples for reporting.
        if i == 0 || i == n - 1 || i % (n / 8).max(1) == 0 {
            samples.push(DriftSample { t: state.t, value, predicted });
        }
    }
    Ok(DriftReport { max_relative_error: max_rel, samples, diverged: traj.diverged })
}

/// Find a point on the surface `{f = 0}` by sampling `(x, y)` in the box
/// and solving for `z` by scanning plus bisection; the returned state
/// satisfies `|f| <= 1e-12`.
pub fn surface_sample(
    f: &Poly,
    bounds: ((f64, f64), (f64, f64), (f64, f64)),
    seed: u64,
) -> Result<State, NumericError> {
    let feval = PolyEval::compile(f);
    let mut rng = SplitMix64::new(seed);
    let ((x0, x1), (y0, y1), (z0, z1)) = bounds;
    for _ in 0..200 {
        let x = rng.f64_in(x0, x1);
        let y = rng.f64_in(y0, y1);
        let g = |z: f64| feval.eval(x, y, z);
        // Scan for a sign change.
        let cells = 64;
        let mut prev_z = z0;
        let mut prev_v = g(prev_z);
        for i in 1..=cells {
            let z = z0 + (z1 - z0) * i as f64 / cells as f64;
            let v = g(z);
            if prev_v == 0.0 {
                return Ok(State::new(0.0, x, y, prev_z));
            }
            if prev_v * v < 0.0 {
                // Bisection to machine precision.
                let (mut lo, mut hi, mut flo) = (prev_z, z, prev_v);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = g(mid);
                    if fm == 0.0 || (hi - lo) < f64::EPSILON * mid.abs().max(1.0) {
                        break;
                    }
                    if flo * fm < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                let z = 0.5 * (lo + hi);
                if g(z).abs() <= 1e-12 {
                    return Ok(State::new(0.0, x, y, z));
                }
            }
            prev_z = z;
            prev_v = v;
        }
    }
    Err(NumericError::NoRoot)
}

/// Drift reports from several random starts in `[-1, 1]^3`, skipping starts
/// where `|f|` is too small for a meaningful relative comparison. Runs in
/// parallel under the `parallel` feature.
pub fn drift_multi(
    v: &VectorField,
    f: &Poly,
    k: &Poly,
    n_starts: usize,
    seed: u64,
    t_end: f64,
    step: f64,
) -> Result<Vec<DriftReport>, NumericError> {
    let feval = PolyEval::compile(f);
    let mut rng = SplitMix64::new(seed);
    let mut starts = Vec::with_capacity(n_starts);
    while starts.len() < n_starts {
        let s = State::new(
            0.0,
            rng.f64_in(-1.0, 1.0),
            rng.f64_in(-1.0, 1.0),
            rng.f64_in(-1.0, 1.0),
        );
        if feval.eval(s.x, s.y, s.z).abs() >= 1e-3 {
            starts.push(s);
        }
    }
    let reports = crate::par::map(&starts, |s0| darboux_drift(v, f, k, *s0, t_end, step));
    reports.into_iter().collect()
}

/// CSV rows `t,x,y,z,f,predicted` for a drift run.
pub fn drift_csv(v: &VectorField, f: &Poly, k: &Poly, s0: State, t_end: f64, step: f64)
    -> Result<String, NumericError>
{
    let field = CompiledField::with_cofactor(v, k);
    let feval = PolyEval::compile(f);
    let traj = integrate(&field, s0, t_end, step)?;
    let f0 = feval.eval(s0.x, s0.y, s0.z);
    let mut out = String::from("t,x,y,z,f,predicted\n");
    for (state, integral) in traj.states.iter().zip(&traj.cofactor_integral) {
        let value = feval.eval(state.x, state.y, state.z);
        let predicted = f0 * integral.exp();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            state.t, state.x, state.y, state.z, value, predicted
        ));
    }
    Ok(out)
}

/// Quadrature-based reference for a cofactor integral along a trajectory,
/// used in tests as an independent check of the accumulated integral.
pub fn reference_exponent(traj: &Trajectory, k: &PolyEval) -> f64 {
    // Trapezoid over the dense output; only used as a sanity scale.
    let mut acc = 0.0;
    for pair in traj.states.windows(2) {
        let [a, b] = pair else { unreachable!() };
        let ka = k.eval(a.x, a.y, a.z);
        let kb = k.eval(b.x, b.y, b.z);
        acc += 0.5 * (ka + kb) * (b.t - a.t);
    }
    acc
}

/// Evaluate a state polynomial at an f64 point (used by tests and the CLI).
pub fn eval_poly(f: &Poly, x: f64, y: f64, z: f64) -> f64 {
    PolyEval::compile(f).eval(x, y, z)
}

/// Convenience: the FitzHugh-Nagumo field compiled at a parameter point.
pub fn compiled_fn_field(p: &ParamPoint) -> CompiledField {
    CompiledField::new(&p.fn_field())
}

/// Check the integrator's convergence order on a trajectory: halving the
/// step should cut the drift error by roughly 2^4.
pub fn order_ratio(v: &VectorField, f: &Poly, k: &Poly, s0: State, t_end: f64, step: f64)
    -> Result<f64, NumericError>
{
    let coarse = darboux_drift(v, f, k, s0, t_end, step)?;
    let fine = darboux_drift(v, f, k, s0, t_end, step / 2.0)?;
    Ok(coarse.max_relative_error / fine.max_relative_error.max(1e-300))
}
