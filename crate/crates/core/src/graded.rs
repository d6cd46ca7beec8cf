//! The operator `L = z d/dx + m x z d/dy + x^3 d/dz` restricted to
//! weight-homogeneous slices, as exact linear algebra.
//!
//! `L` raises the `(1,2,2)` weight by one, so the Darboux relation for the
//! assistant field splits into a triangular cascade of slice equations
//!
//! ```text
//! (L - k1 x) F_j = k0 F_{j-1} + b d y dF_{j-1}/dy
//!                  + [(a+1) x^2 - y - c z] dF_{j-1}/dz
//!                  - b x dF_{j-2}/dy - a x dF_{j-2}/dz
//! ```
//!
//! for `j = 1 .. l+3` with `F_j = 0` past the total weight `l`. Each stage
//! is solved exactly per slice; right-hand-side components outside the image
//! of the operator are the solvability obstructions (the classical "the
//! coefficient of each transcendental primitive must vanish" conditions),
//! and kernel directions enter as fresh unknowns that later obstructions may
//! fix. Unknowns never multiply each other, so every constraint stays linear.

use crate::darboux::ParamPoint;
use crate::expr::{rat, rat_int, Monomial, Poly, Rational, VarId, VarKind, WeightSpec};
use crate::field::{invariant_w, op_l};
use crate::linalg::{self, LinExpr};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GradedError {
    NotWeightHomogeneous,
    /// Slice computations need fully numeric coefficients.
    ParametricInput(VarId),
    WeightMismatch { expected: u32, found: u32 },
    /// `F0` is not annihilated by `L - k1 x`.
    TopEquationViolated { residual: Poly },
    /// Internal consistency check after resolution failed.
    ResidualNonzero { residual: Poly },
}

impl fmt::Display for GradedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedError::NotWeightHomogeneous => write!(f, "polynomial is not weight homogeneous"),
            GradedError::ParametricInput(v) => {
                write!(f, "parameter `{v}` must be numeric in slice computations")
            }
            GradedError::WeightMismatch { expected, found } => {
                write!(f, "expected weight {expected}, found {found}")
            }
            GradedError::TopEquationViolated { residual } => {
                write!(f, "top component is not in the kernel: residual {residual}")
            }
            GradedError::ResidualNonzero { residual } => {
                write!(f, "resolved chain fails the Darboux relation: residual {residual}")
            }
        }
    }
}

impl std::error::Error for GradedError {}

/// All state monomials `x^i y^j z^k` with `i + 2j + 2k = weight`, in
/// decreasing canonical order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSlice {
    pub weight: u32,
    pub basis: Vec<Monomial>,
}

impl GradedSlice {
    pub fn new(weight: i64) -> GradedSlice {
        if weight < 0 {
            return GradedSlice { weight: 0, basis: Vec::new() };
        }
        let weight = weight as u32;
        let mut basis = Vec::new();
        for j in 0..=(weight / 2) {
            for k in 0..=(weight / 2 - j) {
                let i = weight - 2 * j - 2 * k;
                basis.push(
                    Monomial::one()
                        .with_exp(VarId::X, i as u16)
                        .with_exp(VarId::Y, j as u16)
                        .with_exp(VarId::Z, k as u16),
                );
            }
        }
        basis.sort_unstable_by(|a, b| b.cmp(a));
        GradedSlice { weight, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.basis.iter().position(|b| b == m)
    }

    pub fn to_poly(&self, coords: &[Rational]) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in self.basis.iter().zip(coords) {
            p.add_term(*m, c.clone());
        }
        p
    }

    /// Coordinates of a numeric weight-homogeneous polynomial in this slice.
    pub fn coords_of(&self, p: &Poly) -> Result<Vec<Rational>, GradedError> {
        let mut coords = vec![Rational::zero(); self.dim()];
        for (m, c) in p.terms() {
            for v in VarId::ALL {
                if v.kind() == VarKind::Parameter && m.exp(v) > 0 {
                    return Err(GradedError::ParametricInput(v));
                }
            }
            let idx = self.index_of(m).ok_or(GradedError::WeightMismatch {
                expected: self.weight,
                found: m.weight(&WeightSpec::default()),
            })?;
            coords[idx] = c.clone();
        }
        Ok(coords)
    }
}

/// The operator `L - k1 x` from the weight-`w` slice to the weight-`w+1`
/// slice, with `m` fixed numeric. Column `j` holds the coordinates of the
/// image of the `j`-th source basis monomial.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub source: GradedSlice,
    pub target: GradedSlice,
    /// Row-major: `matrix[r][c]` is the coefficient of target monomial `r`
    /// in the image of source monomial `c`.
    pub matrix: Vec<Vec<Rational>>,
}

impl GradedMap {
    /// `L` itself on the weight-`w` slice.
    pub fn of_l(weight: u32, m: &Rational) -> GradedMap {
        GradedMap::of_l_shifted(weight, m, &Rational::zero())
    }

    /// `L - k1 x` on the weight-`w` slice.
    pub fn of_l_shifted(weight: u32, m: &Rational, k1: &Rational) -> GradedMap {
        let source = GradedSlice::new(weight as i64);
        let target = GradedSlice::new(weight as i64 + 1);
        let columns: Vec<Vec<Rational>> = crate::par::map(&source.basis, |mono| {
            let image = apply_shifted_l(&Poly::term(*mono, Rational::one()), m, k1);
            target
                .coords_of(&image)
                .expect("L is graded: image lands in the next slice")
        });
        let mut matrix = vec![vec![Rational::zero(); source.dim()]; target.dim()];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    matrix[r][c] = v.clone();
                }
            }
        }
        GradedMap { source, target, matrix }
    }

    pub fn apply(&self, coords: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(coords).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// `(L - k1 x)[f]` with numeric `m`.
pub fn apply_shifted_l(f: &Poly, m: &Rational, k1: &Rational) -> Poly {
    let mut vals = BTreeMap::new();
    vals.insert(VarId::M, m.clone());
    let lf = op_l(f).substitute_values(&vals);
    if k1.is_zero() {
        lf
    } else {
        lf.sub(&f.mul_term(&Monomial::var(VarId::X), k1))
    }
}

/// Exact basis of `{F weight-homogeneous of the given weight : L F = k1 x F}`.
pub fn kernel_of_l_shifted(weight: u32, m: &Rational, k1: &Rational) -> Vec<Poly> {
    let map = GradedMap::of_l_shifted(weight, m, k1);
    linalg::nullspace(&map.matrix, map.source.dim())
        .into_iter()
        .map(|v| map.source.to_poly(&v))
        .collect()
}

/// Exact basis of the kernel of `L` on the weight-`w` slice. The kernel is
/// spanned by the monomials `v^i w^j` in the characteristic invariants
/// `v = y - m x^2 / 2`, `w = x^4/4 - z^2/2` with `2i + 4j = w`.
pub fn kernel_of_l(weight: u32, m: &Rational) -> Vec<Poly> {
    kernel_of_l_shifted(weight, m, &Rational::zero())
}

/// The predicted kernel basis: products `v^i w^j` of the characteristic
/// invariants with `2i + 4j = weight`.
pub fn vw_monomials(weight: u32, m: &Rational) -> Vec<Poly> {
    let v = characteristic_v(m);
    let w = invariant_w();
    let mut out = Vec::new();
    for j in 0..=(weight / 4) {
        let rem = weight - 4 * j;
        if rem.is_multiple_of(2) {
            out.push(v.pow(rem / 2).mul(&w.pow(j)));
        }
    }
    out
}

/// `v = y - (m/2) x^2` at numeric `m`.
pub fn characteristic_v(m: &Rational) -> Poly {
    let y = Poly::var(VarId::Y);
    let x2 = Poly::var(VarId::X).pow(2);
    y.sub(&x2.scale(&(m * rat(1, 2))))
}

/// Ansatz parity for the top weight component.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Odd,
    Even,
}

/// Basis of the top-component ansatz family: `v^(2i-1) w^(n-i)` for
/// `i = 1..n` (odd, weight `4n-2`) or `v^(2i) w^(n-i)` for `i = 0..n`
/// (even, weight `4n`). Every member is annihilated by `L`.
pub fn top_kernel_ansatz(n: u32, parity: Parity, m: &Rational) -> Vec<Poly> {
    let v = characteristic_v(m);
    let w = invariant_w();
    match parity {
        Parity::Odd => (1..=n)
            .map(|i| v.pow(2 * i - 1).mul(&w.pow(n - i)))
            .collect(),
        Parity::Even => (0..=n)
            .map(|i| v.pow(2 * i).mul(&w.pow(n - i)))
            .collect(),
    }
}

/// A solvability obstruction: the right-hand side has a nonzero component
/// in the cokernel of the slice operator. `functionals` are the canonical
/// left-null-space rows of the operator matrix (one "transcendental
/// primitive coefficient" each) and `coords` their values on the
/// right-hand side.
#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    #[serde(with = "crate::expr::json::rational_vec_string")]
    pub coords: Vec<Rational>,
    #[serde(skip)]
    pub functionals: Vec<Vec<Rational>>,
}

impl Obstruction {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Outcome of solving `(L - k1 x) F = g` on one slice.
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Solved {
        /// Particular solution supported on pivot coordinates.
        particular: Poly,
        /// Basis of the kernel: the freedom left in the solution.
        kernel: Vec<Poly>,
    },
    Obstructed(Obstruction),
}

/// Solve `(L - k1 x) F = g` for `F` in the slice of the given weight
/// (`g` must be weight homogeneous of weight `source_weight + 1`).
pub fn solve_l_at(
    source_weight: i64,
    g: &Poly,
    m: &Rational,
    k1: &Rational,
) -> Result<SolveOutcome, GradedError> {
    if g.weight_degree(&WeightSpec::default()).is_none() {
        return Err(GradedError::NotWeightHomogeneous);
    }
    let target = GradedSlice::new(source_weight + 1);
    let rhs = target.coords_of(g)?;
    if source_weight < 0 {
        // Empty source: solvable only when g = 0.
        if g.is_zero() {
            return Ok(SolveOutcome::Solved { particular: Poly::zero(), kernel: Vec::new() });
        }
        let functionals: Vec<Vec<Rational>> = (0..target.dim())
            .map(|i| {
                let mut e = vec![Rational::zero(); target.dim()];
                e[i] = Rational::one();
                e
            })
            .collect();
        return Ok(SolveOutcome::Obstructed(Obstruction { coords: rhs, functionals }));
    }
    let map = GradedMap::of_l_shifted(source_weight as u32, m, k1);
    let rhs_affine: Vec<LinExpr> = rhs.into_iter().map(LinExpr::constant).collect();
    let sol = linalg::solve_affine(&map.matrix, map.source.dim(), &rhs_affine);
    if sol.constraints.is_empty() {
        let coords: Vec<Rational> = sol.particular.iter().map(|e| e.eval_zero()).collect();
        let kernel = linalg::nullspace(&map.matrix, map.source.dim())
            .into_iter()
            .map(|v| map.source.to_poly(&v))
            .collect();
        Ok(SolveOutcome::Solved { particular: map.source.to_poly(&coords), kernel })
    } else {
        let functionals = linalg::left_nullspace(&map.matrix, map.source.dim());
        let g_coords = map.target.coords_of(g)?;
        let coords = functionals
            .iter()
            .map(|f| f.iter().zip(&g_coords).map(|(a, b)| a * b).sum())
            .collect();
        Ok(SolveOutcome::Obstructed(Obstruction { coords, functionals }))
    }
}

/// [`solve_l_at`] with the source weight inferred from a nonzero `g`.
pub fn solve_l(g: &Poly, m: &Rational, k1: &Rational) -> Result<SolveOutcome, GradedError> {
    let w = g
        .weight_degree(&WeightSpec::default())
        .ok_or(GradedError::NotWeightHomogeneous)?;
    if g.is_zero() {
        return Err(GradedError::WeightMismatch { expected: 1, found: 0 });
    }
    solve_l_at(w as i64 - 1, g, m, k1)
}

// ---------------------------------------------------------------------------
// Cascade
// ---------------------------------------------------------------------------

/// Weight-homogeneous polynomial whose coefficients are affine forms in the
/// pending kernel unknowns.
#[derive(Clone, Debug, Default)]
struct UPoly {
    terms: BTreeMap<Monomial, LinExpr>,
}

impl UPoly {
    fn zero() -> UPoly {
        UPoly::default()
    }

    fn from_poly(p: &Poly) -> UPoly {
        UPoly {
            terms: p
                .terms()
                .map(|(m, c)| (*m, LinExpr::constant(c.clone())))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, e: LinExpr) {
        if e.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(e);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().add(&e);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    fn add_scaled(&self, c: &Rational, other: &UPoly) -> UPoly {
        let mut out = self.clone();
        for (m, e) in &other.terms {
            out.add_term(*m, e.scale(c));
        }
        out
    }

    /// Multiply by a known (numeric-coefficient) polynomial.
    fn mul_known(&self, p: &Poly) -> UPoly {
        let mut out = UPoly::zero();
        for (m1, e) in &self.terms {
            for (m2, c) in p.terms() {
                out.add_term(m1.mul(m2), e.scale(c));
            }
        }
        out
    }

    fn partial(&self, v: VarId) -> UPoly {
        let mut out = UPoly::zero();
        for (m, e) in &self.terms {
            let exp = m.exp(v);
            if exp > 0 {
                out.add_term(m.with_exp(v, exp - 1), e.scale(&rat_int(exp as i64)));
            }
        }
        out
    }

    fn substitute_unknown(&mut self, u: u32, repl: &LinExpr) {
        let keys: Vec<Monomial> = self.terms.keys().copied().collect();
        for m in keys {
            let e = self.terms[&m].substitute(u, repl);
            if e.is_zero() {
                self.terms.remove(&m);
            } else {
                self.terms.insert(m, e);
            }
        }
    }

    /// Resolve to a plain polynomial: solved unknowns substituted, the rest
    /// set to zero.
    fn resolve(&self, solved: &BTreeMap<u32, LinExpr>) -> Poly {
        let mut p = Poly::zero();
        for (m, e) in &self.terms {
            let mut e = e.clone();
            for (u, repl) in solved {
                e = e.substitute(*u, repl);
            }
            p.add_term(*m, e.eval_zero());
        }
        p
    }
}

/// One stage of a finished cascade, for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct CascadeStage {
    pub stage: u32,
    /// Weight of the solved component (absent past the total weight).
    pub weight: Option<u32>,
    pub rhs: String,
    pub solution: String,
    pub kernel_freedom: Vec<String>,
    pub introduced: Vec<String>,
    pub obstructed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CascadeObstruction {
    pub stage: u32,
    #[serde(with = "crate::expr::json::rational_vec_string")]
    pub coords: Vec<Rational>,
}

/// Completed cascade run: either the solved chain with its Darboux
/// polynomial, or the first unresolvable obstruction.
#[derive(Clone, Debug, Serialize)]
pub struct CascadeState {
    pub params: ParamPoint,
    #[serde(with = "crate::expr::json::rational_string")]
    pub k0: Rational,
    #[serde(with = "crate::expr::json::rational_string")]
    pub k1: Rational,
    pub total_weight: u32,
    /// Solved weight components `F_0, F_1, ..., F_l` (zero-padded on
    /// obstruction).
    pub chain: Vec<Poly>,
    pub stages: Vec<CascadeStage>,
    /// Unknowns that were introduced and never fixed by an obstruction;
    /// they are set to zero in the reported chain.
    pub free_constants: Vec<String>,
    pub obstruction: Option<CascadeObstruction>,
}

impl CascadeState {
    /// The assembled Darboux polynomial (sum of the chain) when the cascade
    /// completed.
    pub fn darboux_polynomial(&self) -> Option<Poly> {
        if self.obstruction.is_some() {
            return None;
        }
        Some(
            self.chain
                .iter()
                .fold(Poly::zero(), |acc, f| acc.add(f)),
        )
    }

    pub fn cofactor(&self) -> Poly {
        Poly::var(VarId::X)
            .scale(&self.k1)
            .add(&Poly::constant(self.k0.clone()))
    }
}

/// Run the cascade from a top component `f0` (weight homogeneous of weight
/// `total_weight`, annihilated by `L - k1 x`) at a fully numeric parameter
/// point. Stage `j` solves for the weight `l - j` component; stages past
/// `l` are pure consistency checks. Free kernel constants introduced along
/// the way are carried symbolically and fixed by later obstructions when the
/// obstruction is linear in them (it always is: unknowns never multiply);
/// leftovers default to zero.
pub fn cascade(
    f0: &Poly,
    params: &ParamPoint,
    k0: &Rational,
    k1: &Rational,
    total_weight: u32,
) -> Result<CascadeState, GradedError> {
    let wspec = WeightSpec::default();
    let found = f0
        .weight_degree(&wspec)
        .ok_or(GradedError::NotWeightHomogeneous)?;
    if f0.is_zero() || found != total_weight {
        return Err(GradedError::WeightMismatch { expected: total_weight, found });
    }
    let top_residual = apply_shifted_l(f0, &params.m, k1);
    if !top_residual.is_zero() {
        return Err(GradedError::TopEquationViolated { residual: top_residual });
    }

    let l = total_weight;
    // Known multiplier polynomials of the stage recursion, at numeric params.
    let y = Poly::var(VarId::Y);
    let x = Poly::var(VarId::X);
    let bd_y = y.scale(&(&params.b * &params.d));
    let zcoef = {
        // (a+1) x^2 - y - c z
        let x2 = Poly::var(VarId::X).pow(2);
        x2.scale(&(&params.a + Rational::one()))
            .sub(&y)
            .sub(&Poly::var(VarId::Z).scale(&params.c))
    };
    let neg_b_x = x.scale(&-params.b.clone());
    let neg_a_x = x.scale(&-params.a.clone());

    let mut chain: Vec<UPoly> = vec![UPoly::from_poly(f0)];
    let mut solved: BTreeMap<u32, LinExpr> = BTreeMap::new();
    let mut introduced: Vec<u32> = Vec::new();
    let mut next_unknown: u32 = 0;
    let mut stages: Vec<CascadeStage> = Vec::new();
    let mut obstruction: Option<CascadeObstruction> = None;

    'stages: for j in 1..=(l + 3) {
        let target_weight = l as i64 - j as i64 + 1;
        let prev = &chain[(j - 1) as usize];
        let mut rhs = UPoly::zero().add_scaled(k0, prev);
        rhs = rhs.add_scaled(&Rational::one(), &prev.partial(VarId::Y).mul_known(&bd_y));
        rhs = rhs.add_scaled(&Rational::one(), &prev.partial(VarId::Z).mul_known(&zcoef));
        if j >= 2 {
            let prev2 = &chain[(j - 2) as usize];
            rhs = rhs.add_scaled(&Rational::one(), &prev2.partial(VarId::Y).mul_known(&neg_b_x));
            rhs = rhs.add_scaled(&Rational::one(), &prev2.partial(VarId::Z).mul_known(&neg_a_x));
        }
        for (u, repl) in &solved {
            rhs.substitute_unknown(*u, repl);
        }

        let target = GradedSlice::new(target_weight);
        let mut rhs_coords = vec![LinExpr::zero(); target.dim()];
        for (m, e) in &rhs.terms {
            let idx = target
                .index_of(m)
                .expect("cascade right-hand sides are graded");
            rhs_coords[idx] = e.clone();
        }

        let source_weight = target_weight - 1;
        let (map_rows, source) = if source_weight >= 0 && j <= l {
            let map = GradedMap::of_l_shifted(source_weight as u32, &params.m, k1);
            (map.matrix, map.source)
        } else {
            (
                vec![Vec::new(); target.dim()],
                GradedSlice { weight: 0, basis: Vec::new() },
            )
        };
        let sol = linalg::solve_affine(&map_rows, source.dim(), &rhs_coords);

        // Constraint processing: fix unknowns where possible, flag genuine
        // obstructions (constant nonzero residuals).
        let mut bad: Vec<Rational> = Vec::new();
        for raw in &sol.constraints {
            let mut e = raw.clone();
            for (u, repl) in &solved {
                e = e.substitute(*u, repl);
            }
            if e.is_zero() {
                continue;
            }
            if e.is_constant() {
                bad.push(e.constant.clone());
                continue;
            }
            let (&u, coeff) = e.coeffs.iter().next_back().expect("nonconstant");
            let coeff = coeff.clone();
            let mut repl = e.clone();
            repl.coeffs.remove(&u);
            let repl = repl.scale(&(-coeff.recip()));
            for existing in solved.values_mut() {
                *existing = existing.substitute(u, &repl);
            }
            solved.insert(u, repl);
        }
        if !bad.is_empty() {
            // Report the full resolved obstruction vector in the canonical
            // cokernel basis.
            let functionals = linalg::left_nullspace(&map_rows, source.dim());
            let resolved_rhs: Vec<Rational> = rhs_coords
                .iter()
                .map(|e| {
                    let mut e = e.clone();
                    for (u, repl) in &solved {
                        e = e.substitute(*u, repl);
                    }
                    e.eval_zero()
                })
                .collect();
            let coords: Vec<Rational> = functionals
                .iter()
                .map(|f| f.iter().zip(&resolved_rhs).map(|(a, b)| a * b).sum())
                .collect();
            obstruction = Some(CascadeObstruction { stage: j, coords });
            stages.push(CascadeStage {
                stage: j,
                weight: (j <= l).then(|| l - j),
                rhs: String::new(),
                solution: String::new(),
                kernel_freedom: Vec::new(),
                introduced: Vec::new(),
                obstructed: true,
            });
            while chain.len() <= l as usize {
                chain.push(UPoly::zero());
            }
            break 'stages;
        }

        // Assemble F_j = particular + fresh unknowns * kernel basis.
        let mut fj = UPoly::zero();
        for (idx, e) in sol.particular.iter().enumerate() {
            if !e.is_zero() {
                fj.add_term(source.basis[idx], e.clone());
            }
        }
        let kernel_vectors = if j <= l {
            linalg::nullspace(&map_rows, source.dim())
        } else {
            Vec::new()
        };
        let mut stage_introduced = Vec::new();
        for kv in &kernel_vectors {
            let u = next_unknown;
            next_unknown += 1;
            introduced.push(u);
            stage_introduced.push(u);
            let ue = LinExpr::unknown(u);
            for (idx, c) in kv.iter().enumerate() {
                if !c.is_zero() {
                    fj.add_term(source.basis[idx], ue.scale(c));
                }
            }
        }
        stages.push(CascadeStage {
            stage: j,
            weight: (j <= l).then(|| l - j),
            rhs: String::new(),
            solution: String::new(),
            kernel_freedom: kernel_vectors
                .iter()
                .map(|kv| source.to_poly(kv).to_string())
                .collect(),
            introduced: stage_introduced.iter().map(|u| format!("u{u}")).collect(),
            obstructed: false,
        });
        if j <= l {
            chain.push(fj);
        } else {
            chain.push(UPoly::zero());
        }
    }

    // Final resolution: substitute solved unknowns, zero the rest.
    let resolved: Vec<Poly> = chain
        .iter()
        .take(l as usize + 1)
        .map(|u| u.resolve(&solved))
        .collect();
    // Render the stage reports against the resolved chain.
    for (idx, stage) in stages.iter_mut().enumerate() {
        let j = idx + 1;
        if let Some(fj) = resolved.get(j) {
            stage.solution = fj.to_string();
        }
        // Reconstruct the resolved right-hand side for the trace.
        if j <= l as usize + 3 {
            let prev = resolved.get(j - 1).cloned().unwrap_or_else(Poly::zero);
            let mut rhs = prev.scale(k0);
            rhs = rhs.add(&prev.partial(VarId::Y).mul(&bd_y));
            rhs = rhs.add(&prev.partial(VarId::Z).mul(&zcoef));
            if j >= 2 {
                let prev2 = resolved.get(j - 2).cloned().unwrap_or_else(Poly::zero);
                rhs = rhs.add(&prev2.partial(VarId::Y).mul(&neg_b_x));
                rhs = rhs.add(&prev2.partial(VarId::Z).mul(&neg_a_x));
            }
            stage.rhs = rhs.to_string();
        }
    }

    let free_constants: Vec<String> = introduced
        .iter()
        .filter(|u| !solved.contains_key(u))
        .map(|u| format!("u{u}"))
        .collect();

    let state = CascadeState {
        params: params.clone(),
        k0: k0.clone(),
        k1: k1.clone(),
        total_weight: l,
        chain: resolved,
        stages,
        free_constants,
        obstruction,
    };

    // When the cascade completes, the assembled sum must satisfy the Darboux
    // relation exactly; anything else is an internal error worth surfacing.
    if state.obstruction.is_none() {
        let f = state.darboux_polynomial().expect("completed");
        let field = crate::field::assistant_system().substitute_values(&params.values());
        let residual = field.lie_derivative(&f).sub(&state.cofactor().mul(&f));
        if !residual.is_zero() {
            return Err(GradedError::ResidualNonzero { residual });
        }
    }
    Ok(state)
}
