//! Verification, cofactor recovery, degree-bounded search, symbolic
//! parameter-constraint reduction, and the certificate registry for the six
//! generators of the Darboux polynomials of the FitzHugh-Nagumo field.

use crate::expr::{rat, rat_int, Monomial, Poly, Rational, VarId, VarKind};
use crate::field::{fn_system, VectorField};
use crate::linalg;
use crate::sample::SplitMix64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// A fully numeric parameter point. `m` is 0 for the FitzHugh-Nagumo system
/// proper and nonzero only for the assistant deformation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ParamPoint {
    #[serde(with = "crate::expr::json::rational_string")]
    pub a: Rational,
    #[serde(with = "crate::expr::json::rational_string")]
    pub b: Rational,
    #[serde(with = "crate::expr::json::rational_string")]
    pub c: Rational,
    #[serde(with = "crate::expr::json::rational_string")]
    pub d: Rational,
    #[serde(with = "crate::expr::json::rational_string")]
    pub m: Rational,
}

/// Sign choice for the wave speed in the biological-region predicate; the
/// positivity of `epsilon = b c` couples the signs of `b` and `c`, and the
/// original model does not fix which branch applies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CSign {
    Positive,
    Negative,
}

impl ParamPoint {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational, m: Rational) -> ParamPoint {
        ParamPoint { a, b, c, d, m }
    }

    /// Point for the FitzHugh-Nagumo system itself (`m = 0`).
    pub fn fn_point(a: Rational, b: Rational, c: Rational, d: Rational) -> ParamPoint {
        ParamPoint::new(a, b, c, d, Rational::zero())
    }

    pub fn values(&self) -> BTreeMap<VarId, Rational> {
        let mut map = BTreeMap::new();
        map.insert(VarId::A, self.a.clone());
        map.insert(VarId::B, self.b.clone());
        map.insert(VarId::C, self.c.clone());
        map.insert(VarId::D, self.d.clone());
        map.insert(VarId::M, self.m.clone());
        map
    }

    /// The FitzHugh-Nagumo field at this point (state variables only).
    pub fn fn_field(&self) -> VectorField {
        fn_system().substitute_values(&self.values())
    }

    /// The assistant field at this point.
    pub fn assistant_field(&self) -> VectorField {
        crate::field::assistant_system().substitute_values(&self.values())
    }

    /// Biological parameter region: `0 < a < 1/2`, `epsilon = b c > 0`,
    /// `d > 0`, optionally constraining the sign of the wave speed `c`.
    pub fn is_biological(&self, c_sign: Option<CSign>) -> bool {
        let half = rat(1, 2);
        let base = self.a.is_positive()
            && self.a < half
            && (&self.b * &self.c).is_positive()
            && self.d.is_positive();
        let sign_ok = match c_sign {
            None => true,
            Some(CSign::Positive) => self.c.is_positive(),
            Some(CSign::Negative) => self.c.is_negative(),
        };
        base && sign_ok
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={}, b={}, c={}, d={}, m={}",
            self.a, self.b, self.c, self.d, self.m
        )
    }
}

/// Sample a parameter point in the biological region (`m = 0`).
pub fn sample_biological(rng: &mut SplitMix64) -> ParamPoint {
    // 0 < a < 1/2
    let q = rng.int_in(4, 12);
    let p = rng.int_in(1, (q - 1) / 2);
    let a = rat(p, q);
    let c = rng.nonzero_rational(3, 3);
    // epsilon = b c uniform positive
    let eps = rat(rng.int_in(1, 6), rng.int_in(1, 4));
    let b = &eps / &c;
    let d = rat(rng.int_in(1, 5), rng.int_in(1, 3));
    ParamPoint::fn_point(a, b, c, d)
}

/// A solved-form assignment `var = num / den`; `den = 1` for plain
/// substitutions. Clearing the denominator multiplies the residual by
/// `den^k`, which preserves the zero test exactly (the ring is a domain).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SolvedForm {
    pub var: VarId,
    pub num: Poly,
    pub den: Poly,
}

impl SolvedForm {
    pub fn plain(var: VarId, value: Poly) -> SolvedForm {
        SolvedForm { var, num: value, den: Poly::one() }
    }

    pub fn fraction(var: VarId, num: Poly, den: Poly) -> SolvedForm {
        SolvedForm { var, num, den }
    }
}

/// A vanishing relation among parameters, reduced by pseudo-division in the
/// declared variable.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Relation {
    pub poly: Poly,
    pub var: VarId,
}

/// Parameter constraints of a certificate: triangular solved forms, defining
/// relations, and polynomials declared nonvanishing on the locus.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct ParamConstraint {
    pub substitutions: Vec<SolvedForm>,
    pub relations: Vec<Relation>,
    pub nonvanishing: Vec<Poly>,
}

impl ParamConstraint {
    pub fn empty() -> ParamConstraint {
        ParamConstraint::default()
    }

    pub fn at_point(p: &ParamPoint) -> ParamConstraint {
        ParamConstraint {
            substitutions: p
                .values()
                .into_iter()
                .map(|(v, r)| SolvedForm::plain(v, Poly::constant(r)))
                .collect(),
            relations: Vec::new(),
            nonvanishing: Vec::new(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConstraintError {
    /// Substitutions re-introduce an already-eliminated symbol indefinitely.
    NotTriangular { var: VarId },
    /// A relation's leading coefficient is neither constant nor declared
    /// nonvanishing, so pseudo-division would be unsound.
    LeadingCoefficient { relation: Poly, leading: Poly },
    /// A relation does not involve its declared reduction variable.
    BadRelation { relation: Poly, var: VarId },
}

impl fmt::Display for ConstraintError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintError::NotTriangular { var } => {
                write!(f, "substitutions are not triangular: `{var}` persists")
            }
            ConstraintError::LeadingCoefficient { relation, leading } => write!(
                f,
                "relation `{relation}` has leading coefficient `{leading}` not declared nonvanishing"
            ),
            ConstraintError::BadRelation { relation, var } => {
                write!(f, "relation `{relation}` does not involve `{var}`")
            }
        }
    }
}

impl std::error::Error for ConstraintError {}

/// Reduce a polynomial by the constraints: apply the solved forms (clearing
/// denominators) until none of the assigned symbols remain, then
/// pseudo-reduce by each relation in its declared variable.
pub fn reduce_by_constraints(p: &Poly, constraints: &ParamConstraint) -> Result<Poly, ConstraintError> {
    let mut r = p.clone();
    let passes = constraints.substitutions.len() + 1;
    for _ in 0..passes {
        let mut any = false;
        for s in &constraints.substitutions {
            let deg = r.degree_in(s.var) as usize;
            if deg == 0 {
                continue;
            }
            any = true;
            let coeffs = r.coeffs_in(s.var);
            // r := sum_i coeffs[i] * num^i * den^(deg - i)
            let mut acc = Poly::zero();
            let mut num_pow = Poly::one();
            let mut den_pows = vec![Poly::one()];
            for _ in 0..deg {
                den_pows.push(den_pows.last().unwrap().mul(&s.den));
            }
            for (i, ci) in coeffs.iter().enumerate() {
                if !ci.is_zero() {
                    acc = acc.add(&ci.mul(&num_pow).mul(&den_pows[deg - i]));
                }
                if i < deg {
                    num_pow = num_pow.mul(&s.num);
                }
            }
            r = acc;
        }
        if !any {
            break;
        }
    }
    for s in &constraints.substitutions {
        if r.degree_in(s.var) > 0 {
            return Err(ConstraintError::NotTriangular { var: s.var });
        }
    }
    for rel in &constraints.relations {
        r = pseudo_reduce(&r, rel, &constraints.nonvanishing)?;
    }
    Ok(r)
}

fn pseudo_reduce(
    p: &Poly,
    rel: &Relation,
    nonvanishing: &[Poly],
) -> Result<Poly, ConstraintError> {
    let var = rel.var;
    let rel_deg = rel.poly.degree_in(var) as usize;
    if rel_deg == 0 {
        return Err(ConstraintError::BadRelation { relation: rel.poly.clone(), var });
    }
    let rel_coeffs = rel.poly.coeffs_in(var);
    let lc = rel_coeffs[rel_deg].clone();
    let lc_constant = lc.num_terms() == 1 && lc.leading().map(|(m, _)| m.is_one()) == Some(true);
    if !lc_constant && !nonvanishing.contains(&lc) {
        return Err(ConstraintError::LeadingCoefficient { relation: rel.poly.clone(), leading: lc });
    }
    let mut r = p.clone();
    loop {
        let deg = r.degree_in(var) as usize;
        if deg < rel_deg || r.is_zero() {
            return Ok(r);
        }
        let lead = r.coeffs_in(var)[deg].clone();
        let shift = Poly::term(Monomial::one().with_exp(var, (deg - rel_deg) as u16), Rational::one());
        r = r.mul(&lc).sub(&lead.mul(&shift).mul(&rel.poly));
    }
}

/// Cofactor of a Darboux polynomial: state degree at most 2 (one less than
/// the degree of the field).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Cofactor {
    poly: Poly,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CofactorError {
    ZeroPolynomial,
    NotDarboux,
    DegreeBound { found: u32 },
}

impl fmt::Display for CofactorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CofactorError::ZeroPolynomial => write!(f, "the zero polynomial has no cofactor"),
            CofactorError::NotDarboux => write!(f, "not a Darboux polynomial (division leaves a remainder)"),
            CofactorError::DegreeBound { found } => {
                write!(f, "cofactor state degree {found} exceeds the bound 2")
            }
        }
    }
}

impl std::error::Error for CofactorError {}

impl Cofactor {
    pub fn new(poly: Poly) -> Result<Cofactor, CofactorError> {
        let found = poly.state_degree();
        if found > 2 {
            return Err(CofactorError::DegreeBound { found });
        }
        Ok(Cofactor { poly })
    }

    pub fn zero() -> Cofactor {
        Cofactor { poly: Poly::zero() }
    }

    pub fn constant(c: Rational) -> Cofactor {
        Cofactor { poly: Poly::constant(c) }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }
}

impl fmt::Display for Cofactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Outcome of a verification: the residual is `X(f) - k f` after constraint
/// reduction, and validity means it is identically zero.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub residual: Poly,
}

/// Check the Darboux relation `X(f) = k f` under the given parameter
/// constraints, exactly.
pub fn verify(
    f: &Poly,
    k: &Cofactor,
    v: &VectorField,
    constraints: &ParamConstraint,
) -> Result<VerifyReport, ConstraintError> {
    let raw = v.lie_derivative(f).sub(&k.poly().mul(f));
    let residual = reduce_by_constraints(&raw, constraints)?;
    Ok(VerifyReport { valid: residual.is_zero(), residual })
}

/// Recover the cofactor of `f` by exact division of `X(f)` by `f`.
pub fn solve_cofactor(f: &Poly, v: &VectorField) -> Result<Cofactor, CofactorError> {
    if f.is_zero() {
        return Err(CofactorError::ZeroPolynomial);
    }
    let xf = v.lie_derivative(f);
    match xf.checked_div(f) {
        None => Err(CofactorError::NotDarboux),
        Some(q) => Cofactor::new(q),
    }
}

/// Multiplicativity check: the cofactor of a product is the
/// multiplicity-weighted sum of the factor cofactors.
pub fn proposition1_check(
    factors: &[(Poly, u32)],
    v: &VectorField,
) -> Result<bool, CofactorError> {
    let mut product = Poly::one();
    let mut expected = Poly::zero();
    for (f, mult) in factors {
        let k = solve_cofactor(f, v)?;
        expected = expected.add(&k.poly().scale(&rat_int(*mult as i64)));
        product = product.mul(&f.pow(*mult));
    }
    let k_prod = solve_cofactor(&product, v)?;
    Ok(*k_prod.poly() == expected)
}

/// Functional independence of two nonconstant polynomials: the 2x3 Jacobian
/// has rank 2 somewhere iff the three 2x2 minors do not all vanish
/// identically.
pub fn independent(f: &Poly, g: &Poly) -> bool {
    let minor = |u: VarId, w: VarId| {
        f.partial(u).mul(&g.partial(w)).sub(&f.partial(w).mul(&g.partial(u)))
    };
    !(minor(VarId::X, VarId::Y).is_zero()
        && minor(VarId::X, VarId::Z).is_zero()
        && minor(VarId::Y, VarId::Z).is_zero())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SearchError {
    /// The field (or a candidate cofactor) still carries parameter symbols;
    /// search works on fully numeric instances.
    ParametricInput(VarId),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::ParametricInput(v) => {
                write!(f, "search requires numeric parameters; `{v}` is symbolic")
            }
        }
    }
}

impl std::error::Error for SearchError {}

/// A nonzero solution space of `X(f) = k f` on polynomials of bounded state
/// degree.
#[derive(Clone, Debug, Serialize)]
pub struct SearchHit {
    pub cofactor: Poly,
    pub basis: Vec<Poly>,
}

fn state_monomials(min_degree: u32, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for total in min_degree..=max_degree {
        for i in 0..=total {
            for j in 0..=(total - i) {
                let k = total - i - j;
                out.push(
                    Monomial::one()
                        .with_exp(VarId::X, i as u16)
                        .with_exp(VarId::Y, j as u16)
                        .with_exp(VarId::Z, k as u16),
                );
            }
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn assert_state_only(p: &Poly) -> Result<(), SearchError> {
    for v in p.used_vars() {
        if v.kind() == VarKind::Parameter {
            return Err(SearchError::ParametricInput(v));
        }
    }
    Ok(())
}

/// Exact null space of `f -> X(f) - k f` on the coefficient space of
/// polynomials of state degree `<= max_degree`, for each candidate cofactor.
/// Constants are excluded from the zero-cofactor space. Candidates run in
/// parallel under the `parallel` feature.
pub fn search(
    v: &VectorField,
    max_degree: u32,
    candidates: &[Poly],
) -> Result<Vec<SearchHit>, SearchError> {
    assert_state_only(&v.p)?;
    assert_state_only(&v.q)?;
    assert_state_only(&v.r)?;
    let mut unique: Vec<Poly> = Vec::new();
    for k in candidates {
        assert_state_only(k)?;
        if !unique.contains(k) {
            unique.push(k.clone());
        }
    }

    let hits = crate::par::map(&unique, |k| {
        let min_degree = if k.is_zero() { 1 } else { 0 };
        let source = state_monomials(min_degree, max_degree);
        let target = state_monomials(0, max_degree + 2);
        let index: BTreeMap<Monomial, usize> =
            target.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut matrix = vec![vec![Rational::zero(); source.len()]; target.len()];
        for (col, mono) in source.iter().enumerate() {
            let f = Poly::term(*mono, Rational::one());
            let image = v.lie_derivative(&f).sub(&k.mul(&f));
            for (m, c) in image.terms() {
                matrix[index[m]][col] = c.clone();
            }
        }
        let basis: Vec<Poly> = linalg::nullspace(&matrix, source.len())
            .into_iter()
            .map(|vecr| {
                let mut p = Poly::zero();
                for (i, c) in vecr.into_iter().enumerate() {
                    p.add_term(source[i], c);
                }
                p
            })
            .collect();
        SearchHit { cofactor: k.clone(), basis }
    });
    Ok(hits.into_iter().filter(|h| !h.basis.is_empty()).collect())
}

/// The complete cofactor candidate list for the FitzHugh-Nagumo field at a
/// numeric point: `{0} U {(4/3) n c : 1 <= n <= ceil(D/4)}`.
pub fn default_fn_candidates(c: &Rational, max_degree: u32) -> Vec<Poly> {
    let mut out = vec![Poly::zero()];
    if !c.is_zero() {
        let n_max = max_degree.div_ceil(4);
        for n in 1..=n_max {
            out.push(Poly::constant(c * rat(4, 3) * rat_int(n as i64)));
        }
    }
    out
}

/// Polynomial first integrals (zero cofactor, constants excluded) up to the
/// given state degree.
pub fn first_integrals(v: &VectorField, max_degree: u32) -> Result<Vec<Poly>, SearchError> {
    let hits = search(v, max_degree, &[Poly::zero()])?;
    Ok(hits.into_iter().next().map(|h| h.basis).unwrap_or_default())
}

pub mod generators {
    //! The six generators, with symbolic parameters.

    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).expect("generator literal")
    }

    /// Quartic generator on the `a = -1`, `bd = -c` locus.
    pub fn phi1() -> Poly {
        p("(1/2)*x^4 - z^2 + 2*x*y + (2/3)*c*x*z + ((1/9)*c^2 - 1)*x^2")
    }

    /// Quartic generator on the conic locus with `bd = -c`.
    pub fn phi2() -> Poly {
        p("(1/2)*x^4 - z^2 - (2/3)*(a+1)*x^3 + 2*x*y + (2/3)*c*x*z - (2/9)*c*(a+1)*z \
           + ((1/9)*c^2 + a)*x^2 - (2/3)*(a+1)*y - (2/27)*c^2*(a+1)*x")
    }

    /// Quartic generator with the `y^2` term on the `a = -1`, `bd = -2c/3`
    /// locus.
    pub fn phi3() -> Poly {
        p("(1/2)*x^4 - z^2 - (1/2)*d*y^2 + 2*x*y + (2/3)*c*x*z + ((1/9)*c^2 - 1)*x^2")
    }

    /// Quartic generator with the `y^2` term on the conic locus with
    /// `bd = -2c/3`.
    pub fn phi4() -> Poly {
        p("(1/2)*x^4 - z^2 - (1/2)*d*y^2 - (2/3)*(a+1)*x^3 + 2*x*y + (2/3)*c*x*z \
           - (2/9)*c*(a+1)*z + ((1/9)*c^2 + a)*x^2 - (1/3)*(a+1)*y - (2/27)*c^2*(a+1)*x")
    }

    /// Polynomial first integral at `b = c = 0` (any `a`).
    pub fn phi5() -> Poly {
        p("(1/4)*x^4 - (1/2)*z^2 - (1/3)*(a+1)*x^3 + x*y + (1/2)*a*x^2")
    }

    /// `b = (2/27) c^3 - (1/3) c`, the solved form shared by the `a = -1`
    /// rows.
    pub fn b_of_c_at_a_minus_one() -> Poly {
        p("(2/27)*c^3 - (1/3)*c")
    }

    /// `b = (2/27) c^3 - (1/9) a^2 c + (1/9) a c - (1/9) c`, the solved form
    /// shared by the conic-locus rows.
    pub fn b_of_c_on_conic() -> Poly {
        p("(2/27)*c^3 - (1/9)*a^2*c + (1/9)*a*c - (1/9)*c")
    }
}

/// A machine-checkable witness that `f` is a Darboux polynomial with the
/// given cofactor under the parameter constraints.
#[derive(Clone, Debug, Serialize)]
pub struct DarbouxCertificate {
    pub label: String,
    pub f: Poly,
    pub cofactor: Cofactor,
    pub constraints: ParamConstraint,
    /// `X(f) - k f` after constraint reduction; must be zero.
    pub residual_witness: Poly,
    /// Irreducibility claim (recorded, not re-proved here).
    pub irreducible: bool,
}

/// Which of the two published conditions for a conic-locus row survives
/// exact verification.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ValidatedCondition {
    Table,
    Lemma,
    Both,
    Neither,
}

/// Adjudication of the conflicting parameter conditions for the two
/// conic-locus rows: the table of generators and the classification lemma
/// in the underlying analysis state different conics, so both are reduced
/// exactly and the survivor is reported.
#[derive(Clone, Debug, Serialize)]
pub struct RowAdjudication {
    pub row: u32,
    pub label: String,
    pub table_condition: Poly,
    pub table_residual: Poly,
    pub lemma_condition: Poly,
    pub lemma_residual: Poly,
    pub validated: ValidatedCondition,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Report {
    pub certificates: Vec<DarbouxCertificate>,
    pub adjudications: Vec<RowAdjudication>,
}

fn base_constraints_a_minus_one(bd_num: Poly) -> ParamConstraint {
    let b_expr = generators::b_of_c_at_a_minus_one();
    ParamConstraint {
        substitutions: vec![
            SolvedForm::plain(VarId::A, Poly::constant(rat_int(-1))),
            SolvedForm::fraction(VarId::D, bd_num, Poly::var(VarId::B)),
            SolvedForm::plain(VarId::B, b_expr.clone()),
        ],
        relations: Vec::new(),
        nonvanishing: vec![Poly::var(VarId::C), b_expr],
    }
}

fn base_constraints_conic(bd_num: Poly, relation: Poly) -> ParamConstraint {
    let b_expr = generators::b_of_c_on_conic();
    ParamConstraint {
        substitutions: vec![
            SolvedForm::fraction(VarId::D, bd_num, Poly::var(VarId::B)),
            SolvedForm::plain(VarId::B, b_expr.clone()),
        ],
        relations: vec![Relation { poly: relation, var: VarId::A }],
        nonvanishing: vec![Poly::var(VarId::C), b_expr],
    }
}

fn bc_zero_constraints() -> ParamConstraint {
    ParamConstraint {
        substitutions: vec![
            SolvedForm::plain(VarId::B, Poly::zero()),
            SolvedForm::plain(VarId::C, Poly::zero()),
        ],
        relations: Vec::new(),
        nonvanishing: Vec::new(),
    }
}

/// Build and exactly verify the six generator certificates. Rows 1, 2, 5, 6
/// verify symbolically outright; for the two conic-locus rows both published
/// parameter conditions are reduced and the report records which one yields
/// a zero residual (the certificate is emitted with the validated one).
pub fn table1_certificates() -> Table1Report {
    let v = fn_system();
    let four_thirds_c = Cofactor::new(Poly::var(VarId::C).scale(&rat(4, 3))).unwrap();
    let minus_c = Poly::var(VarId::C).neg();
    let minus_two_thirds_c = Poly::var(VarId::C).scale(&rat(-2, 3));

    let mut certificates = Vec::new();
    let mut adjudications = Vec::new();

    // Rows 1 and 2: a = -1 loci; symbolic in c after clearing b-denominators.
    for (label, f, bd_num) in [
        ("phi1", generators::phi1(), minus_c.clone()),
        ("phi3", generators::phi3(), minus_two_thirds_c.clone()),
    ] {
        let constraints = base_constraints_a_minus_one(bd_num);
        let report = verify(&f, &four_thirds_c, &v, &constraints).expect("well-formed constraints");
        certificates.push(DarbouxCertificate {
            label: label.to_string(),
            f,
            cofactor: four_thirds_c.clone(),
            constraints,
            residual_witness: report.residual,
            irreducible: true,
        });
    }

    // Rows 3 and 4: conic loci; adjudicate the conflicting conditions.
    let lemma_condition = Poly::parse("c^2 + 3*a^2 - 12*a + 3").unwrap();
    for (row, label, f, bd_num, table_condition) in [
        (
            3u32,
            "phi2",
            generators::phi2(),
            minus_c,
            Poly::parse("2*c^2 + 3*a^2 - 12*a + 3").unwrap(),
        ),
        (
            4u32,
            "phi4",
            generators::phi4(),
            minus_two_thirds_c,
            Poly::parse("2*c^2 + a^2 - 7*a + 1").unwrap(),
        ),
    ] {
        let table_constraints = base_constraints_conic(bd_num.clone(), table_condition.clone());
        let lemma_constraints = base_constraints_conic(bd_num.clone(), lemma_condition.clone());
        let table_report =
            verify(&f, &four_thirds_c, &v, &table_constraints).expect("well-formed constraints");
        let lemma_report =
            verify(&f, &four_thirds_c, &v, &lemma_constraints).expect("well-formed constraints");
        let validated = match (table_report.valid, lemma_report.valid) {
            (true, true) => ValidatedCondition::Both,
            (true, false) => ValidatedCondition::Table,
            (false, true) => ValidatedCondition::Lemma,
            (false, false) => ValidatedCondition::Neither,
        };
        adjudications.push(RowAdjudication {
            row,
            label: label.to_string(),
            table_condition,
            table_residual: table_report.residual.clone(),
            lemma_condition: lemma_condition.clone(),
            lemma_residual: lemma_report.residual.clone(),
            validated,
        });
        let (constraints, residual) = match validated {
            ValidatedCondition::Lemma => (lemma_constraints, lemma_report.residual),
            // `Neither` still emits the table row so the failure is visible
            // in the residual witness.
            _ => (table_constraints, table_report.residual),
        };
        certificates.push(DarbouxCertificate {
            label: label.to_string(),
            f,
            cofactor: four_thirds_c.clone(),
            constraints,
            residual_witness: residual,
            irreducible: true,
        });
    }

    // Rows 5 and 6: b = c = 0, symbolic in a (and d).
    for (label, f) in [("y", Poly::var(VarId::Y)), ("phi5", generators::phi5())] {
        let constraints = bc_zero_constraints();
        let report =
            verify(&f, &Cofactor::zero(), &v, &constraints).expect("well-formed constraints");
        certificates.push(DarbouxCertificate {
            label: label.to_string(),
            f,
            cofactor: Cofactor::zero(),
            constraints,
            residual_witness: report.residual,
            irreducible: true,
        });
    }

    // Keep the registry in table order: rows 1..6.
    certificates.sort_by_key(|c| match c.label.as_str() {
        "phi1" => 1,
        "phi3" => 2,
        "phi2" => 3,
        "phi4" => 4,
        "y" => 5,
        _ => 6,
    });

    Table1Report { certificates, adjudications }
}

/// Rational parameter instances on each generator locus, used by the
/// dynamical validation layer. Rows 3 and 4 sit on a conic with no rational
/// points, so the instances for those rows use the nearby rational point of
/// the superseded condition only for negative controls; the certified
/// instances cover rows 1, 2, 5, 6.
pub fn certified_instances() -> Vec<(String, ParamPoint, Poly, Poly)> {
    let mut out = Vec::new();
    // Row 1 at c = 3: b = 2/27*27 - 1 = 1, d = -c/b = -3.
    let p1 = ParamPoint::fn_point(rat_int(-1), rat_int(1), rat_int(3), rat_int(-3));
    let phi1 = generators::phi1().substitute_values(&p1.values());
    out.push(("phi1".into(), p1, phi1, Poly::constant(rat_int(4))));
    // Row 2 at c = 3: b = 1, d = -2c/(3b) = -2.
    let p3 = ParamPoint::fn_point(rat_int(-1), rat_int(1), rat_int(3), rat_int(-2));
    let phi3 = generators::phi3().substitute_values(&p3.values());
    out.push(("phi3".into(), p3, phi3, Poly::constant(rat_int(4))));
    // Rows 5 and 6 at a = 1/4, d = 1, b = c = 0.
    let p5 = ParamPoint::fn_point(rat(1, 4), rat_int(0), rat_int(0), rat_int(1));
    out.push(("y".into(), p5.clone(), Poly::var(VarId::Y), Poly::zero()));
    let phi5 = generators::phi5().substitute_values(&p5.values());
    out.push(("phi5".into(), p5, phi5, Poly::zero()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn verify_row1_symbolically() {
        let report = verify(
            &generators::phi1(),
            &Cofactor::new(p("(4/3)*c")).unwrap(),
            &fn_system(),
            &base_constraints_a_minus_one(p("-c")),
        )
        .unwrap();
        assert!(report.valid, "residual: {}", report.residual);
    }

    #[test]
    fn verify_row5_and_negative_control() {
        let report = verify(
            &Poly::var(VarId::Y),
            &Cofactor::zero(),
            &fn_system(),
            &bc_zero_constraints(),
        )
        .unwrap();
        assert!(report.valid);

        // x is not Darboux: the unreduced residual is X(x) = z.
        let report = verify(
            &Poly::var(VarId::X),
            &Cofactor::zero(),
            &fn_system(),
            &ParamConstraint::empty(),
        )
        .unwrap();
        assert!(!report.valid);
        assert_eq!(report.residual, p("z"));
    }

    #[test]
    fn constraint_errors() {
        // b -> d, d -> b never terminates: not triangular.
        let bad = ParamConstraint {
            substitutions: vec![
                SolvedForm::plain(VarId::B, Poly::var(VarId::D)),
                SolvedForm::plain(VarId::D, Poly::var(VarId::B)),
            ],
            relations: Vec::new(),
            nonvanishing: Vec::new(),
        };
        assert!(matches!(
            reduce_by_constraints(&p("b + d"), &bad),
            Err(ConstraintError::NotTriangular { .. })
        ));

        // Relation with a parameter leading coefficient must be declared.
        let rel = ParamConstraint {
            substitutions: Vec::new(),
            relations: vec![Relation { poly: p("b*a^2 + c"), var: VarId::A }],
            nonvanishing: Vec::new(),
        };
        assert!(matches!(
            reduce_by_constraints(&p("a^3"), &rel),
            Err(ConstraintError::LeadingCoefficient { .. })
        ));
    }

    #[test]
    fn pseudo_reduction_kills_multiples() {
        let rel = Relation { poly: p("c^2 + 3*a^2 - 12*a + 3"), var: VarId::A };
        let constraints = ParamConstraint {
            substitutions: Vec::new(),
            relations: vec![rel.clone()],
            nonvanishing: Vec::new(),
        };
        let multiple = rel.poly.mul(&p("a^2*c - 5*a + 7"));
        let r = reduce_by_constraints(&multiple, &constraints).unwrap();
        assert!(r.is_zero(), "got {r}");
        // Non-multiples stay nonzero.
        let r = reduce_by_constraints(&p("a + c"), &constraints).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn solve_cofactor_examples() {
        // phi5 at b = c = 0 has cofactor 0 even with a symbolic.
        let mut bc0 = BTreeMap::new();
        bc0.insert(VarId::B, Rational::zero());
        bc0.insert(VarId::C, Rational::zero());
        let v = fn_system().substitute_values(&bc0);
        let k = solve_cofactor(&generators::phi5(), &v).unwrap();
        assert!(k.poly().is_zero());

        // Row-1 instance: cofactor 4 = (4/3) * 3.
        let inst = ParamPoint::fn_point(rat_int(-1), rat_int(1), rat_int(3), rat_int(-3));
        let phi1 = generators::phi1().substitute_values(&inst.values());
        let k = solve_cofactor(&phi1, &inst.fn_field()).unwrap();
        assert_eq!(*k.poly(), p("4"));

        // x + y at generic numeric parameters is not Darboux.
        let generic = ParamPoint::fn_point(rat(1, 3), rat_int(2), rat(5, 7), rat_int(1));
        assert!(matches!(
            solve_cofactor(&p("x + y"), &generic.fn_field()),
            Err(CofactorError::NotDarboux)
        ));
        assert!(matches!(
            solve_cofactor(&Poly::zero(), &generic.fn_field()),
            Err(CofactorError::ZeroPolynomial)
        ));
    }

    #[test]
    fn search_row1_space_is_one_dimensional() {
        let inst = ParamPoint::fn_point(rat_int(-1), rat_int(1), rat_int(3), rat_int(-3));
        let hits = search(&inst.fn_field(), 4, &[p("4")]).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].basis.len(), 1);
        let phi1 = generators::phi1().substitute_values(&inst.values());
        let found = &hits[0].basis[0];
        // Same line: found is a rational multiple of phi1.
        let scaled = phi1.scale(&(found.leading().unwrap().1 / phi1.leading().unwrap().1));
        assert_eq!(*found, scaled);
    }

    #[test]
    fn search_biological_point_is_empty() {
        let inst = ParamPoint::fn_point(rat(1, 4), rat_int(1), rat_int(1), rat_int(1));
        let cands = default_fn_candidates(&inst.c, 4);
        assert_eq!(cands.len(), 2);
        let hits = search(&inst.fn_field(), 4, &cands).unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn first_integrals_dichotomy_at_degree_4() {
        let free = ParamPoint::fn_point(rat(1, 4), rat_int(0), rat_int(0), rat_int(1));
        let fi = first_integrals(&free.fn_field(), 4).unwrap();
        assert_eq!(fi.len(), 5);
        for f in &fi {
            assert!(free.fn_field().lie_derivative(f).is_zero());
        }

        let generic = ParamPoint::fn_point(rat(1, 4), rat_int(1), rat(1, 2), rat_int(1));
        assert!(first_integrals(&generic.fn_field(), 4).unwrap().is_empty());

        // Degree 0 never yields anything: constants are excluded.
        assert!(first_integrals(&free.fn_field(), 0).unwrap().is_empty());
    }

    #[test]
    fn independence_examples() {
        assert!(independent(&Poly::var(VarId::Y), &generators::phi5()));
        assert!(!independent(&Poly::var(VarId::Y), &p("y^2")));
        assert!(independent(&Poly::var(VarId::X), &Poly::var(VarId::Z)));
    }

    #[test]
    fn proposition1_examples() {
        let bc0 = ParamPoint::fn_point(rat(1, 4), rat_int(0), rat_int(0), rat_int(1));
        let phi5 = generators::phi5().substitute_values(&bc0.values());
        assert!(proposition1_check(
            &[(Poly::var(VarId::Y), 2), (phi5, 1)],
            &bc0.fn_field()
        )
        .unwrap());

        let row1 = ParamPoint::fn_point(rat_int(-1), rat_int(1), rat_int(3), rat_int(-3));
        let phi1 = generators::phi1().substitute_values(&row1.values());
        let sq = [(phi1, 2u32)];
        assert!(proposition1_check(&sq, &row1.fn_field()).unwrap());
        let prod = sq[0].0.pow(2);
        assert_eq!(
            *solve_cofactor(&prod, &row1.fn_field()).unwrap().poly(),
            p("8")
        );

        assert!(matches!(
            proposition1_check(&[(Poly::var(VarId::X), 1)], &row1.fn_field()),
            Err(CofactorError::NotDarboux)
        ));
    }

    #[test]
    fn table1_report_shape() {
        let report = table1_certificates();
        assert_eq!(report.certificates.len(), 6);
        assert_eq!(report.adjudications.len(), 2);
        // Rows 1, 2, 5, 6 must verify with residual zero.
        for label in ["phi1", "phi3", "y", "phi5"] {
            let cert = report
                .certificates
                .iter()
                .find(|c| c.label == label)
                .unwrap();
            assert!(cert.residual_witness.is_zero(), "{label}");
        }
        // Every adjudication names exactly one surviving condition.
        for adj in &report.adjudications {
            assert!(
                matches!(adj.validated, ValidatedCondition::Table | ValidatedCondition::Lemma),
                "row {} validated {:?}",
                adj.row,
                adj.validated
            );
        }
    }

    #[test]
    fn conic_rows_validate_the_table_conditions() {
        // Independent oracle: at the rational point (a, c) = (2, 3) of the
        // lemma conic, direct numeric verification fails, so the lemma form
        // cannot be the true condition; the table conics carry the zero
        // residual under symbolic reduction.
        let report = table1_certificates();
        for adj in &report.adjudications {
            assert_eq!(adj.validated, ValidatedCondition::Table, "row {}", adj.row);
            assert!(adj.table_residual.is_zero());
            assert!(!adj.lemma_residual.is_zero());
        }

        // (a, c) = (2, 3): b = 2 - 4/3 + 2/3 - 1/3 = 1; row 3 has d = -3,
        // row 4 has d = -2. Check 9 + 12 - 24 + 3 = 0 on the lemma conic.
        assert_eq!(9 + 3 * 4 - 12 * 2 + 3, 0);
        let row3_pt = ParamPoint::fn_point(rat_int(2), rat_int(1), rat_int(3), rat_int(-3));
        let phi2 = generators::phi2().substitute_values(&row3_pt.values());
        let res = row3_pt
            .fn_field()
            .lie_derivative(&phi2)
            .sub(&phi2.scale(&rat_int(4)));
        assert_eq!(res, p("2*x"));

        let row4_pt = ParamPoint::fn_point(rat_int(2), rat_int(1), rat_int(3), rat_int(-2));
        let phi4 = generators::phi4().substitute_values(&row4_pt.values());
        let res = row4_pt
            .fn_field()
            .lie_derivative(&phi4)
            .sub(&phi4.scale(&rat_int(4)));
        assert_eq!(res, p("3*x"));

        // And no degree-4 Darboux polynomial with cofactor 4 exists there.
        assert!(search(&row3_pt.fn_field(), 4, &[p("4")]).unwrap().is_empty());
        assert!(search(&row4_pt.fn_field(), 4, &[p("4")]).unwrap().is_empty());
    }

    #[test]
    fn biological_predicate() {
        let inside = ParamPoint::fn_point(rat(1, 4), rat_int(2), rat(1, 2), rat_int(1));
        assert!(inside.is_biological(None));
        assert!(inside.is_biological(Some(CSign::Positive)));
        assert!(!inside.is_biological(Some(CSign::Negative)));

        let neg_c = ParamPoint::fn_point(rat(1, 4), rat_int(-2), rat(-1, 2), rat_int(1));
        assert!(neg_c.is_biological(None));
        assert!(neg_c.is_biological(Some(CSign::Negative)));

        for bad in [
            ParamPoint::fn_point(rat(3, 4), rat_int(2), rat(1, 2), rat_int(1)), // a too big
            ParamPoint::fn_point(rat(1, 4), rat_int(-2), rat(1, 2), rat_int(1)), // bc < 0
            ParamPoint::fn_point(rat(1, 4), rat_int(2), rat(1, 2), rat_int(-1)), // d < 0
        ] {
            assert!(!bad.is_biological(None));
        }

        let mut rng = SplitMix64::new(7);
        for _ in 0..50 {
            assert!(sample_biological(&mut rng).is_biological(None));
        }
    }

    #[test]
    fn zero_cofactor_space_is_the_generated_algebra() {
        // At b = c = 0 the degree-4 zero-cofactor space equals the span of
        // {y, y^2, y^3, y^4, phi5} exactly (both inclusions, via ranks).
        let pt = ParamPoint::fn_point(rat(1, 4), rat_int(0), rat_int(0), rat_int(1));
        let basis = first_integrals(&pt.fn_field(), 4).unwrap();
        let phi5 = generators::phi5().substitute_values(&pt.values());
        let y = Poly::var(VarId::Y);
        let algebra = [y.clone(), y.pow(2), y.pow(3), y.pow(4), phi5];
        let monos = state_monomials(1, 4);
        let index: BTreeMap<Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let coords = |f: &Poly| {
            let mut v = vec![Rational::zero(); monos.len()];
            for (m, c) in f.terms() {
                v[index[m]] = c.clone();
            }
            v
        };
        let a: Vec<Vec<Rational>> = basis.iter().map(&coords).collect();
        let b: Vec<Vec<Rational>> = algebra.iter().map(&coords).collect();
        let mut joint = a.clone();
        joint.extend(b.iter().cloned());
        assert_eq!(crate::linalg::rank(&a, monos.len()), 5);
        assert_eq!(crate::linalg::rank(&b, monos.len()), 5);
        assert_eq!(crate::linalg::rank(&joint, monos.len()), 5);
    }

    #[test]
    fn nonzero_linear_cofactors_never_occur() {
        // Sweep k = k0 + k1 x over a small grid: the solution space is
        // empty whenever k1 != 0 (the cofactor of this family is constant).
        let points = [
            ParamPoint::fn_point(rat_int(-1), rat_int(1), rat_int(3), rat_int(-3)),
            ParamPoint::fn_point(rat(1, 3), rat(1, 2), rat_int(2), rat(3, 2)),
        ];
        let x = Poly::var(VarId::X);
        for (pt, deg) in points.iter().zip([8u32, 6u32]) {
            let mut candidates = Vec::new();
            for k1 in [rat_int(-2), rat(-1, 2), rat_int(1), rat(3, 2)] {
                for k0 in [rat_int(0), rat_int(1), &pt.c * rat(4, 3)] {
                    candidates.push(x.scale(&k1).add(&Poly::constant(k0)));
                }
            }
            let hits = search(&pt.fn_field(), deg, &candidates).unwrap();
            assert!(hits.is_empty(), "linear cofactor hit at {pt}, degree {deg}");
        }
    }

    #[test]
    fn assistant_deformation_preserves_search_at_m_zero() {
        let pt = ParamPoint::fn_point(rat_int(-1), rat_int(1), rat_int(3), rat_int(-3));
        let cands = default_fn_candidates(&pt.c, 4);
        let fn_hits = search(&pt.fn_field(), 4, &cands).unwrap();
        let asst_hits = search(&pt.assistant_field(), 4, &cands).unwrap();
        assert_eq!(fn_hits.len(), asst_hits.len());
        for (a, b) in fn_hits.iter().zip(&asst_hits) {
            assert_eq!(a.cofactor, b.cofactor);
            assert_eq!(a.basis, b.basis);
        }
    }

    #[test]
    fn search_soundness_round_trip() {
        let mut rng = SplitMix64::new(0x5EA);
        for _ in 0..10 {
            let pt = ParamPoint::fn_point(
                rng.rational(2, 3),
                rng.rational(2, 3),
                rng.rational(2, 3),
                rng.rational(2, 3),
            );
            let v = pt.fn_field();
            let cands = default_fn_candidates(&pt.c, 4);
            for hit in search(&v, 4, &cands).unwrap() {
                let k = Cofactor::new(hit.cofactor.clone()).unwrap();
                for f in &hit.basis {
                    let rep = verify(f, &k, &v, &ParamConstraint::empty()).unwrap();
                    assert!(rep.valid);
                }
            }
        }
    }
}
