//! Exact rational linear algebra: fraction-free Gaussian elimination,
//! null spaces, and affine solves whose right-hand sides carry pending
//! unknowns (used by the cascade to thread kernel freedom through stages).

use crate::expr::{Integer, Rational};
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Affine form `constant + sum coeffs[u] * unknown_u` over the rationals.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LinExpr {
    pub constant: Rational,
    pub coeffs: BTreeMap<u32, Rational>,
}

impl LinExpr {
    pub fn zero() -> LinExpr {
        LinExpr::default()
    }

    pub fn constant(c: Rational) -> LinExpr {
        LinExpr { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn unknown(u: u32) -> LinExpr {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(u, Rational::one());
        LinExpr { constant: Rational::zero(), coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &LinExpr) {
        if c.is_zero() {
            return;
        }
        self.constant += c * &other.constant;
        for (u, k) in &other.coeffs {
            let entry = self.coeffs.entry(*u).or_insert_with(Rational::zero);
            *entry += c * k;
            if entry.is_zero() {
                self.coeffs.remove(u);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> LinExpr {
        if c.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            constant: &self.constant * c,
            coeffs: self.coeffs.iter().map(|(u, k)| (*u, k * c)).collect(),
        }
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), other);
        out
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    /// Replace unknown `u` by `repl` everywhere.
    pub fn substitute(&self, u: u32, repl: &LinExpr) -> LinExpr {
        match self.coeffs.get(&u) {
            None => self.clone(),
            Some(c) => {
                let c = c.clone();
                let mut out = self.clone();
                out.coeffs.remove(&u);
                out.add_scaled(&c, repl);
                out
            }
        }
    }

    /// Evaluate with every unknown set to zero.
    pub fn eval_zero(&self) -> Rational {
        self.constant.clone()
    }
}

/// Clear denominators and divide out the content, preserving the row's
/// rational span. Zero rows stay zero.
fn to_integer_row(row: &[Rational]) -> Vec<Integer> {
    let mut lcm = BigInt::one();
    for r in row {
        if !r.is_zero() {
            lcm = lcm.lcm(r.denom());
        }
    }
    let mut out: Vec<Integer> = row
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect();
    let mut g = BigInt::zero();
    for v in &out {
        g = g.gcd(v);
    }
    if !g.is_zero() && !g.is_one() {
        for v in &mut out {
            *v = &*v / &g;
        }
    }
    out
}

/// Row echelon form over the integers by cross-multiplication, reducing each
/// updated row by its content. Returns the pivot column of each row.
fn echelon(mat: &mut Vec<Vec<Integer>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, pr);
        let (pivot_row, below) = {
            let (head, tail) = mat.split_at_mut(row + 1);
            (&head[row], tail)
        };
        let p = pivot_row[col].clone();
        for r in below.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let g = p.gcd(&r[col]);
            let (pm, rm) = (&r[col] / &g, &p / &g);
            for (dst, src) in r.iter_mut().zip(pivot_row.iter()) {
                *dst = &*dst * &rm - src * &pm;
            }
            let mut content = BigInt::zero();
            for v in r.iter() {
                content = content.gcd(v);
            }
            if !content.is_zero() && !content.is_one() {
                for v in r.iter_mut() {
                    *v = &*v / &content;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == mat.len() {
            break;
        }
    }
    mat.truncate(row);
    pivots
}

/// Rank of a rational matrix given as rows.
pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut mat: Vec<Vec<Integer>> = rows.iter().map(|r| to_integer_row(r)).collect();
    echelon(&mut mat, ncols).len()
}

/// Canonical basis of the right null space `{v : M v = 0}`. One basis vector
/// per free column, with entry 1 at that column, 0 at the other free
/// columns, and the pivot entries back-solved.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut mat: Vec<Vec<Integer>> = rows.iter().map(|r| to_integer_row(r)).collect();
    let pivots = echelon(&mut mat, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        // Back-substitute pivot rows bottom-up.
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = Rational::zero();
            for c in pc + 1..ncols {
                if !mat[ri][c].is_zero() && !v[c].is_zero() {
                    acc += Rational::from_integer(mat[ri][c].clone()) * &v[c];
                }
            }
            if !acc.is_zero() {
                v[pc] = -acc / Rational::from_integer(mat[ri][pc].clone());
            }
        }
        basis.push(v);
    }
    basis
}

/// Basis of the left null space `{w : w^T M = 0}` — the cokernel functionals
/// of the map. Computed as the null space of the transpose.
pub fn left_nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let nrows = rows.len();
    let mut t = vec![vec![Rational::zero(); nrows]; ncols];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                t[j][i] = v.clone();
            }
        }
    }
    nullspace(&t, nrows)
}

/// Result of an exact affine solve `M x = g` where the right-hand side may
/// involve pending unknowns.
pub struct AffineSolve {
    /// A particular solution with every free coordinate set to zero
    /// (supported on pivot columns only).
    pub particular: Vec<LinExpr>,
    /// Indices of the free (non-pivot) columns; the null-space directions.
    pub free_columns: Vec<usize>,
    /// Expressions that must vanish for the system to be consistent, one per
    /// zero row of the echelon form with a nonzero right-hand side.
    pub constraints: Vec<LinExpr>,
}

/// Exact Gaussian elimination on `[M | g]` with rational `M` and affine `g`.
pub fn solve_affine(rows: &[Vec<Rational>], ncols: usize, rhs: &[LinExpr]) -> AffineSolve {
    assert_eq!(rows.len(), rhs.len());
    let mut mat: Vec<Vec<Rational>> = rows.to_vec();
    let mut g: Vec<LinExpr> = rhs.to_vec();
    let nrows = mat.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..nrows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, pr);
        g.swap(row, pr);
        let pinv = mat[row][col].clone().recip();
        for v in mat[row].iter_mut() {
            *v = &*v * &pinv;
        }
        g[row] = g[row].scale(&pinv);
        for r in 0..nrows {
            if r != row && !mat[r][col].is_zero() {
                let factor = -mat[r][col].clone();
                let (pivot_row, target_row) = if r < row {
                    let (a, b) = mat.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = mat.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (dst, src) in target_row.iter_mut().zip(pivot_row.iter()) {
                    *dst = &*dst + &(src * &factor);
                }
                let add = g[row].scale(&factor);
                g[r] = g[r].add(&add);
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == nrows {
            break;
        }
    }
    let mut is_pivot = vec![false; ncols];
    let mut particular = vec![LinExpr::zero(); ncols];
    for &(r, c) in &pivots {
        is_pivot[c] = true;
        particular[c] = g[r].clone();
    }
    let constraints = (row..nrows)
        .filter(|&r| !g[r].is_zero())
        .map(|r| g[r].clone())
        .collect();
    AffineSolve {
        particular,
        free_columns: (0..ncols).filter(|&c| !is_pivot[c]).collect(),
        constraints,
    }
}
