//! Exact revised simplex.
//!
//! The primal problem is `minimize c.w  subject to  a_j . w >= b_j, w >= 0`
//! with `c >= 0`. We run the simplex method on its dual
//! `maximize b.y  subject to  sum_j y_j a_j <= c, y >= 0`, whose origin is
//! feasible, so no phase one is needed. At the optimum the simplex
//! multipliers are the primal vertex and the basic columns are the tight,
//! linearly independent primal rows. An unbounded dual ray certifies primal
//! infeasibility. Pivoting uses the smallest-index rule on both the entering
//! and leaving choice, which guarantees termination.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::rational::{self, Rational};

/// Where a constraint row came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowTag {
    /// The row w . x >= 1 for a cube point (index in the LP's point encoding).
    HypercubePoint(u64),
    /// w_k - w_{k+1} >= 1, or w_last >= 1 for the final index.
    GapRow(usize),
    /// The row for a point of an extended domain (index in that domain's encoding).
    ExtendedPoint(u64),
    Other,
}

/// `minimize objective . w` over `rows . w >= rhs`, `w >= 0`.
///
/// Rows are stored with integer coefficients; rational rows are scaled by a
/// positive factor on entry, which leaves the feasible set unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    vars: usize,
    coeffs: Vec<i64>,
    rhs: Vec<i64>,
    tags: Vec<RowTag>,
    objective: Vec<Rational>,
}

impl LpProblem {
    /// Problem with objective sum of w.
    pub fn new(vars: usize) -> Self {
        Self::with_objective(vec![Rational::one(); vars])
    }

    pub fn with_objective(objective: Vec<Rational>) -> Self {
        LpProblem {
            vars: objective.len(),
            coeffs: Vec::new(),
            rhs: Vec::new(),
            tags: Vec::new(),
            objective,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn row(&self, j: usize) -> &[i64] {
        &self.coeffs[j * self.vars..(j + 1) * self.vars]
    }

    pub fn rhs(&self, j: usize) -> i64 {
        self.rhs[j]
    }

    pub fn tag(&self, j: usize) -> &RowTag {
        &self.tags[j]
    }

    pub fn push_row(&mut self, coeffs: &[i64], rhs: i64, tag: RowTag) -> Result<()> {
        if coeffs.len() != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                got: coeffs.len(),
            });
        }
        self.coeffs.extend_from_slice(coeffs);
        self.rhs.push(rhs);
        self.tags.push(tag);
        Ok(())
    }

    /// Adds a rational row, scaled to integers.
    pub fn push_rational_row(&mut self, coeffs: &[Rational], rhs: &Rational, tag: RowTag) -> Result<()> {
        let all: Vec<&Rational> = coeffs.iter().chain(core::iter::once(rhs)).collect();
        let (ints, _) = rational::common_integers(all.iter().copied());
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let g = if g.is_zero() { BigInt::one() } else { g };
        let small: Option<Vec<i64>> = ints.iter().map(|v| (v / &g).to_i64()).collect();
        let small = small.ok_or_else(|| invalid("row coefficients too large for the LP engine"))?;
        let (c, r) = small.split_at(coeffs.len());
        self.push_row(c, r[0], tag)
    }

    /// Row value a_j . w.
    pub fn row_value(&self, j: usize, w: &[Rational]) -> Rational {
        self.row(j)
            .iter()
            .zip(w)
            .filter(|(a, _)| **a != 0)
            .map(|(&a, x)| x * Rational::from_integer(a.into()))
            .sum()
    }
}

/// A member of the square system that pins the vertex down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisRow {
    /// Constraint row j holds with equality.
    Constraint(usize),
    /// w_i = 0.
    Nonnegativity(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCertificate {
    pub weights: Vec<Rational>,
    /// Every constraint row satisfied with equality.
    pub tight_rows: Vec<usize>,
    /// A selected subset of tight constraints of full rank determining the vertex.
    pub basis: Vec<BasisRow>,
    pub objective: Rational,
    pub pivots: usize,
}

/// Outcome when the primal has no feasible point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasRay {
    /// y >= 0 with y^T A <= 0 componentwise and y . b > 0.
    pub multipliers: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(VertexCertificate),
    Infeasible(FarkasRay),
}

enum Prices {
    Small(Vec<i128>, i128),
    Big(Vec<BigInt>, BigInt),
}

fn prices(pi: &[Rational], max_abs_coeff: i64, max_abs_rhs: i64) -> Prices {
    let q = rational::lcm_of_denominators(pi.iter());
    let p: Vec<BigInt> = pi.iter().map(|v| v.numer() * (&q / v.denom())).collect();
    let pmax = p.iter().map(|v| v.abs()).max().unwrap_or_default();
    let bound = pmax * BigInt::from(max_abs_coeff.max(1)) * BigInt::from(pi.len().max(1))
        + &q * BigInt::from(max_abs_rhs.max(1));
    if bound.bits() < 120 {
        Prices::Small(p.iter().map(|v| v.to_i128().unwrap()).collect(), q.to_i128().unwrap())
    } else {
        Prices::Big(p, q)
    }
}

/// Solves the problem exactly. The result is deterministic.
pub fn solve(lp: &LpProblem) -> Result<LpOutcome> {
    let m = lp.vars;
    let rows = lp.rows();
    if lp.objective.iter().any(|c| c.is_negative()) {
        return Err(invalid("objective coefficients must be nonnegative"));
    }
    let max_abs_coeff = lp.coeffs.iter().map(|v| v.abs()).max().unwrap_or(0);
    let max_abs_rhs = lp.rhs.iter().map(|v| v.abs()).max().unwrap_or(0);
    // Column ids: 0..rows structural, rows..rows+m slack.
    let mut basis: Vec<usize> = (0..m).map(|i| rows + i).collect();
    let mut binv: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut r = vec![Rational::zero(); m];
            r[i] = Rational::one();
            r
        })
        .collect();
    let mut xb: Vec<Rational> = lp.objective.clone();
    let cost = |col: usize| -> Rational {
        if col < rows {
            Rational::from_integer(lp.rhs[col].into())
        } else {
            Rational::zero()
        }
    };
    let mut pivots = 0usize;
    loop {
        // Simplex multipliers pi = c_B^T B^{-1}.
        let mut pi = vec![Rational::zero(); m];
        for (i, &col) in basis.iter().enumerate() {
            let c = cost(col);
            if c.is_zero() {
                continue;
            }
            for (k, p) in pi.iter_mut().enumerate() {
                if !binv[i][k].is_zero() {
                    *p += &c * &binv[i][k];
                }
            }
        }
        let entering = price(lp, &pi, max_abs_coeff, max_abs_rhs);
        let Some(e) = entering else {
            return Ok(LpOutcome::Optimal(certificate(lp, pi, &basis, pivots)));
        };
        // u = B^{-1} column(e).
        let u: Vec<Rational> = if e < rows {
            let a = lp.row(e);
            binv.iter()
                .map(|r| {
                    r.iter()
                        .zip(a)
                        .filter(|(x, &c)| c != 0 && !x.is_zero())
                        .map(|(x, &c)| x * Rational::from_integer(c.into()))
                        .sum()
                })
                .collect()
        } else {
            binv.iter().map(|r| r[e - rows].clone()).collect()
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !u[i].is_positive() {
                continue;
            }
            let ratio = &xb[i] / &u[i];
            let better = match &leave {
                None => true,
                Some((j, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*j]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return Ok(LpOutcome::Infeasible(farkas(&basis, &u, e, rows)));
        };
        let piv = u[r].clone();
        for v in binv[r].iter_mut() {
            *v /= &piv;
        }
        xb[r] = &xb[r] / &piv;
        let prow = binv[r].clone();
        let px = xb[r].clone();
        for i in 0..m {
            if i == r || u[i].is_zero() {
                continue;
            }
            let f = u[i].clone();
            for (v, p) in binv[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            xb[i] -= &f * &px;
        }
        basis[r] = e;
        pivots += 1;
    }
}

/// First column with positive reduced cost, structural columns before slacks.
fn price(lp: &LpProblem, pi: &[Rational], max_abs_coeff: i64, max_abs_rhs: i64) -> Option<usize> {
    let m = lp.vars;
    let rows = lp.rows();
    match prices(pi, max_abs_coeff, max_abs_rhs) {
        Prices::Small(p, q) => {
            for j in 0..rows {
                let a = lp.row(j);
                let mut s: i128 = 0;
                for k in 0..m {
                    s += p[k] * a[k] as i128;
                }
                if lp.rhs[j] as i128 * q > s {
                    return Some(j);
                }
            }
            (0..m).find(|&i| p[i] < 0).map(|i| rows + i)
        }
        Prices::Big(p, q) => {
            for j in 0..rows {
                let a = lp.row(j);
                let s: BigInt = p.iter().zip(a).map(|(x, &c)| x * c).sum();
                if BigInt::from(lp.rhs[j]) * &q > s {
                    return Some(j);
                }
            }
            (0..m).find(|&i| p[i].is_negative()).map(|i| rows + i)
        }
    }
}

fn farkas(basis: &[usize], u: &[Rational], e: usize, rows: usize) -> FarkasRay {
    // Along the ray the entering variable grows by 1 and basic variables change by -u.
    let mut multipliers = Vec::new();
    if e < rows {
        multipliers.push((e, Rational::one()));
    }
    for (i, &col) in basis.iter().enumerate() {
        if col < rows && !u[i].is_zero() {
            multipliers.push((col, -u[i].clone()));
        }
    }
    multipliers.sort_by_key(|(j, _)| *j);
    FarkasRay { multipliers }
}

fn certificate(lp: &LpProblem, w: Vec<Rational>, basis: &[usize], pivots: usize) -> VertexCertificate {
    let rows = lp.rows();
    let mut sel: Vec<BasisRow> = basis
        .iter()
        .map(|&c| {
            if c < rows {
                BasisRow::Constraint(c)
            } else {
                BasisRow::Nonnegativity(c - rows)
            }
        })
        .collect();
    sel.sort_by_key(|b| match b {
        BasisRow::Constraint(j) => (0, *j),
        BasisRow::Nonnegativity(i) => (1, *i),
    });
    let tight_rows = (0..rows)
        .filter(|&j| lp.row_value(j, &w) == Rational::from_integer(lp.rhs[j].into()))
        .collect();
    let objective = lp.objective.iter().zip(&w).map(|(c, x)| c * x).sum();
    VertexCertificate {
        weights: w,
        tight_rows,
        basis: sel,
        objective,
        pivots,
    }
}

/// Solves and insists on feasibility.
pub fn solve_vertex(lp: &LpProblem) -> Result<VertexCertificate> {
    match solve(lp)? {
        LpOutcome::Optimal(c) => Ok(c),
        LpOutcome::Infeasible(_) => Err(Error::NotThreshold),
    }
}

/// Exact solution of a square system, or None when singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..m {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            let prow = a[col].clone();
            for (v, pv) in a[r].iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
            let bc = b[col].clone();
            b[r] -= &f * &bc;
        }
    }
    Some(b)
}

impl VertexCertificate {
    /// Re-checks feasibility, tightness, rank and uniqueness exactly.
    pub fn verify(&self, lp: &LpProblem) -> Result<()> {
        let m = lp.vars;
        let bad = |msg: &str| Err(Error::Internal(format!("certificate check failed: {msg}")));
        if self.weights.len() != m || self.basis.len() != m {
            return bad("wrong dimensions");
        }
        if self.weights.iter().any(|w| w.is_negative()) {
            return bad("negative weight");
        }
        for j in 0..lp.rows() {
            if lp.row_value(j, &self.weights) < Rational::from_integer(lp.rhs[j].into()) {
                return bad("violated row");
            }
        }
        let mut a = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        for br in &self.basis {
            match *br {
                BasisRow::Constraint(j) => {
                    a.push(lp.row(j).iter().map(|&c| Rational::from_integer(c.into())).collect());
                    b.push(Rational::from_integer(lp.rhs[j].into()));
                }
                BasisRow::Nonnegativity(i) => {
                    let mut r = vec![Rational::zero(); m];
                    r[i] = Rational::one();
                    a.push(r);
                    b.push(Rational::zero());
                }
            }
        }
        match solve_square(a, b) {
            None => bad("selected rows are singular"),
            Some(x) if x != self.weights => bad("selected rows determine a different point"),
            Some(_) => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn lp(rows: &[(&[i64], i64)]) -> LpProblem {
        let mut p = LpProblem::new(rows[0].0.len());
        for (c, b) in rows {
            p.push_row(c, *b, RowTag::Other).unwrap();
        }
        p
    }

    #[test]
    fn tiny_problem() {
        // min w1 + w2 s.t. w1 + 2 w2 >= 4, 3 w1 + w2 >= 6 -> (8/5, 6/5), value 14/5.
        let p = lp(&[(&[1, 2], 4), (&[3, 1], 6)]);
        let c = solve_vertex(&p).unwrap();
        assert_eq!(c.weights, vec![crate::rational::ratio(8, 5), crate::rational::ratio(6, 5)]);
        assert_eq!(c.objective, crate::rational::ratio(14, 5));
        c.verify(&p).unwrap();
    }

    #[test]
    fn infeasible_has_ray() {
        // w1 >= 1 and -w1 >= 0 cannot both hold.
        let p = lp(&[(&[1], 1), (&[-1], 0)]);
        match solve(&p).unwrap() {
            LpOutcome::Infeasible(r) => {
                let combo: Rational = r.multipliers.iter().map(|(j, y)| y * int(p.row(*j)[0])).sum();
                let rhs: Rational = r.multipliers.iter().map(|(j, y)| y * int(p.rhs(*j))).sum();
                assert!(r.multipliers.iter().all(|(_, y)| !y.is_negative()));
                assert!(combo <= int(0) && rhs > int(0));
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn zero_weight_uses_nonnegativity() {
        let p = lp(&[(&[1, 0], 1)]);
        let c = solve_vertex(&p).unwrap();
        assert_eq!(c.weights, vec![int(1), int(0)]);
        assert!(c.basis.contains(&BasisRow::Nonnegativity(1)));
        c.verify(&p).unwrap();
    }

    #[test]
    fn rational_rows_are_scaled() {
        let mut p = LpProblem::new(1);
        p.push_rational_row(&[crate::rational::ratio(1, 2)], &crate::rational::ratio(3, 4), RowTag::Other)
            .unwrap();
        assert_eq!(p.row(0), &[2]);
        assert_eq!(p.rhs(0), 3);
        assert_eq!(solve_vertex(&p).unwrap().weights, vec![crate::rational::ratio(3, 2)]);
    }
}
