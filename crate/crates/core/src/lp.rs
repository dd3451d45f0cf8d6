//! Exact rational linear programming over { x ≥ 0 : A x = b }.
//!
//! Two routes are provided: a dense two-phase tableau simplex with Bland's
//! anti-cycling rule, and brute-force enumeration of basic feasible solutions
//! for small instances. They share nothing beyond the row-reduction helpers.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest variable count accepted by [`LinearProgram::vertices`].
pub const VERTEX_ENUMERATION_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    n_vars: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (u, v)| acc + u * v)
}

impl LinearProgram {
    pub fn new(n_vars: usize, rows: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Result<Self> {
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), found: rhs.len() });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n_vars) {
            return Err(Error::DimensionMismatch { expected: n_vars, found: r.len() });
        }
        Ok(Self { n_vars, rows, rhs })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn with_row(&self, row: Vec<Rational>, rhs: Rational) -> Result<Self> {
        let mut rows = self.rows.clone();
        let mut b = self.rhs.clone();
        rows.push(row);
        b.push(rhs);
        Self::new(self.n_vars, rows, b)
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.n_vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().zip(&self.rhs).all(|(r, b)| dot(r, x) == *b)
    }

    pub fn minimize(&self, cost: &[Rational]) -> Result<LpSolution> {
        if cost.len() != self.n_vars {
            return Err(Error::DimensionMismatch { expected: self.n_vars, found: cost.len() });
        }
        let mut t = Tableau::phase_one(self);
        t.run_phase_one()?;
        t.run_phase_two(cost)?;
        let x = t.solution();
        Ok(LpSolution { value: dot(cost, &x), x })
    }

    pub fn maximize(&self, cost: &[Rational]) -> Result<LpSolution> {
        let neg: Vec<Rational> = cost.iter().map(|c| -c).collect();
        let sol = self.minimize(&neg)?;
        Ok(LpSolution { value: -sol.value, x: sol.x })
    }

    /// Among all optimal points, the lexicographically smallest one
    /// (minimizing x₀, then x₁, …). It is always a vertex.
    pub fn lexicographic_optimum(&self, cost: &[Rational], maximize: bool) -> Result<LpSolution> {
        if cost.len() != self.n_vars {
            return Err(Error::DimensionMismatch { expected: self.n_vars, found: cost.len() });
        }
        let signed: Vec<Rational> = if maximize { cost.iter().map(|c| -c).collect() } else { cost.to_vec() };
        let mut t = Tableau::phase_one(self);
        t.run_phase_one()?;
        let mut allowed = vec![true; self.n_vars];
        t.optimize_restricted(&signed, &mut allowed)?;
        for k in 0..self.n_vars {
            let mut unit = vec![Rational::zero(); self.n_vars];
            unit[k] = Rational::one();
            t.optimize_restricted(&unit, &mut allowed)?;
        }
        let x = t.solution();
        Ok(LpSolution { value: dot(cost, &x), x })
    }

    /// All basic feasible solutions, deduplicated, in discovery order.
    pub fn vertices(&self) -> Result<Vec<Vec<Rational>>> {
        if self.n_vars > VERTEX_ENUMERATION_LIMIT {
            return Err(Error::Unsupported(format!(
                "vertex enumeration limited to {VERTEX_ENUMERATION_LIMIT} variables, got {}",
                self.n_vars
            )));
        }
        let mut aug: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, b)| {
                let mut row = r.clone();
                row.push(b.clone());
                row
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.contains(&self.n_vars) {
            return Ok(Vec::new());
        }
        let rank = pivots.len();
        aug.truncate(rank);
        let mut found: Vec<Vec<Rational>> = Vec::new();
        for cols in combinations(self.n_vars, rank) {
            let mut sub: Vec<Vec<Rational>> = aug
                .iter()
                .map(|row| {
                    let mut r: Vec<Rational> = cols.iter().map(|&c| row[c].clone()).collect();
                    r.push(row[self.n_vars].clone());
                    r
                })
                .collect();
            if rref(&mut sub) != (0..rank).collect::<Vec<_>>() {
                continue;
            }
            let mut x = vec![Rational::zero(); self.n_vars];
            for (i, &c) in cols.iter().enumerate() {
                x[c] = sub[i][rank].clone();
            }
            if x.iter().all(|v| !v.is_negative()) && !found.contains(&x) {
                found.push(x);
            }
        }
        Ok(found)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in (0..rows).filter(|&i| i != r) {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            let pivot_row = m[r].clone();
            for (v, pv) in m[i].iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of { v : A v = 0 }, one vector per free column.
pub fn null_space(a: &[Vec<Rational>], n_vars: usize) -> Vec<Vec<Rational>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    (0..n_vars)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); n_vars];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

pub fn rank(a: &[Vec<Rational>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

/// Dense tableau B⁻¹[A | I | b] over original and artificial columns.
struct Tableau {
    n: usize,
    m: usize,
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// +1 or −1 per original row, so that the working rhs is nonnegative.
    signs: Vec<Rational>,
}

impl Tableau {
    fn phase_one(lp: &LinearProgram) -> Self {
        let (n, m) = (lp.n_vars, lp.rows.len());
        let mut t = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut signs = Vec::with_capacity(m);
        for (i, (row, b)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
            let s = if b.is_negative() { -Rational::one() } else { Rational::one() };
            let mut r: Vec<Rational> = row.iter().map(|v| v * &s).collect();
            r.extend((0..m).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
            t.push(r);
            rhs.push(b * &s);
            signs.push(s);
        }
        Self { n, m, t, rhs, basis: (n..n + m).collect(), signs }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = Rational::one() / &self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v *= &inv;
        }
        self.rhs[row] *= &inv;
        let width = self.t[row].len();
        for i in (0..self.t.len()).filter(|&i| i != row) {
            if self.t[i][col].is_zero() {
                continue;
            }
            let factor = self.t[i][col].clone();
            for j in 0..width {
                let delta = &factor * &self.t[row][j];
                self.t[i][j] -= delta;
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[i] -= delta;
        }
        self.basis[row] = col;
    }

    fn reduced_costs(&self, cost: &[Rational], columns: usize) -> Vec<Rational> {
        (0..columns)
            .map(|j| {
                let z =
                    self.basis.iter().enumerate().fold(Rational::zero(), |acc, (i, &b)| acc + &cost[b] * &self.t[i][j]);
                &cost[j] - z
            })
            .collect()
    }

    fn ratio_test(&self, enter: usize) -> Option<usize> {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..self.t.len() {
            let a = &self.t[i][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / a;
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        leave.map(|(i, _)| i)
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving
    /// basic variable among ratio-test ties.
    fn optimize(&mut self, cost: &[Rational], columns: usize) -> Result<()> {
        loop {
            let d = self.reduced_costs(cost, columns);
            let Some(enter) = (0..columns).find(|&j| d[j].is_negative()) else {
                return Ok(());
            };
            let row = self.ratio_test(enter).ok_or(Error::Unbounded)?;
            self.pivot(row, enter);
        }
    }

    /// Optimizes over the current optimal face, then shrinks the face by
    /// disallowing every nonbasic column with a positive reduced cost.
    fn optimize_restricted(&mut self, cost: &[Rational], allowed: &mut [bool]) -> Result<()> {
        let mut full = cost.to_vec();
        full.extend((0..self.m).map(|_| Rational::zero()));
        loop {
            let d = self.reduced_costs(&full, self.n);
            let Some(enter) = (0..self.n).find(|&j| allowed[j] && d[j].is_negative()) else {
                for j in 0..self.n {
                    if d[j].is_positive() {
                        allowed[j] = false;
                    }
                }
                return Ok(());
            };
            let row = self.ratio_test(enter).ok_or(Error::Unbounded)?;
            self.pivot(row, enter);
        }
    }

    fn run_phase_one(&mut self) -> Result<()> {
        let (n, m) = (self.n, self.m);
        let mut cost = vec![Rational::zero(); n + m];
        for c in cost.iter_mut().skip(n) {
            *c = Rational::one();
        }
        self.optimize(&cost, n + m)?;
        let residual = rational::sum(self.basis.iter().zip(&self.rhs).filter(|(&b, _)| b >= n).map(|(_, v)| v));
        if residual.is_positive() {
            // Phase-one duals y = c_Bᵀ B⁻¹ give yᵀA ≤ 0 and yᵀb = residual > 0
            // for the sign-normalized rows; undo the normalization.
            let certificate: Vec<String> = (0..m)
                .map(|k| {
                    let y = self
                        .basis
                        .iter()
                        .enumerate()
                        .fold(Rational::zero(), |acc, (i, &b)| acc + &cost[b] * &self.t[i][n + k]);
                    rational::format(&(y * &self.signs[k]))
                })
                .collect();
            return Err(Error::Infeasible { residual: rational::format(&residual), certificate });
        }
        // Pivot zero-level artificials out of the basis, dropping rows that
        // turn out to be redundant.
        let mut i = 0;
        while i < self.t.len() {
            if self.basis[i] >= n {
                match (0..n).find(|&j| !self.t[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.t.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        Ok(())
    }

    fn run_phase_two(&mut self, cost: &[Rational]) -> Result<()> {
        let mut full = cost.to_vec();
        full.extend((0..self.m).map(|_| Rational::zero()));
        self.optimize(&full, self.n)
    }

    fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn simple_simplex() {
        // x + y + z = 1, x - y = 0
        let lp = LinearProgram::new(3, vec![q(&[1, 1, 1]), q(&[1, -1, 0])], q(&[1, 0])).unwrap();
        let max_x = lp.maximize(&q(&[1, 0, 0])).unwrap();
        assert_eq!(max_x.value, ratio(1, 2));
        assert!(lp.is_feasible_point(&max_x.x));
        let min_x = lp.minimize(&q(&[1, 0, 0])).unwrap();
        assert_eq!(min_x.value, int(0));
        assert_eq!(lp.vertices().unwrap().len(), 2);
    }

    #[test]
    fn redundant_and_negative_rows() {
        let lp = LinearProgram::new(2, vec![q(&[1, 1]), q(&[2, 2]), q(&[-1, -1])], q(&[1, 2, -1])).unwrap();
        assert_eq!(lp.maximize(&q(&[0, 1])).unwrap().value, int(1));
        assert_eq!(lp.vertices().unwrap().len(), 2);
    }

    #[test]
    fn infeasible_certificate() {
        let lp = LinearProgram::new(2, vec![q(&[1, 1]), q(&[1, 1])], q(&[1, 2])).unwrap();
        match lp.minimize(&q(&[0, 0])) {
            Err(Error::Infeasible { certificate, .. }) => {
                let y: Vec<Rational> = certificate.iter().map(|s| rational::parse(s).unwrap()).collect();
                let rows = [q(&[1, 1]), q(&[1, 1])];
                for j in 0..2 {
                    let ya: Rational = (0..2).map(|i| &y[i] * &rows[i][j]).sum();
                    assert!(!ya.is_positive());
                }
                let yb = &y[0] * int(1) + &y[1] * int(2);
                assert!(yb.is_positive());
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
        assert!(lp.vertices().unwrap().is_empty());
    }

    #[test]
    fn unbounded_detected() {
        let lp = LinearProgram::new(2, vec![q(&[1, -1])], q(&[0])).unwrap();
        assert_eq!(lp.maximize(&q(&[1, 0])), Err(Error::Unbounded));
    }

    #[test]
    fn lexicographic_tie_break() {
        // max x0 + x1 on the simplex in R^3 has optimal face {x2 = 0}.
        let lp = LinearProgram::new(3, vec![q(&[1, 1, 1])], q(&[1])).unwrap();
        let sol = lp.lexicographic_optimum(&q(&[1, 1, 0]), true).unwrap();
        assert_eq!(sol.x, q(&[0, 1, 0]));
    }

    fn sequential_lex(lp: &LinearProgram, cost: &[Rational]) -> Vec<Rational> {
        let best = lp.minimize(cost).unwrap();
        let mut lp = lp.with_row(cost.to_vec(), best.value).unwrap();
        let mut x = best.x;
        for k in 0..lp.n_vars() {
            let mut unit = vec![Rational::zero(); lp.n_vars()];
            unit[k] = Rational::one();
            let sol = lp.minimize(&unit).unwrap();
            x = sol.x;
            lp = lp.with_row(unit, sol.value).unwrap();
        }
        x
    }

    #[test]
    fn lexicographic_matches_sequential_solves() {
        let lp = LinearProgram::new(
            6,
            vec![q(&[1, 1, 1, 1, 1, 1]), q(&[1, -1, 0, 1, 0, -1]), q(&[0, 1, 1, 0, 0, 0])],
            q(&[1, 0, 1]),
        )
        .unwrap();
        for cost in [q(&[0, 0, 0, 0, 0, 0]), q(&[1, 0, -1, 2, 0, 0]), q(&[0, 0, 0, -1, -1, 1])] {
            assert_eq!(lp.lexicographic_optimum(&cost, false).unwrap().x, sequential_lex(&lp, &cost));
        }
    }

    #[test]
    fn null_space_of_rank_one() {
        let ns = null_space(&[q(&[1, 1, 1])], 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(dot(&q(&[1, 1, 1]), &v), int(0));
        }
        assert_eq!(rank(&[q(&[1, 2]), q(&[2, 4])]), 1);
    }
}
