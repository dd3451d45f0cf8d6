//! Identification and partial identification of counterfactual targets.
//!
//! Oracle access is modelled as the affine system it reveals about p(F):
//! classical queries fix every one-way marginal p(f(x)=y), coherent quantum
//! queries additionally fix every two-way marginal p(f(x)=y, f(x')=y').
//! A target Σ_f c_f p(f) is identifiable iff its exact LP range over the
//! feasible part of the simplex has width zero.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::causal::{enumerate_functions, CounterfactualQuery, FunctionDistribution, FunctionTable};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram};
use crate::models;
use crate::rational::{self, ratio, Rational};
use crate::report::ReproductionReport;

#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintLevel {
    OneWay,
    TwoWay,
    /// Explicit rows; the normalization row is added automatically.
    Custom(Vec<(Vec<Rational>, Rational)>),
}

impl ConstraintLevel {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "one-way" | "one_way" | "classical" => Ok(Self::OneWay),
            "two-way" | "two_way" | "quantum" => Ok(Self::TwoWay),
            _ => Err(Error::Parse(format!("unknown constraint level '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowKind {
    Normalization,
    OneWay { x: usize, y: usize },
    TwoWay { x: usize, y: usize, x_prime: usize, y_prime: usize },
    Custom,
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKind::Normalization => write!(f, "sum p(F) = 1"),
            RowKind::OneWay { x, y } => write!(f, "p(Y_{x}={y})"),
            RowKind::TwoWay { x, y, x_prime, y_prime } => write!(f, "p(Y_{x}={y}, Y_{x_prime}={y_prime})"),
            RowKind::Custom => write!(f, "custom"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintRow {
    pub kind: RowKind,
    pub coefficients: Vec<Rational>,
    pub rhs: Rational,
}

/// Affine system A·p = b over the function tables of one (n_x, n_y), with
/// the normalization row present exactly once (as the first row).
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    n_x: usize,
    n_y: usize,
    rows: Vec<ConstraintRow>,
}

fn indicator_row(tables: &[FunctionTable], q: &CounterfactualQuery) -> Vec<Rational> {
    tables.iter().map(|f| if q.holds_for(f) { Rational::one() } else { Rational::zero() }).collect()
}

impl ConstraintSystem {
    /// System from explicit rows; the normalization row is prepended.
    pub fn new(n_x: usize, n_y: usize, rows: Vec<ConstraintRow>) -> Result<Self> {
        let width = crate::causal::table_count(n_x, n_y)?;
        if rows.iter().any(|r| r.kind == RowKind::Normalization) {
            return Err(Error::Contract("normalization row is added automatically".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.coefficients.len() != width) {
            return Err(Error::DimensionMismatch { expected: width, found: r.coefficients.len() });
        }
        let mut all = vec![ConstraintRow {
            kind: RowKind::Normalization,
            coefficients: vec![Rational::one(); width],
            rhs: Rational::one(),
        }];
        all.extend(rows);
        Ok(Self { n_x, n_y, rows: all })
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn n_vars(&self) -> usize {
        self.rows[0].coefficients.len()
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    /// Adds rows fixing the given queries to the given values.
    pub fn with_queries(&self, fixed: &[(CounterfactualQuery, Rational)]) -> Result<Self> {
        let tables = enumerate_functions(self.n_x, self.n_y)?;
        let mut out = self.clone();
        for (q, v) in fixed {
            q.check(self.n_x, self.n_y)?;
            out.rows.push(ConstraintRow {
                kind: RowKind::Custom,
                coefficients: indicator_row(&tables, q),
                rhs: v.clone(),
            });
        }
        Ok(out)
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.coefficients.clone()).collect()
    }

    pub fn linear_program(&self) -> LinearProgram {
        LinearProgram::new(self.n_vars(), self.matrix(), self.rows.iter().map(|r| r.rhs.clone()).collect())
            .expect("rows have uniform width")
    }

    pub fn is_satisfied_by(&self, p: &FunctionDistribution) -> Result<bool> {
        if p.n_x() != self.n_x || p.n_y() != self.n_y {
            return Ok(false);
        }
        Ok(self.linear_program().is_feasible_point(&p.dense()?))
    }

    /// Particular solution and null-space basis of the affine hull of the
    /// system (ignoring nonnegativity).
    pub fn affine_solution_family(&self) -> Result<(Vec<Rational>, Vec<Vec<Rational>>)> {
        let n = self.n_vars();
        let mut aug: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .map(|r| {
                let mut row = r.coefficients.clone();
                row.push(r.rhs.clone());
                row
            })
            .collect();
        let pivots = lp::rref(&mut aug);
        if pivots.contains(&n) {
            return Err(Error::Infeasible { residual: "affine system inconsistent".into(), certificate: vec![] });
        }
        let mut particular = vec![Rational::zero(); n];
        for (row, &p) in pivots.iter().enumerate() {
            particular[p] = aug[row][n].clone();
        }
        Ok((particular, lp::null_space(&self.matrix(), n)))
    }
}

/// Marginal constraints of `level` with right-hand sides taken from `truth`.
pub fn build_constraints(truth: &FunctionDistribution, level: &ConstraintLevel) -> Result<ConstraintSystem> {
    let (n_x, n_y) = (truth.n_x(), truth.n_y());
    let tables = enumerate_functions(n_x, n_y)?;
    let mut rows = Vec::new();
    let mut push = |kind: RowKind, q: CounterfactualQuery| -> Result<()> {
        rows.push(ConstraintRow { kind, coefficients: indicator_row(&tables, &q), rhs: truth.joint(&q)? });
        Ok(())
    };
    match level {
        ConstraintLevel::Custom(explicit) => {
            let rows = explicit
                .iter()
                .map(|(c, b)| ConstraintRow { kind: RowKind::Custom, coefficients: c.clone(), rhs: b.clone() })
                .collect();
            return ConstraintSystem::new(n_x, n_y, rows);
        }
        ConstraintLevel::OneWay | ConstraintLevel::TwoWay => {
            for x in 0..n_x {
                for y in 0..n_y {
                    push(RowKind::OneWay { x, y }, CounterfactualQuery::new(vec![(x, y)])?)?;
                }
            }
        }
    }
    if *level == ConstraintLevel::TwoWay {
        for x in 0..n_x {
            for x_prime in x + 1..n_x {
                for y in 0..n_y {
                    for y_prime in 0..n_y {
                        push(
                            RowKind::TwoWay { x, y, x_prime, y_prime },
                            CounterfactualQuery::new(vec![(x, y), (x_prime, y_prime)])?,
                        )?;
                    }
                }
            }
        }
    }
    ConstraintSystem::new(n_x, n_y, rows)
}

/// Σ_f c_f p(f) over the canonical table order.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearTarget {
    coefficients: Vec<Rational>,
}

impl LinearTarget {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        Self { coefficients }
    }

    /// The joint counterfactual p(Y_{x_1}=y_1, …) as a linear target.
    pub fn joint(n_x: usize, n_y: usize, q: &CounterfactualQuery) -> Result<Self> {
        q.check(n_x, n_y)?;
        Ok(Self::new(indicator_row(&enumerate_functions(n_x, n_y)?, q)))
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn evaluate(&self, p: &FunctionDistribution) -> Result<Rational> {
        let dense = p.dense()?;
        if dense.len() != self.coefficients.len() {
            return Err(Error::DimensionMismatch { expected: self.coefficients.len(), found: dense.len() });
        }
        Ok(dense.iter().zip(&self.coefficients).fold(Rational::zero(), |acc, (p, c)| acc + p * c))
    }

    fn check(&self, sys: &ConstraintSystem) -> Result<()> {
        if self.coefficients.len() != sys.n_vars() {
            return Err(Error::DimensionMismatch { expected: sys.n_vars(), found: self.coefficients.len() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lo: Rational,
    pub hi: Rational,
}

impl Bounds {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.lo <= *v && *v <= self.hi
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", rational::format(&self.lo), rational::format(&self.hi))
    }
}

/// Exact range of the target over the feasible part of the simplex,
/// by simplex.
pub fn lp_bounds(target: &LinearTarget, sys: &ConstraintSystem) -> Result<Bounds> {
    target.check(sys)?;
    let lp = sys.linear_program();
    let lo = lp.minimize(target.coefficients())?.value;
    let hi = lp.maximize(target.coefficients())?.value;
    Ok(Bounds { lo, hi })
}

/// Same range computed by enumerating the vertices of the feasible polytope.
pub fn lp_bounds_by_vertices(target: &LinearTarget, sys: &ConstraintSystem) -> Result<Bounds> {
    target.check(sys)?;
    let vertices = sys.linear_program().vertices()?;
    let values: Vec<Rational> = vertices
        .iter()
        .map(|v| v.iter().zip(target.coefficients()).fold(Rational::zero(), |a, (x, c)| a + x * c))
        .collect();
    let lo = values.iter().min().cloned();
    let hi = values.iter().max().cloned();
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok(Bounds { lo, hi }),
        _ => Err(Error::Infeasible { residual: "no feasible vertex".into(), certificate: vec![] }),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Identification {
    pub bounds: Bounds,
    pub identifiable: bool,
    /// Lexicographically smallest feasible vertex attaining `bounds.lo`.
    pub witness_lo: FunctionDistribution,
    /// Lexicographically smallest feasible vertex attaining `bounds.hi`.
    pub witness_hi: FunctionDistribution,
}

pub fn is_identifiable(target: &LinearTarget, sys: &ConstraintSystem) -> Result<Identification> {
    target.check(sys)?;
    let lp = sys.linear_program();
    let lo = lp.lexicographic_optimum(target.coefficients(), false)?;
    let hi = lp.lexicographic_optimum(target.coefficients(), true)?;
    let bounds = Bounds { lo: lo.value, hi: hi.value };
    Ok(Identification {
        identifiable: bounds.width().is_zero(),
        bounds,
        witness_lo: FunctionDistribution::from_dense(sys.n_x, sys.n_y, &lo.x)?,
        witness_hi: FunctionDistribution::from_dense(sys.n_x, sys.n_y, &hi.x)?,
    })
}

/// Equal mixtures of permutations and of constant maps agree on every
/// conditional (1/n) but disagree on p(Y_x=y, Y_{x'}=y) for x ≠ x'.
pub fn reproduce_appendix_b(n: usize) -> Result<ReproductionReport> {
    if n < 2 {
        return Err(Error::Domain("appendix B needs n ≥ 2".into()));
    }
    let perms = models::permutation_mixture(n)?;
    let consts = models::constant_mixture(n)?;
    let mut report = ReproductionReport::new(format!("appendix_b_n{n}"));
    let one_over_n = ratio(1, n as i64);
    let mut cond_ok = true;
    for x in 0..n {
        cond_ok &= perms.conditional(x)?.iter().all(|v| *v == one_over_n);
        cond_ok &= consts.conditional(x)?.iter().all(|v| *v == one_over_n);
    }
    report.check(
        "both models give p(Y=y|X=x) = 1/n for all x, y",
        rational::format(&one_over_n),
        if cond_ok { rational::format(&one_over_n) } else { "mismatch".into() },
        cond_ok,
    );
    let mut perm_zero = true;
    let mut const_value = true;
    for x in 0..n {
        for x_prime in (0..n).filter(|&v| v != x) {
            for y in 0..n {
                let q = CounterfactualQuery::new(vec![(x, y), (x_prime, y)])?;
                perm_zero &= perms.joint(&q)?.is_zero();
                const_value &= consts.joint(&q)? == one_over_n;
            }
        }
    }
    let q = CounterfactualQuery::new(vec![(0, 0), (1, 0)])?;
    report.exact("permutations: p(Y_0=0, Y_1=0)", &Rational::zero(), &perms.joint(&q)?);
    report.exact("constants: p(Y_0=0, Y_1=0)", &one_over_n, &consts.joint(&q)?);
    report.holds("permutations give p(Y_x=y, Y_x'=y) = 0 for every x ≠ x', y", perm_zero);
    report.holds("constants give p(Y_x=y, Y_x'=y) = 1/n for every x ≠ x', y", const_value);
    Ok(report)
}

/// The n-way target p(Y_0=1, Y_1=1, Y_2=1, Y_3=t_0, …) for binary outputs.
pub fn tail_target(tail: &[usize]) -> Result<(CounterfactualQuery, LinearTarget)> {
    let mut pairs = vec![(0, 1), (1, 1), (2, 1)];
    pairs.extend(tail.iter().enumerate().map(|(i, &y)| (i + 3, y)));
    let q = CounterfactualQuery::new(pairs)?;
    let target = LinearTarget::joint(3 + tail.len(), 2, &q)?;
    Ok((q, target))
}

/// Classical and quantum systems for the binary-output example on
/// 3 + tail.len() inputs, generated by the model that is uniform on the
/// first three outputs and fixed on the tail.
pub fn appendix_e_systems(tail: &[usize]) -> Result<(ConstraintSystem, ConstraintSystem)> {
    let truth = models::uniform_head_with_tail(tail)?;
    Ok((build_constraints(&truth, &ConstraintLevel::OneWay)?, build_constraints(&truth, &ConstraintLevel::TwoWay)?))
}

/// Classical maximum ½ versus quantum maximum ¼ for the n-way target with
/// a fixed tail on inputs 3, …, n−1.
pub fn reproduce_appendix_e_general(n: usize, tail: &[usize]) -> Result<ReproductionReport> {
    if n < 3 || tail.len() != n - 3 {
        return Err(Error::Domain(format!("need n ≥ 3 and a tail of length n − 3 (n = {n}, tail {tail:?})")));
    }
    let (classical, quantum) = appendix_e_systems(tail)?;
    let (q, target) = tail_target(tail)?;
    let cb = lp_bounds(&target, &classical)?;
    let qb = lp_bounds(&target, &quantum)?;
    let mut report = ReproductionReport::new(format!("appendix_e_general_n{n}"));
    report.exact(format!("classical upper bound on p({q})"), &ratio(1, 2), &cb.hi);
    report.exact(format!("quantum upper bound on p({q})"), &ratio(1, 4), &qb.hi);
    report.exact("classical lower bound", &Rational::zero(), &cb.lo);
    report.exact("quantum lower bound", &Rational::zero(), &qb.lo);
    let correlated = models::perfectly_correlated(tail)?;
    report.holds("perfectly correlated model is classically feasible", classical.is_satisfied_by(&correlated)?);
    report.exact("perfectly correlated model value", &ratio(1, 2), &target.evaluate(&correlated)?);
    report.holds("quantum range strictly tighter", qb.width() < cb.width());
    Ok(report)
}

/// Target and generating model separating two-way from one-way bounds at
/// cardinality n ∈ {2, 3, 4, …}: the binary conditional-counterfactual
/// numerator for n = 2, the tail-extended binary example for n ≥ 3.
pub fn separation_instance(n: usize) -> Result<(LinearTarget, FunctionDistribution)> {
    match n {
        0 | 1 => Err(Error::Domain("separation needs n ≥ 2".into())),
        2 => {
            let q = CounterfactualQuery::new(vec![(0, 0), (1, 0)])?;
            Ok((LinearTarget::joint(2, 2, &q)?, models::identity_flip_mix()))
        }
        _ => {
            let tail = vec![0; n - 3];
            Ok((tail_target(&tail)?.1, models::uniform_head_with_tail(&tail)?))
        }
    }
}

/// Sign pattern of the null direction of the uniform two-way system on three inputs.
pub fn quantum_family_direction() -> Vec<Rational> {
    [-1, 1, 1, -1, 1, -1, -1, 1].iter().map(|&v| Rational::from_integer(v.into())).collect()
}

/// True when `v` is a nonzero multiple of `dir`.
pub fn is_parallel(v: &[Rational], dir: &[Rational]) -> bool {
    let Some(k) = dir.iter().position(|d| !d.is_zero()) else {
        return false;
    };
    if v[k].is_zero() {
        return false;
    }
    let scale = &v[k] / &dir[k];
    v.iter().zip(dir).all(|(a, b)| *a == &scale * b)
}

/// True when every entry is nonnegative.
pub fn nonnegative(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

#[derive(Debug, Serialize)]
pub struct BoundsJson {
    pub lo: String,
    pub hi: String,
    pub identifiable: bool,
    pub witness_lo: std::collections::BTreeMap<String, String>,
    pub witness_hi: std::collections::BTreeMap<String, String>,
}

impl From<&Identification> for BoundsJson {
    fn from(id: &Identification) -> Self {
        Self {
            lo: rational::format(&id.bounds.lo),
            hi: rational::format(&id.bounds.hi),
            identifiable: id.identifiable,
            witness_lo: crate::io::weights_map(&id.witness_lo),
            witness_hi: crate::io::weights_map(&id.witness_hi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn one_way_binary_rows() {
        let sys = build_constraints(&models::identity_flip_mix(), &ConstraintLevel::OneWay).unwrap();
        assert_eq!(sys.rows()[0].kind, RowKind::Normalization);
        // p(f(0)=0): ℝ₀ (index 0) and 𝕀 (index 1)
        let r = sys.rows().iter().find(|r| r.kind == RowKind::OneWay { x: 0, y: 0 }).unwrap();
        assert_eq!(r.coefficients, vec![int(1), int(1), int(0), int(0)]);
        assert_eq!(r.rhs, ratio(1, 2));
        // p(f(1)=0): ℝ₀ and 𝔽
        let r = sys.rows().iter().find(|r| r.kind == RowKind::OneWay { x: 1, y: 0 }).unwrap();
        assert_eq!(r.coefficients, vec![int(1), int(0), int(1), int(0)]);
        assert_eq!(r.rhs, ratio(1, 2));
    }

    #[test]
    fn two_way_rows_for_three_inputs() {
        let truth = models::uniform_head_with_tail(&[]).unwrap();
        let sys = build_constraints(&truth, &ConstraintLevel::TwoWay).unwrap();
        let two_way: Vec<_> = sys.rows().iter().filter(|r| matches!(r.kind, RowKind::TwoWay { .. })).collect();
        assert_eq!(two_way.len(), 12);
        assert!(two_way.iter().all(|r| r.rhs == ratio(1, 4)));
        // (Y0=1, Y1=1) is g + h
        let gh = two_way.iter().find(|r| r.kind == RowKind::TwoWay { x: 0, y: 1, x_prime: 1, y_prime: 1 }).unwrap();
        assert_eq!(gh.coefficients, [0, 0, 0, 0, 0, 0, 1, 1].map(int).to_vec());
    }

    #[test]
    fn single_input_system() {
        let p = FunctionDistribution::point_mass(FunctionTable::new(2, vec![1]).unwrap());
        let sys = build_constraints(&p, &ConstraintLevel::TwoWay).unwrap();
        assert_eq!(sys.rows().len(), 3);
        let sys1 = build_constraints(&FunctionDistribution::uniform(1, 1).unwrap(), &ConstraintLevel::OneWay).unwrap();
        assert_eq!(sys1.rows().len(), 2);
    }

    #[test]
    fn binary_identification() {
        let sys = build_constraints(&models::identity_flip_mix(), &ConstraintLevel::OneWay).unwrap();
        let t = LinearTarget::joint(2, 2, &CounterfactualQuery::new(vec![(0, 0), (1, 0)]).unwrap()).unwrap();
        let id = is_identifiable(&t, &sys).unwrap();
        assert!(!id.identifiable);
        assert_eq!(id.bounds, Bounds { lo: int(0), hi: ratio(1, 2) });
        assert_eq!(id.witness_lo, models::identity_flip_mix());
        assert_eq!(id.witness_hi, models::reset_mix());

        let sys2 = build_constraints(&models::identity_flip_mix(), &ConstraintLevel::TwoWay).unwrap();
        for f in enumerate_functions(2, 2).unwrap() {
            let t = LinearTarget::new(
                enumerate_functions(2, 2).unwrap().iter().map(|g| if *g == f { int(1) } else { int(0) }).collect(),
            );
            assert!(is_identifiable(&t, &sys2).unwrap().identifiable);
        }
    }

    #[test]
    fn model_a_three_way_not_identifiable() {
        let sys = build_constraints(&models::model_a(), &ConstraintLevel::TwoWay).unwrap();
        assert!(sys.is_satisfied_by(&models::model_b()).unwrap());
        let t = LinearTarget::joint(3, 3, &CounterfactualQuery::new(vec![(0, 0), (1, 1), (2, 2)]).unwrap()).unwrap();
        let id = is_identifiable(&t, &sys).unwrap();
        assert!(!id.identifiable);
        assert!(id.bounds.contains(&ratio(1, 27)));
        assert!(id.bounds.contains(&ratio(1, 9)));
        assert_eq!(t.evaluate(&id.witness_lo).unwrap(), id.bounds.lo);
        assert_eq!(t.evaluate(&id.witness_hi).unwrap(), id.bounds.hi);
    }

    #[test]
    fn appendix_b_reports() {
        for n in [2, 3] {
            assert!(reproduce_appendix_b(n).unwrap().passed());
        }
        assert!(reproduce_appendix_b(1).is_err());
    }

    #[test]
    fn appendix_e_general_reports() {
        assert!(reproduce_appendix_e_general(3, &[]).unwrap().passed());
        assert!(reproduce_appendix_e_general(4, &[0]).unwrap().passed());
        assert!(reproduce_appendix_e_general(4, &[]).is_err());
    }

    #[test]
    fn vertex_route_matches_simplex() {
        let (classical, quantum) = appendix_e_systems(&[]).unwrap();
        let (_, t) = tail_target(&[]).unwrap();
        for sys in [&classical, &quantum] {
            assert_eq!(lp_bounds(&t, sys).unwrap(), lp_bounds_by_vertices(&t, sys).unwrap());
        }
    }

    #[test]
    fn custom_systems() {
        let lvl = ConstraintLevel::Custom(vec![(vec![int(1), int(0), int(0), int(0)], ratio(1, 3))]);
        let sys = build_constraints(&models::reset_mix(), &lvl).unwrap();
        assert_eq!(sys.rows().len(), 2);
        let bad = ConstraintLevel::Custom(vec![(vec![int(1)], int(1))]);
        assert!(build_constraints(&models::reset_mix(), &bad).is_err());
        assert_eq!(ConstraintLevel::parse("two-way").unwrap(), ConstraintLevel::TwoWay);
        assert!(ConstraintLevel::parse("three-way").is_err());
    }

    #[test]
    fn infeasible_custom_system() {
        let lvl = ConstraintLevel::Custom(vec![(vec![int(1), int(1), int(1), int(1)], int(2))]);
        let sys = build_constraints(&models::reset_mix(), &lvl).unwrap();
        let t = LinearTarget::new(vec![int(1), int(0), int(0), int(0)]);
        assert!(matches!(lp_bounds(&t, &sys), Err(Error::Infeasible { .. })));
    }
}
