//! Response-function causal models over finite variables.
//!
//! A model of the single edge X → Y is a distribution p(F) over deterministic
//! response functions f: [n_x] → [n_y]. Every observational, interventional and
//! counterfactual quantity for this structure is a linear functional of p(F),
//! and all of them are computed here in exact rational arithmetic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest number of function tables an operation will enumerate.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Number of tables n_y^n_x, failing if it exceeds `cap`.
pub fn table_count_with_cap(n_x: usize, n_y: usize, cap: usize) -> Result<usize> {
    check_cardinalities(n_x, n_y)?;
    let too_many = || Error::EnumerationCap { requested: format!("{n_y}^{n_x}"), cap };
    let exp = u32::try_from(n_x).map_err(|_| too_many())?;
    let count = (n_y as u128).checked_pow(exp).ok_or_else(too_many)?;
    if count > cap as u128 {
        return Err(too_many());
    }
    Ok(count as usize)
}

pub fn table_count(n_x: usize, n_y: usize) -> Result<usize> {
    table_count_with_cap(n_x, n_y, DEFAULT_ENUMERATION_CAP)
}

fn check_cardinalities(n_x: usize, n_y: usize) -> Result<()> {
    if n_x == 0 || n_y == 0 {
        return Err(Error::Domain(format!("cardinalities must be positive (n_x={n_x}, n_y={n_y})")));
    }
    Ok(())
}

/// One deterministic response function f: [n_x] → [n_y].
///
/// Ordering is lexicographic in the outputs sequence, which for a fixed pair
/// of cardinalities coincides with the canonical index order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionTable {
    n_x: usize,
    n_y: usize,
    outputs: Vec<usize>,
}

impl FunctionTable {
    pub fn new(n_y: usize, outputs: Vec<usize>) -> Result<Self> {
        check_cardinalities(outputs.len(), n_y)?;
        if let Some((x, y)) = outputs.iter().enumerate().find(|(_, &y)| y >= n_y) {
            return Err(Error::Domain(format!("f({x}) = {y} is not below n_y = {n_y}")));
        }
        Ok(Self { n_x: outputs.len(), n_y, outputs })
    }

    /// Table with canonical index `index`: the base-n_y digits of the index,
    /// most significant digit first, are f(0), f(1), ….
    pub fn from_index(n_x: usize, n_y: usize, index: usize) -> Result<Self> {
        let count = table_count_with_cap(n_x, n_y, usize::MAX)?;
        if index >= count {
            return Err(Error::Domain(format!("table index {index} >= {count}")));
        }
        let mut outputs = vec![0; n_x];
        let mut rest = index;
        for slot in outputs.iter_mut().rev() {
            *slot = rest % n_y;
            rest /= n_y;
        }
        Ok(Self { n_x, n_y, outputs })
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// f(x). Panics if x is out of range.
    pub fn apply(&self, x: usize) -> usize {
        self.outputs[x]
    }

    pub fn index(&self) -> usize {
        self.outputs.iter().fold(0, |acc, &d| acc * self.n_y + d)
    }

    /// Outputs written as a digit string ("01" for the binary identity).
    /// Digits above 9 use lowercase letters, so n_y ≤ 36.
    pub fn key(&self) -> String {
        self.outputs.iter().map(|&d| std::char::from_digit(d as u32, 36).unwrap_or('?')).collect()
    }

    pub fn from_key(n_y: usize, key: &str) -> Result<Self> {
        let outputs = key
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Parse(format!("invalid digit '{c}' in table key '{key}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_y, outputs)
    }

    pub fn is_permutation(&self) -> bool {
        self.n_x == self.n_y && self.outputs.iter().collect::<BTreeSet<_>>().len() == self.n_x
    }

    pub fn is_constant(&self) -> bool {
        self.outputs.windows(2).all(|w| w[0] == w[1])
    }

    /// Extension to an n-by-n table; inputs at or above n_x map to 0.
    pub fn embed(&self, n: usize) -> Result<Self> {
        if n < self.n_x || n < self.n_y {
            return Err(Error::Domain(format!("cannot embed a {}→{} table into cardinality {n}", self.n_x, self.n_y)));
        }
        let mut outputs = self.outputs.clone();
        outputs.resize(n, 0);
        Self::new(n, outputs)
    }
}

impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// The four binary response functions.
pub mod binary {
    use super::FunctionTable;

    fn table(outputs: [usize; 2]) -> FunctionTable {
        FunctionTable { n_x: 2, n_y: 2, outputs: outputs.to_vec() }
    }

    /// 𝕀: y = x.
    pub fn identity() -> FunctionTable {
        table([0, 1])
    }

    /// 𝔽: y = 1 − x.
    pub fn flip() -> FunctionTable {
        table([1, 0])
    }

    /// ℝ₀: y = 0.
    pub fn reset0() -> FunctionTable {
        table([0, 0])
    }

    /// ℝ₁: y = 1.
    pub fn reset1() -> FunctionTable {
        table([1, 1])
    }
}

pub fn enumerate_functions(n_x: usize, n_y: usize) -> Result<Vec<FunctionTable>> {
    enumerate_functions_with_cap(n_x, n_y, DEFAULT_ENUMERATION_CAP)
}

/// All n_y^n_x tables in lexicographic order of their outputs.
pub fn enumerate_functions_with_cap(n_x: usize, n_y: usize, cap: usize) -> Result<Vec<FunctionTable>> {
    let count = table_count_with_cap(n_x, n_y, cap)?;
    (0..count).map(|i| FunctionTable::from_index(n_x, n_y, i)).collect()
}

/// A set of antecedent/outcome pairs {(x_i, y_i)} with distinct antecedents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterfactualQuery {
    pairs: Vec<(usize, usize)>,
}

impl CounterfactualQuery {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Contract("counterfactual query has no pairs".into()));
        }
        let mut seen = BTreeSet::new();
        for &(x, _) in &pairs {
            if !seen.insert(x) {
                return Err(Error::Contract(format!("antecedent x={x} appears more than once")));
            }
        }
        Ok(Self { pairs })
    }

    /// Parses the `x:y,x':y'` syntax.
    pub fn parse(s: &str) -> Result<Self> {
        let pairs = s
            .split(',')
            .map(|item| {
                let (x, y) =
                    item.split_once(':').ok_or_else(|| Error::Parse(format!("expected 'x:y', found '{item}'")))?;
                let x = x.trim().parse().map_err(|_| Error::Parse(format!("bad input value in '{item}'")))?;
                let y = y.trim().parse().map_err(|_| Error::Parse(format!("bad output value in '{item}'")))?;
                Ok((x, y))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn check(&self, n_x: usize, n_y: usize) -> Result<()> {
        for &(x, y) in &self.pairs {
            if x >= n_x || y >= n_y {
                return Err(Error::Domain(format!("pair ({x}, {y}) outside [{n_x}]×[{n_y}]")));
            }
        }
        Ok(())
    }

    /// Π_i δ_{y_i, f(x_i)}.
    pub fn holds_for(&self, f: &FunctionTable) -> bool {
        self.pairs.iter().all(|&(x, y)| f.apply(x) == y)
    }
}

impl fmt::Display for CounterfactualQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(x, y)| format!("{x}:{y}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Single-run evidence X = x_obs, Y = y_obs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub x_obs: usize,
    pub y_obs: usize,
}

impl Evidence {
    pub fn new(x_obs: usize, y_obs: usize) -> Self {
        Self { x_obs, y_obs }
    }
}

/// p(F): exact probabilities over the function tables of one (n_x, n_y).
/// Zero weights are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDistribution {
    n_x: usize,
    n_y: usize,
    weights: BTreeMap<FunctionTable, Rational>,
}

impl FunctionDistribution {
    pub fn new<I>(n_x: usize, n_y: usize, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FunctionTable, Rational)>,
    {
        check_cardinalities(n_x, n_y)?;
        let mut map: BTreeMap<FunctionTable, Rational> = BTreeMap::new();
        for (f, w) in weights {
            if f.n_x != n_x || f.n_y != n_y {
                return Err(Error::InvalidDistribution(format!(
                    "table {f} has cardinalities ({}, {}), expected ({n_x}, {n_y})",
                    f.n_x, f.n_y
                )));
            }
            if w.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative weight {} on table {f}",
                    rational::format(&w)
                )));
            }
            *map.entry(f).or_insert_with(Rational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        let total = rational::sum(map.values());
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {}, not 1", rational::format(&total))));
        }
        Ok(Self { n_x, n_y, weights: map })
    }

    /// Dense weights indexed by canonical table index.
    pub fn from_dense(n_x: usize, n_y: usize, weights: &[Rational]) -> Result<Self> {
        let count = table_count(n_x, n_y)?;
        if weights.len() != count {
            return Err(Error::DimensionMismatch { expected: count, found: weights.len() });
        }
        let tables = enumerate_functions(n_x, n_y)?;
        Self::new(n_x, n_y, tables.into_iter().zip(weights.iter().cloned()))
    }

    pub fn point_mass(f: FunctionTable) -> Self {
        let (n_x, n_y) = (f.n_x, f.n_y);
        let mut weights = BTreeMap::new();
        weights.insert(f, Rational::one());
        Self { n_x, n_y, weights }
    }

    /// Uniform over the given tables (duplicates count once).
    pub fn uniform_over(n_x: usize, n_y: usize, tables: &[FunctionTable]) -> Result<Self> {
        let distinct: BTreeSet<_> = tables.iter().cloned().collect();
        if distinct.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let w = rational::ratio(1, distinct.len() as i64);
        Self::new(n_x, n_y, distinct.into_iter().map(|f| (f, w.clone())))
    }

    pub fn uniform(n_x: usize, n_y: usize) -> Result<Self> {
        Self::uniform_over(n_x, n_y, &enumerate_functions(n_x, n_y)?)
    }

    /// Σ_k λ_k p_k; the λ_k must be nonnegative and sum to 1.
    pub fn mixture(components: &[(Rational, &FunctionDistribution)]) -> Result<Self> {
        let (_, first) = components.first().ok_or_else(|| Error::InvalidDistribution("empty mixture".into()))?;
        let (n_x, n_y) = (first.n_x, first.n_y);
        let mut weights = Vec::new();
        for (lambda, p) in components {
            if p.n_x != n_x || p.n_y != n_y {
                return Err(Error::InvalidDistribution("mixture of mismatched cardinalities".into()));
            }
            for (f, w) in &p.weights {
                weights.push((f.clone(), lambda * w));
            }
        }
        Self::new(n_x, n_y, weights)
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn weight(&self, f: &FunctionTable) -> Rational {
        self.weights.get(f).cloned().unwrap_or_else(Rational::zero)
    }

    /// Tables with positive weight, in canonical order.
    pub fn support(&self) -> impl Iterator<Item = (&FunctionTable, &Rational)> {
        self.weights.iter()
    }

    pub fn dense(&self) -> Result<Vec<Rational>> {
        let count = table_count(self.n_x, self.n_y)?;
        let mut out = vec![Rational::zero(); count];
        for (f, w) in &self.weights {
            out[f.index()] = w.clone();
        }
        Ok(out)
    }

    pub fn is_point_mass(&self) -> bool {
        self.weights.len() == 1
    }

    fn check_input(&self, x: usize) -> Result<()> {
        if x >= self.n_x {
            return Err(Error::Domain(format!("input {x} outside [0, {})", self.n_x)));
        }
        Ok(())
    }

    fn check_output(&self, y: usize) -> Result<()> {
        if y >= self.n_y {
            return Err(Error::Domain(format!("output {y} outside [0, {})", self.n_y)));
        }
        Ok(())
    }

    /// p(Y = y | do(X = x)) for every y, i.e. Σ_f p(f) δ_{y, f(x)}.
    pub fn conditional(&self, x: usize) -> Result<Vec<Rational>> {
        self.check_input(x)?;
        let mut out = vec![Rational::zero(); self.n_y];
        for (f, w) in &self.weights {
            out[f.apply(x)] += w;
        }
        Ok(out)
    }

    /// p(Y_{x_1} = y_1, …, Y_{x_k} = y_k).
    pub fn joint(&self, query: &CounterfactualQuery) -> Result<Rational> {
        query.check(self.n_x, self.n_y)?;
        Ok(self.weights.iter().filter(|(f, _)| query.holds_for(f)).fold(Rational::zero(), |acc, (_, w)| acc + w))
    }

    /// p(Y_{x_cf} = y_cf | X = x_obs, Y = y_obs).
    pub fn conditional_counterfactual(&self, evidence: &Evidence, x_cf: usize, y_cf: usize) -> Result<Rational> {
        self.check_input(x_cf)?;
        self.check_output(y_cf)?;
        let denom = self.evidence_probability(evidence)?;
        if x_cf == evidence.x_obs {
            return Ok(if y_cf == evidence.y_obs { Rational::one() } else { Rational::zero() });
        }
        let q = CounterfactualQuery::new(vec![(evidence.x_obs, evidence.y_obs), (x_cf, y_cf)])?;
        Ok(self.joint(&q)? / denom)
    }

    fn evidence_probability(&self, evidence: &Evidence) -> Result<Rational> {
        self.check_output(evidence.y_obs)?;
        let p = self.conditional(evidence.x_obs)?.swap_remove(evidence.y_obs);
        if p.is_zero() {
            return Err(Error::UndefinedConditional { x: evidence.x_obs, y: evidence.y_obs });
        }
        Ok(p)
    }

    /// Abduction: p(F | X = x_obs, Y = y_obs).
    pub fn posterior(&self, evidence: &Evidence) -> Result<FunctionDistribution> {
        let norm = self.evidence_probability(evidence)?;
        let weights = self
            .weights
            .iter()
            .filter(|(f, _)| f.apply(evidence.x_obs) == evidence.y_obs)
            .map(|(f, w)| (f.clone(), w / &norm));
        FunctionDistribution::new(self.n_x, self.n_y, weights)
    }

    /// Abduction, action do(X = x_cf), prediction: the counterfactual
    /// output distribution averaged over the posterior.
    pub fn abduct_act_predict(&self, evidence: &Evidence, x_cf: usize) -> Result<Vec<Rational>> {
        self.check_input(x_cf)?;
        self.posterior(evidence)?.conditional(x_cf)
    }

    /// Image under [`FunctionTable::embed`] into cardinality n on both sides.
    pub fn embed(&self, n: usize) -> Result<FunctionDistribution> {
        let weights = self.weights.iter().map(|(f, w)| Ok((f.embed(n)?, w.clone()))).collect::<Result<Vec<_>>>()?;
        FunctionDistribution::new(n, n, weights)
    }
}

/// Joint distribution over the exogenous pair (R_X, R_Y), allowing
/// confounding between the cause and the response function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfoundedModel {
    n_x: usize,
    n_y: usize,
    weights: BTreeMap<(usize, FunctionTable), Rational>,
}

impl ConfoundedModel {
    pub fn new<I>(n_x: usize, n_y: usize, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, FunctionTable), Rational)>,
    {
        check_cardinalities(n_x, n_y)?;
        let mut map: BTreeMap<(usize, FunctionTable), Rational> = BTreeMap::new();
        for ((r_x, f), w) in weights {
            if r_x >= n_x {
                return Err(Error::Domain(format!("r_x = {r_x} outside [0, {n_x})")));
            }
            if f.n_x != n_x || f.n_y != n_y {
                return Err(Error::InvalidDistribution(format!("table {f} has wrong cardinalities")));
            }
            if w.is_negative() {
                return Err(Error::InvalidDistribution("negative joint weight".into()));
            }
            *map.entry((r_x, f)).or_insert_with(Rational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        let total = rational::sum(map.values());
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "joint weights sum to {}, not 1",
                rational::format(&total)
            )));
        }
        Ok(Self { n_x, n_y, weights: map })
    }

    /// Unconfounded model p(R_X)·p(R_Y).
    pub fn product(p_x: &[Rational], p_f: &FunctionDistribution) -> Result<Self> {
        if p_x.len() != p_f.n_x {
            return Err(Error::DimensionMismatch { expected: p_f.n_x, found: p_x.len() });
        }
        let weights =
            p_x.iter().enumerate().flat_map(|(r_x, px)| p_f.support().map(move |(f, w)| ((r_x, f.clone()), px * w)));
        Self::new(p_f.n_x, p_f.n_y, weights)
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn support(&self) -> impl Iterator<Item = (&(usize, FunctionTable), &Rational)> {
        self.weights.iter()
    }

    /// p(X = x, Y = y) = Σ p(r_x, f) δ_{x, r_x} δ_{y, f(x)}, as rows x, columns y.
    pub fn observational_joint(&self) -> Vec<Vec<Rational>> {
        let mut table = vec![vec![Rational::zero(); self.n_y]; self.n_x];
        for ((r_x, f), w) in &self.weights {
            table[*r_x][f.apply(*r_x)] += w;
        }
        table
    }

    /// Observational p(Y | X = x); undefined when p(X = x) = 0.
    pub fn observational_conditional(&self, x: usize) -> Result<Vec<Rational>> {
        if x >= self.n_x {
            return Err(Error::Domain(format!("input {x} outside [0, {})", self.n_x)));
        }
        let row = self.observational_joint().swap_remove(x);
        let px = rational::sum(&row);
        if px.is_zero() {
            return Err(Error::Domain(format!("p(X={x}) = 0")));
        }
        Ok(row.into_iter().map(|v| v / &px).collect())
    }

    /// Marginal p(R_Y).
    pub fn response_marginal(&self) -> FunctionDistribution {
        let mut map: BTreeMap<FunctionTable, Rational> = BTreeMap::new();
        for ((_, f), w) in &self.weights {
            *map.entry(f.clone()).or_insert_with(Rational::zero) += w;
        }
        FunctionDistribution { n_x: self.n_x, n_y: self.n_y, weights: map }
    }

    /// p(Y | do(X = x)): the intervention severs R_X, leaving p(R_Y).
    pub fn do_conditional(&self, x: usize) -> Result<Vec<Rational>> {
        self.response_marginal().conditional(x)
    }
}

#[cfg(test)]
mod tests {
    use super::binary::*;
    use super::*;
    use crate::rational::{int, ratio};

    fn half_mix(a: FunctionTable, b: FunctionTable) -> FunctionDistribution {
        FunctionDistribution::new(2, 2, [(a, ratio(1, 2)), (b, ratio(1, 2))]).unwrap()
    }

    #[test]
    fn enumeration_orders_and_counts() {
        let tables = enumerate_functions(2, 2).unwrap();
        assert_eq!(tables, vec![reset0(), identity(), flip(), reset1()]);
        assert_eq!(enumerate_functions(1, 1).unwrap()[0].outputs(), &[0]);
        let t32 = enumerate_functions(3, 2).unwrap();
        assert_eq!(t32.len(), 8);
        assert_eq!(t32[0].outputs(), &[0, 0, 0]);
        assert_eq!(t32[7].outputs(), &[1, 1, 1]);
        for (i, t) in t32.iter().enumerate() {
            assert_eq!(t.index(), i);
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = enumerate_functions_with_cap(3, 3, 26).unwrap_err();
        assert!(matches!(err, Error::EnumerationCap { cap: 26, .. }));
        assert!(enumerate_functions(30, 2).is_err());
        assert!(enumerate_functions(0, 2).is_err());
    }

    #[test]
    fn keys_round_trip() {
        assert_eq!(identity().key(), "01");
        assert_eq!(FunctionTable::from_key(2, "10").unwrap(), flip());
        assert!(FunctionTable::from_key(2, "12").is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(FunctionDistribution::new(2, 2, [(identity(), ratio(1, 2))]).is_err());
        assert!(FunctionDistribution::new(2, 2, [(identity(), int(2)), (flip(), int(-1))]).is_err());
        let t = FunctionTable::new(2, vec![0, 1, 1]).unwrap();
        assert!(FunctionDistribution::new(2, 2, [(t, int(1))]).is_err());
    }

    #[test]
    fn conditional_examples() {
        let p = half_mix(identity(), flip());
        assert_eq!(p.conditional(0).unwrap(), vec![ratio(1, 2), ratio(1, 2)]);
        let pi = FunctionDistribution::point_mass(identity());
        assert_eq!(pi.conditional(0).unwrap(), vec![int(1), int(0)]);
        let u3 = FunctionDistribution::uniform(3, 3).unwrap();
        for x in 0..3 {
            assert_eq!(u3.conditional(x).unwrap(), vec![ratio(1, 3); 3]);
        }
        assert!(matches!(p.conditional(2), Err(Error::Domain(_))));
    }

    #[test]
    fn joint_examples() {
        let pi = FunctionDistribution::point_mass(identity());
        let q = CounterfactualQuery::new(vec![(0, 0), (1, 1)]).unwrap();
        assert_eq!(pi.joint(&q).unwrap(), int(1));
        assert!(CounterfactualQuery::new(vec![(0, 0), (0, 1)]).is_err());
        assert!(CounterfactualQuery::new(vec![]).is_err());
        let q_bad = CounterfactualQuery::new(vec![(0, 2)]).unwrap();
        assert!(pi.joint(&q_bad).is_err());
    }

    #[test]
    fn conditional_counterfactual_examples() {
        let e = Evidence::new(0, 0);
        let if_mix = half_mix(identity(), flip());
        let r_mix = half_mix(reset0(), reset1());
        assert_eq!(if_mix.conditional_counterfactual(&e, 1, 0).unwrap(), int(0));
        let iandr0 = half_mix(identity(), reset0());
        assert_eq!(iandr0.conditional_counterfactual(&e, 1, 0).unwrap(), ratio(1, 2));
        assert_eq!(r_mix.conditional_counterfactual(&e, 1, 0).unwrap(), int(1));
        // general pF: p(R0) / (p(I) + p(R0))
        let p =
            FunctionDistribution::from_dense(2, 2, &[ratio(1, 5), ratio(1, 10), ratio(3, 10), ratio(2, 5)]).unwrap();
        assert_eq!(p.conditional_counterfactual(&e, 1, 0).unwrap(), ratio(1, 5) / (ratio(1, 5) + ratio(1, 10)));
        // degenerate x_cf = x_obs
        assert_eq!(p.conditional_counterfactual(&e, 0, 0).unwrap(), int(1));
        assert_eq!(p.conditional_counterfactual(&e, 0, 1).unwrap(), int(0));
        let zero_ev = FunctionDistribution::point_mass(reset1());
        assert_eq!(zero_ev.conditional_counterfactual(&e, 1, 0), Err(Error::UndefinedConditional { x: 0, y: 0 }));
    }

    #[test]
    fn abduction_examples() {
        let e = Evidence::new(0, 0);
        let p = half_mix(identity(), reset0());
        assert_eq!(p.abduct_act_predict(&e, 1).unwrap(), vec![ratio(1, 2), ratio(1, 2)]);
        let pf = FunctionDistribution::point_mass(flip());
        assert_eq!(pf.abduct_act_predict(&Evidence::new(0, 1), 1).unwrap(), vec![int(1), int(0)]);
        let u = FunctionDistribution::uniform(2, 2).unwrap();
        let post = u.posterior(&e).unwrap();
        assert_eq!(post.weight(&identity()), ratio(1, 2));
        assert_eq!(post.weight(&reset0()), ratio(1, 2));
        assert_eq!(u.abduct_act_predict(&e, 1).unwrap(), vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn confounded_examples() {
        let half = vec![ratio(1, 2), ratio(1, 2)];
        let product = ConfoundedModel::product(&half, &half_mix(identity(), flip())).unwrap();
        for row in product.observational_joint() {
            assert_eq!(row, vec![ratio(1, 4), ratio(1, 4)]);
        }
        assert_eq!(product.do_conditional(0).unwrap(), vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(product.do_conditional(0).unwrap(), product.observational_conditional(0).unwrap());

        let confounded =
            ConfoundedModel::new(2, 2, [((0, reset0()), ratio(1, 2)), ((1, reset1()), ratio(1, 2))]).unwrap();
        assert_eq!(confounded.observational_joint(), vec![vec![ratio(1, 2), int(0)], vec![int(0), ratio(1, 2)]]);
        // p(R_Y) = ½ℝ₀ + ½ℝ₁, so do(X=0) gives (½, ½) while observation gives (1, 0).
        assert_eq!(confounded.do_conditional(0).unwrap(), vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(confounded.observational_conditional(0).unwrap(), vec![int(1), int(0)]);

        let point = ConfoundedModel::new(2, 2, [((0, identity()), int(1))]).unwrap();
        assert_eq!(point.observational_joint()[0][0], int(1));
        assert_eq!(point.do_conditional(1).unwrap(), vec![int(0), int(1)]);
        assert!(point.observational_conditional(1).is_err());
    }

    #[test]
    fn embedding_preserves_counterfactuals() {
        let t = FunctionTable::new(2, vec![1, 0, 1]).unwrap();
        let p = FunctionDistribution::point_mass(t);
        let e = p.embed(3).unwrap();
        assert_eq!(e.n_y(), 3);
        let q = CounterfactualQuery::new(vec![(0, 1), (1, 0), (2, 1)]).unwrap();
        assert_eq!(e.joint(&q).unwrap(), int(1));
        assert!(p.embed(2).is_err());
    }
}
