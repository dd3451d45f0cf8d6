//! Classical oracle C_f: x ↦ (x, f(x)) with a fresh f ~ p(F) per query.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::causal::{FunctionDistribution, FunctionTable};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ClassicalQueryRecord {
    pub x_in: usize,
    pub x_out: usize,
    pub y_out: usize,
}

/// Inverse-CDF sampler over the support of p(F).
///
/// Each table owns the half-open range of 64-bit draws below the ceiling of
/// its cumulative probability times 2⁶⁴, so the only deviation from p(F) is
/// the quantization of the uniform draw (below 2⁻⁶⁴ per table).
#[derive(Clone, Debug)]
pub struct FunctionSampler {
    tables: Vec<FunctionTable>,
    thresholds: Vec<u128>,
}

impl FunctionSampler {
    pub fn new(p: &FunctionDistribution) -> Self {
        let scale = BigInt::from(1u128 << 64);
        let mut cumulative = Rational::from_integer(BigInt::from(0));
        let mut tables = Vec::new();
        let mut thresholds = Vec::new();
        for (f, w) in p.support() {
            cumulative += w;
            let scaled = cumulative.numer() * &scale;
            let t = Integer::div_ceil(&scaled, cumulative.denom());
            tables.push(f.clone());
            thresholds.push(t.to_u128().expect("cumulative ≤ 1"));
        }
        Self { tables, thresholds }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> &FunctionTable {
        let u = rng.next_u64() as u128;
        let i = self.thresholds.partition_point(|&t| t <= u);
        &self.tables[i.min(self.tables.len() - 1)]
    }
}

/// One query at input `x` with a fresh draw from p(F).
pub fn query<R: RngCore + ?Sized>(p: &FunctionDistribution, x: usize, rng: &mut R) -> Result<ClassicalQueryRecord> {
    ClassicalOracle::with_rng(p, rng).query(x)
}

/// Stateful oracle that draws f ~ p(F) independently for every query.
pub struct ClassicalOracle<'a, R: RngCore + ?Sized> {
    n_x: usize,
    sampler: FunctionSampler,
    rng: &'a mut R,
}

impl<'a, R: RngCore + ?Sized> ClassicalOracle<'a, R> {
    pub fn with_rng(p: &FunctionDistribution, rng: &'a mut R) -> Self {
        Self { n_x: p.n_x(), sampler: FunctionSampler::new(p), rng }
    }

    pub fn query(&mut self, x: usize) -> Result<ClassicalQueryRecord> {
        if x >= self.n_x {
            return Err(Error::Domain(format!("input {x} outside [0, {})", self.n_x)));
        }
        let f = self.sampler.sample(self.rng);
        Ok(ClassicalQueryRecord { x_in: x, x_out: x, y_out: f.apply(x) })
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleLog {
    pub seed: u64,
    pub records: Vec<ClassicalQueryRecord>,
}

impl SampleLog {
    /// Runs `inputs` in order against the oracle seeded with `seed`.
    pub fn run(p: &FunctionDistribution, inputs: &[usize], seed: u64) -> Result<Self> {
        let mut rng = seeded_rng(seed);
        let mut oracle = ClassicalOracle::with_rng(p, &mut rng);
        let records = inputs.iter().map(|&x| oracle.query(x)).collect::<Result<_>>()?;
        Ok(Self { seed, records })
    }

    /// `n_queries` queries cycling through the inputs 0, 1, …, n_x − 1.
    pub fn round_robin(p: &FunctionDistribution, n_queries: usize, seed: u64) -> Result<Self> {
        let inputs: Vec<usize> = (0..n_queries).map(|i| i % p.n_x()).collect();
        Self::run(p, &inputs, seed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_in,x_out,y_out,query_index\n");
        for (i, r) in self.records.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", r.x_in, r.x_out, r.y_out, i);
        }
        out
    }

    /// Outcome counts per input: counts[x][y].
    pub fn counts(&self, n_x: usize, n_y: usize) -> Vec<Vec<usize>> {
        let mut counts = vec![vec![0; n_y]; n_x];
        for r in &self.records {
            counts[r.x_in][r.y_out] += 1;
        }
        counts
    }
}

/// Empirical p̂(y|x) with binomial standard errors √(p̂(1−p̂)/N).
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalEstimate {
    pub queries_per_x: usize,
    pub p_hat: Vec<Vec<f64>>,
    pub std_err: Vec<Vec<f64>>,
}

pub fn estimate_conditionals(p: &FunctionDistribution, queries_per_x: usize, seed: u64) -> Result<ConditionalEstimate> {
    if queries_per_x == 0 {
        return Err(Error::Domain("queries_per_x must be at least 1".into()));
    }
    let inputs: Vec<usize> = (0..p.n_x()).flat_map(|x| std::iter::repeat_n(x, queries_per_x)).collect();
    let log = SampleLog::run(p, &inputs, seed)?;
    let n = queries_per_x as f64;
    let p_hat: Vec<Vec<f64>> =
        log.counts(p.n_x(), p.n_y()).into_iter().map(|row| row.into_iter().map(|c| c as f64 / n).collect()).collect();
    let std_err = p_hat.iter().map(|row| row.iter().map(|&q| (q * (1.0 - q) / n).sqrt()).collect()).collect();
    Ok(ConditionalEstimate { queries_per_x, p_hat, std_err })
}
