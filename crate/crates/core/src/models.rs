//! Named reference distributions used throughout the reproductions.

use crate::causal::{binary, enumerate_functions, FunctionDistribution, FunctionTable};
use crate::error::{Error, Result};
use crate::rational::ratio;

/// ½𝕀 + ½𝔽.
pub fn identity_flip_mix() -> FunctionDistribution {
    FunctionDistribution::uniform_over(2, 2, &[binary::identity(), binary::flip()]).expect("valid")
}

/// ½ℝ₀ + ½ℝ₁.
pub fn reset_mix() -> FunctionDistribution {
    FunctionDistribution::uniform_over(2, 2, &[binary::reset0(), binary::reset1()]).expect("valid")
}

/// Uniform over all n^n tables on [n] → [n] (Model A when n = 3).
pub fn uniform_square(n: usize) -> Result<FunctionDistribution> {
    FunctionDistribution::uniform(n, n)
}

pub fn model_a() -> FunctionDistribution {
    uniform_square(3).expect("27 tables")
}

/// Uniform over the nine affine maps f(x) = u + s·x mod 3 (Model B).
pub fn model_b() -> FunctionDistribution {
    let tables: Vec<FunctionTable> = (0..3)
        .flat_map(|u| (0..3).map(move |s| (u, s)))
        .map(|(u, s)| FunctionTable::new(3, (0..3).map(|x| (u + s * x) % 3).collect()).expect("valid"))
        .collect();
    FunctionDistribution::uniform_over(3, 3, &tables).expect("valid")
}

/// Equal mixture of the n! permutations of [n].
pub fn permutation_mixture(n: usize) -> Result<FunctionDistribution> {
    let perms: Vec<_> = enumerate_functions(n, n)?.into_iter().filter(FunctionTable::is_permutation).collect();
    FunctionDistribution::uniform_over(n, n, &perms)
}

/// Equal mixture of the n constant (discard-and-prepare) maps on [n].
pub fn constant_mixture(n: usize) -> Result<FunctionDistribution> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let consts: Vec<_> = (0..n).map(|c| FunctionTable::new(n, vec![c; n])).collect::<Result<_>>()?;
    FunctionDistribution::uniform_over(n, n, &consts)
}

/// Binary-output tables on n ≥ 3 inputs whose values on inputs 3.. equal `tail`.
pub fn tables_with_tail(tail: &[usize]) -> Result<Vec<FunctionTable>> {
    if tail.iter().any(|&y| y > 1) {
        return Err(Error::Domain("tail values must be binary".into()));
    }
    (0..8)
        .map(|head: usize| {
            let mut outputs = vec![(head >> 2) & 1, (head >> 1) & 1, head & 1];
            outputs.extend_from_slice(tail);
            FunctionTable::new(2, outputs)
        })
        .collect()
}

/// Uniform over the eight head assignments with a fixed tail; for an empty
/// tail this is the uniform distribution on the 3-input binary tables, whose
/// two-way marginals are all ¼.
pub fn uniform_head_with_tail(tail: &[usize]) -> Result<FunctionDistribution> {
    let tables = tables_with_tail(tail)?;
    FunctionDistribution::uniform_over(3 + tail.len(), 2, &tables)
}

/// D(0,0,0) = D(1,1,1) = ½ on the head, fixed tail.
pub fn perfectly_correlated(tail: &[usize]) -> Result<FunctionDistribution> {
    let tables = tables_with_tail(tail)?;
    let n = 3 + tail.len();
    FunctionDistribution::new(n, 2, [(tables[0].clone(), ratio(1, 2)), (tables[7].clone(), ratio(1, 2))])
}

/// The one-parameter family (¼−h, h, h, ¼−h, h, ¼−h, ¼−h, h) over the
/// 3-input binary tables in canonical order, for h ∈ [0, ¼].
pub fn quantum_family(h: &crate::rational::Rational) -> Result<FunctionDistribution> {
    let q = ratio(1, 4) - h;
    let w = [&q, h, h, &q, h, &q, &q, h].map(Clone::clone);
    FunctionDistribution::from_dense(3, 2, &w)
}
