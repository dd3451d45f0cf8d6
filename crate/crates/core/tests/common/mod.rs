#![allow(dead_code)]

use cfq_core::rational::{int, ratio, Rational};
use cfq_core::FunctionDistribution;
use rand::Rng;

/// Rational p(F) with integer weights in 0..=max over all tables, at least
/// one positive.
pub fn random_distribution<R: Rng>(rng: &mut R, n_x: usize, n_y: usize, max: u32) -> FunctionDistribution {
    let len = n_y.pow(n_x as u32);
    loop {
        let w: Vec<u32> = (0..len).map(|_| rng.random_range(0..=max)).collect();
        let total: u32 = w.iter().sum();
        if total == 0 {
            continue;
        }
        let dense: Vec<Rational> = w.iter().map(|&v| ratio(v as i64, total as i64)).collect();
        return FunctionDistribution::from_dense(n_x, n_y, &dense).expect("normalized");
    }
}

pub fn from_integer_weights(n_x: usize, n_y: usize, w: &[u32]) -> Option<FunctionDistribution> {
    let total: u32 = w.iter().sum();
    if total == 0 {
        return None;
    }
    let dense: Vec<Rational> = w.iter().map(|&v| ratio(v as i64, total as i64)).collect();
    Some(FunctionDistribution::from_dense(n_x, n_y, &dense).expect("normalized"))
}

/// Digits of table `index`, most significant first: outputs[x] = f(x).
pub fn table_outputs(index: usize, n_x: usize, n_y: usize) -> Vec<usize> {
    let mut out = vec![0; n_x];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = rest % n_y;
        rest /= n_y;
    }
    out
}

/// Joint counterfactual by direct enumeration over dense weights.
pub fn brute_joint(p: &FunctionDistribution, pairs: &[(usize, usize)]) -> Rational {
    let (n_x, n_y) = (p.n_x(), p.n_y());
    let dense = p.dense().expect("small");
    let mut total = int(0);
    for (i, w) in dense.iter().enumerate() {
        let f = table_outputs(i, n_x, n_y);
        if pairs.iter().all(|&(x, y)| f[x] == y) {
            total += w;
        }
    }
    total
}

pub fn random_pairs<R: Rng>(rng: &mut R, n_x: usize, n_y: usize, k: usize) -> Vec<(usize, usize)> {
    let mut xs: Vec<usize> = (0..n_x).collect();
    for i in (1..xs.len()).rev() {
        xs.swap(i, rng.random_range(0..=i));
    }
    xs.into_iter().take(k).map(|x| (x, rng.random_range(0..n_y))).collect()
}
