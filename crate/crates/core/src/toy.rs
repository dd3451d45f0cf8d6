//! Epistemically restricted phase-space model of the binary oracle.
//!
//! Each toy bit is a pair (z, x) of classical bits; two toy bits give 16
//! ontic states. Valid preparations are uniform over cosets of Lagrangian
//! subspaces of GF(2)⁴ under the symplectic form Σ_i z_i x'_i + x_i z'_i.
//! The four binary oracles act as permutations of the ontic states built
//! from the toy CNOT and a z-flip of the output bit.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::causal::{binary, enumerate_functions, FunctionDistribution, FunctionTable};
use crate::error::{Error, Result};
use crate::quantum::BinaryScenario;
use crate::rational::{self, Rational};

/// ((z₁, x₁), (z₂, x₂)) for register X (toy bit 1) and output Y (toy bit 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ToyOnticState {
    pub input: (u8, u8),
    pub output: (u8, u8),
}

impl ToyOnticState {
    pub fn new(input: (u8, u8), output: (u8, u8)) -> Result<Self> {
        if [input.0, input.1, output.0, output.1].iter().any(|&b| b > 1) {
            return Err(Error::Domain("toy ontic coordinates are bits".into()));
        }
        Ok(Self { input, output })
    }

    /// Index z₁x₁z₂x₂ read as a 4-bit number.
    pub fn index(self) -> usize {
        ((self.input.0 as usize) << 3)
            | ((self.input.1 as usize) << 2)
            | ((self.output.0 as usize) << 1)
            | self.output.1 as usize
    }

    pub fn from_index(i: usize) -> Self {
        let bit = |k: usize| ((i >> k) & 1) as u8;
        Self { input: (bit(3), bit(2)), output: (bit(1), bit(0)) }
    }

    pub fn all() -> impl Iterator<Item = ToyOnticState> {
        (0..16).map(Self::from_index)
    }
}

fn symplectic(a: usize, b: usize) -> u32 {
    let (za, xa, zb, xb) = (a & 0b1010, a & 0b0101, b & 0b1010, b & 0b0101);
    ((za >> 1) & xb).count_ones() + ((xa << 1) & zb).count_ones()
}

/// Probability distribution over the 16 ontic states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyEpistemicState {
    probs: Vec<Rational>,
}

impl ToyEpistemicState {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.len() != 16 {
            return Err(Error::DimensionMismatch { expected: 16, found: probs.len() });
        }
        if probs.iter().any(|p| *p < Rational::zero()) || !rational::sum(&probs).is_one() {
            return Err(Error::InvalidDistribution("toy state must be a probability vector".into()));
        }
        Ok(Self { probs })
    }

    fn uniform_on<F: Fn(ToyOnticState) -> bool>(pred: F) -> Self {
        let support: Vec<bool> = ToyOnticState::all().map(pred).collect();
        let n = support.iter().filter(|&&s| s).count() as i64;
        let w = rational::ratio(1, n);
        Self { probs: support.iter().map(|&s| if s { w.clone() } else { Rational::zero() }).collect() }
    }

    pub fn prob(&self, s: ToyOnticState) -> &Rational {
        &self.probs[s.index()]
    }

    pub fn support(&self) -> Vec<ToyOnticState> {
        ToyOnticState::all().filter(|s| !self.prob(*s).is_zero()).collect()
    }

    /// Uniform over four states forming a coset of a Lagrangian subspace.
    pub fn is_maximal_knowledge(&self) -> bool {
        let support: Vec<usize> = self.support().iter().map(|s| s.index()).collect();
        if support.len() != 4 || support.iter().any(|&i| self.probs[i] != rational::ratio(1, 4)) {
            return false;
        }
        let shifts: Vec<usize> = support.iter().map(|&i| i ^ support[0]).collect();
        let closed = shifts.iter().all(|&a| shifts.iter().all(|&b| shifts.contains(&(a ^ b))));
        let isotropic = shifts.iter().all(|&a| shifts.iter().all(|&b| symplectic(a, b).is_multiple_of(2)));
        closed && isotropic
    }

    pub fn mix(components: &[(Rational, ToyEpistemicState)]) -> Result<Self> {
        let mut probs = vec![Rational::zero(); 16];
        for (w, s) in components {
            for (acc, p) in probs.iter_mut().zip(&s.probs) {
                *acc += w * p;
            }
        }
        Self::new(probs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyPreparation {
    Z0,
    Z1,
    Plus,
}

/// Input toy bit prepared per `prep`; output toy bit at z₂ = 0, x₂ unknown.
pub fn toy_prepare(prep: ToyPreparation) -> ToyEpistemicState {
    ToyEpistemicState::uniform_on(|s| {
        s.output.0 == 0
            && match prep {
                ToyPreparation::Z0 => s.input.0 == 0,
                ToyPreparation::Z1 => s.input.0 == 1,
                ToyPreparation::Plus => s.input.1 == 0,
            }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyOraclePermutation {
    image: [usize; 16],
}

impl ToyOraclePermutation {
    fn from_fn<F: Fn(ToyOnticState) -> ToyOnticState>(f: F) -> Self {
        let mut image = [0; 16];
        for s in ToyOnticState::all() {
            image[s.index()] = f(s).index();
        }
        Self { image }
    }

    pub fn identity() -> Self {
        Self::from_fn(|s| s)
    }

    /// ((z₁, x₁), (z₂, x₂)) ↦ ((z₁, x₁⊕x₂), (z₂⊕z₁, x₂)).
    pub fn cnot() -> Self {
        Self::from_fn(|s| ToyOnticState {
            input: (s.input.0, s.input.1 ^ s.output.1),
            output: (s.output.0 ^ s.input.0, s.output.1),
        })
    }

    /// z₂ ↦ z₂ ⊕ 1.
    pub fn output_flip() -> Self {
        Self::from_fn(|s| ToyOnticState { input: s.input, output: (s.output.0 ^ 1, s.output.1) })
    }

    pub fn apply(&self, s: ToyOnticState) -> ToyOnticState {
        ToyOnticState::from_index(self.image[s.index()])
    }

    /// `self` after `first`.
    pub fn after(&self, first: &ToyOraclePermutation) -> Self {
        Self::from_fn(|s| self.apply(first.apply(s)))
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = [false; 16];
        self.image.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
    }

    pub fn push_forward(&self, state: &ToyEpistemicState) -> ToyEpistemicState {
        let mut probs = vec![Rational::zero(); 16];
        for s in ToyOnticState::all() {
            probs[self.apply(s).index()] += state.prob(s);
        }
        ToyEpistemicState { probs }
    }
}

pub fn toy_oracle(f: &FunctionTable) -> Result<ToyOraclePermutation> {
    if f.n_x() != 2 || f.n_y() != 2 {
        return Err(Error::Unsupported(format!(
            "toy oracles exist only for binary tables, got {}→{}",
            f.n_x(),
            f.n_y()
        )));
    }
    Ok(if *f == binary::identity() {
        ToyOraclePermutation::cnot()
    } else if *f == binary::reset0() {
        ToyOraclePermutation::identity()
    } else if *f == binary::reset1() {
        ToyOraclePermutation::output_flip()
    } else {
        ToyOraclePermutation::output_flip().after(&ToyOraclePermutation::cnot())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyMeasurement {
    /// Reads z₂: outcomes [z₂ = 0, z₂ = 1].
    OutputComputational,
    /// Reads (z₁⊕z₂, x₁⊕x₂); outcome index 2·(z₁⊕z₂) + (x₁⊕x₂), with
    /// index 0 the Φ⁺ analogue.
    BellParity,
}

pub fn toy_measure(state: &ToyEpistemicState, setting: ToyMeasurement) -> Vec<Rational> {
    let n = match setting {
        ToyMeasurement::OutputComputational => 2,
        ToyMeasurement::BellParity => 4,
    };
    let mut out = vec![Rational::zero(); n];
    for s in ToyOnticState::all() {
        let k = match setting {
            ToyMeasurement::OutputComputational => s.output.0 as usize,
            ToyMeasurement::BellParity => {
                (((s.input.0 ^ s.output.0) as usize) << 1) | (s.input.1 ^ s.output.1) as usize
            }
        };
        out[k] += state.prob(s);
    }
    out
}

/// Toy-theory counterpart of a binary scenario under p(F).
pub fn toy_probability(p: &FunctionDistribution, scenario: BinaryScenario) -> Result<Rational> {
    let (prep, setting) = match scenario {
        BinaryScenario::ZeroInput => (ToyPreparation::Z0, ToyMeasurement::OutputComputational),
        BinaryScenario::OneInput => (ToyPreparation::Z1, ToyMeasurement::OutputComputational),
        BinaryScenario::PlusBell => (ToyPreparation::Plus, ToyMeasurement::BellParity),
    };
    let initial = toy_prepare(prep);
    let components =
        p.support().map(|(f, w)| Ok((w.clone(), toy_oracle(f)?.push_forward(&initial)))).collect::<Result<Vec<_>>>()?;
    let state = ToyEpistemicState::mix(&components)?;
    Ok(toy_measure(&state, setting).swap_remove(0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToyComparison {
    pub scenario: String,
    #[serde(rename = "pF")]
    pub p_f: BTreeMap<String, String>,
    pub quantum: String,
    pub toy: String,
    pub equal: bool,
}

/// The four point masses followed by ten seeded random rational mixtures.
pub fn binary_test_grid() -> Vec<FunctionDistribution> {
    let tables = enumerate_functions(2, 2).expect("4 tables");
    let mut grid: Vec<FunctionDistribution> = tables.iter().cloned().map(FunctionDistribution::point_mass).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x70_79);
    while grid.len() < 14 {
        let raw: Vec<i64> = (0..4).map(|_| rng.random_range(0..=12)).collect();
        let total: i64 = raw.iter().sum();
        if total == 0 {
            continue;
        }
        let weights: Vec<Rational> = raw.iter().map(|&w| rational::ratio(w, total)).collect();
        grid.push(FunctionDistribution::from_dense(2, 2, &weights).expect("normalized"));
    }
    grid
}

/// Every scenario on every grid distribution, quantum versus toy.
pub fn compare_binary_equivalence() -> Result<Vec<ToyComparison>> {
    let mut out = Vec::new();
    for p in binary_test_grid() {
        for scenario in BinaryScenario::ALL {
            let quantum = scenario.exact(&p)?;
            let toy = toy_probability(&p, scenario)?;
            out.push(ToyComparison {
                scenario: scenario.name().to_string(),
                p_f: crate::io::weights_map(&p),
                quantum: rational::format(&quantum),
                toy: rational::format(&toy),
                equal: quantum == toy,
            });
        }
    }
    Ok(out)
}

/// As [`compare_binary_equivalence`], failing on the first mismatch.
pub fn verify_binary_equivalence() -> Result<Vec<ToyComparison>> {
    let rows = compare_binary_equivalence()?;
    if let Some(bad) = rows.iter().find(|r| !r.equal) {
        return Err(Error::Contract(format!(
            "toy/quantum mismatch in {} for pF {:?}: quantum {} vs toy {}",
            bad.scenario, bad.p_f, bad.quantum, bad.toy
        )));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::rational::{int, ratio};

    fn st(z1: u8, x1: u8, z2: u8, x2: u8) -> ToyOnticState {
        ToyOnticState::new((z1, x1), (z2, x2)).unwrap()
    }

    #[test]
    fn preparations() {
        let z0 = toy_prepare(ToyPreparation::Z0);
        assert_eq!(z0.support(), vec![st(0, 0, 0, 0), st(0, 0, 0, 1), st(0, 1, 0, 0), st(0, 1, 0, 1)]);
        let plus = toy_prepare(ToyPreparation::Plus);
        assert!(plus.support().iter().all(|s| s.input.1 == 0 && s.output.0 == 0));
        for prep in [ToyPreparation::Z0, ToyPreparation::Z1, ToyPreparation::Plus] {
            let s = toy_prepare(prep);
            assert_eq!(s.support().len(), 4);
            assert!(s.is_maximal_knowledge());
        }
    }

    #[test]
    fn oracle_examples() {
        let id = toy_oracle(&binary::identity()).unwrap();
        assert_eq!(id.apply(st(1, 0, 0, 1)), st(1, 1, 1, 1));
        let r0 = toy_oracle(&binary::reset0()).unwrap();
        assert!(ToyOnticState::all().all(|s| r0.apply(s) == s));
        let r1 = toy_oracle(&binary::reset1()).unwrap();
        assert_eq!(r1.apply(st(0, 1, 0, 0)), st(0, 1, 1, 0));
        assert!(toy_oracle(&FunctionTable::new(3, vec![0, 1]).unwrap()).is_err());
    }

    #[test]
    fn permutations_compose_and_preserve_restriction() {
        let fl = toy_oracle(&binary::flip()).unwrap();
        let expected = ToyOraclePermutation::output_flip().after(&toy_oracle(&binary::identity()).unwrap());
        assert_eq!(fl, expected);
        for f in enumerate_functions(2, 2).unwrap() {
            let perm = toy_oracle(&f).unwrap();
            assert!(perm.is_bijective());
            for prep in [ToyPreparation::Z0, ToyPreparation::Z1, ToyPreparation::Plus] {
                assert!(perm.push_forward(&toy_prepare(prep)).is_maximal_knowledge());
            }
        }
    }

    #[test]
    fn measurement_examples() {
        let pi = FunctionDistribution::point_mass(binary::identity());
        assert_eq!(toy_probability(&pi, BinaryScenario::ZeroInput).unwrap(), int(1));
        let r0 = FunctionDistribution::point_mass(binary::reset0());
        assert_eq!(toy_probability(&r0, BinaryScenario::PlusBell).unwrap(), ratio(1, 4));
        let fl = FunctionDistribution::point_mass(binary::flip());
        assert_eq!(toy_probability(&fl, BinaryScenario::PlusBell).unwrap(), int(0));
        assert_eq!(toy_probability(&pi, BinaryScenario::PlusBell).unwrap(), int(1));
        let u = FunctionDistribution::uniform(2, 2).unwrap();
        assert_eq!(toy_probability(&u, BinaryScenario::PlusBell).unwrap(), ratio(3, 8));
        assert_eq!(toy_probability(&models::reset_mix(), BinaryScenario::ZeroInput).unwrap(), ratio(1, 2));
    }

    #[test]
    fn non_maximal_states_detected() {
        let mut probs = vec![Rational::zero(); 16];
        probs[0] = Rational::one();
        assert!(!ToyEpistemicState::new(probs).unwrap().is_maximal_knowledge());
        // z₁ and x₁ both known violates the restriction.
        let s = ToyEpistemicState::uniform_on(|s| s.input == (0, 0));
        assert!(!s.is_maximal_knowledge());
    }

    #[test]
    fn equivalence_holds_on_grid() {
        let rows = verify_binary_equivalence().unwrap();
        assert_eq!(rows.len(), 42);
    }
}
