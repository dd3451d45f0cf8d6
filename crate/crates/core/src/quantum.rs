//! Density-matrix simulation of the quantum oracle |x⟩|0⟩ ↦ |x⟩|f(x)⟩
//! queried with f ~ p(F), and tomographic read-out of two-way joint
//! counterfactuals from the resulting state ρ_XY.
//!
//! The composite basis index is `x * n_y + y` (X register most significant).
//! Only the isometry |x⟩ ↦ |x⟩|f(x)⟩ is simulated: the ancilla always starts
//! in |0⟩, so no unitary completion is needed.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::causal::{binary, CounterfactualQuery, FunctionDistribution, FunctionTable};
use crate::error::{Error, Result};
use crate::rational::{self, ratio, Rational};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const EFFECT_TOL: f64 = 1e-10;
pub const EXTRACTION_TOL: f64 = 1e-9;
pub const SOLVE_TOL: f64 = 1e-9;

/// Input-register state Σ_x α_x |x⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct Amplitudes {
    alpha: Vec<Complex64>,
}

impl Amplitudes {
    pub fn new(alpha: Vec<Complex64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::Domain("empty amplitude vector".into()));
        }
        let norm: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("amplitudes have squared norm {norm}, not 1")));
        }
        Ok(Self { alpha })
    }

    pub fn from_real(alpha: &[f64]) -> Result<Self> {
        Self::new(alpha.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// α_x = 1/√n for all x.
    pub fn uniform(n: usize) -> Self {
        let a = 1.0 / (n as f64).sqrt();
        Self { alpha: vec![Complex64::new(a, 0.0); n.max(1)] }
    }

    /// Computational basis state |x⟩.
    pub fn basis(n: usize, x: usize) -> Result<Self> {
        if x >= n {
            return Err(Error::Domain(format!("basis index {x} outside [0, {n})")));
        }
        let mut alpha = vec![Complex64::zero(); n];
        alpha[x] = Complex64::new(1.0, 0.0);
        Ok(Self { alpha })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn get(&self, x: usize) -> Complex64 {
        self.alpha[x]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.alpha
    }
}

fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    // Symmetrize first so round-off in the anti-Hermitian part is ignored.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let rho = Self { matrix };
        rho.check()?;
        Ok(rho)
    }

    pub fn check(&self) -> Result<()> {
        let m = &self.matrix;
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Contract("density matrix must be square and nonempty".into()));
        }
        let defect = hermitian_defect(m);
        if defect > HERMITIAN_TOL {
            return Err(Error::Contract(format!("not Hermitian (defect {defect:.3e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Contract(format!("trace {tr} is not 1")));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::Contract(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn pure(state: &DVector<Complex64>) -> Result<Self> {
        Self::new(state * state.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// tr(ρ²).
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigenvalues(&self.matrix).into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.matrix)
    }

    pub fn to_json(&self) -> DensityMatrixJson {
        let n = self.dim();
        let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n).map(|r| (0..n).map(|c| f(&self.matrix[(r, c)])).collect()).collect()
        };
        DensityMatrixJson { dim: n, re: part(|z| z.re), im: part(|z| z.im) }
    }

    pub fn from_json(json: &DensityMatrixJson) -> Result<Self> {
        let n = json.dim;
        let rows_ok = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if !rows_ok(&json.re) || !rows_ok(&json.im) {
            return Err(Error::DimensionMismatch { expected: n, found: json.re.len() });
        }
        let matrix = DMatrix::from_fn(n, n, |r, c| Complex64::new(json.re[r][c], json.im[r][c]));
        Self::new(matrix)
    }
}

/// Serialized form `{ "dim": n, "re": [[...]], "im": [[...]] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// A POVM element: Hermitian with spectrum in [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementEffect {
    operator: DMatrix<Complex64>,
}

impl MeasurementEffect {
    pub fn new(operator: DMatrix<Complex64>) -> Result<Self> {
        if !operator.is_square() {
            return Err(Error::Contract("effect must be square".into()));
        }
        if hermitian_defect(&operator) > EFFECT_TOL {
            return Err(Error::Contract("effect is not Hermitian".into()));
        }
        let ev = eigenvalues(&operator);
        if ev.iter().any(|e| !(-EFFECT_TOL..=1.0 + EFFECT_TOL).contains(e)) {
            return Err(Error::Contract(format!("effect eigenvalues {ev:?} leave [0, 1]")));
        }
        Ok(Self { operator })
    }

    /// |v⟩⟨v| for a normalized v.
    pub fn projector(v: &DVector<Complex64>) -> Result<Self> {
        Self::new(v * v.adjoint())
    }

    /// 1_X ⊗ |y⟩⟨y|_Y.
    pub fn output_equals(n_x: usize, n_y: usize, y: usize) -> Result<Self> {
        if y >= n_y {
            return Err(Error::Domain(format!("output {y} outside [0, {n_y})")));
        }
        let dim = n_x * n_y;
        let op = DMatrix::from_fn(dim, dim, |r, c| {
            if r == c && r % n_y == y {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::zero()
            }
        });
        Self::new(op)
    }

    /// Bell effect |Φ⁺⟩⟨Φ⁺| with |Φ⁺⟩ = (|00⟩ + |11⟩)/√2.
    pub fn phi_plus() -> Self {
        Self::bell(BellState::PhiPlus)
    }

    pub fn bell(which: BellState) -> Self {
        Self::projector(&which.vector()).expect("Bell states are normalized")
    }

    pub fn dim(&self) -> usize {
        self.operator.nrows()
    }

    pub fn operator(&self) -> &DMatrix<Complex64> {
        &self.operator
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub fn vector(self) -> DVector<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (i, j, sign) = match self {
            BellState::PhiPlus => (0, 3, 1.0),
            BellState::PhiMinus => (0, 3, -1.0),
            BellState::PsiPlus => (1, 2, 1.0),
            BellState::PsiMinus => (1, 2, -1.0),
        };
        let mut v = DVector::from_element(4, Complex64::zero());
        v[i] = Complex64::new(s, 0.0);
        v[j] = Complex64::new(sign * s, 0.0);
        v
    }
}

/// Σ_x α_x |x⟩|f(x)⟩.
pub fn apply_oracle(f: &FunctionTable, alpha: &Amplitudes) -> Result<DVector<Complex64>> {
    if alpha.len() != f.n_x() {
        return Err(Error::DimensionMismatch { expected: f.n_x(), found: alpha.len() });
    }
    let n_y = f.n_y();
    let mut psi = DVector::from_element(f.n_x() * n_y, Complex64::zero());
    for x in 0..f.n_x() {
        psi[x * n_y + f.apply(x)] += alpha.get(x);
    }
    Ok(psi)
}

/// ρ_XY = Σ_f p(f) V_f|ψ⟩⟨ψ|V_f†.
pub fn build_rho_xy(p: &FunctionDistribution, alpha: &Amplitudes) -> Result<DensityMatrix> {
    let dim = p.n_x() * p.n_y();
    let mut rho = DMatrix::from_element(dim, dim, Complex64::zero());
    for (f, w) in p.support() {
        let psi = apply_oracle(f, alpha)?;
        rho += (&psi * psi.adjoint()) * Complex64::new(rational::to_f64(w), 0.0);
    }
    DensityMatrix::new(rho)
}

fn check_index(v: usize, n: usize, what: &str) -> Result<()> {
    if v >= n {
        return Err(Error::Domain(format!("{what} {v} outside [0, {n})")));
    }
    Ok(())
}

/// p(f(x)=y, f(x')=y') = ⟨x|⟨y|ρ|y'⟩|x'⟩ / (α_x α*_{x'}).
pub fn extract_two_way(
    rho: &DensityMatrix,
    alpha: &Amplitudes,
    x: usize,
    x_prime: usize,
    y: usize,
    y_prime: usize,
) -> Result<f64> {
    let n_x = alpha.len();
    if !rho.dim().is_multiple_of(n_x) {
        return Err(Error::DimensionMismatch { expected: n_x, found: rho.dim() });
    }
    let n_y = rho.dim() / n_x;
    check_index(x, n_x, "input")?;
    check_index(x_prime, n_x, "input")?;
    check_index(y, n_y, "output")?;
    check_index(y_prime, n_y, "output")?;
    for &xi in &[x, x_prime] {
        if alpha.get(xi).norm() == 0.0 {
            return Err(Error::ExtractionImpossible { x: xi });
        }
    }
    let weight = alpha.get(x) * alpha.get(x_prime).conj();
    let value = rho.get(x * n_y + y, x_prime * n_y + y_prime) / weight;
    if value.im.abs() > EXTRACTION_TOL || value.re < -EXTRACTION_TOL || value.re > 1.0 + EXTRACTION_TOL {
        return Err(Error::Contract(format!(
            "extracted value {value} is not a probability; state and amplitudes disagree"
        )));
    }
    Ok(value.re.clamp(0.0, 1.0))
}

/// (x, x', y, y', p(f(x)=y, f(x')=y')).
pub type TomographyRow = (usize, usize, usize, usize, f64);

/// Every two-way joint for ordered pairs x ≠ x'.
pub fn tomography_table(rho: &DensityMatrix, alpha: &Amplitudes) -> Result<Vec<TomographyRow>> {
    let n_x = alpha.len();
    let n_y = rho.dim() / n_x;
    let mut rows = Vec::new();
    for x in 0..n_x {
        for xp in (0..n_x).filter(|&xp| xp != x) {
            for y in 0..n_y {
                for yp in 0..n_y {
                    rows.push((x, xp, y, yp, extract_two_way(rho, alpha, x, xp, y, yp)?));
                }
            }
        }
    }
    Ok(rows)
}

/// tr(Eρ), clamped to [0, 1].
pub fn measure(rho: &DensityMatrix, effect: &MeasurementEffect) -> Result<f64> {
    if rho.dim() != effect.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: effect.dim() });
    }
    let value = (effect.operator() * rho.matrix()).trace();
    if value.im.abs() > EFFECT_TOL {
        return Err(Error::Contract(format!("tr(Eρ) = {value} is not real")));
    }
    Ok(value.re.clamp(0.0, 1.0))
}

/// Number of positive outcomes in `shots` independent measurements.
pub fn measure_shots<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    effect: &MeasurementEffect,
    shots: usize,
    rng: &mut R,
) -> Result<usize> {
    let p = measure(rho, effect)?;
    Ok((0..shots).filter(|_| rng.random_bool(p)).count())
}

/// The three binary-oracle experiments that pin down p(F) for n = 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryScenario {
    /// Prepare |0⟩_X, read Y in the computational basis, outcome 0.
    ZeroInput,
    /// Prepare |1⟩_X, read Y in the computational basis, outcome 0.
    OneInput,
    /// Prepare |+⟩_X, measure XY in the Bell basis, outcome Φ⁺.
    PlusBell,
}

impl BinaryScenario {
    pub const ALL: [BinaryScenario; 3] =
        [BinaryScenario::ZeroInput, BinaryScenario::OneInput, BinaryScenario::PlusBell];

    pub fn name(self) -> &'static str {
        match self {
            BinaryScenario::ZeroInput => "y0_given_do_x0",
            BinaryScenario::OneInput => "y0_given_do_x1",
            BinaryScenario::PlusBell => "phi_plus_given_do_plus",
        }
    }

    pub fn amplitudes(self) -> Amplitudes {
        match self {
            BinaryScenario::ZeroInput => Amplitudes::basis(2, 0).expect("valid"),
            BinaryScenario::OneInput => Amplitudes::basis(2, 1).expect("valid"),
            BinaryScenario::PlusBell => Amplitudes::uniform(2),
        }
    }

    pub fn effect(self) -> MeasurementEffect {
        match self {
            BinaryScenario::ZeroInput | BinaryScenario::OneInput => {
                MeasurementEffect::output_equals(2, 2, 0).expect("valid")
            }
            BinaryScenario::PlusBell => MeasurementEffect::phi_plus(),
        }
    }

    /// Simulated probability: build ρ_XY and measure.
    pub fn simulate(self, p: &FunctionDistribution) -> Result<f64> {
        check_binary(p)?;
        measure(&build_rho_xy(p, &self.amplitudes())?, &self.effect())
    }

    /// Exact probability tr(Eρ) in rational arithmetic.
    ///
    /// For these preparations every product α_x α*_{x'} is rational (1 or ½),
    /// and so are the effect entries, so tr(Eρ) can be evaluated exactly from
    /// the matrix elements α_x α*_{x'} p(f(x)=y, f(x')=y').
    pub fn exact(self, p: &FunctionDistribution) -> Result<Rational> {
        check_binary(p)?;
        let amp: [[Rational; 2]; 2] = match self {
            BinaryScenario::ZeroInput => [[ratio(1, 1), ratio(0, 1)], [ratio(0, 1), ratio(0, 1)]],
            BinaryScenario::OneInput => [[ratio(0, 1), ratio(0, 1)], [ratio(0, 1), ratio(1, 1)]],
            BinaryScenario::PlusBell => [[ratio(1, 2), ratio(1, 2)], [ratio(1, 2), ratio(1, 2)]],
        };
        let element = |x: usize, y: usize, xp: usize, yp: usize| -> Result<Rational> {
            let pairs = if x == xp {
                if y != yp {
                    return Ok(ratio(0, 1));
                }
                vec![(x, y)]
            } else {
                vec![(x, y), (xp, yp)]
            };
            Ok(&amp[x][xp] * p.joint(&CounterfactualQuery::new(pairs)?)?)
        };
        // Effect entries as ((x, y), (x', y'), value).
        type Entry = ((usize, usize), (usize, usize), Rational);
        let effect: Vec<Entry> = match self {
            BinaryScenario::ZeroInput | BinaryScenario::OneInput => {
                vec![((0, 0), (0, 0), ratio(1, 1)), ((1, 0), (1, 0), ratio(1, 1))]
            }
            BinaryScenario::PlusBell => {
                [(0, 0), (1, 1)].iter().flat_map(|&a| [(0, 0), (1, 1)].map(move |b| (a, b, ratio(1, 2)))).collect()
            }
        };
        // tr(Eρ) = Σ_{r,c} E[r][c] ρ[c][r]
        let mut total = ratio(0, 1);
        for ((x, y), (xp, yp), e) in effect {
            total += e * element(xp, yp, x, y)?;
        }
        Ok(total)
    }
}

fn check_binary(p: &FunctionDistribution) -> Result<()> {
    if p.n_x() != 2 || p.n_y() != 2 {
        return Err(Error::Unsupported(format!("binary scenario needs n_x = n_y = 2, got ({}, {})", p.n_x(), p.n_y())));
    }
    Ok(())
}

/// Forward-simulated (zero-input, one-input, Bell) probabilities.
pub fn binary_measurements(p: &FunctionDistribution) -> Result<(f64, f64, f64)> {
    Ok((
        BinaryScenario::ZeroInput.simulate(p)?,
        BinaryScenario::OneInput.simulate(p)?,
        BinaryScenario::PlusBell.simulate(p)?,
    ))
}

/// Recovers p(F) for n = 2 from the three measured probabilities plus
/// normalization, solving for (p(𝕀), p(𝔽), p(ℝ₀), p(ℝ₁)).
pub fn solve_binary_pf(c00: f64, c01: f64, bell: f64) -> Result<FunctionDistribution> {
    // Elimination of the system
    //   p𝕀 + pℝ₀ = c00,  p𝔽 + pℝ₀ = c01,  p𝕀 + ¼pℝ₀ + ¼pℝ₁ = bell,  Σ = 1.
    let r0 = 2.0 * c00 + 0.5 * (1.0 - c00 - c01) - 2.0 * bell;
    let id = c00 - r0;
    let fl = c01 - r0;
    let r1 = 1.0 - c00 - c01 + r0;
    let sol = [id, fl, r0, r1];
    let violation = sol.iter().map(|&v| (-v).max(v - 1.0).max(0.0)).fold(0.0, f64::max);
    if violation > SOLVE_TOL || sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::Inconsistent { residual: violation });
    }
    let tables = [binary::identity(), binary::flip(), binary::reset0(), binary::reset1()];
    let clamped: Vec<Rational> = sol.iter().map(|&v| rational::from_f64(v.clamp(0.0, 1.0)).expect("finite")).collect();
    let total = rational::sum(&clamped);
    FunctionDistribution::new(2, 2, tables.into_iter().zip(clamped).map(|(f, w)| (f, w / &total)))
}
