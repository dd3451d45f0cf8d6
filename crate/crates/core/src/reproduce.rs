//! Scripted reproductions of the headline identification results.

use std::str::FromStr;

use num_traits::Zero;

use crate::causal::{CounterfactualQuery, Evidence, FunctionDistribution};
use crate::error::{Error, Result};
use crate::identify::{self, build_constraints, is_identifiable, lp_bounds, ConstraintLevel, LinearTarget};
use crate::models;
use crate::quantum::{self, binary_measurements, build_rho_xy, solve_binary_pf, Amplitudes, BinaryScenario};
use crate::rational::{int, ratio, to_f64, Rational};
use crate::report::ReproductionReport;
use crate::toy;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    Binary,
    AppendixB,
    ModelAB,
    AppendixE,
    AppendixEGeneral,
    Toy,
}

impl Example {
    pub const ALL: [Example; 6] = [
        Example::Binary,
        Example::AppendixB,
        Example::ModelAB,
        Example::AppendixE,
        Example::AppendixEGeneral,
        Example::Toy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Example::Binary => "binary",
            Example::AppendixB => "appendix_b",
            Example::ModelAB => "model_ab",
            Example::AppendixE => "appendix_e",
            Example::AppendixEGeneral => "appendix_e_general",
            Example::Toy => "toy",
        }
    }
}

impl FromStr for Example {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Example::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| Error::Parse(format!("unknown example '{s}'")))
    }
}

pub fn reproduce(example: Example) -> Result<ReproductionReport> {
    match example {
        Example::Binary => reproduce_binary(),
        Example::AppendixB => {
            let mut r = ReproductionReport::new("appendix_b");
            for n in [2, 3] {
                r.extend(identify::reproduce_appendix_b(n)?);
            }
            Ok(r)
        }
        Example::ModelAB => reproduce_model_ab(),
        Example::AppendixE => reproduce_appendix_e(),
        Example::AppendixEGeneral => {
            let mut r = ReproductionReport::new("appendix_e_general");
            for (n, tail) in [(3, vec![]), (4, vec![0]), (5, vec![1, 0])] {
                r.extend(identify::reproduce_appendix_e_general(n, &tail)?);
            }
            Ok(r)
        }
        Example::Toy => reproduce_toy(),
    }
}

/// Binary example: one-way data leave p(Y_{X=1}=0 | X=0, Y=0) anywhere in
/// [0, 1]; the three quantum settings recover p(F) exactly.
pub fn reproduce_binary() -> Result<ReproductionReport> {
    let mut r = ReproductionReport::new("binary");
    let truth = models::identity_flip_mix();
    let evidence = Evidence::new(0, 0);
    let classical = build_constraints(&truth, &ConstraintLevel::OneWay)?;
    let numerator = LinearTarget::joint(2, 2, &CounterfactualQuery::new(vec![(0, 0), (1, 0)])?)?;
    let id = is_identifiable(&numerator, &classical)?;
    r.holds("p(Y_0=0, Y_1=0) not identifiable from one-way data", !id.identifiable);
    r.holds("witness ½𝕀+½𝔽 attains the lower bound", id.witness_lo == truth);
    r.holds("witness ½ℝ₀+½ℝ₁ attains the upper bound", id.witness_hi == models::reset_mix());
    r.holds(
        "both witnesses satisfy the one-way constraints",
        classical.is_satisfied_by(&id.witness_lo)? && classical.is_satisfied_by(&id.witness_hi)?,
    );
    r.exact(
        "p(Y_{X=1}=0 | X=0, Y=0) under ½𝕀+½𝔽",
        &int(0),
        &id.witness_lo.conditional_counterfactual(&evidence, 1, 0)?,
    );
    r.exact(
        "p(Y_{X=1}=0 | X=0, Y=0) under ½ℝ₀+½ℝ₁",
        &int(1),
        &id.witness_hi.conditional_counterfactual(&evidence, 1, 0)?,
    );

    let quantum = build_constraints(&truth, &ConstraintLevel::TwoWay)?;
    r.holds("p(Y_0=0, Y_1=0) identifiable from two-way data", is_identifiable(&numerator, &quantum)?.identifiable);
    let (c00, c01, bell) = binary_measurements(&truth)?;
    r.within("Φ⁺ probability for ½𝕀+½𝔽", 0.5, bell, 1e-12);
    r.within("Φ⁺ probability for ½ℝ₀+½ℝ₁", 0.25, BinaryScenario::PlusBell.simulate(&models::reset_mix())?, 1e-12);
    let solved = solve_binary_pf(c00, c01, bell)?;
    for (f, w) in truth.support() {
        r.within(format!("recovered p({f})"), to_f64(w), to_f64(&solved.weight(f)), quantum::SOLVE_TOL);
    }
    r.holds("recovered distribution equals ½𝕀+½𝔽", solved == truth);
    Ok(r)
}

pub fn reproduce_model_ab() -> Result<ReproductionReport> {
    let mut r = ReproductionReport::new("model_ab");
    let (a, b) = (models::model_a(), models::model_b());
    let mut one_way = true;
    let mut two_way = true;
    for x in 0..3 {
        for y in 0..3 {
            let q = CounterfactualQuery::new(vec![(x, y)])?;
            one_way &= a.joint(&q)? == ratio(1, 3) && b.joint(&q)? == ratio(1, 3);
            for xp in (0..3).filter(|&v| v != x) {
                for yp in 0..3 {
                    let q = CounterfactualQuery::new(vec![(x, y), (xp, yp)])?;
                    two_way &= a.joint(&q)? == ratio(1, 9) && b.joint(&q)? == ratio(1, 9);
                }
            }
        }
    }
    r.holds("both models give p(Y_x=y) = 1/3 for all x, y", one_way);
    r.holds("both models give p(Y_x=y, Y_x'=y') = 1/9 for all x ≠ x'", two_way);
    let q3 = CounterfactualQuery::new(vec![(0, 0), (1, 1), (2, 2)])?;
    r.exact("Model A: p(Y_0=0, Y_1=1, Y_2=2)", &ratio(1, 27), &a.joint(&q3)?);
    r.exact("Model B: p(Y_0=0, Y_1=1, Y_2=2)", &ratio(1, 9), &b.joint(&q3)?);

    let alpha = Amplitudes::uniform(3);
    let diff = (build_rho_xy(&a, &alpha)?.matrix() - build_rho_xy(&b, &alpha)?.matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    r.within("max |ρ_XY(A) − ρ_XY(B)| entry", 0.0, diff, 1e-12);

    let sys = build_constraints(&a, &ConstraintLevel::TwoWay)?;
    let target = LinearTarget::joint(3, 3, &q3)?;
    let bounds = lp_bounds(&target, &sys)?;
    r.holds("three-way target has positive width under two-way constraints", !bounds.width().is_zero());
    r.holds(
        format!("bounds {bounds} contain both 1/27 and 1/9"),
        bounds.contains(&ratio(1, 27)) && bounds.contains(&ratio(1, 9)),
    );
    Ok(r)
}

pub fn reproduce_appendix_e() -> Result<ReproductionReport> {
    let mut r = ReproductionReport::new("appendix_e");
    let (classical, quantum) = identify::appendix_e_systems(&[])?;
    let (_, h) = identify::tail_target(&[])?;

    let qb = lp_bounds(&h, &quantum)?;
    r.exact("quantum lower bound on h", &int(0), &qb.lo);
    r.exact("quantum upper bound on h", &ratio(1, 4), &qb.hi);
    let cb = lp_bounds(&h, &classical)?;
    r.exact("classical lower bound on h", &int(0), &cb.lo);
    r.exact("classical upper bound on h", &ratio(1, 2), &cb.hi);
    let correlated = models::perfectly_correlated(&[])?;
    r.holds("perfectly correlated model satisfies the one-way constraints", classical.is_satisfied_by(&correlated)?);
    r.exact("h under the perfectly correlated model", &ratio(1, 2), &h.evaluate(&correlated)?);

    let (_, null) = quantum.affine_solution_family()?;
    r.check("null space dimension of the two-way system", "1".into(), null.len().to_string(), null.len() == 1);
    let direction = identify::quantum_family_direction();
    r.holds(
        "null direction ∝ (−1, 1, 1, −1, 1, −1, −1, 1)",
        null.len() == 1 && identify::is_parallel(&null[0], &direction),
    );
    // Both endpoints of the family satisfy every two-way constraint.
    for hv in [Rational::zero(), ratio(1, 4)] {
        let member = models::quantum_family(&hv)?;
        r.holds(format!("family member h = {hv} is feasible"), quantum.is_satisfied_by(&member)?);
    }
    Ok(r)
}

pub fn reproduce_toy() -> Result<ReproductionReport> {
    let mut r = ReproductionReport::new("toy");
    for row in toy::compare_binary_equivalence()? {
        let label = row.p_f.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ");
        r.check(format!("{} for pF {{{label}}}", row.scenario), row.quantum, row.toy, row.equal);
    }
    Ok(r)
}

/// Forward measurements then inversion; for diagnostics and the CLI.
pub fn binary_round_trip(p: &FunctionDistribution) -> Result<FunctionDistribution> {
    let (c00, c01, bell) = binary_measurements(p)?;
    solve_binary_pf(c00, c01, bell)
}
