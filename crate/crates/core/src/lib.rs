//! Counterfactual identification with classical and quantum function oracles.

pub mod causal;
pub mod classical;
pub mod error;
pub mod identify;
pub mod io;
pub mod lp;
pub mod models;
pub mod quantum;
pub mod rational;
pub mod report;
pub mod reproduce;
pub mod toy;

pub use causal::{
    enumerate_functions, ConfoundedModel, CounterfactualQuery, Evidence, FunctionDistribution, FunctionTable,
};
pub use error::{Error, Result};
pub use identify::{
    build_constraints, is_identifiable, lp_bounds, Bounds, ConstraintLevel, ConstraintSystem, LinearTarget,
};
pub use quantum::{build_rho_xy, extract_two_way, solve_binary_pf, Amplitudes, DensityMatrix, MeasurementEffect};
pub use rational::Rational;
pub use report::{Claim, ReproductionReport};
