use serde::Serialize;

use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub description: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

/// A named list of checked claims; passes iff every claim passes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproductionReport {
    pub name: String,
    pub claims: Vec<Claim>,
}

impl ReproductionReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), claims: Vec::new() }
    }

    pub fn check(&mut self, description: impl Into<String>, expected: String, computed: String, pass: bool) {
        self.claims.push(Claim { description: description.into(), expected, computed, pass });
    }

    pub fn exact(&mut self, description: impl Into<String>, expected: &Rational, computed: &Rational) {
        self.check(description, rational::format(expected), rational::format(computed), expected == computed);
    }

    pub fn within(&mut self, description: impl Into<String>, expected: f64, computed: f64, tol: f64) {
        self.check(
            description,
            format!("{expected:.12e} ± {tol:e}"),
            format!("{computed:.12e}"),
            (expected - computed).abs() <= tol,
        );
    }

    pub fn holds(&mut self, description: impl Into<String>, pass: bool) {
        self.check(description, "true".into(), pass.to_string(), pass);
    }

    pub fn extend(&mut self, other: ReproductionReport) {
        let prefix = other.name;
        for mut c in other.claims {
            c.description = format!("{prefix}: {}", c.description);
            self.claims.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}
