//! Interpolating quantum groups: presentations, explicit modules over
//! ℤ[ζ](q^{±1/2}, t^{±1/2}), exact relation checks, both specializations,
//! the rank-two inductive construction and the Serre obstruction.

pub mod b2;
pub mod free;
pub mod linalg;
pub mod module;
pub mod presentation;

use serde::Serialize;
use serde_json::Value;

pub use module::{
    build_vn_b1, build_vn_g1, specialize_module, standard_module, verify_elementary,
    verify_module, verma_consistency, vn_b1, vn_g1, RepModule, ShortBasis, Specialization,
    VermaParams, Which,
};
pub use b2::{
    b1_strings, build_example_b2, coefficient_roster, deform_construct, deform_construct_relaxed, deform_construct_with_budget,
    example_claims, example_weight, lockstep_compare, serre_obstruction, t1_matches_oracle,
    uq_irreducible, value_map_example, verify_b2_axioms, DeformOutcome, UqModule,
};
pub use free::failed_serre_demo;
pub use presentation::{AlgebraPresentation, NodeKind, RelationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

/// One evaluated relation on one vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub module: String,
    pub relation_id: String,
    pub vector: String,
    pub status: Status,
    pub witness_polynomial: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub entries: Vec<RelationCheck>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// A check that passes when `witness` is `None`.
    pub fn check(&mut self, module: &str, id: &str, vector: &str, witness: Option<String>) {
        let (status, w) = match witness {
            None => (Status::Pass, "0".to_string()),
            Some(w) => (Status::Fail, w),
        };
        self.entries.push(RelationCheck {
            module: module.into(),
            relation_id: id.into(),
            vector: vector.into(),
            status,
            witness_polynomial: w,
        });
    }

    pub fn assert_true(&mut self, module: &str, id: &str, vector: &str, ok: bool, detail: String) {
        self.check(module, id, vector, (!ok).then_some(detail));
    }

    /// A recorded fact that is not a pass/fail assertion.
    pub fn info(&mut self, module: &str, id: &str, vector: &str, detail: String) {
        self.entries.push(RelationCheck {
            module: module.into(),
            relation_id: id.into(),
            vector: vector.into(),
            status: Status::Info,
            witness_polynomial: detail,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&RelationCheck> {
        self.entries.iter().filter(|e| e.status == Status::Fail).collect()
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    /// Entries whose relation id starts with `prefix`.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a RelationCheck> {
        self.entries.iter().filter(move |e| e.relation_id.starts_with(prefix))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.entries).expect("report serializes")
    }
}
