//! The verification pipeline for a single triangulation.

use dimerlab::boundary::{Commutation, RelationInstance};
use dimerlab::{
    build_gamma, match_gamma, validate_dimer, validate_dimer_model, verify_central_element, verify_theorem_relations,
    BoundaryError, BoundaryModel, Outcome, SearchBudget, Triangulation,
};
use serde::Serialize;

/// Ordered from best to worst so that `max` combines statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Inconclusive,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Inconclusive => 2,
            Status::Failed => 3,
        }
    }

    fn of_outcomes(outcomes: impl IntoIterator<Item = Outcome>) -> Status {
        outcomes
            .into_iter()
            .map(|o| match o {
                Outcome::Equal => Status::Verified,
                Outcome::Unknown => Status::Inconclusive,
                Outcome::Distinct => Status::Failed,
            })
            .max()
            .unwrap_or(Status::Verified)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub total: usize,
    pub equal: usize,
    pub distinct: usize,
    pub unknown: usize,
}

impl Tally {
    fn of(outcomes: impl IntoIterator<Item = Outcome>) -> Tally {
        let mut t = Tally::default();
        for o in outcomes {
            t.total += 1;
            match o {
                Outcome::Equal => t.equal += 1,
                Outcome::Distinct => t.distinct += 1,
                Outcome::Unknown => t.unknown += 1,
            }
        }
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub status: Status,
    pub budget: SearchBudget,
    pub boundary_vertices: usize,
    pub internal_vertices: usize,
    pub arrows: usize,
    pub faces: usize,
    /// Failed construction or axiom checks, by name.
    pub failed_checks: Vec<String>,
    pub generators: usize,
    pub rotation: Option<u32>,
    pub reflected: Option<bool>,
    pub relations: Tally,
    pub central: Tally,
    /// Relation instances and commutations that did not come out equal.
    pub relation_failures: Vec<RelationInstance>,
    pub central_failures: Vec<Commutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Runs construction, extraction, matching, relation and centrality checks.
/// Never panics on a valid triangulation; problems end up in the status.
pub fn verify_triangulation(t: &Triangulation, m: u32, budget: SearchBudget, reflect: bool) -> Verification {
    let mut v = Verification {
        status: Status::Verified,
        budget,
        boundary_vertices: 0,
        internal_vertices: 0,
        arrows: 0,
        faces: 0,
        failed_checks: Vec::new(),
        generators: 0,
        rotation: None,
        reflected: None,
        relations: Tally::default(),
        central: Tally::default(),
        relation_failures: Vec::new(),
        central_failures: Vec::new(),
        error: None,
    };
    let fail = |mut v: Verification, status: Status, e: BoundaryError| {
        v.status = v.status.max(status);
        v.error = Some(e.to_string());
        v
    };

    let model = match BoundaryModel::new(t, m) {
        Ok(model) => model,
        Err(e) => return fail(v, Status::Failed, e),
    };
    v.boundary_vertices = model.quiver.boundary_vertex_count();
    v.internal_vertices = model.quiver.internal_vertex_count();
    v.arrows = model.quiver.arrows.len();
    v.faces = model.quiver.faces.len();
    for report in [validate_dimer(&model.dimer), validate_dimer_model(&model.quiver)] {
        v.failed_checks.extend(report.failed().into_iter().map(String::from));
    }
    if !v.failed_checks.is_empty() {
        v.status = Status::Failed;
    }

    let bp = match model.presentation(budget) {
        Ok(bp) => bp,
        Err(e @ BoundaryError::InconclusivePresentation { .. }) => return fail(v, Status::Inconclusive, e),
        Err(e) => return fail(v, Status::Failed, e),
    };
    v.generators = bp.generators.len();

    let gamma = build_gamma(m, t.n());
    let matched = match match_gamma(&bp, &gamma, reflect) {
        Ok(g) => g,
        Err(e) => return fail(v, Status::Failed, e),
    };
    v.rotation = Some(matched.rotation);
    v.reflected = Some(matched.reflected);

    let relations = match verify_theorem_relations(&bp, &matched, &model.system, budget) {
        Ok(r) => r,
        Err(e) => return fail(v, Status::Failed, e),
    };
    v.relations = Tally::of(relations.instances.iter().map(|i| i.outcome));
    v.status = v.status.max(Status::of_outcomes(relations.instances.iter().map(|i| i.outcome)));
    v.relation_failures = relations.instances.into_iter().filter(|i| i.outcome != Outcome::Equal).collect();

    let central = match verify_central_element(&bp, &model.quiver, &model.system, budget) {
        Ok(c) => c,
        Err(e) => return fail(v, Status::Failed, e),
    };
    v.central = Tally::of(central.entries.iter().map(|c| c.outcome));
    v.status = v.status.max(Status::of_outcomes(central.entries.iter().map(|c| c.outcome)));
    v.central_failures = central.entries.into_iter().filter(|c| c.outcome != Outcome::Equal).collect();
    v
}
