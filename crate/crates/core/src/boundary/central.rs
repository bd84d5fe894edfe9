//! Generator-wise check that the sum of chordless cycles at boundary vertices
//! is central.

use serde::{Deserialize, Serialize};

use super::{BoundaryError, BoundaryPresentation, Tag};
use crate::quiver::{chordless_cycle_at, QuiverWithFaces};
use crate::rewrite::{Outcome, RewriteSystem, SearchBudget};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commutation {
    pub source: u32,
    pub target: u32,
    pub tag: Tag,
    pub outcome: Outcome,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralElementReport {
    pub entries: Vec<Commutation>,
}

impl CentralElementReport {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.outcome == Outcome::Equal)
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.entries.iter().filter(|e| e.outcome == outcome).count()
    }
}

/// For each generator `a`, compares `u_s(a) a` with `a u_t(a)`.
pub fn verify_central_element(
    bp: &BoundaryPresentation,
    q: &QuiverWithFaces,
    sys: &RewriteSystem,
    budget: SearchBudget,
) -> Result<CentralElementReport, BoundaryError> {
    let mut entries = Vec::new();
    for g in &bp.generators {
        let rep = &g.representative;
        let u_s = chordless_cycle_at(q, rep.source)?;
        let u_t = chordless_cycle_at(q, rep.target)?;
        let left = u_s.then(rep).expect("cycle at source");
        let right = rep.then(&u_t).expect("cycle at target");
        let v = sys.paths_equal(&left, &right, budget).expect("same endpoints");
        entries.push(Commutation {
            source: g.source,
            target: g.target,
            tag: g.tag,
            outcome: v.outcome,
            steps: v.steps().len(),
        });
    }
    Ok(CentralElementReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::tests::fan_model;

    #[test]
    fn triangle_all_commute() {
        let model = fan_model(3, 2);
        let bp = model.presentation(SearchBudget::default()).unwrap();
        let r = verify_central_element(&bp, &model.quiver, &model.system, SearchBudget::default()).unwrap();
        assert_eq!(r.entries.len(), 9);
        assert!(r.passes());
    }

    #[test]
    fn fans_commute() {
        for (n, m) in [(5, 2), (4, 3)] {
            let model = fan_model(n, m);
            let bp = model.presentation(SearchBudget::default()).unwrap();
            let r = verify_central_element(&bp, &model.quiver, &model.system, SearchBudget::default()).unwrap();
            assert!(r.passes(), "n={} m={}", n, m);
            assert!(r.entries.iter().filter(|e| e.tag == Tag::X).all(|e| e.outcome == Outcome::Equal));
        }
    }

    #[test]
    fn starved_budget_is_not_a_pass() {
        let model = fan_model(5, 2);
        let bp = model.presentation(SearchBudget::default()).unwrap();
        let r = verify_central_element(&bp, &model.quiver, &model.system, SearchBudget::with_visited(1)).unwrap();
        assert!(!r.passes());
        assert!(r.count(Outcome::Unknown) > 0);
    }
}
