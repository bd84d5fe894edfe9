//! Transport of generators across a diagonal flip.
//!
//! Arrows are identified across the two quivers by their endpoints: boundary
//! labels and lattice points keep their meaning under a flip. Parallel
//! arrows are told apart by their order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{build_gamma, match_gamma, verify_theorem_relations, BoundaryError, BoundaryModel, GammaMatch, RelationInstance, Tag};
use crate::polygon::{flip, Diagonal, FlipMove, Triangulation};
use crate::quiver::{ArrowId, Path, QuiverWithFaces, VertexLabel};
use crate::rewrite::{Outcome, SearchBudget};

type ArrowKey = (VertexLabel, VertexLabel, usize);

fn arrow_key(q: &QuiverWithFaces, a: ArrowId) -> ArrowKey {
    let arrow = q.arrow(a);
    let parallel = q.arrows_between(arrow.source, arrow.target);
    let label = |v: u32| q.vertices[v as usize].label.clone();
    (label(arrow.source), label(arrow.target), parallel.iter().position(|&b| b == a).unwrap())
}

fn arrow_keys(q: &QuiverWithFaces) -> BTreeMap<ArrowKey, ArrowId> {
    q.arrows.iter().map(|a| (arrow_key(q, a.id), a.id)).collect()
}

fn transport(from: &QuiverWithFaces, to: &BTreeMap<ArrowKey, ArrowId>, arrows: &[ArrowId]) -> Vec<Option<ArrowId>> {
    arrows.iter().map(|&a| to.get(&arrow_key(from, a)).copied()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportedClass {
    pub source: u32,
    pub target: u32,
    pub tag: Tag,
    pub old: Vec<ArrowId>,
    pub new: Vec<ArrowId>,
    /// The old representative carried into the new quiver, if all its arrows survive.
    pub transported: Option<Vec<ArrowId>>,
    /// Verdict of the transported path against the new representative.
    pub outcome: Option<Outcome>,
    pub affected: bool,
    /// New representative split as `delta1 · middle · delta2`, where the outer
    /// parts consist of arrows already present before the flip.
    pub delta1: Vec<ArrowId>,
    pub middle: Vec<ArrowId>,
    pub delta2: Vec<ArrowId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipTransportCertificate {
    pub m: u32,
    pub n: u32,
    pub before: Triangulation,
    pub after: Triangulation,
    pub flip: FlipMove,
    pub before_match: GammaMatch,
    pub after_match: GammaMatch,
    pub classes: Vec<TransportedClass>,
    /// Relation instances of the flipped quiver that involve an affected class.
    pub relations: Vec<RelationInstance>,
}

impl FlipTransportCertificate {
    pub fn affected(&self) -> Vec<&TransportedClass> {
        self.classes.iter().filter(|c| c.affected).collect()
    }

    pub fn inconclusive(&self) -> bool {
        self.classes.iter().any(|c| c.outcome == Some(Outcome::Unknown))
            || self.relations.iter().any(|r| r.outcome == Outcome::Unknown)
    }

    /// Every relation touching an affected class holds after the flip.
    pub fn passes(&self) -> bool {
        self.relations.iter().all(|r| r.outcome == Outcome::Equal)
    }
}

/// Flips `d` in `t`, matches both presentations against Γ(m, n), carries the
/// old generators across and re-checks the relations that involve the
/// generators that had to change.
pub fn verify_flip_transport(
    t: &Triangulation,
    d: Diagonal,
    m: u32,
    budget: SearchBudget,
) -> Result<FlipTransportCertificate, BoundaryError> {
    let (after, mv) = flip(t, d)?;
    let old = BoundaryModel::new(t, m)?;
    let new = BoundaryModel::new(&after, m)?;
    let old_bp = old.presentation(budget)?;
    let new_bp = new.presentation(budget)?;
    let gamma = build_gamma(m, t.n());
    let before_match = match_gamma(&old_bp, &gamma, false)?;
    let after_match = match_gamma(&new_bp, &gamma, false)?;

    let new_keys = arrow_keys(&new.quiver);
    let old_keys = arrow_keys(&old.quiver);
    let mut classes = Vec::new();
    for g in &new_bp.generators {
        let rep = &g.representative;
        let old_gen = old_bp.generator(g.source, g.target);
        let (old_arrows, transported, outcome) = match old_gen {
            None => (Vec::new(), None, None),
            Some(o) => {
                let carried: Option<Vec<ArrowId>> = transport(&old.quiver, &new_keys, &o.representative.arrows).into_iter().collect();
                let outcome = match &carried {
                    Some(arrows) => {
                        let path = Path::new(&new.quiver, arrows.clone())?;
                        Some(new.system.paths_equal(&path, rep, budget).expect("same endpoints").outcome)
                    }
                    None => None,
                };
                (o.representative.arrows.clone(), carried, outcome)
            }
        };
        let affected = outcome != Some(Outcome::Equal);
        let kept: Vec<bool> = transport(&new.quiver, &old_keys, &rep.arrows).iter().map(Option::is_some).collect();
        let (delta1, middle, delta2) = if affected {
            let pre = kept.iter().take_while(|&&k| k).count();
            let suf = if pre == kept.len() { 0 } else { kept.iter().rev().take_while(|&&k| k).count() };
            let a = &rep.arrows;
            (a[..pre].to_vec(), a[pre..a.len() - suf].to_vec(), a[a.len() - suf..].to_vec())
        } else {
            (Vec::new(), rep.arrows.clone(), Vec::new())
        };
        classes.push(TransportedClass {
            source: g.source,
            target: g.target,
            tag: g.tag,
            old: old_arrows,
            new: rep.arrows.clone(),
            transported,
            outcome,
            affected,
            delta1,
            middle,
            delta2,
        });
    }

    let report = verify_theorem_relations(&new_bp, &after_match, &new.system, budget)?;
    let touched: Vec<String> = classes
        .iter()
        .filter(|c| c.affected)
        .filter_map(|c| {
            let (s, t) = (after_match.to_gamma(c.source), after_match.to_gamma(c.target));
            gamma
                .arrows
                .iter()
                .find(|a| (a.source, a.target) == (s, t))
                .map(|a| format!("{}{}", ["x", "y", "z"][a.family as usize], a.index))
        })
        .collect();
    let relations = report
        .instances
        .into_iter()
        .filter(|i| i.lhs.iter().chain(&i.rhs).any(|name| touched.contains(name)))
        .collect();

    Ok(FlipTransportCertificate {
        m,
        n: t.n(),
        before: t.clone(),
        after,
        flip: mv,
        before_match,
        after_match,
        classes,
        relations,
    })
}
