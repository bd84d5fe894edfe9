//! The boundary algebra: generators between boundary vertices, the canonical
//! quiver they should match, and the checks run against it.

mod central;
mod fan;
mod flip;
mod gamma;

use std::collections::BTreeMap;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dimer::{build_dimer, reduce_dimer, DimerError, GLmDimer};
use crate::polygon::{PolygonError, Triangulation};
use crate::quiver::{dual_quiver, potential_relations, ArrowId, Kind, Path, QuiverError, QuiverWithFaces, RelationSet};
use crate::rewrite::{Outcome, RewriteSystem, SearchBudget};

pub use central::{verify_central_element, CentralElementReport, Commutation};
pub use fan::{
    fan_arrow_table, fan_formulas, fan_generator_paths, fan_m2_arrow_table, resolve_arrow_table, ArrowTable, FanPathTable,
    FormulaStatus, NamedPath, Spot,
};
pub use flip::{verify_flip_transport, FlipTransportCertificate, TransportedClass};
pub use gamma::{
    build_gamma, match_gamma, relation_words, verify_theorem_relations, GammaArrow, GammaMatch, GammaQuiver, RelationInstance,
    RelationReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Dimer(#[from] DimerError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("inconclusive presentation at {source_label}->{target_label}: {detail}")]
    InconclusivePresentation {
        source_label: u32,
        target_label: u32,
        detail: String,
    },
    #[error("incompatible quivers: {0} vs {1} boundary vertices")]
    Incompatible(usize, usize),
    #[error("no rotation matches: {0}")]
    NoMatch(String),
    #[error("formula path {name} does not compose: {detail}")]
    FormulaMismatch { name: String, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    X,
    Y,
    Z,
}

impl Tag {
    /// Tag of an arrow `source -> target` between boundary labels on a cycle of length `len`.
    pub fn of_step(source: u32, target: u32, len: u32) -> Tag {
        if (source % len) + 1 == target {
            Tag::X
        } else if (target % len) + 1 == source {
            Tag::Z
        } else {
            Tag::Y
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    /// Boundary labels in `1..=m*n`.
    pub source: u32,
    pub target: u32,
    pub tag: Tag,
    pub representative: Path,
    /// Members of the class seen during extraction.
    pub class_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryPresentation {
    pub m: u32,
    pub n: u32,
    pub boundary: Vec<u32>,
    pub generators: Vec<Generator>,
}

impl BoundaryPresentation {
    pub fn generator(&self, source: u32, target: u32) -> Option<&Generator> {
        self.generators.iter().find(|g| g.source == source && g.target == target)
    }

    /// The same presentation with every label moved `shift` steps forward.
    pub fn rotated(&self, shift: u32) -> BoundaryPresentation {
        let len = self.boundary.len() as u32;
        let mv = |l: u32| (l - 1 + shift) % len + 1;
        let mut out = self.clone();
        for g in &mut out.generators {
            g.source = mv(g.source);
            g.target = mv(g.target);
        }
        out.generators.sort_by_key(|g| (g.source, g.target));
        out
    }
}

/// A triangulation's reduced dimer, dual quiver and relations.
#[derive(Debug, Clone)]
pub struct BoundaryModel {
    pub triangulation: Triangulation,
    pub m: u32,
    pub dimer: GLmDimer,
    pub quiver: QuiverWithFaces,
    pub relations: RelationSet,
    pub system: RewriteSystem,
}

impl BoundaryModel {
    pub fn new(t: &Triangulation, m: u32) -> Result<Self, BoundaryError> {
        let dimer = reduce_dimer(&build_dimer(t, m)?);
        let quiver = dual_quiver(&dimer)?;
        let relations = potential_relations(&quiver)?;
        let system = RewriteSystem::new(&relations);
        Ok(BoundaryModel {
            triangulation: t.clone(),
            m,
            dimer,
            quiver,
            relations,
            system,
        })
    }

    pub fn presentation(&self, budget: SearchBudget) -> Result<BoundaryPresentation, BoundaryError> {
        boundary_generators(&self.quiver, &self.system, budget)
    }
}

fn passes_boundary(q: &QuiverWithFaces, arrows: &[ArrowId]) -> bool {
    arrows[..arrows.len() - 1].iter().any(|&a| q.is_boundary(q.arrow(a).target))
}

struct Candidate {
    arrows: Vec<ArrowId>,
    class: FxHashSet<Vec<ArrowId>>,
    best: Vec<ArrowId>,
}

/// Extracts a minimal generating set of the boundary algebra.
///
/// Candidates are simple paths from a boundary vertex through internal
/// vertices to a boundary vertex. A candidate (or a prefix of one) whose class
/// contains a path through an intermediate boundary vertex factors and is
/// dropped; survivors are grouped into classes.
pub fn boundary_generators(
    q: &QuiverWithFaces,
    sys: &RewriteSystem,
    budget: SearchBudget,
) -> Result<BoundaryPresentation, BoundaryError> {
    let mn = q.boundary_vertex_count() as u32;
    let mut found: BTreeMap<(u32, u32), Vec<Candidate>> = BTreeMap::new();

    // Class of `arrows` if it does not factor, `None` if it does.
    let explore = |arrows: &[ArrowId]| -> Result<Option<FxHashSet<Vec<ArrowId>>>, BoundaryError> {
        let max_length = budget.length_for(sys.max_side(), arrows.len(), arrows.len());
        let closure = sys.closure(arrows, max_length, budget.max_visited);
        if closure.members.len() >= budget.max_visited {
            let a = q.arrow(arrows[0]).source;
            let b = q.arrow(*arrows.last().unwrap()).target;
            return Err(BoundaryError::InconclusivePresentation {
                source_label: a + 1,
                target_label: b + 1,
                detail: format!("class exploration hit {} visited paths", budget.max_visited),
            });
        }
        if closure.members.iter().any(|p| passes_boundary(q, p)) {
            return Ok(None);
        }
        Ok(Some(closure.members.into_iter().collect()))
    };

    for s in 0..mn {
        let mut stack: Vec<(Vec<ArrowId>, Vec<u32>)> = vec![(Vec::new(), vec![s])];
        while let Some((prefix, seen)) = stack.pop() {
            let at = *seen.last().unwrap();
            let mut outs: Vec<_> = q.out_arrows(at).map(|a| (a.id, a.target)).collect();
            outs.reverse();
            for (a, t) in outs {
                let mut arrows = prefix.clone();
                arrows.push(a);
                if q.is_boundary(t) {
                    if let Some(class) = explore(&arrows)? {
                        let best = class.iter().min_by(|x, y| (x.len(), *x).cmp(&(y.len(), *y))).unwrap().clone();
                        found.entry((s, t)).or_default().push(Candidate { arrows, class, best });
                    }
                } else if !seen.contains(&t) && explore(&arrows)?.is_some() {
                    let mut seen = seen.clone();
                    seen.push(t);
                    stack.push((arrows, seen));
                }
            }
        }
    }

    let mut generators = Vec::new();
    for ((s, t), candidates) in found {
        // Merge candidates lying in one class.
        let mut reps: Vec<Candidate> = Vec::new();
        'next: for c in candidates {
            for r in reps.iter_mut() {
                let same = if r.class.contains(&c.arrows) || c.class.contains(&r.arrows) {
                    true
                } else {
                    let p = Path::new(q, r.best.clone())?;
                    let other = Path::new(q, c.best.clone())?;
                    let v = sys.paths_equal(&p, &other, budget).expect("same endpoints");
                    match v.outcome {
                        Outcome::Equal => true,
                        Outcome::Distinct => false,
                        Outcome::Unknown => {
                            return Err(BoundaryError::InconclusivePresentation {
                                source_label: s + 1,
                                target_label: t + 1,
                                detail: format!("could not compare {:?} and {:?}", r.best, c.best),
                            })
                        }
                    }
                };
                if same {
                    if (c.best.len(), &c.best) < (r.best.len(), &r.best) {
                        r.best = c.best.clone();
                    }
                    r.class.extend(c.class);
                    continue 'next;
                }
            }
            reps.push(c);
        }
        for r in reps {
            let (source, target) = (s + 1, t + 1);
            let single_boundary_arrow = r.best.len() == 1 && q.arrow(r.best[0]).kind == Kind::Boundary;
            let tag = match Tag::of_step(source, target, mn) {
                Tag::X if !single_boundary_arrow => Tag::Y,
                tag => tag,
            };
            generators.push(Generator {
                source,
                target,
                tag,
                representative: Path::new(q, r.best)?,
                class_size: r.class.len(),
            });
        }
    }
    generators.sort_by(|a, b| (a.source, a.target, &a.representative).cmp(&(b.source, b.target, &b.representative)));
    Ok(BoundaryPresentation {
        m: q.m,
        n: q.n,
        boundary: (1..=mn).collect(),
        generators,
    })
}
