//! Equality of paths in the dimer algebra: paths modulo the face relations.
//!
//! All relations are binomial, so two paths are equal exactly when a chain of
//! single substitutions connects them. The search runs breadth first from
//! both ends and returns the chain as a certificate.

use std::rc::Rc;
use std::sync::atomic::{AtomicU64, Ordering};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::Lattice;
use crate::quiver::{ArrowId, Path, RelationSet};

pub const DEFAULT_MAX_VISITED: usize = 1_000_000;
pub const BUDGET_ENV: &str = "DIMERLAB_BUDGET_VISITED";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("paths are incomparable: {0}->{1} vs {2}->{3}")]
    IncomparablePaths(u32, u32, u32, u32),
}

/// Search limits. `max_length: None` means `2 * (longest relation side) + max(|p|, |q|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_length: Option<usize>,
    pub max_visited: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_length: None,
            max_visited: DEFAULT_MAX_VISITED,
        }
    }
}

impl SearchBudget {
    /// Default budget, with the visited limit overridable from the environment.
    pub fn from_env() -> Self {
        let max_visited = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_MAX_VISITED);
        SearchBudget {
            max_length: None,
            max_visited,
        }
    }

    pub fn with_visited(max_visited: usize) -> Self {
        SearchBudget {
            max_length: None,
            max_visited,
        }
    }

    pub fn length_for(&self, max_side: usize, p: usize, q: usize) -> usize {
        self.max_length.unwrap_or(2 * max_side + p.max(q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Replace the positive-face side by the negative-face side.
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Step {
    pub position: usize,
    pub relation: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub step: Step,
    pub result: Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Equal,
    Distinct,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    Chain { steps: Vec<Step> },
    Invariant { name: String },
    Budget { max_length: usize, max_visited: usize, visited: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityVerdict {
    pub outcome: Outcome,
    pub evidence: Evidence,
    pub visited: usize,
}

impl EqualityVerdict {
    pub fn is_equal(&self) -> bool {
        self.outcome == Outcome::Equal
    }

    pub fn steps(&self) -> &[Step] {
        match &self.evidence {
            Evidence::Chain { steps } => steps,
            _ => &[],
        }
    }

    /// `[{step, relation, direction, position}, ...]` for an Equal verdict.
    pub fn certificate_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.steps()
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    serde_json::json!({
                        "step": i,
                        "relation": s.relation,
                        "direction": s.direction,
                        "position": s.position,
                    })
                })
                .collect(),
        )
    }
}

static EQUAL_VERDICTS: AtomicU64 = AtomicU64::new(0);
static REPLAY_FAILURES: AtomicU64 = AtomicU64::new(0);
static INVARIANT_CONFLICTS: AtomicU64 = AtomicU64::new(0);

/// Process-wide tallies of certificate checks run by [`RewriteSystem::paths_equal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Audit {
    pub equal_verdicts: u64,
    pub replay_failures: u64,
    pub invariant_conflicts: u64,
}

pub fn audit() -> Audit {
    Audit {
        equal_verdicts: EQUAL_VERDICTS.load(Ordering::Relaxed),
        replay_failures: REPLAY_FAILURES.load(Ordering::Relaxed),
        invariant_conflicts: INVARIANT_CONFLICTS.load(Ordering::Relaxed),
    }
}

/// Result of exploring the class of a single path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    /// Members in discovery order, the seed first.
    pub members: Vec<Vec<ArrowId>>,
    /// True if some member was dropped for exceeding the length bound or the
    /// visited limit was reached.
    pub truncated: bool,
}

/// Relations preprocessed for matching, plus their abelian lattice.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    relations: RelationSet,
    /// For each arrow, the relation sides starting with it.
    by_first: Vec<Vec<(usize, Direction)>>,
    lattice: Lattice,
    max_side: usize,
}

impl RewriteSystem {
    pub fn new(relations: &RelationSet) -> Self {
        let mut by_first = vec![Vec::new(); relations.arrow_count];
        for (i, r) in relations.relations.iter().enumerate() {
            by_first[r.lhs[0] as usize].push((i, Direction::Forward));
            by_first[r.rhs[0] as usize].push((i, Direction::Backward));
        }
        let lattice = Lattice::from_generators(
            relations.arrow_count,
            relations.relations.iter().map(|r| {
                let mut v = counts(relations.arrow_count, &r.lhs);
                for &a in &r.rhs {
                    v[a as usize] -= 1;
                }
                v
            }),
        );
        RewriteSystem {
            max_side: relations.max_side_len(),
            relations: relations.clone(),
            by_first,
            lattice,
        }
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn max_side(&self) -> usize {
        self.max_side
    }

    fn sides(&self, step: Step) -> (&[ArrowId], &[ArrowId]) {
        let r = &self.relations.relations[step.relation];
        match step.direction {
            Direction::Forward => (&r.lhs, &r.rhs),
            Direction::Backward => (&r.rhs, &r.lhs),
        }
    }

    /// All single substitutions applicable to `arrows`, in (position, relation, direction) order.
    pub fn steps(&self, arrows: &[ArrowId]) -> Vec<Step> {
        let mut out = Vec::new();
        for position in 0..arrows.len() {
            for &(relation, direction) in &self.by_first[arrows[position] as usize] {
                let step = Step {
                    position,
                    relation,
                    direction,
                };
                let (from, _) = self.sides(step);
                if arrows[position..].starts_with(from) {
                    out.push(step);
                }
            }
        }
        out.sort();
        out
    }

    /// Applies `step`, or `None` if its left side does not occur there.
    pub fn apply(&self, arrows: &[ArrowId], step: Step) -> Option<Vec<ArrowId>> {
        let (from, to) = self.sides(step);
        if step.relation >= self.relations.relations.len() || !arrows.get(step.position..)?.starts_with(from) {
            return None;
        }
        let mut out = Vec::with_capacity(arrows.len() - from.len() + to.len());
        out.extend_from_slice(&arrows[..step.position]);
        out.extend_from_slice(to);
        out.extend_from_slice(&arrows[step.position + from.len()..]);
        Some(out)
    }

    pub fn sites(&self, p: &Path) -> Vec<Site> {
        self.steps(&p.arrows)
            .into_iter()
            .map(|step| Site {
                step,
                result: Path {
                    source: p.source,
                    target: p.target,
                    arrows: self.apply(&p.arrows, step).expect("step matches"),
                },
            })
            .collect()
    }

    /// Applies a certificate chain to `p`.
    pub fn replay(&self, p: &Path, steps: &[Step]) -> Option<Path> {
        let mut cur = p.arrows.clone();
        for &s in steps {
            cur = self.apply(&cur, s)?;
        }
        Some(Path {
            source: p.source,
            target: p.target,
            arrows: cur,
        })
    }

    /// Arrow-count vector of `p` reduced modulo the lattice spanned by the
    /// relation difference vectors.
    pub fn abelian_invariant(&self, p: &Path) -> Vec<i64> {
        self.lattice.reduce(&counts(self.relations.arrow_count, &p.arrows))
    }

    fn successors(&self, arrows: &[ArrowId]) -> Vec<Vec<ArrowId>> {
        let mut out: Vec<Vec<ArrowId>> = self
            .steps(arrows)
            .into_iter()
            .map(|s| self.apply(arrows, s).expect("step matches"))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// The class of `p` explored breadth first, keeping members up to `max_length`.
    pub fn closure(&self, p: &[ArrowId], max_length: usize, max_visited: usize) -> Closure {
        let mut seen: FxHashMap<Vec<ArrowId>, ()> = FxHashMap::default();
        let mut members = vec![p.to_vec()];
        seen.insert(p.to_vec(), ());
        let mut truncated = false;
        let mut head = 0;
        while head < members.len() {
            let cur = members[head].clone();
            head += 1;
            for next in self.successors(&cur) {
                if next.len() > max_length {
                    truncated = true;
                    continue;
                }
                if seen.contains_key(&next) {
                    continue;
                }
                if members.len() >= max_visited {
                    return Closure {
                        members,
                        truncated: true,
                    };
                }
                seen.insert(next.clone(), ());
                members.push(next);
            }
        }
        Closure { members, truncated }
    }

    pub fn paths_equal(&self, p: &Path, q: &Path, budget: SearchBudget) -> Result<EqualityVerdict, RewriteError> {
        if (p.source, p.target) != (q.source, q.target) {
            return Err(RewriteError::IncomparablePaths(p.source, p.target, q.source, q.target));
        }
        let max_length = budget.length_for(self.max_side, p.len(), q.len());
        let verdict = if p.arrows == q.arrows {
            EqualityVerdict {
                outcome: Outcome::Equal,
                evidence: Evidence::Chain { steps: Vec::new() },
                visited: 1,
            }
        } else if self.abelian_invariant(p) != self.abelian_invariant(q) {
            EqualityVerdict {
                outcome: Outcome::Distinct,
                evidence: Evidence::Invariant {
                    name: "abelian-residue".into(),
                },
                visited: 0,
            }
        } else {
            self.search(&p.arrows, &q.arrows, max_length, budget.max_visited)
        };
        if verdict.is_equal() {
            EQUAL_VERDICTS.fetch_add(1, Ordering::Relaxed);
            if self.replay(p, verdict.steps()).as_ref() != Some(q) {
                REPLAY_FAILURES.fetch_add(1, Ordering::Relaxed);
            }
            if self.abelian_invariant(p) != self.abelian_invariant(q) {
                INVARIANT_CONFLICTS.fetch_add(1, Ordering::Relaxed);
            }
        }
        Ok(verdict)
    }

    fn search(&self, p: &[ArrowId], q: &[ArrowId], max_length: usize, max_visited: usize) -> EqualityVerdict {
        let mut sides = [Frontier::new(p), Frontier::new(q)];
        let mut visited = 2;
        let unknown = |visited| EqualityVerdict {
            outcome: Outcome::Unknown,
            evidence: Evidence::Budget {
                max_length,
                max_visited,
                visited,
            },
            visited,
        };
        loop {
            for s in &sides {
                if s.frontier.is_empty() && !s.truncated {
                    return EqualityVerdict {
                        outcome: Outcome::Distinct,
                        evidence: Evidence::Invariant {
                            name: "closure-exhausted".into(),
                        },
                        visited,
                    };
                }
            }
            let pick = match (sides[0].frontier.len(), sides[1].frontier.len()) {
                (0, 0) => return unknown(visited),
                (0, _) => 1,
                (_, 0) => 0,
                (a, b) => usize::from(b < a),
            };
            let frontier = std::mem::take(&mut sides[pick].frontier);
            let mut next_frontier = Vec::new();
            for node in frontier {
                let cur = Rc::clone(&sides[pick].nodes[node as usize].0);
                for step in self.steps(&cur) {
                    let next = self.apply(&cur, step).expect("step matches");
                    if next.len() > max_length {
                        sides[pick].truncated = true;
                        continue;
                    }
                    if sides[pick].index.contains_key(next.as_slice()) {
                        continue;
                    }
                    if visited >= max_visited {
                        return unknown(visited);
                    }
                    visited += 1;
                    let next: Rc<[ArrowId]> = next.into();
                    let id = sides[pick].push(Rc::clone(&next), node, step);
                    if let Some(&meet) = sides[1 - pick].index.get(&*next) {
                        let (from_p, from_q) = if pick == 0 { (id, meet) } else { (meet, id) };
                        let mut steps = sides[0].chain_to(from_p);
                        steps.extend(sides[1].chain_to(from_q).into_iter().rev().map(|s| Step {
                            direction: s.direction.flip(),
                            ..s
                        }));
                        return EqualityVerdict {
                            outcome: Outcome::Equal,
                            evidence: Evidence::Chain { steps },
                            visited,
                        };
                    }
                    next_frontier.push(id);
                }
            }
            sides[pick].frontier = next_frontier;
        }
    }
}

struct Frontier {
    nodes: Vec<(Rc<[ArrowId]>, u32, Option<Step>)>,
    index: FxHashMap<Rc<[ArrowId]>, u32>,
    frontier: Vec<u32>,
    truncated: bool,
}

impl Frontier {
    fn new(seed: &[ArrowId]) -> Self {
        let mut f = Frontier {
            nodes: Vec::new(),
            index: FxHashMap::default(),
            frontier: Vec::new(),
            truncated: false,
        };
        let seed: Rc<[ArrowId]> = seed.into();
        f.nodes.push((Rc::clone(&seed), 0, None));
        f.index.insert(seed, 0);
        f.frontier.push(0);
        f
    }

    fn push(&mut self, path: Rc<[ArrowId]>, parent: u32, step: Step) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push((Rc::clone(&path), parent, Some(step)));
        self.index.insert(path, id);
        id
    }

    /// Steps leading from the seed to `node`.
    fn chain_to(&self, mut node: u32) -> Vec<Step> {
        let mut out = Vec::new();
        while let (_, parent, Some(step)) = &self.nodes[node as usize] {
            out.push(*step);
            node = *parent;
        }
        out.reverse();
        out
    }
}

fn counts(dim: usize, arrows: &[ArrowId]) -> Vec<i64> {
    let mut v = vec![0i64; dim];
    for &a in arrows {
        v[a as usize] += 1;
    }
    v
}

/// Every substitution site of either side of every relation in `p`.
pub fn rewrite_sites(p: &Path, r: &RelationSet) -> Vec<Site> {
    RewriteSystem::new(r).sites(p)
}

pub fn paths_equal(p: &Path, q: &Path, r: &RelationSet, budget: SearchBudget) -> Result<EqualityVerdict, RewriteError> {
    RewriteSystem::new(r).paths_equal(p, q, budget)
}

pub fn abelian_invariant(p: &Path, r: &RelationSet) -> Vec<i64> {
    RewriteSystem::new(r).abelian_invariant(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::{build_dimer, reduce_dimer};
    use crate::polygon::{enumerate_triangulations, fan_triangulation};
    use crate::quiver::{chordless_cycles_at, dual_quiver, potential_relations, QuiverWithFaces};
    use proptest::prelude::*;

    fn setup(n: u32, m: u32) -> (QuiverWithFaces, RelationSet) {
        let t = fan_triangulation(n, 1).unwrap();
        let q = dual_quiver(&reduce_dimer(&build_dimer(&t, m).unwrap())).unwrap();
        let r = potential_relations(&q).unwrap();
        (q, r)
    }

    fn arrow(q: &QuiverWithFaces, s: i64, t: i64) -> ArrowId {
        q.arrows_between(q.boundary_vertex(s), q.boundary_vertex(t))[0]
    }

    /// Membership in the integer row span via Smith normal form: with
    /// `U A V = D`, `x A = v` is solvable iff `v V` is divisible by `D`.
    fn snf_contains(gens: &[Vec<i64>], v: &[i64]) -> bool {
        let rows = gens.len();
        let cols = v.len();
        let mut a: Vec<Vec<i128>> = gens.iter().map(|g| g.iter().map(|&x| x as i128).collect()).collect();
        let mut vv: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pr, pc)) = (t..rows)
                .flat_map(|r| (t..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| a[r][c] != 0)
                .min_by_key(|&(r, c)| a[r][c].abs())
            else {
                break;
            };
            a.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
            vv.swap(t, pc);
            let mut clean = true;
            for r in t + 1..rows {
                let f = a[r][t] / a[t][t];
                if f != 0 {
                    let pivot = a[t].clone();
                    for (x, y) in a[r].iter_mut().zip(pivot) {
                        *x -= f * y;
                    }
                }
                clean &= a[r][t] == 0;
            }
            for c in t + 1..cols {
                let f = a[t][c] / a[t][t];
                if f != 0 {
                    for row in a.iter_mut() {
                        let y = row[t];
                        row[c] -= f * y;
                    }
                    vv[c] -= f * vv[t];
                }
                clean &= a[t][c] == 0;
            }
            if clean {
                t += 1;
            }
        }
        (0..cols).all(|c| if c < t { vv[c] % a[c][c] == 0 } else { vv[c] == 0 })
    }

    #[test]
    fn snf_oracle_sanity() {
        assert!(snf_contains(&[vec![2, 0], vec![0, 3]], &[4, -3]));
        assert!(!snf_contains(&[vec![2, 0], vec![0, 3]], &[1, 3]));
        assert!(snf_contains(&[vec![1, 1], vec![1, -1]], &[2, 0]));
        assert!(!snf_contains(&[vec![1, 1], vec![1, -1]], &[1, 0]));
    }

    #[test]
    fn trivial_path_has_no_sites() {
        let (_, r) = setup(4, 2);
        assert!(rewrite_sites(&Path::trivial(0), &r).is_empty());
    }

    #[test]
    fn triangle_site_and_one_step_equality() {
        let (q, r) = setup(3, 2);
        let p = Path::new(&q, vec![arrow(&q, 2, 3), arrow(&q, 3, 4)]).unwrap();
        let other = Path::new(&q, vec![arrow(&q, 2, 6), arrow(&q, 6, 4)]).unwrap();
        let sites = rewrite_sites(&p, &r);
        assert!(sites.iter().any(|s| s.result == other));
        for s in &sites {
            assert_eq!((s.result.source, s.result.target), (p.source, p.target));
        }
        let v = paths_equal(&p, &other, &r, SearchBudget::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Equal);
        assert_eq!(v.steps().len(), 1);
        assert_eq!(v.certificate_json()[0]["step"], 0);
    }

    #[test]
    fn reflexive_and_incomparable() {
        let (q, r) = setup(4, 2);
        let p = Path::new(&q, vec![arrow(&q, 1, 2)]).unwrap();
        let v = paths_equal(&p, &p, &r, SearchBudget::with_visited(1)).unwrap();
        assert_eq!(v.outcome, Outcome::Equal);
        assert!(v.steps().is_empty());
        let other = Path::new(&q, vec![arrow(&q, 2, 3)]).unwrap();
        assert!(paths_equal(&p, &other, &r, SearchBudget::default()).is_err());
    }

    #[test]
    fn relation_sides_equal_in_one_step() {
        for (n, m) in [(3, 2), (5, 2), (4, 3), (5, 3), (4, 4)] {
            let (q, r) = setup(n, m);
            let sys = RewriteSystem::new(&r);
            for rel in &r.relations {
                let a = Path::new(&q, rel.lhs.clone()).unwrap();
                let b = Path::new(&q, rel.rhs.clone()).unwrap();
                assert_eq!(sys.abelian_invariant(&a), sys.abelian_invariant(&b));
                let v = sys.paths_equal(&a, &b, SearchBudget::default()).unwrap();
                assert_eq!(v.outcome, Outcome::Equal);
                assert_eq!(v.steps().len(), 1);
            }
        }
    }

    #[test]
    fn cycle_appended_is_separated_by_the_invariant() {
        let (q, r) = setup(3, 2);
        let p = Path::new(&q, vec![arrow(&q, 1, 2)]).unwrap();
        let u = &chordless_cycles_at(&q, p.target)[0];
        let pu = p.then(u).unwrap();
        let v_u: Vec<i64> = counts(r.arrow_count, &u.arrows);
        let gens: Vec<Vec<i64>> = r
            .relations
            .iter()
            .map(|rel| {
                let mut v = counts(r.arrow_count, &rel.lhs);
                for &a in &rel.rhs {
                    v[a as usize] -= 1;
                }
                v
            })
            .collect();
        assert!(!snf_contains(&gens, &v_u));
        assert_ne!(abelian_invariant(&p, &r), abelian_invariant(&pu, &r));
        let v = paths_equal(&p, &pu, &r, SearchBudget::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Distinct);
    }

    #[test]
    fn starved_budget_gives_unknown() {
        // Two different face cycles appended at the same vertex: equal, but
        // not within the seeds alone.
        let (q, r) = setup(6, 2);
        let p = Path::new(&q, vec![arrow(&q, 1, 2)]).unwrap();
        let cycles = chordless_cycles_at(&q, p.target);
        assert!(cycles.len() >= 2);
        let a = p.then(&cycles[0]).unwrap();
        let b = p.then(&cycles[1]).unwrap();
        let sys = RewriteSystem::new(&r);
        assert_eq!(sys.paths_equal(&a, &b, SearchBudget::with_visited(1)).unwrap().outcome, Outcome::Unknown);
        assert_eq!(sys.paths_equal(&a, &b, SearchBudget::default()).unwrap().outcome, Outcome::Equal);
    }

    #[test]
    fn chordless_cycles_pairwise_equal() {
        for n in 4..=6u32 {
            for t in enumerate_triangulations(n).unwrap() {
                for m in [2u32, 3] {
                    let q = dual_quiver(&reduce_dimer(&build_dimer(&t, m).unwrap())).unwrap();
                    let sys = RewriteSystem::new(&potential_relations(&q).unwrap());
                    for v in 0..q.vertices.len() as u32 {
                        let cs = chordless_cycles_at(&q, v);
                        for c in &cs[1..] {
                            let verdict = sys.paths_equal(&cs[0], c, SearchBudget::default()).unwrap();
                            assert_eq!(verdict.outcome, Outcome::Equal, "{} m={} v={}", t, m, v);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closure_of_relation_side_contains_other_side() {
        let (_, r) = setup(5, 3);
        let sys = RewriteSystem::new(&r);
        let rel = &r.relations[0];
        let c = sys.closure(&rel.lhs, 10, 1000);
        assert!(c.members.contains(&rel.rhs));
        assert_eq!(c.members[0], rel.lhs);
    }

    fn random_walk(q: &QuiverWithFaces, start: u32, choices: &[usize]) -> Path {
        let mut arrows = Vec::new();
        let mut at = start;
        for &c in choices {
            let out: Vec<_> = q.out_arrows(at).map(|a| (a.id, a.target)).collect();
            let (a, t) = out[c % out.len()];
            arrows.push(a);
            at = t;
        }
        if arrows.is_empty() {
            Path::trivial(start)
        } else {
            Path::new(q, arrows).unwrap()
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rewrites_preserve_endpoints_and_invariant(start in 0u32..10, choices in proptest::collection::vec(0usize..4, 0..6)) {
            let (q, r) = setup(5, 2);
            let sys = RewriteSystem::new(&r);
            let p = random_walk(&q, start % q.vertices.len() as u32, &choices);
            let inv = sys.abelian_invariant(&p);
            for s in sys.sites(&p) {
                prop_assert_eq!((s.result.source, s.result.target), (p.source, p.target));
                prop_assert!(Path::new(&q, s.result.arrows.clone()).is_ok() || s.result.arrows.is_empty());
                prop_assert_eq!(sys.abelian_invariant(&s.result), inv.clone());
                prop_assert_eq!(sys.replay(&p, &[s.step]), Some(s.result.clone()));
            }
        }

        #[test]
        fn equal_is_symmetric_and_transitive(start in 0u32..10, choices in proptest::collection::vec(0usize..4, 1..5), picks in proptest::collection::vec(0usize..64, 3)) {
            let (q, r) = setup(5, 2);
            let sys = RewriteSystem::new(&r);
            let p = random_walk(&q, start % q.vertices.len() as u32, &choices);
            let class = sys.closure(&p.arrows, p.len() + 4, 200).members;
            let pick = |i: usize| Path { source: p.source, target: p.target, arrows: class[i % class.len()].clone() };
            let (a, b, c) = (pick(picks[0]), pick(picks[1]), pick(picks[2]));
            let budget = SearchBudget { max_length: Some(p.len() + 4), max_visited: 100_000 };
            let ab = sys.paths_equal(&a, &b, budget).unwrap();
            let ba = sys.paths_equal(&b, &a, budget).unwrap();
            let bc = sys.paths_equal(&b, &c, budget).unwrap();
            let ac = sys.paths_equal(&a, &c, budget).unwrap();
            prop_assert_eq!(ab.outcome, Outcome::Equal);
            prop_assert_eq!(ba.outcome, Outcome::Equal);
            prop_assert_eq!(bc.outcome, Outcome::Equal);
            prop_assert_eq!(ac.outcome, Outcome::Equal);
            prop_assert_eq!(sys.replay(&a, ab.steps()), Some(b.clone()));
            prop_assert_eq!(sys.replay(&b, ba.steps()), Some(a.clone()));
        }
    }
}
