//! Acceptance suite. Prints one PASS/FAIL line per criterion, then fails if any
//! criterion failed. Run with `cargo test --release --test acceptance -- --nocapture`.
//!
//! Everything runs inside one test so that the process-wide rewrite audit at the
//! end covers every search made by the earlier criteria. Lines go straight to
//! stdout so they show up even when the harness captures output.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::{Duration, Instant};

use dimerlab::boundary::{fan_m2_arrow_table, resolve_arrow_table, relation_words};
use dimerlab::dimer::reduce_dimer_with;
use dimerlab::{
    audit, build_dimer, build_gamma, chordless_cycle_at, chordless_cycles_at, enumerate_triangulations,
    fan_triangulation, match_gamma, reduce_dimer, validate_dimer, validate_dimer_model, verify_central_element,
    verify_theorem_relations, ArrowId, BoundaryModel, Direction, Evidence, Kind, Outcome, QuiverWithFaces,
    RelationSet, SearchBudget, Step, Triangulation,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// (m, n) pairs of criteria 3, 4 and 6.
fn fan_grid() -> Vec<(u32, u32)> {
    let mut g = Vec::new();
    for (m, ns) in [(2, 3..=8), (3, 3..=6), (4, 3..=5), (5, 3..=4)] {
        for n in ns {
            g.push((m, n));
        }
    }
    g
}

/// Every triangulation of criteria 5, 7 and 9.
fn flip_grid() -> Vec<(u32, Triangulation)> {
    let mut g = Vec::new();
    for (m, ns) in [(2, 4..=7), (3, 4..=5)] {
        for n in ns {
            for t in enumerate_triangulations(n).unwrap() {
                g.push((m, t));
            }
        }
    }
    g
}

fn fan_model(m: u32, n: u32) -> BoundaryModel {
    BoundaryModel::new(&fan_triangulation(n, 1).unwrap(), m).unwrap()
}

/// Polygonal number of second order, written out independently of the library.
fn polygonal(s: i64, k: i64) -> i64 {
    (k * k * (s - 2) + k * (s - 4)) / 2
}

/// Count of internal vertices built up one fan triangle at a time: the square
/// `(m-1)^2` at n = 4, then `1 + 2 + ... + (m-1)` for every further triangle.
fn stacked_count(m: i64, n: i64) -> i64 {
    let mut v = (m - 1) * (m - 1);
    for _ in 4..n {
        v += (m - 1) * m / 2;
    }
    v
}

/// Replays a chain using only the relation list and the arrow endpoints.
fn replay_independently(q: &QuiverWithFaces, rel: &RelationSet, from: &[ArrowId], to: &[ArrowId], steps: &[Step]) -> bool {
    let composable = |p: &[ArrowId]| p.windows(2).all(|w| q.arrows[w[0] as usize].target == q.arrows[w[1] as usize].source);
    let mut cur = from.to_vec();
    for s in steps {
        let Some(r) = rel.relations.get(s.relation) else { return false };
        let (a, b) = match s.direction {
            Direction::Forward => (&r.lhs, &r.rhs),
            Direction::Backward => (&r.rhs, &r.lhs),
        };
        if s.position + a.len() > cur.len() || cur[s.position..s.position + a.len()] != a[..] {
            return false;
        }
        cur.splice(s.position..s.position + a.len(), b.iter().copied());
        if !composable(&cur) {
            return false;
        }
    }
    cur == to
}

fn say(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", line);
    let _ = out.flush();
}

struct Suite {
    results: Vec<(u32, bool)>,
}

impl Suite {
    fn run(&mut self, id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = outcome.is_ok() && in_time;
        let detail = match &outcome {
            Ok(d) | Err(d) => d.clone(),
        };
        let limit = limit.map(|l| format!(" (limit {:?})", l)).unwrap_or_default();
        say(format!(
            "criterion {:>2}: {} {} | {} | {:.3}s{}",
            id,
            if pass { "PASS" } else { "FAIL" },
            name,
            detail,
            took.as_secs_f64(),
            limit
        ));
        self.results.push((id, pass));
    }
}

#[test]
fn acceptance() {
    let budget = SearchBudget::default();
    let mut suite = Suite { results: Vec::new() };
    say(format!("search budget: max_visited={} max_length=derived", budget.max_visited));

    suite.run(1, "internal vertex count of fan quivers", Some(Duration::from_secs(10)), || {
        let mut checked = 0;
        for m in 2..=6u32 {
            for n in 4..=9u32 {
                let q = fan_model(m, n).quiver;
                let got = q.internal_vertex_count() as i64;
                let (m, n) = (m as i64, n as i64);
                if got != polygonal(n, m - 1) || got != stacked_count(m, n) {
                    return Err(format!("m={} n={}: {} internal vertices, expected {}", m, n, got, polygonal(n, m - 1)));
                }
                if n == 4 && got != (m - 1) * (m - 1) {
                    return Err(format!("m={}: n=4 count {} is not (m-1)^2", m, got));
                }
                checked += 1;
            }
        }
        Ok(format!("{} (m, n) pairs", checked))
    });

    suite.run(2, "m=2 fan quiver structure", Some(Duration::from_secs(5)), || {
        for n in 3..=8u32 {
            let q = fan_model(2, n).quiver;
            let (b, i, f) = (q.boundary_vertex_count(), q.internal_vertex_count(), q.faces.len());
            if (b, i, f) != (2 * n as usize, n as usize - 3, 2 * n as usize - 2) {
                return Err(format!("n={}: {} boundary, {} internal, {} faces", n, b, i, f));
            }
            let table = resolve_arrow_table(&q, &fan_m2_arrow_table(n));
            let mut ids = BTreeSet::new();
            for (name, r) in &table {
                match r {
                    Ok(a) => {
                        ids.insert(*a);
                    }
                    Err(why) => return Err(format!("n={}: {} {}", n, name, why)),
                }
            }
            if ids.len() != table.len() || ids.len() != q.arrows.len() {
                return Err(format!("n={}: {} named arrows for {} arrows", n, ids.len(), q.arrows.len()));
            }
            let rim: BTreeSet<ArrowId> = q.boundary_to_boundary_arrows().into_iter().collect();
            let mut named: BTreeSet<ArrowId> = (1..=2 * n).map(|k| table[&format!("x{}", k)].clone().unwrap()).collect();
            named.insert(table["y4"].clone().unwrap());
            named.insert(table[&format!("y{}", 2 * n)].clone().unwrap());
            if n == 3 {
                named.insert(table["alpha0"].clone().unwrap());
            }
            if rim != named {
                return Err(format!("n={}: boundary-to-boundary arrows differ from x, y4, y{}", n, 2 * n));
            }
        }
        Ok("n = 3..8".into())
    });

    suite.run(3, "fan presentations match Gamma(m, n)", Some(Duration::from_secs(300)), || {
        for (m, n) in fan_grid() {
            let model = fan_model(m, n);
            let bp = model.presentation(budget).map_err(|e| format!("m={} n={}: {}", m, n, e))?;
            if bp.generators.len() != (3 * n * (m - 1)) as usize {
                return Err(format!("m={} n={}: {} generators", m, n, bp.generators.len()));
            }
            match_gamma(&bp, &build_gamma(m, n), false).map_err(|e| format!("m={} n={}: {}", m, n, e))?;
        }
        Ok(format!("{} (m, n) pairs", fan_grid().len()))
    });

    suite.run(4, "relation families hold", None, || {
        let mut families = BTreeMap::<String, usize>::new();
        for (m, n) in fan_grid() {
            let model = fan_model(m, n);
            let bp = model.presentation(budget).map_err(|e| e.to_string())?;
            let g = match_gamma(&bp, &build_gamma(m, n), false).map_err(|e| e.to_string())?;
            let report = verify_theorem_relations(&bp, &g, &model.system, budget).map_err(|e| e.to_string())?;
            if report.instances.len() != relation_words(m, n).len() {
                return Err(format!("m={} n={}: {} instances checked", m, n, report.instances.len()));
            }
            if let Some(bad) = report.instances.iter().find(|i| i.outcome != Outcome::Equal) {
                return Err(format!("m={} n={}: {} {} is {:?}", m, n, bad.family, bad.index, bad.outcome));
            }
            // The long relation sits at every even index when m = 2.
            let long = report.instances.iter().filter(|i| i.family == "yy=x").count();
            if m == 2 && long != n as usize {
                return Err(format!("n={}: {} instances of the long relation", n, long));
            }
            for i in &report.instances {
                *families.entry(i.family.clone()).or_default() += 1;
            }
        }
        let general = ["xy=yz", "xz=zx", "xz=yxx", "xxy=zx", "yy=x"];
        if let Some(f) = general.iter().find(|f| !families.contains_key(**f)) {
            return Err(format!("family {} never instantiated", f));
        }
        Ok(families.iter().map(|(k, v)| format!("{}:{}", k, v)).collect::<Vec<_>>().join(" "))
    });

    suite.run(5, "every triangulation matches Gamma(m, n)", Some(Duration::from_secs(1800)), || {
        let grid = flip_grid();
        let mut rotations = BTreeSet::new();
        for (m, t) in &grid {
            let model = BoundaryModel::new(t, *m).map_err(|e| e.to_string())?;
            let bp = model.presentation(budget).map_err(|e| format!("m={} {:?}: {}", m, t, e))?;
            let g = match_gamma(&bp, &build_gamma(*m, t.n()), false).map_err(|e| format!("m={} {:?}: {}", m, t, e))?;
            rotations.insert(g.rotation);
        }
        if grid.len() != 63 + 7 {
            return Err(format!("{} triangulations", grid.len()));
        }
        Ok(format!("{} triangulations, rotations used {:?}", grid.len(), rotations))
    });

    suite.run(6, "central element commutes with generators", None, || {
        let mut total = 0;
        for (m, n) in fan_grid() {
            let model = fan_model(m, n);
            let bp = model.presentation(budget).map_err(|e| e.to_string())?;
            let r = verify_central_element(&bp, &model.quiver, &model.system, budget).map_err(|e| e.to_string())?;
            if let Some(bad) = r.entries.iter().find(|e| e.outcome != Outcome::Equal) {
                return Err(format!("m={} n={}: {}->{} is {:?}", m, n, bad.source, bad.target, bad.outcome));
            }
            total += r.entries.len();
        }
        Ok(format!("{} commutations", total))
    });

    suite.run(7, "chordless cycles at a vertex agree", None, || {
        let mut pairs = 0;
        for (m, t) in flip_grid() {
            let model = BoundaryModel::new(&t, m).map_err(|e| e.to_string())?;
            let q = &model.quiver;
            for v in &q.vertices {
                let cycles = chordless_cycles_at(q, v.id);
                if q.face_incidences(v.id) < 2 {
                    continue;
                }
                for (i, c) in cycles.iter().enumerate() {
                    for d in &cycles[i + 1..] {
                        let verdict = model.system.paths_equal(c, d, budget).map_err(|e| e.to_string())?;
                        if verdict.outcome != Outcome::Equal {
                            return Err(format!("m={} {:?} vertex {}: {:?}", m, t, v.id, verdict.outcome));
                        }
                        pairs += 1;
                    }
                }
            }
        }
        Ok(format!("{} pairs", pairs))
    });

    suite.run(8, "dimer model axioms", None, || {
        let mut quivers = Vec::new();
        for m in 2..=6u32 {
            for n in 4..=9u32 {
                quivers.push(fan_model(m, n));
            }
        }
        for (m, n) in fan_grid() {
            quivers.push(fan_model(m, n));
        }
        for (m, t) in flip_grid() {
            quivers.push(BoundaryModel::new(&t, m).map_err(|e| e.to_string())?);
        }
        for model in &quivers {
            let d = validate_dimer(&model.dimer);
            let q = validate_dimer_model(&model.quiver);
            if !d.passed() || !q.passed() {
                return Err(format!(
                    "m={} {:?}: {:?} {:?}",
                    model.m,
                    model.triangulation,
                    d.failed(),
                    q.failed()
                ));
            }
            // Recount face incidences from the face cycles themselves.
            for v in &model.quiver.vertices {
                let faces: usize = model
                    .quiver
                    .faces
                    .iter()
                    .map(|f| f.arrows.iter().filter(|&&a| model.quiver.arrows[a as usize].target == v.id).count())
                    .sum();
                let allowed: &[usize] = match v.kind {
                    Kind::Boundary => &[1, 3],
                    Kind::Internal => &[4, 6],
                };
                if !allowed.contains(&faces) {
                    return Err(format!("vertex {} lies on {} faces", v.id, faces));
                }
            }
        }
        Ok(format!("{} quivers", quivers.len()))
    });

    suite.run(9, "reduction order does not matter", None, || {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let mut runs = 0;
        for (m, t) in flip_grid() {
            let raw = build_dimer(&t, m).unwrap();
            let reference = reduce_dimer(&raw).canonical_code();
            for _ in 0..20 {
                let reduced = reduce_dimer_with(&raw, |k| rng.random_range(0..k));
                if reduced.canonical_code() != reference {
                    return Err(format!("m={} {:?}: reduced dimers differ", m, t));
                }
                runs += 1;
            }
        }
        Ok(format!("{} random orders", runs))
    });

    suite.run(10, "equality certificates are sound", None, || {
        // Fresh chains, replayed without the rewrite engine.
        let mut replayed = 0;
        for (m, n) in fan_grid() {
            let model = fan_model(m, n);
            let q = &model.quiver;
            let bp = model.presentation(budget).map_err(|e| e.to_string())?;
            for g in &bp.generators {
                let rep = &g.representative;
                let left = chordless_cycle_at(q, rep.source).unwrap().then(rep).unwrap();
                let right = rep.then(&chordless_cycle_at(q, rep.target).unwrap()).unwrap();
                let v = model.system.paths_equal(&left, &right, budget).unwrap();
                let Evidence::Chain { steps } = &v.evidence else {
                    return Err(format!("m={} n={}: no chain for an Equal verdict", m, n));
                };
                if !replay_independently(q, &model.relations, &left.arrows, &right.arrows, steps) {
                    return Err(format!("m={} n={}: chain for {}->{} does not replay", m, n, g.source, g.target));
                }
                replayed += 1;
            }
        }
        let a = audit();
        if a.replay_failures != 0 || a.invariant_conflicts != 0 || a.equal_verdicts == 0 {
            return Err(format!("{:?}", a));
        }
        Ok(format!(
            "{} chains replayed independently; {} Equal verdicts this run, 0 replay failures, 0 invariant conflicts",
            replayed, a.equal_verdicts
        ))
    });

    let failed: Vec<u32> = suite.results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    say(format!(
        "acceptance: {}/{} criteria passed",
        suite.results.len() - failed.len(),
        suite.results.len()
    ));
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}
