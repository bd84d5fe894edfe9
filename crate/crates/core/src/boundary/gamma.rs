//! The canonical boundary quiver Γ(m, n), matching against it, and the
//! relation families it carries.

use serde::{Deserialize, Serialize};

use super::{BoundaryError, BoundaryPresentation, Tag};
use crate::quiver::Path;
use crate::rewrite::{Outcome, RewriteSystem, SearchBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaArrow {
    pub family: Tag,
    pub index: u32,
    pub source: u32,
    pub target: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaQuiver {
    pub m: u32,
    pub n: u32,
    pub arrows: Vec<GammaArrow>,
}

impl GammaQuiver {
    pub fn len(&self) -> u32 {
        self.m * self.n
    }

    /// Reduces any integer index into `1..=m*n`.
    pub fn norm(&self, k: i64) -> u32 {
        ((k - 1).rem_euclid(self.len() as i64) + 1) as u32
    }

    pub fn get(&self, family: Tag, k: i64) -> Option<&GammaArrow> {
        let k = self.norm(k);
        self.arrows.iter().find(|a| a.family == family && a.index == k)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("gamma serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph gamma_{}_{} {{\n  layout=circo;\n", self.m, self.n);
        for v in 1..=self.len() {
            out.push_str(&format!("  v{} [label=\"{}\"];\n", v, v));
        }
        for a in &self.arrows {
            let name = match a.family {
                Tag::X => "x",
                Tag::Y => "y",
                Tag::Z => "z",
            };
            out.push_str(&format!("  v{} -> v{} [label=\"{}{}\"];\n", a.source, a.target, name, a.index));
        }
        out.push_str("}\n");
        out
    }
}

/// Γ(m, n): `x_k: k-1 -> k` for every k; `z_k: k+1 -> k` for `k mod m` not 0
/// or 1; `y_k: k+2+2i -> k` for `k mod m` not 1, where `i = -k mod m`.
pub fn build_gamma(m: u32, n: u32) -> GammaQuiver {
    let mut g = GammaQuiver { m, n, arrows: Vec::new() };
    let (mi, len) = (m as i64, (m * n) as i64);
    for k in 1..=len {
        let r = k % mi;
        let mut push = |family, source: i64| {
            let source = g.norm(source);
            g.arrows.push(GammaArrow {
                family,
                index: k as u32,
                source,
                target: k as u32,
            });
        };
        push(Tag::X, k - 1);
        if r != 0 && r != 1 {
            push(Tag::Z, k + 1);
        }
        if r != 1 {
            let i = (-k).rem_euclid(mi);
            push(Tag::Y, k + 2 + 2 * i);
        }
    }
    g.arrows.sort();
    g
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaMatch {
    pub rotation: u32,
    pub reflected: bool,
    /// `map[l - 1]` is the Γ label of presentation label `l`.
    pub map: Vec<u32>,
}

impl GammaMatch {
    pub fn to_gamma(&self, label: u32) -> u32 {
        self.map[label as usize - 1]
    }

    pub fn from_gamma(&self, label: u32) -> u32 {
        self.map.iter().position(|&l| l == label).expect("bijection") as u32 + 1
    }
}

/// Looks for a cyclic relabeling (and, if `reflect`, a reversal) carrying the
/// presentation's generators onto Γ's arrows with matching tags.
pub fn match_gamma(bp: &BoundaryPresentation, g: &GammaQuiver, reflect: bool) -> Result<GammaMatch, BoundaryError> {
    let len = g.len();
    if bp.boundary.len() as u32 != len {
        return Err(BoundaryError::Incompatible(bp.boundary.len(), len as usize));
    }
    let mut want: Vec<(u32, u32, Tag)> = g.arrows.iter().map(|a| (a.source, a.target, a.family)).collect();
    want.sort();
    let mut best = (usize::MAX, 0u32);
    let modes: &[bool] = if reflect { &[false, true] } else { &[false] };
    for &reflected in modes {
        for rotation in 0..len {
            let map: Vec<u32> = (1..=len)
                .map(|l| {
                    if reflected {
                        g.norm(rotation as i64 - l as i64)
                    } else {
                        g.norm((l + rotation) as i64)
                    }
                })
                .collect();
            let mut got: Vec<(u32, u32, Tag)> = bp
                .generators
                .iter()
                .map(|gen| {
                    let (s, t) = (map[gen.source as usize - 1], map[gen.target as usize - 1]);
                    let tag = if reflected { Tag::of_step(s, t, len) } else { gen.tag };
                    (s, t, tag)
                })
                .collect();
            got.sort();
            if got == want {
                return Ok(GammaMatch { rotation, reflected, map });
            }
            let missing = want.iter().filter(|w| got.binary_search(w).is_err()).count();
            if missing < best.0 {
                best = (missing, rotation);
            }
        }
    }
    Err(BoundaryError::NoMatch(format!(
        "{} generators vs {} arrows; best rotation {} leaves {} arrows unmatched",
        bp.generators.len(),
        g.arrows.len(),
        best.1,
        best.0
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInstance {
    pub family: String,
    pub index: u32,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub outcome: Outcome,
    pub steps: usize,
    pub visited: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub budget: SearchBudget,
    pub instances: Vec<RelationInstance>,
}

impl RelationReport {
    pub fn all_equal(&self) -> bool {
        self.instances.iter().all(|i| i.outcome == Outcome::Equal)
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.instances.iter().filter(|i| i.outcome == outcome).count()
    }
}

type Word = Vec<(Tag, i64)>;

/// Every instance of the relation families of Γ(m, n), indices taken cyclically.
pub fn relation_words(m: u32, n: u32) -> Vec<(&'static str, u32, Word, Word)> {
    let (mi, len) = (m as i64, (m * n) as i64);
    let mut out = Vec::new();
    for k in 1..=len {
        let r = k % mi;
        let i = (-k).rem_euclid(mi);
        let ku = k as u32;
        if m >= 3 && r != 0 && r != 1 {
            out.push(("xy=yz", ku, vec![(Tag::X, k + 2 + 2 * i), (Tag::Y, k)], vec![(Tag::Y, k + 1), (Tag::Z, k)]));
        }
        if m >= 4 && r != 0 && r != 1 && r != 2 {
            out.push(("xz=zx", ku, vec![(Tag::X, k + 1), (Tag::Z, k)], vec![(Tag::Z, k - 1), (Tag::X, k)]));
        }
        if m >= 3 && r == 2 {
            out.push((
                "xz=yxx",
                ku,
                vec![(Tag::X, k + 1), (Tag::Z, k)],
                vec![(Tag::Y, k - 2), (Tag::X, k - 1), (Tag::X, k)],
            ));
        }
        if r == 0 {
            let rhs = if m >= 3 {
                vec![(Tag::Z, k - 1), (Tag::X, k)]
            } else {
                vec![(Tag::Y, k - 2), (Tag::X, k - 1), (Tag::X, k)]
            };
            let family = if m >= 3 { "xxy=zx" } else { "xxy=yxx" };
            out.push((family, ku, vec![(Tag::X, k + 1), (Tag::X, k + 2), (Tag::Y, k)], rhs));
        }
        if r != 1 {
            let xs = (2 * mi + 1..=len).map(|j| (Tag::X, k + j)).collect();
            out.push(("yy=x", ku, vec![(Tag::Y, k + 2 + 2 * i), (Tag::Y, k)], xs));
        }
    }
    out
}

fn word_name(g: &GammaQuiver, w: &Word) -> Vec<String> {
    w.iter()
        .map(|&(t, k)| {
            let c = match t {
                Tag::X => 'x',
                Tag::Y => 'y',
                Tag::Z => 'z',
            };
            format!("{}{}", c, g.norm(k))
        })
        .collect()
}

/// Instantiates every relation family and decides each instance with the
/// rewrite engine, using the generator representatives named through `matching`.
pub fn verify_theorem_relations(
    bp: &BoundaryPresentation,
    matching: &GammaMatch,
    sys: &RewriteSystem,
    budget: SearchBudget,
) -> Result<RelationReport, BoundaryError> {
    let g = build_gamma(bp.m, bp.n);
    let path_of = |w: &Word| -> Result<Path, BoundaryError> {
        let mut out: Option<Path> = None;
        for &(tag, k) in w {
            let a = g.get(tag, k).ok_or_else(|| BoundaryError::FormulaMismatch {
                name: word_name(&g, w).join(""),
                detail: format!("no arrow {:?}{}", tag, g.norm(k)),
            })?;
            let (s, t) = (matching.from_gamma(a.source), matching.from_gamma(a.target));
            let gen = bp.generator(s, t).ok_or_else(|| BoundaryError::NoMatch(format!("no generator {}->{}", s, t)))?;
            out = Some(match out {
                None => gen.representative.clone(),
                Some(p) => p.then(&gen.representative).expect("Γ words compose"),
            });
        }
        Ok(out.expect("nonempty word"))
    };
    let mut instances = Vec::new();
    for (family, index, lhs, rhs) in relation_words(bp.m, bp.n) {
        let (p, r) = (path_of(&lhs)?, path_of(&rhs)?);
        let v = sys.paths_equal(&p, &r, budget).expect("relation sides share endpoints");
        instances.push(RelationInstance {
            family: family.to_string(),
            index,
            lhs: word_name(&g, &lhs),
            rhs: word_name(&g, &rhs),
            outcome: v.outcome,
            steps: v.steps().len(),
            visited: v.visited,
        });
    }
    Ok(RelationReport { budget, instances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::tests::fan_model;

    #[test]
    fn arrow_totals() {
        for m in 2..=6 {
            for n in 3..=9 {
                let g = build_gamma(m, n);
                assert_eq!(g.arrows.len() as u32, 3 * n * (m - 1));
                let mut pairs: Vec<(u32, u32)> = g.arrows.iter().map(|a| (a.source, a.target)).collect();
                pairs.sort();
                pairs.dedup();
                assert_eq!(pairs.len(), g.arrows.len(), "Γ({},{}) is simple", m, n);
            }
        }
    }

    #[test]
    fn gamma_2_5() {
        let g = build_gamma(2, 5);
        let ys: Vec<(u32, u32)> = g.arrows.iter().filter(|a| a.family == Tag::Y).map(|a| (a.source, a.target)).collect();
        assert_eq!(ys, vec![(4, 2), (6, 4), (8, 6), (10, 8), (2, 10)]);
        assert!(g.arrows.iter().all(|a| a.family != Tag::Z));
        for k in 1..=10 {
            let x = g.get(Tag::X, k).unwrap();
            assert_eq!((x.source, x.target), (g.norm(k - 1), k as u32));
        }
    }

    #[test]
    fn gamma_even_steps_match_the_m2_family() {
        // The step-back-by-two arrows 2k+2 -> 2k are exactly the y family.
        for n in 3..=8u32 {
            let g = build_gamma(2, n);
            for k in 1..=n as i64 {
                let y = g.get(Tag::Y, 2 * k).unwrap();
                assert_eq!((y.source, y.target), (g.norm(2 * k + 2), g.norm(2 * k)));
            }
        }
    }

    #[test]
    fn gamma_5_4_sources() {
        let g = build_gamma(5, 4);
        let y2 = g.get(Tag::Y, 2).unwrap();
        assert_eq!(y2.source, 10);
        let y5 = g.get(Tag::Y, 5).unwrap();
        assert_eq!(y5.source, 7);
        assert!(g.get(Tag::Y, 6).is_none());
        assert!(g.get(Tag::Z, 6).is_none() && g.get(Tag::Z, 5).is_none());
        assert_eq!(g.get(Tag::Z, 4).unwrap().source, 5);
    }

    #[test]
    fn relation_words_compose_in_gamma() {
        for m in 2..=5 {
            for n in 3..=6 {
                let g = build_gamma(m, n);
                for (_, _, lhs, rhs) in relation_words(m, n) {
                    let ends = |w: &Word| {
                        let arrows: Vec<&GammaArrow> = w.iter().map(|&(t, k)| g.get(t, k).unwrap()).collect();
                        for pair in arrows.windows(2) {
                            assert_eq!(pair[0].target, pair[1].source);
                        }
                        (arrows[0].source, arrows.last().unwrap().target)
                    };
                    assert_eq!(ends(&lhs), ends(&rhs));
                }
                let yy = relation_words(m, n).into_iter().filter(|r| r.0 == "yy=x").count() as u32;
                assert_eq!(yy, n * (m - 1));
            }
        }
    }

    #[test]
    fn size_mismatch_is_incompatible() {
        let bp = fan_model(5, 2).presentation(SearchBudget::default()).unwrap();
        assert_eq!(match_gamma(&bp, &build_gamma(2, 6), false), Err(BoundaryError::Incompatible(10, 12)));
    }

    #[test]
    fn fan_matches_and_rotations_still_match() {
        for (n, m) in [(3, 2), (5, 2), (4, 3), (3, 4)] {
            let bp = fan_model(n, m).presentation(SearchBudget::default()).unwrap();
            let g = build_gamma(m, n);
            let base = match_gamma(&bp, &g, false).unwrap();
            assert_eq!(base.rotation, 0);
            for shift in [1, m, 2 * m + 1] {
                let rotated = bp.rotated(shift);
                let found = match_gamma(&rotated, &g, false).unwrap();
                // Γ is symmetric under rotation by m.
                assert_eq!((found.rotation + shift) % m, 0);
            }
        }
    }

    #[test]
    fn m2_relations_hold_on_fans() {
        for n in 3..=6 {
            let model = fan_model(n, 2);
            let bp = model.presentation(SearchBudget::default()).unwrap();
            let mt = match_gamma(&bp, &build_gamma(2, n), false).unwrap();
            let report = verify_theorem_relations(&bp, &mt, &model.system, SearchBudget::default()).unwrap();
            assert!(report.all_equal(), "{:?}", report.instances.iter().filter(|i| i.outcome != Outcome::Equal).collect::<Vec<_>>());
            let yy: Vec<_> = report.instances.iter().filter(|i| i.family == "yy=x").collect();
            assert_eq!(yy.len() as u32, n);
            assert!(yy.iter().all(|i| i.rhs.len() as u32 == 2 * (n - 2)));
        }
    }
}
