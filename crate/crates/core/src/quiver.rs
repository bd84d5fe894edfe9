//! The quiver with faces dual to a reduced GL_m-dimer, its dimer-model axioms,
//! and the path relations coming from the natural potential.
//!
//! Quiver vertices are the complementary regions of the embedded dimer. The
//! region touching the polygon boundary between two consecutive boundary black
//! nodes is a boundary vertex; the bounded regions are internal vertices. Each
//! region surrounds exactly one lattice point of the `m`-subdivided
//! triangulation, which is what internal vertices are labelled by.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dimer::{Color, EdgeKey, GLmDimer, HalfEdge, Location, NodeKey, ValidationReport};
use crate::polygon::Triangle;

pub type VertexId = u32;
pub type ArrowId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("dimer still has {0} internal black nodes of degree 2; reduce it first")]
    MustReduceFirst(usize),
    #[error("internal arrow {0} is not in exactly one positive and one negative face")]
    MalformedQuiver(ArrowId),
    #[error("vertex {0} lies on no face")]
    NoCycle(VertexId),
    #[error("arrows {0} and {1} do not compose")]
    NotComposable(ArrowId, ArrowId),
    #[error("unknown arrow {0}")]
    UnknownArrow(ArrowId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
}

/// A point of the triangular lattice on the triangulated polygon, given as
/// positive integer weights on polygon vertices summing to `m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint(pub Vec<(u32, u32)>);

impl LatticePoint {
    pub fn in_triangle(t: Triangle, weights: [u32; 3]) -> Self {
        let mut coords: Vec<(u32, u32)> = t
            .vertices()
            .into_iter()
            .zip(weights)
            .filter(|&(_, w)| w > 0)
            .collect();
        coords.sort_unstable();
        LatticePoint(coords)
    }

    pub fn weight(&self, vertex: u32) -> u32 {
        self.0.iter().find(|(v, _)| *v == vertex).map(|&(_, w)| w).unwrap_or(0)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, (v, w)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", v, w)?;
        }
        write!(f, ">")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Boundary,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexLabel {
    /// Boundary index in `1..=m*n`, counterclockwise from polygon vertex 1.
    Boundary(u32),
    Internal(LatticePoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub kind: Kind,
    pub label: VertexLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub id: ArrowId,
    pub source: VertexId,
    pub target: VertexId,
    /// Face multiplicity 1 (boundary) or 2 (internal).
    pub kind: Kind,
    pub dual: EdgeKey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub orientation: Orientation,
    /// Arrow cycle; each arrow's target is the next arrow's source.
    pub arrows: Vec<ArrowId>,
    pub dual: NodeKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverWithFaces {
    pub m: u32,
    pub n: u32,
    /// Boundary vertices first (`id = label - 1`), then internal ones sorted by lattice point.
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<Arrow>,
    pub faces: Vec<Face>,
}

/// A composable arrow sequence, read left to right. An empty sequence is the
/// trivial path at `source`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path {
    pub source: VertexId,
    pub target: VertexId,
    pub arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn new(q: &QuiverWithFaces, arrows: Vec<ArrowId>) -> Result<Self, QuiverError> {
        let first = *arrows.first().ok_or(QuiverError::UnknownArrow(u32::MAX))?;
        let arrow = |a: ArrowId| q.arrows.get(a as usize).ok_or(QuiverError::UnknownArrow(a));
        let source = arrow(first)?.source;
        for w in arrows.windows(2) {
            if arrow(w[0])?.target != arrow(w[1])?.source {
                return Err(QuiverError::NotComposable(w[0], w[1]));
            }
        }
        let target = arrow(*arrows.last().unwrap())?.target;
        Ok(Path { source, target, arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `other`; `None` if the endpoints do not match.
    pub fn then(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: self.source,
            target: other.target,
            arrows,
        })
    }

    /// The vertices visited, `len() + 1` of them.
    pub fn vertices(&self, q: &QuiverWithFaces) -> Vec<VertexId> {
        let mut out = vec![self.source];
        out.extend(self.arrows.iter().map(|&a| q.arrows[a as usize].target));
        out
    }
}

/// One cyclic derivative: `lhs` and `rhs` complete `arrow` to its positive and
/// negative face respectively, so both run from `target(arrow)` to `source(arrow)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub arrow: ArrowId,
    pub lhs: Vec<ArrowId>,
    pub rhs: Vec<ArrowId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSet {
    /// Number of arrows of the quiver the relations live in.
    pub arrow_count: usize,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn max_side_len(&self) -> usize {
        self.relations.iter().map(|r| r.lhs.len().max(r.rhs.len())).max().unwrap_or(0)
    }
}

/// Polygonal number of second order, `(k^2 (s - 2) + k (s - 4)) / 2`.
pub fn p2(s: i64, k: i64) -> i64 {
    (k * k * (s - 2) + k * (s - 4)) / 2
}

fn up_lattice_points(key: NodeKey) -> Vec<LatticePoint> {
    match key {
        NodeKey::Up { triangle, corner: c } => [
            [c[0] + 1, c[1], c[2]],
            [c[0], c[1] + 1, c[2]],
            [c[0], c[1], c[2] + 1],
        ]
        .into_iter()
        .map(|w| LatticePoint::in_triangle(triangle, w))
        .collect(),
        _ => Vec::new(),
    }
}

/// Builds the quiver with faces of a reduced dimer.
pub fn dual_quiver(d: &GLmDimer) -> Result<QuiverWithFaces, QuiverError> {
    let pending = d.contractible().len();
    if pending > 0 {
        return Err(QuiverError::MustReduceFirst(pending));
    }
    let mn = d.boundary.len() as u32;
    let trace = d.trace_faces();

    // Boundary regions: split the outer walk at boundary black nodes.
    let boundary_index: BTreeMap<usize, u32> = d.boundary.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
    let walk = &trace.faces[trace.outer];
    let mut region_of: BTreeMap<HalfEdge, u32> = BTreeMap::new();
    if let Some(start) = walk.iter().position(|&h| boundary_index.contains_key(&d.head(h))) {
        let mut current = boundary_index[&d.head(walk[start])];
        for i in 1..=walk.len() {
            let h = walk[(start + i) % walk.len()];
            // Region after boundary[j] has label j + 2 (cyclically in 1..=mn).
            region_of.insert(h, (current + 1) % mn);
            if let Some(&j) = boundary_index.get(&d.head(h)) {
                current = j;
            }
        }
    }

    // Internal faces of the dimer, labelled by their lattice point.
    let mut internal: Vec<(LatticePoint, usize)> = Vec::new();
    for (f, face) in trace.faces.iter().enumerate() {
        if f == trace.outer {
            continue;
        }
        let mut common: Option<Vec<LatticePoint>> = None;
        for h in face {
            let pts = up_lattice_points(d.edges[h.edge].key.white);
            common = Some(match common {
                None => pts,
                Some(c) => c.into_iter().filter(|p| pts.contains(p)).collect(),
            });
        }
        let mut pts = common.unwrap_or_default();
        debug_assert_eq!(pts.len(), 1, "a bounded region surrounds one lattice point");
        internal.push((pts.swap_remove(0), f));
    }
    internal.sort();
    let mut face_vertex = vec![u32::MAX; trace.faces.len()];
    let mut vertices: Vec<Vertex> = (0..mn)
        .map(|i| Vertex {
            id: i,
            kind: Kind::Boundary,
            label: VertexLabel::Boundary(i + 1),
        })
        .collect();
    for (point, f) in internal {
        let id = vertices.len() as u32;
        face_vertex[f] = id;
        vertices.push(Vertex {
            id,
            kind: Kind::Internal,
            label: VertexLabel::Internal(point),
        });
    }
    let vertex_of = |h: HalfEdge| -> u32 {
        let f = trace.face_of[h.edge][h.reversed as usize];
        if f == trace.outer {
            region_of[&h]
        } else {
            face_vertex[f]
        }
    };

    // One arrow per dimer edge, white node on its left.
    let mut raw: Vec<(u32, u32, EdgeKey, usize)> = d
        .edges
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let w_to_b = HalfEdge { edge: e, reversed: false };
            (vertex_of(w_to_b), vertex_of(w_to_b.twin()), edge.key, e)
        })
        .collect();
    raw.sort();
    let mut arrow_of_edge = vec![0u32; d.edges.len()];
    let arrows: Vec<Arrow> = raw
        .iter()
        .enumerate()
        .map(|(i, &(source, target, dual, e))| {
            arrow_of_edge[e] = i as u32;
            let black = d.edges[e].ends[1];
            Arrow {
                id: i as u32,
                source,
                target,
                kind: if d.nodes[black].location == Location::BoundaryEdgeSegment {
                    Kind::Boundary
                } else {
                    Kind::Internal
                },
                dual,
            }
        })
        .collect();

    let mut faces: Vec<Face> = Vec::new();
    for (v, node) in d.nodes.iter().enumerate() {
        let rot: Vec<ArrowId> = d.rotation[v].iter().map(|&e| arrow_of_edge[e]).collect();
        let (orientation, mut cycle) = match (node.color, node.location) {
            (Color::White, _) => (Orientation::Positive, rot),
            (Color::Black, Location::BoundaryEdgeSegment) => continue,
            (Color::Black, _) => (Orientation::Negative, rot.into_iter().rev().collect()),
        };
        let start = cycle.iter().enumerate().min_by_key(|(_, &a)| a).map(|(i, _)| i).unwrap();
        cycle.rotate_left(start);
        faces.push(Face {
            orientation,
            arrows: cycle,
            dual: node.key,
        });
    }
    faces.sort_by(|a, b| (a.orientation, &a.arrows).cmp(&(b.orientation, &b.arrows)));

    Ok(QuiverWithFaces {
        m: d.m,
        n: d.triangulation.n(),
        vertices,
        arrows,
        faces,
    })
}

impl QuiverWithFaces {
    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a as usize]
    }

    pub fn boundary_vertex_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.kind == Kind::Boundary).count()
    }

    pub fn internal_vertex_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.kind == Kind::Internal).count()
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.vertices[v as usize].kind == Kind::Boundary
    }

    /// Vertex with boundary label `label` (1-based, taken cyclically).
    pub fn boundary_vertex(&self, label: i64) -> VertexId {
        let mn = self.boundary_vertex_count() as i64;
        ((label - 1).rem_euclid(mn)) as VertexId
    }

    pub fn boundary_label(&self, v: VertexId) -> Option<u32> {
        match self.vertices[v as usize].label {
            VertexLabel::Boundary(l) => Some(l),
            VertexLabel::Internal(_) => None,
        }
    }

    pub fn vertex_by_point(&self, p: &LatticePoint) -> Option<VertexId> {
        self.vertices
            .iter()
            .find(|v| matches!(&v.label, VertexLabel::Internal(q) if q == p))
            .map(|v| v.id)
    }

    /// The vertex surrounding a lattice point, boundary or internal.
    pub fn vertex_at(&self, p: &LatticePoint) -> Option<VertexId> {
        let (m, n) = (self.m, self.n);
        let label = match p.0.as_slice() {
            [(v, w)] if *w == m => Some(m * (v - 1) + 1),
            [(1, b), (v, _)] if *v == n => Some(m * (n - 1) + 1 + b),
            [(u, _), (v, b)] if *v == u + 1 => Some(m * (u - 1) + 1 + b),
            _ => None,
        };
        match label {
            Some(l) => Some(self.boundary_vertex(l as i64)),
            None => self.vertex_by_point(p),
        }
    }

    /// Arrows whose endpoints are both boundary vertices.
    pub fn boundary_to_boundary_arrows(&self) -> Vec<ArrowId> {
        self.arrows
            .iter()
            .filter(|a| self.is_boundary(a.source) && self.is_boundary(a.target))
            .map(|a| a.id)
            .collect()
    }

    pub fn arrows_between(&self, source: VertexId, target: VertexId) -> Vec<ArrowId> {
        self.arrows
            .iter()
            .filter(|a| a.source == source && a.target == target)
            .map(|a| a.id)
            .collect()
    }

    pub fn out_arrows(&self, v: VertexId) -> impl Iterator<Item = &Arrow> + '_ {
        self.arrows.iter().filter(move |a| a.source == v)
    }

    /// Number of face-cycle passages through `v`.
    pub fn face_incidences(&self, v: VertexId) -> usize {
        self.faces
            .iter()
            .map(|f| f.arrows.iter().filter(|&&a| self.arrow(a).source == v).count())
            .sum()
    }

    pub fn face_cycle_at(&self, face: &Face, v: VertexId) -> Option<Path> {
        let at = face.arrows.iter().position(|&a| self.arrow(a).source == v)?;
        let mut arrows = face.arrows.clone();
        arrows.rotate_left(at);
        Some(Path {
            source: v,
            target: v,
            arrows,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("quiver serializes")
    }

    /// Graphviz rendering: boundary vertices pinned on a circle, internal
    /// arrows dashed.
    pub fn to_dot(&self) -> String {
        let mn = self.boundary_vertex_count();
        let mut out = String::from("digraph quiver {\n  layout=neato;\n  node [shape=circle, fontsize=10];\n");
        for v in &self.vertices {
            match &v.label {
                VertexLabel::Boundary(l) => {
                    let angle = 2.0 * std::f64::consts::PI * (*l as f64 - 1.0) / mn as f64;
                    let r = 4.0;
                    out.push_str(&format!(
                        "  v{} [label=\"{}\", pos=\"{:.3},{:.3}!\", style=bold];\n",
                        v.id,
                        l,
                        r * angle.cos(),
                        r * angle.sin()
                    ));
                }
                VertexLabel::Internal(p) => {
                    out.push_str(&format!("  v{} [label=\"{}\", shape=point];\n", v.id, p));
                }
            }
        }
        for a in &self.arrows {
            let style = match a.kind {
                Kind::Boundary => "solid",
                Kind::Internal => "dashed",
            };
            out.push_str(&format!("  v{} -> v{} [style={}, label=\"{}\"];\n", a.source, a.target, style, a.id));
        }
        out.push_str("}\n");
        out
    }
}

/// Checks the dimer-model axioms: no loops, face multiplicity 1 or 2,
/// internal arrows in one positive and one negative face, connected incidence
/// graphs (a line at boundary vertices, a cycle at internal ones), and the
/// face counts per vertex.
pub fn validate_dimer_model(q: &QuiverWithFaces) -> ValidationReport {
    let mut report = ValidationReport { checks: Vec::new() };

    let mut bad = Vec::new();
    for f in &q.faces {
        for (i, &a) in f.arrows.iter().enumerate() {
            let b = f.arrows[(i + 1) % f.arrows.len()];
            if q.arrow(a).target != q.arrow(b).source {
                bad.push(format!("face {:?} breaks between arrows {} and {}", f.arrows, a, b));
            }
        }
    }
    report.push("faces-are-cycles", bad);

    let bad = q
        .arrows
        .iter()
        .filter(|a| a.source == a.target)
        .map(|a| format!("arrow {} is a loop", a.id))
        .collect();
    report.push("a-no-loops", bad);

    let mut pos = vec![0usize; q.arrows.len()];
    let mut neg = vec![0usize; q.arrows.len()];
    for f in &q.faces {
        for &a in &f.arrows {
            match f.orientation {
                Orientation::Positive => pos[a as usize] += 1,
                Orientation::Negative => neg[a as usize] += 1,
            }
        }
    }
    let mut bad = Vec::new();
    for a in &q.arrows {
        let mult = pos[a.id as usize] + neg[a.id as usize];
        let expected = match a.kind {
            Kind::Boundary => 1,
            Kind::Internal => 2,
        };
        if mult != expected {
            bad.push(format!("arrow {} has face multiplicity {}", a.id, mult));
        }
    }
    report.push("b-face-multiplicity", bad);

    let bad = q
        .arrows
        .iter()
        .filter(|a| pos[a.id as usize] + neg[a.id as usize] == 2 && (pos[a.id as usize] != 1 || neg[a.id as usize] != 1))
        .map(|a| format!("arrow {} lies in {} positive and {} negative faces", a.id, pos[a.id as usize], neg[a.id as usize]))
        .collect();
    report.push("c-positive-and-negative", bad);

    let mut bad_conn = Vec::new();
    let mut bad_shape = Vec::new();
    let mut bad_count = Vec::new();
    for v in &q.vertices {
        let incident: Vec<ArrowId> = q
            .arrows
            .iter()
            .filter(|a| a.source == v.id || a.target == v.id)
            .map(|a| a.id)
            .collect();
        let slot = |a: ArrowId| incident.iter().position(|&b| b == a).unwrap();
        let mut parent: Vec<usize> = (0..incident.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut links = 0usize;
        for f in &q.faces {
            for (i, &a) in f.arrows.iter().enumerate() {
                let b = f.arrows[(i + 1) % f.arrows.len()];
                if q.arrow(a).target == v.id && q.arrow(b).source == v.id {
                    links += 1;
                    let (x, y) = (find(&mut parent, slot(a)), find(&mut parent, slot(b)));
                    parent[x] = y;
                }
            }
        }
        let components = (0..incident.len()).filter(|&i| find(&mut parent, i) == i).count();
        if components != 1 {
            bad_conn.push(format!("vertex {} has {} incidence components", v.id, components));
        }
        // A line has one link fewer than nodes, a cycle as many as nodes.
        let want_links = match v.kind {
            Kind::Boundary => incident.len().saturating_sub(1),
            Kind::Internal => incident.len(),
        };
        if links != want_links {
            bad_shape.push(format!("vertex {} ({:?}) has {} arrows and {} links", v.id, v.kind, incident.len(), links));
        }
        let count = q.face_incidences(v.id);
        let allowed: &[usize] = match v.kind {
            Kind::Boundary => &[1, 3],
            Kind::Internal => &[4, 6],
        };
        if !allowed.contains(&count) {
            bad_count.push(format!("vertex {} ({:?}) lies on {} faces", v.id, v.kind, count));
        }
    }
    report.push("d-incidence-connected", bad_conn);
    report.push("d-incidence-shape", bad_shape);
    report.push("faces-per-vertex", bad_count);
    report
}

/// One relation per internal arrow: the rest of its positive face equals the
/// rest of its negative face.
pub fn potential_relations(q: &QuiverWithFaces) -> Result<RelationSet, QuiverError> {
    let mut pos: Vec<Option<&Face>> = vec![None; q.arrows.len()];
    let mut neg: Vec<Option<&Face>> = vec![None; q.arrows.len()];
    for f in &q.faces {
        for &a in &f.arrows {
            let slot = match f.orientation {
                Orientation::Positive => &mut pos[a as usize],
                Orientation::Negative => &mut neg[a as usize],
            };
            if slot.is_some() {
                return Err(QuiverError::MalformedQuiver(a));
            }
            *slot = Some(f);
        }
    }
    let rest = |f: &Face, a: ArrowId| -> Vec<ArrowId> {
        let at = f.arrows.iter().position(|&b| b == a).unwrap();
        (1..f.arrows.len()).map(|i| f.arrows[(at + i) % f.arrows.len()]).collect()
    };
    let mut relations = Vec::new();
    for arrow in &q.arrows {
        if arrow.kind != Kind::Internal {
            continue;
        }
        match (pos[arrow.id as usize], neg[arrow.id as usize]) {
            (Some(p), Some(n)) => relations.push(Relation {
                arrow: arrow.id,
                lhs: rest(p, arrow.id),
                rhs: rest(n, arrow.id),
            }),
            _ => return Err(QuiverError::MalformedQuiver(arrow.id)),
        }
    }
    Ok(RelationSet {
        arrow_count: q.arrows.len(),
        relations,
    })
}

/// Every face cycle through `v`, rotated to start at `v`.
pub fn chordless_cycles_at(q: &QuiverWithFaces, v: VertexId) -> Vec<Path> {
    let mut out: Vec<Path> = Vec::new();
    for f in &q.faces {
        for (i, &a) in f.arrows.iter().enumerate() {
            if q.arrow(a).source == v {
                let mut arrows = f.arrows.clone();
                arrows.rotate_left(i);
                out.push(Path { source: v, target: v, arrows });
            }
        }
    }
    out
}

/// The shortest face cycle through `v` (lowest face index on ties).
pub fn chordless_cycle_at(q: &QuiverWithFaces, v: VertexId) -> Result<Path, QuiverError> {
    if v as usize >= q.vertices.len() {
        return Err(QuiverError::UnknownVertex(v));
    }
    chordless_cycles_at(q, v)
        .into_iter()
        .min_by_key(|p| p.len())
        .ok_or(QuiverError::NoCycle(v))
}
