//! The GL_m-dimer of a triangulation: a bipartite graph embedded in the disk.
//!
//! Every triangle of the triangulation is cut into `m^2` small triangles by
//! lines parallel to its sides. Upwards small triangles (homothetic to the big
//! one) carry a white node, downwards ones a black node, and every short
//! segment on a side of a big triangle carries a black node shared by the
//! triangles on both sides of it. The embedding is kept as a rotation system:
//! for each node, the counterclockwise cyclic order of its incident edges.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polygon::{Diagonal, Triangle, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimerError {
    #[error("GL_m-dimers need m >= 2, got {0}")]
    UnsupportedOrder(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

/// Stable identity of a dimer node.
///
/// Barycentric coordinates are weights on the sorted corners of the host
/// triangle. An upwards small triangle is named by its corner with the
/// smallest weights (coordinates sum to `m - 1`), a downwards one likewise
/// (coordinates sum to `m - 2`). A segment is the `index`-th short piece of
/// `side`, counted from its lower-labelled end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeKey {
    Up { triangle: Triangle, corner: [u32; 3] },
    Down { triangle: Triangle, corner: [u32; 3] },
    Segment { side: Diagonal, index: u32 },
}

impl NodeKey {
    pub fn color(&self) -> Color {
        match self {
            NodeKey::Up { .. } => Color::White,
            _ => Color::Black,
        }
    }
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKey::Up { triangle: t, corner: c } | NodeKey::Down { triangle: t, corner: c } => {
                let tag = if matches!(self, NodeKey::Up { .. }) { 'u' } else { 'd' };
                let [a, b, d] = t.vertices();
                write!(f, "{}:{}.{}.{}:{}.{}.{}", tag, a, b, d, c[0], c[1], c[2])
            }
            NodeKey::Segment { side, index } => write!(f, "s:{}.{}:{}", side.low(), side.high(), index),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Location {
    BoundaryEdgeSegment,
    DiagonalSegment,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub key: NodeKey,
    pub color: Color,
    pub location: Location,
    /// Keys of white nodes merged into this one by reduction (excluding `key`).
    pub merged: Vec<NodeKey>,
}

/// Identity of a dimer edge: the original (pre-merge) white end and the black end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeKey {
    pub white: NodeKey,
    pub black: NodeKey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub key: EdgeKey,
    /// `[white, black]` node indices for a well-formed dimer.
    pub ends: [usize; 2],
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

/// A half-edge: edge index plus direction (`false`: `ends[0] -> ends[1]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: usize,
    pub reversed: bool,
}

impl HalfEdge {
    pub fn twin(self) -> Self {
        HalfEdge {
            edge: self.edge,
            reversed: !self.reversed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLmDimer {
    pub m: u32,
    pub triangulation: Triangulation,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Per node, incident edge indices in counterclockwise order.
    pub rotation: Vec<Vec<usize>>,
    /// Black nodes on the polygon boundary in counterclockwise order, starting
    /// with the segment of side (1,2) next to polygon vertex 1.
    pub boundary: Vec<usize>,
    pub reduced: bool,
}

/// Faces of the embedded graph, traced with the face on the right of each half-edge.
#[derive(Debug, Clone)]
pub struct FaceTrace {
    pub faces: Vec<Vec<HalfEdge>>,
    /// `face_of[e][0]` is the face right of `ends[0] -> ends[1]`, `[1]` of the reverse.
    pub face_of: Vec<[usize; 2]>,
    pub outer: usize,
}

// Triangular-lattice positions inside a triangle frame P=(0,0), Q=(1,0), R=(0,1),
// scaled by 6 so that centroids and midpoints are integral.
fn scaled_position(points: &[[u32; 3]]) -> (i64, i64) {
    let k = 6 / points.len() as i64;
    let x: i64 = points.iter().map(|p| p[1] as i64).sum();
    let y: i64 = points.iter().map(|p| p[2] as i64).sum();
    (x * k, y * k)
}

fn up_vertices(c: [u32; 3]) -> [[u32; 3]; 3] {
    [[c[0] + 1, c[1], c[2]], [c[0], c[1] + 1, c[2]], [c[0], c[1], c[2] + 1]]
}

fn down_vertices(c: [u32; 3]) -> [[u32; 3]; 3] {
    [[c[0] + 1, c[1] + 1, c[2]], [c[0] + 1, c[1], c[2] + 1], [c[0], c[1] + 1, c[2] + 1]]
}

// Endpoints of a side segment expressed in the frame of `t`.
fn segment_vertices(t: Triangle, side: Diagonal, index: u32, m: u32) -> [[u32; 3]; 2] {
    let v = t.vertices();
    let slot = |x: u32| v.iter().position(|&y| y == x).expect("side of host triangle");
    let (lo, hi) = (slot(side.low()), slot(side.high()));
    let mut a = [0u32; 3];
    let mut b = [0u32; 3];
    a[lo] = m - index;
    a[hi] = index;
    b[lo] = m - index - 1;
    b[hi] = index + 1;
    [a, b]
}

fn node_position(key: NodeKey, frame: Triangle, m: u32) -> (i64, i64) {
    match key {
        NodeKey::Up { corner, .. } => scaled_position(&up_vertices(corner)),
        NodeKey::Down { corner, .. } => scaled_position(&down_vertices(corner)),
        NodeKey::Segment { side, index } => scaled_position(&segment_vertices(frame, side, index, m)),
    }
}

fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> Ordering {
    let upper = |v: (i64, i64)| v.1 > 0 || (v.1 == 0 && v.0 > 0);
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let cross = a.0 * b.1 - a.1 * b.0;
            0.cmp(&cross)
        }
    }
}

/// Builds the (unreduced) GL_m-dimer of `t`.
pub fn build_dimer(t: &Triangulation, m: u32) -> Result<GLmDimer, DimerError> {
    if m < 2 {
        return Err(DimerError::UnsupportedOrder(m));
    }
    let polygon_edges = t.polygon_edges();
    let mut keys: BTreeMap<NodeKey, ()> = BTreeMap::new();
    let mut edge_keys: Vec<EdgeKey> = Vec::new();
    for tri in t.triangles() {
        let [p, q, r] = tri.vertices();
        let side_qr = Diagonal::new(q, r).unwrap();
        let side_pr = Diagonal::new(p, r).unwrap();
        let side_pq = Diagonal::new(p, q).unwrap();
        for i in 0..m {
            for j in 0..m - i {
                let k = m - 1 - i - j;
                let up = NodeKey::Up { triangle: tri, corner: [i, j, k] };
                keys.insert(up, ());
                let down = |c: [u32; 3]| NodeKey::Down { triangle: tri, corner: c };
                let across = [
                    if i == 0 { NodeKey::Segment { side: side_qr, index: k } } else { down([i - 1, j, k]) },
                    if j == 0 { NodeKey::Segment { side: side_pr, index: k } } else { down([i, j - 1, k]) },
                    if k == 0 { NodeKey::Segment { side: side_pq, index: j } } else { down([i, j, k - 1]) },
                ];
                for black in across {
                    keys.insert(black, ());
                    edge_keys.push(EdgeKey { white: up, black });
                }
            }
        }
    }
    let index: BTreeMap<NodeKey, usize> = keys.keys().enumerate().map(|(i, k)| (*k, i)).collect();
    let nodes: Vec<Node> = keys
        .keys()
        .map(|&key| Node {
            key,
            color: key.color(),
            location: match key {
                NodeKey::Segment { side, .. } if polygon_edges.contains(&side) => Location::BoundaryEdgeSegment,
                NodeKey::Segment { .. } => Location::DiagonalSegment,
                _ => Location::Interior,
            },
            merged: Vec::new(),
        })
        .collect();
    edge_keys.sort();
    let edges: Vec<Edge> = edge_keys
        .iter()
        .map(|&key| Edge {
            key,
            ends: [index[&key.white], index[&key.black]],
        })
        .collect();

    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (e, edge) in edges.iter().enumerate() {
        rotation[edge.ends[0]].push(e);
        rotation[edge.ends[1]].push(e);
    }
    for (v, rot) in rotation.iter_mut().enumerate() {
        let key = nodes[v].key;
        let frame = match key {
            NodeKey::Up { triangle, .. } | NodeKey::Down { triangle, .. } => triangle,
            // Degree <= 2: every cyclic order is the same.
            NodeKey::Segment { .. } => continue,
        };
        let here = node_position(key, frame, m);
        rot.sort_by(|&a, &b| {
            let pa = node_position(nodes[edges[a].other(v)].key, frame, m);
            let pb = node_position(nodes[edges[b].other(v)].key, frame, m);
            angle_cmp((pa.0 - here.0, pa.1 - here.1), (pb.0 - here.0, pb.1 - here.1))
        });
    }

    let n = t.n();
    let mut boundary = Vec::with_capacity((m * n) as usize);
    for p in 1..=n {
        let (side, reversed) = if p < n {
            (Diagonal::new(p, p + 1).unwrap(), false)
        } else {
            (Diagonal::new(1, n).unwrap(), true)
        };
        for s in 0..m {
            let seg = if reversed { m - 1 - s } else { s };
            boundary.push(index[&NodeKey::Segment { side, index: seg }]);
        }
    }

    Ok(GLmDimer {
        m,
        triangulation: t.clone(),
        nodes,
        edges,
        rotation,
        boundary,
        reduced: false,
    })
}

impl GLmDimer {
    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn count_color(&self, c: Color) -> usize {
        self.nodes.iter().filter(|n| n.color == c).count()
    }

    pub fn find(&self, key: NodeKey) -> Option<usize> {
        self.nodes.iter().position(|n| n.key == key || n.merged.contains(&key))
    }

    /// Internal black nodes of degree two, i.e. the nodes reduction removes.
    pub fn contractible(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&v| {
                self.nodes[v].color == Color::Black
                    && self.nodes[v].location != Location::BoundaryEdgeSegment
                    && self.degree(v) == 2
            })
            .collect()
    }

    pub fn tail(&self, h: HalfEdge) -> usize {
        self.edges[h.edge].ends[h.reversed as usize]
    }

    pub fn head(&self, h: HalfEdge) -> usize {
        self.edges[h.edge].ends[!h.reversed as usize]
    }

    fn half_edge_from(&self, v: usize, e: usize) -> HalfEdge {
        HalfEdge {
            edge: e,
            reversed: self.edges[e].ends[0] != v,
        }
    }

    /// Traces all faces; the face to the right of `u -> v` continues with the
    /// edge following `(v, u)` counterclockwise around `v`.
    pub fn trace_faces(&self) -> FaceTrace {
        let mut pos = vec![[usize::MAX; 2]; self.edges.len()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for (i, &e) in rot.iter().enumerate() {
                let side = (self.edges[e].ends[0] != v) as usize;
                pos[e][side] = i;
            }
        }
        let mut face_of = vec![[usize::MAX; 2]; self.edges.len()];
        let mut faces = Vec::new();
        for e in 0..self.edges.len() {
            for side in 0..2 {
                if face_of[e][side] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut walk = Vec::new();
                let mut h = HalfEdge { edge: e, reversed: side == 1 };
                loop {
                    face_of[h.edge][h.reversed as usize] = id;
                    walk.push(h);
                    let v = self.head(h);
                    let at = pos[h.edge][!h.reversed as usize];
                    let rot = &self.rotation[v];
                    let next_edge = rot[(at + 1) % rot.len()];
                    h = self.half_edge_from(v, next_edge);
                    if face_of[h.edge][h.reversed as usize] == id {
                        break;
                    }
                }
                faces.push(walk);
            }
        }
        let outer = self
            .boundary
            .first()
            .map(|&b| face_of[self.rotation[b][0]][(self.edges[self.rotation[b][0]].ends[0] != b) as usize])
            .unwrap_or(0);
        FaceTrace { faces, face_of, outer }
    }

    /// Rooted canonical code of the embedded, colored map.
    ///
    /// Two dimers with equal codes are isomorphic by a color-, rotation- and
    /// boundary-order-preserving bijection. The root is the edge at the first
    /// boundary black node.
    pub fn canonical_code(&self) -> Vec<u64> {
        let mut number = vec![usize::MAX; self.nodes.len()];
        let mut order = Vec::new();
        let mut entry = vec![0usize; self.nodes.len()];
        let boundary_pos: BTreeMap<usize, usize> = self.boundary.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let root = match self.boundary.first() {
            Some(&b) => b,
            None => return Vec::new(),
        };
        number[root] = 0;
        order.push(root);
        let mut code = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let rot = &self.rotation[v];
            code.push(u64::MAX);
            code.push(self.nodes[v].color as u64);
            code.push(boundary_pos.get(&v).map(|&i| i as u64 + 1).unwrap_or(0));
            code.push(rot.len() as u64);
            let start = entry[v];
            for i in 0..rot.len() {
                let e = rot[(start + i) % rot.len()];
                let w = self.edges[e].other(v);
                if number[w] == usize::MAX {
                    number[w] = order.len();
                    order.push(w);
                    entry[w] = self.rotation[w].iter().position(|&f| f == e).unwrap();
                }
                code.push(number[w] as u64);
            }
        }
        code
    }
}

/// Reduces the dimer: every internal degree-2 black node is deleted and its
/// two white neighbours merged, splicing their rotations.
pub fn reduce_dimer(d: &GLmDimer) -> GLmDimer {
    reduce_dimer_with(d, |_| 0)
}

/// Reduction with a caller-chosen contraction order: `pick(k)` selects one of
/// the `k` remaining candidates (result taken modulo `k`).
pub fn reduce_dimer_with(d: &GLmDimer, mut pick: impl FnMut(usize) -> usize) -> GLmDimer {
    let mut nodes: Vec<Option<Node>> = d.nodes.iter().cloned().map(Some).collect();
    let mut edges: Vec<Option<Edge>> = d.edges.iter().copied().map(Some).collect();
    let mut rotation = d.rotation.clone();
    let mut candidates = d.contractible();
    while !candidates.is_empty() {
        let b = candidates.remove(pick(candidates.len()) % candidates.len());
        let (e1, e2) = (rotation[b][0], rotation[b][1]);
        let w1 = edges[e1].unwrap().other(b);
        let w2 = edges[e2].unwrap().other(b);
        debug_assert_ne!(w1, w2, "whites of one triangle never merge");
        let splice = |rot: &[usize], e: usize| -> Vec<usize> {
            let at = rot.iter().position(|&f| f == e).unwrap();
            (1..rot.len()).map(|i| rot[(at + i) % rot.len()]).collect()
        };
        let mut merged = splice(&rotation[w1], e1);
        let tail = splice(&rotation[w2], e2);
        for &f in &tail {
            let edge = edges[f].as_mut().unwrap();
            for end in edge.ends.iter_mut() {
                if *end == w2 {
                    *end = w1;
                }
            }
        }
        merged.extend(tail);
        rotation[w1] = merged;
        rotation[w2].clear();
        rotation[b].clear();
        edges[e1] = None;
        edges[e2] = None;
        let gone = nodes[w2].take().unwrap();
        let keep = nodes[w1].as_mut().unwrap();
        keep.merged.push(gone.key);
        keep.merged.extend(gone.merged);
        keep.merged.sort();
        nodes[b] = None;
    }
    compact(d, nodes, edges, rotation)
}

fn compact(d: &GLmDimer, nodes: Vec<Option<Node>>, edges: Vec<Option<Edge>>, rotation: Vec<Vec<usize>>) -> GLmDimer {
    let mut node_map = vec![usize::MAX; nodes.len()];
    let mut kept_nodes: Vec<(usize, Node)> = nodes.into_iter().enumerate().filter_map(|(i, n)| n.map(|n| (i, n))).collect();
    kept_nodes.sort_by_key(|(_, n)| n.key);
    for (new, (old, _)) in kept_nodes.iter().enumerate() {
        node_map[*old] = new;
    }
    let mut edge_map = vec![usize::MAX; edges.len()];
    let mut kept_edges: Vec<(usize, Edge)> = edges.into_iter().enumerate().filter_map(|(i, e)| e.map(|e| (i, e))).collect();
    kept_edges.sort_by_key(|(_, e)| e.key);
    for (new, (old, _)) in kept_edges.iter().enumerate() {
        edge_map[*old] = new;
    }
    let new_rotation = kept_nodes
        .iter()
        .map(|(old, _)| {
            let rot: Vec<usize> = rotation[*old].iter().map(|&e| edge_map[e]).collect();
            // Canonical starting point: the smallest edge index.
            let start = rot.iter().enumerate().min_by_key(|(_, &e)| e).map(|(i, _)| i).unwrap_or(0);
            (0..rot.len()).map(|i| rot[(start + i) % rot.len()]).collect()
        })
        .collect();
    GLmDimer {
        m: d.m,
        triangulation: d.triangulation.clone(),
        nodes: kept_nodes.into_iter().map(|(_, n)| n).collect(),
        edges: kept_edges
            .into_iter()
            .map(|(_, mut e)| {
                e.ends = [node_map[e.ends[0]], node_map[e.ends[1]]];
                e
            })
            .collect(),
        rotation: new_rotation,
        boundary: d.boundary.iter().map(|&b| node_map[b]).collect(),
        reduced: true,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub offenders: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub(crate) fn push(&mut self, name: &str, offenders: Vec<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: offenders.is_empty(),
            offenders,
        });
    }
}

/// Checks the construction invariants and names offending nodes.
///
/// Diagonals must carry exactly `m` black nodes before reduction and none
/// afterwards; polygon sides always carry `m`.
pub fn validate_dimer(d: &GLmDimer) -> ValidationReport {
    let mut report = ValidationReport { checks: Vec::new() };
    let name = |v: usize| d.nodes[v].key.to_string();

    let bad: Vec<String> = d
        .edges
        .iter()
        .filter(|e| d.nodes[e.ends[0]].color == d.nodes[e.ends[1]].color)
        .map(|e| format!("{}--{}", name(e.ends[0]), name(e.ends[1])))
        .collect();
    report.push("bipartite", bad);

    let mut per_side: BTreeMap<Diagonal, usize> = BTreeMap::new();
    for e in d.triangulation.polygon_edges().into_iter().chain(d.triangulation.diagonals()) {
        per_side.insert(e, 0);
    }
    for node in &d.nodes {
        if let NodeKey::Segment { side, .. } = node.key {
            *per_side.entry(side).or_default() += 1;
        }
    }
    let polygon_edges = d.triangulation.polygon_edges();
    let bad: Vec<String> = per_side
        .iter()
        .filter(|(side, &count)| {
            let want = d.m as usize;
            if polygon_edges.contains(side) {
                count != want
            } else if d.reduced {
                count != 0
            } else {
                count != want
            }
        })
        .map(|(side, count)| format!("side {} carries {} black nodes", side, count))
        .collect();
    report.push("segment-count", bad);

    let mut bad = Vec::new();
    for (e, edge) in d.edges.iter().enumerate() {
        for &v in &edge.ends {
            let hits = d.rotation.get(v).map(|r| r.iter().filter(|&&f| f == e).count()).unwrap_or(0);
            if hits != 1 {
                bad.push(format!("edge {} appears {} times around {}", e, hits, name(v)));
            }
        }
    }
    for (v, rot) in d.rotation.iter().enumerate() {
        for &e in rot {
            if !d.edges.get(e).map(|x| x.ends.contains(&v)).unwrap_or(false) {
                bad.push(format!("{} lists foreign edge {}", name(v), e));
            }
        }
    }
    let rotation_ok = bad.is_empty();
    report.push("rotation-system", bad);

    let mut bad = Vec::new();
    if rotation_ok {
        let trace = d.trace_faces();
        let interior = trace.faces.len() as i64 - 1;
        let euler = d.nodes.len() as i64 - d.edges.len() as i64 + interior;
        if euler != 1 {
            bad.push(format!("nodes - edges + interior faces = {}", euler));
        }
        let outer_blacks: Vec<usize> = trace.faces[trace.outer]
            .iter()
            .map(|&h| d.head(h))
            .filter(|&v| d.nodes[v].location == Location::BoundaryEdgeSegment)
            .collect();
        if !is_rotation_of(&outer_blacks, &d.boundary) {
            bad.push("boundary black nodes are not met in counterclockwise order".to_string());
        }
    } else {
        bad.push("rotation system is inconsistent".to_string());
    }
    report.push("euler-disk", bad);

    let bad: Vec<String> = d
        .boundary
        .iter()
        .filter(|&&b| d.degree(b) != 1 || d.nodes[b].location != Location::BoundaryEdgeSegment)
        .map(|&b| name(b))
        .collect();
    let mut bad = bad;
    if d.boundary.len() != (d.m * d.triangulation.n()) as usize {
        bad.push(format!("{} boundary black nodes", d.boundary.len()));
    }
    report.push("boundary", bad);
    report
}

fn is_rotation_of(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i]))
}

#[derive(Serialize)]
struct DimerNodeRepr {
    id: String,
    color: Color,
    location: Location,
    merged: Vec<String>,
    rotation: Vec<String>,
}

#[derive(Serialize)]
struct DimerRepr {
    m: u32,
    triangulation: Triangulation,
    reduced: bool,
    nodes: Vec<DimerNodeRepr>,
    edges: Vec<[String; 2]>,
    boundary: Vec<String>,
}

impl GLmDimer {
    /// Canonical JSON value (sorted keys, deterministic lists).
    pub fn to_json(&self) -> serde_json::Value {
        let name = |v: usize| self.nodes[v].key.to_string();
        let repr = DimerRepr {
            m: self.m,
            triangulation: self.triangulation.clone(),
            reduced: self.reduced,
            nodes: (0..self.nodes.len())
                .map(|v| DimerNodeRepr {
                    id: name(v),
                    color: self.nodes[v].color,
                    location: self.nodes[v].location,
                    merged: self.nodes[v].merged.iter().map(|k| k.to_string()).collect(),
                    rotation: self.rotation[v].iter().map(|&e| name(self.edges[e].other(v))).collect(),
                })
                .collect(),
            edges: self.edges.iter().map(|e| [name(e.ends[0]), name(e.ends[1])]).collect(),
            boundary: self.boundary.iter().map(|&b| name(b)).collect(),
        };
        serde_json::to_value(repr).expect("dimer serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dimer {\n  node [shape=circle, label=\"\", width=0.15];\n");
        for (v, node) in self.nodes.iter().enumerate() {
            let fill = match node.color {
                Color::White => "white",
                Color::Black => "black",
            };
            out.push_str(&format!("  n{} [style=filled, fillcolor={}, tooltip=\"{}\"];\n", v, fill, node.key));
        }
        for e in &self.edges {
            out.push_str(&format!("  n{} -- n{};\n", e.ends[0], e.ends[1]));
        }
        out.push_str("}\n");
        out
    }
}
