//! Triangulations of a convex polygon and diagonal flips.
//!
//! Polygon vertices are labelled `1..=n` counterclockwise. A diagonal is an
//! unordered pair of non-adjacent vertices, always stored with the smaller
//! label first. All geometry is cyclic: two diagonals cross iff exactly one
//! endpoint of one lies strictly between the endpoints of the other.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    InvalidPolygon(u32),
    #[error("apex {apex} is not a vertex of the {n}-gon")]
    InvalidApex { n: u32, apex: u32 },
    #[error("({0}, {1}) is not a diagonal of the {2}-gon")]
    NotADiagonal(u32, u32, u32),
    #[error("diagonals {0} and {1} cross")]
    Crossing(Diagonal, Diagonal),
    #[error("a triangulation of the {n}-gon has {expected} diagonals, got {got}")]
    WrongDiagonalCount { n: u32, expected: usize, got: usize },
    #[error("diagonal {0} is not part of the triangulation")]
    UnknownDiagonal(Diagonal),
    #[error("cannot connect triangulations of a {0}-gon and a {1}-gon")]
    IncompatiblePolygons(u32, u32),
}

/// An unordered pair of polygon vertices, normalized so that `.0 < .1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", try_from = "[u32; 2]")]
pub struct Diagonal(u32, u32);

impl Diagonal {
    /// Normalizes the pair; equal endpoints are rejected.
    pub fn new(a: u32, b: u32) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Diagonal(a, b)),
            std::cmp::Ordering::Greater => Some(Diagonal(b, a)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn low(self) -> u32 {
        self.0
    }

    pub fn high(self) -> u32 {
        self.1
    }

    pub fn contains(self, v: u32) -> bool {
        self.0 == v || self.1 == v
    }

    /// True for a proper diagonal of the `n`-gon (not a side, both ends in range).
    pub fn is_diagonal_of(self, n: u32) -> bool {
        self.0 >= 1 && self.1 <= n && self.1 - self.0 >= 2 && !(self.0 == 1 && self.1 == n)
    }

    /// Interior crossing test. Diagonals sharing an endpoint never cross.
    pub fn crosses(self, other: Diagonal) -> bool {
        if self.contains(other.0) || self.contains(other.1) {
            return false;
        }
        let between = |v: u32| self.0 < v && v < self.1;
        between(other.0) != between(other.1)
    }
}

impl From<Diagonal> for [u32; 2] {
    fn from(d: Diagonal) -> Self {
        [d.0, d.1]
    }
}

impl TryFrom<[u32; 2]> for Diagonal {
    type Error = String;

    fn try_from(v: [u32; 2]) -> Result<Self, Self::Error> {
        Diagonal::new(v[0], v[1]).ok_or_else(|| format!("degenerate pair {:?}", v))
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl FromStr for Diagonal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| format!("expected `a-b`, got `{}`", s))?;
        let a: u32 = a.trim().parse().map_err(|_| format!("bad vertex `{}`", a))?;
        let b: u32 = b.trim().parse().map_err(|_| format!("bad vertex `{}`", b))?;
        Diagonal::new(a, b).ok_or_else(|| format!("degenerate pair `{}`", s))
    }
}

/// A triangle of a triangulation, vertices sorted ascending (hence counterclockwise).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangle(pub [u32; 3]);

impl Triangle {
    pub fn new(mut v: [u32; 3]) -> Self {
        v.sort_unstable();
        Triangle(v)
    }

    pub fn vertices(&self) -> [u32; 3] {
        self.0
    }

    pub fn has_side(&self, d: Diagonal) -> bool {
        self.0.contains(&d.0) && self.0.contains(&d.1)
    }

    /// The vertex opposite to side `d`, if `d` is a side.
    pub fn apex_opposite(&self, d: Diagonal) -> Option<u32> {
        if !self.has_side(d) {
            return None;
        }
        self.0.iter().copied().find(|&v| !d.contains(v))
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A maximal set of pairwise non-crossing diagonals of the convex `n`-gon.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TriangulationRepr", into = "TriangulationRepr")]
pub struct Triangulation {
    n: u32,
    diagonals: BTreeSet<Diagonal>,
}

#[derive(Serialize, Deserialize)]
struct TriangulationRepr {
    n: u32,
    diagonals: Vec<Diagonal>,
}

impl From<Triangulation> for TriangulationRepr {
    fn from(t: Triangulation) -> Self {
        TriangulationRepr {
            n: t.n,
            diagonals: t.diagonals.into_iter().collect(),
        }
    }
}

impl TryFrom<TriangulationRepr> for Triangulation {
    type Error = PolygonError;

    fn try_from(r: TriangulationRepr) -> Result<Self, Self::Error> {
        Triangulation::new(r.n, r.diagonals)
    }
}

/// A single diagonal flip inside the quadrilateral formed by two adjacent triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlipMove {
    pub removed: Diagonal,
    pub inserted: Diagonal,
    /// Corners of the quadrilateral, ascending (counterclockwise).
    pub quadrilateral: [u32; 4],
}

impl Triangulation {
    /// Validates and builds a triangulation from a diagonal list.
    pub fn new(n: u32, diagonals: impl IntoIterator<Item = Diagonal>) -> Result<Self, PolygonError> {
        if n < 3 {
            return Err(PolygonError::InvalidPolygon(n));
        }
        let diagonals: BTreeSet<Diagonal> = diagonals.into_iter().collect();
        for d in &diagonals {
            if !d.is_diagonal_of(n) {
                return Err(PolygonError::NotADiagonal(d.0, d.1, n));
            }
        }
        for (i, d) in diagonals.iter().enumerate() {
            for e in diagonals.iter().skip(i + 1) {
                if d.crosses(*e) {
                    return Err(PolygonError::Crossing(*d, *e));
                }
            }
        }
        let expected = (n - 3) as usize;
        if diagonals.len() != expected {
            return Err(PolygonError::WrongDiagonalCount {
                n,
                expected,
                got: diagonals.len(),
            });
        }
        Ok(Triangulation { n, diagonals })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn diagonals(&self) -> impl ExactSizeIterator<Item = Diagonal> + '_ {
        self.diagonals.iter().copied()
    }

    pub fn has_diagonal(&self, d: Diagonal) -> bool {
        self.diagonals.contains(&d)
    }

    /// Polygon sides as normalized pairs: `(p, p+1)` and `(1, n)`.
    pub fn polygon_edges(&self) -> Vec<Diagonal> {
        polygon_edges(self.n)
    }

    fn is_side(&self, a: u32, b: u32) -> bool {
        let d = match Diagonal::new(a, b) {
            Some(d) => d,
            None => return false,
        };
        d.1 - d.0 == 1 || (d.0 == 1 && d.1 == self.n) || self.diagonals.contains(&d)
    }

    /// The `n - 2` triangles, sorted.
    pub fn triangles(&self) -> Vec<Triangle> {
        let mut out = Vec::with_capacity(self.n as usize - 2);
        for a in 1..=self.n {
            for b in a + 1..=self.n {
                if !self.is_side(a, b) {
                    continue;
                }
                for c in b + 1..=self.n {
                    if self.is_side(b, c) && self.is_side(a, c) {
                        out.push(Triangle([a, b, c]));
                    }
                }
            }
        }
        out
    }

    /// The (one or two) triangles having `side` as a side.
    pub fn triangles_on(&self, side: Diagonal) -> Vec<Triangle> {
        self.triangles().into_iter().filter(|t| t.has_side(side)).collect()
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}[", self.n)?;
        for (i, d) in self.diagonals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}-{}", d.0, d.1)?;
        }
        write!(f, "]")
    }
}

pub fn polygon_edges(n: u32) -> Vec<Diagonal> {
    let mut edges: Vec<Diagonal> = (1..n).map(|p| Diagonal(p, p + 1)).collect();
    edges.push(Diagonal(1, n));
    edges
}

/// The triangulation whose diagonals all contain `apex`.
pub fn fan_triangulation(n: u32, apex: u32) -> Result<Triangulation, PolygonError> {
    if n < 3 {
        return Err(PolygonError::InvalidPolygon(n));
    }
    if apex < 1 || apex > n {
        return Err(PolygonError::InvalidApex { n, apex });
    }
    let diagonals = (1..=n)
        .filter_map(|v| Diagonal::new(apex, v))
        .filter(|d| d.is_diagonal_of(n));
    Triangulation::new(n, diagonals)
}

/// All triangulations of the `n`-gon, sorted by their diagonal lists.
pub fn enumerate_triangulations(n: u32) -> Result<Vec<Triangulation>, PolygonError> {
    if n < 3 {
        return Err(PolygonError::InvalidPolygon(n));
    }
    let mut memo = HashMap::new();
    let mut all: Vec<Triangulation> = chain_triangulations(1, n, &mut memo)
        .into_iter()
        .map(|diagonals| Triangulation { n, diagonals })
        .collect();
    all.sort_by(|a, b| a.diagonals.iter().cmp(b.diagonals.iter()));
    Ok(all)
}

// Triangulations of the sub-polygon on vertices lo..=hi, split at the
// triangle sitting on the side (lo, hi).
fn chain_triangulations(
    lo: u32,
    hi: u32,
    memo: &mut HashMap<(u32, u32), Vec<BTreeSet<Diagonal>>>,
) -> Vec<BTreeSet<Diagonal>> {
    if hi - lo < 2 {
        return vec![BTreeSet::new()];
    }
    if let Some(done) = memo.get(&(lo, hi)) {
        return done.clone();
    }
    let mut out = Vec::new();
    for k in lo + 1..hi {
        let left = chain_triangulations(lo, k, memo);
        let right = chain_triangulations(k, hi, memo);
        for l in &left {
            for r in &right {
                let mut set: BTreeSet<Diagonal> = l.union(r).copied().collect();
                if k - lo >= 2 {
                    set.insert(Diagonal(lo, k));
                }
                if hi - k >= 2 {
                    set.insert(Diagonal(k, hi));
                }
                out.push(set);
            }
        }
    }
    memo.insert((lo, hi), out.clone());
    out
}

/// Replaces `d` by the other diagonal of the quadrilateral around it.
pub fn flip(t: &Triangulation, d: Diagonal) -> Result<(Triangulation, FlipMove), PolygonError> {
    if !t.diagonals.contains(&d) {
        return Err(PolygonError::UnknownDiagonal(d));
    }
    let around = t.triangles_on(d);
    debug_assert_eq!(around.len(), 2, "an interior diagonal borders two triangles");
    let c = around[0].apex_opposite(d).expect("side of its own triangle");
    let e = around[1].apex_opposite(d).expect("side of its own triangle");
    let inserted = Diagonal::new(c, e).expect("distinct apexes");
    let mut quadrilateral = [d.0, d.1, c, e];
    quadrilateral.sort_unstable();
    let mut diagonals = t.diagonals.clone();
    diagonals.remove(&d);
    diagonals.insert(inserted);
    let flipped = Triangulation { n: t.n, diagonals };
    Ok((
        flipped,
        FlipMove {
            removed: d,
            inserted,
            quadrilateral,
        },
    ))
}

/// Applies a move sequence, failing on the first diagonal that is not present.
pub fn apply_moves(t: &Triangulation, moves: &[FlipMove]) -> Result<Triangulation, PolygonError> {
    let mut cur = t.clone();
    for mv in moves {
        cur = flip(&cur, mv.removed)?.0;
    }
    Ok(cur)
}

/// A shortest flip sequence from `from` to `to`, found by breadth-first search
/// over the flip graph.
pub fn flip_sequence(from: &Triangulation, to: &Triangulation) -> Result<Vec<FlipMove>, PolygonError> {
    if from.n != to.n {
        return Err(PolygonError::IncompatiblePolygons(from.n, to.n));
    }
    if from == to {
        return Ok(Vec::new());
    }
    let mut parent: HashMap<Triangulation, (Triangulation, FlipMove)> = HashMap::new();
    let mut queue = VecDeque::from([from.clone()]);
    let mut seen: BTreeSet<Triangulation> = BTreeSet::from([from.clone()]);
    while let Some(cur) = queue.pop_front() {
        for d in cur.diagonals() {
            let (next, mv) = flip(&cur, d)?;
            if !seen.insert(next.clone()) {
                continue;
            }
            parent.insert(next.clone(), (cur.clone(), mv));
            if &next == to {
                let mut moves = Vec::new();
                let mut at = next;
                while let Some((prev, mv)) = parent.remove(&at) {
                    moves.push(mv);
                    at = prev;
                }
                moves.reverse();
                return Ok(moves);
            }
            queue.push_back(next);
        }
    }
    unreachable!("the flip graph of a convex polygon is connected")
}
