//! Combinatorial model of convex drawings.
//!
//! A convex drawing is fully described by the cyclic order of its vertices,
//! so vertices are identified with their positions `0..n` (counterclockwise)
//! and no coordinates are stored anywhere. Two edges cross exactly when their
//! endpoint pairs are intertwined in that order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::IntersectionGraph;

/// A vertex, identified with its position on the circle.
pub type Vertex = u32;

/// An unordered vertex pair stored as `(lo, hi)` with `lo < hi`.
///
/// Used both for graph edges and for triangulation links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[Vertex; 2]", try_from = "[Vertex; 2]")]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    /// Builds a normalized pair. Panics on a loop; use [`Edge::try_new`] for
    /// untrusted input.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        Self::try_new(a, b).expect("edge endpoints must differ")
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Result<Self> {
        if a == b {
            return Err(Error::invalid(format!("self-loop at vertex {a}")));
        }
        Ok(Edge { lo: a.min(b), hi: a.max(b) })
    }

    #[inline]
    pub fn lo(&self) -> Vertex {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> Vertex {
        self.hi
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`.
    #[inline]
    pub fn other(&self, v: Vertex) -> Vertex {
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }

    /// True when the two pairs span four distinct vertices and are
    /// intertwined, i.e. when the straight-line edges cross.
    #[inline]
    pub fn crosses(&self, other: &Edge) -> bool {
        (self.lo < other.lo && other.lo < self.hi && self.hi < other.hi)
            || (other.lo < self.lo && self.lo < other.hi && other.hi < self.hi)
    }

    /// True when `v` lies strictly between the endpoints in linear order.
    #[inline]
    pub fn spans(&self, v: Vertex) -> bool {
        self.lo < v && v < self.hi
    }
}

impl From<Edge> for [Vertex; 2] {
    fn from(e: Edge) -> Self {
        [e.lo, e.hi]
    }
}

impl TryFrom<[Vertex; 2]> for Edge {
    type Error = Error;

    fn try_from(p: [Vertex; 2]) -> Result<Self> {
        Edge::try_new(p[0], p[1])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// Whether a link is a side of the n-gon or a chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    Outer,
    Inner,
}

/// A side or chord of the n-gon spanned by the drawing's vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub pair: Edge,
    pub kind: LinkKind,
}

impl Link {
    pub fn new(a: Vertex, b: Vertex, n: usize) -> Result<Self> {
        if a as usize >= n || b as usize >= n {
            return Err(Error::invalid(format!("link {{{a},{b}}} out of range for n={n}")));
        }
        let pair = Edge::try_new(a, b)?;
        Ok(Link { pair, kind: link_kind(pair, n) })
    }

    pub fn a(&self) -> Vertex {
        self.pair.lo()
    }

    pub fn b(&self) -> Vertex {
        self.pair.hi()
    }

    pub fn is_outer(&self) -> bool {
        self.kind == LinkKind::Outer
    }
}

pub(crate) fn link_kind(pair: Edge, n: usize) -> LinkKind {
    let (a, b) = (pair.lo() as usize, pair.hi() as usize);
    if b == a + 1 || (a == 0 && b + 1 == n) {
        LinkKind::Outer
    } else {
        LinkKind::Inner
    }
}

/// True when `x` lies on the open counterclockwise arc from `from` to `to`.
#[inline]
pub fn in_open_arc(from: Vertex, to: Vertex, x: Vertex, n: usize) -> bool {
    let n = n as u64;
    let d_x = (x as u64 + n - from as u64) % n;
    let d_to = (to as u64 + n - from as u64) % n;
    d_x > 0 && d_x < d_to
}

/// Crossing predicate on four cyclic positions: true iff exactly one of `c`,
/// `d` lies on the open counterclockwise arc from `a` to `b`.
pub fn intertwined(a: Vertex, b: Vertex, c: Vertex, d: Vertex, n: usize) -> Result<bool> {
    let vs = [a, b, c, d];
    if let Some(v) = vs.iter().find(|&&v| v as usize >= n) {
        return Err(Error::invalid(format!("vertex {v} out of range for n={n}")));
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if vs[i] == vs[j] {
                return Err(Error::invalid(format!(
                    "intertwined needs four distinct vertices, got {a},{b},{c},{d}"
                )));
            }
        }
    }
    Ok(in_open_arc(a, b, c, n) != in_open_arc(a, b, d, n))
}

/// A convex drawing: `n` cyclic positions and a simple edge set.
///
/// Edges are kept sorted, which makes the edge index (position in
/// [`ConvexDrawing::edges`]) a stable identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DrawingJson", into = "DrawingJson")]
pub struct ConvexDrawing {
    n: usize,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DrawingJson {
    n: usize,
    edges: Vec<[i64; 2]>,
}

impl TryFrom<DrawingJson> for ConvexDrawing {
    type Error = Error;

    fn try_from(raw: DrawingJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(raw.edges.len());
        for [a, b] in raw.edges {
            if a < 0 || b < 0 || a as u64 >= raw.n as u64 || b as u64 >= raw.n as u64 {
                return Err(Error::invalid(format!(
                    "edge [{a},{b}] has an endpoint outside [0, {})",
                    raw.n
                )));
            }
            edges.push((a as Vertex, b as Vertex));
        }
        ConvexDrawing::new(raw.n, edges)
    }
}

impl From<ConvexDrawing> for DrawingJson {
    fn from(d: ConvexDrawing) -> Self {
        DrawingJson {
            n: d.n,
            edges: d.edges.iter().map(|e| [e.lo() as i64, e.hi() as i64]).collect(),
        }
    }
}

impl ConvexDrawing {
    /// Validates and normalizes an edge list. Loops, duplicates (in either
    /// orientation) and out-of-range endpoints are rejected.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        if n > Vertex::MAX as usize {
            return Err(Error::invalid(format!("n={n} exceeds the supported vertex range")));
        }
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a as usize >= n || b as usize >= n {
                return Err(Error::invalid(format!(
                    "edge {{{a},{b}}} has an endpoint outside [0, {n})"
                )));
            }
            edges.push(Edge::try_new(a, b)?);
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge {}", w[0])));
        }
        Ok(ConvexDrawing { n, edges })
    }

    /// The outer cycle `C_n` alone (n ≥ 3).
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("a cycle needs n >= 3, got {n}")));
        }
        Self::new(n, (0..n as Vertex).map(|i| (i, ((i as usize + 1) % n) as Vertex)))
    }

    /// The complete graph on `n` positions.
    pub fn complete(n: usize) -> Self {
        let mut pairs = Vec::new();
        for a in 0..n as Vertex {
            for b in (a + 1)..n as Vertex {
                pairs.push((a, b));
            }
        }
        Self::new(n, pairs).expect("complete graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, e: &Edge) -> Option<usize> {
        self.edges.binary_search(e).ok()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && self.edges.binary_search(&Edge::new(a, b)).is_ok()
    }

    /// True when every side `{i, i+1 mod n}` of the polygon is an edge.
    pub fn has_outer_cycle(&self) -> bool {
        self.n >= 3
            && (0..self.n).all(|i| self.has_edge(i as Vertex, ((i + 1) % self.n) as Vertex))
    }

    /// Relabels vertex `v` to `(v + shift) mod n`.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.n;
        Self::new(
            n,
            self.edges.iter().map(|e| {
                (
                    ((e.lo() as usize + shift) % n) as Vertex,
                    ((e.hi() as usize + shift) % n) as Vertex,
                )
            }),
        )
        .expect("rotation preserves simplicity")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("drawing serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Per-edge crossing counts of a fixed drawing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingProfile {
    /// `per_edge[i]` is the crossing count of `drawing.edges()[i]`.
    pub per_edge: Vec<usize>,
    /// Local crossing number of this drawing (0 without edges).
    pub max_count: usize,
    /// Smallest `k` such that every crossing pair has a side crossed at most
    /// `k` times.
    pub min_k_ok_for: usize,
}

impl CrossingProfile {
    pub fn count(&self, d: &ConvexDrawing, e: &Edge) -> Option<usize> {
        d.edge_index(e).map(|i| self.per_edge[i])
    }
}

pub fn crossing_profile(d: &ConvexDrawing) -> CrossingProfile {
    IntersectionGraph::build(d).profile()
}

/// [`crossing_profile`] with an explicit execution strategy.
pub fn crossing_profile_with(d: &ConvexDrawing, exec: crate::par::Exec) -> CrossingProfile {
    IntersectionGraph::build_with(d, exec).profile()
}

/// Edges of `d` that pierce `link`, in canonical piercing order: by the
/// position of the endpoint on the right side (the open arc from `link.a()`
/// to `link.b()`), then by the position of the other endpoint counted
/// counterclockwise from `link.a()`.
pub fn piercing_edges(d: &ConvexDrawing, link: &Link) -> Vec<Edge> {
    let l = link.pair;
    let mut out: Vec<Edge> = d.edges().iter().copied().filter(|e| e.crosses(&l)).collect();
    sort_canonical(&mut out, l.lo(), l.hi(), d.n());
    out
}

/// Sorts edges piercing the link `(u, v)`, `u < v`, into canonical order.
pub(crate) fn sort_canonical(edges: &mut [Edge], u: Vertex, v: Vertex, n: usize) {
    let key = |e: &Edge| {
        let (right, left) = if u < e.lo() && e.lo() < v { (e.lo(), e.hi()) } else { (e.hi(), e.lo()) };
        let ccw = (left as usize + n - u as usize) % n;
        (right, ccw)
    };
    edges.sort_by_key(key);
}

/// Adds every missing side `{i, i+1 mod n}`. Sides never cross anything, so
/// the profile of existing edges is unchanged.
pub fn augment_outer_cycle(d: &ConvexDrawing) -> Result<ConvexDrawing> {
    let n = d.n();
    if n < 3 {
        return Err(Error::invalid(format!("outer cycle needs n >= 3, got {n}")));
    }
    let mut edges = d.edges().to_vec();
    for i in 0..n {
        let e = Edge::new(i as Vertex, ((i + 1) % n) as Vertex);
        if d.edge_index(&e).is_none() {
            edges.push(e);
        }
    }
    edges.sort_unstable();
    Ok(ConvexDrawing { n, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(d: &ConvexDrawing) -> Vec<(Vertex, Vertex)> {
        d.edges().iter().map(|e| (e.lo(), e.hi())).collect()
    }

    #[test]
    fn intertwined_examples() {
        assert!(intertwined(0, 2, 1, 3, 4).unwrap());
        assert!(!intertwined(0, 1, 2, 3, 4).unwrap());
        assert!(matches!(intertwined(0, 2, 2, 4, 5), Err(Error::InvalidInput(_))));
        assert!(intertwined(0, 7, 9, 4, 4).is_err());
    }

    #[test]
    fn intertwined_matches_linear_test() {
        let n = 7;
        for a in 0..n as Vertex {
            for b in 0..n as Vertex {
                for c in 0..n as Vertex {
                    for d in 0..n as Vertex {
                        let distinct = [a, b, c, d].iter().collect::<std::collections::HashSet<_>>().len() == 4;
                        if !distinct {
                            continue;
                        }
                        let t = intertwined(a, b, c, d, n).unwrap();
                        assert_eq!(t, Edge::new(a, b).crosses(&Edge::new(c, d)));
                        assert_eq!(t, intertwined(c, d, a, b, n).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn profile_k5() {
        let d = ConvexDrawing::complete(5);
        let p = crossing_profile(&d);
        for (i, e) in d.edges().iter().enumerate() {
            let outer = link_kind(*e, 5) == LinkKind::Outer;
            assert_eq!(p.per_edge[i], if outer { 0 } else { 2 }, "edge {e}");
        }
        assert_eq!(p.max_count, 2);
        assert_eq!(p.min_k_ok_for, 2);
    }

    #[test]
    fn profile_cycle_and_triple_diagonals() {
        let p = crossing_profile(&ConvexDrawing::cycle(6).unwrap());
        assert!(p.per_edge.iter().all(|&c| c == 0));
        assert_eq!(p.max_count, 0);

        let d = ConvexDrawing::new(6, [(0, 3), (1, 4), (2, 5)]).unwrap();
        let p = crossing_profile(&d);
        assert_eq!(p.per_edge, vec![2, 2, 2]);
        assert_eq!(p.max_count, 2);
    }

    #[test]
    fn empty_drawing_profile() {
        let d = ConvexDrawing::new(4, []).unwrap();
        let p = crossing_profile(&d);
        assert_eq!((p.max_count, p.min_k_ok_for), (0, 0));
    }

    #[test]
    fn piercing_examples() {
        let k4 = ConvexDrawing::complete(4);
        assert_eq!(piercing_edges(&k4, &Link::new(1, 3, 4).unwrap()), vec![Edge::new(0, 2)]);
        assert!(piercing_edges(&k4, &Link::new(0, 3, 4).unwrap()).is_empty());

        let k5 = ConvexDrawing::complete(5);
        assert_eq!(
            piercing_edges(&k5, &Link::new(0, 2, 5).unwrap()),
            vec![Edge::new(1, 3), Edge::new(1, 4)]
        );
        for i in 0..5 {
            let l = Link::new(i, (i + 1) % 5, 5).unwrap();
            assert!(l.is_outer());
            assert!(piercing_edges(&k5, &l).is_empty());
        }
    }

    #[test]
    fn augment_examples() {
        let d = ConvexDrawing::new(4, [(0, 2)]).unwrap();
        let a = augment_outer_cycle(&d).unwrap();
        assert_eq!(pairs(&a), vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]);

        let c5 = ConvexDrawing::cycle(5).unwrap();
        assert_eq!(augment_outer_cycle(&c5).unwrap(), c5);

        let empty = ConvexDrawing::new(5, []).unwrap();
        assert_eq!(crossing_profile(&augment_outer_cycle(&empty).unwrap()).max_count, 0);

        assert!(augment_outer_cycle(&ConvexDrawing::new(2, [(0, 1)]).unwrap()).is_err());
    }

    #[test]
    fn json_contract() {
        let d = ConvexDrawing::new(4, [(2, 0), (1, 0), (3, 2)]).unwrap();
        assert_eq!(d.to_json(), r#"{"n":4,"edges":[[0,1],[0,2],[2,3]]}"#);
        assert_eq!(ConvexDrawing::from_json(&d.to_json()).unwrap(), d);

        assert!(ConvexDrawing::from_json(r#"{"n":4,"edges":[[0,1],[1,0]]}"#).is_err());
        assert!(ConvexDrawing::from_json(r#"{"n":4,"edges":[[2,2]]}"#).is_err());
        assert!(ConvexDrawing::from_json(r#"{"n":4,"edges":[[0,4]]}"#).is_err());
        assert!(ConvexDrawing::from_json(r#"{"n":4,"edges":[[0,-1]]}"#).is_err());
        assert!(ConvexDrawing::from_json(r#"{"n":4}"#).is_err());
    }
}
