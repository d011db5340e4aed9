//! Balanced separations from the centroid face of a triangulation.
//!
//! The centroid face `f = {u, v, w}` splits the remaining vertices into the
//! three arcs beyond its sides. With `V1` the largest arc and `{u, v}` the
//! side facing it, `A = V1 ∪ {u, v} ∪ S` and `B = V \ V1`, where `S` holds the
//! endpoints outside `V1` of the edges piercing `{u, v}`.

use serde::{Deserialize, Serialize};

use crate::decomposition::weak_dual;
use crate::drawing::{ConvexDrawing, Edge, Vertex};
use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    /// Sorted.
    #[serde(rename = "A")]
    pub a: Vec<Vertex>,
    /// Sorted.
    #[serde(rename = "B")]
    pub b: Vec<Vertex>,
    /// `|A ∩ B|`.
    pub order: usize,
    /// `max(|A \ B|, |B \ A|) / n`.
    pub balance: f64,
}

impl Separation {
    /// Sorts and deduplicates both sides and computes order and balance.
    pub fn new(n: usize, mut a: Vec<Vertex>, mut b: Vec<Vertex>) -> Self {
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        let order = a.iter().filter(|v| b.binary_search(v).is_ok()).count();
        let larger = (a.len() - order).max(b.len() - order);
        let balance = if n == 0 { 0.0 } else { larger as f64 / n as f64 };
        Separation { a, b, order, balance }
    }

    /// `A = B = V`.
    pub fn trivial(n: usize) -> Self {
        let all: Vec<Vertex> = (0..n as Vertex).collect();
        Self::new(n, all.clone(), all)
    }

    /// `max(|A \ B|, |B \ A|)`.
    pub fn larger_side(&self) -> usize {
        (self.a.len() - self.order).max(self.b.len() - self.order)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Outcome of [`validate_separation`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// Covers every vertex, stays in range, and no edge joins `A \ B` to
    /// `B \ A`.
    pub valid: bool,
    /// Both `|A \ B|` and `|B \ A|` are at most `2n/3`.
    pub balanced: bool,
    pub order: usize,
    pub balance: f64,
    pub missing_vertices: Vec<Vertex>,
    pub out_of_range: Vec<Vertex>,
    pub crossing_edges: Vec<Edge>,
}

pub fn validate_separation(d: &ConvexDrawing, s: &Separation) -> SeparationReport {
    let n = d.n();
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    let mut out_of_range = Vec::new();
    for (side, mark) in [(&s.a, &mut in_a), (&s.b, &mut in_b)] {
        for &v in side.iter() {
            match mark.get_mut(v as usize) {
                Some(m) => *m = true,
                None => out_of_range.push(v),
            }
        }
    }
    out_of_range.sort_unstable();
    out_of_range.dedup();
    let missing_vertices: Vec<Vertex> = (0..n).filter(|&v| !in_a[v] && !in_b[v]).map(|v| v as Vertex).collect();
    let only_a = |v: Vertex| in_a[v as usize] && !in_b[v as usize];
    let only_b = |v: Vertex| in_b[v as usize] && !in_a[v as usize];
    let crossing_edges: Vec<Edge> = d
        .edges()
        .iter()
        .copied()
        .filter(|e| (only_a(e.lo()) && only_b(e.hi())) || (only_b(e.lo()) && only_a(e.hi())))
        .collect();
    let order = (0..n).filter(|&v| in_a[v] && in_b[v]).count();
    let a_minus = (0..n).filter(|&v| in_a[v] && !in_b[v]).count();
    let b_minus = (0..n).filter(|&v| in_b[v] && !in_a[v]).count();
    let larger = a_minus.max(b_minus);
    SeparationReport {
        valid: missing_vertices.is_empty() && out_of_range.is_empty() && crossing_edges.is_empty(),
        balanced: 3 * larger <= 2 * n,
        order,
        balance: if n == 0 { 0.0 } else { larger as f64 / n as f64 },
        missing_vertices,
        out_of_range,
        crossing_edges,
    }
}

/// Index (into [`Triangulation::faces`]) of the face whose removal leaves
/// dual components of at most `⌊(n-2)/2⌋` faces; the smallest such index.
pub fn centroid_face(t: &Triangulation) -> usize {
    let dual = weak_dual(t);
    let m = dual.len();
    // iterative DFS from face 0 for subtree sizes
    let mut parent = vec![usize::MAX; m];
    let mut order = Vec::with_capacity(m);
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(f) = stack.pop() {
        order.push(f);
        for &(g, _) in dual.neighbours(f) {
            if parent[g] == usize::MAX {
                parent[g] = f;
                stack.push(g);
            }
        }
    }
    let mut size = vec![1usize; m];
    let mut largest = vec![0usize; m];
    for &f in order.iter().rev() {
        if f != 0 {
            let p = parent[f];
            size[p] += size[f];
            largest[p] = largest[p].max(size[f]);
        }
    }
    let half = m / 2;
    (0..m)
        .find(|&f| largest[f].max(m - size[f]) <= half)
        .expect("every tree has a centroid")
}

/// The centroid face as a sorted vertex triple.
pub fn centroid_triangle(t: &Triangulation) -> [Vertex; 3] {
    t.faces()[centroid_face(t)]
}

/// Builds the separation and checks it: order at most the edge piercing
/// number plus 2, and both sides at most `2n/3`.
pub fn build_separation(d: &ConvexDrawing, t: &Triangulation) -> Result<Separation> {
    let n = d.n();
    if n != t.n() {
        return Err(Error::invalid(format!("drawing has n={n} but triangulation has n={}", t.n())));
    }
    let [a, b, c] = centroid_triangle(t);
    // arcs beyond the sides {a,b}, {b,c} and {c,a}, as (link, size)
    let arcs = [
        (Edge::new(a, b), (b - a - 1) as usize),
        (Edge::new(b, c), (c - b - 1) as usize),
        (Edge::new(a, c), n - (c - a) as usize - 1),
    ];
    let &(lambda, _) = arcs
        .iter()
        .min_by_key(|&&(link, size)| (std::cmp::Reverse(size), link))
        .expect("three arcs");
    let in_v1 = |x: Vertex| {
        if lambda == Edge::new(a, c) {
            x > c || x < a
        } else {
            lambda.spans(x)
        }
    };
    let mut side_a: Vec<Vertex> = (0..n as Vertex).filter(|&x| in_v1(x)).collect();
    let mut side_b: Vec<Vertex> = (0..n as Vertex).filter(|&x| !in_v1(x)).collect();
    side_a.extend([lambda.lo(), lambda.hi()]);
    let piercing: Vec<Edge> = d.edges().iter().copied().filter(|e| e.crosses(&lambda)).collect();
    side_a.extend(piercing.iter().map(|e| if in_v1(e.lo()) { e.hi() } else { e.lo() }));
    let sep = Separation::new(n, std::mem::take(&mut side_a), std::mem::take(&mut side_b));

    let c_pn = t.piercing_stats().edge_pn;
    let report = validate_separation(d, &sep);
    if !report.valid || !report.balanced || sep.order > c_pn + 2 {
        return Err(Error::certificate(format!(
            "separation at face {:?} via link {lambda} (pierced by {piercing:?}) fails: order {} (bound {}), report {report:?}",
            [a, b, c],
            sep.order,
            c_pn + 2
        )));
    }
    Ok(sep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{triangulate_o2p, triangulate_strong};

    #[test]
    fn triangle_centroid() {
        let (t, _) = triangulate_strong(&ConvexDrawing::cycle(3).unwrap(), 1).unwrap();
        assert_eq!(centroid_triangle(&t), [0, 1, 2]);
    }

    #[test]
    fn fan_centroid_is_a_middle_face() {
        let faces = (1..5).map(|i| [0, i, i + 1]).collect();
        let pierce = (2..5).map(|i| (Edge::new(0, i), 0)).collect();
        let t = Triangulation::from_faces(6, faces, &pierce).unwrap();
        assert_eq!(centroid_triangle(&t), [0, 2, 3]);
    }

    #[test]
    fn cycle_separation() {
        let d = ConvexDrawing::cycle(6).unwrap();
        let (t, _) = triangulate_strong(&d, 1).unwrap();
        let s = build_separation(&d, &t).unwrap();
        assert_eq!(s.order, 2);
        assert!(s.balance <= 2.0 / 3.0);
    }

    #[test]
    fn k5_separation() {
        let d = ConvexDrawing::complete(5);
        let (t, _) = triangulate_o2p(&d).unwrap();
        let s = build_separation(&d, &t).unwrap();
        assert!(s.order <= 4);
        assert!(validate_separation(&d, &s).valid);
    }

    #[test]
    fn triangle_uses_the_construction() {
        let d = ConvexDrawing::cycle(3).unwrap();
        let (t, _) = triangulate_strong(&d, 0).unwrap();
        let s = build_separation(&d, &t).unwrap();
        assert_eq!(s.order, 2);
    }

    #[test]
    fn validator_cases() {
        let d = ConvexDrawing::complete(5);
        let r = validate_separation(&d, &Separation::trivial(5));
        assert!(r.valid && r.balanced);
        assert_eq!(r.order, 5);
        assert_eq!(r.balance, 0.0);

        let d = ConvexDrawing::cycle(4).unwrap();
        let s = Separation::new(4, vec![0, 1], vec![1, 2, 3]);
        let r = validate_separation(&d, &s);
        assert!(!r.valid);
        assert_eq!(r.crossing_edges, vec![Edge::new(0, 3)]);

        let s = Separation::new(4, vec![0, 1], vec![1, 2]);
        assert_eq!(validate_separation(&d, &s).missing_vertices, vec![3]);
    }

    #[test]
    fn json_keys() {
        let s = Separation::new(4, vec![0, 1, 2], vec![0, 2, 3]);
        let j: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(j["A"], serde_json::json!([0, 1, 2]));
        assert_eq!(j["B"], serde_json::json!([0, 2, 3]));
        assert_eq!(j["order"], 2);
    }
}
