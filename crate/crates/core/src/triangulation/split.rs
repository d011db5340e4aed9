//! The recursive splitting procedure.
//!
//! The active link starts as `{0, n-1}` with every other vertex on its right
//! side. Each step picks a split vertex `w` on the right side of the active
//! link `{u, v}`, emits the face `u w v` and recurses on `{u, w}` and
//! `{w, v}`. Since recursion always stays inside `[0, n-1]`, the right side of
//! an active link `(u, v)` is the open interval `(u, v)` and the left side is
//! everything outside `[u, v]`.
//!
//! Geometric choices ("the first crossing on `e_j` right of the active link")
//! are resolved combinatorially against the realization in which all
//! crossings among the piercing edges lie left of the active link:
//!
//! * piercing edges are ordered by right endpoint, and edges sharing a right
//!   endpoint by the order in which they cross the active link;
//! * the first right-side crossing of a chord heading to `t` is with an
//!   outermost crosser, i.e. one whose span around `t` is not strictly
//!   contained in another crosser's span;
//! * crossings on `ê` are assigned to the side of `x` that the realization
//!   forces (see `hat_side_counts`).
//!
//! Every split re-checks the piercing bounds of the chosen method and fails
//! with [`Error::Certificate`] instead of returning a weaker triangulation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{CaseTag, SplitRecord, SplitTrace, Triangulation};
use crate::drawing::{augment_outer_cycle, in_open_arc, ConvexDrawing, Edge, Vertex};
use crate::error::{Error, Result};
use crate::index::{EdgeId, IntersectionGraph};

/// Triangulation procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Edge piercing number at most `2k-1`.
    Weak,
    /// Edge piercing number at most `k`; triangle piercing number at most
    /// `3k-1` for odd `k`.
    Strong,
    /// Outer 2-planar drawings: edge piercing at most 2, triangle piercing at
    /// most 4.
    #[serde(rename = "o2p")]
    OuterTwoPlanar,
    /// Outer min-k-planar drawings: edge piercing at most `2k-1`, triangle
    /// piercing at most `6k-3`.
    Min,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Weak => "weak",
            Method::Strong => "strong",
            Method::OuterTwoPlanar => "o2p",
            Method::Min => "min",
        }
    }

    /// `(edge bound, triangle bound)` guaranteed for parameter `k`.
    pub fn bounds(&self, k: usize) -> (usize, usize) {
        let two_k_minus_one = (2 * k).saturating_sub(1);
        match self {
            Method::Weak => (two_k_minus_one, 3 * two_k_minus_one),
            Method::Strong if k % 2 == 1 => (k, 3 * k - 1),
            Method::Strong => (k, 3 * k),
            Method::OuterTwoPlanar => (2, 4),
            Method::Min => (two_k_minus_one, (6 * k).saturating_sub(3)),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Method::Weak),
            "strong" => Ok(Method::Strong),
            "o2p" => Ok(Method::OuterTwoPlanar),
            "min" => Ok(Method::Min),
            other => Err(Error::invalid(format!("unknown method '{other}'"))),
        }
    }
}

pub fn triangulate_weak(d: &ConvexDrawing, k: usize) -> Result<(Triangulation, SplitTrace)> {
    triangulate(d, Method::Weak, k)
}

pub fn triangulate_strong(d: &ConvexDrawing, k: usize) -> Result<(Triangulation, SplitTrace)> {
    triangulate(d, Method::Strong, k)
}

pub fn triangulate_o2p(d: &ConvexDrawing) -> Result<(Triangulation, SplitTrace)> {
    triangulate(d, Method::OuterTwoPlanar, 2)
}

pub fn triangulate_min(d: &ConvexDrawing, k: usize) -> Result<(Triangulation, SplitTrace)> {
    triangulate(d, Method::Min, k)
}

/// Runs `method` with parameter `k` (ignored for `OuterTwoPlanar`, which
/// always uses 2). The outer cycle is added when missing.
pub fn triangulate(d: &ConvexDrawing, method: Method, k: usize) -> Result<(Triangulation, SplitTrace)> {
    let n = d.n();
    if n < 3 {
        return Err(Error::invalid(format!("triangulation needs n >= 3, got {n}")));
    }
    let k = if method == Method::OuterTwoPlanar { 2 } else { k };
    let augmented;
    let d = if d.has_outer_cycle() {
        d
    } else {
        augmented = augment_outer_cycle(d)?;
        &augmented
    };
    let graph = IntersectionGraph::build(d);
    check_precondition(d, &graph, method, k)?;
    let (edge_bound, triangle_bound) = method.bounds(k);
    Splitter { d, graph: &graph, method, k, edge_bound, triangle_bound }.run()
}

fn check_precondition(d: &ConvexDrawing, g: &IntersectionGraph, method: Method, k: usize) -> Result<()> {
    if method == Method::Min {
        for (i, list) in g.crossers.iter().enumerate() {
            for &j in list {
                let (ci, cj) = (list.len(), g.count(j));
                if ci > k && cj > k {
                    let (e, f) = (d.edges()[i], d.edges()[j as usize]);
                    return Err(Error::BoundViolation {
                        message: format!(
                            "not outer min-{k}-planar: {e} ({ci} crossings) crosses {f} ({cj} crossings)"
                        ),
                        edges: vec![e, f],
                    });
                }
            }
        }
        return Ok(());
    }
    if let Some((i, list)) = g.crossers.iter().enumerate().find(|(_, l)| l.len() > k) {
        let e = d.edges()[i];
        return Err(Error::BoundViolation {
            message: format!("not outer {k}-planar: edge {e} has {} crossings", list.len()),
            edges: vec![e],
        });
    }
    Ok(())
}

struct Active {
    u: Vertex,
    v: Vertex,
    /// Canonically ordered piercing edges.
    piercing: Vec<EdgeId>,
}

struct Splitter<'a> {
    d: &'a ConvexDrawing,
    graph: &'a IntersectionGraph,
    method: Method,
    k: usize,
    edge_bound: usize,
    triangle_bound: usize,
}

impl Splitter<'_> {
    fn edge(&self, id: EdgeId) -> Edge {
        self.d.edges()[id as usize]
    }

    fn is_heavy(&self, id: EdgeId) -> bool {
        self.graph.count(id) > self.k
    }

    /// Piercing edges of `(u, v)` in the order they cross it from `u` to `v`:
    /// by right endpoint, and edges sharing a right endpoint by how close
    /// their left endpoint is to `u` going clockwise.
    fn piercing(&self, u: Vertex, v: Vertex) -> Vec<EdgeId> {
        let n = self.d.n();
        let mut ids = self.graph.index.crossers(u, v);
        ids.sort_by_key(|&id| {
            let e = self.edge(id);
            let (right, left) = if u < e.lo() && e.lo() < v { (e.lo(), e.hi()) } else { (e.hi(), e.lo()) };
            (right, (u as usize + n - left as usize) % n)
        });
        ids
    }

    fn run(self) -> Result<(Triangulation, SplitTrace)> {
        let n = self.d.n() as Vertex;
        let mut stack = vec![Active { u: 0, v: n - 1, piercing: self.piercing(0, n - 1) }];
        let mut faces = Vec::with_capacity(n as usize - 2);
        let mut inner: HashMap<Edge, usize> = HashMap::with_capacity(n as usize);
        let mut trace = SplitTrace::default();

        while let Some(act) = stack.pop() {
            let (u, v) = (act.u, act.v);
            let (w, case) = self.choose(&act)?;
            debug_assert!(u < w && w < v);
            let left = self.piercing(u, w);
            let right = self.piercing(w, v);
            self.certify(&act, w, case, left.len(), right.len())?;

            faces.push([u, w, v]);
            trace.records.push(SplitRecord {
                active: Edge::new(u, v),
                active_piercing: act.piercing.len(),
                case,
                split: w,
                new_links: [Edge::new(u, w), Edge::new(w, v)],
                piercing: [left.len(), right.len()],
            });
            if v > w + 1 {
                inner.insert(Edge::new(w, v), right.len());
                stack.push(Active { u: w, v, piercing: right });
            }
            if w > u + 1 {
                inner.insert(Edge::new(u, w), left.len());
                stack.push(Active { u, v: w, piercing: left });
            }
        }
        let t = Triangulation::from_faces(n as usize, faces, &inner)?;
        Ok((t, trace))
    }

    fn certify(&self, act: &Active, w: Vertex, case: CaseTag, left: usize, right: usize) -> Result<()> {
        let (u, v) = (act.u, act.v);
        let fail = |what: String| {
            Err(Error::certificate(format!(
                "{} split of {{{u},{v}}} (pierced {}) at {w} [{case:?}]: {what}",
                self.method.name(),
                act.piercing.len()
            )))
        };
        if left > self.edge_bound || right > self.edge_bound {
            return fail(format!("new links pierced {left} and {right} times, bound {}", self.edge_bound));
        }
        let total = act.piercing.len() + left + right;
        if total > self.triangle_bound {
            return fail(format!("triangle pierced {total} times, bound {}", self.triangle_bound));
        }
        if self.method == Method::Strong && self.k % 2 == 1 {
            let lightest = act.piercing.len().min(left).min(right);
            if lightest + 1 > self.k {
                return fail(format!("no side pierced at most {} times", self.k - 1));
            }
        }
        Ok(())
    }

    fn choose(&self, act: &Active) -> Result<(Vertex, CaseTag)> {
        if act.piercing.is_empty() {
            self.choose_unpierced(act)
        } else {
            self.choose_pierced(act)
        }
    }

    /// Right neighbour of `u` closest to `v`; for heavy `{u, w}` under the
    /// min-k rule, redirect to the light edge crossing it nearest to `u`.
    fn choose_unpierced(&self, act: &Active) -> Result<(Vertex, CaseTag)> {
        let (u, v) = (act.u, act.v);
        let nbs = self.graph.index.neighbours(u);
        let pos = nbs.partition_point(|&(x, _)| x < v);
        let &(w, uw) = pos
            .checked_sub(1)
            .and_then(|p| nbs.get(p))
            .filter(|&&(x, _)| x > u)
            .ok_or_else(|| Error::certificate(format!("vertex {u} has no neighbour inside ({u},{v})")))?;
        if self.method == Method::Min && self.is_heavy(uw) {
            // crossers of {u,w} run from (u,w) to (w,v] since {u,v} is unpierced
            let hat = self.outermost(self.graph.crossers[uw as usize].iter().map(|&g| self.edge(g)))
                .ok_or_else(|| Error::certificate(format!("heavy edge {{{u},{w}}} without crossings")))?;
            return Ok((hat.lo(), CaseTag::HeavyFirstCase));
        }
        Ok((w, CaseTag::NoPiercing))
    }

    fn choose_pierced(&self, act: &Active) -> Result<(Vertex, CaseTag)> {
        let (u, v) = (act.u, act.v);
        let ell = act.piercing.len();
        let j = (ell + 2) / 2;
        let ej_id = act.piercing[j - 1];
        let ej = self.edge(ej_id);
        let wj = if u < ej.lo() && ej.lo() < v { ej.lo() } else { ej.hi() };

        match self.method {
            Method::Weak => return Ok((wj, CaseTag::MiddleEndpoint)),
            Method::Min if !self.is_heavy(ej_id) => return Ok((wj, CaseTag::MiddleEndpoint)),
            _ => {}
        }

        let lambda = Edge::new(u, v);
        let right_side = self.graph.crossers[ej_id as usize]
            .iter()
            .map(|&g| self.edge(g))
            .filter(|g| u <= g.lo() && g.hi() <= v && *g != lambda);
        let Some(hat) = self.outermost(right_side) else {
            return Ok((wj, CaseTag::MiddleEndpoint));
        };
        let (p, q) = (hat.lo(), hat.hi());
        let (w, case) = if p == u {
            (q, CaseTag::SharesU)
        } else if q == v {
            if self.method == Method::OuterTwoPlanar {
                (wj, CaseTag::SharesV)
            } else {
                (p, CaseTag::SharesV)
            }
        } else {
            let (a, b) = self.hat_side_counts(lambda, ej, wj, hat);
            (if a <= b { p } else { q }, CaseTag::DisjointHat)
        };
        if self.method == Method::Min {
            return Ok((w, CaseTag::HeavySecondCase));
        }
        Ok((w, case))
    }

    /// An outermost chord among crossers that all separate the same target
    /// vertex from the active link: smallest low end, then largest high end.
    fn outermost(&self, crossers: impl Iterator<Item = Edge>) -> Option<Edge> {
        crossers.min_by_key(|g| (g.lo(), std::cmp::Reverse(g.hi())))
    }

    /// Crossings on `ê = (p, q)` on the `p` side and the `q` side of its
    /// crossing `x` with `e_j`, not counting `e_j` itself.
    ///
    /// An edge that avoids `e_j` stays in one half of the disk cut by `e_j`
    /// and meets `ê` on that half's side. An edge that also crosses `e_j`
    /// either pierces the active link (its crossing with `e_j` is left of the
    /// link, so it meets `ê` on the side of its endpoint inside `(p, q)`) or
    /// lies on the right side (it crosses `e_j` between `x` and `w_j`, so it
    /// meets `ê` on the side of its endpoint outside `[p, q]`).
    fn hat_side_counts(&self, lambda: Edge, ej: Edge, wj: Vertex, hat: Edge) -> (usize, usize) {
        let n = self.d.n();
        let p = hat.lo();
        let l = ej.other(wj);
        let p_half = in_open_arc(l, wj, p, n);
        let hat_id = self.d.edge_index(&hat).expect("ê is an edge");
        let (mut a, mut b) = (0, 0);
        for &g_id in &self.graph.crossers[hat_id] {
            let g = self.edge(g_id);
            if g == ej {
                continue;
            }
            let on_p_side = if g.crosses(&ej) {
                if g.crosses(&lambda) {
                    let inner = if hat.spans(g.lo()) { g.lo() } else { g.hi() };
                    inner < wj
                } else {
                    let outer = if hat.spans(g.lo()) { g.hi() } else { g.lo() };
                    outer < p
                }
            } else {
                let x = if g.contains(l) || g.contains(wj) {
                    if g.contains(l) { g.other(l) } else { g.other(wj) }
                } else {
                    g.lo()
                };
                in_open_arc(l, wj, x, n) == p_half
            };
            if on_p_side {
                a += 1;
            } else {
                b += 1;
            }
        }
        (a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::{piercing_edges, Link};

    fn check_piercing(d: &ConvexDrawing, t: &Triangulation) {
        let d = augment_outer_cycle(d).unwrap();
        for (l, &c) in t.inner_links().iter().zip(t.inner_piercing()) {
            assert_eq!(piercing_edges(&d, l).len(), c, "link {}", l.pair);
        }
    }

    #[test]
    fn k4_weak() {
        let d = ConvexDrawing::complete(4);
        let (t, _) = triangulate_weak(&d, 1).unwrap();
        assert_eq!(t.inner_links().len(), 1);
        let l = t.inner_links()[0].pair;
        assert!(l == Edge::new(0, 2) || l == Edge::new(1, 3));
        assert_eq!(t.piercing_stats().edge_pn, 1);
    }

    #[test]
    fn cycle_has_no_piercing() {
        let d = ConvexDrawing::cycle(6).unwrap();
        for m in [Method::Weak, Method::Strong, Method::OuterTwoPlanar, Method::Min] {
            let (t, trace) = triangulate(&d, m, 1).unwrap();
            assert_eq!(t.piercing_stats().edge_pn, 0);
            assert_eq!(t.piercing_stats().triangle_pn, 0);
            assert!(trace.records.iter().all(|r| r.case == CaseTag::NoPiercing));
        }
    }

    #[test]
    fn k5_bounds() {
        let d = ConvexDrawing::complete(5);
        let (t, _) = triangulate_weak(&d, 2).unwrap();
        assert!(t.piercing_stats().edge_pn <= 3);
        check_piercing(&d, &t);
        let (t, _) = triangulate_strong(&d, 2).unwrap();
        assert!(t.piercing_stats().edge_pn <= 2);
        check_piercing(&d, &t);
        let (t, _) = triangulate_o2p(&d).unwrap();
        let s = t.piercing_stats();
        assert!(s.edge_pn <= 2 && s.triangle_pn <= 4);
        check_piercing(&d, &t);
    }

    #[test]
    fn k4_strong_odd_bound() {
        let (t, _) = triangulate_strong(&ConvexDrawing::complete(4), 1).unwrap();
        let s = t.piercing_stats();
        assert!(s.edge_pn <= 1 && s.triangle_pn <= 2);
    }

    #[test]
    fn c4_with_diagonal_picks_it() {
        let d = ConvexDrawing::new(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        let (t, _) = triangulate_o2p(&d).unwrap();
        assert_eq!(t.inner_links()[0].pair, Edge::new(0, 2));
        assert_eq!(t.piercing_stats().edge_pn, 0);
        assert_eq!(t.piercing_stats().triangle_pn, 0);
    }

    #[test]
    fn augments_missing_cycle() {
        let d = ConvexDrawing::new(6, [(0, 3), (1, 4)]).unwrap();
        let (t, _) = triangulate_strong(&d, 1).unwrap();
        assert_eq!(t.faces().len(), 4);
        assert!(t.piercing_stats().edge_pn <= 1);
    }

    #[test]
    fn rejects_bound_violations() {
        let k5 = ConvexDrawing::complete(5);
        match triangulate_strong(&k5, 1) {
            Err(Error::BoundViolation { edges, .. }) => assert_eq!(edges.len(), 1),
            other => panic!("expected bound violation, got {other:?}"),
        }
        assert!(matches!(triangulate_min(&k5, 1), Err(Error::BoundViolation { .. })));
        assert!(matches!(triangulate_o2p(&ConvexDrawing::complete(6)), Err(Error::BoundViolation { .. })));
        assert!(matches!(
            triangulate_strong(&ConvexDrawing::new(2, [(0, 1)]).unwrap(), 1),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn triangle_is_single_face() {
        let (t, trace) = triangulate_strong(&ConvexDrawing::cycle(3).unwrap(), 1).unwrap();
        assert_eq!(t.faces(), &[[0, 1, 2]]);
        assert!(t.inner_links().is_empty());
        assert_eq!(trace.records.len(), 1);
    }

    /// One long chord crossed by k+1 = 2 short chords, each crossed once.
    #[test]
    fn min_with_heavy_edge() {
        let d = ConvexDrawing::new(8, [(0, 4), (1, 7), (3, 5)]).unwrap();
        let profile = crate::drawing::crossing_profile(&d);
        assert_eq!(profile.max_count, 2);
        assert_eq!(profile.min_k_ok_for, 1);
        let (t, _) = triangulate_min(&d, 1).unwrap();
        assert!(t.piercing_stats().edge_pn <= 1);
        assert!(t.piercing_stats().triangle_pn <= 3);
        check_piercing(&d, &t);
    }

    #[test]
    fn trace_replays() {
        let d = ConvexDrawing::complete(5);
        let (t, trace) = triangulate_strong(&d, 2).unwrap();
        assert_eq!(trace.replay(5).unwrap(), t);
        let (t2, trace2) = triangulate_strong(&d, 2).unwrap();
        assert_eq!((t, trace), (t2, trace2));
    }

    #[test]
    fn link_piercing_matches_public_query() {
        let d = ConvexDrawing::complete(6);
        let (t, _) = triangulate_weak(&d, 4).unwrap();
        for l in t.inner_links() {
            let l2 = Link::new(l.a(), l.b(), 6).unwrap();
            assert_eq!(piercing_edges(&d, &l2).len(), t.link_piercing(&l.pair));
        }
    }
}
