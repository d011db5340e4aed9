//! Output-sensitive crossing queries.
//!
//! Every vertex keeps its sorted neighbour list. Two segment trees over the
//! positions store the largest and the smallest neighbour of each position,
//! so "all edges with one endpoint strictly inside `(a, b)` and the other
//! strictly outside `[a, b]`" is answered in `O((1 + out) log n)`.

use crate::drawing::{ConvexDrawing, CrossingProfile, Edge, Vertex};
use crate::par;

pub(crate) type EdgeId = u32;

const NO_MIN: Vertex = Vertex::MAX;

#[derive(Debug, Clone)]
pub(crate) struct CrossingIndex {
    size: usize,
    /// Sorted `(neighbour, edge id)` per vertex.
    adj: Vec<Vec<(Vertex, EdgeId)>>,
    max_nb: Vec<Vertex>,
    min_nb: Vec<Vertex>,
}

impl CrossingIndex {
    pub fn empty(n: usize) -> Self {
        let size = n.next_power_of_two().max(1);
        CrossingIndex {
            size,
            adj: vec![Vec::new(); n],
            max_nb: vec![0; 2 * size],
            min_nb: vec![NO_MIN; 2 * size],
        }
    }

    pub fn from_edges(n: usize, edges: &[Edge]) -> Self {
        let mut idx = Self::empty(n);
        for (id, e) in edges.iter().enumerate() {
            idx.adj[e.lo() as usize].push((e.hi(), id as EdgeId));
            idx.adj[e.hi() as usize].push((e.lo(), id as EdgeId));
        }
        for v in 0..n {
            idx.adj[v].sort_unstable();
            let leaf = idx.size + v;
            if let (Some(first), Some(last)) = (idx.adj[v].first(), idx.adj[v].last()) {
                idx.min_nb[leaf] = first.0;
                idx.max_nb[leaf] = last.0;
            }
        }
        for node in (1..idx.size).rev() {
            idx.max_nb[node] = idx.max_nb[2 * node].max(idx.max_nb[2 * node + 1]);
            idx.min_nb[node] = idx.min_nb[2 * node].min(idx.min_nb[2 * node + 1]);
        }
        idx
    }

    pub fn neighbours(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v as usize]
    }

    pub fn insert(&mut self, e: Edge, id: EdgeId) {
        for (v, w) in [(e.lo(), e.hi()), (e.hi(), e.lo())] {
            let list = &mut self.adj[v as usize];
            let pos = list.partition_point(|&(x, _)| x < w);
            list.insert(pos, (w, id));
            let (lo, hi) = (list[0].0, list[list.len() - 1].0);
            let mut node = self.size + v as usize;
            self.min_nb[node] = lo;
            self.max_nb[node] = hi;
            node /= 2;
            while node >= 1 {
                self.max_nb[node] = self.max_nb[2 * node].max(self.max_nb[2 * node + 1]);
                self.min_nb[node] = self.min_nb[2 * node].min(self.min_nb[2 * node + 1]);
                node /= 2;
            }
        }
    }

    /// Calls `f` for every edge crossing the pair `(a, b)`, `a < b`, until `f`
    /// returns `false`. Returns `false` iff stopped early.
    pub fn for_each_crosser(&self, a: Vertex, b: Vertex, mut f: impl FnMut(EdgeId) -> bool) -> bool {
        debug_assert!(a < b);
        if b <= a + 1 {
            return true;
        }
        let (lo, hi) = (a as usize + 1, b as usize - 1);
        self.walk_right(1, 0, self.size - 1, lo, hi, b, &mut f)
            && self.walk_left(1, 0, self.size - 1, lo, hi, a, &mut f)
    }

    /// Edges with their low endpoint in `(a, b)` and high endpoint beyond `b`.
    pub fn for_each_forward_crosser(&self, a: Vertex, b: Vertex, mut f: impl FnMut(EdgeId) -> bool) -> bool {
        if b <= a + 1 {
            return true;
        }
        self.walk_right(1, 0, self.size - 1, a as usize + 1, b as usize - 1, b, &mut f)
    }

    pub fn crossers(&self, a: Vertex, b: Vertex) -> Vec<EdgeId> {
        let mut out = Vec::new();
        self.for_each_crosser(a, b, |id| {
            out.push(id);
            true
        });
        out
    }

    /// Crossers of `(a, b)` unless there are more than `limit`.
    pub fn crossers_limited(&self, a: Vertex, b: Vertex, limit: usize) -> Option<Vec<EdgeId>> {
        let mut out = Vec::new();
        let complete = self.for_each_crosser(a, b, |id| {
            out.push(id);
            out.len() <= limit
        });
        complete.then_some(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_right(
        &self,
        node: usize,
        nlo: usize,
        nhi: usize,
        lo: usize,
        hi: usize,
        beyond: Vertex,
        f: &mut impl FnMut(EdgeId) -> bool,
    ) -> bool {
        if nhi < lo || hi < nlo || self.max_nb[node] <= beyond {
            return true;
        }
        if nlo == nhi {
            for &(w, id) in self.adj[nlo].iter().rev() {
                if w <= beyond {
                    break;
                }
                if !f(id) {
                    return false;
                }
            }
            return true;
        }
        let mid = (nlo + nhi) / 2;
        self.walk_right(2 * node, nlo, mid, lo, hi, beyond, f)
            && self.walk_right(2 * node + 1, mid + 1, nhi, lo, hi, beyond, f)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_left(
        &self,
        node: usize,
        nlo: usize,
        nhi: usize,
        lo: usize,
        hi: usize,
        below: Vertex,
        f: &mut impl FnMut(EdgeId) -> bool,
    ) -> bool {
        if nhi < lo || hi < nlo || self.min_nb[node] >= below {
            return true;
        }
        if nlo == nhi {
            for &(w, id) in self.adj[nlo].iter() {
                if w >= below {
                    break;
                }
                if !f(id) {
                    return false;
                }
            }
            return true;
        }
        let mid = (nlo + nhi) / 2;
        self.walk_left(2 * node, nlo, mid, lo, hi, below, f)
            && self.walk_left(2 * node + 1, mid + 1, nhi, lo, hi, below, f)
    }
}

/// Crossing adjacency of a drawing's edges, indexed like `drawing.edges()`.
#[derive(Debug, Clone)]
pub(crate) struct IntersectionGraph {
    pub index: CrossingIndex,
    pub crossers: Vec<Vec<EdgeId>>,
}

impl IntersectionGraph {
    pub fn build(d: &ConvexDrawing) -> Self {
        Self::build_with(d, par::Exec::default())
    }

    pub fn build_with(d: &ConvexDrawing, exec: par::Exec) -> Self {
        let index = CrossingIndex::from_edges(d.n(), d.edges());
        let ids: Vec<usize> = (0..d.edge_count()).collect();
        // each crossing pair is found once, from the edge with the smaller low endpoint
        let forward = par::map(exec, &ids, |&i| {
            let e = d.edges()[i];
            let mut out = Vec::new();
            index.for_each_forward_crosser(e.lo(), e.hi(), |id| {
                out.push(id);
                true
            });
            out
        });
        let mut crossers = vec![Vec::new(); d.edge_count()];
        for (i, list) in forward.into_iter().enumerate() {
            for j in list {
                crossers[i].push(j);
                crossers[j as usize].push(i as EdgeId);
            }
        }
        for list in &mut crossers {
            list.sort_unstable();
        }
        IntersectionGraph { index, crossers }
    }

    pub fn count(&self, id: EdgeId) -> usize {
        self.crossers[id as usize].len()
    }

    pub fn profile(&self) -> CrossingProfile {
        let per_edge: Vec<usize> = self.crossers.iter().map(Vec::len).collect();
        let max_count = per_edge.iter().copied().max().unwrap_or(0);
        let mut min_k_ok_for = 0;
        for (i, list) in self.crossers.iter().enumerate() {
            for &j in list {
                min_k_ok_for = min_k_ok_for.max(per_edge[i].min(per_edge[j as usize]));
            }
        }
        CrossingProfile { per_edge, max_count, min_k_ok_for }
    }
}
