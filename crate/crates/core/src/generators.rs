//! Instance generators: stacked prisms in their boustrophedon layout and
//! random maximal outer k-planar and outer min-k-planar drawings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::drawing::{crossing_profile, ConvexDrawing, Edge, Vertex};
use crate::error::{Error, Result};
use crate::index::{CrossingIndex, EdgeId};

/// The `m × n` stacked prism `Y_{m,n}`: `m` rows of `n` vertices, each row a
/// path, each column a cycle of length `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackedPrismSpec {
    pub m: usize,
    pub n: usize,
}

/// Rows go around the circle one after another, alternating direction, so
/// row edges never cross and a column edge only crosses column edges of the
/// same row pair.
pub fn stacked_prism(spec: StackedPrismSpec) -> Result<ConvexDrawing> {
    let StackedPrismSpec { m, n } = spec;
    if m < 2 || m % 2 == 1 {
        return Err(Error::invalid(format!("stacked prism needs an even row count >= 2, got {m}")));
    }
    if n == 0 {
        return Err(Error::invalid("stacked prism needs at least one column"));
    }
    let pos = |r: usize, c: usize| (r * n + if r.is_multiple_of(2) { c } else { n - 1 - c }) as Vertex;
    let mut edges: Vec<Edge> = Vec::new();
    for r in 0..m {
        for c in 0..n {
            if c + 1 < n {
                edges.push(Edge::new(pos(r, c), pos(r, c + 1)));
            }
            edges.push(Edge::new(pos(r, c), pos((r + 1) % m, c)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    ConvexDrawing::new(m * n, edges.into_iter().map(|e| (e.lo(), e.hi())))
}

/// A generated drawing with its achieved crossing statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedDrawing {
    pub drawing: ConvexDrawing,
    /// Largest per-edge crossing count.
    pub lcr: usize,
    /// Smallest `k` for which the drawing is outer min-k-planar.
    pub min_k: usize,
}

/// Up to this many vertices every chord is a candidate; beyond it only short
/// chords are tried so generation stays near-linear.
const DENSE_LIMIT: usize = 64;

/// The outer cycle plus chords offered in random order, each kept only if
/// every crossing count stays at most `k`. Deterministic per seed. For
/// `n <= 64` every chord is offered, so the result is maximal.
pub fn random_outer_k_planar(n: usize, k: usize, seed: u64) -> Result<GeneratedDrawing> {
    let mut b = Builder::new(n, seed)?;
    for c in b.candidates(k) {
        let Some(crossers) = b.index.crossers_limited(c.lo(), c.hi(), k) else {
            continue;
        };
        if crossers.iter().all(|&x| b.counts[x as usize] < k) {
            b.add(c, &crossers);
        }
    }
    b.finish()
}

/// Like [`random_outer_k_planar`] but keeps a chord whenever every crossing
/// pair still has an endpoint edge with at most `k` crossings. A long spine
/// chord is placed first so that heavy edges appear.
pub fn random_outer_min_k_planar(n: usize, k: usize, seed: u64) -> Result<GeneratedDrawing> {
    let mut b = Builder::new(n, seed)?;
    let mut crossed_by: Vec<Vec<EdgeId>> = vec![Vec::new(); b.counts.len()];
    let spine = (n >= 4).then(|| Edge::new(0, (n / 2) as Vertex));
    let mut offers = b.candidates(2 * k + 1);
    if let Some(s) = spine {
        offers.retain(|e| *e != s);
        offers.insert(0, s);
    }
    for c in offers {
        let crossers = b.index.crossers(c.lo(), c.hi());
        let new_count = |x: EdgeId| b.counts[x as usize] + 1;
        let ok = crossers.iter().all(|&x| {
            let cx = new_count(x);
            // pair (c, x)
            if cx > k && crossers.len() > k {
                return false;
            }
            // pairs (x, y) for the existing crossers y of x
            cx <= k
                || crossed_by[x as usize].iter().all(|&y| {
                    let cy = if crossers.contains(&y) { new_count(y) } else { b.counts[y as usize] };
                    cy <= k
                })
        });
        if ok {
            let id = b.add(c, &crossers);
            crossed_by.push(crossers.clone());
            for &x in &crossers {
                crossed_by[x as usize].push(id);
            }
        }
    }
    b.finish()
}

struct Builder {
    n: usize,
    rng: ChaCha8Rng,
    index: CrossingIndex,
    edges: Vec<Edge>,
    counts: Vec<usize>,
}

impl Builder {
    fn new(n: usize, seed: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("random drawings need n >= 3, got {n}")));
        }
        let mut b = Builder {
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
            index: CrossingIndex::empty(n),
            edges: Vec::new(),
            counts: Vec::new(),
        };
        for i in 0..n {
            b.add(Edge::new(i as Vertex, ((i + 1) % n) as Vertex), &[]);
        }
        Ok(b)
    }

    /// Inner chords in random order: all of them for small `n`, otherwise
    /// about `8n` chords spanning at most `reach + 2` positions.
    fn candidates(&mut self, reach: usize) -> Vec<Edge> {
        let n = self.n;
        let mut out = Vec::new();
        if n <= DENSE_LIMIT {
            for a in 0..n {
                for b in a + 2..n {
                    if !(a == 0 && b == n - 1) {
                        out.push(Edge::new(a as Vertex, b as Vertex));
                    }
                }
            }
            out.shuffle(&mut self.rng);
        } else {
            let max_len = (reach + 3).min(n / 2).max(2);
            for _ in 0..8 * n {
                let a = self.rng.gen_range(0..n);
                let len = self.rng.gen_range(2..=max_len);
                let b = (a + len) % n;
                out.push(Edge::new(a as Vertex, b as Vertex));
            }
            // keep first occurrences only, preserving the random order
            let mut seen = std::collections::HashSet::with_capacity(out.len());
            out.retain(|e| seen.insert(*e));
        }
        out
    }

    fn add(&mut self, e: Edge, crossers: &[EdgeId]) -> EdgeId {
        let id = self.edges.len() as EdgeId;
        self.index.insert(e, id);
        self.edges.push(e);
        self.counts.push(crossers.len());
        for &x in crossers {
            self.counts[x as usize] += 1;
        }
        id
    }

    fn finish(self) -> Result<GeneratedDrawing> {
        let drawing = ConvexDrawing::new(self.n, self.edges.iter().map(|e| (e.lo(), e.hi())))?;
        let p = crossing_profile(&drawing);
        Ok(GeneratedDrawing { drawing, lcr: p.max_count, min_k: p.min_k_ok_for })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prism_y62() {
        let d = stacked_prism(StackedPrismSpec { m: 6, n: 2 }).unwrap();
        assert_eq!(d.n(), 12);
        assert_eq!(d.edge_count(), 18);
        assert_eq!(crossing_profile(&d).max_count, 2);
    }

    #[test]
    fn prism_rows_never_cross() {
        for (m, n) in [(2, 3), (4, 3), (6, 4), (8, 5)] {
            let d = stacked_prism(StackedPrismSpec { m, n }).unwrap();
            let p = crossing_profile(&d);
            assert!(p.max_count <= 2 * n - 2, "Y_{m},{n}");
            for r in 0..m {
                for c in 0..n - 1 {
                    let e = Edge::new((r * n + c) as Vertex, (r * n + c + 1) as Vertex);
                    assert_eq!(p.count(&d, &e), Some(0));
                }
            }
        }
    }

    #[test]
    fn prism_degenerate_and_invalid() {
        let d = stacked_prism(StackedPrismSpec { m: 2, n: 1 }).unwrap();
        assert_eq!(d.edges(), &[Edge::new(0, 1)]);
        assert!(stacked_prism(StackedPrismSpec { m: 5, n: 2 }).is_err());
        assert!(stacked_prism(StackedPrismSpec { m: 4, n: 0 }).is_err());
    }

    #[test]
    fn random_respects_k() {
        for k in 0..5 {
            for seed in 0..20 {
                let g = random_outer_k_planar(8 + seed as usize, k, seed).unwrap();
                assert!(g.lcr <= k);
                assert!(g.drawing.has_outer_cycle());
            }
        }
        let g = random_outer_k_planar(5, 0, 3).unwrap();
        assert_eq!(g.lcr, 0);
        assert_eq!(g.drawing.edge_count(), 7);
    }

    #[test]
    fn random_large_respects_k() {
        let g = random_outer_k_planar(5000, 4, 9).unwrap();
        assert!(g.lcr <= 4);
        assert!(g.drawing.edge_count() > 5000);
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_outer_k_planar(30, 3, 42).unwrap();
        let b = random_outer_k_planar(30, 3, 42).unwrap();
        assert_eq!(a, b);
        let c = random_outer_k_planar(30, 3, 43).unwrap();
        assert_ne!(a.drawing, c.drawing);
    }

    #[test]
    fn min_k_respects_k_and_has_heavy_edges() {
        let mut heavy = 0;
        for k in 1..4 {
            for seed in 0..30 {
                let g = random_outer_min_k_planar(20, k, seed).unwrap();
                assert!(g.min_k <= k, "k={k} seed={seed}");
                if g.lcr > k {
                    heavy += 1;
                }
            }
        }
        assert!(heavy > 0);
    }
}
