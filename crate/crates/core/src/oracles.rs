//! Exact exponential-time oracles for small instances.
//!
//! Each oracle returns its value with a witness that re-checks in polynomial
//! time ([`OracleResult::verify`]): an elimination order for treewidth, a
//! separation for the balanced separation order, a cyclic vertex order for
//! the convex local crossing number.

use serde::{Deserialize, Serialize};

use crate::decomposition::{validate_td, TreeDecomposition};
use crate::drawing::{crossing_profile, ConvexDrawing, Vertex};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::separation::{validate_separation, Separation};

/// Largest `n` accepted by [`brute_treewidth`].
pub const TREEWIDTH_CAP: usize = 14;
/// Largest `n` accepted by [`brute_min_balanced_separation`].
pub const SEPARATION_CAP: usize = 14;
/// Largest `n` accepted by [`brute_convex_lcr`].
pub const LCR_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Vertices in elimination order; the width is the largest number of
    /// later neighbours a vertex has in the filled graph.
    EliminationOrder { order: Vec<Vertex> },
    Separation(Separation),
    /// `order[p]` is the vertex placed at cyclic position `p`.
    CyclicOrder { order: Vec<Vertex> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: usize,
    pub witness: Witness,
    pub method: String,
}

impl OracleResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Re-checks that the witness attains `value` on `d`.
    pub fn verify(&self, d: &ConvexDrawing) -> bool {
        match &self.witness {
            Witness::EliminationOrder { order } => {
                if !is_permutation(order, d.n()) {
                    return false;
                }
                let td = td_from_elimination_order(d, order);
                let report = validate_td(d, &td);
                report.valid && td.width() == self.value
            }
            Witness::Separation(s) => {
                let report = validate_separation(d, s);
                report.valid && report.balanced && report.order == self.value
            }
            Witness::CyclicOrder { order } => {
                is_permutation(order, d.n())
                    && crossing_profile(&relabel(d, order)).max_count == self.value
            }
        }
    }
}

fn is_permutation(order: &[Vertex], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n
        && order.iter().all(|&v| (v as usize) < n && !std::mem::replace(&mut seen[v as usize], true))
}

fn check_cap(oracle: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::OracleCap { oracle, n, cap });
    }
    Ok(())
}

fn adjacency(d: &ConvexDrawing) -> Vec<u32> {
    let mut adj = vec![0u32; d.n()];
    for e in d.edges() {
        adj[e.lo() as usize] |= 1 << e.hi();
        adj[e.hi() as usize] |= 1 << e.lo();
    }
    adj
}

/// The drawing that places vertex `order[p]` at position `p`.
pub fn relabel(d: &ConvexDrawing, order: &[Vertex]) -> ConvexDrawing {
    let mut pos = vec![0 as Vertex; d.n()];
    for (p, &v) in order.iter().enumerate() {
        pos[v as usize] = p as Vertex;
    }
    ConvexDrawing::new(d.n(), d.edges().iter().map(|e| (pos[e.lo() as usize], pos[e.hi() as usize])))
        .expect("a permutation preserves simplicity")
}

/// The tree decomposition of an elimination order: one bag per vertex
/// holding it and its later neighbours in the filled graph, attached to the
/// bag of the earliest of those neighbours.
pub fn td_from_elimination_order(d: &ConvexDrawing, order: &[Vertex]) -> TreeDecomposition {
    let n = d.n();
    if n == 0 {
        return TreeDecomposition::new(Vec::new(), Vec::new(), None);
    }
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut nbrs: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for e in d.edges() {
        nbrs[e.lo() as usize].insert(e.hi() as usize);
        nbrs[e.hi() as usize].insert(e.lo() as usize);
    }
    let mut bags = Vec::with_capacity(n);
    let mut tree = Vec::with_capacity(n - 1);
    for (i, &v) in order.iter().enumerate() {
        let v = v as usize;
        let later: Vec<usize> = nbrs[v].iter().copied().filter(|&x| pos[x] > i).collect();
        for &x in &later {
            for &y in &later {
                if x != y {
                    nbrs[x].insert(y);
                }
            }
        }
        let mut bag: Vec<Vertex> = later.iter().map(|&x| x as Vertex).collect();
        bag.push(v as Vertex);
        bags.push(bag);
        if i + 1 < n {
            let parent = later.iter().map(|&x| pos[x]).min().unwrap_or(n - 1);
            tree.push((i, parent));
        }
    }
    TreeDecomposition::new(bags, tree, None)
}

/// Exact treewidth by dynamic programming over vertex subsets: `TW(S)` is the
/// best width of eliminating `S` first, and eliminating `v` after `S` costs
/// the number of vertices outside `S ∪ {v}` reachable from `v` through `S`.
pub fn brute_treewidth(d: &ConvexDrawing) -> Result<OracleResult> {
    let n = d.n();
    check_cap("treewidth", n, TREEWIDTH_CAP)?;
    if n == 0 {
        return Ok(OracleResult {
            value: 0,
            witness: Witness::EliminationOrder { order: Vec::new() },
            method: "subset-dp".into(),
        });
    }
    let adj = adjacency(d);
    let full = (1u32 << n) - 1;
    let mut tw = vec![i32::MAX; 1 << n];
    let mut last = vec![0u8; 1 << n];
    tw[0] = -1;
    for s in 1..=full {
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let cost = tw[rest as usize].max(reach_outside(&adj, rest, v) as i32);
            if cost < tw[s as usize] {
                tw[s as usize] = cost;
                last[s as usize] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s as usize];
        order.push(v as Vertex);
        s &= !(1 << v);
    }
    order.reverse();
    Ok(OracleResult {
        value: tw[full as usize].max(0) as usize,
        witness: Witness::EliminationOrder { order },
        method: "subset-dp".into(),
    })
}

/// Vertices outside `s ∪ {v}` adjacent to the component of `v` in `G[s ∪ {v}]`.
fn reach_outside(adj: &[u32], s: u32, v: usize) -> u32 {
    let mut comp = 1u32 << v;
    let mut frontier = comp;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[x] & s & !comp;
        comp |= fresh;
        frontier |= fresh;
    }
    let mut out = 0u32;
    let mut bits = comp;
    while bits != 0 {
        let x = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        out |= adj[x];
    }
    (out & !comp & !s).count_ones()
}

/// Minimum order of a balanced separation of `d` itself. Separator sets are
/// tried by increasing size; a separator works when the components of the
/// rest can be grouped into two sides of at most `2n/3` vertices each.
pub fn brute_min_balanced_separation(d: &ConvexDrawing) -> Result<OracleResult> {
    let n = d.n();
    check_cap("separation", n, SEPARATION_CAP)?;
    let adj = adjacency(d);
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut masks: Vec<u32> = (0..=full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for sep in masks {
        if let Some(side) = balanced_grouping(&adj, n, sep) {
            let a: Vec<Vertex> = members(side | sep);
            let b: Vec<Vertex> = members((full & !side) | sep);
            let s = Separation::new(n, a, b);
            return Ok(OracleResult {
                value: s.order,
                witness: Witness::Separation(s),
                method: "separator-enumeration".into(),
            });
        }
    }
    unreachable!("the separator V is always balanced")
}

fn members(mask: u32) -> Vec<Vertex> {
    (0..32).filter(|&v| mask & (1 << v) != 0).collect()
}

/// A union of components of `G - sep` that, with the remaining components on
/// the other side, leaves both sides at most `2n/3`.
fn balanced_grouping(adj: &[u32], n: usize, sep: u32) -> Option<u32> {
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut left = full & !sep;
    let mut comps = Vec::new();
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp = 1u32 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[x] & left & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        left &= !comp;
        comps.push(comp);
    }
    let rest = n - sep.count_ones() as usize;
    // reach[x] holds the union of components reaching size x
    let mut reach: Vec<Option<u32>> = vec![None; rest + 1];
    reach[0] = Some(0);
    for &c in &comps {
        let size = c.count_ones() as usize;
        for x in (size..=rest).rev() {
            if reach[x].is_none() {
                if let Some(u) = reach[x - size] {
                    reach[x] = Some(u | c);
                }
            }
        }
    }
    (0..=rest).find_map(|x| reach[x].filter(|_| 3 * x <= 2 * n && 3 * (rest - x) <= 2 * n))
}

/// Exact convex local crossing number: the smallest `k` for which some cyclic
/// order crosses every edge at most `k` times. Vertex 0 is fixed at position
/// 0 and mirror images are skipped; each `k` is a depth-first search that
/// places vertices at increasing positions and prunes on crossings already
/// forced by the placed prefix.
pub fn brute_convex_lcr(d: &ConvexDrawing) -> Result<OracleResult> {
    brute_convex_lcr_with(d, Exec::default())
}

pub fn brute_convex_lcr_with(d: &ConvexDrawing, exec: Exec) -> Result<OracleResult> {
    let n = d.n();
    check_cap("lcr", n, LCR_CAP)?;
    let method = "ordered-search".to_string();
    if n <= 3 {
        let order: Vec<Vertex> = (0..n as Vertex).collect();
        return Ok(OracleResult { value: 0, witness: Witness::CyclicOrder { order }, method });
    }
    let adj = adjacency(d);
    let upper = crossing_profile(d).max_count;
    let seconds: Vec<Vertex> = (1..n as Vertex).collect();
    for k in 0..=upper {
        let found = par::map(exec, &seconds, |&second| {
            let mut s = OrderSearch::new(&adj, k);
            s.place(0);
            s.place(second);
            s.dfs().then(|| s.order.clone())
        });
        if let Some(order) = found.into_iter().flatten().next() {
            return Ok(OracleResult { value: k, witness: Witness::CyclicOrder { order }, method });
        }
    }
    unreachable!("the given order attains its own crossing number")
}

struct OrderSearch<'a> {
    adj: &'a [u32],
    n: usize,
    k: usize,
    order: Vec<Vertex>,
    /// Placed vertices.
    placed: u32,
    /// `prefix[p]`: vertices at positions `< p`.
    prefix: Vec<u32>,
}

impl<'a> OrderSearch<'a> {
    fn new(adj: &'a [u32], k: usize) -> Self {
        let n = adj.len();
        OrderSearch { adj, n, k, order: Vec::with_capacity(n), placed: 0, prefix: vec![0] }
    }

    fn place(&mut self, v: Vertex) {
        self.order.push(v);
        self.placed |= 1 << v;
        self.prefix.push(self.placed);
    }

    fn unplace(&mut self) {
        let v = self.order.pop().expect("placed");
        self.placed &= !(1 << v);
        self.prefix.pop();
    }

    /// Checks the edges gained by the vertex at the last position `p`. A
    /// completed edge `{order[q], order[p]}` has all of its crossings fixed:
    /// the edges leaving the positions strictly between. A vertex `a` with
    /// an unplaced neighbour already crosses every edge joining a position
    /// after `a` to a position before `a`.
    fn feasible(&self) -> bool {
        let p = self.order.len() - 1;
        let v = self.order[p];
        let all = self.prefix[p + 1];
        for q in 0..p {
            let a = self.order[q];
            let between = self.prefix[p] & !self.prefix[q + 1];
            if self.adj[v as usize] & (1 << a) != 0 {
                let crossings = self.leaving(between, !between & !(1 << a) & !(1 << v));
                if crossings > self.k {
                    return false;
                }
            }
            if self.adj[a as usize] & !all != 0 {
                let after = all & !self.prefix[q + 1];
                if self.leaving(after, self.prefix[q]) > self.k {
                    return false;
                }
            }
        }
        true
    }

    /// Number of edges from `from` to `to` (disjoint sets).
    fn leaving(&self, from: u32, to: u32) -> usize {
        let mut bits = from;
        let mut total = 0;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            total += (self.adj[x] & to).count_ones() as usize;
        }
        total
    }

    fn dfs(&mut self) -> bool {
        if !self.feasible() {
            return false;
        }
        if self.order.len() == self.n {
            return true;
        }
        let second = self.order[1];
        let free = ((1u32 << self.n) - 1) & !self.placed;
        // the mirror image of an order ending below its second vertex is searched elsewhere
        if 31 - free.leading_zeros() < second {
            return false;
        }
        let mut bits = free;
        while bits != 0 {
            let v = bits.trailing_zeros() as Vertex;
            bits &= bits - 1;
            self.place(v);
            if self.dfs() {
                return true;
            }
            self.unplace();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{stacked_prism, StackedPrismSpec};

    fn path(n: usize) -> ConvexDrawing {
        ConvexDrawing::new(n, (0..n as Vertex - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn treewidth_small_graphs() {
        let k5 = brute_treewidth(&ConvexDrawing::complete(5)).unwrap();
        assert_eq!(k5.value, 4);
        assert!(k5.verify(&ConvexDrawing::complete(5)));
        let c6 = ConvexDrawing::cycle(6).unwrap();
        let r = brute_treewidth(&c6).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.verify(&c6));
        assert_eq!(brute_treewidth(&path(6)).unwrap().value, 1);
        assert_eq!(brute_treewidth(&ConvexDrawing::new(4, []).unwrap()).unwrap().value, 0);
    }

    #[test]
    fn separation_small_graphs() {
        let c6 = ConvexDrawing::cycle(6).unwrap();
        let r = brute_min_balanced_separation(&c6).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.verify(&c6));
        let p6 = path(6);
        let r = brute_min_balanced_separation(&p6).unwrap();
        assert_eq!(r.value, 1);
        assert!(r.verify(&p6));
        let k5 = ConvexDrawing::complete(5);
        let r = brute_min_balanced_separation(&k5).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.verify(&k5));
    }

    #[test]
    fn lcr_small_graphs() {
        for (d, want) in [
            (ConvexDrawing::complete(5), 2),
            (ConvexDrawing::cycle(6).unwrap(), 0),
            (ConvexDrawing::complete(4), 1),
            (ConvexDrawing::new(6, [(0, 3), (1, 4), (2, 5)]).unwrap(), 0),
        ] {
            let r = brute_convex_lcr(&d).unwrap();
            assert_eq!(r.value, want, "{d:?}");
            assert!(r.verify(&d));
        }
    }

    #[test]
    fn lcr_is_schedule_independent() {
        let d = stacked_prism(StackedPrismSpec { m: 4, n: 2 }).unwrap();
        let a = brute_convex_lcr_with(&d, Exec::Sequential).unwrap();
        let b = brute_convex_lcr_with(&d, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    fn naive_lcr(d: &ConvexDrawing) -> usize {
        fn permute(rest: &mut Vec<Vertex>, order: &mut Vec<Vertex>, d: &ConvexDrawing, best: &mut usize) {
            if rest.is_empty() {
                *best = (*best).min(crossing_profile(&relabel(d, order)).max_count);
                return;
            }
            for i in 0..rest.len() {
                let v = rest.remove(i);
                order.push(v);
                permute(rest, order, d, best);
                order.pop();
                rest.insert(i, v);
            }
        }
        let mut best = usize::MAX;
        permute(&mut (1..d.n() as Vertex).collect(), &mut vec![0], d, &mut best);
        best
    }

    #[test]
    fn lcr_matches_full_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(4..=7usize);
            let mut pairs = Vec::new();
            for a in 0..n as Vertex {
                for b in (a + 1)..n as Vertex {
                    if rng.gen_bool(0.55) {
                        pairs.push((a, b));
                    }
                }
            }
            let d = ConvexDrawing::new(n, pairs).unwrap();
            assert_eq!(brute_convex_lcr(&d).unwrap().value, naive_lcr(&d), "{d:?}");
        }
    }

    #[test]
    fn caps_refuse() {
        let big = ConvexDrawing::cycle(15).unwrap();
        assert!(matches!(brute_treewidth(&big), Err(Error::OracleCap { cap: 14, .. })));
        assert!(matches!(brute_min_balanced_separation(&big), Err(Error::OracleCap { .. })));
        let d = ConvexDrawing::cycle(13).unwrap();
        assert!(matches!(brute_convex_lcr(&d), Err(Error::OracleCap { cap: 12, .. })));
    }

    #[test]
    fn elimination_order_td() {
        let d = ConvexDrawing::cycle(5).unwrap();
        let td = td_from_elimination_order(&d, &[0, 1, 2, 3, 4]);
        assert!(validate_td(&d, &td).valid);
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn relabel_moves_vertices() {
        let d = ConvexDrawing::new(4, [(0, 1), (2, 3)]).unwrap();
        let r = relabel(&d, &[0, 2, 1, 3]);
        assert_eq!(r, ConvexDrawing::new(4, [(0, 2), (1, 3)]).unwrap());
    }
}
