//! Tree decompositions from pierced triangulations.
//!
//! Start from the weak dual with one bag per face. Split along unpierced
//! inner links, root every part at a leaf, subdivide every dual edge by a
//! primary copy of the parent bag and, at faces with two children, the edge
//! to the left child by one secondary copy per bent edge. Then every edge
//! that pierces links gets its endpoints lifted until they share a bag:
//!
//! * an edge with one endpoint on its topmost face `f` has its lower endpoint
//!   lifted to the primary copy above the child of `f` it comes from;
//! * a bent edge `{u_i, w_i}` at `f` (endpoints in different child
//!   subtrees) has `u_i` lifted from the left subtree to `b_{f,i}`, `w_i`
//!   lifted to `b_f` and copied down to `b_{f,i}`.
//!
//! Lifting only ever extends a vertex's bags along the path from its highest
//! bag towards the root, so the final bags are the union of those paths and
//! do not depend on the processing order.

mod dual;

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::drawing::{ConvexDrawing, Edge, Vertex};
use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

pub use dual::{split_at_unpierced_links, weak_dual, Join, Part, SplitParts, WeakDual};

const NONE: usize = usize::MAX;

/// Where a bag comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BagOrigin {
    /// The bag `b_f` of a face.
    Original { face: [Vertex; 3] },
    /// The copy of `b_f` directly above the child face `child`.
    Primary { face: [Vertex; 3], child: [Vertex; 3] },
    /// The copy `b_{f,index}` (1-based, top to bottom) above the left child.
    Secondary { face: [Vertex; 3], index: usize },
    /// A bag not produced by the face construction.
    Other,
}

impl BagOrigin {
    fn is_copy(&self) -> bool {
        matches!(self, BagOrigin::Primary { .. } | BagOrigin::Secondary { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Sorted vertex lists.
    pub bags: Vec<Vec<Vertex>>,
    /// Bag index pairs `(i, j)`, `i < j`, sorted.
    #[serde(rename = "tree")]
    pub tree_edges: Vec<(usize, usize)>,
    pub provenance: Vec<BagOrigin>,
}

#[derive(Serialize)]
struct TdJson<'a> {
    bags: &'a [Vec<Vertex>],
    tree: &'a [(usize, usize)],
    width: usize,
    provenance: &'a [BagOrigin],
}

impl TreeDecomposition {
    /// Normalizes bags and tree edges. Provenance defaults to
    /// [`BagOrigin::Other`] when not given.
    pub fn new(mut bags: Vec<Vec<Vertex>>, tree_edges: Vec<(usize, usize)>, provenance: Option<Vec<BagOrigin>>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        let mut tree_edges: Vec<(usize, usize)> = tree_edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        tree_edges.sort_unstable();
        let provenance = provenance.unwrap_or_else(|| vec![BagOrigin::Other; bags.len()]);
        TreeDecomposition { bags, tree_edges, provenance }
    }

    /// One bag holding every vertex.
    pub fn single_bag(n: usize) -> Self {
        Self::new(vec![(0..n as Vertex).collect()], Vec::new(), None)
    }

    /// Largest bag size minus one (0 without bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn to_json(&self) -> String {
        let j = TdJson { bags: &self.bags, tree: &self.tree_edges, width: self.width(), provenance: &self.provenance };
        serde_json::to_string(&j).expect("serializable")
    }

    /// The bag tree in Graphviz syntax. Copies are drawn as ellipses,
    /// secondary copies filled.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph td {\n  node [fontname=\"monospace\"];\n");
        for (i, (bag, origin)) in self.bags.iter().zip(&self.provenance).enumerate() {
            let verts: Vec<String> = bag.iter().map(u32::to_string).collect();
            let style = match origin {
                BagOrigin::Original { .. } | BagOrigin::Other => "shape=box",
                BagOrigin::Primary { .. } => "shape=ellipse",
                BagOrigin::Secondary { .. } => "shape=ellipse, style=filled, fillcolor=\"#fff3a0\"",
            };
            let _ = writeln!(s, "  b{i} [label=\"{i}: {{{}}}\", {style}];", verts.join(","));
        }
        for (a, b) in &self.tree_edges {
            let _ = writeln!(s, "  b{a} -- b{b};");
        }
        s.push_str("}\n");
        s
    }
}

/// Outcome of [`validate_td`]. Every list names the offending items.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TdReport {
    pub valid: bool,
    pub width: usize,
    pub is_tree: bool,
    pub out_of_range: Vec<Vertex>,
    pub missing_vertices: Vec<Vertex>,
    pub uncovered_edges: Vec<Edge>,
    pub disconnected_vertices: Vec<Vertex>,
}

/// Checks that the bags form a tree, cover every vertex and edge of `d`, and
/// that the bags holding any one vertex are connected.
pub fn validate_td(d: &ConvexDrawing, td: &TreeDecomposition) -> TdReport {
    let n = d.n();
    let b = td.bags.len();
    let mut is_tree = td.tree_edges.len() + 1 == b || (b == 0 && td.tree_edges.is_empty());
    let mut adj = vec![Vec::new(); b];
    for &(x, y) in &td.tree_edges {
        if x >= b || y >= b || x == y {
            is_tree = false;
            continue;
        }
        adj[x].push(y);
        adj[y].push(x);
    }
    if is_tree && b > 0 {
        let mut seen = vec![false; b];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        is_tree = count == b;
    }

    let mut out_of_range = Vec::new();
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            match occurs.get_mut(v as usize) {
                Some(list) => list.push(i),
                None => out_of_range.push(v),
            }
        }
    }
    out_of_range.sort_unstable();
    out_of_range.dedup();
    let missing_vertices: Vec<Vertex> = (0..n).filter(|&v| occurs[v].is_empty()).map(|v| v as Vertex).collect();

    let uncovered_edges: Vec<Edge> = d
        .edges()
        .iter()
        .copied()
        .filter(|e| {
            let (x, y) = (e.lo() as usize, e.hi() as usize);
            let (short, other) = if occurs[x].len() <= occurs[y].len() { (x, y) } else { (y, x) };
            !occurs[short].iter().any(|&i| td.bags[i].binary_search(&(other as Vertex)).is_ok())
        })
        .collect();

    // in a tree, the bags of v are connected iff they span |bags(v)| - 1 tree edges
    let mut inner_edges = vec![0usize; n];
    if is_tree {
        for &(x, y) in &td.tree_edges {
            let (bx, by) = (&td.bags[x], &td.bags[y]);
            let (mut i, mut j) = (0, 0);
            while i < bx.len() && j < by.len() {
                match bx[i].cmp(&by[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if let Some(c) = inner_edges.get_mut(bx[i] as usize) {
                            *c += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    let disconnected_vertices: Vec<Vertex> = if is_tree {
        (0..n).filter(|&v| !occurs[v].is_empty() && inner_edges[v] + 1 != occurs[v].len()).map(|v| v as Vertex).collect()
    } else {
        Vec::new()
    };
    let valid = is_tree
        && out_of_range.is_empty()
        && missing_vertices.is_empty()
        && uncovered_edges.is_empty()
        && disconnected_vertices.is_empty();
    TdReport {
        valid,
        width: td.width(),
        is_tree,
        out_of_range,
        missing_vertices,
        uncovered_edges,
        disconnected_vertices,
    }
}

/// Edges passing through one face.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceEdges {
    /// One endpoint on the face, piercing the opposite link.
    pub short: Vec<Edge>,
    /// No endpoint on the face, piercing two of its links.
    pub long: Vec<Edge>,
    /// Long edges with one endpoint below the face and one above it.
    pub lineal: Vec<Edge>,
    /// Long edges with endpoints in the two different child subtrees.
    pub bent: Vec<Edge>,
}

/// How one edge of the drawing is covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EdgeRoute {
    /// A side of some face.
    Link,
    /// `upper` lies on the topmost face `top`; `lower` comes up from `child`.
    Lineal { top: usize, child: usize, upper: Vertex, lower: Vertex },
    /// Endpoints in the left and right child subtrees of `top`.
    Bent { top: usize, left: Vertex, right: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClassification {
    /// Indexed like [`Triangulation::faces`].
    pub per_face: Vec<FaceEdges>,
    /// Indexed like [`ConvexDrawing::edges`].
    pub routes: Vec<EdgeRoute>,
}

/// Rooted dual forest: one tree per part, children ordered left first.
struct Rooted {
    split: SplitParts,
    parent: Vec<usize>,
    depth: Vec<usize>,
    children: Vec<Vec<usize>>,
    /// Faces of each part in preorder.
    preorder: Vec<Vec<usize>>,
    preorder_index: Vec<usize>,
}

impl Rooted {
    fn new(t: &Triangulation) -> Self {
        let dual = weak_dual(t);
        let split = dual::split_dual(t, &dual);
        let m = dual.len();
        let mut parent = vec![NONE; m];
        let mut depth = vec![0; m];
        let mut children = vec![Vec::new(); m];
        let mut preorder = Vec::with_capacity(split.parts.len());
        let mut preorder_index = vec![0; m];
        for (pid, part) in split.parts.iter().enumerate() {
            let mut order = Vec::with_capacity(part.faces.len());
            let mut stack = vec![part.root];
            while let Some(f) = stack.pop() {
                preorder_index[f] = order.len();
                order.push(f);
                let mut kids: Vec<(usize, Edge)> = dual
                    .neighbours(f)
                    .iter()
                    .copied()
                    .filter(|&(g, _)| split.part_of[g] == pid && g != parent[f])
                    .collect();
                kids.sort_by_key(|&(_, link)| (t.link_piercing(&link), link));
                for &(g, _) in &kids {
                    parent[g] = f;
                    depth[g] = depth[f] + 1;
                }
                children[f] = kids.iter().map(|&(g, _)| g).collect();
                stack.extend(children[f].iter().rev());
            }
            preorder.push(order);
        }
        Rooted { split, parent, depth, children, preorder, preorder_index }
    }

    fn left_child(&self, f: usize) -> Option<usize> {
        (self.children[f].len() == 2).then(|| self.children[f][0])
    }
}

/// For every vertex, its faces as angular intervals `(from, to, face)`
/// measured counterclockwise from the vertex, sorted.
fn fans(t: &Triangulation) -> Vec<Vec<(usize, usize, usize)>> {
    let n = t.n();
    let mut fans = vec![Vec::new(); n];
    for (f, face) in t.faces().iter().enumerate() {
        for i in 0..3 {
            let x = face[i] as usize;
            let mut ds = [0; 2];
            for (slot, j) in [(i + 1) % 3, (i + 2) % 3].into_iter().enumerate() {
                ds[slot] = (face[j] as usize + n - x) % n;
            }
            ds.sort_unstable();
            fans[x].push((ds[0], ds[1], f));
        }
    }
    for fan in &mut fans {
        fan.sort_unstable();
    }
    fans
}

/// Face at `x` that the chord `{x, y}` enters first, or `None` if the chord
/// is a side of a face.
fn first_face(fans: &[Vec<(usize, usize, usize)>], n: usize, x: Vertex, y: Vertex) -> Option<usize> {
    let fan = &fans[x as usize];
    let dy = (y as usize + n - x as usize) % n;
    let pos = fan.partition_point(|&(lo, _, _)| lo < dy);
    let &(lo, hi, f) = fan.get(pos.checked_sub(1)?)?;
    (lo < dy && dy < hi).then_some(f)
}

/// Classifies every edge of `d` with respect to the faces of `t` it passes
/// through, using the rooted dual forest of the decomposition.
pub fn classify_edges(d: &ConvexDrawing, t: &Triangulation) -> Result<EdgeClassification> {
    check_sizes(d, t)?;
    let rooted = Rooted::new(t);
    classify_with(d, t, &rooted)
}

fn classify_with(d: &ConvexDrawing, t: &Triangulation, r: &Rooted) -> Result<EdgeClassification> {
    let n = t.n();
    let fans = fans(t);
    let mut per_face = vec![FaceEdges::default(); t.faces().len()];
    let mut routes = Vec::with_capacity(d.edge_count());
    for &e in d.edges() {
        let (x, y) = (e.lo(), e.hi());
        let (Some(fx), Some(fy)) = (first_face(&fans, n, x, y), first_face(&fans, n, y, x)) else {
            routes.push(EdgeRoute::Link);
            continue;
        };
        if r.split.part_of[fx] != r.split.part_of[fy] {
            return Err(Error::certificate(format!("edge {e} crosses an unpierced link")));
        }
        per_face[fx].short.push(e);
        per_face[fy].short.push(e);
        // climb to the lowest common ancestor, remembering the child on each side
        let (mut a, mut b) = (fx, fy);
        let (mut ca, mut cb) = (NONE, NONE);
        let mut path = Vec::new();
        while r.depth[a] > r.depth[b] {
            path.push(a);
            ca = a;
            a = r.parent[a];
        }
        while r.depth[b] > r.depth[a] {
            path.push(b);
            cb = b;
            b = r.parent[b];
        }
        while a != b {
            path.extend([a, b]);
            (ca, cb) = (a, b);
            (a, b) = (r.parent[a], r.parent[b]);
        }
        let top = a;
        for &f in &path {
            if f != fx && f != fy {
                per_face[f].long.push(e);
                per_face[f].lineal.push(e);
            }
        }
        let route = if top == fx {
            EdgeRoute::Lineal { top, child: cb, upper: x, lower: y }
        } else if top == fy {
            EdgeRoute::Lineal { top, child: ca, upper: y, lower: x }
        } else {
            per_face[top].long.push(e);
            per_face[top].bent.push(e);
            if r.left_child(top) == Some(ca) {
                EdgeRoute::Bent { top, left: x, right: y }
            } else {
                EdgeRoute::Bent { top, left: y, right: x }
            }
        };
        routes.push(route);
    }
    Ok(EdgeClassification { per_face, routes })
}

fn check_sizes(d: &ConvexDrawing, t: &Triangulation) -> Result<()> {
    if d.n() != t.n() {
        return Err(Error::invalid(format!("drawing has n={} but triangulation has n={}", d.n(), t.n())));
    }
    Ok(())
}

/// Bag tree under construction.
struct Builder {
    bags: Vec<Vec<Vertex>>,
    parent: Vec<usize>,
    depth: Vec<usize>,
    origin: Vec<BagOrigin>,
}

impl Builder {
    fn push(&mut self, bag: Vec<Vertex>, parent: usize, origin: BagOrigin) -> usize {
        let depth = if parent == NONE { 0 } else { self.depth[parent] + 1 };
        self.bags.push(bag);
        self.parent.push(parent);
        self.depth.push(depth);
        self.origin.push(origin);
        self.bags.len() - 1
    }

    fn add(&mut self, node: usize, z: Vertex) {
        if !self.bags[node].contains(&z) {
            self.bags[node].push(z);
        }
    }
}

/// Builds a tree decomposition of `d` from `t` and checks it: bags of faces
/// gain at most `⌊c/2⌋` vertices, copies at most `⌊(c+1)/2⌋`, where `c` is
/// the triangle piercing number, so the width is at most `⌊(c+5)/2⌋`.
pub fn build_tree_decomposition(d: &ConvexDrawing, t: &Triangulation) -> Result<TreeDecomposition> {
    check_sizes(d, t)?;
    let r = Rooted::new(t);
    let class = classify_with(d, t, &r)?;
    let faces = t.faces();

    // bent edges per face, numbered top to bottom by the preorder position
    // of their left endpoint's highest face, later faces first
    let mut highest: HashMap<(usize, Vertex), usize> = HashMap::new();
    for (pid, order) in r.preorder.iter().enumerate() {
        for &f in order {
            for &z in &faces[f] {
                highest.entry((pid, z)).or_insert(f);
            }
        }
    }
    let mut bent: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); faces.len()];
    for route in &class.routes {
        if let EdgeRoute::Bent { top, left, right } = *route {
            bent[top].push((left, right));
        }
    }
    for (f, list) in bent.iter_mut().enumerate() {
        let pid = r.split.part_of[f];
        list.sort_by_key(|&(u, w)| (std::cmp::Reverse(r.preorder_index[highest[&(pid, u)]]), u, w));
    }

    // bag tree: b_f, then per child the secondary chain (left child only),
    // the primary copy and the child's subtree
    let mut b = Builder { bags: Vec::new(), parent: Vec::new(), depth: Vec::new(), origin: Vec::new() };
    let mut face_node = vec![NONE; faces.len()];
    let mut primary_above = vec![NONE; faces.len()];
    let mut secondary: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    let mut part_range = Vec::with_capacity(r.preorder.len());
    for order in &r.preorder {
        let start = b.bags.len();
        for &g in order {
            let f = r.parent[g];
            let mut attach = NONE;
            if f != NONE {
                attach = face_node[f];
                if r.left_child(f) == Some(g) {
                    for i in 0..bent[f].len() {
                        attach = b.push(faces[f].to_vec(), attach, BagOrigin::Secondary { face: faces[f], index: i + 1 });
                        secondary[f].push(attach);
                    }
                }
                attach = b.push(faces[f].to_vec(), attach, BagOrigin::Primary { face: faces[f], child: faces[g] });
                primary_above[g] = attach;
            }
            face_node[g] = b.push(faces[g].to_vec(), attach, BagOrigin::Original { face: faces[g] });
        }
        part_range.push(start..b.bags.len());
    }

    // lifting
    let mut top_node: HashMap<(usize, Vertex), usize> =
        highest.iter().map(|(&key, &f)| (key, face_node[f])).collect();
    let mut lift = |b: &mut Builder, pid: usize, z: Vertex, target: usize| -> Result<()> {
        let cur = top_node.get_mut(&(pid, z)).expect("vertex on a face of its part");
        if b.depth[target] >= b.depth[*cur] {
            return Ok(());
        }
        let mut node = *cur;
        while node != target {
            node = b.parent[node];
            if node == NONE {
                return Err(Error::certificate(format!("lift target of vertex {z} is not above its bags")));
            }
            b.add(node, z);
        }
        *cur = target;
        Ok(())
    };
    for route in &class.routes {
        if let EdgeRoute::Lineal { top, child, lower, .. } = *route {
            debug_assert_eq!(r.parent[child], top);
            lift(&mut b, r.split.part_of[top], lower, primary_above[child])?;
        }
    }
    for (f, list) in bent.iter().enumerate() {
        let pid = r.split.part_of[f];
        for (i, &(u, w)) in list.iter().enumerate() {
            lift(&mut b, pid, u, secondary[f][i])?;
            lift(&mut b, pid, w, face_node[f])?;
            for &s in &secondary[f][..=i] {
                b.add(s, w);
            }
        }
    }

    // join the parts at their first bags holding the splitting link
    let mut tree_edges: Vec<(usize, usize)> =
        (0..b.bags.len()).filter(|&i| b.parent[i] != NONE).map(|i| (b.parent[i], i)).collect();
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); t.n()];
    if !r.split.joins.is_empty() {
        for (i, bag) in b.bags.iter().enumerate() {
            for &z in bag {
                occurs[z as usize].push(i);
            }
        }
    }
    for j in &r.split.joins {
        let (x, y) = (j.link.lo(), j.link.hi());
        let (scan, other) =
            if occurs[x as usize].len() <= occurs[y as usize].len() { (x, y) } else { (y, x) };
        let pick = |pid: usize| {
            let range = &part_range[pid];
            let list = &occurs[scan as usize];
            list[list.partition_point(|&i| i < range.start)..]
                .iter()
                .copied()
                .take_while(|&i| i < range.end)
                .find(|&i| b.bags[i].contains(&other))
                .expect("face bag holds its link")
        };
        tree_edges.push((pick(j.parts[0]), pick(j.parts[1])));
    }

    let c = t.piercing_stats().triangle_pn;
    let (orig_cap, copy_cap) = (c / 2, c.div_ceil(2));
    for (i, bag) in b.bags.iter().enumerate() {
        let added = bag.len() - 3;
        let cap = if b.origin[i].is_copy() { copy_cap } else { orig_cap };
        if added > cap {
            return Err(Error::certificate(format!(
                "bag {i} ({:?}) gained {added} vertices, at most {cap} allowed for triangle piercing {c}",
                b.origin[i]
            )));
        }
    }
    let td = TreeDecomposition::new(b.bags, tree_edges, Some(b.origin));
    let report = validate_td(d, &td);
    if !report.valid {
        return Err(Error::certificate(format!("constructed decomposition is invalid: {report:?}")));
    }
    Ok(td)
}
