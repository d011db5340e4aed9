//! Triangulations of the outer cycle with bounded piercing numbers.
//!
//! A triangulation is a maximal set of pairwise non-intertwined inner links
//! plus the `n` outer links. A link is pierced by every graph edge intertwined
//! with it; the procedures in [`split`] choose links so that few edges pierce
//! each link (edge piercing number) and each face (triangle piercing number,
//! the sum over its three sides).

mod split;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::drawing::{link_kind, Edge, Link, LinkKind, Vertex};
use crate::error::{Error, Result};

pub use split::{
    triangulate, triangulate_min, triangulate_o2p, triangulate_strong, triangulate_weak, Method,
};

/// Maximum piercing numbers of a triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiercingStats {
    pub edge_pn: usize,
    pub triangle_pn: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    n: usize,
    inner_links: Vec<Link>,
    inner_piercing: Vec<usize>,
    faces: Vec<[Vertex; 3]>,
    face_piercing: Vec<usize>,
}

impl Triangulation {
    /// Assembles a triangulation from its faces and the piercing count of
    /// every inner link, then checks the structural invariants.
    pub fn from_faces(
        n: usize,
        mut faces: Vec<[Vertex; 3]>,
        inner_piercing: &HashMap<Edge, usize>,
    ) -> Result<Self> {
        for f in &mut faces {
            f.sort_unstable();
        }
        faces.sort_unstable();
        let mut pairs: Vec<Edge> = inner_piercing.keys().copied().collect();
        pairs.sort_unstable();
        let inner_links: Vec<Link> =
            pairs.iter().map(|&pair| Link { pair, kind: link_kind(pair, n) }).collect();
        let inner_piercing: Vec<usize> = pairs.iter().map(|p| inner_piercing[p]).collect();
        let mut t = Triangulation { n, inner_links, inner_piercing, faces, face_piercing: Vec::new() };
        t.face_piercing = t.faces.iter().map(|f| face_sides(f).iter().map(|s| t.link_piercing(s)).sum()).collect();
        t.validate()?;
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Inner links, sorted.
    pub fn inner_links(&self) -> &[Link] {
        &self.inner_links
    }

    /// Faces as sorted vertex triples, sorted lexicographically.
    pub fn faces(&self) -> &[[Vertex; 3]] {
        &self.faces
    }

    pub fn inner_link_index(&self, pair: &Edge) -> Option<usize> {
        self.inner_links.binary_search_by(|l| l.pair.cmp(pair)).ok()
    }

    /// Piercing count of the link on `pair`; outer links are never pierced.
    /// Pairs that are not links of this triangulation report 0.
    pub fn link_piercing(&self, pair: &Edge) -> usize {
        self.inner_link_index(pair).map_or(0, |i| self.inner_piercing[i])
    }

    pub fn inner_piercing(&self) -> &[usize] {
        &self.inner_piercing
    }

    pub fn face_piercing(&self) -> &[usize] {
        &self.face_piercing
    }

    pub fn is_link(&self, pair: &Edge) -> bool {
        link_kind(*pair, self.n) == LinkKind::Outer || self.inner_link_index(pair).is_some()
    }

    pub fn piercing_stats(&self) -> PiercingStats {
        PiercingStats {
            edge_pn: self.inner_piercing.iter().copied().max().unwrap_or(0),
            triangle_pn: self.face_piercing.iter().copied().max().unwrap_or(0),
        }
    }

    /// Checks face count, link count, pairwise non-intertwined inner links and
    /// that every face side is a link used by the right number of faces.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 3 {
            return Err(Error::certificate(format!("triangulation with n={n}")));
        }
        if self.faces.len() != n - 2 || self.inner_links.len() != n - 3 {
            return Err(Error::certificate(format!(
                "expected {} faces and {} inner links, got {} and {}",
                n - 2,
                n - 3,
                self.faces.len(),
                self.inner_links.len()
            )));
        }
        for l in &self.inner_links {
            if l.kind != LinkKind::Inner || l.b() as usize >= n {
                return Err(Error::certificate(format!("{} is not an inner link", l.pair)));
            }
        }
        // laminar check: visit by (lo asc, hi desc) and keep the open intervals
        let mut order: Vec<&Link> = self.inner_links.iter().collect();
        order.sort_by_key(|l| (l.a(), std::cmp::Reverse(l.b())));
        let mut open: Vec<Vertex> = Vec::new();
        for l in order {
            while open.last().is_some_and(|&hi| hi <= l.a()) {
                open.pop();
            }
            if let Some(&hi) = open.last() {
                if l.b() > hi {
                    return Err(Error::certificate(format!("inner link {} crosses another link", l.pair)));
                }
            }
            open.push(l.b());
        }
        let mut uses: HashMap<Edge, usize> = HashMap::new();
        for f in &self.faces {
            if f[0] == f[1] || f[1] == f[2] || f[2] as usize >= n {
                return Err(Error::certificate(format!("degenerate face {f:?}")));
            }
            for s in face_sides(f) {
                *uses.entry(s).or_default() += 1;
            }
        }
        for (s, c) in uses {
            let want = match link_kind(s, n) {
                LinkKind::Outer => 1,
                LinkKind::Inner if self.inner_link_index(&s).is_some() => 2,
                LinkKind::Inner => {
                    return Err(Error::certificate(format!("face side {s} is not a link")));
                }
            };
            if c != want {
                return Err(Error::certificate(format!("link {s} borders {c} faces")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self, trace: &SplitTrace) -> TriangulationJson {
        let stats = self.piercing_stats();
        TriangulationJson {
            n: self.n,
            inner_links: self.inner_links.iter().map(|l| l.pair).collect(),
            edge_pn: stats.edge_pn,
            triangle_pn: stats.triangle_pn,
            trace: trace.records.clone(),
        }
    }
}

pub fn piercing_stats(t: &Triangulation) -> PiercingStats {
    t.piercing_stats()
}

pub(crate) fn face_sides(f: &[Vertex; 3]) -> [Edge; 3] {
    [Edge::new(f[0], f[1]), Edge::new(f[1], f[2]), Edge::new(f[0], f[2])]
}

/// Which rule picked the split vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "no-piercing")]
    NoPiercing,
    #[serde(rename = "middle-endpoint")]
    MiddleEndpoint,
    #[serde(rename = "disjoint-ê")]
    DisjointHat,
    #[serde(rename = "shares-u")]
    SharesU,
    #[serde(rename = "shares-v")]
    SharesV,
    #[serde(rename = "heavy-first-case")]
    HeavyFirstCase,
    #[serde(rename = "heavy-second-case")]
    HeavySecondCase,
}

/// One split of the recursive procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub active: Edge,
    pub active_piercing: usize,
    pub case: CaseTag,
    pub split: Vertex,
    pub new_links: [Edge; 2],
    pub piercing: [usize; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SplitTrace {
    pub records: Vec<SplitRecord>,
}

impl SplitTrace {
    /// Rebuilds the triangulation from the recorded splits alone.
    pub fn replay(&self, n: usize) -> Result<Triangulation> {
        let mut faces = Vec::with_capacity(self.records.len());
        let mut pierce = HashMap::new();
        for r in &self.records {
            let (u, v, w) = (r.active.lo(), r.active.hi(), r.split);
            if !(u < w && w < v) {
                return Err(Error::certificate(format!("split vertex {w} outside active link {}", r.active)));
            }
            if r.new_links != [Edge::new(u, w), Edge::new(w, v)] {
                return Err(Error::certificate(format!("inconsistent new links in record {r:?}")));
            }
            faces.push([u, w, v]);
            for (l, &p) in r.new_links.iter().zip(&r.piercing) {
                if link_kind(*l, n) == LinkKind::Inner {
                    pierce.insert(*l, p);
                }
            }
        }
        Triangulation::from_faces(n, faces, &pierce)
    }
}

/// Wire format of a triangulation run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub n: usize,
    pub inner_links: Vec<Edge>,
    pub edge_pn: usize,
    pub triangle_pn: usize,
    pub trace: Vec<SplitRecord>,
}
