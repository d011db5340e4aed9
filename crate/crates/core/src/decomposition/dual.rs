//! Weak dual of a triangulation and its split along unpierced inner links.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::drawing::{Edge, Vertex};
use crate::triangulation::{face_sides, Triangulation};

/// One node per face, adjacent when two faces share an inner link. Face
/// indices follow [`Triangulation::faces`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakDual {
    faces: Vec<[Vertex; 3]>,
    adj: Vec<Vec<(usize, Edge)>>,
}

impl WeakDual {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[[Vertex; 3]] {
        &self.faces
    }

    /// Neighbouring faces with the shared link, by increasing face index.
    pub fn neighbours(&self, f: usize) -> &[(usize, Edge)] {
        &self.adj[f]
    }

    /// Dual edges `(f, g, link)` with `f < g`.
    pub fn edges(&self) -> Vec<(usize, usize, Edge)> {
        let mut out = Vec::with_capacity(self.len().saturating_sub(1));
        for (f, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&(g, _)| f < g).map(|&(g, l)| (f, g, l)));
        }
        out
    }
}

pub fn weak_dual(t: &Triangulation) -> WeakDual {
    let faces = t.faces().to_vec();
    let mut first: HashMap<Edge, usize> = HashMap::with_capacity(t.inner_links().len());
    let mut adj = vec![Vec::new(); faces.len()];
    for (f, face) in faces.iter().enumerate() {
        for side in face_sides(face) {
            if t.inner_link_index(&side).is_none() {
                continue;
            }
            if let Some(g) = first.remove(&side) {
                adj[f].push((g, side));
                adj[g].push((f, side));
            } else {
                first.insert(side, f);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    WeakDual { faces, adj }
}

/// A maximal set of faces connected through pierced inner links.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    /// Face indices, sorted.
    pub faces: Vec<usize>,
    /// The leaf of the part's dual with the smallest vertex triple.
    pub root: usize,
}

/// Where two parts meet: an unpierced inner link and the faces on its sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Join {
    pub link: Edge,
    pub faces: [usize; 2],
    pub parts: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitParts {
    /// Ordered by smallest face index.
    pub parts: Vec<Part>,
    /// Sorted by link. Parts and joins form a tree.
    pub joins: Vec<Join>,
    /// Part index of every face.
    pub part_of: Vec<usize>,
}

pub fn split_at_unpierced_links(t: &Triangulation) -> SplitParts {
    split_dual(t, &weak_dual(t))
}

pub(crate) fn split_dual(t: &Triangulation, dual: &WeakDual) -> SplitParts {
    let m = dual.len();
    let mut part_of = vec![usize::MAX; m];
    let mut parts = Vec::new();
    for start in 0..m {
        if part_of[start] != usize::MAX {
            continue;
        }
        let id = parts.len();
        let mut faces = vec![start];
        part_of[start] = id;
        let mut i = 0;
        while i < faces.len() {
            let f = faces[i];
            i += 1;
            for &(g, link) in dual.neighbours(f) {
                if part_of[g] == usize::MAX && t.link_piercing(&link) > 0 {
                    part_of[g] = id;
                    faces.push(g);
                }
            }
        }
        faces.sort_unstable();
        let degree = |f: usize| dual.neighbours(f).iter().filter(|&&(g, _)| part_of[g] == id).count();
        let root = faces.iter().copied().find(|&f| degree(f) <= 1).expect("a finite tree has a leaf");
        parts.push(Part { faces, root });
    }
    let mut joins: Vec<Join> = dual
        .edges()
        .into_iter()
        .filter(|&(f, g, _)| part_of[f] != part_of[g])
        .map(|(f, g, link)| Join { link, faces: [f, g], parts: [part_of[f], part_of[g]] })
        .collect();
    joins.sort_by_key(|j| j.link);
    SplitParts { parts, joins, part_of }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::ConvexDrawing;
    use crate::triangulation::triangulate_strong;

    #[test]
    fn single_face() {
        let (t, _) = triangulate_strong(&ConvexDrawing::cycle(3).unwrap(), 1).unwrap();
        let dual = weak_dual(&t);
        assert_eq!(dual.len(), 1);
        assert!(dual.edges().is_empty());
    }

    #[test]
    fn cycle_dual_is_a_tree_and_splits_into_faces() {
        let (t, _) = triangulate_strong(&ConvexDrawing::cycle(6).unwrap(), 1).unwrap();
        let dual = weak_dual(&t);
        assert_eq!(dual.len(), 4);
        assert_eq!(dual.edges().len(), 3);
        let split = split_at_unpierced_links(&t);
        assert_eq!(split.parts.len(), 4);
        assert_eq!(split.joins.len(), 3);
        assert!(split.parts.iter().all(|p| p.faces.len() == 1));
    }

    #[test]
    fn fan_dual_is_a_path() {
        let faces = (1..5).map(|i| [0, i, i + 1]).collect();
        let pierce = (2..5).map(|i| (Edge::new(0, i), 0)).collect();
        let t = Triangulation::from_faces(6, faces, &pierce).unwrap();
        let dual = weak_dual(&t);
        let degrees: Vec<usize> = (0..4).map(|f| dual.neighbours(f).len()).collect();
        assert_eq!(degrees, vec![1, 2, 2, 1]);
    }

    #[test]
    fn k4_is_one_part() {
        let (t, _) = triangulate_strong(&ConvexDrawing::complete(4), 1).unwrap();
        let split = split_at_unpierced_links(&t);
        assert_eq!(split.parts.len(), 1);
        assert!(split.joins.is_empty());
        assert_eq!(split.parts[0].faces.len(), 2);
    }

    #[test]
    fn two_k4_blocks_split() {
        // two crossing pairs on either side of the unpierced chord {0,3}
        let d = ConvexDrawing::new(6, [(0, 2), (1, 3), (3, 5), (4, 0), (0, 3)]).unwrap();
        let (t, _) = triangulate_strong(&d, 1).unwrap();
        let split = split_at_unpierced_links(&t);
        assert!(split.parts.len() >= 2);
        for j in &split.joins {
            assert_eq!(t.link_piercing(&j.link), 0);
            assert_ne!(j.parts[0], j.parts[1]);
        }
        assert_eq!(split.joins.len(), split.parts.len() - 1);
    }
}
