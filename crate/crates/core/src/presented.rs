//! Finitely presented groupoids: a quiver of generating edges plus closed-path
//! relations, with one 2-cell between any two parallel 1-maps.
//!
//! Characters are handled at the level of generators. A 1-character is a value
//! per edge, and it descends from the free groupoid exactly when every relation
//! word sums to zero. The morphism sets themselves are never enumerated; with
//! free loops they are infinite.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    objects: Vec<String>,
    edges: Vec<Edge>,
}

impl Quiver {
    /// Edges are `(name, source object, target object)`.
    pub fn new<O, E>(objects: O, edges: E) -> Result<Self>
    where
        O: IntoIterator,
        O::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate object `{o}`"
                )));
            }
        }
        let mut names = HashMap::new();
        let mut out = Vec::new();
        for (name, src, dst) in edges {
            if names.insert(name.clone(), out.len()).is_some() {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate edge `{name}`"
                )));
            }
            let lookup = |o: &str| {
                object_index.get(o).copied().ok_or_else(|| {
                    Error::InvalidPresentation(format!("edge `{name}` has unknown endpoint `{o}`"))
                })
            };
            let (src, dst) = (lookup(&src)?, lookup(&dst)?);
            out.push(Edge { name, src, dst });
        }
        Ok(Self {
            objects,
            edges: out,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }
}

/// A closed path of generators, each letter an edge with exponent `±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationWord {
    letters: Vec<(usize, i8)>,
}

impl RelationWord {
    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedGroupoid {
    quiver: Quiver,
    relations: Vec<RelationWord>,
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl PresentedGroupoid {
    /// Checks that every relation is a composable, closed path. Letters are
    /// `(edge name, ±1)`.
    pub fn validate(quiver: Quiver, relations: &[Vec<(String, i32)>]) -> Result<Self> {
        let mut words = Vec::with_capacity(relations.len());
        for (r, word) in relations.iter().enumerate() {
            let mut letters = Vec::with_capacity(word.len());
            for (pos, (name, exp)) in word.iter().enumerate() {
                let edge = quiver.edge_index(name).ok_or_else(|| {
                    Error::InvalidPresentation(format!(
                        "relation {r}, letter {pos}: unknown edge `{name}`"
                    ))
                })?;
                let exp: i8 = match exp {
                    1 => 1,
                    -1 => -1,
                    _ => {
                        return Err(Error::InvalidPresentation(format!(
                            "relation {r}, letter {pos}: exponent {exp} is not ±1"
                        )))
                    }
                };
                letters.push((edge, exp));
            }
            let ends = |(edge, exp): (usize, i8)| {
                let e = &quiver.edges[edge];
                if exp > 0 {
                    (e.src, e.dst)
                } else {
                    (e.dst, e.src)
                }
            };
            for pos in 1..letters.len() {
                let prev_end = ends(letters[pos - 1]).1;
                let start = ends(letters[pos]).0;
                if prev_end != start {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {r}, letter {pos}: not composable, starts at `{}` but the path is at `{}`",
                        quiver.objects[start], quiver.objects[prev_end]
                    )));
                }
            }
            if let (Some(&first), Some(&last)) = (letters.first(), letters.last()) {
                if ends(first).0 != ends(last).1 {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {r}: not closed, starts at `{}` and ends at `{}`",
                        quiver.objects[ends(first).0],
                        quiver.objects[ends(last).1]
                    )));
                }
            }
            words.push(RelationWord { letters });
        }
        let (component_of, components) = connected_components(&quiver);
        Ok(Self {
            quiver,
            relations: words,
            component_of,
            components,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[RelationWord] {
        &self.relations
    }

    /// Object indices per connected component, ordered by lowest object.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, object: usize) -> usize {
        self.component_of[object]
    }

    /// Rows are relations, columns edges, entries signed exponent sums.
    pub fn relation_matrix(&self) -> SparseMatrix {
        let triplets = self.relations.iter().enumerate().flat_map(|(r, w)| {
            w.letters
                .iter()
                .map(move |&(edge, exp)| (r, edge, i64::from(exp)))
        });
        SparseMatrix::from_int_triplets(self.relations.len(), self.quiver.edges.len(), triplets)
            .unwrap_or_else(|_| unreachable!("letters reference validated edges"))
    }

    /// Tree edges per component: breadth-first from the lowest object, scanning
    /// edges in declaration order.
    pub fn spanning_forest(&self) -> Vec<Vec<usize>> {
        self.forest().trees
    }

    pub(crate) fn forest(&self) -> Forest {
        let n = self.quiver.objects.len();
        let mut parent: Vec<Option<(usize, i64)>> = vec![None; n];
        let mut visited = vec![false; n];
        let mut trees = Vec::with_capacity(self.components.len());
        for comp in &self.components {
            let mut tree = Vec::new();
            let root = comp[0];
            visited[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for (i, e) in self.quiver.edges.iter().enumerate() {
                    let (next, sign) = if e.src == x {
                        (e.dst, 1)
                    } else if e.dst == x {
                        (e.src, -1)
                    } else {
                        continue;
                    };
                    if !visited[next] {
                        visited[next] = true;
                        parent[next] = Some((i, sign));
                        tree.push(i);
                        queue.push_back(next);
                    }
                }
            }
            trees.push(tree);
        }
        Forest { parent, trees }
    }
}

/// Free-function form of [`PresentedGroupoid::validate`].
pub fn validate_presentation(
    quiver: Quiver,
    relations: &[Vec<(String, i32)>],
) -> Result<PresentedGroupoid> {
    PresentedGroupoid::validate(quiver, relations)
}

/// BFS forest with parent pointers: `parent[x] = (edge, +1)` when the edge was
/// followed forwards into `x`, `-1` when backwards.
pub(crate) struct Forest {
    pub parent: Vec<Option<(usize, i64)>>,
    pub trees: Vec<Vec<usize>>,
}

impl Forest {
    /// Signed edge multiset of the tree path from the root to `x`.
    pub fn path_from_root(&self, edges: &[Edge], mut x: usize) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        while let Some((e, sign)) = self.parent[x] {
            out.push((e, sign));
            x = if sign > 0 { edges[e].src } else { edges[e].dst };
        }
        out
    }
}

fn connected_components(q: &Quiver) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = q.objects.len();
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for e in &q.edges {
        let (a, b) = (find(&mut root, e.src), find(&mut root, e.dst));
        if a != b {
            root[a.max(b)] = a.min(b);
        }
    }
    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut id_of_root = HashMap::new();
    for (x, slot) in component_of.iter_mut().enumerate() {
        let r = find(&mut root, x);
        let id = *id_of_root.entry(r).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        *slot = id;
        components[id].push(x);
    }
    (component_of, components)
}

/// `r` loops `e1..er` on a single object, no relations.
pub fn rose(petals: usize) -> PresentedGroupoid {
    let edges = (1..=petals).map(|i| (format!("e{i}"), "x".to_string(), "x".to_string()));
    let q = Quiver::new(["x"], edges).unwrap_or_else(|_| unreachable!());
    PresentedGroupoid::validate(q, &[]).unwrap_or_else(|_| unreachable!())
}

/// Two objects `x, y` joined by parallel edges `a, b: x → y`, no relations.
pub fn parallel_pair() -> PresentedGroupoid {
    let q = Quiver::new(
        ["x", "y"],
        [
            ("a".to_string(), "x".to_string(), "y".to_string()),
            ("b".to_string(), "x".to_string(), "y".to_string()),
        ],
    )
    .unwrap_or_else(|_| unreachable!());
    PresentedGroupoid::validate(q, &[]).unwrap_or_else(|_| unreachable!())
}
