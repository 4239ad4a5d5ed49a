use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// In-order number of a vertex (1-based).
///
/// Leaves are numbered left to right with strictly increasing numbers, and
/// every internal vertex is numbered right after its first child subtree, so
/// in a strictly binary tree leaf `i` carries `2i - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexNumber(pub u32);

impl VertexNumber {
    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for VertexNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct Node {
    pub(crate) parent: Option<usize>,
    pub(crate) children: Vec<usize>,
    pub(crate) label: Option<String>,
}

/// A rooted, ordered tree whose leaves carry genomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhyloTree {
    nodes: Vec<Node>,
    root: usize,
    /// Arena ids of the leaves, left to right.
    leaves: Vec<usize>,
    /// In-order number of each arena id.
    numbers: Vec<u32>,
    /// Arena id of each vertex number (index `number - 1`).
    by_number: Vec<usize>,
    depths: Vec<u32>,
}

impl PhyloTree {
    /// Assembles a tree from an arena whose parent/child links are already
    /// consistent, and assigns vertex numbers.
    pub(crate) fn from_arena(nodes: Vec<Node>, root: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptyTree);
        }
        let n = nodes.len();
        let mut numbers = vec![0u32; n];
        let mut by_number = Vec::with_capacity(n);
        let mut depths = vec![0u32; n];
        let mut leaves = Vec::new();
        let mut seen = vec![false; n];

        // (vertex, index of the next child to descend into)
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        seen[root] = true;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let children = &nodes[v].children;
            if children.is_empty() {
                numbers[v] = by_number.len() as u32 + 1;
                by_number.push(v);
                leaves.push(v);
                stack.pop();
                continue;
            }
            if *next == 1 {
                numbers[v] = by_number.len() as u32 + 1;
                by_number.push(v);
            }
            if *next < children.len() {
                let c = children[*next];
                *next += 1;
                if seen[c] || nodes[c].parent != Some(v) {
                    return Err(Error::Newick {
                        offset: 0,
                        msg: format!("vertex {c} is not a tree child of {v}"),
                    });
                }
                seen[c] = true;
                depths[c] = depths[v] + 1;
                stack.push((c, 0));
            } else {
                stack.pop();
            }
        }
        if by_number.len() != n {
            return Err(Error::Newick {
                offset: 0,
                msg: "tree arena has unreachable vertices".into(),
            });
        }

        let mut labels = HashSet::new();
        for &leaf in &leaves {
            match nodes[leaf].label.as_deref() {
                Some(l) if !l.is_empty() => {
                    if !labels.insert(l) {
                        return Err(Error::DuplicateLeaf(l.to_owned()));
                    }
                }
                _ => {
                    return Err(Error::Newick {
                        offset: 0,
                        msg: "leaf without a label".into(),
                    })
                }
            }
        }

        Ok(Self {
            nodes,
            root,
            leaves,
            numbers,
            by_number,
            depths,
        })
    }

    fn id(&self, v: VertexNumber) -> Result<usize> {
        (v.0 as usize)
            .checked_sub(1)
            .and_then(|i| self.by_number.get(i).copied())
            .ok_or(Error::UnknownVertex(v.0))
    }

    fn number(&self, id: usize) -> VertexNumber {
        VertexNumber(self.numbers[id])
    }

    pub fn root(&self) -> VertexNumber {
        self.number(self.root)
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of leaves (genomes), `g`.
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn contains(&self, v: VertexNumber) -> bool {
        self.id(v).is_ok()
    }

    /// Leaf vertex numbers, left to right.
    pub fn leaves(&self) -> impl Iterator<Item = VertexNumber> + '_ {
        self.leaves.iter().map(|&id| self.number(id))
    }

    /// Vertex number of the leaf with the given 1-based ordinal.
    pub fn leaf_vertex(&self, ordinal: usize) -> Option<VertexNumber> {
        ordinal
            .checked_sub(1)
            .and_then(|i| self.leaves.get(i))
            .map(|&id| self.number(id))
    }

    /// Label of the leaf with the given 1-based ordinal.
    pub fn leaf_label(&self, ordinal: usize) -> Option<&str> {
        let id = *self.leaves.get(ordinal.checked_sub(1)?)?;
        self.nodes[id].label.as_deref()
    }

    /// 1-based ordinal of a leaf vertex.
    pub fn leaf_ordinal(&self, v: VertexNumber) -> Option<usize> {
        let id = self.id(v).ok()?;
        if !self.nodes[id].children.is_empty() {
            return None;
        }
        self.leaves.binary_search_by_key(&v, |&l| self.number(l)).ok().map(|i| i + 1)
    }

    pub fn label(&self, v: VertexNumber) -> Option<&str> {
        self.id(v).ok().and_then(|id| self.nodes[id].label.as_deref())
    }

    pub fn parent(&self, v: VertexNumber) -> Option<VertexNumber> {
        let id = self.id(v).ok()?;
        self.nodes[id].parent.map(|p| self.number(p))
    }

    pub fn children(&self, v: VertexNumber) -> Vec<VertexNumber> {
        match self.id(v) {
            Ok(id) => self.nodes[id].children.iter().map(|&c| self.number(c)).collect(),
            Err(_) => Vec::new(),
        }
    }

    /// Edge distance from the root.
    pub fn depth(&self, v: VertexNumber) -> Option<u32> {
        self.id(v).ok().map(|id| self.depths[id])
    }

    pub fn is_leaf(&self, v: VertexNumber) -> bool {
        self.id(v).map(|id| self.nodes[id].children.is_empty()).unwrap_or(false)
    }

    /// Euler tour as `(depth, vertex)` pairs: every vertex is emitted on entry
    /// and again after each of its children returns, `2V - 1` entries total.
    pub(crate) fn euler_tour(&self) -> Vec<(u32, VertexNumber)> {
        let mut tour = Vec::with_capacity(2 * self.nodes.len() - 1);
        let mut stack: Vec<(usize, usize)> = vec![(self.root, 0)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            tour.push((self.depths[v], self.number(v)));
            if *next < self.nodes[v].children.len() {
                let c = self.nodes[v].children[*next];
                *next += 1;
                stack.push((c, 0));
            } else {
                stack.pop();
            }
        }
        tour
    }
}
