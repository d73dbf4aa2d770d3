//! Immutable rooted unordered trees and their level structure.
//!
//! Nodes are dense ids `0..n`. Children are stored in a single flat buffer
//! (compressed sparse rows), ordered by ascending child id. That order exists
//! only to make output deterministic: every isomorphism routine in this crate
//! treats siblings as unordered.

use std::collections::VecDeque;

use thiserror::Error;

/// Dense node identifier, always in `0..tree.len()`.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least one node")]
    Empty,
    #[error("more than one root: nodes {first} and {second} have no parent")]
    MultipleRoots { first: NodeId, second: NodeId },
    #[error("parent relation has a cycle (some node never reaches the root)")]
    CycleDetected,
    #[error("node {node} names parent {parent}, but there are only {len} nodes")]
    IndexOutOfRange {
        node: NodeId,
        parent: NodeId,
        len: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    child_start: Vec<usize>,
    child_ids: Vec<NodeId>,
    depth: usize,
}

impl Tree {
    /// A tree with a single node.
    pub fn singleton() -> Self {
        Self {
            root: 0,
            parent: vec![None],
            child_start: vec![0, 0],
            child_ids: Vec::new(),
            depth: 0,
        }
    }

    /// Builds a tree from `parents[i]`, the parent of node `i` (`None` for the root).
    pub fn from_parents(parents: &[Option<NodeId>]) -> Result<Self, TreeError> {
        let n = parents.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }

        let mut root = None;
        let mut child_count = vec![0usize; n];
        for (node, parent) in parents.iter().enumerate() {
            match *parent {
                None => match root {
                    None => root = Some(node),
                    Some(first) => return Err(TreeError::MultipleRoots { first, second: node }),
                },
                Some(p) if p >= n => {
                    return Err(TreeError::IndexOutOfRange {
                        node,
                        parent: p,
                        len: n,
                    })
                }
                Some(p) => child_count[p] += 1,
            }
        }
        // Every node has a parent, so following parents must loop.
        let root = root.ok_or(TreeError::CycleDetected)?;

        let mut child_start = Vec::with_capacity(n + 1);
        child_start.push(0);
        for count in &child_count {
            child_start.push(child_start.last().unwrap() + count);
        }
        // Filling in ascending node order leaves each child list sorted.
        let mut cursor = child_start[..n].to_vec();
        let mut child_ids = vec![0; n - 1];
        for (node, parent) in parents.iter().enumerate() {
            if let Some(p) = *parent {
                child_ids[cursor[p]] = node;
                cursor[p] += 1;
            }
        }

        let mut tree = Self {
            root,
            parent: parents.to_vec(),
            child_start,
            child_ids,
            depth: 0,
        };

        // Nodes on a cycle are unreachable from the root.
        let mut reached = 0usize;
        let mut depth = 0usize;
        let mut queue = VecDeque::from([(root, 0usize)]);
        while let Some((u, d)) = queue.pop_front() {
            reached += 1;
            depth = depth.max(d);
            queue.extend(tree.children(u).iter().map(|&v| (v, d + 1)));
        }
        if reached != n {
            return Err(TreeError::CycleDetected);
        }
        tree.depth = depth;
        Ok(tree)
    }

    /// Number of nodes, `#T`.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Always false: trees have at least one node.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        self.parent[u]
    }

    pub fn parents(&self) -> &[Option<NodeId>] {
        &self.parent
    }

    pub fn children(&self, u: NodeId) -> &[NodeId] {
        &self.child_ids[self.child_start[u]..self.child_start[u + 1]]
    }

    /// Number of children of `u`.
    pub fn node_degree(&self, u: NodeId) -> usize {
        self.child_start[u + 1] - self.child_start[u]
    }

    pub fn is_leaf(&self, u: NodeId) -> bool {
        self.node_degree(u) == 0
    }

    /// `deg(T)`: the largest number of children of any node.
    pub fn degree(&self) -> usize {
        (0..self.len()).map(|u| self.node_degree(u)).max().unwrap_or(0)
    }

    /// `depth(T)`: length of the longest root-to-node path.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        (0..self.len()).filter(|&u| self.is_leaf(u)).collect()
    }

    pub fn level_index(&self) -> LevelIndex {
        LevelIndex::new(self)
    }
}

/// Nodes grouped by level, where `level(u) = depth(T) - depth(u)`.
///
/// Level 0 holds the deepest nodes; level `depth(T)` holds only the root.
/// Within a level, nodes appear in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelIndex {
    nodes: Vec<NodeId>,
    // degrees[i] = number of children of nodes[i].
    degrees: Vec<usize>,
    // level_start[d]..level_start[d + 1] indexes into `nodes`.
    level_start: Vec<usize>,
    visits: usize,
}

impl LevelIndex {
    fn new(tree: &Tree) -> Self {
        let n = tree.len();
        let mut order = Vec::with_capacity(n);
        let mut bfs_degrees = Vec::with_capacity(n);
        // Depth boundaries of the BFS order: depth k occupies bfs_start[k]..bfs_start[k + 1].
        let mut bfs_start = vec![0usize];
        order.push(tree.root());
        let mut head = 0;
        let mut depth_end = 1;
        let mut visits = 0;
        while head < order.len() {
            if head == depth_end {
                bfs_start.push(head);
                depth_end = order.len();
            }
            let u = order[head];
            visits += 1;
            let children = tree.children(u);
            bfs_degrees.push(children.len());
            order.extend_from_slice(children);
            head += 1;
        }
        bfs_start.push(n);

        // Reverse the depth groups so level 0 (deepest) comes first.
        let groups = bfs_start.len() - 1;
        let mut nodes = Vec::with_capacity(n);
        let mut degrees = Vec::with_capacity(n);
        let mut level_start = Vec::with_capacity(groups + 1);
        level_start.push(0);
        for g in (0..groups).rev() {
            nodes.extend_from_slice(&order[bfs_start[g]..bfs_start[g + 1]]);
            degrees.extend_from_slice(&bfs_degrees[bfs_start[g]..bfs_start[g + 1]]);
            level_start.push(nodes.len());
        }
        Self {
            nodes,
            degrees,
            level_start,
            visits,
        }
    }

    /// `depth(T)`; levels run from 0 to this value inclusive.
    pub fn depth(&self) -> usize {
        self.level_start.len() - 2
    }

    /// `T^d`.
    pub fn level(&self, d: usize) -> &[NodeId] {
        &self.nodes[self.level_start[d]..self.level_start[d + 1]]
    }

    /// Position of the first node of `T^d` in the concatenation of all levels.
    ///
    /// Because levels keep breadth-first order, the children of consecutive
    /// nodes of `T^d` form consecutive runs of `T^{d-1}`: the children of the
    /// `i`-th node of `T^d` are the next `level_degrees(d)[i]` nodes of
    /// `T^{d-1}` after those of its predecessors.
    pub fn level_offset(&self, d: usize) -> usize {
        self.level_start[d]
    }

    /// Child counts of the nodes of `T^d`, aligned with [`LevelIndex::level`].
    pub fn level_degrees(&self, d: usize) -> &[usize] {
        &self.degrees[self.level_start[d]..self.level_start[d + 1]]
    }

    /// All nodes, level 0 first.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn levels(&self) -> impl ExactSizeIterator<Item = &[NodeId]> + '_ {
        (0..self.depth() + 1).map(move |d| self.level(d))
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels().map(<[NodeId]>::len).collect()
    }

    #[cfg(test)]
    pub(crate) fn visits(&self) -> usize {
        self.visits
    }
}
