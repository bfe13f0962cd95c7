//! Undirected simple graphs with 0-based node indices.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// An immutable undirected simple graph.
///
/// No self-loops, no duplicate edges. Neighbor lists are sorted, so all
/// traversals are deterministic. Once built, a `Graph` is read-only and safe
/// to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    degrees: Vec<usize>,
}

impl Graph {
    /// Build a graph from an edge list. Duplicate pairs (in either
    /// orientation) collapse to a single edge; self-loops and out-of-range
    /// indices are rejected.
    pub fn from_edge_list(pairs: &[(usize, usize)], n: usize) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in pairs {
            if a >= n {
                return Err(Error::NodeOutOfRange { index: a, n });
            }
            if b >= n {
                return Err(Error::NodeOutOfRange { index: b, n });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let degrees = adj.iter().map(Vec::len).collect();
        Ok(Self { n, edges, adj, degrees })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Degree in the self-loop augmented graph: `d_i + 1`.
    pub fn aug_degree(&self, i: usize) -> usize {
        self.degrees[i] + 1
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adj[a].binary_search(&b).is_ok()
    }

    /// All nodes within `depth` hops of `i`, including `i` itself.
    ///
    /// `depth = 0` yields `{i}`. Computed by breadth-first expansion.
    pub fn neighborhood(&self, i: usize, depth: usize) -> Result<NodeSet> {
        if i >= self.n {
            return Err(Error::NodeOutOfRange { index: i, n: self.n });
        }
        let mut seen = vec![false; self.n];
        seen[i] = true;
        let mut frontier = VecDeque::from([(i, 0usize)]);
        let mut members = vec![i];
        while let Some((u, d)) = frontier.pop_front() {
            if d == depth {
                continue;
            }
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    members.push(v);
                    frontier.push_back((v, d + 1));
                }
            }
        }
        members.sort_unstable();
        Ok(NodeSet { members })
    }

    /// True iff a BFS from node 0 reaches every node. Requires `n >= 1`.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}

/// A sorted, deduplicated set of node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    members: Vec<usize>,
}

impl NodeSet {
    pub fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    /// True iff every member of `self` is also in `other`.
    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }
}
