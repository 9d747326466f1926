//! Balanced binary separator tree over the vertices and the partial order
//! it induces.
//!
//! Every tree node owns a non-empty, id-sorted list of vertices. A vertex
//! `u` is an ancestor of `v` when `u`'s node is an ancestor-or-self of `v`'s
//! node and, within a shared node, `u` does not come after `v`. `τ(v)` counts
//! the strict ancestors of `v`, so the ancestors of `v` are exactly the
//! vertices with ranks `0..=τ(v)` along the root path of `v`'s node.

mod flow;
mod separator;

pub use separator::{find_separator, Separator};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{Graph, VertexId};

pub type NodeId = u32;

pub const MAX_DEPTH: usize = 64;
pub const DEFAULT_BETA: f64 = 0.2;
pub const DEFAULT_LEAF_SIZE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left = 0,
    Right = 1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    /// Root path, one bit per level, least significant bit first.
    pub bits: u64,
    pub depth: u8,
    pub parent: Option<NodeId>,
    pub children: [Option<NodeId>; 2],
    pub members: Vec<VertexId>,
    /// Number of vertices in strict ancestor nodes.
    pub base: u32,
}

impl TreeNode {
    pub fn end(&self) -> u32 {
        self.base + self.members.len() as u32
    }

    pub fn side(&self) -> Option<Side> {
        self.depth.checked_sub(1).map(|d| {
            if self.bits >> d & 1 == 1 {
                Side::Right
            } else {
                Side::Left
            }
        })
    }

    pub fn bit_string(&self) -> String {
        (0..self.depth)
            .map(|d| if self.bits >> d & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

#[inline]
fn common_prefix(a: u64, la: u8, b: u64, lb: u8) -> usize {
    ((a ^ b).trailing_zeros() as usize)
        .min(la as usize)
        .min(lb as usize)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionConfig {
    pub beta: f64,
    /// Subgraphs with at most this many vertices become a single leaf.
    pub leaf_size: usize,
    /// Use vertex coordinates (when every vertex has one) for inertial cuts.
    pub use_coordinates: bool,
    pub execution: Execution,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            beta: DEFAULT_BETA,
            leaf_size: DEFAULT_LEAF_SIZE,
            use_coordinates: true,
            execution: Execution::Sequential,
        }
    }
}

impl PartitionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta <= 0.5) {
            return Err(Error::InvalidBeta(self.beta));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryHierarchy {
    beta: f64,
    leaf_size: usize,
    nodes: Vec<TreeNode>,
    node_of: Vec<NodeId>,
    position: Vec<u32>,
    tau: Vec<u32>,
    /// For node `x`, `path[path_start[x] + d]` is its ancestor node at depth `d`.
    path_start: Vec<u32>,
    path: Vec<NodeId>,
    /// `end()` of the node stored at the same index of `path`.
    path_end: Vec<u32>,
}

impl QueryHierarchy {
    pub fn num_vertices(&self) -> usize {
        self.tau.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn node_of(&self, v: VertexId) -> NodeId {
        self.node_of[v as usize]
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id as usize]
    }

    pub fn position(&self, v: VertexId) -> u32 {
        self.position[v as usize]
    }

    #[inline]
    pub fn tau(&self, v: VertexId) -> u32 {
        self.tau[v as usize]
    }

    pub fn taus(&self) -> &[u32] {
        &self.tau
    }

    pub fn height(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.depth as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn max_tau(&self) -> u32 {
        self.tau.iter().copied().max().unwrap_or(0)
    }

    /// Whether `u` precedes-or-equals `v` in the partial order.
    pub fn is_ancestor(&self, u: VertexId, v: VertexId) -> bool {
        let (nu, nv) = (self.node_of(u), self.node_of(v));
        if nu == nv {
            return self.position(u) <= self.position(v);
        }
        let (a, b) = (&self.nodes[nu as usize], &self.nodes[nv as usize]);
        a.depth < b.depth && common_prefix(a.bits, a.depth, b.bits, b.depth) == a.depth as usize
    }

    pub fn comparable(&self, u: VertexId, v: VertexId) -> bool {
        self.is_ancestor(u, v) || self.is_ancestor(v, u)
    }

    /// Number of common ancestors of `s` and `t`; they occupy label
    /// positions `0..k` of both vertices.
    #[inline]
    pub fn common_ancestor_count(&self, s: VertexId, t: VertexId) -> usize {
        let (ns, nt) = (self.node_of(s) as usize, self.node_of(t) as usize);
        let (a, b) = (&self.nodes[ns], &self.nodes[nt]);
        let lcp = common_prefix(a.bits, a.depth, b.bits, b.depth);
        let end = self.path_end[self.path_start[ns] as usize + lcp];
        (self.tau(s) + 1).min(self.tau(t) + 1).min(end) as usize
    }

    /// The ancestor of `v` with rank `i` (`i <= τ(v)`).
    pub fn ancestor_at(&self, v: VertexId, i: u32) -> VertexId {
        debug_assert!(i <= self.tau(v));
        let x = self.node_of(v) as usize;
        let depth = self.nodes[x].depth as usize;
        let start = self.path_start[x] as usize;
        let ends = &self.path_end[start..=start + depth];
        let d = ends.partition_point(|&e| e <= i);
        let node = &self.nodes[self.path[start + d] as usize];
        node.members[(i - node.base) as usize]
    }

    /// Ancestors of `v` in rank order, ending with `v` itself.
    pub fn ancestors(&self, v: VertexId) -> Vec<VertexId> {
        let x = self.node_of(v) as usize;
        let start = self.path_start[x] as usize;
        let depth = self.nodes[x].depth as usize;
        let mut out = Vec::with_capacity(self.tau(v) as usize + 1);
        for d in 0..depth {
            out.extend_from_slice(&self.nodes[self.path[start + d] as usize].members);
        }
        let own = &self.nodes[x].members;
        out.extend_from_slice(&own[..=self.position(v) as usize]);
        out
    }

    /// Vertex ids grouped by rank: `levels[r]` holds every vertex with τ = r.
    pub fn levels(&self) -> Vec<Vec<VertexId>> {
        let mut levels = vec![Vec::new(); self.max_tau() as usize + 1];
        for v in 0..self.num_vertices() as VertexId {
            levels[self.tau(v) as usize].push(v);
        }
        levels
    }

    /// Vertices in each node's subtree, indexed by node id.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size: Vec<usize> = self.nodes.iter().map(|n| n.members.len()).collect();
        // Children always have larger ids than their parent.
        for x in (1..self.nodes.len()).rev() {
            let p = self.nodes[x].parent.expect("non-root node has a parent") as usize;
            size[p] += size[x];
        }
        size
    }

    /// Every internal node's child subtrees hold at most `(1 - β)` of the
    /// node's subtree vertices.
    pub fn check_balance(&self) -> Result<()> {
        let size = self.subtree_sizes();
        for (x, node) in self.nodes.iter().enumerate() {
            let bound = (1.0 - self.beta) * size[x] as f64;
            for c in node.children.iter().flatten() {
                if size[*c as usize] as f64 > bound {
                    return Err(Error::InvalidHierarchy(format!(
                        "node `{}` has a child subtree of {} out of {} vertices",
                        node.bit_string(),
                        size[*c as usize],
                        size[x]
                    )));
                }
            }
        }
        Ok(())
    }

    /// No edge joins vertices whose nodes lie in different subtrees.
    pub fn check_separator(&self, graph: &Graph) -> Result<()> {
        if graph.num_vertices() != self.num_vertices() {
            return Err(Error::InvalidHierarchy("vertex count mismatch".into()));
        }
        for (u, v, _) in graph.edges() {
            if !self.comparable(u, v) {
                return Err(Error::InvalidHierarchy(format!(
                    "edge ({}, {}) crosses sibling subtrees",
                    graph.external_id(u),
                    graph.external_id(v)
                )));
            }
        }
        Ok(())
    }
}

/// Assembles a hierarchy node by node. Used by the partitioner, the index
/// file reader and hand-made fixtures.
#[derive(Clone, Debug)]
pub struct QueryHierarchyBuilder {
    n: usize,
    nodes: Vec<TreeNode>,
}

impl QueryHierarchyBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            nodes: Vec::new(),
        }
    }

    fn push(&mut self, node: TreeNode) -> Result<NodeId> {
        if node.members.is_empty() {
            return Err(Error::InvalidHierarchy("tree node without vertices".into()));
        }
        self.nodes.push(node);
        Ok(self.nodes.len() as NodeId - 1)
    }

    pub fn add_root(&mut self, members: Vec<VertexId>) -> Result<NodeId> {
        if !self.nodes.is_empty() {
            return Err(Error::InvalidHierarchy("root added twice".into()));
        }
        self.push(TreeNode {
            bits: 0,
            depth: 0,
            parent: None,
            children: [None, None],
            members,
            base: 0,
        })
    }

    pub fn add_child(
        &mut self,
        parent: NodeId,
        side: Side,
        members: Vec<VertexId>,
    ) -> Result<NodeId> {
        let p = self
            .nodes
            .get(parent as usize)
            .ok_or_else(|| Error::InvalidHierarchy(format!("unknown parent node {parent}")))?;
        if p.children[side as usize].is_some() {
            return Err(Error::InvalidHierarchy(format!(
                "node `{}` already has a {side:?} child",
                p.bit_string()
            )));
        }
        let depth = p.depth as usize + 1;
        if depth > MAX_DEPTH {
            return Err(Error::TreeTooDeep(depth));
        }
        let node = TreeNode {
            bits: p.bits | (side as u64) << p.depth,
            depth: depth as u8,
            parent: Some(parent),
            children: [None, None],
            members,
            base: 0,
        };
        let id = self.push(node)?;
        self.nodes[parent as usize].children[side as usize] = Some(id);
        Ok(id)
    }

    pub fn finish(mut self, beta: f64, leaf_size: usize) -> Result<QueryHierarchy> {
        if self.nodes.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let n = self.n;
        let mut node_of = vec![NodeId::MAX; n];
        let mut position = vec![0u32; n];
        for (x, node) in self.nodes.iter_mut().enumerate() {
            node.members.sort_unstable();
            for (p, &v) in node.members.iter().enumerate() {
                let slot = node_of
                    .get_mut(v as usize)
                    .ok_or(Error::VertexOutOfRange { id: v as u64, n })?;
                if *slot != NodeId::MAX {
                    return Err(Error::InvalidHierarchy(format!(
                        "vertex {v} assigned twice"
                    )));
                }
                *slot = x as NodeId;
                position[v as usize] = p as u32;
            }
        }
        if let Some(v) = node_of.iter().position(|&x| x == NodeId::MAX) {
            return Err(Error::InvalidHierarchy(format!(
                "vertex {v} is not assigned"
            )));
        }
        // Parents precede children, so one forward sweep fills bases and paths.
        let mut path_start = vec![0u32; self.nodes.len()];
        let mut path = Vec::new();
        let mut path_end = Vec::new();
        for x in 0..self.nodes.len() {
            let start = path.len();
            path_start[x] = start as u32;
            if let Some(p) = self.nodes[x].parent {
                let p = p as usize;
                self.nodes[x].base = self.nodes[p].end();
                let (ps, pd) = (path_start[p] as usize, self.nodes[p].depth as usize);
                for d in 0..=pd {
                    path.push(path[ps + d]);
                    path_end.push(path_end[ps + d]);
                }
            }
            path.push(x as NodeId);
            path_end.push(self.nodes[x].end());
        }
        let tau = (0..n)
            .map(|v| self.nodes[node_of[v] as usize].base + position[v])
            .collect();
        Ok(QueryHierarchy {
            beta,
            leaf_size,
            nodes: self.nodes,
            node_of,
            position,
            tau,
            path_start,
            path,
            path_end,
        })
    }
}

/// Recursive result of partitioning one subgraph.
struct PartTree {
    members: Vec<VertexId>,
    children: [Option<Box<PartTree>>; 2],
}

/// Subgraphs below this size are never split across threads.
const PARALLEL_CUTOFF: usize = 4096;

fn partition(
    graph: &Graph,
    vertices: Vec<VertexId>,
    config: &PartitionConfig,
    depth: usize,
) -> Result<PartTree> {
    if depth > MAX_DEPTH {
        return Err(Error::TreeTooDeep(depth));
    }
    if vertices.len() <= config.leaf_size.max(1) {
        return Ok(PartTree {
            members: vertices,
            children: [None, None],
        });
    }
    let sep = find_separator(graph, &vertices, config.beta, config.use_coordinates);
    let parallel = config.execution.is_parallel() && vertices.len() >= PARALLEL_CUTOFF;
    drop(vertices);
    let Separator {
        separator,
        left,
        right,
    } = sep;
    let sub = |side: Vec<VertexId>| -> Result<Option<Box<PartTree>>> {
        if side.is_empty() {
            Ok(None)
        } else {
            partition(graph, side, config, depth + 1).map(|t| Some(Box::new(t)))
        }
    };
    let (l, r) = crate::exec::join(parallel, || sub(left), || sub(right));
    Ok(PartTree {
        members: separator,
        children: [l?, r?],
    })
}

fn flatten(
    tree: PartTree,
    parent: Option<(NodeId, Side)>,
    builder: &mut QueryHierarchyBuilder,
) -> Result<()> {
    let id = match parent {
        None => builder.add_root(tree.members)?,
        Some((p, side)) => builder.add_child(p, side, tree.members)?,
    };
    let [l, r] = tree.children;
    if let Some(l) = l {
        flatten(*l, Some((id, Side::Left)), builder)?;
    }
    if let Some(r) = r {
        flatten(*r, Some((id, Side::Right)), builder)?;
    }
    Ok(())
}

/// Recursively bisects the graph with balanced vertex separators.
pub fn build_query_hierarchy(graph: &Graph, config: &PartitionConfig) -> Result<QueryHierarchy> {
    config.validate()?;
    let n = graph.num_vertices();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let all: Vec<VertexId> = (0..n as VertexId).collect();
    let tree = config
        .execution
        .install(|| partition(graph, all, config, 0))?;
    let mut builder = QueryHierarchyBuilder::new(n);
    flatten(tree, None, &mut builder)?;
    builder.finish(config.beta, config.leaf_size)
}
