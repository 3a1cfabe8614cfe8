//! Binary search tree grown by QuickSort on a stream of uniform keys, with
//! the interval `(L_θ, R_θ)` each node's key was drawn from.

use crate::rng::StreamKey;

pub type NodeId = usize;

/// Node `θ` of the occupied search tree.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalNode {
    /// `L_θ`: largest ancestor key below the pivot, or 0.
    pub left_end: f64,
    /// `R_θ`: smallest ancestor key above the pivot, or 1.
    pub right_end: f64,
    /// `V_θ`. Always present for nodes stored in a [`SearchTree`].
    pub pivot: Option<f64>,
    /// `|θ|`.
    pub depth: u32,
    /// Label stream; fresh pivots below this node derive from it.
    pub key: StreamKey,
    pub parent: Option<(NodeId, bool)>,
    pub children: [Option<NodeId>; 2],
}

impl IntervalNode {
    /// `φ_θ = R_θ − L_θ`.
    pub fn width(&self) -> f64 {
        self.right_end - self.left_end
    }

    pub fn occupied(&self) -> bool {
        self.pivot.is_some()
    }

    /// `U_θ = φ_θ0 / φ_θ`.
    pub fn relative_pivot(&self) -> Option<f64> {
        self.pivot.map(|v| (v - self.left_end) / self.width())
    }

    /// Interval of the child on the given side, split at the pivot.
    pub fn child_interval(&self, right: bool) -> Option<(f64, f64)> {
        self.pivot.map(|v| if right { (v, self.right_end) } else { (self.left_end, v) })
    }
}

/// Arena of occupied nodes. Node 0, when present, is the root `ε`.
#[derive(Clone, Debug)]
pub struct SearchTree {
    label_root: StreamKey,
    nodes: Vec<IntervalNode>,
}

impl SearchTree {
    /// Tree with no keys; its label stream seeds every fresh pivot.
    pub fn new(label_root: StreamKey) -> Self {
        Self { label_root, nodes: Vec::new() }
    }

    pub fn label_root(&self) -> StreamKey {
        self.label_root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<&IntervalNode> {
        self.nodes.first()
    }

    pub fn node(&self, id: NodeId) -> &IntervalNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[IntervalNode] {
        &self.nodes
    }

    /// Insert `key`; returns its depth, which is the number of comparisons
    /// QuickSort spends on it.
    pub fn insert(&mut self, key: f64) -> u32 {
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut label = self.label_root;
        let mut parent: Option<(NodeId, bool)> = None;
        let mut cursor = if self.nodes.is_empty() { None } else { Some(0) };
        let mut depth = 0;
        while let Some(id) = cursor {
            let node = &self.nodes[id];
            let pivot = node.pivot.expect("stored nodes are occupied");
            let right = key >= pivot;
            if right {
                lo = pivot;
            } else {
                hi = pivot;
            }
            label = node.key.child(right);
            parent = Some((id, right));
            cursor = node.children[right as usize];
            depth += 1;
        }
        let id = self.nodes.len();
        self.nodes.push(IntervalNode {
            left_end: lo,
            right_end: hi,
            pivot: Some(key),
            depth,
            key: label,
            parent,
            children: [None, None],
        });
        if let Some((p, right)) = parent {
            self.nodes[p].children[right as usize] = Some(id);
        }
        depth
    }

    /// Binary label `θ` of a node, `""` for the root.
    pub fn label(&self, mut id: NodeId) -> String {
        let mut bits = Vec::with_capacity(self.nodes[id].depth as usize);
        while let Some((parent, right)) = self.nodes[id].parent {
            bits.push(if right { '1' } else { '0' });
            id = parent;
        }
        bits.iter().rev().collect()
    }
}

/// Split statistics of one QuickSort run on `n` keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct BstStats {
    pub n: u64,
    /// `K_n`.
    pub total_comparisons: u64,
    /// `ν₀(n)`: keys that went left of the first key.
    pub left_count: u64,
    /// `ν₁(n)`.
    pub right_count: u64,
    /// `K_{ν₀}(L_0, R_0)`: comparisons spent inside the left subtree.
    pub left_comparisons: u64,
    pub right_comparisons: u64,
}

/// Run QuickSort (first-element pivots) on `n` keys drawn from
/// `stream.split(KEYS)`, recording the search tree it implies.
///
/// # Panics
/// If `n == 0`.
pub fn run_quicksort(n: u64, stream: StreamKey) -> (BstStats, SearchTree) {
    assert!(n >= 1, "QuickSort needs at least one key");
    let mut keys = stream.split(crate::rng::tag::KEYS).counter();
    let mut tree = SearchTree::new(stream.split(crate::rng::tag::LABELS));
    let mut stats = BstStats { n, ..BstStats::default() };
    let first = keys.next_unit();
    tree.insert(first);
    for _ in 1..n {
        let key = keys.next_unit();
        let depth = tree.insert(key) as u64;
        stats.total_comparisons += depth;
        if key < first {
            stats.left_count += 1;
            stats.left_comparisons += depth - 1;
        } else {
            stats.right_count += 1;
            stats.right_comparisons += depth - 1;
        }
    }
    (stats, tree)
}
