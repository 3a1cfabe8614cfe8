//! Width-pruned evaluation of the limit series `Y = Σ_θ G_θ`,
//! `G_θ = φ_θ C(U_θ)`, on the probability space of a [`SearchTree`].
//!
//! Occupied nodes use the pivots the keys actually produced. Below them the
//! tree is extended with fresh pivots: given the first `n` keys, the first
//! later key that lands in an empty interval is uniform on it, independently
//! across intervals, so this continues the same key stream in law.
//!
//! Nodes of width `φ_θ < ε` are dropped with their subtrees. The dropped
//! fringe is an antichain with `Σ φ ≤ 1`, each dropped subtree contributes
//! `φ_θ·Y'` with `E Y'² = σ²`, so the omitted tail has second moment at most
//! `σ²·ε`.

use crate::error::{Error, Result};
use crate::rng::StreamKey;
use crate::toll::{c_of, xlogx};

use super::tree::SearchTree;

/// Widths below this stop the recursion whatever `ε` is.
pub const MIN_WIDTH: f64 = 1e-300;

/// Hard cap on the depth of complete-tree level sampling.
pub const MAX_LEVEL_DEPTH: u32 = 16;

/// Pruned series split into the root term and the two subtree sums.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SeriesParts {
    /// `G_ε = C(U)`.
    pub root: f64,
    /// `Σ_{θ} G_{0θ}`, the pruned version of `U·Y⁽⁰⁾`.
    pub left: f64,
    /// `Σ_{θ} G_{1θ}`, the pruned version of `(1−U)·Y⁽¹⁾`.
    pub right: f64,
    /// `U`, the root's relative pivot.
    pub root_pivot: f64,
}

impl SeriesParts {
    pub fn total(&self) -> f64 {
        self.root + self.left + self.right
    }
}

fn check_eps(eps: f64) {
    assert!(eps > 0.0 && eps <= 1.0, "pruning width must lie in (0, 1], got {eps}");
}

/// Pruned series over a subtree whose pivots are all fresh.
///
/// Telescopes `Σ G_θ = Σ φ_θ − 2φ_root ln φ_root + 2 Σ_{dropped} φ ln φ` over
/// the kept nodes, so each node costs one uniform and at most one logarithm.
/// `stack` is scratch space.
pub fn fresh_subtree_sum(width: f64, key: StreamKey, eps: f64, stack: &mut Vec<(f64, StreamKey)>) -> f64 {
    let cutoff = eps.max(MIN_WIDTH);
    if width < cutoff {
        return 0.0;
    }
    let mut kept = 0.0;
    let mut fringe = 0.0;
    stack.clear();
    stack.push((width, key));
    while let Some((w, k)) = stack.pop() {
        kept += w;
        let w0 = k.unit() * w;
        let w1 = w - w0;
        if w0 >= cutoff {
            stack.push((w0, k.child(false)));
        } else {
            fringe += xlogx(w0);
        }
        if w1 >= cutoff {
            stack.push((w1, k.child(true)));
        } else {
            fringe += xlogx(w1);
        }
    }
    kept - 2.0 * xlogx(width) + 2.0 * fringe
}

/// Same sum as [`fresh_subtree_sum`], one `φ_θ C(U_θ)` term per node.
/// Slower; kept as an independent check of the telescoped kernel.
pub fn fresh_subtree_sum_direct(width: f64, key: StreamKey, eps: f64) -> f64 {
    let cutoff = eps.max(MIN_WIDTH);
    let mut total = 0.0;
    let mut stack = vec![(width, key)];
    while let Some((w, k)) = stack.pop() {
        if w < cutoff {
            continue;
        }
        let u = k.unit();
        total += w * c_of(u);
        stack.push((u * w, k.child(false)));
        stack.push((w - u * w, k.child(true)));
    }
    total
}

/// Pruned `Y^(ε)` split at the root.
///
/// # Panics
/// If `eps` is not in `(0, 1]`.
pub fn evaluate_parts(tree: &SearchTree, eps: f64) -> SeriesParts {
    check_eps(eps);
    let mut scratch = Vec::new();
    let Some(root) = tree.root() else {
        // Nothing occupied: the root pivot is fresh as well.
        let key = tree.label_root();
        let u = key.unit();
        return SeriesParts {
            root: c_of(u),
            left: fresh_subtree_sum(u, key.child(false), eps, &mut scratch),
            right: fresh_subtree_sum(1.0 - u, key.child(true), eps, &mut scratch),
            root_pivot: u,
        };
    };
    let u = root.relative_pivot().expect("occupied");
    let mut parts = SeriesParts { root: root.width() * c_of(u), root_pivot: u, ..Default::default() };
    let mut pending = Vec::new();
    for (side, slot) in [(false, &mut parts.left), (true, &mut parts.right)] {
        let (lo, hi) = root.child_interval(side).expect("occupied");
        pending.clear();
        match root.children[side as usize] {
            Some(child) => pending.push(child),
            None => *slot += fresh_subtree_sum(hi - lo, root.key.child(side), eps, &mut scratch),
        }
        while let Some(id) = pending.pop() {
            let node = tree.node(id);
            let width = node.width();
            if width < eps.max(MIN_WIDTH) {
                continue;
            }
            *slot += width * c_of(node.relative_pivot().expect("occupied"));
            for right in [false, true] {
                match node.children[right as usize] {
                    Some(child) => pending.push(child),
                    None => {
                        let (lo, hi) = node.child_interval(right).expect("occupied");
                        *slot += fresh_subtree_sum(hi - lo, node.key.child(right), eps, &mut scratch);
                    }
                }
            }
        }
    }
    parts
}

/// `Y^(ε) = Σ_{φ_θ ≥ ε} G_θ` on the tree's probability space.
pub fn evaluate_y(tree: &SearchTree, eps: f64) -> f64 {
    evaluate_parts(tree, eps).total()
}

/// Sample of `Y^(ε)` alone, from an empty tree on the given label stream.
pub fn sample_limit(labels: StreamKey, eps: f64) -> f64 {
    evaluate_y(&SearchTree::new(labels), eps)
}

/// Per-level sums `Σ_{|θ|=j} G_θ`, `j = 0..=depth`, of the complete tree
/// with fresh pivots from `labels`.
pub fn level_sums(depth: u32, labels: StreamKey) -> Result<Vec<f64>> {
    if depth > MAX_LEVEL_DEPTH {
        return Err(Error::ResourceRefusal(format!(
            "level depth {depth} exceeds the cap of {MAX_LEVEL_DEPTH}"
        )));
    }
    let mut sums = Vec::with_capacity(depth as usize + 1);
    let mut level = vec![(1.0f64, labels)];
    let mut next = Vec::with_capacity(2);
    for j in 0..=depth {
        let mut sum = 0.0;
        next.clear();
        for &(w, k) in &level {
            let u = k.unit();
            sum += w * c_of(u);
            if j < depth {
                next.push((u * w, k.child(false)));
                next.push((w - u * w, k.child(true)));
            }
        }
        sums.push(sum);
        std::mem::swap(&mut level, &mut next);
    }
    Ok(sums)
}
