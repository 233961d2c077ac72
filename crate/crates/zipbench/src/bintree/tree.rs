use std::error::Error;
use std::fmt;
use std::sync::Arc;

use crate::counters;

/// Largest supported perfect-tree depth. Keeps node ids inside `u32` for
/// the arena representation; memory for the larger depths is the caller's
/// problem.
pub const MAX_DEPTH: u32 = 30;

/// A step away from the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Left,
    Right,
}

/// Persistent binary tree. Clones are O(1) and share structure; nodes are
/// immutable, so trees can be shared freely across threads.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BinTree(Option<Arc<BinNode>>);

#[derive(Debug, PartialEq, Eq)]
pub struct BinNode {
    pub left: BinTree,
    pub value: i64,
    pub right: BinTree,
}

impl BinTree {
    pub fn leaf() -> BinTree {
        BinTree(None)
    }

    pub fn node(left: BinTree, value: i64, right: BinTree) -> BinTree {
        counters::bin_node_built();
        BinTree(Some(Arc::new(BinNode { left, value, right })))
    }

    pub fn is_leaf(&self) -> bool {
        self.0.is_none()
    }

    pub fn as_node(&self) -> Option<&BinNode> {
        self.0.as_deref()
    }

    pub fn node_count(&self) -> u64 {
        match self.as_node() {
            None => 0,
            Some(n) => 1 + n.left.node_count() + n.right.node_count(),
        }
    }

    /// Value at the end of `path`, if the walk stays on the tree.
    pub fn value_at(&self, path: &[Dir]) -> Option<i64> {
        let mut cur = self;
        for d in path {
            let n = cur.as_node()?;
            cur = match d {
                Dir::Left => &n.left,
                Dir::Right => &n.right,
            };
        }
        cur.as_node().map(|n| n.value)
    }

    /// Preorder values; test-sized trees only.
    pub fn preorder(&self) -> Vec<i64> {
        fn walk(t: &BinTree, out: &mut Vec<i64>) {
            if let Some(n) = t.as_node() {
                out.push(n.value);
                walk(&n.left, out);
                walk(&n.right, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeError {
    DepthOutOfRange { depth: u32 },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::DepthOutOfRange { depth } => write!(
                f,
                "depth {depth} out of range: perfect trees need 1..={MAX_DEPTH}"
            ),
        }
    }
}

impl Error for TreeError {}

/// Perfect tree of the given depth, values drawn from `fill` in preorder.
/// Depth 1 is a single node; depth d has 2^d - 1 nodes.
pub fn perfect(depth: u32, fill: &mut dyn FnMut() -> i64) -> Result<BinTree, TreeError> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(TreeError::DepthOutOfRange { depth });
    }
    fn build(levels: u32, fill: &mut dyn FnMut() -> i64) -> BinTree {
        if levels == 0 {
            return BinTree::leaf();
        }
        let value = fill();
        let left = build(levels - 1, fill);
        let right = build(levels - 1, fill);
        BinTree::node(left, value, right)
    }
    Ok(build(depth, fill))
}

/// Rebuild the path to `path`'s endpoint with `value` at the end; shares
/// every untouched subtree with the input. A walk that leaves the tree
/// returns that subtree unchanged, so a too-long path replaces nothing
/// (the copies made by the levels above still happen).
pub fn replace(tree: &BinTree, path: &[Dir], value: i64) -> BinTree {
    let Some(n) = tree.as_node() else {
        return tree.clone();
    };
    match path.split_first() {
        None => BinTree::node(n.left.clone(), value, n.right.clone()),
        Some((Dir::Left, rest)) => {
            BinTree::node(replace(&n.left, rest, value), n.value, n.right.clone())
        }
        Some((Dir::Right, rest)) => {
            BinTree::node(n.left.clone(), n.value, replace(&n.right, rest, value))
        }
    }
}
