use super::tree::BinTree;

/// Zipper over a persistent binary tree: the focused node held as its
/// parts, plus the path of everything passed on the way down, innermost
/// frame first.
///
/// Moves consume the zipper and hand back the moved one. Moving down pushes
/// a path frame (one small allocation) and never copies tree nodes; moving
/// up pops a frame and builds exactly one node. Setting the focused value
/// builds nothing at all. Reassembly cost therefore tracks how far the
/// cursor travels, not how deep the tree is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinZipper {
    left: BinTree,
    value: i64,
    right: BinTree,
    path: Path,
}

/// Linked path of context frames. `Left` means the focus is the left child
/// of a parent with the recorded value and right sibling; `Right` mirrors.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Path {
    Top,
    Left {
        parent: i64,
        right: BinTree,
        up: Box<Path>,
    },
    Right {
        left: BinTree,
        parent: i64,
        up: Box<Path>,
    },
}

impl BinZipper {
    /// Focus the root. `None` for an empty tree.
    pub fn from_tree(tree: &BinTree) -> Option<BinZipper> {
        let n = tree.as_node()?;
        Some(BinZipper {
            left: n.left.clone(),
            value: n.value,
            right: n.right.clone(),
            path: Path::Top,
        })
    }

    pub fn focus_value(&self) -> i64 {
        self.value
    }

    /// Depth of the focus below the root.
    pub fn depth(&self) -> usize {
        let mut d = 0;
        let mut p = &self.path;
        loop {
            p = match p {
                Path::Top => return d,
                Path::Left { up, .. } | Path::Right { up, .. } => up,
            };
            d += 1;
        }
    }

    pub fn at_top(&self) -> bool {
        matches!(self.path, Path::Top)
    }

    /// Move to the left child. `None` (dropping the zipper) if it is empty.
    pub fn down_left(self) -> Option<BinZipper> {
        let n = self.left.as_node()?;
        let (l, v, r) = (n.left.clone(), n.value, n.right.clone());
        Some(BinZipper {
            left: l,
            value: v,
            right: r,
            path: Path::Left {
                parent: self.value,
                right: self.right,
                up: Box::new(self.path),
            },
        })
    }

    /// Move to the right child. `None` (dropping the zipper) if it is empty.
    pub fn down_right(self) -> Option<BinZipper> {
        let n = self.right.as_node()?;
        let (l, v, r) = (n.left.clone(), n.value, n.right.clone());
        Some(BinZipper {
            left: l,
            value: v,
            right: r,
            path: Path::Right {
                left: self.left,
                parent: self.value,
                up: Box::new(self.path),
            },
        })
    }

    /// Move to the parent, rebuilding the node just left. `None` at the
    /// root.
    pub fn up(self) -> Option<BinZipper> {
        match self.path {
            Path::Top => None,
            Path::Left { parent, right, up } => Some(BinZipper {
                left: BinTree::node(self.left, self.value, self.right),
                value: parent,
                right,
                path: *up,
            }),
            Path::Right { left, parent, up } => Some(BinZipper {
                left,
                value: parent,
                right: BinTree::node(self.left, self.value, self.right),
                path: *up,
            }),
        }
    }

    /// Replace the focused value.
    pub fn set_focus(mut self, value: i64) -> BinZipper {
        self.value = value;
        self
    }

    /// Reassemble the whole tree by walking back to the top.
    pub fn to_tree(self) -> BinTree {
        let mut z = self;
        while !z.at_top() {
            z = z.up().expect("a zipper below the top can move up");
        }
        BinTree::node(z.left, z.value, z.right)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tree::{perfect, Dir};
    use super::*;

    fn sample() -> BinTree {
        let mut next = 0;
        perfect(3, &mut move || {
            let v = next;
            next += 1;
            v
        })
        .unwrap()
    }

    #[test]
    fn from_tree_focuses_root() {
        let t = sample();
        let z = BinZipper::from_tree(&t).unwrap();
        assert_eq!(z.focus_value(), 0);
        assert!(z.at_top());
        assert_eq!(z.depth(), 0);
        assert!(BinZipper::from_tree(&BinTree::leaf()).is_none());
    }

    #[test]
    fn up_inverts_down() {
        let t = sample();
        let z = BinZipper::from_tree(&t).unwrap();
        let down = z.clone().down_left().unwrap();
        assert_eq!(down.focus_value(), 1);
        assert_eq!(down.depth(), 1);
        assert_eq!(down.up().unwrap(), z);

        let down = z.clone().down_right().unwrap();
        assert_eq!(down.focus_value(), 4);
        assert_eq!(down.up().unwrap(), z);
    }

    #[test]
    fn moves_off_the_tree_are_absent() {
        let t = sample();
        let z = BinZipper::from_tree(&t).unwrap();
        assert!(z.clone().up().is_none());
        let deep = z
            .down_left()
            .unwrap()
            .down_left()
            .unwrap();
        assert_eq!(deep.depth(), 2);
        assert!(deep.down_left().is_none());
    }

    #[test]
    fn set_and_reassemble() {
        let t = sample();
        let z = BinZipper::from_tree(&t).unwrap();
        let z = z.down_right().unwrap().down_left().unwrap();
        assert_eq!(z.focus_value(), 5);
        let out = z.set_focus(50).to_tree();
        assert_eq!(out.value_at(&[Dir::Right, Dir::Left]), Some(50));
        // Only that position changed.
        assert_eq!(out.value_at(&[]), Some(0));
        assert_eq!(out.value_at(&[Dir::Left]), Some(1));
        assert_eq!(t.value_at(&[Dir::Right, Dir::Left]), Some(5));
    }

    #[test]
    fn set_focus_twice_keeps_last() {
        let t = sample();
        let z = BinZipper::from_tree(&t).unwrap();
        let out = z.set_focus(7).set_focus(8).to_tree();
        assert_eq!(out.value_at(&[]), Some(8));
    }

    #[test]
    fn to_tree_from_anywhere_matches_input_when_nothing_set() {
        let t = sample();
        let z = BinZipper::from_tree(&t).unwrap();
        let z = z.down_left().unwrap().down_right().unwrap();
        assert_eq!(z.to_tree(), t);
    }

    #[cfg(feature = "count-nodes")]
    #[test]
    fn move_costs_in_nodes() {
        use crate::counters;
        let t = sample();
        let z = BinZipper::from_tree(&t).unwrap();

        counters::reset_node_counts();
        let z = z.down_left().unwrap().down_right().unwrap();
        assert_eq!(counters::bin_nodes(), 0, "downward moves build nothing");

        let z = z.set_focus(9);
        assert_eq!(counters::bin_nodes(), 0, "set builds nothing");

        let z = z.up().unwrap();
        assert_eq!(counters::bin_nodes(), 1, "each upward move builds one node");
        // Reassembly from depth 1: one more up plus the root itself.
        let _t = z.to_tree();
        assert_eq!(counters::bin_nodes(), 3);
    }
}
