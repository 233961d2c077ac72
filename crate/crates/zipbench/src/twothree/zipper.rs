use crate::counters;

use super::tree::{TTTree, TwoThreeError};

/// Payload of the focused node: a 2-node or 3-node together with its
/// subtrees, lifted out of the tree. The zipper always focuses the
/// leftmost bottom node, so in practice the subtrees are sentinels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nonempty {
    Two(TTTree, i64, TTTree),
    Three(TTTree, i64, TTTree, i64, TTTree),
}

/// One level of surrounding context: which child the focus sits in, plus
/// everything the node held besides that child. Five cases, one per
/// (node arity, child position) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathChoice {
    /// Focus in the left child of a 2-node; keeps `(k1, right)`.
    Path2L(i64, TTTree),
    /// Focus in the right child of a 2-node; keeps `(left, k1)`.
    Path2R(TTTree, i64),
    /// Focus in the left child of a 3-node; keeps `(k1, middle, k2, right)`.
    Path3L(i64, TTTree, i64, TTTree),
    /// Focus in the middle child of a 3-node; keeps `(left, k1, k2, right)`.
    Path3M(TTTree, i64, i64, TTTree),
    /// Focus in the right child of a 3-node; keeps `(left, k1, middle, k2)`.
    Path3R(TTTree, i64, TTTree, i64),
}

/// Linked stack of context levels, innermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TTPath {
    Top,
    Link(PathChoice, Box<TTPath>),
}

/// A 2-3 tree taken apart around its leftmost bottom node. Insertions of
/// a new minimum land directly in the focus; splits walk the path instead
/// of the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TTZipper {
    focus: Nonempty,
    path: TTPath,
}

impl TTZipper {
    /// Decompose `t` around its leftmost bottom node, recording a context
    /// level per step down. Empty trees have no bottom node to focus.
    pub fn from_tree_leftmost(t: &TTTree) -> Result<TTZipper, TwoThreeError> {
        let mut path = TTPath::Top;
        let mut cur = t;
        loop {
            match cur {
                TTTree::Leaf => return Err(TwoThreeError::EmptyTree),
                TTTree::Node2(n) => {
                    if n.left.is_leaf() {
                        return Ok(TTZipper {
                            focus: Nonempty::Two(n.left.clone(), n.k1, n.right.clone()),
                            path,
                        });
                    }
                    path = TTPath::Link(
                        PathChoice::Path2L(n.k1, n.right.clone()),
                        Box::new(path),
                    );
                    cur = &n.left;
                }
                TTTree::Node3(n) => {
                    if n.left.is_leaf() {
                        return Ok(TTZipper {
                            focus: Nonempty::Three(
                                n.left.clone(),
                                n.k1,
                                n.middle.clone(),
                                n.k2,
                                n.right.clone(),
                            ),
                            path,
                        });
                    }
                    path = TTPath::Link(
                        PathChoice::Path3L(n.k1, n.middle.clone(), n.k2, n.right.clone()),
                        Box::new(path),
                    );
                    cur = &n.left;
                }
            }
        }
    }

    /// Smallest stored value, read off the focus in O(1): the focus is the
    /// leftmost bottom node, so its first key is the tree minimum.
    pub fn min_value(&self) -> i64 {
        match &self.focus {
            Nonempty::Two(_, k1, _) => *k1,
            Nonempty::Three(_, k1, _, _, _) => *k1,
        }
    }

    /// Context levels above the focus; equals tree height minus one.
    pub fn path_len(&self) -> usize {
        let mut n = 0;
        let mut p = &self.path;
        while let TTPath::Link(_, up) = p {
            n += 1;
            p = up;
        }
        n
    }

    /// Insert a new minimum without any descent. The focus absorbs the
    /// value if it has room; otherwise it splits and the overflow walks
    /// the path list exactly as far as it has to.
    pub fn insert_min(self, v: i64) -> Result<TTZipper, TwoThreeError> {
        let minimum = self.min_value();
        if v >= minimum {
            return Err(TwoThreeError::NotBelowMinimum { value: v, minimum });
        }
        match self.focus {
            Nonempty::Two(l, k1, r) => Ok(TTZipper {
                // Room: grow to a 3-node, new minimum first.
                focus: Nonempty::Three(l, v, TTTree::Leaf, k1, r),
                path: self.path,
            }),
            Nonempty::Three(l, k1, m, k2, r) => {
                // Overflow: the old pair moves wholesale into a sibling
                // 3-node to the right, the new minimum keeps the focus as
                // a fresh 2-node, and the sibling's first value climbs as
                // the separator.
                counters::bottom_split();
                let sibling = TTTree::node3(l, k1, m, k2, r);
                let path = propagate(self.path, k1, sibling);
                Ok(TTZipper {
                    focus: Nonempty::Two(TTTree::Leaf, v, TTTree::Leaf),
                    path,
                })
            }
        }
    }

    /// Reassemble the whole tree, one node per context level plus the
    /// focus. The zipper itself is untouched.
    pub fn to_tree(&self) -> TTTree {
        let mut t = match &self.focus {
            Nonempty::Two(l, k1, r) => TTTree::node2(l.clone(), *k1, r.clone()),
            Nonempty::Three(l, k1, m, k2, r) => {
                TTTree::node3(l.clone(), *k1, m.clone(), *k2, r.clone())
            }
        };
        let mut path = &self.path;
        while let TTPath::Link(choice, up) = path {
            t = match choice {
                PathChoice::Path2L(k1, right) => TTTree::node2(t, *k1, right.clone()),
                PathChoice::Path2R(left, k1) => TTTree::node2(left.clone(), *k1, t),
                PathChoice::Path3L(k1, middle, k2, right) => {
                    TTTree::node3(t, *k1, middle.clone(), *k2, right.clone())
                }
                PathChoice::Path3M(left, k1, k2, right) => {
                    TTTree::node3(left.clone(), *k1, t, *k2, right.clone())
                }
                PathChoice::Path3R(left, k1, middle, k2) => {
                    TTTree::node3(left.clone(), *k1, middle.clone(), *k2, t)
                }
            };
            path = up;
        }
        t
    }
}

/// Carry `(sep, sibling)` upward; the pair belongs immediately to the
/// right of the focus position. Each 2-node level absorbs the carry and
/// stops; each 3-node level splits into two 2-nodes (the right one built
/// outright and carried on, the left one keeping the focus) and continues.
/// A carry past the top grows the tree: the focus side becomes the left
/// child of a new root, recorded as a fresh outermost context level.
fn propagate(path: TTPath, sep: i64, sibling: TTTree) -> TTPath {
    match path {
        TTPath::Top => TTPath::Link(PathChoice::Path2L(sep, sibling), Box::new(TTPath::Top)),
        TTPath::Link(PathChoice::Path2L(k1, right), up) => {
            TTPath::Link(PathChoice::Path3L(sep, sibling, k1, right), up)
        }
        TTPath::Link(PathChoice::Path3L(k1, middle, k2, right), up) => {
            counters::inner_split();
            let carried = TTTree::node2(middle, k2, right);
            TTPath::Link(
                PathChoice::Path2L(sep, sibling),
                Box::new(propagate(*up, k1, carried)),
            )
        }
        TTPath::Link(_, _) => {
            // insert_min starts from a leftmost-descent zipper and only
            // ever writes left choices back, so the focus can never sit
            // under a right or middle choice here.
            unreachable!("minimum insertion walked a non-leftmost path")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twothree::tree::{check_invariants, insert_root};

    fn bottom2(v: i64) -> TTTree {
        TTTree::node2(TTTree::Leaf, v, TTTree::Leaf)
    }

    fn bottom3(a: i64, b: i64) -> TTTree {
        TTTree::node3(TTTree::Leaf, a, TTTree::Leaf, b, TTTree::Leaf)
    }

    fn descending_chain(n: i64) -> TTTree {
        let mut t = TTTree::Leaf;
        for v in (1..=n).rev() {
            t = insert_root(&t, v).unwrap();
        }
        t
    }

    #[test]
    fn empty_tree_has_no_focus() {
        assert_eq!(
            TTZipper::from_tree_leftmost(&TTTree::Leaf),
            Err(TwoThreeError::EmptyTree)
        );
    }

    #[test]
    fn single_bottom_node_gives_empty_path() {
        let z = TTZipper::from_tree_leftmost(&bottom2(5)).unwrap();
        assert_eq!(z.path_len(), 0);
        assert_eq!(z.min_value(), 5);
        assert_eq!(z.to_tree(), bottom2(5));
    }

    #[test]
    fn round_trip_preserves_trees_and_path_length() {
        for n in [1, 2, 3, 7, 20, 100] {
            let t = descending_chain(n);
            let z = TTZipper::from_tree_leftmost(&t).unwrap();
            assert_eq!(z.path_len(), t.height() - 1, "n = {n}");
            assert_eq!(z.to_tree(), t, "n = {n}");
        }
    }

    #[test]
    fn insert_with_room_grows_the_focus() {
        let z = TTZipper::from_tree_leftmost(&bottom2(5)).unwrap();
        let z = z.insert_min(4).unwrap();
        assert_eq!(z.path_len(), 0);
        assert_eq!(z.to_tree(), bottom3(4, 5));
    }

    #[test]
    fn insert_into_full_focus_matches_root_insertion() {
        let t = bottom3(2, 3);
        let z = TTZipper::from_tree_leftmost(&t).unwrap();
        let z = z.insert_min(1).unwrap();
        let expected = TTTree::node2(bottom2(1), 2, bottom3(2, 3));
        assert_eq!(z.to_tree(), expected);
        assert_eq!(z.to_tree(), insert_root(&t, 1).unwrap());
        // The root split shows up as a new outermost context level.
        assert_eq!(z.path_len(), 1);
    }

    #[test]
    fn rejects_values_at_or_above_the_minimum() {
        let z = TTZipper::from_tree_leftmost(&bottom3(2, 3)).unwrap();
        assert_eq!(
            z.clone().insert_min(2),
            Err(TwoThreeError::NotBelowMinimum { value: 2, minimum: 2 })
        );
        assert_eq!(
            z.insert_min(7),
            Err(TwoThreeError::NotBelowMinimum { value: 7, minimum: 2 })
        );
    }

    #[test]
    fn chain_matches_root_engine_and_keeps_invariants() {
        let first = 500;
        let mut by_root = insert_root(&TTTree::Leaf, first).unwrap();
        let mut z = TTZipper::from_tree_leftmost(&by_root).unwrap();
        for v in (1..first).rev() {
            by_root = insert_root(&by_root, v).unwrap();
            z = z.insert_min(v).unwrap();
            assert_eq!(z.min_value(), v);
        }
        let by_zipper = z.to_tree();
        assert_eq!(by_zipper, by_root);
        assert_eq!(check_invariants(&by_zipper), vec![]);
        assert_eq!(by_zipper.values_in_order(), (1..=first).collect::<Vec<_>>());
    }

    #[test]
    fn split_cadence_matches_the_root_engine() {
        let t = insert_root(&TTTree::Leaf, 10).unwrap();
        let mut z = TTZipper::from_tree_leftmost(&t).unwrap();
        counters::reset_splits();
        for (j, v) in (1..10).rev().enumerate() {
            z = z.insert_min(v).unwrap();
            // Insertion j + 2 overall, counting the one that built `t`.
            let overall = j as u64 + 2;
            assert_eq!(counters::bottom_splits(), (overall - 1) / 2);
        }
        assert_eq!(counters::bottom_splits(), 4);
    }

    // The insertion workload only ever leaves left choices in the path;
    // the other three reassemble here so every context shape is exercised.
    #[test]
    fn to_tree_rebuilds_right_and_middle_contexts() {
        let b1 = bottom2(1);
        let b2 = bottom3(3, 4);
        let b3 = bottom2(6);

        let z = TTZipper {
            focus: Nonempty::Two(TTTree::Leaf, 6, TTTree::Leaf),
            path: TTPath::Link(
                PathChoice::Path2R(b1.clone(), 6),
                Box::new(TTPath::Top),
            ),
        };
        assert_eq!(z.to_tree(), TTTree::node2(b1.clone(), 6, b3.clone()));

        let z = TTZipper {
            focus: Nonempty::Three(TTTree::Leaf, 3, TTTree::Leaf, 4, TTTree::Leaf),
            path: TTPath::Link(
                PathChoice::Path3M(b1.clone(), 3, 6, b3.clone()),
                Box::new(TTPath::Top),
            ),
        };
        assert_eq!(
            z.to_tree(),
            TTTree::node3(b1.clone(), 3, b2.clone(), 6, b3.clone())
        );

        let z = TTZipper {
            focus: Nonempty::Two(TTTree::Leaf, 6, TTTree::Leaf),
            path: TTPath::Link(
                PathChoice::Path3R(b1.clone(), 3, b2.clone(), 6),
                Box::new(TTPath::Top),
            ),
        };
        assert_eq!(z.to_tree(), TTTree::node3(b1, 3, b2, 6, b3));
    }

    #[test]
    fn zippers_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<TTZipper>();
    }

    #[cfg(feature = "count-nodes")]
    #[test]
    fn insertions_build_amortized_constant_nodes() {
        let first = 1 << 10;
        let t = insert_root(&TTTree::Leaf, first).unwrap();
        let mut z = TTZipper::from_tree_leftmost(&t).unwrap();
        crate::counters::reset_node_counts();
        for v in (1..first).rev() {
            z = z.insert_min(v).unwrap();
        }
        let built = crate::counters::tt_nodes();
        // Splits alone build nodes: at most one per bottom split plus one
        // per inner split, under one node per insertion in total.
        assert!(built < first as u64, "built {built} nodes for {first} insertions");
    }
}
