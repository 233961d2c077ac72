//! Redundant 2-3 trees built by repeated minimum insertion.
//!
//! Data lives in the bottom nodes (the ones whose children are all the
//! empty sentinel); every deeper separator duplicates the minimum of the
//! subtree to its right. Four engines build identical trees from the same
//! descending sequence:
//!
//! * [`insert_root`]: persistent, descends from the root on separators;
//! * [`TTZipper::insert_min`]: persistent, the focus stays on the leftmost
//!   bottom node, so insertion needs no descent and splits walk the
//!   context path instead of the tree;
//! * [`MutTTTree::insert_root`]: arena tree, descends from the root;
//! * [`MutTTTree::insert_finger`]: arena tree, starts at the finger kept
//!   on the last-inserted bottom node.
//!
//! [`check_invariants`] reports structural violations; the sorted-order
//! oracle for all engines is [`TTTree::values_in_order`].

mod mutable;
mod tree;
mod zipper;

pub use mutable::MutTTTree;
pub use tree::{check_invariants, insert_root, Node2, Node3, TTTree, TwoThreeError, Violation};
pub use zipper::{Nonempty, PathChoice, TTPath, TTZipper};
