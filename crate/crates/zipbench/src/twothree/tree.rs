use std::error::Error;
use std::fmt;
use std::sync::Arc;

use crate::counters;

/// Persistent redundant 2-3 tree. `Leaf` is the empty sentinel; data lives
/// in the bottom nodes, the `Node2`/`Node3` whose children are all `Leaf`
/// (a bottom `Node2` holds one value, a bottom `Node3` two). In every
/// deeper node the keys are separators that duplicate the minimum of the
/// subtree to their right, so a descent can route on keys alone.
///
/// Clones are O(1) and share structure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum TTTree {
    #[default]
    Leaf,
    Node2(Arc<Node2>),
    Node3(Arc<Node3>),
}

#[derive(Debug, PartialEq, Eq)]
pub struct Node2 {
    pub left: TTTree,
    pub k1: i64,
    pub right: TTTree,
}

#[derive(Debug, PartialEq, Eq)]
pub struct Node3 {
    pub left: TTTree,
    pub k1: i64,
    pub middle: TTTree,
    pub k2: i64,
    pub right: TTTree,
}

impl TTTree {
    pub fn node2(left: TTTree, k1: i64, right: TTTree) -> TTTree {
        counters::tt_node_built();
        TTTree::Node2(Arc::new(Node2 { left, k1, right }))
    }

    pub fn node3(left: TTTree, k1: i64, middle: TTTree, k2: i64, right: TTTree) -> TTTree {
        counters::tt_node_built();
        TTTree::Node3(Arc::new(Node3 {
            left,
            k1,
            middle,
            k2,
            right,
        }))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TTTree::Leaf)
    }

    /// True for a node whose children are all `Leaf`, i.e. a data carrier.
    pub fn is_bottom(&self) -> bool {
        match self {
            TTTree::Leaf => false,
            TTTree::Node2(n) => n.left.is_leaf() && n.right.is_leaf(),
            TTTree::Node3(n) => n.left.is_leaf() && n.middle.is_leaf() && n.right.is_leaf(),
        }
    }

    /// Node levels above the sentinels, measured along the left spine
    /// (every spine has the same length in a well-formed tree). Leaf is 0,
    /// a single bottom node is 1.
    pub fn height(&self) -> usize {
        let mut h = 0;
        let mut cur = self;
        loop {
            cur = match cur {
                TTTree::Leaf => return h,
                TTTree::Node2(n) => &n.left,
                TTTree::Node3(n) => &n.left,
            };
            h += 1;
        }
    }

    pub fn node_count(&self) -> u64 {
        match self {
            TTTree::Leaf => 0,
            TTTree::Node2(n) => 1 + n.left.node_count() + n.right.node_count(),
            TTTree::Node3(n) => {
                1 + n.left.node_count() + n.middle.node_count() + n.right.node_count()
            }
        }
    }

    /// Smallest stored value: first key of the leftmost bottom node.
    pub fn min_value(&self) -> Option<i64> {
        let mut cur = self;
        loop {
            cur = match cur {
                TTTree::Leaf => return None,
                TTTree::Node2(n) if n.left.is_leaf() => return Some(n.k1),
                TTTree::Node3(n) if n.left.is_leaf() => return Some(n.k1),
                TTTree::Node2(n) => &n.left,
                TTTree::Node3(n) => &n.left,
            };
        }
    }

    /// All stored values, left to right; test-sized trees only.
    pub fn values_in_order(&self) -> Vec<i64> {
        fn walk(t: &TTTree, out: &mut Vec<i64>) {
            match t {
                TTTree::Leaf => {}
                TTTree::Node2(n) if t.is_bottom() => out.push(n.k1),
                TTTree::Node3(n) if t.is_bottom() => out.extend([n.k1, n.k2]),
                TTTree::Node2(n) => {
                    walk(&n.left, out);
                    walk(&n.right, out);
                }
                TTTree::Node3(n) => {
                    walk(&n.left, out);
                    walk(&n.middle, out);
                    walk(&n.right, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

impl fmt::Display for TTTree {
    /// Compact notation: bottom nodes as `Node2{5}` / `Node3{2,3}`, deeper
    /// nodes with their children spelled out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TTTree::Leaf => write!(f, "Leaf"),
            TTTree::Node2(n) if self.is_bottom() => write!(f, "Node2{{{}}}", n.k1),
            TTTree::Node3(n) if self.is_bottom() => write!(f, "Node3{{{},{}}}", n.k1, n.k2),
            TTTree::Node2(n) => write!(f, "Node2({}, {}, {})", n.left, n.k1, n.right),
            TTTree::Node3(n) => write!(
                f,
                "Node3({}, {}, {}, {}, {})",
                n.left, n.k1, n.middle, n.k2, n.right
            ),
        }
    }
}

// ---------------------------------------------------------------------------
// errors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoThreeError {
    Duplicate { value: i64 },
    NotBelowMinimum { value: i64, minimum: i64 },
    EmptyTree,
}

impl fmt::Display for TwoThreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoThreeError::Duplicate { value } => {
                write!(f, "value {value} is already in the tree")
            }
            TwoThreeError::NotBelowMinimum { value, minimum } => write!(
                f,
                "value {value} is not below the tree minimum {minimum}"
            ),
            TwoThreeError::EmptyTree => write!(f, "empty tree"),
        }
    }
}

impl Error for TwoThreeError {}

// ---------------------------------------------------------------------------
// insertion from the root
// ---------------------------------------------------------------------------

/// Outcome of inserting into one subtree: either a replacement, or a split
/// that hands the parent a replacement, a separator, and a new right
/// sibling. The separator duplicates the minimum stored under the sibling.
enum Ins {
    Done(TTTree),
    Split(TTTree, i64, TTTree),
}

/// Insert `v`, descending from the root on separators. Splits propagate
/// back up the recursion; a split surviving past the root grows the tree
/// by one level. All values must be distinct.
pub fn insert_root(t: &TTTree, v: i64) -> Result<TTTree, TwoThreeError> {
    Ok(match insert_rec(t, v)? {
        Ins::Done(t) => t,
        Ins::Split(left, sep, right) => TTTree::node2(left, sep, right),
    })
}

fn insert_rec(t: &TTTree, v: i64) -> Result<Ins, TwoThreeError> {
    match t {
        // Only reachable for the empty tree as a whole: descents stop at
        // bottom nodes.
        TTTree::Leaf => Ok(Ins::Done(TTTree::node2(TTTree::Leaf, v, TTTree::Leaf))),
        TTTree::Node2(n) if t.is_bottom() => {
            if v == n.k1 {
                return Err(TwoThreeError::Duplicate { value: v });
            }
            let (a, b) = if v < n.k1 { (v, n.k1) } else { (n.k1, v) };
            Ok(Ins::Done(TTTree::node3(
                TTTree::Leaf,
                a,
                TTTree::Leaf,
                b,
                TTTree::Leaf,
            )))
        }
        TTTree::Node3(n) if t.is_bottom() => {
            if v == n.k1 || v == n.k2 {
                return Err(TwoThreeError::Duplicate { value: v });
            }
            // Overflow: the three values redistribute into a 2-node with
            // the smallest and a 3-node with the other two, so a new
            // minimum ends up alone in the 2-node. The separator handed up
            // duplicates the 3-node's first value.
            counters::bottom_split();
            let (a, b, c) = sort3(v, n.k1, n.k2);
            Ok(Ins::Split(
                TTTree::node2(TTTree::Leaf, a, TTTree::Leaf),
                b,
                TTTree::node3(TTTree::Leaf, b, TTTree::Leaf, c, TTTree::Leaf),
            ))
        }
        TTTree::Node2(n) => {
            if v < n.k1 {
                Ok(match insert_rec(&n.left, v)? {
                    Ins::Done(l) => Ins::Done(TTTree::node2(l, n.k1, n.right.clone())),
                    Ins::Split(l, s, sib) => {
                        Ins::Done(TTTree::node3(l, s, sib, n.k1, n.right.clone()))
                    }
                })
            } else {
                Ok(match insert_rec(&n.right, v)? {
                    Ins::Done(r) => Ins::Done(TTTree::node2(n.left.clone(), n.k1, r)),
                    Ins::Split(r, s, sib) => {
                        Ins::Done(TTTree::node3(n.left.clone(), n.k1, r, s, sib))
                    }
                })
            }
        }
        TTTree::Node3(n) => {
            // A split child leaves four subtrees and three separators; the
            // level rebuilds as two 2-nodes and the middle separator climbs
            // without being duplicated.
            if v < n.k1 {
                Ok(match insert_rec(&n.left, v)? {
                    Ins::Done(l) => Ins::Done(TTTree::node3(
                        l,
                        n.k1,
                        n.middle.clone(),
                        n.k2,
                        n.right.clone(),
                    )),
                    Ins::Split(l, s, sib) => {
                        counters::inner_split();
                        Ins::Split(
                            TTTree::node2(l, s, sib),
                            n.k1,
                            TTTree::node2(n.middle.clone(), n.k2, n.right.clone()),
                        )
                    }
                })
            } else if v < n.k2 {
                Ok(match insert_rec(&n.middle, v)? {
                    Ins::Done(m) => Ins::Done(TTTree::node3(
                        n.left.clone(),
                        n.k1,
                        m,
                        n.k2,
                        n.right.clone(),
                    )),
                    Ins::Split(m, s, sib) => {
                        counters::inner_split();
                        Ins::Split(
                            TTTree::node2(n.left.clone(), n.k1, m),
                            s,
                            TTTree::node2(sib, n.k2, n.right.clone()),
                        )
                    }
                })
            } else {
                Ok(match insert_rec(&n.right, v)? {
                    Ins::Done(r) => Ins::Done(TTTree::node3(
                        n.left.clone(),
                        n.k1,
                        n.middle.clone(),
                        n.k2,
                        r,
                    )),
                    Ins::Split(r, s, sib) => {
                        counters::inner_split();
                        Ins::Split(
                            TTTree::node2(n.left.clone(), n.k1, n.middle.clone()),
                            n.k2,
                            TTTree::node2(r, s, sib),
                        )
                    }
                })
            }
        }
    }
}

fn sort3(a: i64, b: i64, c: i64) -> (i64, i64, i64) {
    let mut v = [a, b, c];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

// ---------------------------------------------------------------------------
// invariant checking
// ---------------------------------------------------------------------------

/// One broken invariant, located by a dotted path from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.path, self.rule, self.message)
    }
}

/// What a subtree walk learned: the range of sentinel depths underneath,
/// and the range of stored values (None under value-free garbage).
struct Info {
    depth_lo: usize,
    depth_hi: usize,
    min: Option<i64>,
    max: Option<i64>,
}

/// Check every structural invariant and report all violations found:
/// uniform sentinel depth, separators duplicating right-subtree minima,
/// and strict left-to-right value order. Empty on a well-formed tree.
pub fn check_invariants(t: &TTTree) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut segs = Vec::new();
    walk(t, 0, &mut segs, &mut out);
    out
}

fn path_str(segs: &[&str]) -> String {
    if segs.is_empty() {
        "root".to_string()
    } else {
        format!("root.{}", segs.join("."))
    }
}

fn walk(t: &TTTree, depth: usize, segs: &mut Vec<&'static str>, out: &mut Vec<Violation>) -> Info {
    match t {
        TTTree::Leaf => Info {
            depth_lo: depth,
            depth_hi: depth,
            min: None,
            max: None,
        },
        TTTree::Node2(n) => {
            let here = segs.len();
            segs.push("left");
            let il = walk(&n.left, depth + 1, segs, out);
            segs[here] = "right";
            let ir = walk(&n.right, depth + 1, segs, out);
            segs.pop();

            if t.is_bottom() {
                return Info {
                    depth_lo: depth + 1,
                    depth_hi: depth + 1,
                    min: Some(n.k1),
                    max: Some(n.k1),
                };
            }
            check_depths(&[&il, &ir], segs, out);
            if let Some(rmin) = ir.min {
                if n.k1 != rmin {
                    out.push(Violation {
                        path: path_str(segs),
                        rule: "redundancy",
                        message: format!(
                            "separator {} is not the minimum {rmin} of the subtree to its right",
                            n.k1
                        ),
                    });
                }
            }
            check_order(&il, &ir, segs, out);
            combine(&[il, ir])
        }
        TTTree::Node3(n) => {
            let here = segs.len();
            segs.push("left");
            let il = walk(&n.left, depth + 1, segs, out);
            segs[here] = "middle";
            let im = walk(&n.middle, depth + 1, segs, out);
            segs[here] = "right";
            let ir = walk(&n.right, depth + 1, segs, out);
            segs.pop();

            if t.is_bottom() {
                if n.k1 >= n.k2 {
                    out.push(Violation {
                        path: path_str(segs),
                        rule: "sorted-order",
                        message: format!("bottom node holds {} before {}", n.k1, n.k2),
                    });
                }
                return Info {
                    depth_lo: depth + 1,
                    depth_hi: depth + 1,
                    min: Some(n.k1.min(n.k2)),
                    max: Some(n.k1.max(n.k2)),
                };
            }
            check_depths(&[&il, &im, &ir], segs, out);
            for (sep, inf) in [(n.k1, &im), (n.k2, &ir)] {
                if let Some(rmin) = inf.min {
                    if sep != rmin {
                        out.push(Violation {
                            path: path_str(segs),
                            rule: "redundancy",
                            message: format!(
                                "separator {sep} is not the minimum {rmin} of the subtree to its right"
                            ),
                        });
                    }
                }
            }
            check_order(&il, &im, segs, out);
            check_order(&im, &ir, segs, out);
            combine(&[il, im, ir])
        }
    }
}

/// Flag a node whose children sit at different (internally uniform)
/// sentinel depths. A child whose own subtree already disagrees with
/// itself was flagged further down.
fn check_depths(children: &[&Info], segs: &[&'static str], out: &mut Vec<Violation>) {
    let uniform: Vec<usize> = children
        .iter()
        .filter(|i| i.depth_lo == i.depth_hi)
        .map(|i| i.depth_lo)
        .collect();
    if uniform.len() == children.len() && uniform.windows(2).any(|w| w[0] != w[1]) {
        out.push(Violation {
            path: path_str(segs),
            rule: "uniform-depth",
            message: format!("sentinel depths differ across children: {uniform:?}"),
        });
    }
}

fn check_order(left: &Info, right: &Info, segs: &[&'static str], out: &mut Vec<Violation>) {
    if let (Some(lmax), Some(rmin)) = (left.max, right.min) {
        if lmax >= rmin {
            out.push(Violation {
                path: path_str(segs),
                rule: "sorted-order",
                message: format!("value {lmax} on the left is not below {rmin} on the right"),
            });
        }
    }
}

fn combine(infos: &[Info]) -> Info {
    Info {
        depth_lo: infos.iter().map(|i| i.depth_lo).min().unwrap(),
        depth_hi: infos.iter().map(|i| i.depth_hi).max().unwrap(),
        min: infos.iter().filter_map(|i| i.min).min(),
        max: infos.iter().filter_map(|i| i.max).max(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn insert_into_empty() {
        let t = insert_root(&TTTree::Leaf, 5).unwrap();
        assert_eq!(t, bottom2(5));
        assert_eq!(t.to_string(), "Node2{5}");
        assert_eq!(t.height(), 1);
        assert_eq!(t.min_value(), Some(5));
    }

    #[test]
    fn three_two_one_reaches_the_first_split() {
        let t1 = insert_root(&TTTree::Leaf, 3).unwrap();
        assert_eq!(t1, bottom2(3));
        let t2 = insert_root(&t1, 2).unwrap();
        assert_eq!(t2, bottom3(2, 3));
        let t3 = insert_root(&t2, 1).unwrap();
        // The new minimum sits alone in a 2-node; the pushed-up separator
        // duplicates the right bottom node's minimum.
        assert_eq!(t3, TTTree::node2(bottom2(1), 2, bottom3(2, 3)));
        assert_eq!(t3.to_string(), "Node2(Node2{1}, 2, Node3{2,3})");
        assert_eq!(t3.height(), 2);
    }

    #[test]
    fn duplicates_are_rejected() {
        let t = descending_chain(3);
        for v in 1..=3 {
            assert_eq!(insert_root(&t, v), Err(TwoThreeError::Duplicate { value: v }));
        }
        assert!(insert_root(&t, 0).is_ok());
        assert!(insert_root(&t, 4).is_ok());
    }

    #[test]
    fn descending_split_cadence() {
        // Bottom nodes split on insertions 3, 5, 7, 9, ...: every second
        // insertion once the first bottom node is full.
        counters::reset_splits();
        let mut t = TTTree::Leaf;
        let mut seen = Vec::new();
        for (i, v) in (1..=10).rev().enumerate() {
            t = insert_root(&t, v).unwrap();
            let i = i as u64 + 1;
            assert_eq!(counters::bottom_splits(), (i - 1) / 2, "after insertion {i}");
            if counters::bottom_splits() > seen.len() as u64 {
                seen.push(i);
            }
        }
        assert_eq!(seen, vec![3, 5, 7, 9]);
    }

    #[test]
    fn in_order_read_is_reverse_of_descending_input() {
        let t = descending_chain(50);
        assert_eq!(t.values_in_order(), (1..=50).collect::<Vec<_>>());
        assert_eq!(t.min_value(), Some(1));
    }

    #[test]
    fn mixed_order_inserts_stay_sorted_and_valid() {
        let mut t = TTTree::Leaf;
        for v in [5, 2, 8, 1, 9, 3, 7, 4, 6, 0] {
            t = insert_root(&t, v).unwrap();
            assert_eq!(check_invariants(&t), vec![]);
        }
        assert_eq!(t.values_in_order(), (0..=9).collect::<Vec<_>>());
    }

    #[test]
    fn chains_keep_every_invariant() {
        let mut t = TTTree::Leaf;
        for v in (1..=100).rev() {
            t = insert_root(&t, v).unwrap();
            assert_eq!(check_invariants(&t), vec![]);
        }
    }

    #[test]
    fn checker_reports_redundancy_break() {
        // 99 is not the minimum of the right subtree.
        let bad = TTTree::node2(bottom2(1), 99, bottom2(5));
        let vs = check_invariants(&bad);
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].rule, "redundancy");
        assert_eq!(vs[0].path, "root");
        assert!(vs[0].message.contains("99"));
    }

    #[test]
    fn checker_reports_depth_break() {
        let bad = TTTree::node2(TTTree::node2(bottom2(1), 2, bottom2(2)), 5, bottom2(5));
        let vs = check_invariants(&bad);
        assert!(vs.iter().any(|v| v.rule == "uniform-depth" && v.path == "root"));
    }

    #[test]
    fn checker_reports_order_breaks() {
        let vs = check_invariants(&bottom3(5, 3));
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].rule, "sorted-order");

        // Left values must stay below right values even when the local
        // separator is consistent.
        let bad = TTTree::node2(bottom2(7), 5, bottom2(5));
        let vs = check_invariants(&bad);
        assert!(vs.iter().any(|v| v.rule == "sorted-order"));
    }

    #[test]
    fn checker_accepts_leaf_and_singletons() {
        assert_eq!(check_invariants(&TTTree::Leaf), vec![]);
        assert_eq!(check_invariants(&bottom2(42)), vec![]);
        assert_eq!(check_invariants(&bottom3(1, 2)), vec![]);
    }

    #[test]
    fn trees_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<TTTree>();
    }

    #[cfg(feature = "count-nodes")]
    #[test]
    fn root_insertion_copies_at_least_the_descent_path() {
        let mut t = TTTree::Leaf;
        for v in (1..=200).rev() {
            let before = t.height() as u64;
            crate::counters::reset_node_counts();
            t = insert_root(&t, v).unwrap();
            assert!(
                crate::counters::tt_nodes() >= before,
                "insertion of {v} built {} nodes, height was {before}",
                crate::counters::tt_nodes()
            );
        }
    }
}
