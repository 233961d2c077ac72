use crate::counters;

use super::tree::{TTTree, TwoThreeError};

/// Arena index of a live node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NodeId(u32);

/// One mutable node: room for a 3-node, an arity flag saying how much of
/// it is in use, and a parent link for upward split propagation. Bottom
/// nodes have no children and use `values` as data; deeper nodes use it
/// for separators.
#[derive(Debug, Clone)]
struct MutNode {
    values: [i64; 2],
    children: [Option<NodeId>; 3],
    parent: Option<NodeId>,
    is_two: bool,
}

/// Mutable redundant 2-3 tree over an arena, with a designated root and a
/// finger on the bottom node that received the last insertion. Insertions
/// only ever add nodes, so the arena is never compacted.
#[derive(Debug, Default)]
pub struct MutTTTree {
    nodes: Vec<MutNode>,
    root: Option<NodeId>,
    last_inserted: Option<NodeId>,
}

impl MutTTTree {
    pub fn new() -> MutTTTree {
        MutTTTree::default()
    }

    fn node(&self, id: NodeId) -> &MutNode {
        &self.nodes[id.0 as usize]
    }

    fn node_mut(&mut self, id: NodeId) -> &mut MutNode {
        &mut self.nodes[id.0 as usize]
    }

    fn alloc(&mut self, node: MutNode) -> NodeId {
        counters::tt_node_built();
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn node_count(&self) -> u64 {
        self.nodes.len() as u64
    }

    /// Smallest stored value, read in O(1) off the finger: every
    /// insertion is a new minimum, so the finger's node holds it first.
    pub fn min_value(&self) -> Option<i64> {
        self.last_inserted.map(|id| self.node(id).values[0])
    }

    pub fn height(&self) -> usize {
        let mut h = 0;
        let mut cur = self.root;
        while let Some(id) = cur {
            h += 1;
            cur = self.node(id).children[0];
        }
        h
    }

    /// All stored values, left to right; test-sized trees only.
    pub fn values_in_order(&self) -> Vec<i64> {
        fn walk(t: &MutTTTree, id: NodeId, out: &mut Vec<i64>) {
            let n = t.node(id);
            let arity = if n.is_two { 2 } else { 3 };
            if n.children[0].is_none() {
                out.extend(&n.values[..arity - 1]);
                return;
            }
            for c in n.children[..arity].iter().flatten() {
                walk(t, *c, out);
            }
        }
        let mut out = Vec::new();
        if let Some(root) = self.root {
            walk(self, root, &mut out);
        }
        out
    }

    /// Persistent snapshot, structurally equal to what the persistent
    /// engines build from the same insertions. Builds (and counts) one
    /// persistent node per arena node.
    pub fn to_tree(&self) -> TTTree {
        fn build(t: &MutTTTree, id: Option<NodeId>) -> TTTree {
            let Some(id) = id else {
                return TTTree::Leaf;
            };
            let n = t.node(id);
            if n.is_two {
                TTTree::node2(
                    build(t, n.children[0]),
                    n.values[0],
                    build(t, n.children[1]),
                )
            } else {
                TTTree::node3(
                    build(t, n.children[0]),
                    n.values[0],
                    build(t, n.children[1]),
                    n.values[1],
                    build(t, n.children[2]),
                )
            }
        }
        build(self, self.root)
    }

    /// Insert a new minimum, descending from the root and comparing
    /// separators at every level to find the bottom node.
    pub fn insert_root(&mut self, v: i64) -> Result<(), TwoThreeError> {
        self.check_minimum(v)?;
        let Some(mut cur) = self.root else {
            return Ok(self.insert_first(v));
        };
        loop {
            let n = self.node(cur);
            if n.children[0].is_none() {
                break;
            }
            let next = if v < n.values[0] {
                n.children[0]
            } else if n.is_two || v < n.values[1] {
                n.children[1]
            } else {
                n.children[2]
            };
            cur = next.expect("uniform depth: sibling children exist together");
        }
        self.insert_at_bottom(cur, v);
        Ok(())
    }

    /// Insert a new minimum directly at the finger, with no search at all.
    pub fn insert_finger(&mut self, v: i64) -> Result<(), TwoThreeError> {
        self.check_minimum(v)?;
        match self.last_inserted {
            None => Ok(self.insert_first(v)),
            Some(at) => {
                self.insert_at_bottom(at, v);
                Ok(())
            }
        }
    }

    fn check_minimum(&self, v: i64) -> Result<(), TwoThreeError> {
        match self.min_value() {
            Some(minimum) if v >= minimum => {
                Err(TwoThreeError::NotBelowMinimum { value: v, minimum })
            }
            _ => Ok(()),
        }
    }

    fn insert_first(&mut self, v: i64) {
        let id = self.alloc(MutNode {
            values: [v, 0],
            children: [None; 3],
            parent: None,
            is_two: true,
        });
        self.root = Some(id);
        self.last_inserted = Some(id);
    }

    /// Insert the new minimum `v` into the bottom node `at`. A 2-node
    /// absorbs it in place; a 3-node redistributes: the original keeps
    /// only `v`, a fresh right sibling takes the old pair, and the
    /// sibling's first value climbs as the separator.
    fn insert_at_bottom(&mut self, at: NodeId, v: i64) {
        let n = self.node_mut(at);
        debug_assert!(n.children[0].is_none(), "finger must point at a bottom node");
        if n.is_two {
            n.values = [v, n.values[0]];
            n.is_two = false;
        } else {
            counters::bottom_split();
            let pair = n.values;
            n.values[0] = v;
            n.is_two = true;
            let parent = n.parent;
            let sibling = self.alloc(MutNode {
                values: pair,
                children: [None; 3],
                parent,
                is_two: false,
            });
            self.push_up(parent, at, pair[0], sibling);
        }
        self.last_inserted = Some(at);
    }

    /// Hand `(sep, new)` to `parent`, placing `new` immediately right of
    /// `left`. A 2-node absorbs the pair; a 3-node redistributes its four
    /// children into two 2-nodes (keeping the first two, a fresh sibling
    /// taking the rest) and pushes the middle separator further, without
    /// duplicating it. Past the root, a new root forms.
    fn push_up(&mut self, parent: Option<NodeId>, left: NodeId, sep: i64, new: NodeId) {
        let Some(p) = parent else {
            let root = self.alloc(MutNode {
                values: [sep, 0],
                children: [Some(left), Some(new), None],
                parent: None,
                is_two: true,
            });
            self.node_mut(left).parent = Some(root);
            self.node_mut(new).parent = Some(root);
            self.root = Some(root);
            return;
        };

        let pn = self.node(p);
        let arity = if pn.is_two { 2 } else { 3 };
        let mut ch = [pn.children[0], pn.children[1], pn.children[2], None];
        let mut seps = [pn.values[0], pn.values[1], 0];
        let at = ch[..arity]
            .iter()
            .position(|c| *c == Some(left))
            .expect("parent links point at an actual parent");
        // Splice the new child after `left` and the separator before the
        // ones that follow it.
        for j in (at + 1..arity).rev() {
            ch[j + 1] = ch[j];
        }
        ch[at + 1] = Some(new);
        for j in (at..arity - 1).rev() {
            seps[j + 1] = seps[j];
        }
        seps[at] = sep;

        if arity == 2 {
            let pn = self.node_mut(p);
            pn.children = [ch[0], ch[1], ch[2]];
            pn.values = [seps[0], seps[1]];
            pn.is_two = false;
            self.node_mut(new).parent = Some(p);
        } else {
            counters::inner_split();
            let grand = self.node(p).parent;
            {
                let pn = self.node_mut(p);
                pn.children = [ch[0], ch[1], None];
                pn.values[0] = seps[0];
                pn.is_two = true;
            }
            let sibling = self.alloc(MutNode {
                values: [seps[2], 0],
                children: [ch[2], ch[3], None],
                parent: grand,
                is_two: true,
            });
            for c in [ch[0], ch[1]].into_iter().flatten() {
                self.node_mut(c).parent = Some(p);
            }
            for c in [ch[2], ch[3]].into_iter().flatten() {
                self.node_mut(c).parent = Some(sibling);
            }
            self.push_up(grand, p, seps[1], sibling);
        }
    }
}
