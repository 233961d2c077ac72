use super::engine::{Cmd, EngineError, Step};
use super::tree::{BinTree, Dir, TreeError, MAX_DEPTH};
use crate::counters;

/// Index of a node in a [`MutTree`] arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeId(u32);

#[derive(Debug, Clone)]
struct MutNode {
    value: i64,
    parent: Option<NodeId>,
    left: Option<NodeId>,
    right: Option<NodeId>,
}

/// Mutable binary tree: arena-allocated nodes wired with parent and child
/// links, plus a finger remembering where the cursor last stood. Confined
/// to one thread at a time by `&mut`; replay mutates values in place and
/// never allocates.
#[derive(Debug, Clone)]
pub struct MutTree {
    nodes: Vec<MutNode>,
    root: NodeId,
    finger: NodeId,
}

impl MutTree {
    /// Perfect tree of the given depth, values drawn from `fill` in
    /// preorder, same contract as the persistent [`perfect`](super::perfect).
    pub fn perfect(depth: u32, fill: &mut dyn FnMut() -> i64) -> Result<MutTree, TreeError> {
        if depth == 0 || depth > MAX_DEPTH {
            return Err(TreeError::DepthOutOfRange { depth });
        }
        let mut nodes = Vec::with_capacity((1usize << depth) - 1);
        fn build(
            levels: u32,
            parent: Option<NodeId>,
            nodes: &mut Vec<MutNode>,
            fill: &mut dyn FnMut() -> i64,
        ) -> Option<NodeId> {
            if levels == 0 {
                return None;
            }
            let id = NodeId(nodes.len() as u32);
            counters::bin_node_built();
            nodes.push(MutNode {
                value: fill(),
                parent,
                left: None,
                right: None,
            });
            let left = build(levels - 1, Some(id), nodes, fill);
            let right = build(levels - 1, Some(id), nodes, fill);
            nodes[id.0 as usize].left = left;
            nodes[id.0 as usize].right = right;
            Some(id)
        }
        let root = build(depth, None, &mut nodes, fill).expect("depth >= 1");
        Ok(MutTree {
            nodes,
            root,
            finger: root,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn finger(&self) -> NodeId {
        self.finger
    }

    pub fn value(&self, id: NodeId) -> i64 {
        self.nodes[id.0 as usize].value
    }

    pub fn node_count(&self) -> u64 {
        self.nodes.len() as u64
    }

    fn node(&self, id: NodeId) -> &MutNode {
        &self.nodes[id.0 as usize]
    }

    /// Value at the end of `path` from the root, if present.
    pub fn value_at(&self, path: &[Dir]) -> Option<i64> {
        let mut cur = self.root;
        for d in path {
            let n = self.node(cur);
            cur = match d {
                Dir::Left => n.left?,
                Dir::Right => n.right?,
            };
        }
        Some(self.node(cur).value)
    }

    /// Structural snapshot as a persistent tree.
    pub fn to_bintree(&self) -> BinTree {
        fn conv(t: &MutTree, id: Option<NodeId>) -> BinTree {
            match id {
                None => BinTree::leaf(),
                Some(id) => {
                    let n = t.node(id);
                    BinTree::node(conv(t, n.left), n.value, conv(t, n.right))
                }
            }
        }
        conv(self, Some(self.root))
    }

    /// Replay a cursor stream by chasing parent and child links from the
    /// finger. The finger persists across calls.
    pub fn run_cursor(&mut self, cmds: &[Cmd]) -> Result<(), EngineError> {
        let mut cur = self.finger;
        for (index, cmd) in cmds.iter().enumerate() {
            match *cmd {
                Cmd::Mov(Step::Left) => {
                    cur = self
                        .node(cur)
                        .left
                        .ok_or(EngineError::MoveIntoEmpty { index })?;
                }
                Cmd::Mov(Step::Right) => {
                    cur = self
                        .node(cur)
                        .right
                        .ok_or(EngineError::MoveIntoEmpty { index })?;
                }
                Cmd::Mov(Step::Up) => {
                    cur = self
                        .node(cur)
                        .parent
                        .ok_or(EngineError::MoveUpAtRoot { index })?;
                }
                Cmd::Set(v) => self.nodes[cur.0 as usize].value = v,
            }
        }
        self.finger = cur;
        Ok(())
    }

    /// Replay a root-anchored stream: moves walk down eagerly, each set
    /// writes and snaps back to the root.
    pub fn run_root(&mut self, cmds: &[Cmd]) -> Result<(), EngineError> {
        let mut cur = self.root;
        for (index, cmd) in cmds.iter().enumerate() {
            match *cmd {
                Cmd::Mov(Step::Left) => {
                    cur = self
                        .node(cur)
                        .left
                        .ok_or(EngineError::MoveIntoEmpty { index })?;
                }
                Cmd::Mov(Step::Right) => {
                    cur = self
                        .node(cur)
                        .right
                        .ok_or(EngineError::MoveIntoEmpty { index })?;
                }
                Cmd::Mov(Step::Up) => {
                    return Err(EngineError::UpwardMoveInRootStream { index });
                }
                Cmd::Set(v) => {
                    self.nodes[cur.0 as usize].value = v;
                    cur = self.root;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Cmd::{Mov, Set};
    use Step::{Left, Right, Up};

    fn counter_fill() -> impl FnMut() -> i64 {
        let mut next = 0;
        move || {
            let v = next;
            next += 1;
            v
        }
    }

    #[test]
    fn perfect_matches_persistent_layout() {
        let mt = MutTree::perfect(3, &mut counter_fill()).unwrap();
        assert_eq!(mt.node_count(), 7);
        let pt = super::super::tree::perfect(3, &mut counter_fill()).unwrap();
        assert_eq!(mt.to_bintree(), pt);
        assert_eq!(mt.value_at(&[Dir::Right, Dir::Left]), Some(5));
    }

    #[test]
    fn cursor_keeps_finger_between_streams() {
        let mut mt = MutTree::perfect(3, &mut counter_fill()).unwrap();
        assert_eq!(mt.finger(), mt.root());
        mt.run_cursor(&[Mov(Left), Set(10)]).unwrap();
        assert_eq!(mt.value(mt.finger()), 10);
        // Next stream continues from the finger, not the root.
        mt.run_cursor(&[Mov(Left), Set(20)]).unwrap();
        assert_eq!(mt.value_at(&[Dir::Left, Dir::Left]), Some(20));
        mt.run_cursor(&[Mov(Up), Mov(Up)]).unwrap();
        assert_eq!(mt.finger(), mt.root());
    }

    #[test]
    fn root_replay_matches_cursor_replay() {
        let mut a = MutTree::perfect(3, &mut counter_fill()).unwrap();
        let mut b = MutTree::perfect(3, &mut counter_fill()).unwrap();
        a.run_cursor(&[Mov(Left), Set(10), Mov(Up), Mov(Right), Set(40)])
            .unwrap();
        b.run_root(&[Mov(Left), Set(10), Mov(Right), Set(40)]).unwrap();
        assert_eq!(a.to_bintree(), b.to_bintree());
    }

    #[test]
    fn errors_name_the_command() {
        let mut mt = MutTree::perfect(2, &mut counter_fill()).unwrap();
        assert_eq!(
            mt.run_cursor(&[Mov(Up)]),
            Err(EngineError::MoveUpAtRoot { index: 0 })
        );
        assert_eq!(
            mt.run_cursor(&[Mov(Left), Mov(Left)]),
            Err(EngineError::MoveIntoEmpty { index: 1 })
        );
        assert_eq!(
            mt.run_root(&[Mov(Up)]),
            Err(EngineError::UpwardMoveInRootStream { index: 0 })
        );
    }

    #[cfg(feature = "count-nodes")]
    #[test]
    fn replay_allocates_nothing() {
        use crate::counters;
        let mut mt = MutTree::perfect(4, &mut counter_fill()).unwrap();
        counters::reset_node_counts();
        mt.run_cursor(&[Mov(Left), Set(1), Mov(Up), Mov(Right), Set(2)])
            .unwrap();
        mt.run_root(&[Mov(Left), Set(3)]).unwrap();
        assert_eq!(counters::bin_nodes(), 0);
    }
}
