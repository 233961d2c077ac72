//! Naive reference semantics for command replay, written directly from the
//! defining equations and kept independent of the engines: no zipper, no
//! sharing tricks, nothing reused from the engine code paths. Valid streams
//! only; the reference semantics does not define error handling, so a bad
//! stream panics here instead of erroring.

use super::engine::{Cmd, Step};
use super::tree::{BinTree, Dir};

/// Path replacement by plain recursion: copy the path, share the rest, and
/// return the subtree unchanged wherever the walk leaves the tree.
pub fn replace_spec(value: i64, dirs: &[Dir], tree: &BinTree) -> BinTree {
    match (tree.as_node(), dirs.split_first()) {
        (Some(n), None) => BinTree::node(n.left.clone(), value, n.right.clone()),
        (Some(n), Some((Dir::Left, rest))) => BinTree::node(
            replace_spec(value, rest, &n.left),
            n.value,
            n.right.clone(),
        ),
        (Some(n), Some((Dir::Right, rest))) => BinTree::node(
            n.left.clone(),
            n.value,
            replace_spec(value, rest, &n.right),
        ),
        (None, _) => tree.clone(),
    }
}

/// Cursor semantics as a fold: keep the direction stack across commands,
/// `Up` pops, and every `Set` replaces along the stack so far.
pub fn cursor_fold(tree: &BinTree, cmds: &[Cmd]) -> BinTree {
    let mut t = tree.clone();
    let mut ds: Vec<Dir> = Vec::new();
    for cmd in cmds {
        match *cmd {
            Cmd::Mov(Step::Left) => ds.push(Dir::Left),
            Cmd::Mov(Step::Right) => ds.push(Dir::Right),
            Cmd::Mov(Step::Up) => {
                ds.pop().expect("cursor fold: up with an empty stack");
            }
            Cmd::Set(v) => t = replace_spec(v, &ds, &t),
        }
    }
    t
}

/// Root-anchored semantics as a fold: the direction stack resets after
/// every `Set`.
pub fn root_fold(tree: &BinTree, cmds: &[Cmd]) -> BinTree {
    let mut t = tree.clone();
    let mut ds: Vec<Dir> = Vec::new();
    for cmd in cmds {
        match *cmd {
            Cmd::Mov(Step::Left) => ds.push(Dir::Left),
            Cmd::Mov(Step::Right) => ds.push(Dir::Right),
            Cmd::Mov(Step::Up) => unreachable!("root fold: upward move"),
            Cmd::Set(v) => {
                t = replace_spec(v, &ds, &t);
                ds.clear();
            }
        }
    }
    t
}
