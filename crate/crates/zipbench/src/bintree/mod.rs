//! Binary trees with value replacement driven by command streams.
//!
//! A command stream is a sequence of moves and sets. Four engines replay
//! the same stream semantics:
//!
//! * [`run_cursor`]: persistent tree, zipper cursor that moves step by step;
//! * [`run_root`]: persistent tree, each set rebuilds the path from the root;
//! * [`MutTree::run_cursor`]: mutable tree, pointer-chasing finger;
//! * [`MutTree::run_root`]: mutable tree, each set re-walks from the root.
//!
//! Cursor engines consume relative streams (with upward moves); root
//! engines consume absolute streams (paths from the root, no upward moves).
//! The [`oracle`] module holds the naive reference fold the engines are
//! tested against.

mod engine;
mod mutable;
pub mod oracle;
mod tree;
mod zipper;

pub use engine::{run_cursor, run_root, Cmd, EngineError, Step};
pub use mutable::{MutTree, NodeId};
pub use tree::{perfect, replace, BinNode, BinTree, Dir, TreeError, MAX_DEPTH};
pub use zipper::BinZipper;
