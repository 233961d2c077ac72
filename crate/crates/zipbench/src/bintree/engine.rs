use std::error::Error;
use std::fmt;

use super::tree::{replace, BinTree, Dir};
use super::zipper::BinZipper;

/// One move of a cursor. Root-anchored streams never contain `Up`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Left,
    Right,
    Up,
}

impl From<Dir> for Step {
    fn from(d: Dir) -> Step {
        match d {
            Dir::Left => Step::Left,
            Dir::Right => Step::Right,
        }
    }
}

/// One command of a replay stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmd {
    Mov(Step),
    Set(i64),
}

/// Replay failure, always naming the offending command index. Invalid moves
/// are hard errors rather than silent no-ops so that a malformed stream
/// cannot quietly produce a plausible-looking tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineError {
    EmptyTree,
    MoveIntoEmpty { index: usize },
    MoveUpAtRoot { index: usize },
    UpwardMoveInRootStream { index: usize },
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::EmptyTree => write!(f, "cannot replay commands against an empty tree"),
            EngineError::MoveIntoEmpty { index } => {
                write!(f, "command {index}: move into an empty subtree")
            }
            EngineError::MoveUpAtRoot { index } => {
                write!(f, "command {index}: move up at the root")
            }
            EngineError::UpwardMoveInRootStream { index } => {
                write!(f, "command {index}: upward move in a root-anchored stream")
            }
        }
    }
}

impl Error for EngineError {}

/// Replay a cursor stream with a zipper. The cursor starts at the root,
/// carries across sets, and the final tree is reassembled from wherever
/// the cursor ends up.
pub fn run_cursor(tree: &BinTree, cmds: &[Cmd]) -> Result<BinTree, EngineError> {
    let mut z = BinZipper::from_tree(tree).ok_or(EngineError::EmptyTree)?;
    for (index, cmd) in cmds.iter().enumerate() {
        z = match *cmd {
            Cmd::Mov(Step::Left) => z
                .down_left()
                .ok_or(EngineError::MoveIntoEmpty { index })?,
            Cmd::Mov(Step::Right) => z
                .down_right()
                .ok_or(EngineError::MoveIntoEmpty { index })?,
            Cmd::Mov(Step::Up) => z.up().ok_or(EngineError::MoveUpAtRoot { index })?,
            Cmd::Set(v) => z.set_focus(v),
        };
    }
    Ok(z.to_tree())
}

/// Replay a root-anchored stream. Moves accumulate a path; each set
/// rebuilds that path from the root and resets it.
pub fn run_root(tree: &BinTree, cmds: &[Cmd]) -> Result<BinTree, EngineError> {
    if tree.is_leaf() {
        return Err(EngineError::EmptyTree);
    }
    let mut t = tree.clone();
    let mut path: Vec<Dir> = Vec::new();
    for (index, cmd) in cmds.iter().enumerate() {
        match *cmd {
            Cmd::Mov(Step::Left) => path.push(Dir::Left),
            Cmd::Mov(Step::Right) => path.push(Dir::Right),
            Cmd::Mov(Step::Up) => {
                return Err(EngineError::UpwardMoveInRootStream { index });
            }
            Cmd::Set(v) => {
                t = replace(&t, &path, v);
                path.clear();
            }
        }
    }
    Ok(t)
}
