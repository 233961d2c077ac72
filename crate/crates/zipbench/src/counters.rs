//! Instrumentation counters, all thread-local so parallel test threads
//! never see each other's work.
//!
//! Node-construction counting is compile-time selectable behind the
//! `count-nodes` feature: benchmark builds leave it off and pay nothing,
//! while the test build turns it on through a dev-dependency on this crate
//! with the feature enabled. Split counting is a single predictable
//! increment on a fraction of insertions, cheap enough to stay always on.

use std::cell::Cell;

thread_local! {
    #[cfg(feature = "count-nodes")]
    static BIN_NODES: Cell<u64> = const { Cell::new(0) };
    #[cfg(feature = "count-nodes")]
    static TT_NODES: Cell<u64> = const { Cell::new(0) };
    static BOTTOM_SPLITS: Cell<u64> = const { Cell::new(0) };
    static INNER_SPLITS: Cell<u64> = const { Cell::new(0) };
}

/// Record one binary tree node construction. Compiles to nothing without
/// `count-nodes`.
#[inline(always)]
pub fn bin_node_built() {
    #[cfg(feature = "count-nodes")]
    BIN_NODES.with(|c| c.set(c.get() + 1));
}

/// Record one 2-3 tree node construction. Compiles to nothing without
/// `count-nodes`.
#[inline(always)]
pub fn tt_node_built() {
    #[cfg(feature = "count-nodes")]
    TT_NODES.with(|c| c.set(c.get() + 1));
}

#[cfg(feature = "count-nodes")]
pub fn bin_nodes() -> u64 {
    BIN_NODES.with(|c| c.get())
}

#[cfg(feature = "count-nodes")]
pub fn tt_nodes() -> u64 {
    TT_NODES.with(|c| c.get())
}

#[cfg(feature = "count-nodes")]
pub fn reset_node_counts() {
    BIN_NODES.with(|c| c.set(0));
    TT_NODES.with(|c| c.set(0));
}

/// True when this build can report node-construction counts.
pub fn counting_nodes() -> bool {
    cfg!(feature = "count-nodes")
}

#[inline]
pub fn bottom_split() {
    BOTTOM_SPLITS.with(|c| c.set(c.get() + 1));
}

#[inline]
pub fn inner_split() {
    INNER_SPLITS.with(|c| c.set(c.get() + 1));
}

pub fn bottom_splits() -> u64 {
    BOTTOM_SPLITS.with(|c| c.get())
}

pub fn inner_splits() -> u64 {
    INNER_SPLITS.with(|c| c.get())
}

pub fn reset_splits() {
    BOTTOM_SPLITS.with(|c| c.set(0));
    INNER_SPLITS.with(|c| c.set(0));
}
