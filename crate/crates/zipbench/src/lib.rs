//! Tree editing with a cursor (zipper or finger) versus re-walking from the
//! root, over persistent and mutable representations, plus the type calculus
//! that produces the cursor's context type by differentiation.
//!
//! The library is organized around four data-structure modules and two
//! harness modules:
//!
//! * [`typecalc`]: regular type expressions, differentiation into one-hole
//!   context types, normalization, and finite-model counting.
//! * [`bintree`]: persistent and mutable binary trees with four replay
//!   engines for move/set command streams.
//! * [`twothree`]: redundant 2-3 trees (data in the bottom nodes) with
//!   root-based and cursor-based minimum insertion, persistent and mutable.
//! * [`workload`]: deterministic biased position sampling and paired
//!   cursor/root command stream generation, with a portable text format.
//! * [`bench`]: a repeat-until-time-limit measurement loop with
//!   per-iteration samples and CSV output.
//! * [`verify`]: the oracle and invariant suites behind the `verify`
//!   subcommand of the CLI.

pub mod bench;
pub mod bintree;
pub mod counters;
pub mod rng;
pub mod twothree;
pub mod typecalc;
pub mod verify;
pub mod workload;
