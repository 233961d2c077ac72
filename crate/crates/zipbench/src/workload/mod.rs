//! Command-stream workloads for the traversal benchmarks.
//!
//! A workload is a deterministic stream of `move`/`set` commands over a
//! perfect binary tree, sampled from a scenario that controls how close
//! consecutive target positions stay to one another.  Every workload is
//! generated in two equivalent encodings: a `cursor` stream that walks
//! from each position to the next (and so may move up), and a `root`
//! stream that spells out every path from the root.  Both set the same
//! values at the same positions in the same order.
//!
//! Streams live on disk as plain ASCII files with a small header; see
//! [`render`] for the exact format and [`validate_stream`] for the rules
//! a well-formed stream obeys.

mod file;
mod gen;

use std::error::Error;
use std::fmt;
use std::path::{Path, PathBuf};

pub use file::{
    parse, read_stream, render, validate_stream, write_stream, Encoding, FileError, StreamFile,
    MAGIC, VERSION,
};
pub use gen::{
    encode_cursor, encode_root, generate_pair, moves_per_set, sample_position, GenConfig, GenError,
    Scenario, StreamPair, BOTTOM_STOP_CHANCE, RIGHT_STEP_WEIGHT,
};

#[derive(Debug)]
pub enum WorkloadError {
    Gen(GenError),
    File(FileError),
}

impl fmt::Display for WorkloadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorkloadError::Gen(e) => e.fmt(f),
            WorkloadError::File(e) => e.fmt(f),
        }
    }
}

impl Error for WorkloadError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            WorkloadError::Gen(e) => Some(e),
            WorkloadError::File(e) => Some(e),
        }
    }
}

impl From<GenError> for WorkloadError {
    fn from(e: GenError) -> WorkloadError {
        WorkloadError::Gen(e)
    }
}

impl From<FileError> for WorkloadError {
    fn from(e: FileError) -> WorkloadError {
        WorkloadError::File(e)
    }
}

/// Generate both encodings of a workload and write them next to each
/// other as `<prefix>.cursor.cmds` and `<prefix>.root.cmds`.  Returns the
/// two paths written, cursor first.
pub fn emit_pair(config: &GenConfig, out_prefix: &Path) -> Result<(PathBuf, PathBuf), WorkloadError> {
    let pair = generate_pair(config)?;
    let cursor_path = suffixed(out_prefix, "cursor.cmds");
    let root_path = suffixed(out_prefix, "root.cmds");
    let header = |encoding, cmds| StreamFile {
        encoding,
        depth: config.depth,
        count: config.count,
        scenario: config.scenario,
        seed: config.seed,
        cmds,
    };
    write_stream(&cursor_path, &header(Encoding::Cursor, pair.cursor))?;
    write_stream(&root_path, &header(Encoding::Root, pair.root))?;
    Ok((cursor_path, root_path))
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emit_pair_writes_both_encodings() {
        let dir = tempfile::tempdir().unwrap();
        let config = GenConfig {
            depth: 6,
            count: 200,
            scenario: Scenario::BottomRight,
            seed: 9,
        };
        let (cursor_path, root_path) = emit_pair(&config, &dir.path().join("run")).unwrap();
        assert_eq!(cursor_path, dir.path().join("run.cursor.cmds"));
        assert_eq!(root_path, dir.path().join("run.root.cmds"));

        let cursor = read_stream(&cursor_path).unwrap();
        let root = read_stream(&root_path).unwrap();
        assert_eq!(cursor.encoding, Encoding::Cursor);
        assert_eq!(root.encoding, Encoding::Root);
        assert_eq!(cursor.seed, 9);
        validate_stream(&cursor).unwrap();
        validate_stream(&root).unwrap();

        let expected = generate_pair(&config).unwrap();
        assert_eq!(cursor.cmds, expected.cursor);
        assert_eq!(root.cmds, expected.root);
    }

    #[test]
    fn emitted_files_are_byte_identical_across_runs() {
        let dir = tempfile::tempdir().unwrap();
        let config = GenConfig {
            depth: 5,
            count: 100,
            scenario: Scenario::Right,
            seed: 77,
        };
        let (a, _) = emit_pair(&config, &dir.path().join("first")).unwrap();
        let (b, _) = emit_pair(&config, &dir.path().join("second")).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}
