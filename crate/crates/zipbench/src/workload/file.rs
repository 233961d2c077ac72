use std::error::Error;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bintree::{Cmd, Step, MAX_DEPTH};

use super::gen::Scenario;

pub const MAGIC: &str = "zipbench-cmds";
pub const VERSION: u32 = 1;

/// Which replay engine a stream is for: `cursor` streams move relative to
/// the previous position and may contain `M U`; `root` streams spell out
/// absolute paths and reset after every set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Cursor,
    Root,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Cursor => "cursor",
            Encoding::Root => "root",
        })
    }
}

impl FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Encoding, String> {
        match s {
            "cursor" => Ok(Encoding::Cursor),
            "root" => Ok(Encoding::Root),
            other => Err(format!("unknown encoding {other:?}: expected cursor or root")),
        }
    }
}

/// A parsed command-stream file: the header that identifies how it was
/// generated, plus the records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamFile {
    pub encoding: Encoding,
    pub depth: u32,
    /// Number of `S` records the body must contain.
    pub count: u64,
    pub scenario: Scenario,
    pub seed: u64,
    pub cmds: Vec<Cmd>,
}

#[derive(Debug)]
pub enum FileError {
    Io { path: PathBuf, source: io::Error },
    Parse { line: usize, message: String },
    InvalidStream { index: usize, message: String },
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            FileError::Parse { line, message } => write!(f, "line {line}: {message}"),
            FileError::InvalidStream { index, message } => {
                write!(f, "record {index}: {message}")
            }
        }
    }
}

impl Error for FileError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            FileError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// rendering and parsing
// ---------------------------------------------------------------------------

/// The exact bytes of a stream file: six header lines, then one record
/// per line, newline-terminated ASCII throughout.
pub fn render(file: &StreamFile) -> String {
    let mut out = String::with_capacity(64 + 4 * file.cmds.len());
    out.push_str(&format!("{MAGIC} {VERSION}\n"));
    out.push_str(&format!("encoding {}\n", file.encoding));
    out.push_str(&format!("depth {}\n", file.depth));
    out.push_str(&format!("count {}\n", file.count));
    out.push_str(&format!("scenario {}\n", file.scenario));
    out.push_str(&format!("seed {}\n", file.seed));
    for cmd in &file.cmds {
        match cmd {
            Cmd::Mov(Step::Left) => out.push_str("M L\n"),
            Cmd::Mov(Step::Right) => out.push_str("M R\n"),
            Cmd::Mov(Step::Up) => out.push_str("M U\n"),
            Cmd::Set(v) => out.push_str(&format!("S {v}\n")),
        }
    }
    out
}

pub fn parse(text: &str) -> Result<StreamFile, FileError> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() < 6 {
        return Err(FileError::Parse {
            line: lines.len() + 1,
            message: "truncated header: expected six header lines".into(),
        });
    }

    let (magic, version) = lines[0].split_once(' ').unwrap_or((lines[0], ""));
    if magic != MAGIC {
        return Err(FileError::Parse {
            line: 1,
            message: format!("bad magic {magic:?}: expected {MAGIC:?}"),
        });
    }
    if version.parse::<u32>() != Ok(VERSION) {
        return Err(FileError::Parse {
            line: 1,
            message: format!("unsupported version {version:?}: expected {VERSION}"),
        });
    }

    let encoding: Encoding = header_field(&lines, 1, "encoding")?;
    let depth: u32 = header_field(&lines, 2, "depth")?;
    if depth == 0 || depth > MAX_DEPTH {
        return Err(FileError::Parse {
            line: 3,
            message: format!("depth {depth} out of range: expected 1..={MAX_DEPTH}"),
        });
    }
    let count: u64 = header_field(&lines, 3, "count")?;
    let scenario: Scenario = header_field(&lines, 4, "scenario")?;
    let seed: u64 = header_field(&lines, 5, "seed")?;

    let mut cmds = Vec::with_capacity(lines.len() - 6);
    for (i, line) in lines.iter().enumerate().skip(6) {
        let cmd = match *line {
            "M L" => Cmd::Mov(Step::Left),
            "M R" => Cmd::Mov(Step::Right),
            "M U" => Cmd::Mov(Step::Up),
            _ => match line.strip_prefix("S ").map(str::parse::<i64>) {
                Some(Ok(v)) => Cmd::Set(v),
                _ => {
                    return Err(FileError::Parse {
                        line: i + 1,
                        message: format!("unrecognized record {line:?}"),
                    })
                }
            },
        };
        cmds.push(cmd);
    }

    Ok(StreamFile {
        encoding,
        depth,
        count,
        scenario,
        seed,
        cmds,
    })
}

fn header_field<T>(lines: &[&str], index: usize, key: &str) -> Result<T, FileError>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    let line = lines[index];
    let value = match line.split_once(' ') {
        Some((k, v)) if k == key => v,
        _ => {
            return Err(FileError::Parse {
                line: index + 1,
                message: format!("expected `{key} <value>`, found {line:?}"),
            })
        }
    };
    value.parse().map_err(|e: T::Err| FileError::Parse {
        line: index + 1,
        message: format!("bad {key} {value:?}: {e}"),
    })
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

/// Check that the records stay inside a perfect tree of the declared
/// depth, respect the declared encoding, and hold exactly `count` sets.
pub fn validate_stream(file: &StreamFile) -> Result<(), FileError> {
    let deepest = file.depth as usize - 1;
    let mut level = 0usize;
    let mut sets = 0u64;
    for (index, cmd) in file.cmds.iter().enumerate() {
        match cmd {
            Cmd::Mov(Step::Up) => {
                if file.encoding == Encoding::Root {
                    return Err(FileError::InvalidStream {
                        index,
                        message: "upward move in a root-anchored stream".into(),
                    });
                }
                if level == 0 {
                    return Err(FileError::InvalidStream {
                        index,
                        message: "move up at the root".into(),
                    });
                }
                level -= 1;
            }
            Cmd::Mov(_) => {
                if level == deepest {
                    return Err(FileError::InvalidStream {
                        index,
                        message: format!("move below the deepest level of a depth-{} tree", file.depth),
                    });
                }
                level += 1;
            }
            Cmd::Set(_) => {
                sets += 1;
                if file.encoding == Encoding::Root {
                    level = 0;
                }
            }
        }
    }
    if sets != file.count {
        return Err(FileError::InvalidStream {
            index: file.cmds.len(),
            message: format!("stream holds {sets} sets but the header declares {}", file.count),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// files on disk
// ---------------------------------------------------------------------------

pub fn write_stream(path: &Path, file: &StreamFile) -> Result<(), FileError> {
    fs::write(path, render(file)).map_err(|source| FileError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_stream(path: &Path) -> Result<StreamFile, FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse(&text)
}
