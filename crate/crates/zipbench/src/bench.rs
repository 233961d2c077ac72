//! Benchmark harness: repeat a task body until a time limit, time every
//! iteration on the monotonic clock, and report per-iteration mean and
//! sample standard deviation.
//!
//! Two tasks exist.  `traversal` replays a pre-generated command stream
//! against a perfect binary tree that is rebuilt, untimed, before every
//! iteration; only the replay is timed.  `insertion` builds a redundant
//! 2-3 tree from a descending run of integers starting from the empty
//! tree; building *and tearing down* the tree are both inside the timed
//! region, so allocation strategy differences show up in the numbers.
//!
//! Each task runs in one of four variants: `persistent-cursor` and
//! `persistent-root` use the immutable structures (zipper navigation vs
//! path copying from the root), `mutable-cursor` and `mutable-root` use
//! the parent-linked in-place structures (finger vs root descent).
//!
//! Every iteration's result is folded into a running checksum that the
//! caller is expected to print, so the optimizer cannot delete the body.
//! Bodies that finish under [`MIN_BODY_NANOS`] are rejected outright:
//! numbers that small measure the clock, not the workload.

use std::error::Error;
use std::fmt;
use std::fs;
use std::io;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::bintree::{self, BinTree, Dir, EngineError, MutTree};
use crate::twothree::{self, MutTTTree, TTTree, TTZipper, TwoThreeError};
use crate::workload::{read_stream, validate_stream, Encoding, FileError, Scenario, StreamFile};

/// Smallest acceptable duration for one timed iteration, in nanoseconds.
/// Below this the reading is mostly clock overhead.
pub const MIN_BODY_NANOS: u128 = 1000;

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(10);
pub const DEFAULT_MIN_ITERS: u64 = 3;

pub const CSV_HEADER: &str = "task,variant,scenario,size,iterations,mean_ns,stddev_ns";

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Traversal,
    Insertion,
}

impl Task {
    pub const ALL: [Task; 2] = [Task::Traversal, Task::Insertion];
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Traversal => "traversal",
            Task::Insertion => "insertion",
        })
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Task, String> {
        match s {
            "traversal" => Ok(Task::Traversal),
            "insertion" => Ok(Task::Insertion),
            other => Err(format!("unknown task {other:?}: expected traversal or insertion")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    PersistentCursor,
    PersistentRoot,
    MutableCursor,
    MutableRoot,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::PersistentCursor,
        Variant::PersistentRoot,
        Variant::MutableCursor,
        Variant::MutableRoot,
    ];

    /// The stream encoding this variant replays in the traversal task.
    pub fn encoding(self) -> Encoding {
        match self {
            Variant::PersistentCursor | Variant::MutableCursor => Encoding::Cursor,
            Variant::PersistentRoot | Variant::MutableRoot => Encoding::Root,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::PersistentCursor => "persistent-cursor",
            Variant::PersistentRoot => "persistent-root",
            Variant::MutableCursor => "mutable-cursor",
            Variant::MutableRoot => "mutable-root",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Variant, String> {
        match s {
            "persistent-cursor" => Ok(Variant::PersistentCursor),
            "persistent-root" => Ok(Variant::PersistentRoot),
            "mutable-cursor" => Ok(Variant::MutableCursor),
            "mutable-root" => Ok(Variant::MutableRoot),
            other => Err(format!(
                "unknown variant {other:?}: expected persistent-cursor, persistent-root, \
                 mutable-cursor, or mutable-root"
            )),
        }
    }
}

/// One benchmark configuration.  The traversal task needs `input` (a
/// stream file whose encoding matches the variant); the insertion task
/// needs `count` (how many descending elements each iteration inserts).
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub task: Task,
    pub variant: Variant,
    pub input: Option<PathBuf>,
    pub count: Option<u64>,
    pub time_limit: Duration,
    pub min_iters: u64,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.time_limit.is_zero() {
            return Err(BenchError::Config("time limit must be positive".into()));
        }
        if self.min_iters == 0 {
            return Err(BenchError::Config("minimum iteration count must be positive".into()));
        }
        match self.task {
            Task::Traversal => {
                if self.input.is_none() {
                    return Err(BenchError::Config(
                        "the traversal task needs an input stream file".into(),
                    ));
                }
            }
            Task::Insertion => match self.count {
                None => {
                    return Err(BenchError::Config(
                        "the insertion task needs an element count".into(),
                    ))
                }
                Some(0) => {
                    return Err(BenchError::Config("element count must be positive".into()))
                }
                Some(_) => {}
            },
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// results
// ---------------------------------------------------------------------------

/// One measured configuration, in exactly the fields the CSV carries.
/// `size` is the tree depth for traversal and the element count for
/// insertion; `scenario` is set only for traversal.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub task: Task,
    pub variant: Variant,
    pub scenario: Option<Scenario>,
    pub size: u64,
    pub iterations: u64,
    pub mean_ns: f64,
    pub stddev_ns: f64,
}

/// A record plus the raw material behind it: per-iteration samples, the
/// dead-code-defeating checksum (print it!), and the wall time of the
/// timed loop.
#[derive(Debug, Clone)]
pub struct BenchRun {
    pub record: BenchRecord,
    pub samples_ns: Vec<u64>,
    pub checksum: u64,
    pub wall_ns: u128,
}

#[derive(Debug)]
pub enum BenchError {
    Config(String),
    File(FileError),
    EncodingMismatch { variant: Variant, encoding: Encoding },
    BodyTooFast { nanos: u128 },
    Engine(EngineError),
    TwoThree(TwoThreeError),
    Io { path: PathBuf, source: io::Error },
    Csv { line: usize, message: String },
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Config(message) => f.write_str(message),
            BenchError::File(e) => e.fmt(f),
            BenchError::EncodingMismatch { variant, encoding } => write!(
                f,
                "variant {variant} replays {} streams but the input file is {encoding}-encoded",
                variant.encoding()
            ),
            BenchError::BodyTooFast { nanos } => write!(
                f,
                "one iteration finished in {nanos} ns, under the {MIN_BODY_NANOS} ns timer \
                 floor; enlarge the workload (more commands or elements)"
            ),
            BenchError::Engine(e) => write!(f, "stream replay failed: {e}"),
            BenchError::TwoThree(e) => write!(f, "insertion failed: {e}"),
            BenchError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            BenchError::Csv { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl Error for BenchError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            BenchError::File(e) => Some(e),
            BenchError::Engine(e) => Some(e),
            BenchError::TwoThree(e) => Some(e),
            BenchError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<FileError> for BenchError {
    fn from(e: FileError) -> BenchError {
        BenchError::File(e)
    }
}

// ---------------------------------------------------------------------------
// measurement loop
// ---------------------------------------------------------------------------

/// Run one configuration to completion: one untimed warm-up iteration
/// (which also validates the timer floor), then timed iterations until
/// both the minimum iteration count and the time limit are satisfied.
pub fn run_bench(config: &BenchConfig) -> Result<BenchRun, BenchError> {
    config.validate()?;
    match config.task {
        Task::Traversal => {
            let path = config.input.as_ref().expect("validated: traversal has input");
            let stream = read_stream(path)?;
            validate_stream(&stream)?;
            if stream.encoding != config.variant.encoding() {
                return Err(BenchError::EncodingMismatch {
                    variant: config.variant,
                    encoding: stream.encoding,
                });
            }
            run_traversal(config, &stream)
        }
        Task::Insertion => run_insertion(config),
    }
}

/// Setup runs untimed before every iteration (and is also where teardown
/// of the previous iteration's input lands); only `body` is timed.
fn measure<S>(
    config: &BenchConfig,
    scenario: Option<Scenario>,
    size: u64,
    mut setup: impl FnMut() -> S,
    mut body: impl FnMut(&mut S) -> Result<u64, BenchError>,
) -> Result<BenchRun, BenchError> {
    let mut warm_input = setup();
    let warm_start = Instant::now();
    let mut checksum = body(&mut warm_input)?;
    let warm = warm_start.elapsed();
    drop(warm_input);
    if warm.as_nanos() < MIN_BODY_NANOS {
        return Err(BenchError::BodyTooFast { nanos: warm.as_nanos() });
    }

    let started = Instant::now();
    let mut samples: Vec<u64> = Vec::new();
    while (samples.len() as u64) < config.min_iters || started.elapsed() < config.time_limit {
        let mut input = setup();
        let t0 = Instant::now();
        let c = body(&mut input)?;
        let nanos = t0.elapsed().as_nanos() as u64;
        checksum = std::hint::black_box(checksum.wrapping_mul(0x100000001b3).wrapping_add(c));
        samples.push(nanos);
    }
    let wall_ns = started.elapsed().as_nanos();

    let n = samples.len() as f64;
    let mean_ns = samples.iter().map(|&s| s as f64).sum::<f64>() / n;
    let stddev_ns = if samples.len() < 2 {
        0.0
    } else {
        let var = samples
            .iter()
            .map(|&s| (s as f64 - mean_ns).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        var.sqrt()
    };

    Ok(BenchRun {
        record: BenchRecord {
            task: config.task,
            variant: config.variant,
            scenario,
            size,
            iterations: samples.len() as u64,
            mean_ns,
            stddev_ns,
        },
        samples_ns: samples,
        checksum,
        wall_ns,
    })
}

// ---------------------------------------------------------------------------
// task bodies
// ---------------------------------------------------------------------------

fn run_traversal(config: &BenchConfig, stream: &StreamFile) -> Result<BenchRun, BenchError> {
    let cmds = &stream.cmds;
    let depth = stream.depth;
    let scenario = Some(stream.scenario);
    let size = depth as u64;
    let deep = depth as usize - 1;
    let leftmost = vec![Dir::Left; deep];
    let rightmost = vec![Dir::Right; deep];

    match config.variant {
        Variant::PersistentCursor => measure(
            config,
            scenario,
            size,
            || fresh_bintree(depth),
            |t| {
                let out = bintree::run_cursor(t, cmds).map_err(BenchError::Engine)?;
                Ok(bin_digest(&out))
            },
        ),
        Variant::PersistentRoot => measure(
            config,
            scenario,
            size,
            || fresh_bintree(depth),
            |t| {
                let out = bintree::run_root(t, cmds).map_err(BenchError::Engine)?;
                Ok(bin_digest(&out))
            },
        ),
        Variant::MutableCursor => measure(
            config,
            scenario,
            size,
            || fresh_muttree(depth),
            |t| {
                t.run_cursor(cmds).map_err(BenchError::Engine)?;
                Ok(mut_digest(t, &leftmost, &rightmost))
            },
        ),
        Variant::MutableRoot => measure(
            config,
            scenario,
            size,
            || fresh_muttree(depth),
            |t| {
                t.run_root(cmds).map_err(BenchError::Engine)?;
                Ok(mut_digest(t, &leftmost, &rightmost))
            },
        ),
    }
}

fn run_insertion(config: &BenchConfig) -> Result<BenchRun, BenchError> {
    let count = config.count.expect("validated: insertion has count");
    let n = count as i64;

    // The whole body is timed: build from empty, digest, tear down.
    match config.variant {
        Variant::PersistentCursor => measure(config, None, count, || (), |_| {
            let first = twothree::insert_root(&TTTree::Leaf, n).map_err(BenchError::TwoThree)?;
            let mut z = TTZipper::from_tree_leftmost(&first).map_err(BenchError::TwoThree)?;
            for v in (1..n).rev() {
                z = z.insert_min(v).map_err(BenchError::TwoThree)?;
            }
            Ok(tt_digest(&z.to_tree()))
        }),
        Variant::PersistentRoot => measure(config, None, count, || (), |_| {
            let mut t = TTTree::Leaf;
            for v in (1..=n).rev() {
                t = twothree::insert_root(&t, v).map_err(BenchError::TwoThree)?;
            }
            Ok(tt_digest(&t))
        }),
        Variant::MutableCursor => measure(config, None, count, || (), |_| {
            let mut t = MutTTTree::new();
            for v in (1..=n).rev() {
                t.insert_finger(v).map_err(BenchError::TwoThree)?;
            }
            Ok(mut_tt_digest(&t))
        }),
        Variant::MutableRoot => measure(config, None, count, || (), |_| {
            let mut t = MutTTTree::new();
            for v in (1..=n).rev() {
                t.insert_root(v).map_err(BenchError::TwoThree)?;
            }
            Ok(mut_tt_digest(&t))
        }),
    }
}

fn fresh_bintree(depth: u32) -> BinTree {
    let mut next = 0i64;
    bintree::perfect(depth, &mut || {
        next += 1;
        next
    })
    .expect("stream validation bounds the depth")
}

fn fresh_muttree(depth: u32) -> MutTree {
    let mut next = 0i64;
    MutTree::perfect(depth, &mut || {
        next += 1;
        next
    })
    .expect("stream validation bounds the depth")
}

/// O(depth) digest of a traversal result: fold the values on the left
/// and right spines.  Enough to keep the replay alive under optimization.
fn bin_digest(t: &BinTree) -> u64 {
    let mut acc = 0u64;
    let mut cur = t.as_node();
    while let Some(n) = cur {
        acc = acc.wrapping_add(n.value as u64);
        cur = n.left.as_node();
    }
    let mut cur = t.as_node();
    while let Some(n) = cur {
        acc = acc.wrapping_mul(31).wrapping_add(n.value as u64);
        cur = n.right.as_node();
    }
    acc
}

fn mut_digest(t: &MutTree, leftmost: &[Dir], rightmost: &[Dir]) -> u64 {
    (t.value(t.root()) as u64)
        .wrapping_add(t.value_at(leftmost).unwrap_or(0) as u64)
        .wrapping_mul(31)
        .wrapping_add(t.value_at(rightmost).unwrap_or(0) as u64)
}

/// O(height) digest of an insertion result.
fn tt_digest(t: &TTTree) -> u64 {
    (t.min_value().unwrap_or(0) as u64).wrapping_add((t.height() as u64) << 32)
}

fn mut_tt_digest(t: &MutTTTree) -> u64 {
    (t.min_value().unwrap_or(0) as u64).wrapping_add((t.height() as u64) << 32)
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

pub fn render_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

fn csv_row(r: &BenchRecord) -> String {
    let scenario = match r.scenario {
        Some(s) => s.to_string(),
        None => "-".to_string(),
    };
    format!(
        "{},{},{},{},{},{},{}",
        r.task, r.variant, scenario, r.size, r.iterations, r.mean_ns, r.stddev_ns
    )
}

pub fn emit_csv(records: &[BenchRecord], path: &Path) -> Result<(), BenchError> {
    fs::write(path, render_csv(records)).map_err(|source| BenchError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Append one record to a CSV file, writing the header first if the file
/// is new or empty.  Lets repeated CLI invocations grow one table.
pub fn append_csv(record: &BenchRecord, path: &Path) -> Result<(), BenchError> {
    let io_err = |source| BenchError::Io { path: path.to_owned(), source };
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err)?;
    let empty = file.metadata().map_err(io_err)?.len() == 0;
    let mut text = String::new();
    if empty {
        text.push_str(CSV_HEADER);
        text.push('\n');
    }
    text.push_str(&csv_row(record));
    text.push('\n');
    file.write_all(text.as_bytes()).map_err(io_err)
}

pub fn parse_csv(text: &str) -> Result<Vec<BenchRecord>, BenchError> {
    let bad = |line: usize, message: String| BenchError::Csv { line, message };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first == CSV_HEADER => {}
        other => {
            return Err(bad(
                1,
                format!("expected header {CSV_HEADER:?}, found {:?}", other.map(|(_, l)| l)),
            ))
        }
    }

    let mut records = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(bad(i + 1, format!("expected 7 fields, found {}", fields.len())));
        }
        let parse_num = |idx: usize, what: &str| -> Result<f64, BenchError> {
            fields[idx]
                .parse::<f64>()
                .map_err(|e| bad(i + 1, format!("bad {what} {:?}: {e}", fields[idx])))
        };
        let task = fields[0].parse::<Task>().map_err(|e| bad(i + 1, e))?;
        let variant = fields[1].parse::<Variant>().map_err(|e| bad(i + 1, e))?;
        let scenario = match fields[2] {
            "-" => None,
            s => Some(s.parse::<Scenario>().map_err(|e| bad(i + 1, e))?),
        };
        let size = fields[3]
            .parse::<u64>()
            .map_err(|e| bad(i + 1, format!("bad size {:?}: {e}", fields[3])))?;
        let iterations = fields[4]
            .parse::<u64>()
            .map_err(|e| bad(i + 1, format!("bad iterations {:?}: {e}", fields[4])))?;
        let mean_ns = parse_num(5, "mean_ns")?;
        let stddev_ns = parse_num(6, "stddev_ns")?;
        records.push(BenchRecord {
            task,
            variant,
            scenario,
            size,
            iterations,
            mean_ns,
            stddev_ns,
        });
    }
    Ok(records)
}
