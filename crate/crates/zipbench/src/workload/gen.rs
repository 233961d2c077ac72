use std::error::Error;
use std::fmt;
use std::str::FromStr;

use crate::bintree::{Cmd, Dir, Step, MAX_DEPTH};
use crate::rng::SplitMix64;

/// Chance of stopping the sampling walk at each level under the bottom
/// biases. Low values push positions toward the deepest level.
pub const BOTTOM_STOP_CHANCE: f64 = 0.02;

/// Chance of stepping right at each level under the right biases. Two
/// consecutive walks then agree on a step with probability
/// w^2 + (1-w)^2, and the expected shared prefix is what makes cursor
/// replay cheap: at 0.995 consecutive positions at depth 16 share about
/// fourteen levels, versus about one under an even split, so the cursor
/// moves a couple of steps inside a small, cache-resident neighborhood
/// while root replay walks the full path every time.
pub const RIGHT_STEP_WEIGHT: f64 = 0.995;

/// Spatial-locality bias for sampled positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// No bias: positions uniform over all nodes.
    Uniform,
    /// Deep positions: walks stop with [`BOTTOM_STOP_CHANCE`] per level.
    Bottom,
    /// Right-leaning walks with the uniform depth profile.
    Right,
    /// Both biases at once.
    BottomRight,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Uniform,
        Scenario::Bottom,
        Scenario::Right,
        Scenario::BottomRight,
    ];
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Scenario::Uniform => "uniform",
            Scenario::Bottom => "bottom",
            Scenario::Right => "right",
            Scenario::BottomRight => "bottom-right",
        };
        f.write_str(name)
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Scenario, String> {
        match s {
            "uniform" => Ok(Scenario::Uniform),
            "bottom" => Ok(Scenario::Bottom),
            "right" => Ok(Scenario::Right),
            "bottom-right" => Ok(Scenario::BottomRight),
            other => Err(format!(
                "unknown scenario {other:?}: expected uniform, bottom, right, or bottom-right"
            )),
        }
    }
}

/// Everything that determines a generated workload. Identical configs
/// produce identical streams, byte for byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    /// Perfect-tree depth the positions address; paths are at most
    /// `depth - 1` steps.
    pub depth: u32,
    /// Number of Set positions to draw.
    pub count: u64,
    pub scenario: Scenario,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    BadDepth { depth: u32 },
    BadCount,
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::BadDepth { depth } => {
                write!(f, "depth {depth} out of range: expected 1..={MAX_DEPTH}")
            }
            GenError::BadCount => write!(f, "count must be at least 1"),
        }
    }
}

impl Error for GenError {}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.depth == 0 || self.depth > MAX_DEPTH {
            return Err(GenError::BadDepth { depth: self.depth });
        }
        if self.count == 0 {
            return Err(GenError::BadCount);
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// position sampling
// ---------------------------------------------------------------------------

/// Draw one node of the perfect tree as a root-to-node path.
///
/// Uniform picks a node index outright. The biased scenarios walk down
/// from the root, stopping at each level with a per-scenario chance and
/// otherwise descending with [`RIGHT_STEP_WEIGHT`] or an even split. The
/// right-only bias matches Uniform's depth profile by stopping at a node
/// with probability 1 over the size of the remaining subtree, so it
/// differs from Uniform in direction only.
pub fn sample_position(config: &GenConfig, rng: &mut SplitMix64) -> Vec<Dir> {
    match config.scenario {
        Scenario::Uniform => uniform_node(config.depth, rng),
        Scenario::Bottom => biased_walk(config.depth, rng, Stop::Fixed(BOTTOM_STOP_CHANCE), 0.5),
        Scenario::Right => biased_walk(config.depth, rng, Stop::MatchUniform, RIGHT_STEP_WEIGHT),
        Scenario::BottomRight => biased_walk(
            config.depth,
            rng,
            Stop::Fixed(BOTTOM_STOP_CHANCE),
            RIGHT_STEP_WEIGHT,
        ),
    }
}

enum Stop {
    Fixed(f64),
    MatchUniform,
}

fn uniform_node(depth: u32, rng: &mut SplitMix64) -> Vec<Dir> {
    // Heap addressing: nodes are 1..2^depth, and the bits below the
    // leading one of the index spell the path, high bit first.
    let index = rng.below((1u64 << depth) - 1) + 1;
    let level = 63 - index.leading_zeros();
    let mut path = Vec::with_capacity(level as usize);
    for bit in (0..level).rev() {
        path.push(if (index >> bit) & 1 == 1 {
            Dir::Right
        } else {
            Dir::Left
        });
    }
    path
}

fn biased_walk(depth: u32, rng: &mut SplitMix64, stop: Stop, right_weight: f64) -> Vec<Dir> {
    let mut path = Vec::new();
    for level in 0..depth - 1 {
        let stop_chance = match stop {
            Stop::Fixed(p) => p,
            // One node out of the 2^(depth-level) - 1 still reachable.
            Stop::MatchUniform => 1.0 / ((1u64 << (depth - level)) as f64 - 1.0),
        };
        if rng.chance(stop_chance) {
            return path;
        }
        path.push(if rng.chance(right_weight) {
            Dir::Right
        } else {
            Dir::Left
        });
    }
    path // bottom level: nowhere further to go
}

// ---------------------------------------------------------------------------
// stream encoding
// ---------------------------------------------------------------------------

/// Encode positions and values relative to a cursor that starts at the
/// root: up to the lowest common ancestor with the previous position,
/// down the remaining steps, then the set.
pub fn encode_cursor(positions: &[Vec<Dir>], values: &[i64]) -> Vec<Cmd> {
    let mut cmds = Vec::new();
    let mut prev: &[Dir] = &[];
    for (pos, v) in positions.iter().zip(values) {
        let shared = prev
            .iter()
            .zip(pos.iter())
            .take_while(|(a, b)| a == b)
            .count();
        for _ in shared..prev.len() {
            cmds.push(Cmd::Mov(Step::Up));
        }
        for d in &pos[shared..] {
            cmds.push(Cmd::Mov(Step::from(*d)));
        }
        cmds.push(Cmd::Set(*v));
        prev = pos;
    }
    cmds
}

/// Encode each position as an absolute path from the root followed by the
/// set; the replaying engine snaps back to the root after every set.
pub fn encode_root(positions: &[Vec<Dir>], values: &[i64]) -> Vec<Cmd> {
    let mut cmds = Vec::new();
    for (pos, v) in positions.iter().zip(values) {
        cmds.extend(pos.iter().map(|d| Cmd::Mov(Step::from(*d))));
        cmds.push(Cmd::Set(*v));
    }
    cmds
}

/// Both encodings of one drawn workload. They address the same positions
/// with the same values, so replaying them yields identical trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamPair {
    pub cursor: Vec<Cmd>,
    pub root: Vec<Cmd>,
}

/// Draw the workload for `config` and encode it both ways. All positions
/// are drawn first, then all values, so the draw order is part of the
/// format.
pub fn generate_pair(config: &GenConfig) -> Result<StreamPair, GenError> {
    config.validate()?;
    let mut rng = SplitMix64::new(config.seed);
    let positions: Vec<Vec<Dir>> = (0..config.count)
        .map(|_| sample_position(config, &mut rng))
        .collect();
    let values: Vec<i64> = (0..config.count).map(|_| rng.next_i64()).collect();
    Ok(StreamPair {
        cursor: encode_cursor(&positions, &values),
        root: encode_root(&positions, &values),
    })
}

/// Moves per set: the workload-side measure of spatial locality. Lower
/// means consecutive positions are closer together.
pub fn moves_per_set(cmds: &[Cmd]) -> f64 {
    let moves = cmds.iter().filter(|c| matches!(c, Cmd::Mov(_))).count();
    let sets = cmds.iter().filter(|c| matches!(c, Cmd::Set(_))).count();
    moves as f64 / sets as f64
}
