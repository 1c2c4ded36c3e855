//! The twelve building blocks: the plain 8×8×8 cube, four dent/bump half-cube pairs
//! and the self-stacking full cubes M, J and F.
//!
//! Every block lives in a local frame whose footprint is `0..8 × 0..8`. Half blocks
//! occupy `z ∈ 0..4` plus, for bump blocks, three protruding layers at `z ∈ -3..0`.
//! Full blocks occupy `z ∈ 0..8` and M/J/F protrude to `z = -3`.

use std::fmt;

use thiserror::Error;

use crate::voxel::{Polycube, Voxel, VoxelSet};

pub const SIDE: i64 = 8;
pub const HALF: i64 = 4;

/// The four dent/bump keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Key {
    C,
    A,
    B,
    O,
}

impl Key {
    pub const ALL: [Key; 4] = [Key::C, Key::A, Key::B, Key::O];

    fn letter(self) -> char {
        match self {
            Key::C => 'c',
            Key::A => 'a',
            Key::B => 'b',
            Key::O => 'o',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockLabel {
    Plain,
    Dent(Key),
    Bump(Key),
    M,
    J,
    F,
}

impl BlockLabel {
    pub const ALL: [BlockLabel; 12] = [
        BlockLabel::Plain,
        BlockLabel::Dent(Key::C),
        BlockLabel::Bump(Key::C),
        BlockLabel::Dent(Key::A),
        BlockLabel::Bump(Key::A),
        BlockLabel::Dent(Key::B),
        BlockLabel::Bump(Key::B),
        BlockLabel::Dent(Key::O),
        BlockLabel::Bump(Key::O),
        BlockLabel::M,
        BlockLabel::J,
        BlockLabel::F,
    ];

    pub fn is_half(self) -> bool {
        matches!(self, BlockLabel::Dent(_) | BlockLabel::Bump(_))
    }

    /// File-name friendly identifier, e.g. `dent_c`, `bump_c`, `plain`, `m`.
    pub fn slug(self) -> String {
        match self {
            BlockLabel::Plain => "plain".into(),
            BlockLabel::Dent(k) => format!("dent_{}", k.letter()),
            BlockLabel::Bump(k) => format!("bump_{}", k.letter()),
            BlockLabel::M => "m".into(),
            BlockLabel::J => "j".into(),
            BlockLabel::F => "f".into(),
        }
    }
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockLabel::Plain => f.write_str("Plain"),
            BlockLabel::Dent(k) => write!(f, "{}", k.letter()),
            BlockLabel::Bump(k) => write!(f, "{}", k.letter().to_ascii_uppercase()),
            BlockLabel::M => f.write_str("M"),
            BlockLabel::J => f.write_str("J"),
            BlockLabel::F => f.write_str("F"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockError {
    #[error("fits expects a dent and a bump label, got {0} and {1}")]
    NotDentBump(BlockLabel, BlockLabel),
    #[error("{0} is not a self-stacking block")]
    NotStacking(BlockLabel),
}

/// A block in its local frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGeometry {
    pub label: BlockLabel,
    pub cells: VoxelSet,
}

impl BlockGeometry {
    pub fn volume(&self) -> usize {
        self.cells.len()
    }

    pub fn polycube(&self) -> Polycube {
        Polycube::new(&self.cells).expect("blocks are connected")
    }
}

fn square(lo: i64, hi: i64) -> Vec<(i64, i64)> {
    let mut out = vec![];
    for y in lo..=hi {
        for x in lo..=hi {
            out.push((x, y));
        }
    }
    out
}

// the 1..=6 ring around the 2..=5 square
fn ring() -> Vec<(i64, i64)> {
    square(1, 6)
        .into_iter()
        .filter(|&(x, y)| !((2..=5).contains(&x) && (2..=5).contains(&y)))
        .collect()
}

/// Quarter turn clockwise inside the 8×8 block frame.
fn turn(x: i64, y: i64) -> (i64, i64) {
    (y, SIDE - 1 - x)
}

/// Removed cells of a dent, as three layers (bottom, middle, top) of the cavity.
fn cavity(neck: &[(i64, i64)]) -> [Vec<(i64, i64)>; 3] {
    let mut mid = ring();
    mid.extend_from_slice(neck);
    [square(1, 6), mid, neck.to_vec()]
}

fn key_cavity(key: Key) -> [Vec<(i64, i64)>; 3] {
    let a_neck = [(3, 3), (3, 4)];
    let turns = match key {
        Key::C => return cavity(&square(3, 4)),
        Key::A => 0,
        Key::O => 1,
        Key::B => 2,
    };
    let neck: Vec<_> = a_neck
        .iter()
        .map(|&(mut x, mut y)| {
            for _ in 0..turns {
                (x, y) = turn(x, y);
            }
            (x, y)
        })
        .collect();
    cavity(&neck)
}

fn layers_at(layers: &[Vec<(i64, i64)>; 3], z0: i64) -> Vec<Voxel> {
    let mut out = vec![];
    for (dz, layer) in layers.iter().enumerate() {
        for &(x, y) in layer {
            out.push(Voxel::new(x, y, z0 + dz as i64));
        }
    }
    out
}

fn m_block() -> VoxelSet {
    let cav = cavity(&[(3, 3)]);
    let dent = VoxelSet::from_cells(layers_at(&cav, 5));
    let body = VoxelSet::solid_box(SIDE, SIDE, 0, SIDE).difference(&dent);
    body.union(&dent.translate(Voxel::new(0, 0, -SIDE)))
}

fn turn_block(cells: &VoxelSet, quarter_turns: usize) -> VoxelSet {
    let mut out = cells.clone();
    for _ in 0..quarter_turns {
        out = out.map(|v| {
            let (x, y) = turn(v.x, v.y);
            Voxel::new(x, y, v.z)
        });
    }
    out
}

/// The transcribed geometry of one block.
pub fn block(label: BlockLabel) -> BlockGeometry {
    let cells = match label {
        BlockLabel::Plain => VoxelSet::solid_box(SIDE, SIDE, 0, SIDE),
        BlockLabel::Dent(k) => {
            let dent = VoxelSet::from_cells(layers_at(&key_cavity(k), 1));
            VoxelSet::solid_box(SIDE, SIDE, 0, HALF).difference(&dent)
        }
        BlockLabel::Bump(k) => {
            let bump = VoxelSet::from_cells(layers_at(&key_cavity(k), 1 - HALF));
            VoxelSet::solid_box(SIDE, SIDE, 0, HALF).union(&bump)
        }
        BlockLabel::M => m_block(),
        BlockLabel::J => turn_block(&m_block(), 1),
        BlockLabel::F => turn_block(&m_block(), 2),
    };
    BlockGeometry { label, cells }
}

/// Does `bump`, stacked half a block above `dent`, complete the 8×8×8 cube exactly?
pub fn fits(dent: BlockLabel, bump: BlockLabel) -> Result<bool, BlockError> {
    let (BlockLabel::Dent(_), BlockLabel::Bump(_)) = (dent, bump) else {
        return Err(BlockError::NotDentBump(dent, bump));
    };
    let lower = block(dent).cells;
    let upper = block(bump).cells.translate(Voxel::new(0, 0, HALF));
    Ok(lower.is_disjoint(&upper)
        && lower.union(&upper) == VoxelSet::solid_box(SIDE, SIDE, 0, SIDE))
}

/// Does `upper`, placed one full block above `lower`, push its bump exactly into
/// `lower`'s dent, so that the lower cube ends up solid with nothing overlapping?
pub fn stacks_onto(lower: BlockLabel, upper: BlockLabel) -> Result<bool, BlockError> {
    for l in [lower, upper] {
        if !matches!(l, BlockLabel::M | BlockLabel::J | BlockLabel::F) {
            return Err(BlockError::NotStacking(l));
        }
    }
    let below = block(lower).cells;
    let above = block(upper).cells.translate(Voxel::new(0, 0, SIDE));
    let cube = VoxelSet::solid_box(SIDE, SIDE, 0, SIDE);
    let joined = below.union(&above);
    Ok(below.is_disjoint(&above) && cube.difference(&joined).is_empty())
}

pub fn self_stacks(label: BlockLabel) -> Result<bool, BlockError> {
    stacks_onto(label, label)
}
