//! Compiling a Wang tile set into six polycubes.
//!
//! Each gadget is first laid out on a coarse grid whose cells are 8×8 columns of voxels,
//! then expanded block by block. Coarse coordinates use the same axes as voxels.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::blocks::{block, BlockLabel, Key, HALF, SIDE};
use crate::voxel::{is_connected, write_pcs, NamedPolycube, Polycube, Voxel, VoxelSet};
use crate::wang::{WangTile, WangTileSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the reduction needs at least 2 tiles, got {0}")]
    TooFewTiles(usize),
    #[error("bit count must be at least 1")]
    ZeroBits,
    #[error("no color code for color index {0}")]
    MissingCode(usize),
    #[error("color code has {got} bits, expected {expected}")]
    CodeLength { got: usize, expected: usize },
}

/// Which half of a coarse cell a half block occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Altitude {
    Lower,
    Upper,
}

impl Altitude {
    pub fn z(self) -> i64 {
        match self {
            Altitude::Lower => 0,
            Altitude::Upper => HALF,
        }
    }

    pub fn flip(self) -> Altitude {
        match self {
            Altitude::Lower => Altitude::Upper,
            Altitude::Upper => Altitude::Lower,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    North,
    East,
    South,
    West,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::North, Side::East, Side::South, Side::West];

    fn of(self, tile: &WangTile) -> usize {
        match self {
            Side::North => tile.north,
            Side::East => tile.east,
            Side::South => tile.south,
            Side::West => tile.west,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::North => "N",
            Side::East => "E",
            Side::South => "S",
            Side::West => "W",
        })
    }
}

/// Per-bit altitudes of one color, most significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorCode {
    pub bits: Vec<Altitude>,
}

/// `max(1, ⌈log₂ colors⌉)`.
pub fn bit_count(colors: usize) -> usize {
    if colors <= 2 {
        1
    } else {
        (usize::BITS - (colors - 1).leading_zeros()) as usize
    }
}

pub fn encode_colors(set: &WangTileSet) -> Vec<ColorCode> {
    let c = set.color_count().max(1);
    let m = bit_count(c);
    (0..c)
        .map(|i| ColorCode {
            bits: (0..m)
                .map(|b| {
                    if (i >> (m - 1 - b)) & 1 == 0 {
                        Altitude::Upper
                    } else {
                        Altitude::Lower
                    }
                })
                .collect(),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellContent {
    /// A full 8×8×8 functional cube (Plain, M, J or F).
    Full(BlockLabel),
    /// A half cube. `port` marks c dents that carry one bit of a side's color.
    Half {
        label: BlockLabel,
        altitude: Altitude,
        port: Option<(Side, usize)>,
    },
}

impl CellContent {
    pub fn label(&self) -> BlockLabel {
        match *self {
            CellContent::Full(l) | CellContent::Half { label: l, .. } => l,
        }
    }

    fn half(label: BlockLabel, altitude: Altitude) -> Self {
        CellContent::Half {
            label,
            altitude,
            port: None,
        }
    }

    fn glyph(&self) -> char {
        match self.label() {
            BlockLabel::Plain => '#',
            l => l.to_string().chars().next().unwrap(),
        }
    }
}

pub type Coarse = (i64, i64);

/// A gadget blueprint: at most one content per coarse cell.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoarseLayout {
    cells: BTreeMap<Coarse, CellContent>,
}

impl CoarseLayout {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics on a double assignment: every builder here places each cell once.
    fn put(&mut self, at: Coarse, content: CellContent) {
        let prev = self.cells.insert(at, content);
        assert!(prev.is_none(), "coarse cell {at:?} assigned twice");
    }

    pub fn get(&self, at: Coarse) -> Option<&CellContent> {
        self.cells.get(&at)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coarse, &CellContent)> + '_ {
        self.cells.iter().map(|(k, v)| (*k, v))
    }

    pub fn count(&self, label: BlockLabel) -> usize {
        self.cells.values().filter(|c| c.label() == label).count()
    }

    pub fn positions_of(&self, label: BlockLabel) -> Vec<Coarse> {
        self.iter()
            .filter(|(_, c)| c.label() == label)
            .map(|(p, _)| p)
            .collect()
    }

    pub fn translate(&self, (dx, dy): Coarse) -> CoarseLayout {
        CoarseLayout {
            cells: self
                .cells
                .iter()
                .map(|(&(x, y), c)| ((x + dx, y + dy), *c))
                .collect(),
        }
    }

    /// Inclusive coarse bounding box `(min, max)`.
    pub fn bounds(&self) -> Option<(Coarse, Coarse)> {
        let mut it = self.cells.keys();
        let &(x0, y0) = it.next()?;
        let (mut lo, mut hi) = ((x0, y0), (x0, y0));
        for &(x, y) in it {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        Some((lo, hi))
    }

    pub fn footprint_connected(&self) -> bool {
        let cells: VoxelSet = self.cells.keys().map(|&(x, y)| Voxel::new(x, y, 0)).collect();
        is_connected(&cells)
    }

    /// Quarter turn clockwise followed by normalization. Only rotation-symmetric half
    /// blocks (c, C) are supported; the other keys do not map onto labels.
    pub fn rotate90(&self) -> CoarseLayout {
        let turned: BTreeMap<Coarse, CellContent> = self
            .cells
            .iter()
            .map(|(&(x, y), c)| {
                let c = match *c {
                    CellContent::Full(BlockLabel::Plain) => *c,
                    CellContent::Half { label, .. } => {
                        assert!(
                            matches!(label, BlockLabel::Dent(Key::C) | BlockLabel::Bump(Key::C)),
                            "cannot turn a {label} cell"
                        );
                        *c
                    }
                    _ => panic!("cannot turn a {} cell", c.label()),
                };
                ((y, -x), c)
            })
            .collect();
        let out = CoarseLayout { cells: turned };
        let (lo, _) = out.bounds().unwrap_or(((0, 0), (0, 0)));
        out.translate((-lo.0, -lo.1))
    }

    /// Voxel expansion in the layout's own frame (coarse `(x, y)` maps to `8x, 8y`).
    pub fn expand(&self) -> VoxelSet {
        let mut cache: BTreeMap<BlockLabel, VoxelSet> = BTreeMap::new();
        let mut out = Vec::new();
        for (&(x, y), c) in &self.cells {
            let z = match c {
                CellContent::Full(_) => 0,
                CellContent::Half { altitude, .. } => altitude.z(),
            };
            let cells = cache
                .entry(c.label())
                .or_insert_with(|| block(c.label()).cells);
            let d = Voxel::new(x * SIDE, y * SIDE, z);
            out.extend(cells.iter().map(|v| v.offset(d)));
        }
        VoxelSet::from_cells(out)
    }

    /// One character per coarse cell, north row first: `#` plain, block letters
    /// otherwise, `.` empty.
    pub fn render(&self) -> String {
        let Some((lo, hi)) = self.bounds() else {
            return String::new();
        };
        let mut out = String::new();
        for y in (lo.1..=hi.1).rev() {
            for x in lo.0..=hi.0 {
                out.push(self.get((x, y)).map_or('.', CellContent::glyph));
            }
            out.push('\n');
        }
        out
    }
}

/// Coarse cells of the segment body, excluding attachments, for `m` bits.
fn segment_rows(m: i64) -> Vec<Coarse> {
    let mut out = vec![];
    let mut row = |y: i64, xs: std::ops::RangeInclusive<i64>| {
        for x in xs {
            out.push((x, y));
        }
    };
    row(m + 4, 0..=1);
    row(m + 3, 0..=m + 2);
    row(m + 2, 1..=m + 2);
    for y in 2..=m + 1 {
        row(y, 1..=m + 4);
    }
    row(1, 3..=m + 4);
    row(0, 3..=m + 3);
    out
}

/// Where bit `b` of each side's code sits.
pub fn port_cell(m: i64, side: Side, b: i64) -> Coarse {
    match side {
        Side::North => (3 + b, m + 3),
        Side::South => (3 + b, 0),
        Side::West => (1, 2 + b),
        Side::East => (m + 4, 2 + b),
    }
}

/// The six A/B/O bump attachments of a segment.
pub fn segment_attachments(m: usize) -> [(Coarse, Key); 6] {
    let m = m as i64;
    [
        ((2, m + 4), Key::A),
        ((m + 5, 1), Key::A),
        ((0, m + 2), Key::B),
        ((m + 3, -1), Key::B),
        ((m + 3, m + 2), Key::O),
        ((2, 1), Key::O),
    ]
}

/// Footprint of one segment slot (body cells including the c cells, no attachments).
pub fn segment_footprint(m: usize) -> Vec<Coarse> {
    segment_rows(m as i64)
}

/// Vector between consecutive segments along the diagonal.
pub fn segment_pitch(m: usize) -> Coarse {
    let d = m as i64 + 4;
    (d, -d)
}

/// The `m × m` core of a segment: the cells that end up in the open intersection.
pub fn segment_core(m: usize) -> (Coarse, Coarse) {
    let m = m as i64;
    ((3, 2), (m + 2, m + 1))
}

fn segment_layout(m: usize, codes: Option<[&ColorCode; 4]>, corner: BlockLabel) -> CoarseLayout {
    let mi = m as i64;
    let mut ports: BTreeMap<Coarse, CellContent> = BTreeMap::new();
    for (si, side) in Side::ALL.into_iter().enumerate() {
        for b in 0..mi {
            let content = match codes {
                Some(codes) => CellContent::Half {
                    label: BlockLabel::Dent(Key::C),
                    altitude: codes[si].bits[b as usize],
                    port: Some((side, b as usize)),
                },
                None => CellContent::Full(BlockLabel::Plain),
            };
            ports.insert(port_cell(mi, side, b), content);
        }
    }
    let mut layout = CoarseLayout::new();
    for at in segment_rows(mi) {
        let content = if at == (0, mi + 4) {
            CellContent::Full(corner)
        } else {
            ports
                .get(&at)
                .copied()
                .unwrap_or(CellContent::Full(BlockLabel::Plain))
        };
        layout.put(at, content);
    }
    for (at, key) in segment_attachments(m) {
        layout.put(at, CellContent::half(BlockLabel::Bump(key), Altitude::Upper));
    }
    layout
}

fn tile_codes<'a>(tile: &WangTile, codes: &'a [ColorCode], m: usize) -> Result<[&'a ColorCode; 4], ReductionError> {
    let mut out = [&codes[0]; 4];
    for (slot, side) in out.iter_mut().zip(Side::ALL) {
        let c = side.of(tile);
        let code = codes.get(c).ok_or(ReductionError::MissingCode(c))?;
        if code.bits.len() != m {
            return Err(ReductionError::CodeLength {
                got: code.bits.len(),
                expected: m,
            });
        }
        *slot = code;
    }
    Ok(out)
}

/// Blueprint of one simulated Wang tile.
pub fn build_segment(tile: &WangTile, codes: &[ColorCode], m: usize) -> Result<CoarseLayout, ReductionError> {
    if m == 0 {
        return Err(ReductionError::ZeroBits);
    }
    Ok(segment_layout(m, Some(tile_codes(tile, codes, m)?), BlockLabel::Plain))
}

pub fn meat_layout(set: &WangTileSet, codes: &[ColorCode]) -> Result<CoarseLayout, ReductionError> {
    let k = set.k();
    if k < 2 {
        return Err(ReductionError::TooFewTiles(k));
    }
    let m = codes.first().map_or(0, |c| c.bits.len());
    if m == 0 {
        return Err(ReductionError::ZeroBits);
    }
    let pitch = segment_pitch(m);
    let mut layout = CoarseLayout::new();
    for (j, tile) in set.tiles.iter().enumerate() {
        let corner = if j == 0 { BlockLabel::M } else { BlockLabel::Plain };
        let seg = segment_layout(m, Some(tile_codes(tile, codes, m)?), corner);
        let j = j as i64;
        for (at, c) in seg.translate((j * pitch.0, j * pitch.1)).iter() {
            layout.put(at, *c);
        }
    }
    Ok(layout)
}

fn check_km(k: usize, m: usize) -> Result<(), ReductionError> {
    if k < 2 {
        return Err(ReductionError::TooFewTiles(k));
    }
    if m == 0 {
        return Err(ReductionError::ZeroBits);
    }
    Ok(())
}

/// Coarse side length of the jaw square.
pub fn jaw_side(k: usize, m: usize) -> i64 {
    2 * (k as i64 - 1) * (m as i64 + 4) + 5
}

/// Origins of the `k` segment slots of the jaw's two mouths, in jaw coordinates.
/// Slot 0 is the exposed segment just outside the mouth; slots `1..k` lie inside.
pub fn mouth_slots(k: usize, m: usize) -> (Vec<Coarse>, Vec<Coarse>) {
    let s = jaw_side(k, m);
    let (mi, d) = (m as i64, m as i64 + 4);
    let se0 = (s - 3, -mi - 2);
    let nw0 = (-mi - 3, s - 2);
    let se = (0..k as i64).map(|j| (se0.0 - j * d, se0.1 + j * d)).collect();
    let nw = (0..k as i64).map(|j| (nw0.0 + j * d, nw0.1 - j * d)).collect();
    (se, nw)
}

/// Positions of the corner o dents, which mate the O bumps of the exposed segments
/// sitting at the jaw's NE and SW corners.
fn corner_segments(k: usize, m: usize) -> [Coarse; 2] {
    let s = jaw_side(k, m);
    let mi = m as i64;
    [(s - 3, s - 2), (-mi - 3, -mi - 2)]
}

pub fn jaw_layout(k: usize, m: usize) -> Result<CoarseLayout, ReductionError> {
    check_km(k, m)?;
    let s = jaw_side(k, m);
    let inside = |(x, y): Coarse| (0..s).contains(&x) && (0..s).contains(&y);
    let (se, nw) = mouth_slots(k, m);
    let foot = segment_footprint(m);

    let mut mouth = std::collections::BTreeSet::new();
    for &(ox, oy) in se.iter().chain(&nw) {
        for &(x, y) in &foot {
            mouth.insert((ox + x, oy + y));
        }
    }
    let mut dents: BTreeMap<Coarse, Key> = BTreeMap::new();
    let exposed = corner_segments(k, m);
    for &(ox, oy) in se.iter().chain(&nw).chain(&exposed) {
        for ((x, y), key) in segment_attachments(m) {
            let at = (ox + x, oy + y);
            let wanted = inside(at) && !mouth.contains(&at);
            // the corner segments only reach the jaw through one O each
            let from_corner = exposed.contains(&(ox, oy));
            if wanted && (!from_corner || key == Key::O) {
                dents.insert(at, key);
            }
        }
    }
    let deep = se[k - 1];
    let j_at = (deep.0 - 1, deep.1 + m as i64 + 5);

    let mut layout = CoarseLayout::new();
    for y in 0..s {
        for x in 0..s {
            let at = (x, y);
            if mouth.contains(&at) {
                continue;
            }
            let content = if let Some(&key) = dents.get(&at) {
                CellContent::half(BlockLabel::Dent(key), Altitude::Lower)
            } else if at == j_at {
                CellContent::Full(BlockLabel::J)
            } else {
                CellContent::Full(BlockLabel::Plain)
            };
            layout.put(at, content);
        }
    }
    Ok(layout)
}

pub fn filler_layout(m: usize) -> Result<CoarseLayout, ReductionError> {
    if m == 0 {
        return Err(ReductionError::ZeroBits);
    }
    Ok(segment_layout(m, None, BlockLabel::F))
}

pub fn tooth_layout() -> CoarseLayout {
    let mut layout = CoarseLayout::new();
    layout.put((0, 0), CellContent::half(BlockLabel::Bump(Key::C), Altitude::Lower));
    layout
}

/// Coarse length of the links: two less than the jaw side.
pub fn link_length(k: usize, m: usize) -> i64 {
    jaw_side(k, m) - 2
}

pub fn link_ew_layout(k: usize, m: usize) -> Result<CoarseLayout, ReductionError> {
    check_km(k, m)?;
    let n = link_length(k, m);
    let mut layout = CoarseLayout::new();
    for x in 0..n {
        let content = if x == 0 || x == n - 1 {
            CellContent::half(BlockLabel::Bump(Key::C), Altitude::Upper)
        } else {
            CellContent::Full(BlockLabel::Plain)
        };
        layout.put((x, 0), content);
    }
    Ok(layout)
}

/// A compiled gadget: blueprint, normalized polycube, and the voxel position of the
/// polycube's origin in the blueprint frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub name: &'static str,
    pub layout: CoarseLayout,
    pub polycube: Polycube,
    pub anchor: Voxel,
}

impl Gadget {
    pub fn from_layout(name: &'static str, layout: CoarseLayout) -> Gadget {
        let cells = layout.expand();
        let anchor = cells.bounds().expect("layouts are nonempty").min;
        let polycube = Polycube::new(&cells).expect("gadget blueprints are connected");
        Gadget {
            name,
            layout,
            polycube,
            anchor,
        }
    }

    /// Translation that puts the blueprint's coarse origin at `coarse`, raised by `dz`.
    pub fn offset_for(&self, coarse: Coarse, dz: i64) -> Voxel {
        Voxel::new(coarse.0 * SIDE, coarse.1 * SIDE, dz).offset(self.anchor)
    }
}

pub const PIECE_NAMES: [&str; 6] = ["meat", "jaw", "filler", "tooth", "link_ew", "link_sn"];

/// The six gadgets, in the fixed order of [`PIECE_NAMES`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolycubeSet {
    pub k: usize,
    pub m: usize,
    pub gadgets: Vec<Gadget>,
}

impl PolycubeSet {
    pub fn gadget(&self, name: &str) -> Option<&Gadget> {
        self.gadgets.iter().find(|g| g.name == name)
    }

    pub fn meat(&self) -> &Gadget {
        &self.gadgets[0]
    }
    pub fn jaw(&self) -> &Gadget {
        &self.gadgets[1]
    }
    pub fn filler(&self) -> &Gadget {
        &self.gadgets[2]
    }
    pub fn tooth(&self) -> &Gadget {
        &self.gadgets[3]
    }
    pub fn link_ew(&self) -> &Gadget {
        &self.gadgets[4]
    }
    pub fn link_sn(&self) -> &Gadget {
        &self.gadgets[5]
    }

    pub fn named(&self) -> Vec<NamedPolycube> {
        self.gadgets
            .iter()
            .map(|g| NamedPolycube {
                name: g.name.to_string(),
                polycube: g.polycube.clone(),
            })
            .collect()
    }

    pub fn to_pcs(&self) -> String {
        let comments = vec![format!("k={} m={} tilecraft {}", self.k, self.m, VERSION)];
        write_pcs(&self.named(), &comments)
    }
}

pub fn compile(set: &WangTileSet) -> Result<PolycubeSet, ReductionError> {
    let k = set.k();
    if k < 2 {
        return Err(ReductionError::TooFewTiles(k));
    }
    let codes = encode_colors(set);
    let m = codes[0].bits.len();
    let link_ew = link_ew_layout(k, m)?;
    let link_sn = link_ew.rotate90();
    let gadgets = vec![
        Gadget::from_layout("meat", meat_layout(set, &codes)?),
        Gadget::from_layout("jaw", jaw_layout(k, m)?),
        Gadget::from_layout("filler", filler_layout(m)?),
        Gadget::from_layout("tooth", tooth_layout()),
        Gadget::from_layout("link_ew", link_ew),
        Gadget::from_layout("link_sn", link_sn),
    ];
    Ok(PolycubeSet { k, m, gadgets })
}

/// Per-segment census of a blueprint: the number of cells with each label.
pub fn label_census(layout: &CoarseLayout) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for (_, c) in layout.iter() {
        *out.entry(c.label().to_string()).or_insert(0) += 1;
    }
    out
}

/// Human-readable summary used by reports.
pub fn describe(set: &PolycubeSet) -> String {
    let mut out = String::new();
    for g in &set.gadgets {
        let [x, y, z] = g.polycube.extent();
        let _ = writeln!(
            out,
            "{:<8} volume {:>8}  extent {x}x{y}x{z}  coarse cells {}",
            g.name,
            g.polycube.volume(),
            g.layout.len()
        );
    }
    out
}
