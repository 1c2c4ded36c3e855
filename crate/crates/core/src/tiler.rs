//! Translational exact cover of boxes and tori.
//!
//! A placement is a piece name plus the translation applied to its normalized cells.
//! On a torus every placed cell wraps modulo the region dims; in a box any placed cell
//! outside the region is a defect.

use std::fmt::{self, Write as _};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::voxel::{FormatError, NamedPolycube, Region, RegionKind, Voxel};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TilerError {
    #[error("unknown piece `{0}`")]
    UnknownPiece(String),
    #[error("region volume {volume} exceeds the cap of {max}")]
    TooLarge { volume: usize, max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub piece: String,
    pub offset: Voxel,
}

impl Placement {
    pub fn new(piece: impl Into<String>, offset: Voxel) -> Self {
        Self {
            piece: piece.into(),
            offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingInstance {
    pub region: Region,
    pub placements: Vec<Placement>,
}

impl TilingInstance {
    pub fn new(region: Region) -> Self {
        Self {
            region,
            placements: vec![],
        }
    }

    /// Reduce every offset into the torus (no-op for boxes).
    pub fn canonicalize(&mut self) {
        if self.region.kind == RegionKind::Torus {
            for p in &mut self.placements {
                p.offset = p.offset.wrap(self.region.dims);
            }
        }
    }

    /// Translate every placement; on a torus the result is canonicalized.
    pub fn translated(&self, d: Voxel) -> TilingInstance {
        let mut out = TilingInstance {
            region: self.region,
            placements: self
                .placements
                .iter()
                .map(|p| Placement::new(p.piece.clone(), p.offset.offset(d)))
                .collect(),
        };
        out.canonicalize();
        out
    }

    pub fn to_plc(&self) -> String {
        let [x, y, z] = self.region.dims;
        let mut out = format!("tiling v1\nregion {} {x} {y} {z}\n", self.region.kind);
        for p in &self.placements {
            let _ = writeln!(
                out,
                "place {} {} {} {}",
                p.piece, p.offset.x, p.offset.y, p.offset.z
            );
        }
        out
    }
}

pub fn parse_plc(text: &str) -> Result<TilingInstance, FormatError> {
    let mut region: Option<Region> = None;
    let mut placements = vec![];
    let mut saw_header = false;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let int = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| FormatError::new(line_no, format!("bad integer {s:?}")))
        };
        if !saw_header {
            if fields != ["tiling", "v1"] {
                return Err(FormatError::new(line_no, "expected header `tiling v1`"));
            }
            saw_header = true;
            continue;
        }
        match fields[0] {
            "region" if region.is_none() => {
                if fields.len() != 5 {
                    return Err(FormatError::new(
                        line_no,
                        "expected `region (torus|box) <X> <Y> <Z>`",
                    ));
                }
                let kind = match fields[1] {
                    "torus" => RegionKind::Torus,
                    "box" => RegionKind::Box,
                    other => {
                        return Err(FormatError::new(
                            line_no,
                            format!("unknown region kind `{other}`"),
                        ))
                    }
                };
                let dims = [int(fields[2])?, int(fields[3])?, int(fields[4])?];
                region = Some(
                    Region::new(kind, dims).map_err(|e| FormatError::new(line_no, e.to_string()))?,
                );
            }
            "place" => {
                if region.is_none() {
                    return Err(FormatError::new(line_no, "`place` before `region`"));
                }
                if fields.len() != 5 {
                    return Err(FormatError::new(
                        line_no,
                        "expected `place <name> <dx> <dy> <dz>`",
                    ));
                }
                let offset = Voxel::new(int(fields[2])?, int(fields[3])?, int(fields[4])?);
                placements.push(Placement::new(fields[1], offset));
            }
            other => return Err(FormatError::new(line_no, format!("unexpected `{other}`"))),
        }
    }
    let Some(region) = region else {
        return Err(FormatError::new(last_line.max(1), "missing `region`"));
    };
    let mut t = TilingInstance { region, placements };
    t.canonicalize();
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DefectKind {
    /// No placement covers the cell.
    Gap,
    /// Two or more placements (by index) cover the cell.
    Overlap(Vec<usize>),
    /// A box placement (by index) puts this cell outside the region.
    Outside(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Defect {
    pub cell: Voxel,
    pub kind: DefectKind,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Voxel { x, y, z } = self.cell;
        match &self.kind {
            DefectKind::Gap => write!(f, "gap {x} {y} {z}"),
            DefectKind::Overlap(ids) => {
                write!(f, "overlap {x} {y} {z}")?;
                for i in ids {
                    write!(f, " {i}")?;
                }
                Ok(())
            }
            DefectKind::Outside(i) => write!(f, "outside {x} {y} {z} {i}"),
        }
    }
}

fn lookup<'a>(pieces: &'a [NamedPolycube], name: &str) -> Result<&'a NamedPolycube, TilerError> {
    pieces
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| TilerError::UnknownPiece(name.to_string()))
}

/// Every coverage defect, sorted by cell in `(z, y, x)` order.
pub fn verify(pieces: &[NamedPolycube], t: &TilingInstance) -> Result<Vec<Defect>, TilerError> {
    let region = t.region;
    let resolved: Vec<&NamedPolycube> = t
        .placements
        .iter()
        .map(|p| lookup(pieces, &p.piece))
        .collect::<Result<_, _>>()?;

    let torus = region.kind == RegionKind::Torus;
    let mut count = vec![0u8; region.volume()];
    let mut outside = vec![];
    let cells_of = |i: usize| {
        let off = t.placements[i].offset;
        resolved[i].polycube.cells().iter().filter_map(move |v| {
            let v = v.offset(off);
            if torus {
                Some(region.index(v.wrap(region.dims)))
            } else {
                region.contains(v).then(|| region.index(v))
            }
        })
    };
    for i in 0..t.placements.len() {
        for c in cells_of(i) {
            count[c] = count[c].saturating_add(1);
        }
    }
    if !torus {
        for (i, p) in t.placements.iter().enumerate() {
            for v in resolved[i].polycube.cells().iter() {
                let v = v.offset(p.offset);
                if !region.contains(v) {
                    outside.push(Defect {
                        cell: v,
                        kind: DefectKind::Outside(i),
                    });
                }
            }
        }
    }

    let mut owners: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    if count.iter().any(|&c| c > 1) {
        for i in 0..t.placements.len() {
            for c in cells_of(i) {
                if count[c] > 1 {
                    owners.entry(c).or_default().push(i);
                }
            }
        }
    }

    let mut defects = outside;
    for (c, &n) in count.iter().enumerate() {
        match n {
            0 => defects.push(Defect {
                cell: region.voxel_at(c),
                kind: DefectKind::Gap,
            }),
            1 => {}
            _ => {
                let mut ids = owners.remove(&c).unwrap_or_default();
                ids.dedup();
                defects.push(Defect {
                    cell: region.voxel_at(c),
                    kind: DefectKind::Overlap(ids),
                })
            }
        }
    }
    defects.sort_by(|a, b| a.cell.cmp(&b.cell).then_with(|| a.kind.cmp(&b.kind)));
    Ok(defects)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of placements tried; `None` searches exhaustively.
    pub max_nodes: Option<u64>,
    pub max_volume: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_nodes: None,
            max_volume: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(TilingInstance),
    Unsat,
    BudgetExceeded,
}

/// All placements that fit the region, in canonical order: piece order, then offset
/// in `(z, y, x)` order. Torus placements whose cells collide after wrapping are
/// dropped.
struct Candidates {
    placements: Vec<(usize, Voxel)>,
    cells: Vec<Vec<usize>>,
    /// For each cell, the candidates covering it, in canonical order.
    covering: Vec<Vec<usize>>,
}

impl Candidates {
    fn build(pieces: &[NamedPolycube], region: Region) -> Candidates {
        let [dx, dy, dz] = region.dims;
        let mut placements = vec![];
        let mut cells = vec![];
        for (pi, p) in pieces.iter().enumerate() {
            let [ex, ey, ez] = p.polycube.extent();
            let (mx, my, mz) = match region.kind {
                RegionKind::Box => (dx - ex, dy - ey, dz - ez),
                RegionKind::Torus => (dx - 1, dy - 1, dz - 1),
            };
            for z in 0..=mz {
                for y in 0..=my {
                    for x in 0..=mx {
                        let off = Voxel::new(x, y, z);
                        let mut idx: Vec<usize> = p
                            .polycube
                            .cells()
                            .iter()
                            .map(|v| region.index(v.offset(off).wrap(region.dims)))
                            .collect();
                        idx.sort_unstable();
                        let n = idx.len();
                        idx.dedup();
                        if idx.len() != n {
                            continue;
                        }
                        placements.push((pi, off));
                        cells.push(idx);
                    }
                }
            }
        }
        let mut covering = vec![vec![]; region.volume()];
        for (i, idx) in cells.iter().enumerate() {
            for &c in idx {
                covering[c].push(i);
            }
        }
        Candidates {
            placements,
            cells,
            covering,
        }
    }
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn flip_all(&mut self, cells: &[usize]) {
        for &c in cells {
            self.0[c / 64] ^= 1 << (c % 64);
        }
    }
    fn first_zero_from(&self, from: usize, n: usize) -> Option<usize> {
        let mut i = from;
        while i < n {
            let w = !self.0[i / 64] >> (i % 64);
            if w != 0 {
                let c = i + w.trailing_zeros() as usize;
                return (c < n).then_some(c);
            }
            i = (i / 64 + 1) * 64;
        }
        None
    }
}

enum Branch {
    Sat(Vec<usize>, u64),
    Unsat(u64),
    Exceeded,
    Cancelled,
}

/// Depth-first search below one top-level choice. Node count includes `root`.
fn search_branch(
    cand: &Candidates,
    n: usize,
    root: usize,
    cap: u64,
    cancelled: &dyn Fn() -> bool,
) -> Branch {
    let mut covered = Bits::new(n);
    covered.flip_all(&cand.cells[root]);
    let mut chosen = vec![root];
    let mut nodes: u64 = 1;
    if nodes > cap {
        return Branch::Exceeded;
    }
    // frames: (cell being covered, next candidate position in covering[cell])
    let mut frames: Vec<(usize, usize)> = vec![];
    match covered.first_zero_from(0, n) {
        None => return Branch::Sat(chosen, nodes),
        Some(c) => frames.push((c, 0)),
    }
    loop {
        let depth = frames.len();
        if chosen.len() > depth {
            let p = chosen.pop().unwrap();
            covered.flip_all(&cand.cells[p]);
        }
        let Some(&mut (cell, ref mut next)) = frames.last_mut() else {
            return Branch::Unsat(nodes);
        };
        let list = &cand.covering[cell];
        let mut found = None;
        while *next < list.len() {
            let p = list[*next];
            *next += 1;
            if cand.cells[p].iter().all(|&c| !covered.get(c)) {
                found = Some(p);
                break;
            }
        }
        let Some(p) = found else {
            frames.pop();
            continue;
        };
        nodes += 1;
        if nodes > cap {
            return Branch::Exceeded;
        }
        if nodes.is_multiple_of(4096) && cancelled() {
            return Branch::Cancelled;
        }
        covered.flip_all(&cand.cells[p]);
        chosen.push(p);
        match covered.first_zero_from(cell + 1, n) {
            None => return Branch::Sat(chosen, nodes),
            Some(c) => frames.push((c, 0)),
        }
    }
}

/// Decide whether translated copies of `pieces` tile `region` exactly.
///
/// The answer and witness are those of a sequential depth-first search that always
/// covers the least uncovered cell first. Top-level branches run on the rayon pool and
/// are merged so the result does not depend on the number of workers.
pub fn solve(pieces: &[NamedPolycube], region: Region, limits: Limits) -> Result<SolveOutcome, TilerError> {
    let n = region.volume();
    if n > limits.max_volume {
        return Err(TilerError::TooLarge {
            volume: n,
            max: limits.max_volume,
        });
    }
    let cand = Candidates::build(pieces, region);
    let cap = limits.max_nodes.unwrap_or(u64::MAX);
    let roots = &cand.covering[0];
    let stop = AtomicUsize::new(usize::MAX);

    let results: Vec<Branch> = roots
        .par_iter()
        .enumerate()
        .map(|(i, &root)| {
            if stop.load(Ordering::Relaxed) < i {
                return Branch::Cancelled;
            }
            let r = search_branch(&cand, n, root, cap, &|| stop.load(Ordering::Relaxed) < i);
            if matches!(r, Branch::Sat(..) | Branch::Exceeded) {
                stop.fetch_min(i, Ordering::Relaxed);
            }
            r
        })
        .collect();

    let mut used: u64 = 0;
    for r in results {
        match r {
            Branch::Sat(chosen, nodes) => {
                if used.saturating_add(nodes) > cap {
                    return Ok(SolveOutcome::BudgetExceeded);
                }
                let mut placements: Vec<Placement> = chosen
                    .into_iter()
                    .map(|p| {
                        let (pi, off) = cand.placements[p];
                        Placement::new(pieces[pi].name.clone(), off)
                    })
                    .collect();
                placements.sort_by(|a, b| a.offset.cmp(&b.offset).then_with(|| a.piece.cmp(&b.piece)));
                return Ok(SolveOutcome::Sat(TilingInstance { region, placements }));
            }
            Branch::Unsat(nodes) => {
                used = used.saturating_add(nodes);
                if used > cap {
                    return Ok(SolveOutcome::BudgetExceeded);
                }
            }
            Branch::Exceeded => return Ok(SolveOutcome::BudgetExceeded),
            Branch::Cancelled => unreachable!("only branches after a decisive one are cancelled"),
        }
    }
    Ok(SolveOutcome::Unsat)
}

pub const COUNT_MAX_VOLUME: usize = 64;

/// Number of distinct exact covers. Placements are distinct when their piece or their
/// (reduced) offset differs.
pub fn count_tilings(pieces: &[NamedPolycube], region: Region) -> Result<u64, TilerError> {
    let n = region.volume();
    if n > COUNT_MAX_VOLUME {
        return Err(TilerError::TooLarge {
            volume: n,
            max: COUNT_MAX_VOLUME,
        });
    }
    let cand = Candidates::build(pieces, region);
    let masks: Vec<u64> = cand
        .cells
        .iter()
        .map(|idx| idx.iter().fold(0u64, |m, &c| m | 1 << c))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    fn go(covered: u64, full: u64, masks: &[u64], covering: &[Vec<usize>]) -> u64 {
        if covered == full {
            return 1;
        }
        let cell = (!covered).trailing_zeros() as usize;
        covering[cell]
            .iter()
            .filter(|&&p| masks[p] & covered == 0)
            .map(|&p| go(covered | masks[p], full, masks, covering))
            .sum()
    }
    Ok(go(0, full, &masks, &cand.covering))
}
