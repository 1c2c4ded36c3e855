//! Both directions of the reduction on slab tori: assembling the polycube floor that
//! simulates a periodic Wang tiling, and reading the Wang tiling back off a floor.
//!
//! Floor layout, per Wang cell `(x, y)` with base `(xP, yP)` in coarse cells:
//!
//! * one jaw with its square at `base`; the open `m × m` intersection sits at
//!   `base + (S, S)` and holds the core of the cell's exposed meat segment;
//! * the meat, gripped by the SE mouth of the jaw above and the NW mouth of the jaw to
//!   the right, with fillers in the slots the meat leaves empty;
//! * a tooth under (or over) every c dent of the meat that is not exposed;
//! * per bit, one east-west and one south-north link spanning the gaps to the
//!   neighbouring cells' exposed segments.
//!
//! One floor is eight voxels tall and the torus wraps vertically after one floor.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::blocks::SIDE;
use crate::reduction::{
    compile, encode_colors, jaw_side, link_length, mouth_slots, port_cell, segment_footprint,
    segment_pitch, Altitude, CellContent, Coarse, ColorCode, PolycubeSet, ReductionError, Side,
};
use crate::tiler::{verify, DefectKind, Placement, TilerError, TilingInstance};
use crate::voxel::{Region, RegionKind, Voxel};
use crate::wang::{validate_torus_tiling, WangError, WangTileSet, WangTorusTiling};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimulationError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Wang(#[from] WangError),
    #[error(transparent)]
    Tiler(#[from] TilerError),
    #[error("Wang tiling is invalid: colors differ on the {0}")]
    InvalidTiling(crate::wang::EdgeMismatch),
    #[error("EdgeMismatch: {side} edge of cell ({x}, {y}), bit {bit}")]
    EdgeMismatch {
        x: usize,
        y: usize,
        side: Side,
        bit: usize,
    },
    #[error("floor needs {voxels} voxels, cap is {max}")]
    Capacity { voxels: usize, max: usize },
    #[error("NotReductionShaped: {0}")]
    NotReductionShaped(String),
    #[error("segment {segment} out of range for {k} tiles")]
    SegmentOutOfRange { segment: usize, k: usize },
    #[error("cell ({x}, {y}) is outside the {p}x{q} tiling")]
    CellOutOfRange { x: usize, y: usize, p: usize, q: usize },
    #[error("polycube set does not match the tile set's compiled pieces")]
    PieceMismatch,
}

fn not_shaped(msg: impl Into<String>) -> SimulationError {
    SimulationError::NotReductionShaped(msg.into())
}

/// Coarse dimensions of the floor pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FloorGeometry {
    pub k: usize,
    pub m: usize,
    /// Jaw side `S`.
    pub side: i64,
    /// Width of the strip between neighbouring jaws.
    pub gap: i64,
    /// Lattice spacing `S + gap`.
    pub period: i64,
}

impl FloorGeometry {
    pub fn new(k: usize, m: usize) -> Result<Self, SimulationError> {
        if k < 2 {
            return Err(ReductionError::TooFewTiles(k).into());
        }
        if m == 0 {
            return Err(ReductionError::ZeroBits.into());
        }
        let side = jaw_side(k, m);
        let gap = m as i64;
        Ok(Self {
            k,
            m,
            side,
            gap,
            period: side + gap,
        })
    }

    /// Offset from a cell's base to the origin of its exposed segment.
    pub fn exposed_offset(&self) -> Coarse {
        (self.side - 3, self.side - 2)
    }

    /// Coarse origin of the meat of a cell whose exposed segment is `t`.
    pub fn meat_origin(&self, base: Coarse, t: usize) -> Coarse {
        let (ex, ey) = self.exposed_offset();
        let (px, py) = segment_pitch(self.m);
        (base.0 + ex - t as i64 * px, base.1 + ey - t as i64 * py)
    }
}

/// `(Px, Py)`: the coarse lattice spacing of the floor pattern.
pub fn floor_period(k: usize, m: usize) -> Result<(i64, i64), SimulationError> {
    let g = FloorGeometry::new(k, m)?;
    Ok((g.period, g.period))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkRecord {
    /// `East` for links to the east neighbour, `North` for links to the north one.
    pub side: Side,
    pub bit: usize,
    pub altitude: Altitude,
    /// Coarse origin of the link's blueprint.
    pub at: Coarse,
}

impl LinkRecord {
    /// Lower-altitude bits sit on the floor base; upper ones are raised by half a block.
    pub fn aligned(&self) -> bool {
        self.altitude == Altitude::Lower
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPlan {
    pub x: usize,
    pub y: usize,
    pub tile: usize,
    pub meat: Coarse,
    pub jaw: Coarse,
    pub fillers: Vec<Coarse>,
    /// Coarse cell and altitude of each tooth's body.
    pub teeth: Vec<(Coarse, Altitude)>,
    pub links: Vec<LinkRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorPlan {
    pub geometry: FloorGeometry,
    pub p: usize,
    pub q: usize,
    pub cells: Vec<CellPlan>,
}

impl FloorPlan {
    pub fn region(&self) -> Region {
        let per = self.geometry.period * SIDE;
        Region::torus(per * self.p as i64, per * self.q as i64, SIDE)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssembleOptions {
    /// Accept Wang tilings with color mismatches (they then fail with `EdgeMismatch`).
    pub allow_invalid: bool,
    /// Largest torus volume, in voxels, that will be assembled.
    pub max_voxels: usize,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        Self {
            allow_invalid: false,
            max_voxels: 1 << 28,
        }
    }
}

/// A c dent of the meat blueprint: coarse cell, altitude and owning segment.
#[derive(Clone, Copy, Debug)]
struct MeatPort {
    at: Coarse,
    altitude: Altitude,
    segment: usize,
}

fn meat_ports(pcs: &PolycubeSet) -> Vec<MeatPort> {
    let m = pcs.m as i64;
    let pitch = segment_pitch(pcs.m);
    let layout = &pcs.meat().layout;
    let mut out = vec![];
    for segment in 0..pcs.k {
        let origin = (segment as i64 * pitch.0, segment as i64 * pitch.1);
        for side in Side::ALL {
            for b in 0..m {
                let (lx, ly) = port_cell(m, side, b);
                let at = (origin.0 + lx, origin.1 + ly);
                let Some(CellContent::Half { altitude, .. }) = layout.get(at) else {
                    unreachable!("every segment carries its ports");
                };
                out.push(MeatPort {
                    at,
                    altitude: *altitude,
                    segment,
                });
            }
        }
    }
    out
}

/// Everything at one Wang cell except the links.
fn cell_body(g: &FloorGeometry, ports: &[MeatPort], x: usize, y: usize, t: usize) -> CellPlan {
    let p = g.period;
    let base = (x as i64 * p, y as i64 * p);
    let meat = g.meat_origin(base, t);
    let (se, nw) = mouth_slots(g.k, g.m);
    let mut fillers = vec![];
    // the SE mouth of the jaw above takes the segments before `t`
    for &(sx, sy) in &se[t + 1..g.k] {
        fillers.push((base.0 + sx, base.1 + p + sy));
    }
    // the NW mouth of the jaw to the east takes the segments after `t`
    for &(sx, sy) in &nw[g.k - t..g.k] {
        fillers.push((base.0 + p + sx, base.1 + sy));
    }
    let teeth = ports
        .iter()
        .filter(|pt| pt.segment != t)
        .map(|pt| ((meat.0 + pt.at.0, meat.1 + pt.at.1), pt.altitude.flip()))
        .collect();
    CellPlan {
        x,
        y,
        tile: t,
        meat,
        jaw: base,
        fillers,
        teeth,
        links: vec![],
    }
}

fn cell_links(
    g: &FloorGeometry,
    set: &WangTileSet,
    codes: &[ColorCode],
    w: &WangTorusTiling,
    x: usize,
    y: usize,
) -> Result<Vec<LinkRecord>, SimulationError> {
    let p = g.period;
    let base = (x as i64 * p, y as i64 * p);
    let here = set.tiles[w.at(x, y)];
    let east = set.tiles[w.at(x + 1, y)];
    let north = set.tiles[w.at(x, y + 1)];
    let mut links = vec![];
    for (side, mine, theirs, start) in [
        (Side::East, here.east, east.west, (base.0 + p + 1, base.1 + g.side)),
        (Side::North, here.north, north.south, (base.0 + g.side, base.1 + p + 1)),
    ] {
        for bit in 0..g.m {
            let a = codes[mine].bits[bit];
            if a != codes[theirs].bits[bit] {
                return Err(SimulationError::EdgeMismatch { x, y, side, bit });
            }
            let at = match side {
                Side::East => (start.0, start.1 + bit as i64),
                _ => (start.0 + bit as i64, start.1),
            };
            links.push(LinkRecord {
                side,
                bit,
                altitude: a,
                at,
            });
        }
    }
    Ok(links)
}

fn check_pieces(set: &WangTileSet, pcs: &PolycubeSet) -> Result<(), SimulationError> {
    if pcs.k != set.k() || encode_colors(set)[0].bits.len() != pcs.m {
        return Err(SimulationError::PieceMismatch);
    }
    Ok(())
}

/// The floor plan for `w`, links included.
pub fn plan(
    set: &WangTileSet,
    pcs: &PolycubeSet,
    w: &WangTorusTiling,
    opts: AssembleOptions,
) -> Result<FloorPlan, SimulationError> {
    check_pieces(set, pcs)?;
    let mismatches = validate_torus_tiling(set, w)?;
    if let Some(&first) = mismatches.first() {
        if !opts.allow_invalid {
            return Err(SimulationError::InvalidTiling(first));
        }
    }
    let g = FloorGeometry::new(pcs.k, pcs.m)?;
    let per = (g.period * SIDE) as usize;
    let voxels = per
        .saturating_mul(per)
        .saturating_mul(w.p)
        .saturating_mul(w.q)
        .saturating_mul(SIDE as usize);
    if voxels > opts.max_voxels {
        return Err(SimulationError::Capacity {
            voxels,
            max: opts.max_voxels,
        });
    }
    let codes = encode_colors(set);
    let ports = meat_ports(pcs);
    let mut cells = vec![];
    for y in 0..w.q {
        for x in 0..w.p {
            let mut c = cell_body(&g, &ports, x, y, w.at(x, y));
            c.links = cell_links(&g, set, &codes, w, x, y)?;
            cells.push(c);
        }
    }
    Ok(FloorPlan {
        geometry: g,
        p: w.p,
        q: w.q,
        cells,
    })
}

fn cell_placements(pcs: &PolycubeSet, c: &CellPlan, out: &mut Vec<Placement>) {
    let at = |name: &str, coarse: Coarse, dz: i64| {
        let g = pcs.gadget(name).expect("compiled sets carry all six pieces");
        Placement::new(name, g.offset_for(coarse, dz))
    };
    out.push(at("meat", c.meat, 0));
    out.push(at("jaw", c.jaw, 0));
    for &f in &c.fillers {
        out.push(at("filler", f, 0));
    }
    for &(t, alt) in &c.teeth {
        out.push(at("tooth", t, alt.z()));
    }
    for l in &c.links {
        let name = if l.side == Side::East { "link_ew" } else { "link_sn" };
        // the link's C blocks ride on its upper half, so an upper-altitude dent needs
        // the whole link raised by half a block
        let dz = match l.altitude {
            Altitude::Upper => SIDE / 2,
            Altitude::Lower => 0,
        };
        out.push(at(name, l.at, dz));
    }
}

pub fn plan_to_instance(pcs: &PolycubeSet, plan: &FloorPlan) -> TilingInstance {
    let mut t = TilingInstance::new(plan.region());
    for c in &plan.cells {
        cell_placements(pcs, c, &mut t.placements);
    }
    t.canonicalize();
    t
}

/// Assemble the polycube floor simulating `w`.
pub fn assemble(
    set: &WangTileSet,
    pcs: &PolycubeSet,
    w: &WangTorusTiling,
    opts: AssembleOptions,
) -> Result<TilingInstance, SimulationError> {
    Ok(plan_to_instance(pcs, &plan(set, pcs, w, opts)?))
}

/// Result of reading a floor back: the Wang tiling plus the voxel translation of the
/// floor relative to the canonical assembly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub tiling: WangTorusTiling,
    pub shift: Voxel,
}

fn blueprint_origin(pcs: &PolycubeSet, p: &Placement, dims: [i64; 3]) -> Option<Voxel> {
    let g = pcs.gadget(&p.piece)?;
    Some(p.offset.offset(-g.anchor).wrap(dims))
}

pub fn decode_with_shift(
    set: &WangTileSet,
    pcs: &PolycubeSet,
    t: &TilingInstance,
) -> Result<Decoded, SimulationError> {
    check_pieces(set, pcs)?;
    let g = FloorGeometry::new(pcs.k, pcs.m)?;
    let r = t.region;
    let per = g.period * SIDE;
    if r.kind != RegionKind::Torus || r.dims[2] != SIDE {
        return Err(not_shaped("region is not a slab torus of height 8"));
    }
    if r.dims[0] % per != 0 || r.dims[1] % per != 0 {
        return Err(not_shaped(format!(
            "torus {}x{} is not a multiple of the floor period {per}",
            r.dims[0], r.dims[1]
        )));
    }
    let (p, q) = ((r.dims[0] / per) as usize, (r.dims[1] / per) as usize);

    let mut jaws = vec![];
    let mut meats = vec![];
    for pl in &t.placements {
        let o = blueprint_origin(pcs, pl, r.dims)
            .ok_or_else(|| not_shaped(format!("unknown piece `{}`", pl.piece)))?;
        match pl.piece.as_str() {
            "jaw" => jaws.push(o),
            "meat" => meats.push(o),
            _ => {}
        }
    }
    if jaws.len() != p * q || meats.len() != p * q {
        return Err(not_shaped(format!(
            "expected {} jaws and meats, found {} and {}",
            p * q,
            jaws.len(),
            meats.len()
        )));
    }
    let shift = Voxel::new(
        jaws[0].x.rem_euclid(per),
        jaws[0].y.rem_euclid(per),
        jaws[0].z.rem_euclid(SIDE),
    );
    let mut seen_jaw = vec![false; p * q];
    for j in &jaws {
        let d = j.offset(-shift).wrap(r.dims);
        if d.x % per != 0 || d.y % per != 0 || d.z != 0 {
            return Err(not_shaped(format!("jaw at {j} is off the lattice")));
        }
        let i = (d.y / per) as usize * p + (d.x / per) as usize;
        if std::mem::replace(&mut seen_jaw[i], true) {
            return Err(not_shaped(format!("two jaws on lattice site {i}")));
        }
    }

    let pitch = segment_pitch(g.m);
    let (ex, ey) = g.exposed_offset();
    let coarse_dims = (g.period * p as i64, g.period * q as i64);
    let mut grid = vec![vec![usize::MAX; p]; q];
    for mt in &meats {
        let d = mt.offset(-shift).wrap(r.dims);
        if d.x % SIDE != 0 || d.y % SIDE != 0 || d.z != 0 {
            return Err(not_shaped(format!("meat at {mt} is off the coarse grid")));
        }
        let o = (d.x / SIDE, d.y / SIDE);
        let mut found = None;
        for s in 0..g.k {
            let e = (o.0 + s as i64 * pitch.0 - ex, o.1 + s as i64 * pitch.1 - ey);
            let e = (e.0.rem_euclid(coarse_dims.0), e.1.rem_euclid(coarse_dims.1));
            if e.0 % g.period == 0 && e.1 % g.period == 0 {
                found = Some((s, (e.0 / g.period) as usize, (e.1 / g.period) as usize));
                break;
            }
        }
        let Some((s, x, y)) = found else {
            return Err(not_shaped(format!("meat at {mt} exposes no segment at a lattice gap")));
        };
        if grid[y][x] != usize::MAX {
            return Err(not_shaped(format!("two meats expose a segment at cell ({x}, {y})")));
        }
        grid[y][x] = s;
    }
    Ok(Decoded {
        tiling: WangTorusTiling { p, q, grid },
        shift,
    })
}

/// Read the simulated Wang tiling off an assembled floor.
pub fn decode(
    set: &WangTileSet,
    pcs: &PolycubeSet,
    t: &TilingInstance,
) -> Result<WangTorusTiling, SimulationError> {
    Ok(decode_with_shift(set, pcs, t)?.tiling)
}

/// Re-derive the meat, fillers and teeth of one cell for a different exposed segment,
/// keeping every other placement (links included) as it was.
pub fn perturb(
    set: &WangTileSet,
    pcs: &PolycubeSet,
    t: &TilingInstance,
    cell: (usize, usize),
    new_segment: usize,
) -> Result<TilingInstance, SimulationError> {
    if new_segment >= pcs.k {
        return Err(SimulationError::SegmentOutOfRange {
            segment: new_segment,
            k: pcs.k,
        });
    }
    let Decoded { tiling, shift } = decode_with_shift(set, pcs, t)?;
    let (x, y) = cell;
    if x >= tiling.p || y >= tiling.q {
        return Err(SimulationError::CellOutOfRange {
            x,
            y,
            p: tiling.p,
            q: tiling.q,
        });
    }
    let g = FloorGeometry::new(pcs.k, pcs.m)?;
    let ports = meat_ports(pcs);
    let old = cell_body(&g, &ports, x, y, tiling.grid[y][x]);
    let new = cell_body(&g, &ports, x, y, new_segment);

    let canon = |c: &CellPlan| {
        let mut v = vec![];
        cell_placements(pcs, c, &mut v);
        v.into_iter()
            .map(|mut p| {
                p.offset = p.offset.offset(shift).wrap(t.region.dims);
                p
            })
            .collect::<Vec<_>>()
    };
    let old_pl = canon(&old);
    let new_pl = canon(&new);

    // swap the old cell's meat, fillers and teeth for the new ones slot by slot (the
    // counts agree for every segment), keeping its jaw and every link
    let mut remove: BTreeMap<&Placement, usize> = BTreeMap::new();
    for p in old_pl.iter().filter(|p| p.piece != "jaw") {
        *remove.entry(p).or_insert(0) += 1;
    }
    let mut fresh = new_pl.into_iter().filter(|p| p.piece != "jaw");
    let mut out = TilingInstance::new(t.region);
    for p in &t.placements {
        match remove.get_mut(p) {
            Some(n) if *n > 0 => {
                *n -= 1;
                out.placements.extend(fresh.next());
            }
            _ => out.placements.push(p.clone()),
        }
    }
    out.placements.extend(fresh);
    Ok(out)
}

/// Placement counts per piece, divided by the number of Wang cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub cells: usize,
    pub per_cell: BTreeMap<String, usize>,
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, n) in &self.per_cell {
            writeln!(f, "{name} {n}")?;
        }
        Ok(())
    }
}

pub fn census(t: &TilingInstance, cells: usize) -> Census {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for p in &t.placements {
        *counts.entry(p.piece.clone()).or_insert(0) += 1;
    }
    for n in counts.values_mut() {
        *n /= cells.max(1);
    }
    Census {
        cells,
        per_cell: counts,
    }
}

/// Outcome of the sub-assembly checks for one exposed segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GripReport {
    pub exposed: usize,
    /// Overlapping voxels among meat and the two gripping jaws.
    pub grip_overlaps: usize,
    /// Meat segments (other than the exposed one) not inside a jaw square.
    pub loose_segments: usize,
    /// Whether the exposed segment's core lies clear of both jaws.
    pub exposed_clear: bool,
    /// Overlaps once fillers and teeth are added.
    pub fill_overlaps: usize,
    /// Empty voxels left in the gripping mouths after fillers and teeth.
    pub fill_gaps: usize,
}

impl GripReport {
    pub fn ok(&self) -> bool {
        self.grip_overlaps == 0
            && self.loose_segments == 0
            && self.exposed_clear
            && self.fill_overlaps == 0
            && self.fill_gaps == 0
    }
}

fn in_square(c: Coarse, base: Coarse, s: i64) -> bool {
    (base.0..base.0 + s).contains(&c.0) && (base.1..base.1 + s).contains(&c.1)
}

/// Meat with exposed segment `s` at cell (0, 0) of a 2×2 floor, gripped by the SE
/// mouth of the jaw above and the NW mouth of the jaw to the east.
pub fn grip_check(pcs: &PolycubeSet, s: usize) -> Result<GripReport, SimulationError> {
    if s >= pcs.k {
        return Err(SimulationError::SegmentOutOfRange {
            segment: s,
            k: pcs.k,
        });
    }
    let g = FloorGeometry::new(pcs.k, pcs.m)?;
    let ports = meat_ports(pcs);
    let body = cell_body(&g, &ports, 0, 0, s);
    let p = g.period;
    let above = (0, p);
    let east = (p, 0);
    let region = Region::torus(2 * p * SIDE, 2 * p * SIDE, SIDE);
    let pieces = pcs.named();
    let mk = |name: &str, c: Coarse, dz: i64| {
        Placement::new(name, pcs.gadget(name).unwrap().offset_for(c, dz))
    };

    let mut grip = TilingInstance::new(region);
    grip.placements.push(mk("meat", body.meat, 0));
    grip.placements.push(mk("jaw", above, 0));
    grip.placements.push(mk("jaw", east, 0));
    grip.canonicalize();
    let overlaps = |t: &TilingInstance| -> Result<usize, SimulationError> {
        Ok(verify(&pieces, t)?
            .iter()
            .filter(|d| matches!(d.kind, DefectKind::Overlap(_)))
            .count())
    };
    let grip_overlaps = overlaps(&grip)?;

    let pitch = segment_pitch(g.m);
    let foot = segment_footprint(g.m);
    let mut loose_segments = 0;
    let mut exposed_clear = true;
    for j in 0..g.k {
        let o = (
            body.meat.0 + j as i64 * pitch.0,
            body.meat.1 + j as i64 * pitch.1,
        );
        let cells = foot.iter().map(|&(x, y)| (o.0 + x, o.1 + y));
        if j == s {
            let (lo, hi) = crate::reduction::segment_core(g.m);
            for y in lo.1..=hi.1 {
                for x in lo.0..=hi.0 {
                    let c = (o.0 + x, o.1 + y);
                    if in_square(c, above, g.side) || in_square(c, east, g.side) {
                        exposed_clear = false;
                    }
                }
            }
        } else if !cells
            .clone()
            .all(|c| in_square(c, above, g.side) || in_square(c, east, g.side))
        {
            loose_segments += 1;
        }
    }

    let mut full = grip.clone();
    for &f in &body.fillers {
        full.placements.push(mk("filler", f, 0));
    }
    for &(c, alt) in &body.teeth {
        full.placements.push(mk("tooth", c, alt.z()));
    }
    full.canonicalize();
    let defects = verify(&pieces, &full)?;
    let fill_overlaps = defects
        .iter()
        .filter(|d| matches!(d.kind, DefectKind::Overlap(_)))
        .count();
    // the gripping mouths: slots 1..k of the SE mouth above and the NW mouth east
    let (se, nw) = mouth_slots(g.k, g.m);
    let mut mouth = std::collections::BTreeSet::new();
    for (slots, base) in [(&se, above), (&nw, east)] {
        for &(sx, sy) in &slots[1..] {
            for &(x, y) in &foot {
                let c = (base.0 + sx + x, base.1 + sy + y);
                if in_square(c, base, g.side) {
                    mouth.insert(c);
                }
            }
        }
    }
    let fill_gaps = defects
        .iter()
        .filter(|d| {
            d.kind == DefectKind::Gap && mouth.contains(&(d.cell.x / SIDE, d.cell.y / SIDE))
        })
        .count();
    Ok(GripReport {
        exposed: s,
        grip_overlaps,
        loose_segments,
        exposed_clear,
        fill_overlaps,
        fill_gaps,
    })
}

/// Room available to a link along the east gap row of bit 0 of cell (0, 0) on a 2×2
/// floor: the longest run of coarse cells that are not completely filled by the
/// non-link pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkRoom {
    pub with_meat: i64,
    pub with_fillers_only: i64,
    pub link_length: i64,
}

pub fn link_room(set: &WangTileSet, pcs: &PolycubeSet) -> Result<LinkRoom, SimulationError> {
    check_pieces(set, pcs)?;
    let g = FloorGeometry::new(pcs.k, pcs.m)?;
    let ports = meat_ports(pcs);
    let p = g.period;
    let region = Region::torus(2 * p * SIDE, 2 * p * SIDE, SIDE);
    let pieces = pcs.named();
    let pitch = segment_pitch(g.m);

    let build = |fillers_only: bool| -> TilingInstance {
        let mut t = TilingInstance::new(region);
        for y in 0..2 {
            for x in 0..2 {
                let mut c = cell_body(&g, &ports, x, y, 0);
                if fillers_only {
                    c.teeth.clear();
                }
                let mut v = vec![];
                cell_placements(pcs, &c, &mut v);
                if fillers_only {
                    // the meat gives way to k fillers on its segment slots
                    v.retain(|pl| pl.piece != "meat");
                    for j in 0..g.k as i64 {
                        let at = (c.meat.0 + j * pitch.0, c.meat.1 + j * pitch.1);
                        v.push(Placement::new(
                            "filler",
                            pcs.filler().offset_for(at, 0),
                        ));
                    }
                }
                t.placements.extend(v);
            }
        }
        t.canonicalize();
        t
    };

    let room = |t: &TilingInstance| -> Result<i64, SimulationError> {
        let defects = verify(&pieces, t)?;
        let mut gaps: BTreeMap<Coarse, usize> = BTreeMap::new();
        for d in defects.iter().filter(|d| d.kind == DefectKind::Gap) {
            *gaps.entry((d.cell.x / SIDE, d.cell.y / SIDE)).or_insert(0) += 1;
        }
        let row = g.side;
        let (mut best, mut run) = (0, 0);
        for x in p..2 * p {
            if gaps.get(&(x, row)).copied().unwrap_or(0) > 0 {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        Ok(best)
    };
    Ok(LinkRoom {
        with_meat: room(&build(false))?,
        with_fillers_only: room(&build(true))?,
        link_length: link_length(g.k, g.m),
    })
}

/// Compile and assemble in one go; used by callers that only hold the tile set.
pub fn compile_and_assemble(
    set: &WangTileSet,
    w: &WangTorusTiling,
    opts: AssembleOptions,
) -> Result<(PolycubeSet, TilingInstance), SimulationError> {
    let pcs = compile(set)?;
    let t = assemble(set, &pcs, w, opts)?;
    Ok((pcs, t))
}
