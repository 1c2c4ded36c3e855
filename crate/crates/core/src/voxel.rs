//! Integer voxel sets, polycubes, regions and the text formats that carry them.
//!
//! Coordinates follow a right-handed frame with `x` east, `y` north and `z` up.
//! Every voxel set is kept sorted by `(z, y, x)`, which is also the order used by
//! the `.pcs` writer and by defect reports.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Write as _};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("operation requires a nonempty voxel set")]
    Empty,
    #[error("voxel set is not face-connected")]
    Disconnected,
    #[error("region dimensions must be positive, got {0}x{1}x{2}")]
    BadRegion(i64, i64, i64),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// One unit cube of the integer lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Voxel {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl Voxel {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        Self { x, y, z }
    }

    pub fn offset(self, d: Voxel) -> Voxel {
        Voxel::new(self.x + d.x, self.y + d.y, self.z + d.z)
    }

    /// Reduce each coordinate into `0..dims`.
    pub fn wrap(self, dims: [i64; 3]) -> Voxel {
        Voxel::new(
            self.x.rem_euclid(dims[0]),
            self.y.rem_euclid(dims[1]),
            self.z.rem_euclid(dims[2]),
        )
    }

    fn neighbours(self) -> [Voxel; 6] {
        let Voxel { x, y, z } = self;
        [
            Voxel::new(x - 1, y, z),
            Voxel::new(x + 1, y, z),
            Voxel::new(x, y - 1, z),
            Voxel::new(x, y + 1, z),
            Voxel::new(x, y, z - 1),
            Voxel::new(x, y, z + 1),
        ]
    }
}

impl std::ops::Neg for Voxel {
    type Output = Voxel;

    fn neg(self) -> Voxel {
        Voxel::new(-self.x, -self.y, -self.z)
    }
}

impl Ord for Voxel {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.z, self.y, self.x).cmp(&(other.z, other.y, other.x))
    }
}

impl PartialOrd for Voxel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Voxel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Inclusive bounding box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub min: Voxel,
    pub max: Voxel,
}

impl Bounds {
    pub fn extent(&self) -> [i64; 3] {
        [
            self.max.x - self.min.x + 1,
            self.max.y - self.min.y + 1,
            self.max.z - self.min.z + 1,
        ]
    }
}

/// A finite set of voxels, stored sorted by `(z, y, x)` without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VoxelSet {
    cells: Vec<Voxel>,
}

impl VoxelSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cells(mut cells: Vec<Voxel>) -> Self {
        cells.sort_unstable();
        cells.dedup();
        Self { cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Voxel] {
        &self.cells
    }

    pub fn iter(&self) -> impl Iterator<Item = Voxel> + '_ {
        self.cells.iter().copied()
    }

    pub fn contains(&self, v: Voxel) -> bool {
        self.cells.binary_search(&v).is_ok()
    }

    pub fn bounds(&self) -> Option<Bounds> {
        let first = *self.cells.first()?;
        let mut min = first;
        let mut max = first;
        for v in &self.cells {
            min = Voxel::new(min.x.min(v.x), min.y.min(v.y), min.z.min(v.z));
            max = Voxel::new(max.x.max(v.x), max.y.max(v.y), max.z.max(v.z));
        }
        Some(Bounds { min, max })
    }

    pub fn translate(&self, d: Voxel) -> VoxelSet {
        // translation preserves the (z, y, x) order
        VoxelSet {
            cells: self.cells.iter().map(|v| v.offset(d)).collect(),
        }
    }

    pub fn union(&self, other: &VoxelSet) -> VoxelSet {
        let mut cells = Vec::with_capacity(self.len() + other.len());
        cells.extend_from_slice(&self.cells);
        cells.extend_from_slice(&other.cells);
        VoxelSet::from_cells(cells)
    }

    pub fn intersection(&self, other: &VoxelSet) -> VoxelSet {
        VoxelSet {
            cells: self
                .cells
                .iter()
                .copied()
                .filter(|v| other.contains(*v))
                .collect(),
        }
    }

    pub fn difference(&self, other: &VoxelSet) -> VoxelSet {
        VoxelSet {
            cells: self
                .cells
                .iter()
                .copied()
                .filter(|v| !other.contains(*v))
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &VoxelSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().all(|v| !large.contains(v))
    }

    /// Map every cell through `f` and re-sort.
    pub fn map(&self, f: impl Fn(Voxel) -> Voxel) -> VoxelSet {
        VoxelSet::from_cells(self.cells.iter().map(|v| f(*v)).collect())
    }

    /// The solid box `[0, nx) x [0, ny) x [z0, z1)`.
    pub fn solid_box(nx: i64, ny: i64, z0: i64, z1: i64) -> VoxelSet {
        let mut cells = Vec::with_capacity((nx * ny * (z1 - z0).max(0)) as usize);
        for z in z0..z1 {
            for y in 0..ny {
                for x in 0..nx {
                    cells.push(Voxel::new(x, y, z));
                }
            }
        }
        VoxelSet { cells }
    }
}

impl FromIterator<Voxel> for VoxelSet {
    fn from_iter<T: IntoIterator<Item = Voxel>>(iter: T) -> Self {
        VoxelSet::from_cells(iter.into_iter().collect())
    }
}

/// Translate so that the componentwise minimum corner sits at the origin.
pub fn normalize(s: &VoxelSet) -> Result<VoxelSet, GeometryError> {
    let b = s.bounds().ok_or(GeometryError::Empty)?;
    Ok(s.translate(-b.min))
}

/// Clockwise quarter turn seen from `+z`: `(x, y, z) -> (y, -x, z)`, then normalize.
pub fn rotate90_z(s: &VoxelSet) -> Result<VoxelSet, GeometryError> {
    if s.is_empty() {
        return Err(GeometryError::Empty);
    }
    normalize(&s.map(|v| Voxel::new(v.y, -v.x, v.z)))
}

pub fn rotate180_z(s: &VoxelSet) -> Result<VoxelSet, GeometryError> {
    rotate90_z(&rotate90_z(s)?)
}

/// Face connectivity. Empty and singleton sets count as connected.
pub fn is_connected(s: &VoxelSet) -> bool {
    let Some(b) = s.bounds() else {
        return true;
    };
    let [ex, ey, ez] = b.extent();
    let dense = ex.saturating_mul(ey).saturating_mul(ez);
    if dense <= 1 << 26 {
        connected_dense(s, b)
    } else {
        connected_sparse(s)
    }
}

fn connected_dense(s: &VoxelSet, b: Bounds) -> bool {
    let [ex, ey, ez] = b.extent();
    let idx = |v: Voxel| -> Option<usize> {
        let (x, y, z) = (v.x - b.min.x, v.y - b.min.y, v.z - b.min.z);
        if x < 0 || y < 0 || z < 0 || x >= ex || y >= ey || z >= ez {
            None
        } else {
            Some(((z * ey + y) * ex + x) as usize)
        }
    };
    // 0 = empty, 1 = occupied, 2 = reached
    let mut grid = vec![0u8; (ex * ey * ez) as usize];
    for v in s.iter() {
        grid[idx(v).unwrap()] = 1;
    }
    let start = s.cells()[0];
    grid[idx(start).unwrap()] = 2;
    let mut queue = VecDeque::from([start]);
    let mut reached = 1usize;
    while let Some(v) = queue.pop_front() {
        for n in v.neighbours() {
            if let Some(i) = idx(n) {
                if grid[i] == 1 {
                    grid[i] = 2;
                    reached += 1;
                    queue.push_back(n);
                }
            }
        }
    }
    reached == s.len()
}

fn connected_sparse(s: &VoxelSet) -> bool {
    let cells: HashSet<Voxel> = s.iter().collect();
    let start = s.cells()[0];
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for n in v.neighbours() {
            if cells.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.len() == cells.len()
}

/// A normalized, face-connected, nonempty voxel set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polycube {
    cells: VoxelSet,
}

impl Polycube {
    /// Normalizes `cells` and checks connectivity.
    pub fn new(cells: &VoxelSet) -> Result<Self, GeometryError> {
        let cells = normalize(cells)?;
        if !is_connected(&cells) {
            return Err(GeometryError::Disconnected);
        }
        Ok(Self { cells })
    }

    pub fn unit() -> Self {
        Self {
            cells: VoxelSet::from_cells(vec![Voxel::default()]),
        }
    }

    pub fn cells(&self) -> &VoxelSet {
        &self.cells
    }

    pub fn volume(&self) -> usize {
        self.cells.len()
    }

    pub fn extent(&self) -> [i64; 3] {
        self.cells.bounds().expect("polycubes are nonempty").extent()
    }

    pub fn rotate90_z(&self) -> Polycube {
        Polycube {
            cells: rotate90_z(&self.cells).expect("polycubes are nonempty"),
        }
    }

    pub fn rotate180_z(&self) -> Polycube {
        self.rotate90_z().rotate90_z()
    }
}

/// Region shape: a finite box, or a torus that wraps every axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    Box,
    Torus,
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionKind::Box => "box",
            RegionKind::Torus => "torus",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub kind: RegionKind,
    pub dims: [i64; 3],
}

impl Region {
    pub fn new(kind: RegionKind, dims: [i64; 3]) -> Result<Self, GeometryError> {
        if dims.iter().any(|&d| d < 1) {
            return Err(GeometryError::BadRegion(dims[0], dims[1], dims[2]));
        }
        Ok(Self { kind, dims })
    }

    pub fn boxed(x: i64, y: i64, z: i64) -> Self {
        Self::new(RegionKind::Box, [x, y, z]).expect("positive dims")
    }

    pub fn torus(x: i64, y: i64, z: i64) -> Self {
        Self::new(RegionKind::Torus, [x, y, z]).expect("positive dims")
    }

    pub fn volume(&self) -> usize {
        (self.dims[0] * self.dims[1] * self.dims[2]) as usize
    }

    pub fn contains(&self, v: Voxel) -> bool {
        (0..self.dims[0]).contains(&v.x)
            && (0..self.dims[1]).contains(&v.y)
            && (0..self.dims[2]).contains(&v.z)
    }

    /// Linear index of an in-region voxel, ordered by `(z, y, x)`.
    pub fn index(&self, v: Voxel) -> usize {
        ((v.z * self.dims[1] + v.y) * self.dims[0] + v.x) as usize
    }

    pub fn voxel_at(&self, i: usize) -> Voxel {
        let i = i as i64;
        let plane = self.dims[0] * self.dims[1];
        Voxel::new(i % self.dims[0], (i % plane) / self.dims[0], i / plane)
    }
}

/// Layer diagram: one block of rows per `z` layer, bottom layer first, north row first
/// within a layer, `#` for occupied and `.` for empty, blank line between layers.
pub fn render_layers(p: &Polycube) -> String {
    let [ex, ey, ez] = p.extent();
    let mut out = String::new();
    for z in 0..ez {
        if z > 0 {
            out.push('\n');
        }
        for y in (0..ey).rev() {
            for x in 0..ex {
                out.push(if p.cells.contains(Voxel::new(x, y, z)) {
                    '#'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
    }
    out
}

pub fn parse_layers(text: &str) -> Result<Polycube, FormatError> {
    let mut layers: Vec<Vec<(usize, &str)>> = vec![];
    let mut current: Vec<(usize, &str)> = vec![];
    let mut width: Option<usize> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            if !current.is_empty() {
                layers.push(std::mem::take(&mut current));
            }
            continue;
        }
        if let Some(bad) = line.chars().find(|c| *c != '#' && *c != '.') {
            return Err(FormatError::new(
                line_no,
                format!("illegal character {bad:?} in layer row"),
            ));
        }
        match width {
            None => width = Some(line.len()),
            Some(w) if w != line.len() => {
                return Err(FormatError::new(
                    line_no,
                    format!("ragged row: expected width {w}, found {}", line.len()),
                ))
            }
            _ => {}
        }
        current.push((line_no, line));
    }
    if !current.is_empty() {
        layers.push(current);
    }
    let Some(first) = layers.first() else {
        return Err(FormatError::new(last_line.max(1), "no layers"));
    };
    let height = first.len();
    let mut cells = vec![];
    for (z, layer) in layers.iter().enumerate() {
        if layer.len() != height {
            return Err(FormatError::new(
                layer[0].0,
                format!("ragged layer: expected {height} rows, found {}", layer.len()),
            ));
        }
        for (r, (_, row)) in layer.iter().enumerate() {
            let y = (height - 1 - r) as i64;
            for (x, ch) in row.bytes().enumerate() {
                if ch == b'#' {
                    cells.push(Voxel::new(x as i64, y, z as i64));
                }
            }
        }
    }
    let set = VoxelSet::from_cells(cells);
    Polycube::new(&set).map_err(|e| FormatError::new(last_line.max(1), e.to_string()))
}

/// A named polycube as stored in `.pcs` files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedPolycube {
    pub name: String,
    pub polycube: Polycube,
}

/// Write a `.pcs` file. `comments` become `#` lines right after the header.
pub fn write_pcs(pieces: &[NamedPolycube], comments: &[String]) -> String {
    let total: usize = pieces.iter().map(|p| p.polycube.volume()).sum();
    let mut out = String::with_capacity(total * 12 + 64);
    out.push_str("polycubes v1\n");
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for p in pieces {
        let _ = writeln!(out, "name {}", p.name);
        for v in p.polycube.cells().iter() {
            let _ = writeln!(out, "voxel {} {} {}", v.x, v.y, v.z);
        }
        out.push_str("end\n");
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

pub fn parse_pcs(text: &str) -> Result<Vec<NamedPolycube>, FormatError> {
    let mut pieces = vec![];
    let mut open: Option<(usize, String, Vec<Voxel>)> = None;
    let mut saw_header = false;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != "polycubes v1" {
                return Err(FormatError::new(line_no, "expected header `polycubes v1`"));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (fields[0], &mut open) {
            ("name", None) => {
                if fields.len() != 2 || !is_ident(fields[1]) {
                    return Err(FormatError::new(line_no, "expected `name <ident>`"));
                }
                if pieces.iter().any(|p: &NamedPolycube| p.name == fields[1]) {
                    return Err(FormatError::new(
                        line_no,
                        format!("duplicate piece name {}", fields[1]),
                    ));
                }
                open = Some((line_no, fields[1].to_string(), vec![]));
            }
            ("voxel", Some((_, _, cells))) => {
                if fields.len() != 4 {
                    return Err(FormatError::new(line_no, "expected `voxel <x> <y> <z>`"));
                }
                let mut xyz = [0i64; 3];
                for (slot, f) in xyz.iter_mut().zip(&fields[1..]) {
                    *slot = f.parse().map_err(|_| {
                        FormatError::new(line_no, format!("bad integer {f:?}"))
                    })?;
                }
                cells.push(Voxel::new(xyz[0], xyz[1], xyz[2]));
            }
            ("end", Some(_)) => {
                let (start, name, cells) = open.take().unwrap();
                let set = VoxelSet::from_cells(cells);
                let polycube = Polycube::new(&set)
                    .map_err(|e| FormatError::new(start, format!("piece {name}: {e}")))?;
                pieces.push(NamedPolycube { name, polycube });
            }
            (other, _) => {
                return Err(FormatError::new(
                    line_no,
                    format!("unexpected `{other}` here"),
                ))
            }
        }
    }
    if !saw_header {
        return Err(FormatError::new(last_line.max(1), "missing header `polycubes v1`"));
    }
    if let Some((start, name, _)) = open {
        return Err(FormatError::new(start, format!("piece {name} is missing `end`")));
    }
    Ok(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(cells: &[(i64, i64, i64)]) -> VoxelSet {
        cells.iter().map(|&(x, y, z)| Voxel::new(x, y, z)).collect()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&set(&[(2, 3, 4)])).unwrap(), set(&[(0, 0, 0)]));
        let already = set(&[(0, 0, 0), (1, 0, 0)]);
        assert_eq!(normalize(&already).unwrap(), already);
        assert_eq!(
            normalize(&set(&[(-1, 0, 0), (0, 0, 0)])).unwrap(),
            set(&[(0, 0, 0), (1, 0, 0)])
        );
        assert_eq!(normalize(&VoxelSet::new()), Err(GeometryError::Empty));
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotate90_z(&set(&[(0, 0, 0)])).unwrap(), set(&[(0, 0, 0)]));
        assert_eq!(
            rotate90_z(&set(&[(0, 0, 0), (1, 0, 0)])).unwrap(),
            set(&[(0, 0, 0), (0, 1, 0)])
        );
        assert_eq!(rotate90_z(&VoxelSet::new()), Err(GeometryError::Empty));
        // clockwise from above: an east-pointing arm ends up pointing south
        let l = set(&[(0, 0, 0), (0, 1, 0), (1, 1, 0)]);
        assert_eq!(
            rotate90_z(&l).unwrap(),
            set(&[(0, 1, 0), (1, 1, 0), (1, 0, 0)])
        );
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&set(&[(0, 0, 0), (1, 0, 0)])));
        assert!(!is_connected(&set(&[(0, 0, 0), (2, 0, 0)])));
        assert!(!is_connected(&set(&[(0, 0, 0), (1, 1, 0)])));
        assert!(is_connected(&VoxelSet::new()));
        assert!(is_connected(&set(&[(5, 5, 5)])));
    }

    #[test]
    fn unit_cube_renders_as_one_hash() {
        assert_eq!(render_layers(&Polycube::unit()), "#\n");
        assert_eq!(parse_layers("#\n").unwrap(), Polycube::unit());
    }

    #[test]
    fn layer_parse_errors_carry_line_numbers() {
        let err = parse_layers("##\n#\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_layers("##\n#x\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_layers("##\n##\n\n#.\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(parse_layers("").is_err());
    }

    #[test]
    fn region_indexing_round_trips() {
        let r = Region::torus(3, 4, 5);
        for i in 0..r.volume() {
            assert_eq!(r.index(r.voxel_at(i)), i);
        }
        assert!(Region::new(RegionKind::Box, [1, 0, 1]).is_err());
    }

    #[test]
    fn pcs_round_trip_and_errors() {
        let pieces = vec![
            NamedPolycube {
                name: "unit".into(),
                polycube: Polycube::unit(),
            },
            NamedPolycube {
                name: "bar".into(),
                polycube: Polycube::new(&set(&[(0, 0, 0), (0, 0, 1)])).unwrap(),
            },
        ];
        let text = write_pcs(&pieces, &["k=2".into()]);
        assert!(text.starts_with("polycubes v1\n# k=2\nname unit\n"));
        assert_eq!(parse_pcs(&text).unwrap(), pieces);

        assert_eq!(parse_pcs("polycube v1\n").unwrap_err().line, 1);
        let err = parse_pcs("polycubes v1\nname a\nvoxel 0 0\nend\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_pcs("polycubes v1\nname a\nvoxel 0 0 0\nvoxel 2 0 0\nend\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
