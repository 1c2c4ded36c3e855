//! Wang tile sets, doubly periodic Wang tilings and a brute-force torus solver.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::voxel::FormatError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WangError {
    #[error("tiling is {got_p}x{got_q} but claims period {p}x{q}")]
    Dimensions {
        p: usize,
        q: usize,
        got_p: usize,
        got_q: usize,
    },
    #[error("tile index {index} out of range for a set of {k} tiles")]
    TileIndex { index: usize, k: usize },
    #[error("periods must be positive")]
    ZeroPeriod,
}

/// Colors indexed by first appearance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColorTable {
    tokens: Vec<String>,
}

impl ColorTable {
    pub fn intern(&mut self, token: &str) -> usize {
        if let Some(i) = self.index_of(token) {
            return i;
        }
        self.tokens.push(token.to_string());
        self.tokens.len() - 1
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t == token)
    }

    pub fn token(&self, index: usize) -> &str {
        &self.tokens[index]
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WangTile {
    pub north: usize,
    pub east: usize,
    pub south: usize,
    pub west: usize,
}

impl WangTile {
    pub fn new(north: usize, east: usize, south: usize, west: usize) -> Self {
        Self {
            north,
            east,
            south,
            west,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WangTileSet {
    pub tiles: Vec<WangTile>,
    pub colors: ColorTable,
}

impl WangTileSet {
    /// Build from color tokens given as `[N, E, S, W]` per tile.
    pub fn from_tokens<S: AsRef<str>>(tiles: &[[S; 4]]) -> Self {
        let mut colors = ColorTable::default();
        let tiles = tiles
            .iter()
            .map(|t| {
                let [n, e, s, w] = [0, 1, 2, 3].map(|i| colors.intern(t[i].as_ref()));
                WangTile::new(n, e, s, w)
            })
            .collect();
        Self { tiles, colors }
    }

    pub fn k(&self) -> usize {
        self.tiles.len()
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    pub fn to_wts(&self) -> String {
        let mut out = String::from("wang v1\n");
        for t in &self.tiles {
            let c = |i: usize| self.colors.token(i);
            let _ = writeln!(
                out,
                "tile {} {} {} {}",
                c(t.north),
                c(t.east),
                c(t.south),
                c(t.west)
            );
        }
        out
    }
}

pub fn parse_tileset(text: &str) -> Result<WangTileSet, FormatError> {
    let mut tokens: Vec<[String; 4]> = vec![];
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
        if !saw_header {
            if fields == ["wang", "v1"] {
                saw_header = true;
                continue;
            }
            // a bare tile list without header is tolerated
            saw_header = true;
        }
        if fields[0] != "tile" {
            return Err(FormatError::new(
                line_no,
                format!("expected `tile`, found `{}`", fields[0]),
            ));
        }
        if fields.len() != 5 {
            return Err(FormatError::new(
                line_no,
                format!("tile needs 4 colors (N E S W), found {}", fields.len() - 1),
            ));
        }
        tokens.push([1, 2, 3, 4].map(|j| fields[j].to_string()));
    }
    if tokens.is_empty() {
        return Err(FormatError::new(last_line.max(1), "tile set is empty"));
    }
    Ok(WangTileSet::from_tokens(&tokens))
}

/// `q` rows of `p` tile indices; row 0 is the southern row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WangTorusTiling {
    pub p: usize,
    pub q: usize,
    pub grid: Vec<Vec<usize>>,
}

impl WangTorusTiling {
    pub fn new(grid: Vec<Vec<usize>>) -> Result<Self, WangError> {
        let q = grid.len();
        let p = grid.first().map_or(0, Vec::len);
        if p == 0 || q == 0 {
            return Err(WangError::ZeroPeriod);
        }
        if let Some(bad) = grid.iter().find(|r| r.len() != p) {
            return Err(WangError::Dimensions {
                p,
                q,
                got_p: bad.len(),
                got_q: q,
            });
        }
        Ok(Self { p, q, grid })
    }

    pub fn at(&self, x: usize, y: usize) -> usize {
        self.grid[y % self.q][x % self.p]
    }

    /// Repeat `a` times horizontally and `b` times vertically.
    pub fn repeat(&self, a: usize, b: usize) -> WangTorusTiling {
        let grid = (0..self.q * b)
            .map(|y| (0..self.p * a).map(|x| self.at(x, y)).collect())
            .collect();
        WangTorusTiling {
            p: self.p * a,
            q: self.q * b,
            grid,
        }
    }

    pub fn to_wtt(&self) -> String {
        let mut out = format!("wangtiling v1\nperiod {} {}\n", self.p, self.q);
        for row in &self.grid {
            out.push_str("row");
            for t in row {
                let _ = write!(out, " {t}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn parse_tiling(text: &str) -> Result<WangTorusTiling, FormatError> {
    let mut period: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<usize>> = vec![];
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
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| FormatError::new(line_no, format!("bad integer {s:?}")))
        };
        if !saw_header {
            if fields != ["wangtiling", "v1"] {
                return Err(FormatError::new(line_no, "expected header `wangtiling v1`"));
            }
            saw_header = true;
            continue;
        }
        match fields[0] {
            "period" if period.is_none() => {
                if fields.len() != 3 {
                    return Err(FormatError::new(line_no, "expected `period <p> <q>`"));
                }
                let (p, q) = (num(fields[1])?, num(fields[2])?);
                if p == 0 || q == 0 {
                    return Err(FormatError::new(line_no, "periods must be positive"));
                }
                period = Some((p, q));
            }
            "row" => {
                let Some((p, q)) = period else {
                    return Err(FormatError::new(line_no, "`row` before `period`"));
                };
                if fields.len() - 1 != p {
                    return Err(FormatError::new(
                        line_no,
                        format!("row has {} entries, period is {p}", fields.len() - 1),
                    ));
                }
                if rows.len() == q {
                    return Err(FormatError::new(line_no, format!("more than {q} rows")));
                }
                rows.push(fields[1..].iter().map(|f| num(f)).collect::<Result<_, _>>()?);
            }
            other => {
                return Err(FormatError::new(line_no, format!("unexpected `{other}`")));
            }
        }
    }
    let Some((_, q)) = period else {
        return Err(FormatError::new(last_line.max(1), "missing `period`"));
    };
    if rows.len() != q {
        return Err(FormatError::new(
            last_line.max(1),
            format!("expected {q} rows, found {}", rows.len()),
        ));
    }
    WangTorusTiling::new(rows).map_err(|e| FormatError::new(last_line, e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeDir {
    /// Between `(x, y)` and `(x + 1, y)`.
    Horizontal,
    /// Between `(x, y)` and `(x, y + 1)`.
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeMismatch {
    pub x: usize,
    pub y: usize,
    pub dir: EdgeDir,
}

impl fmt::Display for EdgeMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.dir {
            EdgeDir::Horizontal => "east",
            EdgeDir::Vertical => "north",
        };
        write!(f, "{d} edge of ({}, {})", self.x, self.y)
    }
}

fn check_indices(set: &WangTileSet, t: &WangTorusTiling) -> Result<(), WangError> {
    if t.p == 0 || t.q == 0 {
        return Err(WangError::ZeroPeriod);
    }
    let got_q = t.grid.len();
    if let Some(bad) = t.grid.iter().find(|r| r.len() != t.p) {
        return Err(WangError::Dimensions {
            p: t.p,
            q: t.q,
            got_p: bad.len(),
            got_q,
        });
    }
    if got_q != t.q {
        return Err(WangError::Dimensions {
            p: t.p,
            q: t.q,
            got_p: t.p,
            got_q,
        });
    }
    for row in &t.grid {
        for &index in row {
            if index >= set.k() {
                return Err(WangError::TileIndex { index, k: set.k() });
            }
        }
    }
    Ok(())
}

/// All adjacent pairs (with wraparound) whose shared edge colors differ, row-major,
/// horizontal edge before vertical edge at each cell.
pub fn validate_torus_tiling(
    set: &WangTileSet,
    t: &WangTorusTiling,
) -> Result<Vec<EdgeMismatch>, WangError> {
    check_indices(set, t)?;
    let mut out = vec![];
    for y in 0..t.q {
        for x in 0..t.p {
            let here = set.tiles[t.at(x, y)];
            if here.east != set.tiles[t.at(x + 1, y)].west {
                out.push(EdgeMismatch {
                    x,
                    y,
                    dir: EdgeDir::Horizontal,
                });
            }
            if here.north != set.tiles[t.at(x, y + 1)].south {
                out.push(EdgeMismatch {
                    x,
                    y,
                    dir: EdgeDir::Vertical,
                });
            }
        }
    }
    Ok(out)
}

/// Lexicographically first valid tiling of the `p × q` torus, filling row-major.
pub fn solve_torus(set: &WangTileSet, p: usize, q: usize) -> Result<Option<WangTorusTiling>, WangError> {
    if p == 0 || q == 0 {
        return Err(WangError::ZeroPeriod);
    }
    let n = p * q;
    let mut cells = vec![usize::MAX; n];
    let k = set.k();

    // whether tile `t` may sit at linear cell `i` given the already-filled cells
    let fits = |cells: &[usize], i: usize, t: usize| -> bool {
        let (x, y) = (i % p, i / p);
        let tile = set.tiles[t];
        // on a period-1 axis the neighbour is the cell itself
        let get = |x: usize, y: usize| {
            let j = y * p + x;
            if j == i {
                t
            } else {
                cells[j]
            }
        };
        // west neighbour
        let w = get((x + p - 1) % p, y);
        if w != usize::MAX && set.tiles[w].east != tile.west {
            return false;
        }
        let e = get((x + 1) % p, y);
        if e != usize::MAX && set.tiles[e].west != tile.east {
            return false;
        }
        let s = get(x, (y + q - 1) % q);
        if s != usize::MAX && set.tiles[s].north != tile.south {
            return false;
        }
        let nn = get(x, (y + 1) % q);
        if nn != usize::MAX && set.tiles[nn].south != tile.north {
            return false;
        }
        true
    };

    let mut i = 0usize;
    let mut next = vec![0usize; n];
    loop {
        if i == n {
            let grid = cells.chunks(p).map(<[usize]>::to_vec).collect();
            return Ok(Some(WangTorusTiling { p, q, grid }));
        }
        let mut placed = false;
        while next[i] < k {
            let t = next[i];
            next[i] += 1;
            if fits(&cells, i, t) {
                cells[i] = t;
                placed = true;
                break;
            }
        }
        if placed {
            i += 1;
        } else {
            next[i] = 0;
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            cells[i] = usize::MAX;
        }
    }
}

/// Scan tori ordered by area, then by `(p, q)`, with both periods at most `max_period`.
pub fn find_min_torus(
    set: &WangTileSet,
    max_period: usize,
) -> Result<Option<WangTorusTiling>, WangError> {
    if max_period == 0 {
        return Err(WangError::ZeroPeriod);
    }
    let mut shapes: Vec<(usize, usize)> = (1..=max_period)
        .flat_map(|p| (1..=max_period).map(move |q| (p, q)))
        .collect();
    shapes.sort_by_key(|&(p, q)| (p * q, p, q));
    for (p, q) in shapes {
        if let Some(t) = solve_torus(set, p, q)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}
