//! Helpers shared by the integration tests: an independent exact-cover counter and
//! a seeded generator of small tiling instances.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tilecraft::voxel::{NamedPolycube, Polycube, Region, RegionKind, Voxel, VoxelSet};

pub fn piece(name: &str, cells: &[(i64, i64, i64)]) -> NamedPolycube {
    let set: VoxelSet = cells.iter().map(|&(x, y, z)| Voxel::new(x, y, z)).collect();
    NamedPolycube {
        name: name.into(),
        polycube: Polycube::new(&set).unwrap(),
    }
}

/// Dominoes along x, y and z.
pub fn three_dominoes() -> Vec<NamedPolycube> {
    vec![
        piece("dx", &[(0, 0, 0), (1, 0, 0)]),
        piece("dy", &[(0, 0, 0), (0, 1, 0)]),
        piece("dz", &[(0, 0, 0), (0, 0, 1)]),
    ]
}

/// Cell indices covered by each legal placement, written from scratch: box
/// placements must stay inside, torus placements wrap and must not hit themselves.
fn placements(pieces: &[NamedPolycube], r: Region) -> Vec<Vec<usize>> {
    let [dx, dy, dz] = r.dims;
    let idx = |x: i64, y: i64, z: i64| ((z * dy + y) * dx + x) as usize;
    let mut out = vec![];
    for p in pieces {
        let cells: Vec<(i64, i64, i64)> = p.polycube.cells().iter().map(|v| (v.x, v.y, v.z)).collect();
        for oz in 0..dz {
            for oy in 0..dy {
                for ox in 0..dx {
                    let mut covered = HashSet::new();
                    let mut ok = true;
                    for &(x, y, z) in &cells {
                        let (x, y, z) = (x + ox, y + oy, z + oz);
                        let cell = match r.kind {
                            RegionKind::Box => {
                                if x >= dx || y >= dy || z >= dz {
                                    ok = false;
                                    break;
                                }
                                idx(x, y, z)
                            }
                            RegionKind::Torus => idx(x % dx, y % dy, z % dz),
                        };
                        if !covered.insert(cell) {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        let mut v: Vec<usize> = covered.into_iter().collect();
                        v.sort_unstable();
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// Number of exact covers, by exhaustive search.
pub fn oracle_count(pieces: &[NamedPolycube], r: Region) -> u64 {
    let n = r.volume();
    let all = placements(pieces, r);
    let mut by_cell: Vec<Vec<usize>> = vec![vec![]; n];
    for (i, p) in all.iter().enumerate() {
        for &c in p {
            by_cell[c].push(i);
        }
    }
    fn go(filled: &mut Vec<bool>, all: &[Vec<usize>], by_cell: &[Vec<usize>]) -> u64 {
        let Some(first) = filled.iter().position(|f| !f) else {
            return 1;
        };
        let mut total = 0;
        for &i in &by_cell[first] {
            if all[i].iter().all(|&c| !filled[c]) {
                for &c in &all[i] {
                    filled[c] = true;
                }
                total += go(filled, all, by_cell);
                for &c in &all[i] {
                    filled[c] = false;
                }
            }
        }
        total
    }
    go(&mut vec![false; n], &all, &by_cell)
}

/// A random connected polycube of `size` cells inside a 3×3×3 bounding cube.
pub fn random_polycube(rng: &mut ChaCha8Rng, size: usize) -> Polycube {
    const DIRS: [(i64, i64, i64); 6] = [
        (1, 0, 0),
        (-1, 0, 0),
        (0, 1, 0),
        (0, -1, 0),
        (0, 0, 1),
        (0, 0, -1),
    ];
    let mut cells = vec![Voxel::new(1, 1, 1)];
    while cells.len() < size {
        let from = cells[rng.gen_range(0..cells.len())];
        let (dx, dy, dz) = DIRS[rng.gen_range(0..6)];
        let v = Voxel::new(from.x + dx, from.y + dy, from.z + dz);
        let inside = [v.x, v.y, v.z].iter().all(|c| (0..3).contains(c));
        if inside && !cells.contains(&v) {
            cells.push(v);
        }
    }
    Polycube::new(&VoxelSet::from_cells(cells)).unwrap()
}

/// A random instance with region volume at most 27.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (Vec<NamedPolycube>, Region) {
    let dims = loop {
        let d = [rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3)];
        if d.iter().product::<i64>() >= 2 {
            break d;
        }
    };
    let kind = if rng.gen_bool(0.5) {
        RegionKind::Box
    } else {
        RegionKind::Torus
    };
    let count = rng.gen_range(1..=2);
    // with two kinds, skip single cubes, which make the count explode
    let smallest = if count == 1 { 1 } else { 2 };
    let pieces = (0..count)
        .map(|i| {
            let size = rng.gen_range(smallest..=4);
            NamedPolycube {
                name: format!("p{i}"),
                polycube: random_polycube(rng, size),
            }
        })
        .collect();
    (pieces, Region::new(kind, dims).unwrap())
}
