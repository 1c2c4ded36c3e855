//! Hand transcriptions of the construction drawings, checked against the generated
//! geometry. Outlines are polygons in drawing units; a coarse cell belongs to a
//! gadget exactly when its centre lies inside the outline.

use std::collections::BTreeSet;

use tilecraft::blocks::{block, BlockLabel, Key};
use tilecraft::reduction::{
    encode_colors, filler_layout, jaw_layout, link_ew_layout, meat_layout, CellContent, Coarse,
};
use tilecraft::voxel::{normalize, parse_layers, render_layers, Polycube, Voxel, VoxelSet};
use tilecraft::{parse_tileset, Altitude};

const FIG1: &str = include_str!("../../../fixtures/fig1.wts");

/// Even-odd rule; `(px, py)` is never on an edge for the inputs used here.
fn inside(poly: &[(f64, f64)], px: f64, py: f64) -> bool {
    let mut hit = false;
    for w in poly.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if (y0 > py) != (y1 > py) && px < x0 + (py - y0) * (x1 - x0) / (y1 - y0) {
            hit = !hit;
        }
    }
    hit
}

fn cells_in(poly: &[(i64, i64)], unit: i64) -> BTreeSet<Coarse> {
    let pts: Vec<(f64, f64)> = poly.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    let (x0, x1) = (poly.iter().map(|p| p.0).min().unwrap(), poly.iter().map(|p| p.0).max().unwrap());
    let (y0, y1) = (poly.iter().map(|p| p.1).min().unwrap(), poly.iter().map(|p| p.1).max().unwrap());
    let mut out = BTreeSet::new();
    for cy in y0.div_euclid(unit)..=y1.div_euclid(unit) {
        for cx in x0.div_euclid(unit)..=x1.div_euclid(unit) {
            let h = unit as f64 / 2.0;
            if inside(&pts, (cx * unit) as f64 + h, (cy * unit) as f64 + h) {
                out.insert((cx, cy));
            }
        }
    }
    out
}

/// Cell of a label drawn at `(x, y)` in units of `unit`.
fn at(x: f64, y: f64, unit: f64) -> Coarse {
    ((x / unit).floor() as i64, (y / unit).floor() as i64)
}

// ---------------------------------------------------------------- block layers

/// Cells `(x, y)` with `x` in `xs` and `y` in `ys`.
fn grid(xs: impl IntoIterator<Item = i64> + Clone, ys: impl IntoIterator<Item = i64>) -> Vec<(i64, i64)> {
    ys.into_iter()
        .flat_map(|y| xs.clone().into_iter().map(move |x| (x, y)))
        .collect()
}

fn border() -> Vec<(i64, i64)> {
    let mut v = grid(0..8, [0, 7]);
    v.extend(grid([0, 7], 1..7));
    v
}

fn all_but(holes: &[(i64, i64)]) -> Vec<(i64, i64)> {
    grid(0..8, 0..8).into_iter().filter(|c| !holes.contains(c)).collect()
}

fn stack(layers: &[Vec<(i64, i64)>]) -> VoxelSet {
    layers
        .iter()
        .enumerate()
        .flat_map(|(z, l)| l.iter().map(move |&(x, y)| Voxel::new(x, y, z as i64)))
        .collect()
}

#[test]
fn c_dent_layers() {
    let mut l3 = border();
    l3.extend(grid(2..6, [2, 5]));
    l3.extend(grid([2, 5], [3, 4]));
    let drawn = stack(&[all_but(&[]), border(), l3, all_but(&grid(3..5, 3..5))]);
    assert_eq!(block(BlockLabel::Dent(Key::C)).cells, drawn);
}

#[test]
fn a_dent_layers() {
    let mut l3 = border();
    l3.extend(grid(2..6, [2, 5]));
    l3.extend(grid([2, 4, 5], [3, 4]));
    let drawn = stack(&[all_but(&[]), border(), l3, all_but(&[(3, 3), (3, 4)])]);
    assert_eq!(block(BlockLabel::Dent(Key::A)).cells, drawn);
}

#[test]
fn o_dent_layers() {
    let mut l3 = border();
    l3.extend(grid(2..6, [2, 3, 5]));
    l3.extend(grid([2, 5], [4]));
    let drawn = stack(&[all_but(&[]), border(), l3, all_but(&[(3, 4), (4, 4)])]);
    assert_eq!(block(BlockLabel::Dent(Key::O)).cells, drawn);
}

#[test]
fn m_block_layers() {
    let mut l2 = grid([1, 6], 1..7);
    l2.extend(grid(2..6, [1, 6]));
    l2.push((3, 3));
    let mut l10 = border();
    l10.extend(grid(2..6, [2, 4, 5]));
    l10.extend(grid([2, 4, 5], [3]));
    let mut layers = vec![grid(1..7, 1..7), l2, vec![(3, 3)]];
    layers.extend((0..5).map(|_| all_but(&[])));
    layers.extend([border(), l10, all_but(&[(3, 3)])]);
    let drawn = stack(&layers);
    let ours = normalize(&block(BlockLabel::M).cells).unwrap();
    assert_eq!(ours, drawn);
    assert_eq!(block(BlockLabel::M).polycube().extent(), [8, 8, 11]);
}

#[test]
fn small_polycube_layer_diagram() {
    let text = "#.\n#.\n\n#.\n..\n\n##\n..\n";
    let p = parse_layers(text).unwrap();
    let expect = VoxelSet::from_cells(vec![
        Voxel::new(0, 0, 0),
        Voxel::new(0, 1, 0),
        Voxel::new(0, 1, 1),
        Voxel::new(0, 1, 2),
        Voxel::new(1, 1, 2),
    ]);
    assert_eq!(p, Polycube::new(&expect).unwrap());
    assert_eq!(render_layers(&p), text);
}

// ------------------------------------------------------------------- the meat

const MEAT_OUTLINE: &[(i64, i64)] = &[
    (0, 63), (18, 63), (18, 54), (45, 54), (45, 36), (63, 36), (63, 18), (63, 9), (72, 9),
    (72, 0), (99, 0), (99, -18), (117, -18), (117, -45), (126, -45), (126, -54), (153, -54),
    (153, -72), (171, -72), (171, -99), (162, -99), (162, -108), (135, -108), (135, -90),
    (117, -90), (117, -63), (108, -63), (108, -54), (81, -54), (81, -36), (63, -36), (63, -9),
    (54, -9), (54, 0), (27, 0), (27, 18), (9, 18), (9, 45), (0, 45), (0, 63),
];

/// c labels per segment in drawing order N, N, S, S, E, E, W, W; `true` = raised.
const MEAT_C: [[(f64, f64, bool); 8]; 3] = [
    [
        (31.5, 49.5, true), (40.5, 49.5, true), (31.5, 4.5, true), (40.5, 4.5, true),
        (58.5, 31.5, false), (58.5, 22.5, false), (13.5, 31.5, true), (13.5, 22.5, false),
    ],
    [
        (85.5, -4.5, false), (94.5, -4.5, true), (85.5, -49.5, false), (94.5, -49.5, true),
        (112.5, -22.5, true), (112.5, -31.5, true), (67.5, -22.5, false), (67.5, -31.5, false),
    ],
    [
        (139.5, -58.5, false), (148.5, -58.5, false), (139.5, -103.5, false), (148.5, -103.5, false),
        (166.5, -76.5, true), (166.5, -85.5, false), (121.5, -76.5, true), (121.5, -85.5, true),
    ],
];

/// The drawing's legend: two raised/lowered symbols per color.
fn legend(code: [bool; 2]) -> &'static str {
    match code {
        [true, true] => "red",
        [true, false] => "green",
        [false, true] => "blue",
        [false, false] => "yellow",
    }
}

fn fig1_meat() -> tilecraft::CoarseLayout {
    let set = parse_tileset(FIG1).unwrap();
    meat_layout(&set, &encode_colors(&set)).unwrap()
}

fn abo_cells(x_shifts: &[f64], o_shifts: &[f64]) -> BTreeSet<(Coarse, Key)> {
    let mut out = BTreeSet::new();
    for &x in x_shifts {
        out.insert((at(x + 22.5, 59.5 - x, 9.0), Key::A));
        out.insert((at(x + 4.5, 40.5 - x, 9.0), Key::B));
    }
    for &x in o_shifts {
        out.insert((at(x + 49.5, 40.5 - x, 9.0), Key::O));
        out.insert((at(x + 22.5, 13.5 - x, 9.0), Key::O));
    }
    out
}

fn bumps_of(layout: &tilecraft::CoarseLayout) -> BTreeSet<(Coarse, Key)> {
    layout
        .iter()
        .filter_map(|(c, content)| match content.label() {
            BlockLabel::Bump(k) => Some((c, k)),
            _ => None,
        })
        .collect()
}

#[test]
fn meat_outline_matches_drawing() {
    let meat = fig1_meat();
    let body: BTreeSet<Coarse> = meat
        .iter()
        .filter(|(_, c)| !matches!(c.label(), BlockLabel::Bump(_)))
        .map(|(c, _)| c)
        .collect();
    assert_eq!(body, cells_in(MEAT_OUTLINE, 9));
}

#[test]
fn meat_m_and_attachments_match_drawing() {
    let meat = fig1_meat();
    assert_eq!(meat.positions_of(BlockLabel::M), vec![at(4.5, 58.5, 9.0)]);
    let drawn = abo_cells(&[0.0, 45.0, 54.0, 99.0, 108.0, 153.0], &[0.0, 54.0, 108.0]);
    assert_eq!(bumps_of(&meat), drawn);
    for (_, content) in meat.iter() {
        if let CellContent::Half { label: BlockLabel::Bump(_), altitude, .. } = content {
            assert_eq!(*altitude, Altitude::Upper);
        }
    }
}

#[test]
fn meat_c_positions_match_drawing() {
    let meat = fig1_meat();
    let ours: BTreeSet<Coarse> = meat.positions_of(BlockLabel::Dent(Key::C)).into_iter().collect();
    let drawn: BTreeSet<Coarse> = MEAT_C.iter().flatten().map(|&(x, y, _)| at(x, y, 9.0)).collect();
    assert_eq!(ours, drawn);
}

/// Reading the drawn c altitudes through the legend must give back the colors of
/// the fixture, side by side.
#[test]
fn meat_c_altitudes_spell_the_fixture_colors() {
    let set = parse_tileset(FIG1).unwrap();
    for (j, seg) in MEAT_C.iter().enumerate() {
        let side = |i: usize| legend([seg[i].2, seg[i + 1].2]);
        let t = set.tiles[j];
        let tok = |c: usize| set.colors.token(c);
        assert_eq!(side(0), tok(t.north), "segment {j} north");
        assert_eq!(side(2), tok(t.south), "segment {j} south");
        assert_eq!(side(4), tok(t.east), "segment {j} east");
        assert_eq!(side(6), tok(t.west), "segment {j} west");
    }
}

/// Our own codes, read at the same cells, must spell the same colors.
#[test]
fn meat_c_altitudes_follow_our_codes() {
    let set = parse_tileset(FIG1).unwrap();
    let codes = encode_colors(&set);
    let meat = fig1_meat();
    for (j, seg) in MEAT_C.iter().enumerate() {
        for &(x, y, _) in seg {
            let c = at(x, y, 9.0);
            let Some(CellContent::Half { port: Some((side, b)), altitude, .. }) = meat.get(c) else {
                panic!("segment {j}: no port at {c:?}");
            };
            let t = set.tiles[j];
            let color = match side {
                tilecraft::Side::North => t.north,
                tilecraft::Side::East => t.east,
                tilecraft::Side::South => t.south,
                tilecraft::Side::West => t.west,
            };
            assert_eq!(codes[color].bits[*b], *altitude, "segment {j} cell {c:?}");
        }
    }
}

// -------------------------------------------------------------------- the jaw

const JAW_OUTLINE: &[(i64, i64)] = &[
    (0, 0), (27, 0), (27, 1), (26, 1), (26, 2), (23, 2), (23, 4), (21, 4), (21, 7), (20, 7),
    (20, 8), (17, 8), (17, 10), (15, 10), (15, 13), (14, 13), (14, 15), (16, 15), (16, 14),
    (19, 14), (19, 12), (21, 12), (21, 9), (22, 9), (22, 8), (25, 8), (25, 6), (27, 6), (27, 3),
    (28, 3), (28, 2), (29, 2), (29, 29), (2, 29), (2, 28), (3, 28), (3, 27), (6, 27), (6, 25),
    (8, 25), (8, 22), (9, 22), (9, 21), (12, 21), (12, 19), (14, 19), (14, 16), (13, 16),
    (13, 15), (10, 15), (10, 17), (8, 17), (8, 20), (7, 20), (7, 21), (4, 21), (4, 23), (2, 23),
    (2, 26), (1, 26), (1, 27), (0, 27), (0, 0),
];

#[test]
fn jaw_outline_matches_drawing() {
    let jaw = jaw_layout(3, 2).unwrap();
    let ours: BTreeSet<Coarse> = jaw.iter().map(|(c, _)| c).collect();
    assert_eq!(ours, cells_in(JAW_OUTLINE, 1));
    assert_eq!(jaw.bounds(), Some(((0, 0), (28, 28))));
}

#[test]
fn jaw_dents_match_drawing() {
    let jaw = jaw_layout(3, 2).unwrap();
    let mut drawn: BTreeSet<(Coarse, Key)> = BTreeSet::new();
    for x in [0, 1, 6, 7, 12, 14, 19, 20, 25, 26] {
        drawn.insert(((x + 2, 28 - x), Key::A));
        drawn.insert(((x, 26 - x), Key::B));
    }
    for x in [0, 6, 13, 19] {
        drawn.insert(((x + 6, 25 - x), Key::O));
        drawn.insert(((x + 3, 22 - x), Key::O));
    }
    drawn.insert(((0, 0), Key::O));
    drawn.insert(((28, 28), Key::O));
    let ours: BTreeSet<(Coarse, Key)> = jaw
        .iter()
        .filter_map(|(c, content)| match content {
            CellContent::Half { label: BlockLabel::Dent(k), altitude, .. } => {
                assert_eq!(*altitude, Altitude::Lower);
                Some((c, *k))
            }
            _ => None,
        })
        .collect();
    assert_eq!(ours, drawn);
    assert_eq!(jaw.positions_of(BlockLabel::J), vec![(13, 15)]);
}

#[test]
fn link_spans_the_jaw_less_two() {
    let link = link_ew_layout(3, 2).unwrap();
    // drawn under the jaw from column 1 to column 27
    let cells: Vec<Coarse> = link.iter().map(|(c, _)| (c.0 + 1, c.1)).collect();
    assert_eq!(cells.first(), Some(&(1, 0)));
    assert_eq!(cells.last(), Some(&(27, 0)));
    assert_eq!(cells.len(), 27);
    assert_eq!(link.positions_of(BlockLabel::Bump(Key::C)), vec![(0, 0), (26, 0)]);
    assert_eq!(link.count(BlockLabel::Plain), 25);
}

// ----------------------------------------------------------------- the filler

const FILLER_OUTLINE: &[(i64, i64)] = &[
    (0, 63), (18, 63), (18, 54), (45, 54), (45, 36), (63, 36), (63, 18), (63, 9), (54, 9),
    (54, 0), (45, 0), (27, 0), (27, 18), (9, 18), (9, 36), (9, 45), (0, 45), (0, 63),
];

#[test]
fn filler_matches_drawing() {
    let f = filler_layout(2).unwrap();
    let body: BTreeSet<Coarse> = f
        .iter()
        .filter(|(_, c)| !matches!(c.label(), BlockLabel::Bump(_)))
        .map(|(c, _)| c)
        .collect();
    assert_eq!(body, cells_in(FILLER_OUTLINE, 9));
    assert_eq!(f.positions_of(BlockLabel::F), vec![at(4.5, 58.5, 9.0)]);
    assert_eq!(bumps_of(&f), abo_cells(&[0.0, 45.0], &[0.0]));
    assert_eq!(f.count(BlockLabel::Dent(Key::C)), 0);
}
