use proptest::prelude::*;
use tilecraft::voxel::{
    is_connected, normalize, parse_layers, parse_pcs, render_layers, rotate90_z, write_pcs,
    NamedPolycube, Polycube, Region, Voxel, VoxelSet,
};

const DIRS: [(i64, i64, i64); 6] = [
    (1, 0, 0),
    (-1, 0, 0),
    (0, 1, 0),
    (0, -1, 0),
    (0, 0, 1),
    (0, 0, -1),
];

/// Connected sets grown one face-neighbour at a time.
fn connected_set(max: usize) -> impl Strategy<Value = VoxelSet> {
    prop::collection::vec((any::<prop::sample::Index>(), 0..6usize), 0..max).prop_map(|steps| {
        let mut cells = vec![Voxel::new(0, 0, 0)];
        for (pick, d) in steps {
            let from = cells[pick.index(cells.len())];
            let (dx, dy, dz) = DIRS[d];
            let v = Voxel::new(from.x + dx, from.y + dy, from.z + dz);
            if !cells.contains(&v) {
                cells.push(v);
            }
        }
        VoxelSet::from_cells(cells)
    })
}

fn any_set(max: usize) -> impl Strategy<Value = VoxelSet> {
    prop::collection::vec((-3i64..4, -3i64..4, -3i64..4), 1..max)
        .prop_map(|v| v.into_iter().map(|(x, y, z)| Voxel::new(x, y, z)).collect())
}

/// Reference flood fill over a hash set.
fn flood_connected(s: &VoxelSet) -> bool {
    use std::collections::HashSet;
    let all: HashSet<Voxel> = s.iter().collect();
    let Some(start) = s.iter().next() else {
        return false;
    };
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for (dx, dy, dz) in DIRS {
            let n = Voxel::new(v.x + dx, v.y + dy, v.z + dz);
            if all.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == all.len()
}

proptest! {
    #[test]
    fn four_quarter_turns_are_identity(s in connected_set(30)) {
        let n = normalize(&s).unwrap();
        let mut r = n.clone();
        for _ in 0..4 {
            r = rotate90_z(&r).unwrap();
        }
        prop_assert_eq!(r, n);
    }

    #[test]
    fn rotation_keeps_volume_and_connectivity(s in any_set(20)) {
        let r = rotate90_z(&s).unwrap();
        prop_assert_eq!(r.len(), s.len());
        prop_assert_eq!(is_connected(&r), is_connected(&s));
    }

    #[test]
    fn normalize_is_idempotent(s in any_set(20)) {
        let n = normalize(&s).unwrap();
        prop_assert_eq!(normalize(&n).unwrap(), n.clone());
        let b = n.bounds().unwrap();
        prop_assert_eq!(b.min, Voxel::new(0, 0, 0));
    }

    #[test]
    fn connectivity_agrees_with_flood_fill(s in any_set(25)) {
        prop_assert_eq!(is_connected(&s), flood_connected(&s));
    }

    #[test]
    fn grown_sets_are_connected(s in connected_set(40)) {
        prop_assert!(is_connected(&s));
        prop_assert!(Polycube::new(&s).is_ok());
    }

    #[test]
    fn layer_text_round_trip(s in connected_set(30)) {
        let p = Polycube::new(&s).unwrap();
        let text = render_layers(&p);
        prop_assert_eq!(parse_layers(&text).unwrap(), p);
    }

    #[test]
    fn pcs_round_trip(a in connected_set(20), b in connected_set(20)) {
        let pieces = vec![
            NamedPolycube { name: "first".into(), polycube: Polycube::new(&a).unwrap() },
            NamedPolycube { name: "second".into(), polycube: Polycube::new(&b).unwrap() },
        ];
        let text = write_pcs(&pieces, &["note".into()]);
        prop_assert_eq!(parse_pcs(&text).unwrap(), pieces);
    }

    #[test]
    fn set_algebra(a in any_set(20), b in any_set(20)) {
        let u = a.union(&b);
        let i = a.intersection(&b);
        prop_assert_eq!(u.len() + i.len(), a.len() + b.len());
        prop_assert_eq!(a.difference(&b).len(), a.len() - i.len());
        prop_assert_eq!(a.is_disjoint(&b), i.is_empty());
    }

    #[test]
    fn torus_index_round_trip(x in 1i64..6, y in 1i64..6, z in 1i64..6, v in (-20i64..20, -20i64..20, -20i64..20)) {
        let r = Region::torus(x, y, z);
        let w = Voxel::new(v.0, v.1, v.2).wrap(r.dims);
        prop_assert!(r.contains(w));
        prop_assert_eq!(r.voxel_at(r.index(w)), w);
    }
}

#[test]
fn disconnected_and_empty_are_rejected() {
    let two = VoxelSet::from_cells(vec![Voxel::new(0, 0, 0), Voxel::new(2, 0, 0)]);
    assert!(Polycube::new(&two).is_err());
    assert!(Polycube::new(&VoxelSet::new()).is_err());
    // edge contact is not face contact
    let diag = VoxelSet::from_cells(vec![Voxel::new(0, 0, 0), Voxel::new(1, 1, 0)]);
    assert!(!is_connected(&diag));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let e = parse_layers("##\n#\n").unwrap_err();
    assert_eq!(e.line, 2);
    let e = parse_layers("#x\n").unwrap_err();
    assert_eq!(e.line, 1);
    let e = parse_pcs("polycubes v1\nname a\nvoxel 0 0\nend\n").unwrap_err();
    assert_eq!(e.line, 3);
    assert!(parse_pcs("nope\n").is_err());
}
