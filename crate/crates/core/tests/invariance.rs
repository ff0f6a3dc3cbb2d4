mod common;

use common::*;
use gcrossed_core::builders::{from_crossed_module, CrossedModule};
use gcrossed_core::triangulation::{apply_pachner, boundary_5simplex, find_moves, relabel, MoveKind};
use gcrossed_core::{partition_function, FiniteGroup, GbsfcData, OrderedTriangulation, RunConfig};
use proptest::prelude::*;
use proptest::sample::Index;
use std::sync::OnceLock;

fn z(t: &OrderedTriangulation, d: &GbsfcData) -> gcrossed_core::Scalar {
    partition_function(t, d, &RunConfig::default()).unwrap().value
}

fn cheap() -> &'static [GbsfcData] {
    static CELL: OnceLock<Vec<GbsfcData>> = OnceLock::new();
    CELL.get_or_init(|| {
        vec![
            from_crossed_module(&CrossedModule::dijkgraaf_witten(FiniteGroup::cyclic(2))).unwrap(),
            from_crossed_module(&CrossedModule::discrete(FiniteGroup::cyclic(2))).unwrap(),
            pointed_z3(),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn relabeling_leaves_z_unchanged(perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(), which in 0..3usize) {
        let d = &cheap()[which];
        let t = boundary_5simplex();
        let r = relabel(&t, &perm).unwrap();
        prop_assert!((z(&r, d) - z(&t, d)).norm() < 1e-9);
    }

    #[test]
    fn moves_leave_z_unchanged(first in any::<Index>(), second in any::<Index>(), which in 0..3usize) {
        let d = &cheap()[which];
        let t = boundary_5simplex();
        let base = z(&t, d);
        let a = apply_pachner(&t, first.get(&find_moves(&t))).unwrap();
        prop_assert!((z(&a, d) - base).norm() < 1e-9);
        // the second move never adds a vertex
        let moves: Vec<_> = find_moves(&a).into_iter().filter(|m| m.kind != MoveKind::OneFive).collect();
        let b = apply_pachner(&a, second.get(&moves)).unwrap();
        prop_assert!((z(&b, d) - base).norm() < 1e-9);
    }
}

#[test]
fn subdivision_preserves_every_fixture() {
    let sub = subdivided();
    for (name, d) in fixtures() {
        if name == "D(Z3,Z2)" {
            continue;
        }
        let diff = (z(&sub, &d) - z(&boundary_5simplex(), &d)).norm();
        assert!(diff < 1e-9, "{name}: {diff}");
    }
}
