#![allow(dead_code)]

use gcrossed_core::builders::{
    cyclic_bicharacter, fibonacci, from_crossed_module, pointed_braided, vect, CocycleData, CrossedModule,
};
use gcrossed_core::scalar::{Scalar, ONE, ZERO};
use gcrossed_core::statesum::{enumerate_colorings, eval_25j};
use gcrossed_core::triangulation::{apply_pachner, boundary_5simplex, find_moves, MoveKind, PachnerMove};
use gcrossed_core::{FiniteGroup, GbsfcData, OrderedTriangulation};

pub fn inversion(n: usize) -> Vec<Vec<usize>> {
    vec![(0..n).collect(), (0..n).map(|h| (n - h) % n).collect()]
}

pub fn z3_by_z2() -> CrossedModule {
    CrossedModule::trivial_boundary(FiniteGroup::cyclic(3), FiniteGroup::cyclic(2), inversion(3))
}

pub fn pointed_z3() -> GbsfcData {
    pointed_braided(&FiniteGroup::cyclic(3), &cyclic_bicharacter(3, 1)).unwrap()
}

/// The five categories used for the invariance checks.
pub fn fixtures() -> Vec<(&'static str, GbsfcData)> {
    vec![
        ("Vect", vect()),
        ("D(Z2,e)", from_crossed_module(&CrossedModule::discrete(FiniteGroup::cyclic(2))).unwrap()),
        ("D(Z3,Z2)", from_crossed_module(&z3_by_z2()).unwrap()),
        ("pointed Z3", pointed_z3()),
        ("Fibonacci", fibonacci().unwrap()),
    ]
}

/// 1-5 move on the facet 01234 of the boundary of the 5-simplex.
pub fn subdivided() -> OrderedTriangulation {
    let mv = PachnerMove { kind: MoveKind::OneFive, vertices: [0, 1, 2, 3, 4, 6] };
    apply_pachner(&boundary_5simplex(), &mv).unwrap()
}

pub fn first_move(t: &OrderedTriangulation, kind: MoveKind) -> PachnerMove {
    find_moves(t).into_iter().find(|m| m.kind == kind).expect("move available")
}

/// Sum over the full enumeration of extended colorings, one 25j-symbol at a time.
pub fn brute_force(t: &OrderedTriangulation, data: &GbsfcData, omega: Option<&CocycleData>) -> Scalar {
    let mut total = ZERO;
    for c in enumerate_colorings(t, data) {
        let mut w = ONE;
        for &f in &c.f {
            w *= data.qdim(f);
        }
        for &x in &c.t {
            w /= data.qdim(x);
        }
        for (s, simplex) in t.top().iter().enumerate() {
            let local = c.local(t, s);
            w *= eval_25j(&local, simplex.sign, data).unwrap();
            if let Some(om) = omega {
                let o = om.omega(local.edge(0, 1), local.edge(1, 2), local.edge(2, 3), local.edge(3, 4));
                w = if simplex.sign > 0 { w * o } else { w / o };
            }
        }
        total += w;
    }
    let d2 = data.total_dim_sq;
    let [v, e, ..] = t.face_counts();
    total * (d2 / data.group.order() as f64).powi(v as i32) * d2.powi(-(e as i32))
}
