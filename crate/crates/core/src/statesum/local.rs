//! The 25j-symbol of a single colored 4-simplex `(01234)`.

use crate::category::{GbsfcData, Label};
use crate::group::Elem;
use crate::scalar::{CompensatedSum, Scalar, ZERO};
use crate::triangulation::LOCAL_TETS;
use crate::Result;

/// Colors of the faces of one 4-simplex, each array in the lexicographic local order
/// (edges `01,02,03,04,12,13,14,23,24,34`, triangles `012,…,234`, tetrahedra `0123,…,1234`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LocalColoring {
    pub g: [Elem; 10],
    pub f: [Label; 10],
    pub t: [Label; 5],
}

#[inline]
fn edge_slot(i: usize, j: usize) -> usize {
    // 01 02 03 04 12 13 14 23 24 34
    match (i, j) {
        (0, x) => x - 1,
        (1, x) => x + 2,
        (2, x) => x + 4,
        _ => 9,
    }
}

#[inline]
fn triangle_slot(i: usize, j: usize, k: usize) -> usize {
    // 012 013 014 023 024 034 123 124 134 234
    match (i, j, k) {
        (0, 1, x) => x - 2,
        (0, 2, x) => x,
        (0, 3, _) => 5,
        (1, 2, x) => x + 3,
        (1, 3, _) => 8,
        _ => 9,
    }
}

impl LocalColoring {
    #[inline]
    pub fn edge(&self, i: usize, j: usize) -> Elem {
        self.g[edge_slot(i, j)]
    }

    #[inline]
    pub fn triangle(&self, i: usize, j: usize, k: usize) -> Label {
        self.f[triangle_slot(i, j, k)]
    }

    /// Both grading constraints on every triangle and tetrahedron.
    pub fn is_graded(&self, data: &GbsfcData) -> bool {
        let g = &data.group;
        let tri_ok = (0..5).all(|i| {
            (i + 1..5).all(|j| {
                (j + 1..5).all(|k| {
                    data.grade(self.triangle(i, j, k))
                        == g.mul_all(&[g.inv(self.edge(i, k)), self.edge(i, j), self.edge(j, k)])
                })
            })
        });
        tri_ok
            && LOCAL_TETS.iter().zip(self.t).all(|(&[i, j, k, l], t)| {
                data.grade(t)
                    == g.mul_all(&[g.inv(self.edge(i, l)), self.edge(i, j), self.edge(j, k), self.edge(k, l)])
            })
    }

    /// Fusion admissibility of every tetrahedron: `t ∈ f_ijl ⊗ f_jkl` and
    /// `t ∈ f_ikl ⊗ ^{ḡ_kl} f_ijk`.
    pub fn is_admissible(&self, data: &GbsfcData) -> bool {
        let fu = &data.fusion;
        LOCAL_TETS.iter().zip(self.t).all(|(&[i, j, k, l], t)| {
            let lower = data.action.act(data.group.inv(self.edge(k, l)), self.triangle(i, j, k));
            fu.admissible(self.triangle(i, j, l), self.triangle(j, k, l), t)
                && fu.admissible(self.triangle(i, k, l), lower, t)
        })
    }
}

/// `Ẑ⁺` for `sign > 0` and `Ẑ⁻` otherwise. Inadmissible colorings evaluate to 0 without
/// touching the U/R tables.
pub fn eval_25j(c: &LocalColoring, sign: i8, data: &GbsfcData) -> Result<Scalar> {
    if !c.is_admissible(data) {
        return Ok(ZERO);
    }
    let grp = &data.group;
    let at = &data.action;
    let (ft, fu) = (&data.f, &data.fusion);
    let inv = |x| grp.inv(x);

    let [_, _, _, _, _, _, _, g23, g24, g34] = c.g;
    let [f012, f013, f014, f023, f024, f034, f123, f124, f134, f234] = c.f;
    let [t0123, t0124, t0134, t0234, t1234] = c.t;
    let (b23, b24, b34) = (inv(g23), inv(g24), inv(g34));
    let bend = grp.mul(b34, b23);
    let x = at.act(bend, f012);
    let y = at.act(b24, f012);
    let lift = |l| at.act(b34, l);
    let (f013s, f023s, f123s, t0123s) = (lift(f013), lift(f023), lift(f123), lift(t0123));

    let eta1 = at.eta(f012, b34, b23);
    let eta2 = at.eta(f012, grp.mul_all(&[b24, g23, g34]), bend);
    let u1 = at.u(b34, f023, at.act(b23, f012), t0123)?;
    let u2 = at.u(b34, f013, f123, t0123)?;

    let mut sum = CompensatedSum::new();
    for &a in fu.products(f234, x) {
        let r = data.r.r(f234, x, a)?;
        for &d in fu.products(f024, a) {
            let dd = data.qdim(d);
            let term = if sign > 0 {
                ft.f(f024, f234, x, d, a, t0234) / eta1 / eta2
                    * r
                    * ft.finv(f024, y, f234, d, t0124, a)
                    * ft.f(f014, f124, f234, d, t1234, t0124)
                    * ft.finv(f014, f134, f123s, d, t0134, t1234)
                    * ft.f(f034, f013s, f123s, d, t0123s, t0134)
                    * u1
                    / u2
                    * ft.finv(f034, f023s, x, d, t0234, t0123s)
                    * dd
            } else {
                u2 / u1
                    * ft.f(f034, f023s, x, d, t0123s, t0234)
                    * ft.finv(f034, f013s, f123s, d, t0134, t0123s)
                    * ft.f(f014, f134, f123s, d, t1234, t0134)
                    * ft.finv(f014, f124, f234, d, t0124, t1234)
                    * ft.f(f024, y, f234, d, a, t0124)
                    * eta2
                    / r
                    * eta1
                    * ft.finv(f024, f234, x, d, t0234, a)
                    * dd
            };
            sum.add(term);
        }
    }
    Ok(sum.value())
}
