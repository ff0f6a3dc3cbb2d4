//! Coloring enumeration and the exact combinatorial invariants (Yetter count, DW).
//!
//! These use plain lexicographic backtracking and share nothing with the search engine,
//! so they double as independent references for it.

use super::local::LocalColoring;
use crate::builders::{validate_crossed_module, CrossedModule};
use crate::category::{GbsfcData, Label};
use crate::group::{Elem, FiniteGroup};
use crate::report::CheckConfig;
use crate::triangulation::OrderedTriangulation;
use crate::Result;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

/// Edge, triangle and tetrahedron colors indexed like the faces of the triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedColoring {
    pub g: Vec<Elem>,
    pub f: Vec<Label>,
    pub t: Vec<Label>,
}

impl ExtendedColoring {
    /// Colors of the faces of the `s`-th 4-simplex.
    pub fn local(&self, tri: &OrderedTriangulation, s: usize) -> LocalColoring {
        let lf = tri.local_faces(s);
        LocalColoring {
            g: lf.edges.map(|e| self.g[e]),
            f: lf.triangles.map(|f| self.f[f]),
            t: lf.tets.map(|x| self.t[x]),
        }
    }
}

fn edge_of(t: &OrderedTriangulation, a: usize, b: usize) -> usize {
    t.edge_index([a, b]).expect("face of a face is a face")
}

/// Triangles indexed by the last of their edges in index order.
fn closing_triangles(t: &OrderedTriangulation) -> Vec<Vec<usize>> {
    let mut checks = vec![Vec::new(); t.edges().len()];
    for (f, &[i, j, k]) in t.triangles().iter().enumerate() {
        let last = edge_of(t, i, j).max(edge_of(t, j, k)).max(edge_of(t, i, k));
        checks[last].push(f);
    }
    checks
}

fn triangle_grade(t: &OrderedTriangulation, g: &FiniteGroup, edges: &[Elem], f: usize) -> Elem {
    let [i, j, k] = t.triangles()[f];
    g.mul(g.inv(edges[edge_of(t, i, k)]), g.mul(edges[edge_of(t, i, j)], edges[edge_of(t, j, k)]))
}

fn tet_grade(t: &OrderedTriangulation, g: &FiniteGroup, edges: &[Elem], x: usize) -> Elem {
    let [i, j, k, l] = t.tets()[x];
    g.mul_all(&[
        g.inv(edges[edge_of(t, i, l)]),
        edges[edge_of(t, i, j)],
        edges[edge_of(t, j, k)],
        edges[edge_of(t, k, l)],
    ])
}

/// Lexicographic stream (edges, then triangles, then tetrahedra) of every extended
/// coloring satisfying the two grading constraints.
pub fn enumerate_colorings<'a>(
    t: &'a OrderedTriangulation,
    data: &'a GbsfcData,
) -> impl Iterator<Item = ExtendedColoring> + 'a {
    ColoringIter::new(t, data)
}

struct ColoringIter<'a> {
    t: &'a OrderedTriangulation,
    data: &'a GbsfcData,
    /// per variable: candidate values and the index of the current one
    domains: Vec<Vec<usize>>,
    closes: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    vals: Vec<usize>,
    depth: usize,
    started: bool,
    done: bool,
}

impl<'a> ColoringIter<'a> {
    fn new(t: &'a OrderedTriangulation, data: &'a GbsfcData) -> Self {
        let n = t.edges().len() + t.triangles().len() + t.tets().len();
        Self {
            t,
            data,
            domains: vec![Vec::new(); n],
            closes: closing_triangles(t),
            cursor: vec![0; n],
            vals: vec![0; n],
            depth: 0,
            started: false,
            done: false,
        }
    }

    fn fill(&mut self, p: usize) {
        let (ne, nf) = (self.t.edges().len(), self.t.triangles().len());
        let g = &self.data.group;
        if p < ne {
            let mut dom = Vec::new();
            for x in g.elements() {
                self.vals[p] = x;
                let edges = &self.vals[..ne];
                if self.closes[p]
                    .iter()
                    .all(|&f| !self.data.sector(triangle_grade(self.t, g, edges, f)).is_empty())
                {
                    dom.push(x);
                }
            }
            self.domains[p] = dom;
            self.cursor[p] = 0;
            return;
        }
        let edges = &self.vals[..ne];
        self.domains[p] = if p < ne + nf {
            self.data.sector(triangle_grade(self.t, g, edges, p - ne)).to_vec()
        } else {
            self.data.sector(tet_grade(self.t, g, edges, p - ne - nf)).to_vec()
        };
        self.cursor[p] = 0;
    }

    fn emit(&self) -> ExtendedColoring {
        let (ne, nf) = (self.t.edges().len(), self.t.triangles().len());
        ExtendedColoring {
            g: self.vals[..ne].to_vec(),
            f: self.vals[ne..ne + nf].to_vec(),
            t: self.vals[ne + nf..].to_vec(),
        }
    }
}

impl Iterator for ColoringIter<'_> {
    type Item = ExtendedColoring;

    fn next(&mut self) -> Option<ExtendedColoring> {
        let n = self.vals.len();
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.depth = 0;
            self.fill(0);
        } else {
            // advance the deepest variable
            self.depth = n - 1;
            self.cursor[self.depth] += 1;
        }
        loop {
            if self.cursor[self.depth] < self.domains[self.depth].len() {
                self.vals[self.depth] = self.domains[self.depth][self.cursor[self.depth]];
                if self.depth + 1 == n {
                    return Some(self.emit());
                }
                self.depth += 1;
                self.fill(self.depth);
            } else if self.depth == 0 {
                self.done = true;
                return None;
            } else {
                self.depth -= 1;
                self.cursor[self.depth] += 1;
            }
        }
    }
}

/// Number of extended colorings satisfying the grading constraints, without listing them.
pub fn count_extended_colorings(t: &OrderedTriangulation, data: &GbsfcData) -> BigUint {
    let g = &data.group;
    let mut total = BigUint::zero();
    let nonempty = |edges: &[Elem], f: usize| !data.sector(triangle_grade(t, g, edges, f)).is_empty();
    edge_colorings(t, g, &nonempty, &mut |edges| {
        let tri: BigUint = (0..t.triangles().len())
            .map(|f| BigUint::from(data.sector(triangle_grade(t, g, edges, f)).len()))
            .product();
        let tet: BigUint = (0..t.tets().len())
            .map(|x| BigUint::from(data.sector(tet_grade(t, g, edges, x)).len()))
            .product();
        total += tri * tet;
    });
    total
}

/// Backtracks over edge colorings in lexicographic order, rejecting a partial coloring as
/// soon as a triangle whose edges are all colored fails `admit`.
fn edge_colorings(
    t: &OrderedTriangulation,
    g: &FiniteGroup,
    admit: &dyn Fn(&[Elem], usize) -> bool,
    visit: &mut dyn FnMut(&[Elem]),
) {
    let checks = closing_triangles(t);
    fn go(
        p: usize,
        g: &FiniteGroup,
        checks: &[Vec<usize>],
        edges: &mut [Elem],
        admit: &dyn Fn(&[Elem], usize) -> bool,
        visit: &mut dyn FnMut(&[Elem]),
    ) {
        if p == edges.len() {
            visit(edges);
            return;
        }
        for x in g.elements() {
            edges[p] = x;
            if checks[p].iter().all(|&f| admit(edges, f)) {
                go(p + 1, g, checks, edges, admit, visit);
            }
        }
    }
    let mut edges = vec![0; t.edges().len()];
    go(0, g, &checks, &mut edges, admit, visit);
}

/// `|G|^{-|T⁰|}` times the number of flat `G`-colorings of the edges.
pub fn dw_invariant(t: &OrderedTriangulation, g: &FiniteGroup) -> BigRational {
    let mut count = BigUint::zero();
    let flat = |edges: &[Elem], f: usize| triangle_grade(t, g, edges, f) == g.identity();
    edge_colorings(t, g, &flat, &mut |_| count += 1u32);
    BigRational::new(BigInt::from(count), BigInt::from(g.order()).pow(t.vertex_count() as u32))
}

/// Admissible colorings of a crossed module and the resulting invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedCount {
    pub count: BigUint,
    pub value: BigRational,
}

/// Counts pairs `(g, f)` with `ρ(f_ijk) = ḡ_ik g_ij g_jk` on every triangle and
/// `f_ikl · φ(ḡ_kl, f_ijk) = f_ijl · f_jkl` on every tetrahedron, and returns
/// `|H|^{|T⁰|-|T¹|} |G|^{-|T⁰|}` times that count.
pub fn count_admissible_crossed(t: &OrderedTriangulation, cm: &CrossedModule) -> Result<CrossedCount> {
    validate_crossed_module(cm, &CheckConfig::default()).into_result()?;
    let (h, g) = (&cm.h, &cm.g);
    let nf = t.triangles().len();
    // tetrahedra checked once their last triangle (in index order) is colored
    let mut tet_at = vec![Vec::new(); nf];
    let tet_faces: Vec<[usize; 5]> = t
        .tets()
        .iter()
        .map(|&[i, j, k, l]| {
            let f = |a, b, c| t.triangle_index([a, b, c]).unwrap();
            [f(i, j, k), f(i, j, l), f(i, k, l), f(j, k, l), edge_of(t, k, l)]
        })
        .collect();
    for (x, faces) in tet_faces.iter().enumerate() {
        tet_at[faces[..4].iter().copied().max().unwrap()].push(x);
    }
    let by_rho: Vec<Vec<Elem>> =
        g.elements().map(|s| h.elements().filter(|&y| cm.rho[y] == s).collect()).collect();

    let mut total = BigUint::zero();
    let mut f = vec![0; nf];
    #[allow(clippy::too_many_arguments)]
    fn go_f(
        p: usize,
        t: &OrderedTriangulation,
        cm: &CrossedModule,
        edges: &[Elem],
        f: &mut [Elem],
        by_rho: &[Vec<Elem>],
        tet_at: &[Vec<usize>],
        tet_faces: &[[usize; 5]],
        count: &mut u64,
    ) {
        if p == f.len() {
            *count += 1;
            return;
        }
        let (h, g) = (&cm.h, &cm.g);
        for &y in &by_rho[triangle_grade(t, g, edges, p)] {
            f[p] = y;
            let ok = tet_at[p].iter().all(|&x| {
                let [ijk, ijl, ikl, jkl, kl] = tet_faces[x];
                h.mul(f[ikl], cm.phi[g.inv(edges[kl])][f[ijk]]) == h.mul(f[ijl], f[jkl])
            });
            if ok {
                go_f(p + 1, t, cm, edges, f, by_rho, tet_at, tet_faces, count);
            }
        }
    }
    let liftable = |edges: &[Elem], fi: usize| !by_rho[triangle_grade(t, g, edges, fi)].is_empty();
    edge_colorings(t, g, &liftable, &mut |edges| {
        let mut n = 0u64;
        go_f(0, t, cm, edges, &mut f, &by_rho, &tet_at, &tet_faces, &mut n);
        total += n;
    });
    let [v, e, ..] = t.face_counts();
    let hpow = BigRational::from_integer(BigInt::from(h.order())).pow(v as i32 - e as i32);
    let gpow = BigRational::from_integer(BigInt::from(g.order())).pow(-(v as i32));
    let value = hpow * gpow * BigRational::from_integer(BigInt::from(total.clone()));
    Ok(CrossedCount { count: total, value })
}

/// Converts a rational to the nearest double.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
