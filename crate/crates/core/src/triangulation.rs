//! Ordered triangulations of closed oriented 4-manifolds, Pachner moves and relabelings.
//!
//! A 4-simplex is stored as its strictly increasing vertex tuple with a sign `ε = ±1`
//! relative to that order. The face omitting position `k` of a simplex with sign `ε`
//! inherits the sign `ε·(-1)^k`; a complex is closed and oriented when every
//! tetrahedron has exactly two cofaces and inherits opposite signs from them.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub type Vertex = usize;

/// Local edges of `(01234)` in lexicographic order.
pub const LOCAL_EDGES: [[usize; 2]; 10] =
    [[0, 1], [0, 2], [0, 3], [0, 4], [1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]];
/// Local triangles of `(01234)` in lexicographic order.
pub const LOCAL_TRIANGLES: [[usize; 3]; 10] = [
    [0, 1, 2],
    [0, 1, 3],
    [0, 1, 4],
    [0, 2, 3],
    [0, 2, 4],
    [0, 3, 4],
    [1, 2, 3],
    [1, 2, 4],
    [1, 3, 4],
    [2, 3, 4],
];
/// Local tetrahedra of `(01234)` in lexicographic order.
pub const LOCAL_TETS: [[usize; 4]; 5] =
    [[0, 1, 2, 3], [0, 1, 2, 4], [0, 1, 3, 4], [0, 2, 3, 4], [1, 2, 3, 4]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simplex {
    pub vertices: [Vertex; 5],
    pub sign: i8,
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = self.vertices;
        write!(f, "{}({a},{b},{c},{d},{e})", if self.sign > 0 { '+' } else { '-' })
    }
}

/// Global face indices of one 4-simplex, in the local orders above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalFaces {
    pub edges: [usize; 10],
    pub triangles: [usize; 10],
    pub tets: [usize; 5],
}

#[derive(Debug, Clone)]
pub struct OrderedTriangulation {
    vertex_count: usize,
    top: Vec<Simplex>,
    edges: Vec<[Vertex; 2]>,
    triangles: Vec<[Vertex; 3]>,
    tets: Vec<[Vertex; 4]>,
    edge_ix: HashMap<[Vertex; 2], usize>,
    triangle_ix: HashMap<[Vertex; 3], usize>,
    tet_ix: HashMap<[Vertex; 4], usize>,
    local: Vec<LocalFaces>,
}

impl PartialEq for OrderedTriangulation {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.top == other.top
    }
}

impl Eq for OrderedTriangulation {}

fn pick<const K: usize>(v: &[Vertex; 5], local: &[usize; K]) -> [Vertex; K] {
    local.map(|i| v[i])
}

fn index_of<const K: usize>(xs: &[[Vertex; K]]) -> HashMap<[Vertex; K], usize> {
    xs.iter().enumerate().map(|(i, &x)| (x, i)).collect()
}

/// Parity (`±1`) of the permutation that sorts `xs`.
fn sort_parity(xs: &[Vertex]) -> i8 {
    let inversions = (0..xs.len())
        .flat_map(|i| (i + 1..xs.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| xs[i] > xs[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl OrderedTriangulation {
    /// Builds a complex from signed increasing 5-tuples and checks that it is closed and
    /// consistently oriented.
    pub fn build(top: Vec<([Vertex; 5], i8)>) -> Result<Self> {
        if top.is_empty() {
            return Err(Error::Triangulation("no 4-simplices".into()));
        }
        let mut simplices = Vec::with_capacity(top.len());
        for (v, sign) in top {
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Triangulation(format!("vertices {v:?} are not strictly increasing")));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::Triangulation(format!("sign {sign} of {v:?} is not ±1")));
            }
            simplices.push(Simplex { vertices: v, sign });
        }
        simplices.sort();

        let used: BTreeSet<Vertex> = simplices.iter().flat_map(|s| s.vertices).collect();
        let vertex_count = used.len();
        if used.iter().next_back() != Some(&(vertex_count - 1)) {
            return Err(Error::Triangulation(format!("vertex ids are not dense in 0..{vertex_count}")));
        }

        let mut induced: HashMap<[Vertex; 4], Vec<i8>> = HashMap::new();
        for s in &simplices {
            for (k, omit) in (0..5).rev().enumerate() {
                // LOCAL_TETS[k] omits local vertex 4 - k
                let face = pick(&s.vertices, &LOCAL_TETS[k]);
                let sign = if omit % 2 == 0 { s.sign } else { -s.sign };
                induced.entry(face).or_default().push(sign);
            }
        }
        let mut faces: Vec<_> = induced.into_iter().collect();
        faces.sort();
        for (face, signs) in &faces {
            if signs.len() != 2 {
                return Err(Error::Triangulation(format!(
                    "tetrahedron {face:?} has {} cofaces, expected 2",
                    signs.len()
                )));
            }
            if signs[0] == signs[1] {
                return Err(Error::Triangulation(format!(
                    "tetrahedron {face:?} inherits the same orientation from both cofaces"
                )));
            }
        }
        if let Some(w) = simplices.windows(2).find(|w| w[0].vertices == w[1].vertices) {
            return Err(Error::Triangulation(format!(
                "4-simplex {:?} appears more than once",
                w[0].vertices
            )));
        }

        let tets: Vec<[Vertex; 4]> = faces.into_iter().map(|(f, _)| f).collect();
        let triangles: Vec<[Vertex; 3]> = simplices
            .iter()
            .flat_map(|s| LOCAL_TRIANGLES.map(|l| pick(&s.vertices, &l)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let edges: Vec<[Vertex; 2]> = simplices
            .iter()
            .flat_map(|s| LOCAL_EDGES.map(|l| pick(&s.vertices, &l)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let edge_ix = index_of(&edges);
        let triangle_ix = index_of(&triangles);
        let tet_ix = index_of(&tets);
        let local = simplices
            .iter()
            .map(|s| LocalFaces {
                edges: LOCAL_EDGES.map(|l| edge_ix[&pick(&s.vertices, &l)]),
                triangles: LOCAL_TRIANGLES.map(|l| triangle_ix[&pick(&s.vertices, &l)]),
                tets: LOCAL_TETS.map(|l| tet_ix[&pick(&s.vertices, &l)]),
            })
            .collect();
        Ok(Self { vertex_count, top: simplices, edges, triangles, tets, edge_ix, triangle_ix, tet_ix, local })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// 4-simplices in increasing vertex order.
    pub fn top(&self) -> &[Simplex] {
        &self.top
    }

    pub fn edges(&self) -> &[[Vertex; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[Vertex; 3]] {
        &self.triangles
    }

    pub fn tets(&self) -> &[[Vertex; 4]] {
        &self.tets
    }

    pub fn edge_index(&self, e: [Vertex; 2]) -> Option<usize> {
        self.edge_ix.get(&e).copied()
    }

    pub fn triangle_index(&self, t: [Vertex; 3]) -> Option<usize> {
        self.triangle_ix.get(&t).copied()
    }

    pub fn tet_index(&self, t: [Vertex; 4]) -> Option<usize> {
        self.tet_ix.get(&t).copied()
    }

    /// Face indices of the `i`-th 4-simplex.
    pub fn local_faces(&self, i: usize) -> &LocalFaces {
        &self.local[i]
    }

    /// `[|T⁰|, |T¹|, |T²|, |T³|, |T⁴|]`.
    pub fn face_counts(&self) -> [usize; 5] {
        [self.vertex_count, self.edges.len(), self.triangles.len(), self.tets.len(), self.top.len()]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.face_counts()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    fn find_simplex(&self, v: &[Vertex; 5]) -> Option<&Simplex> {
        self.top.binary_search_by(|s| s.vertices.cmp(v)).ok().map(|i| &self.top[i])
    }

    /// Number of 4-simplices containing every vertex of `face`.
    fn coface_count(&self, face: &[Vertex]) -> usize {
        self.top.iter().filter(|s| face.iter().all(|v| s.vertices.contains(v))).count()
    }

    fn face_exists(&self, face: &[Vertex]) -> bool {
        match face.len() {
            1 => face[0] < self.vertex_count,
            2 => self.edge_ix.contains_key(&[face[0], face[1]]),
            3 => self.triangle_ix.contains_key(&[face[0], face[1], face[2]]),
            4 => self.tet_ix.contains_key(&[face[0], face[1], face[2], face[3]]),
            5 => self.find_simplex(&[face[0], face[1], face[2], face[3], face[4]]).is_some(),
            _ => false,
        }
    }
}

/// The boundary of the standard 5-simplex: facet omitting vertex `k` has sign `(-1)^k`.
pub fn boundary_5simplex() -> OrderedTriangulation {
    let top = (0..6)
        .map(|k| {
            let v: Vec<Vertex> = (0..6).filter(|&x| x != k).collect();
            (v.try_into().unwrap(), if k % 2 == 0 { 1 } else { -1 })
        })
        .collect();
    OrderedTriangulation::build(top).expect("∂Δ⁵ is a closed oriented complex")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "1-5")]
    OneFive,
    #[serde(rename = "2-4")]
    TwoFour,
    #[serde(rename = "3-3")]
    ThreeThree,
    #[serde(rename = "4-2")]
    FourTwo,
    #[serde(rename = "5-1")]
    FiveOne,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] =
        [MoveKind::OneFive, MoveKind::TwoFour, MoveKind::ThreeThree, MoveKind::FourTwo, MoveKind::FiveOne];

    /// Number of 4-simplices the move removes.
    pub fn source_size(self) -> usize {
        match self {
            MoveKind::OneFive => 1,
            MoveKind::TwoFour => 2,
            MoveKind::ThreeThree => 3,
            MoveKind::FourTwo => 4,
            MoveKind::FiveOne => 5,
        }
    }

    fn from_source_size(k: usize) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.source_size() == k)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.source_size();
        write!(f, "{}-{}", k, 6 - k)
    }
}

/// A Pachner move inside the 5-simplex spanned by `vertices`. For 1-5 the six ids are
/// the five vertices of an existing 4-simplex plus the fresh id `vertex_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PachnerMove {
    pub kind: MoveKind,
    pub vertices: [Vertex; 6],
}

impl fmt::Display for PachnerMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {:?}", self.kind, self.vertices)
    }
}

struct Plan {
    /// facets of the 5-simplex by omitted position, with the sign they get or have
    remove: Vec<[Vertex; 5]>,
    insert: Vec<([Vertex; 5], i8)>,
    /// vertex removed by a 5-1 move
    dropped: Option<Vertex>,
}

fn plan(t: &OrderedTriangulation, mv: &PachnerMove) -> Result<Plan> {
    let mut s = mv.vertices;
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Move(format!("vertices {:?} are not distinct", mv.vertices)));
    }
    if mv.kind == MoveKind::OneFive {
        if s[5] != t.vertex_count() || s[4] >= t.vertex_count() {
            return Err(Error::Move(format!(
                "1-5 needs five existing vertices and the fresh id {}",
                t.vertex_count()
            )));
        }
    } else if s[5] >= t.vertex_count() {
        return Err(Error::Move(format!("vertex {} does not exist", s[5])));
    }
    let facet = |p: usize| -> [Vertex; 5] {
        let v: Vec<Vertex> = (0..6).filter(|&i| i != p).map(|i| s[i]).collect();
        v.try_into().unwrap()
    };
    let parity = |p: usize| if p.is_multiple_of(2) { 1 } else { -1 };

    let present: Vec<(usize, i8)> =
        (0..6).filter_map(|p| t.find_simplex(&facet(p)).map(|sx| (p, sx.sign))).collect();
    let k = present.len();
    if MoveKind::from_source_size(k) != Some(mv.kind) {
        return Err(Error::Move(format!(
            "{mv}: {k} of the six facets are present, the move needs {}",
            mv.kind.source_size()
        )));
    }
    let orient = present[0].1 * parity(present[0].0);
    if present.iter().any(|&(p, sign)| sign * parity(p) != orient) {
        return Err(Error::Move(format!("{mv}: source simplices are not coherently oriented")));
    }
    let omitted: Vec<Vertex> = present.iter().map(|&(p, _)| s[p]).collect();
    let shared: Vec<Vertex> = s.iter().copied().filter(|v| !omitted.contains(v)).collect();
    if t.coface_count(&shared) != k {
        return Err(Error::Move(format!(
            "{mv}: face {shared:?} has {} cofaces, the move needs exactly {k}",
            t.coface_count(&shared)
        )));
    }
    if mv.kind != MoveKind::OneFive && t.face_exists(&omitted) {
        return Err(Error::Move(format!("{mv}: face {omitted:?} already exists")));
    }
    let remove = present.iter().map(|&(p, _)| facet(p)).collect();
    let insert = (0..6)
        .filter(|p| !present.iter().any(|&(q, _)| q == *p))
        .map(|p| (facet(p), -orient * parity(p)))
        .collect();
    let dropped = (mv.kind == MoveKind::FiveOne).then(|| shared[0]);
    Ok(Plan { remove, insert, dropped })
}

/// Applies a Pachner move. A 5-1 move removes a vertex; larger ids then shift down by
/// one, which keeps the vertex order and hence every sign.
pub fn apply_pachner(t: &OrderedTriangulation, mv: &PachnerMove) -> Result<OrderedTriangulation> {
    let plan = plan(t, mv)?;
    let mut top: Vec<([Vertex; 5], i8)> = t
        .top()
        .iter()
        .filter(|s| !plan.remove.contains(&s.vertices))
        .map(|s| (s.vertices, s.sign))
        .chain(plan.insert)
        .collect();
    if let Some(v) = plan.dropped {
        for (vs, _) in &mut top {
            for x in vs.iter_mut() {
                if *x > v {
                    *x -= 1;
                }
            }
        }
    }
    OrderedTriangulation::build(top).map_err(|e| Error::Move(format!("{mv}: result is invalid: {e}")))
}

/// Every move applicable to `t`, in a deterministic order.
pub fn find_moves(t: &OrderedTriangulation) -> Vec<PachnerMove> {
    let mut candidates: BTreeSet<PachnerMove> = t
        .top()
        .iter()
        .map(|s| {
            let mut v = [0; 6];
            v[..5].copy_from_slice(&s.vertices);
            v[5] = t.vertex_count();
            PachnerMove { kind: MoveKind::OneFive, vertices: v }
        })
        .collect();
    let mut add = |kind: MoveKind, simplices: Vec<&Simplex>| {
        let vs: BTreeSet<Vertex> = simplices.iter().flat_map(|s| s.vertices).collect();
        if vs.len() == 6 {
            let v: Vec<Vertex> = vs.into_iter().collect();
            candidates.insert(PachnerMove { kind, vertices: v.try_into().unwrap() });
        }
    };
    let cofaces = |face: &[Vertex]| -> Vec<&Simplex> {
        t.top().iter().filter(|s| face.iter().all(|x| s.vertices.contains(x))).collect()
    };
    for tet in t.tets() {
        add(MoveKind::TwoFour, cofaces(tet));
    }
    for tri in t.triangles() {
        let c = cofaces(tri);
        if c.len() == 3 {
            add(MoveKind::ThreeThree, c);
        }
    }
    for e in t.edges() {
        let c = cofaces(e);
        if c.len() == 4 {
            add(MoveKind::FourTwo, c);
        }
    }
    for v in 0..t.vertex_count() {
        let c = cofaces(&[v]);
        if c.len() == 5 {
            add(MoveKind::FiveOne, c);
        }
    }
    candidates.into_iter().filter(|mv| plan(t, mv).is_ok()).collect()
}

/// Renames vertex `v` to `perm[v]`, re-sorting each simplex and multiplying its sign by
/// the parity of the sort.
pub fn relabel(t: &OrderedTriangulation, perm: &[Vertex]) -> Result<OrderedTriangulation> {
    let n = t.vertex_count();
    let image: BTreeSet<Vertex> = perm.iter().copied().collect();
    if perm.len() != n || image.len() != n || image.iter().any(|&x| x >= n) {
        return Err(Error::Triangulation(format!("{perm:?} is not a permutation of 0..{n}")));
    }
    let top = t
        .top()
        .iter()
        .map(|s| {
            let mapped = s.vertices.map(|v| perm[v]);
            let mut sorted = mapped;
            sorted.sort_unstable();
            (sorted, s.sign * sort_parity(&mapped))
        })
        .collect();
    OrderedTriangulation::build(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(kind: MoveKind, v: [Vertex; 6]) -> PachnerMove {
        PachnerMove { kind, vertices: v }
    }

    #[test]
    fn boundary_counts() {
        let t = boundary_5simplex();
        assert_eq!(t.face_counts(), [6, 15, 20, 15, 6]);
        assert_eq!(t.euler_characteristic(), 2);
        assert_eq!(t.top()[0].vertices, [0, 1, 2, 3, 4]);
        assert_eq!(t.top()[0].sign, -1);
    }

    #[test]
    fn build_errors() {
        let single = OrderedTriangulation::build(vec![([0, 1, 2, 3, 4], 1)]);
        assert!(matches!(single, Err(Error::Triangulation(m)) if m.contains("cofaces")));
        let doubled = OrderedTriangulation::build(vec![([0, 1, 2, 3, 4], 1), ([0, 1, 2, 3, 4], 1)]);
        assert!(matches!(doubled, Err(Error::Triangulation(m)) if m.contains("orientation")));
        let degenerate = OrderedTriangulation::build(vec![([0, 1, 2, 3, 4], 1), ([0, 1, 2, 3, 4], -1)]);
        assert!(matches!(degenerate, Err(Error::Triangulation(m)) if m.contains("more than once")));
        let unsorted = OrderedTriangulation::build(vec![([0, 2, 1, 3, 4], 1)]);
        assert!(unsorted.is_err());
        let sparse = boundary_5simplex().top().iter().map(|s| (s.vertices.map(|v| v * 2), s.sign)).collect();
        assert!(
            matches!(OrderedTriangulation::build(sparse), Err(Error::Triangulation(m)) if m.contains("dense"))
        );
    }

    #[test]
    fn one_five_and_back() {
        let t = boundary_5simplex();
        let sub = apply_pachner(&t, &mv(MoveKind::OneFive, [0, 1, 2, 3, 5, 6])).unwrap();
        assert_eq!(sub.face_counts()[0], 7);
        assert_eq!(sub.top().len(), 10);
        let back = apply_pachner(&sub, &mv(MoveKind::FiveOne, [0, 1, 2, 3, 5, 6])).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn five_one_on_the_typical_configuration() {
        // 1-5 on 01235, then rename 4 <-> 6 so the new simplices are the five around vertex 4
        let t = boundary_5simplex();
        let sub = apply_pachner(&t, &mv(MoveKind::OneFive, [0, 1, 2, 3, 5, 6])).unwrap();
        let sub = relabel(&sub, &[0, 1, 2, 3, 6, 5, 4]).unwrap();
        let around: Vec<[Vertex; 5]> = sub
            .top()
            .iter()
            .map(|s| s.vertices)
            .filter(|v| v[..].iter().all(|&x| x <= 5) && v.contains(&4))
            .collect();
        let mut expect =
            vec![[0, 2, 3, 4, 5], [0, 1, 2, 4, 5], [0, 1, 2, 3, 4], [1, 2, 3, 4, 5], [0, 1, 3, 4, 5]];
        expect.sort();
        assert_eq!(around, expect);
        let merged = apply_pachner(&sub, &mv(MoveKind::FiveOne, [0, 1, 2, 3, 4, 5])).unwrap();
        assert_eq!(merged.top().len(), 6);
        // vertex 4 is gone and 5, 6 became 4, 5: 01235 is now 01234
        assert!(merged.top().iter().any(|s| s.vertices == [0, 1, 2, 3, 4]));
        assert_eq!(merged.face_counts(), [6, 15, 20, 15, 6]);
    }

    #[test]
    fn three_three_is_an_involution() {
        let t = boundary_5simplex();
        let sub = apply_pachner(&t, &mv(MoveKind::OneFive, [0, 1, 2, 3, 5, 6])).unwrap();
        let two_four = find_moves(&sub).into_iter().find(|m| m.kind == MoveKind::TwoFour).unwrap();
        let u = apply_pachner(&sub, &two_four).unwrap();
        assert_eq!(u.top().len(), 12);
        let three = find_moves(&u).into_iter().find(|m| m.kind == MoveKind::ThreeThree).unwrap();
        let once = apply_pachner(&u, &three).unwrap();
        assert_ne!(once, u);
        assert_eq!(apply_pachner(&once, &three).unwrap(), u);
        let back = find_moves(&u)
            .into_iter()
            .find(|m| m.kind == MoveKind::FourTwo && m.vertices == two_four.vertices)
            .unwrap();
        assert_eq!(apply_pachner(&u, &back).unwrap(), sub);
    }

    #[test]
    fn boundary_has_no_interior_three_three() {
        let moves = find_moves(&boundary_5simplex());
        assert_eq!(moves.iter().filter(|m| m.kind == MoveKind::OneFive).count(), 6);
        assert!(moves.iter().all(|m| m.kind == MoveKind::OneFive || m.kind == MoveKind::TwoFour));
    }

    #[test]
    fn rejected_moves() {
        let t = boundary_5simplex();
        assert!(matches!(
            apply_pachner(&t, &mv(MoveKind::ThreeThree, [0, 1, 2, 3, 4, 5])),
            Err(Error::Move(_))
        ));
        assert!(apply_pachner(&t, &mv(MoveKind::OneFive, [0, 1, 2, 3, 4, 7])).is_err());
        assert!(apply_pachner(&t, &mv(MoveKind::TwoFour, [0, 1, 2, 3, 4, 4])).is_err());
    }

    #[test]
    fn relabel_examples() {
        let t = boundary_5simplex();
        assert_eq!(relabel(&t, &[0, 1, 2, 3, 4, 5]).unwrap(), t);
        let swapped = relabel(&t, &[1, 0, 2, 3, 4, 5]).unwrap();
        // 01234 (sign -1) maps to 10234, which sorts back to 01234 with an odd permutation
        assert_eq!(swapped.top()[0].sign, 1);
        let perm = [3, 5, 0, 1, 4, 2];
        let mut inv = [0; 6];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        assert_eq!(relabel(&relabel(&t, &perm).unwrap(), &inv).unwrap(), t);
        assert!(relabel(&t, &[0, 0, 1, 2, 3, 4]).is_err());
    }
}
