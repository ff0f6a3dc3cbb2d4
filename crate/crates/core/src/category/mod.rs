//! Skeletal data of a G-crossed braided spherical fusion category.
//!
//! Labels are indices into a fixed set of simple-object representatives. The set is
//! closed under duals and under the G-action, so the action is a strict permutation of
//! labels; the scalars `U` and `eta` carry the non-strictness.
//!
//! Index conventions:
//!
//! * `F(a,b,c,d; n,m)` changes basis from the left tree (`a⊗b→m`, `m⊗c→d`) to the
//!   right tree (`b⊗c→n`, `a⊗n→d`).
//! * `Finv(a,b,c,d; m,n)` is the inverse block, so `Σ_k F(..;n,k) Finv(..;k,m) = δ_{n,m}`.
//! * `U(g; a,b; c)` is the scalar picked up by the fusion vertex `c → a⊗b` under `g`.
//! * `eta(a; g,h)` compares `^{gh}a` with `^g(^h a)`.
//! * `R(a,b; c)` braids `c → a⊗b` into `c → ^{|a|}b ⊗ a`.

mod validate;

pub use validate::{
    sector_dimension_check, validate_action_coherence, validate_all, validate_braiding, validate_fusion,
    validate_pentagon,
};

use crate::group::{Elem, FiniteGroup};
use crate::scalar::{Scalar, ONE, ZERO};
use crate::{Error, Result};
use std::collections::HashMap;

/// Simple-object label, as an index into the label set.
pub type Label = usize;

const LABEL_BITS: u32 = 10;
/// Largest supported label count (labels are packed into 10-bit fields).
pub const MAX_LABELS: usize = 1 << LABEL_BITS;

#[inline]
fn pack6(x: [Label; 6]) -> u64 {
    x.iter().fold(0u64, |acc, &l| (acc << LABEL_BITS) | l as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelSet {
    pub names: Vec<String>,
    pub unit: Label,
    pub grade: Vec<Elem>,
    pub dual: Vec<Label>,
    pub qdim: Vec<f64>,
}

impl LabelSet {
    pub fn count(&self) -> usize {
        self.names.len()
    }

    pub fn labels(&self) -> std::ops::Range<Label> {
        0..self.count()
    }
}

/// Multiplicity-free fusion rules `N(a,b,c) ∈ {0,1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionRules {
    n: usize,
    table: Vec<bool>,
    products: Vec<Vec<Label>>,
}

impl FusionRules {
    pub fn from_triples(n: usize, triples: &[[Label; 3]]) -> Result<Self> {
        let mut table = vec![false; n * n * n];
        for t in triples {
            if t.iter().any(|&x| x >= n) {
                return Err(Error::Structural(format!("fusion triple {t:?} out of range 0..{n}")));
            }
            table[(t[0] * n + t[1]) * n + t[2]] = true;
        }
        let products = (0..n * n).map(|ab| (0..n).filter(|&c| table[ab * n + c]).collect()).collect();
        Ok(Self { n, table, products })
    }

    #[inline]
    pub fn admissible(&self, a: Label, b: Label, c: Label) -> bool {
        self.table[(a * self.n + b) * self.n + c]
    }

    #[inline]
    pub fn n(&self, a: Label, b: Label, c: Label) -> u8 {
        self.admissible(a, b, c) as u8
    }

    /// All `c` with `N(a,b,c) = 1`, increasing.
    #[inline]
    pub fn products(&self, a: Label, b: Label) -> &[Label] {
        &self.products[a * self.n + b]
    }

    pub fn triples(&self) -> impl Iterator<Item = [Label; 3]> + '_ {
        let n = self.n;
        (0..n * n).flat_map(move |ab| self.products[ab].iter().map(move |&c| [ab / n, ab % n, c]))
    }
}

/// Sparse F and F⁻¹ tables keyed by admissible 6-tuples. Absent keys read as 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FSymbolTable {
    f: HashMap<u64, Scalar>,
    finv: HashMap<u64, Scalar>,
}

impl FSymbolTable {
    /// `F(a,b,c,d; n,m)`.
    #[inline]
    pub fn f(&self, a: Label, b: Label, c: Label, d: Label, n: Label, m: Label) -> Scalar {
        self.f.get(&pack6([a, b, c, d, n, m])).copied().unwrap_or(ZERO)
    }

    /// `Finv(a,b,c,d; m,n)`.
    #[inline]
    pub fn finv(&self, a: Label, b: Label, c: Label, d: Label, m: Label, n: Label) -> Scalar {
        self.finv.get(&pack6([a, b, c, d, m, n])).copied().unwrap_or(ZERO)
    }

    pub fn contains_f(&self, idx: [Label; 6]) -> bool {
        self.f.contains_key(&pack6(idx))
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn inverse_len(&self) -> usize {
        self.finv.len()
    }

    fn set_f(&mut self, idx: [Label; 6], v: Scalar) {
        self.f.insert(pack6(idx), v);
    }
}

/// G-action on labels with its `U` and `eta` scalars (dense storage).
#[derive(Debug, Clone, PartialEq)]
pub struct GActionTable {
    n: usize,
    order: usize,
    act: Vec<Label>,
    u: Vec<Option<Scalar>>,
    eta: Vec<Scalar>,
}

impl GActionTable {
    /// `^g a`.
    #[inline]
    pub fn act(&self, g: Elem, a: Label) -> Label {
        self.act[g * self.n + a]
    }

    #[inline]
    fn u_index(&self, g: Elem, a: Label, b: Label, c: Label) -> usize {
        ((g * self.n + a) * self.n + b) * self.n + c
    }

    /// `U_g(a,b;c)`, defined on admissible triples.
    #[inline]
    pub fn u(&self, g: Elem, a: Label, b: Label, c: Label) -> Result<Scalar> {
        self.u[self.u_index(g, a, b, c)]
            .ok_or_else(|| Error::Incomplete { symbol: "U", indices: format!("g={g}, ({a},{b};{c})") })
    }

    /// `eta_a(g,h)`.
    #[inline]
    pub fn eta(&self, a: Label, g: Elem, h: Elem) -> Scalar {
        self.eta[(a * self.order + g) * self.order + h]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RSymbolTable {
    n: usize,
    r: Vec<Option<Scalar>>,
}

impl RSymbolTable {
    /// `R(a,b;c)`, defined on admissible triples.
    #[inline]
    pub fn r(&self, a: Label, b: Label, c: Label) -> Result<Scalar> {
        self.r[(a * self.n + b) * self.n + c]
            .ok_or_else(|| Error::Incomplete { symbol: "R", indices: format!("({a},{b};{c})") })
    }
}

/// Complete, immutable category data. Construct through [`RawCategory::build`].
#[derive(Debug, Clone, PartialEq)]
pub struct GbsfcData {
    pub name: String,
    pub group: FiniteGroup,
    pub labels: LabelSet,
    pub fusion: FusionRules,
    pub f: FSymbolTable,
    pub action: GActionTable,
    pub r: RSymbolTable,
    pub total_dim_sq: f64,
    by_grade: Vec<Vec<Label>>,
}

impl GbsfcData {
    pub fn label_count(&self) -> usize {
        self.labels.count()
    }

    #[inline]
    pub fn grade(&self, a: Label) -> Elem {
        self.labels.grade[a]
    }

    #[inline]
    pub fn qdim(&self, a: Label) -> f64 {
        self.labels.qdim[a]
    }

    /// Labels graded by `g`, increasing.
    #[inline]
    pub fn sector(&self, g: Elem) -> &[Label] {
        &self.by_grade[g]
    }

    /// True when every label sits in the identity sector.
    pub fn is_trivially_graded(&self) -> bool {
        let e = self.group.identity();
        self.labels.grade.iter().all(|&g| g == e)
    }

    /// True when the group acts trivially on labels with `U = eta = 1`.
    pub fn has_trivial_action(&self) -> bool {
        let g = &self.group;
        g.elements().all(|x| self.labels.labels().all(|a| self.action.act(x, a) == a))
            && self.action.u.iter().flatten().all(|&v| v == ONE)
            && self.action.eta.iter().all(|&v| v == ONE)
    }

    /// Visits every admissible 6-tuple `[a,b,c,d,n,m]` (see the module docs for roles).
    pub fn for_each_admissible_six(&self, mut visit: impl FnMut([Label; 6])) {
        admissible_six(&self.fusion, self.label_count(), &mut visit);
    }
}

fn admissible_six(fusion: &FusionRules, n: usize, visit: &mut impl FnMut([Label; 6])) {
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for &m in fusion.products(a, b) {
                    for &d in fusion.products(m, c) {
                        for &nn in fusion.products(b, c) {
                            if fusion.admissible(a, nn, d) {
                                visit([a, b, c, d, nn, m]);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Unassembled category data, as read from a file or produced by a builder.
///
/// Missing F entries default to 1 when one of `a, b, c` is the unit, missing `U_e` and
/// `eta_a(e,g)`, `eta_a(g,e)` default to 1; every other missing entry on an admissible
/// index is an error.
#[derive(Debug, Clone, Default)]
pub struct RawCategory {
    pub name: String,
    pub group: Option<FiniteGroup>,
    pub labels: Option<LabelSet>,
    /// `action[g][a]`; identity action when absent.
    pub action: Option<Vec<Vec<Label>>>,
    pub fusion: Vec<[Label; 3]>,
    /// `([a,b,c,d,n,m], F)`.
    pub f: Vec<([Label; 6], Scalar)>,
    /// `([g,a,b,c], U)`.
    pub u: Vec<([usize; 4], Scalar)>,
    /// `([a,g,h], eta)`.
    pub eta: Vec<([usize; 3], Scalar)>,
    /// `([a,b,c], R)`.
    pub r: Vec<([Label; 3], Scalar)>,
}

impl RawCategory {
    pub fn build(self) -> Result<GbsfcData> {
        let group = self.group.ok_or_else(|| Error::Structural("missing group".into()))?;
        let labels = self.labels.ok_or_else(|| Error::Structural("missing labels".into()))?;
        let n = labels.count();
        let order = group.order();
        if n == 0 || n > MAX_LABELS {
            return Err(Error::Structural(format!("label count {n} outside 1..={MAX_LABELS}")));
        }
        if labels.grade.len() != n || labels.dual.len() != n || labels.qdim.len() != n {
            return Err(Error::Structural("label tables have inconsistent lengths".into()));
        }
        if labels.unit >= n || labels.dual.iter().any(|&x| x >= n) || labels.grade.iter().any(|&g| g >= order)
        {
            return Err(Error::Structural("label table entry out of range".into()));
        }

        let act = match self.action {
            None => (0..order).flat_map(|_| 0..n).collect::<Vec<_>>(),
            Some(rows) => {
                if rows.len() != order || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Structural(format!("action table must be {order}×{n}")));
                }
                let flat: Vec<Label> = rows.into_iter().flatten().collect();
                if flat.iter().any(|&x| x >= n) {
                    return Err(Error::Structural("action table entry out of range".into()));
                }
                flat
            }
        };

        let fusion = FusionRules::from_triples(n, &self.fusion)?;
        let e = group.identity();

        // F
        let mut f = FSymbolTable::default();
        for (idx, v) in self.f {
            if idx.iter().any(|&x| x >= n) {
                return Err(Error::Structural(format!("F index {idx:?} out of range")));
            }
            let [a, b, c, d, nn, m] = idx;
            let ok = fusion.admissible(a, b, m)
                && fusion.admissible(m, c, d)
                && fusion.admissible(b, c, nn)
                && fusion.admissible(a, nn, d);
            if !ok {
                return Err(Error::Structural(format!("F entry on non-admissible tuple {idx:?}")));
            }
            f.set_f(idx, v);
        }
        let mut missing = None;
        admissible_six(&fusion, n, &mut |idx| {
            if f.contains_f(idx) || missing.is_some() {
                return;
            }
            let [a, b, c, ..] = idx;
            if a == labels.unit || b == labels.unit || c == labels.unit {
                f.set_f(idx, ONE);
            } else {
                missing = Some(idx);
            }
        });
        if let Some(idx) = missing {
            return Err(Error::Incomplete { symbol: "F", indices: format!("{idx:?}") });
        }

        // U
        let mut u = vec![None; order * n * n * n];
        let u_index = |g: usize, a: usize, b: usize, c: usize| ((g * n + a) * n + b) * n + c;
        for ([g, a, b, c], v) in self.u {
            if g >= order || a >= n || b >= n || c >= n {
                return Err(Error::Structural(format!("U index {:?} out of range", [g, a, b, c])));
            }
            if !fusion.admissible(a, b, c) {
                return Err(Error::Structural(format!("U entry on non-admissible triple ({a},{b};{c})")));
            }
            u[u_index(g, a, b, c)] = Some(v);
        }
        for g in 0..order {
            for [a, b, c] in fusion.triples() {
                let slot = &mut u[u_index(g, a, b, c)];
                if slot.is_none() {
                    if g == e {
                        *slot = Some(ONE);
                    } else {
                        return Err(Error::Incomplete {
                            symbol: "U",
                            indices: format!("g={g}, ({a},{b};{c})"),
                        });
                    }
                }
            }
        }

        // eta
        let mut eta = vec![None; n * order * order];
        for ([a, g, h], v) in self.eta {
            if a >= n || g >= order || h >= order {
                return Err(Error::Structural(format!("eta index {:?} out of range", [a, g, h])));
            }
            eta[(a * order + g) * order + h] = Some(v);
        }
        let mut eta_full = Vec::with_capacity(eta.len());
        for (i, v) in eta.into_iter().enumerate() {
            let (a, g, h) = (i / (order * order), (i / order) % order, i % order);
            match v {
                Some(v) => eta_full.push(v),
                None if g == e || h == e => eta_full.push(ONE),
                None => {
                    return Err(Error::Incomplete { symbol: "eta", indices: format!("a={a}, ({g},{h})") })
                }
            }
        }

        // R
        let mut r = vec![None; n * n * n];
        for ([a, b, c], v) in self.r {
            if a >= n || b >= n || c >= n {
                return Err(Error::Structural(format!("R index {:?} out of range", [a, b, c])));
            }
            if !fusion.admissible(a, b, c) {
                return Err(Error::Structural(format!("R entry on non-admissible triple ({a},{b};{c})")));
            }
            r[(a * n + b) * n + c] = Some(v);
        }
        if let Some([a, b, c]) = fusion.triples().find(|&[a, b, c]| r[(a * n + b) * n + c].is_none()) {
            return Err(Error::Incomplete { symbol: "R", indices: format!("({a},{b};{c})") });
        }

        let total_dim_sq = labels.qdim.iter().map(|d| d * d).sum();
        let mut by_grade = vec![Vec::new(); order];
        for a in 0..n {
            by_grade[labels.grade[a]].push(a);
        }

        let mut data = GbsfcData {
            name: self.name,
            group,
            labels,
            fusion,
            f,
            action: GActionTable { n, order, act, u, eta: eta_full },
            r: RSymbolTable { n, r },
            total_dim_sq,
            by_grade,
        };
        data.f = f_inverse(&data)?;
        Ok(data)
    }
}

/// Returns a copy of the F table with every `Finv` block computed as the matrix inverse
/// of the corresponding `F` block over the (left, right) intermediate labels.
pub fn f_inverse(data: &GbsfcData) -> Result<FSymbolTable> {
    let fusion = &data.fusion;
    let n = data.label_count();
    let mut out = FSymbolTable { f: data.f.f.clone(), finv: HashMap::new() };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut ds: Vec<Label> = fusion
                    .products(a, b)
                    .iter()
                    .flat_map(|&m| fusion.products(m, c).iter().copied())
                    .collect();
                ds.sort_unstable();
                ds.dedup();
                for d in ds {
                    let left: Vec<Label> = fusion
                        .products(a, b)
                        .iter()
                        .copied()
                        .filter(|&m| fusion.admissible(m, c, d))
                        .collect();
                    let right: Vec<Label> = fusion
                        .products(b, c)
                        .iter()
                        .copied()
                        .filter(|&x| fusion.admissible(a, x, d))
                        .collect();
                    if left.len() != right.len() {
                        return Err(Error::Structural(format!(
                            "F block (a,b,c,d)=({a},{b},{c},{d}) is {}×{}",
                            right.len(),
                            left.len()
                        )));
                    }
                    // rows: right label n, columns: left label m
                    let k = left.len();
                    let mut mat = vec![ZERO; k * k];
                    for (i, &x) in right.iter().enumerate() {
                        for (j, &m) in left.iter().enumerate() {
                            mat[i * k + j] = data.f.f(a, b, c, d, x, m);
                        }
                    }
                    let inv = invert(&mat, k).ok_or(Error::SingularBlock([a, b, c, d]))?;
                    // inv rows: left label, columns: right label
                    for (i, &m) in left.iter().enumerate() {
                        for (j, &x) in right.iter().enumerate() {
                            out.finv.insert(pack6([a, b, c, d, m, x]), inv[i * k + j]);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Gauss-Jordan inversion with partial pivoting of a row-major `k×k` matrix.
fn invert(mat: &[Scalar], k: usize) -> Option<Vec<Scalar>> {
    let scale = mat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let mut a = mat.to_vec();
    let mut inv = vec![ZERO; k * k];
    for i in 0..k {
        inv[i * k + i] = ONE;
    }
    for col in 0..k {
        let pivot = (col..k).max_by(|&x, &y| a[x * k + col].norm().total_cmp(&a[y * k + col].norm()))?;
        if a[pivot * k + col].norm() <= 1e-13 * scale {
            return None;
        }
        if pivot != col {
            for j in 0..k {
                a.swap(pivot * k + j, col * k + j);
                inv.swap(pivot * k + j, col * k + j);
            }
        }
        let p = a[col * k + col];
        for j in 0..k {
            a[col * k + j] /= p;
            inv[col * k + j] /= p;
        }
        for row in 0..k {
            if row != col {
                let factor = a[row * k + col];
                if factor != ZERO {
                    for j in 0..k {
                        let (ac, ic) = (a[col * k + j], inv[col * k + j]);
                        a[row * k + j] -= factor * ac;
                        inv[row * k + j] -= factor * ic;
                    }
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64) -> Scalar {
        Complex64::new(re, 0.0)
    }

    /// Vect_{Z2} with an explicitly stored F on every admissible tuple.
    fn z2_raw(f_value: Scalar) -> RawCategory {
        let mut raw = RawCategory {
            name: "z2".into(),
            group: Some(FiniteGroup::trivial()),
            labels: Some(LabelSet {
                names: vec!["0".into(), "1".into()],
                unit: 0,
                grade: vec![0, 0],
                dual: vec![0, 1],
                qdim: vec![1.0, 1.0],
            }),
            fusion: vec![[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]],
            ..Default::default()
        };
        raw.r = raw.fusion.iter().map(|&t| (t, ONE)).collect();
        raw.f.push(([1, 1, 1, 1, 0, 0], f_value));
        raw
    }

    #[test]
    fn scalar_blocks_invert_to_their_reciprocal() {
        let data = z2_raw(ONE).build().unwrap();
        data.for_each_admissible_six(|[a, b, c, d, n, m]| {
            assert_eq!(data.f.f(a, b, c, d, n, m), ONE);
            assert_eq!(data.f.finv(a, b, c, d, m, n), ONE);
        });
        assert_eq!(data.f.inverse_len(), data.f.len());
    }

    #[test]
    fn zero_scalar_block_is_singular() {
        let err = z2_raw(c(0.0)).build().unwrap_err();
        assert!(matches!(err, Error::SingularBlock([1, 1, 1, 1])), "{err}");
    }

    #[test]
    fn missing_nonunit_entries_are_errors() {
        let mut raw = z2_raw(ONE);
        raw.f.clear();
        assert!(matches!(raw.build(), Err(Error::Incomplete { symbol: "F", .. })));
        let mut raw = z2_raw(ONE);
        raw.r.pop();
        assert!(matches!(raw.build(), Err(Error::Incomplete { symbol: "R", .. })));
    }

    #[test]
    fn entries_on_inadmissible_tuples_are_rejected() {
        let mut raw = z2_raw(ONE);
        raw.r.push(([1, 1, 1], ONE));
        assert!(matches!(raw.build(), Err(Error::Structural(_))));
    }

    #[test]
    fn two_by_two_inverse() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let m = [c(1.0 / phi), c(phi.sqrt().recip()), c(phi.sqrt().recip()), c(-1.0 / phi)];
        let inv = invert(&m, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let prod: Scalar = (0..2).map(|k| m[i * 2 + k] * inv[k * 2 + j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod - c(expect)).norm() < 1e-12);
            }
        }
    }
}
