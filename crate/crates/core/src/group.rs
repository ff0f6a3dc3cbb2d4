//! Finite groups given by multiplication tables.

use crate::report::{CheckConfig, ValidationReport};
use crate::{Error, Result};

/// Group element, as an index into the multiplication table.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<Elem>,
    identity: Elem,
    inverse: Vec<Elem>,
}

impl FiniteGroup {
    /// Builds a group from explicit tables, checking only their shapes and index ranges.
    /// Use [`validate_group`] to check the axioms.
    pub fn from_parts(mult: Vec<Vec<Elem>>, identity: Elem, inverse: Vec<Elem>) -> Result<Self> {
        let order = mult.len();
        if order == 0 {
            return Err(Error::Structural("group table is empty".into()));
        }
        if let Some((i, row)) = mult.iter().enumerate().find(|(_, r)| r.len() != order) {
            return Err(Error::Structural(format!(
                "multiplication row {i} has length {}, expected {order}",
                row.len()
            )));
        }
        if inverse.len() != order {
            return Err(Error::Structural(format!(
                "inverse table has length {}, expected {order}",
                inverse.len()
            )));
        }
        let flat: Vec<Elem> = mult.into_iter().flatten().collect();
        if identity >= order || flat.iter().chain(inverse.iter()).any(|&x| x >= order) {
            return Err(Error::Structural(format!("group table entry out of range 0..{order}")));
        }
        Ok(Self { order, mult: flat, identity, inverse })
    }

    /// Builds a group from its multiplication table alone, deriving the identity and inverses.
    /// When no two-sided unit or inverse exists a placeholder is used and [`validate_group`]
    /// reports the failure.
    pub fn from_table(mult: Vec<Vec<Elem>>) -> Result<Self> {
        let n = mult.len();
        let unit_candidate = |e: usize| {
            (0..n).all(|x| mult[e].get(x) == Some(&x) && mult.get(x).and_then(|r| r.get(e)) == Some(&x))
        };
        let identity = (0..n).find(|&e| unit_candidate(e)).unwrap_or(0);
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| {
                        mult[x].get(y) == Some(&identity)
                            && mult.get(y).and_then(|r| r.get(x)) == Some(&identity)
                    })
                    .unwrap_or(x)
            })
            .collect();
        Self::from_parts(mult, identity, inverse)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z_n with element k standing for k mod n.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        Self::from_parts(mult, 0, inverse).expect("cyclic table is well-formed")
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order, other.order);
        let idx = |a: Elem, b: Elem| a * m + b;
        let mult = (0..n * m)
            .map(|x| (0..n * m).map(|y| idx(self.mul(x / m, y / m), other.mul(x % m, y % m))).collect())
            .collect();
        let inverse = (0..n * m).map(|x| idx(self.inv(x / m), other.inv(x % m))).collect();
        Self::from_parts(mult, idx(self.identity, other.identity), inverse)
            .expect("product table is well-formed")
    }

    /// The symmetric group on `n` letters. Elements are permutations in lexicographic
    /// order (so 0 is the identity); `mul(p, q)` is the composite `p ∘ q`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
        let mult = perms
            .iter()
            .map(|p| perms.iter().map(|q| index(&q.iter().map(|&i| p[i]).collect::<Vec<_>>())).collect())
            .collect();
        let inverse = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0; n];
                for (i, &pi) in p.iter().enumerate() {
                    inv[pi] = i;
                }
                index(&inv)
            })
            .collect();
        Self::from_parts(mult, 0, inverse).expect("symmetric table is well-formed")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    /// Product of a sequence, left to right.
    pub fn mul_all(&self, xs: &[Elem]) -> Elem {
        xs.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    /// `g h g^{-1}`.
    pub fn conj(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table(&self) -> Vec<Vec<Elem>> {
        self.mult.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn inverse_table(&self) -> &[Elem] {
        &self.inverse
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

/// Checks associativity, the two-sided unit and two-sided inverses.
pub fn validate_group(group: &FiniteGroup, cfg: &CheckConfig) -> ValidationReport {
    let mut report = ValidationReport::new("group", cfg);
    let e = group.identity();
    for x in group.elements() {
        report.require("unit", group.mul(e, x) == x && group.mul(x, e) == x, || format!("x={x}"));
        let y = group.inv(x);
        report.require("inverse", group.mul(x, y) == e && group.mul(y, x) == e, || {
            format!("x={x}, inverse={y}")
        });
    }
    for a in group.elements() {
        for b in group.elements() {
            let ab = group.mul(a, b);
            for c in group.elements() {
                report.require("associativity", group.mul(ab, c) == group.mul(a, group.mul(b, c)), || {
                    format!("({a},{b},{c})")
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    #[test]
    fn z2_xor_table_is_a_group() {
        let g = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(validate_group(&g, &cfg()).is_ok());
    }

    #[test]
    fn broken_involution_is_flagged() {
        let g = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap();
        let report = validate_group(&g, &cfg());
        assert!(report.violations.iter().any(|v| v.check == "inverse" || v.check == "unit"));
    }

    #[test]
    fn malformed_table_is_structural_error() {
        assert!(matches!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]]), Err(Error::Structural(_))));
        assert!(matches!(FiniteGroup::from_parts(vec![vec![0]], 0, vec![0, 0]), Err(Error::Structural(_))));
        assert!(matches!(FiniteGroup::from_table(vec![]), Err(Error::Structural(_))));
    }

    #[test]
    fn symmetric_group_matches_composition_oracle() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(validate_group(&s3, &cfg()).is_ok());
        assert!(!s3.is_abelian());
        // Independent oracle: compose explicit permutations.
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let r = [p[q[0]], p[q[1]], p[q[2]]];
                assert_eq!(perms[s3.mul(i, j)], r);
            }
        }
    }

    #[test]
    fn product_of_cyclics() {
        let k = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
        assert_eq!(k.order(), 4);
        assert!(k.is_abelian());
        assert!(validate_group(&k, &cfg()).is_ok());
        assert!(k.elements().all(|x| k.mul(x, x) == k.identity()));
    }
}
