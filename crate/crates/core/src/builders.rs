//! Constructors for the standard example families, and 4-cocycle data.
//!
//! Every constructor that returns [`GbsfcData`] runs the full validator suite before
//! returning, so a successful build is a valid category.

use crate::category::{validate_all, GbsfcData, LabelSet, RawCategory};
use crate::group::{validate_group, Elem, FiniteGroup};
use crate::report::{CheckConfig, ValidationReport};
use crate::scalar::{Scalar, ONE};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Runs every validator and converts failures into [`Error::Invalid`].
pub fn validated(data: GbsfcData, cfg: &CheckConfig) -> Result<GbsfcData> {
    let failures: Vec<String> =
        validate_all(&data, cfg).into_iter().filter(|r| !r.is_ok()).map(|r| r.to_string()).collect();
    if failures.is_empty() {
        Ok(data)
    } else {
        Err(Error::Invalid(format!("{}: {}", data.name, failures.join("\n"))))
    }
}

/// A crossed module `(H, G, rho, phi)`, with `phi[g][h]` the action of `g` on `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedModule {
    pub h: FiniteGroup,
    pub g: FiniteGroup,
    pub rho: Vec<Elem>,
    pub phi: Vec<Vec<Elem>>,
}

impl CrossedModule {
    /// `phi` is the identity action.
    pub fn with_trivial_action(h: FiniteGroup, g: FiniteGroup, rho: Vec<Elem>) -> Self {
        let phi = g.elements().map(|_| h.elements().collect()).collect();
        Self { h, g, rho, phi }
    }

    /// `rho` trivial, `phi` trivial: the input whose invariant counts 2-cocycles in `H`.
    pub fn discrete(h: FiniteGroup) -> Self {
        let rho = vec![0; h.order()];
        Self::with_trivial_action(h, FiniteGroup::trivial(), rho)
    }

    /// `H` trivial: the Dijkgraaf-Witten input for `G`.
    pub fn dijkgraaf_witten(g: FiniteGroup) -> Self {
        let rho = vec![g.identity()];
        Self::with_trivial_action(FiniteGroup::trivial(), g, rho)
    }

    /// `rho` trivial and `phi(g, h)` given by a map from `G` into `Aut(H)`.
    pub fn trivial_boundary(h: FiniteGroup, g: FiniteGroup, phi: Vec<Vec<Elem>>) -> Self {
        let rho = vec![g.identity(); h.order()];
        Self { h, g, rho, phi }
    }

    fn phi(&self, g: Elem, h: Elem) -> Elem {
        self.phi[g][h]
    }
}

/// Group axioms of both groups, then the morphism, action, equivariance and Peiffer conditions.
pub fn validate_crossed_module(cm: &CrossedModule, cfg: &CheckConfig) -> ValidationReport {
    let mut rep = ValidationReport::new("crossed-module", cfg);
    rep.merge(validate_group(&cm.h, cfg));
    rep.merge(validate_group(&cm.g, cfg));
    let (h, g) = (&cm.h, &cm.g);
    let shape_ok = cm.rho.len() == h.order()
        && cm.rho.iter().all(|&x| x < g.order())
        && cm.phi.len() == g.order()
        && cm.phi.iter().all(|row| row.len() == h.order() && row.iter().all(|&x| x < h.order()));
    rep.require("shape", shape_ok, || "rho must map H into G and phi must be |G|x|H| over H".into());
    if !shape_ok {
        return rep;
    }
    for a in h.elements() {
        for b in h.elements() {
            rep.require("rho-morphism", cm.rho[h.mul(a, b)] == g.mul(cm.rho[a], cm.rho[b]), || {
                format!("({a},{b})")
            });
        }
    }
    for x in h.elements() {
        rep.require("phi-identity", cm.phi(g.identity(), x) == x, || format!("h={x}"));
    }
    for s in g.elements() {
        for t in g.elements() {
            for x in h.elements() {
                rep.require("phi-action", cm.phi(g.mul(s, t), x) == cm.phi(s, cm.phi(t, x)), || {
                    format!("g={s}, g'={t}, h={x}")
                });
            }
        }
        for a in h.elements() {
            for b in h.elements() {
                rep.require(
                    "phi-automorphism",
                    cm.phi(s, h.mul(a, b)) == h.mul(cm.phi(s, a), cm.phi(s, b)),
                    || format!("g={s}, ({a},{b})"),
                );
            }
        }
        for x in h.elements() {
            rep.require("equivariance", cm.rho[cm.phi(s, x)] == g.conj(s, cm.rho[x]), || {
                format!("g={s}, h={x}")
            });
        }
    }
    for a in h.elements() {
        for b in h.elements() {
            rep.require("peiffer", cm.phi(cm.rho[a], b) == h.conj(a, b), || format!("h'={a}, h={b}"));
        }
    }
    rep
}

/// The G-crossed category `D(H, G, rho, phi)`: labels are elements of `H`, fusion is the
/// group law, and every F, U, eta, R symbol equals 1.
pub fn from_crossed_module(cm: &CrossedModule) -> Result<GbsfcData> {
    let cfg = CheckConfig::default();
    validate_crossed_module(cm, &cfg).into_result()?;
    let (h, g) = (&cm.h, &cm.g);
    let triples: Vec<[usize; 3]> =
        h.elements().flat_map(|a| h.elements().map(move |b| [a, b, h.mul(a, b)])).collect();
    let mut raw = RawCategory {
        name: format!("D(|H|={}, |G|={})", h.order(), g.order()),
        group: Some(g.clone()),
        labels: Some(LabelSet {
            names: h.elements().map(|x| format!("h{x}")).collect(),
            unit: h.identity(),
            grade: cm.rho.clone(),
            dual: h.elements().map(|x| h.inv(x)).collect(),
            qdim: vec![1.0; h.order()],
        }),
        action: Some(cm.phi.clone()),
        fusion: triples.clone(),
        ..Default::default()
    };
    raw.r = triples.iter().map(|&t| (t, ONE)).collect();
    for s in g.elements() {
        raw.u.extend(triples.iter().map(|&[a, b, c]| ([s, a, b, c], ONE)));
        for t in g.elements() {
            raw.eta.extend(h.elements().map(|x| ([x, s, t], ONE)));
        }
    }
    for a in h.elements() {
        for b in h.elements() {
            for c in h.elements() {
                let (ab, bc) = (h.mul(a, b), h.mul(b, c));
                raw.f.push(([a, b, c, h.mul(ab, c), bc, ab], ONE));
            }
        }
    }
    validated(raw.build()?, &cfg)
}

/// `exp(2πi·k·a·b/n)` on `Z_n`.
pub fn cyclic_bicharacter(n: usize, k: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| Complex64::from_polar(1.0, 2.0 * PI * ((k * a * b) % n) as f64 / n as f64))
                .collect()
        })
        .collect()
}

/// Braided pointed category on an abelian group `A` with trivial F and `R(a,b;ab) = chi(a,b)`.
/// A `chi` that is not a bicharacter fails the hexagon checks and is refused.
pub fn pointed_braided(a: &FiniteGroup, chi: &[Vec<Scalar>]) -> Result<GbsfcData> {
    if !a.is_abelian() {
        return Err(Error::Precondition("pointed_braided needs an abelian group".into()));
    }
    if chi.len() != a.order() || chi.iter().any(|row| row.len() != a.order()) {
        return Err(Error::Structural(format!("bicharacter table must be {0}x{0}", a.order())));
    }
    let triples: Vec<[usize; 3]> =
        a.elements().flat_map(|x| a.elements().map(move |y| [x, y, a.mul(x, y)])).collect();
    let mut raw = RawCategory {
        name: format!("pointed(|A|={})", a.order()),
        group: Some(FiniteGroup::trivial()),
        labels: Some(LabelSet {
            names: a.elements().map(|x| format!("a{x}")).collect(),
            unit: a.identity(),
            grade: vec![0; a.order()],
            dual: a.elements().map(|x| a.inv(x)).collect(),
            qdim: vec![1.0; a.order()],
        }),
        fusion: triples.clone(),
        ..Default::default()
    };
    raw.r = triples.iter().map(|&[x, y, z]| ([x, y, z], chi[x][y])).collect();
    for x in a.elements() {
        for y in a.elements() {
            for z in a.elements() {
                let (xy, yz) = (a.mul(x, y), a.mul(y, z));
                raw.f.push(([x, y, z, a.mul(xy, z), yz, xy], ONE));
            }
        }
    }
    validated(raw.build()?, &CheckConfig::default())
}

/// Regards a braided category (trivial group) as G-crossed with every label in the
/// identity sector, the identity action and `U = eta = 1`.
pub fn trivial_grading(ribbon: &GbsfcData, g: &FiniteGroup) -> Result<GbsfcData> {
    if !ribbon.group.is_trivial() {
        return Err(Error::Precondition("trivial_grading needs data over the trivial group".into()));
    }
    let n = ribbon.label_count();
    let triples: Vec<[usize; 3]> = ribbon.fusion.triples().collect();
    let mut raw = RawCategory {
        name: format!("{} x |G|={}", ribbon.name, g.order()),
        group: Some(g.clone()),
        labels: Some(LabelSet { grade: vec![g.identity(); n], ..ribbon.labels.clone() }),
        fusion: triples.clone(),
        ..Default::default()
    };
    ribbon.for_each_admissible_six(|[a, b, c, d, x, m]| {
        raw.f.push(([a, b, c, d, x, m], ribbon.f.f(a, b, c, d, x, m)));
    });
    for &[a, b, c] in &triples {
        raw.r.push(([a, b, c], ribbon.r.r(a, b, c)?));
    }
    for s in g.elements() {
        raw.u.extend(triples.iter().map(|&[a, b, c]| ([s, a, b, c], ONE)));
        for h in g.elements() {
            raw.eta.extend((0..n).map(|a| ([a, s, h], ONE)));
        }
    }
    validated(raw.build()?, &CheckConfig::default())
}

/// The unit category `Vect`: one label over the trivial group.
pub fn vect() -> GbsfcData {
    pointed_braided(&FiniteGroup::trivial(), &[vec![ONE]]).expect("Vect is valid")
}

const FIBONACCI_JSON: &str = include_str!("../data/fibonacci.json");

/// The Fibonacci category (labels `1`, `τ`), loaded from the bundled data file.
pub fn fibonacci() -> Result<GbsfcData> {
    let data = crate::format::category_from_json(FIBONACCI_JSON)?;
    validated(data, &CheckConfig::default())
}

/// A `U(1)`-valued 4-cochain on a group, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleData {
    pub group: FiniteGroup,
    omega: Vec<Scalar>,
}

impl CocycleData {
    /// `omega ≡ 1`.
    pub fn trivial(group: FiniteGroup) -> Self {
        let n = group.order().pow(4);
        Self { group, omega: vec![ONE; n] }
    }

    /// Starts from `omega ≡ 1` and overwrites the listed entries.
    pub fn from_entries(group: FiniteGroup, entries: &[([Elem; 4], Scalar)]) -> Result<Self> {
        let mut c = Self::trivial(group);
        for &(idx, v) in entries {
            if idx.iter().any(|&x| x >= c.group.order()) {
                return Err(Error::Structural(format!("cocycle index {idx:?} out of range")));
            }
            let i = c.index(idx);
            c.omega[i] = v;
        }
        Ok(c)
    }

    /// `δλ` for a 3-cochain `λ`, given as a function of three group elements.
    pub fn coboundary(group: FiniteGroup, lambda: impl Fn(Elem, Elem, Elem) -> Scalar) -> Self {
        let mut c = Self::trivial(group);
        let g = c.group.clone();
        for (i, slot) in c.omega.iter_mut().enumerate() {
            let n = g.order();
            let [g1, g2, g3, g4] = [i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n];
            *slot = lambda(g2, g3, g4) / lambda(g.mul(g1, g2), g3, g4) * lambda(g1, g.mul(g2, g3), g4)
                / lambda(g1, g2, g.mul(g3, g4))
                * lambda(g1, g2, g3);
        }
        c
    }

    fn index(&self, [a, b, c, d]: [Elem; 4]) -> usize {
        let n = self.group.order();
        ((a * n + b) * n + c) * n + d
    }

    #[inline]
    pub fn omega(&self, g1: Elem, g2: Elem, g3: Elem, g4: Elem) -> Scalar {
        self.omega[self.index([g1, g2, g3, g4])]
    }

    pub fn is_trivial(&self) -> bool {
        self.omega.iter().all(|&w| w == ONE)
    }

    /// Non-unit entries, in index order.
    pub fn nontrivial_entries(&self) -> Vec<([Elem; 4], Scalar)> {
        let n = self.group.order();
        self.omega
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != ONE)
            .map(|(i, &w)| ([i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n], w))
            .collect()
    }
}

/// Unit modulus, normalization and `δω = 1` over all 5-tuples.
pub fn validate_cocycle(c: &CocycleData, cfg: &CheckConfig) -> ValidationReport {
    let mut rep = ValidationReport::new("cocycle", cfg);
    let g = &c.group;
    let e = g.identity();
    let els: Vec<Elem> = g.elements().collect();
    for &a in &els {
        for &b in &els {
            for &x in &els {
                for &y in &els {
                    let w = c.omega(a, b, x, y);
                    rep.residual("unit-modulus", (w.norm() - 1.0).abs(), || format!("({a},{b},{x},{y})"));
                    if [a, b, x, y].contains(&e) {
                        rep.residual("normalized", (w - ONE).norm(), || format!("({a},{b},{x},{y})"));
                    }
                }
            }
        }
    }
    for &g0 in &els {
        for &g1 in &els {
            for &g2 in &els {
                for &g3 in &els {
                    for &g4 in &els {
                        let num = c.omega(g1, g2, g3, g4)
                            * c.omega(g0, g.mul(g1, g2), g3, g4)
                            * c.omega(g0, g1, g2, g.mul(g3, g4));
                        let den = c.omega(g.mul(g0, g1), g2, g3, g4)
                            * c.omega(g0, g1, g.mul(g2, g3), g4)
                            * c.omega(g0, g1, g2, g3);
                        rep.residual("cocycle", (num - den).norm(), || format!("({g0},{g1},{g2},{g3},{g4})"));
                    }
                }
            }
        }
    }
    rep
}
