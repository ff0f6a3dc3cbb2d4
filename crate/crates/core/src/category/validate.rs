//! Consistency checks for [`GbsfcData`].

use super::{GbsfcData, Label};
use crate::group::validate_group;
use crate::report::{CheckConfig, DiagnosticReport, DiagnosticRow, ValidationReport};
use crate::scalar::{CompensatedSum, Scalar, ONE};

const NONZERO_FLOOR: f64 = 1e-300;

/// Group axioms, label invariants, the strict action on labels and the fusion-rule identities.
pub fn validate_fusion(data: &GbsfcData, cfg: &CheckConfig) -> ValidationReport {
    let mut rep = ValidationReport::new("fusion", cfg);
    rep.merge(validate_group(&data.group, cfg));
    let g = &data.group;
    let e = g.identity();
    let l = &data.labels;
    let fu = &data.fusion;
    let n = data.label_count();
    let act = |x, a| data.action.act(x, a);

    rep.require("unit-grade", l.grade[l.unit] == e, || format!("unit={}", l.unit));
    rep.residual("unit-dimension", (l.qdim[l.unit] - 1.0).abs(), || format!("unit={}", l.unit));
    for a in 0..n {
        let ad = l.dual[a];
        rep.require("dual-involution", l.dual[ad] == a, || format!("a={a}"));
        rep.require("dual-grade", l.grade[ad] == g.inv(l.grade[a]), || format!("a={a}"));
        rep.residual("dual-dimension", (l.qdim[ad] - l.qdim[a]).abs(), || format!("a={a}"));
        rep.require("dimension-nonzero", l.qdim[a].abs() > NONZERO_FLOOR && l.qdim[a].is_finite(), || {
            format!("a={a}")
        });
        for b in 0..n {
            rep.require("unit-left", fu.admissible(l.unit, a, b) == (a == b), || format!("({a},{b})"));
            rep.require("unit-right", fu.admissible(a, l.unit, b) == (a == b), || format!("({a},{b})"));
            rep.require("duality", fu.admissible(a, b, l.unit) == (b == ad), || format!("({a},{b})"));
        }
    }
    for [a, b, c] in fu.triples() {
        rep.require("grading", g.mul(l.grade[a], l.grade[b]) == l.grade[c], || format!("({a},{b};{c})"));
    }

    for a in 0..n {
        rep.require("action-identity", act(e, a) == a, || format!("a={a}"));
        for x in g.elements() {
            let xa = act(x, a);
            rep.require("action-grade", l.grade[xa] == g.conj(x, l.grade[a]), || format!("g={x}, a={a}"));
            rep.residual("action-dimension", (l.qdim[xa] - l.qdim[a]).abs(), || format!("g={x}, a={a}"));
            rep.require("action-dual", act(x, l.dual[a]) == l.dual[xa], || format!("g={x}, a={a}"));
            for y in g.elements() {
                rep.require("action-composition", act(x, act(y, a)) == act(g.mul(x, y), a), || {
                    format!("g={x}, h={y}, a={a}")
                });
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let lhs: usize = fu.products(a, b).iter().filter(|&&m| fu.admissible(m, c, d)).count();
                    let rhs: usize = fu.products(b, c).iter().filter(|&&x| fu.admissible(a, x, d)).count();
                    rep.require("fusion-associativity", lhs == rhs, || format!("({a},{b},{c};{d})"));
                }
            }
        }
    }
    for a in 0..n {
        let ga = l.grade[a];
        for b in 0..n {
            let ab = act(ga, b);
            for c in 0..n {
                rep.require("fusion-braided", fu.admissible(a, b, c) == fu.admissible(ab, a, c), || {
                    format!("({a},{b};{c})")
                });
                for x in g.elements() {
                    rep.require(
                        "fusion-equivariance",
                        fu.admissible(a, b, c) == fu.admissible(act(x, a), act(x, b), act(x, c)),
                        || format!("g={x}, ({a},{b};{c})"),
                    );
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let sum: f64 = fu.products(a, b).iter().map(|&c| l.qdim[c]).sum();
            rep.residual("dimension-fusion", (l.qdim[a] * l.qdim[b] - sum).abs(), || format!("({a},{b})"));
        }
    }
    let d2: f64 = l.qdim.iter().map(|d| d * d).sum();
    rep.residual("total-dimension", (d2 - data.total_dim_sq).abs(), || "D^2".into());
    rep
}

/// Unit gauge of F, the inverse blocks and the pentagon equation.
pub fn validate_pentagon(data: &GbsfcData, cfg: &CheckConfig) -> ValidationReport {
    let mut rep = ValidationReport::new("pentagon", cfg);
    let fu = &data.fusion;
    let ft = &data.f;
    let unit = data.labels.unit;
    let n = data.label_count();
    let f = |a, b, c, d, x, m| ft.f(a, b, c, d, x, m);

    data.for_each_admissible_six(|[a, b, c, d, x, m]| {
        if a == unit || b == unit || c == unit {
            rep.residual("f-unit-gauge", (f(a, b, c, d, x, m) - ONE).norm(), || {
                format!("F({a},{b},{c};{d})_{{{x},{m}}}")
            });
        }
        // one row of F·Finv per (x, m) with m the smallest left label
        if fu.products(a, b).iter().find(|&&k| fu.admissible(k, c, d)) == Some(&m) {
            for &y in fu.products(b, c).iter().filter(|&&k| fu.admissible(a, k, d)) {
                let s: Scalar = fu
                    .products(a, b)
                    .iter()
                    .filter(|&&k| fu.admissible(k, c, d))
                    .map(|&k| f(a, b, c, d, x, k) * ft.finv(a, b, c, d, k, y))
                    .sum();
                let expect = if x == y { ONE } else { Scalar::new(0.0, 0.0) };
                rep.residual("f-inverse", (s - expect).norm(), || format!("({a},{b},{c};{d}) entry {x},{y}"));
            }
        }
    });

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for &m in fu.products(a, b) {
                        for &nn in fu.products(m, c) {
                            for &ff in fu.products(nn, d) {
                                for &q in fu.products(c, d) {
                                    for &p in fu.products(b, q) {
                                        if !fu.admissible(a, p, ff) {
                                            continue;
                                        }
                                        let lhs = f(m, c, d, ff, q, nn) * f(a, b, q, ff, p, m);
                                        let rhs: CompensatedSum = fu
                                            .products(b, c)
                                            .iter()
                                            .map(|&l| {
                                                f(a, b, c, nn, l, m)
                                                    * f(a, l, d, ff, p, nn)
                                                    * f(b, c, d, p, q, l)
                                            })
                                            .collect();
                                        rep.residual("pentagon", (lhs - rhs.value()).norm(), || {
                                            format!("a={a} b={b} c={c} d={d} m={m} n={nn} f={ff} q={q} p={p}")
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Unit gauge of `U` and `eta`, and their coherence with F and with each other.
pub fn validate_action_coherence(data: &GbsfcData, cfg: &CheckConfig) -> ValidationReport {
    let mut rep = ValidationReport::new("action-coherence", cfg);
    let g = &data.group;
    let e = g.identity();
    let fu = &data.fusion;
    let at = &data.action;
    let n = data.label_count();
    let act = |x, a| at.act(x, a);
    let u = |x, a, b, c| at.u(x, a, b, c).ok();
    let eta = |a, x, y| at.eta(a, x, y);

    for x in g.elements() {
        for [a, b, c] in fu.triples() {
            let v = u(x, a, b, c);
            let ok = v.is_some_and(|v| v.norm() > NONZERO_FLOOR && v.is_finite());
            rep.require("u-nonzero", ok, || format!("U_{x}({a},{b};{c})"));
            if x == e {
                rep.residual("u-unit-gauge", v.map_or(f64::INFINITY, |v| (v - ONE).norm()), || {
                    format!("U_e({a},{b};{c})")
                });
            }
        }
    }
    for a in 0..n {
        for x in g.elements() {
            for y in g.elements() {
                let v = eta(a, x, y);
                rep.require("eta-nonzero", v.norm() > NONZERO_FLOOR && v.is_finite(), || {
                    format!("eta_{a}({x},{y})")
                });
            }
            rep.residual(
                "eta-unit-gauge",
                (eta(a, e, x) - ONE).norm().max((eta(a, x, e) - ONE).norm()),
                || format!("eta_{a}(e,{x}) / eta_{a}({x},e)"),
            );
        }
    }

    for x in g.elements() {
        data.for_each_admissible_six(|[a, b, c, d, nn, m]| {
            let lhs = data.f.f(act(x, a), act(x, b), act(x, c), act(x, d), act(x, nn), act(x, m));
            let rhs = (|| {
                Some(
                    data.f.f(a, b, c, d, nn, m) * u(x, b, c, nn)? * u(x, a, nn, d)?
                        / (u(x, a, b, m)? * u(x, m, c, d)?),
                )
            })();
            rep.residual("f-u", rhs.map_or(f64::INFINITY, |r| (lhs - r).norm()), || {
                format!("g={x}, F({a},{b},{c};{d})_{{{nn},{m}}}")
            });
        });
    }

    for a in 0..n {
        for x in g.elements() {
            for y in g.elements() {
                for k in g.elements() {
                    let lhs = eta(a, g.mul(x, y), k) * eta(act(k, a), x, y);
                    let rhs = eta(a, x, g.mul(y, k)) * eta(a, y, k);
                    rep.residual("eta-cocycle", (lhs - rhs).norm(), || format!("a={a}, ({x},{y},{k})"));
                }
            }
        }
    }

    for [a, b, c] in fu.triples() {
        for x in g.elements() {
            for y in g.elements() {
                let lhs = eta(a, x, y) * eta(b, x, y) / eta(c, x, y);
                let rhs = (|| {
                    Some(u(x, act(y, a), act(y, b), act(y, c))? * u(y, a, b, c)? / u(g.mul(x, y), a, b, c)?)
                })();
                rep.residual("u-eta", rhs.map_or(f64::INFINITY, |r| (lhs - r).norm()), || {
                    format!("({a},{b};{c}), g={x}, h={y}")
                });
            }
        }
    }
    rep
}

/// The two G-crossed hexagons and the compatibility of R with the action.
pub fn validate_braiding(data: &GbsfcData, cfg: &CheckConfig) -> ValidationReport {
    let mut rep = ValidationReport::new("braiding", cfg);
    let g = &data.group;
    let fu = &data.fusion;
    let at = &data.action;
    let n = data.label_count();
    let act = |x, a| at.act(x, a);
    let gr = |a: Label| data.grade(a);
    let u = |x, a, b, c| at.u(x, a, b, c).ok();
    let r = |a, b, c| data.r.r(a, b, c).ok();
    let f = |a, b, c, d, x, m| data.f.f(a, b, c, d, x, m);

    for [a, b, c] in fu.triples() {
        let v = r(a, b, c);
        rep.require("r-nonzero", v.is_some_and(|v| v.norm() > NONZERO_FLOOR && v.is_finite()), || {
            format!("R({a},{b};{c})")
        });
    }

    for a in 0..n {
        let ga = gr(a);
        for b in 0..n {
            let ab = act(ga, b);
            for c in 0..n {
                let ac = act(ga, c);
                for &m in fu.products(a, b) {
                    for &d in fu.products(m, c) {
                        for &nn in fu.products(a, c) {
                            if !fu.admissible(ab, nn, d) {
                                continue;
                            }
                            let lhs = (|| Some(r(a, b, m)? * f(ab, a, c, d, nn, m) * r(a, c, nn)?))();
                            let rhs = (|| {
                                let mut acc = CompensatedSum::new();
                                for &l in fu.products(b, c) {
                                    if !fu.admissible(a, l, d) {
                                        continue;
                                    }
                                    acc.add(
                                        f(a, b, c, d, l, m)
                                            * u(ga, b, c, l)?
                                            * r(a, l, d)?
                                            * f(ab, ac, a, d, nn, act(ga, l)),
                                    );
                                }
                                Some(acc.value())
                            })();
                            let res = match (lhs, rhs) {
                                (Some(x), Some(y)) => (x - y).norm(),
                                _ => f64::INFINITY,
                            };
                            rep.residual("hexagon-1", res, || {
                                format!("a={a} b={b} c={c} m={m} d={d} n={nn}")
                            });
                        }
                    }
                }
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let gc = gr(c);
                let ca = act(gc, a);
                let bca = act(g.mul(gr(b), gc), a);
                let e_inv = at.eta(a, gr(b), gc).inv();
                for &nn in fu.products(c, a) {
                    for &d in fu.products(b, nn) {
                        for &m in fu.products(b, ca) {
                            if !fu.admissible(m, c, d) {
                                continue;
                            }
                            let lhs = (|| Some(f(b, ca, c, d, nn, m) / (r(b, ca, m)? * r(c, a, nn)?)))();
                            let rhs = (|| {
                                let mut acc = CompensatedSum::new();
                                for &l in fu.products(b, c) {
                                    if !fu.admissible(l, a, d) {
                                        continue;
                                    }
                                    acc.add(
                                        e_inv * f(bca, b, c, d, l, m) * f(b, c, a, d, nn, l) / r(l, a, d)?,
                                    );
                                }
                                Some(acc.value())
                            })();
                            let res = match (lhs, rhs) {
                                (Some(x), Some(y)) => (x - y).norm(),
                                _ => f64::INFINITY,
                            };
                            rep.residual("hexagon-2", res, || {
                                format!("a={a} b={b} c={c} n={nn} d={d} m={m}")
                            });
                        }
                    }
                }
            }
        }
    }

    for x in g.elements() {
        for [a, b, c] in fu.triples() {
            let ga = gr(a);
            let lhs = r(act(x, a), act(x, b), act(x, c));
            let rhs = (|| {
                Some(
                    r(a, b, c)? * u(x, act(ga, b), a, c)? * at.eta(b, g.conj(x, ga), x)
                        / (u(x, a, b, c)? * at.eta(b, x, ga)),
                )
            })();
            let res = match (lhs, rhs) {
                (Some(p), Some(q)) => (p - q).norm(),
                _ => f64::INFINITY,
            };
            rep.residual("r-u", res, || format!("g={x}, R({a},{b};{c})"));
        }
    }
    rep
}

/// Every validator, in dependency order.
pub fn validate_all(data: &GbsfcData, cfg: &CheckConfig) -> Vec<ValidationReport> {
    vec![
        validate_fusion(data, cfg),
        validate_pentagon(data, cfg),
        validate_action_coherence(data, cfg),
        validate_braiding(data, cfg),
    ]
}

/// Compares `Σ_{a ∈ C_g} d_a²` with `D²/|G|` for every group element. Sectors that
/// deviate are flagged; a non-faithful grading is expected to show empty sectors.
pub fn sector_dimension_check(data: &GbsfcData, tolerance: f64) -> DiagnosticReport {
    let expected = data.total_dim_sq / data.group.order() as f64;
    let rows = data
        .group
        .elements()
        .map(|x| {
            let observed: f64 = data.sector(x).iter().map(|&a| data.qdim(a).powi(2)).sum();
            let deviation = (observed - expected).abs();
            DiagnosticRow {
                item: format!("sector {x}"),
                observed,
                expected,
                deviation,
                flagged: deviation > tolerance * expected.abs().max(1.0),
            }
        })
        .collect();
    DiagnosticReport { name: "sector-dimensions", rows }
}
