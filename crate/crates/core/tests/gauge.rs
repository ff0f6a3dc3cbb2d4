mod common;

use common::*;
use gcrossed_core::builders::fibonacci;
use gcrossed_core::category::validate_all;
use gcrossed_core::format::to_raw;
use gcrossed_core::scalar::Scalar;
use gcrossed_core::triangulation::boundary_5simplex;
use gcrossed_core::{partition_function, CheckConfig, GbsfcData, RunConfig};
use proptest::prelude::*;
use std::collections::HashMap;

/// Rescales each trivalent vertex `a ⊗ b → c` by the phase `u(a,b;c)`.
fn gauge(data: &GbsfcData, phases: &[f64]) -> GbsfcData {
    let unit = data.labels.unit;
    let u: HashMap<[usize; 3], Scalar> = data
        .fusion
        .triples()
        .enumerate()
        .map(|(i, [a, b, c])| {
            let w = if a == unit || b == unit { 0.0 } else { phases[i % phases.len()] };
            ([a, b, c], Scalar::from_polar(1.0, w))
        })
        .collect();
    let mut raw = to_raw(data);
    for ([a, b, c, d, n, m], v) in &mut raw.f {
        *v *= u[&[*a, *b, *m]] * u[&[*m, *c, *d]] / (u[&[*b, *c, *n]] * u[&[*a, *n, *d]]);
    }
    for ([a, b, c], v) in &mut raw.r {
        *v *= u[&[*a, *b, *c]] / u[&[*b, *a, *c]];
    }
    raw.build().unwrap()
}

fn check(data: &GbsfcData, phases: &[f64]) -> Result<(), TestCaseError> {
    let g = gauge(data, phases);
    let cfg = CheckConfig { tolerance: 1e-9, ..CheckConfig::default() };
    for rep in validate_all(&g, &cfg) {
        prop_assert!(rep.is_ok(), "{} fails after gauge: {}", rep.name, rep.max_residual);
    }
    let t = boundary_5simplex();
    let before = partition_function(&t, data, &RunConfig::default()).unwrap().value;
    let after = partition_function(&t, &g, &RunConfig::default()).unwrap().value;
    prop_assert!((after - before).norm() < 1e-9, "{before} vs {after}");
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn fibonacci_is_gauge_invariant(phases in prop::collection::vec(-3.0..3.0f64, 8)) {
        check(&fibonacci().unwrap(), &phases)?;
    }

    #[test]
    fn pointed_z3_is_gauge_invariant(phases in prop::collection::vec(-3.0..3.0f64, 9)) {
        check(&pointed_z3(), &phases)?;
    }
}
