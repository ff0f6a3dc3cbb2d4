//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use common::*;
use gcrossed_core::builders::{from_crossed_module, trivial_grading, vect, CocycleData, CrossedModule};
use gcrossed_core::category::{validate_braiding, validate_pentagon};
use gcrossed_core::format::to_raw;
use gcrossed_core::scalar::Scalar;
use gcrossed_core::statesum::{count_admissible_crossed, rational_to_f64};
use gcrossed_core::triangulation::{apply_pachner, boundary_5simplex, relabel, MoveKind};
use gcrossed_core::{
    partition_function, partition_function_twisted, CheckConfig, FiniteGroup, GbsfcData,
    OrderedTriangulation, RunConfig,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

const DW_TOL: f64 = 1e-12;
const DW_SECONDS: f64 = 10.0;
const YETTER_TOL: f64 = 1e-9;
const YETTER_SECONDS: f64 = 120.0;
const FACTOR_TOL: f64 = 1e-9;
const FACTOR_SECONDS: f64 = 300.0;
const PACHNER_TOL: f64 = 1e-6;
const PACHNER_SECONDS: f64 = 300.0;
const PACHNER_FIB_SECONDS: f64 = 900.0;
const ORDER_TOL: f64 = 1e-9;
const ORDER_SEEDS: u64 = 20;
const VALID_TOL: f64 = 1e-9;
const PERTURBED_MIN: f64 = 0.1;
const TWIST_TOL: f64 = 1e-9;
const COLLAPSE_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn run(t: &OrderedTriangulation, d: &GbsfcData, seconds: f64) -> Result<Scalar, String> {
    let cfg = RunConfig { max_seconds: Some(seconds), ..RunConfig::default() };
    partition_function(t, d, &cfg).map(|r| r.value).map_err(|e| e.to_string())
}

fn dw(g: usize) -> FiniteGroup {
    match g {
        6 => FiniteGroup::symmetric(3),
        n => FiniteGroup::cyclic(n),
    }
}

fn criterion1() -> Outcome {
    let t = boundary_5simplex();
    let mut parts = Vec::new();
    for (name, n) in [("Z2", 2), ("Z3", 3), ("S3", 6)] {
        let d = from_crossed_module(&CrossedModule::dijkgraaf_witten(dw(n))).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let z = run(&t, &d, DW_SECONDS)?;
        let secs = start.elapsed().as_secs_f64();
        let err = (z - Scalar::new(1.0 / n as f64, 0.0)).norm();
        if err >= DW_TOL || secs >= DW_SECONDS {
            return Err(format!("{name}: Z = {z}, error {err:.1e}, {secs:.2} s"));
        }
        parts.push(format!("{name} {:.6} ({secs:.2} s)", z.re));
    }
    Ok(parts.join(", "))
}

fn criterion2(hook_max: &Arc<Mutex<f64>>, evaluated: &Arc<AtomicU64>) -> Outcome {
    let t = boundary_5simplex();
    let (m, e) = (hook_max.clone(), evaluated.clone());
    let cfg = RunConfig {
        max_seconds: Some(YETTER_SECONDS),
        hook: Some(Arc::new(move |_, _, z| {
            e.fetch_add(1, Ordering::Relaxed);
            let dev = (z - Scalar::new(1.0, 0.0)).norm();
            let mut worst = m.lock().unwrap();
            *worst = worst.max(dev);
        })),
        ..RunConfig::default()
    };
    let mut parts = Vec::new();
    for (name, cm, want) in
        [("D(Z2,e)", CrossedModule::discrete(FiniteGroup::cyclic(2)), 2.0), ("D(Z3,Z2)", z3_by_z2(), 1.5)]
    {
        let d = from_crossed_module(&cm).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let z = partition_function(&t, &d, &cfg).map_err(|e| e.to_string())?.value;
        let secs = start.elapsed().as_secs_f64();
        let count = rational_to_f64(&count_admissible_crossed(&t, &cm).map_err(|e| e.to_string())?.value);
        let (err, gap) = ((z - Scalar::new(want, 0.0)).norm(), (z - Scalar::new(count, 0.0)).norm());
        if err >= YETTER_TOL || gap >= YETTER_TOL || secs >= YETTER_SECONDS {
            return Err(format!("{name}: Z = {z}, count {count}, {secs:.2} s"));
        }
        parts.push(format!("{name} {:.6} = count {count} ({secs:.2} s)", z.re));
    }
    Ok(parts.join(", "))
}

fn criterion3() -> Outcome {
    let t = boundary_5simplex();
    let pointed = pointed_z3();
    let graded = trivial_grading(&pointed, &FiniteGroup::cyclic(2)).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let base = run(&t, &pointed, FACTOR_SECONDS)?;
    let z = run(&t, &graded, FACTOR_SECONDS)?;
    let secs = start.elapsed().as_secs_f64();
    let err = (z - base * 0.5).norm();
    if err >= FACTOR_TOL || secs >= FACTOR_SECONDS {
        return Err(format!("Z = {z}, expected {}, {secs:.2} s", base * 0.5));
    }
    Ok(format!("Z = {:.6} = {:.6} x 1/2 ({secs:.2} s)", z.re, base.re))
}

fn criterion4() -> Outcome {
    let t0 = boundary_5simplex();
    let sub = subdivided();
    let two_four = apply_pachner(&sub, &first_move(&sub, MoveKind::TwoFour)).map_err(|e| e.to_string())?;
    let three_three =
        apply_pachner(&two_four, &first_move(&two_four, MoveKind::ThreeThree)).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut failed = Vec::new();
    for (name, d) in fixtures() {
        let budget = if name == "Fibonacci" { PACHNER_FIB_SECONDS } else { PACHNER_SECONDS };
        let start = Instant::now();
        let mut values = Vec::new();
        for t in [&t0, &sub, &two_four, &three_three] {
            let left = budget - start.elapsed().as_secs_f64();
            match run(t, &d, left.max(1.0)) {
                Ok(z) => values.push(z),
                Err(e) => {
                    failed.push(format!("{name}: {e}"));
                    break;
                }
            }
        }
        let secs = start.elapsed().as_secs_f64();
        if values.len() < 4 {
            continue;
        }
        let drift = values.iter().map(|z| (z - values[0]).norm()).fold(0.0, f64::max);
        if drift >= PACHNER_TOL || secs >= budget {
            failed.push(format!("{name}: drift {drift:.1e}, {secs:.1} s"));
        } else {
            parts.push(format!("{name} {:.6} ({drift:.0e}, {secs:.1} s)", values[0].re));
        }
    }
    if failed.is_empty() {
        Ok(parts.join(", "))
    } else {
        Err(failed.join("; "))
    }
}

fn criterion5() -> Outcome {
    let t = boundary_5simplex();
    let mut parts = Vec::new();
    for (name, d) in fixtures() {
        let base = run(&t, &d, 600.0)?;
        let mut worst = 0.0f64;
        for seed in 0..ORDER_SEEDS {
            let mut perm: Vec<usize> = (0..t.vertex_count()).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let r = relabel(&t, &perm).map_err(|e| e.to_string())?;
            worst = worst.max((run(&r, &d, 600.0)? - base).norm());
        }
        if worst >= ORDER_TOL {
            return Err(format!("{name}: deviation {worst:.1e}"));
        }
        parts.push(format!("{name} {worst:.0e}"));
    }
    Ok(parts.join(", "))
}

fn criterion6() -> Outcome {
    let cfg = CheckConfig { tolerance: VALID_TOL, ..CheckConfig::default() };
    let fib = gcrossed_core::builders::fibonacci().map_err(|e| e.to_string())?;
    let pent = validate_pentagon(&fib, &cfg).max_residual;
    let hex = validate_braiding(&fib, &cfg).max_residual;
    let mut raw = to_raw(&fib);
    let tau = 1;
    let entry = raw.f.iter_mut().find(|(k, _)| *k == [tau; 6]).ok_or("no F(τ,τ,τ,τ;τ,τ) entry")?;
    entry.1 = -entry.1;
    let flipped = raw.build().map_err(|e| e.to_string())?;
    let bad = validate_pentagon(&flipped, &cfg).max_residual;
    if pent >= VALID_TOL || hex >= VALID_TOL || bad <= PERTURBED_MIN {
        return Err(format!("pentagon {pent:.1e}, hexagon {hex:.1e}, flipped {bad:.3}"));
    }
    Ok(format!("pentagon {pent:.1e}, hexagon {hex:.1e}, flipped entry gives {bad:.3}"))
}

fn criterion7() -> Outcome {
    let t = boundary_5simplex();
    for (name, d) in fixtures() {
        let plain = run(&t, &d, 600.0)?;
        let omega = CocycleData::trivial(d.group.clone());
        let twisted = partition_function_twisted(&t, &d, &omega, &RunConfig::default())
            .map_err(|e| e.to_string())?
            .value;
        if plain.re.to_bits() != twisted.re.to_bits() || plain.im.to_bits() != twisted.im.to_bits() {
            return Err(format!("{name}: trivial twist gives {twisted}, untwisted {plain}"));
        }
    }
    let g = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
    let d = trivial_grading(&vect(), &g).map_err(|e| e.to_string())?;
    let lambda = |a: usize, b: usize, c: usize| {
        if a == 0 || b == 0 || c == 0 {
            Scalar::new(1.0, 0.0)
        } else {
            Scalar::from_polar(1.0, 0.3 * (a + 3 * b + 5 * c) as f64)
        }
    };
    let omega = CocycleData::coboundary(g.clone(), lambda);
    if omega.is_trivial() {
        return Err("coboundary came out trivial".into());
    }
    let plain = run(&t, &d, 600.0)?;
    let twisted =
        partition_function_twisted(&t, &d, &omega, &RunConfig::default()).map_err(|e| e.to_string())?.value;
    let err = (twisted - plain).norm();
    if err >= TWIST_TOL {
        return Err(format!("coboundary twist gives {twisted}, untwisted {plain}"));
    }
    Ok(format!("bitwise equal on all fixtures; coboundary on Z2xZ2 differs by {err:.1e}"))
}

fn criterion8(hook_max: &Mutex<f64>, evaluated: &AtomicU64) -> Outcome {
    let worst = *hook_max.lock().unwrap();
    let n = evaluated.load(Ordering::Relaxed);
    if n == 0 || worst >= COLLAPSE_TOL {
        return Err(format!("{n} symbols, worst deviation {worst:.1e}"));
    }
    Ok(format!("{n} symbols evaluated, worst deviation from 1 is {worst:.1e}"))
}

fn main() {
    let hook_max = Arc::new(Mutex::new(0.0f64));
    let evaluated = Arc::new(AtomicU64::new(0));
    let criteria: Vec<Criterion> = vec![
        ("Dijkgraaf-Witten reduction", Box::new(criterion1)),
        (
            "Yetter reduction",
            Box::new({
                let (m, e) = (hook_max.clone(), evaluated.clone());
                move || criterion2(&m, &e)
            }),
        ),
        ("factorization", Box::new(criterion3)),
        ("Pachner invariance", Box::new(criterion4)),
        ("ordering invariance", Box::new(criterion5)),
        ("validator sensitivity", Box::new(criterion6)),
        ("twisted consistency", Box::new(criterion7)),
        (
            "25j collapse",
            Box::new({
                let (m, e) = (hook_max.clone(), evaluated.clone());
                move || criterion8(&m, &e)
            }),
        ),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{took:.1?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name}: {detail} [{took:.1?}]", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
