use crate::{Command, Common};
use anyhow::{anyhow, Context, Result};
use gcrossed_core::builders::{validate_cocycle, validate_crossed_module, CocycleData};
use gcrossed_core::category::validate_all;
use gcrossed_core::format::{
    category_from_json, cocycle_from_json, crossed_module_from_json, document_kind, result_document,
    triangulation_from_json, DocumentKind,
};
use gcrossed_core::group::validate_group;
use gcrossed_core::statesum::{count_admissible_crossed, dw_invariant, rational_to_f64};
use gcrossed_core::triangulation::{apply_pachner, boundary_5simplex, find_moves, relabel, MoveKind};
use gcrossed_core::{
    partition_function, partition_function_twisted, CheckConfig, Error, FiniteGroup, GbsfcData,
    OrderedTriangulation, PartitionResult, RunConfig, Scalar, ValidationReport,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_INVALID: u8 = 3;
pub const EXIT_GUARD: u8 = 4;
pub const EXIT_INVARIANCE: u8 = 5;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse(_) | Error::Io(_)) => EXIT_PARSE,
        Some(
            Error::Structural(_)
            | Error::Incomplete { .. }
            | Error::SingularBlock(_)
            | Error::Invalid(_)
            | Error::Triangulation(_),
        ) => EXIT_INVALID,
        Some(Error::GuardExceeded { .. }) => EXIT_GUARD,
        _ => EXIT_OTHER,
    }
}

pub fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Validate { files, opts } => validate(&files, &opts),
        Command::Compute { category, triangulation, cocycle, opts } => {
            compute(&category, triangulation.as_deref(), cocycle.as_deref(), &opts)
        }
        Command::Invariance { category, triangulation, permutations, second, max_moves, opts } => {
            invariance(&category, triangulation.as_deref(), permutations, second, max_moves, &opts)
        }
        Command::Dw { group, triangulation, opts } => dw(&group, triangulation.as_deref(), &opts),
        Command::YetterCount { crossed_module, triangulation, opts } => {
            yetter_count(&crossed_module, triangulation.as_deref(), &opts)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(Error::from).with_context(|| format!("reading {}", path.display()))
}

fn load_triangulation(path: Option<&Path>) -> Result<OrderedTriangulation> {
    match path {
        None => Ok(boundary_5simplex()),
        Some(p) => triangulation_from_json(&read(p)?).with_context(|| format!("loading {}", p.display())),
    }
}

fn check_config(opts: &Common) -> CheckConfig {
    CheckConfig { tolerance: opts.tolerance, ..CheckConfig::default() }
}

fn run_config(opts: &Common) -> RunConfig {
    RunConfig {
        tolerance: opts.tolerance,
        workers: opts.workers,
        max_nodes: opts.max_colorings,
        max_seconds: opts.max_seconds,
        ..RunConfig::default()
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn describe(rep: &ValidationReport, out: &mut dyn Write) {
    let verdict = if rep.is_ok() { "ok" } else { "FAILED" };
    let _ = writeln!(
        out,
        "  {:<20} {verdict:<6} {} checks, max residual {:.3e}",
        rep.name, rep.checked, rep.max_residual
    );
    for v in &rep.violations {
        let _ = writeln!(out, "    {} at {}: residual {:.3e}", v.check, v.at, v.residual);
    }
    if rep.suppressed > 0 {
        let _ = writeln!(out, "    ... {} more", rep.suppressed);
    }
}

#[derive(Serialize)]
struct FileReport {
    path: PathBuf,
    kind: String,
    ok: bool,
    reports: Vec<ValidationReport>,
    error: Option<String>,
}

fn validate_file(path: &Path, cfg: &CheckConfig) -> Result<(String, Vec<ValidationReport>)> {
    let text = read(path)?;
    let kind = document_kind(&text)?;
    let reports = match kind {
        DocumentKind::Category => validate_all(&category_from_json(&text)?, cfg),
        DocumentKind::CrossedModule => vec![validate_crossed_module(&crossed_module_from_json(&text)?, cfg)],
        DocumentKind::Cocycle => {
            let c = cocycle_from_json(&text)?;
            vec![validate_group(&c.group, cfg), validate_cocycle(&c, cfg)]
        }
        DocumentKind::Triangulation => {
            triangulation_from_json(&text)?;
            Vec::new()
        }
        DocumentKind::Result => {
            return Err(anyhow!("{}: result documents are not validated", path.display()))
        }
    };
    let name = match kind {
        DocumentKind::Category => "category",
        DocumentKind::CrossedModule => "crossed-module",
        DocumentKind::Cocycle => "cocycle",
        DocumentKind::Triangulation => "triangulation",
        DocumentKind::Result => "result",
    };
    Ok((name.to_string(), reports))
}

fn validate(files: &[PathBuf], opts: &Common) -> Result<ExitCode> {
    let cfg = check_config(opts);
    let mut out = Vec::new();
    let mut worst = 0;
    for path in files {
        let entry = match validate_file(path, &cfg) {
            Ok((kind, reports)) => {
                let ok = reports.iter().all(ValidationReport::is_ok);
                if !ok {
                    worst = worst.max(EXIT_INVALID);
                }
                FileReport { path: path.clone(), kind, ok, reports, error: None }
            }
            Err(e) => {
                worst = worst.max(exit_code(&e));
                FileReport {
                    path: path.clone(),
                    kind: "unknown".into(),
                    ok: false,
                    reports: Vec::new(),
                    error: Some(format!("{e:#}")),
                }
            }
        };
        if !opts.json {
            println!("{} ({}): {}", entry.path.display(), entry.kind, if entry.ok { "ok" } else { "FAILED" });
            if let Some(e) = &entry.error {
                println!("  {e}");
            }
            entry.reports.iter().for_each(|r| describe(r, &mut io::stdout()));
        }
        out.push(entry);
    }
    if opts.json {
        print_json(&out)?;
    }
    Ok(ExitCode::from(worst))
}

/// Loads a category and refuses it unless every validator passes.
fn load_category(path: &Path, opts: &Common) -> Result<GbsfcData> {
    let data = category_from_json(&read(path)?).with_context(|| format!("loading {}", path.display()))?;
    let failed: Vec<ValidationReport> =
        validate_all(&data, &check_config(opts)).into_iter().filter(|r| !r.is_ok()).collect();
    if !failed.is_empty() {
        failed.iter().for_each(|r| describe(r, &mut io::stderr()));
        return Err(
            Error::Invalid(format!("{} does not satisfy its coherence equations", path.display())).into()
        );
    }
    Ok(data)
}

fn load_cocycle(path: &Path, opts: &Common) -> Result<CocycleData> {
    let c = cocycle_from_json(&read(path)?).with_context(|| format!("loading {}", path.display()))?;
    let rep = validate_cocycle(&c, &check_config(opts));
    if !rep.is_ok() {
        describe(&rep, &mut io::stderr());
        return Err(Error::Invalid(format!("{} is not a normalized 4-cocycle", path.display())).into());
    }
    Ok(c)
}

fn evaluate(
    t: &OrderedTriangulation,
    data: &GbsfcData,
    omega: Option<&CocycleData>,
    opts: &Common,
) -> Result<PartitionResult> {
    let cfg = run_config(opts);
    Ok(match omega {
        Some(c) => partition_function_twisted(t, data, c, &cfg)?,
        None => partition_function(t, data, &cfg)?,
    })
}

fn compute(
    category: &Path,
    triangulation: Option<&Path>,
    cocycle: Option<&Path>,
    opts: &Common,
) -> Result<ExitCode> {
    let data = load_category(category, opts)?;
    let t = load_triangulation(triangulation)?;
    let omega = cocycle.map(|p| load_cocycle(p, opts)).transpose()?;
    let r = evaluate(&t, &data, omega.as_ref(), opts)?;
    if opts.json {
        print_json(&result_document(&r, &data, &t))?;
    } else {
        println!("Z = {:.12}{:+.12}i", r.value.re, r.value.im);
        println!("colorings  {}", r.colorings);
        println!("terms      {}", r.terms);
        println!("max |term| {:.3e}", r.max_term_magnitude);
        println!(
            "nodes      {} ({} memo hits, {} pruned)",
            r.stats.nodes, r.stats.cache_hits, r.stats.pruned
        );
        println!("25j        {} distinct", r.stats.distinct_25j);
        println!("elapsed    {:.3?}", r.elapsed);
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct InvarianceCase {
    test: String,
    re: f64,
    im: f64,
    deviation: f64,
    ok: bool,
}

#[derive(Serialize)]
struct InvarianceReport {
    base_re: f64,
    base_im: f64,
    tolerance: f64,
    seed: u64,
    cases: Vec<InvarianceCase>,
    ok: bool,
}

fn invariance(
    category: &Path,
    triangulation: Option<&Path>,
    permutations: usize,
    second: bool,
    max_moves: Option<usize>,
    opts: &Common,
) -> Result<ExitCode> {
    let seed = opts.seed.ok_or_else(|| Error::Precondition("invariance needs --seed".into()))?;
    let data = load_category(category, opts)?;
    let t = load_triangulation(triangulation)?;
    let base = evaluate(&t, &data, None, opts)?.value;
    let mut cases = Vec::new();
    let mut record = |test: String, z: Scalar| {
        let deviation = (z - base).norm();
        let case = InvarianceCase { test, re: z.re, im: z.im, deviation, ok: deviation < opts.tolerance };
        if !opts.json {
            let verdict = if case.ok { "ok" } else { "FAILED" };
            println!("{:<40} Z = {:.12}{:+.12}i  |dZ| = {:.2e}  {verdict}", case.test, z.re, z.im, deviation);
        }
        cases.push(case);
    };
    if !opts.json {
        println!("{:<40} Z = {:.12}{:+.12}i", "base", base.re, base.im);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..permutations {
        let mut perm: Vec<usize> = (0..t.vertex_count()).collect();
        perm.shuffle(&mut rng);
        let r = relabel(&t, &perm)?;
        record(format!("permutation {i} {perm:?}"), evaluate(&r, &data, None, opts)?.value);
    }

    let limit = max_moves.unwrap_or(usize::MAX);
    let mut done = 0;
    'outer: for mv in find_moves(&t) {
        if done == limit {
            break;
        }
        let after = apply_pachner(&t, &mv)?;
        record(mv.to_string(), evaluate(&after, &data, None, opts)?.value);
        done += 1;
        if !second {
            continue;
        }
        for next in find_moves(&after).into_iter().filter(|m| m.kind != MoveKind::OneFive) {
            if done == limit {
                break 'outer;
            }
            let twice = apply_pachner(&after, &next)?;
            record(format!("{mv}, then {next}"), evaluate(&twice, &data, None, opts)?.value);
            done += 1;
        }
    }

    let ok = cases.iter().all(|c| c.ok);
    if opts.json {
        print_json(&InvarianceReport {
            base_re: base.re,
            base_im: base.im,
            tolerance: opts.tolerance,
            seed,
            cases,
            ok,
        })?;
    } else {
        println!("{}", if ok { "all invariance checks passed" } else { "invariance check FAILED" });
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INVARIANCE) })
}

/// Parses `Z<n>`, `S<n>` and products such as `Z2xZ2`.
fn parse_group(spec: &str) -> Result<FiniteGroup> {
    let mut group = FiniteGroup::trivial();
    for factor in spec.split(['x', '*']) {
        let factor = factor.trim();
        let (kind, n) = factor.split_at(factor.len().min(1));
        let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad group factor {factor:?}")))?;
        let g = match kind {
            "Z" | "C" if n >= 1 => FiniteGroup::cyclic(n),
            "S" if (1..=5).contains(&n) => FiniteGroup::symmetric(n),
            _ => return Err(Error::Parse(format!("bad group factor {factor:?}; use Z<n> or S<n>")).into()),
        };
        group = group.product(&g);
    }
    Ok(group)
}

#[derive(Serialize)]
struct ExactReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<String>,
    value: String,
    value_f64: f64,
}

fn dw(group: &str, triangulation: Option<&Path>, opts: &Common) -> Result<ExitCode> {
    let g = parse_group(group)?;
    let t = load_triangulation(triangulation)?;
    let v = dw_invariant(&t, &g);
    let report = ExactReport { count: None, value: v.to_string(), value_f64: rational_to_f64(&v) };
    if opts.json {
        print_json(&report)?;
    } else {
        println!("DW = {} = {:.12}", report.value, report.value_f64);
    }
    Ok(ExitCode::SUCCESS)
}

fn yetter_count(path: &Path, triangulation: Option<&Path>, opts: &Common) -> Result<ExitCode> {
    let cm = crossed_module_from_json(&read(path)?).with_context(|| format!("loading {}", path.display()))?;
    let t = load_triangulation(triangulation)?;
    let c = count_admissible_crossed(&t, &cm)?;
    let report = ExactReport {
        count: Some(c.count.to_string()),
        value: c.value.to_string(),
        value_f64: rational_to_f64(&c.value),
    };
    if opts.json {
        print_json(&report)?;
    } else {
        println!("admissible colorings {}", c.count);
        println!("Z = {} = {:.12}", report.value, report.value_f64);
    }
    Ok(ExitCode::SUCCESS)
}
