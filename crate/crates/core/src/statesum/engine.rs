//! Exact evaluation of the state sum by depth-first search over face colors.
//!
//! Variables are the colors of edges, triangles and tetrahedra. Vertices are ranked by
//! decreasing number of 4-simplices around them and faces are grouped by their last vertex
//! in that ranking, so the star of each vertex is summed in one block. Within a block each
//! triangle follows its last edge and each tetrahedron its last triangle.
//! Each variable only ever takes values allowed by the grading and by fusion admissibility,
//! and the 25j-symbol of a simplex is multiplied in as soon as all of its faces are colored.
//!
//! The value of the subtree below position `p` depends only on the colors of the earlier
//! variables that still appear in some simplex finishing at or after `p` (the frontier),
//! so subtree values are memoized on the frontier colors.

use super::local::{eval_25j, LocalColoring};
use super::{Hook, PartitionResult, RunConfig, SearchStats};
use crate::builders::CocycleData;
use crate::category::GbsfcData;
use crate::scalar::{CompensatedSum, Scalar, ONE, ZERO};
use crate::triangulation::OrderedTriangulation;
use crate::{Error, Result};
use dashmap::DashMap;
use itertools::iproduct;
use rayon::prelude::*;
use rustc_hash::{FxBuildHasher, FxHashMap};
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

/// Upper bound on memoized subtrees per search, to stay within memory.
const MEMO_CAP: usize = 12_000_000;

#[derive(Debug, Clone, Copy)]
enum Step {
    Edge,
    /// positions of edges `ij, jk, ik`
    Triangle([usize; 3]),
    /// positions of edges `ij, jk, kl, il` and triangles `ijk, ijl, ikl, jkl`
    Tet([usize; 4], [usize; 4]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Var {
    Edge(usize),
    Triangle(usize),
    Tet(usize),
}

struct Problem<'a> {
    data: &'a GbsfcData,
    omega: Option<&'a CocycleData>,
    steps: Vec<Step>,
    /// weight of each value of a variable: `d_f` for triangles, `1/d_t` for tetrahedra
    var_weight: Vec<Option<Vec<Scalar>>>,
    /// simplices whose last face is colored at each position
    completes: Vec<Vec<usize>>,
    /// tetrahedra whose last face is colored at each position
    checks: Vec<Vec<usize>>,
    /// positions of the 25 local faces (edges, triangles, tetrahedra) of each simplex
    simplex_pos: Vec<[usize; 25]>,
    signs: Vec<i8>,
    frontier: Vec<Vec<usize>>,
    key_bits: u32,
    elements: Vec<u32>,
    sectors: Vec<Vec<u32>>,
    /// admissible tetrahedron labels indexed by `(f_ijl, f_jkl, f_ikl, lowered f_ijk)`,
    /// when the label set is small enough to tabulate
    tet_domains: Option<Vec<Vec<u32>>>,
}

impl<'a> Problem<'a> {
    fn new(t: &OrderedTriangulation, data: &'a GbsfcData, omega: Option<&'a CocycleData>) -> Self {
        let order = vertex_block_order(t);
        let pos: HashMap<Var, usize> = order.iter().enumerate().map(|(p, &v)| (v, p)).collect();
        let n4 = t.top().len();

        let g = &data.group;
        let steps: Vec<Step> = order
            .iter()
            .map(|v| match *v {
                Var::Edge(_) => Step::Edge,
                Var::Triangle(f) => {
                    let [i, j, k] = t.triangles()[f];
                    let e = |a, b| pos[&Var::Edge(t.edge_index([a, b]).unwrap())];
                    Step::Triangle([e(i, j), e(j, k), e(i, k)])
                }
                Var::Tet(x) => {
                    let [i, j, k, l] = t.tets()[x];
                    let e = |a, b| pos[&Var::Edge(t.edge_index([a, b]).unwrap())];
                    let f = |a, b, c| pos[&Var::Triangle(t.triangle_index([a, b, c]).unwrap())];
                    Step::Tet(
                        [e(i, j), e(j, k), e(k, l), e(i, l)],
                        [f(i, j, k), f(i, j, l), f(i, k, l), f(j, k, l)],
                    )
                }
            })
            .collect();
        let dims: Vec<f64> = data.labels.qdim.clone();
        let tri_w: Vec<Scalar> = dims.iter().map(|&d| Scalar::new(d, 0.0)).collect();
        let tet_w: Vec<Scalar> = dims.iter().map(|&d| Scalar::new(1.0 / d, 0.0)).collect();
        let var_weight = order
            .iter()
            .map(|v| match v {
                Var::Edge(_) => None,
                Var::Triangle(_) => Some(tri_w.clone()),
                Var::Tet(_) => Some(tet_w.clone()),
            })
            .collect();

        let simplex_pos: Vec<[usize; 25]> = (0..n4)
            .map(|s| {
                let lf = t.local_faces(s);
                let mut p = [0; 25];
                for (i, &e) in lf.edges.iter().enumerate() {
                    p[i] = pos[&Var::Edge(e)];
                }
                for (i, &f) in lf.triangles.iter().enumerate() {
                    p[10 + i] = pos[&Var::Triangle(f)];
                }
                for (i, &x) in lf.tets.iter().enumerate() {
                    p[20 + i] = pos[&Var::Tet(x)];
                }
                p
            })
            .collect();
        let nvars = order.len();
        let mut completes = vec![Vec::new(); nvars];
        let mut last_use = vec![0usize; nvars];
        for (s, sp) in simplex_pos.iter().enumerate() {
            let last = *sp.iter().max().unwrap();
            completes[last].push(s);
            for &q in sp {
                last_use[q] = last_use[q].max(last);
            }
        }
        let mut checks = vec![Vec::new(); nvars];
        for (q, st) in steps.iter().enumerate() {
            if let Step::Tet(es, fs) = st {
                checks[*es.iter().chain(fs).max().unwrap()].push(q);
            }
        }
        let frontier = (0..nvars).map(|p| (0..p).filter(|&q| last_use[q] >= p).collect()).collect();
        let span = g.order().max(data.label_count()).max(2);
        let key_bits = usize::BITS - (span - 1).leading_zeros();
        Problem {
            data,
            omega,
            steps,
            var_weight,
            completes,
            checks,
            simplex_pos,
            signs: t.top().iter().map(|s| s.sign).collect(),
            frontier,
            key_bits,
            elements: (0..g.order() as u32).collect(),
            sectors: g.elements().map(|x| data.sector(x).iter().map(|&a| a as u32).collect()).collect(),
            tet_domains: tet_domain_table(data),
        }
    }

    fn tet_index(&self, ijl: usize, jkl: usize, ikl: usize, lower: usize) -> usize {
        let n = self.data.label_count();
        ((ijl * n + jkl) * n + ikl) * n + lower
    }

    fn len(&self) -> usize {
        self.steps.len()
    }

    fn key(&self, p: usize, vals: &[u32]) -> Key {
        let fr = &self.frontier[p];
        if fr.len() as u32 * self.key_bits <= 128 {
            Key::Packed(fr.iter().fold(0u128, |acc, &q| (acc << self.key_bits) | vals[q] as u128))
        } else {
            Key::Wide(fr.iter().map(|&q| vals[q]).collect())
        }
    }
}

const TET_TABLE_CAP: usize = 1 << 22;

fn tet_domain_table(data: &GbsfcData) -> Option<Vec<Vec<u32>>> {
    let n = data.label_count();
    if n.pow(4) > TET_TABLE_CAP {
        return None;
    }
    let fu = &data.fusion;
    let table = iproduct!(0..n, 0..n, 0..n, 0..n)
        .map(|(ijl, jkl, ikl, lower)| {
            fu.products(ijl, jkl)
                .iter()
                .filter(|&&x| fu.admissible(ikl, lower, x))
                .map(|&x| x as u32)
                .collect()
        })
        .collect();
    Some(table)
}

/// Faces grouped by the last of their vertices, with vertices ranked by decreasing degree.
fn vertex_block_order(t: &OrderedTriangulation) -> Vec<Var> {
    let n = t.vertex_count();
    let mut degree = vec![0usize; n];
    for s in t.top() {
        for &v in &s.vertices {
            degree[v] += 1;
        }
    }
    let mut ranked: Vec<usize> = (0..n).collect();
    ranked.sort_by_key(|&v| std::cmp::Reverse(degree[v]));
    let mut rank = vec![0; n];
    for (r, &v) in ranked.iter().enumerate() {
        rank[v] = r;
    }
    let key = |vs: &[usize]| {
        let mut r: Vec<usize> = vs.iter().map(|&v| rank[v]).collect();
        r.sort_unstable_by(|a, b| b.cmp(a));
        r
    };
    let edges = t.edges().iter().enumerate().map(|(e, vs)| (key(vs), Var::Edge(e)));
    let tris = t.triangles().iter().enumerate().map(|(f, vs)| (key(vs), Var::Triangle(f)));
    let tets = t.tets().iter().enumerate().map(|(x, vs)| (key(vs), Var::Tet(x)));
    let mut vars: Vec<(Vec<usize>, Var)> = edges.chain(tris).chain(tets).collect();
    // descending rank tuples compare so that faces follow their own faces
    vars.sort_by(|a, b| a.0.cmp(&b.0));
    vars.into_iter().map(|(_, v)| v).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Packed(u128),
    Wide(Box<[u32]>),
}

/// Aggregate of a subtree: its value and leaf statistics.
#[derive(Debug, Clone, Copy)]
struct Acc {
    value: Scalar,
    colorings: u128,
    terms: u128,
    /// largest squared modulus of a single term
    max_sq: f64,
}

impl Acc {
    const LEAF: Acc = Acc { value: ONE, colorings: 1, terms: 1, max_sq: 1.0 };
    const EMPTY: Acc = Acc { value: ZERO, colorings: 0, terms: 0, max_sq: 0.0 };

    fn scaled(self, w: Scalar) -> Acc {
        if w == ZERO {
            Acc { value: ZERO, terms: 0, max_sq: 0.0, ..self }
        } else {
            Acc { value: w * self.value, max_sq: w.norm_sqr() * self.max_sq, ..self }
        }
    }
}

/// Subtree sums are plain: each node adds only a few terms and the depth is small.
#[derive(Default)]
struct AccSum {
    value: Scalar,
    colorings: u128,
    terms: u128,
    max_sq: f64,
}

impl AccSum {
    fn add(&mut self, w: Scalar, sub: &Acc) {
        self.colorings += sub.colorings;
        if w != ZERO && sub.terms > 0 {
            self.value += w * sub.value;
            self.terms += sub.terms;
            self.max_sq = self.max_sq.max(w.norm_sqr() * sub.max_sq);
        }
    }

    fn finish(&self) -> Acc {
        Acc { value: self.value, colorings: self.colorings, terms: self.terms, max_sq: self.max_sq }
    }
}

/// Local coloring and orientation of a 4-simplex, one byte per face when values fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(super) enum ZKey {
    Narrow([u8; 26]),
    Wide([u16; 26]),
}

pub(super) type ZCache = DashMap<ZKey, Scalar, FxBuildHasher>;

struct Guard {
    start: Instant,
    max_nodes: Option<u64>,
    max_time: Option<Duration>,
    nodes: AtomicU64,
}

impl Guard {
    fn exceeded(&self, local_pending: u64, partial: Scalar) -> Result<()> {
        let nodes = self.nodes.fetch_add(local_pending, Ordering::Relaxed) + local_pending;
        let elapsed = self.start.elapsed();
        let limit = if self.max_nodes.is_some_and(|m| nodes > m) {
            "node"
        } else if self.max_time.is_some_and(|m| elapsed > m) {
            "time"
        } else {
            return Ok(());
        };
        Err(Error::GuardExceeded {
            limit,
            nodes,
            elapsed_ms: elapsed.as_millis(),
            partial_re: partial.re,
            partial_im: partial.im,
        })
    }
}

struct Search<'p, 'a> {
    prob: &'p Problem<'a>,
    vals: Vec<u32>,
    memo: Vec<Memo>,
    memo_len: usize,
    bufs: Vec<Vec<u32>>,
    zcache: &'p ZCache,
    local_z: FxHashMap<ZKey, Scalar>,
    hook: Option<&'p Hook>,
    guard: &'p Guard,
    stats: SearchStats,
    pending_nodes: u64,
    /// depth at which this search starts; completed branches there feed `partial`
    root: usize,
    partial: CompensatedSum,
}

impl<'p, 'a> Search<'p, 'a> {
    fn new(prob: &'p Problem<'a>, zcache: &'p ZCache, hook: Option<&'p Hook>, guard: &'p Guard) -> Self {
        let n = prob.len();
        Self {
            prob,
            vals: vec![0; n],
            memo: (0..n).map(|_| Memo::default()).collect(),
            memo_len: 0,
            bufs: vec![Vec::new(); n],
            zcache,
            local_z: FxHashMap::default(),
            hook,
            guard,
            stats: SearchStats::default(),
            pending_nodes: 0,
            root: 0,
            partial: CompensatedSum::new(),
        }
    }

    /// Whether the tetrahedron at position `q` has some admissible label.
    fn tet_feasible(&self, q: usize) -> bool {
        let prob = self.prob;
        let data = prob.data;
        let g = &data.group;
        let v = |r: usize| self.vals[r] as usize;
        let Step::Tet([_, _, kl, _], [ijk, ijl, ikl, jkl]) = prob.steps[q] else { return true };
        let lower = data.action.act(g.inv(v(kl)), v(ijk));
        match &prob.tet_domains {
            Some(table) => !table[prob.tet_index(v(ijl), v(jkl), v(ikl), lower)].is_empty(),
            None => {
                data.fusion.products(v(ijl), v(jkl)).iter().any(|&x| data.fusion.admissible(v(ikl), lower, x))
            }
        }
    }

    /// Values allowed at position `p` given the earlier ones.
    fn domain(&mut self, p: usize) -> Domain<'p> {
        let prob = self.prob;
        let data = prob.data;
        let g = &data.group;
        let v = |q: usize| self.vals[q] as usize;
        match prob.steps[p] {
            Step::Edge => Domain::Shared(&prob.elements),
            Step::Triangle([ij, jk, ik]) => {
                Domain::Shared(&prob.sectors[g.mul(g.inv(v(ik)), g.mul(v(ij), v(jk)))])
            }
            Step::Tet([_, _, kl, _], [ijk, ijl, ikl, jkl]) => {
                let lower = data.action.act(g.inv(v(kl)), v(ijk));
                match &prob.tet_domains {
                    Some(table) => Domain::Shared(&table[prob.tet_index(v(ijl), v(jkl), v(ikl), lower)]),
                    None => {
                        let (a, b, c) = (v(ijl), v(jkl), v(ikl));
                        let mut out = std::mem::take(&mut self.bufs[p]);
                        out.clear();
                        out.extend(
                            data.fusion
                                .products(a, b)
                                .iter()
                                .filter(|&&x| data.fusion.admissible(c, lower, x))
                                .map(|&x| x as u32),
                        );
                        Domain::Scratch(out)
                    }
                }
            }
        }
    }

    fn zhat(&mut self, s: usize) -> Result<Scalar> {
        let sp = &self.prob.simplex_pos[s];
        let sign = self.prob.signs[s];
        let key = if self.prob.key_bits <= 8 {
            let mut k = [0u8; 26];
            for (slot, &q) in k.iter_mut().zip(sp) {
                *slot = self.vals[q] as u8;
            }
            k[25] = (sign > 0) as u8;
            ZKey::Narrow(k)
        } else {
            let mut k = [0u16; 26];
            for (slot, &q) in k.iter_mut().zip(sp) {
                *slot = self.vals[q] as u16;
            }
            k[25] = (sign > 0) as u16;
            ZKey::Wide(k)
        };
        if let Some(&z) = self.local_z.get(&key) {
            return Ok(z);
        }
        let z = match self.zcache.get(&key).map(|z| *z) {
            Some(z) => z,
            None => {
                let v = |k: usize| self.vals[sp[k]] as usize;
                let c = LocalColoring {
                    g: std::array::from_fn(v),
                    f: std::array::from_fn(|k| v(10 + k)),
                    t: std::array::from_fn(|k| v(20 + k)),
                };
                let z = eval_25j(&c, sign, self.prob.data)?;
                if let Some(h) = self.hook {
                    h(&c, sign, z);
                }
                self.zcache.insert(key, z);
                z
            }
        };
        self.local_z.insert(key, z);
        Ok(z)
    }

    /// Weight contributed by assigning the current value at position `p`.
    fn weight(&mut self, p: usize) -> Result<Scalar> {
        let mut w = match &self.prob.var_weight[p] {
            Some(ws) => ws[self.vals[p] as usize],
            None => ONE,
        };
        for i in 0..self.prob.completes[p].len() {
            let s = self.prob.completes[p][i];
            let z = self.zhat(s)?;
            self.stats.simplex_factors += 1;
            w *= z;
            if let Some(om) = self.prob.omega {
                let sp = &self.prob.simplex_pos[s];
                // local edges 01, 12, 23, 34 sit in slots 0, 4, 7, 9
                let g = |slot: usize| self.vals[sp[slot]] as usize;
                let o = om.omega(g(0), g(4), g(7), g(9));
                if o != ONE {
                    w = if self.prob.signs[s] > 0 { w * o } else { w / o };
                }
            }
        }
        Ok(w)
    }

    fn tick(&mut self) -> Result<()> {
        self.pending_nodes += 1;
        if self.pending_nodes >= 4096 {
            let n = std::mem::take(&mut self.pending_nodes);
            self.guard.exceeded(n, self.partial.value())?;
        }
        Ok(())
    }

    fn release(&mut self, p: usize, dom: Domain<'p>) {
        if let Domain::Scratch(buf) = dom {
            self.bufs[p] = buf;
        }
    }

    /// Walks through positions that admit a single value and keep no memo, then
    /// continues the search.
    fn descend(&mut self, mut q: usize) -> Result<Acc> {
        let mut w = ONE;
        while q < self.prob.len() && !self.memo[q].enabled {
            let dom = self.domain(q);
            let forced = match dom.values() {
                &[x] => Some(x),
                _ => None,
            };
            self.release(q, dom);
            let Some(x) = forced else { break };
            self.vals[q] = x;
            self.tick()?;
            self.stats.nodes += 1;
            if !self.prob.checks[q].iter().all(|&c| self.tet_feasible(c)) {
                self.stats.pruned += 1;
                return Ok(Acc::EMPTY);
            }
            w *= self.weight(q)?;
            q += 1;
        }
        Ok(self.dfs(q)?.scaled(w))
    }

    fn dfs(&mut self, p: usize) -> Result<Acc> {
        if p == self.prob.len() {
            return Ok(Acc::LEAF);
        }
        let dom = self.domain(p);
        if dom.values().is_empty() {
            self.stats.pruned += 1;
            self.release(p, dom);
            return Ok(Acc::EMPTY);
        }
        let key = self.memo[p].enabled.then(|| self.prob.key(p, &self.vals));
        if let Some(a) = key.as_ref().and_then(|k| self.memo[p].table.get(k).copied()) {
            self.stats.cache_hits += 1;
            self.memo[p].hits += 1;
            self.release(p, dom);
            return Ok(a);
        }
        self.tick()?;
        self.stats.nodes += 1;
        let mut acc = AccSum::default();
        let checks = &self.prob.checks[p];
        for &x in dom.values() {
            self.vals[p] = x;
            if !checks.iter().all(|&q| self.tet_feasible(q)) {
                self.stats.pruned += 1;
                continue;
            }
            let w = self.weight(p)?;
            let sub = self.descend(p + 1)?;
            acc.add(w, &sub);
            if p == self.root && w != ZERO {
                self.partial.add(w * sub.value);
            }
        }
        self.release(p, dom);
        let acc = acc.finish();
        if let Some(k) = key {
            if self.memo_len < MEMO_CAP {
                self.memo_len += 1;
                self.memo[p].insert(k, acc);
            }
        }
        Ok(acc)
    }
}

/// Subtree values at one position. Positions whose entries are rarely reused stop
/// recording.
struct Memo {
    table: FxHashMap<Key, Acc>,
    hits: u64,
    enabled: bool,
}

impl Default for Memo {
    fn default() -> Self {
        Self { table: FxHashMap::default(), hits: 0, enabled: true }
    }
}

impl Memo {
    const PROBATION: usize = 1 << 14;

    fn insert(&mut self, k: Key, a: Acc) {
        self.table.insert(k, a);
        let n = self.table.len();
        if n >= Self::PROBATION && n.is_power_of_two() && self.hits * 4 < n as u64 {
            self.enabled = false;
            self.table = FxHashMap::default();
        }
    }
}

enum Domain<'p> {
    Shared(&'p [u32]),
    Scratch(Vec<u32>),
}

impl Domain<'_> {
    fn values(&self) -> &[u32] {
        match self {
            Domain::Shared(s) => s,
            Domain::Scratch(v) => v,
        }
    }
}

struct Prefix {
    vals: Vec<u32>,
    weight: Scalar,
}

/// Enumerates weighted prefixes breadth-first until there are at least `target` of them.
fn split(search: &mut Search, target: usize) -> Result<(usize, Vec<Prefix>)> {
    let mut level = vec![Prefix { vals: Vec::new(), weight: ONE }];
    let mut depth = 0;
    while level.len() < target && depth < search.prob.len() {
        let mut next = Vec::new();
        for pre in &level {
            search.vals[..depth].copy_from_slice(&pre.vals);
            let dom = search.domain(depth);
            for &x in dom.values() {
                search.vals[depth] = x;
                let w = search.weight(depth)?;
                let mut vals = pre.vals.clone();
                vals.push(x);
                next.push(Prefix { vals, weight: pre.weight * w });
            }
            search.release(depth, dom);
        }
        level = next;
        depth += 1;
    }
    Ok((depth, level))
}

pub(super) fn run(
    t: &OrderedTriangulation,
    data: &GbsfcData,
    omega: Option<&CocycleData>,
    cfg: &RunConfig,
) -> Result<PartitionResult> {
    let start = Instant::now();
    let prob = Problem::new(t, data, omega);
    let zcache = ZCache::with_hasher(FxBuildHasher);
    let guard = Guard {
        start,
        max_nodes: cfg.max_nodes,
        max_time: cfg.max_seconds.map(Duration::from_secs_f64),
        nodes: AtomicU64::new(0),
    };
    let hook = cfg.hook.as_ref();

    let (acc, stats) = if cfg.workers <= 1 {
        let mut s = Search::new(&prob, &zcache, hook, &guard);
        let acc = s.dfs(0)?;
        (acc, s.stats)
    } else {
        let mut s = Search::new(&prob, &zcache, hook, &guard);
        let (depth, prefixes) = split(&mut s, 4 * cfg.workers)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
        let parts: Vec<Result<(Acc, SearchStats)>> = pool.install(|| {
            prefixes
                .par_iter()
                .map(|pre| {
                    let mut w = Search::new(&prob, &zcache, hook, &guard);
                    w.vals[..depth].copy_from_slice(&pre.vals);
                    w.root = depth;
                    let a = w.dfs(depth)?;
                    Ok((a, w.stats))
                })
                .collect()
        });
        let mut total = AccSum::default();
        let mut stats = s.stats;
        for (pre, part) in prefixes.iter().zip(parts) {
            let (a, st) = part?;
            total.add(pre.weight, &a);
            stats.merge(&st);
        }
        (total.finish(), stats)
    };

    let d2 = data.total_dim_sq;
    let [v, e, ..] = t.face_counts();
    let norm = (d2 / data.group.order() as f64).powi(v as i32) * d2.powi(-(e as i32));
    let value = acc.value * norm;
    if !value.is_finite() {
        return Err(Error::Invalid(format!("state sum is not finite: {value}")));
    }
    let mut stats = stats;
    stats.distinct_25j = zcache.len() as u64;
    Ok(PartitionResult {
        value,
        colorings: acc.colorings,
        terms: acc.terms,
        max_term_magnitude: acc.max_sq.sqrt() * norm.abs(),
        elapsed: start.elapsed(),
        stats,
    })
}
