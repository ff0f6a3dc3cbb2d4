//! Colorings, 25j-symbols and the partition functions.

mod count;
mod engine;
mod local;

pub use count::{
    count_admissible_crossed, count_extended_colorings, dw_invariant, enumerate_colorings, rational_to_f64,
    CrossedCount, ExtendedColoring,
};
pub use local::{eval_25j, LocalColoring};

use crate::builders::CocycleData;
use crate::category::GbsfcData;
use crate::report::{DEFAULT_REPORT_CAP, DEFAULT_TOLERANCE};
use crate::scalar::Scalar;
use crate::triangulation::OrderedTriangulation;
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;
use std::time::Duration;

/// Observer called with every freshly evaluated 25j-symbol.
pub type Hook = Arc<dyn Fn(&LocalColoring, i8, Scalar) + Send + Sync>;

#[derive(Clone)]
pub struct RunConfig {
    pub tolerance: f64,
    pub workers: usize,
    /// Abort after this many search nodes.
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
    pub report_cap: usize,
    pub hook: Option<Hook>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            workers: 1,
            max_nodes: None,
            max_seconds: None,
            report_cap: DEFAULT_REPORT_CAP,
            hook: None,
        }
    }
}

impl fmt::Debug for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RunConfig")
            .field("tolerance", &self.tolerance)
            .field("workers", &self.workers)
            .field("max_nodes", &self.max_nodes)
            .field("max_seconds", &self.max_seconds)
            .field("report_cap", &self.report_cap)
            .field("hook", &self.hook.is_some())
            .finish()
    }
}

impl RunConfig {
    pub fn check(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Precondition(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.workers == 0 {
            return Err(Error::Precondition("at least one worker is needed".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Search nodes expanded (memo hits excluded).
    pub nodes: u64,
    pub cache_hits: u64,
    /// Partial colorings with no admissible value for the next face.
    pub pruned: u64,
    /// 25j factors multiplied in, cached or not.
    pub simplex_factors: u64,
    pub distinct_25j: u64,
}

impl SearchStats {
    fn merge(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.cache_hits += o.cache_hits;
        self.pruned += o.pruned;
        self.simplex_factors += o.simplex_factors;
    }
}

#[derive(Debug, Clone)]
pub struct PartitionResult {
    pub value: Scalar,
    /// Extended colorings that are admissible at every tetrahedron.
    pub colorings: u128,
    /// Those among them whose product of weights is nonzero.
    pub terms: u128,
    pub max_term_magnitude: f64,
    pub elapsed: Duration,
    pub stats: SearchStats,
}

/// The state sum
/// `Σ (D²/|G|)^{|T⁰|} (D²)^{-|T¹|} Π_f d_f Π_t d_t⁻¹ Π_σ Ẑ^{ε(σ)}(σ)`
/// over extended colorings.
pub fn partition_function(
    t: &OrderedTriangulation,
    data: &GbsfcData,
    cfg: &RunConfig,
) -> Result<PartitionResult> {
    cfg.check()?;
    engine::run(t, data, None, cfg)
}

/// The state sum with an extra factor `ω(g01,g12,g23,g34)^{ε(σ)}` per 4-simplex.
/// Requires every label to sit in the identity sector.
pub fn partition_function_twisted(
    t: &OrderedTriangulation,
    data: &GbsfcData,
    omega: &CocycleData,
    cfg: &RunConfig,
) -> Result<PartitionResult> {
    cfg.check()?;
    if !data.is_trivially_graded() {
        return Err(Error::Precondition("twisted state sum needs trivially graded data".into()));
    }
    if omega.group != data.group {
        return Err(Error::Precondition("cocycle and category use different groups".into()));
    }
    engine::run(t, data, Some(omega), cfg)
}
