//! Versioned JSON documents for categories, crossed modules, cocycles, triangulations and
//! results. Every document carries a `schema` field; unknown schemas are rejected.

use crate::builders::{CocycleData, CrossedModule};
use crate::category::{GbsfcData, LabelSet, RawCategory};
use crate::group::FiniteGroup;
use crate::scalar::{parse_real, Scalar};
use crate::statesum::PartitionResult;
use crate::triangulation::OrderedTriangulation;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CATEGORY_SCHEMA: &str = "gcrossed.category.v1";
pub const CROSSED_MODULE_SCHEMA: &str = "gcrossed.crossed-module.v1";
pub const COCYCLE_SCHEMA: &str = "gcrossed.cocycle.v1";
pub const TRIANGULATION_SCHEMA: &str = "gcrossed.triangulation.v1";
pub const RESULT_SCHEMA: &str = "gcrossed.result.v1";

/// Which kind of document a JSON text holds, judged by its `schema` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Category,
    CrossedModule,
    Cocycle,
    Triangulation,
    Result,
}

pub fn document_kind(text: &str) -> Result<DocumentKind> {
    #[derive(Deserialize)]
    struct Probe {
        schema: Option<String>,
    }
    let probe: Probe = serde_json::from_str(text)?;
    let schema = probe.schema.ok_or_else(|| Error::Parse("missing \"schema\" field".into()))?;
    match schema.as_str() {
        CATEGORY_SCHEMA => Ok(DocumentKind::Category),
        CROSSED_MODULE_SCHEMA => Ok(DocumentKind::CrossedModule),
        COCYCLE_SCHEMA => Ok(DocumentKind::Cocycle),
        TRIANGULATION_SCHEMA => Ok(DocumentKind::Triangulation),
        RESULT_SCHEMA => Ok(DocumentKind::Result),
        other => Err(Error::Parse(format!("unknown schema {other:?}"))),
    }
}

fn expect_schema(found: &str, want: &str) -> Result<()> {
    if found == want {
        Ok(())
    } else {
        Err(Error::Parse(format!("expected schema {want:?}, found {found:?}")))
    }
}

/// A real number written either as a JSON number or as a string (`"3"`, `"1/2"`, `"0.5"`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Default for Number {
    fn default() -> Self {
        Number::Float(0.0)
    }
}

impl Number {
    fn value(&self) -> Result<f64> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Text(s) => parse_real(s).ok_or_else(|| Error::Parse(format!("not a number: {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Entry {
    indices: Vec<usize>,
    re: Number,
    #[serde(default)]
    im: Number,
}

impl Entry {
    fn new(indices: &[usize], v: Scalar) -> Self {
        Self { indices: indices.to_vec(), re: Number::Float(v.re), im: Number::Float(v.im) }
    }

    fn parse<const N: usize>(&self, what: &str) -> Result<([usize; N], Scalar)> {
        let idx: [usize; N] =
            self.indices.as_slice().try_into().map_err(|_| {
                Error::Parse(format!("{what} entry needs {N} indices, got {:?}", self.indices))
            })?;
        Ok((idx, Complex64::new(self.re.value()?, self.im.value()?)))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LabelDoc {
    name: String,
    grade: usize,
    dual: usize,
    qdim: Number,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CategoryDoc {
    schema: String,
    #[serde(default)]
    name: String,
    group: Vec<Vec<usize>>,
    #[serde(default)]
    unit: usize,
    labels: Vec<LabelDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action: Option<Vec<Vec<usize>>>,
    fusion: Vec<[usize; 3]>,
    #[serde(default, rename = "F")]
    f: Vec<Entry>,
    #[serde(default, rename = "U")]
    u: Vec<Entry>,
    #[serde(default)]
    eta: Vec<Entry>,
    #[serde(default, rename = "R")]
    r: Vec<Entry>,
}

/// Parses a category document into raw (unassembled) data.
pub fn raw_category_from_json(text: &str) -> Result<RawCategory> {
    let doc: CategoryDoc = serde_json::from_str(text)?;
    expect_schema(&doc.schema, CATEGORY_SCHEMA)?;
    let labels = LabelSet {
        names: doc.labels.iter().map(|l| l.name.clone()).collect(),
        unit: doc.unit,
        grade: doc.labels.iter().map(|l| l.grade).collect(),
        dual: doc.labels.iter().map(|l| l.dual).collect(),
        qdim: doc.labels.iter().map(|l| l.qdim.value()).collect::<Result<_>>()?,
    };
    Ok(RawCategory {
        name: doc.name,
        group: Some(FiniteGroup::from_table(doc.group)?),
        labels: Some(labels),
        action: doc.action,
        fusion: doc.fusion,
        f: doc.f.iter().map(|e| e.parse::<6>("F")).collect::<Result<_>>()?,
        u: doc.u.iter().map(|e| e.parse::<4>("U")).collect::<Result<_>>()?,
        eta: doc.eta.iter().map(|e| e.parse::<3>("eta")).collect::<Result<_>>()?,
        r: doc.r.iter().map(|e| e.parse::<3>("R")).collect::<Result<_>>()?,
    })
}

/// Parses and assembles a category document. Coherence is not checked here; run the
/// validators (or [`crate::builders::validated`]) on the result.
pub fn category_from_json(text: &str) -> Result<GbsfcData> {
    raw_category_from_json(text)?.build()
}

/// Raw data listing every symbol explicitly, suitable for editing and rebuilding.
pub fn to_raw(data: &GbsfcData) -> RawCategory {
    let triples: Vec<[usize; 3]> = data.fusion.triples().collect();
    let mut f = Vec::new();
    data.for_each_admissible_six(|idx| {
        let [a, b, c, d, x, m] = idx;
        f.push((idx, data.f.f(a, b, c, d, x, m)));
    });
    let g = &data.group;
    let mut u = Vec::new();
    for s in g.elements() {
        for &[a, b, c] in &triples {
            u.push(([s, a, b, c], data.action.u(s, a, b, c).expect("complete data")));
        }
    }
    let mut eta = Vec::new();
    for a in data.labels.labels() {
        for s in g.elements() {
            for t in g.elements() {
                eta.push(([a, s, t], data.action.eta(a, s, t)));
            }
        }
    }
    let r = triples.iter().map(|&[a, b, c]| ([a, b, c], data.r.r(a, b, c).expect("complete data"))).collect();
    RawCategory {
        name: data.name.clone(),
        group: Some(g.clone()),
        labels: Some(data.labels.clone()),
        action: Some(
            g.elements().map(|s| data.labels.labels().map(|a| data.action.act(s, a)).collect()).collect(),
        ),
        fusion: triples,
        f,
        u,
        eta,
        r,
    }
}

/// Serializes every symbol explicitly (no defaults are relied on).
pub fn category_to_json(data: &GbsfcData) -> String {
    let raw = to_raw(data);
    let labels = &data.labels;
    let doc = CategoryDoc {
        schema: CATEGORY_SCHEMA.into(),
        name: raw.name,
        group: data.group.table(),
        unit: labels.unit,
        labels: labels
            .labels()
            .map(|a| LabelDoc {
                name: labels.names[a].clone(),
                grade: labels.grade[a],
                dual: labels.dual[a],
                qdim: Number::Float(labels.qdim[a]),
            })
            .collect(),
        action: raw.action,
        fusion: raw.fusion,
        f: raw.f.iter().map(|(i, v)| Entry::new(i, *v)).collect(),
        u: raw.u.iter().map(|(i, v)| Entry::new(i, *v)).collect(),
        eta: raw.eta.iter().map(|(i, v)| Entry::new(i, *v)).collect(),
        r: raw.r.iter().map(|(i, v)| Entry::new(i, *v)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("category serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CrossedModuleDoc {
    schema: String,
    #[serde(rename = "H")]
    h: Vec<Vec<usize>>,
    #[serde(rename = "G")]
    g: Vec<Vec<usize>>,
    rho: Vec<usize>,
    phi: Vec<Vec<usize>>,
}

pub fn crossed_module_from_json(text: &str) -> Result<CrossedModule> {
    let doc: CrossedModuleDoc = serde_json::from_str(text)?;
    expect_schema(&doc.schema, CROSSED_MODULE_SCHEMA)?;
    Ok(CrossedModule {
        h: FiniteGroup::from_table(doc.h)?,
        g: FiniteGroup::from_table(doc.g)?,
        rho: doc.rho,
        phi: doc.phi,
    })
}

pub fn crossed_module_to_json(cm: &CrossedModule) -> String {
    let doc = CrossedModuleDoc {
        schema: CROSSED_MODULE_SCHEMA.into(),
        h: cm.h.table(),
        g: cm.g.table(),
        rho: cm.rho.clone(),
        phi: cm.phi.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("crossed module serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CocycleEntry {
    g1: usize,
    g2: usize,
    g3: usize,
    g4: usize,
    re: Number,
    #[serde(default)]
    im: Number,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CocycleDoc {
    schema: String,
    group: Vec<Vec<usize>>,
    #[serde(default)]
    entries: Vec<CocycleEntry>,
}

/// Omitted entries are 1.
pub fn cocycle_from_json(text: &str) -> Result<CocycleData> {
    let doc: CocycleDoc = serde_json::from_str(text)?;
    expect_schema(&doc.schema, COCYCLE_SCHEMA)?;
    let entries = doc
        .entries
        .iter()
        .map(|e| Ok(([e.g1, e.g2, e.g3, e.g4], Complex64::new(e.re.value()?, e.im.value()?))))
        .collect::<Result<Vec<_>>>()?;
    CocycleData::from_entries(FiniteGroup::from_table(doc.group)?, &entries)
}

pub fn cocycle_to_json(c: &CocycleData) -> String {
    let doc = CocycleDoc {
        schema: COCYCLE_SCHEMA.into(),
        group: c.group.table(),
        entries: c
            .nontrivial_entries()
            .into_iter()
            .map(|([g1, g2, g3, g4], w)| CocycleEntry {
                g1,
                g2,
                g3,
                g4,
                re: Number::Float(w.re),
                im: Number::Float(w.im),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("cocycle serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SimplexDoc {
    vertices: [usize; 5],
    sign: i8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TriangulationDoc {
    schema: String,
    simplices: Vec<SimplexDoc>,
}

/// Parses and validates a triangulation (closedness and orientation are checked).
pub fn triangulation_from_json(text: &str) -> Result<OrderedTriangulation> {
    let doc: TriangulationDoc = serde_json::from_str(text)?;
    expect_schema(&doc.schema, TRIANGULATION_SCHEMA)?;
    OrderedTriangulation::build(doc.simplices.iter().map(|s| (s.vertices, s.sign)).collect())
}

pub fn triangulation_to_json(t: &OrderedTriangulation) -> String {
    let doc = TriangulationDoc {
        schema: TRIANGULATION_SCHEMA.into(),
        simplices: t.top().iter().map(|s| SimplexDoc { vertices: s.vertices, sign: s.sign }).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("triangulation serializes")
}

/// Regression record of one state-sum run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema: String,
    pub value_re: f64,
    pub value_im: f64,
    pub colorings: String,
    pub terms: String,
    pub elapsed_ms: u128,
    pub category_hash: String,
    pub triangulation_hash: String,
}

pub fn result_document(
    result: &PartitionResult,
    data: &GbsfcData,
    t: &OrderedTriangulation,
) -> ResultDocument {
    ResultDocument {
        schema: RESULT_SCHEMA.into(),
        value_re: result.value.re,
        value_im: result.value.im,
        colorings: result.colorings.to_string(),
        terms: result.terms.to_string(),
        elapsed_ms: result.elapsed.as_millis(),
        category_hash: content_hash(&category_to_json(data)),
        triangulation_hash: content_hash(&triangulation_to_json(t)),
    }
}

/// SHA-256 of a canonical serialization, hex encoded.
pub fn content_hash(canonical: &str) -> String {
    Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}
