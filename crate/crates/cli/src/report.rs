//! Report bodies for each command, in the shapes described by the bundled schema.

use serde::Serialize;
use serde_json::Value;

use spherical_core::fano::{CurveDegreeReport, MukaiReport};
use spherical_core::p_invariant::{PInvariantReport, SmoothnessReport};
use spherical_core::symmetric_catalog::{EqualityReport, TablesReport};

/// Run information, emitted only with `--meta`.
#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub version: &'static str,
    pub jobs: usize,
    pub generated_unix: u64,
}

/// Common wrapper: the command name, the body fields and optional meta data.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub command: &'static str,
    #[serde(flatten)]
    pub body: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

/// One violation: its display message and its structured form.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationEntry {
    pub message: String,
    pub detail: Value,
}

impl ViolationEntry {
    pub fn new<V: Serialize + std::fmt::Display>(v: &V) -> Self {
        ViolationEntry {
            message: v.to_string(),
            detail: serde_json::to_value(v).unwrap_or(Value::Null),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
    pub violations: Vec<ViolationEntry>,
}

/// Body of a report for input that could not be processed.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorBody {
    pub source: String,
    pub error: ErrorInfo,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComputePBody {
    pub source: String,
    /// 1-based marked spherical roots when the input is a catalog family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marking: Option<Vec<usize>>,
    pub report: PInvariantReport,
    /// Whether the primal and dual solutions certify each other; absent when ℘ is infinite.
    pub certificate_verified: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyBody {
    pub suite: &'static str,
    pub max_rank: usize,
    pub passed: bool,
    pub tables: Option<TablesReport>,
    pub equality: Option<EqualityReport>,
}

/// Divisors whose `u_D` lies on the face of `Q` dual to a supported vertex.
#[derive(Clone, Debug, Serialize)]
pub struct DualFace {
    pub vertex: Vec<String>,
    pub divisors: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FanoBody {
    pub source: String,
    pub reflexive: bool,
    pub lattice_rank: usize,
    pub dim: usize,
    pub picard: i64,
    pub dual_faces: Vec<DualFace>,
    pub curves: CurveDegreeReport,
    pub iota_at_most_epsilon: bool,
    pub epsilon_inequality: bool,
    pub color_vertex_check: bool,
    /// Present when the Mukai check could not run, e.g. without ℚ-factoriality.
    pub mukai_error: Option<String>,
    pub mukai: Option<MukaiReport>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessBody {
    pub source: String,
    pub divisors: Vec<String>,
    pub report: SmoothnessReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub spec: String,
    pub family: String,
    pub params: String,
    pub group: String,
    pub table: String,
    pub rank: usize,
    pub bound: usize,
    pub sigma: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogBody {
    pub max_rank: usize,
    pub families: Vec<CatalogEntry>,
}
