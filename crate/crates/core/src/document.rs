//! JSON documents for skeletons and augmented data.
//!
//! Simple roots are 1-based in documents (`sp`, `moved_by`, color kinds) and
//! 0-based in the library. Conversions in both directions are lossless: a
//! document read into a skeleton and written back is unchanged.

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::fano::{AugmentedData, AugmentedDivisor};
use crate::rational_geometry::{format_rational, parse_rational, RatVector};
use crate::root_systems::{RootError, RootSystem};
use crate::skeleton::{Color, ColorKind, GammaDivisor, SphericalSkeleton, Violation};
use crate::spherical_roots::{SphericalRoot, SphericalRootError};

/// The only document version this crate reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version {0}, expected {SCHEMA_VERSION}")]
    Version(u32),
    #[error("{what}: index {value} is out of range 1..={max}")]
    Index { what: String, value: usize, max: usize },
    #[error("color {id}: {reason}")]
    ColorKind { id: String, reason: String },
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    SphericalRoot(#[from] SphericalRootError),
    #[error("invalid skeleton: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaEntry {
    pub pattern: String,
    pub coeffs: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColorEntry {
    pub id: String,
    pub moved_by: Vec<usize>,
    pub kind: String,
    pub pairings: Vec<i64>,
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaEntry {
    pub id: String,
    pub pairings: Vec<i64>,
}

/// Serialized form of a [`SphericalSkeleton`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonDocument {
    pub schema_version: u32,
    pub root_system: Vec<String>,
    pub sigma: Vec<SigmaEntry>,
    pub sp: Vec<usize>,
    pub colors: Vec<ColorEntry>,
    pub gamma: Vec<GammaEntry>,
}

fn zero_based(what: &str, value: usize, max: usize) -> Result<usize, DocumentError> {
    if value == 0 || value > max {
        Err(DocumentError::Index { what: what.to_string(), value, max })
    } else {
        Ok(value - 1)
    }
}

impl SkeletonDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_skeleton(sk: &SphericalSkeleton) -> Self {
        SkeletonDocument {
            schema_version: SCHEMA_VERSION,
            root_system: sk.root_system.names(),
            sigma: sk
                .sigma
                .iter()
                .map(|g| SigmaEntry { pattern: g.kind().name().to_string(), coeffs: g.coeffs().clone() })
                .collect(),
            sp: sk.sp.iter().map(|a| a + 1).collect(),
            colors: sk
                .colors
                .iter()
                .map(|c| ColorEntry {
                    id: c.id.clone(),
                    moved_by: c.moved_by.iter().map(|a| a + 1).collect(),
                    kind: c.kind.to_string(),
                    pairings: c.pairings.clone(),
                    m: c.m,
                })
                .collect(),
            gamma: sk
                .gamma
                .iter()
                .map(|g| GammaEntry { id: g.id.clone(), pairings: g.pairings.clone() })
                .collect(),
        }
    }

    /// Builds the skeleton without checking the axioms.
    pub fn to_skeleton_unchecked(&self) -> Result<SphericalSkeleton, DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Version(self.schema_version));
        }
        let rs = RootSystem::from_names(&self.root_system)?;
        let n = rs.rank();
        let sigma = self
            .sigma
            .iter()
            .map(|e| SphericalRoot::from_document(&rs, &e.pattern, &e.coeffs))
            .collect::<Result<Vec<_>, _>>()?;
        let sp = self
            .sp
            .iter()
            .map(|&a| zero_based("sp", a, n))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let mut colors = Vec::with_capacity(self.colors.len());
        for c in &self.colors {
            let moved_by = c
                .moved_by
                .iter()
                .map(|&a| zero_based(&format!("{}.moved_by", c.id), a, n))
                .collect::<Result<BTreeSet<_>, _>>()?;
            let kind: ColorKind = c
                .kind
                .parse()
                .map_err(|reason| DocumentError::ColorKind { id: c.id.clone(), reason })?;
            if let ColorKind::PairPlus(a) | ColorKind::PairMinus(a) | ColorKind::Half(a) = kind {
                zero_based(&format!("{}.kind", c.id), a + 1, n)?;
            }
            colors.push(Color { id: c.id.clone(), moved_by, kind, pairings: c.pairings.clone(), m: c.m });
        }
        let gamma = self
            .gamma
            .iter()
            .map(|g| GammaDivisor { id: g.id.clone(), pairings: g.pairings.clone() })
            .collect();
        Ok(SphericalSkeleton { root_system: rs, sigma, sp, colors, gamma })
    }

    /// Builds the skeleton and rejects it unless every axiom holds.
    pub fn to_skeleton(&self) -> Result<SphericalSkeleton, DocumentError> {
        let sk = self.to_skeleton_unchecked()?;
        let v = sk.validate();
        if v.is_empty() {
            Ok(sk)
        } else {
            Err(DocumentError::Invalid(v))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorEntry {
    pub id: String,
    pub rho_prime: Vec<i64>,
    pub m: i64,
}

/// Serialized form of [`AugmentedData`], optionally with the points spanning `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugmentedDocument {
    pub schema_version: u32,
    pub skeleton: SkeletonDocument,
    pub lattice_rank: usize,
    pub sigma_in_m: Vec<Vec<i64>>,
    pub divisors: Vec<DivisorEntry>,
    /// `α^∨` restricted to `M`, one row per simple root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coroots: Option<Vec<Vec<i64>>>,
    /// Points whose convex hull is `Q`; defaults to `{ρ'(D)/m_D}`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "points")]
    pub polytope: Option<Vec<RatVector>>,
}

mod points {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<RatVector>>, s: S) -> Result<S::Ok, S::Error> {
        let strs: Option<Vec<Vec<String>>> =
            v.as_ref().map(|pts| pts.iter().map(|p| p.iter().map(format_rational).collect()).collect());
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<RatVector>>, D::Error> {
        let strs = Option::<Vec<Vec<String>>>::deserialize(d)?;
        strs.map(|pts| {
            pts.iter()
                .map(|p| {
                    p.iter()
                        .map(|s| {
                            parse_rational(s)
                                .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
                        })
                        .collect()
                })
                .collect()
        })
        .transpose()
    }
}

impl AugmentedDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_data(aug: &AugmentedData, polytope: Option<Vec<RatVector>>) -> Self {
        AugmentedDocument {
            schema_version: SCHEMA_VERSION,
            skeleton: SkeletonDocument::from_skeleton(&aug.skeleton),
            lattice_rank: aug.lattice_rank,
            sigma_in_m: aug.sigma_in_m.clone(),
            divisors: aug
                .divisors
                .iter()
                .map(|d| DivisorEntry { id: d.id.clone(), rho_prime: d.rho_prime.clone(), m: d.m })
                .collect(),
            coroots: aug.coroots.clone(),
            polytope,
        }
    }

    /// The augmented data and the optional points of `Q`. The skeleton must validate.
    pub fn to_data(&self) -> Result<(AugmentedData, Option<Vec<RatVector>>), DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Version(self.schema_version));
        }
        let aug = AugmentedData {
            skeleton: self.skeleton.to_skeleton()?,
            lattice_rank: self.lattice_rank,
            sigma_in_m: self.sigma_in_m.clone(),
            divisors: self
                .divisors
                .iter()
                .map(|d| AugmentedDivisor { id: d.id.clone(), rho_prime: d.rho_prime.clone(), m: d.m })
                .collect(),
            coroots: self.coroots.clone(),
        };
        Ok((aug, self.polytope.clone()))
    }
}
