//! The `fieldquanta-report/1` document produced by a classification run.
//!
//! Maps are `BTreeMap`s and lists follow spec order, so serializing the same
//! report twice gives the same bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{FieldKind, Statistics};
use crate::modes::Dispersion;
use crate::reps::RealTypeTag;

pub const REPORT_SCHEMA: &str = "fieldquanta-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumReport {
    pub schema: String,
    pub theory: String,
    pub provenance: Provenance,
    pub conventions: BTreeMap<String, String>,
    pub fields: Vec<FieldReport>,
    pub gauge: Option<GaugeReport>,
    pub breaking: Option<BreakingReport>,
    pub checks: Vec<ConsistencyCheck>,
}

impl SpectrumReport {
    pub fn field(&self, name: &str) -> Option<&FieldReport> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub eps_rel: f64,
    pub eps_rank: f64,
    pub modes: Option<ModesConfig>,
    pub dispersion_override: Option<Dispersion>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    pub sites: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldReport {
    pub name: String,
    pub family: String,
    pub kind: FieldKind,
    pub statistics: Statistics,
    pub copies: usize,
    pub group_label: String,
    pub internal_dim: usize,
    pub charges: BTreeMap<String, f64>,
    pub real_type: RealTypeTag,
    pub commutant_dim: usize,
    pub quaternionic: bool,
    /// Row-major; present for secretly complex fields.
    pub complex_structure: Option<Vec<Vec<f64>>>,
    /// Complex dimensions of the particle and antiparticle sectors.
    pub sectors: Option<SectorDims>,
    pub complexification_irreducible: bool,
    pub labels: Vec<String>,
    /// Candidates that do not map solutions to solutions under the field's
    /// dynamics and so were not classified.
    pub dropped_candidates: Vec<String>,
    pub has_antiparticles: bool,
    pub anti_isomorphic_sectors: bool,
    pub predicts_antiparticles: bool,
    pub antiparticle_reason: String,
    pub dispersion: Dispersion,
    pub masses: Option<MassReport>,
    pub dof: Option<GaugeDof>,
    pub modes: Option<ModesReport>,
    pub rules: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorDims {
    pub particle: usize,
    pub antiparticle: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassReport {
    pub alpha: f64,
    pub beta: f64,
    pub vacuum: Vec<f64>,
    pub orbit_radius: f64,
    pub masses_squared: Vec<f64>,
    pub massless_count: usize,
    pub fd_relative_error: f64,
}

/// Degree-of-freedom counts of a gauge vector field with an internal space of
/// dimension `d`: `4d` naive, `3d` after the Gauss-law constraint, `2d`
/// physical; `d` are absorbed by the gauge symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeDof {
    pub naive: usize,
    pub constrained: usize,
    pub physical: usize,
    pub absorbed: usize,
}

impl GaugeDof {
    pub fn for_internal_dim(d: usize) -> Self {
        Self {
            naive: 4 * d,
            constrained: 3 * d,
            physical: 2 * d,
            absorbed: d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesReport {
    pub dispersion: Dispersion,
    pub sites: usize,
    pub length: f64,
    /// `None` when the field has no particle/antiparticle split.
    pub antiparticle_fraction: Option<f64>,
    /// Signed mode indices dropped from the one-particle space.
    pub excluded_modes: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeReport {
    pub fields: Vec<GaugeFieldDof>,
    pub total_physical: usize,
    pub total_absorbed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeFieldDof {
    pub field: String,
    pub internal_dim: usize,
    pub dof: GaugeDof,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakingReport {
    pub vacuum_field: String,
    pub phi0: Vec<f64>,
    pub broken_factors: Vec<String>,
    pub unbroken_factors: Vec<String>,
    /// Names of the broken-algebra basis, e.g. `su(2)[2]`.
    pub generator_labels: Vec<String>,
    pub residual_dim: usize,
    /// Stabilizer basis in the coordinates of `generator_labels`.
    pub residual_basis: Vec<Vec<f64>>,
    pub orbit_dim: usize,
    pub absorbed_goldstones: usize,
    pub goldstones: usize,
    pub physical_scalars: usize,
    pub massive_vectors: usize,
    pub massless_vectors: usize,
    /// The residual algebra's adjoint action on the broken algebra.
    pub adjoint_blocks: Vec<BlockReport>,
    /// Each field under the residual algebra together with the unbroken
    /// factors.
    pub field_blocks: BTreeMap<String, Vec<BlockReport>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockReport {
    pub dim: usize,
    pub real_type: RealTypeTag,
    pub trivial: bool,
    /// Column-major list of basis vectors.
    pub basis: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsistencyCheck {
    pub name: String,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}
