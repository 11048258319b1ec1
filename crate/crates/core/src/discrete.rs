//! Discrete symmetries and their quantum labels.
//!
//! A candidate is the internal matrix of a parity, time-reversal,
//! parity-time or internal conjugation map; the spacetime part is reduced to
//! the `kind` tag. For a secretly complex field each candidate either
//! commutes with `J` (complex-linear) or anticommutes with it
//! (complex-antilinear), and the pair (kind, linearity) fixes the label the
//! quantized map carries:
//!
//! | kind | linear | antilinear |
//! |------|--------|------------|
//! | Parity | P | CP |
//! | TimeReversal | CT | T |
//! | ParityTime | CPT | PT |
//! | Internal | – | C |
//!
//! An honestly real field has no antiparticles, so charge conjugation is
//! trivial there: P, T and PT symmetries also count as CP, CT and CPT, and C
//! itself is granted.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{anticommutator, commutator, ensure_finite, RealMatrix, TolerancePolicy};
use crate::reps::{ComplexStructureJ, RealType, RealTypeTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DiscreteKind {
    Parity,
    TimeReversal,
    ParityTime,
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    C,
    P,
    T,
    PT,
    CP,
    CT,
    CPT,
}

impl Label {
    pub const ALL: [Label; 7] = [Label::C, Label::P, Label::T, Label::PT, Label::CP, Label::CT, Label::CPT];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::C => "C",
            Label::P => "P",
            Label::T => "T",
            Label::PT => "PT",
            Label::CP => "CP",
            Label::CT => "CT",
            Label::CPT => "CPT",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Linearity {
    /// Commutes with `J`.
    Linear,
    /// Anticommutes with `J`.
    Antilinear,
}

impl Linearity {
    pub fn sign(self) -> i8 {
        match self {
            Linearity::Linear => 1,
            Linearity::Antilinear => -1,
        }
    }

    pub fn from_sign(s: i8) -> Self {
        if s >= 0 {
            Linearity::Linear
        } else {
            Linearity::Antilinear
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCandidate {
    pub name: String,
    pub kind: DiscreteKind,
    pub matrix: RealMatrix,
    /// The square of the map is `involution_phase · 1`.
    pub involution_phase: f64,
}

impl DiscreteCandidate {
    pub fn new(name: impl Into<String>, kind: DiscreteKind, matrix: RealMatrix) -> Self {
        Self {
            name: name.into(),
            kind,
            matrix,
            involution_phase: 1.0,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.involution_phase = phase;
        self
    }

    /// Checks `X² = phase · 1`, allowing a phase of either sign.
    pub fn validate(&self, tol: &TolerancePolicy) -> Result<()> {
        ensure_finite(&self.matrix, &self.name)?;
        if !self.matrix.is_square() {
            return Err(Error::InvalidInput(format!("candidate '{}' is not square", self.name)));
        }
        if !self.involution_phase.is_finite() || self.involution_phase == 0.0 {
            return Err(Error::InvalidInput(format!(
                "candidate '{}' has involution phase {}",
                self.name, self.involution_phase
            )));
        }
        let n = self.matrix.nrows();
        let sq = &self.matrix * &self.matrix;
        let residual = (&sq - RealMatrix::identity(n, n) * self.involution_phase).norm();
        if residual > tol.eps_rel * sq.norm().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "candidate '{}' does not square to {} times the identity (residual {residual:.3e})",
                self.name, self.involution_phase
            )));
        }
        Ok(())
    }

    /// The candidate rescaled by `s`; its square picks up `s²`.
    pub fn rescaled(&self, s: f64) -> Self {
        Self {
            name: self.name.clone(),
            kind: self.kind,
            matrix: &self.matrix * s,
            involution_phase: self.involution_phase * s * s,
        }
    }

    /// The product `self ∘ other` as a candidate of kind `kind`, provided both
    /// factors square to a multiple of the identity and commute or
    /// anticommute.
    pub fn compose(&self, other: &Self, kind: DiscreteKind, name: impl Into<String>) -> Self {
        let matrix = &self.matrix * &other.matrix;
        let sq = &matrix * &matrix;
        let n = matrix.nrows().max(1);
        Self {
            name: name.into(),
            kind,
            involution_phase: sq.trace() / n as f64,
            matrix,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DiscreteLabelSet {
    pub labels: BTreeSet<Label>,
    pub has_antiparticles: bool,
    pub anti_isomorphic_sectors: bool,
}

impl DiscreteLabelSet {
    pub fn contains(&self, l: Label) -> bool {
        self.labels.contains(&l)
    }
}

/// `+1` if `X` commutes with `J`, `−1` if it anticommutes, within
/// `eps_rel · ‖X‖ ‖J‖`.
pub fn commutation_sign(x: &DiscreteCandidate, j: &ComplexStructureJ, tol: &TolerancePolicy) -> Result<Linearity> {
    if x.matrix.shape() != j.j.shape() {
        return Err(Error::DimensionMismatch(format!(
            "candidate '{}' is {}x{}, J is {}x{}",
            x.name,
            x.matrix.nrows(),
            x.matrix.ncols(),
            j.j.nrows(),
            j.j.ncols()
        )));
    }
    let bound = tol.eps_rel * x.matrix.norm() * j.j.norm();
    let c = commutator(&x.matrix, &j.j).norm();
    let a = anticommutator(&x.matrix, &j.j).norm();
    if c <= bound {
        Ok(Linearity::Linear)
    } else if a <= bound {
        Ok(Linearity::Antilinear)
    } else {
        Err(Error::NeitherCommutesNorAnticommutes {
            name: x.name.clone(),
            commutator: c,
            anticommutator: a,
        })
    }
}

/// The label a candidate of `kind` with the given linearity carries on a
/// secretly complex field.
pub fn label_for(kind: DiscreteKind, linearity: Linearity) -> Option<Label> {
    use DiscreteKind::*;
    use Linearity::*;
    match (kind, linearity) {
        (Parity, Linear) => Some(Label::P),
        (Parity, Antilinear) => Some(Label::CP),
        (TimeReversal, Antilinear) => Some(Label::T),
        (TimeReversal, Linear) => Some(Label::CT),
        (ParityTime, Antilinear) => Some(Label::PT),
        (ParityTime, Linear) => Some(Label::CPT),
        (Internal, Antilinear) => Some(Label::C),
        (Internal, Linear) => None,
    }
}

/// Quantum labels of a set of classical discrete symmetries.
pub fn classify(candidates: &[DiscreteCandidate], rt: &RealType, tol: &TolerancePolicy) -> Result<DiscreteLabelSet> {
    for c in candidates {
        c.validate(tol)?;
    }
    let mut labels = BTreeSet::new();
    match rt.tag {
        RealTypeTag::HonestlyReal => {
            labels.insert(Label::C);
            for c in candidates {
                match c.kind {
                    DiscreteKind::Parity => {
                        labels.insert(Label::P);
                        labels.insert(Label::CP);
                    }
                    DiscreteKind::TimeReversal => {
                        labels.insert(Label::T);
                        labels.insert(Label::CT);
                    }
                    DiscreteKind::ParityTime => {
                        labels.insert(Label::PT);
                        labels.insert(Label::CPT);
                    }
                    DiscreteKind::Internal => {}
                }
            }
            Ok(DiscreteLabelSet {
                labels,
                has_antiparticles: false,
                anti_isomorphic_sectors: false,
            })
        }
        RealTypeTag::SecretlyComplex => {
            let j = rt.j.as_ref().ok_or_else(|| {
                Error::NotSecretlyComplex("secretly complex type without a complex structure".into())
            })?;
            for c in candidates {
                if let Some(l) = label_for(c.kind, commutation_sign(c, j, tol)?) {
                    labels.insert(l);
                }
            }
            let cpt = labels.contains(&Label::CPT);
            Ok(DiscreteLabelSet {
                labels,
                has_antiparticles: true,
                anti_isomorphic_sectors: cpt,
            })
        }
    }
}

/// Antiparticles with a sector anti-isomorphic to the particles are predicted
/// exactly for secretly complex fields with CPT symmetry.
pub fn predict_antiparticles(rt: &RealType, labels: &DiscreteLabelSet) -> bool {
    rt.tag == RealTypeTag::SecretlyComplex && labels.contains(Label::CPT)
}

/// When P, T and PT are all supplied, whether the PT candidate agrees in
/// linearity with the product of P and T. `None` when any is missing, since
/// PT need not be that product.
pub fn pt_consistency(
    candidates: &[DiscreteCandidate],
    j: &ComplexStructureJ,
    tol: &TolerancePolicy,
) -> Result<Option<bool>> {
    let find = |k| candidates.iter().find(|c| c.kind == k);
    let (Some(p), Some(t), Some(pt)) = (
        find(DiscreteKind::Parity),
        find(DiscreteKind::TimeReversal),
        find(DiscreteKind::ParityTime),
    ) else {
        return Ok(None);
    };
    let sp = commutation_sign(p, j, tol)?.sign();
    let st = commutation_sign(t, j, tol)?.sign();
    let spt = commutation_sign(pt, j, tol)?.sign();
    Ok(Some(sp * st == spt))
}
