//! Built-in theories and the JSON spec-file format (`fieldquanta-spec/1`).
//!
//! Every field carries its *purely internal* representation: spinor and
//! vector indices belong to spacetime and are not part of it. A Dirac field
//! is a Majorana field with one complex internal degree of freedom.
//!
//! Standard Model hypercharges are the conventional values
//! (`Y = −1/2, 1/6, −1, 2/3, 1/2` for the left leptons, left quarks, right
//! leptons, right up-type quarks and the Higgs). They are an editorial choice;
//! nothing in the classification depends on their particular values beyond
//! being nonzero. Down-type right quarks (`Y = −1/3`) are structurally
//! identical to the up-type ones and are not listed separately.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::discrete::{DiscreteCandidate, DiscreteKind};
use crate::error::{Error, Result};
use crate::groups::{adjoint_matrices, lift_left, lift_right, realify, so_basis, su2_defining, su3_defining, u1_charged};
use crate::kernel::{ComplexMatrix, RealMatrix, TolerancePolicy};
use crate::modes::Dispersion;
use crate::reps::RepData;

pub const SPEC_SCHEMA: &str = "fieldquanta-spec/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    Scalar,
    WeylLeft,
    WeylRight,
    Majorana,
    Vector,
    GaugeVector,
}

impl FieldKind {
    pub fn expected_statistics(self) -> Statistics {
        match self {
            FieldKind::WeylLeft | FieldKind::WeylRight | FieldKind::Majorana => Statistics::Fermi,
            _ => Statistics::Bose,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Statistics {
    Bose,
    Fermi,
}

/// Coefficients of `α⟨φ,φ⟩ + β⟨φ,φ⟩²`; the metric is the field's invariant
/// metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub name: String,
    /// Grouping label for reports, e.g. "gauge fields".
    pub family: String,
    pub kind: FieldKind,
    pub statistics: Statistics,
    pub internal: RepData,
    pub charges: BTreeMap<String, f64>,
    pub discrete_candidates: Vec<DiscreteCandidate>,
    pub potential: Option<PotentialSpec>,
    pub dispersion: Dispersion,
    /// Number of identical generations.
    pub copies: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryFactor {
    pub name: String,
    pub dim: usize,
    pub gauged: bool,
    /// Field name → indices of that field's generators representing this
    /// factor, in the factor's basis order. Absent fields are acted on
    /// trivially.
    pub action: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vacuum {
    pub field: String,
    pub phi0: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheorySpec {
    pub name: String,
    pub fields: Vec<FieldSpec>,
    pub symmetry_factors: Vec<SymmetryFactor>,
    pub vacuum: Option<Vacuum>,
}

impl TheorySpec {
    pub fn field(&self, name: &str) -> Option<&FieldSpec> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn families(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for f in &self.fields {
            if !out.contains(&f.family.as_str()) {
                out.push(&f.family);
            }
        }
        out
    }

    /// Every violated invariant, each prefixed with its location.
    pub fn violations(&self, tol: &TolerancePolicy) -> Vec<String> {
        let mut out = Vec::new();
        if self.fields.is_empty() {
            out.push("theory has no fields".into());
        }
        let mut seen = std::collections::BTreeSet::new();
        for f in &self.fields {
            if !seen.insert(f.name.as_str()) {
                out.push(format!("field '{}': duplicate name", f.name));
            }
            out.extend(field_violations(f, tol).into_iter().map(|v| format!("field '{}': {v}", f.name)));
        }
        let mut factor_names = std::collections::BTreeSet::new();
        let mut coverage: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for factor in &self.symmetry_factors {
            if !factor_names.insert(factor.name.as_str()) {
                out.push(format!("factor '{}': duplicate name", factor.name));
            }
            for (field, idx) in &factor.action {
                let Some(f) = self.field(field) else {
                    out.push(format!("factor '{}': acts on unknown field '{field}'", factor.name));
                    continue;
                };
                if idx.len() != factor.dim {
                    out.push(format!(
                        "factor '{}': {} generator indices on field '{field}', factor dimension is {}",
                        factor.name,
                        idx.len(),
                        factor.dim
                    ));
                }
                for &i in idx {
                    if i >= f.internal.generators.len() {
                        out.push(format!(
                            "factor '{}': generator index {i} out of range on field '{field}'",
                            factor.name
                        ));
                    } else {
                        coverage.entry(f.name.as_str()).or_default().push(i);
                    }
                }
            }
        }
        if !self.symmetry_factors.is_empty() {
            for f in &self.fields {
                let mut used = coverage.get(f.name.as_str()).cloned().unwrap_or_default();
                used.sort_unstable();
                let expected: Vec<usize> = (0..f.internal.generators.len()).collect();
                if used != expected {
                    out.push(format!(
                        "field '{}': generators must be assigned to symmetry factors exactly once",
                        f.name
                    ));
                }
            }
        }
        if let Some(v) = &self.vacuum {
            match self.field(&v.field) {
                None => out.push(format!("vacuum: unknown field '{}'", v.field)),
                Some(f) => {
                    if v.phi0.len() != f.internal.dim {
                        out.push(format!(
                            "vacuum: {} components for field '{}' of dimension {}",
                            v.phi0.len(),
                            f.name,
                            f.internal.dim
                        ));
                    }
                    if !v.phi0.iter().all(|x| x.is_finite()) {
                        out.push("vacuum: non-finite components".into());
                    }
                    if f.potential.is_none() {
                        out.push(format!("vacuum: field '{}' has no potential", f.name));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self, tol: &TolerancePolicy) -> Result<()> {
        let v = self.violations(tol);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }

    /// Names of the factors acting on `field`, with that field's generator
    /// indices, in declaration order.
    pub fn factors_on(&self, field: &str) -> Vec<(&SymmetryFactor, &[usize])> {
        self.symmetry_factors
            .iter()
            .filter_map(|s| s.action.get(field).map(|idx| (s, idx.as_slice())))
            .collect()
    }
}

fn field_violations(f: &FieldSpec, tol: &TolerancePolicy) -> Vec<String> {
    let mut out = f.internal.violations(tol);
    if f.internal.dim == 0 {
        out.push("internal dimension is zero".into());
    }
    if f.statistics != f.kind.expected_statistics() {
        out.push(format!("{:?} field declared with {:?} statistics", f.kind, f.statistics));
    }
    if f.copies == 0 {
        out.push("copies must be at least 1".into());
    }
    for c in &f.discrete_candidates {
        if c.matrix.nrows() != f.internal.dim || c.matrix.ncols() != f.internal.dim {
            out.push(format!("candidate '{}' does not act on the internal space", c.name));
        } else if let Err(e) = c.validate(tol) {
            out.push(e.to_string());
        }
    }
    if let Some(p) = f.potential {
        if !(p.beta > 0.0 && p.beta.is_finite() && p.alpha.is_finite()) {
            out.push(format!("potential needs finite alpha and beta > 0, got ({}, {})", p.alpha, p.beta));
        }
    }
    if let Err(e) = f.dispersion.validate() {
        out.push(e.to_string());
    }
    out
}

// ---------------------------------------------------------------------------
// Builtins

pub const BUILTIN_NAMES: [&str; 14] = [
    "real-kg",
    "complex-kg",
    "kg-internal(N)",
    "weyl-l",
    "weyl-r",
    "dirac",
    "majorana",
    "real-vector",
    "complex-vector",
    "gauge(su2)",
    "gauge(su3)",
    "schroedinger",
    "standard-model",
    "higgs-sector",
];

/// Concrete names covering the whole catalog, with `kg-internal` sampled at
/// N = 1…4.
pub fn all_builtin_names() -> Vec<String> {
    let mut out = Vec::new();
    for n in BUILTIN_NAMES {
        if n == "kg-internal(N)" {
            out.extend((1..=4).map(|k| format!("kg-internal({k})")));
        } else {
            out.push(n.to_string());
        }
    }
    out
}

/// Entrywise complex conjugation on `ℂⁿ` in interleaved real coordinates.
pub fn conjugation_matrix(complex_dim: usize) -> RealMatrix {
    RealMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        2 * complex_dim,
        (0..2 * complex_dim).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }),
    ))
}

fn cand(name: &str, kind: DiscreteKind, m: RealMatrix) -> DiscreteCandidate {
    DiscreteCandidate::new(name, kind, m)
}

/// Identity parity, time reversal and parity-time maps.
fn plain_candidates(dim: usize) -> Vec<DiscreteCandidate> {
    let id = RealMatrix::identity(dim, dim);
    vec![
        cand("P", DiscreteKind::Parity, id.clone()),
        cand("T", DiscreteKind::TimeReversal, id.clone()),
        cand("PT", DiscreteKind::ParityTime, id),
    ]
}

/// Each reflection both with and without complex conjugation, plus the
/// conjugation itself.
fn complex_scalar_candidates(complex_dim: usize) -> Vec<DiscreteCandidate> {
    let id = RealMatrix::identity(2 * complex_dim, 2 * complex_dim);
    let cj = conjugation_matrix(complex_dim);
    vec![
        cand("P: φ(x,t) → φ(−x,t)", DiscreteKind::Parity, id.clone()),
        cand("P*: φ(x,t) → φ*(−x,t)", DiscreteKind::Parity, cj.clone()),
        cand("T: φ(x,t) → φ*(x,−t)", DiscreteKind::TimeReversal, cj.clone()),
        cand("T': φ(x,t) → φ(x,−t)", DiscreteKind::TimeReversal, id.clone()),
        cand("PT*: φ(x,t) → φ*(−x,−t)", DiscreteKind::ParityTime, cj.clone()),
        cand("PT: φ(x,t) → φ(−x,−t)", DiscreteKind::ParityTime, id),
        cand("C: φ → φ*", DiscreteKind::Internal, cj),
    ]
}

fn u1(q: f64) -> RepData {
    RepData::new(2, vec![realify(&u1_charged(q, 1))], "u(1)")
        .expect("2x2 generator")
        .with_charge(q)
}

fn single(name: &str, family: &str, kind: FieldKind, internal: RepData, candidates: Vec<DiscreteCandidate>, dispersion: Dispersion) -> FieldSpec {
    let mut charges = BTreeMap::new();
    if let Some(q) = internal.charge {
        charges.insert("u(1)".to_string(), q);
    }
    FieldSpec {
        name: name.into(),
        family: family.into(),
        kind,
        statistics: kind.expected_statistics(),
        internal,
        charges,
        discrete_candidates: candidates,
        potential: None,
        dispersion,
        copies: 1,
    }
}

fn one_field_theory(name: &str, field: FieldSpec, factor: Option<&str>) -> TheorySpec {
    let symmetry_factors = match factor {
        Some(fname) if !field.internal.generators.is_empty() => vec![SymmetryFactor {
            name: fname.into(),
            dim: field.internal.generators.len(),
            gauged: false,
            action: [(field.name.clone(), (0..field.internal.generators.len()).collect())].into_iter().collect(),
        }],
        _ => Vec::new(),
    };
    TheorySpec {
        name: name.into(),
        fields: vec![field],
        symmetry_factors,
        vacuum: None,
    }
}

const MASSIVE: Dispersion = Dispersion::Relativistic { mass: 1.0 };
const MASSLESS: Dispersion = Dispersion::Relativistic { mass: 0.0 };

fn parse_parenthesized<'a>(name: &'a str, prefix: &str) -> Option<&'a str> {
    name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')
}

pub fn builtin(name: &str) -> Result<TheorySpec> {
    let trivial = |d| RepData::trivial(d);
    Ok(match name {
        "real-kg" => one_field_theory(
            name,
            single("phi", "scalar", FieldKind::Scalar, trivial(1), plain_candidates(1), MASSIVE),
            None,
        ),
        "complex-kg" => one_field_theory(
            name,
            single("phi", "scalar", FieldKind::Scalar, u1(1.0), complex_scalar_candidates(1), MASSIVE),
            Some("u(1)"),
        ),
        "weyl-l" | "weyl-r" => {
            let kind = if name == "weyl-l" { FieldKind::WeylLeft } else { FieldKind::WeylRight };
            // A single Weyl field is not mirror symmetric: only the parity
            // map combined with conjugation survives.
            let cj = conjugation_matrix(1);
            let candidates = vec![
                cand("CP-type parity", DiscreteKind::Parity, cj.clone()),
                cand("T", DiscreteKind::TimeReversal, cj),
                cand("PT", DiscreteKind::ParityTime, RealMatrix::identity(2, 2)),
            ];
            one_field_theory(name, single("psi", "spinor", kind, u1(1.0), candidates, MASSLESS), Some("u(1)"))
        }
        "dirac" => one_field_theory(
            name,
            single("psi", "spinor", FieldKind::Majorana, u1(1.0), complex_scalar_candidates(1), MASSIVE),
            Some("u(1)"),
        ),
        "majorana" => one_field_theory(
            name,
            single("psi", "spinor", FieldKind::Majorana, trivial(1), plain_candidates(1), MASSIVE),
            None,
        ),
        "real-vector" => one_field_theory(
            name,
            single("A", "vector", FieldKind::Vector, trivial(1), plain_candidates(1), MASSIVE),
            None,
        ),
        "complex-vector" => one_field_theory(
            name,
            single("A", "vector", FieldKind::Vector, u1(1.0), complex_scalar_candidates(1), MASSIVE),
            Some("u(1)"),
        ),
        "schroedinger" => {
            let f = single(
                "psi",
                "scalar",
                FieldKind::Scalar,
                u1(1.0),
                complex_scalar_candidates(1),
                Dispersion::Schroedinger { mass: 1.0 },
            );
            one_field_theory(name, f, Some("u(1)"))
        }
        "standard-model" => standard_model(false),
        "higgs-sector" => standard_model(true),
        _ => {
            if let Some(n) = parse_parenthesized(name, "kg-internal") {
                let n: usize = n
                    .trim()
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::UnknownName(name.into()))?;
                let rep = RepData::new(n, so_basis(n), format!("so({n})"))?;
                let label = format!("so({n})");
                return Ok(one_field_theory(
                    name,
                    single("phi", "scalar", FieldKind::Scalar, rep, plain_candidates(n), MASSIVE),
                    Some(&label),
                ));
            }
            match parse_parenthesized(name, "gauge") {
                // The free gauge field's internal symmetry is the full
                // rotation group of its Lie-algebra index.
                Some("su2") => gauge_theory(name, 3),
                Some("su3") => gauge_theory(name, 8),
                _ => return Err(Error::UnknownName(name.into())),
            }
        }
    })
}

fn gauge_theory(name: &str, dim: usize) -> TheorySpec {
    let rep = RepData::new(dim, so_basis(dim), format!("so({dim})")).expect("so(n) basis");
    let label = format!("so({dim})");
    one_field_theory(
        name,
        single("A", "gauge", FieldKind::GaugeVector, rep, plain_candidates(dim), MASSLESS),
        Some(&label),
    )
}

fn realify_all(ms: &[ComplexMatrix]) -> Vec<RealMatrix> {
    ms.iter().map(realify).collect()
}

/// Adjoint representation of a matrix Lie algebra in its own basis.
fn adjoint_rep(basis: &[RealMatrix], label: &str) -> RepData {
    let tol = TolerancePolicy::default();
    let ads = adjoint_matrices(basis, basis, &tol).expect("closed algebra");
    RepData::new(basis.len(), ads, label).expect("square adjoint matrices")
}

struct Builder {
    fields: Vec<FieldSpec>,
    factors: Vec<SymmetryFactor>,
}

impl Builder {
    /// Adds a field whose generators are listed factor by factor.
    fn add(&mut self, mut field: FieldSpec, parts: Vec<(&str, Vec<RealMatrix>)>, copies: usize) {
        let mut gens = Vec::new();
        for (factor, ms) in parts {
            let start = gens.len();
            gens.extend(ms);
            let f = self
                .factors
                .iter_mut()
                .find(|f| f.name == factor)
                .expect("factor declared");
            f.action.insert(field.name.clone(), (start..gens.len()).collect());
        }
        field.internal.generators = gens;
        field.copies = copies;
        self.fields.push(field);
    }
}

fn matter(name: &str, family: &str, kind: FieldKind, dim: usize, label: &str, y: f64) -> FieldSpec {
    let mut charges = BTreeMap::new();
    charges.insert("u(1)".to_string(), y);
    FieldSpec {
        name: name.into(),
        family: family.into(),
        kind,
        statistics: kind.expected_statistics(),
        internal: RepData {
            dim,
            generators: Vec::new(),
            group_label: label.into(),
            charge: Some(y),
        },
        charges,
        discrete_candidates: vec![cand("PT", DiscreteKind::ParityTime, RealMatrix::identity(dim, dim))],
        potential: None,
        dispersion: MASSLESS,
        copies: 1,
    }
}

/// The electroweak-plus-strong theory; `higgs_only` keeps just the Higgs and
/// the gauge fields.
fn standard_model(higgs_only: bool) -> TheorySpec {
    let su2 = su2_defining();
    let su3 = su3_defining();
    let factor = |name: &str, dim| SymmetryFactor {
        name: name.into(),
        dim,
        gauged: true,
        action: BTreeMap::new(),
    };
    let mut b = Builder {
        fields: Vec::new(),
        factors: vec![factor("su(3)", 8), factor("su(2)", 3), factor("u(1)", 1)],
    };
    let (y_ql, y_ll, y_qr, y_lr, y_h) = (1.0 / 6.0, -0.5, 2.0 / 3.0, -1.0, 0.5);

    if !higgs_only {
        let f = matter("quark-L", "left-handed quarks", FieldKind::WeylLeft, 12, "su(3)×su(2)×u(1)", y_ql);
        let parts = vec![
            ("su(3)", realify_all(&su3.iter().map(|m| lift_right(2, m)).collect::<Vec<_>>())),
            ("su(2)", realify_all(&su2.iter().map(|m| lift_left(m, 3)).collect::<Vec<_>>())),
            ("u(1)", vec![realify(&u1_charged(y_ql, 6))]),
        ];
        b.add(f, parts, 3);

        let f = matter("lepton-L", "left-handed leptons", FieldKind::WeylLeft, 4, "su(2)×u(1)", y_ll);
        b.add(f, vec![("su(2)", realify_all(&su2)), ("u(1)", vec![realify(&u1_charged(y_ll, 2))])], 3);

        let f = matter("quark-R", "right-handed quarks", FieldKind::WeylRight, 6, "su(3)×u(1)", y_qr);
        b.add(f, vec![("su(3)", realify_all(&su3)), ("u(1)", vec![realify(&u1_charged(y_qr, 3))])], 3);

        let f = matter("lepton-R", "right-handed leptons", FieldKind::WeylRight, 2, "u(1)", y_lr);
        b.add(f, vec![("u(1)", vec![realify(&u1_charged(y_lr, 1))])], 3);
    }

    let su2_real = realify_all(&su2);
    let su3_real = realify_all(&su3);
    let gauge = |name: &str, rep: RepData| FieldSpec {
        name: name.into(),
        family: "gauge fields".into(),
        kind: FieldKind::GaugeVector,
        statistics: Statistics::Bose,
        discrete_candidates: plain_candidates(rep.dim),
        internal: rep,
        charges: BTreeMap::new(),
        potential: None,
        dispersion: MASSLESS,
        copies: 1,
    };
    let g2 = adjoint_rep(&su2_real, "ad su(2)");
    let g3 = adjoint_rep(&su3_real, "ad su(3)");
    let g1 = RepData::new(1, vec![RealMatrix::zeros(1, 1)], "ad u(1)").expect("1x1");
    if !higgs_only {
        let gens = g3.generators.clone();
        b.add(gauge("gluon", g3), vec![("su(3)", gens)], 1);
    }
    let gens = g2.generators.clone();
    b.add(gauge("W", g2), vec![("su(2)", gens)], 1);
    let gens = g1.generators.clone();
    b.add(gauge("B", g1), vec![("u(1)", gens)], 1);

    let mut higgs = matter("higgs", "Higgs field", FieldKind::Scalar, 4, "su(2)×u(1)", y_h);
    higgs.dispersion = MASSIVE;
    higgs.potential = Some(PotentialSpec { alpha: -1.0, beta: 0.5 });
    higgs.discrete_candidates = vec![
        cand("P", DiscreteKind::Parity, RealMatrix::identity(4, 4)),
        cand("PT", DiscreteKind::ParityTime, RealMatrix::identity(4, 4)),
    ];
    b.add(higgs, vec![("su(2)", su2_real), ("u(1)", vec![realify(&u1_charged(y_h, 2))])], 1);

    if higgs_only {
        b.factors.retain(|f| f.name != "su(3)");
    }
    TheorySpec {
        name: if higgs_only { "higgs-sector" } else { "standard-model" }.into(),
        fields: b.fields,
        symmetry_factors: b.factors,
        vacuum: Some(Vacuum {
            field: "higgs".into(),
            // √(−α/2β) = 1 on the first axis
            phi0: vec![1.0, 0.0, 0.0, 0.0],
        }),
    }
}

// ---------------------------------------------------------------------------
// Spec files

type Rows = Vec<Vec<f64>>;

fn to_rows(m: &RealMatrix) -> Rows {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

fn from_rows(rows: &Rows, dim: usize, what: &str) -> Result<RealMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        let shape = format!("{}x{}", rows.len(), rows.first().map_or(0, Vec::len));
        return Err(Error::Parse(format!("{what}: matrix is {shape}, declared dim is {dim}")));
    }
    Ok(RealMatrix::from_fn(dim, dim, |r, c| rows[r][c]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepFile {
    dim: usize,
    group_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    charge: Option<f64>,
    generators: Vec<Rows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateFile {
    name: String,
    kind: DiscreteKind,
    matrix: Rows,
    #[serde(default = "one")]
    involution_phase: f64,
}

fn one() -> f64 {
    1.0
}

fn one_copy() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    name: String,
    #[serde(default)]
    family: String,
    kind: FieldKind,
    statistics: Statistics,
    internal: RepFile,
    #[serde(default)]
    charges: BTreeMap<String, f64>,
    #[serde(default)]
    discrete_candidates: Vec<CandidateFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    potential: Option<PotentialSpec>,
    dispersion: Dispersion,
    #[serde(default = "one_copy")]
    copies: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    schema: String,
    name: String,
    fields: Vec<FieldFile>,
    #[serde(default)]
    symmetry_factors: Vec<SymmetryFactor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vacuum: Option<Vacuum>,
}

fn field_to_file(f: &FieldSpec) -> FieldFile {
    FieldFile {
        name: f.name.clone(),
        family: f.family.clone(),
        kind: f.kind,
        statistics: f.statistics,
        internal: RepFile {
            dim: f.internal.dim,
            group_label: f.internal.group_label.clone(),
            charge: f.internal.charge,
            generators: f.internal.generators.iter().map(to_rows).collect(),
        },
        charges: f.charges.clone(),
        discrete_candidates: f
            .discrete_candidates
            .iter()
            .map(|c| CandidateFile {
                name: c.name.clone(),
                kind: c.kind,
                matrix: to_rows(&c.matrix),
                involution_phase: c.involution_phase,
            })
            .collect(),
        potential: f.potential,
        dispersion: f.dispersion,
        copies: f.copies,
    }
}

fn field_from_file(f: FieldFile) -> Result<FieldSpec> {
    let dim = f.internal.dim;
    if dim == 0 {
        return Err(Error::Parse(format!("field '{}': internal dim must be positive", f.name)));
    }
    let generators = f
        .internal
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| from_rows(g, dim, &format!("field '{}' generator {i}", f.name)))
        .collect::<Result<Vec<_>>>()?;
    let discrete_candidates = f
        .discrete_candidates
        .into_iter()
        .map(|c| {
            let matrix = from_rows(&c.matrix, dim, &format!("field '{}' candidate '{}'", f.name, c.name))?;
            Ok(DiscreteCandidate {
                name: c.name,
                kind: c.kind,
                matrix,
                involution_phase: c.involution_phase,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldSpec {
        internal: RepData {
            dim,
            generators,
            group_label: f.internal.group_label,
            charge: f.internal.charge,
        },
        name: f.name,
        family: f.family,
        kind: f.kind,
        statistics: f.statistics,
        charges: f.charges,
        discrete_candidates,
        potential: f.potential,
        dispersion: f.dispersion,
        copies: f.copies,
    })
}

pub fn to_json(spec: &TheorySpec) -> Result<String> {
    let file = SpecFile {
        schema: SPEC_SCHEMA.into(),
        name: spec.name.clone(),
        fields: spec.fields.iter().map(field_to_file).collect(),
        symmetry_factors: spec.symmetry_factors.clone(),
        vacuum: spec.vacuum.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses a spec document without validating it.
pub fn parse_json(text: &str) -> Result<TheorySpec> {
    let file: SpecFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if file.schema != SPEC_SCHEMA {
        return Err(Error::Parse(format!(
            "unsupported schema '{}', expected '{SPEC_SCHEMA}'",
            file.schema
        )));
    }
    Ok(TheorySpec {
        name: file.name,
        fields: file.fields.into_iter().map(field_from_file).collect::<Result<Vec<_>>>()?,
        symmetry_factors: file.symmetry_factors,
        vacuum: file.vacuum,
    })
}

pub fn load(path: &Path, tol: &TolerancePolicy) -> Result<TheorySpec> {
    let text = std::fs::read_to_string(path)?;
    let spec = parse_json(&text)?;
    spec.validate(tol)?;
    Ok(spec)
}

pub fn save(spec: &TheorySpec, path: &Path, tol: &TolerancePolicy) -> Result<()> {
    spec.validate(tol)?;
    std::fs::write(path, to_json(spec)?)?;
    Ok(())
}
