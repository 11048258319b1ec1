//! The classification pipeline behind `fieldquanta classify`.
//!
//! Per field: validity → real-irreducibility → real type → complexified
//! sectors → discrete labels (after discarding candidates the dynamics does
//! not respect) → masses if there is a potential → optional lattice check of
//! the antiparticle content. Then, per theory: gauge degree-of-freedom counts
//! and the breaking analysis around the declared vacuum.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::breaking::{
    closure_residual, hessian_spectrum, minimize, orbit_dimension, residual_decompose, stabilizer, InvariantBlock,
    QuarticPotential, VacuumSolution,
};
use crate::catalog::{FieldKind, FieldSpec, TheorySpec};
use crate::cxify::{check_irreducible_complex, complexify, decompose, verify_conjugate_pair};
use crate::discrete::{classify, commutation_sign, label_for, predict_antiparticles, pt_consistency, DiscreteCandidate};
use crate::error::{Error, Result};
use crate::kernel::{rank, RealMatrix, RealVector, TolerancePolicy};
use crate::modes::{antiparticle_content, is_dynamical_symmetry, AntiparticleContent, Dispersion, Lattice, ModeDynamics};
use crate::report::*;
use crate::reps::{find_invariant_metric, is_real_irreducible, real_type, RealType, RealTypeTag, RepData};

pub const DEFAULT_SEED: u64 = 42;

/// Lattice used to test whether candidates respect the dynamics.
const PROBE_SITES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub tol: TolerancePolicy,
    /// Lattice for the antiparticle-content check; off when `None`.
    pub modes: Option<Lattice>,
    /// Replaces every field's own dispersion.
    pub dispersion_override: Option<Dispersion>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            tol: TolerancePolicy::default(),
            modes: None,
            dispersion_override: None,
        }
    }
}

/// A finished run: the report and the process exit code (0, or 3 when some
/// consistency check failed).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: SpectrumReport,
    pub exit_code: i32,
}

fn rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

fn columns(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.column_iter().map(|c| c.iter().copied().collect()).collect()
}

fn check(name: &str, subject: &str, passed: bool, detail: impl Into<String>) -> ConsistencyCheck {
    ConsistencyCheck {
        name: name.into(),
        subject: subject.into(),
        passed,
        detail: detail.into(),
    }
}

/// Max over generators of `‖Xᵀh + hX‖ / (‖X‖‖h‖)`.
fn metric_residual(rep: &RepData, h: &RealMatrix) -> f64 {
    rep.generators
        .iter()
        .map(|x| (x.transpose() * h + h * x).norm() / (x.norm() * h.norm()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

/// Splits candidates into those that map solutions to solutions under
/// `dispersion` and those that do not. First-order dynamics needs a complex
/// structure; without one nothing is tested.
pub fn dynamical_candidates(
    field: &FieldSpec,
    rt: &RealType,
    dispersion: Dispersion,
    tol: &TolerancePolicy,
    seed: u64,
) -> Result<(Vec<DiscreteCandidate>, Vec<String>)> {
    let j = rt.j.as_ref().map(|j| j.j.clone());
    if dispersion.is_first_order() && j.is_none() {
        return Ok((field.discrete_candidates.clone(), Vec::new()));
    }
    let dynamics = ModeDynamics::new(Lattice::new(PROBE_SITES, 2.0 * PI)?, dispersion, field.internal.dim, j)?;
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (i, c) in field.discrete_candidates.iter().enumerate() {
        if is_dynamical_symmetry(c, &dynamics, tol, seed.wrapping_add(i as u64))? {
            kept.push(c.clone());
        } else {
            dropped.push(c.name.clone());
        }
    }
    Ok((kept, dropped))
}

fn antiparticle_reason(rt: &RealType, predicted: bool) -> String {
    match (rt.tag, predicted) {
        (RealTypeTag::HonestlyReal, _) => "honestly real: the field is its own antiparticle".into(),
        (RealTypeTag::SecretlyComplex, true) => {
            "complex-linear parity-time symmetry maps the particle sector onto the antiparticle sector".into()
        }
        (RealTypeTag::SecretlyComplex, false) => "no complex-linear parity-time symmetry".into(),
    }
}

struct FieldOutcome {
    report: FieldReport,
    checks: Vec<ConsistencyCheck>,
}

fn classify_field(
    field: &FieldSpec,
    vacuum: Option<&[f64]>,
    cfg: &RunConfig,
    seed: u64,
) -> Result<FieldOutcome> {
    let tol = &cfg.tol;
    let rep = &field.internal;
    rep.check(tol)?;
    if !is_real_irreducible(rep, tol, seed) {
        return Err(Error::IrreducibilityViolated(format!(
            "{} on ℝ^{} has a proper invariant subspace",
            rep.group_label, rep.dim
        )));
    }
    let metric = find_invariant_metric(rep, tol)?;
    let rt = real_type(rep, tol, seed)?;
    let name = field.name.as_str();
    let mut checks = Vec::new();
    let mut rules = Vec::new();

    let mres = metric_residual(rep, &metric.h);
    checks.push(check(
        "invariant metric",
        name,
        mres <= tol.eps_rank,
        format!("max ‖Xᵀh + hX‖ relative residual {mres:.2e}"),
    ));

    match rt.tag {
        RealTypeTag::HonestlyReal => rules.push(format!(
            "commutant dimension {}: only multiples of the identity commute with the action, so the field is honestly real",
            rt.commutant_dim
        )),
        RealTypeTag::SecretlyComplex => rules.push(format!(
            "commutant dimension {}: a complex structure J commutes with the action, so the field is secretly complex{}",
            rt.commutant_dim,
            if rt.quaternionic { " (quaternionic type, J not unique)" } else { "" }
        )),
    }

    // complexification dichotomy
    let cx = complexify(rep);
    let cx_irreducible = check_irreducible_complex(&cx.operators, rep.dim, tol);
    let mut sectors = None;
    match &rt.j {
        None => {
            checks.push(check(
                "complexification dichotomy",
                name,
                cx_irreducible,
                "honestly real branch: complexification irreducible",
            ));
            rules.push("complexification stays irreducible: particles are their own antiparticles".into());
        }
        Some(j) => {
            let jres = j.commutation_residual(rep);
            checks.push(check(
                "complex structure",
                name,
                jres <= tol.eps_rank,
                format!("max ‖[J, X]‖ relative residual {jres:.2e}"),
            ));
            let d = decompose(rep, j, tol)?;
            let pair = verify_conjugate_pair(&d, tol);
            let plus_irr = check_irreducible_complex(&d.rep_plus, d.sector_dim, tol);
            let minus_irr = check_irreducible_complex(&d.rep_minus, d.sector_dim, tol);
            let ok = !cx_irreducible && pair && (rt.quaternionic || (plus_irr && minus_irr));
            checks.push(check(
                "complexification dichotomy",
                name,
                ok,
                format!(
                    "secretly complex branch: reducible complexification, conjugate sectors {pair}, sectors irreducible {}",
                    plus_irr && minus_irr
                ),
            ));
            rules.push(format!(
                "the complexification splits into the +i and −i eigenspaces of J, each of complex dimension {}, exchanged by conjugation",
                d.sector_dim
            ));
            sectors = Some(SectorDims {
                particle: d.sector_dim,
                antiparticle: d.sector_dim,
            });
        }
    }

    // discrete labels
    let dispersion = cfg.dispersion_override.unwrap_or(field.dispersion);
    let (kept, dropped) = dynamical_candidates(field, &rt, dispersion, tol, seed)?;
    for c in &dropped {
        rules.push(format!("candidate '{c}' does not map solutions to solutions under {} dynamics", dispersion.name()));
    }
    let labels = classify(&kept, &rt, tol)?;
    match &rt.j {
        None => rules.push("honestly real: every classical discrete symmetry is linear and charge conjugation acts trivially".into()),
        Some(j) => {
            for c in &kept {
                let lin = commutation_sign(c, j, tol)?;
                let verb = if lin.sign() > 0 { "commutes" } else { "anticommutes" };
                if let Some(l) = label_for(c.kind, lin) {
                    rules.push(format!("'{}' {verb} with J, so it is quantized as {l}", c.name));
                }
            }
            if let Some(ok) = pt_consistency(&kept, j, tol)? {
                checks.push(check(
                    "parity-time composition",
                    name,
                    ok,
                    "linearity of PT equals the product of those of P and T",
                ));
            }
        }
    }
    let predicted = predict_antiparticles(&rt, &labels);

    // masses
    let masses = match field.potential {
        None => None,
        Some(p) => {
            let pot = QuarticPotential::new(p.alpha, p.beta, metric.clone())?;
            let vac = match vacuum {
                Some(phi) => {
                    let phi0 = RealVector::from_column_slice(phi);
                    let g = pot.gradient(&phi0)?;
                    let scale = (p.alpha.abs() + p.beta * phi0.norm_squared()) * phi0.norm().max(1.0);
                    if g.norm() > tol.eps_rank.sqrt() * scale.max(1.0) {
                        return Err(Error::Validation(vec![format!(
                            "declared vacuum is not a critical point of the potential (gradient {:.3e})",
                            g.norm()
                        )]));
                    }
                    VacuumSolution {
                        orbit_radius: metric.inner(&phi0, &phi0).sqrt(),
                        degenerate: p.alpha < 0.0 && rep.dim > 1,
                        phi0,
                    }
                }
                None => minimize(&pot),
            };
            let spec = hessian_spectrum(&pot, &vac, tol)?;
            rules.push(format!(
                "Hessian of V = αs + βs² at the vacuum: {} massless and {} massive modes",
                spec.massless_count,
                spec.masses_squared.len() - spec.massless_count
            ));
            checks.push(check(
                "finite-difference Hessian",
                name,
                spec.fd_relative_error <= 1e-6,
                format!("relative error {:.2e}", spec.fd_relative_error),
            ));
            if vac.degenerate {
                let orbit = orbit_dimension(rep, &vac.phi0, tol);
                checks.push(check(
                    "Goldstone count",
                    name,
                    orbit == spec.massless_count,
                    format!("{} massless modes, vacuum orbit dimension {orbit}", spec.massless_count),
                ));
            }
            Some(MassReport {
                alpha: p.alpha,
                beta: p.beta,
                vacuum: vac.phi0.iter().copied().collect(),
                orbit_radius: vac.orbit_radius,
                masses_squared: spec.masses_squared,
                massless_count: spec.massless_count,
                fd_relative_error: spec.fd_relative_error,
            })
        }
    };

    let dof = (field.kind == FieldKind::GaugeVector).then(|| GaugeDof::for_internal_dim(rep.dim));

    // lattice check
    let modes = match cfg.modes {
        None => None,
        Some(lattice) => {
            let content = antiparticle_content(rep, rt.j.as_ref().map(|j| &j.j), rt.tag, dispersion, lattice, tol)?;
            let fraction = match content {
                AntiparticleContent::Fraction(f) => Some(f),
                AntiparticleContent::NotApplicable => None,
            };
            let expected = if predicted { 0.5 } else { 0.0 };
            let ok = match fraction {
                None => !predicted,
                Some(f) => (f - expected).abs() <= 1e-8,
            };
            checks.push(check(
                "lattice antiparticle content",
                name,
                ok,
                format!(
                    "fraction {} under {} dynamics, labels predict {}",
                    fraction.map_or("n/a".to_string(), |f| format!("{f:.12}")),
                    dispersion.name(),
                    if predicted { "antiparticles" } else { "none" }
                ),
            ));
            let dynamics = ModeDynamics::new(lattice, dispersion, rep.dim, rt.j.as_ref().map(|j| j.j.clone()))
                .or_else(|_| ModeDynamics::new(lattice, dispersion, rep.dim, None));
            let excluded_modes = match dynamics {
                Ok(d) => d.excluded_modes().into_iter().map(|n| lattice.signed_index(n)).collect(),
                Err(_) => Vec::new(),
            };
            Some(ModesReport {
                dispersion,
                sites: lattice.sites,
                length: lattice.length,
                antiparticle_fraction: fraction,
                excluded_modes,
            })
        }
    };

    let report = FieldReport {
        name: field.name.clone(),
        family: field.family.clone(),
        kind: field.kind,
        statistics: field.statistics,
        copies: field.copies,
        group_label: rep.group_label.clone(),
        internal_dim: rep.dim,
        charges: field.charges.clone(),
        real_type: rt.tag,
        commutant_dim: rt.commutant_dim,
        quaternionic: rt.quaternionic,
        complex_structure: rt.j.as_ref().map(|j| rows(&j.j)),
        sectors,
        complexification_irreducible: cx_irreducible,
        labels: labels.labels.iter().map(|l| l.as_str().to_string()).collect(),
        dropped_candidates: dropped,
        has_antiparticles: labels.has_antiparticles,
        anti_isomorphic_sectors: labels.anti_isomorphic_sectors,
        predicts_antiparticles: predicted,
        antiparticle_reason: antiparticle_reason(&rt, predicted),
        dispersion,
        masses,
        dof,
        modes,
        rules,
    };
    Ok(FieldOutcome { report, checks })
}

fn block_report(b: &InvariantBlock) -> BlockReport {
    BlockReport {
        dim: b.dim(),
        real_type: b.tag,
        trivial: b.trivial,
        basis: columns(&b.basis),
    }
}

fn gauge_report(theory: &TheorySpec) -> Option<GaugeReport> {
    let fields: Vec<GaugeFieldDof> = theory
        .fields
        .iter()
        .filter(|f| f.kind == FieldKind::GaugeVector)
        .map(|f| GaugeFieldDof {
            field: f.name.clone(),
            internal_dim: f.internal.dim,
            dof: GaugeDof::for_internal_dim(f.internal.dim),
        })
        .collect();
    if fields.is_empty() {
        return None;
    }
    Some(GaugeReport {
        total_physical: fields.iter().map(|f| f.dof.physical).sum(),
        total_absorbed: fields.iter().map(|f| f.dof.absorbed).sum(),
        fields,
    })
}

fn breaking_report(theory: &TheorySpec, cfg: &RunConfig, checks: &mut Vec<ConsistencyCheck>) -> Result<Option<BreakingReport>> {
    let Some(vac) = &theory.vacuum else {
        return Ok(None);
    };
    let tol = &cfg.tol;
    let field = theory
        .field(&vac.field)
        .ok_or_else(|| Error::Validation(vec![format!("vacuum: unknown field '{}'", vac.field)]))?;
    let phi0 = RealVector::from_column_slice(&vac.phi0);
    let dim = field.internal.dim;

    let mut broken = Vec::new();
    let mut unbroken = Vec::new();
    let mut labels = Vec::new();
    let mut gens = Vec::new();
    let mut gauged_cols = Vec::new();
    for factor in &theory.symmetry_factors {
        let on_vac = factor.action.get(&field.name);
        let moves = on_vac.is_some_and(|idx| {
            idx.iter().any(|&i| {
                let x = &field.internal.generators[i];
                (x * &phi0).norm() > tol.eps_rank * x.norm() * phi0.norm()
            })
        });
        if !moves {
            unbroken.push(factor);
            continue;
        }
        for (k, &i) in on_vac.expect("moves implies acts").iter().enumerate() {
            let x = field.internal.generators[i].clone();
            if factor.gauged {
                gauged_cols.push(&x * &phi0);
            }
            labels.push(format!("{}[{k}]", factor.name));
            gens.push(x);
        }
        broken.push(factor);
    }

    let broken_rep = RepData::new(dim, gens.clone(), "broken")?;
    let stab = stabilizer(&broken_rep, &phi0, tol)?;
    let orbit_dim = orbit_dimension(&broken_rep, &phi0, tol);
    let cres = closure_residual(&stab)?;
    checks.push(check(
        "stabilizer closure",
        &field.name,
        cres <= tol.eps_rank,
        format!("relative residual {cres:.2e}"),
    ));
    let absorbed = if gauged_cols.is_empty() {
        0
    } else {
        rank(&RealMatrix::from_columns(&gauged_cols), tol)
    };
    let adjoint_blocks = if stab.dim() == 0 {
        residual_decompose(&RepData::new(gens.len().max(1), Vec::new(), "trivial")?, tol, cfg.seed)?
    } else {
        residual_decompose(&crate::breaking::adjoint_action(&stab, &gens, tol)?, tol, cfg.seed)?
    };

    let broken_gauged_dim: usize = broken.iter().filter(|f| f.gauged).map(|f| f.dim).sum();
    let unbroken_gauged_dim: usize = unbroken.iter().filter(|f| f.gauged).map(|f| f.dim).sum();
    let residual_gauged = if broken_gauged_dim > 0 { stab.dim() } else { 0 };

    // each field under the residual algebra plus the unbroken factors
    let mut field_blocks = BTreeMap::new();
    for (fi, f) in theory.fields.iter().enumerate() {
        let d = f.internal.dim;
        let mut per_broken: Vec<RealMatrix> = Vec::new();
        for factor in &broken {
            match factor.action.get(&f.name) {
                Some(idx) => per_broken.extend(idx.iter().map(|&i| f.internal.generators[i].clone())),
                None => per_broken.extend((0..factor.dim).map(|_| RealMatrix::zeros(d, d))),
            }
        }
        let mut residual = crate::breaking::action_on(&stab, &per_broken, d)?.generators;
        for factor in &unbroken {
            if let Some(idx) = factor.action.get(&f.name) {
                residual.extend(idx.iter().map(|&i| f.internal.generators[i].clone()));
            }
        }
        residual.retain(|x| x.norm() > 0.0);
        let rep = RepData::new(d, residual, "residual")?;
        let blocks = residual_decompose(&rep, tol, cfg.seed.wrapping_add(fi as u64))?;
        field_blocks.insert(f.name.clone(), blocks.iter().map(block_report).collect());
    }

    Ok(Some(BreakingReport {
        vacuum_field: field.name.clone(),
        phi0: vac.phi0.clone(),
        broken_factors: broken.iter().map(|f| f.name.clone()).collect(),
        unbroken_factors: unbroken.iter().map(|f| f.name.clone()).collect(),
        generator_labels: labels,
        residual_dim: stab.dim(),
        residual_basis: stab.coefficients.iter().map(|c| c.iter().copied().collect()).collect(),
        orbit_dim,
        absorbed_goldstones: absorbed,
        goldstones: orbit_dim - absorbed,
        physical_scalars: dim - absorbed,
        massive_vectors: broken_gauged_dim - residual_gauged,
        massless_vectors: residual_gauged + unbroken_gauged_dim,
        adjoint_blocks: adjoint_blocks.iter().map(block_report).collect(),
        field_blocks,
    }))
}

fn conventions() -> BTreeMap<String, String> {
    [
        ("particle_sector", "+i eigenspace of J in the complexification"),
        ("complexification", "P± = (1 ∓ iJ)/2; sector bases phase-fixed so the first nonzero entry is real and positive"),
        ("mass_normalization", "masses² are eigenvalues of h^(-1/2) Hess V h^(-1/2)"),
        ("potential", "V = α⟨φ,φ⟩ + β⟨φ,φ⟩²"),
        ("schroedinger", "dφ/dt = −J H φ with H = −∂²/2m"),
        ("inner_product", "(L/M) Σ_k w(k) h(f(k), g(k)), w = 1/ω relativistic, 1 Schrödinger"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Runs the whole pipeline over a validated theory.
pub fn classify_theory(theory: &TheorySpec, cfg: &RunConfig) -> Result<Outcome> {
    cfg.tol.validate()?;
    if let Some(d) = cfg.dispersion_override {
        d.validate()?;
    }
    theory.validate(&cfg.tol)?;
    let outcomes: Vec<Result<FieldOutcome>> = theory
        .fields
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let vacuum = theory
                .vacuum
                .as_ref()
                .filter(|v| v.field == f.name)
                .map(|v| v.phi0.as_slice());
            classify_field(f, vacuum, cfg, cfg.seed.wrapping_add(1000 * i as u64))
                .map_err(|e| e.context(format!("field '{}'", f.name)))
        })
        .collect();
    let mut fields = Vec::new();
    let mut checks = Vec::new();
    for o in outcomes {
        let o = o?;
        fields.push(o.report);
        checks.extend(o.checks);
    }
    let breaking = breaking_report(theory, cfg, &mut checks).map_err(|e| e.context("vacuum"))?;
    let report = SpectrumReport {
        schema: REPORT_SCHEMA.into(),
        theory: theory.name.clone(),
        provenance: Provenance {
            tool: "fieldquanta".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: cfg.seed,
            eps_rel: cfg.tol.eps_rel,
            eps_rank: cfg.tol.eps_rank,
            modes: cfg.modes.map(|l| ModesConfig {
                sites: l.sites,
                length: l.length,
            }),
            dispersion_override: cfg.dispersion_override,
        },
        conventions: conventions(),
        fields,
        gauge: gauge_report(theory),
        breaking,
        checks,
    };
    let exit_code = if report.all_checks_pass() { 0 } else { 3 };
    Ok(Outcome { report, exit_code })
}

pub fn to_json(report: &SpectrumReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report values are finite");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<SpectrumReport> {
    let r: SpectrumReport = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if r.schema != REPORT_SCHEMA {
        return Err(Error::Parse(format!("unsupported schema '{}'", r.schema)));
    }
    Ok(r)
}
