//! Human-readable output: the text form of a report and the `demo`
//! walkthroughs.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::breaking::{analyse_vacuum, hessian_spectrum, minimize, orbit_dimension, QuarticPotential};
use crate::catalog::builtin;
use crate::cxify::{check_irreducible_complex, complexify, decompose};
use crate::error::{Error, Result};
use crate::groups::so_basis;
use crate::kernel::{commuting_matrices, expm, to_complex, RealMatrix, RealVector, TolerancePolicy};
use crate::report::SpectrumReport;
use crate::reps::{real_type, RealTypeTag, RepData};

pub const DEMOS: [&str; 3] = ["so2-vs-so3", "higgs", "goldstone"];

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn tag(t: RealTypeTag) -> &'static str {
    match t {
        RealTypeTag::HonestlyReal => "honestly real",
        RealTypeTag::SecretlyComplex => "secretly complex",
    }
}

fn num(x: f64) -> String {
    let x = if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{x:.6}")
}

fn cnum(z: Complex64) -> String {
    let re = if z.re.abs() < 5e-13 { 0.0 } else { z.re };
    let im = if z.im.abs() < 5e-13 { 0.0 } else { z.im };
    if im == 0.0 {
        format!("{re:.6}")
    } else if re == 0.0 {
        format!("{im:.6}i")
    } else {
        format!("{re:.6}{:+.6}i", im)
    }
}

fn matrix_lines(out: &mut String, indent: &str, m: &RealMatrix) {
    for r in m.row_iter() {
        let cells: Vec<String> = r.iter().map(|&x| format!("{:>10}", num(x))).collect();
        let _ = writeln!(out, "{indent}[{} ]", cells.join(""));
    }
}

fn vec_str(v: &[f64]) -> String {
    let cells: Vec<String> = v.iter().map(|&x| num(x)).collect();
    format!("({})", cells.join(", "))
}

pub fn text_report(r: &SpectrumReport) -> String {
    let mut out = String::new();
    let p = &r.provenance;
    let _ = writeln!(out, "theory {}", r.theory);
    let _ = writeln!(
        out,
        "  {} {}, seed {}, eps_rel {:e}, eps_rank {:e}",
        p.tool, p.version, p.seed, p.eps_rel, p.eps_rank
    );
    for f in &r.fields {
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "field {} ({}): {:?}, {:?}, {} on R^{}{}",
            f.name,
            f.family,
            f.kind,
            f.statistics,
            f.group_label,
            f.internal_dim,
            if f.copies > 1 { format!(", {} copies", f.copies) } else { String::new() }
        );
        let _ = writeln!(out, "  real type       {} (commutant dimension {})", tag(f.real_type), f.commutant_dim);
        match f.sectors {
            Some(s) => {
                let _ = writeln!(out, "  sectors         particle {} + antiparticle {} (complex dimensions)", s.particle, s.antiparticle);
            }
            None => {
                let _ = writeln!(out, "  sectors         one irreducible complexified space of dimension {}", f.internal_dim);
            }
        }
        let _ = writeln!(out, "  labels          {}", f.labels.join(" "));
        if !f.dropped_candidates.is_empty() {
            let _ = writeln!(out, "  not symmetries  {}", f.dropped_candidates.join("; "));
        }
        let _ = writeln!(out, "  antiparticles   {} ({})", yes_no(f.predicts_antiparticles), f.antiparticle_reason);
        if let Some(m) = &f.masses {
            let masses: Vec<String> = m.masses_squared.iter().map(|&x| num(x)).collect();
            let _ = writeln!(
                out,
                "  masses²         [{}] at vacuum {} (alpha {}, beta {}, {} massless)",
                masses.join(", "),
                vec_str(&m.vacuum),
                m.alpha,
                m.beta,
                m.massless_count
            );
        }
        if let Some(d) = &f.dof {
            let _ = writeln!(
                out,
                "  gauge dof       naive {}, constrained {}, physical {}, absorbed {}",
                d.naive, d.constrained, d.physical, d.absorbed
            );
        }
        if let Some(m) = &f.modes {
            let frac = m.antiparticle_fraction.map_or("n/a".to_string(), |x| format!("{x:.12}"));
            let _ = writeln!(
                out,
                "  lattice         {} sites, length {}, {} dynamics, antiparticle fraction {}",
                m.sites,
                m.length,
                m.dispersion.name(),
                frac
            );
        }
        for rule in &f.rules {
            let _ = writeln!(out, "    because: {rule}");
        }
    }
    if let Some(g) = &r.gauge {
        let _ = writeln!(out);
        let per: Vec<String> = g.fields.iter().map(|f| format!("{} {}", f.field, f.dof.physical)).collect();
        let _ = writeln!(
            out,
            "gauge bosons: physical degrees of freedom {}; {} absorbed by gauge symmetry",
            per.join(", "),
            g.total_absorbed
        );
    }
    if let Some(b) = &r.breaking {
        let _ = writeln!(out);
        let _ = writeln!(out, "symmetry breaking at {} = {}", b.vacuum_field, vec_str(&b.phi0));
        let _ = writeln!(out, "  broken factors    {}", b.broken_factors.join(", "));
        let _ = writeln!(out, "  unbroken factors  {}", if b.unbroken_factors.is_empty() { "none".into() } else { b.unbroken_factors.join(", ") });
        let _ = writeln!(out, "  residual symmetry dimension {} in basis [{}]", b.residual_dim, b.generator_labels.join(", "));
        for c in &b.residual_basis {
            let _ = writeln!(out, "    {}", vec_str(c));
        }
        let _ = writeln!(
            out,
            "  Goldstone directions {} ({} absorbed by gauge fields), physical scalars {}",
            b.orbit_dim, b.absorbed_goldstones, b.physical_scalars
        );
        let _ = writeln!(out, "  vectors: {} massive, {} massless", b.massive_vectors, b.massless_vectors);
        let blocks: Vec<String> = b
            .adjoint_blocks
            .iter()
            .map(|x| format!("{}{}", x.dim, if x.trivial { " trivial" } else { match x.real_type { RealTypeTag::SecretlyComplex => " complex", RealTypeTag::HonestlyReal => " real" } }))
            .collect();
        let _ = writeln!(out, "  residual action on the broken algebra: {}", blocks.join(" + "));
        for (field, bl) in &b.field_blocks {
            let parts: Vec<String> = bl
                .iter()
                .map(|x| format!("{}{}", x.dim, if x.trivial { " trivial" } else if x.real_type == RealTypeTag::SecretlyComplex { " complex" } else { " real" }))
                .collect();
            let _ = writeln!(out, "    {field}: {}", parts.join(" + "));
        }
    }
    let _ = writeln!(out);
    let passed = r.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "checks: {passed}/{} passed", r.checks.len());
    for c in r.checks.iter().filter(|c| !c.passed) {
        let _ = writeln!(out, "  FAILED {} on {}: {}", c.name, c.subject, c.detail);
    }
    out
}

pub fn demo(name: &str, seed: u64) -> Result<String> {
    let tol = TolerancePolicy::default();
    match name {
        "so2-vs-so3" => so2_vs_so3(&tol, seed),
        "higgs" => higgs(&tol, seed),
        "goldstone" => goldstone(&tol),
        _ => Err(Error::UnknownName(name.into())),
    }
}

fn so2_vs_so3(tol: &TolerancePolicy, seed: u64) -> Result<String> {
    let mut out = String::new();
    let so2 = RepData::new(2, so_basis(2), "so(2)")?;
    let rt = real_type(&so2, tol, seed)?;
    let j = rt.j.as_ref().expect("so(2) on the plane is secretly complex");
    let _ = writeln!(out, "SO(2) acting on R^2, generator");
    matrix_lines(&mut out, "  ", &so2.generators[0]);
    let _ = writeln!(out, "commutant dimension {} -> {}", rt.commutant_dim, tag(rt.tag));
    let _ = writeln!(out, "complex structure J");
    matrix_lines(&mut out, "  ", &j.j);
    let d = decompose(&so2, j, tol)?;
    let v: Vec<String> = d.basis_plus.column(0).iter().map(|&z| cnum(z)).collect();
    let w: Vec<String> = d.basis_minus.column(0).iter().map(|&z| cnum(z)).collect();
    let _ = writeln!(out, "+i eigenspace (particles):      ({})", v.join(", "));
    let _ = writeln!(out, "-i eigenspace (antiparticles):  ({})", w.join(", "));
    for theta in [0.3, 1.7] {
        let r = to_complex(&expm(&so2.generators[0], theta)?);
        let vp = d.basis_plus.column(0).into_owned();
        let vm = d.basis_minus.column(0).into_owned();
        let ep = (vp.adjoint() * &r * &vp)[(0, 0)];
        let em = (vm.adjoint() * &r * &vm)[(0, 0)];
        let _ = writeln!(
            out,
            "  R({theta}) acts as {} on the particle sector (e^(+i theta) = {}) and {} on the antiparticle sector",
            cnum(ep),
            cnum(Complex64::from_polar(1.0, theta)),
            cnum(em)
        );
    }
    let _ = writeln!(out);
    let so3 = RepData::new(3, so_basis(3), "so(3)")?;
    let rt = real_type(&so3, tol, seed)?;
    let cx = complexify(&so3);
    let comm = commuting_matrices(&cx.operators, 3, tol)?;
    let _ = writeln!(out, "SO(3) acting on R^3");
    let _ = writeln!(out, "commutant dimension {} -> {}", rt.commutant_dim, tag(rt.tag));
    let _ = writeln!(
        out,
        "complexified commutant dimension {}, complexification irreducible: {}",
        comm.len(),
        yes_no(check_irreducible_complex(&cx.operators, 3, tol))
    );
    let _ = writeln!(out, "so the SO(3) field has no separate antiparticles");
    Ok(out)
}

fn higgs(tol: &TolerancePolicy, seed: u64) -> Result<String> {
    let mut out = String::new();
    let theory = builtin("higgs-sector")?;
    let field = theory.field("higgs").expect("higgs-sector has a higgs field");
    let vac = theory.vacuum.as_ref().expect("higgs-sector has a vacuum");
    let rep = &field.internal;
    let labels = ["su(2) σx", "su(2) σy", "su(2) σz", "u(1)"];
    let q = field.charges["u(1)"];
    let phi0 = RealVector::from_column_slice(&vac.phi0);
    let _ = writeln!(out, "Higgs doublet, realified to R^4, hypercharge q = {q}, vacuum {}", vec_str(&vac.phi0));
    for (l, x) in labels.iter().zip(&rep.generators) {
        let _ = writeln!(out, "{l} generator, moves the vacuum to {}", vec_str((x * &phi0).as_slice()));
        matrix_lines(&mut out, "  ", x);
    }
    let s = analyse_vacuum(rep, &phi0, tol, seed)?;
    let _ = writeln!(out, "stabilizer dimension {}, vacuum orbit dimension {}", s.stabilizer.dim(), s.orbit_dim);
    for (c, b) in s.stabilizer.coefficients.iter().zip(&s.stabilizer.basis) {
        let _ = writeln!(out, "stabilizer coefficients on [{}]: {}", labels.join(", "), vec_str(c.as_slice()));
        matrix_lines(&mut out, "  ", b);
        let expected = &rep.generators[3] - &rep.generators[2] * q;
        let cos = b.component_mul(&expected).sum() / (b.norm() * expected.norm());
        let _ = writeln!(out, "cosine similarity with (u(1) − q σz): {cos:.12}");
    }
    let parts: Vec<String> = s
        .blocks
        .iter()
        .map(|b| {
            let axes: Vec<&str> = (0..4).filter(|&i| b.basis.row(i).norm() > 1e-9).map(|i| labels[i]).collect();
            format!("{{{}}} {}{}", axes.join(", "), tag(b.tag), if b.trivial { ", trivial" } else { "" })
        })
        .collect();
    let _ = writeln!(out, "residual adjoint action on su(2) + u(1):");
    for p in parts {
        let _ = writeln!(out, "  {p}");
    }
    Ok(out)
}

fn goldstone(tol: &TolerancePolicy) -> Result<String> {
    let mut out = String::new();
    let n = 3;
    let (alpha, beta) = (-1.0, 0.5);
    let p = QuarticPotential::euclidean(alpha, beta, n)?;
    let v = minimize(&p);
    let _ = writeln!(out, "V = alpha s + beta s^2 on R^{n}, alpha = {alpha}, beta = {beta}");
    let _ = writeln!(out, "vacuum {} on the sphere of radius {}", vec_str(v.phi0.as_slice()), num(v.orbit_radius));
    let _ = writeln!(out, "Hessian at the vacuum");
    matrix_lines(&mut out, "  ", &p.hessian(&v.phi0)?);
    let spec = hessian_spectrum(&p, &v, tol)?;
    let m: Vec<String> = spec.masses_squared.iter().map(|&x| num(x)).collect();
    let _ = writeln!(out, "masses² [{}]", m.join(", "));
    let rep = RepData::new(n, so_basis(n), "so(3)")?;
    let _ = writeln!(
        out,
        "{} massless modes, SO({n}) orbit dimension {}, finite-difference agreement {:.2e}",
        spec.massless_count,
        orbit_dimension(&rep, &v.phi0, tol),
        spec.fd_relative_error
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demos_render() {
        for d in DEMOS {
            let s = demo(d, 42).unwrap();
            assert!(!s.is_empty());
        }
        assert!(demo("so2-vs-so3", 42).unwrap().contains("(0.707107, -0.707107i)"));
        assert!(demo("goldstone", 42).unwrap().contains("2 massless modes"));
        assert!(matches!(demo("nope", 1), Err(Error::UnknownName(_))));
    }
}
