//! Spontaneous symmetry breaking for quartic potentials
//! `V(φ) = α⟨φ,φ⟩ + β⟨φ,φ⟩²`.
//!
//! Masses are Hessian eigenvalues in the `½m²φ²` normalization, taken in
//! coordinates orthonormal for the invariant metric. For `α > 0` every mode
//! has `m² = 2α`; for `α < 0` the vacuum sits on the sphere
//! `⟨φ,φ⟩ = −α/2β`, the orbit directions are massless and the radial mode has
//! `m² = −4α`.

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::adjoint_matrices;
use crate::kernel::{
    commutator, commuting_matrices, eig_symmetric, nullspace, orthonormalize, rank, seeded_rng, RealMatrix,
    RealVector, TolerancePolicy,
};
use crate::reps::{find_invariant_metric, real_type, InvariantMetric, RealTypeTag, RepData};

#[derive(Debug, Clone, PartialEq)]
pub struct QuarticPotential {
    pub alpha: f64,
    pub beta: f64,
    pub dim: usize,
    pub metric: InvariantMetric,
}

impl QuarticPotential {
    pub fn new(alpha: f64, beta: f64, metric: InvariantMetric) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidInput("potential coefficients must be finite".into()));
        }
        if beta <= 0.0 {
            return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
        }
        let h = &metric.h;
        if !h.is_square() || h.nrows() == 0 {
            return Err(Error::InvalidInput("metric must be a non-empty square matrix".into()));
        }
        metric.cholesky_factor()?;
        Ok(Self {
            alpha,
            beta,
            dim: h.nrows(),
            metric,
        })
    }

    /// Potential with the Euclidean metric on `ℝᴺ`.
    pub fn euclidean(alpha: f64, beta: f64, dim: usize) -> Result<Self> {
        Self::new(alpha, beta, InvariantMetric { h: RealMatrix::identity(dim, dim) })
    }

    fn check_point(&self, phi: &RealVector) -> Result<()> {
        if phi.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "field has {} components, potential acts on {}",
                phi.len(),
                self.dim
            )));
        }
        Ok(())
    }

    fn norm_sq(&self, phi: &RealVector) -> f64 {
        self.metric.inner(phi, phi)
    }

    pub fn value(&self, phi: &RealVector) -> Result<f64> {
        self.check_point(phi)?;
        let s = self.norm_sq(phi);
        Ok(self.alpha * s + self.beta * s * s)
    }

    pub fn gradient(&self, phi: &RealVector) -> Result<RealVector> {
        self.check_point(phi)?;
        let s = self.norm_sq(phi);
        Ok(&self.metric.h * phi * (2.0 * (self.alpha + 2.0 * self.beta * s)))
    }

    /// `(2α + 4βs)h + 8β(hφ)(hφ)ᵀ` with `s = ⟨φ,φ⟩`.
    pub fn hessian(&self, phi: &RealVector) -> Result<RealMatrix> {
        self.check_point(phi)?;
        let s = self.norm_sq(phi);
        let hp = &self.metric.h * phi;
        Ok(&self.metric.h * (2.0 * self.alpha + 4.0 * self.beta * s) + &hp * hp.transpose() * (8.0 * self.beta))
    }

    /// Second differences of `V` itself with step `1e−4·max(1, ‖φ‖)`.
    pub fn hessian_finite_difference(&self, phi: &RealVector) -> Result<RealMatrix> {
        self.check_point(phi)?;
        let n = self.dim;
        let step = 1e-4 * phi.norm().max(1.0);
        let v = |x: &RealVector| self.value(x).expect("dimension checked");
        let mut out = RealMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let shifted = |si: f64, sj: f64| {
                    let mut x = phi.clone();
                    x[i] += si * step;
                    x[j] += sj * step;
                    v(&x)
                };
                let d = (shifted(1.0, 1.0) - shifted(1.0, -1.0) - shifted(-1.0, 1.0) + shifted(-1.0, -1.0))
                    / (4.0 * step * step);
                out[(i, j)] = d;
                out[(j, i)] = d;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VacuumSolution {
    pub phi0: RealVector,
    pub orbit_radius: f64,
    /// The minimum is one point of a continuous family.
    pub degenerate: bool,
}

/// The representative minimum. For `α < 0` this is `r·e₀/√h₀₀`, the point of
/// the vacuum sphere on the first coordinate axis.
pub fn minimize(p: &QuarticPotential) -> VacuumSolution {
    if p.alpha >= 0.0 {
        return VacuumSolution {
            phi0: RealVector::zeros(p.dim),
            orbit_radius: 0.0,
            degenerate: false,
        };
    }
    let radius = (-p.alpha / (2.0 * p.beta)).sqrt();
    let mut phi0 = RealVector::zeros(p.dim);
    phi0[0] = radius / p.metric.h[(0, 0)].sqrt();
    VacuumSolution {
        phi0,
        orbit_radius: radius,
        // ℝ¹ has two isolated vacua ±r, not a continuum
        degenerate: p.dim > 1,
    }
}

/// As [`minimize`], refusing `α = 0` where the vacuum is flat to quadratic
/// order.
pub fn minimize_strict(p: &QuarticPotential) -> Result<VacuumSolution> {
    if p.alpha == 0.0 {
        return Err(Error::DegenerateQuartic);
    }
    Ok(minimize(p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassSpectrum {
    /// Ascending.
    pub masses_squared: Vec<f64>,
    pub massless_count: usize,
    /// `‖H_analytic − H_fd‖ / max(‖H_analytic‖, 1)`.
    pub fd_relative_error: f64,
}

/// `h^{−1/2}` for a symmetric positive-definite `h`.
fn inverse_sqrt(h: &RealMatrix) -> RealMatrix {
    let e = h.clone().symmetric_eigen();
    let d = e.eigenvalues.map(|v| 1.0 / v.sqrt());
    &e.eigenvectors * RealMatrix::from_diagonal(&d) * e.eigenvectors.transpose()
}

pub fn hessian_spectrum(p: &QuarticPotential, v: &VacuumSolution, tol: &TolerancePolicy) -> Result<MassSpectrum> {
    let hess = p.hessian(&v.phi0)?;
    let fd = p.hessian_finite_difference(&v.phi0)?;
    let fd_relative_error = (&hess - &fd).norm() / hess.norm().max(1.0);
    let w = inverse_sqrt(&p.metric.h);
    let normalized = &w * &hess * &w;
    let normalized = (&normalized + normalized.transpose()) * 0.5;
    let eig = eig_symmetric(&normalized, tol)?;
    let scale = eig.values.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
    let cut = tol.eps_rank * scale;
    if let Some(&lowest) = eig.values.iter().find(|&&x| x < -cut) {
        return Err(Error::NotAMinimum(lowest));
    }
    let masses_squared: Vec<f64> = eig.values.iter().map(|&x| if x.abs() <= cut { 0.0 } else { x }).collect();
    let massless_count = masses_squared.iter().filter(|&&x| x == 0.0).count();
    Ok(MassSpectrum {
        masses_squared,
        massless_count,
        fd_relative_error,
    })
}

/// Dimension of the vacuum orbit, `dim span{Xφ₀}`.
pub fn orbit_dimension(rep: &RepData, phi0: &RealVector, tol: &TolerancePolicy) -> usize {
    if rep.generators.is_empty() || phi0.norm() == 0.0 {
        return 0;
    }
    let cols: Vec<RealVector> = rep.generators.iter().map(|x| x * phi0).collect();
    let m = RealMatrix::from_columns(&cols);
    if m.norm() <= tol.eps_rank * phi0.norm() {
        return 0;
    }
    rank(&m, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerAlgebra {
    pub basis: Vec<RealMatrix>,
    /// Coordinates of each basis element in the generators it was built from.
    pub coefficients: Vec<RealVector>,
}

impl StabilizerAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `{Σcᵢ Xᵢ : (Σcᵢ Xᵢ) φ₀ = 0}`. Each coefficient vector is scaled to unit
/// length with its largest entry positive.
pub fn stabilizer(rep: &RepData, phi0: &RealVector, tol: &TolerancePolicy) -> Result<StabilizerAlgebra> {
    if phi0.len() != rep.dim {
        return Err(Error::DimensionMismatch(format!(
            "vacuum has {} components, representation acts on {}",
            phi0.len(),
            rep.dim
        )));
    }
    let k = rep.generators.len();
    if k == 0 {
        return Ok(StabilizerAlgebra {
            basis: Vec::new(),
            coefficients: Vec::new(),
        });
    }
    let coeff_basis = if phi0.norm() == 0.0 {
        RealMatrix::identity(k, k)
    } else {
        let cols: Vec<RealVector> = rep.generators.iter().map(|x| x * phi0).collect();
        nullspace(&RealMatrix::from_columns(&cols), tol)?
    };
    let mut coefficients = Vec::new();
    let mut basis = Vec::new();
    for c in coeff_basis.column_iter() {
        let mut c: RealVector = c.into_owned();
        let imax = c.iamax();
        if c[imax] < 0.0 {
            c.neg_mut();
        }
        let x = rep
            .generators
            .iter()
            .zip(c.iter())
            .fold(RealMatrix::zeros(rep.dim, rep.dim), |acc, (g, &w)| acc + g * w);
        basis.push(x);
        coefficients.push(c);
    }
    Ok(StabilizerAlgebra { basis, coefficients })
}

/// Largest residual of re-expanding `[Bᵢ, Bⱼ]` in the stabilizer basis,
/// relative to `‖Bᵢ‖‖Bⱼ‖`.
pub fn closure_residual(stab: &StabilizerAlgebra) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (i, a) in stab.basis.iter().enumerate() {
        for b in &stab.basis[i + 1..] {
            let (_, r) = crate::groups::span_coordinates(&stab.basis, &commutator(a, b))?;
            worst = worst.max(r / (a.norm() * b.norm()).max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

/// The stabilizer acting on the Lie algebra spanned by `algebra` through the
/// adjoint action, as a representation in the coordinates of `algebra`.
pub fn adjoint_action(stab: &StabilizerAlgebra, algebra: &[RealMatrix], tol: &TolerancePolicy) -> Result<RepData> {
    let gens = adjoint_matrices(algebra, &stab.basis, tol)?;
    RepData::new(algebra.len(), gens, "residual adjoint")
}

/// The stabilizer acting on another field: each basis element's coefficients
/// are applied to that field's generators for the same symmetry factors.
pub fn action_on(stab: &StabilizerAlgebra, field_generators: &[RealMatrix], dim: usize) -> Result<RepData> {
    let gens = stab
        .coefficients
        .iter()
        .map(|c| {
            if c.len() != field_generators.len() {
                return Err(Error::DimensionMismatch(format!(
                    "stabilizer has {} coefficients, field has {} generators",
                    c.len(),
                    field_generators.len()
                )));
            }
            Ok(field_generators
                .iter()
                .zip(c.iter())
                .fold(RealMatrix::zeros(dim, dim), |acc, (g, &w)| acc + g * w))
        })
        .collect::<Result<Vec<_>>>()?;
    RepData::new(dim, gens, "residual")
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantBlock {
    /// Columns spanning the block in the target's coordinates.
    pub basis: RealMatrix,
    pub tag: RealTypeTag,
    /// Every generator acts as zero on the block.
    pub trivial: bool,
}

impl InvariantBlock {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Splits `target` into subspaces irreducible under its generators.
///
/// In coordinates orthonormal for an invariant metric, a generic symmetric
/// element of the commutant has eigenspaces that are exactly the irreducible
/// summands (repeated irreducibles are split apart because the element is
/// random). Within each summand, and within the trivial part, the basis is
/// rebuilt from the projected coordinate axes so that blocks align with
/// coordinates whenever possible; a trivial part of dimension `d` becomes `d`
/// one-dimensional blocks.
pub fn residual_decompose(target: &RepData, tol: &TolerancePolicy, seed: u64) -> Result<Vec<InvariantBlock>> {
    let n = target.dim;
    let metric = find_invariant_metric(target, tol)?;
    let l = metric.cholesky_factor()?;
    let l_inv_t = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NoPositiveSolution("metric factor is singular".into()))?
        .transpose();
    let frame = |x: &RealMatrix| l.transpose() * x * &l_inv_t;
    let gens: Vec<RealMatrix> = target.generators.iter().map(frame).collect();
    let scale = gens.iter().fold(0.0_f64, |a, g| a.max(g.norm()));
    let is_zero = |g: &RealMatrix, q: &RealMatrix| (g * q).norm() <= tol.eps_rank * scale.max(1.0);

    let commutant = commuting_matrices(&gens, n, tol)?;
    let mut rng = seeded_rng(seed);
    let c = commutant.iter().fold(RealMatrix::zeros(n, n), |acc, b| {
        acc + b * rng.random_range(-1.0..1.0)
    });
    let s = (&c + c.transpose()) * 0.5;
    let eig = eig_symmetric(&s, tol)?;
    let gap = 1e-6 * eig.values.iter().fold(1e-300_f64, |a, x| a.max(x.abs()));

    // Eigenspaces of s, with the trivial parts collected separately.
    let mut spaces: Vec<RealMatrix> = Vec::new();
    let mut trivial_cols: Vec<RealVector> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eig.values[end] - eig.values[start]).abs() <= gap {
            end += 1;
        }
        let q = eig.vectors.columns(start, end - start).into_owned();
        if gens.iter().all(|g| is_zero(g, &q)) {
            trivial_cols.extend(q.column_iter().map(|c| c.into_owned()));
        } else {
            spaces.push(q);
        }
        start = end;
    }

    let axes: Vec<RealVector> = (0..n).map(|i| l.transpose().column(i).into_owned()).collect();
    let aligned = |q: &RealMatrix| -> RealMatrix {
        let projected: Vec<RealVector> = axes.iter().map(|a| q * (q.transpose() * a)).collect();
        orthonormalize(&RealMatrix::from_columns(&projected), None, 1e-8)
    };

    let mut blocks: Vec<(RealMatrix, bool)> = Vec::new();
    for q in &spaces {
        blocks.push((aligned(q), false));
    }
    if !trivial_cols.is_empty() {
        let t = aligned(&RealMatrix::from_columns(&trivial_cols));
        for c in t.column_iter() {
            blocks.push((RealMatrix::from_columns(&[c.into_owned()]), true));
        }
    }

    let mut out = Vec::with_capacity(blocks.len());
    for (q, trivial) in blocks {
        let restricted = RepData::new(q.ncols(), gens.iter().map(|g| q.transpose() * g * &q).collect(), "block")?;
        let tag = real_type(&restricted, tol, seed)?.tag;
        out.push(InvariantBlock {
            basis: &l_inv_t * &q,
            tag,
            trivial,
        });
    }
    let leading = |b: &InvariantBlock| {
        let cut = 1e-8 * b.basis.amax();
        (0..n)
            .find(|&i| b.basis.row(i).iter().any(|v| v.abs() > cut))
            .unwrap_or(n)
    };
    out.sort_by_key(leading);
    Ok(out)
}

/// Residual-symmetry summary of a vacuum: stabilizer, Goldstone count and
/// the adjoint decomposition of the broken algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakingSummary {
    pub stabilizer: StabilizerAlgebra,
    pub orbit_dim: usize,
    pub blocks: Vec<InvariantBlock>,
}

pub fn analyse_vacuum(rep: &RepData, phi0: &RealVector, tol: &TolerancePolicy, seed: u64) -> Result<BreakingSummary> {
    let stab = stabilizer(rep, phi0, tol)?;
    let orbit_dim = orbit_dimension(rep, phi0, tol);
    let blocks = if stab.dim() == 0 || rep.generators.is_empty() {
        let trivial = RepData::new(rep.generators.len().max(1), Vec::new(), "trivial")?;
        residual_decompose(&trivial, tol, seed)?
    } else {
        residual_decompose(&adjoint_action(&stab, &rep.generators, tol)?, tol, seed)?
    };
    Ok(BreakingSummary {
        stabilizer: stab,
        orbit_dim,
        blocks,
    })
}

pub fn unit(dim: usize, i: usize) -> RealVector {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}
