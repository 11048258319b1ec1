//! Complexification of real representations and the particle / antiparticle
//! split of secretly complex ones.
//!
//! `𝒱^𝒞` is carried as `ℂⁿ` in the canonical basis, with the natural
//! conjugation acting entrywise. In the pair picture `𝒱^𝒞 = 𝒱 ⊕ 𝒱` this is
//! `(v, w) ↦ (v, −w)` and multiplication by `i` is `(v, w) ↦ (−w, v)`; the two
//! pictures are isomorphic and only the first is implemented.
//!
//! Given a commuting complex structure `J`, the projectors
//! `P± = (1 ∓ i J_c) / 2` split `𝒱^𝒞` into the `±i` eigenspaces of `J_c`.
//! The `+i` eigenspace is labelled the particle sector.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::{
    commuting_matrices, expm, nullspace, nullspace_absolute, seeded_rng, to_complex, ComplexMatrix,
    RealMatrix, TolerancePolicy,
};
use crate::reps::{ComplexStructureJ, RepData};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexifiedRep {
    pub dim_c: usize,
    pub operators: Vec<ComplexMatrix>,
}

impl ComplexifiedRep {
    /// Entrywise conjugation, the natural antilinear involution of `𝒱^𝒞`.
    pub fn conjugate(v: &ComplexMatrix) -> ComplexMatrix {
        v.map(|z| z.conj())
    }

    /// True when every operator commutes with the conjugation, i.e. has real
    /// entries.
    pub fn is_real(&self, tol: &TolerancePolicy) -> bool {
        self.operators
            .iter()
            .all(|m| m.iter().all(|z| z.im.abs() <= tol.eps_rel * m.norm().max(1.0)))
    }
}

pub fn complexify(rep: &RepData) -> ComplexifiedRep {
    ComplexifiedRep {
        dim_c: rep.dim,
        operators: rep.generators.iter().map(to_complex).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorDecomposition {
    pub j: RealMatrix,
    pub p_plus: ComplexMatrix,
    pub p_minus: ComplexMatrix,
    /// Orthonormal columns spanning `range(P₊)`.
    pub basis_plus: ComplexMatrix,
    /// The entrywise conjugate of `basis_plus`, spanning `range(P₋)`.
    pub basis_minus: ComplexMatrix,
    pub rep_plus: Vec<ComplexMatrix>,
    pub rep_minus: Vec<ComplexMatrix>,
    pub sector_dim: usize,
}

impl SectorDecomposition {
    /// The same split with the roles of the two sectors exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            j: -&self.j,
            p_plus: self.p_minus.clone(),
            p_minus: self.p_plus.clone(),
            basis_plus: self.basis_minus.clone(),
            basis_minus: self.basis_plus.clone(),
            rep_plus: self.rep_minus.clone(),
            rep_minus: self.rep_plus.clone(),
            sector_dim: self.sector_dim,
        }
    }

    /// Matrices of the group element `exp(t Σ cᵢXᵢ)` on each sector, in the
    /// sector bases.
    pub fn group_action(&self, rep: &RepData, coeffs: &[f64], t: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
        if coeffs.len() != rep.generators.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} generators",
                coeffs.len(),
                rep.generators.len()
            )));
        }
        let x = rep
            .generators
            .iter()
            .zip(coeffs)
            .fold(RealMatrix::zeros(rep.dim, rep.dim), |acc, (g, &c)| acc + g * c);
        let g = to_complex(&expm(&x, t)?);
        Ok((
            self.basis_plus.adjoint() * &g * &self.basis_plus,
            self.basis_minus.adjoint() * &g * &self.basis_minus,
        ))
    }
}

/// Rotates each column so its first significant entry is real and positive.
fn fix_phases(mut b: ComplexMatrix) -> ComplexMatrix {
    for mut col in b.column_iter_mut() {
        let scale = col.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
        if let Some(z) = col.iter().find(|z| z.norm() > 1e-8 * scale).copied() {
            let phase = z.conj() / z.norm();
            col *= phase;
        }
    }
    b
}

/// Splits `𝒱^𝒞` into the particle and antiparticle sectors of `J`.
pub fn decompose(rep: &RepData, j: &ComplexStructureJ, tol: &TolerancePolicy) -> Result<SectorDecomposition> {
    j.check_against(rep, tol)?;
    let n = rep.dim;
    let i = Complex64::i();
    let id = ComplexMatrix::identity(n, n);
    let jc = to_complex(&j.j);
    let p_plus = (&id - &jc * i) * Complex64::new(0.5, 0.0);
    let p_minus = (&id + &jc * i) * Complex64::new(0.5, 0.0);
    let basis_plus = fix_phases(nullspace(&p_minus, tol)?);
    if basis_plus.ncols() * 2 != n {
        return Err(Error::NotSecretlyComplex(format!(
            "+i eigenspace has dimension {}, expected {}",
            basis_plus.ncols(),
            n / 2
        )));
    }
    let basis_minus = ComplexifiedRep::conjugate(&basis_plus);
    let restrict = |b: &ComplexMatrix| -> Vec<ComplexMatrix> {
        rep.generators
            .iter()
            .map(|x| b.adjoint() * to_complex(x) * b)
            .collect()
    };
    Ok(SectorDecomposition {
        j: j.j.clone(),
        rep_plus: restrict(&basis_plus),
        rep_minus: restrict(&basis_minus),
        sector_dim: basis_plus.ncols(),
        p_plus,
        p_minus,
        basis_plus,
        basis_minus,
    })
}

/// Schur's criterion: the complex commutant is one-dimensional.
pub fn check_irreducible_complex(operators: &[ComplexMatrix], dim: usize, tol: &TolerancePolicy) -> bool {
    commuting_matrices(operators, dim, tol)
        .map(|c| c.len() == 1)
        .unwrap_or(false)
}

/// Checks `(φ₊(g)v)* = φ₋(g)v*`: conjugating the particle-sector action
/// gives the antiparticle-sector action, generator by generator, and the
/// conjugation carries `range(P₊)` into `range(P₋)`.
pub fn verify_conjugate_pair(d: &SectorDecomposition, tol: &TolerancePolicy) -> bool {
    if d.rep_plus.len() != d.rep_minus.len() {
        return false;
    }
    let conj_plus = ComplexifiedRep::conjugate(&d.basis_plus);
    let carried = (&d.p_minus * &conj_plus - &conj_plus).norm();
    if carried > tol.eps_rel * conj_plus.norm().max(1.0) {
        return false;
    }
    d.rep_plus.iter().zip(&d.rep_minus).all(|(a, b)| {
        let lhs = ComplexifiedRep::conjugate(&(&d.basis_plus * a));
        let rhs = &d.basis_minus * b;
        (lhs - &rhs).norm() <= tol.eps_rel * a.norm().max(b.norm()).max(1.0)
    })
}

/// Forgetting: the real representation on the conjugation-fixed vectors of
/// `𝒱^𝒞`, computed in the pair picture where `𝒱^𝒞 ≅ ℝ²ⁿ` and the
/// conjugation is `(v, w) ↦ (v, −w)`.
pub fn restrict_to_real_form(c: &ComplexifiedRep, tol: &TolerancePolicy) -> Result<RepData> {
    let n = c.dim_c;
    let mut conj = RealMatrix::identity(2 * n, 2 * n);
    for k in n..2 * n {
        conj[(k, k)] = -1.0;
    }
    let fixed = nullspace(&(conj - RealMatrix::identity(2 * n, 2 * n)), tol)?;
    let pair = |m: &ComplexMatrix| -> RealMatrix {
        let re = m.map(|z| z.re);
        let im = m.map(|z| z.im);
        let mut out = RealMatrix::zeros(2 * n, 2 * n);
        out.view_mut((0, 0), (n, n)).copy_from(&re);
        out.view_mut((0, n), (n, n)).copy_from(&(-&im));
        out.view_mut((n, 0), (n, n)).copy_from(&im);
        out.view_mut((n, n), (n, n)).copy_from(&re);
        out
    };
    let generators = c
        .operators
        .iter()
        .map(|m| fixed.transpose() * pair(m) * &fixed)
        .collect();
    RepData::new(fixed.ncols(), generators, "real form")
}

/// Eigenspaces of a seeded random element of the complex commutant. For an
/// irreducible complexification the only one is the whole space.
pub fn commutant_eigenspaces(
    operators: &[ComplexMatrix],
    dim: usize,
    tol: &TolerancePolicy,
    seed: u64,
) -> Result<Vec<ComplexMatrix>> {
    let basis = commuting_matrices(operators, dim, tol)?;
    let mut rng = seeded_rng(seed);
    let c = basis.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, b| {
        acc + b * Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let scale = c.norm().max(f64::MIN_POSITIVE);
    let eigenvalues = c
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::InvalidInput("Schur form did not converge".into()))?;
    let mut distinct: Vec<Complex64> = Vec::new();
    for z in eigenvalues.iter() {
        if distinct.iter().all(|w| (w - z).norm() > 1e-6 * scale) {
            distinct.push(*z);
        }
    }
    distinct
        .into_iter()
        .map(|z| {
            let shifted = &c - ComplexMatrix::identity(dim, dim) * z;
            nullspace_absolute(&shifted, 1e-7 * scale)
        })
        .collect()
}
