//! Standard matrix Lie algebras and the realification used to turn complex
//! representations into real ones.
//!
//! Realification uses interleaved coordinates `(Re z₁, Im z₁, Re z₂, …)`, so a
//! complex entry `a + ib` becomes the block `[[a, −b], [b, a]]` and
//! multiplication by `i` becomes `diag(K, …, K)` with `K = [[0, −1], [1, 0]]`.
//!
//! Anti-Hermitian generators follow the `exp(−iθT)` convention: su(n) acts
//! through `−iσₐ` / `−iλₐ/2` and a u(1) factor of charge `q` through `−iq·1`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{commutator, vectorize, ComplexMatrix, RealMatrix, RealVector, TolerancePolicy};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The planar rotation generator `[[0, −1], [1, 0]]`.
pub fn rotation_generator() -> RealMatrix {
    RealMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
}

/// Basis `{E_ba − E_ab : a < b}` of so(n); for n = 2 this is
/// [`rotation_generator`].
pub fn so_basis(n: usize) -> Vec<RealMatrix> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in (a + 1)..n {
            let mut m = RealMatrix::zeros(n, n);
            m[(b, a)] = 1.0;
            m[(a, b)] = -1.0;
            out.push(m);
        }
    }
    out
}

pub fn pauli() -> [ComplexMatrix; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        ComplexMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        ComplexMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        ComplexMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

pub fn gell_mann() -> [ComplexMatrix; 8] {
    let mut out: [ComplexMatrix; 8] = std::array::from_fn(|_| ComplexMatrix::zeros(3, 3));
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    out[0][(0, 1)] = one;
    out[0][(1, 0)] = one;
    out[1][(0, 1)] = -i;
    out[1][(1, 0)] = i;
    out[2][(0, 0)] = one;
    out[2][(1, 1)] = -one;
    out[3][(0, 2)] = one;
    out[3][(2, 0)] = one;
    out[4][(0, 2)] = -i;
    out[4][(2, 0)] = i;
    out[5][(1, 2)] = one;
    out[5][(2, 1)] = one;
    out[6][(1, 2)] = -i;
    out[6][(2, 1)] = i;
    let s = 1.0 / 3f64.sqrt();
    out[7][(0, 0)] = c(s, 0.0);
    out[7][(1, 1)] = c(s, 0.0);
    out[7][(2, 2)] = c(-2.0 * s, 0.0);
    out
}

/// `−iσₐ`, a ∈ {x, y, z}.
pub fn su2_defining() -> Vec<ComplexMatrix> {
    pauli().iter().map(|s| s * c(0.0, -1.0)).collect()
}

/// `−iλₐ/2`.
pub fn su3_defining() -> Vec<ComplexMatrix> {
    gell_mann().iter().map(|l| l * c(0.0, -0.5)).collect()
}

/// `−iq·1` on `ℂ^dim`.
pub fn u1_charged(q: f64, dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim) * c(0.0, -q)
}

/// The real 2n×2n matrix of a complex n×n matrix.
pub fn realify(m: &ComplexMatrix) -> RealMatrix {
    let (r, cc) = m.shape();
    let mut out = RealMatrix::zeros(2 * r, 2 * cc);
    for i in 0..r {
        for j in 0..cc {
            let z = m[(i, j)];
            out[(2 * i, 2 * j)] = z.re;
            out[(2 * i, 2 * j + 1)] = -z.im;
            out[(2 * i + 1, 2 * j)] = z.im;
            out[(2 * i + 1, 2 * j + 1)] = z.re;
        }
    }
    out
}

pub fn realify_vector(z: &[Complex64]) -> RealVector {
    RealVector::from_iterator(2 * z.len(), z.iter().flat_map(|w| [w.re, w.im]))
}

/// `A ⊗ 1` and `1 ⊗ B` lifts onto a tensor product.
pub fn lift_left(a: &ComplexMatrix, right_dim: usize) -> ComplexMatrix {
    a.kronecker(&ComplexMatrix::identity(right_dim, right_dim))
}

pub fn lift_right(left_dim: usize, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(left_dim, left_dim).kronecker(b)
}

/// Coordinates of `m` in the span of `basis` (least squares), with the
/// residual norm of the fit.
pub fn span_coordinates(basis: &[RealMatrix], m: &RealMatrix) -> Result<(RealVector, f64)> {
    if basis.is_empty() {
        return Ok((RealVector::zeros(0), m.norm()));
    }
    let cols: Vec<_> = basis.iter().map(vectorize).collect();
    let g = DMatrix::from_columns(&cols);
    let target = vectorize(m);
    let svd = g.clone().svd(true, true);
    let coords = svd
        .solve(&target, 1e-12 * svd.singular_values.max().max(f64::MIN_POSITIVE))
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let residual = (&g * &coords - target).norm();
    Ok((coords, residual))
}

/// Matrices of `ad_x` for each `x` in `elements`, in the coordinates of the
/// Lie algebra spanned by `basis`.
pub fn adjoint_matrices(
    basis: &[RealMatrix],
    elements: &[RealMatrix],
    tol: &TolerancePolicy,
) -> Result<Vec<RealMatrix>> {
    let n = basis.len();
    if n == 0 {
        return Err(Error::InvalidInput("adjoint action needs a non-empty basis".into()));
    }
    elements
        .iter()
        .map(|x| {
            let mut ad = RealMatrix::zeros(n, n);
            for (j, b) in basis.iter().enumerate() {
                let bracket = commutator(x, b);
                let (coords, residual) = span_coordinates(basis, &bracket)?;
                if residual > tol.eps_rel * (x.norm() * b.norm()).max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "basis is not closed under the bracket (residual {residual:.3e})"
                    )));
                }
                ad.set_column(j, &coords);
            }
            Ok(ad)
        })
        .collect()
}
