//! Dense linear algebra over real and complex scalars.
//!
//! Null spaces and spectra go through nalgebra's SVD, symmetric eigensolver
//! and real Schur form; the matrix exponential is computed here by scaling and
//! squaring a truncated Taylor series. Every numeric decision that the rest of
//! the crate makes (rank, equality, commutation) is cut by one
//! [`TolerancePolicy`].

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealVector = DVector<f64>;
pub type ComplexVector = DVector<Complex64>;

/// The single numerical cut used for rank, equality and commutation tests.
///
/// `eps_rel` bounds residuals relative to the size of the objects involved.
/// `eps_rank` is a relative factor: singular values below
/// `eps_rank * ‖M‖₂` count as zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancePolicy {
    pub eps_rel: f64,
    pub eps_rank: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            eps_rel: 1e-9,
            eps_rank: 1e-8,
        }
    }
}

impl TolerancePolicy {
    pub fn new(eps_rel: f64, eps_rank: f64) -> Result<Self> {
        let tol = Self { eps_rel, eps_rank };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_rel.is_finite() && self.eps_rel > 0.0) {
            return Err(Error::InvalidInput(format!(
                "eps_rel must be positive, got {}",
                self.eps_rel
            )));
        }
        if !(self.eps_rank.is_finite() && self.eps_rank > 0.0) {
            return Err(Error::InvalidInput(format!(
                "eps_rank must be positive, got {}",
                self.eps_rank
            )));
        }
        Ok(())
    }

    /// Absolute singular-value cutoff for a matrix of spectral norm `norm`.
    pub fn rank_cutoff(&self, norm: f64) -> f64 {
        self.eps_rank * norm
    }
}

/// Deterministic generator used for every random draw in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ensure_finite<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, what: &str) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::InvalidInput(format!("{what} has an empty shape")));
    }
    if m.iter().all(|x| x.clone().modulus().is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} has non-finite entries")))
    }
}

pub fn ensure_square<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, what: &str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Largest singular value.
pub fn spectral_norm<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, &s| acc.max(s))
}

pub fn commutator<T: ComplexField>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    a * b - b * a
}

pub fn anticommutator<T: ComplexField>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    a * b + b * a
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn to_complex_vector(v: &RealVector) -> ComplexVector {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Column-major vectorization, matching `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
pub fn vectorize<T: ComplexField>(m: &DMatrix<T>) -> DVector<T> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvectorize<T: ComplexField>(v: &DVector<T>, rows: usize, cols: usize) -> DMatrix<T> {
    DMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// Orthonormal basis (as columns) of the kernel of `m`.
///
/// A singular value counts as zero when it is at most
/// `tol.eps_rank * ‖m‖₂`. Wide matrices are padded with zero rows so the
/// SVD exposes the full right singular basis.
pub fn nullspace<T>(m: &DMatrix<T>, tol: &TolerancePolicy) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64>,
{
    right_kernel(m, |sigma_max| tol.rank_cutoff(sigma_max))
}

/// Kernel with an absolute singular-value cutoff.
pub fn nullspace_absolute<T>(m: &DMatrix<T>, cutoff: f64) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64>,
{
    right_kernel(m, |_| cutoff)
}

fn right_kernel<T, F>(m: &DMatrix<T>, cutoff: F) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64>,
    F: Fn(f64) -> f64,
{
    let cols = m.ncols();
    if cols == 0 {
        return Err(Error::InvalidInput("nullspace of a matrix with no columns".into()));
    }
    if !m.iter().all(|x| x.clone().modulus().is_finite()) {
        return Err(Error::InvalidInput("nullspace input has non-finite entries".into()));
    }
    // R from a QR factorization has the same singular values and right
    // singular vectors, and the SVD of the square R is much cheaper.
    let padded = if m.nrows() > 2 * cols {
        m.clone().qr().r()
    } else if m.nrows() < cols {
        let mut p = DMatrix::<T>::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::InvalidInput("SVD did not return right singular vectors".into()))?;
    let sigma_max = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
    let cut = cutoff(sigma_max);
    let rows: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cut)
        .map(|(i, _)| i)
        .collect();
    let mut basis = DMatrix::<T>::zeros(cols, rows.len());
    for (k, &row) in rows.iter().enumerate() {
        for c in 0..cols {
            basis[(c, k)] = v_t[(row, c)].clone().conjugate();
        }
    }
    Ok(basis)
}

/// Numerical rank under the same cutoff as [`nullspace`].
pub fn rank<T>(m: &DMatrix<T>, tol: &TolerancePolicy) -> usize
where
    T: ComplexField<RealField = f64>,
{
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let sigma_max = sv.iter().fold(0.0_f64, |a, &s| a.max(s));
    let cutoff = tol.rank_cutoff(sigma_max);
    if sigma_max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis of the column space.
pub fn column_space<T>(m: &DMatrix<T>, tol: &TolerancePolicy) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    if m.ncols() == 0 {
        return DMatrix::<T>::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let sigma_max = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
    let cutoff = tol.rank_cutoff(sigma_max);
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max > 0.0 && s > cutoff)
        .map(|(i, _)| i)
        .collect();
    let mut out = DMatrix::<T>::zeros(m.nrows(), keep.len());
    for (k, &i) in keep.iter().enumerate() {
        out.set_column(k, &u.column(i));
    }
    out
}

/// Basis of all matrices commuting with every operator in `ops`, each of
/// unit Frobenius norm and mutually orthogonal. With no operators the whole
/// matrix algebra is returned.
pub fn commuting_matrices<T>(ops: &[DMatrix<T>], dim: usize, tol: &TolerancePolicy) -> Result<Vec<DMatrix<T>>>
where
    T: ComplexField<RealField = f64>,
{
    if dim == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let n2 = dim * dim;
    let identity = DMatrix::<T>::identity(dim, dim);
    let mut system = DMatrix::<T>::zeros(ops.len() * n2, n2);
    for (i, op) in ops.iter().enumerate() {
        if op.nrows() != dim || op.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "operator {i} is {}x{}, expected {dim}x{dim}",
                op.nrows(),
                op.ncols()
            )));
        }
        // vec(X A - A X) = (Aᵀ ⊗ I - I ⊗ A) vec(X)
        let block = op.transpose().kronecker(&identity) - identity.kronecker(op);
        system.view_mut((i * n2, 0), (n2, n2)).copy_from(&block);
    }
    let basis = if ops.is_empty() {
        DMatrix::<T>::identity(n2, n2)
    } else {
        nullspace(&system, tol)?
    };
    Ok((0..basis.ncols())
        .map(|k| unvectorize(&basis.column(k).into_owned(), dim, dim))
        .collect())
}

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: RealMatrix,
}

#[derive(Debug, Clone)]
pub struct GeneralEigen {
    /// Conjugate-closed, sorted by (real part, imaginary part).
    pub values: Vec<Complex64>,
    /// Eigenvectors for each distinct eigenvalue cluster, as columns.
    pub vectors: ComplexMatrix,
    /// `owner[k]` is the index into `values` of the eigenvalue whose
    /// eigenspace column `k` belongs to.
    pub owner: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum Eigen {
    Symmetric(SymmetricEigen),
    General(GeneralEigen),
}

pub fn eig(m: &RealMatrix, symmetric: bool, tol: &TolerancePolicy) -> Result<Eigen> {
    if symmetric {
        eig_symmetric(m, tol).map(Eigen::Symmetric)
    } else {
        eig_general(m, tol).map(Eigen::General)
    }
}

pub fn eig_symmetric(m: &RealMatrix, tol: &TolerancePolicy) -> Result<SymmetricEigen> {
    ensure_finite(m, "matrix")?;
    ensure_square(m, "matrix")?;
    let norm = m.norm();
    let asym = (m - m.transpose()).norm();
    if asym > tol.eps_rel * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidInput(format!(
            "matrix is not symmetric (‖M − Mᵀ‖ = {asym:.3e})"
        )));
    }
    let sym = (m + m.transpose()) * 0.5;
    let decomposition = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..decomposition.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[a]
            .partial_cmp(&decomposition.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| decomposition.eigenvalues[i]).collect();
    let mut vectors = RealMatrix::zeros(m.nrows(), m.ncols());
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &decomposition.eigenvectors.column(i));
    }
    Ok(SymmetricEigen { values, vectors })
}

pub fn eig_general(m: &RealMatrix, tol: &TolerancePolicy) -> Result<GeneralEigen> {
    ensure_finite(m, "matrix")?;
    ensure_square(m, "matrix")?;
    let n = m.nrows();
    let mut values: Vec<Complex64> = m.clone().complex_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .expect("finite")
            .then(a.im.partial_cmp(&b.im).expect("finite"))
    });

    let scale = spectral_norm(m).max(1.0);
    let cluster_tol = 1e-7 * scale;
    let cm = to_complex(m);
    let mut columns: Vec<ComplexVector> = Vec::new();
    let mut owner = Vec::new();
    let mut seen: Vec<Complex64> = Vec::new();
    for (idx, &lambda) in values.iter().enumerate() {
        if seen.iter().any(|s| (s - lambda).norm() <= cluster_tol) {
            continue;
        }
        seen.push(lambda);
        let shifted = &cm - ComplexMatrix::identity(n, n) * lambda;
        // Looser cut than the global rank policy: a computed eigenvalue is
        // only accurate to roughly sqrt(machine eps) for clustered spectra.
        let local = TolerancePolicy {
            eps_rel: tol.eps_rel,
            eps_rank: tol.eps_rank.max(1e-7),
        };
        let kernel = nullspace_absolute(&shifted, local.eps_rank * scale)?;
        for c in 0..kernel.ncols() {
            columns.push(kernel.column(c).into_owned());
            owner.push(idx);
        }
    }
    let vectors = if columns.is_empty() {
        ComplexMatrix::zeros(n, 0)
    } else {
        ComplexMatrix::from_columns(&columns)
    };
    Ok(GeneralEigen {
        values,
        vectors,
        owner,
    })
}

const TAYLOR_TERMS: usize = 24;

/// `exp(t·X)` by scaling and squaring.
pub fn expm(x: &RealMatrix, t: f64) -> Result<RealMatrix> {
    ensure_finite(x, "generator")?;
    ensure_square(x, "generator")?;
    if !t.is_finite() {
        return Err(Error::InvalidInput("time parameter is not finite".into()));
    }
    let n = x.nrows();
    let a = x * t;
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings);

    let mut result = RealMatrix::identity(n, n);
    let mut term = RealMatrix::identity(n, n);
    for k in 1..=TAYLOR_TERMS {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.norm() <= f64::EPSILON * result.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Gram–Schmidt on the columns of `m` with respect to the inner product
/// `⟨u, v⟩ = u^H g v`; columns that become negligible are dropped.
pub fn orthonormalize<T>(m: &DMatrix<T>, metric: Option<&DMatrix<T>>, cutoff: f64) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    let inner = |u: &DVector<T>, v: &DVector<T>| -> T {
        match metric {
            Some(g) => (u.adjoint() * g * v)[(0, 0)].clone(),
            None => u.dotc(v),
        }
    };
    let mut kept: Vec<DVector<T>> = Vec::new();
    for c in 0..m.ncols() {
        let mut v = m.column(c).into_owned();
        for _ in 0..2 {
            for q in &kept {
                let proj = inner(q, &v);
                v -= q * proj;
            }
        }
        let norm = inner(&v, &v).real().max(0.0).sqrt();
        if norm > cutoff {
            kept.push(v / T::from_real(norm));
        }
    }
    if kept.is_empty() {
        DMatrix::<T>::zeros(m.nrows(), 0)
    } else {
        DMatrix::from_columns(&kept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn nullspace_of_zero_is_everything() {
        let basis = nullspace(&RealMatrix::zeros(3, 3), &tol()).unwrap();
        assert_eq!(basis.ncols(), 3);
        assert_relative_eq!(basis.transpose() * &basis, RealMatrix::identity(3, 3), epsilon = 1e-12);
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        let basis = nullspace(&RealMatrix::identity(3, 3), &tol()).unwrap();
        assert_eq!(basis.ncols(), 0);
    }

    #[test]
    fn nullspace_of_rank_one_block() {
        let m = RealMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let basis = nullspace(&m, &tol()).unwrap();
        assert_eq!(basis.ncols(), 1);
        let v = basis.column(0);
        assert!((&m * v).norm() < 1e-12);
        let expected = 1.0 / 2f64.sqrt();
        assert_relative_eq!(v[0].abs(), expected, epsilon = 1e-12);
        assert_relative_eq!(v[0], -v[1], epsilon = 1e-12);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = RealMatrix::from_row_slice(1, 3, &[1.0, 2.0, 3.0]);
        let basis = nullspace(&m, &tol()).unwrap();
        assert_eq!(basis.ncols(), 2);
        assert!((&m * &basis).norm() < 1e-12);
    }

    #[test]
    fn nullspace_rejects_nan() {
        let mut m = RealMatrix::zeros(2, 2);
        m[(0, 1)] = f64::NAN;
        assert!(matches!(nullspace(&m, &tol()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn complex_nullspace() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        // rows proportional: [1, i] and [i, -1]
        let m = ComplexMatrix::from_row_slice(2, 2, &[one, i, i, -one]);
        let basis = nullspace(&m, &tol()).unwrap();
        assert_eq!(basis.ncols(), 1);
        assert!((&m * basis.column(0)).norm() < 1e-12);
    }

    #[test]
    fn symmetric_eigen_of_diagonal() {
        let m = RealMatrix::from_diagonal(&RealVector::from_vec(vec![2.0, 1.0, 3.0]));
        let e = eig_symmetric(&m, &tol()).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        let k = RealMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let e = eig_general(&k, &tol()).unwrap();
        assert_eq!(e.values.len(), 2);
        assert_relative_eq!(e.values[0].re, 0.0, epsilon = 1e-14);
        assert_relative_eq!(e.values[0].im, -1.0, epsilon = 1e-14);
        assert_relative_eq!(e.values[1].im, 1.0, epsilon = 1e-14);
        let ck = to_complex(&k);
        for c in 0..e.vectors.ncols() {
            let lambda = e.values[e.owner[c]];
            let v = e.vectors.column(c);
            assert!((&ck * v - v * lambda).norm() < 1e-12);
        }
    }

    #[test]
    fn random_symmetric_reconstructs() {
        let mut rng = seeded_rng(7);
        let a = RealMatrix::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0));
        let m = &a + a.transpose();
        let e = eig_symmetric(&m, &tol()).unwrap();
        let lambda = RealMatrix::from_diagonal(&RealVector::from_vec(e.values.clone()));
        let rebuilt = &e.vectors * lambda * e.vectors.transpose();
        assert!((&m - rebuilt).norm() <= 1e-10 * m.norm());
        assert!((e.vectors.transpose() * &e.vectors - RealMatrix::identity(5, 5)).norm() < 1e-10);
        let trace: f64 = e.values.iter().sum();
        assert_relative_eq!(trace, m.trace(), max_relative = 1e-9);
    }

    #[test]
    fn eig_rejects_non_square() {
        assert!(eig(&RealMatrix::zeros(2, 3), false, &tol()).is_err());
        assert!(eig(&RealMatrix::zeros(2, 3), true, &tol()).is_err());
    }

    #[test]
    fn expm_at_zero_is_identity() {
        let x = RealMatrix::from_row_slice(2, 2, &[0.3, -1.2, 4.0, 0.1]);
        assert_eq!(expm(&x, 0.0).unwrap(), RealMatrix::identity(2, 2));
    }

    #[test]
    fn expm_quarter_turn() {
        let k = RealMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let r = expm(&k, std::f64::consts::FRAC_PI_2).unwrap();
        assert_relative_eq!(r, k, epsilon = 1e-14);
    }

    #[test]
    fn expm_matches_long_series() {
        let mut rng = seeded_rng(11);
        let x = RealMatrix::from_fn(4, 4, |_, _| rng.random_range(-0.5..0.5));
        // 30-term series oracle, summed directly without scaling.
        let mut series = RealMatrix::identity(4, 4);
        let mut term = RealMatrix::identity(4, 4);
        for k in 1..30 {
            term = &term * &x / k as f64;
            series += &term;
        }
        let ours = expm(&x, 1.0).unwrap();
        assert!((ours - series).norm() < 1e-10);
    }

    #[test]
    fn commuting_matrices_of_rotation() {
        let k = RealMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let basis = commuting_matrices(std::slice::from_ref(&k), 2, &tol()).unwrap();
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(commutator(b, &k).norm() < 1e-12);
        }
    }

    #[test]
    fn tolerance_policy_must_be_positive() {
        assert!(TolerancePolicy::new(0.0, 1e-8).is_err());
        assert!(TolerancePolicy::new(1e-9, -1.0).is_err());
        assert!(TolerancePolicy::new(1e-9, 1e-8).is_ok());
    }
}
