//! Linear fields on a periodic 1+1 dimensional lattice.
//!
//! `M` sites (a power of two) on a circle of length `L`, with `x_j = jL/M`
//! and lattice momenta `k_n = 2πn/L` in FFT order (`n = 0, 1, …, M/2−1,
//! −M/2, …, −1`). Field values are stored as `N × M` matrices, one row per
//! internal component.
//!
//! A complexified solution is written per mode as
//!
//! ```text
//! φ̂(k, t) = C(k) e^{−iω t} + D(k) e^{+iω t},   φ(x, t) = Σ_k φ̂(k, t) e^{ikx}
//! ```
//!
//! so `C` is the positive-frequency content and `D` the negative-frequency
//! content. Real solutions satisfy `D(k) = C(−k)*`.
//!
//! Relativistic fields obey `φ̈ = ∂ₓ²φ − m²φ` with `ω = √(k² + m²)`.
//! Schrödinger fields are first order, `φ̇ = −J H φ` with `H = −∂ₓ²/2m` and
//! `ω = k²/2m`, so on each mode `C = P₊φ̂` and `D = P₋φ̂` where
//! `P± = (1 ∓ iJ)/2`. The massless relativistic zero mode has `ω = 0` and is
//! excluded; the Schrödinger zero mode is static and is sorted by `J`.
//!
//! The one-particle inner product is
//! `(f, g) = (L/M) Σ_k w(k) Σ_ab h_ab f_a(k)* g_b(k)` with `w = 1/ω` for
//! relativistic fields and `w = 1` for Schrödinger fields.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{column_space, seeded_rng, to_complex, ComplexMatrix, RealMatrix, TolerancePolicy};
use crate::reps::{InvariantMetric, RealTypeTag, RepData};
use crate::discrete::{DiscreteCandidate, DiscreteKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Dispersion {
    Relativistic { mass: f64 },
    Schroedinger { mass: f64 },
}

impl Dispersion {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Dispersion::Relativistic { mass } if mass.is_finite() && mass >= 0.0 => Ok(()),
            Dispersion::Schroedinger { mass } if mass.is_finite() && mass > 0.0 => Ok(()),
            other => Err(Error::InvalidInput(format!("invalid dispersion {other:?}"))),
        }
    }

    pub fn omega(&self, k: f64) -> f64 {
        match *self {
            Dispersion::Relativistic { mass } => (k * k + mass * mass).sqrt(),
            Dispersion::Schroedinger { mass } => k * k / (2.0 * mass),
        }
    }

    pub fn is_first_order(&self) -> bool {
        matches!(self, Dispersion::Schroedinger { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Dispersion::Relativistic { .. } => "relativistic",
            Dispersion::Schroedinger { .. } => "schroedinger",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    pub sites: usize,
    pub length: f64,
}

impl Lattice {
    pub fn new(sites: usize, length: f64) -> Result<Self> {
        if sites < 2 || !sites.is_power_of_two() {
            return Err(Error::InvalidInput(format!("site count {sites} is not a power of two ≥ 2")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidInput(format!("lattice length {length} must be positive")));
        }
        Ok(Self { sites, length })
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.sites as f64
    }

    /// Signed mode number of FFT slot `n`.
    pub fn signed_index(&self, n: usize) -> i64 {
        let m = self.sites as i64;
        let n = n as i64;
        if n < m / 2 {
            n
        } else {
            n - m
        }
    }

    pub fn momentum(&self, n: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.signed_index(n) as f64 / self.length
    }

    /// FFT slot of `−k_n`.
    pub fn mirror(&self, n: usize) -> usize {
        (self.sites - n) % self.sites
    }
}

/// Everything needed to evolve a field on the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDynamics {
    pub lattice: Lattice,
    pub dispersion: Dispersion,
    pub internal_dim: usize,
    /// Complex structure of a first-order field.
    pub j: Option<RealMatrix>,
}

impl ModeDynamics {
    pub fn new(lattice: Lattice, dispersion: Dispersion, internal_dim: usize, j: Option<RealMatrix>) -> Result<Self> {
        dispersion.validate()?;
        if internal_dim == 0 {
            return Err(Error::InvalidInput("internal dimension must be positive".into()));
        }
        if dispersion.is_first_order() {
            let jm = j.as_ref().ok_or_else(|| {
                Error::NotSecretlyComplex("first-order dynamics needs a complex structure".into())
            })?;
            if jm.nrows() != internal_dim || jm.ncols() != internal_dim {
                return Err(Error::DimensionMismatch("J does not match the internal dimension".into()));
            }
        }
        Ok(Self {
            lattice,
            dispersion,
            internal_dim,
            j,
        })
    }

    pub fn omega(&self, n: usize) -> f64 {
        self.dispersion.omega(self.lattice.momentum(n))
    }

    /// The massless relativistic zero mode, left out of every mode sum.
    pub fn is_excluded(&self, n: usize) -> bool {
        matches!(self.dispersion, Dispersion::Relativistic { .. }) && self.omega(n) == 0.0
    }

    pub fn excluded_modes(&self) -> Vec<usize> {
        (0..self.lattice.sites).filter(|&n| self.is_excluded(n)).collect()
    }

    /// Mode weight in the inner product.
    pub fn weight(&self, n: usize) -> f64 {
        if self.is_excluded(n) {
            return 0.0;
        }
        match self.dispersion {
            Dispersion::Relativistic { .. } => 1.0 / self.omega(n),
            Dispersion::Schroedinger { .. } => 1.0,
        }
    }

    fn projectors(&self) -> Option<(ComplexMatrix, ComplexMatrix)> {
        let j = to_complex(self.j.as_ref()?);
        let n = self.internal_dim;
        let id = ComplexMatrix::identity(n, n);
        let half = Complex64::new(0.5, 0.0);
        let i = Complex64::i();
        Some(((&id - &j * i) * half, (&id + &j * i) * half))
    }

    fn check_shape(&self, m: &ComplexMatrix, what: &str) -> Result<()> {
        if m.nrows() != self.internal_dim || m.ncols() != self.lattice.sites {
            return Err(Error::DimensionMismatch(format!(
                "{what} is {}x{}, expected {}x{}",
                m.nrows(),
                m.ncols(),
                self.internal_dim,
                self.lattice.sites
            )));
        }
        Ok(())
    }
}

/// Row-wise DFT; forward transforms are scaled by `1/M`.
fn dft_rows(m: &ComplexMatrix, forward: bool) -> ComplexMatrix {
    let sites = m.ncols();
    let mut planner = FftPlanner::<f64>::new();
    let fft = if forward {
        planner.plan_fft_forward(sites)
    } else {
        planner.plan_fft_inverse(sites)
    };
    let scale = if forward { 1.0 / sites as f64 } else { 1.0 };
    let mut out = ComplexMatrix::zeros(m.nrows(), sites);
    let mut buf = vec![Complex64::new(0.0, 0.0); sites];
    for r in 0..m.nrows() {
        for (b, v) in buf.iter_mut().zip(m.row(r).iter()) {
            *b = *v;
        }
        fft.process(&mut buf);
        for (c, v) in buf.iter().enumerate() {
            out[(r, c)] = v * scale;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSolution {
    pub dynamics: ModeDynamics,
    /// Positive-frequency amplitudes, `N × M`.
    pub c: ComplexMatrix,
    /// Negative-frequency amplitudes, `N × M`.
    pub d: ComplexMatrix,
}

impl LatticeSolution {
    pub fn from_parts(dynamics: &ModeDynamics, c: ComplexMatrix, d: ComplexMatrix) -> Result<Self> {
        dynamics.check_shape(&c, "C")?;
        dynamics.check_shape(&d, "D")?;
        Ok(Self {
            dynamics: dynamics.clone(),
            c,
            d,
        })
    }

    pub fn from_cauchy_data(
        dynamics: &ModeDynamics,
        phi: &RealMatrix,
        phidot: &RealMatrix,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        Self::from_complex_cauchy_data(dynamics, &to_complex(phi), &to_complex(phidot), tol)
    }

    /// Mode amplitudes from field values and time derivatives at `t = 0`.
    /// Complex data describe elements of the complexified solution space.
    pub fn from_complex_cauchy_data(
        dynamics: &ModeDynamics,
        phi: &ComplexMatrix,
        phidot: &ComplexMatrix,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        dynamics.check_shape(phi, "field data")?;
        dynamics.check_shape(phidot, "velocity data")?;
        if !phi.iter().chain(phidot.iter()).all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidInput("Cauchy data must be finite".into()));
        }
        let ph = dft_rows(phi, true);
        let vh = dft_rows(phidot, true);
        let (rows, sites) = ph.shape();
        let mut c = ComplexMatrix::zeros(rows, sites);
        let mut d = ComplexMatrix::zeros(rows, sites);
        let i = Complex64::i();
        let data_scale = ph.norm().max(vh.norm()).max(f64::MIN_POSITIVE);

        match (dynamics.dispersion, dynamics.projectors()) {
            (Dispersion::Relativistic { .. }, _) => {
                for n in 0..sites {
                    let a = ph.column(n);
                    let b = vh.column(n);
                    if dynamics.is_excluded(n) {
                        let content = a.norm().max(b.norm());
                        if content > tol.eps_rank * data_scale {
                            return Err(Error::ZeroModeSingular(content));
                        }
                        continue;
                    }
                    let w = dynamics.omega(n);
                    c.set_column(n, &((a + b * (i / w)) * Complex64::new(0.5, 0.0)));
                    d.set_column(n, &((a - b * (i / w)) * Complex64::new(0.5, 0.0)));
                }
            }
            (Dispersion::Schroedinger { .. }, Some((p_plus, p_minus))) => {
                let j = to_complex(dynamics.j.as_ref().expect("checked in ModeDynamics::new"));
                let mut worst = 0.0_f64;
                for n in 0..sites {
                    let a = ph.column(n).into_owned();
                    let expected = &j * &a * Complex64::new(-dynamics.omega(n), 0.0);
                    worst = worst.max((&expected - vh.column(n)).norm());
                    c.set_column(n, &(&p_plus * &a));
                    d.set_column(n, &(&p_minus * &a));
                }
                if worst > tol.eps_rel.sqrt() * data_scale {
                    return Err(Error::InconsistentCauchyData(worst / data_scale));
                }
            }
            (Dispersion::Schroedinger { .. }, None) => unreachable!("checked in ModeDynamics::new"),
        }
        Ok(Self {
            dynamics: dynamics.clone(),
            c,
            d,
        })
    }

    /// Schrödinger Cauchy data consist of the field alone.
    pub fn from_first_order_data(dynamics: &ModeDynamics, phi: &ComplexMatrix, tol: &TolerancePolicy) -> Result<Self> {
        let dot = first_order_velocity(dynamics, phi)?;
        Self::from_complex_cauchy_data(dynamics, phi, &dot, tol)
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        (0..self.dynamics.lattice.sites)
            .map(|n| Complex64::from_polar(1.0, -self.dynamics.omega(n) * t))
            .collect()
    }

    /// Exact evolution by `t`: `C ↦ C e^{−iωt}`, `D ↦ D e^{iωt}`.
    pub fn evolved(&self, t: f64) -> Self {
        let ph = self.phases(t);
        let mut c = self.c.clone();
        let mut d = self.d.clone();
        for (n, p) in ph.iter().enumerate() {
            let cp = c.column(n) * *p;
            c.set_column(n, &cp);
            let dp = d.column(n) * p.conj();
            d.set_column(n, &dp);
        }
        Self {
            dynamics: self.dynamics.clone(),
            c,
            d,
        }
    }

    /// Field values at time `t`.
    pub fn field_at(&self, t: f64) -> ComplexMatrix {
        let s = self.evolved(t);
        dft_rows(&(&s.c + &s.d), false)
    }

    /// Time derivative at time `t`.
    pub fn velocity_at(&self, t: f64) -> ComplexMatrix {
        let s = self.evolved(t);
        let mut m = ComplexMatrix::zeros(s.c.nrows(), s.c.ncols());
        for n in 0..s.c.ncols() {
            let w = Complex64::new(0.0, self.dynamics.omega(n));
            m.set_column(n, &((s.d.column(n) - s.c.column(n)) * w));
        }
        dft_rows(&m, false)
    }

    /// `max ‖D(k) − C(−k)*‖`, zero for real solutions.
    pub fn reality_residual(&self) -> f64 {
        let lat = &self.dynamics.lattice;
        (0..lat.sites)
            .map(|n| {
                let mirrored = self.c.column(lat.mirror(n)).map(|z| z.conj());
                (self.d.column(n) - mirrored).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Shift by `s` sites: `φ(x) ↦ φ(x − s·dx)`.
    pub fn translated(&self, s: i64) -> Self {
        Self {
            dynamics: self.dynamics.clone(),
            c: translate_coeffs(&self.dynamics.lattice, &self.c, s),
            d: translate_coeffs(&self.dynamics.lattice, &self.d, s),
        }
    }

    pub fn frequency_split(&self) -> (OneParticleState, OneParticleState) {
        (
            OneParticleState {
                dynamics: self.dynamics.clone(),
                coeffs: self.c.clone(),
            },
            OneParticleState {
                dynamics: self.dynamics.clone(),
                coeffs: self.d.clone(),
            },
        )
    }

    /// Mode table with columns
    /// `k_index,k_value,omega,component,re_c,im_c,re_d,im_d`.
    pub fn to_csv(&self) -> String {
        let lat = &self.dynamics.lattice;
        let mut out = String::from("k_index,k_value,omega,component,re_c,im_c,re_d,im_d\n");
        for n in 0..lat.sites {
            for a in 0..self.dynamics.internal_dim {
                let (c, d) = (self.c[(a, n)], self.d[(a, n)]);
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    lat.signed_index(n),
                    lat.momentum(n),
                    self.dynamics.omega(n),
                    a,
                    c.re,
                    c.im,
                    d.re,
                    d.im
                );
            }
        }
        out
    }
}

fn translate_coeffs(lat: &Lattice, m: &ComplexMatrix, s: i64) -> ComplexMatrix {
    let mut out = m.clone();
    for n in 0..lat.sites {
        let p = Complex64::from_polar(1.0, -lat.momentum(n) * lat.spacing() * s as f64);
        let col = m.column(n) * p;
        out.set_column(n, &col);
    }
    out
}

/// `φ̇ = −J H φ` for first-order dynamics.
pub fn first_order_velocity(dynamics: &ModeDynamics, phi: &ComplexMatrix) -> Result<ComplexMatrix> {
    dynamics.check_shape(phi, "field data")?;
    let j = to_complex(
        dynamics
            .j
            .as_ref()
            .ok_or_else(|| Error::NotSecretlyComplex("first-order dynamics needs J".into()))?,
    );
    let mut ph = dft_rows(phi, true);
    for n in 0..ph.ncols() {
        let col = &j * ph.column(n) * Complex64::new(-dynamics.omega(n), 0.0);
        ph.set_column(n, &col);
    }
    Ok(dft_rows(&ph, false))
}

/// Positive- (or negative-) frequency amplitudes of a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleState {
    pub dynamics: ModeDynamics,
    pub coeffs: ComplexMatrix,
}

impl OneParticleState {
    pub fn new(dynamics: &ModeDynamics, coeffs: ComplexMatrix) -> Result<Self> {
        dynamics.check_shape(&coeffs, "coefficients")?;
        Ok(Self {
            dynamics: dynamics.clone(),
            coeffs,
        })
    }

    pub fn norm(&self, h: &InvariantMetric) -> Result<f64> {
        Ok(inner_product(self, self, h)?.re.max(0.0).sqrt())
    }

    /// Positive-frequency evolution `e^{−iωt}` per mode.
    pub fn evolved(&self, t: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for n in 0..coeffs.ncols() {
            let p = Complex64::from_polar(1.0, -self.dynamics.omega(n) * t);
            let col = coeffs.column(n) * p;
            coeffs.set_column(n, &col);
        }
        Self {
            dynamics: self.dynamics.clone(),
            coeffs,
        }
    }

    pub fn translated(&self, s: i64) -> Self {
        Self {
            dynamics: self.dynamics.clone(),
            coeffs: translate_coeffs(&self.dynamics.lattice, &self.coeffs, s),
        }
    }

    /// Applies a real internal transformation to every mode.
    pub fn transformed(&self, g: &RealMatrix) -> Result<Self> {
        if g.nrows() != self.dynamics.internal_dim || g.ncols() != self.dynamics.internal_dim {
            return Err(Error::DimensionMismatch("internal transformation has the wrong size".into()));
        }
        Ok(Self {
            dynamics: self.dynamics.clone(),
            coeffs: to_complex(g) * &self.coeffs,
        })
    }

    /// Random amplitudes with unit-variance real and imaginary parts,
    /// excluded modes left at zero.
    pub fn random(dynamics: &ModeDynamics, rng: &mut impl Rng) -> Self {
        let mut coeffs = ComplexMatrix::zeros(dynamics.internal_dim, dynamics.lattice.sites);
        for n in 0..dynamics.lattice.sites {
            if dynamics.is_excluded(n) {
                continue;
            }
            for a in 0..dynamics.internal_dim {
                coeffs[(a, n)] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        Self {
            dynamics: dynamics.clone(),
            coeffs,
        }
    }
}

/// `(L/M) Σ_k w(k) Σ_ab h_ab f_a(k)* g_b(k)`, summed in mode order.
pub fn inner_product(f: &OneParticleState, g: &OneParticleState, h: &InvariantMetric) -> Result<Complex64> {
    if f.dynamics.lattice != g.dynamics.lattice || f.coeffs.shape() != g.coeffs.shape() {
        return Err(Error::DimensionMismatch("states live on different lattices".into()));
    }
    let n_int = f.dynamics.internal_dim;
    if h.h.nrows() != n_int || h.h.ncols() != n_int {
        return Err(Error::DimensionMismatch(format!(
            "metric is {}x{}, internal dimension is {n_int}",
            h.h.nrows(),
            h.h.ncols()
        )));
    }
    let hc = to_complex(&h.h);
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..f.coeffs.ncols() {
        let w = f.dynamics.weight(n);
        if w == 0.0 {
            continue;
        }
        let fc = f.coeffs.column(n);
        let gc = g.coeffs.column(n);
        total += (fc.adjoint() * &hc * gc)[(0, 0)] * w;
    }
    Ok(total * (f.dynamics.lattice.length / f.dynamics.lattice.sites as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum AntiparticleContent {
    Fraction(f64),
    NotApplicable,
}

impl AntiparticleContent {
    pub fn fraction(&self) -> f64 {
        match self {
            AntiparticleContent::Fraction(f) => *f,
            AntiparticleContent::NotApplicable => 0.0,
        }
    }
}

/// Share of the positive-frequency space lying in the antiparticle sector.
///
/// The positive-frequency space is spanned by the positive parts of the real
/// plane-wave solutions `e_a cos(kx)`, `e_a sin(kx)` (and, for second-order
/// dynamics, the same profiles as initial velocities). Modes `k` and `−k`
/// mix, so the span is assembled per mirror pair; the fraction is
/// `Σ tr(Wᴴ P₋ W) / Σ dim W` over pairs, with `W` an orthonormal basis of the
/// pair's span and `P₋` acting on the internal index.
pub fn antiparticle_content(
    rep: &RepData,
    j: Option<&RealMatrix>,
    tag: RealTypeTag,
    dispersion: Dispersion,
    lattice: Lattice,
    tol: &TolerancePolicy,
) -> Result<AntiparticleContent> {
    let Some(j) = j.filter(|_| tag == RealTypeTag::SecretlyComplex) else {
        return Ok(AntiparticleContent::NotApplicable);
    };
    let dynamics = ModeDynamics::new(lattice, dispersion, rep.dim, Some(j.clone()))?;
    let (_, p_minus) = dynamics.projectors().expect("J supplied");
    let nn = rep.dim;
    let sites = lattice.sites;
    let pairs: Vec<usize> = (0..sites).filter(|&n| n <= lattice.mirror(n)).collect();
    let xs: Vec<f64> = (0..sites).map(|s| s as f64 * lattice.spacing()).collect();

    let per_pair: Vec<Result<(f64, usize)>> = pairs
        .par_iter()
        .map(|&n| {
            let slots = if lattice.mirror(n) == n { vec![n] } else { vec![n, lattice.mirror(n)] };
            let k = lattice.momentum(n);
            let mut columns: Vec<nalgebra::DVector<Complex64>> = Vec::new();
            for a in 0..nn {
                for profile in [f64::cos, f64::sin] {
                    let mut shape = ComplexMatrix::zeros(nn, sites);
                    for (s, x) in xs.iter().enumerate() {
                        shape[(a, s)] = Complex64::new(profile(k * x), 0.0);
                    }
                    if shape.norm() <= 1e-12 {
                        continue;
                    }
                    let zero = ComplexMatrix::zeros(nn, sites);
                    let sols = if dynamics.dispersion.is_first_order() {
                        vec![LatticeSolution::from_first_order_data(&dynamics, &shape, tol)]
                    } else if dynamics.is_excluded(n) {
                        vec![]
                    } else {
                        vec![
                            LatticeSolution::from_complex_cauchy_data(&dynamics, &shape, &zero, tol),
                            LatticeSolution::from_complex_cauchy_data(&dynamics, &zero, &shape, tol),
                        ]
                    };
                    for sol in sols {
                        let sol = sol?;
                        let v = nalgebra::DVector::from_iterator(
                            nn * slots.len(),
                            slots.iter().flat_map(|&m| sol.c.column(m).into_owned().data.as_vec().clone()),
                        );
                        columns.push(v);
                    }
                }
            }
            if columns.is_empty() {
                return Ok((0.0, 0));
            }
            let w = column_space(&ComplexMatrix::from_columns(&columns), tol);
            let mut trace = 0.0;
            for col in w.column_iter() {
                for (b, _) in slots.iter().enumerate() {
                    let part = col.rows(b * nn, nn).into_owned();
                    trace += (part.adjoint() * &p_minus * &part)[(0, 0)].re;
                }
            }
            Ok((trace, w.ncols()))
        })
        .collect();
    let mut trace = 0.0;
    let mut dim = 0usize;
    for r in per_pair {
        let (t, d) = r?;
        trace += t;
        dim += d;
    }
    if dim == 0 {
        return Ok(AntiparticleContent::Fraction(0.0));
    }
    Ok(AntiparticleContent::Fraction(trace / dim as f64))
}

/// Whether a discrete candidate maps solutions of `dynamics` to solutions.
///
/// The candidate acts as `φ(x, t) ↦ X φ(σx, εt)` with `σ = −1` for parity
/// kinds and `ε = −1` for time-reversing kinds. A seeded random real
/// solution is transformed, its Cauchy data evolved by `τ`, and the result
/// compared with the transform of the original evolved by `ετ`.
pub fn is_dynamical_symmetry(
    candidate: &DiscreteCandidate,
    dynamics: &ModeDynamics,
    tol: &TolerancePolicy,
    seed: u64,
) -> Result<bool> {
    let nn = dynamics.internal_dim;
    if candidate.matrix.nrows() != nn || candidate.matrix.ncols() != nn {
        return Err(Error::DimensionMismatch(format!("candidate '{}' has the wrong size", candidate.name)));
    }
    let (sigma, eps) = match candidate.kind {
        DiscreteKind::Parity => (-1, 1.0),
        DiscreteKind::TimeReversal => (1, -1.0),
        DiscreteKind::ParityTime => (-1, -1.0),
        DiscreteKind::Internal => (1, 1.0),
    };
    let lat = dynamics.lattice;
    let mut rng = seeded_rng(seed);
    let mut phi = ComplexMatrix::zeros(nn, lat.sites);
    for v in phi.iter_mut() {
        *v = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
    }
    if dynamics.excluded_modes().contains(&0) {
        for mut row in phi.row_iter_mut() {
            let mean = row.sum() / lat.sites as f64;
            row.add_scalar_mut(-mean);
        }
    }
    let original = if dynamics.dispersion.is_first_order() {
        LatticeSolution::from_first_order_data(dynamics, &phi, tol)?
    } else {
        let mut dot = ComplexMatrix::zeros(nn, lat.sites);
        for v in dot.iter_mut() {
            *v = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        }
        if dynamics.excluded_modes().contains(&0) {
            for mut row in dot.row_iter_mut() {
                let mean = row.sum() / lat.sites as f64;
                row.add_scalar_mut(-mean);
            }
        }
        LatticeSolution::from_complex_cauchy_data(dynamics, &phi, &dot, tol)?
    };
    let x = to_complex(&candidate.matrix);
    let reflect = |m: &ComplexMatrix| -> ComplexMatrix {
        if sigma == 1 {
            return m.clone();
        }
        let mut out = m.clone();
        for s in 0..lat.sites {
            out.set_column(s, &m.column(lat.mirror(s)));
        }
        out
    };
    let transform = |field: ComplexMatrix| &x * reflect(&field);
    let tau = 0.37;
    let data = transform(original.field_at(0.0));
    let data_dot = transform(original.velocity_at(0.0)) * Complex64::new(eps, 0.0);
    let image = match LatticeSolution::from_complex_cauchy_data(dynamics, &data, &data_dot, tol) {
        Ok(s) => s,
        Err(Error::InconsistentCauchyData(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let lhs = image.field_at(tau);
    let rhs = transform(original.field_at(eps * tau));
    Ok((lhs - &rhs).norm() <= 1e-8 * rhs.norm().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::rotation_generator;
    use std::f64::consts::PI;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn kg(mass: f64, n: usize) -> ModeDynamics {
        ModeDynamics::new(Lattice::new(64, 2.0 * PI).unwrap(), Dispersion::Relativistic { mass }, n, None).unwrap()
    }

    fn schroedinger() -> ModeDynamics {
        ModeDynamics::new(
            Lattice::new(64, 2.0 * PI).unwrap(),
            Dispersion::Schroedinger { mass: 1.0 },
            2,
            Some(rotation_generator()),
        )
        .unwrap()
    }

    fn row(f: impl Fn(f64) -> f64, lat: &Lattice) -> RealMatrix {
        RealMatrix::from_fn(1, lat.sites, |_, s| f(s as f64 * lat.spacing()))
    }

    #[test]
    fn lattice_validation() {
        assert!(Lattice::new(48, 1.0).is_err());
        assert!(Lattice::new(64, 0.0).is_err());
        let lat = Lattice::new(8, 2.0 * PI).unwrap();
        assert_eq!((0..8).map(|n| lat.signed_index(n)).collect::<Vec<_>>(), vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(lat.mirror(0), 0);
        assert_eq!(lat.mirror(3), 5);
    }

    #[test]
    fn single_mode_is_pure_positive_frequency() {
        let dy = kg(1.0, 1);
        let lat = dy.lattice;
        let k1 = lat.momentum(3);
        let w = dy.omega(3);
        let phi = row(|x| (k1 * x).cos(), &lat);
        let dot = row(|x| w * (k1 * x).sin(), &lat);
        let sol = LatticeSolution::from_cauchy_data(&dy, &phi, &dot, &tol()).unwrap();
        for n in 0..lat.sites {
            let expect = if n == 3 { 0.5 } else { 0.0 };
            assert!((sol.c[(0, n)] - Complex64::new(expect, 0.0)).norm() < 1e-13, "mode {n}");
        }
        assert!(sol.reality_residual() < 1e-13);
        let (pos, neg) = sol.frequency_split();
        let h = InvariantMetric { h: RealMatrix::identity(1, 1) };
        assert!((pos.norm(&h).unwrap() - neg.norm(&h).unwrap()).abs() < 1e-13);
        let expected = (lat.length / lat.sites as f64) * 0.25 / w;
        assert!((inner_product(&pos, &pos, &h).unwrap().re - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_data_gives_zero_coefficients() {
        let dy = kg(1.0, 2);
        let z = RealMatrix::zeros(2, 64);
        let sol = LatticeSolution::from_cauchy_data(&dy, &z, &z, &tol()).unwrap();
        assert_eq!(sol.c.norm() + sol.d.norm(), 0.0);
    }

    #[test]
    fn cauchy_round_trip() {
        let dy = kg(1.0, 2);
        let mut rng = seeded_rng(11);
        let phi = RealMatrix::from_fn(2, 64, |_, _| rng.random_range(-1.0..1.0));
        let dot = RealMatrix::from_fn(2, 64, |_, _| rng.random_range(-1.0..1.0));
        let sol = LatticeSolution::from_cauchy_data(&dy, &phi, &dot, &tol()).unwrap();
        assert!((sol.field_at(0.0) - to_complex(&phi)).norm() <= 1e-10 * phi.norm());
        assert!((sol.velocity_at(0.0) - to_complex(&dot)).norm() <= 1e-10 * dot.norm());
        assert!(sol.field_at(0.8).iter().all(|z| z.im.abs() < 1e-12));
    }

    #[test]
    fn massless_zero_mode_is_singular() {
        let dy = kg(0.0, 1);
        let ones = RealMatrix::from_element(1, 64, 1.0);
        let zero = RealMatrix::zeros(1, 64);
        assert!(matches!(
            LatticeSolution::from_cauchy_data(&dy, &ones, &zero, &tol()),
            Err(Error::ZeroModeSingular(_))
        ));
        assert_eq!(dy.excluded_modes(), vec![0]);
    }

    #[test]
    fn schroedinger_requires_consistent_velocity() {
        let dy = schroedinger();
        let lat = dy.lattice;
        let phi = RealMatrix::from_fn(2, 64, |a, s| if a == 0 { (lat.momentum(2) * s as f64 * lat.spacing()).cos() } else { 0.0 });
        let zero = RealMatrix::zeros(2, 64);
        assert!(matches!(
            LatticeSolution::from_cauchy_data(&dy, &phi, &zero, &tol()),
            Err(Error::InconsistentCauchyData(_))
        ));
        let sol = LatticeSolution::from_first_order_data(&dy, &to_complex(&phi), &tol()).unwrap();
        assert!((sol.field_at(0.0) - to_complex(&phi)).norm() < 1e-12);
    }

    #[test]
    fn split_is_idempotent_and_complete() {
        let dy = kg(0.5, 2);
        let mut rng = seeded_rng(3);
        let pos = OneParticleState::random(&dy, &mut rng).coeffs;
        let neg = OneParticleState::random(&dy, &mut rng).coeffs;
        let sol = LatticeSolution::from_parts(&dy, pos.clone(), neg.clone()).unwrap();
        let (p, n) = sol.frequency_split();
        assert_eq!(p.coeffs + n.coeffs, pos.clone() + neg);
        let again = LatticeSolution::from_parts(&dy, pos.clone(), ComplexMatrix::zeros(2, 64)).unwrap();
        let (p2, n2) = again.frequency_split();
        assert_eq!(p2.coeffs, pos);
        assert_eq!(n2.coeffs.norm(), 0.0);
    }

    #[test]
    fn antiparticle_fractions() {
        let lat = Lattice::new(64, 2.0 * PI).unwrap();
        let rep = RepData::new(2, vec![rotation_generator() * -1.0], "u(1)").unwrap();
        let j = rotation_generator();
        let f = |d| {
            antiparticle_content(&rep, Some(&j), RealTypeTag::SecretlyComplex, d, lat, &tol())
                .unwrap()
                .fraction()
        };
        assert!((f(Dispersion::Relativistic { mass: 1.0 }) - 0.5).abs() < 1e-10);
        assert!(f(Dispersion::Schroedinger { mass: 1.0 }).abs() < 1e-10);
        let real = RepData::trivial(1);
        assert_eq!(
            antiparticle_content(&real, None, RealTypeTag::HonestlyReal, Dispersion::Relativistic { mass: 1.0 }, lat, &tol())
                .unwrap(),
            AntiparticleContent::NotApplicable
        );
    }

    #[test]
    fn dynamical_symmetry_depends_on_linearity() {
        let conj = RealMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let id = RealMatrix::identity(2, 2);
        let cand = |k, m: &RealMatrix| DiscreteCandidate::new("x", k, m.clone());
        let rel = ModeDynamics::new(Lattice::new(16, 3.0).unwrap(), Dispersion::Relativistic { mass: 1.0 }, 2, None).unwrap();
        let sch = ModeDynamics::new(
            Lattice::new(16, 3.0).unwrap(),
            Dispersion::Schroedinger { mass: 1.0 },
            2,
            Some(rotation_generator()),
        )
        .unwrap();
        for k in [DiscreteKind::Parity, DiscreteKind::TimeReversal, DiscreteKind::ParityTime, DiscreteKind::Internal] {
            assert!(is_dynamical_symmetry(&cand(k, &id), &rel, &tol(), 1).unwrap());
            assert!(is_dynamical_symmetry(&cand(k, &conj), &rel, &tol(), 1).unwrap());
        }
        assert!(is_dynamical_symmetry(&cand(DiscreteKind::Parity, &id), &sch, &tol(), 1).unwrap());
        assert!(!is_dynamical_symmetry(&cand(DiscreteKind::Parity, &conj), &sch, &tol(), 1).unwrap());
        assert!(is_dynamical_symmetry(&cand(DiscreteKind::TimeReversal, &conj), &sch, &tol(), 1).unwrap());
        assert!(!is_dynamical_symmetry(&cand(DiscreteKind::TimeReversal, &id), &sch, &tol(), 1).unwrap());
        assert!(!is_dynamical_symmetry(&cand(DiscreteKind::ParityTime, &id), &sch, &tol(), 1).unwrap());
        assert!(!is_dynamical_symmetry(&cand(DiscreteKind::Internal, &conj), &sch, &tol(), 1).unwrap());
    }

    #[test]
    fn csv_has_one_row_per_mode_and_component() {
        let dy = kg(1.0, 2);
        let sol = LatticeSolution::from_parts(&dy, ComplexMatrix::zeros(2, 64), ComplexMatrix::zeros(2, 64)).unwrap();
        let csv = sol.to_csv();
        assert_eq!(csv.lines().count(), 1 + 128);
        assert!(csv.starts_with("k_index,k_value,omega,component,re_c,im_c,re_d,im_d\n"));
    }
}
