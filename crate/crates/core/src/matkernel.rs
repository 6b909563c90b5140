//! Dense complex linear algebra sized for one- and two-qubit operators.
//!
//! Basis convention for 4×4 operators: index `2·a + b` where `a` is the
//! state of qubit 1 (the left Kronecker factor) and `b` the state of
//! qubit 2, with `|↑⟩ = 0` and `|↓⟩ = 1`. So the basis order is
//! `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance used to accept a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on `|tr ρ − 1|` for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as zero; anything lower is rejected.
pub const PSD_TOL: f64 = 1e-10;

/// Jacobi sweeps stop once every off-diagonal magnitude is below this
/// (scaled by the Frobenius norm when that exceeds one).
const JACOBI_OFF_DIAG_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::usage("matrix dimension must be positive"));
        }
        if entries.len() != dim * dim {
            return Err(Error::usage(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            dim,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The rank-one operator `|v⟩⟨v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    /// Entrywise complex conjugate in the fixed basis.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().copied().map(f).collect(),
        }
    }

    /// `(M + M†)/2`, with exactly real diagonal.
    pub fn hermitian_part(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            m[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in i + 1..self.dim {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim)
            .all(|i| (i..self.dim).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    pub fn is_unit_trace(&self, tol: f64) -> bool {
        (self.trace() - ONE).norm() <= tol
    }

    /// Hermitian with every eigenvalue `≥ −tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(HERMITIAN_TOL) {
            return false;
        }
        match hermitian_eig(self) {
            Ok(eig) => eig.values.iter().all(|&v| v >= -tol),
            Err(_) => false,
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A validated two-qubit state: 4×4, Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::usage(format!(
                "density matrix must be 4x4, got {0}x{0}",
                m.dim()
            )));
        }
        validate_state(&m)?;
        Ok(Self(m.hermitian_part()))
    }

    /// Wraps a matrix that is a state by construction.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        debug_assert_eq!(m.dim(), 4);
        Self(m)
    }

    /// The pure state `|ψ⟩⟨ψ|` for a (not necessarily normalised) four-vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        if psi.len() != 4 {
            return Err(Error::usage("pure two-qubit state needs 4 amplitudes"));
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::validation(
                "state vector has zero or non-finite norm",
            ));
        }
        let unit: Vec<_> = psi.iter().map(|z| z / norm).collect();
        Ok(Self(ComplexMatrix::projector(&unit)))
    }

    /// The singlet projector `|ψ₀⟩⟨ψ₀|`, `|ψ₀⟩ = (|↑↓⟩ − |↓↑⟩)/√2`.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self(ComplexMatrix::projector(&[
            ZERO,
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
            ZERO,
        ]))
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(4).scale_real(0.25))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl std::ops::Deref for DensityMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Checks Hermiticity, trace and positivity for a state of any dimension.
pub(crate) fn validate_state(m: &ComplexMatrix) -> Result<()> {
    if m.entries()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::validation("matrix has non-finite entries"));
    }
    if !m.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::validation("matrix is not Hermitian"));
    }
    if !m.is_unit_trace(TRACE_TOL) {
        let tr = m.trace();
        return Err(Error::validation(format!(
            "trace is {:.3e}{:+.3e}i, expected 1",
            tr.re, tr.im
        )));
    }
    let eig = hermitian_eig(m)?;
    if let Some(&min) = eig.values.first() {
        if min < -PSD_TOL {
            return Err(Error::validation(format!(
                "matrix is not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl FromStr for PauliAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(PauliAxis::X),
            "y" => Ok(PauliAxis::Y),
            "z" => Ok(PauliAxis::Z),
            other => Err(Error::usage(format!("unknown Pauli axis {other:?}"))),
        }
    }
}

pub fn pauli(axis: PauliAxis) -> ComplexMatrix {
    let i = Complex64::i();
    let entries = match axis {
        PauliAxis::X => vec![ZERO, ONE, ONE, ZERO],
        PauliAxis::Y => vec![ZERO, -i, i, ZERO],
        PauliAxis::Z => vec![ONE, ZERO, ZERO, -ONE],
    };
    ComplexMatrix { dim: 2, entries }
}

/// Kronecker product of two single-qubit operators; `a` acts on qubit 1.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::usage(format!(
            "kron expects two 2x2 operators, got {}x{} and {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(4);
    for (ar, ac, br, bc) in (0..2).flat_map(|ar| {
        (0..2).flat_map(move |ac| (0..2).flat_map(move |br| (0..2).map(move |bc| (ar, ac, br, bc))))
    }) {
        out[(2 * ar + br, 2 * ac + bc)] = a[(ar, ac)] * b[(br, bc)];
    }
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
///
/// `values` are ascending; column `k` of `vectors` is the eigenvector of
/// `values[k]`. Within a degenerate eigenspace the basis is whatever the
/// Jacobi iteration lands on.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `Σ f(λ_k) |v_k⟩⟨v_k|`.
    pub fn functional(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.functional(|x| x)
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenSystem> {
    if !m.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::validation(
            "hermitian_eig requires a Hermitian matrix",
        ));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let tol = JACOBI_OFF_DIAG_TOL * a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if max_off_diagonal(&a) < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(EigenSystem { values, vectors })
}

fn max_off_diagonal(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut max = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            max = max.max(a[(i, j)].norm());
        }
    }
    max
}

/// One Jacobi rotation `A ← U†AU`, `V ← VU` annihilating `A[p,q]`.
///
/// `U` acts on the (p, q) plane as `[[c, s·e^{iφ}], [−s·e^{−iφ}, c]]` where
/// `A[p,q] = |A[p,q]|·e^{iφ}`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_up = phase * s; // U[p,q]
    let s_dn = phase.conj() * s; // -U[q,p]

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s_dn;
        a[(k, q)] = akp * s_up + akq * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s_dn;
        v[(k, q)] = vkp * s_up + vkq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s_up;
        a[(q, k)] = apk * s_dn + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
}

/// Thermal state `exp(−h/T)/Z` with `k_B = 1`.
///
/// Boltzmann weights are taken relative to the ground energy so no
/// exponent is positive.
pub fn gibbs(h: &ComplexMatrix, temperature: f64) -> Result<DensityMatrix> {
    if !temperature.is_finite() || temperature <= 0.0 {
        return Err(Error::domain(format!(
            "temperature must be positive and finite, got {temperature}; use ground_state_limit for T = 0"
        )));
    }
    if h.dim() != 4 {
        return Err(Error::usage("gibbs expects a 4x4 two-qubit Hamiltonian"));
    }
    let eig = hermitian_eig(h)?;
    let ground = eig.values[0];
    let weight = |e: f64| (-(e - ground) / temperature).exp();
    let z: f64 = eig.values.iter().map(|&e| weight(e)).sum();
    let rho = eig.functional(|e| weight(e) / z);
    Ok(DensityMatrix::from_trusted(rho.hermitian_part()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

impl TryFrom<u8> for Subsystem {
    type Error = Error;

    fn try_from(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Subsystem::First),
            2 => Ok(Subsystem::Second),
            other => Err(Error::usage(format!(
                "subsystem must be 1 or 2, got {other}"
            ))),
        }
    }
}

/// Reduced state of the kept qubit.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::usage("partial_trace expects a 4x4 operator"));
    }
    let mut out = ComplexMatrix::zeros(2);
    for x in 0..2 {
        for y in 0..2 {
            out[(x, y)] = (0..2)
                .map(|k| match keep {
                    Subsystem::First => rho[(2 * x + k, 2 * y + k)],
                    Subsystem::Second => rho[(2 * k + x, 2 * k + y)],
                })
                .sum();
        }
    }
    Ok(out)
}

/// Transposes the indices of one qubit.
pub fn partial_transpose(rho: &ComplexMatrix, on: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::usage("partial_transpose expects a 4x4 operator"));
    }
    let mut out = ComplexMatrix::zeros(4);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let src = match on {
                        Subsystem::First => (2 * a2 + b, 2 * a + b2),
                        Subsystem::Second => (2 * a + b2, 2 * a2 + b),
                    };
                    out[(2 * a + b, 2 * a2 + b2)] = rho[src];
                }
            }
        }
    }
    Ok(out)
}
