//! The two-spin Hamiltonian
//!
//! ```text
//! H = J[(1−γ)/2 (σ₁ˣσ₂ˣ + σ₁ʸσ₂ʸ) + (1+γ)/2 σ₁ᶻσ₂ᶻ] + B₁σ₁ᶻ + B₂σ₂ᶻ
//! ```
//!
//! with closed-form eigensystems and thermal states for the two solvable
//! families: zero field with any anisotropy, and `γ = −1` in arbitrary
//! (possibly nonuniform) fields.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::{
    gibbs, hermitian_eig, kron, pauli, ComplexMatrix, DensityMatrix, PauliAxis,
};

/// Below this temperature the closed forms rescale their Boltzmann weights
/// before exponentiating.
const LOW_T_GUARD: f64 = 0.02;
/// Energies within this distance of the minimum belong to the ground space.
const DEGENERACY_TOL: f64 = 1e-10;

/// Physical parameters of the dimer. Energies and temperatures are in units of `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub gamma: f64,
    pub b1: f64,
    pub b2: f64,
    pub j: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            gamma: 0.0,
            b1: 0.0,
            b2: 0.0,
            j: 1.0,
        }
    }
}

impl ModelParams {
    pub fn new(gamma: f64, b1: f64, b2: f64, j: f64) -> Result<Self> {
        let p = Self { gamma, b1, b2, j };
        p.validate()?;
        Ok(p)
    }

    /// Zero-field anisotropic model with `J = 1`.
    pub fn heisenberg(gamma: f64) -> Result<Self> {
        Self::new(gamma, 0.0, 0.0, 1.0)
    }

    /// `γ = −1` model with `J = 1` in fields `b1`, `b2`.
    pub fn xy(b1: f64, b2: f64) -> Result<Self> {
        Self::new(-1.0, b1, b2, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.gamma) {
            return Err(Error::validation(format!(
                "gamma must lie in [-1, 1], got {}",
                self.gamma
            )));
        }
        if !self.j.is_finite() || self.j <= 0.0 {
            return Err(Error::validation(format!(
                "J must be positive, got {}",
                self.j
            )));
        }
        if !self.b1.is_finite() || !self.b2.is_finite() {
            return Err(Error::validation("fields must be finite"));
        }
        Ok(())
    }

    fn family(&self) -> Option<Family> {
        if self.b1 == 0.0 && self.b2 == 0.0 {
            Some(Family::ZeroField)
        } else if self.gamma == -1.0 {
            Some(Family::PlanarInField)
        } else {
            None
        }
    }

    /// Whether [`analytic_eigensystem`] and [`thermal_state_analytic`] apply.
    pub fn has_closed_form(&self) -> bool {
        self.family().is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    /// `B₁ = B₂ = 0`, any γ.
    ZeroField,
    /// `γ = −1`, any `B₁`, `B₂`.
    PlanarInField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub energy: f64,
    pub state: [Complex64; 4],
}

pub fn build_hamiltonian(p: &ModelParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let (sx, sy, sz) = (
        pauli(PauliAxis::X),
        pauli(PauliAxis::Y),
        pauli(PauliAxis::Z),
    );
    let id = ComplexMatrix::identity(2);
    let xx = kron(&sx, &sx)?;
    let yy = kron(&sy, &sy)?;
    let zz = kron(&sz, &sz)?;
    let z1 = kron(&sz, &id)?;
    let z2 = kron(&id, &sz)?;

    let planar = (&xx + &yy).scale_real(p.j * (1.0 - p.gamma) / 2.0);
    let axial = zz.scale_real(p.j * (1.0 + p.gamma) / 2.0);
    let field = &z1.scale_real(p.b1) + &z2.scale_real(p.b2);
    Ok(&(&planar + &axial) + &field)
}

fn real_state(amps: [f64; 4]) -> [Complex64; 4] {
    amps.map(|a| Complex64::new(a, 0.0))
}

/// Closed-form eigenpairs.
///
/// Zero field: `[ψ₀ singlet, ψ₁ triplet-0, ψ₂ = |↑↑⟩, ψ₃ = |↓↓⟩]`.
/// `γ = −1`: `[Ψ₁ = |↑↑⟩, Ψ₂ = |↓↓⟩, Ψ₊, Ψ₋]` with `E± = ±√D`,
/// `D = (B₁−B₂)² + 4J²`.
pub fn analytic_eigensystem(p: &ModelParams) -> Result<Vec<EigenPair>> {
    p.validate()?;
    let j = p.j;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match p.family() {
        Some(Family::ZeroField) => {
            let g = p.gamma;
            Ok(vec![
                EigenPair {
                    energy: j * (-3.0 + g) / 2.0,
                    state: real_state([0.0, h, -h, 0.0]),
                },
                EigenPair {
                    energy: j * (1.0 - 3.0 * g) / 2.0,
                    state: real_state([0.0, h, h, 0.0]),
                },
                EigenPair {
                    energy: j * (1.0 + g) / 2.0,
                    state: real_state([1.0, 0.0, 0.0, 0.0]),
                },
                EigenPair {
                    energy: j * (1.0 + g) / 2.0,
                    state: real_state([0.0, 0.0, 0.0, 1.0]),
                },
            ])
        }
        Some(Family::PlanarInField) => {
            let delta = p.b1 - p.b2;
            let root_d = (delta * delta + 4.0 * j * j).sqrt();
            // Amplitude ratio ⟨↑↓|Ψ±⟩/⟨↓↑|Ψ±⟩ = (Δ ± √D)/(2J),
            // written to avoid cancellation in whichever branch needs it.
            let (plus, minus) = if delta >= 0.0 {
                ((delta + root_d) / (2.0 * j), -2.0 * j / (delta + root_d))
            } else {
                (2.0 * j / (root_d - delta), (delta - root_d) / (2.0 * j))
            };
            let mixed = |x: f64| {
                let n = (x * x + 1.0).sqrt();
                real_state([0.0, x / n, 1.0 / n, 0.0])
            };
            Ok(vec![
                EigenPair {
                    energy: p.b1 + p.b2,
                    state: real_state([1.0, 0.0, 0.0, 0.0]),
                },
                EigenPair {
                    energy: -(p.b1 + p.b2),
                    state: real_state([0.0, 0.0, 0.0, 1.0]),
                },
                EigenPair {
                    energy: root_d,
                    state: mixed(plus),
                },
                EigenPair {
                    energy: -root_d,
                    state: mixed(minus),
                },
            ])
        }
        None => Err(Error::NoClosedForm(format!(
            "gamma = {}, B1 = {}, B2 = {} (closed forms need B1 = B2 = 0 or gamma = -1)",
            p.gamma, p.b1, p.b2
        ))),
    }
}

/// `(e^{-m}·cosh x, e^{-m}·sinh x)` for `x ≥ 0`, `m ≥ x`.
fn scaled_hyperbolic(x: f64, m: f64) -> (f64, f64) {
    let lead = (x - m).exp() / 2.0;
    let tail = (-2.0 * x).exp();
    (lead * (1.0 + tail), -lead * (-2.0 * x).exp_m1())
}

fn check_temperature(t: f64) -> Result<()> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

/// Thermal state from the closed-form X-shaped density matrices.
///
/// Zero field:
/// ```text
/// ρ = η [[e^{-(1+γ)/T}, 0, 0, 0],
///        [0, cosh((1−γ)/T), −sinh((1−γ)/T), 0],
///        [0, −sinh((1−γ)/T), cosh((1−γ)/T), 0],
///        [0, 0, 0, e^{-(1+γ)/T}]]
/// η = 1 / (2[cosh((1−γ)/T) + e^{-(1+γ)/T}])
/// ```
/// `γ = −1`: `ρ = [[d,0,0,0],[0,b−c,−s,0],[0,−s,b+c,0],[0,0,0,1/d]] / Z` with
/// `b = cosh(√D/T)`, `c = sinh(√D/T)(B₁−B₂)/√D`, `s = 2 sinh(√D/T)/√D`,
/// `d = e^{−(B₁+B₂)/T}`, `Z = 2[cosh((B₁+B₂)/T) + cosh(√D/T)]`.
/// (Coupling `J` enters as `T → T/J`, `B → B/J`.)
pub fn thermal_state_analytic(p: &ModelParams, t: f64) -> Result<DensityMatrix> {
    p.validate()?;
    check_temperature(t)?;
    let family = p.family().ok_or_else(|| {
        Error::NoClosedForm(format!("gamma = {}, B1 = {}, B2 = {}", p.gamma, p.b1, p.b2))
    })?;
    let tau = t / p.j;
    let mut rho = ComplexMatrix::zeros(4);
    let set =
        |rho: &mut ComplexMatrix, i: usize, k: usize, v: f64| rho[(i, k)] = Complex64::new(v, 0.0);

    match family {
        Family::ZeroField => {
            let x = (1.0 - p.gamma) / tau;
            let corner_exp = -(1.0 + p.gamma) / tau;
            let (ch, sh, corner) = if t < LOW_T_GUARD {
                let (ch, sh) = scaled_hyperbolic(x, x);
                (ch, sh, (corner_exp - x).exp())
            } else {
                (x.cosh(), x.sinh(), corner_exp.exp())
            };
            let eta = 1.0 / (2.0 * (ch + corner));
            set(&mut rho, 0, 0, eta * corner);
            set(&mut rho, 3, 3, eta * corner);
            set(&mut rho, 1, 1, eta * ch);
            set(&mut rho, 2, 2, eta * ch);
            set(&mut rho, 1, 2, -eta * sh);
            set(&mut rho, 2, 1, -eta * sh);
        }
        Family::PlanarInField => {
            let (b1, b2) = (p.b1 / p.j, p.b2 / p.j);
            let root_d = ((b1 - b2).powi(2) + 4.0).sqrt();
            let y = root_d / tau;
            let u = (b1 + b2) / tau;
            let (b, sinh_y, d, d_inv, cosh_u) = if t < LOW_T_GUARD {
                let m = y.max(u.abs());
                let (b, sinh_y) = scaled_hyperbolic(y, m);
                let d = (-u - m).exp();
                let d_inv = (u - m).exp();
                (b, sinh_y, d, d_inv, (d + d_inv) / 2.0)
            } else {
                (y.cosh(), y.sinh(), (-u).exp(), u.exp(), u.cosh())
            };
            let c = sinh_y * (b1 - b2) / root_d;
            let s = 2.0 * sinh_y / root_d;
            let z = 2.0 * (cosh_u + b);
            set(&mut rho, 0, 0, d / z);
            set(&mut rho, 3, 3, d_inv / z);
            set(&mut rho, 1, 1, (b - c) / z);
            set(&mut rho, 2, 2, (b + c) / z);
            set(&mut rho, 1, 2, -s / z);
            set(&mut rho, 2, 1, -s / z);
        }
    }
    Ok(DensityMatrix::from_trusted(rho))
}

/// Closed-form concurrence of the zero-field thermal state (`J = 1`):
/// `max{(sinh((1−γ)/T) − e^{−(1+γ)/T}) / (cosh((1−γ)/T) + e^{−(1+γ)/T}), 0}`.
pub fn zero_field_concurrence(gamma: f64, t: f64) -> Result<f64> {
    ModelParams::heisenberg(gamma)?;
    check_temperature(t)?;
    let x = (1.0 - gamma) / t;
    let corner = (-(1.0 + gamma) / t).exp();
    Ok(((x.sinh() - corner) / (x.cosh() + corner)).max(0.0))
}

/// Thermal state by spectral Gibbs construction; valid for every parameter set.
pub fn thermal_state(p: &ModelParams, t: f64) -> Result<DensityMatrix> {
    check_temperature(t)?;
    gibbs(&build_hamiltonian(p)?, t)
}

/// Closed form when one exists, spectral construction otherwise.
pub fn thermal_state_auto(p: &ModelParams, t: f64) -> Result<DensityMatrix> {
    if p.has_closed_form() {
        thermal_state_analytic(p, t)
    } else {
        thermal_state(p, t)
    }
}

/// `T → 0⁺` limit: the uniform mixture over the ground eigenspace.
pub fn ground_state_limit(p: &ModelParams) -> Result<DensityMatrix> {
    let eig = hermitian_eig(&build_hamiltonian(p)?)?;
    let ground = eig.values[0];
    let tol = DEGENERACY_TOL * p.j.max(1.0);
    let multiplicity = eig.values.iter().filter(|&&e| e - ground <= tol).count();
    let weight = 1.0 / multiplicity as f64;
    let rho = eig.functional(|e| if e - ground <= tol { weight } else { 0.0 });
    Ok(DensityMatrix::from_trusted(rho.hermitian_part()))
}
