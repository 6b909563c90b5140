//! Total, quantum and classical correlation of a two-qubit state, in bits.
//!
//! * total: mutual information `S(1:2) = S(1) + S(2) − S(1∪2)`
//! * quantum: entanglement of formation `E_f`, from the Wootters concurrence
//! * classical: the remainder `S(1:2) − E_f`

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::{
    hermitian_eig, kron, partial_trace, partial_transpose, pauli, validate_state, ComplexMatrix,
    DensityMatrix, PauliAxis, Subsystem, PSD_TOL,
};
use crate::random::{haar_unitary, rng_from_seed};

/// Negative rounding residue on the spin-flip singular values is zeroed.
const SPIN_FLIP_CLAMP: f64 = 0.0;
/// Concurrence differences within this many ulps of `Σλ` are rounding noise.
const CONCURRENCE_NOISE_ULPS: f64 = 64.0;
/// Minimum partial-transpose eigenvalue still counted as positive.
const PPT_TOL: f64 = 1e-10;
/// Spectral weights at or below this are dropped when building ensembles.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub total: f64,
    pub quantum: f64,
    pub classical: f64,
    pub concurrence: f64,
}

/// `−Σ λ log₂ λ` over the spectrum, with `0·log 0 = 0`.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    validate_state(m)?;
    Ok(entropy_of_spectrum(&hermitian_eig(m)?.values))
}

fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let s: f64 = values
        .iter()
        .map(|&l| if l >= -PSD_TOL { l.max(0.0) } else { l })
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum();
    s.max(0.0)
}

/// Binary entropy in bits.
fn binary_entropy(x: f64) -> f64 {
    [x, 1.0 - x]
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let s1 = von_neumann_entropy(&partial_trace(rho, Subsystem::First)?)?;
    let s2 = von_neumann_entropy(&partial_trace(rho, Subsystem::Second)?)?;
    let s12 = von_neumann_entropy(rho)?;
    Ok((s1 + s2 - s12).max(0.0))
}

/// `σʸ ⊗ σʸ`.
fn spin_flip() -> ComplexMatrix {
    let y = pauli(PauliAxis::Y);
    kron(&y, &y).expect("2x2 factors")
}

/// The Wootters `λᵢ` in descending order: square roots of the eigenvalues of
/// `ρ(σʸ⊗σʸ)ρ*(σʸ⊗σʸ)`.
///
/// They equal the singular values of `X = √ρ·√ρ̃` with `√ρ̃ = (σʸ⊗σʸ)√ρ*(σʸ⊗σʸ)`,
/// read off as the non-negative half of the spectrum of the Hermitian
/// block matrix `[[0, X], [X†, 0]]`. Going through `X` rather than `XX†`
/// keeps absolute accuracy near machine epsilon on nearly pure states.
pub fn spin_flip_singular_values(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let sqrt_rho = hermitian_eig(rho)?.functional(|l| l.max(0.0).sqrt());
    let flip = spin_flip();
    let sqrt_tilde = &(&flip * &sqrt_rho.conj()) * &flip;
    let x = &sqrt_rho * &sqrt_tilde;
    let mut block = ComplexMatrix::zeros(8);
    for i in 0..4 {
        for k in 0..4 {
            block[(i, 4 + k)] = x[(i, k)];
            block[(4 + k, i)] = x[(i, k)].conj();
        }
    }
    let values = hermitian_eig(&block)?.values;
    let mut lambdas = [0.0; 4];
    for (dst, &v) in lambdas.iter_mut().zip(values.iter().rev()) {
        *dst = if v < SPIN_FLIP_CLAMP { 0.0 } else { v };
    }
    Ok(lambdas)
}

/// Wootters concurrence `max{λ₁ − λ₂ − λ₃ − λ₄, 0}`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    validate_state(rho)?;
    let l = spin_flip_singular_values(rho)?;
    let sum: f64 = l.iter().sum();
    let c = l[0] - l[1] - l[2] - l[3];
    if c <= CONCURRENCE_NOISE_ULPS * f64::EPSILON * sum {
        Ok(0.0)
    } else {
        Ok(c.min(1.0))
    }
}

/// `h((1 + √(1 − C²))/2)` for a concurrence value.
pub fn entanglement_of_formation_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    if c == 0.0 {
        return 0.0;
    }
    // smaller root (1 − √(1 − C²))/2 without cancellation
    let root = (1.0 - c * c).sqrt();
    let x = c * c / (2.0 * (1.0 + root));
    binary_entropy(x).clamp(0.0, 1.0)
}

pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    Ok(entanglement_of_formation_from_concurrence(concurrence(
        rho,
    )?))
}

pub fn classical_correlation(rho: &DensityMatrix) -> Result<f64> {
    Ok(mutual_information(rho)? - entanglement_of_formation(rho)?)
}

pub fn report(rho: &DensityMatrix) -> Result<CorrelationReport> {
    let total = mutual_information(rho)?;
    let concurrence = concurrence(rho)?;
    let quantum = entanglement_of_formation_from_concurrence(concurrence);
    Ok(CorrelationReport {
        total,
        quantum,
        classical: total - quantum,
        concurrence,
    })
}

/// Peres–Horodecki test: the partial transpose on qubit 2 is positive.
pub fn is_separable_ppt(rho: &DensityMatrix) -> Result<bool> {
    validate_state(rho)?;
    let pt = partial_transpose(rho, Subsystem::Second)?;
    Ok(hermitian_eig(&pt)?.values[0] >= -PPT_TOL)
}

/// Entanglement of a pure state: entropy of its qubit-1 marginal.
pub fn pure_state_entanglement(psi: &[Complex64; 4]) -> Result<f64> {
    let proj = ComplexMatrix::projector(psi);
    von_neumann_entropy(&partial_trace(&proj, Subsystem::First)?)
}

/// A pure-state decomposition `ρ = Σ pᵢ |ψᵢ⟩⟨ψᵢ|`.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub members: Vec<(f64, [Complex64; 4])>,
}

impl Ensemble {
    /// The eigen-decomposition of `rho` (zero-weight eigenvectors dropped).
    pub fn spectral(rho: &DensityMatrix) -> Result<Self> {
        let eig = hermitian_eig(rho)?;
        let members = eig
            .values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > RANK_TOL)
            .map(|(k, &l)| {
                let v = eig.vector(k);
                (l, [v[0], v[1], v[2], v[3]])
            })
            .collect::<Vec<_>>();
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        Ok(Self {
            members: members.into_iter().map(|(p, v)| (p / total, v)).collect(),
        })
    }

    /// Random decomposition of `size` members from the purification freedom:
    /// `|ψ̃ᵢ⟩ = Σₖ Uᵢₖ √λₖ |eₖ⟩` for a Haar-random `size×size` unitary `U`.
    pub fn sample<R: rand::Rng + ?Sized>(
        rho: &DensityMatrix,
        size: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let spectral = Self::spectral(rho)?;
        let rank = spectral.members.len();
        if size < rank {
            return Err(Error::domain(format!(
                "ensemble size {size} is smaller than the state's rank {rank}"
            )));
        }
        let u = haar_unitary(size, rng);
        let mut members = Vec::with_capacity(size);
        for i in 0..size {
            let mut psi = [Complex64::new(0.0, 0.0); 4];
            for (k, (lambda, e)) in spectral.members.iter().enumerate() {
                let coeff = u[(i, k)] * lambda.sqrt();
                for (a, b) in psi.iter_mut().zip(e) {
                    *a += coeff * b;
                }
            }
            let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            if p > 0.0 {
                let n = p.sqrt();
                members.push((p, psi.map(|z| z / n)));
            }
        }
        Ok(Self { members })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.members
            .iter()
            .fold(ComplexMatrix::zeros(4), |acc, (p, psi)| {
                &acc + &ComplexMatrix::projector(psi).scale_real(*p)
            })
    }

    /// `Σ pᵢ E(ψᵢ)`.
    pub fn average_entanglement(&self) -> Result<f64> {
        self.members
            .iter()
            .map(|(p, psi)| Ok(p * pure_state_entanglement(psi)?))
            .sum()
    }
}

/// Average entanglement of `samples` random decompositions of `rho`.
pub fn sampled_decomposition_averages(
    rho: &DensityMatrix,
    ensemble_size: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if !(1..=8).contains(&ensemble_size) {
        return Err(Error::usage(format!(
            "ensemble size must be in 1..=8, got {ensemble_size}"
        )));
    }
    if samples == 0 {
        return Err(Error::usage("at least one sample is required"));
    }
    validate_state(rho)?;
    let mut rng = rng_from_seed(seed);
    (0..samples)
        .map(|_| Ensemble::sample(rho, ensemble_size, &mut rng)?.average_entanglement())
        .collect()
}

/// Smallest sampled average entanglement; an upper estimate of `E_f`.
pub fn sample_decomposition_average(
    rho: &DensityMatrix,
    ensemble_size: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    Ok(
        sampled_decomposition_averages(rho, ensemble_size, samples, seed)?
            .into_iter()
            .fold(f64::INFINITY, f64::min),
    )
}
