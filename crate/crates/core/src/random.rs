//! Seedable random states and unitaries for oracles and property tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matkernel::{ComplexMatrix, DensityMatrix};

pub type StdRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StdRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `n×n` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let entries = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(n, entries).expect("n*n entries")
}

/// Hilbert–Schmidt random two-qubit state `GG†/tr(GG†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g = ginibre(4, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.scale_real(1.0 / tr).hermitian_part())
}

/// Random density matrix of the given rank (`G` is 4×rank).
pub fn random_density_matrix_of_rank<R: Rng + ?Sized>(rank: usize, rng: &mut R) -> DensityMatrix {
    assert!((1..=4).contains(&rank));
    let mut g = ComplexMatrix::zeros(4);
    for i in 0..4 {
        for k in 0..rank {
            g[(i, k)] = complex_gaussian(rng);
        }
    }
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.scale_real(1.0 / tr).hermitian_part())
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 4] {
    let mut psi = [Complex64::new(0.0, 0.0); 4];
    for z in psi.iter_mut() {
        *z = complex_gaussian(rng);
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.map(|z| z / norm)
}

/// Haar-distributed `n×n` unitary: Gram–Schmidt on a Ginibre matrix with
/// the phase of each diagonal `R` entry absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for q in done.iter() {
            let proj: Complex64 = q.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
            for (z, qi) in col.iter_mut().zip(q) {
                *z -= proj * qi;
            }
        }
        // after Gram-Schmidt the diagonal of R is the (real, positive) norm
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in col.iter_mut() {
            *z /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            u[(i, j)] = col[i];
        }
    }
    u
}
