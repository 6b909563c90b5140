//! Correlations of two-qubit thermal states of Heisenberg-type spin dimers.
//!
//! The crate is organised bottom-up:
//!
//! * [`matkernel`]: dense complex linear algebra for 2×2 and 4×4 operators
//!   (Pauli matrices, Kronecker products, a cyclic Jacobi eigensolver,
//!   Gibbs states, partial trace and partial transpose).
//! * [`models`]: the dimer Hamiltonian, its closed-form eigensystems and
//!   thermal states, and the zero-temperature limit.
//! * [`correlations`]: mutual information, Wootters concurrence,
//!   entanglement of formation, the classical remainder, and two
//!   independent oracles (PPT test, ensemble sampling).
//! * [`threshold`]: threshold temperatures above which entanglement vanishes.
//! * [`sweep`]: parallel, order-independent grid evaluation and feature
//!   detection on the resulting tables.
//! * [`output`] and [`verify`]: record formatting and the oracle suites
//!   shared by the command-line tool and the Python bindings.

pub mod correlations;
pub mod error;
pub mod matkernel;
pub mod models;
pub mod output;
pub mod random;
pub mod sweep;
pub mod threshold;
pub mod verify;

pub use correlations::{
    classical_correlation, concurrence, entanglement_of_formation, is_separable_ppt,
    mutual_information, report, sample_decomposition_average, von_neumann_entropy,
    CorrelationReport, Ensemble,
};
pub use error::{Error, Result};
pub use matkernel::{
    gibbs, hermitian_eig, kron, partial_trace, partial_transpose, pauli, ComplexMatrix,
    DensityMatrix, EigenSystem, PauliAxis, Subsystem,
};
pub use models::{
    analytic_eigensystem, build_hamiltonian, ground_state_limit, thermal_state,
    thermal_state_analytic, thermal_state_auto, EigenPair, ModelParams,
};
pub use num_complex::Complex64 as Complex;
pub use sweep::{run_sweep, AxisName, AxisSpec, SweepSpec, SweepTable};
pub use threshold::{threshold_curve, tth_anisotropic, tth_numeric, ThresholdPoint};
