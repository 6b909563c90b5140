//! Python bindings. Matrices cross the boundary as nested lists of `complex`
//! (row-major, 4×4 for two-qubit states).

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dimercorr::output::OutputRecord;
use dimercorr::sweep::{self, AxisSpec, SweepSpec};
use dimercorr::verify::{self, Suite, VerifyConfig};
use dimercorr::{ComplexMatrix, CorrelationReport, DensityMatrix, Subsystem};

fn py_err(e: dimercorr::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for dimercorr::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

type Rows = Vec<Vec<Complex64>>;

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    ComplexMatrix::new(dim, rows.into_iter().flatten().collect()).py()
}

fn to_state(rows: Rows) -> PyResult<DensityMatrix> {
    DensityMatrix::new(to_matrix(rows)?).py()
}

fn subsystem(which: u8) -> PyResult<Subsystem> {
    Subsystem::try_from(which).py()
}

#[pyclass(name = "ModelParams", module = "dimercorr_py", from_py_object)]
#[derive(Clone, Copy)]
struct PyModelParams {
    inner: dimercorr::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (gamma=0.0, b1=0.0, b2=0.0, j=1.0))]
    fn new(gamma: f64, b1: f64, b2: f64, j: f64) -> PyResult<Self> {
        Ok(Self {
            inner: dimercorr::ModelParams::new(gamma, b1, b2, j).py()?,
        })
    }

    /// Zero-field model with anisotropy `gamma`.
    #[staticmethod]
    fn heisenberg(gamma: f64) -> PyResult<Self> {
        Ok(Self {
            inner: dimercorr::ModelParams::heisenberg(gamma).py()?,
        })
    }

    /// `gamma = -1` in fields `b1`, `b2`.
    #[staticmethod]
    fn xy(b1: f64, b2: f64) -> PyResult<Self> {
        Ok(Self {
            inner: dimercorr::ModelParams::xy(b1, b2).py()?,
        })
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn b1(&self) -> f64 {
        self.inner.b1
    }

    #[getter]
    fn b2(&self) -> f64 {
        self.inner.b2
    }

    #[getter]
    fn j(&self) -> f64 {
        self.inner.j
    }

    fn has_closed_form(&self) -> bool {
        self.inner.has_closed_form()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "ModelParams(gamma={}, b1={}, b2={}, j={})",
            p.gamma, p.b1, p.b2, p.j
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

fn report_dict<'py>(py: Python<'py>, r: &CorrelationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("total", r.total)?;
    d.set_item("quantum", r.quantum)?;
    d.set_item("classical", r.classical)?;
    d.set_item("concurrence", r.concurrence)?;
    Ok(d)
}

fn record_dict<'py>(py: Python<'py>, r: &OutputRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("T", r.t)?;
    d.set_item("gamma", r.gamma)?;
    d.set_item("b1", r.b1)?;
    d.set_item("b2", r.b2)?;
    d.set_item("total", r.total)?;
    d.set_item("quantum", r.quantum)?;
    d.set_item("classical", r.classical)?;
    d.set_item("concurrence", r.concurrence)?;
    Ok(d)
}

/// Spectral Gibbs state `exp(-H/T)/Z`.
#[pyfunction]
fn thermal_state(params: PyModelParams, t: f64) -> PyResult<Rows> {
    Ok(to_rows(
        dimercorr::thermal_state(&params.inner, t).py()?.matrix(),
    ))
}

/// Closed-form thermal state; only for the zero-field and `gamma = -1` families.
#[pyfunction]
fn thermal_state_analytic(params: PyModelParams, t: f64) -> PyResult<Rows> {
    Ok(to_rows(
        dimercorr::thermal_state_analytic(&params.inner, t)
            .py()?
            .matrix(),
    ))
}

#[pyfunction]
fn ground_state_limit(params: PyModelParams) -> PyResult<Rows> {
    Ok(to_rows(
        dimercorr::ground_state_limit(&params.inner).py()?.matrix(),
    ))
}

#[pyfunction]
fn hamiltonian(params: PyModelParams) -> PyResult<Rows> {
    Ok(to_rows(&dimercorr::build_hamiltonian(&params.inner).py()?))
}

/// Ascending eigenvalues and the matching eigenvectors (as columns).
#[pyfunction]
fn hermitian_eig(matrix: Rows) -> PyResult<(Vec<f64>, Rows)> {
    let eig = dimercorr::hermitian_eig(&to_matrix(matrix)?).py()?;
    Ok((eig.values.clone(), to_rows(&eig.vectors)))
}

/// Reduced state of qubit `keep` (1 or 2).
#[pyfunction]
fn partial_trace(matrix: Rows, keep: u8) -> PyResult<Rows> {
    Ok(to_rows(
        &dimercorr::partial_trace(&to_matrix(matrix)?, subsystem(keep)?).py()?,
    ))
}

#[pyfunction]
#[pyo3(signature = (matrix, on=2))]
fn partial_transpose(matrix: Rows, on: u8) -> PyResult<Rows> {
    Ok(to_rows(
        &dimercorr::partial_transpose(&to_matrix(matrix)?, subsystem(on)?).py()?,
    ))
}

#[pyfunction]
fn von_neumann_entropy(matrix: Rows) -> PyResult<f64> {
    dimercorr::von_neumann_entropy(&to_matrix(matrix)?).py()
}

#[pyfunction]
fn mutual_information(matrix: Rows) -> PyResult<f64> {
    dimercorr::mutual_information(&to_state(matrix)?).py()
}

#[pyfunction]
fn concurrence(matrix: Rows) -> PyResult<f64> {
    dimercorr::concurrence(&to_state(matrix)?).py()
}

#[pyfunction]
fn entanglement_of_formation(matrix: Rows) -> PyResult<f64> {
    dimercorr::entanglement_of_formation(&to_state(matrix)?).py()
}

#[pyfunction]
fn classical_correlation(matrix: Rows) -> PyResult<f64> {
    dimercorr::classical_correlation(&to_state(matrix)?).py()
}

#[pyfunction]
fn is_separable_ppt(matrix: Rows) -> PyResult<bool> {
    dimercorr::is_separable_ppt(&to_state(matrix)?).py()
}

/// `{total, quantum, classical, concurrence}` for a density matrix.
#[pyfunction]
fn report<'py>(py: Python<'py>, matrix: Rows) -> PyResult<Bound<'py, PyDict>> {
    report_dict(py, &dimercorr::report(&to_state(matrix)?).py()?)
}

/// Report of the thermal state at one parameter point.
#[pyfunction]
fn point<'py>(py: Python<'py>, params: PyModelParams, t: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = sweep::evaluate_point(&params.inner, t).py()?;
    record_dict(py, &OutputRecord::new(&params.inner, t, &r))
}

#[pyfunction]
fn sample_decomposition_average(
    matrix: Rows,
    ensemble_size: usize,
    samples: usize,
    seed: u64,
) -> PyResult<f64> {
    dimercorr::sample_decomposition_average(&to_state(matrix)?, ensemble_size, samples, seed).py()
}

/// Zero-field threshold temperature; 0 at `gamma = 1`.
#[pyfunction]
fn tth_anisotropic(gamma: f64) -> PyResult<f64> {
    Ok(dimercorr::tth_anisotropic(gamma).py()?.t_th)
}

/// Last temperature below `t_max` where the concurrence vanishes, or None.
#[pyfunction]
#[pyo3(signature = (params, t_max=5.0))]
fn tth_numeric(params: PyModelParams, t_max: f64) -> PyResult<Option<f64>> {
    Ok(dimercorr::tth_numeric(&params.inner, t_max)
        .py()?
        .map(|th| th.t_th))
}

#[pyfunction]
fn threshold_curve<'py>(py: Python<'py>, gammas: Vec<f64>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    dimercorr::threshold_curve(&gammas)
        .py()?
        .iter()
        .map(|p| {
            let d = PyDict::new(py);
            d.set_item("gamma", p.gamma)?;
            d.set_item("t_th", p.t_th)?;
            d.set_item("degenerate", p.degenerate)?;
            Ok(d)
        })
        .collect()
}

/// Grid evaluation. Axes are `"name=start:stop:points"` strings; rows come
/// back row-major as dicts with the CSV column names.
#[pyfunction(name = "sweep")]
#[pyo3(signature = (params, axis, axis2=None, temperature=None))]
fn run_sweep<'py>(
    py: Python<'py>,
    params: PyModelParams,
    axis: &str,
    axis2: Option<&str>,
    temperature: Option<f64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let a1: AxisSpec = axis.parse().py()?;
    let spec = match axis2 {
        Some(a2) => SweepSpec::two_d(params.inner, temperature, a1, a2.parse().py()?),
        None => SweepSpec::one_d(params.inner, temperature, a1),
    }
    .py()?;
    let table = py.detach(|| dimercorr::run_sweep(&spec)).py()?;
    table
        .rows
        .iter()
        .map(|row| {
            let r = row.report().map_err(|e| py_err(e.clone()))?;
            record_dict(py, &OutputRecord::new(&row.params, row.temperature, r))
        })
        .collect()
}

/// Oracle suites; returns one dict per check.
#[pyfunction(name = "verify")]
#[pyo3(signature = (suite="all", seed=7, samples=None, states=verify::DEFAULT_ENSEMBLE_STATES))]
fn run_verify<'py>(
    py: Python<'py>,
    suite: &str,
    seed: u64,
    samples: Option<usize>,
    states: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let suite: Suite = suite.parse().py()?;
    let cfg = VerifyConfig {
        seed,
        samples,
        ensemble_states: states,
    };
    let results = py.detach(|| verify::run(suite, &cfg)).py()?;
    results
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("name", r.name)?;
            d.set_item("passed", r.passed)?;
            d.set_item("worst_residual", r.worst_residual)?;
            d.set_item("detail", &r.detail)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn dimercorr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_function(wrap_pyfunction!(thermal_state, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_state_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state_limit, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(hermitian_eig, m)?)?;
    m.add_function(wrap_pyfunction!(partial_trace, m)?)?;
    m.add_function(wrap_pyfunction!(partial_transpose, m)?)?;
    m.add_function(wrap_pyfunction!(von_neumann_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_of_formation, m)?)?;
    m.add_function(wrap_pyfunction!(classical_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(is_separable_ppt, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(point, m)?)?;
    m.add_function(wrap_pyfunction!(sample_decomposition_average, m)?)?;
    m.add_function(wrap_pyfunction!(tth_anisotropic, m)?)?;
    m.add_function(wrap_pyfunction!(tth_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_curve, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add("SIGNIFICANT_DIGITS", dimercorr::output::SIGNIFICANT_DIGITS)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let m = dimercorr::DensityMatrix::singlet().into_matrix();
        let back = to_matrix(to_rows(&m)).unwrap();
        assert_eq!(back.max_abs_diff(&m), 0.0);
        assert!(to_matrix(vec![vec![Complex64::new(1.0, 0.0)]; 2]).is_err());
    }
}
