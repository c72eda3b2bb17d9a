//! Python bindings for `gapcert`. Heavy calls release the GIL.

use gapcert::certificate::{self, CertifyOptions, GammaMode, GapCertificate};
use gapcert::ed::{self, EigenOptions};
use gapcert::mps::{self, BoundSuite as CoreBoundSuite};
use gapcert::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(msg) => PyValueError::new_err(msg),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// A spectral gap certificate for decoration number `n`.
#[pyclass(name = "Certificate", module = "gapcert", frozen)]
struct Certificate(GapCertificate);

#[pymethods]
impl Certificate {
    #[getter]
    fn n(&self) -> u32 {
        self.0.n
    }
    #[getter]
    fn a_n(&self) -> f64 {
        self.0.a_n
    }
    #[getter]
    fn b_n(&self) -> f64 {
        self.0.b_n
    }
    #[getter]
    fn a_big(&self) -> f64 {
        self.0.a_big
    }
    #[getter]
    fn eps_bound(&self) -> f64 {
        self.0.eps_bound
    }
    #[getter]
    fn eps_exact(&self) -> Option<f64> {
        self.0.eps_exact
    }
    #[getter]
    fn gamma_y(&self) -> f64 {
        self.0.gamma_y
    }
    #[getter]
    fn gamma_y_source(&self) -> &'static str {
        self.0.gamma_y_source.as_str()
    }
    #[getter]
    fn gap_lower_bound(&self) -> f64 {
        self.0.gap_lower_bound
    }
    #[getter]
    fn valid(&self) -> bool {
        self.0.valid
    }
    #[getter]
    fn invalid_reason(&self) -> Option<String> {
        self.0.invalid_reason.clone()
    }
    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }
    #[getter]
    fn bound_suite(&self) -> BoundSuite {
        BoundSuite(self.0.bound_suite.clone())
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(n={}, eps_bound={:.6}, gamma_y={:.6}, gap_lower_bound={:.6}, valid={})",
            self.0.n,
            self.0.eps_bound,
            self.0.gamma_y,
            self.0.gap_lower_bound,
            if self.0.valid { "True" } else { "False" }
        )
    }
}

/// Transfer-operator constants and the derived angle bound.
#[pyclass(name = "BoundSuite", module = "gapcert", frozen)]
struct BoundSuite(CoreBoundSuite);

#[pymethods]
impl BoundSuite {
    #[new]
    #[pyo3(signature = (n, closed_form = false))]
    fn new(py: Python<'_>, n: u32, closed_form: bool) -> PyResult<Self> {
        let suite = py.detach(|| if closed_form { CoreBoundSuite::aklt_closed_form(n) } else { CoreBoundSuite::aklt(n) });
        suite.map(Self).map_err(to_py)
    }
    #[getter]
    fn n(&self) -> u32 {
        self.0.n
    }
    #[getter]
    fn a_n(&self) -> f64 {
        self.0.a_n
    }
    #[getter]
    fn b_n(&self) -> f64 {
        self.0.b_n
    }
    #[getter]
    fn q_l(&self) -> f64 {
        self.0.q_l
    }
    #[getter]
    fn q_r(&self) -> f64 {
        self.0.q_r
    }
    #[getter]
    fn rho_min(&self) -> f64 {
        self.0.rho_min
    }
    #[getter]
    fn norm_el(&self) -> f64 {
        self.0.norm_el
    }
    #[getter]
    fn norm_er(&self) -> f64 {
        self.0.norm_er
    }
    #[getter]
    fn b_l(&self) -> f64 {
        self.0.b_l
    }
    #[getter]
    fn b_r(&self) -> f64 {
        self.0.b_r
    }
    #[getter]
    fn b_g(&self) -> f64 {
        self.0.b_g
    }
    #[getter]
    fn b_lr(&self) -> f64 {
        self.0.b_lr
    }
    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta
    }
    #[getter]
    fn eps_bound(&self) -> f64 {
        self.0.eps_bound
    }
    #[getter]
    fn valid(&self) -> bool {
        self.0.valid
    }

    fn __repr__(&self) -> String {
        format!("BoundSuite(n={}, a_n={:e}, eps_bound={:.6})", self.0.n, self.0.a_n, self.0.eps_bound)
    }
}

/// Compute a certificate. With `gamma` given, `γ_Y` is taken as supplied
/// instead of being diagonalised.
#[pyfunction]
#[pyo3(signature = (n, gamma = None, exact = false, allow_large_n = false, seed = gapcert::DEFAULT_SEED))]
fn certify(py: Python<'_>, n: u32, gamma: Option<f64>, exact: bool, allow_large_n: bool, seed: u64) -> PyResult<Certificate> {
    let mode = gamma.map_or(GammaMode::Compute, GammaMode::Supplied);
    let opts = CertifyOptions { seed, exact_epsilon: exact, allow_large_n };
    py.detach(|| certificate::certify_with(n, mode, &opts)).map(Certificate).map_err(to_py)
}

/// `(A_n, eps_bound, valid)` from the closed-form angle bound.
#[pyfunction]
fn epsilon_bound(n: u32) -> PyResult<(f64, f64, bool)> {
    let b = mps::epsilon_bound(n).map_err(to_py)?;
    Ok((b.a_big, b.eps, b.valid))
}

/// `(eps, intersection_dim, leading_cosines)` from principal angles.
#[pyfunction]
#[pyo3(signature = (n, allow_large_n = false, seed = gapcert::DEFAULT_SEED))]
fn epsilon_exact(py: Python<'_>, n: usize, allow_large_n: bool, seed: u64) -> PyResult<(f64, usize, Vec<f64>)> {
    let opts = EigenOptions { seed, ..EigenOptions::default() };
    let e = py.detach(|| ed::angles::epsilon_exact_with(n, allow_large_n, &opts)).map_err(to_py)?;
    Ok((e.eps, e.intersection_dim, e.leading_cosines))
}

/// `(gamma_Y, kernel_dim, hilbert_dim)` for the single-hub patch.
#[pyfunction]
#[pyo3(signature = (n, seed = gapcert::DEFAULT_SEED))]
fn gamma_y(py: Python<'_>, n: usize, seed: u64) -> PyResult<(f64, usize, usize)> {
    let opts = EigenOptions { seed, ..EigenOptions::default() };
    let g = py.detach(|| ed::hub::gamma_y_with(n, &opts)).map_err(to_py)?;
    Ok((g.gamma, g.kernel_dim, g.hilbert_dim))
}

/// Eigenvalues of the bulk transfer operator, as `(re, im)` pairs.
#[pyfunction]
fn transfer_spectrum() -> PyResult<Vec<(f64, f64)>> {
    let e = mps::transfer_operator(&mps::aklt_site_tensor());
    Ok(e.spectrum().map_err(to_py)?.into_iter().map(|z| (z.re, z.im)).collect())
}

/// Worst residual of the projector inequality over seeded random pairs.
#[pyfunction]
#[pyo3(signature = (trials = 1000, min_dim = 4, max_dim = 12, seed = gapcert::DEFAULT_SEED))]
fn fnw_sweep(py: Python<'_>, trials: usize, min_dim: usize, max_dim: usize, seed: u64) -> PyResult<f64> {
    py.detach(|| ed::fnw_sweep(trials, min_dim, max_dim, seed)).map(|s| s.worst_residual).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "gapcert")]
fn gapcert_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("DEFAULT_SEED", gapcert::DEFAULT_SEED)?;
    m.add_class::<Certificate>()?;
    m.add_class::<BoundSuite>()?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_bound, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_exact, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_y, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(fnw_sweep, m)?)?;
    Ok(())
}
