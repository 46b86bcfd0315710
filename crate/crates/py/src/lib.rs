//! Python bindings: domains, kernels, spectra, functionals, the finite
//! ensemble and dilation sweeps.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dpplab::finite::{self, DEFAULT_BOX_FACTOR, DEFAULT_TAIL_TOL};
use dpplab::functionals::FunctionalReport;
use dpplab::lab::{self, SolverMethod, SweepConfig};
use dpplab::spectral::{self, DEFAULT_SPECTRAL_TOL};

fn py_err(e: dpplab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Rule = (Vec<(f64, f64)>, Vec<f64>);

fn pt((x, y): (f64, f64)) -> dpplab::Point2 {
    dpplab::Point2::new(x, y)
}

#[pyclass(name = "Domain", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDomain(dpplab::Domain);

#[pymethods]
impl PyDomain {
    /// Parses `disk:<R>`, `rect:<W>x<H>` or `poly:<path>`.
    #[new]
    fn new(descriptor: &str) -> PyResult<Self> {
        dpplab::Domain::from_descriptor(descriptor).map(PyDomain).map_err(py_err)
    }

    #[staticmethod]
    fn disk(radius: f64) -> PyResult<Self> {
        dpplab::Domain::new(dpplab::Shape::disk(radius)).map(PyDomain).map_err(py_err)
    }

    #[staticmethod]
    fn rect(width: f64, height: f64) -> PyResult<Self> {
        dpplab::Domain::new(dpplab::Shape::centered_rectangle(width, height)).map(PyDomain).map_err(py_err)
    }

    #[staticmethod]
    fn polygon(vertices: Vec<(f64, f64)>) -> PyResult<Self> {
        let v = vertices.into_iter().map(pt).collect();
        dpplab::Domain::new(dpplab::Shape::polygon(v)).map(PyDomain).map_err(py_err)
    }

    #[getter]
    fn area(&self) -> f64 {
        self.0.area()
    }

    #[getter]
    fn perimeter(&self) -> f64 {
        self.0.perimeter()
    }

    fn dilate(&self, factor: f64) -> PyResult<Self> {
        self.0.dilate(factor).map(PyDomain).map_err(py_err)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        self.0.contains(dpplab::Point2::new(x, y))
    }

    /// `(nodes, weights)` of the quadrature rule of the given order.
    fn quadrature(&self, order: usize) -> PyResult<Rule> {
        let rule = self.0.quadrature(order).map_err(py_err)?;
        Ok((rule.nodes().iter().map(|p| (p.x, p.y)).collect(), rule.weights().to_vec()))
    }

    fn __repr__(&self) -> String {
        format!("Domain({})", self.0)
    }
}

#[pyclass(name = "Kernel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyKernel(dpplab::KernelSpec);

#[pymethods]
impl PyKernel {
    /// Parses `ginibre`, `landau:<n>`, `wh-hermite:<n>` or `wh-file:<path>`.
    #[new]
    fn new(descriptor: &str) -> PyResult<Self> {
        dpplab::KernelSpec::from_descriptor(descriptor).map(PyKernel).map_err(py_err)
    }

    fn eval(&self, z: (f64, f64), w: (f64, f64)) -> PyResult<Complex64> {
        self.0.eval(pt(z), pt(w)).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Kernel({})", self.0)
    }
}

/// Eigenvalues (non-increasing, clamped to [0, 1]) on `domain`.
#[pyfunction]
#[pyo3(signature = (kernel, domain, order = 24, method = "auto"))]
fn spectrum(kernel: &PyKernel, domain: &PyDomain, order: usize, method: &str) -> PyResult<Vec<f64>> {
    let mut cfg = SweepConfig::new(kernel.0.clone(), domain.0.clone());
    cfg.quad_order = order;
    cfg.scale_order = false;
    cfg.method = method.parse::<SolverMethod>().map_err(PyValueError::new_err)?;
    Ok(lab::solve_domain(&cfg, &domain.0).map_err(py_err)?.lambdas().to_vec())
}

/// Expected count, variance, entropy and Schatten traces of a spectrum.
#[pyfunction]
#[pyo3(signature = (lambdas, ps = vec![0.5, 1.0]))]
fn functionals<'py>(py: Python<'py>, lambdas: Vec<f64>, ps: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let s = dpplab::Spectrum::from_raw(lambdas, DEFAULT_SPECTRAL_TOL);
    let f = FunctionalReport::compute(&s, &ps).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("expected_count", f.expected_count)?;
    d.set_item("variance", f.variance)?;
    d.set_item("entropy", f.entropy)?;
    d.set_item("schatten", f.schatten.to_vec())?;
    d.set_item("S_over_V", f.ratio_entropy_variance)?;
    Ok(d)
}

/// `[P(j + 1, πR²) for j < count]`.
#[pyfunction]
fn ginibre_disk_spectrum(radius: f64, count: usize) -> PyResult<Vec<f64>> {
    Ok(spectral::ginibre_disk_spectrum_analytic(radius, count).map_err(py_err)?.lambdas().to_vec())
}

#[pyfunction]
fn incomplete_gamma(a: f64, x: f64) -> PyResult<f64> {
    spectral::regularized_lower_incomplete_gamma(a, x).map_err(py_err)
}

#[pyclass(name = "FiniteEnsemble", frozen)]
struct PyFiniteEnsemble(finite::FiniteEnsemble);

#[pymethods]
impl PyFiniteEnsemble {
    #[new]
    #[pyo3(signature = (kernel, domain, order = 16))]
    fn new(kernel: &PyKernel, domain: &PyDomain, order: usize) -> PyResult<Self> {
        let rule = domain.0.quadrature(order).map_err(py_err)?;
        finite::build_finite(&kernel.0, &domain.0, &rule).map(PyFiniteEnsemble).map_err(py_err)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn leading_eigenvalues(&self) -> Vec<f64> {
        self.0.leading_eigenvalues().to_vec()
    }

    fn intensity(&self, x: f64, y: f64) -> PyResult<f64> {
        finite::intensity_finite(&self.0, dpplab::Point2::new(x, y)).map_err(py_err)
    }

    /// `N - Σ_{n≤N} λ_n`.
    fn gap(&self) -> f64 {
        finite::truncation_gap(&self.0).gap
    }

    fn l1_deviation(&self) -> PyResult<f64> {
        let rule = finite::tail_box_rule(&self.0, DEFAULT_BOX_FACTOR).map_err(py_err)?;
        Ok(finite::l1_deviation(&self.0, &rule, DEFAULT_TAIL_TOL).map_err(py_err)?.deviation)
    }

    fn sample(&self, seed: u64) -> PyResult<Vec<(f64, f64)>> {
        let s = finite::sample(&self.0, seed).map_err(py_err)?;
        Ok(s.points.iter().map(|p| (p.x, p.y)).collect())
    }

    /// `count` samples on independent streams; runs without the GIL.
    fn sample_many(&self, py: Python<'_>, seed: u64, count: usize) -> PyResult<Vec<Vec<(f64, f64)>>> {
        let samples = py.detach(|| finite::sample_many(&self.0, seed, count, DEFAULT_BOX_FACTOR)).map_err(py_err)?;
        Ok(samples.iter().map(|s| s.points.iter().map(|p| (p.x, p.y)).collect()).collect())
    }
}

/// `(class, residual_linear, residual_log)` for a variance curve.
#[pyfunction]
fn classify(ls: Vec<f64>, variances: Vec<f64>) -> (String, f64, f64) {
    let c = lab::classify_curve(&ls, &variances);
    (c.class.to_string(), c.residual_linear, c.residual_log)
}

/// Runs a sweep from config text and returns the report CSV.
#[pyfunction]
fn run_sweep(py: Python<'_>, config: &str) -> PyResult<String> {
    let cfg = lab::parse_config(config).map_err(py_err)?;
    let report = py.detach(|| lab::run_sweep(&cfg)).map_err(py_err)?;
    let mut buf = Vec::new();
    lab::write_report(&report, &mut buf).map_err(py_err)?;
    String::from_utf8(buf).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn pydpplab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDomain>()?;
    m.add_class::<PyKernel>()?;
    m.add_class::<PyFiniteEnsemble>()?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(functionals, m)?)?;
    m.add_function(wrap_pyfunction!(ginibre_disk_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(incomplete_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
