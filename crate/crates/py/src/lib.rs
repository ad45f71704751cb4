//! Python bindings: the network type plus the main builders and the
//! spectral pipeline.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use powernet_core::multipoly::{MultiIndex, MultiPoly};
use powernet_core::poly1d::{PolyCoeffs, Strategy};
use powernet_core::spectral::TestFunction;
use powernet_core::Error;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A rectified-power-unit network; immutable once built.
#[pyclass(name = "PowerNet", frozen)]
struct PyPowerNet {
    inner: powernet_core::PowerNet,
}

#[pymethods]
impl PyPowerNet {
    fn evaluate(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.evaluate(&x).map_err(err)
    }

    fn evaluate_batch(&self, points: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        self.inner.evaluate_batch(&points).map_err(err)
    }

    /// (depth, hidden nodes, nonzero weights)
    fn stats(&self) -> (usize, usize, usize) {
        let st = self.inner.stats();
        (st.depth, st.nodes, st.nonzeros)
    }

    #[getter]
    fn power(&self) -> u32 {
        self.inner.power()
    }

    #[getter]
    fn input_dim(&self) -> usize {
        self.inner.input_dim()
    }

    #[getter]
    fn output_dim(&self) -> usize {
        self.inner.output_dim()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPowerNet {
            inner: powernet_core::PowerNet::from_json(text).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        let st = self.inner.stats();
        format!(
            "PowerNet(s={}, input_dim={}, depth={}, nodes={})",
            self.inner.power(),
            self.inner.input_dim(),
            st.depth,
            st.nodes
        )
    }
}

/// Net realizing x^n exactly.
#[pyfunction]
fn monomial_net(n: u64, s: u32) -> PyResult<PyPowerNet> {
    Ok(PyPowerNet {
        inner: powernet_core::monomial::monomial_net(n, s).map_err(err)?,
    })
}

/// Depth-2 net realizing the identity on all of R.
#[pyfunction]
fn identity_net(s: u32) -> PyResult<PyPowerNet> {
    Ok(PyPowerNet {
        inner: powernet_core::netcore::identity_net(s).map_err(err)?,
    })
}

/// Net realizing a univariate polynomial (ascending coefficients) exactly.
/// Strategy is one of shallow | horner | recursive | optimal | auto.
#[pyfunction]
#[pyo3(signature = (coeffs, s, strategy = "auto"))]
fn poly_net(coeffs: Vec<f64>, s: u32, strategy: &str) -> PyResult<PyPowerNet> {
    let p = PolyCoeffs::new(coeffs).map_err(err)?;
    let strat = Strategy::parse(strategy).map_err(err)?;
    Ok(PyPowerNet {
        inner: powernet_core::poly1d::build_poly_net(&p, s, strat).map_err(err)?,
    })
}

/// Net realizing a sparse multivariate polynomial exactly. Terms are
/// (exponent vector, coefficient) pairs; the support is completed to its
/// downward closure.
#[pyfunction]
fn mpoly_net(dim: usize, terms: Vec<(Vec<u32>, f64)>, s: u32) -> PyResult<PyPowerNet> {
    let mut map: BTreeMap<MultiIndex, f64> = BTreeMap::new();
    for (k, a) in terms {
        if k.len() != dim {
            return Err(PyValueError::new_err(format!(
                "term {k:?} has {} exponents, expected {dim}",
                k.len()
            )));
        }
        *map.entry(MultiIndex(k)).or_insert(0.0) += a;
    }
    let f = MultiPoly::from_terms(dim, map)
        .and_then(|f| f.with_completed_support())
        .map_err(err)?;
    Ok(PyPowerNet {
        inner: powernet_core::multipoly::mpoly_net(&f, s).map_err(err)?,
    })
}

/// Depth-2 net computing x^n * y from (x, y).
#[pyfunction]
fn xny_net(n: u32, s: u32) -> PyResult<PyPowerNet> {
    Ok(PyPowerNet {
        inner: powernet_core::bivariate::xny_net(n, s).map_err(err)?,
    })
}

/// Shift points b_1..b_s for "chebyshev" | "equidistant" | "optimal".
#[pyfunction]
fn make_nodes(scheme: &str, s: u32) -> PyResult<Vec<f64>> {
    let scheme = powernet_core::vandermonde::NodeScheme::parse(scheme).map_err(err)?;
    powernet_core::vandermonde::make_nodes(scheme, s).map_err(err)
}

/// l-infinity condition number of the Vandermonde matrix on the nodes.
#[pyfunction]
fn cond_inf(nodes: Vec<f64>) -> PyResult<f64> {
    powernet_core::vandermonde::cond_inf(&nodes).map_err(err)
}

/// Gauss-Legendre rule: (nodes, weights).
#[pyfunction]
fn gauss_legendre(nq: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let r = powernet_core::spectral::gauss_legendre(nq).map_err(err)?;
    Ok((r.nodes, r.weights))
}

/// Projects a built-in function (exp, sin3, runge, absx3, inv2px, expxy,
/// sumsq) to degree n and compiles the projection.
/// Returns (net, l2_error, linf_error).
#[pyfunction]
#[pyo3(signature = (func, n, s, d = 1))]
fn approximate_net(func: &str, n: u32, s: u32, d: usize) -> PyResult<(PyPowerNet, f64, f64)> {
    let f = TestFunction::parse(func).map_err(err)?;
    let (net, report) = if d == 1 {
        powernet_core::spectral::approximate_net_1d(|x| f.eval(&[x]), n as usize, s).map_err(err)?
    } else {
        powernet_core::spectral::approximate_net_md(|x| f.eval(x), n, d, s).map_err(err)?
    };
    Ok((
        PyPowerNet { inner: net },
        report.l2_error,
        report.linf_error,
    ))
}

#[pymodule]
fn powernet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPowerNet>()?;
    m.add_function(wrap_pyfunction!(monomial_net, m)?)?;
    m.add_function(wrap_pyfunction!(identity_net, m)?)?;
    m.add_function(wrap_pyfunction!(poly_net, m)?)?;
    m.add_function(wrap_pyfunction!(mpoly_net, m)?)?;
    m.add_function(wrap_pyfunction!(xny_net, m)?)?;
    m.add_function(wrap_pyfunction!(make_nodes, m)?)?;
    m.add_function(wrap_pyfunction!(cond_inf, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_legendre, m)?)?;
    m.add_function(wrap_pyfunction!(approximate_net, m)?)?;
    Ok(())
}
