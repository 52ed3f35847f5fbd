//! Python bindings: rings, ideals and the main reports, returned as plain dicts.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use reeslab::asymptotics;
use reeslab::betti::{self, ModuleKind};
use reeslab::diagonals::{self, GorensteinFamily};
use reeslab::gin;
use reeslab::hilbert::{self, SeriesOf};
use reeslab::rees;
use reeslab::{Field, MultiDegree, RingSpec, TermOrder};

fn py_err(e: reeslab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// JSON report → Python dict (via the json module, so big integers and nesting round-trip).
fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn parse_field(s: &str) -> PyResult<Field> {
    let t = s.trim();
    if matches!(t, "Q" | "QQ") {
        return Ok(Field::Rational);
    }
    let p = t.strip_prefix("Fp:").unwrap_or(t);
    p.parse().map(Field::Prime).map_err(|_| PyValueError::new_err(format!("unknown field {s:?}; use \"Q\" or \"Fp:p\"")))
}

fn parse_kind(s: &str) -> PyResult<ModuleKind> {
    match s {
        "ideal" => Ok(ModuleKind::Ideal),
        "quotient" => Ok(ModuleKind::Quotient),
        _ => Err(PyValueError::new_err(format!("kind must be \"ideal\" or \"quotient\", not {s:?}"))),
    }
}

/// Polynomial ring k[x_1..x_n] with degrees in N² (default (1, 0)).
#[pyclass(name = "Ring", module = "reeslab", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Ring {
    inner: reeslab::Ring,
}

#[pymethods]
impl Ring {
    #[new]
    #[pyo3(signature = (vars, degrees=None, field="Q", order="degrevlex"))]
    fn new(vars: Vec<String>, degrees: Option<Vec<(i64, i64)>>, field: &str, order: &str) -> PyResult<Self> {
        let degrees: Vec<MultiDegree> = match degrees {
            Some(d) => d.into_iter().map(|(a, b)| MultiDegree::new(a, b)).collect(),
            None => vec![MultiDegree::new(1, 0); vars.len()],
        };
        let order = TermOrder::parse(order).map_err(py_err)?;
        let inner = RingSpec::new(parse_field(field)?, vars, degrees, order).map_err(py_err)?;
        Ok(Ring { inner })
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.vars.clone()
    }

    #[getter]
    fn degrees(&self) -> Vec<(i64, i64)> {
        self.inner.degrees.iter().map(|d| (d.d1, d.d2)).collect()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.inner.field.characteristic()
    }

    #[getter]
    fn order(&self) -> String {
        self.inner.order.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ring({:?}, degrees={:?}, characteristic={}, order={:?})", self.vars(), self.degrees(), self.characteristic(), self.order())
    }
}

/// Homogeneous ideal given by generators in a Ring.
#[pyclass(name = "Ideal", module = "reeslab", frozen)]
pub struct Ideal {
    inner: reeslab::Ideal,
}

impl Ideal {
    fn quotient_series(&self) -> PyResult<hilbert::HilbertSeries> {
        hilbert::hilbert_series_ideal(&self.inner, SeriesOf::Quotient).map_err(py_err)
    }

    fn generator_degree(&self) -> PyResult<i64> {
        let degs = self.inner.generator_degrees().map_err(py_err)?;
        match degs.first() {
            Some(d) if degs.iter().all(|e| e == d) && d.d2 == 0 => Ok(d.d1),
            _ => Err(PyValueError::new_err("ideal must be nonzero and generated in a single degree")),
        }
    }
}

#[pymethods]
impl Ideal {
    #[new]
    fn new(ring: &Ring, generators: Vec<String>) -> PyResult<Self> {
        let refs: Vec<&str> = generators.iter().map(|s| s.as_str()).collect();
        Ok(Ideal { inner: reeslab::Ideal::parse(&ring.inner, &refs).map_err(py_err)? })
    }

    #[getter]
    fn ring(&self) -> Ring {
        Ring { inner: self.inner.ring.clone() }
    }

    fn generators(&self) -> Vec<String> {
        self.inner.gens.iter().map(|g| g.to_string()).collect()
    }

    /// Reduced Gröbner basis for `order` (default: the ring's order).
    #[pyo3(signature = (order=None))]
    fn groebner_basis(&self, order: Option<&str>) -> PyResult<Vec<String>> {
        let order = match order {
            Some(o) => TermOrder::parse(o).map_err(py_err)?,
            None => self.inner.ring.order.clone(),
        };
        Ok(self.inner.groebner_basis(&order).basis.iter().map(|g| g.to_string()).collect())
    }

    fn contains(&self, polynomial: &str) -> PyResult<bool> {
        let f = reeslab::parse_polynomial(polynomial, &self.inner.ring).map_err(py_err)?;
        self.inner.contains(&f).map_err(py_err)
    }

    fn power(&self, j: u32) -> Ideal {
        Ideal { inner: self.inner.power(j) }
    }

    /// Hilbert series of the quotient ("quotient") or of the ideal itself ("ideal").
    #[pyo3(signature = (of="quotient"))]
    fn hilbert_series(&self, py: Python<'_>, of: &str) -> PyResult<Py<PyAny>> {
        let which = match of {
            "quotient" => SeriesOf::Quotient,
            "ideal" => SeriesOf::Ideal,
            _ => return Err(PyValueError::new_err(format!("of must be \"ideal\" or \"quotient\", not {of:?}"))),
        };
        let s = hilbert::hilbert_series_ideal(&self.inner, which).map_err(py_err)?;
        let mut v = s.to_json();
        v["text"] = json!(s.to_string());
        to_py(py, &v)
    }

    /// Hilbert polynomial of the quotient, in the variable s (and t when bigraded).
    fn hilbert_polynomial(&self) -> PyResult<String> {
        let s = self.quotient_series()?;
        let p = if s.is_bigraded() { hilbert::bigraded_hilbert_polynomial(&s) } else { s.hilbert_polynomial() };
        Ok(p.map_err(py_err)?.to_string())
    }

    /// Dimension and multiplicity of the quotient.
    fn dim_mult(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &hilbert::dim_mult(&self.quotient_series()?).map_err(py_err)?.to_json())
    }

    /// Betti table with a*, reg and projective dimension read off the shifts.
    #[pyo3(signature = (kind="ideal"))]
    fn betti(&self, py: Python<'_>, kind: &str) -> PyResult<Py<PyAny>> {
        let b = betti::betti_table(&self.inner, parse_kind(kind)?, None, kind).map_err(py_err)?;
        let mut v = b.to_json();
        v["text"] = json!(b.to_text());
        if !b.entries.is_empty() {
            v["invariants"] = betti::invariants_from_shifts(&b).map_err(py_err)?.to_json();
        }
        to_py(py, &v)
    }

    /// Rees algebra presentation, its bigraded series and the analytic spread.
    fn rees(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let p = rees::rees_presentation(&self.inner).map_err(py_err)?;
        let series = rees::bigraded_hilbert_series_rees(&p).map_err(py_err)?;
        let fiber = rees::fiber_cone(&p).map_err(py_err)?;
        let mut v = p.to_json();
        v["kernel_verified"] = json!(p.verify_kernel().map_err(py_err)?);
        v["series"] = series.to_json();
        v["series_text"] = json!(series.to_string());
        v["analytic_spread"] = json!(fiber.analytic_spread);
        to_py(py, &v)
    }

    /// Generic initial ideal from `trials` seeded random coordinate changes.
    #[pyo3(signature = (order="degrevlex", trials=3, seed=0))]
    fn gin(&self, py: Python<'_>, order: &str, trials: usize, seed: u64) -> PyResult<Py<PyAny>> {
        let order = TermOrder::parse(order).map_err(py_err)?;
        let g = gin::generic_initial_ideal(&self.inner, &order, trials, seed).map_err(py_err)?;
        let mut v = g.to_json();
        v["borel"] = gin::borel_fix_check(&g.ideal, self.inner.ring.field.characteristic()).map_err(py_err)?.to_json();
        to_py(py, &v)
    }

    /// Borel-fixedness of a monomial ideal (with δ when it holds).
    #[pyo3(signature = (characteristic=0))]
    fn borel(&self, py: Python<'_>, characteristic: u32) -> PyResult<Py<PyAny>> {
        to_py(py, &gin::borel_fix_check(&self.inner, characteristic).map_err(py_err)?.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Ideal({:?})", self.generators())
    }
}

/// Interpolate e_i(j) from the Hilbert polynomials of A/I, …, A/I^J.
#[pyfunction]
#[pyo3(signature = (ideal, max_power, threshold=None))]
fn fit_hilbert_polynomials(py: Python<'_>, ideal: &Ideal, max_power: u32, threshold: Option<i64>) -> PyResult<Py<PyAny>> {
    let n = ideal.inner.ring.nvars();
    let dim = ideal.quotient_series()?.dimension().unwrap_or(0);
    let mut samples = BTreeMap::new();
    for j in 1..=max_power {
        let s = hilbert::hilbert_series_ideal(&ideal.inner.power(j), SeriesOf::Quotient).map_err(py_err)?;
        samples.insert(j as i64, s.hilbert_polynomial().map_err(py_err)?);
    }
    let f = asymptotics::fit_hilbert_polynomials(&samples, n, n - dim, threshold).map_err(py_err)?;
    to_py(py, &f.to_json())
}

/// Interpolate P_α(j) from the Hilbert series of I, …, I^J (I generated in one degree).
#[pyfunction]
#[pyo3(signature = (ideal, max_power, threshold=None))]
fn fit_hilbert_series(py: Python<'_>, ideal: &Ideal, max_power: u32, threshold: Option<i64>) -> PyResult<Py<PyAny>> {
    let d = ideal.generator_degree()?;
    let p = rees::rees_presentation(&ideal.inner).map_err(py_err)?;
    let l = rees::fiber_cone(&p).map_err(py_err)?.analytic_spread;
    let mut samples = BTreeMap::new();
    for j in 1..=max_power {
        samples.insert(j as i64, hilbert::hilbert_series_ideal(&ideal.inner.power(j), SeriesOf::Ideal).map_err(py_err)?);
    }
    let f = asymptotics::fit_hilbert_series(&samples, d, l, threshold).map_err(py_err)?;
    to_py(py, &f.to_json())
}

/// Resolution template for I^j from the Betti tables of the listed powers.
#[pyfunction]
#[pyo3(signature = (ideal, powers, threshold=None))]
fn predict_resolutions(py: Python<'_>, ideal: &Ideal, powers: Vec<u32>, threshold: Option<i64>) -> PyResult<Py<PyAny>> {
    let d = ideal.generator_degree()?;
    let p = rees::rees_presentation(&ideal.inner).map_err(py_err)?;
    let l = rees::fiber_cone(&p).map_err(py_err)?.analytic_spread;
    let mut tables = BTreeMap::new();
    for j in powers {
        tables.insert(j as i64, betti::graded_betti_table(&ideal.inner.power(j), ModuleKind::Ideal, None).map_err(py_err)?);
    }
    let t = asymptotics::predict_resolutions(&tables, l, d, threshold).map_err(py_err)?;
    let mut v = t.to_json();
    v["text"] = json!(t.to_text());
    to_py(py, &v)
}

/// Gorenstein diagonals (c, e) of a structured family:
/// "polyring" (n, degrees), "formring" (n, d, height, a), "ci" (n, degrees), "maxminors" (rows, cols).
#[pyfunction]
#[pyo3(signature = (family, n=None, degrees=None, d=None, height=None, a=None, rows=None, cols=None))]
#[allow(clippy::too_many_arguments)]
fn gorenstein_diagonals(
    py: Python<'_>,
    family: &str,
    n: Option<i64>,
    degrees: Option<Vec<i64>>,
    d: Option<i64>,
    height: Option<i64>,
    a: Option<i64>,
    rows: Option<i64>,
    cols: Option<i64>,
) -> PyResult<Py<PyAny>> {
    let need = |v: Option<i64>, name: &str| v.ok_or_else(|| PyValueError::new_err(format!("{family} needs {name}")));
    let needv = |v: Option<Vec<i64>>| v.ok_or_else(|| PyValueError::new_err(format!("{family} needs degrees")));
    let fam = match family {
        "polyring" => GorensteinFamily::PolynomialRing { n: need(n, "n")?, degrees: needv(degrees)? },
        "formring" => GorensteinFamily::GorensteinFormRing { n: need(n, "n")?, d: need(d, "d")?, height: need(height, "height")?, a },
        "ci" => GorensteinFamily::CompleteIntersection { n: need(n, "n")?, degrees: needv(degrees)? },
        "maxminors" => GorensteinFamily::MaximalMinors { rows: need(rows, "rows")?, cols: need(cols, "cols")? },
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    to_py(py, &diagonals::gorenstein_diagonals(&fam).map_err(py_err)?.to_json())
}

#[pymodule(name = "_native")]
fn native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Ring>()?;
    m.add_class::<Ideal>()?;
    m.add_function(wrap_pyfunction!(fit_hilbert_polynomials, m)?)?;
    m.add_function(wrap_pyfunction!(fit_hilbert_series, m)?)?;
    m.add_function(wrap_pyfunction!(predict_resolutions, m)?)?;
    m.add_function(wrap_pyfunction!(gorenstein_diagonals, m)?)?;
    Ok(())
}
