//! Python bindings. Exact integers cross as Python int, exact rationals as
//! fractions.Fraction, big floats as decimal strings (they exceed f64), and
//! structured results as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyInt, PyList, PyString};
use rug::{Complex, Float, Integer, Rational};
use serde_json::Value;
use std::str::FromStr;

fn pyerr(e: kcrank::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn big_to_py<'py>(py: Python<'py>, v: &Integer) -> PyResult<Bound<'py, PyAny>> {
    let s = v.to_string_radix(16);
    Ok(py.get_type::<PyInt>().call1((s, 16))?.into_any())
}

fn rational_to_py<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    Ok(fraction.call1((r.to_string(),))?.into_any())
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn complex_to_py<'py>(py: Python<'py>, z: &Complex) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &kcrank::report::complex_str(z))
}

fn parse_float(s: &str, prec: u32) -> PyResult<Float> {
    let inc = Float::parse(s).map_err(|e| PyValueError::new_err(format!("bad float {s:?}: {e}")))?;
    Ok(Float::with_val(prec, inc))
}

fn parse_sign(s: &str) -> PyResult<kcrank::modular::Sign> {
    match s {
        "+" | "plus" => Ok(kcrank::modular::Sign::Plus),
        "-" | "minus" => Ok(kcrank::modular::Sign::Minus),
        _ => Err(PyValueError::new_err(format!("sign must be '+' or '-', got {s:?}"))),
    }
}

/// Exact table of p_k(0..=n_max) as Python ints.
#[pyfunction]
#[pyo3(name = "pk_table", signature = (k, n_max))]
fn py_pk_table(py: Python<'_>, k: i64, n_max: usize) -> PyResult<Bound<'_, PyAny>> {
    let table = kcrank::qseries::pk_table(k, n_max).map_err(pyerr)?;
    let list = PyList::empty(py);
    for v in &table {
        list.append(big_to_py(py, v)?)?;
    }
    Ok(list.into_any())
}

/// Dedekind sum s(h, p) as a Fraction.
#[pyfunction]
#[pyo3(name = "dedekind_sum", signature = (h, p))]
fn py_dedekind_sum(py: Python<'_>, h: i64, p: i64) -> PyResult<Bound<'_, PyAny>> {
    rational_to_py(py, &kcrank::modular::dedekind_sum(h, p).map_err(pyerr)?)
}

/// Largest Bessel-argument parameter delta_0 = 1/(2c^2) - 1/(2c) + k/24.
#[pyfunction]
#[pyo3(name = "delta0", signature = (c, k))]
fn py_delta0(py: Python<'_>, c: i64, k: i64) -> PyResult<Bound<'_, PyAny>> {
    rational_to_py(py, &kcrank::modular::delta0(c, k))
}

/// Exact m shift for the non-divisible branch; returns (Fraction, is_integer).
#[pyfunction]
#[pyo3(name = "m_shift", signature = (a, c, p, r, sign))]
fn py_m_shift<'py>(
    py: Python<'py>,
    a: i64,
    c: i64,
    p: i64,
    r: i64,
    sign: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let (m, integral) = kcrank::modular::m_shift(a, c, p, r, parse_sign(sign)?).map_err(pyerr)?;
    let out = PyList::empty(py);
    out.append(rational_to_py(py, &m)?)?;
    out.append(integral)?;
    Ok(out.to_tuple().into_any())
}

/// Modified Bessel function I_{nu2/2}(x); x and the result are decimal strings.
#[pyfunction]
#[pyo3(name = "bessel_i", signature = (nu2, x, prec=128, method="series"))]
fn py_bessel_i(nu2: i64, x: &str, prec: u32, method: &str) -> PyResult<String> {
    let m = match method {
        "series" => kcrank::special::BesselMethod::Series,
        "closed" | "closed_form" => kcrank::special::BesselMethod::ClosedForm,
        _ => {
            return Err(PyValueError::new_err(format!(
                "method must be 'series' or 'closed', got {method:?}"
            )))
        }
    };
    let xf = parse_float(x, prec + 16)?;
    let v = kcrank::special::bessel_i(nu2, &xf, prec, m).map_err(pyerr)?;
    Ok(kcrank::report::float_str(&v))
}

/// Exponential sum A_{p,k}(n, m) as {"re", "im"} decimal strings.
#[pyfunction]
#[pyo3(name = "sum_a", signature = (p, k, n, m=0, prec=128))]
fn py_sum_a(py: Python<'_>, p: i64, k: i64, n: i64, m: i64, prec: u32) -> PyResult<Bound<'_, PyAny>> {
    complex_to_py(py, &kcrank::kloosterman::sum_a(p, k, n, m, prec).map_err(pyerr)?)
}

/// Exponential sum B_{a,c,p,k}(n, m) for c | p.
#[pyfunction]
#[pyo3(name = "sum_b", signature = (a, c, p, k, n, m=0, prec=128))]
fn py_sum_b<'py>(
    py: Python<'py>,
    a: i64,
    c: i64,
    p: i64,
    k: i64,
    n: i64,
    m: i64,
    prec: u32,
) -> PyResult<Bound<'py, PyAny>> {
    complex_to_py(py, &kcrank::kloosterman::sum_b(a, c, p, k, n, m, prec).map_err(pyerr)?)
}

/// Exponential sum D_{a,c,p,k}(n, m) for c not dividing p; m is a rational string.
#[pyfunction]
#[pyo3(name = "sum_d", signature = (a, c, p, k, n, m="0", prec=128))]
fn py_sum_d<'py>(
    py: Python<'py>,
    a: i64,
    c: i64,
    p: i64,
    k: i64,
    n: i64,
    m: &str,
    prec: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let mr = Rational::from_str(m)
        .map_err(|e| PyValueError::new_err(format!("bad rational {m:?}: {e}")))?;
    complex_to_py(py, &kcrank::kloosterman::sum_d(a, c, p, k, n, &mr, prec).map_err(pyerr)?)
}

/// Convergent-series evaluation of p_k(n); rounds to the exact integer.
#[pyfunction]
#[pyo3(name = "pk_exact_formula", signature = (k, n, pmax=None, prec=128))]
fn py_pk_exact_formula(k: i64, n: i64, pmax: Option<i64>, prec: u32) -> PyResult<String> {
    let pmax = pmax.unwrap_or_else(|| kcrank::asymptotics::default_pmax(n, 1));
    let v = kcrank::asymptotics::pk_exact_formula(k, n, pmax, prec).map_err(pyerr)?;
    Ok(kcrank::report::float_str(&v))
}

/// Leading-order p_k(n) growth term.
#[pyfunction]
#[pyo3(name = "pk_leading", signature = (k, n, prec=128))]
fn py_pk_leading(k: i64, n: i64, prec: u32) -> PyResult<String> {
    let v = kcrank::asymptotics::pk_leading(k, n, prec).map_err(pyerr)?;
    Ok(kcrank::report::float_str(&v))
}

/// Leading-order M_k(a,c;n) growth term (the p_k term split c ways).
#[pyfunction]
#[pyo3(name = "mk_leading", signature = (k, a, c, n, prec=128))]
fn py_mk_leading(k: i64, a: i64, c: i64, n: i64, prec: u32) -> PyResult<String> {
    let v = kcrank::asymptotics::mk_leading(k, a, c, n, prec).map_err(pyerr)?;
    Ok(kcrank::report::float_str(&v))
}

/// Asymptotic series for M_k(a,c;n) with a term-by-term breakdown dict.
#[pyfunction]
#[pyo3(name = "mk_asym", signature = (k, a, c, n, pmax=None, prec=128))]
fn py_mk_asym(
    py: Python<'_>,
    k: i64,
    a: i64,
    c: i64,
    n: i64,
    pmax: Option<i64>,
    prec: u32,
) -> PyResult<Bound<'_, PyAny>> {
    let b = kcrank::asymptotics::mk_asym(k, a, c, n, pmax, prec).map_err(pyerr)?;
    json_to_py(py, &kcrank::report::breakdown_value(&b))
}

/// Residual of a modular transformation identity; near zero when it holds.
#[pyfunction]
#[pyo3(name = "transform_residual", signature = (case, k, a, c, p, h, z_re, z_im="0", prec=256))]
fn py_transform_residual(
    case: &str,
    k: i64,
    a: i64,
    c: i64,
    p: i64,
    h: i64,
    z_re: &str,
    z_im: &str,
    prec: u32,
) -> PyResult<String> {
    use kcrank::special::TransformCase;
    let tc = match case {
        "eta" => TransformCase::Eta,
        "theta" => TransformCase::ThetaT2,
        "ck-divides" | "ck_divides" => TransformCase::CkDivides,
        "ck-not-divides" | "ck_not_divides" => TransformCase::CkNotDivides,
        _ => {
            return Err(PyValueError::new_err(format!(
                "case must be eta, theta, ck-divides or ck-not-divides, got {case:?}"
            )))
        }
    };
    let z = Complex::with_val(
        prec + 32,
        (parse_float(z_re, prec + 32)?, parse_float(z_im, prec + 32)?),
    );
    let params = kcrank::special::TransformParams { k, a, c, p, h, z, u: None };
    let r = kcrank::special::verify_transform(tc, &params, prec).map_err(pyerr)?;
    Ok(kcrank::report::float_str(&r))
}

/// Main term against the ten weighted error bounds at one n.
#[pyfunction]
#[pyo3(name = "bound_ledger", signature = (a, b, c, k, n, prec=128))]
fn py_bound_ledger(
    py: Python<'_>,
    a: i64,
    b: i64,
    c: i64,
    k: i64,
    n: i64,
    prec: u32,
) -> PyResult<Bound<'_, PyAny>> {
    let led = kcrank::inequalities::bound_ledger(a, b, c, k, n, prec).map_err(pyerr)?;
    json_to_py(py, &kcrank::report::ledger_value(&led))
}

/// Smallest n with a positive certified margin, or a cap-exceeded report.
#[pyfunction]
#[pyo3(name = "threshold_n", signature = (a, b, c, k, nmax=400, prec=128))]
fn py_threshold_n(
    py: Python<'_>,
    a: i64,
    b: i64,
    c: i64,
    k: i64,
    nmax: i64,
    prec: u32,
) -> PyResult<Bound<'_, PyAny>> {
    let t = kcrank::inequalities::threshold_n(a, b, c, k, nmax, prec).map_err(pyerr)?;
    json_to_py(py, &kcrank::report::threshold_value(&t))
}

/// The three series constants with certified tails.
#[pyfunction]
#[pyo3(name = "constants", signature = (k, prec=128))]
fn py_constants(py: Python<'_>, k: i64, prec: u32) -> PyResult<Bound<'_, PyAny>> {
    let cs = kcrank::inequalities::constants(k, prec).map_err(pyerr)?;
    json_to_py(py, &kcrank::report::constants_value(&cs))
}

/// Two-sided p_3 bounds and the k = 3 sandwich data at one n.
#[pyfunction]
#[pyo3(name = "k3_bounds", signature = (c, n, prec=128))]
fn py_k3_bounds(py: Python<'_>, c: i64, n: i64, prec: u32) -> PyResult<Bound<'_, PyAny>> {
    let kb = kcrank::inequalities::k3_bounds(c, n, prec).map_err(pyerr)?;
    json_to_py(py, &kcrank::report::k3_bounds_value(&kb))
}

/// Both variants of the large-n gate constant M_c plus the denominator identity.
#[pyfunction]
#[pyo3(name = "mc", signature = (c, prec=128))]
fn py_mc(py: Python<'_>, c: i64, prec: u32) -> PyResult<Bound<'_, PyAny>> {
    let pair = kcrank::inequalities::mc(c, prec).map_err(pyerr)?;
    json_to_py(py, &kcrank::report::mc_value(&pair))
}

fn verify_to_py<'py>(
    py: Python<'py>,
    rep: kcrank::inequalities::VerifyReport,
) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(&rep)
        .map_err(|e| PyValueError::new_err(format!("report serialization: {e}")))?;
    json_to_py(py, &v)
}

/// Exact-table check of M_k(a,c;n) > M_k(b,c;n) on 1..=nmax.
#[pyfunction]
#[pyo3(name = "verify_ordering", signature = (k, c, a, b, nmax=200))]
fn py_verify_ordering(
    py: Python<'_>,
    k: i64,
    c: i64,
    a: i64,
    b: i64,
    nmax: i64,
) -> PyResult<Bound<'_, PyAny>> {
    verify_to_py(py, kcrank::inequalities::verify_ordering(k, c, a, b, nmax).map_err(pyerr)?)
}

/// Exact-table check of M(n1) M(n2) > M(n1+n2) on a rectangle.
#[pyfunction]
#[pyo3(name = "verify_log_subadd", signature = (k, c, a, n_lo, n_hi))]
fn py_verify_log_subadd(
    py: Python<'_>,
    k: i64,
    c: i64,
    a: i64,
    n_lo: i64,
    n_hi: i64,
) -> PyResult<Bound<'_, PyAny>> {
    verify_to_py(py, kcrank::inequalities::verify_log_subadd(k, c, a, n_lo, n_hi).map_err(pyerr)?)
}

/// Exact-table check of M(n)^2 > M(n-1) M(n+1) on a window.
#[pyfunction]
#[pyo3(name = "verify_log_concave", signature = (k, c, a, n_lo, n_hi))]
fn py_verify_log_concave(
    py: Python<'_>,
    k: i64,
    c: i64,
    a: i64,
    n_lo: i64,
    n_hi: i64,
) -> PyResult<Bound<'_, PyAny>> {
    verify_to_py(py, kcrank::inequalities::verify_log_concave(k, c, a, n_lo, n_hi).map_err(pyerr)?)
}

/// The finite window of the c = 3 log-subadditivity theorem.
#[pyfunction]
#[pyo3(name = "verify_thm17_small", signature = (c=3))]
fn py_verify_thm17_small(py: Python<'_>, c: i64) -> PyResult<Bound<'_, PyAny>> {
    verify_to_py(py, kcrank::inequalities::verify_thm17_small(c).map_err(pyerr)?)
}

/// Exact sandwich 0.0172 p_3 < M_3 < 0.6495 p_3 on a window.
#[pyfunction]
#[pyo3(name = "verify_sandwich_k3", signature = (n_lo=58, n_hi=300))]
fn py_verify_sandwich_k3(py: Python<'_>, n_lo: i64, n_hi: i64) -> PyResult<Bound<'_, PyAny>> {
    verify_to_py(py, kcrank::inequalities::verify_sandwich_k3(n_lo, n_hi).map_err(pyerr)?)
}

/// The stated c1, c2, c3 bounds against certified evaluations; c2 and c3
/// are genuinely refuted, so this reports passed = False.
#[pyfunction]
#[pyo3(name = "verify_constants", signature = (k=3, prec=128))]
fn py_verify_constants(py: Python<'_>, k: i64, prec: u32) -> PyResult<Bound<'_, PyAny>> {
    verify_to_py(py, kcrank::inequalities::verify_constants(k, prec).map_err(pyerr)?)
}

/// Exact bivariate crank table M_k(m, n) for n up to n_max.
#[pyclass(name = "CrankTable")]
struct PyCrankTable {
    inner: kcrank::qseries::CrankTable,
}

#[pymethods]
impl PyCrankTable {
    #[new]
    fn new(k: i64, n_max: usize) -> PyResult<Self> {
        Ok(PyCrankTable {
            inner: kcrank::qseries::CrankTable::build(k, n_max).map_err(pyerr)?,
        })
    }

    /// M_k(m, n); zero outside |m| <= n.
    fn coeff<'py>(&self, py: Python<'py>, n: usize, m: i64) -> PyResult<Bound<'py, PyAny>> {
        big_to_py(py, &self.inner.coeff(n, m))
    }

    /// The full row (m = -n ..= n) as a list of ints.
    fn row<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        let list = PyList::empty(py);
        for v in self.inner.row(n) {
            list.append(big_to_py(py, v)?)?;
        }
        Ok(list.into_any())
    }

    /// Sum over m, equal to p_k(n).
    fn row_sum<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        big_to_py(py, &self.inner.row_sum(n))
    }
}

/// Exact residue-class counts M_k(a, c; n) for n up to n_max.
#[pyclass(name = "ResidueTable")]
struct PyResidueTable {
    inner: kcrank::qseries::ResidueTable,
}

#[pymethods]
impl PyResidueTable {
    #[new]
    fn new(k: i64, c: i64, n_max: usize) -> PyResult<Self> {
        Ok(PyResidueTable {
            inner: kcrank::qseries::ResidueTable::direct(k, c, n_max).map_err(pyerr)?,
        })
    }

    /// M_k(a, c; n).
    fn count<'py>(&self, py: Python<'py>, a: i64, n: usize) -> PyResult<Bound<'py, PyAny>> {
        big_to_py(py, &self.inner.count(a, n))
    }

    /// Sum over residues, equal to p_k(n).
    fn row_sum<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        big_to_py(py, &self.inner.row_sum(n))
    }
}

#[pymodule]
fn kcrank_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(py_pk_table, m)?)?;
    m.add_function(wrap_pyfunction!(py_dedekind_sum, m)?)?;
    m.add_function(wrap_pyfunction!(py_delta0, m)?)?;
    m.add_function(wrap_pyfunction!(py_m_shift, m)?)?;
    m.add_function(wrap_pyfunction!(py_bessel_i, m)?)?;
    m.add_function(wrap_pyfunction!(py_sum_a, m)?)?;
    m.add_function(wrap_pyfunction!(py_sum_b, m)?)?;
    m.add_function(wrap_pyfunction!(py_sum_d, m)?)?;
    m.add_function(wrap_pyfunction!(py_pk_exact_formula, m)?)?;
    m.add_function(wrap_pyfunction!(py_pk_leading, m)?)?;
    m.add_function(wrap_pyfunction!(py_mk_leading, m)?)?;
    m.add_function(wrap_pyfunction!(py_mk_asym, m)?)?;
    m.add_function(wrap_pyfunction!(py_transform_residual, m)?)?;
    m.add_function(wrap_pyfunction!(py_bound_ledger, m)?)?;
    m.add_function(wrap_pyfunction!(py_threshold_n, m)?)?;
    m.add_function(wrap_pyfunction!(py_constants, m)?)?;
    m.add_function(wrap_pyfunction!(py_k3_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(py_mc, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_log_subadd, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_log_concave, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_thm17_small, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_sandwich_k3, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_constants, m)?)?;
    m.add_class::<PyCrankTable>()?;
    m.add_class::<PyResidueTable>()?;
    Ok(())
}
