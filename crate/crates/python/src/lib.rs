//! Python bindings: fans, truncated series and the series engines.
//!
//! Exponents come back as `fractions.Fraction` and coefficients as `int`.
//! Divisor classes are passed as raw per-ray coefficient lists.

use num_bigint::BigInt;
use num_rational::Rational64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use torsheaf::closedforms;
use torsheaf::{DivisorClass, Error, LaurentSeries, WallContext};

create_exception!(pytorsheaf, TorsheafError, PyValueError);
create_exception!(pytorsheaf, IntegralityError, TorsheafError);
create_exception!(pytorsheaf, NonStabilizationError, TorsheafError);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::IntegralityViolated(_) => IntegralityError::new_err(msg),
        Error::LimitDidNotStabilize(_) | Error::BoundDoublingMismatch(_) | Error::ShellCapExceeded(_) => {
            NonStabilizationError::new_err(msg)
        }
        _ => TorsheafError::new_err(msg),
    }
}

fn series(r: torsheaf::Result<LaurentSeries>) -> PyResult<Series> {
    r.map(|inner| Series { inner }).map_err(py_err)
}

/// A smooth complete toric surface given by its rays in cyclic order.
#[pyclass(frozen, skip_from_py_object, module = "pytorsheaf")]
#[derive(Clone)]
struct Fan {
    inner: torsheaf::Fan,
}

impl Fan {
    fn class(&self, raw: Vec<i64>) -> PyResult<DivisorClass> {
        if raw.len() != self.inner.len() {
            return Err(TorsheafError::new_err(format!(
                "class needs {} ray coefficients, got {}",
                self.inner.len(),
                raw.len()
            )));
        }
        Ok(self.inner.class(raw))
    }
}

#[pymethods]
impl Fan {
    #[new]
    fn new(rays: Vec<[i64; 2]>) -> PyResult<Self> {
        torsheaf::Fan::new(rays).map(|inner| Fan { inner }).map_err(py_err)
    }

    /// `"P2"` or `"Fa:<a>"`.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        torsheaf::Fan::from_preset(name).map(|inner| Fan { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        torsheaf::Fan::from_json(text).map(|inner| Fan { inner }).map_err(py_err)
    }

    #[getter]
    fn rays(&self) -> Vec<[i64; 2]> {
        self.inner.rays().to_vec()
    }

    /// `D_i²` for every ray.
    #[getter]
    fn self_intersections(&self) -> Vec<i64> {
        self.inner.a().iter().map(|a| -a).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn intersection(&self, c: Vec<i64>, d: Vec<i64>) -> PyResult<i64> {
        Ok(self.inner.intersection(&self.class(c)?, &self.class(d)?))
    }

    fn is_ample(&self, h: Vec<i64>) -> PyResult<bool> {
        Ok(self.inner.is_ample(&self.class(h)?))
    }

    /// Blow up the torus-fixed point between rays `i` and `i + 1`.
    fn stellar_subdivide(&self, i: usize) -> PyResult<Self> {
        if i >= self.inner.len() {
            return Err(TorsheafError::new_err("ray index out of range"));
        }
        Ok(Fan { inner: self.inner.stellar_subdivide(i) })
    }

    /// Raw class of `α D₁ + β D₂` on a Hirzebruch fan.
    fn alpha_beta(&self, alpha: i64, beta: i64) -> Vec<i64> {
        self.inner.alpha_beta(alpha, beta).raw().to_vec()
    }

    fn __eq__(&self, other: &Fan) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Fan({:?})", self.inner.rays())
    }
}

/// A truncated Laurent series in fractional powers of `q`.
#[pyclass(frozen, skip_from_py_object, module = "pytorsheaf")]
#[derive(Clone)]
struct Series {
    inner: LaurentSeries,
}

#[pymethods]
impl Series {
    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent.
    fn terms(&self) -> Vec<(Rational64, BigInt)> {
        self.inner.terms().map(|(e, c)| (e, c.clone())).collect()
    }

    fn coeff(&self, exponent: Rational64) -> BigInt {
        self.inner.coeff(exponent)
    }

    /// Exponents are correct strictly below this bound; `None` if exact.
    #[getter]
    fn order(&self) -> Option<Rational64> {
        self.inner.order()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __add__(&self, other: &Series) -> Series {
        Series { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &Series) -> Series {
        Series { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: &Series) -> Series {
        Series { inner: &self.inner * &other.inner }
    }

    fn __neg__(&self) -> Series {
        Series { inner: -&self.inner }
    }

    /// Agreement up to the smaller truncation order.
    fn __eq__(&self, other: &Series) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Series({})", self.inner)
    }
}

/// Chern data of an equivariant sheaf.
#[pyclass(frozen, get_all, module = "pytorsheaf")]
struct ChernCharacter {
    rank: usize,
    c1: Vec<i64>,
    ch2: Rational64,
    c2: Rational64,
}

#[pyfunction]
fn chern_character(
    fan: &Fan,
    locations: Vec<i64>,
    widths: Vec<Vec<i64>>,
    partitions: Vec<Vec<i64>>,
) -> PyResult<ChernCharacter> {
    let rank = partitions.first().map_or(0, Vec::len);
    let data = torsheaf::EquivariantData::new(rank, locations, widths, partitions).map_err(py_err)?;
    let ch = torsheaf::chern_character(&fan.inner, &data).map_err(py_err)?;
    Ok(ChernCharacter {
        rank: ch.rank,
        c1: ch.c1.raw().to_vec(),
        ch2: ch.ch2,
        c2: ch.c2,
    })
}

/// Generic rank-2 engine for an ample `h` and first Chern class `c1`.
#[pyfunction]
fn generating_function_rank2(fan: &Fan, h: Vec<i64>, c1: Vec<i64>, order: i64) -> PyResult<Series> {
    let (h, c1) = (fan.class(h)?, fan.class(c1)?);
    series(torsheaf::generating_function_rank2(&fan.inner, &h, &c1, order))
}

#[pyfunction]
fn rank1_series(fan: &Fan, order: i64) -> PyResult<Series> {
    series(closedforms::rank1_series(&fan.inner, order))
}

#[pyfunction]
fn p2_rank2(f: i64, order: i64) -> PyResult<Series> {
    series(closedforms::p2_rank2(f, order))
}

#[pyfunction]
fn p2_rank3(f: i64, order: i64) -> PyResult<Series> {
    series(closedforms::p2_rank3(f, order))
}

#[pyfunction]
fn fa_rank2(a: i64, alpha: i64, beta: i64, f3: i64, f4: i64, order: i64) -> PyResult<Series> {
    series(closedforms::fa_rank2(a, alpha, beta, f3, f4, order))
}

#[pyfunction]
fn p1p1_rank2(alpha: i64, beta: i64, f3: i64, f4: i64, order: i64) -> PyResult<Series> {
    series(closedforms::p1p1_rank2(alpha, beta, f3, f4, order))
}

fn wall(a: i64, alpha0: i64, beta0: i64, f3: i64, f4: i64, order: i64) -> PyResult<WallContext> {
    WallContext::new(a, alpha0, beta0, f3, f4, order).map_err(py_err)
}

#[pyfunction]
fn is_wall(a: i64, alpha0: i64, beta0: i64, f3: i64, f4: i64) -> PyResult<bool> {
    Ok(torsheaf::is_wall(&wall(a, alpha0, beta0, f3, f4, 0)?))
}

/// Jump across the wall `λ₀ = α₀/β₀` as a limit of chamber differences.
#[pyfunction]
fn numeric_wallcross(a: i64, alpha0: i64, beta0: i64, f3: i64, f4: i64, order: i64) -> PyResult<Series> {
    series(torsheaf::numeric_wallcross(&wall(a, alpha0, beta0, f3, f4, order)?))
}

#[pyfunction]
fn p1p1_wallcross_closed(alpha0: i64, beta0: i64, f3: i64, f4: i64, order: i64) -> PyResult<Series> {
    series(torsheaf::p1p1_wallcross_closed(&wall(0, alpha0, beta0, f3, f4, order)?))
}

#[pyfunction]
fn joyce_wallcross(a: i64, lambda0: Rational64, f3: i64, f4: i64, order: i64) -> PyResult<Series> {
    series(torsheaf::joyce_wallcross(a, lambda0, f3, f4, order))
}

#[pyfunction]
fn goettsche_series(a: i64, lam: Rational64, eps: i64, order: i64) -> PyResult<Series> {
    series(torsheaf::goettsche_series(a, lam, eps, order))
}

/// Hurwitz class number `H(d)`.
#[pyfunction]
fn hurwitz(d: i64) -> PyResult<Rational64> {
    torsheaf::hurwitz(d).map(|h| h.value).map_err(py_err)
}

#[pyfunction]
fn klyachko_series(order: i64) -> PyResult<Series> {
    series(torsheaf::klyachko_series(order))
}

#[pyfunction]
fn yoshioka_series(order: i64) -> PyResult<Series> {
    series(torsheaf::yoshioka_series(order))
}

#[pyfunction]
fn eta_inverse_power(m: u32, order: i64) -> PyResult<Series> {
    if order < 0 {
        return Err(TorsheafError::new_err("order must be nonnegative"));
    }
    Ok(Series { inner: torsheaf::eta_inverse_power(m, order) })
}

#[pymodule]
fn pytorsheaf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("TorsheafError", py.get_type::<TorsheafError>())?;
    m.add("IntegralityError", py.get_type::<IntegralityError>())?;
    m.add("NonStabilizationError", py.get_type::<NonStabilizationError>())?;
    m.add_class::<Fan>()?;
    m.add_class::<Series>()?;
    m.add_class::<ChernCharacter>()?;
    m.add_function(wrap_pyfunction!(chern_character, m)?)?;
    m.add_function(wrap_pyfunction!(generating_function_rank2, m)?)?;
    m.add_function(wrap_pyfunction!(rank1_series, m)?)?;
    m.add_function(wrap_pyfunction!(p2_rank2, m)?)?;
    m.add_function(wrap_pyfunction!(p2_rank3, m)?)?;
    m.add_function(wrap_pyfunction!(fa_rank2, m)?)?;
    m.add_function(wrap_pyfunction!(p1p1_rank2, m)?)?;
    m.add_function(wrap_pyfunction!(is_wall, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_wallcross, m)?)?;
    m.add_function(wrap_pyfunction!(p1p1_wallcross_closed, m)?)?;
    m.add_function(wrap_pyfunction!(joyce_wallcross, m)?)?;
    m.add_function(wrap_pyfunction!(goettsche_series, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz, m)?)?;
    m.add_function(wrap_pyfunction!(klyachko_series, m)?)?;
    m.add_function(wrap_pyfunction!(yoshioka_series, m)?)?;
    m.add_function(wrap_pyfunction!(eta_inverse_power, m)?)?;
    Ok(())
}
