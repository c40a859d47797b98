//! Truncated Laurent series in one variable `q` with exponents in `(1/L)·Z`.
//!
//! A series carries a single exponent scale `L`, a sparse map from exponent
//! numerators to nonzero coefficients, and a truncation order `N`: every
//! exponent strictly above `N` is unknown. `None` as the order marks an exact
//! (finite) series such as a polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Ring of coefficients a series can carry.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Send
        + Sync
{
}

#[derive(Clone, Debug)]
pub struct LaurentSeries<C = BigInt> {
    scale: i64,
    coeffs: BTreeMap<i64, C>,
    order: Option<Rational64>,
}

fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Largest numerator `e` with `e / scale <= order`.
fn max_numerator(order: Rational64, scale: i64) -> i64 {
    (order * Rational64::from_integer(scale)).floor().to_integer()
}

fn min_order(a: Option<Rational64>, b: Option<Rational64>) -> Option<Rational64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<C: Coefficient> LaurentSeries<C> {
    /// Builds a series from `(numerator, coefficient)` pairs at the given scale.
    ///
    /// Repeated numerators are summed, zero coefficients and terms above the
    /// order are dropped, and the scale is reduced to lowest terms.
    pub fn from_terms<I>(scale: i64, terms: I, order: Option<Rational64>) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
    {
        assert!(scale > 0, "exponent scale must be positive");
        let cap = order.map(|n| max_numerator(n, scale));
        let mut coeffs: BTreeMap<i64, C> = BTreeMap::new();
        for (e, c) in terms {
            if cap.is_some_and(|m| e > m) {
                continue;
            }
            let slot = coeffs.entry(e).or_insert_with(C::zero);
            *slot = slot.clone() + c;
        }
        let mut s = LaurentSeries {
            scale,
            coeffs,
            order,
        };
        s.normalize();
        s
    }

    /// Integer-exponent convenience constructor.
    pub fn from_integer_terms<I>(terms: I, order: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
    {
        Self::from_terms(1, terms, order.map(Rational64::from_integer))
    }

    pub fn zero(order: Option<Rational64>) -> Self {
        Self::from_terms(1, std::iter::empty(), order)
    }

    pub fn one(order: Option<Rational64>) -> Self {
        Self::monomial(C::one(), Rational64::zero(), order)
    }

    /// `coeff · q^exponent`.
    pub fn monomial(coeff: C, exponent: Rational64, order: Option<Rational64>) -> Self {
        let scale = *exponent.denom();
        Self::from_terms(scale, [(*exponent.numer(), coeff)], order)
    }

    /// Restores canonical form: no zero coefficients, nothing above the
    /// order, smallest possible scale.
    fn normalize(&mut self) {
        self.coeffs.retain(|_, c| !c.is_zero());
        if let Some(n) = self.order {
            let cap = max_numerator(n, self.scale);
            self.coeffs.retain(|e, _| *e <= cap);
        }
        let g = self
            .coeffs
            .keys()
            .fold(self.scale, |g, e| g.gcd(e));
        if g > 1 {
            self.scale /= g;
            self.coeffs = std::mem::take(&mut self.coeffs)
                .into_iter()
                .map(|(e, c)| (e / g, c))
                .collect();
        }
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn order(&self) -> Option<Rational64> {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, &C)> + '_ {
        self.coeffs
            .iter()
            .map(move |(e, c)| (Rational64::new(*e, self.scale), c))
    }

    /// Raw `(numerator, coefficient)` pairs at the current scale.
    pub fn numerators(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exponent: Rational64) -> C {
        let scaled = exponent * Rational64::from_integer(self.scale);
        if !scaled.is_integer() {
            return C::zero();
        }
        self.coeffs
            .get(&scaled.to_integer())
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn coeff_at(&self, exponent: i64) -> C {
        self.coeff(Rational64::from_integer(exponent))
    }

    pub fn min_exponent(&self) -> Option<Rational64> {
        self.coeffs
            .keys()
            .next()
            .map(|e| Rational64::new(*e, self.scale))
    }

    /// Lower bound on the exponent of any term, known or unknown.
    fn valuation_bound(&self) -> Option<Rational64> {
        self.min_exponent().or(self.order)
    }

    fn rescaled(&self, scale: i64) -> BTreeMap<i64, C> {
        debug_assert_eq!(scale % self.scale, 0);
        let k = scale / self.scale;
        self.coeffs.iter().map(|(e, c)| (e * k, c.clone())).collect()
    }

    /// Drops every term above `order` and lowers the order accordingly.
    pub fn truncate(&self, order: Rational64) -> Self {
        let order = min_order(self.order, Some(order));
        Self::from_terms(
            self.scale,
            self.coeffs.iter().map(|(e, c)| (*e, c.clone())),
            order,
        )
    }

    pub fn truncate_at(&self, order: i64) -> Self {
        self.truncate(Rational64::from_integer(order))
    }

    /// Multiplies by `q^exponent`, shifting the order along.
    pub fn shift(&self, exponent: Rational64) -> Self {
        let scale = lcm(self.scale, *exponent.denom());
        let by = (exponent * Rational64::from_integer(scale)).to_integer();
        Self::from_terms(
            scale,
            self.rescaled(scale).into_iter().map(|(e, c)| (e + by, c)),
            self.order.map(|n| n + exponent),
        )
    }

    pub fn scalar_mul(&self, k: &C) -> Self {
        Self::from_terms(
            self.scale,
            self.coeffs.iter().map(|(e, c)| (*e, c.clone() * k.clone())),
            self.order,
        )
    }

    /// Coefficientwise agreement up to the smaller of the two orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let order = min_order(self.order, other.order);
        let scale = lcm(self.scale, other.scale);
        let cap = order.map(|n| max_numerator(n, scale));
        let keep = |m: BTreeMap<i64, C>| -> BTreeMap<i64, C> {
            m.into_iter()
                .filter(|(e, _)| cap.map_or(true, |c| *e <= c))
                .collect()
        };
        keep(self.rescaled(scale)) == keep(other.rescaled(scale))
    }

    /// Series restricted to integer exponents at scale 1; fails if any
    /// nonzero coefficient sits at a fractional exponent.
    pub fn assert_integer_exponents(&self) -> Result<Self> {
        if self.scale == 1 {
            return Ok(self.clone());
        }
        if let Some((e, _)) = self.coeffs.iter().find(|(e, _)| *e % self.scale != 0) {
            return Err(Error::IntegralityViolated(
                Rational64::new(*e, self.scale).to_string(),
            ));
        }
        // A nonzero series with integral exponents is already at scale 1
        // after normalization, so only zero series reach this point.
        Ok(Self::from_terms(1, std::iter::empty(), self.order))
    }

    /// Integer exponent coefficients `c_0..=c_order` as a dense vector.
    pub fn dense(&self, from: i64, to: i64) -> Vec<C> {
        (from..=to).map(|e| self.coeff_at(e)).collect()
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentSeries<D> {
        LaurentSeries::from_terms(
            self.scale,
            self.coeffs.iter().map(|(e, c)| (*e, f(c))),
            self.order,
        )
    }
}

impl LaurentSeries<BigInt> {
    /// Inverse up to `order` over exact rationals.
    pub fn inverse(&self, order: Rational64) -> Result<LaurentSeries<BigRational>> {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
            .inverse(order)
    }

    /// Inverse of a series whose constant term is `±1`; stays integral.
    pub fn inverse_unit(&self, order: Rational64) -> Result<LaurentSeries<BigInt>> {
        let c0 = self.coeff(Rational64::zero());
        if !(c0.is_one() || (-c0.clone()).is_one()) {
            return Err(Error::NonUnitSeries);
        }
        series_inverse_with(self, order, |x| x.clone() * c0.clone())
    }
}

impl LaurentSeries<BigRational> {
    pub fn inverse(&self, order: Rational64) -> Result<LaurentSeries<BigRational>> {
        let c0 = self.coeff(Rational64::zero());
        if c0.is_zero() {
            return Err(Error::NonUnitSeries);
        }
        let inv0 = c0.recip();
        series_inverse_with(self, order, move |x| x.clone() * inv0.clone())
    }

    /// Converts to integer coefficients if every coefficient is integral.
    pub fn to_integer(&self) -> Option<LaurentSeries<BigInt>> {
        if self.coeffs.values().any(|c| !c.is_integer()) {
            return None;
        }
        Some(self.map_coeffs(|c| c.to_integer()))
    }
}

/// Recursive convolution `b_n = -(1/a_0) Σ_{k≥1} a_k b_{n-k}`; `div0` divides
/// by the constant term.
fn series_inverse_with<C: Coefficient>(
    a: &LaurentSeries<C>,
    order: Rational64,
    div0: impl Fn(&C) -> C,
) -> Result<LaurentSeries<C>> {
    if a.min_exponent().is_some_and(|e| e < Rational64::zero()) || a.is_zero() {
        return Err(Error::NonUnitSeries);
    }
    let c0 = a.coeff(Rational64::zero());
    if c0.is_zero() {
        return Err(Error::NonUnitSeries);
    }
    // The inverse is reliable only as far as the input is.
    let order = min_order(a.order, Some(order)).expect("finite order");
    let scale = a.scale;
    let top = max_numerator(order, scale);
    if top < 0 {
        return Ok(LaurentSeries::zero(Some(order)));
    }
    let top = top as usize;
    let mut dense_a = vec![C::zero(); top + 1];
    for (e, c) in &a.coeffs {
        if (*e as usize) <= top {
            dense_a[*e as usize] = c.clone();
        }
    }
    let mut b: Vec<C> = Vec::with_capacity(top + 1);
    b.push(div0(&C::one()));
    for n in 1..=top {
        let mut acc = C::zero();
        for k in 1..=n {
            if !dense_a[k].is_zero() {
                acc = acc + dense_a[k].clone() * b[n - k].clone();
            }
        }
        b.push(-div0(&acc));
    }
    Ok(LaurentSeries::from_terms(
        scale,
        b.into_iter().enumerate().map(|(e, c)| (e as i64, c)),
        Some(order),
    ))
}

impl<C: Coefficient> Add for &LaurentSeries<C> {
    type Output = LaurentSeries<C>;

    fn add(self, rhs: Self) -> LaurentSeries<C> {
        let scale = lcm(self.scale, rhs.scale);
        let terms = self
            .rescaled(scale)
            .into_iter()
            .chain(rhs.rescaled(scale));
        LaurentSeries::from_terms(scale, terms, min_order(self.order, rhs.order))
    }
}

impl<C: Coefficient> Sub for &LaurentSeries<C> {
    type Output = LaurentSeries<C>;

    fn sub(self, rhs: Self) -> LaurentSeries<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Neg for &LaurentSeries<C> {
    type Output = LaurentSeries<C>;

    fn neg(self) -> LaurentSeries<C> {
        LaurentSeries {
            scale: self.scale,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
            order: self.order,
        }
    }
}

impl<C: Coefficient> Mul for &LaurentSeries<C> {
    type Output = LaurentSeries<C>;

    /// Cauchy product truncated at
    /// `min(a.order + minexp(b), b.order + minexp(a))`.
    fn mul(self, rhs: Self) -> LaurentSeries<C> {
        let bound = |x: &LaurentSeries<C>, y: &LaurentSeries<C>| -> Option<Rational64> {
            match (x.order, y.valuation_bound()) {
                (Some(n), Some(v)) => Some(n + v),
                _ => None,
            }
        };
        let exact_zero = (self.is_zero() && self.order.is_none())
            || (rhs.is_zero() && rhs.order.is_none());
        let order = if exact_zero {
            None
        } else {
            min_order(bound(self, rhs), bound(rhs, self))
        };
        let scale = lcm(self.scale, rhs.scale);
        let cap = order.map(|n| max_numerator(n, scale));
        let a = self.rescaled(scale);
        let b = rhs.rescaled(scale);
        let mut out: BTreeMap<i64, C> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e = ea + eb;
                if cap.is_some_and(|m| e > m) {
                    break;
                }
                let slot = out.entry(e).or_insert_with(C::zero);
                *slot = slot.clone() + ca.clone() * cb.clone();
            }
        }
        LaurentSeries::from_terms(scale, out, order)
    }
}

impl<C: Coefficient> PartialEq for LaurentSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

impl<C: Coefficient> fmt::Display for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag == "1";
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                write!(f, "{mag}*")?;
            }
            if e.is_one() {
                write!(f, "q")?;
            } else if e.is_integer() {
                write!(f, "q^{e}")?;
            } else {
                write!(f, "q^({e})")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(n) = self.order {
            write!(f, " + O(q^{})", if n.is_integer() { n.to_string() } else { format!("({})", n) })?;
        }
        Ok(())
    }
}

/// Divisor sums `σ(1..=n)`, index 0 unused.
fn sigma_table(n: usize) -> Vec<i64> {
    let mut sigma = vec![0i64; n + 1];
    for d in 1..=n {
        let mut k = d;
        while k <= n {
            sigma[k] += d as i64;
            k += d;
        }
    }
    sigma
}

/// Expansion of `1 / ∏_{k≥1} (1 − q^k)^m` through `q^order`.
///
/// Uses the logarithmic-derivative recurrence `n·a_n = m Σ_{k=1}^n σ(k) a_{n−k}`.
pub fn eta_inverse_power(m: u32, order: i64) -> LaurentSeries<BigInt> {
    assert!(order >= 0, "order must be nonnegative");
    let n_max = order as usize;
    let sigma = sigma_table(n_max);
    let m = BigInt::from(m);
    let mut a: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    a.push(BigInt::one());
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for k in 1..=n {
            acc += &a[n - k] * sigma[k];
        }
        acc *= &m;
        let (q, r) = acc.div_rem(&BigInt::from(n));
        debug_assert!(r.is_zero());
        a.push(q);
    }
    LaurentSeries::from_integer_terms(
        a.into_iter().enumerate().map(|(e, c)| (e as i64, c)),
        Some(order),
    )
}

/// `Σ_{m≥0} q^{step·m}` through `q^order`, i.e. `1/(1 − q^step)`.
pub fn geometric(step: i64, order: i64) -> LaurentSeries<BigInt> {
    assert!(step > 0);
    LaurentSeries::from_integer_terms(
        (0..=order.max(-1) / step).map(|m| (m * step, BigInt::one())),
        Some(order),
    )
}

/// `Σ_{m≥0} (m+1) q^{step·m}` through `q^order`, i.e. `1/(1 − q^step)²`.
pub fn geometric_squared(step: i64, order: i64) -> LaurentSeries<BigInt> {
    assert!(step > 0);
    LaurentSeries::from_integer_terms(
        (0..=order.max(-1) / step).map(|m| (m * step, BigInt::from(m + 1))),
        Some(order),
    )
}

/// `(exponent, coefficient)` rows of an integer series, for reporting.
pub fn integer_rows(s: &LaurentSeries<BigInt>) -> Vec<(Rational64, BigInt)> {
    s.terms().map(|(e, c)| (e, c.clone())).collect()
}

/// True when every coefficient is nonnegative.
pub fn is_nonnegative(s: &LaurentSeries<BigInt>) -> bool {
    s.terms().all(|(_, c)| !c.is_negative())
}
