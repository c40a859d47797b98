//! Independent number-theoretic cross-checks for rank 2 on `P²`: Klyachko's
//! Hurwitz class number series and Yoshioka's theta quotient.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::closedforms::check_order;
use crate::error::{Error, Result};
use crate::qseries::{eta_inverse_power, geometric, geometric_squared, LaurentSeries};

/// Hurwitz class number `H(D)` of discriminant `−D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HurwitzValue {
    pub d: i64,
    pub value: Rational64,
}

/// Weighted count of reduced positive-definite forms `ax² + bxy + cy²` with
/// `b² − 4ac = −D`: `|b| ≤ a ≤ c`, `b ≥ 0` when `|b| = a` or `a = c`.
/// Multiples of `x² + y²` weigh ½ and multiples of `x² + xy + y²` weigh ⅓.
pub fn hurwitz(d: i64) -> Result<HurwitzValue> {
    hurwitz_with_slack(d, 0)
}

/// [`hurwitz`] with the search over `a` extended `slack` past `√(D/3)`;
/// the result must not depend on it.
pub fn hurwitz_with_slack(d: i64, slack: i64) -> Result<HurwitzValue> {
    if d <= 0 || !matches!(d.rem_euclid(4), 0 | 3) {
        return Err(Error::NoFormsOfDiscriminant(d));
    }
    let mut bound = 0;
    while 3 * (bound + 1) * (bound + 1) <= d {
        bound += 1;
    }
    let mut value = Rational64::zero();
    for a in 1..=bound + slack {
        for b in (1 - a)..=a {
            let num = b * b + d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            value += if a == c && b == 0 {
                Rational64::new(1, 2)
            } else if a == c && b == a {
                Rational64::new(1, 3)
            } else {
                Rational64::one()
            };
        }
    }
    Ok(HurwitzValue { d, value })
}

/// `1/∏(1−q^k)^6 · Σ_{m≥1} 3H(4m−1) q^m`.
pub fn klyachko_series(order: i64) -> Result<LaurentSeries> {
    check_order(order)?;
    let mut inner = Vec::new();
    for m in 1..=order {
        let h = hurwitz(4 * m - 1)?.value * 3;
        if !h.is_integer() {
            return Err(Error::IntegralityViolated(format!("3H({}) = {h}", 4 * m - 1)));
        }
        inner.push((m, BigInt::from(h.to_integer())));
    }
    let inner = LaurentSeries::from_integer_terms(inner, Some(order));
    Ok(&inner * &eta_inverse_power(6, order))
}

/// `1/∏(1−q^k)^6 · (2Σ_{m∈Z} q^{m²})⁻¹ ·
/// Σ_{n≥0} [(2−4n)/(1−q^{2n+1}) + 8q^{2n+1}/(1−q^{2n+1})²] q^{(n+1)²}`.
pub fn yoshioka_series(order: i64) -> Result<LaurentSeries> {
    check_order(order)?;
    let ord = Some(Rational64::from_integer(order));
    let mut theta = Vec::new();
    let mut m = 0;
    while m * m <= order {
        theta.push((m * m, BigInt::from(if m == 0 { 2 } else { 4 })));
        m += 1;
    }
    let theta = LaurentSeries::from_integer_terms(theta, Some(order));

    let mut numerator = LaurentSeries::zero(ord);
    let mut n = 0;
    while (n + 1) * (n + 1) <= order {
        let step = 2 * n + 1;
        let lead = Rational64::from_integer((n + 1) * (n + 1));
        let simple = geometric(step, order).scalar_mul(&BigInt::from(2 - 4 * n));
        let double = geometric_squared(step, order)
            .scalar_mul(&BigInt::from(8))
            .shift(Rational64::from_integer(step));
        numerator = &numerator + &(&simple + &double).shift(lead);
        n += 1;
    }
    let numerator = numerator.truncate_at(order);

    let to_rational = |s: &LaurentSeries| s.map_coeffs(|c| BigRational::from_integer(c.clone()));
    let quotient = &to_rational(&numerator) * &theta.inverse(Rational64::from_integer(order))?;
    let full = (&quotient * &to_rational(&eta_inverse_power(6, order))).truncate_at(order);
    full.to_integer()
        .ok_or_else(|| Error::IntegralityViolated(format!("Yoshioka series through q^{order}")))
}
