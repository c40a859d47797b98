//! Shell-by-shell lattice enumeration with a bound-doubling guard, and the
//! shared assembly step that turns an inner sum into a generating function.
//!
//! Inner sums are accumulated as maps from exponent numerators at a fixed
//! scale `L` to machine-integer coefficients; the eta-product prefactor is
//! applied afterwards in arbitrary precision.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Rational64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qseries::{eta_inverse_power, LaurentSeries};

/// Exponent numerator to coefficient.
pub type Terms = BTreeMap<i64, i64>;

/// Stopping rule for shell enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShellPolicy {
    /// Consecutive shells without an in-range term before stopping.
    pub window: usize,
    /// Hard limit on the shell index.
    pub cap: usize,
}

impl Default for ShellPolicy {
    fn default() -> Self {
        ShellPolicy {
            window: 8,
            cap: 1 << 12,
        }
    }
}

/// Where the enumeration stopped and how far the result was rechecked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShellReport {
    pub stopped_at: usize,
    pub verified_through: usize,
}

pub fn merge_into(acc: &mut Terms, terms: impl IntoIterator<Item = (i64, i64)>) {
    for (e, c) in terms {
        let slot = acc.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            acc.remove(&e);
        }
    }
}

fn consolidate(terms: &[(i64, i64)]) -> Terms {
    let mut m = Terms::new();
    merge_into(&mut m, terms.iter().copied());
    m
}

/// Output of one shell: the in-range terms, and whether the shell held any
/// admissible lattice point at all (in range or not).
pub type Shell = (Vec<(i64, i64)>, bool);

/// Sums `shell(0), shell(1), …` until `policy.window` consecutive shells
/// report no in-range term, then evaluates shells up to twice the stopping
/// index and fails if any of them would change the result.
///
/// `shell(s)` must return only terms whose exponent is within the requested
/// order. The empty-shell count starts at the first shell holding an
/// admissible point, so leading shells that are empty for structural reasons
/// (stability, parity) cannot end the enumeration early. Shells are
/// evaluated in parallel batches.
pub fn stabilize<F>(name: &'static str, policy: ShellPolicy, shell: F) -> Result<(Terms, ShellReport)>
where
    F: Fn(usize) -> Shell + Sync,
{
    let batch = policy.window.max(1);
    let mut acc = Terms::new();
    let mut started = false;
    let mut empty_run = 0;
    let mut start = 0;
    let stop = 'outer: loop {
        if start > policy.cap {
            return Err(Error::ShellCapExceeded(name));
        }
        let results: Vec<Shell> = (start..start + batch).into_par_iter().map(&shell).collect();
        for (offset, (terms, admissible)) in results.into_iter().enumerate() {
            started |= admissible;
            if terms.is_empty() {
                if started {
                    empty_run += 1;
                }
            } else {
                empty_run = 0;
                merge_into(&mut acc, terms);
            }
            if empty_run >= policy.window {
                break 'outer start + offset;
            }
        }
        start += batch;
    };
    let verify_to = (2 * stop).max(stop + policy.window);
    let changed = (stop + 1..=verify_to)
        .into_par_iter()
        .any(|s| !consolidate(&shell(s).0).is_empty());
    if changed {
        return Err(Error::BoundDoublingMismatch(name));
    }
    Ok((
        acc,
        ShellReport {
            stopped_at: stop,
            verified_through: verify_to,
        },
    ))
}

/// Sums an explicitly bounded family, checking that doubling the bound adds
/// nothing in range.
pub fn bounded<F>(name: &'static str, bound: usize, term_shell: F) -> Result<Terms>
where
    F: Fn(usize) -> Vec<(i64, i64)> + Sync,
{
    let acc = (0..=bound)
        .into_par_iter()
        .map(|s| consolidate(&term_shell(s)))
        .reduce(Terms::new, |mut a, b| {
            merge_into(&mut a, b);
            a
        });
    let changed = (bound + 1..=2 * bound + 1)
        .into_par_iter()
        .any(|s| !consolidate(&term_shell(s)).is_empty());
    if changed {
        return Err(Error::BoundDoublingMismatch(name));
    }
    Ok(acc)
}

/// `(1/∏(1−q^k)^m) × inner` through `q^order`.
///
/// `inner(n)` returns the inner sum at exponent scale `scale` with every
/// exponent up to `n` present. If the inner sum starts below `q⁰`, it is
/// recomputed deeper so the product stays reliable through `order`.
pub fn assemble<F>(scale: i64, eta_power: u32, order: i64, inner: F) -> Result<LaurentSeries>
where
    F: Fn(i64) -> Result<Terms>,
{
    let mut depth = order;
    loop {
        let terms = inner(depth)?;
        let s = LaurentSeries::from_terms(
            scale,
            terms.into_iter().map(|(e, c)| (e, BigInt::from(c))),
            Some(Rational64::from_integer(depth)),
        )
        .assert_integer_exponents()?;
        let floor = s
            .min_exponent()
            .map(|e| e.floor().to_integer())
            .unwrap_or(0)
            .min(0);
        if depth < order - floor {
            depth = order - floor;
            continue;
        }
        let product = &s * &eta_inverse_power(eta_power, depth.max(0));
        return Ok(product.truncate_at(order));
    }
}
