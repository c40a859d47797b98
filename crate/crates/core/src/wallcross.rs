//! Wall detection and infinitesimal wall-crossing on `F_a`.
//!
//! Three routes compute the jump `lim (F(λ₀+ε) − F(λ₀−ε'))` of the rank-2
//! generating function across `λ₀ = α₀/β₀`: numerically from [`fa_rank2`]
//! on both sides, from the eight-sum closed form on `P¹×P¹`, and from the
//! single-sum formula derived from Joyce's wall-crossing theorem. The
//! Göttsche series is a further independent evaluator of the generating
//! function itself for `c1 = εD₁ + D₂`.
//!
//! Eight-sum transcription (`P¹×P¹`, `lk = λ₀k`, exponent at scale 4
//! `2f₃f₄ + ij − lk·j + ik + lk·k` for the first four):
//!
//! | sum | coefficient | constraints |
//! |-----|-------------|-------------|
//! | 1 | +4 | `2∣f₃+i`, `2∣f₄+j`, `0 < lk < i`, `0 < k < j` |
//! | 2 | −4 | `2∣f₃+i`, `2∣f₄+j`, `−i < lk < 0`, `−j < k < 0` |
//! | 3 | −4 | `2∣f₃+lk`, `2∣f₄+j`, `−lk < i < lk`, `k < −j` |
//! | 4 | +4 | `2∣f₃+i`, `2∣f₄+k`, `−k < j < k`, `lk < i` |
//! | 5 | +2 | `β₀∣i`, `2∣f₃+λ₀i`, `2∣f₄+i`, `−i < j < i`; `q^{fp + λ₀i²/2}` |
//! | 6 | −4 | `β₀∣j`, `2∣f₃+λ₀j`, `2∣f₄+i`, `0 < j < i`; `q^{fp + λ₀ij/2}` |
//! | 7 | −2 | `α₀∣i`, `2∣f₄+i/λ₀`, `2∣f₃+i`, `−i < j < i`; `q^{fp + i²/(2λ₀)}` |
//! | 8 | +4 | `α₀∣j`, `2∣f₄+j/λ₀`, `2∣f₃+i`, `0 < j < i`; `q^{fp + ij/(2λ₀)}` |
//!
//! Sums 1 to 4 also require `β₀∣k`, `2∣j+k`, `2∣i+lk`; sums 5 to 8 require
//! `2∣i+j`. Here `fp = f₃f₄/2`.

use num_integer::Integer;
use num_rational::Rational64;

use crate::closedforms::{above, below, check_order, diamond, even, fa_rank2, stable};
use crate::enumerate::{assemble, merge_into, Shell, Terms};
use crate::error::{Error, Result};
use crate::qseries::LaurentSeries;

/// Largest `K` tried by [`numeric_wallcross`].
pub const DEFAULT_K_CAP: u64 = 1 << 16;

/// A candidate wall `λ₀ = α₀/β₀` on `F_a` for `c1 = f₃D₃ + f₄D₄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WallContext {
    pub a: i64,
    pub alpha0: i64,
    pub beta0: i64,
    pub f3: i64,
    pub f4: i64,
    pub order: i64,
}

impl WallContext {
    pub fn new(a: i64, alpha0: i64, beta0: i64, f3: i64, f4: i64, order: i64) -> Result<Self> {
        check_order(order)?;
        if a < 0 {
            return Err(Error::InvalidInput("Hirzebruch parameter must be nonnegative".into()));
        }
        if alpha0 <= 0 || beta0 <= 0 || alpha0.gcd(&beta0) != 1 {
            return Err(Error::InvalidInput(format!(
                "alpha0 = {alpha0}, beta0 = {beta0} must be positive and coprime"
            )));
        }
        if alpha0 <= a * beta0 {
            return Err(Error::NotAmple(format!("lambda0 = {alpha0}/{beta0} must exceed a = {a}")));
        }
        Ok(WallContext { a, alpha0, beta0, f3, f4, order })
    }

    /// Builds the context from `λ₀` given as an exact rational.
    pub fn from_lambda(a: i64, lambda0: Rational64, f3: i64, f4: i64, order: i64) -> Result<Self> {
        Self::new(a, *lambda0.numer(), *lambda0.denom(), f3, f4, order)
    }

    pub fn lambda0(&self) -> Rational64 {
        Rational64::new(self.alpha0, self.beta0)
    }
}

/// `true` iff `c1·H` is even, i.e. `2 ∣ α₀f₄ + β₀f₃`.
pub fn is_wall(ctx: &WallContext) -> bool {
    even(ctx.alpha0 * ctx.f4 + ctx.beta0 * ctx.f3)
}

/// `fa_rank2(λ₀ + ε) − fa_rank2(λ₀ − ε)` with `ε = 1/(Kβ₀)`, doubling `K`
/// until two successive differences agree.
pub fn numeric_wallcross(ctx: &WallContext) -> Result<LaurentSeries> {
    numeric_wallcross_with(ctx, DEFAULT_K_CAP)
}

pub fn numeric_wallcross_with(ctx: &WallContext, k_cap: u64) -> Result<LaurentSeries> {
    let WallContext { a, alpha0, beta0, f3, f4, order } = *ctx;
    let difference = |k: i64| -> Result<LaurentSeries> {
        let (up, down) = rayon::join(
            || fa_rank2(a, k * alpha0 + 1, k * beta0, f3, f4, order),
            || fa_rank2(a, k * alpha0 - 1, k * beta0, f3, f4, order),
        );
        Ok(&up? - &down?)
    };
    // λ₀ − ε must stay above a.
    let mut k: u64 = 1;
    while (k as i64) * (alpha0 - a * beta0) <= 1 {
        k *= 2;
    }
    let mut previous = difference(k as i64)?;
    while k < k_cap {
        k *= 2;
        let next = difference(k as i64)?;
        if next == previous {
            return Ok(next);
        }
        previous = next;
    }
    Err(Error::LimitDidNotStabilize(k))
}

/// One `|i| + |j| + |k| = s` (three-variable) and `|i| + |j| = s`
/// (two-variable) shell of the eight sums, at scale 4.
fn p1p1_wall_shell(ctx: &WallContext, depth: i64, s: i64) -> Shell {
    let WallContext { alpha0, beta0, f3, f4, .. } = *ctx;
    let cap = 4 * depth;
    let fp4 = 2 * f3 * f4;
    let mut terms = Vec::new();
    let mut admissible = false;
    let push = |c: i64, e: i64, terms: &mut Vec<(i64, i64)>| {
        if e <= cap {
            terms.push((e, c));
        }
    };

    for k in -s..=s {
        if k % beta0 != 0 {
            continue;
        }
        let lk = alpha0 * k / beta0;
        for (i, j) in diamond(s - k.abs()) {
            let shape = [
                0 < lk && lk < i && 0 < k && k < j,
                -i < lk && lk < 0 && -j < k && k < 0,
                -lk < i && i < lk && k < -j,
                -k < j && j < k && lk < i,
            ];
            if !shape.iter().any(|b| *b) {
                continue;
            }
            admissible = true;
            if !even(j + k) || !even(i + lk) {
                continue;
            }
            let e = fp4 + i * j - lk * j + i * k + lk * k;
            let (pi, pj) = (even(f3 + i), even(f4 + j));
            if pi && pj && shape[0] {
                push(4, e, &mut terms);
            }
            if pi && pj && shape[1] {
                push(-4, e, &mut terms);
            }
            if even(f3 + lk) && pj && shape[2] {
                push(-4, e, &mut terms);
            }
            if pi && even(f4 + k) && shape[3] {
                push(4, e, &mut terms);
            }
        }
    }

    for (i, j) in diamond(s) {
        let full = -i < j && j < i;
        let half = 0 < j && j < i;
        if !full && !half {
            continue;
        }
        if (full && (i % beta0 == 0 || i % alpha0 == 0)) || (half && (j % beta0 == 0 || j % alpha0 == 0)) {
            admissible = true;
        }
        if !even(i + j) {
            continue;
        }
        if full && i % beta0 == 0 {
            let li = alpha0 * i / beta0;
            if even(f3 + li) && even(f4 + i) {
                push(2, fp4 + 2 * li * i, &mut terms);
            }
        }
        if half && j % beta0 == 0 {
            let lj = alpha0 * j / beta0;
            if even(f3 + lj) && even(f4 + i) {
                push(-4, fp4 + 2 * lj * i, &mut terms);
            }
        }
        if full && i % alpha0 == 0 {
            let mi = beta0 * i / alpha0;
            if even(f4 + mi) && even(f3 + i) {
                push(-2, fp4 + 2 * mi * i, &mut terms);
            }
        }
        if half && j % alpha0 == 0 {
            let mj = beta0 * j / alpha0;
            if even(f4 + mj) && even(f3 + i) {
                push(4, fp4 + 2 * mj * i, &mut terms);
            }
        }
    }
    (terms, admissible)
}

/// Eight-sum closed form of the wall-crossing on `P¹×P¹`, times
/// `1/∏(1−q^k)^8`.
pub fn p1p1_wallcross_closed(ctx: &WallContext) -> Result<LaurentSeries> {
    if ctx.a != 0 {
        return Err(Error::InvalidInput("the eight-sum form needs a = 0".into()));
    }
    assemble(4, 8, ctx.order, |depth| {
        stable("P1xP1 wall-crossing", |s| p1p1_wall_shell(ctx, depth, s as i64))
    })
}

/// Göttsche's generating function on `F_a` for `c1 = εD₁ + D₂` and
/// `H = αD₁ + βD₂` with `λ = α/β`:
/// `Σ_{m≥0, a−λ > (2n+ε)/(2m+1)} [a + 2ma − 2(2m+2n+ε+1)] q^{(m+1)ma − (2m+1)n − mε}`
/// times `1/∏(1−q^k)^8`.
pub fn goettsche_series(a: i64, lambda: Rational64, epsilon: i64, order: i64) -> Result<LaurentSeries> {
    if epsilon != 0 && epsilon != 1 {
        return Err(Error::InvalidInput("epsilon must be 0 or 1".into()));
    }
    // c1 = εD₁ + D₂ = (ε − a)D₃ + D₄.
    let ctx = WallContext::from_lambda(a, lambda, epsilon - a, 1, order)?;
    if is_wall(&ctx) {
        return Err(Error::OnWall);
    }
    let (alpha, beta) = (ctx.alpha0, ctx.beta0);
    assemble(1, 8, order, |depth| {
        stable("Goettsche sum", |m| {
            let m = m as i64;
            // 2nβ < (aβ − α)(2m+1) − εβ.
            let mut n = below((a * beta - alpha) * (2 * m + 1) - epsilon * beta, 2 * beta);
            let mut terms = Vec::new();
            loop {
                let e = (m + 1) * m * a - (2 * m + 1) * n - m * epsilon;
                if e > depth {
                    break;
                }
                terms.push((e, a + 2 * m * a - 2 * (2 * m + 2 * n + epsilon + 1)));
                n -= 1;
            }
            (terms, true)
        })
    })
}

/// Joyce-route wall-crossing on `F_a` for `c1 = f₃D₃ + f₄D₄`:
/// `Σ 2(1 + a/2 − λ₀)(2m−f₄) q^{½(λ₀−a/2)(2m−f₄)² − ¼af₄² + ½(f₃+af₄)f₄}`
/// over `m > f₄/2` with `½(λ₀−a)(2m−f₄) − ½(f₃+af₄) ∈ Z`, times
/// `1/∏(1−q^k)^8`.
pub fn joyce_wallcross(a: i64, lambda0: Rational64, f3: i64, f4: i64, order: i64) -> Result<LaurentSeries> {
    let ctx = WallContext::from_lambda(a, lambda0, f3, f4, order)?;
    let (alpha0, beta0) = (ctx.alpha0, ctx.beta0);
    let scale = 4 * beta0;
    // Smallest m with 2m > f₄.
    let m0 = above(f4, 2);
    assemble(scale, 8, order, |depth| {
        let cap = scale * depth;
        // Coefficients are accumulated times β₀ and divided afterwards.
        let scaled = stable("Joyce sum", |t| {
            let u = 2 * (m0 + t as i64) - f4;
            let mut terms = Vec::new();
            let congruence = (alpha0 - a * beta0) * u - beta0 * (f3 + a * f4);
            if congruence.rem_euclid(2 * beta0) == 0 {
                let e = u * u * (2 * alpha0 - a * beta0) - a * beta0 * f4 * f4 + 2 * beta0 * (f3 + a * f4) * f4;
                if e <= cap {
                    terms.push((e, ((2 + a) * beta0 - 2 * alpha0) * u));
                }
            }
            (terms, true)
        })?;
        let mut inner = Terms::new();
        for (e, c) in scaled {
            if c % beta0 != 0 {
                return Err(Error::IntegralityViolated(format!(
                    "Joyce coefficient {c}/{beta0} at exponent {e}/{scale}"
                )));
            }
            merge_into(&mut inner, [(e, c / beta0)]);
        }
        Ok(inner)
    })
}
