//! Direct evaluators for the specialized generating functions on `P²`,
//! `F_a` and `P¹×P¹`, together with the raw sums they were simplified from.
//!
//! Every evaluator multiplies an inner lattice sum by the eta-product
//! prefactor `1/∏(1−q^k)^{r·e(X)}`. Inner exponents are handled as integer
//! numerators at a fixed scale (4 for rank 2, 18 for rank 3) and all
//! inequalities are cross-multiplied so that `λ = α/β` is never rounded.
//!
//! Constraint transcription, with `λ = α/β`, `α' = α − aβ` and
//! `fp = f₃f₄/2 + a f₄²/4`:
//!
//! | sum | coefficient | constraints | exponent |
//! |-----|-------------|-------------|----------|
//! | `F_a` 1 | −1 | `λj = i`, `−j < l < j`, `−λj + a(j+l) < k < λj` | `fp + j(2i − aj)/4` |
//! | `F_a` 2 | +2 | `k < λl < i`, `l < j`, `−i − a(j−l) < k`, `−λj < k` | `fp + (ij − jk + il + kl − al²)/4` |
//! | `F_a` 3 | +2 | `k < λl < i`, `l < j`, `−i + a(j+l) < k`, `−λj + a(j+l) < k` | as above |
//! | `F_a` 4 | +2 | `2∣j+k`, `i < λj`, `a(j+k)/2 < i`, `(aj − i)/(λ−a) < k < i/λ` | `fp + j(2i − aj)/4` |
//! | `F_a` 5 | +1 | `2∣i+k`, `λj < i`, `−λj < k < λj` | as above |
//! | `F_a` 6 | +1 | `2∣i+k`, `λj < i`, `j > 0`, `−λj + 2aj < k < λj` | as above |
//!
//! The four-variable sums also require `2∣i+k`, `2∣j+l`; all sums require
//! `2∣f₃+i`, `2∣f₄+j`.

use num_bigint::BigInt;
use num_rational::Rational64;

use crate::enumerate::{assemble, stabilize, Shell, ShellPolicy, Terms};
use crate::error::{Error, Result};
use crate::qseries::{eta_inverse_power, LaurentSeries};
use crate::rank2::compositions;
use crate::toric::Fan;

pub(crate) fn even(x: i64) -> bool {
    x.rem_euclid(2) == 0
}

/// Smallest integer `k` with `k·den > num`, for `den > 0`.
pub(crate) fn above(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0);
    num.div_euclid(den) + 1
}

/// Largest integer `k` with `k·den < num`, for `den > 0`.
pub(crate) fn below(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0);
    -(-num).div_euclid(den) - 1
}

/// `(i, j)` pairs with `|i| + |j| = s`.
pub(crate) fn diamond(s: i64) -> Vec<(i64, i64)> {
    if s == 0 {
        return vec![(0, 0)];
    }
    let mut out = Vec::with_capacity(4 * s as usize);
    for i in -s..=s {
        let r = s - i.abs();
        out.push((i, r));
        if r != 0 {
            out.push((i, -r));
        }
    }
    out
}

pub(crate) fn stable(name: &'static str, shell: impl Fn(usize) -> Shell + Sync) -> Result<Terms> {
    stabilize(name, ShellPolicy::default(), shell).map(|(t, _)| t)
}

pub(crate) fn check_order(order: i64) -> Result<()> {
    if order < 0 {
        return Err(Error::InvalidInput("order must be nonnegative".into()));
    }
    Ok(())
}

/// Rank one: `1/∏(1−q^k)^{e(X)}` with `e(X)` the number of rays.
pub fn rank1_series(fan: &Fan, order: i64) -> Result<LaurentSeries> {
    check_order(order)?;
    Ok(eta_inverse_power(fan.len() as u32, order))
}

/// Multiplies `s` by `q^shift` and keeps the result reliable through `order`.
fn shifted(order: i64, shift: i64, s: impl FnOnce(i64) -> Result<LaurentSeries>) -> Result<LaurentSeries> {
    if order - shift < 0 {
        return Ok(LaurentSeries::zero(Some(Rational64::from_integer(order))));
    }
    Ok(s(order - shift)?.shift(Rational64::from_integer(shift)))
}

/// Rank 2 on `P²` with `H` a line and `c1 = fD`.
///
/// `f = 0`: `Σ_{m,n≥1} q^{mn+m+n}/(1−q^{m+n})`; `f = 1`:
/// `Σ_{m,n≥1} q^{mn}/(1−q^{m+n−1})`, both times `1/∏(1−q^k)^6`. Other `f`
/// reduce to these by twisting with `O(t)`, which shifts `c₂` by `t(t + f₀)`.
pub fn p2_rank2(f: i64, order: i64) -> Result<LaurentSeries> {
    check_order(order)?;
    let f0 = f.rem_euclid(2);
    let t = (f - f0) / 2;
    shifted(order, t * (t + f0), |order| {
        assemble(1, 6, order, |depth| {
            stable("P2 rank-2 double sum", |s| {
                let s = s as i64;
                let mut terms = Vec::new();
                for m in 1..s {
                    let n = s - m;
                    let (base, step) = if f0 == 0 { (m * n + m + n, m + n) } else { (m * n, m + n - 1) };
                    let mut e = base;
                    while e <= depth {
                        terms.push((e, 1));
                        e += step;
                    }
                }
                (terms, s >= 2)
            })
        })
    })
}

/// The triple sums the `P²` double sums were resummed from:
/// `Σ_{k≥1} Σ_{m,n≥k+1} q^{mn−k²}` for `f = 0` and
/// `Σ_{k≥1} Σ_{m,n≥k} q^{mn−k(k−1)}` for `f = 1`.
pub fn p2_rank2_triple(f: i64, order: i64) -> Result<LaurentSeries> {
    check_order(order)?;
    let f0 = f.rem_euclid(2);
    let t = (f - f0) / 2;
    shifted(order, t * (t + f0), |order| {
        assemble(1, 6, order, |depth| {
            stable("P2 rank-2 triple sum", |k| {
                let k = k as i64;
                if k == 0 {
                    return (Vec::new(), false);
                }
                let (lo, sub) = if f0 == 0 { (k + 1, k * k) } else { (k, k * (k - 1)) };
                let mut terms = Vec::new();
                let mut m = lo;
                while m * lo - sub <= depth {
                    let mut n = lo;
                    while m * n - sub <= depth {
                        terms.push((m * n - sub, 1));
                        n += 1;
                    }
                    m += 1;
                }
                (terms, true)
            })
        })
    })
}

/// Parameters shared by the `F_a` evaluators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaParams {
    pub a: i64,
    pub alpha: i64,
    pub beta: i64,
    pub f3: i64,
    pub f4: i64,
}

impl FaParams {
    pub fn new(a: i64, alpha: i64, beta: i64, f3: i64, f4: i64) -> Result<Self> {
        if a < 0 {
            return Err(Error::InvalidInput("Hirzebruch parameter must be nonnegative".into()));
        }
        if beta <= 0 || alpha - a * beta <= 0 {
            return Err(Error::NotAmple(format!(
                "H = {alpha}D1 + {beta}D2 on F_{a} needs beta > 0 and alpha - a*beta > 0"
            )));
        }
        Ok(FaParams { a, alpha, beta, f3, f4 })
    }

    /// `4·(f₃f₄/2 + a f₄²/4)`.
    fn fp4(&self) -> i64 {
        2 * self.f3 * self.f4 + self.a * self.f4 * self.f4
    }
}

/// One `|i| + |j| = s` shell of the six sums, at exponent scale 4.
fn fa_six_sum_shell(p: &FaParams, depth: i64, s: i64) -> Shell {
    let FaParams { a, alpha, beta, f3, f4 } = *p;
    let alpha_p = alpha - a * beta;
    let cap = 4 * depth;
    let fp4 = p.fp4();
    let mut terms = Vec::new();
    let mut admissible = false;
    for (i, j) in diamond(s) {
        if !even(f3 + i) || !even(f4 + j) {
            continue;
        }
        let e1 = fp4 + j * (2 * i - a * j);
        let mut n1 = 0i64;

        if alpha * j == beta * i {
            for l in (-j + 1)..j {
                if !even(j + l) {
                    continue;
                }
                let lo = above(-alpha * j + a * beta * (j + l), beta);
                let hi = below(alpha * j, beta);
                n1 -= (lo..=hi).filter(|k| even(i + k)).count() as i64;
            }
        }

        // Four-variable sums: −j < l < j, αl < βi, −αj < βk < αl.
        for l in (-j + 1)..j {
            if !even(j + l) || alpha * l >= beta * i {
                continue;
            }
            let k_hi = below(alpha * l, beta);
            let k_base = above(-alpha * j, beta);
            let lo_a = k_base.max(above(-i - a * (j - l), 1));
            let lo_b = k_base
                .max(above(-i + a * (j + l), 1))
                .max(above(-alpha * j + a * beta * (j + l), beta));
            for lo in [lo_a, lo_b] {
                for k in lo..=k_hi {
                    if !even(i + k) {
                        continue;
                    }
                    admissible = true;
                    let e2 = fp4 + i * j - j * k + i * l + k * l - a * l * l;
                    if e2 <= cap {
                        terms.push((e2, 2));
                    }
                }
            }
        }

        // Three-variable sum with (aj − i)/(λ−a) < k < i/λ.
        if beta * i < alpha * j {
            let lo = above((a * j - i) * beta, alpha_p);
            let mut hi = below(i * beta, alpha);
            if a > 0 {
                hi = hi.min(below(2 * i - a * j, a));
            } else if i <= 0 {
                hi = lo - 1;
            }
            n1 += 2 * (lo..=hi).filter(|k| even(j + k)).count() as i64;
        }
        if alpha * j < beta * i {
            let hi = below(alpha * j, beta);
            let lo = above(-alpha * j, beta);
            n1 += (lo..=hi).filter(|k| even(i + k)).count() as i64;
            if j > 0 {
                let lo = above(-alpha * j + 2 * a * beta * j, beta);
                n1 += (lo..=hi).filter(|k| even(i + k)).count() as i64;
            }
        }
        if n1 != 0 {
            admissible = true;
            if e1 <= cap {
                terms.push((e1, n1));
            }
        }
    }
    (terms, admissible)
}

/// Rank 2 on `F_a` with `H = αD₁ + βD₂` and `c1 = f₃D₃ + f₄D₄`, from the
/// six-sum closed form.
pub fn fa_rank2(a: i64, alpha: i64, beta: i64, f3: i64, f4: i64, order: i64) -> Result<LaurentSeries> {
    check_order(order)?;
    let p = FaParams::new(a, alpha, beta, f3, f4)?;
    assemble(4, 8, order, |depth| {
        stable("F_a six-sum", |s| fa_six_sum_shell(&p, depth, s as i64))
    })
}

/// One `ΣΔ = s` shell of the eleven incidence-space sums, at scale 4.
fn fa_eleven_sum_shell(p: &FaParams, depth: i64, s: i64) -> Shell {
    let FaParams { a, alpha, beta, f3, f4 } = *p;
    let alpha_p = alpha - a * beta;
    let cap = 4 * depth;
    let fp4 = p.fp4();
    let mut terms = Vec::new();
    let mut admissible = false;
    for d in compositions(s, 4) {
        let zeros = d.iter().filter(|x| **x == 0).count();
        if zeros > 1 {
            continue;
        }
        let (d1, d2, d3, d4) = (d[0], d[1], d[2], d[3]);
        if !even(-f3 + d1 - a * d2 + d3) || !even(-f4 + d2 + d4) {
            continue;
        }
        let (w1, w2, w3, w4) = (beta * d1, alpha_p * d2, beta * d3, alpha * d4);
        let t = w1 + w2 + w3 + w4;
        // 4·(½(Δ₂+Δ₄)(Δ₁ + a/2 Δ₂ + Δ₃ − a/2 Δ₄)) and its mirrored variant.
        let plus = 2 * (d2 + d4) * (d1 + d3) + a * (d2 + d4) * (d2 - d4);
        let minus = -2 * (d2 + d4) * (d1 + d3) + a * (d2 + d4) * (d2 - d4);
        let mut push = |coeff: i64, e: i64| {
            admissible = true;
            if e <= cap {
                terms.push((e, coeff));
            }
        };
        let light = |w: i64| 2 * w < t;
        if zeros == 1 {
            // The surviving three points are distinct and each lighter than
            // the other two together.
            if [w1, w2, w3, w4].iter().zip(&d).all(|(w, x)| *x == 0 || light(*w)) {
                push(1, fp4 + plus);
            }
            continue;
        }
        if light(w1) && light(w2) && light(w3) && light(w4) {
            push(-1, fp4 + plus);
        }
        if w1 + w3 < w2 + w4 && light(w2) && light(w4) {
            push(1, fp4 + plus);
        }
        if w2 + w4 < w1 + w3 && light(w1) && light(w3) {
            push(1, fp4 + plus);
        }
        let merged = [
            (w1 + w2 < w3 + w4, light(w3) && light(w4), d2 * d3 + d3 * d4 + d4 * d1),
            (w1 + w4 < w2 + w3, light(w2) && light(w3), d1 * d2 + d2 * d3 + d3 * d4),
            (w2 + w3 < w1 + w4, light(w1) && light(w4), d1 * d2 + d3 * d4 + d4 * d1),
            (w3 + w4 < w1 + w2, light(w1) && light(w2), d1 * d2 + d2 * d3 + d4 * d1),
        ];
        for (pair_light, rest_light, corner) in merged {
            if pair_light && rest_light {
                push(1, fp4 + minus + 4 * corner);
            }
        }
    }
    (terms, admissible)
}

/// Rank 2 on `F_a` from the eleven incidence-space sums before
/// simplification; an independent route to [`fa_rank2`].
pub fn fa_rank2_eleven(a: i64, alpha: i64, beta: i64, f3: i64, f4: i64, order: i64) -> Result<LaurentSeries> {
    check_order(order)?;
    let p = FaParams::new(a, alpha, beta, f3, f4)?;
    assemble(4, 8, order, |depth| {
        stable("F_a eleven-sum", |s| fa_eleven_sum_shell(&p, depth, s as i64))
    })
}

/// Rank 2 on `P¹×P¹` with `H = αD₁ + βD₂`, from the four-sum specialization:
///
/// `−Σ[λj = i, −j<l<j, −λj<k<λj] q^{fp+ij/2}`
/// `+ 4Σ[k<λl<i, l<j, −i<k, −λj<k] q^{fp+(ij−jk+il+kl)/4}`
/// `+ 2Σ[2∣j+k, i<λj, −i/λ<k<i/λ] q^{fp+ij/2}`
/// `+ 2Σ[2∣i+k, λj<i, −λj<k<λj] q^{fp+ij/2}`.
pub fn p1p1_rank2(alpha: i64, beta: i64, f3: i64, f4: i64, order: i64) -> Result<LaurentSeries> {
    check_order(order)?;
    let p = FaParams::new(0, alpha, beta, f3, f4)?;
    assemble(4, 8, order, |depth| {
        stable("P1xP1 four-sum", |s| p1p1_shell(&p, depth, s as i64))
    })
}

fn p1p1_shell(p: &FaParams, depth: i64, s: i64) -> Shell {
    let FaParams { alpha, beta, f3, f4, .. } = *p;
    let cap = 4 * depth;
    let fp4 = p.fp4();
    let mut terms = Vec::new();
    let mut admissible = false;
    for (i, j) in diamond(s) {
        if !even(f3 + i) || !even(f4 + j) {
            continue;
        }
        let e1 = fp4 + 2 * i * j;
        let mut n1 = 0i64;
        let k_sym = |bound_num: i64, den: i64, parity: i64| -> i64 {
            let lo = above(-bound_num, den);
            let hi = below(bound_num, den);
            (lo..=hi).filter(|k| even(parity + k)).count() as i64
        };
        if alpha * j == beta * i {
            let ls = ((-j + 1)..j).filter(|l| even(j + l)).count() as i64;
            n1 -= ls * k_sym(alpha * j, beta, i);
        }
        for l in (-j + 1)..j {
            if !even(j + l) || alpha * l >= beta * i {
                continue;
            }
            let lo = above(-i, 1).max(above(-alpha * j, beta));
            let hi = below(alpha * l, beta);
            for k in lo..=hi {
                if even(i + k) {
                    admissible = true;
                    let e2 = fp4 + i * j - j * k + i * l + k * l;
                    if e2 <= cap {
                        terms.push((e2, 4));
                    }
                }
            }
        }
        if beta * i < alpha * j {
            n1 += 2 * k_sym(i * beta, alpha, j);
        }
        if alpha * j < beta * i {
            n1 += 2 * k_sym(alpha * j, beta, i);
        }
        if n1 != 0 {
            admissible = true;
            if e1 <= cap {
                terms.push((e1, n1));
            }
        }
    }
    (terms, admissible)
}

/// Compositions of `s` into `n` positive parts.
fn positive_compositions(s: i64, n: usize) -> Vec<Vec<i64>> {
    if s < n as i64 {
        return Vec::new();
    }
    compositions(s - n as i64, n)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x + 1).collect())
        .collect()
}

/// `18·(f²/2 − (1/18)[(−f−2ΣΔ−ΣΓ)² + (−f+ΣΔ−ΣΓ)² + (−f+ΣΔ+2ΣΓ)²])`.
fn rank3_base18(f: i64, sd: i64, sg: i64) -> i64 {
    let sq = (-f - 2 * sd - sg).pow(2) + (-f + sd - sg).pow(2) + (-f + sd + 2 * sg).pow(2);
    9 * f * f - sq
}

/// One shell `ΣΔ + ΣΓ = s` of the six rank-3 sums, at exponent scale 18.
fn p2_rank3_shell(f: i64, depth: i64, s: i64) -> Shell {
    let cap = 18 * depth;
    let mut terms = Vec::new();
    let mut admissible = false;
    let mut push = |coeff: i64, e: i64| {
        admissible = true;
        if e <= cap {
            terms.push((e, coeff));
        }
    };
    for v in positive_compositions(s, 6) {
        let (d1, d2, d3, g1, g2, g3) = (v[0], v[1], v[2], v[3], v[4], v[5]);
        let (sd, sg) = (d1 + d2 + d3, g1 + g2 + g3);
        if (-f + sd + 2 * sg).rem_euclid(3) != 0 {
            continue;
        }
        let shared = d1 + 2 * g1 < 2 * d2 + 2 * d3 + g2 + g3
            && d2 + 2 * g2 < 2 * d1 + 2 * d3 + g1 + g3
            && d3 + 2 * g3 < 2 * d1 + 2 * d2 + g1 + g2
            && g1 + 2 * d1 < 2 * g2 + 2 * g3 + d2 + d3
            && g2 + 2 * d2 < 2 * g1 + 2 * g3 + d1 + d3;
        let g3_light = g3 + 2 * d3 < 2 * g1 + 2 * g2 + d1 + d2;
        let d_pairs = d1 + d2 < 2 * d3 + sg && d2 + d3 < 2 * d1 + sg && d1 + d3 < 2 * d2 + sg;
        let g_pairs = g1 + g2 < 2 * g3 + sd && g2 + g3 < 2 * g1 + sd && g1 + g3 < 2 * g2 + sd;
        let full = g1 * g2 + g2 * g3 + g1 * g3 + d1 * g2 + d2 * g1 + d1 * d2 + d2 * g3 + d3 * g2 + d2 * d3
            + d1 * g3
            + d3 * g1
            + d1 * d3;
        let base = rank3_base18(f, sd, sg);
        if shared && g3_light && d_pairs && g_pairs {
            push(-1, base + 18 * full);
        }
        if shared && g3_light && sd < sg && g_pairs {
            push(1, base + 18 * full);
        }
        if shared && g3_light && d_pairs && sg < sd {
            push(1, base + 18 * full);
        }
        let s4 = d1 + 2 * g1 < 2 * d2 + 2 * d3 + g2 + g3
            && g3 + 2 * d3 < 2 * g1 + 2 * g2 + d1 + d2
            && d2 + 2 * g2 < 2 * d1 + 2 * d3 + g1 + g3
            && d1 + d2 < 2 * d3 + sg
            && d1 + d3 + 2 * g3 < 2 * d2 + g1 + g2
            && d2 + d3 < 2 * d1 + sg
            && g1 + g3 + 2 * d1 < 2 * g2 + d2 + d3
            && g1 + g2 < 2 * g3 + sd
            && g2 + 2 * d2 < 2 * g1 + 2 * g3 + d1 + d3
            && g2 + g3 < 2 * g1 + sd;
        if s4 {
            push(6, base + 18 * (full - d1 * g3));
        }
    }
    for v in positive_compositions(s, 5) {
        // Δ₁ = 0.
        let (d2, d3, g1, g2, g3) = (v[0], v[1], v[2], v[3], v[4]);
        let (sd, sg) = (d2 + d3, g1 + g2 + g3);
        if (-f + sd + 2 * sg).rem_euclid(3) == 0
            && 2 * g1 < 2 * d2 + 2 * d3 + g2 + g3
            && sd < sg
            && d2 + 2 * g2 < 2 * d3 + g1 + g3
            && g1 + g2 < 2 * g3 + sd
            && d3 + 2 * g3 < 2 * d2 + g1 + g2
            && g2 + g3 < 2 * g1 + sd
            && g2 + 2 * d2 < 2 * g1 + 2 * g3 + d3
            && g1 + g3 < 2 * g2 + sd
            && g3 + 2 * d3 < 2 * g1 + 2 * g2 + d2
        {
            let corner = g1 * g2 + g2 * g3 + g1 * g3 + d2 * g1 + d2 * g3 + d3 * g2 + d2 * d3 + d3 * g1;
            push(3, rank3_base18(f, sd, sg) + 18 * corner);
        }
        // Γ₁ = 0.
        let (d1, d2, d3, g2, g3) = (v[0], v[1], v[2], v[3], v[4]);
        let (sd, sg) = (d1 + d2 + d3, g2 + g3);
        if (-f + sd + 2 * sg).rem_euclid(3) == 0
            && d2 + 2 * g2 < 2 * d1 + 2 * d3 + g3
            && d1 + d2 < 2 * d3 + sg
            && d3 + 2 * g3 < 2 * d1 + 2 * d2 + g2
            && d2 + d3 < 2 * d1 + sg
            && 2 * d1 < 2 * g2 + 2 * g3 + d2 + d3
            && d1 + d3 < 2 * d2 + sg
            && g2 + 2 * d2 < 2 * g3 + d1 + d3
            && sg < sd
            && g3 + 2 * d3 < 2 * g2 + d1 + d2
        {
            let corner = d1 * d2 + d2 * d3 + d1 * d3 + d1 * g2 + d3 * g2 + d2 * g3 + g2 * g3 + d1 * g3;
            push(3, rank3_base18(f, sd, sg) + 18 * corner);
        }
    }
    (terms, admissible)
}

/// Rank 3 on `P²` with `c1 = fD`, from the six-term incidence-space sum
/// `q^{f²/2}/∏(1−q^k)^9 · [−S₁ + S₂ + S₃ + 6S₄ + 3S₅ + 3S₆]`.
pub fn p2_rank3(f: i64, order: i64) -> Result<LaurentSeries> {
    check_order(order)?;
    assemble(18, 9, order, |depth| {
        stable("P2 rank-3 sums", |s| p2_rank3_shell(f, depth, s as i64))
    })
}

/// Coefficients `c_0..=c_order` as big integers, for comparisons.
pub fn coefficients(s: &LaurentSeries, order: i64) -> Vec<BigInt> {
    s.dense(0, order)
}
