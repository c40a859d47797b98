//! Rank-2 generating functions on an arbitrary smooth complete toric
//! surface, by enumerating width vectors and coincidence patterns of the
//! limit points on the projective line.

use num_rational::Rational64;

use crate::enumerate::{assemble, stabilize, Shell, ShellPolicy};
use crate::error::{Error, Result};
use crate::qseries::LaurentSeries;
use crate::toric::{DivisorClass, Fan};

/// Widths `Δ_i ≥ 0` of a rank-2 display, one per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthVector {
    widths: Vec<i64>,
    support: Vec<usize>,
}

impl WidthVector {
    pub fn new(widths: Vec<i64>) -> Result<Self> {
        if widths.iter().any(|w| *w < 0) {
            return Err(Error::InvalidInput("widths must be nonnegative".into()));
        }
        let support = (0..widths.len()).filter(|i| widths[*i] > 0).collect();
        Ok(WidthVector { widths, support })
    }

    pub fn widths(&self) -> &[i64] {
        &self.widths
    }

    /// Rays with positive width.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn total(&self) -> i64 {
        self.widths.iter().sum()
    }
}

/// Set partition of the support: rays in one block share a limit point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidencePattern {
    group: Vec<Option<usize>>,
    blocks: usize,
}

impl CoincidencePattern {
    /// Builds a pattern on `n` rays from its blocks; blocks are renumbered in
    /// order of their smallest ray.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut sorted: Vec<Vec<usize>> = blocks
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        sorted.sort();
        let mut group = vec![None; n];
        for (k, b) in sorted.iter().enumerate() {
            for &i in b {
                if i >= n || group[i].is_some() {
                    return Err(Error::InvalidInput(
                        "blocks must be disjoint subsets of the rays".into(),
                    ));
                }
                group[i] = Some(k);
            }
        }
        Ok(CoincidencePattern {
            group,
            blocks: sorted.len(),
        })
    }

    /// Every support ray in its own block.
    pub fn all_distinct(widths: &WidthVector) -> Self {
        let mut group = vec![None; widths.widths.len()];
        for (k, &i) in widths.support.iter().enumerate() {
            group[i] = Some(k);
        }
        CoincidencePattern {
            group,
            blocks: widths.support.len(),
        }
    }

    /// All patterns on the support of `widths`, in a fixed order.
    pub fn enumerate(widths: &WidthVector) -> Vec<CoincidencePattern> {
        let n = widths.widths.len();
        set_partitions(widths.support.len())
            .into_iter()
            .map(|rgs| {
                let mut group = vec![None; n];
                for (k, &i) in widths.support.iter().enumerate() {
                    group[i] = Some(rgs[k]);
                }
                let blocks = rgs.iter().max().map_or(0, |m| m + 1);
                CoincidencePattern { group, blocks }
            })
            .collect()
    }

    pub fn group(&self, i: usize) -> Option<usize> {
        self.group[i]
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (i, g) in self.group.iter().enumerate() {
            if let Some(k) = g {
                out[*k].push(i);
            }
        }
        out
    }

    fn covers(&self, widths: &WidthVector) -> bool {
        self.group.len() == widths.widths.len()
            && (0..self.group.len()).all(|i| self.group[i].is_some() == (widths.widths[i] > 0))
    }
}

/// Restricted growth strings of length `m`: each set partition of
/// `{0..m}` once, with block labels in order of first appearance.
pub fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        let next = if prefix.is_empty() { 0 } else { max + 1 };
        for label in 0..=next {
            prefix.push(label);
            go(prefix, max.max(label), m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(m), 0, m, &mut out);
    out
}

fn c1_coeff(c1: &DivisorClass, i: usize) -> i64 {
    c1.canonical()[i - 2]
}

/// `2 | −f_i + Δ₁ξ_i + Δ₂η_i + Δ_i` for every ray `i ≥ 3`.
pub fn divisibility_ok(fan: &Fan, widths: &WidthVector, c1: &DivisorClass) -> bool {
    let d = &widths.widths;
    (2..fan.len()).all(|i| (-c1_coeff(c1, i) + d[0] * fan.xi(i) + d[1] * fan.eta(i) + d[i]) % 2 == 0)
}

/// `½c1² − ⅛([Σ(−f_i − Δ_i − Δ₁ξ_i − Δ₂η_i)D_i]² + [Σ(−f_i + Δ_i + Δ₁ξ_i + Δ₂η_i)D_i]²)`,
/// the sums running over `i ≥ 3`.
pub fn base_exponent(fan: &Fan, widths: &WidthVector, c1: &DivisorClass) -> Rational64 {
    let n = fan.len();
    let d = &widths.widths;
    let shifted = |sign: i64| -> Vec<i64> {
        let mut v = vec![0; n];
        for (i, vi) in v.iter_mut().enumerate().skip(2) {
            *vi = -c1_coeff(c1, i) + sign * (d[i] + d[0] * fan.xi(i) + d[1] * fan.eta(i));
        }
        v
    };
    let (lo, hi) = (shifted(-1), shifted(1));
    let c1_sq = fan.intersection(c1, c1);
    Rational64::new(c1_sq, 2) - Rational64::new(fan.intersect_raw(&lo, &lo) + fan.intersect_raw(&hi, &hi), 8)
}

/// `4 · base_exponent`, using `base = (c1² − (ΣΔ_iD_i)²)/4`.
fn base_exponent_x4(fan: &Fan, widths: &[i64], c1_sq: i64) -> i64 {
    c1_sq - fan.intersect_raw(widths, widths)
}

/// Euler characteristic of the stable stratum with the given coincidences.
///
/// With weights `w_i = Δ_i (H·D_i)` and total `T`, the stratum is empty unless
/// every block has weight strictly below `T/2` and there are at least three
/// blocks; `k` distinct points modulo automorphisms then contribute
/// `(−1)^{k−3}(k−3)!`.
pub fn stratum_euler(fan: &Fan, h: &DivisorClass, widths: &WidthVector, pattern: &CoincidencePattern) -> i64 {
    debug_assert!(pattern.covers(widths));
    let deg = fan.degrees(h);
    let weights: Vec<i64> = widths.widths.iter().zip(&deg).map(|(d, h)| d * h).collect();
    let mut block_weight = vec![0i64; pattern.blocks];
    for (i, g) in pattern.group.iter().enumerate() {
        if let Some(k) = g {
            block_weight[*k] += weights[i];
        }
    }
    stratum_from_weights(&block_weight)
}

fn stratum_from_weights(block_weight: &[i64]) -> i64 {
    let k = block_weight.len();
    let total: i64 = block_weight.iter().sum();
    if k < 3 || block_weight.iter().any(|w| 2 * w >= total) {
        return 0;
    }
    m0k_euler(k)
}

/// `e(M_{0,k}) = (−1)^{k−3}(k−3)!` for `k ≥ 3`.
pub fn m0k_euler(k: usize) -> i64 {
    assert!(k >= 3);
    let f: i64 = (1..=(k as i64 - 3)).product();
    if (k - 3) % 2 == 0 {
        f
    } else {
        -f
    }
}

/// `Σ Δ_iΔ_{i+1}` over cyclically adjacent support rays in different blocks.
pub fn corner_blocks(widths: &WidthVector, pattern: &CoincidencePattern) -> i64 {
    corner_from_groups(&widths.widths, &pattern.group)
}

fn corner_from_groups(d: &[i64], group: &[Option<usize>]) -> i64 {
    let n = d.len();
    (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            match (group[i], group[j]) {
                (Some(a), Some(b)) if a != b => d[i] * d[j],
                _ => 0,
            }
        })
        .sum()
}

/// Compositions of `s` into `n` nonnegative parts, lexicographic.
pub fn compositions(s: i64, n: usize) -> Vec<Vec<i64>> {
    fn go(rest: i64, n: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() + 1 == n {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=rest {
            prefix.push(x);
            go(rest - x, n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(s, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Terms of one width shell `ΣΔ_i = s`, at exponent scale 4.
fn rank2_shell(
    fan: &Fan,
    deg: &[i64],
    c1: &DivisorClass,
    c1_sq: i64,
    partitions: &[Vec<Vec<usize>>],
    order: i64,
    s: i64,
) -> Shell {
    let n = fan.len();
    let mut terms = Vec::new();
    let mut admissible = false;
    let mut group = vec![None; n];
    for d in compositions(s, n) {
        let support: Vec<usize> = (0..n).filter(|i| d[*i] > 0).collect();
        if support.len() < 3 {
            continue;
        }
        let w = WidthVector {
            widths: d,
            support,
        };
        if !divisibility_ok(fan, &w, c1) {
            continue;
        }
        let base = base_exponent_x4(fan, &w.widths, c1_sq);
        let weights: Vec<i64> = w.support.iter().map(|&i| w.widths[i] * deg[i]).collect();
        for rgs in &partitions[w.support.len()] {
            let k = rgs.iter().max().map_or(0, |m| m + 1);
            if k < 3 {
                continue;
            }
            let mut bw = vec![0i64; k];
            for (pos, g) in rgs.iter().enumerate() {
                bw[*g] += weights[pos];
            }
            let e = stratum_from_weights(&bw);
            if e == 0 {
                continue;
            }
            admissible = true;
            group.iter_mut().for_each(|g| *g = None);
            for (pos, &i) in w.support.iter().enumerate() {
                group[i] = Some(rgs[pos]);
            }
            let exp = base + 4 * corner_from_groups(&w.widths, &group);
            if exp <= 4 * order {
                terms.push((exp, e));
            }
        }
    }
    (terms, admissible)
}

/// `Σ_{c₂} e(M^H(2, c1, c₂)) q^{c₂}` through `q^order`.
pub fn generating_function_rank2(
    fan: &Fan,
    h: &DivisorClass,
    c1: &DivisorClass,
    order: i64,
) -> Result<LaurentSeries> {
    generating_function_rank2_with(fan, h, c1, order, ShellPolicy::default())
}

pub fn generating_function_rank2_with(
    fan: &Fan,
    h: &DivisorClass,
    c1: &DivisorClass,
    order: i64,
    policy: ShellPolicy,
) -> Result<LaurentSeries> {
    if order < 0 {
        return Err(Error::InvalidInput("order must be nonnegative".into()));
    }
    if !fan.is_ample(h) {
        return Err(Error::NotAmple(format!("H·D_i = {:?}", fan.degrees(h))));
    }
    let n = fan.len();
    let deg = fan.degrees(h);
    let c1 = c1.canonicalized();
    let c1_sq = fan.intersection(&c1, &c1);
    let partitions: Vec<Vec<Vec<usize>>> = (0..=n).map(set_partitions).collect();
    assemble(4, 2 * n as u32, order, |depth| {
        stabilize("rank-2 widths", policy, |s| {
            rank2_shell(fan, &deg, &c1, c1_sq, &partitions, depth, s as i64)
        })
        .map(|(t, _)| t)
    })
}
