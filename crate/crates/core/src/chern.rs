//! Chern character of a torsion-free equivariant sheaf on a toric surface,
//! evaluated from its characteristic-function data.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::toric::{DivisorClass, Fan};

/// Numerical invariants of an equivariant sheaf: per ray `i`, the location
/// `A_i`, the widths `Δ_i(1..r−1)` and the 2D-partition sizes `#π_i(1..r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantData {
    pub rank: usize,
    pub locations: Vec<i64>,
    pub widths: Vec<Vec<i64>>,
    pub partitions: Vec<Vec<i64>>,
}

impl EquivariantData {
    pub fn new(
        rank: usize,
        locations: Vec<i64>,
        widths: Vec<Vec<i64>>,
        partitions: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let d = EquivariantData {
            rank,
            locations,
            widths,
            partitions,
        };
        d.validate(None)?;
        Ok(d)
    }

    /// Rank-one data `(A_i, #π_i)`.
    pub fn line(locations: Vec<i64>, partitions: Vec<i64>) -> Result<Self> {
        let n = locations.len();
        Self::new(
            1,
            locations,
            vec![Vec::new(); n],
            partitions.into_iter().map(|p| vec![p]).collect(),
        )
    }

    fn validate(&self, rays: Option<usize>) -> Result<()> {
        let n = self.locations.len();
        if self.rank == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        if rays.is_some_and(|m| m != n) {
            return Err(Error::InvalidInput(format!(
                "expected {} locations, got {n}",
                rays.unwrap_or(0)
            )));
        }
        if self.widths.len() != n || self.widths.iter().any(|w| w.len() != self.rank - 1) {
            return Err(Error::InvalidInput("widths must be N x (r-1)".into()));
        }
        if self.partitions.len() != n || self.partitions.iter().any(|p| p.len() != self.rank) {
            return Err(Error::InvalidInput("partition sizes must be N x r".into()));
        }
        if self.widths.iter().flatten().chain(self.partitions.iter().flatten()).any(|x| *x < 0) {
            return Err(Error::InvalidInput(
                "widths and partition sizes must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Data of `L₁ ⊕ … ⊕ L_r` for rank-one summands whose locations are
    /// weakly increasing on every ray, so that all filtrations jump in the
    /// same summand order.
    pub fn direct_sum(lines: &[EquivariantData]) -> Result<Self> {
        let first = lines
            .first()
            .ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        let n = first.locations.len();
        if lines.iter().any(|l| l.rank != 1 || l.locations.len() != n) {
            return Err(Error::InvalidInput(
                "direct sum expects rank-one data on a common fan".into(),
            ));
        }
        let mut widths = vec![Vec::new(); n];
        for pair in lines.windows(2) {
            for (i, w) in widths.iter_mut().enumerate() {
                let d = pair[1].locations[i] - pair[0].locations[i];
                if d < 0 {
                    return Err(Error::InvalidInput(
                        "summand locations must increase on every ray".into(),
                    ));
                }
                w.push(d);
            }
        }
        let partitions = (0..n)
            .map(|i| lines.iter().map(|l| l.partitions[i][0]).collect())
            .collect();
        Self::new(lines.len(), first.locations.clone(), widths, partitions)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernCharacter {
    pub rank: usize,
    pub c1: DivisorClass,
    pub ch2: Rational64,
    pub c2: Rational64,
}

/// `ch(E) = r + c1 + ch2` from the characteristic function.
///
/// `c1 = −Σ_i (rA_i + Σ_j (r−j)Δ_i(j)) D_i` and
/// `ch2 = ½(ΣA_iD_i)² + ½Σ_{j<r}(Σ_i(A_i + Σ_{k≤j}Δ_i(k))D_i)² − Σ #π_i(j)`.
pub fn chern_character(fan: &Fan, data: &EquivariantData) -> Result<ChernCharacter> {
    data.validate(Some(fan.len()))?;
    let n = fan.len();
    let r = data.rank as i64;
    let c1_raw: Vec<i64> = (0..n)
        .map(|i| {
            let w: i64 = data.widths[i]
                .iter()
                .enumerate()
                .map(|(j, d)| (r - 1 - j as i64) * d)
                .sum();
            -(r * data.locations[i] + w)
        })
        .collect();
    let mut level = data.locations.clone();
    let mut twice_ch2 = fan.intersect_raw(&level, &level);
    for j in 0..data.rank - 1 {
        for i in 0..n {
            level[i] += data.widths[i][j];
        }
        twice_ch2 += fan.intersect_raw(&level, &level);
    }
    let points: i64 = data.partitions.iter().flatten().sum();
    let ch2 = Rational64::new(twice_ch2, 2) - Rational64::from_integer(points);
    let c1 = fan.class(c1_raw);
    let c1_sq = fan.intersection(&c1, &c1);
    let c2 = Rational64::new(c1_sq, 2) - ch2;
    Ok(ChernCharacter {
        rank: data.rank,
        c1,
        ch2,
        c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_sheaf() {
        let fan = Fan::p2();
        let data = EquivariantData::line(vec![0; 3], vec![0; 3]).unwrap();
        let ch = chern_character(&fan, &data).unwrap();
        assert_eq!(ch.rank, 1);
        assert_eq!(ch.c1, fan.class(vec![0; 3]));
        assert_eq!(ch.ch2, Rational64::from_integer(0));
    }

    #[test]
    fn line_bundle_with_points() {
        let fan = Fan::hirzebruch(1);
        let a = vec![1, -2, 0, 3];
        let data = EquivariantData::line(a.clone(), vec![2, 0, 1, 0]).unwrap();
        let ch = chern_character(&fan, &data).unwrap();
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        assert_eq!(ch.c1, fan.class(neg));
        let sq = fan.intersect_raw(&a, &a);
        assert_eq!(ch.ch2, Rational64::new(sq, 2) - 3);
        assert_eq!(ch.c2, Rational64::from_integer(3));
    }

    #[test]
    fn rejects_malformed_data() {
        assert!(EquivariantData::new(2, vec![0; 3], vec![vec![1]; 2], vec![vec![0; 2]; 3]).is_err());
        assert!(EquivariantData::new(2, vec![0; 3], vec![vec![-1]; 3], vec![vec![0; 2]; 3]).is_err());
        let data = EquivariantData::line(vec![0; 4], vec![0; 4]).unwrap();
        assert!(chern_character(&Fan::p2(), &data).is_err());
    }
}
