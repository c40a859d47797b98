//! Smooth complete toric surfaces: fans, divisor classes and the
//! intersection pairing on `A¹(X)`.
//!
//! Rays are indexed from 0 in code; ray `i` here is `D_{i+1}` in the usual
//! one-based notation, so the canonical basis `D₃..D_N` is indices `2..N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ray list as read from a fan JSON file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSpec {
    pub rays: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<[i64; 2]>,
    a: Vec<i64>,
}

fn det(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

impl Fan {
    /// Validates a counterclockwise ray list and derives the self-intersection
    /// data `a_i` from `v_{i-1} + v_{i+1} = a_i v_i`.
    pub fn new(rays: Vec<[i64; 2]>) -> Result<Fan> {
        let n = rays.len();
        if n < 3 {
            return Err(Error::InvalidFan(format!("need at least 3 rays, got {n}")));
        }
        if rays[0] != [1, 0] || rays[1] != [0, 1] {
            return Err(Error::InvalidFan(
                "the first two rays must be (1,0) and (0,1)".into(),
            ));
        }
        for (i, v) in rays.iter().enumerate() {
            if gcd(v[0], v[1]) != 1 {
                return Err(Error::InvalidFan(format!(
                    "ray {} = ({}, {}) is not primitive",
                    i + 1,
                    v[0],
                    v[1]
                )));
            }
        }
        for i in 0..n {
            let (u, v) = (rays[i], rays[(i + 1) % n]);
            let d = det(u, v);
            if d != 1 {
                return Err(Error::InvalidFan(format!(
                    "det(v{}, v{}) = {d}, expected 1",
                    i + 1,
                    (i + 1) % n + 1
                )));
            }
        }
        // Each consecutive cone turns by less than π; the rays must go round
        // exactly once.
        let angle = |v: [i64; 2]| (v[1] as f64).atan2(v[0] as f64);
        let mut turn = 0.0;
        for i in 0..n {
            let mut d = angle(rays[(i + 1) % n]) - angle(rays[i]);
            if d <= 0.0 {
                d += std::f64::consts::TAU;
            }
            turn += d;
        }
        if (turn - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::InvalidFan(
                "rays wind around the origin more than once".into(),
            ));
        }
        let a = (0..n)
            .map(|i| {
                let p = rays[(i + n - 1) % n];
                let q = rays[(i + 1) % n];
                let s = [p[0] + q[0], p[1] + q[1]];
                let v = rays[i];
                if v[0] != 0 {
                    s[0] / v[0]
                } else {
                    s[1] / v[1]
                }
            })
            .collect();
        Ok(Fan { rays, a })
    }

    /// `P²` with rays `(1,0), (0,1), (-1,-1)`.
    pub fn p2() -> Fan {
        Fan::new(vec![[1, 0], [0, 1], [-1, -1]]).expect("P2 fan is valid")
    }

    /// Hirzebruch surface `F_a` with rays `(1,0), (0,1), (-1,a), (0,-1)`.
    pub fn hirzebruch(a: i64) -> Fan {
        Fan::new(vec![[1, 0], [0, 1], [-1, a], [0, -1]]).expect("F_a fan is valid")
    }

    /// Parses `"P2"` or `"Fa:<a>"`.
    pub fn from_preset(name: &str) -> Result<Fan> {
        if name == "P2" {
            return Ok(Fan::p2());
        }
        if let Some(a) = name.strip_prefix("Fa:") {
            let a: i64 = a
                .trim()
                .parse()
                .map_err(|_| Error::InvalidFan(format!("bad Hirzebruch parameter in {name:?}")))?;
            return Ok(Fan::hirzebruch(a));
        }
        Err(Error::InvalidFan(format!("unknown preset {name:?}")))
    }

    /// Parses a JSON document `{"rays": [[x, y], ...]}`.
    pub fn from_json(text: &str) -> Result<Fan> {
        let spec: FanSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidFan(e.to_string()))?;
        Fan::new(spec.rays)
    }

    pub fn to_spec(&self) -> FanSpec {
        FanSpec {
            rays: self.rays.clone(),
        }
    }

    pub fn rays(&self) -> &[[i64; 2]] {
        &self.rays
    }

    /// Number of rays, equal to the topological Euler characteristic.
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Self-intersection data: `D_i² = −a_i`.
    pub fn a(&self) -> &[i64] {
        &self.a
    }

    /// `ξ_i = −⟨e₁, v_i⟩`, meaningful for `i ≥ 2` (zero-based).
    pub fn xi(&self, i: usize) -> i64 {
        -self.rays[i][0]
    }

    /// `η_i = −⟨e₂, v_i⟩`, meaningful for `i ≥ 2` (zero-based).
    pub fn eta(&self, i: usize) -> i64 {
        -self.rays[i][1]
    }

    /// `D_i · D_j` for zero-based ray indices.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        let n = self.len();
        if i == j {
            -self.a[i]
        } else if (i + 1) % n == j || (j + 1) % n == i {
            1
        } else {
            0
        }
    }

    /// Intersection number of two raw coefficient vectors on `D₁..D_N`.
    pub fn intersect_raw(&self, c: &[i64], d: &[i64]) -> i64 {
        let n = self.len();
        assert_eq!(c.len(), n);
        assert_eq!(d.len(), n);
        let mut t = 0;
        for i in 0..n {
            if c[i] == 0 {
                continue;
            }
            for (j, dj) in d.iter().enumerate() {
                if *dj != 0 {
                    t += c[i] * dj * self.pairing(i, j);
                }
            }
        }
        t
    }

    pub fn intersection(&self, c: &DivisorClass, d: &DivisorClass) -> i64 {
        self.intersect_raw(&c.raw, &d.raw)
    }

    /// `H · D_i` for every ray.
    pub fn degrees(&self, h: &DivisorClass) -> Vec<i64> {
        (0..self.len())
            .map(|i| {
                h.raw
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c * self.pairing(j, i))
                    .sum()
            })
            .collect()
    }

    /// Nakai–Moishezon on a toric surface: `H · D_i > 0` for every ray.
    pub fn is_ample(&self, h: &DivisorClass) -> bool {
        self.degrees(h).iter().all(|d| *d > 0)
    }

    /// Inserts `v_i + v_{i+1}` after ray `i` (zero-based, cyclic) and
    /// changes lattice basis so that the first two rays are again `e₁, e₂`.
    pub fn stellar_subdivide(&self, i: usize) -> Fan {
        let n = self.len();
        assert!(i < n, "cone index out of range");
        let (u, v) = (self.rays[i], self.rays[(i + 1) % n]);
        let mut rays = self.rays.clone();
        rays.insert(i + 1, [u[0] + v[0], u[1] + v[1]]);
        if rays[0] == [1, 0] && rays[1] == [0, 1] {
            return Fan::new(rays).expect("stellar subdivision stays smooth");
        }
        // (v0, v1) has determinant 1, so its inverse is integral and
        // orientation preserving.
        let (p, q) = (rays[0], rays[1]);
        let apply = |w: [i64; 2]| [q[1] * w[0] - q[0] * w[1], -p[1] * w[0] + p[0] * w[1]];
        Fan::new(rays.into_iter().map(apply).collect()).expect("stellar subdivision stays smooth")
    }

    /// Class with the given raw coefficients on `D₁..D_N`.
    pub fn class(&self, raw: Vec<i64>) -> DivisorClass {
        assert_eq!(raw.len(), self.len(), "class length must equal ray count");
        let canonical = (2..self.len())
            .map(|i| raw[i] + raw[0] * self.xi(i) + raw[1] * self.eta(i))
            .collect();
        DivisorClass { raw, canonical }
    }

    /// Class given in the canonical basis `D₃..D_N`.
    pub fn class_canonical(&self, coeffs: &[i64]) -> DivisorClass {
        assert_eq!(coeffs.len() + 2, self.len(), "expected N-2 coefficients");
        let mut raw = vec![0, 0];
        raw.extend_from_slice(coeffs);
        self.class(raw)
    }

    /// The prime divisor `D_i` (zero-based).
    pub fn ray_class(&self, i: usize) -> DivisorClass {
        let mut raw = vec![0; self.len()];
        raw[i] = 1;
        self.class(raw)
    }

    /// `H = αD₁ + βD₂`, the standard polarization on a Hirzebruch surface.
    pub fn alpha_beta(&self, alpha: i64, beta: i64) -> DivisorClass {
        let mut raw = vec![0; self.len()];
        raw[0] = alpha;
        raw[1] = beta;
        self.class(raw)
    }
}

/// Element of `A¹(X)` stored in raw and canonical coordinates.
#[derive(Clone, Debug)]
pub struct DivisorClass {
    raw: Vec<i64>,
    canonical: Vec<i64>,
}

impl DivisorClass {
    pub fn raw(&self) -> &[i64] {
        &self.raw
    }

    /// Coefficients on `D₃..D_N` after eliminating `D₁, D₂`.
    pub fn canonical(&self) -> &[i64] {
        &self.canonical
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass {
            raw: self.raw.iter().zip(&other.raw).map(|(x, y)| x + y).collect(),
            canonical: self
                .canonical
                .iter()
                .zip(&other.canonical)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass {
            raw: self.raw.iter().map(|x| k * x).collect(),
            canonical: self.canonical.iter().map(|x| k * x).collect(),
        }
    }

    /// Same class with the raw representative replaced by the canonical one.
    pub fn canonicalized(&self) -> DivisorClass {
        let mut raw = vec![0, 0];
        raw.extend_from_slice(&self.canonical);
        DivisorClass {
            raw,
            canonical: self.canonical.clone(),
        }
    }
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for DivisorClass {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert_eq!(Fan::p2().a(), &[-1, -1, -1]);
        let f = Fan::hirzebruch(3);
        assert_eq!(f.a(), &[0, 3, 0, -3]);
        assert!(matches!(
            Fan::new(vec![[1, 0], [0, 1], [-2, -1]]),
            Err(Error::InvalidFan(_))
        ));
        assert!(Fan::new(vec![[1, 0], [0, 1], [-2, -2]]).is_err());
        assert!(Fan::new(vec![[0, 1], [1, 0], [-1, -1]]).is_err());
    }

    #[test]
    fn intersection_examples() {
        let p2 = Fan::p2();
        let d3 = p2.ray_class(2);
        assert_eq!(p2.intersection(&d3, &d3), 1);
        for a in 0..4 {
            let f = Fan::hirzebruch(a);
            let (e, fib) = (f.ray_class(0), f.ray_class(1));
            assert_eq!(f.intersection(&e, &e), 0);
            assert_eq!(f.intersection(&fib, &fib), -a);
        }
    }

    #[test]
    fn p2_divisors_are_equivalent() {
        let p2 = Fan::p2();
        let classes: Vec<_> = (0..3).map(|i| p2.ray_class(i)).collect();
        for c in &classes {
            assert_eq!(c, &classes[2]);
            for d in &classes {
                assert_eq!(p2.intersection(c, d), 1);
            }
        }
    }

    #[test]
    fn ample_examples() {
        let p2 = Fan::p2();
        assert!(p2.is_ample(&p2.ray_class(2)));
        assert!(!p2.is_ample(&p2.class(vec![0, 0, 0])));
        let f = Fan::hirzebruch(2);
        assert!(f.is_ample(&f.alpha_beta(3, 1)));
        assert!(!f.is_ample(&f.alpha_beta(2, 1)));
        assert_eq!(f.degrees(&f.alpha_beta(5, 2)), vec![2, 1, 2, 5]);
    }

    #[test]
    fn stellar_examples() {
        let p2 = Fan::p2();
        let blown = p2.stellar_subdivide(0);
        assert_eq!(blown.len(), 4);
        let mut a = blown.a().to_vec();
        a.sort();
        let mut f1 = Fan::hirzebruch(1).a().to_vec();
        f1.sort();
        assert_eq!(a, f1);

        let f = Fan::hirzebruch(0);
        let one_way = f.stellar_subdivide(1).stellar_subdivide(3);
        let other_way = f.stellar_subdivide(2).stellar_subdivide(1);
        assert_eq!(one_way, other_way);
    }
}
