//! Root systems of the simple Lie algebras with Bourbaki numbering.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

/// A simple Lie algebra given by its Cartan type.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimpleFactor {
    pub series: Series,
    pub rank: usize,
}

impl fmt::Debug for SimpleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl fmt::Display for SimpleFactor {
    /// Classical names where they exist: `sl(n)`, `so(n)`, `sp(2n)`, `g2`, `e6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rank;
        match self.series {
            Series::A => write!(f, "sl({})", r + 1),
            Series::B => write!(f, "so({})", 2 * r + 1),
            Series::C => write!(f, "sp({})", 2 * r),
            Series::D => write!(f, "so({})", 2 * r),
            Series::E => write!(f, "e{}", r),
            Series::F => write!(f, "f4"),
            Series::G => write!(f, "g2"),
        }
    }
}

impl SimpleFactor {
    pub fn new(series: Series, rank: usize) -> Result<Self, Error> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(SimpleFactor { series, rank })
        } else {
            Err(Error::InvalidRank {
                series: series.letter(),
                rank,
            })
        }
    }

    pub fn a(n: usize) -> Self {
        SimpleFactor::new(Series::A, n).unwrap()
    }
    pub fn b(n: usize) -> Self {
        SimpleFactor::new(Series::B, n).unwrap()
    }
    pub fn c(n: usize) -> Self {
        SimpleFactor::new(Series::C, n).unwrap()
    }
    pub fn d(n: usize) -> Self {
        SimpleFactor::new(Series::D, n).unwrap()
    }
    pub fn g2() -> Self {
        SimpleFactor::new(Series::G, 2).unwrap()
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.series, Series::A | Series::B | Series::C | Series::D)
    }

    /// Whether explicit matrices are available for this factor.
    pub fn is_realizable(&self) -> bool {
        self.is_classical() || self.series == Series::G
    }

    /// Dimension of the defining representation (27 for E6, 56 for E7, 248 for E8, 26 for F4).
    pub fn defining_dim(&self) -> usize {
        let r = self.rank;
        match self.series {
            Series::A => r + 1,
            Series::B => 2 * r + 1,
            Series::C | Series::D => 2 * r,
            Series::G => 7,
            Series::F => 26,
            Series::E => match r {
                6 => 27,
                7 => 56,
                _ => 248,
            },
        }
    }

    pub fn dim(&self) -> usize {
        let r = self.rank;
        match self.series {
            Series::A => r * (r + 2),
            Series::B | Series::C => r * (2 * r + 1),
            Series::D => r * (2 * r - 1),
            Series::G => 14,
            Series::F => 52,
            Series::E => match r {
                6 => 78,
                7 => 133,
                _ => 248,
            },
        }
    }

    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`: row `i` holds `alpha_i` in the basis of fundamental weights.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match self.series {
            Series::A | Series::B | Series::C => {
                for i in 0..n - 1 {
                    link(i, i + 1);
                }
            }
            Series::D => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 3, n - 1);
            }
            Series::E => {
                // 1-3-4-5-6(-7-8), 2 attached to 4.
                link(0, 2);
                link(1, 3);
                for i in 2..n - 1 {
                    link(i, i + 1);
                }
            }
            Series::F => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            Series::G => link(0, 1),
        }
        match self.series {
            Series::B => c[n - 2][n - 1] = -2,
            Series::C => c[n - 1][n - 2] = -2,
            Series::F => c[1][2] = -2,
            Series::G => c[1][0] = -3,
            _ => {}
        }
        c
    }

    /// Half squared lengths of the simple roots, short roots normalized to 1.
    pub fn symmetrizer(&self) -> Vec<i64> {
        let n = self.rank;
        match self.series {
            Series::B => (0..n).map(|i| if i + 1 < n { 2 } else { 1 }).collect(),
            Series::C => (0..n).map(|i| if i + 1 < n { 1 } else { 2 }).collect(),
            Series::F => vec![2, 2, 1, 1],
            Series::G => vec![1, 3],
            _ => vec![1; n],
        }
    }
}

/// Precomputed root data of a simple factor.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub factor: SimpleFactor,
    pub cartan: Vec<Vec<i64>>,
    pub sym: Vec<i64>,
    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    pub positive: Vec<Vec<i64>>,
    /// Positive roots in fundamental-weight coordinates.
    pub positive_w: Vec<Vec<i64>>,
    /// Gram matrix of the fundamental weights scaled by `scale` to integers.
    gram: Vec<Vec<i64>>,
    scale: i64,
    /// `scale * C^{-1}` as integers.
    inv: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn new(factor: SimpleFactor) -> Self {
        let cartan = factor.cartan();
        let sym = factor.symmetrizer();
        let n = factor.rank;
        let mut positive: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut k = 0;
        while k < positive.len() {
            let beta = positive[k].clone();
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                let mut q = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if down.iter().all(|&x| x >= 0) && positive.contains(&down) {
                        q += 1;
                    } else {
                        break;
                    }
                }
                if q - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !positive.contains(&up) {
                        positive.push(up);
                    }
                }
            }
            k += 1;
        }
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let positive_w = positive
            .iter()
            .map(|c| (0..n).map(|i| (0..n).map(|j| c[j] * cartan[j][i]).sum()).collect())
            .collect();

        // (omega_j, omega_k) = (C^{-1})_{jk} d_k with C^{-1} taken over Q.
        let inv = rational_inverse(&cartan);
        let mut denom = BigInt::one();
        for row in &inv {
            for x in row {
                denom = num_integer::Integer::lcm(&denom, x.denom());
            }
        }
        let scale: i64 = num_traits::ToPrimitive::to_i64(&denom).unwrap();
        let gram = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        let v = &inv[j][k] * BigRational::from_integer(BigInt::from(sym[k] * scale));
                        num_traits::ToPrimitive::to_i64(&v.to_integer()).unwrap()
                    })
                    .collect()
            })
            .collect();
        let inv = inv
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let v = x * BigRational::from_integer(BigInt::from(scale));
                        num_traits::ToPrimitive::to_i64(&v.to_integer()).unwrap()
                    })
                    .collect()
            })
            .collect();
        RootSystem {
            factor,
            cartan,
            sym,
            positive,
            positive_w,
            gram,
            scale,
            inv,
        }
    }

    pub fn rank(&self) -> usize {
        self.factor.rank
    }

    /// Scaled inner product of two weights in fundamental-weight coordinates.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for j in 0..n {
            if a[j] == 0 {
                continue;
            }
            for k in 0..n {
                s += a[j] * self.gram[j][k] * b[k];
            }
        }
        s
    }

    /// Simple-root coordinates of a weight in the root lattice, `None` otherwise.
    pub fn root_coords(&self, mu: &[i64]) -> Option<Vec<i64>> {
        let n = self.rank();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let s: i64 = (0..n).map(|i| mu[i] * self.inv[i][k]).sum();
            if s % self.scale != 0 {
                return None;
            }
            out.push(s / self.scale);
        }
        Some(out)
    }

    /// The scale factor used by [`RootSystem::inner`].
    pub fn inner_scale(&self) -> i64 {
        self.scale
    }

    pub fn rho(&self) -> Vec<i64> {
        vec![1; self.rank()]
    }

    /// `<mu, alpha^vee>` for the positive root with simple-root coordinates `c`.
    pub fn coroot_pairing(&self, mu: &[i64], c: &[i64]) -> BigRational {
        let num: i64 = (0..self.rank()).map(|j| c[j] * self.sym[j] * mu[j]).sum();
        let d_alpha: i64 = {
            // (alpha, alpha) / 2 = sum_j c_j d_j <alpha, alpha_j^vee> / 2
            let w: Vec<i64> = (0..self.rank())
                .map(|i| (0..self.rank()).map(|j| c[j] * self.cartan[j][i]).sum())
                .collect();
            let twice: i64 = (0..self.rank()).map(|j| c[j] * self.sym[j] * w[j]).sum();
            twice / 2
        };
        BigRational::new(BigInt::from(num), BigInt::from(d_alpha))
    }

    /// Simple reflection `s_i` on a weight in fundamental-weight coordinates.
    pub fn reflect(&self, mu: &mut [i64], i: usize) {
        let k = mu[i];
        if k == 0 {
            return;
        }
        for j in 0..self.rank() {
            mu[j] -= k * self.cartan[i][j];
        }
    }

    /// Moves a weight to the dominant chamber.
    pub fn dominant(&self, mu: &[i64]) -> Vec<i64> {
        let mut v = mu.to_vec();
        while let Some(i) = v.iter().position(|&x| x < 0) {
            self.reflect(&mut v, i);
        }
        v
    }

    /// Dominant representative of `mu + rho` moved back by `rho`, with the sign of the
    /// Weyl element; `None` if `mu + rho` lies on a wall.
    pub fn dot_dominant(&self, mu: &[i64]) -> Option<(Vec<i64>, i32)> {
        let mut v: Vec<i64> = mu.iter().map(|x| x + 1).collect();
        let mut sign = 1;
        loop {
            if v.iter().any(|&x| x == 0) {
                return None;
            }
            match v.iter().position(|&x| x < 0) {
                Some(i) => {
                    self.reflect(&mut v, i);
                    sign = -sign;
                }
                None => break,
            }
        }
        Some((v.iter().map(|x| x - 1).collect(), sign))
    }

    /// Weyl orbit of a weight.
    pub fn orbit(&self, mu: &[i64]) -> Vec<Vec<i64>> {
        let start = self.dominant(mu);
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(start.clone());
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for i in 0..self.rank() {
                if v[i] > 0 {
                    let mut w = v.clone();
                    self.reflect(&mut w, i);
                    if seen.insert(w.clone()) {
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Weyl dimension formula.
pub fn weyl_dim(factor: SimpleFactor, hw: &[i64]) -> Result<BigInt, Error> {
    if hw.len() != factor.rank {
        return Err(Error::RankMismatch {
            expected: factor.rank,
            found: hw.len(),
        });
    }
    if hw.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant(hw.to_vec()));
    }
    Ok(weyl_dim_rs(&crate::character::roots(factor), hw))
}

pub(crate) fn weyl_dim_rs(rs: &RootSystem, hw: &[i64]) -> BigInt {
    let n = rs.rank();
    // (lambda + rho, alpha) / (rho, alpha); the length of alpha cancels.
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for c in &rs.positive {
        let a: i64 = (0..n).map(|j| c[j] * rs.sym[j] * (hw[j] + 1)).sum();
        let b: i64 = (0..n).map(|j| c[j] * rs.sym[j]).sum();
        num *= a;
        den *= b;
    }
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero());
    q
}

fn rational_inverse(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let piv = crate::matrix::rref_in_place(&mut a, n);
    assert_eq!(piv.len(), n, "Cartan matrix is invertible");
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

impl FromStr for SimpleFactor {
    type Err = Error;

    /// Accepts Cartan labels (`A3`, `G2`) and classical names (`sl(4)`, `so(7)`, `sp(4)`, `g2`, `e6`).
    /// Classical names must denote a simple algebra; use [`crate::dsl::Written`]
    /// for the low-rank coincidences.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        let bad = || Error::UnknownFactor(s.to_string());
        if let Some(inner) = lower
            .strip_suffix(')')
            .and_then(|x| x.split_once('('))
        {
            let n: usize = inner.1.trim().parse().map_err(|_| bad())?;
            return match inner.0 {
                "sl" if n >= 2 => SimpleFactor::new(Series::A, n - 1),
                "sp" if n % 2 == 0 && n >= 4 => SimpleFactor::new(Series::C, n / 2),
                "so" if n >= 7 && n % 2 == 1 => SimpleFactor::new(Series::B, n / 2),
                "so" if n >= 8 && n % 2 == 0 => SimpleFactor::new(Series::D, n / 2),
                _ => Err(bad()),
            };
        }
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let series = match letter {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return Err(bad()),
        };
        SimpleFactor::new(series, rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_root_counts() {
        let cases = [
            (SimpleFactor::a(3), 6),
            (SimpleFactor::b(3), 9),
            (SimpleFactor::c(4), 16),
            (SimpleFactor::d(5), 20),
            (SimpleFactor::g2(), 6),
            (SimpleFactor::new(Series::F, 4).unwrap(), 24),
            (SimpleFactor::new(Series::E, 6).unwrap(), 36),
            (SimpleFactor::new(Series::E, 7).unwrap(), 63),
            (SimpleFactor::new(Series::E, 8).unwrap(), 120),
        ];
        for (f, n) in cases {
            let rs = RootSystem::new(f);
            assert_eq!(rs.positive.len(), n, "{f:?}");
            assert_eq!(f.dim(), f.rank + 2 * n);
        }
    }

    #[test]
    fn dimensions_of_standard_modules() {
        let one = |f: SimpleFactor, i: usize| {
            let mut w = vec![0; f.rank];
            w[i] = 1;
            weyl_dim(f, &w).unwrap()
        };
        assert_eq!(weyl_dim(SimpleFactor::a(4), &[0, 0, 0, 0]).unwrap(), 1.into());
        assert_eq!(one(SimpleFactor::c(2), 1), 5.into());
        assert_eq!(one(SimpleFactor::d(5), 4), 16.into());
        assert_eq!(one(SimpleFactor::b(3), 2), 8.into());
        assert_eq!(one(SimpleFactor::g2(), 0), 7.into());
        assert_eq!(one(SimpleFactor::g2(), 1), 14.into());
        assert_eq!(one(SimpleFactor::new(Series::E, 6).unwrap(), 0), 27.into());
        assert_eq!(one(SimpleFactor::new(Series::E, 7).unwrap(), 6), 56.into());
        assert_eq!(one(SimpleFactor::new(Series::F, 4).unwrap(), 3), 26.into());
    }

    #[test]
    fn names_round_trip() {
        for s in ["sl(4)", "so(7)", "so(10)", "sp(6)", "g2"] {
            let f: SimpleFactor = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("so(6)".parse::<SimpleFactor>().is_err());
    }
}
