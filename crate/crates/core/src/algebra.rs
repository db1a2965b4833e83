//! Semisimple algebras, module expressions and triples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lie::{weyl_dim, Series, SimpleFactor};

/// Formal direct sum of simple factors plus a toral part of rank `toral_rank`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SemisimpleAlgebra {
    pub factors: Vec<SimpleFactor>,
    pub toral_rank: usize,
}

impl SemisimpleAlgebra {
    pub fn new(factors: Vec<SimpleFactor>) -> Self {
        SemisimpleAlgebra {
            factors,
            toral_rank: 0,
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).sum::<usize>() + self.toral_rank
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum::<usize>() + self.toral_rank
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty() && self.toral_rank == 0
    }

    pub fn is_realizable(&self) -> bool {
        self.factors.iter().all(|f| f.is_realizable())
    }

    pub fn max_rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).max().unwrap_or(0)
    }
}

impl fmt::Display for SemisimpleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() && self.toral_rank == 0 {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        if self.toral_rank > 0 {
            parts.push(format!("t{}", self.toral_rank));
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Irreducible module of a semisimple algebra: one highest weight per factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Irrep {
    pub weights: Vec<Vec<i64>>,
}

impl Irrep {
    pub fn trivial(alg: &SemisimpleAlgebra) -> Self {
        Irrep {
            weights: alg.factors.iter().map(|f| vec![0; f.rank]).collect(),
        }
    }

    /// Fundamental module `omega_i` (1-based) of factor `j`, trivial elsewhere.
    pub fn fundamental(alg: &SemisimpleAlgebra, j: usize, i: usize) -> Self {
        let mut r = Self::trivial(alg);
        r.weights[j][i - 1] = 1;
        r
    }

    pub fn is_trivial(&self) -> bool {
        self.weights.iter().all(|w| w.iter().all(|&x| x == 0))
    }

    /// Factors acting non-trivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|&j| self.weights[j].iter().any(|&x| x != 0))
            .collect()
    }

    pub fn dim(&self, alg: &SemisimpleAlgebra) -> usize {
        let mut d = 1usize;
        for (f, w) in alg.factors.iter().zip(&self.weights) {
            let x = weyl_dim(*f, w).expect("valid weight");
            d *= usize::try_from(x).expect("dimension fits");
        }
        d
    }

    pub fn validate(&self, alg: &SemisimpleAlgebra) -> Result<(), Error> {
        if self.weights.len() != alg.factors.len() {
            return Err(Error::Arity {
                index: self.weights.len(),
                count: alg.factors.len(),
            });
        }
        for (f, w) in alg.factors.iter().zip(&self.weights) {
            if w.len() != f.rank {
                return Err(Error::RankMismatch {
                    expected: f.rank,
                    found: w.len(),
                });
            }
            if w.iter().any(|&x| x < 0) {
                return Err(Error::NotDominant(w.clone()));
            }
        }
        Ok(())
    }

    /// Contragredient module.
    pub fn dual(&self, alg: &SemisimpleAlgebra) -> Self {
        Irrep {
            weights: alg
                .factors
                .iter()
                .zip(&self.weights)
                .map(|(f, w)| dual_weight(*f, w))
                .collect(),
        }
    }

    /// Text form with the given factor prime offsets, e.g. `w1 w1'`; `1` if trivial.
    pub fn label(&self) -> String {
        let mut terms = Vec::new();
        for (j, w) in self.weights.iter().enumerate() {
            for (i, &k) in w.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let mut t = format!("w{}", i + 1);
                if k > 1 {
                    t.push_str(&format!("^{k}"));
                }
                t.push_str(&"'".repeat(j));
                terms.push(t);
            }
        }
        if terms.is_empty() {
            "1".into()
        } else {
            terms.join(" ")
        }
    }
}

/// Highest weight of the dual module of a simple factor.
pub fn dual_weight(f: SimpleFactor, w: &[i64]) -> Vec<i64> {
    let n = f.rank;
    match f.series {
        Series::A => w.iter().rev().cloned().collect(),
        Series::D if n % 2 == 1 => {
            let mut v = w.to_vec();
            v.swap(n - 2, n - 1);
            v
        }
        Series::E if n == 6 => vec![w[5], w[1], w[4], w[3], w[2], w[0]],
        _ => w.to_vec(),
    }
}

/// A module given as a direct sum of irreducibles; each summand carries its own
/// scalar grading, so the full toral part `z` has one coordinate per summand.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModuleExpr {
    pub summands: Vec<Irrep>,
}

impl ModuleExpr {
    pub fn new(summands: Vec<Irrep>) -> Self {
        ModuleExpr { summands }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn dim(&self, alg: &SemisimpleAlgebra) -> usize {
        self.summands.iter().map(|s| s.dim(alg)).sum()
    }

    pub fn validate(&self, alg: &SemisimpleAlgebra) -> Result<(), Error> {
        self.summands.iter().try_for_each(|s| s.validate(alg))
    }

    pub fn label(&self) -> String {
        if self.summands.is_empty() {
            "0".into()
        } else {
            self.summands.iter().map(|s| s.label()).collect::<Vec<_>>().join(" + ")
        }
    }
}

/// Regular subalgebras of the exceptional algebra `G2` available as embeddings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum G2Sub {
    /// The long-root `sl(3)`.
    A2,
    /// Highest-root `sl(2)` followed by the orthogonal short-root `sl(2)`.
    A1A1,
}

/// How one simple factor of `g` restricts to `h`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Restriction {
    /// The defining module of the `g`-factor restricted to `h`, as a sum of `h`-irreducibles.
    Module(Vec<Irrep>),
    /// A regular subalgebra of `G2`, acting through the listed `h`-factors in order.
    G2Regular(G2Sub, Vec<usize>),
}

impl Restriction {
    /// `h`-factors acting non-trivially on this `g`-factor.
    pub fn support(&self) -> Vec<usize> {
        match self {
            Restriction::Module(pieces) => {
                let mut s: Vec<usize> = pieces.iter().flat_map(|p| p.support()).collect();
                s.sort();
                s.dedup();
                s
            }
            Restriction::G2Regular(_, f) => {
                let mut s = f.clone();
                s.sort();
                s
            }
        }
    }

    pub fn is_identity_of(&self, j: usize, nh: usize) -> bool {
        match self {
            Restriction::Module(p) => {
                p.len() == 1 && p[0].support() == vec![j] && {
                    let w = &p[0].weights[j];
                    w[0] == 1 && w[1..].iter().all(|&x| x == 0)
                } && nh > j
            }
            _ => false,
        }
    }
}

/// A triple `(g, h, V)`: `h` embedded in `g` through one restriction per `g`-factor, and
/// an `h`-module `V`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub g: SemisimpleAlgebra,
    pub h: SemisimpleAlgebra,
    pub embedding: Vec<Restriction>,
    pub v: ModuleExpr,
}

impl Triple {
    pub fn new(
        g: SemisimpleAlgebra,
        h: SemisimpleAlgebra,
        embedding: Vec<Restriction>,
        v: ModuleExpr,
    ) -> Result<Self, Error> {
        let t = Triple { g, h, embedding, v };
        t.validate()?;
        Ok(t)
    }

    /// The triple `(h, h, V)` with `h` embedded identically.
    pub fn fiber(h: SemisimpleAlgebra, v: ModuleExpr) -> Self {
        let embedding = (0..h.factors.len())
            .map(|j| Restriction::Module(vec![Irrep::fundamental(&h, j, 1)]))
            .collect();
        Triple {
            g: h.clone(),
            h,
            embedding,
            v,
        }
    }

    /// The pair `(g, h)`, i.e. the triple with `V = 0`.
    pub fn pair(&self) -> Triple {
        Triple {
            v: ModuleExpr::zero(),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.embedding.len() != self.g.factors.len() {
            return Err(Error::IncompatibleSpec(format!(
                "{} restrictions for {} factors of g",
                self.embedding.len(),
                self.g.factors.len()
            )));
        }
        self.v.validate(&self.h)?;
        let mut covered = vec![false; self.h.factors.len()];
        for (gf, r) in self.g.factors.iter().zip(&self.embedding) {
            match r {
                Restriction::Module(pieces) => {
                    let mut d = 0;
                    for p in pieces {
                        p.validate(&self.h)?;
                        d += p.dim(&self.h);
                    }
                    if d != gf.defining_dim() {
                        return Err(Error::IncompatibleSpec(format!(
                            "restriction of {gf} has dimension {d}, expected {}",
                            gf.defining_dim()
                        )));
                    }
                }
                Restriction::G2Regular(sub, fs) => {
                    let want: Vec<SimpleFactor> = match sub {
                        G2Sub::A2 => vec![SimpleFactor::a(2)],
                        G2Sub::A1A1 => vec![SimpleFactor::a(1), SimpleFactor::a(1)],
                    };
                    let got: Vec<SimpleFactor> = fs
                        .iter()
                        .map(|&j| self.h.factors.get(j).copied())
                        .collect::<Option<_>>()
                        .ok_or(Error::Arity {
                            index: fs.iter().max().copied().unwrap_or(0),
                            count: self.h.factors.len(),
                        })?;
                    if gf.series != Series::G || got != want {
                        return Err(Error::IncompatibleSpec(format!("{sub:?} inside {gf}")));
                    }
                }
            }
            for j in r.support() {
                covered[j] = true;
            }
        }
        if let Some(j) = covered.iter().position(|c| !c) {
            return Err(Error::IncompatibleSpec(format!(
                "factor {} of h is not embedded",
                self.h.factors[j]
            )));
        }
        Ok(())
    }

    /// Whether `g = h` with the identity embedding.
    pub fn is_fiber_only(&self) -> bool {
        self.g.factors == self.h.factors
            && self
                .embedding
                .iter()
                .enumerate()
                .all(|(j, r)| r.is_identity_of(j, self.h.factors.len()))
    }

    pub fn max_rank(&self) -> usize {
        self.g.max_rank().max(self.h.max_rank())
    }

    pub fn is_realizable(&self) -> bool {
        self.g.is_realizable() && self.h.is_realizable()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irrep_dimensions_and_duals() {
        let alg = SemisimpleAlgebra::new(vec![SimpleFactor::a(3), SimpleFactor::c(2)]);
        let r = Irrep {
            weights: vec![vec![0, 1, 0], vec![1, 0]],
        };
        assert_eq!(r.dim(&alg), 24);
        assert_eq!(r.label(), "w2 w1'");
        let w = Irrep {
            weights: vec![vec![1, 0, 0], vec![0, 0]],
        };
        assert_eq!(w.dual(&alg).weights[0], vec![0, 0, 1]);
    }

    #[test]
    fn fiber_triple_validates() {
        let h = SemisimpleAlgebra::new(vec![SimpleFactor::a(2)]);
        let v = ModuleExpr::new(vec![Irrep::fundamental(&h, 0, 1)]);
        let t = Triple::fiber(h, v);
        assert!(t.validate().is_ok());
        assert!(t.is_fiber_only());
    }
}
