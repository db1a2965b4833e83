//! Weight multiplicities, tensor products and symmetric powers.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Irrep, ModuleExpr, SemisimpleAlgebra};
use crate::error::Error;
use crate::lie::{RootSystem, SimpleFactor};

/// Sparse weight multiset.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    pub mult: BTreeMap<Vec<i64>, BigInt>,
}

impl Character {
    pub fn single(w: Vec<i64>) -> Self {
        let mut mult = BTreeMap::new();
        mult.insert(w, BigInt::one());
        Character { mult }
    }

    pub fn mass(&self) -> BigInt {
        self.mult.values().sum()
    }

    pub fn add_scaled(&mut self, other: &Character, k: &BigInt) {
        for (w, m) in &other.mult {
            let e = self.mult.entry(w.clone()).or_insert_with(BigInt::zero);
            *e += m * k;
            if e.is_zero() {
                self.mult.remove(w);
            }
        }
    }

    pub fn product(&self, other: &Character) -> Character {
        let mut out: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (a, ma) in &self.mult {
            for (b, mb) in &other.mult {
                let w: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *out.entry(w).or_insert_with(BigInt::zero) += ma * mb;
            }
        }
        out.retain(|_, m| !m.is_zero());
        Character { mult: out }
    }

    /// Adams operation: every weight multiplied by `k`.
    pub fn adams(&self, k: i64) -> Character {
        Character {
            mult: self
                .mult
                .iter()
                .map(|(w, m)| (w.iter().map(|x| x * k).collect(), m.clone()))
                .collect(),
        }
    }

    pub fn get(&self, w: &[i64]) -> BigInt {
        self.mult.get(w).cloned().unwrap_or_default()
    }
}

/// Multiplicities of the dominant weights of the irreducible module with highest weight `hw`.
pub fn dominant_character(rs: &RootSystem, hw: &[i64]) -> BTreeMap<Vec<i64>, BigInt> {
    let n = rs.rank();
    let lr: Vec<i64> = hw.iter().map(|x| x + 1).collect();
    let norm_lr = rs.inner(&lr, &lr);
    // Dominant weights below hw, found by subtracting positive roots.
    let mut levels: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![hw.to_vec()];
    seen.insert(hw.to_vec());
    while let Some(mu) = stack.pop() {
        for a in &rs.positive_w {
            let nu: Vec<i64> = mu.iter().zip(a).map(|(x, y)| x - y).collect();
            let d = rs.dominant(&nu);
            if seen.contains(&d) {
                continue;
            }
            // d must lie below hw: hw - d is a non-negative combination of simple roots.
            if !below(rs, hw, &d) {
                continue;
            }
            seen.insert(d.clone());
            stack.push(d);
        }
    }
    for mu in seen {
        let depth = depth(rs, hw, &mu);
        levels.entry(depth).or_default().push(mu);
    }
    let mut mult: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    for (_, ws) in levels {
        for mu in ws {
            if mu == hw {
                mult.insert(mu, BigInt::one());
                continue;
            }
            let mr: Vec<i64> = mu.iter().map(|x| x + 1).collect();
            let denom = norm_lr - rs.inner(&mr, &mr);
            let mut num = BigInt::zero();
            for a in &rs.positive_w {
                let mut k = 1;
                loop {
                    let nu: Vec<i64> = (0..n).map(|i| mu[i] + k * a[i]).collect();
                    let d = rs.dominant(&nu);
                    let Some(m) = mult.get(&d) else {
                        if !below(rs, hw, &d) {
                            break;
                        }
                        k += 1;
                        continue;
                    };
                    num += m * BigInt::from(rs.inner(&nu, a));
                    k += 1;
                }
            }
            num *= 2;
            assert!(denom > 0);
            let (q, r) = num.div_rem(&BigInt::from(denom));
            assert!(r.is_zero(), "Freudenthal recursion produced a fraction");
            if q.is_positive() {
                mult.insert(mu, q);
            }
        }
    }
    mult
}

/// `hw - mu` expressed in simple roots, if it lies in the root lattice.
fn root_coords(rs: &RootSystem, hw: &[i64], mu: &[i64]) -> Option<Vec<i64>> {
    let diff: Vec<i64> = hw.iter().zip(mu).map(|(a, b)| a - b).collect();
    rs.root_coords(&diff)
}

fn below(rs: &RootSystem, hw: &[i64], mu: &[i64]) -> bool {
    root_coords(rs, hw, mu).is_some_and(|c| c.iter().all(|&x| x >= 0))
}

fn depth(rs: &RootSystem, hw: &[i64], mu: &[i64]) -> i64 {
    root_coords(rs, hw, mu).map(|c| c.iter().sum()).unwrap_or(i64::MAX)
}

type CacheKey = (SimpleFactor, Vec<i64>);

fn cache() -> &'static Mutex<BTreeMap<CacheKey, Arc<Character>>> {
    static C: OnceLock<Mutex<BTreeMap<CacheKey, Arc<Character>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(BTreeMap::new()))
}

fn root_system(f: SimpleFactor) -> Arc<RootSystem> {
    static C: OnceLock<Mutex<BTreeMap<SimpleFactor, Arc<RootSystem>>>> = OnceLock::new();
    let m = C.get_or_init(|| Mutex::new(BTreeMap::new()));
    m.lock()
        .unwrap()
        .entry(f)
        .or_insert_with(|| Arc::new(RootSystem::new(f)))
        .clone()
}

/// Cached root system of a factor.
pub fn roots(f: SimpleFactor) -> Arc<RootSystem> {
    root_system(f)
}

/// Full weight multiset of an irreducible module.
pub fn character(f: SimpleFactor, hw: &[i64]) -> Result<Arc<Character>, Error> {
    if hw.len() != f.rank {
        return Err(Error::RankMismatch {
            expected: f.rank,
            found: hw.len(),
        });
    }
    if hw.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant(hw.to_vec()));
    }
    let key = (f, hw.to_vec());
    if let Some(c) = cache().lock().unwrap().get(&key) {
        return Ok(c.clone());
    }
    let rs = root_system(f);
    let dom = dominant_character(&rs, hw);
    let mut mult = BTreeMap::new();
    for (mu, m) in dom {
        for w in rs.orbit(&mu) {
            mult.insert(w, m.clone());
        }
    }
    let c = Arc::new(Character { mult });
    cache().lock().unwrap().insert(key, c.clone());
    Ok(c)
}

/// Decomposition of `hw1 (x) hw2` by the Brauer-Klimyk rule.
pub fn tensor_decompose(
    f: SimpleFactor,
    hw1: &[i64],
    hw2: &[i64],
) -> Result<BTreeMap<Vec<i64>, BigInt>, Error> {
    let rs = root_system(f);
    let ch = character(f, hw2)?;
    if hw1.len() != f.rank || hw1.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant(hw1.to_vec()));
    }
    let mut out: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    for (nu, m) in &ch.mult {
        let s: Vec<i64> = hw1.iter().zip(nu).map(|(a, b)| a + b).collect();
        if let Some((d, sign)) = rs.dot_dominant(&s) {
            *out.entry(d).or_insert_with(BigInt::zero) += m * BigInt::from(sign);
        }
    }
    out.retain(|_, m| !m.is_zero());
    assert!(out.values().all(|m| m.is_positive()));
    Ok(out)
}

/// Character of `V` over `alg + z`: weight coordinates of all factors concatenated,
/// followed by one grading coordinate per summand of `V`.
pub fn module_character(alg: &SemisimpleAlgebra, v: &ModuleExpr) -> Result<Character, Error> {
    let k = v.summands.len();
    let mut total = Character::default();
    for (s, irr) in v.summands.iter().enumerate() {
        let mut c = irrep_character(alg, irr)?;
        c = Character {
            mult: c
                .mult
                .into_iter()
                .map(|(mut w, m)| {
                    w.extend((0..k).map(|t| i64::from(t == s)));
                    (w, m)
                })
                .collect(),
        };
        total.add_scaled(&c, &BigInt::one());
    }
    Ok(total)
}

/// Character of an irreducible module of a semisimple algebra (no grading coordinates).
pub fn irrep_character(alg: &SemisimpleAlgebra, irr: &Irrep) -> Result<Character, Error> {
    irr.validate(alg)?;
    let mut c = Character::single(Vec::new());
    for (f, w) in alg.factors.iter().zip(&irr.weights) {
        let fc = character(*f, w)?;
        let mut out = BTreeMap::new();
        for (a, ma) in &c.mult {
            for (b, mb) in &fc.mult {
                let mut x = a.clone();
                x.extend(b.iter().cloned());
                out.insert(x, ma * mb);
            }
        }
        c = Character { mult: out };
    }
    Ok(c)
}

/// One irreducible constituent of a graded module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradedComponent {
    pub highest_weight: Irrep,
    pub toral: Vec<i64>,
    pub multiplicity: BigInt,
}

/// Decomposition of `Sym^d(V)` into irreducibles of `alg + z`, each tagged with its
/// multi-degree toral character.
pub fn sym_power_decompose(
    alg: &SemisimpleAlgebra,
    v: &ModuleExpr,
    d: usize,
) -> Result<Vec<GradedComponent>, Error> {
    let ch = sym_power_character(alg, v, d)?;
    decompose_graded(alg, &ch, v.summands.len())
}

/// Character of `Sym^d(V)` by Newton's identity `d h_d = sum_k psi^k(V) h_{d-k}`.
pub fn sym_power_character(alg: &SemisimpleAlgebra, v: &ModuleExpr, d: usize) -> Result<Character, Error> {
    let base = module_character(alg, v)?;
    let width = alg.rank() - alg.toral_rank + v.summands.len();
    let mut h: Vec<Character> = vec![Character::single(vec![0; width])];
    let adams: Vec<Character> = (1..=d as i64).map(|k| base.adams(k)).collect();
    for n in 1..=d {
        let mut acc = Character::default();
        for k in 1..=n {
            acc.add_scaled(&adams[k - 1].product(&h[n - k]), &BigInt::one());
        }
        let nn = BigInt::from(n);
        for m in acc.mult.values_mut() {
            let (q, r) = m.div_rem(&nn);
            assert!(r.is_zero());
            *m = q;
        }
        h.push(acc);
    }
    Ok(h.swap_remove(d))
}

/// Splits a character of `alg + z` (with `k` grading coordinates) into irreducibles by
/// repeatedly removing the character of a highest weight.
pub fn decompose_graded(
    alg: &SemisimpleAlgebra,
    ch: &Character,
    k: usize,
) -> Result<Vec<GradedComponent>, Error> {
    let ranks: Vec<usize> = alg.factors.iter().map(|f| f.rank).collect();
    let ss: usize = ranks.iter().sum();
    let systems: Vec<Arc<RootSystem>> = alg.factors.iter().map(|f| root_system(*f)).collect();
    // Restrict to dominant weights; dominant characters determine the decomposition.
    let is_dom = |w: &[i64]| w[..ss].iter().all(|&x| x >= 0);
    let mut rest: BTreeMap<Vec<i64>, BigInt> = ch
        .mult
        .iter()
        .filter(|(w, _)| is_dom(w))
        .map(|(w, m)| (w.clone(), m.clone()))
        .collect();
    let height = |w: &[i64]| -> i64 {
        let mut off = 0;
        let mut h = 0;
        for rs in &systems {
            let r = rs.rank();
            h += rs.inner(&w[off..off + r], &rs.rho());
            off += r;
        }
        h
    };
    let mut out = Vec::new();
    while let Some(top) = rest
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .max_by(|a, b| height(a.0).cmp(&height(b.0)).then_with(|| b.0.cmp(a.0)))
        .map(|(w, m)| (w.clone(), m.clone()))
    {
        let (w, m) = top;
        if m.is_negative() {
            return Err(Error::Invalid("character is not effective".into()));
        }
        let mut weights = Vec::new();
        let mut off = 0;
        for r in &ranks {
            weights.push(w[off..off + r].to_vec());
            off += r;
        }
        let irr = Irrep { weights };
        let toral = w[ss..].to_vec();
        // Subtract m times the dominant part of the irreducible character.
        let mut dom = vec![(Vec::new(), BigInt::one())];
        for (f, hw) in alg.factors.iter().zip(&irr.weights) {
            let dc = dominant_character(&root_system(*f), hw);
            let mut next = Vec::new();
            for (a, ma) in &dom {
                for (b, mb) in &dc {
                    let mut x: Vec<i64> = a.clone();
                    x.extend(b.iter().cloned());
                    next.push((x, ma * mb));
                }
            }
            dom = next;
        }
        for (mut x, mx) in dom {
            x.extend(toral.iter().cloned());
            let e = rest.entry(x.clone()).or_insert_with(BigInt::zero);
            *e -= &m * mx;
            if e.is_zero() {
                rest.remove(&x);
            }
        }
        out.push(GradedComponent {
            highest_weight: irr,
            toral,
            multiplicity: m,
        });
    }
    debug_assert!(out.iter().all(|c| c.toral.len() == k));
    out.sort();
    Ok(out)
}

/// Binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Dimension of an irreducible module as a machine integer.
pub fn irrep_dim(alg: &SemisimpleAlgebra, irr: &Irrep) -> usize {
    irr.dim(alg)
}

/// Number of weights, with multiplicity, in a character; panics on overflow.
pub fn mass_usize(c: &Character) -> usize {
    c.mass().to_usize().expect("mass fits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::weyl_dim;

    #[test]
    fn sl2_defining() {
        let c = character(SimpleFactor::a(1), &[1]).unwrap();
        assert_eq!(c.mult.len(), 2);
        assert_eq!(c.get(&[1]), BigInt::one());
        assert_eq!(c.get(&[-1]), BigInt::one());
    }

    #[test]
    fn g2_seven_dimensional() {
        let c = character(SimpleFactor::g2(), &[1, 0]).unwrap();
        assert_eq!(c.mult.len(), 7);
        assert_eq!(c.mass(), 7.into());
        assert_eq!(c.get(&[0, 0]), BigInt::one());
    }

    #[test]
    fn b3_spin_weights() {
        let c = character(SimpleFactor::b(3), &[0, 0, 1]).unwrap();
        assert_eq!(c.mult.len(), 8);
        assert!(c.mult.values().all(|m| m.is_one()));
    }

    #[test]
    fn adjoint_zero_weight_is_rank() {
        let c = character(SimpleFactor::d(4), &[0, 1, 0, 0]).unwrap();
        assert_eq!(c.get(&[0, 0, 0, 0]), 4.into());
        assert_eq!(c.mass(), 28.into());
        let e = character(SimpleFactor::g2(), &[0, 1]).unwrap();
        assert_eq!(e.get(&[0, 0]), 2.into());
    }

    #[test]
    fn tensor_examples() {
        let t = tensor_decompose(SimpleFactor::a(2), &[1, 0], &[0, 1]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[&vec![1, 1]], BigInt::one());
        assert_eq!(t[&vec![0, 0]], BigInt::one());
        let t = tensor_decompose(SimpleFactor::c(2), &[1, 0], &[1, 0]).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.contains_key(&vec![2, 0]) && t.contains_key(&vec![0, 1]) && t.contains_key(&vec![0, 0]));
        let mass: BigInt = t
            .iter()
            .map(|(w, m)| weyl_dim(SimpleFactor::c(2), w).unwrap() * m)
            .sum();
        assert_eq!(mass, 16.into());
    }

    #[test]
    fn symmetric_square_of_two_doublets() {
        let alg = SemisimpleAlgebra::new(vec![SimpleFactor::a(1)]);
        let w1 = Irrep::fundamental(&alg, 0, 1);
        let v = ModuleExpr::new(vec![w1.clone(), w1]);
        let comps = sym_power_decompose(&alg, &v, 2).unwrap();
        let twos: Vec<&GradedComponent> = comps.iter().filter(|c| c.highest_weight.weights[0] == vec![2]).collect();
        assert_eq!(twos.len(), 3);
        let mut degs: Vec<Vec<i64>> = twos.iter().map(|c| c.toral.clone()).collect();
        degs.sort();
        assert_eq!(degs, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let triv: Vec<&GradedComponent> = comps.iter().filter(|c| c.highest_weight.is_trivial()).collect();
        assert_eq!(triv.len(), 1);
        assert_eq!(triv[0].toral, vec![1, 1]);
        assert!(comps.iter().all(|c| c.multiplicity.is_one()));
    }

    #[test]
    fn sym_square_of_c3_is_irreducible() {
        let alg = SemisimpleAlgebra::new(vec![SimpleFactor::a(2)]);
        let v = ModuleExpr::new(vec![Irrep::fundamental(&alg, 0, 1)]);
        let comps = sym_power_decompose(&alg, &v, 2).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].highest_weight.weights[0], vec![2, 0]);
        assert_eq!(comps[0].toral, vec![2]);
        let zero = sym_power_decompose(&alg, &v, 0).unwrap();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].highest_weight.is_trivial());
    }
}
