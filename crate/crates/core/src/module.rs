//! Explicit matrices for irreducible modules.
//!
//! Fundamental modules come from exterior powers of the defining module and from
//! fermionic Fock spaces (spin modules); every other irreducible module is the Cartan
//! component generated by a highest weight vector inside a tensor product of these.
//! Actions are listed per basis element of the factor realization.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{Irrep, SemisimpleAlgebra};
use crate::error::Error;
use crate::field::{Field, Q};
use crate::lie::{weyl_dim, Series, SimpleFactor};
use crate::matrix::{Matrix, Subspace};
use crate::realize::{realize_factor, realize_factor_in, word_expansion, FactorRealization};

/// A module of one simple factor with a chosen highest weight vector.
#[derive(Clone, Debug)]
pub struct FactorModule {
    pub action: Vec<Matrix<Q>>,
    pub highest: Vec<Q>,
}

impl FactorModule {
    pub fn dim(&self) -> usize {
        self.highest.len()
    }

    fn tensor(&self, other: &FactorModule) -> FactorModule {
        let (a, b) = (self.dim(), other.dim());
        let ia = Matrix::identity(a);
        let ib = Matrix::identity(b);
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| x.kron(&ib).add(&ia.kron(y)))
            .collect();
        let mut highest = Vec::with_capacity(a * b);
        for x in &self.highest {
            for y in &other.highest {
                highest.push(x * y);
            }
        }
        FactorModule { action, highest }
    }
}

/// The submodule generated from `v` by the lowering operators, with action matrices in
/// an echelon basis of it. `v` is mapped to the new basis as well.
pub fn cartan_component(real: &FactorRealization<Q>, m: &FactorModule) -> FactorModule {
    let n = m.dim();
    let lowering: Vec<&Matrix<Q>> = (0..real.rank()).map(|i| &m.action[real.f_index(i)]).collect();
    let mut sub = Subspace::zero(n);
    let mut queue = vec![m.highest.clone()];
    sub.insert(&m.highest);
    while let Some(v) = queue.pop() {
        for f in &lowering {
            let w = f.apply(&v);
            if sub.insert(&w) {
                queue.push(w);
            }
        }
    }
    let basis = sub.basis().to_vec();
    let action = m
        .action
        .iter()
        .map(|x| {
            let cols: Vec<Vec<Q>> = basis
                .iter()
                .map(|b| sub.coordinates(&x.apply(b)).expect("submodule is stable"))
                .collect();
            Matrix::from_columns(&cols, basis.len())
        })
        .collect();
    let highest = sub.coordinates(&m.highest).unwrap();
    FactorModule { action, highest }
}

/// `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Induced action on the `k`-th exterior power.
pub fn exterior_power<F: Field>(x: &Matrix<F>, k: usize) -> Matrix<F> {
    let n = x.rows();
    let sets = subsets(n, k);
    let index: HashMap<&[usize], usize> = sets.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mut out: Matrix<F> = Matrix::zeros(sets.len(), sets.len());
    for (col, s) in sets.iter().enumerate() {
        for (p, &i) in s.iter().enumerate() {
            for j in 0..n {
                let c = x.get(j, i);
                if c.is_zero() || (j != i && s.contains(&j)) {
                    continue;
                }
                let mut t: Vec<usize> = s.clone();
                t.remove(p);
                let between = t.iter().filter(|&&y| (y > i.min(j)) && (y < i.max(j))).count();
                let pos = t.partition_point(|&y| y < j);
                t.insert(pos, j);
                let row = index[t.as_slice()];
                let val = if between % 2 == 1 { c.neg() } else { c.clone() };
                let cur = out.get(row, col).add(&val);
                out.set(row, col, cur);
            }
        }
    }
    out
}

fn exterior_module(real: &FactorRealization<Q>, k: usize) -> FactorModule {
    let action: Vec<Matrix<Q>> = real.basis.iter().map(|x| exterior_power(x, k)).collect();
    let mut highest = vec![Q::zero(); action[0].rows()];
    highest[0] = Q::one();
    FactorModule { action, highest }
}

/// Creation operator `a_i^dagger` on the Fock space of `n` modes.
fn creation(n: usize, i: usize) -> Matrix<Q> {
    let d = 1usize << n;
    let mut m = Matrix::zeros(d, d);
    for s in 0..d {
        if s >> i & 1 == 0 {
            let sign = if (s & ((1 << i) - 1)).count_ones() % 2 == 1 { -1 } else { 1 };
            m.set(s | 1 << i, s, Q::from_i64(sign));
        }
    }
    m
}

/// Spin module of `so(2n+1)` or the full (reducible) spin module of `so(2n)`, with the
/// highest weight vector of weight `omega_n`.
fn spin_module(real: &FactorRealization<Q>) -> Result<FactorModule, Error> {
    let f = real.factor;
    let n = f.rank;
    let cr: Vec<Matrix<Q>> = (0..n).map(|i| creation(n, i)).collect();
    let an: Vec<Matrix<Q>> = cr.iter().map(|m| m.transpose()).collect();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    for i in 0..n - 1 {
        es.push(cr[i].mul(&an[i + 1]));
        fs.push(cr[i + 1].mul(&an[i]));
    }
    match f.series {
        Series::B => {
            es.push(cr[n - 1].clone());
            fs.push(an[n - 1].clone());
        }
        Series::D => {
            es.push(cr[n - 2].mul(&cr[n - 1]));
            fs.push(an[n - 1].mul(&an[n - 2]));
        }
        _ => return Err(Error::UnsupportedModule(format!("spin module of {f}"))),
    }
    let mut gens = es;
    gens.extend(fs);
    let action = word_expansion(f)?.extend(&gens);
    let mut highest = vec![Q::zero(); 1 << n];
    highest[(1 << n) - 1] = Q::one();
    Ok(FactorModule { action, highest })
}

fn fundamental_module(real: &FactorRealization<Q>, j: usize) -> Result<FactorModule, Error> {
    let f = real.factor;
    let n = f.rank;
    let m = match f.series {
        Series::A => exterior_module(real, j + 1),
        Series::B if j + 1 < n => exterior_module(real, j + 1),
        Series::B => spin_module(real)?,
        Series::C => cartan_component(real, &exterior_module(real, j + 1)),
        Series::D if j + 2 < n => exterior_module(real, j + 1),
        Series::D => {
            let mut s = spin_module(real)?;
            if j + 2 == n {
                // |1..10> has weight omega_{n-1}.
                let idx = (1usize << (n - 1)) - 1;
                s.highest = vec![Q::zero(); 1 << n];
                s.highest[idx] = Q::one();
            }
            cartan_component(real, &s)
        }
        Series::G if j == 0 => exterior_module(real, 1),
        Series::G => cartan_component(real, &exterior_module(real, 2)),
        _ => return Err(Error::UnsupportedExceptional(f.to_string())),
    };
    Ok(m)
}

/// Irreducible module of a simple factor with highest weight `hw` (cached).
pub fn factor_irrep(f: SimpleFactor, hw: &[i64]) -> Result<Arc<FactorModule>, Error> {
    type Cache = Mutex<BTreeMap<(SimpleFactor, Vec<i64>), Arc<FactorModule>>>;
    static C: OnceLock<Cache> = OnceLock::new();
    let cache = C.get_or_init(|| Mutex::new(BTreeMap::new()));
    let key = (f, hw.to_vec());
    if let Some(m) = cache.lock().unwrap().get(&key) {
        return Ok(m.clone());
    }
    if hw.len() != f.rank {
        return Err(Error::RankMismatch { expected: f.rank, found: hw.len() });
    }
    if hw.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant(hw.to_vec()));
    }
    let real = realize_factor(f)?;
    let m = if hw.iter().all(|&x| x == 0) {
        FactorModule {
            action: vec![Matrix::zeros(1, 1); real.dim()],
            highest: vec![Q::one()],
        }
    } else {
        let mut acc: Option<FactorModule> = None;
        for (j, &a) in hw.iter().enumerate() {
            for _ in 0..a {
                let fm = fundamental_module(&real, j)?;
                acc = Some(match acc {
                    None => fm,
                    Some(prev) => cartan_component(&real, &prev.tensor(&fm)),
                });
            }
        }
        acc.unwrap()
    };
    let want = weyl_dim(f, hw)?;
    if num_bigint::BigInt::from(m.dim()) != want {
        return Err(Error::Invalid(format!("{f} module {hw:?} has dimension {}", m.dim())));
    }
    let m = Arc::new(m);
    cache.lock().unwrap().insert(key, m.clone());
    Ok(m)
}

/// Offsets of each factor's basis inside the basis of a semisimple algebra.
pub fn factor_offsets(alg: &SemisimpleAlgebra) -> Vec<usize> {
    let mut out = Vec::with_capacity(alg.factors.len() + 1);
    let mut o = 0;
    out.push(0);
    for f in &alg.factors {
        o += f.dim();
        out.push(o);
    }
    out
}

/// Action of every basis element of `alg` (factors in order, Chevalley bases) on the
/// external tensor product described by `irrep`.
pub fn irrep_action<F: Field>(alg: &SemisimpleAlgebra, irrep: &Irrep) -> Result<Vec<Matrix<F>>, Error> {
    if alg.toral_rank != 0 {
        return Err(Error::NotApplicable("modules of algebras with a toral part".into()));
    }
    irrep.validate(alg)?;
    let mods: Vec<Arc<FactorModule>> = alg
        .factors
        .iter()
        .zip(&irrep.weights)
        .map(|(f, w)| factor_irrep(*f, w))
        .collect::<Result<_, _>>()?;
    let dims: Vec<usize> = mods.iter().map(|m| m.dim()).collect();
    let mut out = Vec::with_capacity(alg.dim());
    for (j, m) in mods.iter().enumerate() {
        let before: usize = dims[..j].iter().product();
        let after: usize = dims[j + 1..].iter().product();
        let left = Matrix::<F>::identity(before);
        let right = Matrix::<F>::identity(after);
        for x in &m.action {
            let xf: Matrix<F> = x.to_field();
            let y = if before == 1 && after == 1 {
                xf
            } else {
                left.kron(&xf).kron(&right)
            };
            out.push(y);
        }
    }
    Ok(out)
}

/// Chevalley generators of every factor, as elements of the basis of `alg`: the index
/// lists of `e_i` and `f_i`.
pub fn generator_indices(alg: &SemisimpleAlgebra) -> Vec<usize> {
    let off = factor_offsets(alg);
    let mut out = Vec::new();
    for (j, f) in alg.factors.iter().enumerate() {
        let r = f.rank;
        let p = (f.dim() - r) / 2;
        for i in 0..r {
            out.push(off[j] + r + i);
            out.push(off[j] + r + p + i);
        }
    }
    out
}

/// Basis of `alg` as block-diagonal matrices on the sum of defining modules.
pub fn factor_realizations<F: Field>(alg: &SemisimpleAlgebra) -> Result<Vec<Arc<FactorRealization<F>>>, Error> {
    alg.factors.iter().map(|f| realize_factor_in::<F>(*f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    fn is_homomorphism(f: SimpleFactor, m: &FactorModule) -> bool {
        let real = realize_factor(f).unwrap();
        let k = real.dim();
        for a in 0..k.min(6) {
            for b in 0..k {
                let br = real.basis[a].bracket(&real.basis[b]);
                let c = real.coords(&br);
                let mut want = Matrix::zeros(m.dim(), m.dim());
                for (x, y) in c.iter().zip(&m.action) {
                    if !x.is_zero() {
                        want.add_scaled(x, y);
                    }
                }
                if m.action[a].bracket(&m.action[b]) != want {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn spin_modules() {
        for (f, hw, d) in [
            (SimpleFactor::b(3), vec![0, 0, 1], 8),
            (SimpleFactor::d(4), vec![0, 0, 0, 1], 8),
            (SimpleFactor::d(4), vec![0, 0, 1, 0], 8),
            (SimpleFactor::d(5), vec![0, 0, 0, 0, 1], 16),
        ] {
            let m = factor_irrep(f, &hw).unwrap();
            assert_eq!(m.dim(), d);
            assert!(is_homomorphism(f, &m), "{f} {hw:?}");
        }
    }

    #[test]
    fn highest_weights_match() {
        for (f, hw) in [
            (SimpleFactor::a(2), vec![2, 1]),
            (SimpleFactor::c(3), vec![0, 1, 0]),
            (SimpleFactor::g2(), vec![0, 1]),
            (SimpleFactor::d(4), vec![0, 0, 1, 0]),
            (SimpleFactor::b(2), vec![1, 1]),
        ] {
            let real = realize_factor(f).unwrap();
            let m = factor_irrep(f, &hw).unwrap();
            for i in 0..f.rank {
                let hv = m.action[i].apply(&m.highest);
                let want: Vec<Q> = m.highest.iter().map(|x| x * Q::from_i64(hw[i])).collect();
                assert_eq!(hv, want, "{f} {hw:?} h_{i}");
                assert!(m.action[real.rank() + i].apply(&m.highest).iter().all(|x| x.is_zero()));
            }
            assert!(is_homomorphism(f, &m));
        }
    }

    #[test]
    fn exterior_square_of_sl3_is_dual() {
        let m = factor_irrep(SimpleFactor::a(2), &[0, 1]).unwrap();
        assert_eq!(m.dim(), 3);
        assert!(is_homomorphism(SimpleFactor::a(2), &m));
    }

    #[test]
    fn external_tensor_actions_commute_across_factors() {
        let alg = SemisimpleAlgebra::new(vec![SimpleFactor::a(1), SimpleFactor::c(2)]);
        let ir = Irrep { weights: vec![vec![1], vec![1, 0]] };
        let act = irrep_action::<Fp>(&alg, &ir).unwrap();
        assert_eq!(act.len(), 3 + 10);
        assert!(act[1].bracket(&act[5]).is_zero());
        assert_eq!(act[0].rows(), 8);
    }
}
