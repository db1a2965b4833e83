//! Canonical representatives of isomorphism classes of triples.
//!
//! The group acting is generated by permutations of equal `h`-factors, diagram
//! automorphisms of each `h`-factor (applied to `V` and to every restriction at once),
//! and outer automorphisms of each `g`-factor (duality on `sl`, triality on `so(8)`).
//! The representative is the greatest element of the orbit in the derived order, after
//! sorting summands and restriction pieces (descending) and `g`-factors, so `w1` is
//! preferred to `w_{n-1}` and the vector module of `so(8)` to the spin modules.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{dual_weight, Irrep, Restriction, SemisimpleAlgebra, Triple};
use crate::character::{decompose_graded, irrep_character, Character};
use crate::error::Error;
use crate::lie::{Series, SimpleFactor};

/// Diagram automorphisms of a simple factor, as maps on highest weights.
fn automorphisms(f: SimpleFactor) -> Vec<Vec<usize>> {
    let n = f.rank;
    let id: Vec<usize> = (0..n).collect();
    match f.series {
        Series::A if n >= 2 => vec![id.clone(), id.iter().rev().cloned().collect()],
        Series::D if n == 4 => vec![
            vec![0, 1, 2, 3],
            vec![2, 1, 0, 3],
            vec![3, 1, 2, 0],
            vec![0, 1, 3, 2],
            vec![2, 1, 3, 0],
            vec![3, 1, 0, 2],
        ],
        Series::D => {
            let mut s = id.clone();
            s.swap(n - 2, n - 1);
            vec![id, s]
        }
        Series::E if n == 6 => vec![id, vec![5, 1, 4, 3, 2, 0]],
        _ => vec![id],
    }
}

fn permute_weight(w: &[i64], p: &[usize]) -> Vec<i64> {
    let mut out = vec![0; w.len()];
    for (i, &x) in w.iter().enumerate() {
        out[p[i]] = x;
    }
    out
}

/// Restriction of the `D4` module with highest weight `omega_{which+1}` (which = 0, 2, 3)
/// given the restriction `r` of the vector module.
fn triality_restriction(h: &SemisimpleAlgebra, r: &[Irrep], which: usize) -> Result<Vec<Irrep>, Error> {
    if which == 0 {
        return Ok(r.to_vec());
    }
    let mut pool: Vec<Vec<i64>> = Vec::new();
    for p in r {
        for (w, m) in &irrep_character(h, p)?.mult {
            let m: usize = m.try_into().map_err(|_| Error::Invalid("multiplicity".into()))?;
            pool.extend(std::iter::repeat(w.clone()).take(m));
        }
    }
    pool.sort();
    let mut mus = Vec::new();
    while let Some(w) = pool.pop() {
        let neg: Vec<i64> = w.iter().map(|x| -x).collect();
        let k = pool
            .iter()
            .position(|x| *x == neg)
            .ok_or_else(|| Error::IncompatibleSpec("restriction to so(8) is not orthogonal".into()))?;
        pool.remove(k);
        mus.push(w);
    }
    if mus.len() != 4 {
        return Err(Error::IncompatibleSpec("so(8) restriction must have dimension 8".into()));
    }
    let width = mus[0].len();
    let mut ch = Character::default();
    for signs in 0..16u32 {
        let minus = signs.count_ones() as usize;
        if (minus % 2 == 0) != (which == 3) {
            continue;
        }
        let mut s = vec![0i64; width];
        for (i, mu) in mus.iter().enumerate() {
            let sg = if signs >> i & 1 == 1 { -1 } else { 1 };
            for (a, b) in s.iter_mut().zip(mu) {
                *a += sg * b;
            }
        }
        if s.iter().any(|x| x % 2 != 0) {
            return Err(Error::IncompatibleSpec("spin weights are not integral".into()));
        }
        let s: Vec<i64> = s.into_iter().map(|x| x / 2).collect();
        *ch.mult.entry(s).or_insert_with(BigInt::zero) += 1;
    }
    let comps = decompose_graded(h, &ch, 0)?;
    let mut out = Vec::new();
    for c in comps {
        let m: usize = (&c.multiplicity).try_into().map_err(|_| Error::Invalid("multiplicity".into()))?;
        out.extend(std::iter::repeat(c.highest_weight).take(m));
    }
    Ok(out)
}

fn sort_restriction(r: &mut Restriction) {
    if let Restriction::Module(p) = r {
        p.sort_by(|a, b| b.cmp(a));
    }
}

/// Candidate restrictions of a `g`-factor under its outer automorphisms.
fn g_variants(h: &SemisimpleAlgebra, g: SimpleFactor, r: &Restriction) -> Vec<Restriction> {
    let mut out = vec![r.clone()];
    if let Restriction::Module(p) = r {
        match g.series {
            Series::A if g.rank >= 2 => out.push(Restriction::Module(p.iter().map(|x| x.dual(h)).collect())),
            Series::D if g.rank == 4 => {
                for which in [2, 3] {
                    if let Ok(q) = triality_restriction(h, p, which) {
                        out.push(Restriction::Module(q));
                    }
                }
            }
            _ => {}
        }
    }
    for x in out.iter_mut() {
        sort_restriction(x);
    }
    out
}

fn apply_h(t: &Triple, perm: &[usize], auts: &[Vec<usize>]) -> Triple {
    // perm[new] = old
    let h = SemisimpleAlgebra::new(perm.iter().map(|&j| t.h.factors[j]).collect());
    let map = |p: &Irrep| Irrep {
        weights: perm.iter().map(|&j| permute_weight(&p.weights[j], &auts[j])).collect(),
    };
    let inv: Vec<usize> = {
        let mut v = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            v[old] = new;
        }
        v
    };
    let embedding = t
        .embedding
        .iter()
        .map(|r| match r {
            Restriction::Module(p) => Restriction::Module(p.iter().map(map).collect()),
            Restriction::G2Regular(s, f) => Restriction::G2Regular(*s, f.iter().map(|&j| inv[j]).collect()),
        })
        .collect();
    let mut v: Vec<Irrep> = t.v.summands.iter().map(map).collect();
    v.sort_by(|a, b| b.cmp(a));
    Triple { g: t.g.clone(), h, embedding, v: crate::algebra::ModuleExpr::new(v) }
}

fn finish_g(t: Triple) -> Triple {
    let mut pairs: Vec<(SimpleFactor, Restriction)> = t
        .g
        .factors
        .iter()
        .zip(&t.embedding)
        .map(|(g, r)| {
            let best = g_variants(&t.h, *g, r).into_iter().max().unwrap();
            (*g, best)
        })
        .collect();
    pairs.sort();
    Triple {
        g: SemisimpleAlgebra::new(pairs.iter().map(|p| p.0).collect()),
        h: t.h,
        embedding: pairs.into_iter().map(|p| p.1).collect(),
        v: t.v,
    }
}

/// Invariant of an `h`-factor under the whole group, used to order factor classes.
fn signature(t: &Triple, j: usize) -> (SimpleFactor, Vec<(SimpleFactor, Vec<usize>)>, Vec<(usize, usize)>) {
    let mut gs: Vec<(SimpleFactor, Vec<usize>)> = Vec::new();
    for (g, r) in t.g.factors.iter().zip(&t.embedding) {
        if !r.support().contains(&j) {
            continue;
        }
        let dims = match r {
            // piece dimensions change under triality
            Restriction::Module(_) => Vec::new(),
            Restriction::G2Regular(_, f) => f.iter().map(|&x| usize::from(x == j)).collect(),
        };
        gs.push((*g, dims));
    }
    gs.sort();
    let f = t.h.factors[j];
    let mut vs: Vec<(usize, usize)> = t
        .v
        .summands
        .iter()
        .filter(|s| s.weights[j].iter().any(|&x| x != 0))
        .map(|s| {
            let one = SemisimpleAlgebra::new(vec![f]);
            (s.dim(&t.h), Irrep { weights: vec![s.weights[j].clone()] }.dim(&one))
        })
        .collect();
    vs.sort();
    (f, gs, vs)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Orbit size above which only the refined order is used.
const SEARCH_LIMIT: usize = 200_000;

/// Canonical representative of the isomorphism class of `t`.
pub fn normalize(t: &Triple) -> Triple {
    let nh = t.h.factors.len();
    let mut classes: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for j in 0..nh {
        classes.entry(signature(t, j)).or_default().push(j);
    }
    let class_list: Vec<Vec<usize>> = classes.into_values().collect();
    let mut perms_per_class: Vec<Vec<Vec<usize>>> = class_list.iter().map(|c| permutations(c)).collect();
    let aut_lists: Vec<Vec<Vec<usize>>> = t.h.factors.iter().map(|f| automorphisms(*f)).collect();
    let mut size: usize = perms_per_class.iter().map(|p| p.len()).product();
    size = size.saturating_mul(aut_lists.iter().map(|a| a.len()).product());
    if size > SEARCH_LIMIT {
        perms_per_class = class_list.iter().map(|c| vec![c.clone()]).collect();
    }
    let mut best: Option<Triple> = None;
    let mut idx = vec![0usize; perms_per_class.len()];
    loop {
        let perm: Vec<usize> = idx
            .iter()
            .zip(&perms_per_class)
            .flat_map(|(&i, ps)| ps[i].iter().cloned())
            .collect();
        let mut aidx = vec![0usize; nh];
        loop {
            let auts: Vec<Vec<usize>> = (0..nh).map(|j| aut_lists[j][aidx[j]].clone()).collect();
            let cand = finish_g(apply_h(t, &perm, &auts));
            if best.as_ref().map_or(true, |b| cand > *b) {
                best = Some(cand);
            }
            if !advance(&mut aidx, |j| if size > SEARCH_LIMIT { 1 } else { aut_lists[j].len() }) {
                break;
            }
        }
        if !advance(&mut idx, |c| perms_per_class[c].len()) {
            break;
        }
    }
    best.unwrap()
}

fn advance(idx: &mut [usize], len: impl Fn(usize) -> usize) -> bool {
    for k in 0..idx.len() {
        idx[k] += 1;
        if idx[k] < len(k) {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// Whether two triples are isomorphic (same canonical form).
pub fn isomorphic(a: &Triple, b: &Triple) -> bool {
    normalize(a) == normalize(b)
}

/// The dual of every summand of `V` (isomorphic when `g = h`).
pub fn dual_module(t: &Triple) -> Triple {
    let mut out = t.clone();
    for s in out.v.summands.iter_mut() {
        *s = Irrep {
            weights: t.h.factors.iter().zip(&s.weights).map(|(f, w)| dual_weight(*f, w)).collect(),
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_triple;

    #[test]
    fn duals_collapse() {
        let a = parse_triple("(sl(4), sl(4), w3)").unwrap();
        let b = parse_triple("(sl(4), sl(4), w1)").unwrap();
        assert_eq!(normalize(&a), normalize(&b));
        assert_eq!(normalize(&b), b);
        let c = parse_triple("(sl(4), sl(4), w1 + w3)").unwrap();
        let d = parse_triple("(sl(4), sl(4), w1 + w1)").unwrap();
        assert_ne!(normalize(&c), normalize(&d));
    }

    #[test]
    fn triality_collapses_spin7() {
        let a = parse_triple("(so(8), so(7), 0)").unwrap();
        let b = parse_triple("(so(8), so(7), 0) [embed=spin]").unwrap();
        assert_eq!(normalize(&a), normalize(&b));
        let c = parse_triple("(so(8), sp(4)+sl(2), 0) [embed=w1 w1']").unwrap();
        let d = parse_triple("(so(8), so(5)+so(3), 0)").unwrap();
        assert_eq!(normalize(&c), normalize(&d));
    }

    #[test]
    fn permutation_invariance() {
        let a = parse_triple("(sl(5)+sl(2), sl(3)+sl(2)+sl(2), w1 w1' + w1'')").unwrap();
        let b = parse_triple("(sl(2)+sl(5), sl(2)+sl(2)+sl(3), w1' + w1 w1'') [embed=w1'; w1 + w1'']").unwrap();
        assert_eq!(normalize(&a), normalize(&b));
        let n = normalize(&a);
        assert_eq!(normalize(&n), n);
    }
}
