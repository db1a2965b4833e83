//! Embeddings of `h` into `g` as explicit matrices.
//!
//! For a classical factor of `g` the restriction of its defining module is realized as a
//! sum of `h`-modules `R`. For orthogonal and symplectic factors an `h`-invariant form on
//! `R` is chosen and brought to the standard antidiagonal shape by a Witt basis, which
//! conjugates the image of `h` into the realization of the factor.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{G2Sub, Irrep, Restriction, SemisimpleAlgebra, Triple};
use crate::character::roots;
use crate::error::Error;
use crate::field::{q_is_square, Field, Q};
use crate::lie::{Series, SimpleFactor};
use crate::matrix::Matrix;
use crate::module::{factor_offsets, generator_indices, irrep_action};
use crate::realize::{invariant_forms_on, realize_factor, word_expansion, FactorRealization};

/// Images of the basis of `h` in one factor of `g`.
pub type FactorImages = Vec<Matrix<Q>>;

const FORM_ATTEMPTS: u64 = 256;

/// Action of `h` on the sum of the listed modules.
pub fn restricted_action(h: &SemisimpleAlgebra, pieces: &[Irrep]) -> Result<Vec<Matrix<Q>>, Error> {
    let acts: Vec<Vec<Matrix<Q>>> = pieces.iter().map(|p| irrep_action::<Q>(h, p)).collect::<Result<_, _>>()?;
    Ok((0..h.dim())
        .map(|b| Matrix::block_diag(&acts.iter().map(|a| a[b].clone()).collect::<Vec<_>>()))
        .collect())
}

fn bil(b: &Matrix<Q>, u: &[Q], v: &[Q]) -> Q {
    let bv = b.apply(v);
    u.iter().zip(&bv).fold(Q::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

fn axpy(y: &mut [Q], a: &Q, x: &[Q]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = yi.add(&a.mul(xi));
    }
}

fn scaled(x: &[Q], a: &Q) -> Vec<Q> {
    x.iter().map(|v| v.mul(a)).collect()
}

/// A basis `S` (as columns) with `S^t B S = c J` for the standard form `J` of a factor of
/// type B, C or D on `n = B.rows()` dimensions. Returns `None` when the greedy Witt
/// decomposition does not split over `Q`.
pub fn witt_basis(b: &Matrix<Q>, symmetric: bool) -> Option<Matrix<Q>> {
    let n = b.rows();
    let mut rest: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    let mut pairs: Vec<(Vec<Q>, Vec<Q>)> = Vec::new();
    let mut aniso: Vec<(Vec<Q>, Q)> = Vec::new();
    while !rest.is_empty() {
        let v = rest.remove(0);
        let vv = bil(b, &v, &v);
        if symmetric && !vv.is_zero() {
            for u in rest.iter_mut() {
                let c = bil(b, u, &v).mul(&vv.inv().unwrap()).neg();
                axpy(u, &c, &v);
            }
            aniso.push((v, vv));
            continue;
        }
        let p = rest.iter().position(|u| !bil(b, &v, u).is_zero())?;
        let u = rest.remove(p);
        let mut w = scaled(&u, &bil(b, &v, &u).inv().unwrap());
        if symmetric {
            let c = bil(b, &w, &w).mul(&Q::from_i64(2).inv().unwrap()).neg();
            axpy(&mut w, &c, &v);
        }
        for x in rest.iter_mut() {
            let xw = bil(b, x, &w).neg();
            let xv = bil(b, x, &v);
            axpy(x, &xw, &v);
            if symmetric {
                axpy(x, &xv.neg(), &w);
            } else {
                axpy(x, &xv, &w);
            }
        }
        pairs.push((v, w));
    }
    // Pair anisotropic vectors a_i, a_j with -a_i a_j a square.
    let mut used = vec![false; aniso.len()];
    for i in 0..aniso.len() {
        if used[i] {
            continue;
        }
        for j in i + 1..aniso.len() {
            if used[j] {
                continue;
            }
            let (ai, aj) = (&aniso[i].1, &aniso[j].1);
            if let Some(s) = q_is_square(&ai.mul(aj).neg()) {
                let t = s.mul(&aj.inv().unwrap());
                let mut x = aniso[i].0.clone();
                axpy(&mut x, &t, &aniso[j].0);
                let mut y = aniso[i].0.clone();
                axpy(&mut y, &t.neg(), &aniso[j].0);
                let y = scaled(&y, &ai.add(ai).inv().unwrap());
                pairs.push((x, y));
                used[i] = true;
                used[j] = true;
                break;
            }
        }
    }
    let left: Vec<&(Vec<Q>, Q)> = aniso.iter().zip(&used).filter(|(_, u)| !**u).map(|(a, _)| a).collect();
    if left.len() != n % 2 {
        return None;
    }
    let c = left.first().map(|a| a.1.clone()).unwrap_or_else(Q::one);
    let mut cols = vec![Vec::new(); n];
    for (k, (v, w)) in pairs.into_iter().enumerate() {
        cols[k] = v;
        cols[n - 1 - k] = scaled(&w, &c);
    }
    if let Some(m) = left.first() {
        cols[n / 2] = m.0.clone();
    }
    Some(Matrix::from_columns(&cols, n))
}

/// Weight of each basis vector of a module on which the Cartan elements act diagonally.
fn diagonal_weights(cartan: &[&Matrix<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = cartan.first()?.rows();
    if !cartan.iter().all(|h| h.is_diagonal()) {
        return None;
    }
    Some((0..n).map(|p| cartan.iter().map(|h| h.get(p, p).clone()).collect()).collect())
}

fn cartan_indices(h: &SemisimpleAlgebra) -> Vec<usize> {
    let off = &factor_offsets(h);
    h.factors
        .iter()
        .enumerate()
        .flat_map(|(j, f)| (0..f.rank).map(move |i| off[j] + i))
        .collect()
}

/// Matrices `S^{-1} rho(x) S` realizing `h` inside an orthogonal or symplectic factor.
fn embed_classical_with_form(
    h: &SemisimpleAlgebra,
    gf: SimpleFactor,
    rho: &[Matrix<Q>],
) -> Result<FactorImages, Error> {
    let n = gf.defining_dim();
    let symmetric = gf.series != Series::C;
    let gens: Vec<Matrix<Q>> = generator_indices(h).into_iter().map(|i| rho[i].clone()).collect();
    let cart: Vec<&Matrix<Q>> = cartan_indices(h).into_iter().map(|i| &rho[i]).collect();
    let forms = match diagonal_weights(&cart) {
        Some(w) => invariant_forms_on(&gens, n, symmetric, |i, j| {
            w[i].iter().zip(&w[j]).all(|(a, b)| a.add(b).is_zero())
        }),
        None => invariant_forms_on(&gens, n, symmetric, |_, _| true),
    };
    if forms.is_empty() {
        return Err(Error::IncompatibleSpec(format!("no invariant form for {gf}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for attempt in 0..FORM_ATTEMPTS {
        let coef: Vec<i64> = if attempt == 0 {
            vec![1; forms.len()]
        } else {
            (0..forms.len()).map(|_| rng.gen_range(-3..=3)).collect()
        };
        let mut b = Matrix::zeros(n, n);
        for (c, f) in coef.iter().zip(&forms) {
            b.add_scaled(&Q::from_i64(*c), f);
        }
        if b.rank() < n {
            continue;
        }
        if let Some(s) = witt_basis(&b, symmetric) {
            let si = s.inverse().expect("Witt basis is a basis");
            return Ok(rho.iter().map(|x| si.mul(x).mul(&s)).collect());
        }
    }
    Err(Error::DegenerateForm(format!("no split invariant form found for {gf}")))
}

/// Root index in the positive system of `G2` for simple-root coordinates `c`.
fn g2_root(c: [i64; 2]) -> usize {
    roots(SimpleFactor::g2())
        .positive
        .iter()
        .position(|r| r[..] == c[..])
        .expect("root of G2")
}

fn embed_g2_regular(
    h: &SemisimpleAlgebra,
    real: &FactorRealization<Q>,
    sub: G2Sub,
    fs: &[usize],
) -> Result<FactorImages, Error> {
    let targets: Vec<Vec<[i64; 2]>> = match sub {
        G2Sub::A2 => vec![vec![[0, 1], [3, 1]]],
        G2Sub::A1A1 => vec![vec![[3, 2]], vec![[1, 0]]],
    };
    let off = factor_offsets(h);
    let mut out = vec![Matrix::zeros(7, 7); h.dim()];
    for (&j, roots_j) in fs.iter().zip(&targets) {
        let idx: Vec<usize> = roots_j.iter().map(|c| g2_root(*c)).collect();
        let mut gens: Vec<Matrix<Q>> = idx.iter().map(|&a| real.basis[real.e_index(a)].clone()).collect();
        gens.extend(idx.iter().map(|&a| real.basis[real.f_index(a)].clone()));
        let imgs = word_expansion(h.factors[j])?.extend(&gens);
        for (k, m) in imgs.into_iter().enumerate() {
            out[off[j] + k] = m;
        }
    }
    Ok(out)
}

/// Images of the basis of `h` in one factor of `g`.
pub fn embed_factor(h: &SemisimpleAlgebra, gf: SimpleFactor, r: &Restriction) -> Result<FactorImages, Error> {
    let real = realize_factor(gf)?;
    match r {
        Restriction::G2Regular(sub, fs) => embed_g2_regular(h, &real, *sub, fs),
        Restriction::Module(pieces) => {
            let rho = restricted_action(h, pieces)?;
            match gf.series {
                Series::A => Ok(rho),
                Series::B | Series::C | Series::D => embed_classical_with_form(h, gf, &rho),
                Series::G => {
                    let ok = pieces.len() == 1
                        && pieces[0].support().len() == 1
                        && h.factors[pieces[0].support()[0]] == SimpleFactor::g2()
                        && pieces[0].weights[pieces[0].support()[0]] == vec![1, 0];
                    if ok {
                        Ok(rho)
                    } else {
                        Err(Error::IncompatibleSpec("G2 restricts only identically or to a regular subalgebra".into()))
                    }
                }
                _ => Err(Error::UnsupportedExceptional(gf.to_string())),
            }
        }
    }
}

/// Images of the basis of `h` in every factor of `g`, indexed `[g-factor][h-basis]`
/// (cached per triple).
pub fn embedding_images(t: &Triple) -> Result<Arc<Vec<FactorImages>>, Error> {
    type Key = (SemisimpleAlgebra, SemisimpleAlgebra, Vec<Restriction>);
    static C: OnceLock<Mutex<BTreeMap<Key, Arc<Vec<FactorImages>>>>> = OnceLock::new();
    let cache = C.get_or_init(|| Mutex::new(BTreeMap::new()));
    let key = (t.g.clone(), t.h.clone(), t.embedding.clone());
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let imgs: Vec<FactorImages> = t
        .g
        .factors
        .iter()
        .zip(&t.embedding)
        .map(|(gf, r)| embed_factor(&t.h, *gf, r))
        .collect::<Result<_, _>>()?;
    let v = Arc::new(imgs);
    cache.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ModuleExpr;

    fn check_homomorphism(t: &Triple) {
        let imgs = embedding_images(t).unwrap();
        let hreal: Vec<_> = t.h.factors.iter().map(|f| realize_factor(*f).unwrap()).collect();
        let off = factor_offsets(&t.h);
        for (gj, gf) in t.g.factors.iter().enumerate() {
            let greal = realize_factor(*gf).unwrap();
            for x in &imgs[gj] {
                // Image lies in the factor: coordinates reproduce it.
                let c = greal.coords(x);
                let mut y = Matrix::zeros(greal.n, greal.n);
                for (a, b) in c.iter().zip(&greal.basis) {
                    y.add_scaled(a, b);
                }
                assert_eq!(&y, x, "{gf} image escapes the factor");
            }
            for (hj, hr) in hreal.iter().enumerate() {
                for a in 0..hr.dim() {
                    for b in 0..hr.dim() {
                        let c = hr.coords(&hr.basis[a].bracket(&hr.basis[b]));
                        let mut want = Matrix::zeros(greal.n, greal.n);
                        for (k, v) in c.iter().enumerate() {
                            want.add_scaled(v, &imgs[gj][off[hj] + k]);
                        }
                        assert_eq!(imgs[gj][off[hj] + a].bracket(&imgs[gj][off[hj] + b]), want);
                    }
                }
            }
        }
    }

    fn triple(g: Vec<SimpleFactor>, h: Vec<SimpleFactor>, emb: Vec<Restriction>) -> Triple {
        Triple::new(SemisimpleAlgebra::new(g), SemisimpleAlgebra::new(h), emb, ModuleExpr::zero()).unwrap()
    }

    #[test]
    fn symplectic_and_orthogonal_restrictions() {
        let h = SemisimpleAlgebra::new(vec![SimpleFactor::c(2), SimpleFactor::a(1)]);
        // sp(4) + sl(2) in so(8) via the tensor product of defining modules.
        let t = triple(
            vec![SimpleFactor::d(4)],
            h.factors.clone(),
            vec![Restriction::Module(vec![Irrep { weights: vec![vec![1, 0], vec![1]] }])],
        );
        check_homomorphism(&t);
        // sl(2) in sp(4) irreducibly.
        let t = triple(
            vec![SimpleFactor::c(2)],
            vec![SimpleFactor::a(1)],
            vec![Restriction::Module(vec![Irrep { weights: vec![vec![3]] }])],
        );
        check_homomorphism(&t);
        // spin(7) in so(8).
        let t = triple(
            vec![SimpleFactor::d(4)],
            vec![SimpleFactor::b(3)],
            vec![Restriction::Module(vec![Irrep { weights: vec![vec![0, 0, 1]] }])],
        );
        check_homomorphism(&t);
        // so(5) + so(3) in so(8) needs the form with opposite signs on the two blocks.
        let h = SemisimpleAlgebra::new(vec![SimpleFactor::c(2), SimpleFactor::a(1)]);
        let t = triple(
            vec![SimpleFactor::d(4)],
            h.factors.clone(),
            vec![Restriction::Module(vec![
                Irrep { weights: vec![vec![0, 1], vec![0]] },
                Irrep { weights: vec![vec![0, 0], vec![2]] },
            ])],
        );
        check_homomorphism(&t);
    }

    #[test]
    fn g2_subalgebras() {
        let t = triple(
            vec![SimpleFactor::g2()],
            vec![SimpleFactor::a(2)],
            vec![Restriction::G2Regular(G2Sub::A2, vec![0])],
        );
        check_homomorphism(&t);
        let t = triple(
            vec![SimpleFactor::g2()],
            vec![SimpleFactor::a(1), SimpleFactor::a(1)],
            vec![Restriction::G2Regular(G2Sub::A1A1, vec![0, 1])],
        );
        check_homomorphism(&t);
        // G2 in so(7).
        let t = triple(
            vec![SimpleFactor::b(3)],
            vec![SimpleFactor::g2()],
            vec![Restriction::Module(vec![Irrep { weights: vec![vec![1, 0]] }])],
        );
        check_homomorphism(&t);
    }
}
