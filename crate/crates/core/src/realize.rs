//! Matrix realizations of simple factors with Chevalley bases.
//!
//! Every realization is built over `Q` on the defining module with a diagonal Cartan
//! subalgebra, then mapped to any [`Field`]. The basis is ordered as coroots `h_1..h_r`,
//! positive root vectors `e_a` (in the order of [`RootSystem::positive`]) and negative
//! root vectors `f_a` in the same order, so the first `r + |Phi+|` elements span the
//! upper triangular Borel subalgebra.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::character::roots;
use crate::error::Error;
use crate::field::{Field, Q};
use crate::lie::{RootSystem, Series, SimpleFactor};
use crate::matrix::{nullspace, Matrix, Subspace};

#[derive(Clone, Debug)]
pub struct FactorRealization<F: Field> {
    pub factor: SimpleFactor,
    /// Dimension of the carrier space.
    pub n: usize,
    pub basis: Vec<Matrix<F>>,
    /// Invariant bilinear form on the carrier (none for type A).
    pub form: Option<Matrix<F>>,
    /// For each root vector, an entry where it is non-zero; root spaces are lines, so
    /// this entry reads off the coefficient.
    probes: Vec<(usize, usize)>,
    /// Diagonal positions used to solve for Cartan coordinates, and the inverse of the
    /// coroots restricted to them.
    cartan_pos: Vec<usize>,
    cartan_inv: Matrix<F>,
}

impl<F: Field> FactorRealization<F> {
    pub fn rank(&self) -> usize {
        self.factor.rank
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_positive(&self) -> usize {
        (self.dim() - self.rank()) / 2
    }

    pub fn h(&self, i: usize) -> &Matrix<F> {
        &self.basis[i]
    }

    pub fn e(&self, i: usize) -> &Matrix<F> {
        &self.basis[self.rank() + i]
    }

    pub fn f(&self, i: usize) -> &Matrix<F> {
        &self.basis[self.rank() + self.num_positive() + i]
    }

    /// Index of the positive root vector `e_a` for the `a`-th positive root.
    pub fn e_index(&self, a: usize) -> usize {
        self.rank() + a
    }

    pub fn f_index(&self, a: usize) -> usize {
        self.rank() + self.num_positive() + a
    }

    /// Indices of the standard Borel subalgebra.
    pub fn borel(&self) -> std::ops::Range<usize> {
        0..self.rank() + self.num_positive()
    }

    /// Chevalley generators `e_1..e_r, f_1..f_r`.
    pub fn generators(&self) -> Vec<Matrix<F>> {
        let r = self.rank();
        (0..r).map(|i| self.e(i).clone()).chain((0..r).map(|i| self.f(i).clone())).collect()
    }

    /// Coordinates of an element of the algebra in the Chevalley basis.
    pub fn coords(&self, x: &Matrix<F>) -> Vec<F> {
        let r = self.rank();
        let mut out = Vec::with_capacity(self.dim());
        let diag: Vec<F> = self.cartan_pos.iter().map(|&p| x.get(p, p).clone()).collect();
        out.extend(self.cartan_inv.apply(&diag));
        for (k, &(a, b)) in self.probes.iter().enumerate() {
            let e = self.basis[r + k].get(a, b);
            out.push(x.get(a, b).mul(&e.inv().unwrap()));
        }
        out
    }

}

impl FactorRealization<Q> {
    pub fn map<G: Field>(&self) -> FactorRealization<G> {
        FactorRealization {
            factor: self.factor,
            n: self.n,
            basis: self.basis.iter().map(|m| m.to_field()).collect(),
            form: self.form.as_ref().map(|m| m.to_field()),
            probes: self.probes.clone(),
            cartan_pos: self.cartan_pos.clone(),
            cartan_inv: self.cartan_inv.to_field(),
        }
    }
}

/// Realization of a simple factor over `Q` (cached).
pub fn realize_factor(f: SimpleFactor) -> Result<Arc<FactorRealization<Q>>, Error> {
    static C: OnceLock<Mutex<BTreeMap<SimpleFactor, Arc<FactorRealization<Q>>>>> = OnceLock::new();
    let m = C.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(r) = m.lock().unwrap().get(&f) {
        return Ok(r.clone());
    }
    let r = Arc::new(build(f)?);
    m.lock().unwrap().insert(f, r.clone());
    Ok(r)
}

/// Realization of a simple factor over an arbitrary field.
pub fn realize_factor_in<F: Field>(f: SimpleFactor) -> Result<Arc<FactorRealization<F>>, Error> {
    use std::any::{Any, TypeId};
    static C: OnceLock<Mutex<BTreeMap<(SimpleFactor, TypeId), Arc<dyn Any + Send + Sync>>>> = OnceLock::new();
    let m = C.get_or_init(|| Mutex::new(BTreeMap::new()));
    let key = (f, TypeId::of::<F>());
    if let Some(r) = m.lock().unwrap().get(&key) {
        return Ok(r.clone().downcast::<FactorRealization<F>>().unwrap());
    }
    let q = realize_factor(f)?;
    let r: Arc<FactorRealization<F>> = Arc::new(q.map());
    m.lock().unwrap().insert(key, r.clone());
    Ok(r)
}

/// Weight of each carrier position, in coordinates where the simple roots are
/// `simple_roots(f)`.
fn position_weights(f: SimpleFactor) -> Vec<Vec<i64>> {
    let n = f.rank;
    let unit = |len: usize, i: usize, s: i64| {
        let mut v = vec![0; len];
        v[i] = s;
        v
    };
    match f.series {
        Series::A => (0..=n).map(|p| unit(n + 1, p, 1)).collect(),
        Series::B => (0..2 * n + 1)
            .map(|p| {
                if p < n {
                    unit(n, p, 1)
                } else if p == n {
                    vec![0; n]
                } else {
                    unit(n, 2 * n - p, -1)
                }
            })
            .collect(),
        Series::C | Series::D => (0..2 * n)
            .map(|p| if p < n { unit(n, p, 1) } else { unit(n, 2 * n - 1 - p, -1) })
            .collect(),
        Series::G => vec![
            vec![2, 1],
            vec![1, 1],
            vec![1, 0],
            vec![0, 0],
            vec![-1, 0],
            vec![-1, -1],
            vec![-2, -1],
        ],
        _ => unreachable!(),
    }
}

fn simple_roots(f: SimpleFactor) -> Vec<Vec<i64>> {
    let n = f.rank;
    let len = if f.series == Series::A { n + 1 } else { n };
    let eps = |i: usize, j: Option<(usize, i64)>, s: i64| {
        let mut v = vec![0; len];
        v[i] += s;
        if let Some((j, t)) = j {
            v[j] += t;
        }
        v
    };
    match f.series {
        Series::A => (0..n).map(|i| eps(i, Some((i + 1, -1)), 1)).collect(),
        Series::B => (0..n)
            .map(|i| if i + 1 < n { eps(i, Some((i + 1, -1)), 1) } else { eps(i, None, 1) })
            .collect(),
        Series::C => (0..n)
            .map(|i| if i + 1 < n { eps(i, Some((i + 1, -1)), 1) } else { eps(i, None, 2) })
            .collect(),
        Series::D => (0..n)
            .map(|i| {
                if i + 1 < n {
                    eps(i, Some((i + 1, -1)), 1)
                } else {
                    eps(n - 2, Some((n - 1, 1)), 1)
                }
            })
            .collect(),
        Series::G => vec![vec![1, 0], vec![0, 1]],
        _ => unreachable!(),
    }
}

/// Antidiagonal invariant form: symmetric for types B, D, symplectic for C.
fn standard_form(f: SimpleFactor) -> Option<Matrix<Q>> {
    let n = f.defining_dim();
    match f.series {
        Series::B | Series::D => Some(Matrix::from_fn(n, n, |i, j| {
            if i + j == n - 1 {
                Q::one()
            } else {
                Q::zero()
            }
        })),
        Series::C => Some(Matrix::from_fn(n, n, |i, j| {
            if i + j == n - 1 {
                Q::from_i64(if i < n / 2 { 1 } else { -1 })
            } else {
                Q::zero()
            }
        })),
        _ => None,
    }
}


/// Torus-invariant monomials of a generic 3-form on the 7-dimensional carrier.
const G2_MONOMIALS: [[usize; 3]; 5] = [[0, 3, 6], [1, 3, 5], [2, 3, 4], [2, 1, 6], [4, 5, 0]];

/// Signs on [`G2_MONOMIALS`] for which the stabilizer has dimension 14.
fn g2_signs() -> [i64; 5] {
    static S: OnceLock<[i64; 5]> = OnceLock::new();
    *S.get_or_init(|| {
        for mask in 0..32u32 {
            let signs: [i64; 5] = std::array::from_fn(|k| if mask >> k & 1 == 1 { -1 } else { 1 });
            let phi = g2_tensor(&signs);
            let cols: Vec<Vec<Q>> = (0..49).map(|k| form_action(&phi, &Matrix::unit(7, k / 7, k % 7))).collect();
            let rows: Vec<Vec<Q>> = (0..35).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
            if nullspace(rows, 49).len() == 14 {
                return signs;
            }
        }
        panic!("no sign pattern gives a 14-dimensional stabilizer")
    })
}

/// Linear conditions cutting out the algebra inside `gl(n)`, as a map on matrices.
fn defining_conditions(f: SimpleFactor, x: &Matrix<Q>) -> Vec<Q> {
    match f.series {
        Series::A => vec![x.trace()],
        Series::B | Series::C | Series::D => {
            let j = standard_form(f).unwrap();
            x.transpose().mul(&j).add(&j.mul(x)).flatten()
        }
        Series::G => form_action(&g2_tensor(&g2_signs()), x),
        _ => unreachable!(),
    }
}

/// Components of `x . phi` on the basis of 3-forms.
fn form_action(phi: &[Vec<Vec<Q>>], x: &Matrix<Q>) -> Vec<Q> {
    {
        {
            let mut out = Vec::with_capacity(35);
            for a in 0..7 {
                for b in a + 1..7 {
                    for c in b + 1..7 {
                        let mut s = Q::zero();
                        for m in 0..7 {
                            let xa = x.get(m, a);
                            if !xa.is_zero() {
                                s += xa * &phi[m][b][c];
                            }
                            let xb = x.get(m, b);
                            if !xb.is_zero() {
                                s += xb * &phi[a][m][c];
                            }
                            let xc = x.get(m, c);
                            if !xc.is_zero() {
                                s += xc * &phi[a][b][m];
                            }
                        }
                        out.push(s);
                    }
                }
            }
            out
        }
    }
}

fn g2_tensor(signs: &[i64; 5]) -> Vec<Vec<Vec<Q>>> {
    let mut t = vec![vec![vec![Q::zero(); 7]; 7]; 7];
    for (idx, &c) in G2_MONOMIALS.iter().zip(signs) {
        let [a, b, d] = *idx;
        let perms = [
            ([a, b, d], 1),
            ([b, d, a], 1),
            ([d, a, b], 1),
            ([b, a, d], -1),
            ([a, d, b], -1),
            ([d, b, a], -1),
        ];
        for (p, s) in perms {
            t[p[0]][p[1]][p[2]] = Q::from_i64(c * s);
        }
    }
    t
}

fn build(f: SimpleFactor) -> Result<FactorRealization<Q>, Error> {
    if !f.is_realizable() {
        return Err(Error::UnsupportedExceptional(f.to_string()));
    }
    let rs: Arc<RootSystem> = roots(f);
    let n = f.defining_dim();
    let r = f.rank;
    let pw = position_weights(f);
    let sr = simple_roots(f);
    let root_vec = |c: &[i64], sign: i64| -> Vec<i64> {
        let mut v = vec![0; sr[0].len()];
        for (ci, s) in c.iter().zip(&sr) {
            for (x, y) in v.iter_mut().zip(s) {
                *x += sign * ci * y;
            }
        }
        v
    };
    // The algebra intersected with the span of the matrix units of a given weight.
    let space = |positions: &[(usize, usize)]| -> Vec<Matrix<Q>> {
        let cols: Vec<Vec<Q>> = positions
            .iter()
            .map(|&(a, b)| defining_conditions(f, &Matrix::unit(n, a, b)))
            .collect();
        let m = cols[0].len();
        let rows: Vec<Vec<Q>> = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        nullspace(rows, positions.len())
            .into_iter()
            .map(|coef| {
                let mut x = Matrix::zeros(n, n);
                for (c, &(a, b)) in coef.iter().zip(positions) {
                    x.set(a, b, c.clone());
                }
                x
            })
            .collect()
    };
    let root_space = |w: &[i64]| -> Result<Matrix<Q>, Error> {
        let pos: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| pw[a].iter().zip(&pw[b]).map(|(x, y)| x - y).eq(w.iter().cloned()))
            .collect();
        let sp = space(&pos);
        if sp.len() != 1 {
            return Err(Error::Invalid(format!("root space of {f:?} has dimension {}", sp.len())));
        }
        Ok(sp.into_iter().next().unwrap())
    };
    let mut es = Vec::new();
    let mut fs = Vec::new();
    for c in &rs.positive {
        es.push(root_space(&root_vec(c, 1))?);
        fs.push(root_space(&root_vec(c, -1))?);
    }
    // Normalize so that h_a = [e_a, f_a] satisfies a(h_a) = 2.
    let mut hs = Vec::new();
    for k in 0..rs.positive.len() {
        let h = es[k].bracket(&fs[k]);
        let he = h.bracket(&es[k]);
        let (a, b) = first_nonzero(&es[k]);
        let ratio = he.get(a, b) / es[k].get(a, b);
        let s = Q::from_i64(2) / ratio;
        fs[k] = fs[k].scale(&s);
        if k < r {
            hs.push(h.scale(&s));
        }
    }
    let mut basis = hs;
    basis.extend(es.iter().cloned());
    basis.extend(fs.iter().cloned());
    if basis.len() != f.dim() {
        return Err(Error::Invalid(format!("{f:?}: basis of size {}", basis.len())));
    }
    let probes: Vec<(usize, usize)> = es.iter().chain(&fs).map(first_nonzero).collect();
    // Diagonal positions on which the coroots are independent.
    let diag_rows: Vec<Vec<Q>> = (0..n).map(|p| (0..r).map(|i| basis[i].get(p, p).clone()).collect()).collect();
    let mut cartan_pos = Vec::new();
    let mut sub = Subspace::zero(r);
    for (p, row) in diag_rows.iter().enumerate() {
        if sub.insert(row) {
            cartan_pos.push(p);
        }
        if cartan_pos.len() == r {
            break;
        }
    }
    let pick = Matrix::from_rows(&cartan_pos.iter().map(|&p| diag_rows[p].clone()).collect::<Vec<_>>());
    let cartan_inv = pick.inverse().expect("coroots are independent on the diagonal");
    let form = match f.series {
        Series::G => Some(g2_symmetric_form(&basis)),
        _ => standard_form(f),
    };
    let real = FactorRealization {
        factor: f,
        n,
        basis,
        form,
        probes,
        cartan_pos,
        cartan_inv,
    };
    verify_chevalley(&real, &rs)?;
    Ok(real)
}

fn first_nonzero<F: Field>(m: &Matrix<F>) -> (usize, usize) {
    for a in 0..m.rows() {
        for b in 0..m.cols() {
            if !m.get(a, b).is_zero() {
                return (a, b);
            }
        }
    }
    panic!("zero root vector")
}

/// The symmetric form preserved by the `G2` realization.
fn g2_symmetric_form(basis: &[Matrix<Q>]) -> Matrix<Q> {
    let forms = invariant_forms(basis, 7, true);
    assert_eq!(forms.len(), 1, "G2 preserves a unique symmetric form up to scale");
    forms.into_iter().next().unwrap()
}

/// Basis of bilinear forms `B` (symmetric or alternating) with `x^t B + B x = 0` for all
/// given matrices `x`.
pub fn invariant_forms<F: Field>(gens: &[Matrix<F>], n: usize, symmetric: bool) -> Vec<Matrix<F>> {
    invariant_forms_on(gens, n, symmetric, |_, _| true)
}

/// As [`invariant_forms`], with unknown entries restricted to pairs allowed by `pair`
/// (e.g. pairs of opposite weights).
pub fn invariant_forms_on<F: Field>(
    gens: &[Matrix<F>],
    n: usize,
    symmetric: bool,
    pair: impl Fn(usize, usize) -> bool,
) -> Vec<Matrix<F>> {
    let mut unknowns = Vec::new();
    for i in 0..n {
        for j in i..n {
            if (symmetric || i != j) && pair(i, j) {
                unknowns.push((i, j));
            }
        }
    }
    let unit = |i: usize, j: usize| {
        let mut b = Matrix::zeros(n, n);
        b.set(i, j, F::one());
        if i != j {
            b.set(j, i, if symmetric { F::one() } else { F::one().neg() });
        }
        b
    };
    let mut rows: Vec<Vec<F>> = Vec::new();
    let cols: Vec<Vec<F>> = unknowns
        .iter()
        .map(|&(i, j)| {
            let b = unit(i, j);
            let mut c = Vec::new();
            for x in gens {
                c.extend(x.transpose().mul(&b).add(&b.mul(x)).flatten());
            }
            c
        })
        .collect();
    if let Some(first) = cols.first() {
        for k in 0..first.len() {
            let row: Vec<F> = cols.iter().map(|c| c[k].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    nullspace(rows, unknowns.len())
        .into_iter()
        .map(|coef| {
            let mut b = Matrix::zeros(n, n);
            for (c, &(i, j)) in coef.iter().zip(&unknowns) {
                if !c.is_zero() {
                    b.add_scaled(c, &unit(i, j));
                }
            }
            b
        })
        .collect()
}

/// Checks `[h_i, e_j] = <alpha_j, alpha_i^vee> e_j` and `[e_i, f_j] = delta_ij h_i`.
fn verify_chevalley<F: Field>(real: &FactorRealization<F>, rs: &RootSystem) -> Result<(), Error> {
    let r = real.rank();
    for i in 0..r {
        for j in 0..r {
            let lhs = real.h(i).bracket(real.e(j));
            let rhs = real.e(j).scale(&F::from_i64(rs.cartan[j][i]));
            if lhs != rhs {
                return Err(Error::Invalid(format!("{:?}: [h_{i}, e_{j}] mismatch", real.factor)));
            }
            let ef = real.e(i).bracket(real.f(j));
            let want = if i == j { real.h(i).clone() } else { Matrix::zeros(real.n, real.n) };
            if ef != want {
                return Err(Error::Invalid(format!("{:?}: [e_{i}, f_{j}] mismatch", real.factor)));
            }
        }
    }
    Ok(())
}

/// Every basis element written as a combination of iterated brackets of the Chevalley
/// generators, so that generator images determine a homomorphism.
#[derive(Clone, Debug)]
pub struct WordExpansion {
    /// `steps[t] = (g, parent)`: element `t` is `[gen_g, element_parent]`; generators
    /// themselves have `parent = None`.
    steps: Vec<(usize, Option<usize>)>,
    /// Basis element `b` equals `sum_t coef[b][t] * element_t`.
    coef: Vec<Vec<Q>>,
}

impl WordExpansion {
    pub fn new(real: &FactorRealization<Q>) -> Self {
        let gens = real.generators();
        let n = real.n;
        let mut elems: Vec<Matrix<Q>> = Vec::new();
        let mut steps = Vec::new();
        let mut sub = Subspace::zero(n * n);
        for (g, x) in gens.iter().enumerate() {
            if sub.insert(&x.flatten()) {
                elems.push(x.clone());
                steps.push((g, None));
            }
        }
        let mut k = 0;
        while k < elems.len() && elems.len() < real.dim() {
            for (g, x) in gens.iter().enumerate() {
                let y = x.bracket(&elems[k]);
                if sub.insert(&y.flatten()) {
                    elems.push(y);
                    steps.push((g, Some(k)));
                }
            }
            k += 1;
        }
        assert_eq!(elems.len(), real.dim(), "generators span the algebra");
        let cols: Vec<Vec<Q>> = elems.iter().map(|e| real.coords(e)).collect();
        let m = Matrix::from_columns(&cols, real.dim());
        let inv = m.inverse().expect("bracket words form a basis");
        let coef = (0..real.dim()).map(|b| inv.column(b)).collect();
        WordExpansion { steps, coef }
    }

    /// Images of all basis elements under the homomorphism sending generator `g` to
    /// `images[g]` (`e_1..e_r, f_1..f_r`).
    pub fn extend<F: Field>(&self, images: &[Matrix<F>]) -> Vec<Matrix<F>> {
        let mut vals: Vec<Matrix<F>> = Vec::with_capacity(self.steps.len());
        for &(g, parent) in &self.steps {
            let v = match parent {
                None => images[g].clone(),
                Some(p) => images[g].bracket(&vals[p]),
            };
            vals.push(v);
        }
        self.coef
            .iter()
            .map(|c| {
                let fc: Vec<F> = c.iter().map(F::from_q).collect();
                let mut out = Matrix::zeros(images[0].rows(), images[0].cols());
                for (x, v) in fc.iter().zip(&vals) {
                    out.add_scaled(x, v);
                }
                out
            })
            .collect()
    }
}

/// Cached word expansion of a factor.
pub fn word_expansion(f: SimpleFactor) -> Result<Arc<WordExpansion>, Error> {
    static C: OnceLock<Mutex<BTreeMap<SimpleFactor, Arc<WordExpansion>>>> = OnceLock::new();
    let m = C.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(w) = m.lock().unwrap().get(&f) {
        return Ok(w.clone());
    }
    let w = Arc::new(WordExpansion::new(&*realize_factor(f)?));
    m.lock().unwrap().insert(f, w.clone());
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_under_bracket(real: &FactorRealization<Q>) -> bool {
        let span = Subspace::span(real.n * real.n, &real.basis.iter().map(|m| m.flatten()).collect::<Vec<_>>());
        let k = real.dim().min(8);
        (0..k).all(|i| (0..real.dim()).all(|j| span.contains(&real.basis[i].bracket(&real.basis[j]).flatten())))
    }

    #[test]
    fn classical_and_g2_dimensions() {
        for f in [
            SimpleFactor::a(1),
            SimpleFactor::a(3),
            SimpleFactor::b(3),
            SimpleFactor::c(2),
            SimpleFactor::c(3),
            SimpleFactor::d(4),
            SimpleFactor::g2(),
        ] {
            let real = realize_factor(f).unwrap();
            assert_eq!(real.dim(), f.dim());
            assert!(closed_under_bracket(&real), "{f:?}");
        }
        let sl2 = realize_factor(SimpleFactor::a(1)).unwrap();
        assert_eq!(sl2.n, 2);
        let so7 = realize_factor(SimpleFactor::b(3)).unwrap();
        assert_eq!((so7.n, so7.dim()), (7, 21));
    }

    #[test]
    fn g2_sits_inside_so7() {
        let g2 = realize_factor(SimpleFactor::g2()).unwrap();
        let b = g2.form.clone().unwrap();
        assert!(g2.basis.iter().all(|x| x.transpose().mul(&b).add(&b.mul(x)).is_zero()));
        assert_eq!(g2.dim(), 14);
    }

    #[test]
    fn coordinates_invert_basis() {
        let real = realize_factor(SimpleFactor::c(3)).unwrap();
        let mut x = Matrix::zeros(real.n, real.n);
        for (k, b) in real.basis.iter().enumerate() {
            x.add_scaled(&Q::from_i64(k as i64 - 5), b);
        }
        let c = real.coords(&x);
        assert!(c.iter().enumerate().all(|(k, v)| *v == Q::from_i64(k as i64 - 5)));
    }

    #[test]
    fn word_expansion_reproduces_basis() {
        for f in [SimpleFactor::b(2), SimpleFactor::g2()] {
            let real = realize_factor(f).unwrap();
            let w = word_expansion(f).unwrap();
            let imgs = w.extend(&real.generators());
            assert_eq!(imgs, real.basis);
        }
    }
}
