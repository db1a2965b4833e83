//! Generic-rank decision procedures.
//!
//! A triple is tested at a random point: a unipotent element `x` of the opposite Borel
//! subgroup moves the standard Borel subalgebra `b` into general position with respect to
//! `h̄ = h + s`, and a random vector `v` of `V` is chosen. Full rank of
//! `b + Ad(x) h̄` and of `(b ∩ Ad(x) h̄ + z) v` at one point proves sphericality.
//! All random choices are small integers, so the same point can be evaluated over `F_p`
//! (fast) or over `Q` (exact replay).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Irrep, ModuleExpr, SemisimpleAlgebra, Triple};
use crate::character::{roots, sym_power_decompose};
use crate::embed::embedding_images;
use crate::error::Error;
use crate::field::{Field, Fp, Q};
use crate::matrix::{nullspace, rank_of_rows, Echelon, Matrix};
use crate::module::{generator_indices, irrep_action};
use crate::realize::{realize_factor_in, FactorRealization};

/// Element of `g` as one matrix per simple factor.
pub type Block<F> = Vec<Matrix<F>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub trials: usize,
    pub sym_degree: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 42,
            trials: 8,
            sym_degree: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    SphericalCertified,
    NotSphericalCertified,
    NotSphericalProbable,
    Undecided,
}

impl Status {
    pub fn is_spherical(self) -> bool {
        self == Status::SphericalCertified
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Status::NotSphericalCertified | Status::NotSphericalProbable)
    }
}

/// Replayable description of the point at which ranks were computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericWitness {
    pub seed: u64,
    pub trial: usize,
    /// Parameters `t` of `exp(t f_a)`, factor by factor, negative roots in order.
    pub group_params: Vec<i64>,
    pub vector: Vec<i64>,
    pub pair_rank: usize,
    pub pair_needed: usize,
    pub module_rank: usize,
    pub module_needed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    Witness(GenericWitness),
    /// `available < needed` for every point.
    DimensionBound { what: String, available: usize, needed: usize },
    /// A constituent of `Sym(V)` occurring more than once.
    Multiplicity {
        degree: usize,
        weight: Irrep,
        toral: Vec<i64>,
        multiplicity: BigInt,
    },
    /// Best ranks seen across all trials.
    RankDeficit { pair_rank: usize, pair_needed: usize, module_rank: usize, module_needed: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Certificate,
    pub trials_used: usize,
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

const SETUP_STREAM: u64 = 0xffff;
const ISOTROPY_STREAM: u64 = 0x1_0000;

fn nonzero_small(rng: &mut ChaCha8Rng) -> i64 {
    let t = rng.gen_range(1..=7);
    if rng.gen_bool(0.5) {
        t
    } else {
        -t
    }
}

/// A triple realized by matrices over `F`.
pub struct Realized<F: Field> {
    pub triple: Triple,
    pub g: Vec<Arc<FactorRealization<F>>>,
    /// Images of the basis of `h`.
    pub h_img: Vec<Block<F>>,
    /// Basis of `s`, a Cartan subalgebra of the centralizer of `h`.
    pub s: Vec<Block<F>>,
    /// Action of the basis of `h` on each summand of `V`.
    pub v_action: Vec<Vec<Matrix<F>>>,
    pub v_dims: Vec<usize>,
}

impl<F: Field> Realized<F> {
    pub fn new(triple: &Triple, seed: u64) -> Result<Self, Error> {
        if !triple.is_realizable() {
            let bad = triple
                .g
                .factors
                .iter()
                .chain(&triple.h.factors)
                .find(|f| !f.is_realizable())
                .map(|f| f.to_string())
                .unwrap_or_default();
            return Err(Error::UnsupportedExceptional(bad));
        }
        let g: Vec<Arc<FactorRealization<F>>> =
            triple.g.factors.iter().map(|f| realize_factor_in::<F>(*f)).collect::<Result<_, _>>()?;
        let imgs = embedding_images(triple)?;
        let h_img: Vec<Block<F>> = (0..triple.h.dim())
            .map(|b| imgs.iter().map(|fi| fi[b].to_field()).collect())
            .collect();
        let v_action: Vec<Vec<Matrix<F>>> = triple
            .v
            .summands
            .iter()
            .map(|s| irrep_action::<F>(&triple.h, s))
            .collect::<Result<_, _>>()?;
        let v_dims = triple.v.summands.iter().map(|s| s.dim(&triple.h)).collect();
        let mut r = Realized {
            triple: triple.clone(),
            g,
            h_img,
            s: Vec::new(),
            v_action,
            v_dims,
        };
        r.s = r.centralizer_cartan(seed)?;
        Ok(r)
    }

    pub fn dim_g(&self) -> usize {
        self.g.iter().map(|f| f.dim()).sum()
    }

    pub fn dim_borel(&self) -> usize {
        self.g.iter().map(|f| f.rank() + f.num_positive()).sum()
    }

    pub fn num_negative(&self) -> usize {
        self.g.iter().map(|f| f.num_positive()).sum()
    }

    pub fn dim_h(&self) -> usize {
        self.h_img.len()
    }

    pub fn dim_hbar(&self) -> usize {
        self.h_img.len() + self.s.len()
    }

    pub fn dim_v(&self) -> usize {
        self.v_dims.iter().sum()
    }

    /// Basis of `h̄ = h + s`.
    pub fn hbar(&self) -> Vec<Block<F>> {
        self.h_img.iter().chain(&self.s).cloned().collect()
    }

    pub fn coords(&self, x: &Block<F>) -> Vec<F> {
        self.g.iter().zip(x).flat_map(|(r, m)| r.coords(m)).collect()
    }

    pub fn element(&self, c: &[F]) -> Block<F> {
        let mut out = Vec::with_capacity(self.g.len());
        let mut off = 0;
        for r in &self.g {
            let mut m = Matrix::zeros(r.n, r.n);
            for (k, b) in r.basis.iter().enumerate() {
                if !c[off + k].is_zero() {
                    m.add_scaled(&c[off + k], b);
                }
            }
            off += r.dim();
            out.push(m);
        }
        out
    }

    fn basis_element(&self, global: usize) -> Block<F> {
        let mut c = vec![F::zero(); self.dim_g()];
        c[global] = F::one();
        self.element(&c)
    }

    /// Centralizer of `h` in `g`, as coordinate vectors. It is the sum of the
    /// centralizers in the simple factors of `g`.
    pub fn centralizer(&self) -> Vec<Vec<F>> {
        let n = self.dim_g();
        let gens: Vec<&Block<F>> = generator_indices(&self.triple.h).into_iter().map(|i| &self.h_img[i]).collect();
        let mut out = Vec::new();
        let mut off = 0;
        for (k, r) in self.g.iter().enumerate() {
            let d = r.dim();
            let local: Vec<&Matrix<F>> = gens.iter().map(|g| &g[k]).filter(|m| !m.is_zero()).collect();
            let ker: Vec<Vec<F>> = if local.is_empty() {
                (0..d).map(|i| (0..d).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
            } else {
                let cols: Vec<Vec<F>> = r
                    .basis
                    .iter()
                    .map(|b| local.iter().flat_map(|g| r.coords(&b.mul(g).sub(&g.mul(b)))).collect())
                    .collect();
                nullspace(transpose(&cols), d)
            };
            for c in ker {
                let mut v = vec![F::zero(); n];
                v[off..off + d].clone_from_slice(&c);
                out.push(v);
            }
            off += d;
        }
        out
    }

    fn centralizer_cartan(&self, seed: u64) -> Result<Vec<Block<F>>, Error> {
        let c: Vec<Block<F>> = self.centralizer().iter().map(|v| self.element(v)).collect();
        if c.is_empty() || is_abelian(&c) {
            return Ok(c);
        }
        let mut rng = trial_rng(seed, SETUP_STREAM);
        for _ in 0..8 {
            let coef: Vec<F> = (0..c.len()).map(|_| F::from_i64(rng.gen_range(-99..=99))).collect();
            let y = combine_blocks(&c, &coef);
            let cols: Vec<Vec<F>> = c.iter().map(|ci| self.coords(&bracket(ci, &y))).collect();
            let ker = nullspace(transpose(&cols), c.len());
            let s: Vec<Block<F>> = ker.iter().map(|k| combine_blocks(&c, k)).collect();
            if is_abelian(&s) {
                return Ok(s);
            }
        }
        Err(Error::Invalid("no regular element found in the centralizer".into()))
    }

    /// `x = prod exp(t f_a)` per factor and its inverse.
    fn group_element(&self, params: &[i64]) -> (Block<F>, Block<F>) {
        let mut k = 0;
        let mut x = Vec::new();
        let mut xi = Vec::new();
        for r in &self.g {
            let mut a = Matrix::identity(r.n);
            let mut b = Matrix::identity(r.n);
            let mut exps = Vec::new();
            for p in 0..r.num_positive() {
                let t = F::from_i64(params[k]);
                k += 1;
                let f = &r.basis[r.f_index(p)];
                exps.push((f.scale(&t).exp_nilpotent(), f.scale(&t.neg()).exp_nilpotent()));
            }
            for (e, _) in &exps {
                a = a.mul(e);
            }
            for (_, e) in exps.iter().rev() {
                b = b.mul(e);
            }
            x.push(a);
            xi.push(b);
        }
        (x, xi)
    }

    /// Negative-root coordinates of `Ad(x) ξ` for each basis element `ξ` of `h̄`, as rows
    /// indexed by negative roots.
    fn projected_hbar(&self, x: &Block<F>, xi: &Block<F>) -> Vec<Vec<F>> {
        let hbar = self.hbar();
        let cols: Vec<Vec<F>> = hbar
            .iter()
            .map(|e| {
                let mut out = Vec::new();
                for (j, r) in self.g.iter().enumerate() {
                    let y = x[j].mul(&e[j]).mul(&xi[j]);
                    let c = r.coords(&y);
                    out.extend((0..r.num_positive()).map(|p| c[r.f_index(p)].clone()));
                }
                out
            })
            .collect();
        transpose_with_height(&cols, self.num_negative())
    }

    /// Ranks at the point determined by `params` and `vector`; `z0` replaces the full
    /// torus `z` (rows are grading coordinates).
    pub fn ranks_at(&self, params: &[i64], vector: &[i64], z0: Option<&[Vec<i64>]>) -> (usize, usize) {
        let (x, xi) = self.group_element(params);
        let m = self.projected_hbar(&x, &xi);
        let pair_rank = rank_of_rows(m.clone());
        if self.dim_v() == 0 {
            return (pair_rank, 0);
        }
        let ker = nullspace(m, self.dim_hbar());
        let v: Vec<F> = vector.iter().map(|&a| F::from_i64(a)).collect();
        // rho(h_b) v for every basis element of h.
        let mut off = 0;
        let mut pieces: Vec<(usize, usize)> = Vec::new();
        for &d in &self.v_dims {
            pieces.push((off, d));
            off += d;
        }
        let hv: Vec<Vec<F>> = (0..self.dim_h())
            .map(|b| {
                let mut out = Vec::with_capacity(self.dim_v());
                for (s, &(o, d)) in pieces.iter().enumerate() {
                    out.extend(self.v_action[s][b].apply(&v[o..o + d]));
                }
                out
            })
            .collect();
        let mut rows: Vec<Vec<F>> = ker
            .iter()
            .map(|k| {
                let mut w = vec![F::zero(); self.dim_v()];
                for (b, c) in k[..self.dim_h()].iter().enumerate() {
                    if !c.is_zero() {
                        for (wi, hi) in w.iter_mut().zip(&hv[b]) {
                            *wi = wi.add(&c.mul(hi));
                        }
                    }
                }
                w
            })
            .collect();
        let grading: Vec<Vec<i64>> = match z0 {
            Some(z) => z.to_vec(),
            None => (0..pieces.len())
                .map(|s| (0..pieces.len()).map(|t| i64::from(s == t)).collect())
                .collect(),
        };
        for zrow in &grading {
            let mut w = Vec::with_capacity(self.dim_v());
            for (s, &(o, d)) in pieces.iter().enumerate() {
                let c = F::from_i64(zrow[s]);
                w.extend(v[o..o + d].iter().map(|a| a.mul(&c)));
            }
            rows.push(w);
        }
        (pair_rank, rank_of_rows(rows))
    }
}

pub fn bracket<F: Field>(a: &Block<F>, b: &Block<F>) -> Block<F> {
    a.iter().zip(b).map(|(x, y)| x.bracket(y)).collect()
}

pub fn combine_blocks<F: Field>(xs: &[Block<F>], c: &[F]) -> Block<F> {
    let mut out: Block<F> = xs[0].iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect();
    for (x, a) in xs.iter().zip(c) {
        if a.is_zero() {
            continue;
        }
        for (o, m) in out.iter_mut().zip(x) {
            o.add_scaled(a, m);
        }
    }
    out
}

fn is_abelian<F: Field>(xs: &[Block<F>]) -> bool {
    xs.iter()
        .enumerate()
        .all(|(i, a)| xs[i + 1..].iter().all(|b| bracket(a, b).iter().all(|m| m.is_zero())))
}

fn transpose<F: Field>(cols: &[Vec<F>]) -> Vec<Vec<F>> {
    let h = cols.first().map(|c| c.len()).unwrap_or(0);
    transpose_with_height(cols, h)
}

fn transpose_with_height<F: Field>(cols: &[Vec<F>], h: usize) -> Vec<Vec<F>> {
    (0..h).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Random point for a trial: group parameters and a vector of `V`.
fn sample_point(seed: u64, trial: usize, nparams: usize, dim_v: usize) -> (Vec<i64>, Vec<i64>) {
    let mut rng = trial_rng(seed, trial as u64);
    let params = (0..nparams).map(|_| nonzero_small(&mut rng)).collect();
    let vector = (0..dim_v).map(|_| rng.gen_range(-99..=99)).collect();
    (params, vector)
}

/// Multiplicity certificate: a constituent of `Sym^d V` repeated as a module of `h + z0`,
/// where `z0` is given by rows in grading coordinates (`None` for the full torus).
pub fn multiplicity_certificate(
    h: &SemisimpleAlgebra,
    v: &ModuleExpr,
    max_degree: usize,
    z0: Option<&[Vec<i64>]>,
) -> Result<Option<Certificate>, Error> {
    use std::collections::BTreeMap;
    let mut seen: BTreeMap<(Irrep, Vec<i64>), (usize, BigInt)> = BTreeMap::new();
    if let Some(z) = z0 {
        // Constants, in degree 0.
        seen.insert((Irrep::trivial(h), vec![0; z.len()]), (0, BigInt::one()));
    }
    for d in 1..=max_degree {
        for c in sym_power_decompose(h, v, d)? {
            let toral = match z0 {
                None => c.toral.clone(),
                Some(z) => z.iter().map(|row| row.iter().zip(&c.toral).map(|(a, b)| a * b).sum()).collect(),
            };
            if z0.is_none() {
                if c.multiplicity > BigInt::one() {
                    return Ok(Some(Certificate::Multiplicity {
                        degree: d,
                        weight: c.highest_weight,
                        toral,
                        multiplicity: c.multiplicity,
                    }));
                }
                continue;
            }
            let e = seen.entry((c.highest_weight.clone(), toral.clone())).or_insert((d, BigInt::from(0)));
            e.1 += &c.multiplicity;
            if e.1 > BigInt::one() {
                return Ok(Some(Certificate::Multiplicity {
                    degree: d,
                    weight: c.highest_weight,
                    toral,
                    multiplicity: e.1.clone(),
                }));
            }
        }
    }
    Ok(None)
}

fn num_params(t: &Triple) -> usize {
    t.g.factors.iter().map(|f| roots(*f).positive.len()).sum()
}

/// Decides sphericality of a triple (condition (a) only when `V = 0`).
pub fn check_triple(t: &Triple, cfg: &OracleConfig) -> Result<Verdict, Error> {
    check_triple_with(t, cfg, None)
}

/// As [`check_triple`] with `z` replaced by the span of the rows of `z0`.
pub fn check_triple_with(t: &Triple, cfg: &OracleConfig, z0: Option<&[Vec<i64>]>) -> Result<Verdict, Error> {
    let r: Realized<Fp> = Realized::new(t, cfg.seed)?;
    let nz = match z0 {
        Some(z) => rank_of_rows(z.iter().map(|row| row.iter().map(|&a| Q::from_i64(a)).collect()).collect()),
        None => t.v.summands.len(),
    };
    let pair_needed = r.num_negative();
    let module_needed = r.dim_v();
    if r.dim_borel() + r.dim_hbar() < r.dim_g() {
        return Ok(Verdict {
            status: Status::NotSphericalCertified,
            certificate: Certificate::DimensionBound {
                what: "dim b + dim h̄ vs dim g".into(),
                available: r.dim_borel() + r.dim_hbar(),
                needed: r.dim_g(),
            },
            trials_used: 0,
        });
    }
    let slack = r.dim_borel() + r.dim_hbar() - r.dim_g() + nz;
    if slack < module_needed {
        return Ok(Verdict {
            status: Status::NotSphericalCertified,
            certificate: Certificate::DimensionBound {
                what: "dim (b ∩ h̄) + dim z vs dim V".into(),
                available: slack,
                needed: module_needed,
            },
            trials_used: 0,
        });
    }
    let np = num_params(t);
    let mut best = (0, 0);
    for trial in 0..cfg.trials.max(1) {
        let (params, vector) = sample_point(cfg.seed, trial, np, module_needed);
        let (pr, mr) = r.ranks_at(&params, &vector, z0);
        best = (best.0.max(pr), if pr == pair_needed { best.1.max(mr) } else { best.1 });
        if pr == pair_needed && mr == module_needed {
            return Ok(Verdict {
                status: Status::SphericalCertified,
                certificate: Certificate::Witness(GenericWitness {
                    seed: cfg.seed,
                    trial,
                    group_params: params,
                    vector,
                    pair_rank: pr,
                    pair_needed,
                    module_rank: mr,
                    module_needed,
                }),
                trials_used: trial + 1,
            });
        }
    }
    let trials_used = cfg.trials.max(1);
    if best.0 == pair_needed && module_needed > 0 {
        if let Some(c) = multiplicity_certificate(&t.h, &t.v, cfg.sym_degree, z0)? {
            return Ok(Verdict {
                status: Status::NotSphericalCertified,
                certificate: c,
                trials_used,
            });
        }
    }
    Ok(Verdict {
        status: Status::NotSphericalProbable,
        certificate: Certificate::RankDeficit {
            pair_rank: best.0,
            pair_needed,
            module_rank: best.1,
            module_needed,
        },
        trials_used,
    })
}

/// Decides sphericality of the pair `(g, h)`.
pub fn check_pair(t: &Triple, cfg: &OracleConfig) -> Result<Verdict, Error> {
    check_triple(&t.pair(), cfg)
}

/// Whether some trial certifies the triple; no negative certificates are produced.
pub fn quick_spherical(t: &Triple, cfg: &OracleConfig) -> Result<bool, Error> {
    let r: Realized<Fp> = Realized::new(t, cfg.seed)?;
    Ok(any_trial(&r, t, cfg))
}

/// Condition (a) for `h` itself, without the central extension `s`.
pub fn pair_spherical_without_s(t: &Triple, cfg: &OracleConfig) -> Result<bool, Error> {
    let mut r: Realized<Fp> = Realized::new(&t.pair(), cfg.seed)?;
    r.s.clear();
    Ok(any_trial(&r, &t.pair(), cfg))
}

fn any_trial(r: &Realized<Fp>, t: &Triple, cfg: &OracleConfig) -> bool {
    if r.dim_borel() + r.dim_hbar() < r.dim_g() {
        return false;
    }
    let np = num_params(t);
    (0..cfg.trials.max(1)).any(|trial| {
        let (params, vector) = sample_point(cfg.seed, trial, np, r.dim_v());
        r.ranks_at(&params, &vector, None) == (r.num_negative(), r.dim_v())
    })
}

/// Sphericality of `V` for `h + z0` (`z0` rows in grading coordinates).
pub fn check_c_subspace(h: &SemisimpleAlgebra, v: &ModuleExpr, z0: &[Vec<i64>], cfg: &OracleConfig) -> Result<Verdict, Error> {
    let t = Triple::fiber(h.clone(), v.clone());
    if z0.is_empty() {
        let zero: Vec<Vec<i64>> = vec![vec![0; v.summands.len()]];
        return check_triple_with(&t, cfg, Some(&zero));
    }
    check_triple_with(&t, cfg, Some(z0))
}

/// Recomputes the ranks of a witness over `Q`.
pub fn replay_exact(t: &Triple, w: &GenericWitness, z0: Option<&[Vec<i64>]>) -> Result<(usize, usize), Error> {
    let r: Realized<Q> = Realized::new(t, w.seed)?;
    Ok(r.ranks_at(&w.group_params, &w.vector, z0))
}

/// Generic isotropy data of the pair `(g, h)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isotropy {
    pub dim_s: usize,
    /// Stabilizer in `h̄` of a generic point of `h̄⊥`.
    pub dim_lbar: usize,
    /// Its image `l` in `h`.
    pub dim_l: usize,
    pub derived_dim_l: usize,
    /// Stabilizer in `h` of a generic point of `h⊥` (without `s`).
    pub dim_lstar: usize,
    pub derived_dim_lstar: usize,
}

impl<F: Field> Realized<F> {
    /// Trace form on `g`, summed over factors.
    fn form(&self, a: &Block<F>, b: &Block<F>) -> F {
        a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc.add(&x.trace_product(y)))
    }

    /// Basis of the orthogonal complement of the span of `sub`.
    pub fn complement(&self, sub: &[Block<F>]) -> Vec<Block<F>> {
        let n = self.dim_g();
        let basis: Vec<Block<F>> = (0..n).map(|m| self.basis_element(m)).collect();
        let rows: Vec<Vec<F>> = sub.iter().map(|s| basis.iter().map(|b| self.form(s, b)).collect()).collect();
        if rows.is_empty() {
            return basis;
        }
        nullspace(rows, n).iter().map(|c| self.element(c)).collect()
    }

    /// Stabilizer in `span(alg)` of a random point of `perp`, the complement of `span(alg)`;
    /// returns coefficient vectors in `alg`.
    fn stabilizer(&self, alg: &[Block<F>], perp: &[Block<F>], rng: &mut ChaCha8Rng) -> Vec<Vec<F>> {
        let coef: Vec<F> = (0..perp.len()).map(|_| F::from_i64(rng.gen_range(-99..=99))).collect();
        if perp.is_empty() {
            return (0..alg.len())
                .map(|i| (0..alg.len()).map(|j| if i == j { F::one() } else { F::zero() }).collect())
                .collect();
        }
        let x = combine_blocks(perp, &coef);
        let cols: Vec<Vec<F>> = alg.iter().map(|a| self.coords(&bracket(a, &x))).collect();
        nullspace(transpose(&cols), alg.len())
    }

    /// Dimension of the span of `elems` and of its derived algebra. Brackets with two
    /// random elements come first; all pairs are only needed when they fall short.
    fn span_dims(&self, elems: &[Block<F>], rng: &mut ChaCha8Rng) -> (usize, usize) {
        if elems.is_empty() {
            return (0, 0);
        }
        let dim = rank_of_rows(elems.iter().map(|e| self.coords(e)).collect());
        let mut derived = Echelon::new();
        for _ in 0..2 {
            let coef: Vec<F> = (0..elems.len()).map(|_| F::from_i64(rng.gen_range(-99..=99))).collect();
            let y = combine_blocks(elems, &coef);
            for e in elems {
                if derived.rank() == dim {
                    return (dim, dim);
                }
                derived.push(self.coords(&bracket(e, &y)));
            }
        }
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                if derived.rank() == dim {
                    return (dim, dim);
                }
                derived.push(self.coords(&bracket(&elems[i], &elems[j])));
            }
        }
        (dim, derived.rank())
    }
}

/// Generic isotropy of `h̄` on `h̄⊥` and of `h` on `h⊥`, minimized over trials.
/// Stops early once two consecutive trials agree.
pub fn generic_isotropy(t: &Triple, cfg: &OracleConfig) -> Result<Isotropy, Error> {
    let r: Realized<Fp> = Realized::new(&t.pair(), cfg.seed)?;
    let hbar = r.hbar();
    let nh = r.dim_h();
    let (hbar_perp, h_perp) = (r.complement(&hbar), r.complement(&r.h_img));
    let mut best: Option<Isotropy> = None;
    let mut last: Option<Isotropy> = None;
    for trial in 0..cfg.trials.max(1) {
        let mut rng = trial_rng(cfg.seed, ISOTROPY_STREAM + trial as u64);
        let lbar = r.stabilizer(&hbar, &hbar_perp, &mut rng);
        let l: Vec<Block<Fp>> = lbar.iter().filter(|_| nh > 0).map(|c| combine_blocks(&r.h_img, &c[..nh])).collect();
        let (dim_l, derived_dim_l) = r.span_dims(&l, &mut rng);
        let lstar_c = r.stabilizer(&r.h_img, &h_perp, &mut rng);
        let lstar: Vec<Block<Fp>> = lstar_c.iter().map(|c| combine_blocks(&r.h_img, c)).collect();
        let (dim_lstar, derived_dim_lstar) = r.span_dims(&lstar, &mut rng);
        let cur = Isotropy {
            dim_s: r.s.len(),
            dim_lbar: lbar.len(),
            dim_l,
            derived_dim_l,
            dim_lstar,
            derived_dim_lstar,
        };
        let settled = last.as_ref() == Some(&cur);
        best = Some(match best {
            Some(b) if (b.dim_lbar, b.dim_lstar) <= (cur.dim_lbar, cur.dim_lstar) => b,
            _ => cur.clone(),
        });
        if settled {
            break;
        }
        last = Some(cur);
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Restriction, SemisimpleAlgebra};
    use crate::lie::SimpleFactor;

    fn alg(f: Vec<SimpleFactor>) -> SemisimpleAlgebra {
        SemisimpleAlgebra::new(f)
    }

    fn ir(w: Vec<Vec<i64>>) -> Irrep {
        Irrep { weights: w }
    }

    #[test]
    fn sl4_sp4_pair_and_isotropy() {
        let t = Triple::new(
            alg(vec![SimpleFactor::a(3)]),
            alg(vec![SimpleFactor::c(2)]),
            vec![Restriction::Module(vec![ir(vec![vec![1, 0]])])],
            ModuleExpr::zero(),
        )
        .unwrap();
        let cfg = OracleConfig::default();
        assert_eq!(check_pair(&t, &cfg).unwrap().status, Status::SphericalCertified);
        let iso = generic_isotropy(&t, &cfg).unwrap();
        assert_eq!((iso.dim_l, iso.derived_dim_l, iso.dim_s), (6, 6, 0));
    }

    #[test]
    fn fiber_modules() {
        let cfg = OracleConfig::default();
        let h = alg(vec![SimpleFactor::a(2)]);
        let t = Triple::fiber(h.clone(), ModuleExpr::new(vec![ir(vec![vec![1, 0]]), ir(vec![vec![0, 1]])]));
        let v = check_triple(&t, &cfg).unwrap();
        assert_eq!(v.status, Status::SphericalCertified);
        if let Certificate::Witness(w) = &v.certificate {
            assert_eq!(replay_exact(&t, w, None).unwrap(), (w.pair_rank, w.module_rank));
        }
        // c = C(1,-1): z0 = C(1,-1) fails, z0 = C(1,1) succeeds.
        let neg = check_c_subspace(&h, &t.v, &[vec![1, -1]], &cfg).unwrap();
        assert!(neg.status.is_negative(), "{neg:?}");
        let pos = check_c_subspace(&h, &t.v, &[vec![1, 1]], &cfg).unwrap();
        assert_eq!(pos.status, Status::SphericalCertified);
    }

    #[test]
    fn dimension_bound_negative() {
        let t = Triple::new(
            alg(vec![SimpleFactor::a(3)]),
            alg(vec![SimpleFactor::c(2)]),
            vec![Restriction::Module(vec![ir(vec![vec![1, 0]])])],
            ModuleExpr::new(vec![ir(vec![vec![1, 0]]), ir(vec![vec![1, 0]])]),
        )
        .unwrap();
        let v = check_triple(&t, &OracleConfig::default()).unwrap();
        assert_eq!(v.status, Status::NotSphericalCertified);
        assert!(matches!(v.certificate, Certificate::DimensionBound { .. }));
    }

    #[test]
    fn so7_sl3_through_g2_has_torus() {
        let t = Triple::new(
            alg(vec![SimpleFactor::b(3)]),
            alg(vec![SimpleFactor::a(2)]),
            vec![Restriction::Module(vec![ir(vec![vec![1, 0]]), ir(vec![vec![0, 1]]), ir(vec![vec![0, 0]])])],
            ModuleExpr::zero(),
        )
        .unwrap();
        let r: Realized<Fp> = Realized::new(&t, 42).unwrap();
        assert_eq!(r.s.len(), 1);
        assert_eq!(check_pair(&t, &OracleConfig::default()).unwrap().status, Status::SphericalCertified);
    }
}
