//! Classification: decomposition, rule reduction, database lookup with an oracle
//! fallback, principal subalgebras, enumeration and the randomized gluing search.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{dual_weight, Irrep, ModuleExpr, Restriction, SemisimpleAlgebra, Triple};
use crate::diagram::{ComponentKind, Diagram};
use crate::dsl;
use crate::error::Error;
use crate::normal::normalize;
use crate::oracle::{self, OracleConfig, Status, Verdict};
use crate::rules::{self, Step};
use crate::tables::{database, Binding, Instance, Principal, Table};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Provenance {
    Trivial,
    Table { binding: Binding },
    /// The component is obtained from `reduced` (an instance of `binding`) by `steps`.
    Rules { binding: Binding, reduced: String, steps: Vec<Step> },
    OracleOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Decision {
    Spherical,
    NotSpherical,
    NotSphericalProbable,
    Undecided,
}

impl Decision {
    fn from_status(s: Status) -> Decision {
        match s {
            Status::SphericalCertified => Decision::Spherical,
            Status::NotSphericalCertified => Decision::NotSpherical,
            Status::NotSphericalProbable => Decision::NotSphericalProbable,
            Status::Undecided => Decision::Undecided,
        }
    }

    pub fn is_spherical(self) -> bool {
        self == Decision::Spherical
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentResult {
    pub kind: ComponentKind,
    pub triple: String,
    pub normal_form: String,
    pub provenance: Vec<Provenance>,
    pub verdict: Option<Verdict>,
    pub decision: Decision,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationResult {
    pub input: String,
    pub normal_form: String,
    pub components: Vec<ComponentResult>,
    pub decision: Decision,
    pub discrepancies: Vec<String>,
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Options {
    pub oracle: OracleConfig,
    /// Run the oracle on database hits as well.
    pub cross_check: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { oracle: OracleConfig::default(), cross_check: false }
    }
}

/// Database matches of a single non-trivial component.
pub fn provenance(t: &Triple) -> Vec<Provenance> {
    let db = database();
    if t.v.is_zero() {
        return db
            .lookup(t, &[Table::SimplePairs, Table::NonSimplePairs])
            .into_iter()
            .map(|i| Provenance::Table { binding: i.binding })
            .collect();
    }
    let (red, steps) = rules::reduce(t);
    let mut out: Vec<Provenance> = db
        .lookup(&red, &[Table::Modules, Table::Triples])
        .into_iter()
        .map(|i| {
            if steps.is_empty() {
                Provenance::Table { binding: i.binding }
            } else {
                Provenance::Rules { binding: i.binding, reduced: dsl::print(&red), steps: steps.clone() }
            }
        })
        .collect();
    if out.is_empty() && !steps.is_empty() {
        out = db
            .lookup(t, &[Table::Modules, Table::Triples])
            .into_iter()
            .map(|i| Provenance::Table { binding: i.binding })
            .collect();
    }
    out
}

fn classify_component(t: &Triple, opts: &Options, disc: &mut Vec<String>) -> Result<(Vec<Provenance>, Option<Verdict>, Decision), Error> {
    let prov = provenance(t);
    let text = dsl::print(t);
    if !prov.is_empty() {
        let mut verdict = None;
        if opts.cross_check && t.is_realizable() {
            let v = oracle::check_triple(t, &opts.oracle)?;
            if v.status.is_negative() {
                disc.push(format!("DISCREPANCY: {text} is in the database but the oracle says {:?}", v.status));
            }
            verdict = Some(v);
        }
        return Ok((prov, verdict, Decision::Spherical));
    }
    if !t.is_realizable() {
        return Err(Error::UnsupportedExceptional(format!("{text} has no table match")));
    }
    let v = oracle::check_triple(t, &opts.oracle)?;
    if v.status == Status::SphericalCertified {
        disc.push(format!("DISCREPANCY: {text} has no table match but the oracle certifies it spherical"));
    }
    let d = Decision::from_status(v.status);
    Ok((vec![Provenance::OracleOnly], Some(v), d))
}

/// Decides sphericality of a triple, component by component.
pub fn classify(t: &Triple, opts: &Options) -> Result<ClassificationResult, Error> {
    t.validate()?;
    let mut discrepancies = Vec::new();
    let mut components = Vec::new();
    for c in Diagram::new(t).decompose() {
        let (provenance, verdict, decision) = if c.kind == ComponentKind::TrivialIsolated {
            (vec![Provenance::Trivial], None, Decision::Spherical)
        } else {
            classify_component(&c.triple, opts, &mut discrepancies)?
        };
        components.push(ComponentResult {
            kind: c.kind,
            triple: dsl::print(&c.triple),
            normal_form: dsl::print(&normalize(&c.triple)),
            provenance,
            verdict,
            decision,
        });
    }
    let decision = components.iter().map(|c| c.decision).max().unwrap_or(Decision::Spherical);
    Ok(ClassificationResult {
        input: dsl::print(t),
        normal_form: dsl::print(&normalize(t)),
        components,
        decision,
        discrepancies,
    })
}

/// Rebuilds a component from a provenance record.
pub fn replay(p: &Provenance) -> Result<Option<Triple>, Error> {
    let db = database();
    Ok(match p {
        Provenance::Table { binding } => Some(db.instantiate(&binding.entry, binding.variant, &binding.params)?.triple),
        Provenance::Rules { reduced, steps, .. } => {
            let mut t = dsl::parse_triple(reduced)?;
            for s in steps {
                t = rules::apply(&t, s)?;
            }
            Some(t)
        }
        _ => None,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DatabasePrincipal {
    pub binding: Binding,
    pub star: bool,
    pub principal: Principal,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrincipalRecord {
    pub pair: String,
    /// `dim s`, from the centralizer computation.
    pub dim_s: Option<usize>,
    /// Generic isotropy of `h` on `h⊥`, plus `t1` when `s = t1` and `G/H` is spherical.
    pub dim: Option<usize>,
    pub derived_dim: Option<usize>,
    /// Image in `h` of the generic isotropy of `h + s` on its complement.
    pub direct_dim: Option<usize>,
    pub direct_derived_dim: Option<usize>,
    pub spherical_without_s: Option<bool>,
    pub database: Vec<DatabasePrincipal>,
}

impl PrincipalRecord {
    pub fn star(&self) -> bool {
        self.dim_s.map_or_else(|| self.database.iter().any(|d| d.star), |s| s > 0)
    }
}

/// Principal subalgebra of the pair `(g, h)` of `t`.
pub fn principal_subalgebra(t: &Triple, cfg: &OracleConfig) -> Result<PrincipalRecord, Error> {
    let pair = t.pair();
    let db = database();
    let database = db
        .lookup(&pair, &[Table::SimplePairs, Table::NonSimplePairs, Table::BaseComponents])
        .into_iter()
        .filter_map(|i: Instance| {
            let note = db.entry(&i.binding.entry).and_then(|e| e.principal_note.clone());
            i.principal.map(|p| DatabasePrincipal { binding: i.binding, star: i.star, principal: p, note })
        })
        .collect();
    let mut rec = PrincipalRecord {
        pair: dsl::print(&pair),
        dim_s: None,
        dim: None,
        derived_dim: None,
        direct_dim: None,
        direct_derived_dim: None,
        spherical_without_s: None,
        database,
    };
    if pair.is_realizable() {
        let iso = oracle::generic_isotropy(&pair, cfg)?;
        let bare = oracle::pair_spherical_without_s(&pair, cfg)?;
        rec.dim_s = Some(iso.dim_s);
        rec.dim = Some(iso.dim_lstar + usize::from(iso.dim_s == 1 && bare));
        rec.derived_dim = Some(iso.derived_dim_lstar);
        rec.direct_dim = Some(iso.dim_l);
        rec.direct_derived_dim = Some(iso.derived_dim_l);
        rec.spherical_without_s = Some(bare);
    }
    Ok(rec)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EnumItem {
    pub normal_form: String,
    #[serde(skip)]
    pub triple: Triple,
    /// Table bindings, with the rule steps applied to them.
    pub sources: Vec<String>,
    pub verdict: Option<Status>,
}

/// Primitive triples of Tables 1, 2, 4, 5 with factor ranks at most `max_rank`, closed
/// under the inference rules, deduplicated up to isomorphism.
pub fn enumerate(max_rank: usize) -> Vec<EnumItem> {
    let db = database();
    let insts = db.instances(max_rank);
    let wanted = [Table::Modules, Table::Triples, Table::SimplePairs, Table::NonSimplePairs];
    let found: Vec<(String, Triple, String)> = insts
        .par_iter()
        .filter(|i| wanted.contains(&db.entry(&i.binding.entry).unwrap().table))
        .flat_map_iter(|i| {
            rules::expand(&i.triple, max_rank).into_iter().filter_map(move |(t, steps)| {
                if !Diagram::new(&t).is_primitive() {
                    return None;
                }
                let n = normalize(&t);
                let mut src = i.binding.to_string();
                for s in &steps {
                    src.push_str(&format!(" +rule{}@{}", if s.rule == rules::Rule::One { 1 } else { 2 }, s.site));
                }
                Some((dsl::print(&n), n, src))
            })
        })
        .collect();
    let mut map: BTreeMap<String, EnumItem> = BTreeMap::new();
    for (text, t, src) in found {
        let e = map.entry(text.clone()).or_insert_with(|| EnumItem {
            normal_form: text,
            triple: t,
            sources: Vec::new(),
            verdict: None,
        });
        e.sources.push(src);
    }
    let mut out: Vec<EnumItem> = map.into_values().collect();
    for e in out.iter_mut() {
        e.sources.sort();
        e.sources.dedup();
    }
    out
}

/// Runs the oracle on every realizable item.
pub fn verify_items(items: &mut [EnumItem], cfg: &OracleConfig) {
    items.par_iter_mut().for_each(|e| {
        if e.triple.is_realizable() {
            e.verdict = oracle::check_triple(&e.triple, cfg).ok().map(|v| v.status);
        }
    });
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureReport {
    pub items: usize,
    pub not_tree: Vec<String>,
    /// Items with `V != 0` and a base component outside Table 6.
    pub unconfined: Vec<String>,
}

/// Tree-likeness and base-component confinement of enumerated items.
pub fn check_structure(items: &[EnumItem]) -> StructureReport {
    let db = database();
    let per: Vec<(bool, bool)> = items
        .par_iter()
        .map(|e| {
            let d = Diagram::new(&e.triple);
            let confined = e.triple.v.is_zero()
                || d.base_components().iter().all(|b| !db.lookup(b, &[Table::BaseComponents]).is_empty());
            (d.is_tree(), confined)
        })
        .collect();
    let mut r = StructureReport { items: items.len(), ..Default::default() };
    for (e, (tree, confined)) in items.iter().zip(per) {
        if !tree {
            r.not_tree.push(e.normal_form.clone());
        }
        if !confined {
            r.unconfined.push(e.normal_form.clone());
        }
    }
    r
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub seed: u64,
    pub samples: usize,
    pub distinct: usize,
    pub certified: usize,
    pub missing: Vec<String>,
}

/// Glues a base pair and a fiber triple `(k, k, U)` at `h`-factor `j` of the base and
/// factor `k` of the fiber; `dual` replaces the glued weights by their duals.
pub fn glue(base: &Triple, fiber: &Triple, j: usize, k: usize, dual: bool) -> Result<Triple, Error> {
    if base.h.factors.get(j) != fiber.h.factors.get(k) {
        return Err(Error::NotApplicable("glued factors differ".into()));
    }
    let others: Vec<usize> = (0..fiber.h.factors.len()).filter(|&x| x != k).collect();
    let nb = base.h.factors.len();
    let mut hf = base.h.factors.clone();
    hf.extend(others.iter().map(|&x| fiber.h.factors[x]));
    let h = SemisimpleAlgebra::new(hf);
    let mut gf = base.g.factors.clone();
    gf.extend(others.iter().map(|&x| fiber.h.factors[x]));
    let g = SemisimpleAlgebra::new(gf);
    let pad = |w: &Irrep| -> Irrep {
        let mut weights = w.weights.clone();
        weights.extend(others.iter().map(|&x| vec![0; fiber.h.factors[x].rank]));
        Irrep { weights }
    };
    let mut embedding: Vec<Restriction> = base
        .embedding
        .iter()
        .map(|r| match r {
            Restriction::Module(p) => Restriction::Module(p.iter().map(pad).collect()),
            other => other.clone(),
        })
        .collect();
    for n in 0..others.len() {
        embedding.push(Restriction::Module(vec![Irrep::fundamental(&h, nb + n, 1)]));
    }
    let v = ModuleExpr::new(
        fiber
            .v
            .summands
            .iter()
            .map(|s| {
                let mut w: Vec<Vec<i64>> = base.h.factors.iter().map(|f| vec![0; f.rank]).collect();
                w[j] = if dual { dual_weight(fiber.h.factors[k], &s.weights[k]) } else { s.weights[k].clone() };
                w.extend(others.iter().map(|&x| s.weights[x].clone()));
                Irrep { weights: w }
            })
            .collect(),
    );
    Triple::new(g, h, embedding, v)
}

/// Samples gluings of Table 6 base components with Table 1 modules and checks that
/// every primitive triple the oracle certifies spherical is enumerated.
pub fn completeness_search(max_rank: usize, samples: usize, cfg: &OracleConfig) -> SearchReport {
    let db = database();
    let insts = db.instances(max_rank);
    let pick = |t: Table| -> Vec<&Instance> {
        insts
            .iter()
            .filter(|i| db.entry(&i.binding.entry).unwrap().table == t && i.triple.is_realizable())
            .collect()
    };
    let bases = pick(Table::BaseComponents);
    let fibers = pick(Table::Modules);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut candidates: BTreeMap<String, Triple> = BTreeMap::new();
    let mut drawn = 0;
    let mut attempts = 0;
    while drawn < samples && attempts < samples * 50 {
        attempts += 1;
        let b = &bases[rng.gen_range(0..bases.len())].triple;
        let f = &fibers[rng.gen_range(0..fibers.len())].triple;
        let matches: Vec<(usize, usize)> = (0..b.h.factors.len())
            .flat_map(|j| (0..f.h.factors.len()).map(move |k| (j, k)))
            .filter(|&(j, k)| b.h.factors[j] == f.h.factors[k])
            .collect();
        if matches.is_empty() {
            continue;
        }
        let (j, k) = matches[rng.gen_range(0..matches.len())];
        let dual = rng.gen_bool(0.5);
        drawn += 1;
        if let Ok(t) = glue(b, f, j, k, dual) {
            if t.max_rank() <= max_rank && Diagram::new(&t).is_primitive() {
                let n = normalize(&t);
                candidates.entry(dsl::print(&n)).or_insert(n);
            }
        }
    }
    let known: BTreeSet<String> = enumerate(max_rank).into_iter().map(|e| e.normal_form).collect();
    let list: Vec<(&String, &Triple)> = candidates.iter().collect();
    let certified: Vec<(String, bool)> = list
        .par_iter()
        .filter_map(|(s, t)| match oracle::quick_spherical(t, cfg) {
            Ok(true) => Some(((*s).clone(), known.contains(*s))),
            _ => None,
        })
        .collect();
    SearchReport {
        seed: cfg.seed,
        samples: drawn,
        distinct: candidates.len(),
        certified: certified.len(),
        missing: certified.into_iter().filter(|(_, k)| !k).map(|(s, _)| s).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> Options {
        Options::default()
    }

    #[test]
    fn table_two_hit_with_rule_one() {
        let t = dsl::parse_triple("(sp(6)+sl(3), sp(4)+sl(2)+sl(3), w1' w1'')").unwrap();
        let r = classify(&t, &opts()).unwrap();
        assert_eq!(r.decision, Decision::Spherical);
        let p = &r.components[0].provenance[0];
        let rebuilt = replay(p).unwrap().unwrap();
        assert_eq!(normalize(&rebuilt), normalize(&t));
    }

    #[test]
    fn dimension_negative() {
        let t = dsl::parse_triple("(sl(4), sp(4), w1 + w1)").unwrap();
        let r = classify(&t, &opts()).unwrap();
        assert_eq!(r.decision, Decision::NotSpherical);
        assert!(r.discrepancies.is_empty());
    }

    #[test]
    fn product_with_trivial_part() {
        let a = dsl::parse_triple("(sl(4), sp(4), w1)").unwrap();
        let b = dsl::parse_triple("(sl(3), sl(3), 0)").unwrap();
        let t = crate::diagram::product(&a, &b);
        let r = classify(&t, &opts()).unwrap();
        assert_eq!(r.decision, Decision::Spherical);
        assert_eq!(r.components.len(), 2);
        assert_eq!(r.components[1].kind, ComponentKind::TrivialIsolated);
    }

    #[test]
    fn principal_examples() {
        let cfg = OracleConfig::default();
        let t = dsl::parse_triple("(sl(4), sl(3), 0)").unwrap();
        let p = principal_subalgebra(&t, &cfg).unwrap();
        assert_eq!((p.dim, p.derived_dim), (Some(4), Some(3)));
        assert!(p.star());
        let t = dsl::parse_triple("(e6, f4, 0) [embed=w4 + 1]").unwrap();
        let p = principal_subalgebra(&t, &cfg).unwrap();
        assert_eq!(p.dim, None);
        assert_eq!(p.database[0].principal.dim, 28);
    }

    #[test]
    fn enumerate_small() {
        let one = enumerate(1);
        let texts: Vec<&str> = one.iter().map(|e| e.normal_form.as_str()).collect();
        assert!(texts.contains(&"(sl(2), , 0)"), "{texts:?}");
        assert!(texts.contains(&"(sl(2), sl(2), w1)"), "{texts:?}");
        let two: BTreeSet<String> = enumerate(2).into_iter().map(|e| e.normal_form).collect();
        assert!(one.iter().all(|e| two.contains(&e.normal_form)));
    }
}
