//! The nine acceptance criteria, one pass/fail line each.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spherical::algebra::Triple;
use spherical::classify::{check_structure, completeness_search, enumerate};
use spherical::diagram::random_operation;
use spherical::dsl::parse_triple;
use spherical::normal::normalize;
use spherical::oracle::{check_triple, Certificate, OracleConfig, Status};
use spherical::rules::{self, Rule, Step};
use spherical::tables::{database, Table};
use spherical::verify::{self, Check};

struct Outcome {
    ok: bool,
    detail: String,
}

fn failures(cs: &[Check]) -> Vec<String> {
    cs.iter().filter(|c| !c.ok).map(|c| format!("{} {}: expected {}, found {}", c.id, c.triple, c.expected, c.found)).collect()
}

fn from_checks(cs: &[Check], extra: String) -> Outcome {
    let f = failures(cs);
    Outcome { ok: f.is_empty(), detail: format!("{} checks, {} failed{extra}; {}", cs.len(), f.len(), f.join("; ")) }
}

fn modules(cfg: &OracleConfig) -> Outcome {
    let t = Instant::now();
    let cs = verify::verify_modules(8, cfg);
    let db = database();
    let only: Vec<String> = db
        .table(Table::Modules)
        .flat_map(|e| db.instances_of(e, 8))
        .filter(|i| !i.triple.is_realizable())
        .map(|i| i.binding.to_string())
        .collect();
    let took = t.elapsed();
    let mut o = from_checks(&cs, format!(", {:.0?}, database-only: {}", took, only.join(" ")));
    o.ok &= took < Duration::from_secs(600);
    o
}

fn triples(cfg: &OracleConfig) -> Outcome {
    let (cs, only) = verify::verify_triples(cfg);
    from_checks(&cs, format!(", database-only: {}", only.join(" ")))
}

fn principal(cfg: &OracleConfig) -> Outcome {
    let (cs, only) = verify::verify_principal(8, cfg);
    from_checks(&cs, format!(", database-only: {}", only.len()))
}

fn c_subspaces(cfg: &OracleConfig) -> Outcome {
    from_checks(&verify::verify_c_subspaces(cfg), String::new())
}

fn sites(t: &Triple) -> Vec<Step> {
    let mut out = Vec::new();
    for j in rules::rule_sites(t) {
        for m in 1..=3 {
            out.push(Step { rule: Rule::One, site: j, param: vec![m] });
        }
        let carriers: Vec<usize> = (0..t.v.summands.len()).filter(|&k| t.v.summands[k].weights[j].first() == Some(&1)).collect();
        for mask in 0..(1u32 << carriers.len().min(3)) {
            let w3 = (0..carriers.len().min(3)).filter(|b| mask >> b & 1 == 1).map(|b| carriers[b]).collect();
            out.push(Step { rule: Rule::Two, site: j, param: w3 });
        }
    }
    out
}

fn with_extra_summand(t: &Triple, j: usize) -> Option<Triple> {
    let s = t.v.summands.iter().find(|s| s.weights[j].iter().any(|&x| x != 0))?.clone();
    let mut out = t.clone();
    out.v.summands.push(s);
    Some(out)
}

fn rule_equivalence(cfg: &OracleConfig) -> Outcome {
    let db = database();
    let mut bases = Vec::new();
    for t in [Table::Modules, Table::Triples] {
        for e in db.table(t) {
            for i in db.instances_of(e, 4) {
                if i.binding.params.values().all(|&p| p <= 3) && i.triple.is_realizable() && !rules::rule_sites(&i.triple).is_empty() {
                    bases.push(i.triple.clone());
                    for j in rules::rule_sites(&i.triple) {
                        bases.extend(with_extra_summand(&i.triple, j));
                    }
                }
            }
        }
    }
    let class = |t: &Triple| check_triple(t, cfg).map(|v| v.status).ok();
    let (mut pairs, mut positive, mut negative, mut identity) = (0, 0, 0, 0);
    let mut bad = Vec::new();
    for b in &bases {
        let before = class(b);
        for s in sites(b) {
            let Ok(a) = rules::apply(b, &s) else { continue };
            if a.max_rank() > 4 {
                continue;
            }
            pairs += 1;
            let after = class(&a);
            match (before, after) {
                (Some(x), Some(y)) if x.is_spherical() && y.is_spherical() => positive += 1,
                (Some(x), Some(y)) if x.is_negative() && y.is_negative() => negative += 1,
                _ => bad.push(format!("{} {:?} -> {} {:?}", spherical::dsl::print(b), before, spherical::dsl::print(&a), after)),
            }
            if rules::is_reduced(b) {
                let (r, _) = rules::reduce(&a);
                if normalize(&r) == normalize(b) {
                    identity += 1;
                } else {
                    bad.push(format!("reduce(apply({})) = {}", spherical::dsl::print(b), spherical::dsl::print(&r)));
                }
            }
        }
    }
    Outcome {
        ok: bad.is_empty() && positive > 0 && negative > 0 && identity > 0,
        detail: format!(
            "{pairs} rule applications ({positive} spherical both sides, {negative} negative both sides), {identity} reduce round trips; {}",
            bad.join("; ")
        ),
    }
}

fn cut_erase(cfg: &OracleConfig) -> Outcome {
    let db = database();
    let mut pool: Vec<Triple> = db
        .instances(6)
        .iter()
        .filter(|i| matches!(db.entry(&i.binding.entry).unwrap().table, Table::Modules | Table::Triples))
        .filter(|i| i.triple.is_realizable() && i.triple.max_rank() <= 6)
        .map(|i| i.triple.clone())
        .collect();
    pool.sort_by_key(|t| spherical::dsl::print(t));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut done, mut tries) = (0, 0);
    let mut bad = Vec::new();
    while done < 100 && tries < 10_000 {
        tries += 1;
        let t = &pool[rng.gen_range(0..pool.len())];
        let Some(op) = random_operation(t, &mut rng) else { continue };
        if !check_triple(t, cfg).map(|v| v.status.is_spherical()).unwrap_or(false) {
            continue;
        }
        let Ok(out) = op.apply(t) else { continue };
        done += 1;
        let st = check_triple(&out, cfg).map(|v| v.status);
        if !matches!(st, Ok(Status::SphericalCertified)) {
            bad.push(format!("{op:?} on {} gives {} {st:?}", spherical::dsl::print(t), spherical::dsl::print(&out)));
        }
    }
    Outcome { ok: done == 100 && bad.is_empty(), detail: format!("{done} operations; {}", bad.join("; ")) }
}

fn negatives() -> Outcome {
    let cfg = OracleConfig { sym_degree: 4, ..OracleConfig::default() };
    let mut lines = Vec::new();
    let mut ok = true;
    for text in [
        "(sl(4), sp(4), w1 + w1)",
        "(sp(8), sp(6)+sl(2), w1 + w1)",
        "(so(9), so(8), w3 + w4)",
        "(sl(4)+sl(4), sl(3)+sl(3), w1 w1')",
    ] {
        let v = check_triple(&parse_triple(text).unwrap(), &cfg).unwrap();
        let cert = match &v.certificate {
            Certificate::DimensionBound { available, needed, .. } => Some(format!("dimension {available} < {needed}")),
            Certificate::Multiplicity { degree, .. } if *degree <= 4 => Some(format!("multiplicity in degree {degree}")),
            _ => None,
        };
        ok &= v.status == Status::NotSphericalCertified && cert.is_some();
        lines.push(format!("{text}: {:?} {}", v.status, cert.unwrap_or_default()));
    }
    Outcome { ok, detail: lines.join("; ") }
}

fn completeness(cfg: &OracleConfig) -> Outcome {
    let s = completeness_search(4, 10_000, cfg);
    let items = enumerate(4);
    let st = check_structure(&items);
    Outcome {
        ok: s.samples == 10_000 && s.missing.is_empty() && st.not_tree.is_empty() && st.unconfined.is_empty(),
        detail: format!(
            "{} samples, {} distinct, {} certified, missing {:?}; {} enumerated, not tree {:?}, unconfined {:?}",
            s.samples, s.distinct, s.certified, s.missing, st.items, st.not_tree, st.unconfined
        ),
    }
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_spherical"))
            .args(["verify-tables", "--json", "--seed", "42", "--max-rank", "3"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let ok = a.status.code() == Some(0) && a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome { ok, detail: format!("{} bytes, exit {:?}", a.stdout.len(), a.status.code()) }
}

#[test]
fn acceptance() {
    let cfg = OracleConfig::default();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 primitive spherical modules, ranks <= 8", Box::new(move || modules(&cfg))),
        ("2 reduced triples, minimal and minimal+1", Box::new(move || triples(&cfg))),
        ("3 principal subalgebras, ranks <= 8", Box::new(move || principal(&cfg))),
        ("4 c-subspaces", Box::new(move || c_subspaces(&cfg))),
        ("5 inference rules", Box::new(move || rule_equivalence(&cfg))),
        ("6 cutting and erasing", Box::new(move || cut_erase(&cfg))),
        ("7 negative controls", Box::new(negatives)),
        ("8 completeness at rank 4", Box::new(move || completeness(&cfg))),
        ("9 determinism", Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (name, f) in &criteria {
        let t = Instant::now();
        let o = f();
        println!("{} criterion {name} ({:.1?}): {}", if o.ok { "PASS" } else { "FAIL" }, t.elapsed(), o.detail);
        if !o.ok {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
