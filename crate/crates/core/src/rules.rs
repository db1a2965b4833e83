//! The two inference rules, their inverses, and reduced forms.
//!
//! Rule 1 replaces a summand `(sl(2), sl(2))` of `(g, h)` by `(sp(2m+2), sl(2)+sp(2m))`.
//! Rule 2 replaces a summand `(sp(4), sp(4))`, on which `V` has only trivial and defining
//! constituents, by `(so(7), sl(4))`; each defining constituent becomes `w1` or `w3`.

use serde::{Deserialize, Serialize};

use crate::algebra::{Irrep, Restriction, Triple};
use crate::diagram::absorbed;
use crate::error::Error;
use crate::lie::{Series, SimpleFactor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    One,
    Two,
}

/// One rule application, enough to replay it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Step {
    pub rule: Rule,
    /// `h`-factor the rule acts on.
    pub site: usize,
    /// `m` for rule 1; for rule 2, the summands sent to `w3`.
    pub param: Vec<usize>,
}

fn sp(m: usize) -> SimpleFactor {
    if m == 1 {
        SimpleFactor::a(1)
    } else {
        SimpleFactor::c(m)
    }
}

fn identity_factor(t: &Triple, j: usize) -> Option<usize> {
    let abs = absorbed(t);
    (0..t.g.factors.len()).find(|&i| abs[i] && t.embedding[i].support() == vec![j])
}

fn rule1_ok(t: &Triple, j: usize) -> bool {
    t.h.factors[j] == SimpleFactor::a(1) && identity_factor(t, j).is_some()
}

fn rule2_ok(t: &Triple, j: usize) -> bool {
    t.h.factors[j] == SimpleFactor::c(2)
        && identity_factor(t, j).is_some()
        && t.v.summands.iter().all(|s| s.weights[j] == [0, 0] || s.weights[j] == [1, 0])
}

/// `h`-factors at which a rule applies.
pub fn rule_sites(t: &Triple) -> Vec<usize> {
    (0..t.h.factors.len()).filter(|&j| rule1_ok(t, j) || rule2_ok(t, j)).collect()
}

pub fn apply(t: &Triple, step: &Step) -> Result<Triple, Error> {
    match step.rule {
        Rule::One => apply_rule1(t, step.site, *step.param.first().unwrap_or(&1)),
        Rule::Two => apply_rule2(t, step.site, &step.param),
    }
}

pub fn apply_rule1(t: &Triple, j: usize, m: usize) -> Result<Triple, Error> {
    if j >= t.h.factors.len() || !rule1_ok(t, j) || m == 0 {
        return Err(Error::NotApplicable(format!("rule 1 at h-factor {j}")));
    }
    let i = identity_factor(t, j).unwrap();
    let mut out = t.clone();
    let b = out.h.factors.len();
    let f = sp(m);
    out.h.factors.push(f);
    for r in out.embedding.iter_mut() {
        if let Restriction::Module(p) = r {
            p.iter_mut().for_each(|x| x.weights.push(vec![0; f.rank]));
        }
    }
    out.v.summands.iter_mut().for_each(|x| x.weights.push(vec![0; f.rank]));
    out.g.factors[i] = sp(m + 1);
    out.embedding[i] = Restriction::Module(vec![Irrep::fundamental(&out.h, j, 1), Irrep::fundamental(&out.h, b, 1)]);
    out.validate()?;
    Ok(out)
}

/// `w3_summands` lists the summands whose defining constituent becomes `w3`.
pub fn apply_rule2(t: &Triple, j: usize, w3_summands: &[usize]) -> Result<Triple, Error> {
    if j >= t.h.factors.len() || !rule2_ok(t, j) {
        return Err(Error::NotApplicable(format!("rule 2 at h-factor {j}")));
    }
    let i = identity_factor(t, j).unwrap();
    let mut out = t.clone();
    out.h.factors[j] = SimpleFactor::a(3);
    for r in out.embedding.iter_mut() {
        if let Restriction::Module(p) = r {
            p.iter_mut().for_each(|x| x.weights[j] = vec![0; 3]);
        }
    }
    for (k, s) in out.v.summands.iter_mut().enumerate() {
        s.weights[j] = match (s.weights[j][0], w3_summands.contains(&k)) {
            (0, _) => vec![0, 0, 0],
            (_, false) => vec![1, 0, 0],
            (_, true) => vec![0, 0, 1],
        };
    }
    out.g.factors[i] = SimpleFactor::b(3);
    let mut vec6 = Irrep::trivial(&out.h);
    vec6.weights[j] = vec![0, 1, 0];
    out.embedding[i] = Restriction::Module(vec![vec6, Irrep::trivial(&out.h)]);
    out.validate()?;
    Ok(out)
}

fn remove_h(t: &Triple, b: usize) -> Triple {
    let mut out = t.clone();
    out.h.factors.remove(b);
    for r in out.embedding.iter_mut() {
        match r {
            Restriction::Module(p) => p.iter_mut().for_each(|x| {
                x.weights.remove(b);
            }),
            Restriction::G2Regular(_, f) => f.iter_mut().for_each(|x| {
                if *x > b {
                    *x -= 1
                }
            }),
        }
    }
    out.v.summands.iter_mut().for_each(|x| {
        x.weights.remove(b);
    });
    out
}

fn uses(t: &Triple, j: usize) -> usize {
    t.embedding.iter().filter(|r| r.support().contains(&j)).count()
}

fn trivial_on_v(t: &Triple, j: usize) -> bool {
    t.v.summands.iter().all(|s| s.weights[j].iter().all(|&x| x == 0))
}

fn is_sp_defining(f: SimpleFactor, w: &[i64]) -> bool {
    (f.series == Series::C || f == SimpleFactor::a(1)) && w.first() == Some(&1) && w[1..].iter().all(|&x| x == 0)
}

/// Inverse of rule 1 at `g`-factor `i`, if it applies.
fn unrule1(t: &Triple, i: usize) -> Option<Triple> {
    let g = t.g.factors[i];
    if g.series != Series::C {
        return None;
    }
    let Restriction::Module(p) = &t.embedding[i] else { return None };
    if p.len() != 2 {
        return None;
    }
    let s0 = p[0].support();
    let s1 = p[1].support();
    if s0.len() != 1 || s1.len() != 1 || s0[0] == s1[0] {
        return None;
    }
    let (x, y) = (s0[0], s1[0]);
    if !is_sp_defining(t.h.factors[x], &p[0].weights[x]) || !is_sp_defining(t.h.factors[y], &p[1].weights[y]) {
        return None;
    }
    if uses(t, x) != 1 || uses(t, y) != 1 {
        return None;
    }
    // a: the sl(2); b: the sp(2m) acting trivially on V (the later one if both qualify)
    let cand = |a: usize, b: usize| t.h.factors[a] == SimpleFactor::a(1) && trivial_on_v(t, b);
    let (a, b) = if cand(x, y) && (!cand(y, x) || y > x) {
        (x, y)
    } else if cand(y, x) {
        (y, x)
    } else {
        return None;
    };
    let mut out = t.clone();
    out.g.factors[i] = SimpleFactor::a(1);
    out.embedding[i] = Restriction::Module(vec![Irrep::fundamental(&out.h, a, 1)]);
    Some(remove_h(&out, b))
}

/// Inverse of rule 2 at `g`-factor `i`, if it applies.
fn unrule2(t: &Triple, i: usize) -> Option<Triple> {
    if t.g.factors[i] != SimpleFactor::b(3) {
        return None;
    }
    let Restriction::Module(p) = &t.embedding[i] else { return None };
    let nontriv: Vec<&Irrep> = p.iter().filter(|x| !x.is_trivial()).collect();
    if p.len() != 2 || nontriv.len() != 1 {
        return None;
    }
    let s = nontriv[0].support();
    if s.len() != 1 {
        return None;
    }
    let j = s[0];
    if t.h.factors[j] != SimpleFactor::a(3) || nontriv[0].weights[j] != [0, 1, 0] || uses(t, j) != 1 {
        return None;
    }
    let ok = t
        .v
        .summands
        .iter()
        .all(|x| matches!(x.weights[j].as_slice(), [0, 0, 0] | [1, 0, 0] | [0, 0, 1]));
    if !ok {
        return None;
    }
    let mut out = t.clone();
    out.h.factors[j] = SimpleFactor::c(2);
    for r in out.embedding.iter_mut() {
        if let Restriction::Module(p) = r {
            p.iter_mut().for_each(|x| x.weights[j] = vec![0; 2]);
        }
    }
    for s in out.v.summands.iter_mut() {
        s.weights[j] = if s.weights[j].iter().any(|&x| x != 0) { vec![1, 0] } else { vec![0, 0] };
    }
    out.g.factors[i] = SimpleFactor::c(2);
    out.embedding[i] = Restriction::Module(vec![Irrep::fundamental(&out.h, j, 1)]);
    Some(out)
}

/// Neither inverse rule applies (the reduced-form conditions on the base).
pub fn is_reduced(t: &Triple) -> bool {
    (0..t.g.factors.len()).all(|i| unrule1(t, i).is_none() && unrule2(t, i).is_none())
}

/// Applies inverse rules until none applies; returns the result and the forward steps
/// that rebuild the input from it (in application order).
pub fn reduce(t: &Triple) -> (Triple, Vec<Step>) {
    let mut cur = t.clone();
    let mut steps = Vec::new();
    'outer: loop {
        for i in 0..cur.g.factors.len() {
            if let Some(next) = unrule1(&cur, i) {
                let m = cur.g.factors[i].rank - 1;
                // site in `next`: the surviving sl(2), found through the g-factor index
                let site = next.embedding[i].support()[0];
                steps.push(Step { rule: Rule::One, site, param: vec![m] });
                cur = next;
                continue 'outer;
            }
            if let Some(next) = unrule2(&cur, i) {
                let j = next.embedding[i].support()[0];
                let w3: Vec<usize> = (0..cur.v.summands.len())
                    .filter(|&k| cur.v.summands[k].weights[j] == [0, 0, 1])
                    .collect();
                steps.push(Step { rule: Rule::Two, site: j, param: w3 });
                cur = next;
                continue 'outer;
            }
        }
        break;
    }
    steps.reverse();
    (cur, steps)
}

/// All triples reachable by forward rules with every factor rank at most `max_rank`,
/// including `t` itself, with the steps from `t`.
pub fn expand(t: &Triple, max_rank: usize) -> Vec<(Triple, Vec<Step>)> {
    let mut out = vec![(t.clone(), Vec::new())];
    let mut i = 0;
    while i < out.len() {
        let (cur, path) = out[i].clone();
        i += 1;
        for j in 0..cur.h.factors.len() {
            if rule1_ok(&cur, j) {
                for m in 1..max_rank {
                    let step = Step { rule: Rule::One, site: j, param: vec![m] };
                    if let Ok(n) = apply(&cur, &step) {
                        let mut p = path.clone();
                        p.push(step);
                        out.push((n, p));
                    }
                }
            }
            if rule2_ok(&cur, j) && max_rank >= 3 {
                let carriers: Vec<usize> =
                    (0..cur.v.summands.len()).filter(|&k| cur.v.summands[k].weights[j][0] == 1).collect();
                let n = carriers.len().min(12);
                for mask in 0..(1u32 << n) {
                    let w3: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| carriers[b]).collect();
                    let step = Step { rule: Rule::Two, site: j, param: w3 };
                    if let Ok(n) = apply(&cur, &step) {
                        let mut p = path.clone();
                        p.push(step);
                        out.push((n, p));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_triple;

    #[test]
    fn rule1_round_trip() {
        let t = parse_triple("(sl(2)+sl(3), sl(2)+sl(3), w1 w1')").unwrap();
        assert_eq!(rule_sites(&t), vec![0]);
        let e = apply_rule1(&t, 0, 2).unwrap();
        assert_eq!(e.g.factors[0], SimpleFactor::c(3));
        assert!(!is_reduced(&e));
        let (r, steps) = reduce(&e);
        assert_eq!(r, t);
        let mut back = r.clone();
        for s in &steps {
            back = apply(&back, s).unwrap();
        }
        assert_eq!(back, e);
    }

    #[test]
    fn rule2_both_choices() {
        let t = parse_triple("(sp(4), sp(4), w1 + w1)").unwrap();
        let a = apply_rule2(&t, 0, &[]).unwrap();
        let b = apply_rule2(&t, 0, &[1]).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.g.factors, vec![SimpleFactor::b(3)]);
        assert_eq!(reduce(&b).0, t);
        let w2 = parse_triple("(sp(4), sp(4), w2)").unwrap();
        assert!(apply_rule2(&w2, 0, &[]).is_err());
    }
}
