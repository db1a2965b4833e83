//! Text form of triples.
//!
//! ```text
//! triple  := '(' algebra ',' algebra ',' module ')' [ '[embed=' restr (';' restr)* ']' ]
//! algebra := '' | '0' | factor ('+' factor)*
//! factor  := sl(n) | so(n) | sp(2n) | g2 | f4 | e6 | e7 | e8
//! module  := '0' | term ('+' term)*
//! term    := '1' | atom+                    atoms separated by spaces
//! atom    := 'w' i ['^' k] primes | 'spin' primes    (primes may also precede '^')
//! restr   := module | 'A2@' j | 'A1A1@' j ',' k
//! ```
//!
//! The number of primes on an atom selects the factor of `h` (none for the first).
//! Atoms on the same factor add. An atom on a dropped factor repeats the term once per
//! dimension of that factor. `spin` is the spin module of an orthogonal factor.
//! On `so(4)`, `w1` is the vector module and `w2` a half-spin module.
//! `[embed=...]` gives, for every written factor of `g`, the restriction of its defining
//! module to `h`; `A2@j` and `A1A1@j,k` are the regular subalgebras of `g2` acting through
//! the listed `h`-factors (0-based, as counted by primes).
//!
//! Without a label the embedding is inferred: the identity when `g` and `h` are written
//! alike, otherwise each `h`-factor (largest first) goes to the first `g`-factor that has
//! room for its natural module (defining module; `w1 + dual` for `sl(k)` inside `sp` or
//! `so`), and the rest is filled with trivial modules. Diagonal and spin embeddings
//! need a label.
//!
//! Low-rank names are normalized: `sl(1)`, `sp(0)`, `so(0)`, `so(1)` are dropped,
//! `so(2)` is dropped as well (it lies in the centralizer), `sp(2)` and `so(3)` become
//! `sl(2)`, `so(4)` becomes `sl(2)+sl(2)`, `so(5)` becomes `sp(4)` and `so(6)` becomes
//! `sl(4)`, with weights converted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{G2Sub, Irrep, ModuleExpr, Restriction, SemisimpleAlgebra, Triple};
use crate::character::{irrep_character, Character};
use crate::error::Error;
use crate::lie::{weyl_dim, Series, SimpleFactor};

/// A factor as written, before low-rank identifications.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Written {
    Sl(usize),
    So(usize),
    /// `sp(2n)`, stored as `n`.
    Sp(usize),
    Other(SimpleFactor),
}

impl Written {
    pub fn parse(s: &str) -> Result<Written, Error> {
        let t = s.trim().to_ascii_lowercase();
        let bad = || Error::UnknownFactor(s.trim().to_string());
        if let Some((name, arg)) = t.strip_suffix(')').and_then(|x| x.split_once('(')) {
            let n: usize = arg.trim().parse().map_err(|_| bad())?;
            return match name.trim() {
                "sl" => Ok(Written::Sl(n)),
                "so" => Ok(Written::So(n)),
                "sp" if n % 2 == 0 => Ok(Written::Sp(n / 2)),
                _ => Err(bad()),
            };
        }
        let f: SimpleFactor = t.parse().map_err(|_| bad())?;
        Ok(Written::from_factor(f))
    }

    pub fn from_factor(f: SimpleFactor) -> Written {
        match f.series {
            Series::A => Written::Sl(f.rank + 1),
            Series::B => Written::So(2 * f.rank + 1),
            Series::C => Written::Sp(f.rank),
            Series::D => Written::So(2 * f.rank),
            _ => Written::Other(f),
        }
    }

    pub fn defining_dim(self) -> usize {
        match self {
            Written::Sl(n) | Written::So(n) => n,
            Written::Sp(n) => 2 * n,
            Written::Other(f) => f.defining_dim(),
        }
    }

    /// Number of weight coordinates as written.
    pub fn rank(self) -> usize {
        match self {
            Written::Sl(n) => n.saturating_sub(1),
            Written::So(n) => n / 2,
            Written::Sp(n) => n,
            Written::Other(f) => f.rank,
        }
    }

    /// Normalized simple factors.
    pub fn factors(self) -> Vec<SimpleFactor> {
        match self {
            Written::Sl(n) if n >= 2 => vec![SimpleFactor::a(n - 1)],
            Written::Sp(1) => vec![SimpleFactor::a(1)],
            Written::Sp(n) if n >= 2 => vec![SimpleFactor::c(n)],
            Written::So(3) => vec![SimpleFactor::a(1)],
            Written::So(4) => vec![SimpleFactor::a(1), SimpleFactor::a(1)],
            Written::So(5) => vec![SimpleFactor::c(2)],
            Written::So(6) => vec![SimpleFactor::a(3)],
            Written::So(n) if n >= 7 => vec![if n % 2 == 1 { SimpleFactor::b(n / 2) } else { SimpleFactor::d(n / 2) }],
            Written::Other(f) => vec![f],
            _ => Vec::new(),
        }
    }

    pub fn is_dropped(self) -> bool {
        self.factors().is_empty()
    }

    /// Written weight converted to weights of [`Written::factors`].
    pub fn convert(self, w: &[i64]) -> Vec<Vec<i64>> {
        let img = |i: usize| -> Vec<Vec<i64>> {
            match self {
                Written::So(3) => vec![vec![2]],
                Written::So(4) => {
                    if i == 0 {
                        vec![vec![1], vec![1]]
                    } else {
                        vec![vec![0], vec![1]]
                    }
                }
                Written::So(5) => vec![if i == 0 { vec![0, 1] } else { vec![1, 0] }],
                Written::So(6) => vec![match i {
                    0 => vec![0, 1, 0],
                    1 => vec![1, 0, 0],
                    _ => vec![0, 0, 1],
                }],
                _ => {
                    let mut v = vec![0; self.rank()];
                    v[i] = 1;
                    vec![v]
                }
            }
        };
        let fs = self.factors();
        let mut out: Vec<Vec<i64>> = fs.iter().map(|f| vec![0; f.rank]).collect();
        if fs.is_empty() {
            return out;
        }
        for (i, &a) in w.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(img(i)) {
                for (p, q) in o.iter_mut().zip(x) {
                    *p += a * q;
                }
            }
        }
        out
    }

    /// Written weight of the spin module.
    pub fn spin(self) -> Option<Vec<i64>> {
        match self {
            Written::So(n) if n >= 3 => {
                let mut v = vec![0; self.rank()];
                v[self.rank() - 1] = 1;
                Some(v)
            }
            _ => None,
        }
    }

    /// Written weight of the defining module (empty list when it is trivial or zero).
    fn defining_terms(self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let unit = |i: usize| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        };
        match self {
            Written::Sl(n) if n >= 2 => vec![unit(0)],
            Written::Sp(n) if n >= 1 => vec![unit(0)],
            Written::So(n) if n >= 3 => vec![unit(0)],
            Written::Other(f) => {
                let i = match (f.series, f.rank) {
                    (Series::E, 7) => 6,
                    (Series::E, 8) => 7,
                    (Series::F, _) => 3,
                    _ => 0,
                };
                vec![unit(i)]
            }
            _ => Vec::new(),
        }
    }

    /// Natural module of `self` inside a factor written as `g`.
    fn natural_in(self, g: Written) -> Option<Vec<Vec<i64>>> {
        let dual_pair = |n: usize| {
            let mut a = vec![0; n - 1];
            let mut b = vec![0; n - 1];
            a[0] = 1;
            b[n - 2] = 1;
            vec![a, b]
        };
        match (g, self) {
            (Written::Sl(_), _) => Some(self.defining_terms()),
            (Written::Sp(_), Written::Sp(_)) => Some(self.defining_terms()),
            (Written::Sp(_), Written::Sl(2)) => Some(self.defining_terms()),
            (Written::Sp(_) | Written::So(_), Written::Sl(n)) if n >= 2 => Some(dual_pair(n)),
            (Written::So(_), Written::So(_)) => Some(self.defining_terms()),
            (Written::So(_), Written::Other(f)) if f.series == Series::G => Some(self.defining_terms()),
            _ => None,
        }
    }
}

/// A triple parsed from text, with notices about dropped vertices.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub triple: Triple,
    pub notices: Vec<String>,
}

struct Lexer<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.s[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.s[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    /// Text up to (not including) the first top-level character in `stops`.
    fn until(&mut self, stops: &[char]) -> (usize, &'a str) {
        let start = self.pos;
        let mut depth = 0i32;
        for (i, c) in self.s[start..].char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' if depth > 0 => depth -= 1,
                _ if depth == 0 && stops.contains(&c) => {
                    self.pos = start + i;
                    return (start, &self.s[start..start + i]);
                }
                _ => {}
            }
        }
        self.pos = self.s.len();
        (start, &self.s[start..])
    }
}

fn split_top(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

fn parse_algebra(s: &str, base: usize) -> Result<Vec<Written>, Error> {
    let t = s.trim();
    if t.is_empty() || t == "0" {
        return Ok(Vec::new());
    }
    split_top(s, '+')
        .into_iter()
        .map(|(off, part)| {
            Written::parse(part).map_err(|_| Error::Syntax {
                pos: base + off,
                msg: format!("unknown simple factor `{}`", part.trim()),
            })
        })
        .collect()
}

/// A term as written: one written weight per `h`-factor.
type WrittenTerm = Vec<Vec<i64>>;

/// A term with its number of copies: an atom on a dropped factor contributes that
/// factor's defining dimension (0 for `sp(0)`, 2 for `so(2)`).
fn parse_term(s: &str, base: usize, h: &[Written]) -> Result<(WrittenTerm, usize), Error> {
    let mut w: WrittenTerm = h.iter().map(|f| vec![0; f.rank()]).collect();
    let mut copies = 1;
    let t = s.trim();
    if t == "1" {
        return Ok((w, copies));
    }
    let syn = |off: usize, msg: String| Error::Syntax { pos: base + off, msg };
    let mut off = 0;
    for atom in s.split_whitespace() {
        let at = s[off..].find(atom).map(|i| i + off).unwrap_or(off);
        off = at + atom.len();
        let primes = atom.chars().filter(|&c| c == '\'').count();
        let body: String = atom.chars().filter(|&c| c != '\'').collect();
        let body = body.as_str();
        if primes >= h.len() {
            return Err(Error::Arity { index: primes, count: h.len() });
        }
        let f = h[primes];
        if f.is_dropped() {
            copies *= f.defining_dim();
            continue;
        }
        if body == "spin" {
            let sp = f.spin().ok_or_else(|| syn(at, format!("`spin` on non-orthogonal factor {f:?}")))?;
            for (a, b) in w[primes].iter_mut().zip(sp) {
                *a += b;
            }
            continue;
        }
        let rest = body.strip_prefix('w').ok_or_else(|| syn(at, format!("unexpected `{atom}`")))?;
        let (i, k) = match rest.split_once('^') {
            Some((i, k)) => (i, k.parse::<i64>().map_err(|_| syn(at, format!("bad exponent in `{atom}`")))?),
            None => (rest, 1),
        };
        let i: usize = i.parse().map_err(|_| syn(at, format!("bad weight index in `{atom}`")))?;
        if i == 0 || i > f.rank() {
            return Err(syn(at, format!("w{i} does not exist for {f:?}")));
        }
        w[primes][i - 1] += k;
    }
    Ok((w, copies))
}

fn parse_module(s: &str, base: usize, h: &[Written]) -> Result<Vec<WrittenTerm>, Error> {
    if s.trim() == "0" || s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (o, t) in split_top(s, '+') {
        let (w, copies) = parse_term(t, base + o, h)?;
        out.extend(std::iter::repeat(w).take(copies));
    }
    Ok(out)
}

/// Maps written `h`-factors to positions among normalized factors.
struct HMap {
    written: Vec<Written>,
    offset: Vec<usize>,
    alg: SemisimpleAlgebra,
}

impl HMap {
    fn new(written: &[Written]) -> Self {
        let mut offset = Vec::new();
        let mut factors = Vec::new();
        for w in written {
            offset.push(factors.len());
            factors.extend(w.factors());
        }
        HMap {
            written: written.to_vec(),
            offset,
            alg: SemisimpleAlgebra::new(factors),
        }
    }

    fn irrep(&self, t: &WrittenTerm) -> Irrep {
        let mut ir = Irrep::trivial(&self.alg);
        for (j, (w, wt)) in self.written.iter().zip(t).enumerate() {
            for (k, x) in w.convert(wt).into_iter().enumerate() {
                ir.weights[self.offset[j] + k] = x;
            }
        }
        ir
    }
}

/// Natural embedding of written `h` into written `g`, per `g`-factor.
fn infer(g: &[Written], h: &[Written]) -> Result<Vec<Vec<WrittenTerm>>, Error> {
    let mut order: Vec<usize> = (0..h.len()).filter(|&j| !h[j].is_dropped()).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(h[j].defining_dim()));
    let mut room: Vec<usize> = g.iter().map(|f| f.defining_dim()).collect();
    let mut out: Vec<Vec<WrittenTerm>> = vec![Vec::new(); g.len()];
    for j in order {
        let mut placed = false;
        for (i, gf) in g.iter().enumerate() {
            if gf.is_dropped() {
                continue;
            }
            if let Some(terms) = h[j].natural_in(*gf) {
                let d = h[j].defining_dim() * terms.len();
                if d <= room[i] {
                    room[i] -= d;
                    for t in terms {
                        let mut wt: WrittenTerm = h.iter().map(|f| vec![0; f.rank()]).collect();
                        wt[j] = t;
                        out[i].push(wt);
                    }
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            return Err(Error::UnknownLabel(format!(
                "no natural embedding for {:?}; give [embed=...]",
                h[j]
            )));
        }
    }
    for (i, gf) in g.iter().enumerate() {
        if matches!(gf, Written::Sp(_)) && room[i] % 2 == 1 {
            return Err(Error::IncompatibleSpec("odd trivial part inside a symplectic factor".into()));
        }
        for _ in 0..room[i] {
            out[i].push(h.iter().map(|f| vec![0; f.rank()]).collect());
        }
    }
    Ok(out)
}

fn char_sum(alg: &SemisimpleAlgebra, irs: &[Irrep]) -> Result<Character, Error> {
    let mut c = Character::default();
    for ir in irs {
        c.add_scaled(&irrep_character(alg, ir)?, &BigInt::one());
    }
    c.mult.retain(|_, m| !m.is_zero());
    Ok(c)
}

fn halve(mut c: Character) -> Character {
    for m in c.mult.values_mut() {
        *m /= 2;
    }
    c.mult.retain(|_, m| !m.is_zero());
    c
}

fn sym2(c: &Character) -> Character {
    let mut s = c.product(c);
    s.add_scaled(&c.adams(2), &BigInt::one());
    halve(s)
}

fn alt2(c: &Character) -> Character {
    let mut s = c.product(c);
    s.add_scaled(&c.adams(2), &BigInt::from(-1));
    halve(s)
}

/// Irreducible modules of `alg` of dimension at most `d`, with small weights.
fn small_irreps(alg: &SemisimpleAlgebra, d: usize) -> Vec<Irrep> {
    let mut out = vec![Irrep::trivial(alg)];
    let mut frontier = vec![Irrep::trivial(alg)];
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(Irrep::trivial(alg));
    while let Some(ir) = frontier.pop() {
        for j in 0..alg.factors.len() {
            for i in 0..alg.factors[j].rank {
                let mut n = ir.clone();
                n.weights[j][i] += 1;
                if seen.contains(&n) {
                    continue;
                }
                let dim: usize = alg
                    .factors
                    .iter()
                    .zip(&n.weights)
                    .map(|(f, w)| usize::try_from(weyl_dim(*f, w).unwrap()).unwrap_or(usize::MAX))
                    .fold(1usize, |a, b| a.saturating_mul(b));
                if dim <= d {
                    seen.insert(n.clone());
                    out.push(n.clone());
                    frontier.push(n);
                }
            }
        }
    }
    out.sort();
    out
}

/// Multisets of modules from `cands` with total dimension `d`.
fn sums_of_dim(alg: &SemisimpleAlgebra, cands: &[Irrep], d: usize) -> Vec<Vec<Irrep>> {
    fn rec(alg: &SemisimpleAlgebra, c: &[(Irrep, usize)], start: usize, d: usize, cur: &mut Vec<Irrep>, out: &mut Vec<Vec<Irrep>>) {
        if d == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..c.len() {
            if c[k].1 <= d {
                cur.push(c[k].0.clone());
                rec(alg, c, k, d - c[k].1, cur, out);
                cur.pop();
            }
        }
    }
    let dims: Vec<(Irrep, usize)> = cands.iter().map(|ir| (ir.clone(), ir.dim(alg))).collect();
    let mut out = Vec::new();
    rec(alg, &dims, 0, d, &mut Vec::new(), &mut out);
    out
}

/// Restrictions to the normalized factors of a low-rank `g`-factor whose defining module
/// restricts to `r`.
fn lift(g: Written, alg: &SemisimpleAlgebra, r: &[Irrep]) -> Result<Vec<Restriction>, Error> {
    let fs = g.factors();
    let direct = matches!(g, Written::Sl(_) | Written::Sp(_) | Written::Other(_))
        || matches!(g, Written::So(n) if n >= 7);
    if direct {
        return Ok(if fs.is_empty() { Vec::new() } else { vec![Restriction::Module(r.to_vec())] });
    }
    if fs.is_empty() {
        return Ok(Vec::new());
    }
    let target = char_sum(alg, r)?;
    let cands = small_irreps(alg, 4);
    let fail = || Error::IncompatibleSpec(format!("cannot lift restriction to {g:?}"));
    match g {
        Written::So(3) => {
            for c in sums_of_dim(alg, &cands, 2) {
                if sym2(&char_sum(alg, &c)?) == target {
                    return Ok(vec![Restriction::Module(c)]);
                }
            }
        }
        Written::So(5) | Written::So(6) => {
            for c in sums_of_dim(alg, &cands, 4) {
                let mut a = alt2(&char_sum(alg, &c)?);
                if g == Written::So(5) {
                    a.add_scaled(&irrep_character(alg, &Irrep::trivial(alg))?, &BigInt::from(-1));
                    a.mult.retain(|_, m| !m.is_zero());
                    if a.mult.values().any(|m| m < &BigInt::zero()) {
                        continue;
                    }
                }
                if a == target {
                    return Ok(vec![Restriction::Module(c)]);
                }
            }
        }
        Written::So(4) => {
            let pairs = sums_of_dim(alg, &cands, 2);
            for a in &pairs {
                for b in &pairs {
                    if char_sum(alg, a)?.product(&char_sum(alg, b)?) == target {
                        return Ok(vec![Restriction::Module(a.clone()), Restriction::Module(b.clone())]);
                    }
                }
            }
        }
        _ => {}
    }
    Err(fail())
}

fn parse_restriction(s: &str, base: usize, h: &HMap) -> Result<Result<Vec<WrittenTerm>, Restriction>, Error> {
    let t = s.trim();
    let g2 = |rest: &str, sub: G2Sub, n: usize| -> Result<Restriction, Error> {
        let idx: Vec<usize> = rest
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| Error::Syntax { pos: base, msg: format!("bad factor list in `{t}`") })?;
        if idx.len() != n {
            return Err(Error::Syntax { pos: base, msg: format!("`{t}` needs {n} factor indices") });
        }
        let mapped = idx
            .iter()
            .map(|&j| {
                if j >= h.written.len() {
                    Err(Error::Arity { index: j, count: h.written.len() })
                } else {
                    Ok(h.offset[j])
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Restriction::G2Regular(sub, mapped))
    };
    if let Some(rest) = t.strip_prefix("A1A1@") {
        return Ok(Err(g2(rest, G2Sub::A1A1, 2)?));
    }
    if let Some(rest) = t.strip_prefix("A2@") {
        return Ok(Err(g2(rest, G2Sub::A2, 1)?));
    }
    Ok(Ok(parse_module(s, base, &h.written)?))
}

/// Parses a triple.
pub fn parse(text: &str) -> Result<Parsed, Error> {
    let mut lx = Lexer { s: text, pos: 0 };
    lx.expect('(')?;
    let (gpos, gtext) = lx.until(&[',']);
    lx.expect(',')?;
    let (hpos, htext) = lx.until(&[',']);
    lx.expect(',')?;
    let (vpos, vtext) = lx.until(&[')']);
    lx.expect(')')?;
    let gw = parse_algebra(gtext, gpos)?;
    let hw = parse_algebra(htext, hpos)?;
    let terms = parse_module(vtext, vpos, &hw)?;
    let mut label: Option<(usize, &str)> = None;
    lx.skip_ws();
    if lx.eat('[') {
        lx.skip_ws();
        let rest = &text[lx.pos..];
        let Some(body) = rest.strip_prefix("embed") else {
            return Err(lx.err("unknown label; expected `embed=`"));
        };
        lx.pos += 5;
        lx.expect('=')?;
        let (p, s) = lx.until(&[']']);
        lx.expect(']')?;
        let _ = body;
        label = Some((p, s));
    }
    lx.skip_ws();
    if lx.pos != text.len() {
        return Err(lx.err("trailing input"));
    }
    let mut notices = Vec::new();
    for (layer, ws) in [("g", &gw), ("h", &hw)] {
        for w in ws.iter().filter(|w| w.is_dropped()) {
            notices.push(format!("dropped {layer}-vertex {w:?}"));
        }
    }
    let hm = HMap::new(&hw);
    let galg = SemisimpleAlgebra::new(gw.iter().flat_map(|w| w.factors()).collect());
    let v = ModuleExpr::new(terms.iter().map(|t| hm.irrep(t)).collect());
    let per_g: Vec<Result<Vec<WrittenTerm>, Restriction>> = match label {
        Some((p, s)) => {
            let parts = split_top(s, ';');
            if parts.len() != gw.len() {
                return Err(Error::Syntax {
                    pos: p,
                    msg: format!("{} restrictions for {} factors of g", parts.len(), gw.len()),
                });
            }
            parts
                .into_iter()
                .map(|(o, r)| parse_restriction(r, p + o, &hm))
                .collect::<Result<_, _>>()?
        }
        None if gw == hw => {
            let triple = Triple::new(galg, hm.alg.clone(), identity(&hm.alg), v)?;
            return Ok(Parsed { triple, notices });
        }
        None => infer(&gw, &hw)?.into_iter().map(Ok).collect(),
    };
    let mut embedding = Vec::new();
    for (gf, r) in gw.iter().zip(per_g) {
        match r {
            Err(g2) => {
                if !matches!(gf, Written::Other(f) if f.series == Series::G) {
                    return Err(Error::IncompatibleSpec(format!("G2 subalgebra label on {gf:?}")));
                }
                embedding.push(g2);
            }
            Ok(terms) => {
                let irs: Vec<Irrep> = terms.iter().map(|t| hm.irrep(t)).collect();
                let d: usize = irs.iter().map(|i| i.dim(&hm.alg)).sum();
                if d != gf.defining_dim() {
                    return Err(Error::IncompatibleSpec(format!(
                        "restriction of {gf:?} has dimension {d}, expected {}",
                        gf.defining_dim()
                    )));
                }
                embedding.extend(lift(*gf, &hm.alg, &irs)?);
            }
        }
    }
    let triple = Triple::new(galg, hm.alg, embedding, v)?;
    Ok(Parsed { triple, notices })
}

/// Parses a triple, discarding notices.
pub fn parse_triple(text: &str) -> Result<Triple, Error> {
    parse(text).map(|p| p.triple)
}

/// Parses a pair `(g, h)`, also accepting a full triple.
pub fn parse_pair(text: &str) -> Result<Triple, Error> {
    let mut depth = 0;
    let mut commas = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    if commas == 1 {
                        return parse_triple(&format!("{}, 0{}", &text[..i], &text[i..]));
                    }
                    break;
                }
            }
            ',' if depth == 1 => commas += 1,
            _ => {}
        }
    }
    parse_triple(text).map(|t| t.pair())
}

fn identity(h: &SemisimpleAlgebra) -> Vec<Restriction> {
    (0..h.factors.len())
        .map(|j| Restriction::Module(vec![Irrep::fundamental(h, j, 1)]))
        .collect()
}

/// Text of a module over `h`.
pub fn module_text(irs: &[Irrep]) -> String {
    if irs.is_empty() {
        return "0".into();
    }
    irs.iter().map(term_text).collect::<Vec<_>>().join(" + ")
}

fn term_text(ir: &Irrep) -> String {
    let mut atoms = Vec::new();
    for (j, w) in ir.weights.iter().enumerate() {
        for (i, &a) in w.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut s = format!("w{}", i + 1);
            if a != 1 {
                let _ = write!(s, "^{a}");
            }
            s.push_str(&"'".repeat(j));
            atoms.push(s);
        }
    }
    if atoms.is_empty() {
        "1".into()
    } else {
        atoms.join(" ")
    }
}

fn algebra_text(a: &SemisimpleAlgebra) -> String {
    a.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("+")
}

fn restriction_text(r: &Restriction) -> String {
    match r {
        Restriction::Module(irs) => module_text(irs),
        Restriction::G2Regular(G2Sub::A2, f) => format!("A2@{}", f[0]),
        Restriction::G2Regular(G2Sub::A1A1, f) => format!("A1A1@{},{}", f[0], f[1]),
    }
}

/// Canonical text of a triple; the embedding label is omitted exactly when inference
/// reproduces it.
pub fn print(t: &Triple) -> String {
    let mut s = format!("({}, {}, {})", algebra_text(&t.g), algebra_text(&t.h), module_text(&t.v.summands));
    let bare = parse_triple(&s).ok();
    if bare.as_ref().map(|b| &b.embedding) != Some(&t.embedding) {
        let labels: Vec<String> = t.embedding.iter().map(restriction_text).collect();
        let _ = write!(s, " [embed={}]", labels.join("; "));
    }
    s
}

/// Parsed factor list of an algebra in text form (`sl(3)+sp(4)`), normalized.
pub fn parse_algebra_text(s: &str) -> Result<SemisimpleAlgebra, Error> {
    let w = parse_algebra(s, 0)?;
    Ok(SemisimpleAlgebra::new(w.iter().flat_map(|x| x.factors()).collect()))
}

/// Module over `h` in text form.
pub fn parse_module_text(h: &SemisimpleAlgebra, s: &str) -> Result<ModuleExpr, Error> {
    let hw: Vec<Written> = h.factors.iter().map(|f| Written::from_factor(*f)).collect();
    let hm = HMap::new(&hw);
    let terms = parse_module(s, 0, &hw)?;
    Ok(ModuleExpr::new(terms.iter().map(|t| hm.irrep(t)).collect()))
}

/// Helper used by the tables: restriction data grouped for display.
pub fn restriction_summary(t: &Triple) -> BTreeMap<String, String> {
    t.g.factors
        .iter()
        .zip(&t.embedding)
        .map(|(g, r)| (g.to_string(), restriction_text(r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        let a = parse_pair("(so(8), so(7)) [embed=spin]").unwrap();
        let b = parse_triple("(so(8), so(7), 0) [embed=spin]").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_pair("(sl(3), sl(2), w1)").unwrap(), parse_triple("(sl(3), sl(2), 0)").unwrap());
    }

    #[test]
    fn example_triple() {
        let t = parse_triple("(sl(4)+sl(2), sl(3)+sl(2), w1 w1')").unwrap();
        assert_eq!(t.g.factors, vec![SimpleFactor::a(3), SimpleFactor::a(1)]);
        assert_eq!(t.v.summands.len(), 1);
        assert_eq!(t.v.dim(&t.h), 6);
        // sl(3) in sl(4) with a trivial complement; sl(2) identically.
        assert_eq!(
            t.embedding[0],
            Restriction::Module(vec![
                Irrep { weights: vec![vec![1, 0], vec![0]] },
                Irrep { weights: vec![vec![0, 0], vec![0]] }
            ])
        );
    }

    #[test]
    fn pair_and_arity() {
        let t = parse_triple("(so(7), so(6), 0)").unwrap();
        assert_eq!(t.h.factors, vec![SimpleFactor::a(3)]);
        assert!(t.v.is_zero());
        assert!(matches!(parse_triple("(sl(2), , w1 w1)"), Err(Error::Arity { .. })));
        assert!(matches!(parse_triple("(sl(2), sl(2), w1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn low_rank_lifts() {
        // so(4) > so(3) is the diagonal sl(2) in sl(2)+sl(2).
        let t = parse_triple("(so(4), so(3), 0)").unwrap();
        assert_eq!(t.g.factors.len(), 2);
        assert_eq!(t.embedding[0], t.embedding[1]);
        // so(6) > so(5) is sp(4) in sl(4).
        let t = parse_triple("(so(6), so(5), 0)").unwrap();
        assert_eq!(t.embedding[0], Restriction::Module(vec![Irrep { weights: vec![vec![1, 0]] }]));
    }

    #[test]
    fn round_trip() {
        for s in [
            "(sl(4)+sl(2), sl(3)+sl(2), w1 w1')",
            "(so(8), so(7), spin)",
            "(sl(3)+sl(3), sl(3), 0) [embed=w1; w1]",
            "(g2, sl(3), 0) [embed=A2@0]",
            "(so(9), so(7), 0) [embed=spin + 1]",
            "(sp(8), sp(6)+sl(2), w1 + w1)",
        ] {
            let t = parse_triple(s).unwrap();
            let p = print(&t);
            assert_eq!(parse_triple(&p).unwrap(), t, "{s} -> {p}");
            assert_eq!(print(&parse_triple(&p).unwrap()), p);
        }
    }
}
