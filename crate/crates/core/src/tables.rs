//! The classification database: Tables 1 to 6 and the c-subspace records.
//!
//! The database is the text file `data/tables.txt`, compiled in. Its format is described
//! in the file header. `data/tables.sha256` holds the audited digest and per-table entry
//! counts:
//!
//! ```text
//! sha256 <64 hex digits>
//! T1 <count>
//! ...
//! C <count>
//! ```

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::Triple;
use crate::dsl;
use crate::error::Error;
use crate::lie::{Series, SimpleFactor};
use crate::normal::normalize;

pub const SOURCE: &str = include_str!("../data/tables.txt");
pub const AUDITED: &str = include_str!("../data/tables.sha256");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Table {
    Modules,
    Triples,
    Rules,
    SimplePairs,
    NonSimplePairs,
    BaseComponents,
    CSubspaces,
}

impl Table {
    pub const ALL: [Table; 7] = [
        Table::Modules,
        Table::Triples,
        Table::Rules,
        Table::SimplePairs,
        Table::NonSimplePairs,
        Table::BaseComponents,
        Table::CSubspaces,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Table::Modules => "T1",
            Table::Triples => "T2",
            Table::Rules => "T3",
            Table::SimplePairs => "T4",
            Table::NonSimplePairs => "T5",
            Table::BaseComponents => "T6",
            Table::CSubspaces => "C",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Table::Modules => "Primitive spherical modules",
            Table::Triples => "Reduced spherical triples with g != h and V != 0",
            Table::Rules => "Inference rules",
            Table::SimplePairs => "Primitive spherical pairs with g simple",
            Table::NonSimplePairs => "Primitive spherical pairs with g not simple",
            Table::BaseComponents => "Base components of primitive spherical triples",
            Table::CSubspaces => "c-subspaces of spherical modules",
        }
    }

    fn from_tag(s: &str) -> Option<Table> {
        Table::ALL.into_iter().find(|t| t.tag() == s)
    }

    pub fn has_principal(self) -> bool {
        matches!(self, Table::SimplePairs | Table::NonSimplePairs | Table::BaseComponents)
    }
}

/// Integer expression over the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Bin(char, Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr, Error> {
        let toks = tokenize(s)?;
        let mut p = ExprParser { toks: &toks, pos: 0, src: s };
        let e = p.sum()?;
        if p.pos != toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, env: &BTreeMap<String, i64>) -> Result<i64, Error> {
        Ok(match self {
            Expr::Num(n) => *n,
            Expr::Var(v) => *env.get(v).ok_or_else(|| Error::UnknownLabel(v.clone()))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    '/' | '%' if b == 0 => return Err(Error::Invalid("division by zero".into())),
                    '/' => a.div_euclid(b),
                    '%' => a.rem_euclid(b),
                    _ => unreachable!(),
                }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Id(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, Error> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Invalid(format!("number `{t}`")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Id(cs[st..i].iter().collect()));
        } else if "+-*/%()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected `{c}` in `{s}`") });
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    src: &'a str,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: format!("{msg} in `{}`", self.src) }
    }

    fn peek_sym(&self, set: &str) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Sym(c)) if set.contains(*c) => Some(*c),
            _ => None,
        }
    }

    fn sum(&mut self) -> Result<Expr, Error> {
        let mut e = self.product()?;
        while let Some(op) = self.peek_sym("+-") {
            self.pos += 1;
            e = Expr::Bin(op, Box::new(e), Box::new(self.product()?));
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr, Error> {
        let mut e = self.atom()?;
        while let Some(op) = self.peek_sym("*/%") {
            self.pos += 1;
            e = Expr::Bin(op, Box::new(e), Box::new(self.atom()?));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match t {
            Tok::Num(n) => Ok(Expr::Num(n)),
            Tok::Id(v) => Ok(Expr::Var(v)),
            Tok::Sym('-') => Ok(Expr::Neg(Box::new(self.atom()?))),
            Tok::Sym('(') => {
                let e = self.sum()?;
                if self.peek_sym(")").is_none() {
                    return Err(self.err("missing `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// A condition on parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cond {
    Cmp(Expr, String, Expr),
    In(Expr, Vec<i64>),
}

impl Cond {
    pub fn parse(s: &str) -> Result<Cond, Error> {
        if let Some((a, b)) = s.split_once(" in ") {
            let vals = b
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad value list `{b}`"))))
                .collect::<Result<_, _>>()?;
            return Ok(Cond::In(Expr::parse(a)?, vals));
        }
        for op in [">=", "<=", "==", "!=", ">", "<"] {
            if let Some((a, b)) = s.split_once(op) {
                return Ok(Cond::Cmp(Expr::parse(a)?, op.to_string(), Expr::parse(b)?));
            }
        }
        Err(Error::Invalid(format!("bad condition `{s}`")))
    }

    pub fn holds(&self, env: &BTreeMap<String, i64>) -> Result<bool, Error> {
        Ok(match self {
            Cond::In(e, vals) => vals.contains(&e.eval(env)?),
            Cond::Cmp(a, op, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                match op.as_str() {
                    ">=" => a >= b,
                    "<=" => a <= b,
                    "==" => a == b,
                    "!=" => a != b,
                    ">" => a > b,
                    _ => a < b,
                }
            }
        })
    }
}

fn parse_conds(s: &str) -> Result<Vec<Cond>, Error> {
    // `n in 7,8,10` contains a space; rejoin it before splitting.
    let mut out = Vec::new();
    let words: Vec<&str> = s.split_whitespace().collect();
    let mut i = 0;
    while i < words.len() {
        if words.get(i + 1) == Some(&"in") && i + 2 < words.len() {
            out.push(Cond::parse(&format!("{} in {}", words[i], words[i + 2]))?);
            i += 3;
        } else {
            out.push(Cond::parse(words[i])?);
            i += 1;
        }
    }
    Ok(out)
}

fn all_hold(cs: &[Cond], env: &BTreeMap<String, i64>) -> Result<bool, Error> {
    for c in cs {
        if !c.holds(env)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replaces every `{expr}` by its value.
pub fn substitute(text: &str, env: &BTreeMap<String, i64>) -> Result<String, Error> {
    let mut out = String::new();
    let mut rest = text;
    while let Some(i) = rest.find('{') {
        out.push_str(&rest[..i]);
        let j = rest[i..].find('}').ok_or_else(|| Error::Invalid(format!("unclosed `{{` in `{text}`")))? + i;
        out.push_str(&Expr::parse(&rest[i + 1..j])?.eval(env)?.to_string());
        rest = &rest[j + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CSpec {
    Zero,
    Full,
    Line(Vec<i64>),
    WithinLine(Vec<i64>),
}

impl CSpec {
    fn parse(s: &str) -> Result<CSpec, Error> {
        let vec = |t: &str| -> Result<Vec<i64>, Error> {
            t.trim()
                .trim_start_matches('(')
                .trim_end_matches(')')
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad vector `{t}`"))))
                .collect()
        };
        let s = s.trim();
        match s {
            "0" => Ok(CSpec::Zero),
            "z" => Ok(CSpec::Full),
            _ => {
                if let Some(r) = s.strip_prefix("line") {
                    Ok(CSpec::Line(vec(r)?))
                } else if let Some(r) = s.strip_prefix("sub") {
                    Ok(CSpec::WithinLine(vec(r)?))
                } else {
                    Err(Error::Invalid(format!("bad c-subspace `{s}`")))
                }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Variant {
    #[serde(skip)]
    pub guard: Vec<Cond>,
    pub guard_text: String,
    pub text: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub id: String,
    pub table: Table,
    pub params: Vec<String>,
    #[serde(skip)]
    pub require: Vec<Cond>,
    pub require_text: String,
    pub variants: Vec<Variant>,
    /// `None`: no star; `Some("")`: always; otherwise the condition text.
    pub star: Option<String>,
    pub principal: Option<String>,
    pub principal_note: Option<String>,
    pub mark: Option<String>,
    pub circled: Option<String>,
    pub rule: Option<u8>,
    pub c: Option<CSpec>,
    pub aliases: Vec<String>,
    pub notes: Vec<String>,
}

impl Entry {
    pub fn admits(&self, env: &BTreeMap<String, i64>) -> Result<bool, Error> {
        all_hold(&self.require, env)
    }

    /// Whether the star applies at the binding.
    pub fn starred(&self, env: &BTreeMap<String, i64>) -> Result<bool, Error> {
        match &self.star {
            None => Ok(false),
            Some(c) if c.is_empty() => Ok(true),
            Some(c) => all_hold(&parse_conds(c)?, env),
        }
    }

    pub fn is_realizable_family(&self) -> bool {
        self.variants.iter().any(|v| !v.text.contains("e6") && !v.text.contains("e7") && !v.text.contains("e8") && !v.text.contains("f4"))
    }
}

/// Parameter values of an instance.
pub type Params = BTreeMap<String, i64>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Binding {
    pub entry: String,
    pub variant: usize,
    pub params: Params,
}

impl std::fmt::Display for Binding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.entry)?;
        if self.variant > 0 {
            write!(f, "/{}", self.variant)?;
        }
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if !ps.is_empty() {
            write!(f, "({})", ps.join(","))?;
        }
        Ok(())
    }
}

/// Dimension data of a principal subalgebra expression at a binding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Principal {
    pub text: String,
    pub dim: usize,
    pub derived_dim: usize,
    /// Some argument was negative and was read as zero.
    pub clamped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    pub binding: Binding,
    pub triple: Triple,
    pub text: String,
    pub star: bool,
    pub principal: Option<Principal>,
}

pub struct Database {
    pub entries: Vec<Entry>,
    pub checksum: String,
    index: Mutex<HashMap<usize, Arc<Vec<Instance>>>>,
}

impl std::fmt::Debug for Database {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Database").field("entries", &self.entries.len()).field("checksum", &self.checksum).finish()
    }
}

pub fn checksum(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// The compiled-in database.
pub fn database() -> &'static Database {
    static DB: OnceLock<Database> = OnceLock::new();
    DB.get_or_init(|| Database::parse(SOURCE).expect("compiled-in database parses"))
}

impl Database {
    pub fn parse(text: &str) -> Result<Database, Error> {
        let mut entries: Vec<Entry> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |msg: String| Error::Syntax { pos: lineno + 1, msg };
            if let Some(id) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let tag = id.split('.').next().unwrap_or("");
                let table = Table::from_tag(tag).ok_or_else(|| at(format!("unknown table in `{id}`")))?;
                entries.push(Entry {
                    id: id.to_string(),
                    table,
                    params: Vec::new(),
                    require: Vec::new(),
                    require_text: String::new(),
                    variants: Vec::new(),
                    star: None,
                    principal: None,
                    principal_note: None,
                    mark: None,
                    circled: None,
                    rule: None,
                    c: None,
                    aliases: Vec::new(),
                    notes: Vec::new(),
                });
                continue;
            }
            let e = entries.last_mut().ok_or_else(|| at("field outside an entry".into()))?;
            let (key, val) = line.split_once(' ').map(|(k, v)| (k, v.trim())).unwrap_or((line, ""));
            match key {
                "params" => e.params = val.split_whitespace().map(String::from).collect(),
                "require" => {
                    e.require = parse_conds(val)?;
                    e.require_text = val.to_string();
                }
                "triple" => {
                    let (guard_text, text) = match val.strip_prefix('[') {
                        Some(r) => {
                            let (g, t) = r.split_once(']').ok_or_else(|| at("unclosed guard".into()))?;
                            (g.trim().to_string(), t.trim().to_string())
                        }
                        None => (String::new(), val.to_string()),
                    };
                    e.variants.push(Variant { guard: parse_conds(&guard_text)?, guard_text, text });
                }
                "star" => e.star = Some(val.strip_prefix("if").unwrap_or(val).trim().to_string()),
                "l" => e.principal = Some(val.to_string()),
                "lnote" => e.principal_note = Some(val.to_string()),
                "mark" => e.mark = Some(val.to_string()),
                "circled" => e.circled = Some(val.to_string()),
                "rule" => e.rule = Some(val.parse().map_err(|_| at(format!("bad rule `{val}`")))?),
                "c" => e.c = Some(CSpec::parse(val)?),
                "alias" => e.aliases.push(val.to_string()),
                "note" => e.notes.push(val.to_string()),
                _ => return Err(at(format!("unknown field `{key}`"))),
            }
        }
        Ok(Database { entries, checksum: checksum(text), index: Mutex::new(HashMap::new()) })
    }

    pub fn entry(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn table(&self, t: Table) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(move |e| e.table == t)
    }

    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut m = BTreeMap::new();
        for t in Table::ALL {
            m.insert(t.tag(), self.table(t).count());
        }
        m
    }

    /// Compares the digest and counts with the audited checksum file.
    pub fn audit(&self, audited: &str) -> Result<(), Error> {
        let mut lines = audited.lines().filter(|l| !l.trim().is_empty());
        let first = lines.next().unwrap_or("");
        let want = first.strip_prefix("sha256 ").unwrap_or("").trim();
        if want != self.checksum {
            return Err(Error::Invalid(format!("database digest {} differs from audited {want}", self.checksum)));
        }
        let counts = self.counts();
        for l in lines {
            let (tag, n) = l.split_once(' ').ok_or_else(|| Error::Invalid(format!("bad audit line `{l}`")))?;
            let n: usize = n.trim().parse().map_err(|_| Error::Invalid(format!("bad audit line `{l}`")))?;
            if counts.get(tag) != Some(&n) {
                return Err(Error::Invalid(format!("table {tag} has {:?} entries, audited {n}", counts.get(tag))));
            }
        }
        Ok(())
    }

    /// Instantiates a variant of an entry.
    pub fn instantiate(&self, id: &str, variant: usize, params: &Params) -> Result<Instance, Error> {
        let e = self.entry(id).ok_or_else(|| Error::UnknownLabel(id.to_string()))?;
        for p in &e.params {
            if !params.contains_key(p) {
                return Err(Error::ConstraintViolation(format!("{id}: parameter {p} missing")));
            }
        }
        if !e.admits(params)? {
            return Err(Error::ConstraintViolation(format!("{id}: {} fails at {params:?}", e.require_text)));
        }
        let v = e.variants.get(variant).ok_or_else(|| Error::UnknownLabel(format!("{id}/{variant}")))?;
        if !all_hold(&v.guard, params)? {
            return Err(Error::ConstraintViolation(format!("{id}/{variant}: {} fails at {params:?}", v.guard_text)));
        }
        let text = substitute(&v.text, params)?;
        let triple = dsl::parse_triple(&text)?;
        let star = e.starred(params)?;
        let principal = match &e.principal {
            Some(l) => {
                let mut env = params.clone();
                env.insert("r".into(), triple.h.rank() as i64);
                Some(principal_dims(&substitute(l, &env)?)?)
            }
            None => None,
        };
        let binding = Binding { entry: id.to_string(), variant, params: params.clone() };
        Ok(Instance { binding, triple, text, star, principal })
    }

    /// All admissible bindings of an entry with parameters up to `bound`.
    pub fn bindings(&self, e: &Entry, bound: i64) -> Vec<(usize, Params)> {
        let mut out = Vec::new();
        let k = e.params.len();
        let mut vals = vec![0i64; k];
        loop {
            let env: Params = e.params.iter().cloned().zip(vals.iter().cloned()).collect();
            if e.admits(&env).unwrap_or(false) {
                for (vi, v) in e.variants.iter().enumerate() {
                    if all_hold(&v.guard, &env).unwrap_or(false) {
                        out.push((vi, env.clone()));
                    }
                }
            }
            let mut i = 0;
            while i < k {
                vals[i] += 1;
                if vals[i] <= bound {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out
    }

    /// Instances of an entry whose factors all have rank at most `max_rank`.
    pub fn instances_of(&self, e: &Entry, max_rank: usize) -> Vec<Instance> {
        let bound = 2 * max_rank as i64 + 2;
        self.bindings(e, bound)
            .into_iter()
            .filter(|(vi, p)| {
                substitute(&e.variants[*vi].text, p).map(|t| written_rank(&t) <= max_rank).unwrap_or(false)
            })
            .filter_map(|(vi, p)| self.instantiate(&e.id, vi, &p).ok())
            .filter(|i| i.triple.max_rank() <= max_rank)
            .collect()
    }

    /// Every instance with factor ranks at most `max_rank` (cached).
    pub fn instances(&self, max_rank: usize) -> Arc<Vec<Instance>> {
        if let Some(v) = self.index.lock().unwrap().get(&max_rank) {
            return v.clone();
        }
        let v: Vec<Instance> = self.entries.iter().flat_map(|e| self.instances_of(e, max_rank)).collect();
        let v = Arc::new(v);
        self.index.lock().unwrap().insert(max_rank, v.clone());
        v
    }

    /// Entries of the given tables instantiating to a triple isomorphic to `t`.
    pub fn lookup(&self, t: &Triple, tables: &[Table]) -> Vec<Instance> {
        let rank = t.max_rank().max(1);
        let want = normalize(t);
        let key = shape(&want);
        self.instances(rank)
            .iter()
            .filter(|i| tables.contains(&self.entry(&i.binding.entry).unwrap().table))
            .filter(|i| shape(&i.triple) == key)
            .filter(|i| normalize(&i.triple) == want)
            .cloned()
            .collect()
    }
}

/// Largest rank among the written classical factors of a triple text.
fn written_rank(text: &str) -> usize {
    let mut best = 0;
    for name in ["sl(", "sp(", "so("] {
        for (i, _) in text.match_indices(name) {
            let rest = &text[i + 3..];
            let k: usize = rest[..rest.find(')').unwrap_or(0)].trim().parse().unwrap_or(0);
            let r = if name == "sl(" { k.saturating_sub(1) } else { k / 2 };
            best = best.max(r);
        }
    }
    best
}

/// Isomorphism-invariant summary used to skip normalization.
fn shape(t: &Triple) -> (Vec<SimpleFactor>, Vec<SimpleFactor>, Vec<usize>) {
    let mut g = t.g.factors.clone();
    let mut h = t.h.factors.clone();
    g.sort();
    h.sort();
    let mut v: Vec<usize> = t.v.summands.iter().map(|s| s.dim(&t.h)).collect();
    v.sort();
    (g, h, v)
}

/// Dimension and derived dimension of a principal subalgebra written as factors
/// separated by ` x `: `0`, `t^k`, `gl(k)`, `sl(k)`, `sp(2k)`, `so(k)`, Cartan names
/// like `B3`, each optionally raised to a power `^k`.
pub fn principal_dims(text: &str) -> Result<Principal, Error> {
    let mut dim = 0i64;
    let mut der = 0i64;
    let mut clamped = false;
    for part in text.split(" x ") {
        let part = part.trim();
        if part == "0" {
            continue;
        }
        let (base, pow) = match part.rsplit_once('^') {
            Some((b, p)) => (b, p.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad power in `{part}`")))?),
            None => (part, 1),
        };
        if pow < 0 {
            clamped = true;
            continue;
        }
        let (d, dd) = if base == "t" {
            (1, 0)
        } else if let Some((name, arg)) = base.strip_suffix(')').and_then(|b| b.split_once('(')) {
            let mut k: i64 = arg.trim().parse().map_err(|_| Error::Invalid(format!("bad argument in `{part}`")))?;
            if k < 0 {
                clamped = true;
                k = 0;
            }
            match name {
                "gl" => (k * k, (k * k - 1).max(0)),
                "sl" => ((k * k - 1).max(0), (k * k - 1).max(0)),
                "sp" if k % 2 == 0 => (k / 2 * (k + 1), k / 2 * (k + 1)),
                "so" if k == 2 => (1, 0),
                "so" => (k * (k - 1) / 2, k * (k - 1) / 2),
                _ => return Err(Error::Invalid(format!("unknown principal factor `{part}`"))),
            }
        } else {
            let f = cartan_name(base)?;
            (f.dim() as i64, f.dim() as i64)
        };
        dim += d * pow;
        der += dd * pow;
    }
    Ok(Principal { text: text.to_string(), dim: dim as usize, derived_dim: der as usize, clamped })
}

fn cartan_name(s: &str) -> Result<SimpleFactor, Error> {
    let bad = || Error::UnknownFactor(s.to_string());
    let mut cs = s.chars();
    let series = match cs.next().ok_or_else(bad)? {
        'A' => Series::A,
        'B' => Series::B,
        'C' => Series::C,
        'D' => Series::D,
        'E' => Series::E,
        'F' => Series::F,
        'G' => Series::G,
        _ => return Err(bad()),
    };
    let rank: usize = cs.as_str().parse().map_err(|_| bad())?;
    SimpleFactor::new(series, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(kv: &[(&str, i64)]) -> Params {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn audited_counts_and_digest() {
        let db = database();
        db.audit(AUDITED).unwrap();
        let c = db.counts();
        assert_eq!((c["T1"], c["T2"], c["T3"], c["T5"], c["T6"]), (19, 16, 2, 8, 9));
    }

    #[test]
    fn every_variant_instantiates_at_small_parameters() {
        let db = database();
        for e in &db.entries {
            let inst = db.instances_of(e, 8);
            assert!(!inst.is_empty(), "{} has no instance", e.id);
            for i in &inst {
                i.triple.validate().unwrap();
            }
        }
    }

    #[test]
    fn instantiate_examples() {
        let db = database();
        let i = db.instantiate("T2.6", 0, &p(&[("n", 2)])).unwrap();
        assert_eq!(dsl::print(&i.triple), "(sl(4), sp(4), w1)");
        assert!(matches!(db.instantiate("T4.2", 0, &p(&[("n", 1)])), Err(Error::ConstraintViolation(_))));
        let i = db.instantiate("T6.5", 0, &p(&[("n", 5)])).unwrap();
        assert!(i.star);
        assert_eq!(i.principal.unwrap().dim, 3);
    }

    #[test]
    fn principal_expressions() {
        let d = principal_dims("gl(2) x t^0").unwrap();
        assert_eq!((d.dim, d.derived_dim, d.clamped), (4, 3, false));
        let d = principal_dims("sp(-2) x t^1 x sp(2)").unwrap();
        assert_eq!((d.dim, d.derived_dim, d.clamped), (4, 3, true));
        assert_eq!(principal_dims("A1^3").unwrap().dim, 9);
        assert_eq!(principal_dims("D4").unwrap().derived_dim, 28);
    }

    #[test]
    fn lookup_spin_rows() {
        let db = database();
        let t = dsl::parse_triple("(so(8), so(7), spin)").unwrap();
        let hits = db.lookup(&t, &[Table::Triples]);
        assert!(hits.iter().any(|i| i.binding.entry == "T2.8" && i.binding.params["n"] == 7));
        let t = dsl::parse_triple("(so(10), so(9), spin)").unwrap();
        assert!(db.lookup(&t, &[Table::Triples]).is_empty());
    }

    #[test]
    fn lookup_sees_duals() {
        let db = database();
        let t = dsl::parse_triple("(sl(5), sl(5), w3)").unwrap();
        let hits = db.lookup(&t, &[Table::Modules]);
        assert!(hits.iter().any(|i| i.binding.entry == "T1.3"));
    }
}
