use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use spherical::algebra::Triple;
use spherical::classify::{self, Options};
use spherical::diagram::Diagram;
use spherical::normal::normalize;
use spherical::oracle::{self, Verdict};
use spherical::rules::{self, Step};
use spherical::tables::{database, Table};
use spherical::verify::{self, Format, Report, RunConfig};
use spherical::{dsl, Error};

const GRAMMAR: &str = "\
triple  := '(' algebra ',' algebra ',' module ')' [ '[embed=' restr (';' restr)* ']' ]
algebra := factor ('+' factor)*      factor := sl(n) | so(n) | sp(2n) | g2 | f4 | e6 | e7 | e8
module  := '0' | term ('+' term)*    term := '1' | atom+   atom := w<i>[^k]['...] | spin['...]
example: \"(sl(4)+sl(2), sl(3)+sl(2), w1 w1')\"";

#[derive(Parser)]
#[command(name = "spherical", version, about = "Smooth affine spherical varieties: tables, rules and a rank oracle")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 8)]
    trials: usize,
    #[arg(long = "sym-degree", global = true, default_value_t = 5)]
    sym_degree: usize,
    #[arg(long = "max-rank", global = true, default_value_t = 4)]
    max_rank: usize,
    /// Print the versioned JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sphericality of a module: `h` and `V`, e.g. `sl(3) "w1 + w1"`.
    CheckModule { h: String, v: String },
    /// Sphericality of a pair `(g, h)`.
    CheckPair { pair: String },
    /// Sphericality of a triple, by oracle and by classification.
    CheckTriple { triple: String },
    /// Principal subalgebra of the pair underlying a triple.
    Principal { pair: String },
    /// Undo the inference rules.
    Reduce { triple: String },
    /// Apply the inference rules within `--max-rank`.
    Expand { triple: String },
    /// Primitive triples from the tables within `--max-rank`.
    Enumerate {
        /// Also run the oracle on every item.
        #[arg(long)]
        verify: bool,
    },
    /// Check every realizable table entry within `--max-rank`.
    VerifyTables,
    /// Parse a triple and show its diagram.
    Parse {
        triple: String,
        /// Print the diagram in Graphviz format.
        #[arg(long)]
        dot: bool,
    },
    /// Database access.
    Tables {
        #[command(subcommand)]
        cmd: TablesCmd,
    },
}

#[derive(Subcommand)]
enum TablesCmd {
    /// Dump all entries.
    Export,
}

struct Outcome {
    json: String,
    text: String,
    code: u8,
}

fn outcome<T: Serialize>(cmd: &str, cfg: &RunConfig, result: T, text: String, ok: bool) -> Outcome {
    Outcome { json: Report::new(cmd, cfg, result).to_json(), text, code: if ok { 0 } else { 1 } }
}

fn verdict_line(v: &Verdict) -> String {
    let cert = match &v.certificate {
        oracle::Certificate::Witness(w) => format!("witness trial {}", w.trial),
        oracle::Certificate::DimensionBound { what, available, needed } => {
            format!("dimension bound: {what} {available} < {needed}")
        }
        oracle::Certificate::Multiplicity { degree, multiplicity, .. } => {
            format!("multiplicity {multiplicity} in degree {degree}")
        }
        oracle::Certificate::RankDeficit { pair_rank, pair_needed, module_rank, module_needed } => {
            format!("rank deficit {pair_rank}/{pair_needed}, {module_rank}/{module_needed}")
        }
    };
    format!("{:?} ({cert})", v.status)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerdictReport {
    input: String,
    normal_form: String,
    database: Vec<String>,
    verdict: Verdict,
}

fn check(cmd: &str, cfg: &RunConfig, t: &Triple, tables: &[Table], pair: bool) -> Result<Outcome, Error> {
    let v = if pair { oracle::check_pair(t, &cfg.oracle())? } else { oracle::check_triple(t, &cfg.oracle())? };
    let database: Vec<String> = database().lookup(t, tables).iter().map(|i| i.binding.to_string()).collect();
    let text = format!(
        "{}\n{}\ndatabase: {}",
        dsl::print(t),
        verdict_line(&v),
        if database.is_empty() { "no match".to_string() } else { database.join(", ") }
    );
    let ok = v.status.is_spherical();
    let r = VerdictReport { input: dsl::print(t), normal_form: dsl::print(&normalize(t)), database, verdict: v };
    Ok(outcome(cmd, cfg, r, text, ok))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TripleReport {
    verdict: Option<Verdict>,
    classification: classify::ClassificationResult,
}

fn check_triple(cfg: &RunConfig, t: &Triple) -> Result<Outcome, Error> {
    let verdict = if t.is_realizable() { Some(oracle::check_triple(t, &cfg.oracle())?) } else { None };
    let opts = Options { oracle: cfg.oracle(), cross_check: false };
    let classification = match classify::classify(t, &opts) {
        Ok(c) => c,
        Err(Error::UnsupportedExceptional(_)) if verdict.is_some() => classify::ClassificationResult {
            input: dsl::print(t),
            normal_form: dsl::print(&normalize(t)),
            components: Vec::new(),
            decision: classify::Decision::Undecided,
            discrepancies: Vec::new(),
        },
        Err(e) => return Err(e),
    };
    let mut text = vec![classification.input.clone(), format!("normal form: {}", classification.normal_form)];
    if let Some(v) = &verdict {
        text.push(format!("oracle: {}", verdict_line(v)));
    }
    for c in &classification.components {
        let prov: Vec<String> = c
            .provenance
            .iter()
            .map(|p| match p {
                classify::Provenance::Trivial => "trivial".into(),
                classify::Provenance::Table { binding } => binding.to_string(),
                classify::Provenance::Rules { binding, steps, .. } => format!("{binding} + {} rule steps", steps.len()),
                classify::Provenance::OracleOnly => "oracle only".into(),
            })
            .collect();
        text.push(format!("component {}: {:?} via {}", c.triple, c.decision, prov.join(", ")));
    }
    text.extend(classification.discrepancies.iter().cloned());
    text.push(format!("decision: {:?}", classification.decision));
    let ok = match &verdict {
        Some(v) => v.status.is_spherical(),
        None => classification.decision.is_spherical(),
    } && classification.discrepancies.is_empty();
    Ok(outcome("check-triple", cfg, TripleReport { verdict, classification }, text.join("\n"), ok))
}

fn principal(cfg: &RunConfig, t: &Triple) -> Result<Outcome, Error> {
    let r = classify::principal_subalgebra(t, &cfg.oracle())?;
    let mut text = vec![r.pair.clone()];
    if let (Some(d), Some(dd), Some(s)) = (r.dim, r.derived_dim, r.dim_s) {
        text.push(format!("oracle: dim {d}, derived {dd}, dim s {s}"));
    }
    let mut ok = true;
    for d in &r.database {
        text.push(format!(
            "{}: {} (dim {}, derived {}{}){}",
            d.binding,
            d.principal.text,
            d.principal.dim,
            d.principal.derived_dim,
            if d.principal.clamped { ", clamped" } else { "" },
            if d.star { " *" } else { "" }
        ));
        if let (Some(x), Some(y)) = (r.dim, r.derived_dim) {
            ok &= x == d.principal.dim && y == d.principal.derived_dim && r.star() == d.star;
        }
    }
    if r.database.is_empty() {
        text.push("database: no match".into());
    }
    Ok(outcome("principal", cfg, r, text.join("\n"), ok))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Derivation {
    triple: String,
    steps: Vec<Step>,
}

fn reduce(cfg: &RunConfig, t: &Triple) -> Outcome {
    let (red, steps) = rules::reduce(t);
    let text = format!("{}\n{} steps", dsl::print(&red), steps.len());
    outcome("reduce", cfg, Derivation { triple: dsl::print(&red), steps }, text, true)
}

fn expand(cfg: &RunConfig, t: &Triple) -> Outcome {
    let out: Vec<Derivation> = rules::expand(t, cfg.max_rank)
        .into_iter()
        .map(|(x, steps)| Derivation { triple: dsl::print(&x), steps })
        .collect();
    let text = out.iter().map(|d| format!("{}  ({} steps)", d.triple, d.steps.len())).collect::<Vec<_>>().join("\n");
    outcome("expand", cfg, out, text, true)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EnumerateReport {
    items: Vec<classify::EnumItem>,
    structure: classify::StructureReport,
    failed: Vec<String>,
}

fn enumerate(cfg: &RunConfig, check: bool) -> Outcome {
    let mut items = classify::enumerate(cfg.max_rank);
    if check {
        classify::verify_items(&mut items, &cfg.oracle());
    }
    let structure = classify::check_structure(&items);
    let failed: Vec<String> = items
        .iter()
        .filter(|e| e.verdict.is_some_and(|s| !s.is_spherical()))
        .map(|e| e.normal_form.clone())
        .collect();
    let mut text: Vec<String> = items.iter().map(|e| e.normal_form.clone()).collect();
    text.push(format!(
        "{} items, {} not tree-like, {} unconfined, {} failed",
        items.len(),
        structure.not_tree.len(),
        structure.unconfined.len(),
        failed.len()
    ));
    let ok = structure.not_tree.is_empty() && structure.unconfined.is_empty() && failed.is_empty();
    outcome("enumerate", cfg, EnumerateReport { items, structure, failed }, text.join("\n"), ok)
}

fn verify_tables(cfg: &RunConfig) -> Outcome {
    let r = verify::verify_tables(cfg.max_rank, &cfg.oracle());
    let mut text = Vec::new();
    for (name, cs) in [("modules", &r.modules), ("triples", &r.triples), ("principal", &r.principal), ("c-subspaces", &r.c_subspaces)] {
        text.push(format!("{name}: {} checks, {} failed", cs.len(), cs.iter().filter(|c| !c.ok).count()));
        for c in cs.iter().filter(|c| !c.ok) {
            text.push(format!("  FAIL {} {}: expected {}, found {}", c.id, c.triple, c.expected, c.found));
        }
    }
    for id in &r.database_only {
        text.push(format!("{id}: database-only, not oracle-checked"));
    }
    let ok = r.failures == 0;
    outcome("verify-tables", cfg, r, text.join("\n"), ok)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ParseReport {
    input: String,
    printed: String,
    normal_form: String,
    notices: Vec<String>,
    primitive: bool,
    tree: bool,
    components: Vec<String>,
    diagram: Diagram,
}

fn parse(cfg: &RunConfig, text: &str, dot: bool) -> Result<Outcome, Error> {
    let p = dsl::parse(text)?;
    let d = Diagram::new(&p.triple);
    let r = ParseReport {
        input: text.to_string(),
        printed: dsl::print(&p.triple),
        normal_form: dsl::print(&normalize(&p.triple)),
        notices: p.notices,
        primitive: d.is_primitive(),
        tree: d.is_tree(),
        components: d.decompose().iter().map(|c| dsl::print(&c.triple)).collect(),
        diagram: d.clone(),
    };
    let out = if dot {
        d.to_dot()
    } else {
        let mut lines = vec![r.printed.clone(), format!("normal form: {}", r.normal_form)];
        lines.extend(r.notices.iter().cloned());
        lines.push(format!("primitive: {}, tree: {}", r.primitive, r.tree));
        lines.extend(r.components.iter().map(|c| format!("component {c}")));
        lines.join("\n")
    };
    Ok(outcome("parse", cfg, r, out, true))
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::CheckModule { h, v } => {
            let h = dsl::parse_algebra_text(h)?;
            let v = dsl::parse_module_text(&h, v)?;
            check("check-module", cfg, &Triple::fiber(h, v), &[Table::Modules], false)
        }
        Cmd::CheckPair { pair } => {
            let t = dsl::parse_pair(pair)?;
            check("check-pair", cfg, &t, &[Table::SimplePairs, Table::NonSimplePairs, Table::BaseComponents], true)
        }
        Cmd::CheckTriple { triple } => check_triple(cfg, &dsl::parse_triple(triple)?),
        Cmd::Principal { pair } => principal(cfg, &dsl::parse_pair(pair)?),
        Cmd::Reduce { triple } => Ok(reduce(cfg, &dsl::parse_triple(triple)?)),
        Cmd::Expand { triple } => Ok(expand(cfg, &dsl::parse_triple(triple)?)),
        Cmd::Enumerate { verify } => Ok(enumerate(cfg, *verify)),
        Cmd::VerifyTables => Ok(verify_tables(cfg)),
        Cmd::Parse { triple, dot } => parse(cfg, triple, *dot),
        Cmd::Tables { cmd: TablesCmd::Export } => {
            let db = database();
            Ok(outcome("tables export", cfg, &db.entries, format!("{} entries, sha256 {}", db.entries.len(), db.checksum), true))
        }
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Syntax { .. }
            | Error::UnknownFactor(_)
            | Error::UnknownLabel(_)
            | Error::Arity { .. }
            | Error::RankMismatch { .. }
            | Error::NotDominant(_)
            | Error::InvalidRank { .. }
            | Error::IncompatibleSpec(_)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let a = &cli.run;
    let cfg = RunConfig {
        seed: a.seed,
        trials: a.trials,
        sym_degree: a.sym_degree,
        max_rank: a.max_rank,
        format: if a.json { Format::Json } else { Format::Text },
        jobs: a.jobs,
    };
    if let Some(n) = a.jobs {
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("could not start {n} worker threads");
        }
    }
    match run(&cli, &cfg) {
        Ok(o) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", if a.json { &o.json } else { &o.text });
            ExitCode::from(o.code)
        }
        Err(e) if is_usage(&e) => {
            eprintln!("error: {e}\n\n{GRAMMAR}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
