//! Command-line front end. [`run`] takes argv and returns the exit code and
//! the text for both output streams, so tests can drive it in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;
use umt_core::aut::{automorphism_group_with_limit, AutError, OrbitKind, DEFAULT_AUT_LIMIT};
use umt_core::formula::{evaluate, parse_formula_with, truth_set, Environment};
use umt_core::miner::{run_campaign, CampaignParams, Claim, MinerError};
use umt_core::props::{classify_binary, classify_cyclic, right_segments, PropsError};
use umt_core::schemes::{
    check_f, check_q, check_q1, check_uniformity, find_indicators, indiscernibility_partition,
    set_string, uniformity_degrees, Mode, Scheme, SchemeError, SchemeVerdict, Witness,
};
use umt_core::{Element, FormulaError, Signature, Structure, StructureError};

use crate::exec::Threaded;
use crate::fms::{parse_structure, FmsError};
use crate::json;
use crate::verify::{replay, Replay};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Fms {
        path: String,
        #[source]
        source: FmsError,
    },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Props(#[from] PropsError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Miner(#[from] MinerError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Json(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Fms { source, .. } => source.kind(),
            CliError::Structure(e) => e.kind(),
            CliError::Formula(e) => e.kind(),
            CliError::Scheme(e) => e.kind(),
            CliError::Props(e) => e.kind(),
            CliError::Aut(e) => e.kind(),
            CliError::Miner(e) => e.kind(),
            CliError::Usage(_) => "UsageError",
            CliError::Json(_) => "JsonError",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "umt",
    version,
    about = "Uniformity and minimality schemes on finite relational structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Print one JSON document instead of a table.
    #[arg(long)]
    json: bool,
    /// Include wall-clock time in the output.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Tuples,
    Subsets,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify binary and ternary relations.
    Classify {
        #[arg(long)]
        rel: Option<String>,
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate a formula: a truth value for sentences, else its truth set.
    Eval {
        #[arg(short = 'f', long)]
        formula: String,
        /// Variable order of the truth set (default: free variables sorted).
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check an axiom scheme; exit 1 when it is violated.
    Check {
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
        /// Uniformity level n.
        #[arg(long)]
        level: Option<usize>,
        /// orbits, subsets or formulas:D
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        #[arg(long)]
        rel: Option<String>,
        /// Check a single uniformity instance instead of the whole scheme.
        #[arg(short = 'f', long, conflicts_with = "mode")]
        formula: Option<String>,
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Levels 1..=max at which the structure is uniform.
    Degree {
        #[arg(long, default_value_t = 3)]
        max: usize,
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Unary formulas defining proper nonempty sets.
    Indicators {
        #[arg(long, default_value_t = 2)]
        depth: usize,
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Automorphism group, optionally with orbits on k-tuples or k-subsets.
    Aut {
        #[arg(long)]
        orbits: Option<usize>,
        #[arg(long, value_enum, requires = "orbits")]
        kind: Option<KindArg>,
        /// Largest universe searched.
        #[arg(long, default_value_t = DEFAULT_AUT_LIMIT)]
        limit: usize,
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Right segments and principal upsets of a linear order.
    Segments {
        #[arg(long)]
        rel: String,
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Run an enumeration campaign; exit 1 when a finding fails.
    Mine {
        #[arg(long)]
        campaign: String,
        #[arg(long)]
        size: Option<usize>,
        /// Formula height for campaigns that search formulas.
        #[arg(long)]
        depth: Option<usize>,
        /// Worker threads (default: one per core). Does not change output.
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Replay the witnesses of a JSON report (`-` reads standard input).
    VerifyWitness {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

impl Command {
    fn output(&self) -> &Output {
        match self {
            Command::Classify { out, .. }
            | Command::Eval { out, .. }
            | Command::Check { out, .. }
            | Command::Degree { out, .. }
            | Command::Indicators { out, .. }
            | Command::Aut { out, .. }
            | Command::Segments { out, .. }
            | Command::Mine { out, .. }
            | Command::VerifyWitness { out, .. } => out,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    command: &'static str,
    params: Map<String, Value>,
    body_key: &'static str,
    body: Value,
    witnesses: Vec<Value>,
    text: String,
    code: i32,
}

impl Report {
    fn new(command: &'static str, body_key: &'static str) -> Self {
        Report {
            command,
            params: Map::new(),
            body_key,
            body: Value::Null,
            witnesses: Vec::new(),
            text: String::new(),
            code: 0,
        }
    }

    fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.into(), value.into());
    }
}

/// First line of human output: the command with every effective parameter.
fn header(command: &str, params: &Map<String, Value>) -> String {
    let parts: Vec<String> = params
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect();
    format!("umt {command} {}\n", parts.join(" "))
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("error [UsageError]: {text}"),
                }
            };
        }
    };
    let start = Instant::now();
    let out = cli.command.output();
    let (json_out, timing) = (out.json, out.timing);
    match dispatch(&cli.command) {
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error [{}]: {e}\n", e.kind()),
        },
        Ok(r) => {
            let elapsed = start.elapsed().as_millis() as u64;
            let stdout = if json_out {
                let mut doc = json::document(r.command, r.params, r.body_key, r.body, r.witnesses);
                if timing {
                    doc["elapsed_ms"] = elapsed.into();
                }
                serde_json::to_string_pretty(&doc).expect("values serialize") + "\n"
            } else {
                let mut text = r.text.clone();
                text.insert_str(0, &header(r.command, &r.params));
                if timing {
                    let _ = writeln!(text, "elapsed: {elapsed} ms");
                }
                text
            };
            Outcome {
                code: r.code,
                stdout,
                stderr: String::new(),
            }
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Classify { rel, file, .. } => classify(rel.as_deref(), file),
        Command::Eval {
            formula,
            vars,
            file,
            ..
        } => eval(formula, vars, file),
        Command::Check {
            scheme,
            level,
            mode,
            rel,
            formula,
            file,
            ..
        } => check(
            *scheme,
            *level,
            *mode,
            rel.as_deref(),
            formula.as_deref(),
            file,
        ),
        Command::Degree { max, file, .. } => degree(*max, file),
        Command::Indicators { depth, file, .. } => indicators(*depth, file),
        Command::Aut {
            orbits,
            kind,
            limit,
            file,
            ..
        } => aut(*orbits, *kind, *limit, file),
        Command::Segments { rel, file, .. } => segments(rel, file),
        Command::Mine {
            campaign,
            size,
            depth,
            workers,
            ..
        } => mine(campaign, *size, *depth, *workers),
        Command::VerifyWitness { file, .. } => verify_witness(file),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(io)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn load(path: &Path) -> Result<Structure, CliError> {
    parse_structure(&read_text(path)?).map_err(|source| CliError::Fms {
        path: path.display().to_string(),
        source,
    })
}

fn mark(b: bool) -> &'static str {
    if b {
        "✓"
    } else {
        "✗"
    }
}

fn tuple_string(t: &[Element]) -> String {
    let items: Vec<String> = t.iter().map(|e| e.to_string()).collect();
    format!("({})", items.join(","))
}

fn classify(rel: Option<&str>, file: &Path) -> Result<Report, CliError> {
    let s = load(file)?;
    let mut r = Report::new("classify", "report");
    r.param("file", file.display().to_string());
    r.param("rel", rel.unwrap_or("*"));
    let names: Vec<String> = match rel {
        Some(name) => vec![s.relation(name)?.name().to_string()],
        None => s.relations().map(|t| t.name().to_string()).collect(),
    };
    let mut reports = Vec::new();
    for name in &names {
        let arity = s.relation(name)?.arity();
        match arity {
            2 => {
                let b = classify_binary(&s, name)?;
                let _ = writeln!(r.text, "relation {name}/2");
                let mut tri = Map::new();
                for (k, v) in b.tri_flags() {
                    let _ = writeln!(r.text, "  {k:<20} {}", v.as_str());
                    tri.insert(k.into(), v.as_str().into());
                }
                let mut flags = Map::new();
                for (k, v) in b.flags() {
                    let _ = writeln!(r.text, "  {k:<20} {}", mark(v));
                    flags.insert(k.into(), v.into());
                }
                let mut labels = Map::new();
                for (k, v) in b.labels() {
                    let _ = writeln!(r.text, "  {k:<20} {}", mark(v));
                    labels.insert(k.into(), v.into());
                }
                reports.push(json!({
                    "name": name, "arity": 2, "tri": tri, "flags": flags, "labels": labels,
                }));
            }
            3 => {
                let c = classify_cyclic(&s, name)?;
                let _ = writeln!(r.text, "relation {name}/3");
                let mut checks = Map::new();
                for (k, check) in c.checks() {
                    match &check.witness {
                        None => {
                            let _ = writeln!(r.text, "  {k:<20} {}", mark(check.holds));
                        }
                        Some(w) => {
                            let _ = writeln!(
                                r.text,
                                "  {k:<20} {}  counterexample {}",
                                mark(check.holds),
                                tuple_string(w)
                            );
                        }
                    }
                    checks.insert(
                        k.into(),
                        json!({ "holds": check.holds, "witness": check.witness }),
                    );
                }
                let _ = writeln!(
                    r.text,
                    "  {:<20} {}",
                    "cyclic_order",
                    mark(c.is_cyclic_order())
                );
                reports.push(json!({
                    "name": name, "arity": 3, "checks": checks,
                    "cyclic_order": c.is_cyclic_order(),
                }));
            }
            found if rel.is_some() => {
                return Err(StructureError::ArityMismatch {
                    relation: name.clone(),
                    expected: 2,
                    found,
                }
                .into())
            }
            _ => {
                let _ = writeln!(r.text, "relation {name}/{arity}: not classified");
            }
        }
    }
    r.body = json!({ "relations": reports });
    Ok(r)
}

fn eval(text: &str, vars: &[String], file: &Path) -> Result<Report, CliError> {
    let s = load(file)?;
    let f = parse_formula_with(text, &Signature::of(&s))?;
    let vars: Vec<String> = if vars.is_empty() {
        f.free_vars().into_iter().collect()
    } else {
        vars.to_vec()
    };
    let mut r = Report::new("eval", "report");
    r.param("file", file.display().to_string());
    r.param("formula", f.to_string());
    r.param("vars", vars.join(","));
    if vars.is_empty() {
        let value = evaluate(&s, &f, &Environment::new())?;
        let _ = writeln!(r.text, "value: {value}");
        r.body = json!({ "value": value });
        r.code = if value { 0 } else { 1 };
        return Ok(r);
    }
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let table = truth_set(&s, &f, &names)?;
    let tuples = table.to_vec();
    let shown: Vec<String> = tuples.iter().map(|t| tuple_string(t)).collect();
    let _ = writeln!(
        r.text,
        "truth set over ({}): {} tuples",
        vars.join(","),
        tuples.len()
    );
    if !shown.is_empty() {
        let _ = writeln!(r.text, "  {}", shown.join(" "));
    }
    r.body = json!({ "vars": vars, "count": tuples.len(), "tuples": tuples });
    Ok(r)
}

fn verdict_text(v: &SchemeVerdict) -> String {
    let mut t = String::new();
    let status = if v.holds { "holds" } else { "violated" };
    match v.violation {
        Some(k) => {
            let _ = writeln!(t, "verdict: {status} ({})", k.as_str());
        }
        None => {
            let _ = writeln!(t, "verdict: {status}");
        }
    }
    match &v.witness {
        Some(Witness::OrbitClasses(classes)) => {
            let _ = writeln!(t, "witness: {} orbit classes", classes.len());
            for (i, c) in classes.iter().enumerate() {
                let items: Vec<String> = c.iter().map(|x| set_string(x)).collect();
                let _ = writeln!(t, "  class {i}: {}", items.join(" "));
            }
        }
        Some(w) => {
            let _ = writeln!(t, "witness: {w}");
        }
        None => {}
    }
    if !v.variables.is_empty() && v.witness_tuple.is_some() {
        let _ = writeln!(t, "variables: {}", v.variables.join(","));
    }
    if let Some(x) = &v.witness_tuple {
        let _ = writeln!(t, "satisfied at: {}", tuple_string(x));
    }
    if let Some(x) = &v.falsifying_tuple {
        let _ = writeln!(t, "no arrangement of: {}", tuple_string(x));
    }
    if let Some(x) = &v.witness_set {
        let _ = writeln!(t, "set: {}", set_string(x));
    }
    if let Some(x) = &v.minimizers {
        let _ = writeln!(t, "minimizers: {}", set_string(x));
    }
    if let Some(x) = &v.separator {
        let _ = writeln!(t, "separator: {x}");
    }
    for z in &v.z_sets {
        let _ = writeln!(t, "z{} = {}", set_string(&z.set), set_string(&z.z));
    }
    for w in &v.warnings {
        let _ = writeln!(t, "warning: {w}");
    }
    t
}

fn check(
    scheme: Scheme,
    level: Option<usize>,
    mode: Option<Mode>,
    rel: Option<&str>,
    formula: Option<&str>,
    file: &Path,
) -> Result<Report, CliError> {
    let full = load(file)?;
    let mode = mode.unwrap_or(scheme.default_mode());
    let mut r = Report::new("check", "verdict");
    r.param("file", file.display().to_string());
    r.param("scheme", scheme.as_str());
    r.param("mode", mode.to_string());
    if scheme != Scheme::Uniform && (level.is_some() || formula.is_some()) {
        return Err(CliError::Usage(
            "--level and --formula apply only to --scheme uniform".into(),
        ));
    }
    let v = match scheme {
        Scheme::Uniform => {
            let s = match rel {
                Some(name) => full.reduct(&[name])?,
                None => full,
            };
            let f = formula
                .map(|text| parse_formula_with(text, &Signature::of(&s)))
                .transpose()?;
            let n = match (level, &f) {
                (Some(n), _) => n,
                (None, Some(f)) => f.free_vars().len(),
                (None, None) => 1,
            };
            r.param("level", n);
            r.param("rel", rel.unwrap_or("*"));
            let v = check_uniformity(&s, n, mode, f.as_ref())?;
            match &f {
                Some(f) => r.param("formula", f.to_string()),
                None => r.witnesses.push(json::claim(&Claim::Uniform {
                    structure: s.clone(),
                    n,
                    mode,
                    holds: v.holds,
                })),
            }
            witness_claims(&mut r, &s, &v, n, "");
            v
        }
        _ => {
            let name = match rel {
                Some(name) => name.to_string(),
                None => {
                    let binary: Vec<&str> = full
                        .relations()
                        .filter(|t| t.arity() == 2)
                        .map(|t| t.name())
                        .collect();
                    match binary[..] {
                        [only] => only.to_string(),
                        _ => {
                            return Err(CliError::Usage(
                                "--rel is required unless the structure has exactly one binary relation"
                                    .into(),
                            ))
                        }
                    }
                }
            };
            r.param("rel", name.as_str());
            let v = match scheme {
                Scheme::Q => check_q(&full, &name, mode)?,
                Scheme::Q1 => check_q1(&full, &name, mode)?,
                Scheme::F => {
                    if mode != Mode::Subsets {
                        return Err(SchemeError::BadMode { scheme, mode }.into());
                    }
                    check_f(&full, &name)?
                }
                Scheme::Uniform => unreachable!(),
            };
            r.witnesses.push(json::claim(&Claim::Scheme {
                structure: full.clone(),
                scheme,
                relation: name.clone(),
                mode,
                holds: v.holds,
            }));
            witness_claims(&mut r, &full, &v, 0, &name);
            v
        }
    };
    r.text = verdict_text(&v);
    r.body = json::verdict(&v);
    r.code = if v.holds { 0 } else { 1 };
    Ok(r)
}

/// Directly checkable witnesses for a violated verdict.
fn witness_claims(r: &mut Report, s: &Structure, v: &SchemeVerdict, n: usize, rel: &str) {
    match (&v.witness, v.scheme) {
        (Some(Witness::OrbitClasses(classes)), _) => {
            r.witnesses.push(json::claim(&Claim::Orbits {
                structure: s.clone(),
                k: n,
                classes: classes.clone(),
            }));
        }
        (Some(Witness::Formula(f)), Scheme::Uniform) => {
            if let (Some(w), Some(x)) = (&v.witness_tuple, &v.falsifying_tuple) {
                r.witnesses.push(json::replay(&Replay::FormulaInstance {
                    structure: s.clone(),
                    formula: f.to_string(),
                    variables: v.variables.clone(),
                    witness_tuple: w.clone(),
                    falsifying_tuple: x.clone(),
                }));
            }
        }
        _ => {}
    }
    if let (Some(set), Some(z)) = (&v.witness_set, &v.minimizers) {
        r.witnesses.push(json::replay(&Replay::MinimalSet {
            structure: s.clone(),
            scheme: v.scheme,
            relation: rel.to_string(),
            set: set.clone(),
            minimizers: z.clone(),
            separator_set: v.separator_set.clone(),
        }));
    }
}

fn degree(max: usize, file: &Path) -> Result<Report, CliError> {
    let s = load(file)?;
    let degrees = uniformity_degrees(&s, max)?;
    let mut r = Report::new("degree", "report");
    r.param("file", file.display().to_string());
    r.param("max", max);
    let shown: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(
        r.text,
        "uniform at levels {{{}}} of 1..={max}",
        shown.join(",")
    );
    r.body = json!({ "max": max, "degrees": degrees });
    r.witnesses.push(json::claim(&Claim::Degrees {
        structure: s,
        max,
        degrees,
    }));
    Ok(r)
}

fn indicators(depth: usize, file: &Path) -> Result<Report, CliError> {
    let s = load(file)?;
    let found = find_indicators(&s, depth)?;
    let partition = indiscernibility_partition(&s)?;
    let mut r = Report::new("indicators", "report");
    r.param("file", file.display().to_string());
    r.param("depth", depth);
    if found.is_empty() {
        let _ = writeln!(r.text, "no indicators up to height {depth}");
    }
    let mut items = Vec::new();
    for d in &found {
        let set: Vec<Element> = d.table.iter().map(|t| t[0]).collect();
        let _ = writeln!(r.text, "  {:<16} {}", set_string(&set), d.formula);
        items.push(json!({ "formula": d.formula.to_string(), "set": set }));
    }
    let classes: Vec<String> = partition.iter().map(|c| set_string(c)).collect();
    let _ = writeln!(r.text, "indiscernible classes: {}", classes.join(" "));
    r.body = json!({ "depth": depth, "indicators": items, "indiscernible": partition });
    Ok(r)
}

fn aut(
    orbits: Option<usize>,
    kind: Option<KindArg>,
    limit: usize,
    file: &Path,
) -> Result<Report, CliError> {
    let s = load(file)?;
    let g = automorphism_group_with_limit(&s, limit)?;
    let mut r = Report::new("aut", "report");
    r.param("file", file.display().to_string());
    r.param("limit", limit);
    let _ = writeln!(r.text, "order: {}", g.order());
    for p in g.perms() {
        let _ = writeln!(r.text, "  {}", tuple_string(p));
    }
    let points = g.point_orbits();
    let shown: Vec<String> = points.iter().map(|c| set_string(c)).collect();
    let _ = writeln!(r.text, "point orbits: {}", shown.join(" "));
    let mut body = json!({
        "order": g.order(),
        "permutations": g.perms(),
        "point_orbits": points,
    });
    r.witnesses.push(json::claim(&Claim::AutOrder {
        structure: s.clone(),
        order: g.order(),
    }));
    if let Some(k) = orbits {
        let kind = match kind.unwrap_or(KindArg::Subsets) {
            KindArg::Tuples => OrbitKind::Tuples,
            KindArg::Subsets => OrbitKind::Subsets,
        };
        let name = if kind == OrbitKind::Tuples {
            "tuples"
        } else {
            "subsets"
        };
        r.param("orbits", k);
        r.param("kind", name);
        let part = g.orbits(k, kind);
        let _ = writeln!(r.text, "orbits on {k}-{name}: {}", part.classes.len());
        for (i, c) in part.classes.iter().enumerate() {
            let items: Vec<String> = c
                .iter()
                .map(|x| match kind {
                    OrbitKind::Tuples => tuple_string(x),
                    OrbitKind::Subsets => set_string(x),
                })
                .collect();
            let _ = writeln!(r.text, "  class {i}: {}", items.join(" "));
        }
        body["orbits"] = json!({ "k": k, "kind": name, "classes": part.classes });
        if kind == OrbitKind::Subsets {
            r.witnesses.push(json::claim(&Claim::Orbits {
                structure: s,
                k,
                classes: part.classes,
            }));
        }
    }
    r.body = body;
    Ok(r)
}

fn segments(rel: &str, file: &Path) -> Result<Report, CliError> {
    let s = load(file)?;
    let seg = right_segments(&s, rel)?;
    let mut r = Report::new("segments", "report");
    r.param("file", file.display().to_string());
    r.param("rel", rel);
    let _ = writeln!(
        r.text,
        "proper right segments: {}",
        seg.proper_segments.len()
    );
    for x in &seg.proper_segments {
        let _ = writeln!(r.text, "  {}", set_string(x));
    }
    let _ = writeln!(r.text, "principal upsets:");
    for (x, up) in seg.principal_upsets.iter().enumerate() {
        let _ = writeln!(r.text, "  Q{x} = {}", set_string(up));
    }
    r.body = json!({
        "proper_segments": seg.proper_segments,
        "principal_upsets": seg.principal_upsets,
    });
    Ok(r)
}

fn mine(
    campaign: &str,
    size: Option<usize>,
    depth: Option<usize>,
    workers: Option<usize>,
) -> Result<Report, CliError> {
    let exec = workers.map_or_else(Threaded::available, Threaded::new);
    let report = run_campaign(campaign, &CampaignParams { size, depth }, &exec)?;
    let mut r = Report::new("mine", "report");
    r.param("campaign", campaign);
    for (k, v) in &report.params {
        r.param(k, *v);
    }
    for (k, v) in &report.tallies {
        let _ = writeln!(r.text, "  {k:<40} {v}");
    }
    for f in &report.findings {
        let _ = writeln!(r.text, "{} {}: {}", mark(f.holds), f.name, f.statement);
        for c in &f.witnesses {
            let mut w = json::claim(c);
            w["finding"] = f.name.clone().into();
            r.witnesses.push(w);
        }
    }
    r.body = json::campaign(&report);
    r.code = if report.passed() { 0 } else { 1 };
    Ok(r)
}

fn verify_witness(file: &Path) -> Result<Report, CliError> {
    let text = read_text(file)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Json(e.to_string()))?;
    let witnesses = doc
        .get("witnesses")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Json("document has no \"witnesses\" list".into()))?;
    let mut r = Report::new("verify-witness", "report");
    r.param("file", file.display().to_string());
    let mut results = Vec::new();
    let mut reproduced = 0;
    for (i, w) in witnesses.iter().enumerate() {
        let claim = w
            .get("claim")
            .and_then(Value::as_str)
            .unwrap_or("?")
            .to_string();
        let rep = json::replay_from(w).map_err(|e| CliError::Json(format!("witness {i}: {e}")))?;
        let outcome = replay(&rep).map_err(|e| CliError::Json(format!("witness {i}: {e}")))?;
        reproduced += usize::from(outcome.reproduced);
        let status = if outcome.reproduced { "ok" } else { "MISMATCH" };
        let _ = writeln!(r.text, "[{status}] {i} {claim}: {}", outcome.detail);
        results.push(json!({
            "index": i,
            "claim": claim,
            "reproduced": outcome.reproduced,
            "detail": outcome.detail,
        }));
    }
    let _ = writeln!(
        r.text,
        "{reproduced} of {} witnesses reproduced",
        witnesses.len()
    );
    r.body = json!({ "checked": witnesses.len(), "reproduced": reproduced, "results": results });
    r.code = if reproduced == witnesses.len() { 0 } else { 1 };
    Ok(r)
}
