use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use taylor_edges::absorption::absorption_report;
use taylor_edges::algebra::validate_algebra;
use taylor_edges::catalog;
use taylor_edges::csp::{first_solution, hs_closure, kl_minimize, Instance, Minimized};
use taylor_edges::edges::{
    component_analysis, compute_edges, sample_shift_chains, verify_edge_axioms, verify_edge_theorems, AxiomReport,
    CheckStatus, ComponentDecomposition, EdgeConfig, EdgeGraph, Flavor,
};
use taylor_edges::terms::taylor_report;
use taylor_edges::{Caps, Error, FiniteAlgebra, Tri};

use crate::format::{emit_algebras, parse_algebras, parse_document, resolve_instance, ParseError};
use crate::report::{to_dot, to_json, to_text};

/// Sampled shift-chain triples per algebra in `verify`.
pub const SHIFT_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Command {
    Analyze,
    Edges,
    Verify,
    CspMinimize { k: usize, l: usize },
    CspSolve,
    Catalog,
}

/// A fully resolved invocation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    /// Files or built-in algebra names. For `csp`, the instance file comes
    /// first and any further entries supply algebras.
    pub inputs: Vec<String>,
    /// Arities tried for edges in addition to the default one.
    pub arities: Vec<usize>,
    pub caps: Caps,
    pub format: Format,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(
    name = "taylor-edges",
    version,
    about = "Colored edges, absorption and CSP reductions for finite idempotent algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Extra cyclic arities for edge detection, e.g. 3,5.
    #[arg(long, global = true, value_delimiter = ',')]
    arities: Option<Vec<usize>>,
    /// Largest closure computed before giving up.
    #[arg(long, global = true)]
    closure_cap: Option<usize>,
    /// Largest algebra whose subsets are all classified.
    #[arg(long, global = true)]
    subset_cap: Option<usize>,
    /// Largest brute-force search space.
    #[arg(long, global = true)]
    search_cap: Option<u128>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Validation, Taylor terms, edges, components and absorption.
    Analyze { algebra: String },
    /// The edge digraph.
    Edges {
        algebra: String,
        /// Same as --format dot.
        #[arg(long)]
        dot: bool,
    },
    /// Edge Axioms and edge theorems over the HS closure of the inputs.
    Verify {
        #[arg(required = true)]
        algebras: Vec<String>,
    },
    /// Multisorted CSP instances.
    Csp {
        #[command(subcommand)]
        action: CspAction,
    },
    /// Prints built-in algebras; the four seeds by default.
    Catalog { names: Vec<String> },
}

#[derive(Subcommand, Debug)]
enum CspAction {
    /// (k,l)-minimal refinement.
    Minimize {
        instance: String,
        algebras: Vec<String>,
        #[arg(short, default_value_t = 2)]
        k: usize,
        #[arg(short, default_value_t = 3)]
        l: usize,
    },
    /// A solution by backtracking search.
    Solve { instance: String, algebras: Vec<String> },
}

/// Cap flags accepted in `TAYLOR_EDGES_CAPS`.
#[derive(Parser, Debug, Default)]
#[command(no_binary_name = true)]
struct EnvFlags {
    #[arg(long, value_delimiter = ',')]
    arities: Option<Vec<usize>>,
    #[arg(long)]
    closure_cap: Option<usize>,
    #[arg(long)]
    subset_cap: Option<usize>,
    #[arg(long)]
    search_cap: Option<u128>,
    #[arg(long)]
    seed: Option<u64>,
}

/// A command line that could not be turned into a [`RunConfig`]. Help and
/// version requests land here too, with exit code 0.
#[derive(Debug)]
pub struct Usage {
    pub message: String,
    pub code: u8,
}

impl Usage {
    fn invalid(message: impl Into<String>) -> Self {
        Usage {
            message: message.into(),
            code: Status::Usage.code(),
        }
    }

    fn clap(e: clap::Error) -> Self {
        let code = match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
            _ => Status::Usage.code(),
        };
        Usage {
            message: e.render().to_string(),
            code,
        }
    }
}

impl RunConfig {
    /// Parses `args` (program name first). `env` holds the value of
    /// `TAYLOR_EDGES_CAPS`; command-line flags take precedence over it.
    pub fn from_args<I, T>(args: I, env: Option<&str>) -> Result<RunConfig, Usage>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(Usage::clap)?;
        let env = match env {
            Some(s) if !s.trim().is_empty() => EnvFlags::try_parse_from(s.split_whitespace())
                .map_err(|e| Usage::invalid(format!("TAYLOR_EDGES_CAPS: {}", e.render())))?,
            _ => EnvFlags::default(),
        };
        let f = cli.flags;
        let defaults = Caps::default();
        let caps = Caps {
            closure: f.closure_cap.or(env.closure_cap).unwrap_or(defaults.closure),
            subset_size: f.subset_cap.or(env.subset_cap).unwrap_or(defaults.subset_size),
            search_space: f.search_cap.or(env.search_cap).unwrap_or(defaults.search_space),
            ..defaults
        };
        if caps.closure == 0 || caps.subset_size == 0 || caps.search_space == 0 {
            return Err(Usage::invalid("caps must be positive"));
        }
        let arities = f.arities.or(env.arities).unwrap_or_default();
        if let Some(a) = arities.iter().find(|&&a| a < 2) {
            return Err(Usage::invalid(format!("arity {a} is below 2")));
        }
        let mut format = f.format;
        let (command, inputs) = match cli.command {
            Sub::Analyze { algebra } => (Command::Analyze, vec![algebra]),
            Sub::Edges { algebra, dot } => {
                if dot {
                    if format.is_some_and(|x| x != Format::Dot) {
                        return Err(Usage::invalid("--dot conflicts with --format"));
                    }
                    format = Some(Format::Dot);
                }
                (Command::Edges, vec![algebra])
            }
            Sub::Verify { algebras } => (Command::Verify, algebras),
            Sub::Csp { action } => match action {
                CspAction::Minimize {
                    instance,
                    algebras,
                    k,
                    l,
                } => {
                    if k == 0 || k > l {
                        return Err(Usage::invalid(format!("need 1 <= k <= l, got k = {k}, l = {l}")));
                    }
                    (Command::CspMinimize { k, l }, [vec![instance], algebras].concat())
                }
                CspAction::Solve { instance, algebras } => (Command::CspSolve, [vec![instance], algebras].concat()),
            },
            Sub::Catalog { names } => (Command::Catalog, names),
        };
        let format = format.unwrap_or(Format::Text);
        if format == Format::Dot && command != Command::Edges {
            return Err(Usage::invalid("--format dot applies to `edges` only"));
        }
        Ok(RunConfig {
            command,
            inputs,
            arities,
            caps,
            format,
            seed: f.seed.or(env.seed).unwrap_or(0),
            out: f.out,
        })
    }

    fn edge_config(&self) -> EdgeConfig {
        EdgeConfig {
            extra_arities: self.arities.clone(),
            caps: self.caps.clone(),
        }
    }
}

/// Exit status contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Status {
    Ok,
    /// A counterexample, a failed check, or an unsatisfiable instance.
    Failed,
    Usage,
    /// A cap was reached and some answers are unknown.
    Unknown,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Usage => 2,
            Status::Unknown => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::Usage => "usage",
            Status::Unknown => "unknown",
        }
    }

    /// Failures dominate unknowns, which dominate success.
    fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Unknown => 1,
            Status::Failed => 2,
            Status::Usage => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub status: Status,
    /// Everything written to standard output or to `--out`.
    pub output: String,
    pub diagnostics: Vec<String>,
}

impl Execution {
    fn usage(message: String) -> Self {
        Execution {
            status: Status::Usage,
            output: String::new(),
            diagnostics: vec![message],
        }
    }
}

fn status_of_error(e: &Error) -> Status {
    match e {
        Error::CapExceeded { .. } | Error::LimitExceeded { .. } => Status::Unknown,
        Error::InvalidAlgebra(_) | Error::InvalidInstance(_) | Error::SignatureMismatch(_) => Status::Usage,
        _ => Status::Failed,
    }
}

fn load_text(input: &str) -> Result<Option<String>, String> {
    let p = Path::new(input);
    if p.exists() {
        std::fs::read_to_string(p)
            .map(Some)
            .map_err(|e| format!("{input}: {e}"))
    } else {
        Ok(None)
    }
}

fn with_file(e: ParseError, file: &str) -> String {
    ParseError {
        file: Some(file.into()),
        ..e
    }
    .to_string()
}

/// Algebras from a file, or a built-in algebra by name.
fn load_algebras(input: &str) -> Result<Vec<FiniteAlgebra>, String> {
    match load_text(input)? {
        Some(text) => {
            let algs = parse_algebras(&text).map_err(|e| with_file(e, input))?;
            if algs.is_empty() {
                return Err(format!("{input}: no algebra blocks"));
            }
            Ok(algs)
        }
        None => catalog::by_name(input)
            .map(|a| vec![a])
            .ok_or_else(|| format!("{input}: no such file or built-in algebra")),
    }
}

fn load_valid_algebras(inputs: &[String]) -> Result<Vec<FiniteAlgebra>, String> {
    let mut out = Vec::new();
    for input in inputs {
        for alg in load_algebras(input)? {
            let v = validate_algebra(&alg);
            if let Some(issue) = v.issues.first() {
                return Err(format!("{input}: algebra {}: {issue}", alg.name));
            }
            out.push(alg);
        }
    }
    Ok(out)
}

fn load_instance(inputs: &[String]) -> Result<Instance, String> {
    let file = &inputs[0];
    let text = load_text(file)?.ok_or_else(|| format!("{file}: no such file"))?;
    let doc = parse_document(&text).map_err(|e| with_file(e, file))?;
    let mut algebras = doc.algebras.clone();
    algebras.extend(load_valid_algebras(&inputs[1..])?);
    for alg in &algebras {
        if let Some(issue) = validate_algebra(alg).issues.first() {
            return Err(format!("{file}: algebra {}: {issue}", alg.name));
        }
    }
    let raw = match doc.instances.as_slice() {
        [one] => one,
        [] => return Err(format!("{file}: no instance block")),
        _ => return Err(format!("{file}: more than one instance block")),
    };
    resolve_instance(raw, &algebras, catalog::by_name).map_err(|e| with_file(e, file))
}

/// Runs the command and writes `--out` if requested.
pub fn execute(config: &RunConfig) -> Execution {
    let result = match config.command {
        Command::Analyze => analyze(config),
        Command::Edges => edges(config),
        Command::Verify => verify(config),
        Command::CspMinimize { k, l } => csp_minimize(config, k, l),
        Command::CspSolve => csp_solve(config),
        Command::Catalog => emit_catalog(config),
    };
    let mut ex = match result {
        Ok(ex) => ex,
        Err(message) => return Execution::usage(message),
    };
    if let Some(path) = &config.out {
        if let Err(e) = std::fs::write(path, &ex.output) {
            ex.diagnostics.push(format!("{}: {e}", path.display()));
            ex.status = Status::Usage;
        }
    }
    ex
}

fn render(config: &RunConfig, v: &Value) -> String {
    match config.format {
        Format::Json => to_json(v),
        _ => to_text(v),
    }
}

fn set(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn arrows(pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<String> {
    pairs.into_iter().map(|(a, b)| format!("{a}->{b}")).collect()
}

fn signature(alg: &FiniteAlgebra) -> Vec<String> {
    alg.signature().iter().map(|(s, k)| format!("{s}/{k}")).collect()
}

fn edges_value(g: &EdgeGraph, config: &RunConfig) -> Value {
    let n = g.size;
    let pairs = |pred: &dyn Fn(usize, usize) -> bool| -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && pred(a, b))
            .collect()
    };
    json!({
        "exact": g.is_exact(),
        "extra_arities": config.arities,
        "s": arrows(pairs(&|a, b| g.has_s(a, b))),
        "as_only": arrows(pairs(&|a, b| g.has_as(a, b) && !g.has_sm(a, b))),
        "sm_only": arrows(pairs(&|a, b| g.has_sm(a, b) && !g.has_as(a, b))),
        "unknown": arrows(g.unknown.iter().copied()),
        "discrepancies": arrows(g.discrepancies.iter().copied()),
    })
}

fn components_value(d: &ComponentDecomposition) -> Value {
    let comps = |ids: &[usize]| -> Vec<String> { ids.iter().map(|&c| set(&d.components[c])).collect() };
    json!({
        "strong": d.components.iter().map(|c| set(c)).collect::<Vec<_>>(),
        "sources": comps(&d.sources),
        "sinks": comps(&d.sinks),
        "min": set(&d.x_min),
        "weakly_connected": d.is_weakly_connected(),
    })
}

fn analyze(config: &RunConfig) -> Result<Execution, String> {
    let algs = load_algebras(&config.inputs[0])?;
    let mut status = Status::Ok;
    let mut reports = Vec::new();
    for alg in &algs {
        let (v, s) = analyze_one(alg, config);
        status = status.worst(s);
        reports.push(v);
    }
    let output = match config.format {
        Format::Json => to_json(&Value::Array(reports)),
        _ => reports.iter().map(to_text).collect::<Vec<_>>().join("\n"),
    };
    Ok(Execution {
        status,
        output,
        diagnostics: Vec::new(),
    })
}

fn analyze_one(alg: &FiniteAlgebra, config: &RunConfig) -> (Value, Status) {
    let mut report = serde_json::Map::new();
    let mut summary: Vec<String> = Vec::new();
    let mut errors: Vec<String> = Vec::new();
    let mut status = Status::Ok;
    report.insert("algebra".into(), json!(alg.name));
    report.insert("size".into(), json!(alg.size));
    report.insert("signature".into(), json!(signature(alg)));
    let validation = validate_algebra(alg);
    report.insert(
        "validation".into(),
        json!({
            "valid": validation.is_valid(),
            "idempotent": validation.idempotent,
            "issues": validation.issues.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
        }),
    );
    let finish =
        |mut report: serde_json::Map<String, Value>, summary: Vec<String>, errors: Vec<String>, status: Status| {
            report.insert("summary".into(), json!(summary));
            report.insert("errors".into(), json!(errors));
            report.insert("status".into(), json!(status.name()));
            (Value::Object(report), status)
        };
    if !validation.is_valid() {
        summary.push("invalid algebra".into());
        return finish(report, summary, errors, Status::Failed);
    }
    let taylor = taylor_report(alg, &config.caps);
    if taylor.has_taylor == Tri::Unknown || taylor.minimal_taylor_bounded == Tri::Unknown {
        status = status.worst(Status::Unknown);
    }
    report.insert(
        "taylor".into(),
        json!({
            "has_taylor": taylor.has_taylor.to_string(),
            "cyclic_witness_arity": taylor.witness.as_ref().map(|w| w.arity),
            "arities_checked": taylor.arities_checked.iter().map(|(k, t)| format!("{k}: {t}")).collect::<Vec<_>>(),
            "minimal_taylor_bounded": taylor.minimal_taylor_bounded.to_string(),
        }),
    );
    summary.push(format!("Taylor: {}", taylor.has_taylor));
    let g = match compute_edges(alg, &config.edge_config()) {
        Ok(g) => g,
        Err(e) => {
            errors.push(e.to_string());
            return finish(report, summary, errors, status.worst(status_of_error(&e)));
        }
    };
    if !g.is_exact() {
        status = status.worst(Status::Unknown);
    }
    report.insert("edges".into(), edges_value(&g, config));
    let asm = component_analysis(&g, Flavor::Asm);
    let s = component_analysis(&g, Flavor::S);
    report.insert(
        "components".into(),
        json!({ "asm": components_value(&asm), "s": components_value(&s) }),
    );
    summary.push(format!("asm-min = {}", set(&asm.x_min)));
    summary.push(format!("s-min = {}", set(&s.x_min)));
    match absorption_report(alg, &g, &config.caps) {
        Ok(r) => {
            let rows: Vec<Value> = r
                .subsets
                .iter()
                .map(|c| {
                    json!({
                        "subset": set(&c.subset),
                        "subuniverse": c.is_subuniverse,
                        "binary": c.binary,
                        "ternary": c.ternary,
                        "projective": c.projective,
                        "strongly_projective": c.strongly_projective,
                    })
                })
                .collect();
            for c in r.subsets.iter().filter(|c| c.subset.len() < alg.size) {
                let b = set(&c.subset);
                if c.binary {
                    summary.push(format!("{b} ◁₂"));
                }
                if c.ternary {
                    summary.push(format!("{b} ◁₃"));
                }
                if c.strongly_projective == Some(true) {
                    summary.push(format!("{b} strongly projective"));
                }
            }
            let transport: Vec<String> = r.transport.iter().flat_map(|t| t.failures.iter().cloned()).collect();
            if !r.is_clean() {
                status = status.worst(Status::Failed);
            }
            report.insert(
                "absorption".into(),
                json!({
                    "projectivity_arity": r.projectivity_arity,
                    "subsets": rows,
                    "audit_failures": r.audit_failures,
                    "transport_failures": transport,
                }),
            );
        }
        Err(e) => {
            errors.push(e.to_string());
            status = status.worst(status_of_error(&e));
        }
    }
    finish(report, summary, errors, status)
}

fn edges(config: &RunConfig) -> Result<Execution, String> {
    let algs = load_valid_algebras(&config.inputs)?;
    let mut status = Status::Ok;
    let mut outputs = Vec::new();
    let mut values = Vec::new();
    let mut diagnostics = Vec::new();
    for alg in &algs {
        match compute_edges(alg, &config.edge_config()) {
            Ok(g) => {
                if !g.is_exact() {
                    status = status.worst(Status::Unknown);
                }
                match config.format {
                    Format::Dot => outputs.push(to_dot(&g)),
                    _ => {
                        let mut v = json!({ "algebra": alg.name });
                        if let (Value::Object(m), Value::Object(e)) = (&mut v, edges_value(&g, config)) {
                            m.extend(e);
                        }
                        values.push(v);
                    }
                }
            }
            Err(e) => {
                diagnostics.push(format!("{}: {e}", alg.name));
                status = status.worst(status_of_error(&e));
            }
        }
    }
    let output = match config.format {
        Format::Dot => outputs.join("\n"),
        Format::Json => to_json(&Value::Array(values)),
        Format::Text => values.iter().map(to_text).collect::<Vec<_>>().join("\n"),
    };
    Ok(Execution {
        status,
        output,
        diagnostics,
    })
}

fn checks_value(r: &AxiomReport) -> Vec<Value> {
    r.checks
        .iter()
        .map(|c| {
            let mut v = json!({
                "name": c.name,
                "status": match &c.status {
                    CheckStatus::Pass => "pass",
                    CheckStatus::Fail(_) => "fail",
                    CheckStatus::Skipped { .. } => "skipped",
                },
                "checked": c.checked,
                "violations": c.violations,
            });
            let m = v.as_object_mut().expect("object");
            match &c.status {
                CheckStatus::Fail(cx) => {
                    m.insert(
                        "counterexample".into(),
                        json!({
                            "algebras": cx.algebras,
                            "elements": cx.elements,
                            "relation_generators": cx.relation_generators.iter().map(|t| set(t)).collect::<Vec<_>>(),
                            "detail": cx.detail,
                        }),
                    );
                }
                CheckStatus::Skipped { reason } => {
                    m.insert("reason".into(), json!(reason));
                }
                CheckStatus::Pass => {}
            }
            v
        })
        .collect()
}

fn tally(r: &AxiomReport, counts: &mut BTreeMap<&'static str, usize>) -> Status {
    let mut status = Status::Ok;
    for c in &r.checks {
        let key = match c.status {
            CheckStatus::Pass => "passed",
            CheckStatus::Fail(_) => {
                status = status.worst(Status::Failed);
                "failed"
            }
            CheckStatus::Skipped { .. } => {
                status = status.worst(Status::Unknown);
                "skipped"
            }
        };
        *counts.entry(key).or_default() += 1;
    }
    status
}

fn verify(config: &RunConfig) -> Result<Execution, String> {
    let inputs = load_valid_algebras(&config.inputs)?;
    let fail = |e: Error, what: &str| -> Result<Execution, String> {
        let v = json!({ "errors": [format!("{what}: {e}")], "status": status_of_error(&e).name() });
        Ok(Execution {
            status: status_of_error(&e),
            output: render(config, &v),
            diagnostics: Vec::new(),
        })
    };
    let template = match hs_closure(&inputs, &config.caps) {
        Ok(t) => t,
        Err(e) => return fail(e, "HS closure"),
    };
    let algs: Vec<&FiniteAlgebra> = template.algebras();
    let mut graphs = Vec::new();
    for a in &algs {
        match compute_edges(a, &config.edge_config()) {
            Ok(g) => graphs.push(g),
            Err(e) => return fail(e, &format!("edges of {}", a.name)),
        }
    }
    let pairs: Vec<(&FiniteAlgebra, &EdgeGraph)> = algs.iter().copied().zip(&graphs).collect();
    let axioms = match verify_edge_axioms(&pairs, &config.caps) {
        Ok(r) => r,
        Err(e) => return fail(e, "edge axioms"),
    };
    let mut counts: BTreeMap<&'static str, usize> =
        ["passed", "failed", "skipped"].into_iter().map(|k| (k, 0)).collect();
    let mut status = tally(&axioms, &mut counts);
    let mut theorems = Vec::new();
    let mut shifts = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for (a, g) in &pairs {
        match verify_edge_theorems(a, g, &config.caps) {
            Ok(r) => {
                status = status.worst(tally(&r, &mut counts));
                theorems.push(json!({ "algebra": a.name, "checks": checks_value(&r), "notes": r.notes }));
            }
            Err(e) => return fail(e, &format!("theorems on {}", a.name)),
        }
        if !g.is_exact() {
            continue;
        }
        match sample_shift_chains(a, g, &mut rng, SHIFT_SAMPLES, &config.caps) {
            Ok(r) => {
                if !r.failures.is_empty() {
                    status = status.worst(Status::Failed);
                }
                let failures: Vec<String> = r
                    .failures
                    .iter()
                    .map(|f| {
                        format!(
                            "chain {:?} index {} path {:?} -> {:?}",
                            f.chain, f.index, f.path, f.shifted
                        )
                    })
                    .collect();
                shifts.push(json!({ "algebra": a.name, "samples": r.samples, "failures": failures }));
            }
            Err(e) => return fail(e, &format!("shift samples on {}", a.name)),
        }
    }
    let closure: Vec<Value> = template
        .members
        .iter()
        .map(|m| {
            json!({
                "algebra": m.algebra.name,
                "size": m.algebra.size,
                "signature": signature(&m.algebra),
                "origin": m.origin,
            })
        })
        .collect();
    let v = json!({
        "inputs": inputs.iter().map(|a| a.name.clone()).collect::<Vec<_>>(),
        "seed": config.seed,
        "closure": closure,
        "axioms": checks_value(&axioms),
        "notes": axioms.notes,
        "theorems": theorems,
        "shift_samples": shifts,
        "summary": counts,
        "status": status.name(),
    });
    Ok(Execution {
        status,
        output: render(config, &v),
        diagnostics: Vec::new(),
    })
}

fn instance_value(inst: &Instance) -> Value {
    json!({
        "name": inst.name,
        "variables": inst.variables.iter().map(|v| json!({
            "name": v.name,
            "algebra": inst.algebras[v.domain].name,
        })).collect::<Vec<_>>(),
        "constraints": inst.constraints.iter().map(|c| json!({
            "scope": inst.scope_names(&c.scope),
            "tuples": c.tuples.iter().map(|t| t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn csp_minimize(config: &RunConfig, k: usize, l: usize) -> Result<Execution, String> {
    let inst = load_instance(&config.inputs)?;
    let (status, v) = match kl_minimize(&inst, k, l) {
        Ok(Minimized::Refined(m)) => (
            Status::Ok,
            json!({ "instance": inst.name, "k": k, "l": l, "result": "refined", "minimized": instance_value(&m) }),
        ),
        Ok(Minimized::Unsat { scope }) => (
            Status::Failed,
            json!({ "instance": inst.name, "k": k, "l": l, "result": "unsat",
                    "empty_scope": scope.iter().map(|&v| inst.variables[v].name.clone()).collect::<Vec<_>>() }),
        ),
        Err(e) => (
            status_of_error(&e),
            json!({ "instance": inst.name, "k": k, "l": l, "result": "error", "errors": [e.to_string()] }),
        ),
    };
    Ok(Execution {
        status,
        output: render(config, &v),
        diagnostics: Vec::new(),
    })
}

fn csp_solve(config: &RunConfig) -> Result<Execution, String> {
    let inst = load_instance(&config.inputs)?;
    let mut v = json!({
        "instance": inst.name,
        "variables": inst.len(),
        "constraints": inst.constraints.len(),
        "search_space": inst.search_space().to_string(),
    });
    let m = v.as_object_mut().expect("object");
    let status = match first_solution(&inst, config.caps.search_space) {
        Ok(Some(sol)) => {
            m.insert("solvable".into(), json!(true));
            let assignment: serde_json::Map<String, Value> = inst
                .variables
                .iter()
                .zip(&sol)
                .map(|(var, &x)| (var.name.clone(), json!(x)))
                .collect();
            m.insert("solution".into(), Value::Object(assignment));
            Status::Ok
        }
        Ok(None) => {
            m.insert("solvable".into(), json!(false));
            Status::Failed
        }
        Err(e) => {
            m.insert("solvable".into(), json!("unknown"));
            m.insert("errors".into(), json!([e.to_string()]));
            status_of_error(&e)
        }
    };
    Ok(Execution {
        status,
        output: render(config, &v),
        diagnostics: Vec::new(),
    })
}

fn emit_catalog(config: &RunConfig) -> Result<Execution, String> {
    let algs: Vec<FiniteAlgebra> = if config.inputs.is_empty() {
        catalog::seeds()
    } else {
        config
            .inputs
            .iter()
            .map(|n| {
                catalog::by_name(n).ok_or_else(|| {
                    format!(
                        "unknown built-in algebra {n}; known: {}",
                        catalog::BUILTIN_NAMES.join(", ")
                    )
                })
            })
            .collect::<Result<_, _>>()?
    };
    let output = match config.format {
        Format::Json => to_json(&serde_json::to_value(&algs).expect("algebras serialize")),
        _ => emit_algebras(&algs),
    };
    Ok(Execution {
        status: Status::Ok,
        output,
        diagnostics: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> RunConfig {
        let mut argv = vec!["taylor-edges"];
        argv.extend_from_slice(args);
        RunConfig::from_args(argv, None).unwrap()
    }

    #[test]
    fn flags_beat_environment() {
        let c = RunConfig::from_args(
            ["taylor-edges", "analyze", "A1", "--closure-cap", "50"],
            Some("--closure-cap 10 --subset-cap 4 --arities 3,5"),
        )
        .unwrap();
        assert_eq!(c.caps.closure, 50);
        assert_eq!(c.caps.subset_size, 4);
        assert_eq!(c.arities, vec![3, 5]);
    }

    #[test]
    fn usage_errors() {
        let bad = |args: &[&str]| RunConfig::from_args(args.iter().copied(), None).unwrap_err().code;
        assert_eq!(bad(&["te", "analyze", "A1", "--arities", "1"]), 2);
        assert_eq!(bad(&["te", "analyze", "A1", "--closure-cap", "0"]), 2);
        assert_eq!(bad(&["te", "analyze", "A1", "--format", "dot"]), 2);
        assert_eq!(bad(&["te", "frobnicate"]), 2);
        assert_eq!(bad(&["te", "--help"]), 0);
    }

    #[test]
    fn a1_analysis() {
        let ex = execute(&config(&["analyze", "A1"]));
        assert_eq!(ex.status, Status::Ok, "{}", ex.output);
        assert!(ex.output.contains("asm-min = {0}"), "{}", ex.output);
        assert!(ex.output.contains("{0} ◁₂"));
    }

    #[test]
    fn missing_input_is_usage() {
        let ex = execute(&config(&["analyze", "/nonexistent/a.alg"]));
        assert_eq!(ex.status, Status::Usage);
    }

    #[test]
    fn catalog_lists_seeds() {
        let ex = execute(&config(&["catalog"]));
        let algs = parse_algebras(&ex.output).unwrap();
        assert_eq!(algs, catalog::seeds());
    }

    #[test]
    fn json_and_text_agree_on_decisions() {
        let text = execute(&config(&["analyze", "semilattice"])).output;
        let json: Value =
            serde_json::from_str(&execute(&config(&["analyze", "semilattice", "--format", "json"])).output).unwrap();
        assert_eq!(to_text(&json[0]), text);
    }
}
