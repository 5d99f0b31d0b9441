//! Command-line front end. [`run_from`] parses arguments, runs one command,
//! and returns the rendered output with its exit code, so the binary is a
//! thin wrapper and tests can call it directly.
//!
//! Exit codes: 0 affirmative result, 1 negative result (invalid lattice,
//! UNSAT), 2 input error or limit hit, 3 internal consistency alarm.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use omlab_core::greechie::{
    contexts_from_rays, diagram_to_dot, diagram_to_json, hypergraph_to_dot, hypergraph_to_json, lattice_to_dot,
    lattice_to_json, paste_raw, ContextHypergraph, GreechieDiagram, IncompleteContext, Input,
};
use omlab_core::lattice::{
    central_decomposition, validate_structure, FiniteOrtholattice, LatticeTable, RawOrtholattice,
    ValidationOptions, ValidationReport,
};
use omlab_core::modal::{modal_extension, possibility_space, verify_modal_axioms, ModalAlgebra};
use omlab_core::valuation::{
    check_modal_ks_equivalence, enumerate_blocks, ks_hypergraph_check, BlockView, GlobalValuation, SearchLimits,
    SearchMode, SearchReport, DEFAULT_MAX_NODES,
};
use omlab_core::Error;
use serde_json::{json, Map, Value};

pub const EXIT_AFFIRMATIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "omlab", version, about = "Finite orthomodular lattice workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Refuse lattices with more elements than this.
    #[arg(long, global = true, default_value_t = 512, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_elements: u64,

    /// Abort searches after this many nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_NODES, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_nodes: u64,

    /// Most witnesses listed by `--mode enumerate`.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub enumerate_cap: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the lattice, ortholattice and orthomodular axioms.
    Validate { input: PathBuf },
    /// Summarize atoms, blocks, center and factors.
    Analyze { input: PathBuf },
    /// Check S1-S7 for the canonical box and print the box and diamond tables.
    Modal { input: PathBuf },
    /// Search for a global valuation (one compatible hom per block).
    Valuate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::First)]
        mode: Mode,
    },
    /// Compare global valuations with compatible actualizations of each
    /// hom on the possibility space.
    Actualize { input: PathBuf },
    /// Exactly-one assignment check on a context hypergraph (ray contexts,
    /// diagram blocks, or the atoms of each block of a lattice).
    Ks {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::First)]
        mode: Mode,
    },
    /// Split the lattice into factors with trivial center.
    Decompose { input: PathBuf },
    /// Write the input as DOT or JSON.
    Export {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        to: ExportFormat,
        /// Export the pasted lattice of a diagram instead of the diagram.
        #[arg(long)]
        pasted: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    First,
    Count,
    Enumerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_AFFIRMATIVE, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Validate { input } => validate(cli, input),
        Command::Analyze { input } => analyze(cli, input),
        Command::Modal { input } => modal(cli, input),
        Command::Valuate { input, mode } => valuate(cli, input, *mode),
        Command::Actualize { input } => actualize(cli, input),
        Command::Ks { input, mode } => ks(cli, input, *mode),
        Command::Decompose { input } => decompose(cli, input),
        Command::Export { input, to, pasted } => export(cli, input, *to, *pasted),
    };
    match result {
        Ok(report) | Err(Failure::Invalid(report)) => report.render(cli.format),
        Err(Failure::Error(e)) => error_outcome(cli.format, e),
    }
}

/// Why a command produced no regular report.
enum Failure {
    Error(Error),
    /// The input is not an orthomodular lattice; the report says why.
    Invalid(Report),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotOml(report) => Failure::Invalid(invalid_report(&report, None)),
            other => Failure::Error(other),
        }
    }
}

/// A command's result: the JSON form is authoritative and the text form
/// presents the same fields.
struct Report {
    code: i32,
    json: Value,
    text: String,
    /// Emitted verbatim regardless of `--format` (exports).
    raw: bool,
}

impl Report {
    fn new(code: i32, json: Value, text: String) -> Self {
        Self { code, json, text, raw: false }
    }

    fn render(self, format: Format) -> Outcome {
        let stdout = if self.raw {
            self.text
        } else {
            match format {
                Format::Text => self.text,
                Format::Json => serde_json::to_string_pretty(&self.json).expect("report serializes") + "\n",
            }
        };
        Outcome { code: self.code, stdout, stderr: String::new() }
    }
}

fn error_outcome(format: Format, e: Error) -> Outcome {
    let (code, kind) = match &e {
        Error::Input(_) | Error::Parse { .. } | Error::Precondition(_) => (EXIT_INPUT, "input"),
        Error::LimitExceeded(_) => (EXIT_INPUT, "limit"),
        Error::NotOml(_) => (EXIT_NEGATIVE, "not-orthomodular"),
        Error::Internal(_) => (EXIT_INTERNAL, "internal"),
    };
    match format {
        Format::Text => Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") },
        Format::Json => Outcome {
            code,
            stdout: serde_json::to_string_pretty(&json!({ "error": { "kind": kind, "message": e.to_string() } }))
                .expect("error serializes")
                + "\n",
            stderr: String::new(),
        },
    }
}

fn limits(cli: &Cli) -> SearchLimits {
    SearchLimits { max_nodes: cli.max_nodes }
}

fn check_size(cli: &Cli, n: usize) -> Result<(), Error> {
    if n as u64 > cli.max_elements {
        return Err(Error::LimitExceeded(format!("{n} elements exceed --max-elements {}", cli.max_elements)));
    }
    Ok(())
}

fn load(path: &Path) -> Result<Input, Error> {
    Input::from_path(path)
}

fn rays_to_diagram(h: &ContextHypergraph) -> Result<GreechieDiagram, Error> {
    GreechieDiagram::from_hypergraph(h)
        .map_err(|e| Error::Input(format!("ray contexts do not form a Greechie diagram: {e}")))
}

/// Unvalidated structure for lattice commands, with a note on its origin.
fn load_raw(cli: &Cli, path: &Path) -> Result<(RawOrtholattice, Option<&'static str>), Error> {
    let (raw, note) = match load(path)? {
        Input::Lattice(raw) => (raw, None),
        Input::Diagram(d) => (paste_raw(&d)?, Some("diagram")),
        Input::Rays(r) => {
            let (h, _) = contexts_from_rays(&r)?;
            (paste_raw(&rays_to_diagram(&h)?)?, Some("diagram"))
        }
    };
    check_size(cli, raw.len())?;
    Ok((raw, note))
}

fn load_lattice(cli: &Cli, path: &Path) -> Result<FiniteOrtholattice, Failure> {
    let (raw, note) = load_raw(cli, path)?;
    let report = validate_structure(&raw, &ValidationOptions::default());
    if report.passed() {
        Ok(report.into_lattice()?)
    } else {
        Err(Failure::Invalid(invalid_report(&report, note)))
    }
}

fn names(l: &FiniteOrtholattice, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| l.name(x).to_string()).collect()
}

fn invalid_report(report: &ValidationReport, note: Option<&str>) -> Report {
    let mut text = format!("orthomodular: no, {} elements\n", report.elements);
    if note == Some("diagram") {
        text.push_str("diagram pastes to a non-OML\n");
    }
    for f in &report.failures {
        let witnesses: Vec<String> = f.witnesses.iter().map(|w| format!("({})", w.join(", "))).collect();
        text.push_str(&format!("  {}: {} failure(s); witnesses {}\n", f.axiom, f.count, witnesses.join(" ")));
    }
    let mut json = json!({
        "orthomodular": false,
        "elements": report.elements,
        "failures": report.failures,
    });
    if note == Some("diagram") {
        json["note"] = json!("diagram pastes to a non-OML");
    }
    Report::new(EXIT_NEGATIVE, json, text)
}

fn validate(cli: &Cli, path: &Path) -> Result<Report, Failure> {
    let (raw, note) = load_raw(cli, path)?;
    let report = validate_structure(&raw, &ValidationOptions::default());
    if !report.passed() {
        return Ok(invalid_report(&report, note));
    }
    let l = report.into_lattice()?;
    let blocks = enumerate_blocks(&l)?.len();
    Ok(Report::new(
        EXIT_AFFIRMATIVE,
        json!({ "orthomodular": true, "elements": l.len(), "blocks": blocks }),
        format!("orthomodular: yes, {} elements, {blocks} blocks\n", l.len()),
    ))
}

fn block_json(l: &FiniteOrtholattice, blocks: &[BlockView]) -> Map<String, Value> {
    blocks.iter().enumerate().map(|(i, b)| (format!("W{i}"), json!(names(l, b.members())))).collect()
}

fn block_text(l: &FiniteOrtholattice, blocks: &[BlockView]) -> String {
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| format!("  W{i}: {}\n", names(l, b.members()).join(", ")))
        .collect()
}

fn analyze(cli: &Cli, path: &Path) -> Result<Report, Failure> {
    let l = load_lattice(cli, path)?;
    let atoms = l.atoms();
    let blocks = enumerate_blocks(&l)?;
    let center = l.central_elements();
    let d = central_decomposition(&l)?;
    let factor_sizes: Vec<usize> = d.factors.iter().map(FiniteOrtholattice::len).collect();
    let json = json!({
        "elements": l.len(),
        "atoms": names(&l, &atoms),
        "blocks": block_json(&l, &blocks),
        "center": names(&l, &center),
        "factor_sizes": factor_sizes,
    });
    let sizes: Vec<String> = factor_sizes.iter().map(usize::to_string).collect();
    let text = format!(
        "elements: {}\natoms: {} ({})\nblocks: {}\n{}center: {} elements ({})\nfactor sizes: {}\n",
        l.len(),
        atoms.len(),
        names(&l, &atoms).join(", "),
        blocks.len(),
        block_text(&l, &blocks),
        center.len(),
        names(&l, &center).join(", "),
        sizes.join(" x "),
    );
    Ok(Report::new(EXIT_AFFIRMATIVE, json, text))
}

fn modal(cli: &Cli, path: &Path) -> Result<Report, Failure> {
    let l = load_lattice(cli, path)?;
    let m = ModalAlgebra::canonical(l.clone())?;
    let report = verify_modal_axioms(&l, m.box_table(), omlab_core::lattice::DEFAULT_WITNESS_CAP)?;
    let diamonds = m.diamond_table();
    let mut text = String::new();
    for (name, r) in &report.axioms {
        let verdict = if r.pass { "pass".to_string() } else { format!("FAIL ({} witnesses)", r.witnesses.len()) };
        text.push_str(&format!("{name}: {verdict}\n"));
    }
    text.push_str("box:\n");
    for a in l.elements() {
        text.push_str(&format!("  {} -> {}\n", l.name(a), l.name(m.necessity(a))));
    }
    text.push_str("diamond:\n");
    for a in l.elements() {
        text.push_str(&format!("  {} -> {}\n", l.name(a), l.name(diamonds[a])));
    }
    let json = json!({
        "axioms": report.axioms,
        "box": m.table_names(m.box_table()),
        "diamond": m.table_names(&diamonds),
    });
    let code = if report.passed() { EXIT_AFFIRMATIVE } else { EXIT_NEGATIVE };
    Ok(Report::new(code, json, text))
}

fn search_mode(cli: &Cli, mode: Mode) -> SearchMode {
    match mode {
        Mode::First => SearchMode::First,
        Mode::Count => SearchMode::Count,
        Mode::Enumerate => SearchMode::Enumerate { cap: cli.enumerate_cap.try_into().unwrap_or(usize::MAX) },
    }
}

fn valuation_text(l: &FiniteOrtholattice, v: &GlobalValuation) -> String {
    v.per_block.iter().enumerate().map(|(i, h)| format!("  W{i} = {}\n", l.name(h.selected_atom()))).collect()
}

/// Shared JSON/text for a block search result.
fn search_summary(l: &FiniteOrtholattice, r: &SearchReport, mode: Mode) -> (Value, String) {
    let mut json = json!({ "satisfiable": r.satisfiable(), "nodes": r.nodes });
    let mut text = format!(
        "global valuation: {}\nnodes: {}\n",
        if r.satisfiable() { "found" } else { "none" },
        r.nodes
    );
    if mode != Mode::First {
        json["count"] = json!(r.count);
        json["exhausted"] = json!(r.exhausted);
        text.push_str(&format!("count: {}\nexhausted: {}\n", r.count, r.exhausted));
    }
    if mode == Mode::Enumerate {
        json["truncated"] = json!(r.truncated);
        json["valuations"] = Value::Array(r.witnesses.iter().map(|w| w.to_json(l)["valuation"].clone()).collect());
        text.push_str(&format!("truncated: {}\n", r.truncated));
        for (k, w) in r.witnesses.iter().enumerate() {
            text.push_str(&format!("valuation {k}:\n{}", valuation_text(l, w)));
        }
    } else if let Some(w) = r.witnesses.first() {
        json["valuation"] = w.to_json(l)["valuation"].clone();
        text.push_str(&format!("valuation:\n{}", valuation_text(l, w)));
    }
    if let Some(cert) = r.certificate() {
        json["certificate"] = json!(cert);
        text.push_str(&format!(
            "certificate: exhausted after {} nodes, block order {}\n",
            cert.nodes,
            cert.order.join(" ")
        ));
    }
    (json, text)
}

fn valuate(cli: &Cli, path: &Path, mode: Mode) -> Result<Report, Failure> {
    let l = load_lattice(cli, path)?;
    let blocks = enumerate_blocks(&l)?;
    let r = omlab_core::valuation::search_blocks(&l, &blocks, search_mode(cli, mode), limits(cli), &|_, _| true)?;
    let (mut json, summary) = search_summary(&l, &r, mode);
    json["blocks"] = Value::Object(block_json(&l, &blocks));
    let text = format!("blocks: {}\n{}{summary}", blocks.len(), block_text(&l, &blocks));
    let code = if r.satisfiable() { EXIT_AFFIRMATIVE } else { EXIT_NEGATIVE };
    Ok(Report::new(code, json, text))
}

fn actualize(cli: &Cli, path: &Path) -> Result<Report, Failure> {
    let l = load_lattice(cli, path)?;
    let ext = modal_extension(&l)?;
    let space = possibility_space(&ext)?;
    let r = check_modal_ks_equivalence(&ext, limits(cli))?;
    let yes_no = |b: bool| if b { "yes" } else { "no" };

    let mut text = format!(
        "possibility space: {} elements ({})\nglobal valuation: {}\n",
        space.len(),
        space.member_names(&l).join(", "),
        yes_no(r.has_global_valuation)
    );
    let mut per_f = Vec::new();
    for p in &r.per_f {
        let atom = l.name(p.f.selected_atom());
        let found = p.search.satisfiable();
        text.push_str(&format!(
            "f selecting {atom}: {}\n",
            if found { "compatible actualization found" } else { "no compatible actualization" }
        ));
        let mut entry = json!({ "f": atom, "compatible": found, "nodes": p.search.nodes });
        if let Some(w) = p.search.witnesses.first() {
            entry["valuation"] = w.to_json(&l)["valuation"].clone();
        }
        if let Some(cert) = p.search.certificate() {
            entry["certificate"] = json!(cert);
        }
        per_f.push(entry);
    }
    text.push_str(&format!(
        "compatible actualization: {}\nequivalent: {}\n",
        yes_no(r.some_f_admits_actualization),
        yes_no(r.equivalent)
    ));
    let mut global = json!({ "satisfiable": r.global.satisfiable(), "nodes": r.global.nodes });
    if let Some(w) = r.global.witnesses.first() {
        global["valuation"] = w.to_json(&l)["valuation"].clone();
    }
    if let Some(cert) = r.global.certificate() {
        global["certificate"] = json!(cert);
    }
    let json = json!({
        "possibility_space": space.member_names(&l),
        "has_global_valuation": r.has_global_valuation,
        "some_f_admits_actualization": r.some_f_admits_actualization,
        "equivalent": r.equivalent,
        "global": global,
        "per_f": per_f,
    });
    let code = if r.some_f_admits_actualization { EXIT_AFFIRMATIVE } else { EXIT_NEGATIVE };
    Ok(Report::new(code, json, text))
}

fn ks(cli: &Cli, path: &Path, mode: Mode) -> Result<Report, Failure> {
    let (h, warnings): (ContextHypergraph, Vec<IncompleteContext>) = match load(path)? {
        Input::Rays(r) => contexts_from_rays(&r)?,
        Input::Diagram(d) => (d.to_hypergraph(), Vec::new()),
        Input::Lattice(_) => {
            let l = load_lattice(cli, path)?;
            let contexts = enumerate_blocks(&l)?.iter().map(|b| names(&l, b.atoms())).collect::<Vec<_>>();
            (ContextHypergraph::from_named(contexts)?, Vec::new())
        }
    };
    let r = ks_hypergraph_check(&h, search_mode(cli, mode), limits(cli))?;
    let mut text = format!("outcomes: {}\ncontexts: {}\n", h.outcomes().len(), h.contexts().len());
    for w in &warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let mut json = json!({
        "outcomes": h.outcomes().len(),
        "contexts": h.contexts().len(),
        "warnings": warnings.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "satisfiable": r.satisfiable(),
    });
    if let Some(p) = &r.parity {
        json["parity"] = p.to_json()["parity"].clone();
        text.push_str(&format!(
            "result: UNSAT\nparity: {} contexts, every outcome in an even number of contexts\n",
            p.contexts
        ));
    } else {
        json["nodes"] = json!(r.nodes);
        text.push_str(&format!("result: {}\nnodes: {}\n", if r.satisfiable() { "SAT" } else { "UNSAT" }, r.nodes));
        if mode != Mode::First {
            json["count"] = json!(r.count);
            json["exhausted"] = json!(r.exhausted);
            text.push_str(&format!("count: {}\nexhausted: {}\n", r.count, r.exhausted));
        }
        if mode == Mode::Enumerate {
            json["truncated"] = json!(r.truncated);
            text.push_str(&format!("truncated: {}\n", r.truncated));
        }
        let named = |ones: &Vec<usize>| ones.iter().map(|&o| h.outcomes()[o].clone()).collect::<Vec<_>>();
        let shown: Vec<Vec<String>> =
            if mode == Mode::Enumerate { r.assignments.iter().map(named).collect() } else { r.assignments.iter().take(1).map(named).collect() };
        if mode == Mode::Enumerate {
            json["assignments"] = json!(shown);
        } else if let Some(a) = shown.first() {
            json["assignment"] = json!(a);
        }
        for (k, a) in shown.iter().enumerate() {
            if mode == Mode::Enumerate {
                text.push_str(&format!("assignment {k}: {}\n", a.join(", ")));
            } else {
                text.push_str(&format!("assignment: {}\n", a.join(", ")));
            }
        }
        if r.exhausted && !r.satisfiable() {
            let order: Vec<String> = (0..h.contexts().len()).map(|k| format!("C{k}")).collect();
            json["certificate"] = json!({ "exhausted": true, "nodes": r.nodes, "order": order });
            text.push_str(&format!("certificate: exhausted after {} nodes, context order C0..C{}\n", r.nodes, order.len() - 1));
        }
    }
    let code = if r.satisfiable() { EXIT_AFFIRMATIVE } else { EXIT_NEGATIVE };
    Ok(Report::new(code, json, text))
}

fn decompose(cli: &Cli, path: &Path) -> Result<Report, Failure> {
    let l = load_lattice(cli, path)?;
    let d = central_decomposition(&l)?;
    let mut text = format!("factors: {}\n", d.factors.len());
    let mut factors = Vec::new();
    for (f, &z) in d.factors.iter().zip(&d.central_atoms) {
        text.push_str(&format!(
            "  L/{}: {} elements, center {} elements ({})\n",
            l.name(z),
            f.len(),
            f.central_elements().len(),
            f.names().join(", ")
        ));
        factors.push(json!({
            "central_atom": l.name(z),
            "elements": f.len(),
            "center": f.central_elements().len(),
            "table": LatticeTable::from_lattice(f)?,
        }));
    }
    text.push_str("product of factors: isomorphic\n");
    Ok(Report::new(EXIT_AFFIRMATIVE, json!({ "factors": factors, "product_isomorphic": true }), text))
}

fn export(cli: &Cli, path: &Path, to: ExportFormat, pasted: bool) -> Result<Report, Failure> {
    let lattice_export = |l: &FiniteOrtholattice| -> Result<String, Error> {
        match to {
            ExportFormat::Dot => Ok(lattice_to_dot(l)),
            ExportFormat::Json => Ok(lattice_to_json(l)? + "\n"),
        }
    };
    let text = match load(path)? {
        Input::Lattice(_) => lattice_export(&load_lattice(cli, path)?)?,
        Input::Diagram(_) | Input::Rays(_) if pasted => lattice_export(&load_lattice(cli, path)?)?,
        Input::Diagram(d) => match to {
            ExportFormat::Dot => diagram_to_dot(&d),
            ExportFormat::Json => diagram_to_json(&d) + "\n",
        },
        Input::Rays(r) => {
            let (h, _) = contexts_from_rays(&r)?;
            match to {
                ExportFormat::Dot => hypergraph_to_dot(&h),
                ExportFormat::Json => hypergraph_to_json(&h) + "\n",
            }
        }
    };
    Ok(Report { code: EXIT_AFFIRMATIVE, json: Value::Null, text, raw: true })
}
