//! The `ocha` command-line front end. [`run`] parses arguments, dispatches
//! one subcommand and renders a [`Report`]; exit statuses are 0 (pass),
//! 1 (check failed), 2 (parse or usage error) and 3 (obstruction).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::deformation::{deform_open_sector, gauge_transform, mc_residual, solve_mc, twist_ocha, GaugePath, McPair, McSolve};
use crate::document::{
    describe_vector, parse_formal, parse_scalar_vector, to_json, Coefficient, DocumentRing, McDocument, MorphismDocument,
    StructureDocument,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graded::{GradedSpace, Scalar, Sector, SectorTag, Trunc};
use crate::structures::{
    check_a_infinity, check_cyclicity, check_l_infinity, check_morphism, check_ocha, check_sh_derivation, check_sh_module,
    cohomology, cyclic_tensors, dual_round_trip, dualize_to_r, OchaStructure, Report as RelationReport,
};
use crate::transfer::{hodge_decompose, induced_identities, transfer_minimal};
use crate::trees::{d_squared_failures, enumerate, enumerate_up_to, tree_differential, Convention, Operad, Tree};

/// Largest leaf count `ocha trees` will enumerate.
pub const LEAF_LIMIT: usize = 7;

#[derive(Parser, Debug)]
#[command(name = "ocha", version, about = "Exact checks, homotopy transfer and formal deformations of OCHA, A∞ and L∞ algebras")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Ainf,
    Linf,
    Ocha,
    Module,
    Derivation,
    Cyclic,
    Morphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperadName {
    A,
    L,
    Oc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FixtureName {
    DualNumbers,
    CorruptedDualNumbers,
    Massey,
    AbelianLie,
    ExactSquareLie,
    ObstructedLie,
    SmallDgLie,
    Leibniz,
    ExtendedLeibniz,
    Frobenius,
    Empty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the defining relations of a structure or morphism document.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: CheckKind,
        /// Largest total input length checked (defaults to the document bound).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Transfer a structure to its minimal model on cohomology.
    Transfer {
        file: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
        /// Where to write the minimal structure.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the quasi-isomorphism from the minimal model.
        #[arg(long)]
        inclusion_out: Option<PathBuf>,
    },
    /// Solve the closed Maurer–Cartan equation order by order from `ħ·seed`.
    Mc {
        file: PathBuf,
        /// Seed cocycle, e.g. `x` or `x=2,y=-1/3`.
        #[arg(long)]
        seed: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flow a Maurer–Cartan pair along constant gauge generators to `t = 1`.
    Gauge {
        file: PathBuf,
        /// Closed part, e.g. `x@1,x@2=-1/2`.
        #[arg(long, default_value = "")]
        cbar: String,
        #[arg(long, default_value = "")]
        obar: String,
        #[arg(long, default_value = "")]
        alpha: String,
        #[arg(long, default_value = "")]
        beta: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deform the open A∞ structure by a Maurer–Cartan element.
    Deform {
        file: PathBuf,
        #[arg(long)]
        cbar: String,
        /// Open part; when given, the full pair must solve the open equation too.
        #[arg(long)]
        obar: Option<String>,
        #[arg(long)]
        order: usize,
        /// Write the whole twisted OCHA instead of its open A∞ part.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate canonical trees and apply the tree differential.
    Trees {
        #[arg(long, value_enum)]
        operad: OperadName,
        #[arg(long)]
        leaves: usize,
        /// Include `d T` for every tree in the report.
        #[arg(long)]
        differential: bool,
        /// Verify `d² = 0` on every tree with at most `--leaves` leaves.
        #[arg(long)]
        check_d2: bool,
        /// Write the plain-text graph of every tree here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one of the bundled example documents.
    Fixture {
        #[arg(value_enum)]
        name: FixtureName,
        #[arg(long, default_value_t = 4)]
        bound: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Obstructed,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
            Verdict::Obstructed => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fact {
    pub name: String,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub check: String,
    /// `(n, m)`: closed and open input counts.
    pub relation: (usize, usize),
    pub output: Sector,
    pub closed: Vec<String>,
    pub open: Vec<String>,
    pub residual: BTreeMap<String, Coefficient>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub bounds: BTreeMap<String, usize>,
    pub facts: Vec<Fact>,
    pub violations: Vec<Violation>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_ms: u64,
}

impl Report {
    fn new(command: String) -> Self {
        Report {
            command,
            verdict: Verdict::Pass,
            bounds: BTreeMap::new(),
            facts: Vec::new(),
            violations: Vec::new(),
            outputs: Vec::new(),
            error: None,
            timing_ms: 0,
        }
    }

    fn bound(&mut self, name: &str, value: usize) {
        self.bounds.insert(name.into(), value);
    }

    fn fact(&mut self, name: impl Into<String>, value: impl Serialize) {
        self.facts.push(Fact { name: name.into(), value: serde_json::to_value(value).expect("fact serializes") });
    }

    fn fail(&mut self) {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
        }
    }

    /// Records every violation of `relations` whose word has length at most
    /// `limit`; residuals are named in `output` (or as a scalar when `None`).
    fn absorb<R: DocumentRing>(
        &mut self,
        relations: &RelationReport<R>,
        input: (&GradedSpace, &GradedSpace),
        output: Option<(&GradedSpace, &GradedSpace)>,
        limit: usize,
    ) {
        self.fact(format!("{} checked", relations.relation), relations.checked);
        for (instance, residual) in &relations.violations {
            if instance.word.len() > limit {
                continue;
            }
            let residual = match output {
                Some((closed, open)) => describe_vector(if instance.output == Sector::Closed { closed } else { open }, residual),
                None => BTreeMap::from([("value".to_string(), residual.get(0).write())]),
            };
            self.violations.push(Violation {
                check: relations.relation.clone(),
                relation: instance.arity(),
                output: instance.output,
                closed: instance.word.closed.iter().map(|&i| input.0.name(i).to_string()).collect(),
                open: instance.word.open.iter().map(|&i| input.1.name(i).to_string()).collect(),
                residual,
            });
            self.fail();
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        let _ = writeln!(s, "verdict: {}", serde_json::to_value(self.verdict).expect("verdict").as_str().unwrap_or_default());
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {e}");
        }
        if !self.bounds.is_empty() {
            let b: Vec<String> = self.bounds.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "bounds: {}", b.join(" "));
        }
        for f in &self.facts {
            let value = match &f.value {
                Value::String(v) => v.clone(),
                v => v.to_string(),
            };
            let _ = writeln!(s, "fact: {} = {value}", f.name);
        }
        for v in &self.violations {
            let residual: Vec<String> = v.residual.iter().map(|(k, c)| format!("{k}: {}", coefficient_text(c))).collect();
            let _ = writeln!(
                s,
                "violation: {} (n={}, m={}) [{}; {}] -> {}: {{{}}}",
                v.check,
                v.relation.0,
                v.relation.1,
                v.closed.join(", "),
                v.open.join(", "),
                v.output,
                residual.join(", ")
            );
        }
        for o in &self.outputs {
            let _ = writeln!(s, "output: {o}");
        }
        let _ = writeln!(s, "timing: {} ms", self.timing_ms);
        s
    }
}

fn coefficient_text(c: &Coefficient) -> String {
    match c {
        Coefficient::Scalar(s) => s.clone(),
        Coefficient::Series(v) => format!("[{}]", v.join(", ")),
    }
}

/// Result of one invocation: what to print and the exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let echo = args.iter().skip(1).fold(String::from("ocha"), |mut acc, a| {
        acc.push(' ');
        acc.push_str(a);
        acc
    });
    if let Command::Fixture { name, bound, out: None } = &cli.command {
        return match fixture_document(*name, *bound) {
            Ok(text) => Outcome { stdout: text, stderr: String::new(), code: 0 },
            Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
        };
    }
    let mut report = Report::new(echo);
    let start = Instant::now();
    if let Err(e) = dispatch(&cli.command, &mut report) {
        report.verdict = Verdict::Error;
        report.error = Some(e.to_string());
    }
    report.timing_ms = u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX);
    Outcome { stdout: report.render(cli.format), stderr: String::new(), code: report.exit_code() }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str, report: &mut Report) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
    report.outputs.push(path.display().to_string());
    Ok(())
}

fn dispatch(command: &Command, report: &mut Report) -> Result<()> {
    match command {
        Command::Check { file, kind, bound } => cmd_check(&read(file)?, *kind, *bound, report),
        Command::Transfer { file, bound, out, inclusion_out } => {
            cmd_transfer(&read(file)?, *bound, out.as_deref(), inclusion_out.as_deref(), report)
        }
        Command::Mc { file, seed, order, out } => cmd_mc(&read(file)?, seed, *order, out.as_deref(), report),
        Command::Gauge { file, cbar, obar, alpha, beta, order, out } => {
            cmd_gauge(&read(file)?, [cbar, obar, alpha, beta], *order, out.as_deref(), report)
        }
        Command::Deform { file, cbar, obar, order, full, out } => {
            cmd_deform(&read(file)?, cbar, obar.as_deref(), *order, *full, out.as_deref(), report)
        }
        Command::Trees { operad, leaves, differential, check_d2, out } => {
            cmd_trees(*operad, *leaves, *differential, *check_d2, out.as_deref(), report)
        }
        Command::Fixture { name, bound, out } => {
            let text = fixture_document(*name, *bound)?;
            match out {
                Some(path) => write(path, &text, report),
                None => Ok(()),
            }
        }
    }
}

fn effective_bound(requested: Option<usize>, stored: usize) -> Result<usize> {
    match requested {
        Some(b) if b > stored => Err(Error::Bound(format!("requested bound {b} exceeds the stored tables (bound {stored})"))),
        Some(b) => Ok(b),
        None => Ok(stored),
    }
}

fn missing(what: &str) -> Error {
    Error::Invalid(format!("document has no `{what}`"))
}

pub fn cmd_check(text: &str, kind: CheckKind, bound: Option<usize>, report: &mut Report) -> Result<()> {
    if kind == CheckKind::Morphism {
        let f = MorphismDocument::parse(text)?.to_morphism()?;
        let b = effective_bound(bound, f.source.bound.min(f.target.bound))?;
        report.bound("bound", b);
        let relations = check_morphism(&f, b, b);
        report.absorb(&relations, (&f.source.closed, &f.source.open), Some((&f.target.closed, &f.target.open)), b);
        return Ok(());
    }
    let doc = StructureDocument::parse(text)?;
    let b = effective_bound(bound, doc.bound)?;
    report.bound("bound", b);
    if let Some(order) = doc.order {
        report.bound("order", order);
        if kind == CheckKind::Cyclic {
            return Err(Error::Invalid("cyclic checks need rational (not formal) coefficients".into()));
        }
        check_structure::<Trunc>(&doc, kind, b, report)
    } else {
        check_structure::<Scalar>(&doc, kind, b, report)
    }
}

fn check_structure<R: DocumentRing>(doc: &StructureDocument, kind: CheckKind, b: usize, report: &mut Report) -> Result<()> {
    let s: OchaStructure<R> = doc.to_structure()?;
    let spaces = (&s.closed, &s.open);
    let relations = match kind {
        CheckKind::Ainf => check_a_infinity(&s, b),
        CheckKind::Linf => check_l_infinity(&s, b),
        CheckKind::Ocha => check_ocha(&s, b, b),
        CheckKind::Module => check_sh_module(&s, b),
        CheckKind::Derivation => {
            let theta = doc.derivation_family(&s)?.ok_or_else(|| missing("derivation"))?;
            check_sh_derivation(&theta, &s, b)
        }
        CheckKind::Cyclic => return check_cyclic(doc, report),
        CheckKind::Morphism => unreachable!("handled by cmd_check"),
    };
    report.absorb(&relations, spaces, Some(spaces), b);
    Ok(())
}

fn check_cyclic(doc: &StructureDocument, report: &mut Report) -> Result<()> {
    let s: OchaStructure = doc.to_structure()?;
    let w = doc.symplectic_pair(&s)?.ok_or_else(|| missing("pairing"))?;
    w.check(&s)?;
    let tensors = cyclic_tensors(&s, &w)?;
    let cyclic = check_cyclicity(&tensors, &s);
    report.absorb(&cyclic, (&s.closed, &s.open), None, usize::MAX);
    if cyclic.is_valid() {
        let dual = dualize_to_r(&s, &w)?;
        report.absorb(&dual_round_trip(&dual, &s, &w), (&s.closed, &s.open), None, usize::MAX);
    }
    Ok(())
}

fn betti(space: &GradedSpace) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for i in 0..space.dim() {
        *out.entry(space.degree(i)).or_insert(0) += 1;
    }
    out
}

pub fn cmd_transfer(text: &str, bound: Option<usize>, out: Option<&Path>, inclusion_out: Option<&Path>, report: &mut Report) -> Result<()> {
    let doc = StructureDocument::parse(text)?;
    if doc.order.is_some() {
        return Err(Error::Invalid("transfer needs rational (not formal) coefficients".into()));
    }
    let s: OchaStructure = doc.to_structure()?;
    let b = effective_bound(bound, s.bound)?;
    report.bound("bound", b);
    let relations = check_ocha(&s, b, b);
    if !relations.is_valid() {
        report.absorb(&relations, (&s.closed, &s.open), Some((&s.closed, &s.open)), b);
        return Err(Error::Precondition("input structure violates its relations".into()));
    }
    let t = transfer_minimal(&s, &hodge_decompose(&s)?, b)?;
    report.fact("betti closed", betti(&t.minimal.closed));
    report.fact("betti open", betti(&t.minimal.open));
    for (name, holds) in induced_identities(&t) {
        report.fact(format!("{name} induced on cohomology"), holds);
        if !holds {
            report.fail();
        }
    }
    match t.verify() {
        Ok(()) => report.fact("minimal relations, inclusion morphism and quasi-isomorphism", "verified"),
        Err(e) => {
            report.fact("verification", e.to_string());
            report.fail();
        }
    }
    if let Some(path) = out {
        write(path, &to_json(&StructureDocument::from_structure(&t.minimal, None)), report)?;
    }
    if let Some(path) = inclusion_out {
        write(path, &to_json(&MorphismDocument::from_morphism(&t.inclusion)), report)?;
    }
    Ok(())
}

fn rational_structure(text: &str) -> Result<OchaStructure> {
    let doc = StructureDocument::parse(text)?;
    if doc.order.is_some() {
        return Err(Error::Invalid("expected rational (not formal) coefficients".into()));
    }
    doc.to_structure()
}

fn residual_facts(report: &mut Report, s: &OchaStructure, x: &McPair) -> Result<()> {
    let r = mc_residual(s, x)?;
    report.fact("closed residual", describe_vector(&s.closed, &r.closed));
    report.fact("open residual", describe_vector(&s.open, &r.open));
    if !r.is_zero() {
        report.fail();
    }
    Ok(())
}

pub fn cmd_mc(text: &str, seed: &str, order: usize, out: Option<&Path>, report: &mut Report) -> Result<()> {
    let s = rational_structure(text)?;
    report.bound("bound", s.bound);
    report.bound("order", order);
    let seed = parse_scalar_vector(&s.closed, seed)?;
    let contraction = cohomology(&s.closed, Sector::Closed, s.l(1))?;
    match solve_mc(&s, &seed, &contraction, order)? {
        McSolve::Solved(x) => {
            let pair = McPair::closed_only(x, order);
            report.fact("solution", describe_vector(&s.closed, &pair.closed));
            residual_facts(report, &s, &pair)?;
            if let Some(path) = out {
                write(path, &to_json(&McDocument::from_pair(&pair, &s)), report)?;
            }
        }
        McSolve::Obstructed { order: at, class, partial } => {
            report.verdict = Verdict::Obstructed;
            report.fact("obstruction order", at);
            report.fact("obstruction class", describe_vector(&contraction.small, &class));
            report.fact("partial solution", describe_vector(&s.closed, &partial));
        }
    }
    Ok(())
}

pub fn cmd_gauge(text: &str, [cbar, obar, alpha, beta]: [&String; 4], order: usize, out: Option<&Path>, report: &mut Report) -> Result<()> {
    let s = rational_structure(text)?;
    report.bound("bound", s.bound);
    report.bound("order", order);
    let start = McPair { closed: parse_formal(&s.closed, cbar, order)?, open: parse_formal(&s.open, obar, order)?, order };
    let path = GaugePath::constant(&parse_formal(&s.closed, alpha, order)?, &parse_formal(&s.open, beta, order)?);
    let result = gauge_transform(&s, &start, &path)?;
    report.fact("closed endpoint", describe_vector(&s.closed, &result.endpoint.closed));
    report.fact("open endpoint", describe_vector(&s.open, &result.endpoint.open));
    residual_facts(report, &s, &result.endpoint)?;
    if let Some(path) = out {
        write(path, &to_json(&McDocument::from_pair(&result.endpoint, &s)), report)?;
    }
    Ok(())
}

/// Keeps only the maps of total arity at most `bound`.
fn restrict(mut s: OchaStructure<Trunc>, bound: usize) -> OchaStructure<Trunc> {
    s.maps.closed.retain(|&k, _| k <= bound);
    s.maps.open.retain(|&(p, q), _| p + q <= bound);
    s.bound = bound;
    s
}

pub fn cmd_deform(text: &str, cbar: &str, obar: Option<&str>, order: usize, full: bool, out: Option<&Path>, report: &mut Report) -> Result<()> {
    let s = rational_structure(text)?;
    let x = McPair { closed: parse_formal(&s.closed, cbar, order)?, open: parse_formal(&s.open, obar.unwrap_or(""), order)?, order };
    // Relations of the twisted maps are exact up to this length.
    let exact = s.bound.saturating_sub(order.saturating_sub(1));
    report.bound("order", order);
    report.bound("bound", exact);
    let deformed = if full {
        let twisted = twist_ocha(&s, &x)?;
        report.fact("closed curvature", describe_vector(&s.closed, &crate::deformation::closed_curvature(&twisted)));
        report.fact("open curvature", describe_vector(&s.open, &crate::deformation::open_curvature(&twisted)));
        report.fact("weak", !crate::deformation::is_strict(&twisted));
        twisted
    } else {
        let d = deform_open_sector(&s, &x, obar.is_some())?;
        report.fact("curvature m0", describe_vector(&s.open, &d.curvature));
        report.fact("weak", d.is_weak());
        d.structure
    };
    let deformed = restrict(deformed, exact);
    let relations = check_ocha(&deformed, exact, exact);
    report.absorb(&relations, (&s.closed, &s.open), Some((&s.closed, &s.open)), exact);
    if let Some(path) = out {
        write(path, &to_json(&StructureDocument::from_structure(&deformed, Some(order))), report)?;
    }
    Ok(())
}

fn operad(name: OperadName) -> Operad {
    match name {
        OperadName::A => Operad::Planar,
        OperadName::L => Operad::NonPlanar,
        OperadName::Oc => Operad::OpenClosed,
    }
}

/// Canonical trees with exactly `leaves` leaves.
pub fn trees_with_leaves(operad: Operad, leaves: usize) -> Vec<Tree> {
    match operad {
        Operad::Planar => enumerate(operad, 0, leaves),
        Operad::NonPlanar => enumerate(operad, leaves, 0),
        Operad::OpenClosed => (0..=leaves).flat_map(|k| enumerate(operad, k, leaves - k)).collect(),
    }
}

pub fn cmd_trees(name: OperadName, leaves: usize, differential: bool, check_d2: bool, out: Option<&Path>, report: &mut Report) -> Result<()> {
    if leaves == 0 || leaves > LEAF_LIMIT {
        return Err(Error::Bound(format!("--leaves must be between 1 and {LEAF_LIMIT}")));
    }
    let operad = operad(name);
    report.bound("leaves", leaves);
    let trees = trees_with_leaves(operad, leaves);
    report.fact("trees", trees.len());
    if differential {
        for t in &trees {
            report.fact(format!("d {t}"), tree_differential(t).to_string());
        }
    }
    if check_d2 {
        let bad: Vec<String> = d_squared_failures(operad, leaves, Convention::Koszul).iter().map(ToString::to_string).collect();
        report.fact("d² = 0 trees checked", enumerate_up_to(operad, leaves).len());
        if !bad.is_empty() {
            report.fact("d² ≠ 0 on", bad);
            report.fail();
        }
    }
    if let Some(path) = out {
        let mut text = String::new();
        for t in &trees {
            let _ = writeln!(text, "# {t}\n{}\n", t.to_graph());
        }
        write(path, &text, report)?;
    }
    Ok(())
}

/// The JSON text of a bundled fixture.
pub fn fixture_document(name: FixtureName, bound: usize) -> Result<String> {
    let structure = |s: OchaStructure| to_json(&StructureDocument::from_structure(&s, None));
    Ok(match name {
        FixtureName::DualNumbers => structure(fixtures::dual_numbers(bound)?),
        FixtureName::CorruptedDualNumbers => structure(fixtures::corrupted_dual_numbers(bound)?),
        FixtureName::Massey => structure(fixtures::massey_algebra(bound)?),
        FixtureName::AbelianLie => structure(fixtures::abelian_lie().to_l_infinity(bound)?),
        FixtureName::ExactSquareLie => structure(fixtures::exact_square_lie().to_l_infinity(bound)?),
        FixtureName::ObstructedLie => structure(fixtures::obstructed_lie().to_l_infinity(bound)?),
        FixtureName::SmallDgLie => structure(fixtures::small_dg_lie().to_l_infinity(bound)?),
        FixtureName::Leibniz => structure(fixtures::leibniz_ocha(bound)?),
        FixtureName::ExtendedLeibniz => structure(fixtures::extended_leibniz_ocha(bound)?),
        FixtureName::Frobenius => {
            let (s, w) = fixtures::frobenius_ocha()?;
            to_json(&StructureDocument::from_structure(&s, None).with_pairing(&w, &s))
        }
        FixtureName::Empty => structure(OchaStructure::new(
            GradedSpace::empty(SectorTag::Closed),
            GradedSpace::empty(SectorTag::Open),
            bound,
        )),
    })
}
