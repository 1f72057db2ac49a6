//! Batch front-end: read a polyhedron file, run one command, emit a report.
//!
//! Reports are deterministic. The JSON form embeds the input polyhedron
//! under `"polyhedron"`, so a report can be fed back as `--input`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use crate::conemonoid::{Cone, FilteredElement, TermRecord};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, Field};
use crate::polyhedron::{DelzantPolyhedron, DelzantReport, PolyhedronSpec, SplittingReport};
use crate::presentation::{
    basis_independence_audit_seeded, classical_presentation_with, divisor_inverse_certificate, jacobian_freeness,
    kodaira_spencer_table, quantum_presentation_with, AuditReport, ClassicalReport, InverseCertificate, JacobianInput,
    JacobianReport, KsTable, PresentationOptions, QuantumReport, Ring,
};
use crate::srtop::{
    build_nerve, regular_sequence_check, reisner_cm_check, sphere_or_ball_profile, CmVerdict, RegularSequenceReport,
    SphereBallReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Classical,
    Quantum,
    Cm,
    Jacobian,
    Invert,
    Audit,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Classical => "classical",
            Command::Quantum => "quantum",
            Command::Cm => "cm",
            Command::Jacobian => "jacobian",
            Command::Invert => "invert",
            Command::Audit => "audit",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "toricqh", version, about = "Cohomology presentations and structural checks for Delzant polyhedra")]
pub struct RunConfig {
    /// polyhedron JSON, or a previous JSON report
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub command: Command,
    /// coefficient ring: z, q or fp:P
    #[arg(long, default_value = "z")]
    pub ring: String,
    /// height cutoff g for `jacobian`, as p/q
    #[arg(long)]
    pub cutoff: Option<String>,
    /// extra degrees verified beyond 2n
    #[arg(long, default_value_t = 0)]
    pub margin: usize,
    /// comma-separated B-field units, one per facet
    #[arg(long)]
    pub bfield: Option<String>,
    /// JSON array with one term list per facet
    #[arg(long)]
    pub perturb: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// seed for the random lattice change in `audit`
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            command,
            ring: "z".into(),
            cutoff: None,
            margin: 0,
            bfield: None,
            perturb: None,
            format: Format::Json,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::Parse(_) => "parse",
            Error::Property(_) | Error::Lattice(_) => "property",
            _ => "precondition",
        };
        ErrorRecord { kind: kind.into(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateResult {
    pub dim: usize,
    pub num_facets: usize,
    pub vertices: Vec<Vec<String>>,
    pub delzant: DelzantReport,
    pub splitting: SplittingReport,
    pub compact: bool,
    pub monotone: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantumResult {
    #[serde(flatten)]
    pub presentation: QuantumReport,
    pub associative: bool,
    pub ks: KsTable,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmResult {
    pub maximal_faces: Vec<Vec<usize>>,
    pub face_counts: Vec<usize>,
    pub reisner: Vec<CmVerdict>,
    pub sphere_or_ball: SphereBallReport,
    pub regular_sequence: Vec<RegularSequenceReport>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvertResult {
    pub certificates: Vec<InverseCertificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditResult {
    pub seed: u64,
    pub basis_independence: AuditReport,
    pub sphere_or_ball: bool,
    pub cohen_macaulay: bool,
    pub quantum_associative: Option<bool>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum CommandResult {
    Validate(ValidateResult),
    Classical(ClassicalReport),
    Quantum(Box<QuantumResult>),
    Cm(CmResult),
    Jacobian(JacobianReport),
    Invert(InvertResult),
    Audit(AuditResult),
}

impl CommandResult {
    /// A verified property that failed, mapped to exit code 4.
    fn failure(&self) -> Option<String> {
        match self {
            CommandResult::Validate(v) if v.delzant.has_vertex && !v.delzant.passed => {
                Some("polyhedron is not Delzant".into())
            }
            CommandResult::Cm(c) if !c.passed => Some("Cohen-Macaulay or regular-sequence check failed".into()),
            CommandResult::Jacobian(j) if !j.free => Some("Jacobian ring is not free at this cutoff".into()),
            CommandResult::Invert(i) if i.certificates.iter().any(|c| !c.verified) => {
                Some("an inverse certificate did not verify".into())
            }
            CommandResult::Audit(a) if !a.passed => Some("audit failed".into()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub ring: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polyhedron: Option<PolyhedronSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<CommandResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Report,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.report).expect("report serialises") + "\n",
            Format::Text => render_text(&self.report),
        }
    }
}

/// Accepts a bare polyhedron or a report carrying one under `"polyhedron"`.
pub fn parse_input(text: &str) -> Result<DelzantPolyhedron> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("input JSON: {e}")))?;
    let spec_value = match value.get("polyhedron") {
        Some(v) => v.clone(),
        None => value,
    };
    let spec: PolyhedronSpec =
        serde_json::from_value(spec_value).map_err(|e| Error::Parse(format!("polyhedron schema: {e}")))?;
    DelzantPolyhedron::from_spec(&spec)
}

pub fn parse_bfield(csv: &str) -> Result<Vec<BigRational>> {
    csv.split(',').map(parse_rational).collect()
}

/// One array of `{lambda, nu, coeff}` records per facet.
pub fn parse_perturbations(text: &str, cone: &Cone) -> Result<Vec<FilteredElement>> {
    let lists: Vec<Vec<TermRecord>> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("perturbation JSON: {e}")))?;
    lists.iter().map(|records| FilteredElement::from_records(records, cone)).collect()
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn run(config: &RunConfig) -> Outcome {
    let mut report = Report {
        command: config.command.name().into(),
        ring: config.ring.clone(),
        polyhedron: None,
        result: None,
        error: None,
    };
    let outcome = read(&config.input).and_then(|text| parse_input(&text)).and_then(|p| {
        report.polyhedron = Some(p.to_spec());
        let ring: Ring = config.ring.parse()?;
        report.ring = ring.to_string();
        dispatch(config, &p, ring)
    });
    let exit_code = match outcome {
        Ok(result) => {
            let code = match result.failure() {
                Some(message) => {
                    report.error = Some(ErrorRecord { kind: "property".into(), message });
                    4
                }
                None => 0,
            };
            report.result = Some(result);
            code
        }
        Err(e) => {
            report.error = Some(ErrorRecord::from(&e));
            e.exit_code()
        }
    };
    Outcome { exit_code, report }
}

fn dispatch(config: &RunConfig, p: &DelzantPolyhedron, ring: Ring) -> Result<CommandResult> {
    let rho = config.bfield.as_deref().map(parse_bfield).transpose()?;
    let opts = PresentationOptions { ring, margin: config.margin, rho: rho.clone(), basis: None };
    Ok(match config.command {
        Command::Validate => {
            p.require_vertex()?;
            CommandResult::Validate(ValidateResult {
                dim: p.dim(),
                num_facets: p.num_facets(),
                vertices: p.vertices().iter().map(|v| v.point.iter().map(format_rational).collect()).collect(),
                delzant: p.check_delzant(),
                splitting: p.check_vertex_and_splitting(),
                compact: p.is_compact(),
                monotone: p.is_monotone(),
            })
        }
        Command::Classical => CommandResult::Classical(classical_presentation_with(p, &opts)?.to_report()),
        Command::Quantum => {
            let q = quantum_presentation_with(p, &opts)?;
            CommandResult::Quantum(Box::new(QuantumResult {
                presentation: q.to_report(),
                associative: q.is_associative()?,
                ks: kodaira_spencer_table(&q)?,
            }))
        }
        Command::Cm => CommandResult::Cm(cm(p, ring)?),
        Command::Jacobian => {
            let cutoff = config
                .cutoff
                .as_deref()
                .ok_or_else(|| Error::Parse("jacobian needs --cutoff".into()))
                .and_then(parse_rational)?;
            let field = match ring {
                Ring::Integers => Field::Rationals,
                Ring::Field(f) => f,
            };
            let perturbations = match &config.perturb {
                Some(path) => parse_perturbations(&read(path)?, &Cone::new(p)?)?,
                None => Vec::new(),
            };
            CommandResult::Jacobian(jacobian_freeness(p, &JacobianInput { perturbations, rho, cutoff, field })?)
        }
        Command::Invert => CommandResult::Invert(InvertResult {
            certificates: (0..p.num_facets()).map(|j| divisor_inverse_certificate(p, j)).collect::<Result<_>>()?,
        }),
        Command::Audit => {
            let basis_independence = basis_independence_audit_seeded(p, config.seed)?;
            let sphere_or_ball = sphere_or_ball_profile(p)?.matches;
            let cohen_macaulay = cm(p, Ring::Integers)?.passed;
            let quantum_associative = match p.is_monotone() {
                true => Some(quantum_presentation_with(p, &PresentationOptions::default())?.is_associative()?),
                false => None,
            };
            let passed =
                basis_independence.passed && sphere_or_ball && cohen_macaulay && quantum_associative.unwrap_or(true);
            CommandResult::Audit(AuditResult {
                seed: config.seed,
                basis_independence,
                sphere_or_ball,
                cohen_macaulay,
                quantum_associative,
                passed,
            })
        }
    })
}

/// Reisner and regular-sequence checks over `Q` and `F_2`, or over the
/// selected field.
fn cm(p: &DelzantPolyhedron, ring: Ring) -> Result<CmResult> {
    let k = build_nerve(p)?;
    let fields = match ring {
        Ring::Integers => vec![Field::Rationals, Field::Prime(2)],
        Ring::Field(f) => vec![f],
    };
    let reisner = fields.iter().map(|&f| reisner_cm_check(&k, f)).collect::<Result<Vec<_>>>()?;
    let regular_sequence =
        fields.iter().map(|&f| regular_sequence_check(p, f, p.dim() + 2)).collect::<Result<Vec<_>>>()?;
    let sphere_or_ball = sphere_or_ball_profile(p)?;
    let passed = reisner.iter().all(|v| v.passed) && regular_sequence.iter().all(|r| r.passed) && sphere_or_ball.matches;
    Ok(CmResult {
        maximal_faces: k.maximal_labels(),
        face_counts: k.face_counts(),
        reisner,
        sphere_or_ball,
        regular_sequence,
        passed,
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_text(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command: {}", report.command);
    let _ = writeln!(s, "ring: {}", report.ring);
    if let Some(p) = &report.polyhedron {
        if let Some(name) = &p.name {
            let _ = writeln!(s, "polyhedron: {name}");
        }
        let _ = writeln!(s, "dim: {}, facets: {}", p.dim, p.facets.len());
    }
    match &report.result {
        Some(CommandResult::Validate(v)) => {
            let _ = writeln!(s, "vertices: {}", v.vertices.len());
            let _ = writeln!(s, "delzant: {}", yes(v.delzant.passed));
            for violation in &v.delzant.violations {
                let _ = writeln!(s, "  ({}) {}", violation.vertex.join(", "), violation.reason);
            }
            let _ = writeln!(s, "compact: {}", yes(v.compact));
            let _ = writeln!(s, "monotone: {}", yes(v.monotone));
        }
        Some(CommandResult::Classical(c)) => {
            write_relations(&mut s, &c.linear_relations);
            for face in &c.monomial_relations {
                let m: Vec<String> = face.iter().map(|j| format!("v{j}")).collect();
                let _ = writeln!(s, "monomial relation: {} = 0", m.join("*"));
            }
            write_basis(&mut s, c.basis.iter().map(|b| b.label.as_str()), &c.ranks);
            for e in &c.structure_constants {
                let _ = writeln!(s, "  {}", e.text);
            }
        }
        Some(CommandResult::Quantum(q)) => {
            let r = &q.presentation;
            write_relations(&mut s, &r.linear_relations);
            for sr in &r.sr_relations {
                let _ = writeln!(s, "quantum SR relation: {}", sr.text);
            }
            write_basis(&mut s, r.basis.iter().map(|b| b.label.as_str()), &r.classical_ranks);
            let _ = writeln!(s, "verified through degree {}", r.degree_bound);
            for e in &r.structure_constants {
                let _ = writeln!(s, "  {}", e.text);
            }
            let _ = writeln!(s, "associative: {}", yes(q.associative));
            for row in &q.ks.generators {
                let _ = writeln!(s, "ks: {} -> {}", row.source, row.text);
            }
        }
        Some(CommandResult::Cm(c)) => {
            let _ = writeln!(s, "face counts: {:?}", c.face_counts);
            for v in &c.reisner {
                let _ = writeln!(s, "Reisner over {}: {} ({} links)", v.field, yes(v.passed), v.links_checked);
            }
            let sb = &c.sphere_or_ball;
            let _ = writeln!(s, "homology matches {}: {}", sb.expected, yes(sb.matches));
            for r in &c.regular_sequence {
                let _ = writeln!(s, "regular sequence over {}: {} {:?}", r.field, yes(r.passed), r.quotient_dims);
            }
        }
        Some(CommandResult::Jacobian(j)) => {
            let _ = writeln!(s, "cutoff: {} over {}", j.cutoff, j.field);
            let _ = writeln!(s, "heights below cutoff: {}", j.heights.join(", "));
            let _ = writeln!(s, "dim A/J = {} (expected {})", j.dim_quotient, j.expected_dim);
            let _ = writeln!(s, "free: {}", yes(j.free));
            if let Some(w) = &j.witness {
                let _ = writeln!(s, "witness: {w}");
            }
            let _ = writeln!(s, "note: {}", j.note);
        }
        Some(CommandResult::Invert(i)) => {
            for c in &i.certificates {
                let _ = writeln!(s, "v{}: {} [{}]", c.facet, c.identity, if c.verified { "verified" } else { "FAILED" });
            }
        }
        Some(CommandResult::Audit(a)) => {
            let b = &a.basis_independence;
            let _ = writeln!(s, "seed: {}", a.seed);
            let _ = writeln!(s, "classical ranks/table invariant: {}/{}", yes(b.classical_ranks_match), yes(b.classical_table_match));
            if b.quantum_checked {
                let _ = writeln!(s, "quantum ranks/table invariant: {}/{}", yes(b.quantum_ranks_match), yes(b.quantum_table_match));
            }
            let _ = writeln!(s, "rank counts: {}", yes(b.total_rank_equals_vertices && b.degree_one_rank));
            let _ = writeln!(s, "sphere/ball: {}", yes(a.sphere_or_ball));
            let _ = writeln!(s, "Cohen-Macaulay: {}", yes(a.cohen_macaulay));
            if let Some(assoc) = a.quantum_associative {
                let _ = writeln!(s, "quantum associative: {}", yes(assoc));
            }
            let _ = writeln!(s, "passed: {}", yes(a.passed));
        }
        None => {}
    }
    if let Some(e) = &report.error {
        let _ = writeln!(s, "error ({}): {}", e.kind, e.message);
    }
    s
}

fn write_relations(s: &mut String, rows: &[Vec<i64>]) {
    for row in rows {
        let terms: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| match c {
                1 => format!("v{}", j + 1),
                -1 => format!("-v{}", j + 1),
                c => format!("{c}*v{}", j + 1),
            })
            .collect();
        let _ = writeln!(s, "linear relation: {} = 0", terms.join(" + ").replace("+ -", "- "));
    }
}

fn write_basis<'a>(s: &mut String, labels: impl Iterator<Item = &'a str>, ranks: &[usize]) {
    let labels: Vec<&str> = labels.collect();
    let _ = writeln!(s, "basis: {}", labels.join(", "));
    let _ = writeln!(s, "ranks by degree: {ranks:?}");
}
