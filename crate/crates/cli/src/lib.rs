//! The `gma` command-line tool: reads algebra and context documents, computes
//! derivation spaces, normal forms and splittings, and reports verdicts.
//!
//! Exit codes: 0 when the computation finished and every checked claim held
//! (or its hypotheses were not met), 1 when a claim was falsified, 2 on
//! input or usage errors.

pub mod document;
pub mod report;

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use gma_core::gallery::{self, GalleryError};
use gma_core::structure::classify;
use gma_core::{
    antiderivation_space, build_gma, certify_jordan_splitting, certify_no_antiderivations, decompose_jordan,
    derivation_space, extract_jordan_components, jordan_derivation_space, verify_conditions, Certificate,
    CharacteristicClass, FieldSpec, FormConditions, GeneralizedMatrixAlgebra, GmaError, LinearMap, MapSubspace,
    ModuleName, MoritaContext, Side, StructureAlgebra, StructureError, Verdict, Which,
};
use thiserror::Error;

pub use document::{parse_document, write_document, Document, ParseError, Subject};
pub use report::{Format, MapEntry, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Input(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SpaceKind {
    Der,
    Jder,
    Ader,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormProp {
    #[value(name = "3.1")]
    Derivation,
    #[value(name = "3.2")]
    Jordan,
    #[value(name = "3.3")]
    JordanFaithful,
    #[value(name = "3.6")]
    Antiderivation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CertifyProp {
    #[value(name = "3.10")]
    NoAntiderivations,
    #[value(name = "3.11")]
    JordanSplitting,
}

#[derive(Debug, Parser)]
#[command(name = "gma", version, about = "Derivations, Jordan derivations and antiderivations of generalized matrix algebras")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a Morita context and assemble its algebra.
    CheckContext {
        /// Input document; `-` or omitted reads standard input.
        file: Option<String>,
    },
    /// Write the assembled algebra of a context as an algebra document.
    BuildGma {
        file: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Dimension (and optionally a basis) of a space of maps.
    Solve {
        file: Option<String>,
        #[arg(long, value_enum)]
        kind: SpaceKind,
        #[arg(long)]
        basis: bool,
    },
    /// Normal form of a map and the conditions of one family.
    Canonical {
        file: Option<String>,
        #[arg(long)]
        map: String,
        #[arg(long, value_enum)]
        prop: FormProp,
    },
    /// Split a Jordan derivation into a derivation and an antiderivation.
    Decompose {
        file: Option<String>,
        #[arg(long)]
        map: String,
    },
    /// Check a structural claim on a context.
    Certify {
        file: Option<String>,
        #[arg(long, value_enum)]
        prop: CertifyProp,
    },
    /// Emit a built-in example as a document.
    Gallery {
        name: String,
        /// Parameters as key=value; repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        out: Option<String>,
    },
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &CliError) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Runs the tool on `args` (including the program name). Standard input is
/// read only when a command needs it.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let echo = args.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Machine => Format::Machine,
    };
    let ctx = Ctx { echo, format, stdin };
    match ctx.dispatch(cli.command) {
        Ok(out) => out,
        Err(e) => Outcome::error(&e),
    }
}

struct Ctx<'a> {
    echo: String,
    format: Format,
    stdin: &'a mut dyn Read,
}

fn exit_code(verdict: &Verdict) -> i32 {
    match verdict {
        Verdict::Falsified(_) => 1,
        _ => 0,
    }
}

impl Ctx<'_> {
    fn dispatch(mut self, command: Command) -> Result<Outcome, CliError> {
        match command {
            Command::CheckContext { file } => self.check_context(file),
            Command::BuildGma { file, out } => self.build(file, out),
            Command::Solve { file, kind, basis } => self.solve(file, kind, basis),
            Command::Canonical { file, map, prop } => self.canonical(file, &map, prop),
            Command::Decompose { file, map } => self.decompose(file, &map),
            Command::Certify { file, prop } => self.certify(file, prop),
            Command::Gallery { name, params, out } => self.gallery(&name, &params, out),
        }
    }

    fn report(&self, verdict: &str) -> Report {
        Report::new(self.echo.clone(), verdict)
    }

    fn emit(&self, code: i32, report: &Report) -> Outcome {
        Outcome {
            code,
            stdout: report.render(self.format),
            stderr: String::new(),
        }
    }

    fn load(&mut self, file: Option<String>) -> Result<Document, CliError> {
        let (path, text) = match file.as_deref() {
            None | Some("-") => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s).map_err(|e| CliError::Io {
                    path: "<stdin>".into(),
                    message: e.to_string(),
                })?;
                ("<stdin>".to_string(), s)
            }
            Some(p) => {
                let s = std::fs::read_to_string(p).map_err(|e| CliError::Io {
                    path: p.into(),
                    message: e.to_string(),
                })?;
                (p.to_string(), s)
            }
        };
        parse_document(&text).map_err(|source| CliError::Parse { path, source })
    }

    fn load_gma(&mut self, file: Option<String>) -> Result<(Document, GeneralizedMatrixAlgebra), CliError> {
        let doc = self.load(file)?;
        let g = match &doc.subject {
            Subject::Context(ctx) => gma_of(ctx)?,
            Subject::Algebra { .. } => {
                return Err(CliError::Input(
                    "this command needs a Morita context (algebras A and B, bimodules M and N)".into(),
                ))
            }
        };
        Ok((doc, g))
    }

    fn lookup_map(doc: &Document, name: &str, dim: usize) -> Result<LinearMap, CliError> {
        let f = doc.map(name).ok_or_else(|| {
            let known: Vec<_> = doc.maps.iter().map(|(n, _)| n.as_str()).collect();
            CliError::Input(format!("no map named `{name}` (document has: {})", known.join(", ")))
        })?;
        if f.dim() != dim {
            return Err(CliError::Input(format!(
                "map `{name}` has dimension {}, the algebra has dimension {dim}",
                f.dim()
            )));
        }
        Ok(f.clone())
    }

    fn check_context(&mut self, file: Option<String>) -> Result<Outcome, CliError> {
        let doc = self.load(file)?;
        let Subject::Context(ctx) = &doc.subject else {
            return Err(CliError::Input("the document describes a single algebra, not a context".into()));
        };
        let mut r = self.report("valid");
        r.field = Some(doc.field.to_string());
        r.dimension("A", ctx.a().dim())
            .dimension("B", ctx.b().dim())
            .dimension("M", ctx.m().dim())
            .dimension("N", ctx.n().dim());
        let validation = ctx.validate();
        if !validation.is_valid() {
            r.verdict = "invalid".into();
            r.reason = Some(format!("{} identities fail", validation.violations.len()));
            r.violations = validation.violations.iter().map(Into::into).collect();
            return Ok(self.emit(2, &r));
        }
        match build_gma(ctx) {
            Ok(g) => {
                r.dimension("gma", g.dim());
            }
            Err(e) => {
                r.verdict = "invalid".into();
                r.reason = Some(e.to_string());
                return Ok(self.emit(2, &r));
            }
        }
        r.fact("phi-zero", ctx.phi().is_zero())
            .fact("psi-zero", ctx.psi().is_zero())
            .fact("phi-nondegenerate", ctx.is_nondegenerate(Which::Phi))
            .fact("psi-nondegenerate", ctx.is_nondegenerate(Which::Psi))
            .fact("m-faithful-left", ctx.is_faithful(ModuleName::M, Side::Left))
            .fact("m-faithful-right", ctx.is_faithful(ModuleName::M, Side::Right));
        Ok(self.emit(0, &r))
    }

    fn build(&mut self, file: Option<String>, out: Option<String>) -> Result<Outcome, CliError> {
        let (doc, g) = self.load_gma(file)?;
        let built = Document {
            field: doc.field,
            subject: Subject::Algebra {
                name: "G".into(),
                algebra: g.algebra().clone(),
            },
            maps: doc.maps.clone(),
        };
        self.write_or_print(&built, out, g.dim())
    }

    fn write_or_print(&self, doc: &Document, out: Option<String>, dim: usize) -> Result<Outcome, CliError> {
        let text = write_document(doc);
        match out {
            None => Ok(Outcome::ok(text)),
            Some(path) => {
                std::fs::write(&path, text).map_err(|e| CliError::Io {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                let mut r = self.report("written");
                r.reason = Some(format!("wrote {path}"));
                r.dimension("algebra", dim);
                Ok(self.emit(0, &r))
            }
        }
    }

    fn solve(&mut self, file: Option<String>, kind: SpaceKind, basis: bool) -> Result<Outcome, CliError> {
        let doc = self.load(file)?;
        let alg = subject_algebra(&doc)?;
        let (key, space): (&str, MapSubspace) = match kind {
            SpaceKind::Der => ("der", derivation_space(&alg)),
            SpaceKind::Jder => ("jder", jordan_derivation_space(&alg)),
            SpaceKind::Ader => ("ader", antiderivation_space(&alg)),
        };
        let mut r = self.report("ok");
        r.field = Some(doc.field.to_string());
        r.dimension("algebra", alg.dim()).dimension(key, space.dimension());
        if basis {
            r.basis = Some(space.basis().iter().map(MapEntry::from_map).collect());
        }
        Ok(self.emit(0, &r))
    }

    fn canonical(&mut self, file: Option<String>, map: &str, prop: FormProp) -> Result<Outcome, CliError> {
        let (doc, g) = self.load_gma(file)?;
        let f = Self::lookup_map(&doc, map, g.dim())?;
        let family = match prop {
            FormProp::Derivation => FormConditions::Derivation,
            FormProp::Jordan => FormConditions::Jordan,
            FormProp::JordanFaithful => FormConditions::JordanFaithful,
            FormProp::Antiderivation => FormConditions::Antiderivation,
        };
        let mut r = self.report("certified");
        r.field = Some(doc.field.to_string());
        let faithful = g.context().m_is_faithful();
        let gate = match family {
            FormConditions::JordanFaithful if CharacteristicClass::of(g.field()) == CharacteristicClass::Two => {
                Some("characteristic 2")
            }
            FormConditions::JordanFaithful | FormConditions::Antiderivation if !faithful => {
                Some("M is not faithful on both sides")
            }
            _ => None,
        };
        if let Some(reason) = gate {
            r.verdict = Verdict::NotApplicable(String::new()).name().into();
            r.reason = Some(reason.into());
            return Ok(self.emit(0, &r));
        }
        let (is_der, is_jordan, is_anti) = classify(&g, &f).map_err(structure_input)?;
        r.fact("derivation", is_der)
            .fact("jordan-derivation", is_jordan)
            .fact("antiderivation", is_anti);
        if !is_jordan {
            return Err(CliError::Input(format!("map `{map}` is not a Jordan derivation")));
        }
        let form = extract_jordan_components(&g, &f).map_err(structure_input)?;
        let conditions = verify_conditions(&g, &form, family).map_err(structure_input)?;
        let expected = match family {
            FormConditions::Derivation => is_der,
            FormConditions::Jordan | FormConditions::JordanFaithful => is_jordan,
            FormConditions::Antiderivation => is_anti,
        };
        r.fact("conditions-hold", conditions.holds());
        r.conditions = conditions.conditions.iter().map(Into::into).collect();
        r.maps.insert("m0".into(), MapEntry::from_vector(&form.m0));
        r.maps.insert("n0".into(), MapEntry::from_vector(&form.n0));
        for (name, m) in form.maps() {
            r.maps.insert(name.into(), MapEntry::from_matrix(m));
        }
        if expected != conditions.holds() {
            r.verdict = "FALSIFIED".into();
            r.reason = Some(format!(
                "the {family} conditions {} but the map {} one",
                if conditions.holds() { "hold" } else { "fail" },
                if expected { "is" } else { "is not" }
            ));
            return Ok(self.emit(1, &r));
        }
        Ok(self.emit(0, &r))
    }

    fn decompose(&mut self, file: Option<String>, map: &str) -> Result<Outcome, CliError> {
        let (doc, g) = self.load_gma(file)?;
        let f = Self::lookup_map(&doc, map, g.dim())?;
        let mut r = self.report("certified");
        r.field = Some(doc.field.to_string());
        match decompose_jordan(&g, &f) {
            Ok(parts) => {
                r.maps.insert("derivation".into(), MapEntry::from_map(&parts.derivation));
                r.maps.insert("antiderivation".into(), MapEntry::from_map(&parts.antiderivation));
                let named = |part: &LinearMap| {
                    doc.maps
                        .iter()
                        .find(|(n, m)| n != map && m == part)
                        .map(|(n, _)| n.clone())
                };
                r.reason = match (named(&parts.derivation), named(&parts.antiderivation)) {
                    (Some(d), Some(a)) => Some(format!("parts equal `{d}` and `{a}`")),
                    (Some(d), None) => Some(format!("derivation part equals `{d}`")),
                    (None, Some(a)) => Some(format!("antiderivation part equals `{a}`")),
                    (None, None) => None,
                };
                Ok(self.emit(0, &r))
            }
            Err(StructureError::Inconsistent(msg)) => {
                r.verdict = "FALSIFIED".into();
                r.reason = Some(msg);
                Ok(self.emit(1, &r))
            }
            Err(e @ (StructureError::NonzeroPairing { .. }
            | StructureError::CharacteristicTwo
            | StructureError::NotFaithful(_))) => {
                r.verdict = "not-applicable".into();
                r.reason = Some(e.to_string());
                Ok(self.emit(0, &r))
            }
            Err(e) => Err(structure_input(e)),
        }
    }

    fn certify(&mut self, file: Option<String>, prop: CertifyProp) -> Result<Outcome, CliError> {
        let (doc, g) = self.load_gma(file)?;
        let cert: Certificate = match prop {
            CertifyProp::NoAntiderivations => certify_no_antiderivations(&g),
            CertifyProp::JordanSplitting => certify_jordan_splitting(&g),
        };
        let mut r = self.report(cert.verdict.name());
        r.field = Some(doc.field.to_string());
        r.reason = cert.verdict.reason().map(str::to_string);
        for (k, v) in &cert.dimensions {
            r.dimension(k, *v);
        }
        Ok(self.emit(exit_code(&cert.verdict), &r))
    }

    fn gallery(&self, name: &str, params: &[String], out: Option<String>) -> Result<Outcome, CliError> {
        let params = Params::parse(params)?;
        let doc = gallery_document(name, &params)?;
        let dim = match &doc.subject {
            Subject::Context(ctx) => ctx.a().dim() + ctx.b().dim() + ctx.m().dim() + ctx.n().dim(),
            Subject::Algebra { algebra, .. } => algebra.dim(),
        };
        self.write_or_print(&doc, out, dim)
    }
}

fn structure_input(e: StructureError) -> CliError {
    CliError::Input(e.to_string())
}

fn gma_of(ctx: &MoritaContext) -> Result<GeneralizedMatrixAlgebra, CliError> {
    build_gma(ctx).map_err(|e| match e {
        GmaError::InvalidContext(report) => {
            let codes: Vec<_> = report.violations.iter().map(|v| v.identity.code()).collect();
            CliError::Input(format!("invalid Morita context: {} fails", codes.join(", ")))
        }
        other => CliError::Input(other.to_string()),
    })
}

fn subject_algebra(doc: &Document) -> Result<StructureAlgebra, CliError> {
    match &doc.subject {
        Subject::Algebra { algebra, .. } => Ok(algebra.clone()),
        Subject::Context(ctx) => Ok(gma_of(ctx)?.into_algebra()),
    }
}

struct Params(Vec<(String, String)>);

impl Params {
    fn parse(raw: &[String]) -> Result<Self, CliError> {
        raw.iter()
            .map(|p| {
                p.split_once('=')
                    .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                    .ok_or_else(|| CliError::Usage(format!("parameter `{p}` is not of the form key=value")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Params)
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        for (k, _) in &self.0 {
            if !allowed.contains(&k.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown parameter `{k}` (accepted: {})",
                    if allowed.is_empty() { "none".to_string() } else { allowed.join(", ") }
                )));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn field(&self) -> Result<FieldSpec, CliError> {
        match self.get("field") {
            None => Ok(FieldSpec::Rational),
            Some(v) => v.parse().map_err(CliError::Usage),
        }
    }
}

/// The fixtures `gallery` knows, with their accepted parameters.
pub const GALLERY: &[(&str, &[&str])] = &[
    ("trivial-q", &[]),
    ("trivial", &["field"]),
    ("s-deformed", &["field", "s"]),
    ("upper-triangular", &["field", "n"]),
    ("c2-swap", &["field"]),
    ("trivial-group", &["field"]),
];

fn gallery_error(e: GalleryError) -> CliError {
    CliError::Usage(e.to_string())
}

fn gallery_document(name: &str, params: &Params) -> Result<Document, CliError> {
    let allowed = GALLERY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, a)| *a)
        .ok_or_else(|| {
            let names: Vec<_> = GALLERY.iter().map(|(n, _)| *n).collect();
            CliError::Usage(format!("unknown gallery entry `{name}` (available: {})", names.join(", ")))
        })?;
    params.check_keys(allowed)?;
    let field = params.field()?;
    let (ctx, with_maps) = match name {
        "trivial-q" | "trivial" => {
            let k = gallery::ground_field(field);
            let m = gallery::regular_bimodule(&k);
            (gallery::trivial_gma(k.clone(), k, m.clone(), m).map_err(gallery_error)?, true)
        }
        "s-deformed" => {
            let s = match params.get("s") {
                None => field.one(),
                Some(v) => field
                    .parse_scalar(v)
                    .map_err(|e| CliError::Usage(format!("bad value for s: {e}")))?,
            };
            (gallery::s_deformed_m2(field, &s).map_err(gallery_error)?, true)
        }
        "upper-triangular" => {
            let n = match params.get("n") {
                None => 2,
                Some(v) => v
                    .parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("bad value for n: `{v}`")))?,
            };
            (gallery::upper_triangular_context(n, field).map_err(gallery_error)?, false)
        }
        "c2-swap" | "trivial-group" => {
            let (alg, action) = if name == "c2-swap" {
                gallery::c2_swap(field)
            } else {
                gallery::trivial_group(field)
            }
            .map_err(gallery_error)?;
            (gallery::skew_group_context(&alg, &action).map_err(gallery_error)?, false)
        }
        _ => unreachable!("names come from the gallery table"),
    };
    let mut maps = Vec::new();
    if with_maps {
        let g = gma_of(&ctx)?;
        maps.push(("gamma-jord".to_string(), gallery::gamma_jord(&g).map_err(gallery_error)?));
        maps.push(("theta1".to_string(), gallery::theta1(&g).map_err(gallery_error)?));
        maps.push(("theta2".to_string(), gallery::theta2(&g).map_err(gallery_error)?));
    }
    Ok(Document {
        field,
        subject: Subject::Context(Box::new(ctx)),
        maps,
    })
}
