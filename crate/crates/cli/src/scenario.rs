//! Scenario files: a flat, line-oriented `key = value` format with
//! bracketed section headers, `#` comments, and quoted expression lists.
//!
//! ```text
//! [scenario]
//! name = compact_orbit
//!
//! [space]
//! model = finite
//! points = 6
//!
//! [lattice]
//! dimension = 2
//! norm = sup
//!
//! [phi]
//! entries = "i*x", "-x"
//!
//! [analyses]
//! list = norm, spectrum
//!
//! [spectrum]
//! lambda = "i", "-1"
//! ```

use std::fmt::Write as _;
use std::path::Path;

use mulsemi::dsl::{parse, ParseError, PhiSpec};
use mulsemi::lattice::NormSpec;
use mulsemi::mulop::{default_domain_tol, default_pole_tol, default_threshold};
use mulsemi::semigroup::default_h_seq;
use mulsemi::space::SpaceModel;
use mulsemi::C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: {source}")]
    Expr {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("{message}")]
    Invalid { message: String },
}

fn line_err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Line {
        line,
        message: message.into(),
    }
}

fn invalid(message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        message: message.into(),
    }
}

/// One requested analysis with its (resolved) parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Analysis {
    Norm,
    Invert {
        tol: f64,
    },
    /// Explicit list of probe points, given as constant expressions.
    Spectrum {
        lambdas: Vec<String>,
        threshold: f64,
        pole_tol: f64,
    },
    Evolve {
        t_grid: Vec<f64>,
    },
    Continuity {
        t_grid: Vec<f64>,
    },
    Generator {
        h_seq: Vec<f64>,
    },
    T0 {
        t0: f64,
    },
    Recover {
        h_seq: Vec<f64>,
    },
}

impl Analysis {
    pub fn name(&self) -> &'static str {
        match self {
            Analysis::Norm => "norm",
            Analysis::Invert { .. } => "invert",
            Analysis::Spectrum { .. } => "spectrum",
            Analysis::Evolve { .. } => "evolve",
            Analysis::Continuity { .. } => "continuity",
            Analysis::Generator { .. } => "generator",
            Analysis::T0 { .. } => "t0",
            Analysis::Recover { .. } => "recover",
        }
    }

    fn needs_section(&self) -> bool {
        matches!(
            self,
            Analysis::Evolve { .. } | Analysis::Continuity { .. } | Analysis::Generator { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub format: OutputFormat,
    pub path: Option<String>,
}

/// A fully validated scenario: everything the runner needs, pre-parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Vanishing tolerance used by domain checks.
    pub domain_tolerance: f64,
    pub space: SpaceModel<f64>,
    pub dimension: usize,
    pub norm_spec: NormSpec<f64>,
    pub phi: PhiSpec<f64>,
    /// Section expressions, one per coordinate.
    pub section: Option<Vec<String>>,
    pub analyses: Vec<Analysis>,
    pub output: Option<OutputSpec>,
}

// ---------------------------------------------------------------- raw layer

#[derive(Debug)]
enum RawValue {
    Empty,
    Scalars(Vec<String>),
    Quoted(Vec<String>),
}

#[derive(Debug)]
struct RawEntry {
    line: usize,
    key: String,
    value: RawValue,
}

#[derive(Debug)]
struct RawSection {
    line: usize,
    name: String,
    entries: Vec<RawEntry>,
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (idx, ch) in line.char_indices() {
        match ch {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..idx],
            _ => {}
        }
    }
    line
}

fn parse_value(line: usize, text: &str) -> Result<RawValue, ConfigError> {
    if text.is_empty() {
        return Ok(RawValue::Empty);
    }
    if text.contains('"') {
        let mut items = Vec::new();
        let mut rest = text;
        loop {
            rest = rest.trim_start();
            let Some(stripped) = rest.strip_prefix('"') else {
                return Err(line_err(line, "expected a quoted value"));
            };
            let Some(end) = stripped.find('"') else {
                return Err(line_err(line, "unterminated quote"));
            };
            items.push(stripped[..end].to_string());
            rest = stripped[end + 1..].trim_start();
            if rest.is_empty() {
                break;
            }
            let Some(after) = rest.strip_prefix(',') else {
                return Err(line_err(line, "expected `,` between quoted values"));
            };
            if after.trim().is_empty() {
                return Err(line_err(line, "trailing comma"));
            }
            rest = after;
        }
        Ok(RawValue::Quoted(items))
    } else {
        let items: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
        if items.iter().any(String::is_empty) {
            return Err(line_err(line, "empty item in list"));
        }
        Ok(RawValue::Scalars(items))
    }
}

fn parse_raw(text: &str) -> Result<Vec<RawSection>, ConfigError> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw_line).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(line_err(line_no, "unterminated `[section]` header"));
            };
            let name = name.trim();
            if name.is_empty() {
                return Err(line_err(line_no, "empty section name"));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(line_err(line_no, format!("duplicate section `[{name}]`")));
            }
            sections.push(RawSection {
                line: line_no,
                name: name.to_string(),
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(line_err(
                line_no,
                "expected `key = value` or a `[section]` header",
            ));
        };
        let key = line[..eq].trim().to_string();
        if key.is_empty() {
            return Err(line_err(line_no, "missing key before `=`"));
        }
        let value = parse_value(line_no, line[eq + 1..].trim())?;
        let Some(section) = sections.last_mut() else {
            return Err(line_err(line_no, "key outside of any `[section]`"));
        };
        if section.entries.iter().any(|e| e.key == key) {
            return Err(line_err(line_no, format!("duplicate key `{key}`")));
        }
        section.entries.push(RawEntry {
            line: line_no,
            key,
            value,
        });
    }
    Ok(sections)
}

// -------------------------------------------------------------- typed layer

struct SectionView<'a> {
    section: &'a RawSection,
    used: Vec<bool>,
}

impl<'a> SectionView<'a> {
    fn new(section: &'a RawSection) -> Self {
        let used = vec![false; section.entries.len()];
        SectionView { section, used }
    }

    fn take(&mut self, key: &str) -> Option<&'a RawEntry> {
        for (i, e) in self.section.entries.iter().enumerate() {
            if e.key == key {
                self.used[i] = true;
                return Some(e);
            }
        }
        None
    }

    fn require(&mut self, key: &str) -> Result<&'a RawEntry, ConfigError> {
        let (name, line) = (self.section.name.clone(), self.section.line);
        self.take(key)
            .ok_or_else(|| line_err(line, format!("[{name}] is missing `{key}`")))
    }

    fn finish(self) -> Result<(), ConfigError> {
        for (i, e) in self.section.entries.iter().enumerate() {
            if !self.used[i] {
                return Err(line_err(
                    e.line,
                    format!("unknown key `{}` in [{}]", e.key, self.section.name),
                ));
            }
        }
        Ok(())
    }
}

fn scalar<'a>(entry: &'a RawEntry) -> Result<&'a str, ConfigError> {
    match &entry.value {
        RawValue::Scalars(items) if items.len() == 1 => Ok(&items[0]),
        _ => Err(line_err(
            entry.line,
            format!("`{}` expects a single value", entry.key),
        )),
    }
}

fn parse_f64(entry: &RawEntry) -> Result<f64, ConfigError> {
    let s = scalar(entry)?;
    let v: f64 = s
        .parse()
        .map_err(|_| line_err(entry.line, format!("`{}` is not a number", s)))?;
    if !v.is_finite() {
        return Err(line_err(entry.line, "value must be finite"));
    }
    Ok(v)
}

fn parse_usize(entry: &RawEntry) -> Result<usize, ConfigError> {
    let s = scalar(entry)?;
    s.parse()
        .map_err(|_| line_err(entry.line, format!("`{}` is not a whole number", s)))
}

fn parse_bool(entry: &RawEntry) -> Result<bool, ConfigError> {
    match scalar(entry)? {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(line_err(
            entry.line,
            format!("`{other}` is not `true` or `false`"),
        )),
    }
}

fn f64_list(entry: &RawEntry) -> Result<Vec<f64>, ConfigError> {
    let items = match &entry.value {
        RawValue::Scalars(items) => items,
        RawValue::Empty => return Ok(Vec::new()),
        RawValue::Quoted(_) => {
            return Err(line_err(
                entry.line,
                format!("`{}` expects unquoted numbers", entry.key),
            ))
        }
    };
    items
        .iter()
        .map(|s| {
            let v: f64 = s
                .parse()
                .map_err(|_| line_err(entry.line, format!("`{s}` is not a number")))?;
            if !v.is_finite() {
                return Err(line_err(entry.line, "values must be finite"));
            }
            Ok(v)
        })
        .collect()
}

fn quoted_list(entry: &RawEntry) -> Result<Vec<String>, ConfigError> {
    match &entry.value {
        RawValue::Quoted(items) => Ok(items.clone()),
        _ => Err(line_err(
            entry.line,
            format!("`{}` expects quoted expressions", entry.key),
        )),
    }
}

// ------------------------------------------------------------------ loading

const ANALYSIS_NAMES: [&str; 8] = [
    "norm",
    "invert",
    "spectrum",
    "evolve",
    "continuity",
    "generator",
    "t0",
    "recover",
];

pub fn load_scenario(text: &str) -> Result<Scenario, ConfigError> {
    let sections = parse_raw(text)?;
    let find = |name: &str| sections.iter().find(|s| s.name == name);

    for s in &sections {
        let known = ["scenario", "space", "lattice", "phi", "section", "analyses", "output"];
        if !known.contains(&s.name.as_str()) && !ANALYSIS_NAMES.contains(&s.name.as_str()) {
            return Err(line_err(s.line, format!("unknown section `[{}]`", s.name)));
        }
    }

    // [scenario]
    let (name, domain_tolerance) = match find("scenario") {
        Some(raw) => {
            let mut view = SectionView::new(raw);
            let name = match view.take("name") {
                Some(e) => scalar(e)?.to_string(),
                None => "scenario".to_string(),
            };
            let tol = match view.take("domain_tolerance") {
                Some(e) => {
                    let v = parse_f64(e)?;
                    if v <= 0.0 {
                        return Err(line_err(e.line, "domain_tolerance must be positive"));
                    }
                    v
                }
                None => default_domain_tol::<f64>(),
            };
            view.finish()?;
            (name, tol)
        }
        None => ("scenario".to_string(), default_domain_tol::<f64>()),
    };

    // [space]
    let raw_space = find("space").ok_or_else(|| invalid("missing [space] section"))?;
    let mut view = SectionView::new(raw_space);
    let model_entry = view.require("model")?;
    let space = match scalar(model_entry)? {
        "finite" => {
            let points = parse_usize(view.require("points")?)?;
            SpaceModel::finite(points)
                .map_err(|e| line_err(raw_space.line, e.to_string()))?
        }
        "truncated_naturals" => {
            let n = parse_usize(view.require("n")?)?;
            let unbounded = match view.take("unbounded") {
                Some(e) => parse_bool(e)?,
                None => true,
            };
            if n == 0 {
                return Err(line_err(raw_space.line, "n must be at least 1"));
            }
            SpaceModel::TruncatedNaturals { n, unbounded }
        }
        "interval_grid" => {
            let a = parse_f64(view.require("a")?)?;
            let b = parse_f64(view.require("b")?)?;
            let step = parse_f64(view.require("step")?)?;
            let unbounded = match view.take("unbounded") {
                Some(e) => parse_bool(e)?,
                None => true,
            };
            SpaceModel::interval_grid(a, b, step, unbounded)
                .map_err(|e| line_err(raw_space.line, e.to_string()))?
        }
        other => {
            return Err(line_err(
                model_entry.line,
                format!("unknown space model `{other}`"),
            ))
        }
    };
    view.finish()?;

    // [lattice]
    let raw_lattice = find("lattice").ok_or_else(|| invalid("missing [lattice] section"))?;
    let mut view = SectionView::new(raw_lattice);
    let dimension = parse_usize(view.require("dimension")?)?;
    if dimension == 0 {
        return Err(line_err(raw_lattice.line, "dimension must be at least 1"));
    }
    let norm_entry = view.require("norm")?;
    let norm_spec = match scalar(norm_entry)? {
        "sup" => NormSpec::sup(),
        "p" => {
            let p = parse_f64(view.require("p")?)?;
            NormSpec::p(p).map_err(|e| line_err(norm_entry.line, e.to_string()))?
        }
        "weighted_sup" => {
            let weights_entry = view.require("weights")?;
            let weights = f64_list(weights_entry)?;
            if weights.len() != dimension {
                return Err(line_err(
                    weights_entry.line,
                    format!("expected {dimension} weights, got {}", weights.len()),
                ));
            }
            NormSpec::weighted_sup(weights)
                .map_err(|e| line_err(weights_entry.line, e.to_string()))?
        }
        other => {
            return Err(line_err(
                norm_entry.line,
                format!("unknown norm `{other}` (expected sup, p or weighted_sup)"),
            ))
        }
    };
    view.finish()?;

    // [phi]
    let raw_phi = find("phi").ok_or_else(|| invalid("missing [phi] section"))?;
    let mut view = SectionView::new(raw_phi);
    let entries_entry = view.require("entries")?;
    let phi_entries = quoted_list(entries_entry)?;
    if phi_entries.len() != dimension {
        return Err(line_err(
            entries_entry.line,
            format!(
                "expected {dimension} phi entries, got {}",
                phi_entries.len()
            ),
        ));
    }
    let phi =
        PhiSpec::new(phi_entries).map_err(|e| line_err(entries_entry.line, e.to_string()))?;
    view.finish()?;

    // [section]
    let section = match find("section") {
        Some(raw) => {
            let mut view = SectionView::new(raw);
            let entry = view.require("entries")?;
            let entries = quoted_list(entry)?;
            if entries.len() != dimension {
                return Err(line_err(
                    entry.line,
                    format!("expected {dimension} section entries, got {}", entries.len()),
                ));
            }
            for text in &entries {
                parse::<f64>(text).map_err(|e| ConfigError::Expr {
                    line: entry.line,
                    source: e,
                })?;
            }
            view.finish()?;
            Some(entries)
        }
        None => None,
    };

    // [analyses]
    let requested: Vec<(usize, String)> = match find("analyses") {
        Some(raw) => {
            let mut view = SectionView::new(raw);
            let out = match view.take("list") {
                Some(entry) => match &entry.value {
                    RawValue::Empty => Vec::new(),
                    RawValue::Scalars(items) => items
                        .iter()
                        .map(|s| (entry.line, s.clone()))
                        .collect(),
                    RawValue::Quoted(_) => {
                        return Err(line_err(entry.line, "`list` expects bare names"))
                    }
                },
                None => Vec::new(),
            };
            view.finish()?;
            out
        }
        None => Vec::new(),
    };
    for (line, name) in &requested {
        if !ANALYSIS_NAMES.contains(&name.as_str()) {
            return Err(line_err(*line, format!("unknown analysis `{name}`")));
        }
    }
    for (i, (line, name)) in requested.iter().enumerate() {
        if requested[..i].iter().any(|(_, m)| m == name) {
            return Err(line_err(*line, format!("analysis `{name}` listed twice")));
        }
    }

    // Per-analysis parameter sections only make sense for requested analyses.
    for s in &sections {
        if ANALYSIS_NAMES.contains(&s.name.as_str())
            && !requested.iter().any(|(_, n)| *n == s.name)
        {
            return Err(line_err(
                s.line,
                format!("[{}] configures an analysis that is not listed", s.name),
            ));
        }
    }

    let mut analyses = Vec::with_capacity(requested.len());
    for (_, name) in &requested {
        let analysis = build_analysis(name, find(name))?;
        analyses.push(analysis);
    }

    // [output]
    let output = match find("output") {
        Some(raw) => {
            let mut view = SectionView::new(raw);
            let fmt_entry = view.require("format")?;
            let format = match scalar(fmt_entry)? {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                other => {
                    return Err(line_err(
                        fmt_entry.line,
                        format!("unknown format `{other}` (expected csv or json)"),
                    ))
                }
            };
            let path = view.take("path").map(scalar).transpose()?.map(String::from);
            view.finish()?;
            Some(OutputSpec { format, path })
        }
        None => None,
    };

    let scenario = Scenario {
        name,
        domain_tolerance,
        space,
        dimension,
        norm_spec,
        phi,
        section,
        analyses,
        output,
    };
    validate(&scenario)?;
    Ok(scenario)
}

fn take_opt<'a>(view: &mut Option<SectionView<'a>>, key: &str) -> Option<&'a RawEntry> {
    view.as_mut().and_then(|v| v.take(key))
}

fn build_analysis(name: &str, raw: Option<&RawSection>) -> Result<Analysis, ConfigError> {
    // Sections are optional wherever every parameter has a default.
    let mut view = raw.map(SectionView::new);
    let analysis = match name {
        "norm" => Analysis::Norm,
        "invert" => {
            let tol = match take_opt(&mut view, "tol") {
                Some(e) => {
                    let v = parse_f64(e)?;
                    if v < 0.0 {
                        return Err(line_err(e.line, "tol must be nonnegative"));
                    }
                    v
                }
                None => mulsemi::lattice::default_tol::<f64>(),
            };
            Analysis::Invert { tol }
        }
        "spectrum" => {
            let Some(v) = view.as_mut() else {
                return Err(invalid("analysis `spectrum` needs a [spectrum] section with `lambda`"));
            };
            let lambda_entry = v.require("lambda")?;
            let lambdas = quoted_list(lambda_entry)?;
            if lambdas.is_empty() {
                return Err(line_err(lambda_entry.line, "lambda list must not be empty"));
            }
            for text in &lambdas {
                let expr = parse::<f64>(text).map_err(|e| ConfigError::Expr {
                    line: lambda_entry.line,
                    source: e,
                })?;
                if expr.contains_var() {
                    return Err(line_err(
                        lambda_entry.line,
                        format!("lambda `{text}` must be constant (no `x`)"),
                    ));
                }
                let value = expr
                    .eval(C64::new(0.0, 0.0))
                    .map_err(|e| line_err(lambda_entry.line, format!("lambda `{text}`: {e}")))?;
                if !value.re.is_finite() || !value.im.is_finite() {
                    return Err(line_err(
                        lambda_entry.line,
                        format!("lambda `{text}` does not evaluate to a finite number"),
                    ));
                }
            }
            let threshold = match take_opt(&mut view, "threshold") {
                Some(e) => parse_f64(e)?,
                None => default_threshold::<f64>(),
            };
            let pole_tol = match take_opt(&mut view, "pole_tol") {
                Some(e) => parse_f64(e)?,
                None => default_pole_tol::<f64>(),
            };
            if threshold <= 0.0 || pole_tol < 0.0 {
                return Err(invalid("spectrum threshold must be positive and pole_tol nonnegative"));
            }
            Analysis::Spectrum {
                lambdas,
                threshold,
                pole_tol,
            }
        }
        "evolve" | "continuity" => {
            let Some(v) = view.as_mut() else {
                return Err(invalid(format!(
                    "analysis `{name}` needs a [{name}] section with `t`"
                )));
            };
            let entry = v.require("t")?;
            let t_grid = f64_list(entry)?;
            if t_grid.is_empty() {
                return Err(line_err(entry.line, "t list must not be empty"));
            }
            if t_grid.iter().any(|&t| t < 0.0) {
                return Err(line_err(entry.line, "t values must be nonnegative"));
            }
            if name == "evolve" {
                Analysis::Evolve { t_grid }
            } else {
                Analysis::Continuity { t_grid }
            }
        }
        "generator" | "recover" => {
            let h_seq = match take_opt(&mut view, "h") {
                Some(entry) => {
                    let h_seq = f64_list(entry)?;
                    if h_seq.is_empty() {
                        return Err(line_err(entry.line, "h list must not be empty"));
                    }
                    if h_seq.iter().any(|&h| h <= 0.0) {
                        return Err(line_err(entry.line, "h values must be positive"));
                    }
                    let mut sorted = h_seq.clone();
                    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    if sorted.windows(2).any(|w| w[0] == w[1]) {
                        return Err(line_err(entry.line, "h values must be distinct"));
                    }
                    h_seq
                }
                None => default_h_seq::<f64>(),
            };
            if name == "generator" {
                Analysis::Generator { h_seq }
            } else {
                Analysis::Recover { h_seq }
            }
        }
        "t0" => {
            let t0 = match take_opt(&mut view, "t0") {
                Some(e) => {
                    let v = parse_f64(e)?;
                    if v <= 0.0 {
                        return Err(line_err(e.line, "t0 must be positive"));
                    }
                    v
                }
                None => 1.0,
            };
            Analysis::T0 { t0 }
        }
        _ => unreachable!("analysis names are validated before dispatch"),
    };
    if let Some(v) = view {
        v.finish()?;
    }
    Ok(analysis)
}

fn validate(sc: &Scenario) -> Result<(), ConfigError> {
    for a in &sc.analyses {
        if a.needs_section() && sc.section.is_none() {
            return Err(invalid(format!(
                "analysis `{}` needs a [section] to act on",
                a.name()
            )));
        }
    }
    Ok(())
}

pub fn load_scenario_file(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_scenario(&text)
}

// ------------------------------------------------------------ canonical text

impl Scenario {
    /// Regenerates a scenario file; loading it yields an equal `Scenario`.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "[scenario]").unwrap();
        writeln!(w, "name = {}", self.name).unwrap();
        writeln!(w, "domain_tolerance = {}", self.domain_tolerance).unwrap();

        writeln!(w, "\n[space]").unwrap();
        match &self.space {
            SpaceModel::Finite { labels } => {
                writeln!(w, "model = finite").unwrap();
                writeln!(w, "points = {}", labels.len()).unwrap();
            }
            SpaceModel::TruncatedNaturals { n, unbounded } => {
                writeln!(w, "model = truncated_naturals").unwrap();
                writeln!(w, "n = {n}").unwrap();
                writeln!(w, "unbounded = {unbounded}").unwrap();
            }
            SpaceModel::IntervalGrid {
                a,
                b,
                step,
                unbounded,
            } => {
                writeln!(w, "model = interval_grid").unwrap();
                writeln!(w, "a = {a}").unwrap();
                writeln!(w, "b = {b}").unwrap();
                writeln!(w, "step = {step}").unwrap();
                writeln!(w, "unbounded = {unbounded}").unwrap();
            }
        }

        writeln!(w, "\n[lattice]").unwrap();
        writeln!(w, "dimension = {}", self.dimension).unwrap();
        match &self.norm_spec {
            NormSpec::Sup => writeln!(w, "norm = sup").unwrap(),
            NormSpec::P(p) => {
                writeln!(w, "norm = p").unwrap();
                writeln!(w, "p = {p}").unwrap();
            }
            NormSpec::WeightedSup(weights) => {
                writeln!(w, "norm = weighted_sup").unwrap();
                writeln!(w, "weights = {}", join_f64(weights)).unwrap();
            }
        }

        writeln!(w, "\n[phi]").unwrap();
        writeln!(w, "entries = {}", join_quoted(self.phi.entries())).unwrap();

        if let Some(section) = &self.section {
            writeln!(w, "\n[section]").unwrap();
            writeln!(w, "entries = {}", join_quoted(section)).unwrap();
        }

        writeln!(w, "\n[analyses]").unwrap();
        let names: Vec<&str> = self.analyses.iter().map(Analysis::name).collect();
        writeln!(w, "list = {}", names.join(", ")).unwrap();

        for analysis in &self.analyses {
            match analysis {
                Analysis::Norm => {}
                Analysis::Invert { tol } => {
                    writeln!(w, "\n[invert]").unwrap();
                    writeln!(w, "tol = {tol}").unwrap();
                }
                Analysis::Spectrum {
                    lambdas,
                    threshold,
                    pole_tol,
                } => {
                    writeln!(w, "\n[spectrum]").unwrap();
                    writeln!(w, "lambda = {}", join_quoted(lambdas)).unwrap();
                    writeln!(w, "threshold = {threshold}").unwrap();
                    writeln!(w, "pole_tol = {pole_tol}").unwrap();
                }
                Analysis::Evolve { t_grid } => {
                    writeln!(w, "\n[evolve]").unwrap();
                    writeln!(w, "t = {}", join_f64(t_grid)).unwrap();
                }
                Analysis::Continuity { t_grid } => {
                    writeln!(w, "\n[continuity]").unwrap();
                    writeln!(w, "t = {}", join_f64(t_grid)).unwrap();
                }
                Analysis::Generator { h_seq } => {
                    writeln!(w, "\n[generator]").unwrap();
                    writeln!(w, "h = {}", join_f64(h_seq)).unwrap();
                }
                Analysis::T0 { t0 } => {
                    writeln!(w, "\n[t0]").unwrap();
                    writeln!(w, "t0 = {t0}").unwrap();
                }
                Analysis::Recover { h_seq } => {
                    writeln!(w, "\n[recover]").unwrap();
                    writeln!(w, "h = {}", join_f64(h_seq)).unwrap();
                }
            }
        }

        if let Some(output) = &self.output {
            writeln!(w, "\n[output]").unwrap();
            writeln!(w, "format = {}", output.format.as_str()).unwrap();
            if let Some(path) = &output.path {
                writeln!(w, "path = {path}").unwrap();
            }
        }
        out
    }

    /// Evaluated spectrum probe points for an `Analysis::Spectrum`.
    pub fn eval_lambdas(lambdas: &[String]) -> Result<Vec<C64>, String> {
        lambdas
            .iter()
            .map(|text| {
                let expr = parse::<f64>(text).map_err(|e| format!("lambda `{text}`: {e}"))?;
                expr.eval(C64::new(0.0, 0.0))
                    .map_err(|e| format!("lambda `{text}`: {e}"))
            })
            .collect()
    }
}

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn join_quoted(values: &[String]) -> String {
    values
        .iter()
        .map(|v| format!("\"{v}\""))
        .collect::<Vec<_>>()
        .join(", ")
}
