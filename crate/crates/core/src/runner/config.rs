//! Strict `key = value` configuration documents with `[section]` headers.
//!
//! Every problem in a document is reported, each with its line number.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// One configuration problem. `line` is `None` for keys that are missing
/// altogether.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// All problems found in one document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", render_errors(.0))]
pub struct ConfigErrors(pub Vec<ConfigError>);

fn render_errors(errors: &[ConfigError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

impl ConfigErrors {
    pub fn errors(&self) -> &[ConfigError] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKind {
    Dispersion,
    AttenuationSweep,
    FraclapCompare,
    LevyCheck,
    StableDensity,
    Burgers,
    Kzk,
    Westervelt,
    Diffusion,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::Dispersion,
        ExperimentKind::AttenuationSweep,
        ExperimentKind::FraclapCompare,
        ExperimentKind::LevyCheck,
        ExperimentKind::StableDensity,
        ExperimentKind::Burgers,
        ExperimentKind::Kzk,
        ExperimentKind::Westervelt,
        ExperimentKind::Diffusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Dispersion => "dispersion",
            ExperimentKind::AttenuationSweep => "attenuation-sweep",
            ExperimentKind::FraclapCompare => "fraclap-compare",
            ExperimentKind::LevyCheck => "levy-check",
            ExperimentKind::StableDensity => "stable-density",
            ExperimentKind::Burgers => "burgers",
            ExperimentKind::Kzk => "kzk",
            ExperimentKind::Westervelt => "westervelt",
            ExperimentKind::Diffusion => "diffusion",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// One-line summary for `fraclap list`.
    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::Dispersion => {
                "complex wavenumber roots of the fractional-loss dispersion relation against the power law"
            }
            ExperimentKind::AttenuationSweep => {
                "simulated tone decay over a frequency sweep, with a log-log fit of alpha0 and y"
            }
            ExperimentKind::FraclapCompare => {
                "singular-kernel quadrature against the Fourier-symbol fractional Laplacian under refinement"
            }
            ExperimentKind::LevyCheck => {
                "Kolmogorov-Smirnov test that rescaled sums of stable draws keep their law"
            }
            ExperimentKind::StableDensity => "symmetric stable density by characteristic-function inversion",
            ExperimentKind::Burgers => {
                "fractional-loss Burgers evolution of a Gaussian pulse, checked against Cole-Hopf at y = 2"
            }
            ExperimentKind::Kzk => {
                "axisymmetric parabolic beam with fractional absorption and quadratic nonlinearity"
            }
            ExperimentKind::Westervelt => {
                "full-wave quadratic nonlinearity: fundamental attenuation at a given source Mach number"
            }
            ExperimentKind::Diffusion => "fractional diffusion of a point source against the stable density",
        }
    }

    pub(crate) fn schema(self) -> &'static [KeySpec] {
        match self {
            ExperimentKind::Dispersion => DISPERSION,
            ExperimentKind::AttenuationSweep => ATTENUATION,
            ExperimentKind::FraclapCompare => FRACLAP,
            ExperimentKind::LevyCheck => LEVY,
            ExperimentKind::StableDensity => DENSITY,
            ExperimentKind::Burgers => BURGERS,
            ExperimentKind::Kzk => KZK,
            ExperimentKind::Westervelt => WESTERVELT,
            ExperimentKind::Diffusion => DIFFUSION,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ValueKind {
    Float,
    Int,
    IntList,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Bound {
    Any,
    Positive,
    NonNegative,
    AtLeast(f64),
    /// `lo < v <= hi`.
    OpenClosed(f64, f64),
    /// `lo < v < hi`.
    Open(f64, f64),
}

impl Bound {
    fn admits(self, v: f64) -> bool {
        v.is_finite()
            && match self {
                Bound::Any => true,
                Bound::Positive => v > 0.0,
                Bound::NonNegative => v >= 0.0,
                Bound::AtLeast(lo) => v >= lo,
                Bound::OpenClosed(lo, hi) => v > lo && v <= hi,
                Bound::Open(lo, hi) => v > lo && v < hi,
            }
    }

    fn describe(self, name: &str) -> String {
        match self {
            Bound::Any => format!("{name} finite"),
            Bound::Positive => format!("{name} > 0"),
            Bound::NonNegative => format!("{name} >= 0"),
            Bound::AtLeast(lo) => format!("{name} >= {lo}"),
            Bound::OpenClosed(lo, hi) => format!("{lo} < {name} <= {hi}"),
            Bound::Open(lo, hi) => format!("{lo} < {name} < {hi}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct KeySpec {
    pub section: &'static str,
    pub key: &'static str,
    pub kind: ValueKind,
    /// `None` marks a required key.
    pub default: Option<&'static str>,
    pub bound: Bound,
}

const fn spec(
    section: &'static str,
    key: &'static str,
    kind: ValueKind,
    default: Option<&'static str>,
    bound: Bound,
) -> KeySpec {
    KeySpec {
        section,
        key,
        kind,
        default,
        bound,
    }
}

use Bound::*;
use ValueKind::*;

const EXPONENT: Bound = OpenClosed(0.0, 2.0);

const DISPERSION: &[KeySpec] = &[
    spec("medium", "c0", Float, Some("1"), Positive),
    spec("medium", "alpha0", Float, None, NonNegative),
    spec("medium", "y", Float, None, EXPONENT),
    spec("sweep", "omega_min", Float, None, Positive),
    spec("sweep", "omega_max", Float, None, Positive),
    spec("sweep", "points", Int, Some("16"), AtLeast(2.0)),
    spec("check", "phase_tolerance", Float, Some("0.005"), Positive),
    spec("check", "smallness_max", Float, Some("0.05"), Positive),
];

const ATTENUATION: &[KeySpec] = &[
    spec("medium", "c0", Float, Some("1"), Positive),
    spec("medium", "alpha0", Float, None, Positive),
    spec("medium", "y", Float, None, EXPONENT),
    spec("sweep", "omega_min", Float, None, Positive),
    spec("sweep", "omega_max", Float, None, Positive),
    spec("sweep", "points", Int, Some("8"), AtLeast(3.0)),
    spec(
        "numerics",
        "points_per_wavelength",
        Int,
        Some("16"),
        AtLeast(16.0),
    ),
    spec("numerics", "periods", Float, Some("24"), Positive),
    spec("check", "y_tolerance", Float, Some("0.03"), Positive),
    spec("check", "alpha0_tolerance", Float, Some("0.03"), Positive),
];

const FRACLAP: &[KeySpec] = &[
    spec("operator", "order", Float, None, Open(0.0, 2.0)),
    spec("operator", "sizes", IntList, Some("128, 256, 512"), AtLeast(16.0)),
    spec("check", "max_relative_error", Float, Some("0.02"), Positive),
    spec("check", "min_order", Float, Some("1"), Any),
];

const LEVY: &[KeySpec] = &[
    spec("law", "y", Float, None, EXPONENT),
    spec("law", "scale", Float, Some("1"), Positive),
    spec("sampling", "draws", Int, Some("100000"), AtLeast(2.0)),
    spec("sampling", "n_sum", IntList, Some("2, 4"), AtLeast(2.0)),
];

const DENSITY: &[KeySpec] = &[
    spec("law", "y", Float, None, EXPONENT),
    spec("law", "scale", Float, Some("1"), Positive),
    spec("grid", "x_max", Float, Some("10"), Positive),
    spec("grid", "points", Int, Some("401"), AtLeast(2.0)),
];

const BURGERS: &[KeySpec] = &[
    spec("medium", "c0", Float, Some("1"), Positive),
    spec("medium", "alpha0", Float, None, NonNegative),
    spec("medium", "y", Float, None, EXPONENT),
    spec("medium", "beta", Float, Some("1"), Any),
    spec("initial", "amplitude", Float, Some("1"), Any),
    spec("grid", "n", Int, Some("1024"), AtLeast(16.0)),
    spec("grid", "length", Float, Some("20"), Positive),
    spec("run", "dt", Float, None, Positive),
    spec("run", "steps", Int, None, AtLeast(1.0)),
    spec("run", "snapshots", Int, Some("4"), AtLeast(1.0)),
    spec("check", "cole_hopf_tolerance", Float, Some("0.005"), Positive),
];

const KZK: &[KeySpec] = &[
    spec("medium", "c0", Float, Some("1"), Positive),
    spec("medium", "alpha0", Float, Some("0"), NonNegative),
    spec("medium", "y", Float, Some("2"), EXPONENT),
    spec("medium", "nonlinearity", Float, Some("0"), Any),
    spec("medium", "rho0", Float, Some("1"), Positive),
    spec("beam", "source_radius", Float, Some("1"), Positive),
    spec("beam", "wavenumber", Float, Some("30"), Positive),
    spec("beam", "amplitude", Float, Some("1"), Any),
    spec("beam", "cycles", Int, Some("16"), AtLeast(1.0)),
    spec("beam", "n_tau", Int, Some("512"), AtLeast(16.0)),
    spec("beam", "nr", Int, Some("256"), AtLeast(8.0)),
    spec("beam", "r_max", Float, Some("6"), Positive),
    spec("run", "dz", Float, None, Positive),
    spec("run", "steps", Int, None, AtLeast(1.0)),
    spec("run", "snapshots", Int, Some("4"), AtLeast(1.0)),
    spec("run", "tail_threshold", Float, Some("1e-8"), Positive),
    spec("check", "reference_tolerance", Float, Some("0.01"), Positive),
];

const WESTERVELT: &[KeySpec] = &[
    spec("medium", "c0", Float, Some("1"), Positive),
    spec("medium", "alpha0", Float, None, Positive),
    spec("medium", "y", Float, None, EXPONENT),
    spec("medium", "nonlinearity", Float, Some("3.5"), Any),
    spec("medium", "rho0", Float, Some("1"), Positive),
    spec("tone", "omega", Float, Some("1"), Positive),
    spec("tone", "mach", Float, Some("0.01"), OpenClosed(0.0, 0.1)),
    spec(
        "numerics",
        "points_per_wavelength",
        Int,
        Some("16"),
        AtLeast(16.0),
    ),
    spec("numerics", "periods", Float, Some("24"), Positive),
    spec("check", "deviation_tolerance", Float, Some("0.02"), Positive),
];

const DIFFUSION: &[KeySpec] = &[
    spec("law", "y", Float, None, EXPONENT),
    spec("law", "zeta", Float, Some("1"), Positive),
    spec("law", "t", Float, Some("1"), Positive),
    spec("grid", "n", Int, Some("2048"), AtLeast(16.0)),
    spec("grid", "length", Float, Some("256"), Positive),
    spec("check", "tolerance", Float, Some("0.001"), Positive),
];

/// A typed configuration value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    IntList(Vec<u64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(v) => write!(f, "{v}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::IntList(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                f.write_str(&parts.join(", "))
            }
        }
    }
}

fn parse_value(kind: ValueKind, raw: &str) -> Result<Value, String> {
    match kind {
        ValueKind::Float => raw
            .parse::<f64>()
            .map(Value::Float)
            .map_err(|_| format!("`{raw}` is not a number")),
        ValueKind::Int => raw
            .parse::<u64>()
            .map(Value::Int)
            .map_err(|_| format!("`{raw}` is not a non-negative integer")),
        ValueKind::IntList => raw
            .split(',')
            .map(|p| {
                let p = p.trim();
                p.parse::<u64>()
                    .map_err(|_| format!("list item `{p}` is not a non-negative integer"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Value::IntList),
    }
}

fn numbers(v: &Value) -> Vec<f64> {
    match v {
        Value::Float(x) => vec![*x],
        Value::Int(x) => vec![*x as f64],
        Value::IntList(xs) => xs.iter().map(|&x| x as f64).collect(),
    }
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    /// Output subdirectory requested by the document, if any.
    pub output: Option<String>,
    values: BTreeMap<String, Value>,
    defaulted: Vec<String>,
}

impl ExperimentConfig {
    /// `section.key` names that took their default value.
    pub fn defaulted(&self) -> &[String] {
        &self.defaulted
    }

    pub fn value(&self, name: &str) -> Option<&Value> {
        self.values.get(name)
    }

    pub(crate) fn float(&self, name: &str) -> f64 {
        match self.values.get(name) {
            Some(Value::Float(v)) => *v,
            Some(Value::Int(v)) => *v as f64,
            other => panic!("schema has no float `{name}` (found {other:?})"),
        }
    }

    pub(crate) fn int(&self, name: &str) -> usize {
        match self.values.get(name) {
            Some(Value::Int(v)) => *v as usize,
            other => panic!("schema has no integer `{name}` (found {other:?})"),
        }
    }

    pub(crate) fn int_list(&self, name: &str) -> Vec<usize> {
        match self.values.get(name) {
            Some(Value::IntList(v)) => v.iter().map(|&x| x as usize).collect(),
            other => panic!("schema has no list `{name}` (found {other:?})"),
        }
    }

    /// Override a value, re-checking its bound.
    pub fn set(&mut self, name: &str, raw: &str) -> Result<(), ConfigErrors> {
        let spec = self
            .kind
            .schema()
            .iter()
            .find(|s| full_name(s) == name)
            .ok_or_else(|| single(None, format!("unknown key `{name}` for {}", self.kind)))?;
        let v = parse_value(spec.kind, raw).map_err(|m| single(None, format!("{name}: {m}")))?;
        if let Some(msg) = bound_violation(spec, &v) {
            return Err(single(None, msg));
        }
        self.values.insert(name.to_string(), v);
        self.defaulted.retain(|d| d != name);
        Ok(())
    }

    /// The full document, defaults included, in canonical form.
    pub fn render(&self) -> String {
        let mut out = format!("experiment = {}\nseed = {}\n", self.kind, self.seed);
        if let Some(o) = &self.output {
            out.push_str(&format!("output = {o}\n"));
        }
        let mut section = "";
        for s in self.kind.schema() {
            if s.section != section {
                section = s.section;
                out.push_str(&format!("\n[{section}]\n"));
            }
            let name = full_name(s);
            let v = &self.values[&name];
            if self.defaulted.contains(&name) {
                out.push_str(&format!("{} = {v}  # default\n", s.key));
            } else {
                out.push_str(&format!("{} = {v}\n", s.key));
            }
        }
        out
    }
}

fn full_name(s: &KeySpec) -> String {
    format!("{}.{}", s.section, s.key)
}

fn single(line: Option<usize>, message: String) -> ConfigErrors {
    ConfigErrors(vec![ConfigError { line, message }])
}

fn bound_violation(s: &KeySpec, v: &Value) -> Option<String> {
    let bad = numbers(v).into_iter().find(|&x| !s.bound.admits(x))?;
    Some(format!(
        "{}.{} = {bad} is out of range; require {}",
        s.section,
        s.key,
        s.bound.describe(s.key)
    ))
}

struct Entry {
    line: usize,
    section: String,
    key: String,
    raw: String,
}

/// Parse a document whose top level names the experiment.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    parse(text, None)
}

/// Parse a document for a known experiment; a top-level `experiment` key,
/// if present, must agree.
pub fn parse_config_for(text: &str, kind: ExperimentKind) -> Result<ExperimentConfig, ConfigErrors> {
    parse(text, Some(kind))
}

fn parse(text: &str, hint: Option<ExperimentKind>) -> Result<ExperimentConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let mut err = |line: Option<usize>, message: String| errors.push(ConfigError { line, message });

    let mut entries: Vec<Entry> = Vec::new();
    let mut section = String::new();
    let mut section_lines: BTreeMap<String, usize> = BTreeMap::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            match rest.strip_suffix(']') {
                Some(name) if !name.trim().is_empty() => {
                    section = name.trim().to_string();
                    if let Some(first) = section_lines.insert(section.clone(), line) {
                        err(
                            Some(line),
                            format!("section [{section}] repeated (first at line {first})"),
                        );
                    }
                }
                _ => err(Some(line), format!("malformed section header `{content}`")),
            }
            continue;
        }
        match content.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() && !v.trim().is_empty() => entries.push(Entry {
                line,
                section: section.clone(),
                key: k.trim().to_string(),
                raw: v.trim().to_string(),
            }),
            Some((k, _)) if !k.trim().is_empty() => err(Some(line), format!("`{}` has no value", k.trim())),
            _ => err(Some(line), format!("expected `key = value`, found `{content}`")),
        }
    }

    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut unique = Vec::with_capacity(entries.len());
    for e in entries {
        let name = format!("{}.{}", e.section, e.key);
        if let Some(&first) = seen.get(&name) {
            err(
                Some(e.line),
                format!(
                    "duplicate key `{}` at lines {first} and {}",
                    display_name(&e),
                    e.line
                ),
            );
        } else {
            seen.insert(name, e.line);
            unique.push(e);
        }
    }

    let named = unique
        .iter()
        .find(|e| e.section.is_empty() && e.key == "experiment");
    let kind = match (hint, named) {
        (Some(k), None) => Some(k),
        (hint, Some(e)) => match ExperimentKind::from_name(&e.raw) {
            Some(k) if hint.is_none_or(|h| h == k) => Some(k),
            Some(k) => {
                err(
                    Some(e.line),
                    format!(
                        "document describes `{k}` but `{}` was requested",
                        hint.expect("hint")
                    ),
                );
                hint
            }
            None => {
                err(Some(e.line), format!("unknown experiment `{}`", e.raw));
                hint
            }
        },
        (None, None) => {
            err(None, "missing required key `experiment`".into());
            None
        }
    };

    let mut seed = 0;
    let mut output = None;
    let mut values = BTreeMap::new();
    let mut given = Vec::new();
    for e in &unique {
        if e.section.is_empty() {
            match e.key.as_str() {
                "experiment" => {}
                "seed" => match e.raw.parse::<u64>() {
                    Ok(s) => seed = s,
                    Err(_) => err(
                        Some(e.line),
                        format!("seed `{}` is not a non-negative integer", e.raw),
                    ),
                },
                "output" => output = Some(e.raw.clone()),
                _ => err(Some(e.line), format!("unknown key `{}`", e.key)),
            }
            continue;
        }
        let Some(kind) = kind else { continue };
        let schema = kind.schema();
        if !schema.iter().any(|s| s.section == e.section) {
            continue;
        }
        let Some(s) = schema.iter().find(|s| s.section == e.section && s.key == e.key) else {
            err(
                Some(e.line),
                format!("unknown key `{}` for {kind}", display_name(e)),
            );
            continue;
        };
        match parse_value(s.kind, &e.raw) {
            Ok(v) => {
                if let Some(msg) = bound_violation(s, &v) {
                    err(Some(e.line), msg);
                }
                given.push(full_name(s));
                values.insert(full_name(s), v);
            }
            Err(m) => err(Some(e.line), format!("{}: {m}", display_name(e))),
        }
    }
    if let Some(kind) = kind {
        for (name, &line) in &section_lines {
            if !kind.schema().iter().any(|s| s.section == name) {
                err(Some(line), format!("unknown section [{name}] for {kind}"));
            }
        }
    }

    let mut defaulted = Vec::new();
    if let Some(kind) = kind {
        for s in kind.schema() {
            let name = full_name(s);
            if given.contains(&name) || values.contains_key(&name) {
                continue;
            }
            match s.default {
                Some(d) => {
                    values.insert(
                        name.clone(),
                        parse_value(s.kind, d).expect("schema default parses"),
                    );
                    defaulted.push(name);
                }
                None => {
                    let line = section_lines.get(s.section).copied();
                    err(
                        line,
                        format!(
                            "missing required key `{name}` (range {})",
                            s.bound.describe(s.key)
                        ),
                    );
                }
            }
        }
        cross_checks(kind, &values, &seen, &mut err);
    }

    if !errors.is_empty() {
        errors.sort_by_key(|e| e.line.unwrap_or(usize::MAX));
        return Err(ConfigErrors(errors));
    }
    Ok(ExperimentConfig {
        kind: kind.expect("kind resolved when error-free"),
        seed,
        output,
        values,
        defaulted,
    })
}

fn display_name(e: &Entry) -> String {
    if e.section.is_empty() {
        e.key.clone()
    } else {
        format!("{}.{}", e.section, e.key)
    }
}

/// Constraints that span several keys.
fn cross_checks(
    kind: ExperimentKind,
    values: &BTreeMap<String, Value>,
    lines: &BTreeMap<String, usize>,
    err: &mut impl FnMut(Option<usize>, String),
) {
    let get = |k: &str| match values.get(k) {
        Some(Value::Float(v)) => Some(*v),
        Some(Value::Int(v)) => Some(*v as f64),
        _ => None,
    };
    if let (Some(lo), Some(hi)) = (get("sweep.omega_min"), get("sweep.omega_max")) {
        if lo >= hi {
            err(
                lines.get("sweep.omega_max").copied(),
                format!("sweep.omega_max = {hi} must exceed sweep.omega_min = {lo}"),
            );
        }
    }
    if kind == ExperimentKind::FraclapCompare {
        if let Some(Value::IntList(sizes)) = values.get("operator.sizes") {
            if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) {
                err(
                    lines.get("operator.sizes").copied(),
                    "operator.sizes must be strictly increasing".into(),
                );
            }
        }
    }
    if matches!(kind, ExperimentKind::Burgers | ExperimentKind::Diffusion) {
        if let Some(n) = get("grid.n") {
            if n as u64 % 2 == 1 {
                err(lines.get("grid.n").copied(), format!("grid.n = {n} must be even"));
            }
        }
    }
}
