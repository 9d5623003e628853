//! Batch front end: read a group or presentation descriptor, run the requested
//! analyses in a fixed order and build a deterministic report.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use charcomplex::complex::{verify_exactness, ComplexData, ComplexDims, ExactnessReport};
use charcomplex::derivations::{
    resolve_inner_sign, resolve_pair_orientation, BracketTable, DerivationContext, IdealReport,
    InnerSignResolution, IsomorphismReport, OrientationResolution, INNER_SIGN, PAIR_ORIENTATION,
};
use charcomplex::descriptor::{GroupDescriptor, PresentationDescriptor};
use charcomplex::group::DEFAULT_ORDER_CAP;
use charcomplex::linalg::{format_rational, Rational, Subspace};
use charcomplex::{ActionGroupoid, CharacterSource, Error, GroupTable, Limits, PresentedGroupoid};
use num_traits::Zero;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Complex,
    Exactness,
    Derivations,
    BracketTable,
    Ideal,
    Iso,
    Lift,
}

impl Analysis {
    pub const ALL: [Analysis; 7] = [
        Analysis::Complex,
        Analysis::Exactness,
        Analysis::Derivations,
        Analysis::BracketTable,
        Analysis::Ideal,
        Analysis::Iso,
        Analysis::Lift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Complex => "complex",
            Analysis::Exactness => "exactness",
            Analysis::Derivations => "derivations",
            Analysis::BracketTable => "bracket-table",
            Analysis::Ideal => "ideal",
            Analysis::Iso => "iso",
            Analysis::Lift => "lift",
        }
    }

    fn needs_group(self) -> bool {
        matches!(
            self,
            Analysis::Derivations | Analysis::BracketTable | Analysis::Ideal | Analysis::Iso
        )
    }
}

impl FromStr for Analysis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Analysis::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| format!("unknown analysis `{}`", s.trim()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SourceSpec {
    Group { descriptor: GroupDescriptor },
    Presentation { descriptor: PresentationDescriptor },
}

impl SourceSpec {
    /// `--group` takes a group name or a path to a JSON descriptor.
    pub fn group_arg(arg: &str) -> Result<Self, RunError> {
        let path = Path::new(arg);
        let descriptor = if path.is_file() {
            GroupDescriptor::from_json(&read(path)?)?
        } else {
            GroupDescriptor::Named {
                name: arg.to_string(),
            }
        };
        Ok(SourceSpec::Group { descriptor })
    }

    pub fn presentation_path(path: &Path) -> Result<Self, RunError> {
        Ok(SourceSpec::Presentation {
            descriptor: PresentationDescriptor::from_json(&read(path)?)?,
        })
    }
}

fn read(path: &Path) -> Result<String, RunError> {
    std::fs::read_to_string(path)
        .map_err(|e| RunError::Input(format!("cannot read {}: {e}", path.display())))
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: SourceSpec,
    pub analyses: BTreeSet<Analysis>,
    pub format: Format,
    pub emit_bases: bool,
    pub max_rows: u128,
    pub max_order: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(source: SourceSpec, analyses: impl IntoIterator<Item = Analysis>) -> Self {
        Self {
            source,
            analyses: analyses.into_iter().collect(),
            format: Format::Json,
            emit_bases: false,
            max_rows: Limits::default().max_rows,
            max_order: DEFAULT_ORDER_CAP,
            out: None,
        }
    }
}

/// Errors that prevent a report from being produced.
#[derive(Debug)]
pub enum RunError {
    Input(String),
    SizeLimit(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => 2,
            RunError::SizeLimit(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Input(_) => "input",
            RunError::SizeLimit(_) => "size-limit",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            RunError::Input(m) | RunError::SizeLimit(m) => m,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => RunError::SizeLimit(e.to_string()),
            other => RunError::Input(other.to_string()),
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for RunError {}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub source: SourceSpec,
    pub analyses: Vec<Analysis>,
    pub emit_bases: bool,
    pub max_rows: String,
    pub max_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub permutation_product: &'static str,
    pub morphism: &'static str,
    pub pair_orientation: &'static str,
    pub inner_sign: &'static str,
}

const CONVENTIONS: Conventions = Conventions {
    permutation_product: "(s*t)(x) = s(t(x))",
    morphism: "(u,v): v^-1 u -> u v^-1",
    pair_orientation: PAIR_ORIENTATION,
    inner_sign: INNER_SIGN,
};

#[derive(Debug, Clone, Serialize)]
pub struct BasisDump {
    pub coordinates: Vec<String>,
    pub vectors: Vec<Vec<String>>,
}

fn dump(coordinates: &[String], space: &Subspace) -> BasisDump {
    BasisDump {
        coordinates: coordinates.to_vec(),
        vectors: space.basis().iter().map(|v| strings(v)).collect(),
    }
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupInfo {
    pub order: usize,
    pub classes: usize,
    pub class_sizes: Vec<usize>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexResult {
    pub dims: ComplexDims,
    pub components: usize,
    pub component_sizes: Vec<usize>,
    pub level1_coordinates: usize,
    pub level2_coordinates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x1_basis: Option<BasisDump>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x2_basis: Option<BasisDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivationsResult {
    pub der_dim: usize,
    pub x1_dim: usize,
    pub inner_dim: usize,
    pub weak_inner_dim: usize,
    pub dims_agree: bool,
    pub round_trip: bool,
    pub all_locally_finite: bool,
    pub point_characters_match: bool,
    pub inner_sign: InnerSignResolution,
    pub pair_orientation: OrientationResolution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub der_basis: Option<BasisDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoResult {
    pub outer_dim: usize,
    pub character_quotient_dim: usize,
    pub check: IsomorphismReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftResult {
    pub checked: usize,
    pub boundary_preserved: bool,
    pub vanishes_on_spanning: bool,
    pub idempotent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifts: Option<BasisDump>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exactness: Option<ExactnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivations: Option<DerivationsResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket_table: Option<BracketTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iso: Option<IsoResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisTime {
    pub analysis: Analysis,
    pub ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    pub analyses: Vec<AnalysisTime>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub input: InputEcho,
    pub conventions: Conventions,
    pub results: Results,
    pub failures: Vec<String>,
    pub passed: bool,
    pub timing: Timing,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// The JSON report without its timing block; identical to [`Self::to_json`]
    /// up to that block.
    pub fn to_json_without_timing(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            schema_version: u32,
            tool: &'a ToolInfo,
            input: &'a InputEcho,
            conventions: &'a Conventions,
            results: &'a Results,
            failures: &'a [String],
            passed: bool,
        }
        let body = Body {
            schema_version: self.schema_version,
            tool: &self.tool,
            input: &self.input,
            conventions: &self.conventions,
            results: &self.results,
            failures: &self.failures,
            passed: self.passed,
        };
        serde_json::to_string_pretty(&body).expect("report serializes") + "\n"
    }

    /// `key,value` rows for every scalar in the results.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        let value = serde_json::to_value(&self.results).expect("results serialize");
        flatten_scalars("", &value, &mut out);
        let _ = writeln!(out, "passed,{}", self.passed);
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let r = &self.results;
        if let Some(g) = &r.group {
            let _ = writeln!(
                out,
                "group: order {}, {} conjugacy classes",
                g.order, g.classes
            );
        }
        if let Some(c) = &r.complex {
            let _ = writeln!(
                out,
                "complex: dim X0 = {}, dim X1 = {}, dim X2 = {}, {} component(s)",
                c.dims.x0, c.dims.x1, c.dims.x2, c.components
            );
        }
        if let Some(e) = &r.exactness {
            let _ = writeln!(
                out,
                "exactness: {} on every component, defect at X0 = {}",
                if e.exact { "exact" } else { "NOT exact" },
                e.defect_at_x0
            );
        }
        if let Some(d) = &r.derivations {
            let _ = writeln!(
                out,
                "derivations: dim Der = {}, inner = {}, weak inner = {}, round trip {}",
                d.der_dim,
                d.inner_dim,
                d.weak_inner_dim,
                ok(d.round_trip)
            );
        }
        if let Some(b) = &r.bracket_table {
            let _ = writeln!(
                out,
                "bracket table: {} pairs, {{x^a,x^b}} = x^ab - x^ba on {}, = x^ba - x^ab on {}",
                b.entries.len(),
                b.ab_minus_ba_pairs,
                b.ba_minus_ab_pairs
            );
        }
        if let Some(i) = &r.ideal {
            let _ = writeln!(out, "ideal: {} ({} triples)", ok(i.passed), i.loop_triples);
        }
        if let Some(i) = &r.iso {
            let _ = writeln!(
                out,
                "quotient isomorphism: {} (dims {} and {})",
                ok(i.check.passed),
                i.outer_dim,
                i.character_quotient_dim
            );
        }
        if let Some(l) = &r.lift {
            let _ = writeln!(
                out,
                "lift: {} on {} vectors",
                ok(l.boundary_preserved && l.vanishes_on_spanning && l.idempotent),
                l.checked
            );
        }
        for f in &self.failures {
            let _ = writeln!(out, "FAILURE: {f}");
        }
        let _ = writeln!(out, "{}", if self.passed { "PASSED" } else { "FAILED" });
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn flatten_scalars(prefix: &str, value: &serde_json::Value, out: &mut String) {
    use serde_json::Value;
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_scalars(&key, v, out);
            }
        }
        Value::Bool(_) | Value::Number(_) => {
            let _ = writeln!(out, "{prefix},{value}");
        }
        Value::String(s) if !s.contains(',') && !s.contains('"') => {
            let _ = writeln!(out, "{prefix},{s}");
        }
        // lists and free text are structured data; JSON only
        _ => {}
    }
}

enum Source {
    Group(GroupTable),
    Presentation(PresentedGroupoid),
}

pub fn run(config: &RunConfig) -> Result<Report, RunError> {
    let start = Instant::now();
    if config.analyses.is_empty() {
        return Err(RunError::Input("at least one analysis is required".into()));
    }
    if config.max_rows == 0 || config.max_order == 0 {
        return Err(RunError::Input("size caps must be positive".into()));
    }
    let limits = Limits {
        max_rows: config.max_rows,
    };
    let source = match &config.source {
        SourceSpec::Group { descriptor } => Source::Group(descriptor.build(config.max_order)?),
        SourceSpec::Presentation { descriptor } => Source::Presentation(descriptor.build()?),
    };
    if let Source::Presentation(_) = source {
        if let Some(a) = config.analyses.iter().find(|a| a.needs_group()) {
            return Err(RunError::Input(format!(
                "analysis `{}` needs a group source",
                a.name()
            )));
        }
    }

    let mut results = Results::default();
    let mut failures = Vec::new();
    let mut times = Vec::new();
    let gamma = match &source {
        Source::Group(g) => {
            let classes = g.conjugacy_classes();
            results.group = Some(GroupInfo {
                order: g.order(),
                classes: classes.len(),
                class_sizes: classes.classes.iter().map(Vec::len).collect(),
                labels: g.labels().to_vec(),
            });
            Some(ActionGroupoid::new(g.clone()))
        }
        Source::Presentation(_) => None,
    };
    let as_source: &dyn CharacterSource = match (&source, &gamma) {
        (Source::Group(_), Some(gamma)) => gamma,
        (Source::Presentation(p), _) => p,
        _ => unreachable!(),
    };

    let mut complex: Option<ComplexData> = None;
    let mut ctx: Option<DerivationContext> = None;
    for &analysis in &config.analyses {
        let t = Instant::now();
        match analysis {
            Analysis::Complex => {
                let c = full_complex(&mut complex, as_source, &limits)?;
                let x1 = c.x1_space();
                let x2 = c.x2_space();
                results.complex = Some(ComplexResult {
                    dims: c.dims(),
                    components: c.components.len(),
                    component_sizes: c.components.iter().map(Vec::len).collect(),
                    level1_coordinates: c.num_level1(),
                    level2_coordinates: c.num_level2(),
                    x1_basis: config.emit_bases.then(|| dump(&x1.coordinates, &x1.space)),
                    x2_basis: config.emit_bases.then(|| dump(&x2.coordinates, &x2.space)),
                });
            }
            Analysis::Exactness => {
                let report = verify_exactness(as_source, &limits)?;
                for (i, c) in report.components.iter().enumerate() {
                    if !c.exact {
                        failures.push(format!("exactness: component {i} is not exact"));
                    }
                }
                results.exactness = Some(report);
            }
            Analysis::Derivations => {
                let c = context(&mut ctx, &source, &limits)?;
                results.derivations =
                    Some(derivations_result(c, config.emit_bases, &mut failures)?);
            }
            Analysis::BracketTable => {
                let c = context(&mut ctx, &source, &limits)?;
                results.bracket_table = Some(c.bracket_table()?);
            }
            Analysis::Ideal => {
                let c = context(&mut ctx, &source, &limits)?;
                let report = c.verify_ideal()?;
                if !report.passed {
                    failures.push("ideal: weak-inner ideal check failed".into());
                }
                results.ideal = Some(report);
            }
            Analysis::Iso => {
                let c = context(&mut ctx, &source, &limits)?;
                let q = c.outer_quotient()?;
                let check = c.verify_quotient_isomorphism()?;
                if !check.passed {
                    failures.push("iso: quotient isomorphism check failed".into());
                }
                results.iso = Some(IsoResult {
                    outer_dim: q.dim,
                    character_quotient_dim: q.character_dim,
                    check,
                });
            }
            Analysis::Lift => {
                let c = full_complex(&mut complex, as_source, &limits)?;
                let lift = lift_result(c, config.emit_bases)?;
                if !(lift.boundary_preserved && lift.vanishes_on_spanning && lift.idempotent) {
                    failures.push("lift: round trip failed".into());
                }
                results.lift = Some(lift);
            }
        }
        times.push(AnalysisTime {
            analysis,
            ms: t.elapsed().as_secs_f64() * 1e3,
        });
    }

    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo {
            name: "charcomplex",
            version: env!("CARGO_PKG_VERSION"),
        },
        input: InputEcho {
            source: config.source.clone(),
            analyses: config.analyses.iter().copied().collect(),
            emit_bases: config.emit_bases,
            max_rows: config.max_rows.to_string(),
            max_order: config.max_order,
        },
        conventions: CONVENTIONS,
        results,
        passed: failures.is_empty(),
        failures,
        timing: Timing {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
            analyses: times,
        },
    })
}

fn full_complex<'a>(
    slot: &'a mut Option<ComplexData>,
    source: &dyn CharacterSource,
    limits: &Limits,
) -> Result<&'a ComplexData, RunError> {
    if slot.is_none() {
        *slot = Some(source.complex(limits)?);
    }
    Ok(slot.as_ref().unwrap())
}

fn context<'a>(
    slot: &'a mut Option<DerivationContext>,
    source: &Source,
    limits: &Limits,
) -> Result<&'a DerivationContext, RunError> {
    if slot.is_none() {
        let Source::Group(g) = source else {
            unreachable!("checked before running")
        };
        *slot = Some(DerivationContext::new(g.clone(), limits)?);
    }
    Ok(slot.as_ref().unwrap())
}

fn derivations_result(
    c: &DerivationContext,
    emit_bases: bool,
    failures: &mut Vec<String>,
) -> Result<DerivationsResult, RunError> {
    let g = c.group();
    let lie = c.lie_structure();
    let mut round_trip = true;
    let mut all_locally_finite = true;
    for b in c.der_space().basis() {
        let d = c.derivation(b.clone())?;
        let chi = c.char_from_derivation(&d);
        all_locally_finite &= charcomplex::derivations::is_locally_finite(&chi, g.order());
        round_trip &= c.derivation_from_char(&chi).ok().as_ref() == Some(&d);
    }
    let point_characters_match = g.elements().all(|a| {
        let inner = c.inner_derivation(&charcomplex::derivations::GroupAlgebraElement::basis(a));
        c.char_from_derivation(&inner) == c.chi_point(a)
    });
    let dims_agree = c.der_space().dim() == c.x1_space().dim();
    // resolve on a non-central element when there is one
    let probe = g
        .elements()
        .find(|&a| g.centralizer(a).len() < g.order())
        .unwrap_or(g.identity());
    let result = DerivationsResult {
        der_dim: lie.der_space.dim(),
        x1_dim: c.x1_space().dim(),
        inner_dim: lie.inner.dim(),
        weak_inner_dim: lie.weak_inner.dim(),
        dims_agree,
        round_trip,
        all_locally_finite,
        point_characters_match,
        inner_sign: resolve_inner_sign(c, probe),
        pair_orientation: resolve_pair_orientation(c)?,
        der_basis: emit_bases.then(|| dump(&c.complex().level1_labels, c.der_space())),
    };
    for (ok, what) in [
        (dims_agree, "dim Der differs from dim X1"),
        (round_trip, "derivation/character round trip"),
        (
            point_characters_match,
            "point characters differ from inner derivations",
        ),
    ] {
        if !ok {
            failures.push(format!("derivations: {what}"));
        }
    }
    Ok(result)
}

fn lift_result(c: &ComplexData, emit_bases: bool) -> Result<LiftResult, RunError> {
    let x1 = c.x1_space();
    let mut boundary_preserved = true;
    let mut vanishes_on_spanning = true;
    let mut idempotent = true;
    let mut lifts = Vec::new();
    for v in x1.space.basis() {
        let lifted = c.lift_two_character(v)?;
        boundary_preserved &= c.boundary2.mul_vec(&lifted)? == c.boundary2.mul_vec(v)?;
        vanishes_on_spanning &= lifted
            .iter()
            .zip(&c.spanning)
            .all(|(x, &f)| !f || x.is_zero());
        idempotent &= c.lift_two_character(&lifted)? == lifted;
        lifts.push(strings(&lifted));
    }
    Ok(LiftResult {
        checked: x1.space.dim(),
        boundary_preserved,
        vanishes_on_spanning,
        idempotent,
        lifts: emit_bases.then(|| BasisDump {
            coordinates: c.level1_labels.clone(),
            vectors: lifts,
        }),
    })
}

/// Splits a comma-separated analysis list.
pub fn parse_analyses(list: &str) -> Result<BTreeSet<Analysis>, String> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}
