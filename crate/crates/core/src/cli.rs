//! Batch jobs: a JSON job names a command, the space, subspace, group,
//! operators and measures; running it yields a report and an exit code.
//!
//! Exit codes: 0 success, 1 input or schema error, 2 the averaging
//! hypotheses fail, 3 a predicted inequality failed numerically.

use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::averaging::{
    average_validated, certify_minimality, commuting_projection_set, random_projection,
    CertifyOptions, CominimalityRow, ComparisonRow, ProjectionOperator, Subspace,
};
use crate::catalog::{self, ExampleStatus};
use crate::error::{Error, Result};
use crate::group_actions::{
    circle_rotation_action, cyclic_shift_group, dyadic_group, permutation_product_group,
    transpose_symmetrization_group, validate_hypotheses, FiniteGroup, GroupAction, DEFAULT_CAP,
};
use crate::normed_space::{NormedSpace, SpaceSpec};
use crate::operator_measures::{Measure, MeasureOptions, NormingPair, WSet};
use crate::scalar::{Field, FieldKind};
use crate::serde_support::{to_json_string, OperatorData, VectorData};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Construct,
    Measure,
    Certify,
    Catalog,
    Validate,
}

impl Command {
    fn needs_seed(self) -> bool {
        !matches!(self, Command::Measure)
    }
}

/// A space given inline or by the name of a catalog example.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Builtin(String),
    Spec(SpaceSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubspaceRef {
    Builtin(String),
    Coordinates {
        coordinates: Vec<usize>,
    },
    /// Basis vectors as the columns of a `dim x k` matrix.
    Basis(OperatorData),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinGroup {
    PermProduct,
    Dyadic,
    Circle,
    Transpose,
    CyclicShift,
    Trivial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Finite {
        elements: Vec<OperatorData>,
    },
    Generators {
        gens: Vec<OperatorData>,
        #[serde(default)]
        max_size: Option<usize>,
    },
    Builtin {
        name: BuiltinGroup,
        #[serde(default)]
        params: Value,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Catalog(String),
    Spec(GroupSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    OpNorm,
    NumRadius,
    WSeminorm,
    Schatten,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairData {
    pub functional: VectorData,
    pub vector: VectorData,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureParams {
    /// Schatten exponent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Explicit `W` for the `W`-seminorm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairData>>,
    /// Random norming pairs whose group orbit forms `W` (default 2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_seeds: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    #[serde(default, skip_serializing_if = "is_default")]
    pub params: MeasureParams,
}

fn is_default(p: &MeasureParams) -> bool {
    *p == MeasureParams::default()
}

impl MeasureSpec {
    pub fn of(kind: MeasureKind) -> Self {
        Self {
            kind,
            params: MeasureParams::default(),
        }
    }

    pub fn schatten(p: f64) -> Self {
        Self {
            kind: MeasureKind::Schatten,
            params: MeasureParams {
                p: Some(p),
                ..Default::default()
            },
        }
    }

    /// `op_norm`, `num_radius`, `w_seminorm`, `schatten:<p>`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| match t.split_once(':') {
                Some(("schatten", p)) => p
                    .parse::<f64>()
                    .map(Self::schatten)
                    .map_err(|_| Error::InvalidParameter(format!("bad Schatten exponent '{p}'"))),
                None => match t {
                    "op_norm" => Ok(Self::of(MeasureKind::OpNorm)),
                    "num_radius" => Ok(Self::of(MeasureKind::NumRadius)),
                    "w_seminorm" => Ok(Self::of(MeasureKind::WSeminorm)),
                    other => Err(Error::InvalidParameter(format!(
                        "unknown measure '{other}'"
                    ))),
                },
                Some(_) => Err(Error::InvalidParameter(format!("unknown measure '{t}'"))),
            })
            .collect()
    }

    fn resolve<S: Field>(
        &self,
        space: &NormedSpace,
        action: Option<&GroupAction>,
        seed: u64,
    ) -> Result<Measure<S>> {
        Ok(match self.kind {
            MeasureKind::OpNorm => Measure::OperatorNorm,
            MeasureKind::NumRadius => Measure::NumericalRadius,
            MeasureKind::Schatten => {
                let p = self
                    .params
                    .p
                    .ok_or_else(|| Error::InvalidParameter("schatten needs params.p".into()))?;
                if !(p > 0.0 && p.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "Schatten exponent must be positive, got {p}"
                    )));
                }
                Measure::Schatten(p)
            }
            MeasureKind::WSeminorm => match (&self.params.pairs, action) {
                (Some(pairs), _) => {
                    let pairs = pairs
                        .iter()
                        .map(|p| {
                            Ok(NormingPair {
                                functional: p.functional.to_vector::<S>()?,
                                vector: p.vector.to_vector::<S>()?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    crate::operator_measures::validate_pairs(space, &pairs)?;
                    Measure::WSeminorm(WSet::Pairs(pairs))
                }
                (None, Some(a)) => crate::averaging::invariant_w_seminorm(
                    space,
                    a,
                    self.params.orbit_seeds.unwrap_or(2),
                    seed,
                )?,
                (None, None) => Measure::WSeminorm(WSet::AllNormingPairs),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<SubspaceRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupRef>,
    /// Operator for `measure`; starting projection for `construct`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorData>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measures: Vec<MeasureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Catalog example for `catalog` and for builtin names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Value>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            space: None,
            subspace: None,
            group: None,
            operator: None,
            measures: Vec::new(),
            trials: None,
            seed: None,
            example: None,
            params: None,
            output: OutputSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// The rendered report of a finished job.
#[derive(Debug, Clone)]
pub struct JobOutcome {
    pub exit_code: i32,
    pub report: Value,
    /// Rows for CSV output.
    pub table: Vec<TableRow>,
}

impl JobOutcome {
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => to_json_string(&self.report),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.table {
                    w.serialize(row)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                String::from_utf8(bytes).map_err(|e| Error::InvalidParameter(e.to_string()))
            }
        }
    }
}

/// One flat line of a comparison, cominimality or measurement table.
#[derive(Debug, Clone, Default, Serialize)]
pub struct TableRow {
    pub table: String,
    pub trial: Option<usize>,
    pub seed: Option<u64>,
    pub measure: String,
    pub s: Option<String>,
    pub n_p: Option<f64>,
    pub n_qp: Option<f64>,
    pub n_q: Option<f64>,
    pub value: Option<f64>,
    pub method: Option<String>,
    pub claimed: Option<bool>,
    pub gate_lhs: Option<f64>,
    pub gate_rhs: Option<f64>,
    pub gate_ok: Option<bool>,
    pub pass: Option<bool>,
}

pub fn comparison_rows(rows: &[ComparisonRow]) -> Vec<TableRow> {
    rows.iter()
        .map(|r| TableRow {
            table: "comparison".into(),
            trial: Some(r.trial),
            seed: Some(r.seed),
            measure: r.measure.clone(),
            n_p: Some(r.n_p),
            n_qp: Some(r.n_qp),
            n_q: Some(r.n_q),
            claimed: Some(r.claimed),
            gate_lhs: r.gate.as_ref().map(|g| g.lhs),
            gate_rhs: r.gate.as_ref().map(|g| g.rhs),
            gate_ok: r.gate.as_ref().map(|g| g.ok),
            pass: Some(r.pass),
            ..Default::default()
        })
        .collect()
}

pub fn cominimality_rows(rows: &[CominimalityRow]) -> Vec<TableRow> {
    rows.iter()
        .map(|r| TableRow {
            table: "cominimality".into(),
            trial: Some(r.trial),
            seed: Some(r.seed),
            measure: r.measure.clone(),
            s: Some(r.s.clone()),
            n_p: Some(r.n_s_minus_p),
            n_q: Some(r.n_s_minus_q),
            claimed: Some(r.claimed),
            gate_lhs: r.gate.as_ref().map(|g| g.lhs),
            gate_rhs: r.gate.as_ref().map(|g| g.rhs),
            gate_ok: r.gate.as_ref().map(|g| g.ok),
            pass: Some(r.pass),
            ..Default::default()
        })
        .collect()
}

fn require<'a, T>(v: &'a Option<T>, what: &str, cmd: Command) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| {
        Error::InvalidParameter(format!("{cmd:?} job needs '{what}'").to_lowercase())
    })
}

fn catalog_example(job: &JobSpec, name: &str) -> Result<catalog::ResolvedExample> {
    let params = job.params.clone().unwrap_or(Value::Null);
    catalog::build_instance(name, &params)
}

fn is_catalog_name(name: &str) -> bool {
    catalog::EXAMPLE_NAMES.contains(&name)
}

fn read_json_file(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read '{path}': {e}")))?;
    Ok(serde_json::from_str(&text)?)
}

fn resolve_space(job: &JobSpec) -> Result<NormedSpace> {
    match require(&job.space, "space", job.command)? {
        SpaceRef::Builtin(name) if is_catalog_name(name) => {
            Ok(catalog_example(job, name)?.instance.space().clone())
        }
        SpaceRef::Builtin(path) => {
            NormedSpace::try_from(serde_json::from_value::<SpaceSpec>(read_json_file(path)?)?)
        }
        SpaceRef::Spec(spec) => NormedSpace::try_from(spec.clone()),
    }
}

fn resolve_subspace<S: Field>(job: &JobSpec, dim: usize) -> Result<Subspace> {
    match require(&job.subspace, "subspace", job.command)? {
        SubspaceRef::Builtin(name) => Ok(catalog_example(job, name)?.instance.subspace().clone()),
        SubspaceRef::Coordinates { coordinates } => Subspace::coordinate::<S>(dim, coordinates),
        SubspaceRef::Basis(b) => {
            if b.rows != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: b.rows,
                });
            }
            Subspace::new(b.to_matrix::<S>()?)
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PermProductParams {
    n: usize,
    m: usize,
    #[serde(default)]
    cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DyadicParams {
    m: usize,
    #[serde(default)]
    cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleParams {
    frequencies: Vec<i64>,
    #[serde(default)]
    include_constant: bool,
    #[serde(default)]
    nodes: Option<usize>,
    #[serde(default = "real_field")]
    field: FieldKind,
}

fn real_field() -> FieldKind {
    FieldKind::Real
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransposeParams {
    n: usize,
    #[serde(default)]
    signed_permutations: bool,
    #[serde(default)]
    cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SizeParams {
    size: usize,
}

pub fn resolve_group_spec<S: Field>(spec: &GroupSpec, dim: usize) -> Result<GroupAction> {
    let action = match spec {
        GroupSpec::Finite { elements } => {
            let els = elements
                .iter()
                .map(|e| e.to_matrix::<S>())
                .collect::<Result<Vec<_>>>()?;
            GroupAction::Finite(FiniteGroup::from_elements(els)?)
        }
        GroupSpec::Generators { gens, max_size } => {
            let gs = gens
                .iter()
                .map(|e| e.to_matrix::<S>())
                .collect::<Result<Vec<_>>>()?;
            GroupAction::Finite(FiniteGroup::from_generators(
                &gs,
                max_size.unwrap_or(DEFAULT_CAP),
            )?)
        }
        GroupSpec::Builtin { name, params } => {
            let params = if params.is_null() {
                json!({})
            } else {
                params.clone()
            };
            match name {
                BuiltinGroup::PermProduct => {
                    let p: PermProductParams = serde_json::from_value(params)?;
                    permutation_product_group(p.n, p.m, p.cap.unwrap_or(DEFAULT_CAP))?
                }
                BuiltinGroup::Dyadic => {
                    let p: DyadicParams = serde_json::from_value(params)?;
                    dyadic_group(p.m, p.cap.unwrap_or(DEFAULT_CAP))?
                }
                BuiltinGroup::Circle => {
                    let p: CircleParams = serde_json::from_value(params)?;
                    circle_rotation_action(&p.frequencies, p.include_constant, p.nodes, p.field)?
                }
                BuiltinGroup::Transpose => {
                    let p: TransposeParams = serde_json::from_value(params)?;
                    transpose_symmetrization_group(
                        p.n,
                        p.signed_permutations,
                        p.cap.unwrap_or(DEFAULT_CAP),
                    )?
                }
                BuiltinGroup::CyclicShift => {
                    let p: SizeParams = serde_json::from_value(params)?;
                    cyclic_shift_group(p.size)?
                }
                BuiltinGroup::Trivial => GroupAction::trivial(dim),
            }
        }
    };
    action.check_compatible::<S>(dim)?;
    Ok(action)
}

fn resolve_group<S: Field>(job: &JobSpec, dim: usize) -> Result<GroupAction> {
    match require(&job.group, "group", job.command)? {
        GroupRef::Catalog(path) if !is_catalog_name(path) => {
            resolve_group_spec::<S>(&serde_json::from_value(read_json_file(path)?)?, dim)
        }
        GroupRef::Catalog(name) => {
            let a = catalog_example(job, name)?.instance.action().clone();
            a.check_compatible::<S>(dim)?;
            Ok(a)
        }
        GroupRef::Spec(spec) => resolve_group_spec::<S>(spec, dim),
    }
}

fn envelope(job: &JobSpec, exit_code: i32, result: Value) -> Result<Value> {
    let status = match exit_code {
        EXIT_OK => "ok",
        EXIT_HYPOTHESIS => "hypothesis_failure",
        EXIT_VIOLATION => "violation",
        _ => "error",
    };
    Ok(json!({
        "tool": "minproj",
        "version": VERSION,
        "job": serde_json::to_value(job)?,
        "status": status,
        "exit_code": exit_code,
        "result": result,
    }))
}

/// Fills defaults so the embedded job reproduces the run exactly.
pub fn resolve_defaults(job: &JobSpec) -> Result<JobSpec> {
    let mut job = job.clone();
    if job.command.needs_seed() && job.seed.is_none() {
        return Err(Error::InvalidParameter(
            format!("{:?} job needs an explicit 'seed'", job.command).to_lowercase(),
        ));
    }
    match job.command {
        Command::Certify => {
            job.trials.get_or_insert(20);
            if job.measures.is_empty() {
                job.measures = vec![
                    MeasureSpec::of(MeasureKind::OpNorm),
                    MeasureSpec::of(MeasureKind::NumRadius),
                ];
            }
        }
        Command::Measure => {
            if job.measures.is_empty() {
                job.measures = vec![MeasureSpec::of(MeasureKind::OpNorm)];
            }
        }
        Command::Catalog => {
            if let Some(name) = &job.example {
                let mut params = job.params.clone().unwrap_or_else(|| json!({}));
                let obj = params.as_object_mut().ok_or_else(|| {
                    Error::InvalidParameter("params must be a JSON object".into())
                })?;
                if let Some(t) = job.trials {
                    obj.insert("trials".into(), json!(t));
                }
                obj.insert("seed".into(), json!(job.seed));
                job.params = Some(catalog::build_instance(name, &params)?.params);
            }
        }
        _ => {}
    }
    Ok(job)
}

/// Runs a job without writing anything. `Err` means exit code 1.
pub fn run_job(job: &JobSpec) -> Result<JobOutcome> {
    let job = resolve_defaults(job)?;
    if job.command == Command::Catalog {
        return run_catalog(&job);
    }
    let space = resolve_space(&job)?;
    match space.field() {
        FieldKind::Real => run_typed::<f64>(&job, &space),
        FieldKind::Complex => run_typed::<Complex64>(&job, &space),
    }
}

fn run_catalog(job: &JobSpec) -> Result<JobOutcome> {
    let Some(name) = &job.example else {
        let list = catalog::list();
        return Ok(JobOutcome {
            exit_code: EXIT_OK,
            report: envelope(job, EXIT_OK, serde_json::to_value(&list)?)?,
            table: Vec::new(),
        });
    };
    let report = catalog::run_example(name, job.params.as_ref().unwrap_or(&Value::Null))?;
    let exit_code = match report.status {
        ExampleStatus::Passed => EXIT_OK,
        ExampleStatus::HypothesisFailure => EXIT_HYPOTHESIS,
        ExampleStatus::Violation => EXIT_VIOLATION,
    };
    let mut table = comparison_rows(report.certificate.comparisons());
    table.extend(cominimality_rows(report.certificate.cominimality()));
    Ok(JobOutcome {
        exit_code,
        report: envelope(job, exit_code, serde_json::to_value(&report)?)?,
        table,
    })
}

fn run_typed<S: Field>(job: &JobSpec, space: &NormedSpace) -> Result<JobOutcome> {
    let seed = job.seed.unwrap_or(0);
    let n = space.dim();
    let (exit_code, result, table) = match job.command {
        Command::Measure => {
            let t = require(&job.operator, "operator", job.command)?.to_matrix::<S>()?;
            let action = match &job.group {
                Some(_) => Some(resolve_group::<S>(job, n)?),
                None => None,
            };
            let mut results = Vec::new();
            let mut table = Vec::new();
            for spec in &job.measures {
                let m = spec.resolve::<S>(space, action.as_ref(), seed)?;
                let mut opts = match m {
                    Measure::OperatorNorm => MeasureOptions::operator_norm(),
                    _ => MeasureOptions::numerical_radius(),
                };
                opts.seed ^= seed;
                let r = m.evaluate(space, &t, &opts, &[])?;
                table.push(TableRow {
                    table: "measure".into(),
                    measure: m.name(),
                    value: Some(r.value),
                    method: Some(format!("{:?}", r.method)),
                    ..Default::default()
                });
                results.push(json!({"measure": m.name(), "result": serde_json::to_value(&r)?}));
            }
            (EXIT_OK, json!({ "measurements": results }), table)
        }
        Command::Validate => {
            let v = resolve_subspace::<S>(job, n)?;
            let action = resolve_group::<S>(job, n)?;
            let report = validate_hypotheses::<S>(space, &v, &action, 32, seed)?;
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_HYPOTHESIS
            };
            let row = TableRow {
                table: "validate".into(),
                measure: "hypotheses".into(),
                value: Some(report.isometry_deviation.max(report.invariance_deviation)),
                pass: Some(report.passed()),
                ..Default::default()
            };
            (code, serde_json::to_value(&report)?, vec![row])
        }
        Command::Construct => {
            let v = resolve_subspace::<S>(job, n)?;
            let action = resolve_group::<S>(job, n)?;
            let report = validate_hypotheses::<S>(space, &v, &action, 32, seed)?;
            if !report.passed() {
                let result = json!({ "hypothesis_report": serde_json::to_value(&report)? });
                return Ok(JobOutcome {
                    exit_code: EXIT_HYPOTHESIS,
                    report: envelope(job, EXIT_HYPOTHESIS, result)?,
                    table: Vec::new(),
                });
            }
            let p = match &job.operator {
                Some(op) => ProjectionOperator::new(op.to_matrix::<S>()?, &v)?,
                None => random_projection::<S>(&v, 1.0, seed)?,
            };
            let q = average_validated(&v, &action, &p)?;
            let commutant = commuting_projection_set::<S>(space, &v, &action)?;
            let result = json!({
                "hypothesis_report": serde_json::to_value(&report)?,
                "projection": OperatorData::from_matrix(p.matrix()),
                "averaged": OperatorData::from_matrix(q.matrix()),
                "commutant_dimension": commutant.dimension,
                "commutant_route": commutant.route,
                "borderline": commutant.borderline,
                "commutation_defect": action.commutation_defect(q.matrix()),
            });
            (EXIT_OK, result, Vec::new())
        }
        Command::Certify => {
            let v = resolve_subspace::<S>(job, n)?;
            let action = resolve_group::<S>(job, n)?;
            let measures = job
                .measures
                .iter()
                .map(|m| m.resolve::<S>(space, Some(&action), seed))
                .collect::<Result<Vec<_>>>()?;
            let opts = CertifyOptions {
                trials: job.trials.unwrap_or(20),
                seed,
                ..Default::default()
            };
            let cert = certify_minimality(space, &v, &action, &measures, &opts)?;
            let code = if !cert.valid {
                EXIT_HYPOTHESIS
            } else if cert.violations > 0 {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            };
            let mut table = comparison_rows(&cert.comparisons);
            table.extend(cominimality_rows(&cert.cominimality));
            (code, serde_json::to_value(&cert)?, table)
        }
        Command::Catalog => unreachable!("handled before field dispatch"),
    };
    Ok(JobOutcome {
        exit_code,
        report: envelope(job, exit_code, result)?,
        table,
    })
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Runs the job, writes its report, prints diagnostics to standard error
/// and returns the process exit code. Nothing is written on input errors.
pub fn execute(job: &JobSpec) -> i32 {
    let outcome = match run_job(job) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let text = match outcome.render(job.output.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    match &job.output.path {
        Some(p) => {
            if let Err(e) = write_atomic(p, &text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{text}"),
    }
    match outcome.exit_code {
        EXIT_HYPOTHESIS => eprintln!("hypotheses fail; no minimality claim made"),
        EXIT_VIOLATION => eprintln!("certificate violation: a predicted inequality failed"),
        _ => {}
    }
    outcome.exit_code
}

pub const SCHEMA_NAMES: [&str; 4] = ["space", "operator", "group", "job"];

/// JSON schema documents for the on-disk formats.
pub fn emit_schema(which: &str) -> Result<String> {
    let doc = match which {
        "space" => space_schema(),
        "operator" => operator_schema(),
        "group" => group_schema(),
        "job" => job_schema(),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown schema '{other}'; known: {}",
                SCHEMA_NAMES.join(", ")
            )))
        }
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

const DRAFT: &str = "https://json-schema.org/draft/2020-12/schema";

fn exponent() -> Value {
    json!({"oneOf": [{"type": "number", "minimum": 1}, {"enum": ["inf", "infinity"]}]})
}

fn operator_schema() -> Value {
    json!({
        "$schema": DRAFT,
        "$id": "operator.schema.json",
        "title": "operator",
        "description": "Row-major matrix; imaginary parts present for complex operators.",
        "type": "object",
        "required": ["rows", "cols", "entries_real"],
        "properties": {
            "rows": {"type": "integer", "minimum": 1},
            "cols": {"type": "integer", "minimum": 1},
            "entries_real": {"type": "array", "items": {"type": "number"}},
            "entries_imag": {"type": "array", "items": {"type": "number"}}
        },
        "additionalProperties": false
    })
}

fn grid_schema() -> Value {
    json!({
        "type": "object",
        "required": ["grid_size", "interval"],
        "properties": {
            "grid_size": {"type": "integer", "minimum": 1},
            "interval": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            "placement": {"enum": ["left", "midpoint"]},
            "weights": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}}
        }
    })
}

fn basis_schema() -> Value {
    json!({
        "oneOf": [
            {"type": "object", "required": ["kind", "frequencies"], "properties": {
                "kind": {"const": "trig_real"},
                "frequencies": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "include_constant": {"type": "boolean"}}},
            {"type": "object", "required": ["kind", "frequencies"], "properties": {
                "kind": {"const": "trig_complex"},
                "frequencies": {"type": "array", "items": {"type": "integer"}}}},
            {"type": "object", "required": ["kind", "m"], "properties": {
                "kind": {"const": "rademacher"},
                "m": {"type": "integer", "minimum": 0}}}
        ]
    })
}

fn norm_schema() -> Value {
    json!({
        "oneOf": [
            {"type": "object", "required": ["kind", "p"], "properties": {"kind": {"const": "lp"}, "p": exponent()}},
            {"type": "object", "required": ["kind"], "properties": {"kind": {"const": "sup"}}},
            {"type": "object", "required": ["kind", "p", "weights"], "properties": {
                "kind": {"const": "weighted_lp"}, "p": exponent(),
                "weights": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}}}},
            {"type": "object", "required": ["kind", "phi"], "properties": {
                "kind": {"const": "orlicz_luxemburg"},
                "phi": {"type": "object", "required": ["kind"], "properties": {
                    "kind": {"enum": ["power", "power_sum"]}}}}},
            {"type": "object", "required": ["kind", "p", "grid"], "properties": {
                "kind": {"const": "function_lp"}, "p": exponent(), "grid": grid_schema(), "basis": basis_schema()}},
            {"type": "object", "required": ["kind", "grid"], "properties": {
                "kind": {"const": "function_sup"}, "grid": grid_schema(), "basis": basis_schema()}},
            {"type": "object", "required": ["kind", "inner", "n"], "properties": {
                "kind": {"const": "induced_operator"},
                "inner": {"$ref": "#/$defs/norm"},
                "n": {"type": "integer", "minimum": 1}}}
        ]
    })
}

fn space_schema() -> Value {
    json!({
        "$schema": DRAFT,
        "$id": "space.schema.json",
        "title": "space",
        "type": "object",
        "required": ["dim", "field", "norm"],
        "properties": {
            "dim": {"type": "integer", "minimum": 1},
            "field": {"enum": ["real", "complex"]},
            "norm": {"$ref": "#/$defs/norm"},
            "label": {"type": "string"}
        },
        "$defs": {"norm": norm_schema()}
    })
}

fn group_schema() -> Value {
    json!({
        "$schema": DRAFT,
        "$id": "group.schema.json",
        "title": "group",
        "oneOf": [
            {"type": "object", "required": ["kind", "elements"], "properties": {
                "kind": {"const": "finite"},
                "elements": {"type": "array", "items": {"$ref": "operator.schema.json"}}}},
            {"type": "object", "required": ["kind", "gens"], "properties": {
                "kind": {"const": "generators"},
                "gens": {"type": "array", "items": {"$ref": "operator.schema.json"}},
                "max_size": {"type": "integer", "minimum": 1}}},
            {"type": "object", "required": ["kind", "name"], "properties": {
                "kind": {"const": "builtin"},
                "name": {"enum": ["perm_product", "dyadic", "circle", "transpose", "cyclic_shift", "trivial"]},
                "params": {"type": "object"}}}
        ]
    })
}

fn job_schema() -> Value {
    let names: Vec<&str> = catalog::EXAMPLE_NAMES.to_vec();
    json!({
        "$schema": DRAFT,
        "$id": "job.schema.json",
        "title": "job",
        "type": "object",
        "required": ["command"],
        "properties": {
            "command": {"enum": ["construct", "measure", "certify", "catalog", "validate"]},
            "space": {"oneOf": [{"enum": names}, {"$ref": "space.schema.json"}]},
            "subspace": {"oneOf": [
                {"enum": names},
                {"type": "object", "required": ["coordinates"], "properties": {
                    "coordinates": {"type": "array", "items": {"type": "integer", "minimum": 0}}}},
                {"$ref": "operator.schema.json"}]},
            "group": {"oneOf": [{"enum": names}, {"$ref": "group.schema.json"}]},
            "operator": {"$ref": "operator.schema.json"},
            "measures": {"type": "array", "items": {
                "type": "object", "required": ["kind"], "properties": {
                    "kind": {"enum": ["op_norm", "num_radius", "w_seminorm", "schatten"]},
                    "params": {"type": "object", "properties": {
                        "p": {"type": "number", "exclusiveMinimum": 0},
                        "orbit_seeds": {"type": "integer", "minimum": 1},
                        "pairs": {"type": "array"}}}}}},
            "trials": {"type": "integer", "minimum": 1},
            "seed": {"type": "integer", "minimum": 0},
            "example": {"enum": names},
            "params": {"type": "object"},
            "output": {"type": "object", "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["json", "csv"]}}}
        },
        "additionalProperties": false
    })
}

/// Reads a JSON document from a file, or parses the argument itself when it
/// starts like JSON.
pub fn read_json_arg(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(serde_json::from_str(arg)?);
    }
    read_json_file(arg)
}

/// A CLI argument naming a catalog example or pointing at JSON.
pub fn parse_ref<T: serde::de::DeserializeOwned>(
    arg: &str,
    builtin: impl Fn(String) -> T,
) -> Result<T> {
    if catalog::EXAMPLE_NAMES.contains(&arg) {
        return Ok(builtin(arg.to_string()));
    }
    Ok(serde_json::from_value(read_json_arg(arg)?)?)
}
