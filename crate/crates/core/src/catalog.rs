//! Ready-to-run instances with known averaged projections: Fourier
//! partial sums on a periodic grid, frequency selection, truncated Riesz
//! projections, row/column means, Rademacher projections, matrix
//! symmetrization, and Schatten quasi-norms.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::averaging::{
    average_validated, certify_minimality, random_projection, CertifyOptions, CominimalityRow,
    ComparisonRow, MinimalityCertificate, ProjectionOperator, Subspace,
};
use crate::error::{Error, Result};
use crate::group_actions::{
    circle_action_for_basis, cyclic_shift_group, dyadic_group, permutation_product_group,
    transpose_symmetrization_group, validate_hypotheses, GroupAction, DEFAULT_CAP,
};
use crate::normed_space::{
    make_function_space, Exponent, FunctionBasis, FunctionSpaceKind, FunctionSpaceParams, Grid,
    NormSpec, NormedSpace,
};
use crate::operator_measures::{Measure, MeasureOptions};
use crate::scalar::{max_abs_diff, Field, FieldKind};

pub const EXAMPLE_NAMES: [&str; 7] = [
    "fourier",
    "frequency_selection",
    "riesz_truncated",
    "row_col_means",
    "rademacher",
    "symmetrization",
    "schatten_demo",
];

const RESIDUAL_TOL: f64 = 1e-8;
const MONOTONE_TOL: f64 = 1e-8;
const FOURIER_MAX_N: usize = 8;
const RADEMACHER_MAX_M: usize = 10;
/// Grid points per trigonometric instance, rounded up to a multiple of the
/// node count so node rotations are exact grid shifts.
const TRIG_GRID_TARGET: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub default_params: Value,
}

pub fn list() -> Vec<CatalogEntry> {
    let summaries = [
        "Fourier partial-sum projection on an M-point sup-norm grid under cyclic shifts",
        "coordinate projection onto leading trigonometric frequencies under circle rotations",
        "nonnegative-frequency projection on complex trigonometric L_p under circle rotations",
        "projection onto row plus column sums of n x m matrices under S_n x S_m",
        "projection onto r_0..r_n in dyadic L_p under the sign group",
        "symmetric part of n x n matrices under transposition, induced operator norm",
        "row/column instance measured by Schatten quasi-norms",
    ];
    EXAMPLE_NAMES
        .iter()
        .zip(summaries)
        .map(|(&name, summary)| CatalogEntry {
            name,
            summary,
            default_params: default_params(name).expect("known example"),
        })
        .collect()
}

pub fn default_params(name: &str) -> Result<Value> {
    let v = match name {
        "fourier" => serde_json::to_value(FourierParams::default()),
        "frequency_selection" => serde_json::to_value(FrequencySelectionParams::default()),
        "riesz_truncated" => serde_json::to_value(RieszParams::default()),
        "row_col_means" => serde_json::to_value(RowColParams::default()),
        "rademacher" => serde_json::to_value(RademacherParams::default()),
        "symmetrization" => serde_json::to_value(SymmetrizationParams::default()),
        "schatten_demo" => serde_json::to_value(SchattenParams::default()),
        other => return Err(unknown(other)),
    };
    Ok(v?)
}

fn unknown(name: &str) -> Error {
    Error::InvalidParameter(format!(
        "unknown example '{name}'; known: {}",
        EXAMPLE_NAMES.join(", ")
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FourierParams {
    pub n: usize,
    pub grid_size: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for FourierParams {
    fn default() -> Self {
        Self {
            n: 2,
            grid_size: 128,
            trials: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrequencySelectionParams {
    pub frequencies: Vec<u64>,
    /// Number of leading frequencies kept (the constant is always kept).
    pub keep: usize,
    pub p: Exponent,
    pub nodes: Option<usize>,
    pub grid_size: Option<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for FrequencySelectionParams {
    fn default() -> Self {
        Self {
            frequencies: vec![1, 2, 3],
            keep: 1,
            p: Exponent::INFINITY,
            nodes: None,
            grid_size: None,
            trials: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RieszParams {
    /// Frequencies `-m..=m`; the kept part is `0..=m`.
    pub m: usize,
    pub p: Exponent,
    pub nodes: Option<usize>,
    pub grid_size: Option<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for RieszParams {
    fn default() -> Self {
        Self {
            m: 2,
            p: Exponent::new(3.0),
            nodes: None,
            grid_size: None,
            trials: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RowColParams {
    pub n: usize,
    pub m: usize,
    /// Entrywise `l_p` norm on the `n x m` matrices.
    pub p: Exponent,
    pub trials: usize,
    pub seed: u64,
}

impl Default for RowColParams {
    fn default() -> Self {
        Self {
            n: 2,
            m: 2,
            p: Exponent::new(1.0),
            trials: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RademacherParams {
    pub m: usize,
    pub n: usize,
    pub p: Exponent,
    pub trials: usize,
    pub seed: u64,
}

impl Default for RademacherParams {
    fn default() -> Self {
        Self {
            m: 3,
            n: 1,
            p: Exponent::new(2.0),
            trials: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymmetrizationParams {
    pub n: usize,
    /// The matrices act on `l_p^n`; the space carries the induced norm.
    pub inner_p: Exponent,
    pub signed_permutations: bool,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SymmetrizationParams {
    fn default() -> Self {
        Self {
            n: 2,
            inner_p: Exponent::new(2.0),
            signed_permutations: false,
            trials: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchattenParams {
    pub n: usize,
    pub m: usize,
    pub exponents: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SchattenParams {
    fn default() -> Self {
        Self {
            n: 2,
            m: 2,
            exponents: vec![0.5, 1.0, 2.0],
            trials: 20,
            seed: 0,
        }
    }
}

/// Space, subspace, action, the expected averaged projection when known,
/// and the measures certified by default.
#[derive(Debug, Clone)]
pub struct Instance<S: Field> {
    pub space: NormedSpace,
    pub subspace: Subspace,
    pub action: GroupAction,
    pub expected_q: Option<DMatrix<S>>,
    pub measures: Vec<Measure<S>>,
}

#[derive(Debug, Clone)]
pub enum CatalogInstance {
    Real(Instance<f64>),
    Complex(Instance<Complex64>),
}

impl CatalogInstance {
    pub fn field(&self) -> FieldKind {
        match self {
            CatalogInstance::Real(_) => FieldKind::Real,
            CatalogInstance::Complex(_) => FieldKind::Complex,
        }
    }

    pub fn space(&self) -> &NormedSpace {
        match self {
            CatalogInstance::Real(i) => &i.space,
            CatalogInstance::Complex(i) => &i.space,
        }
    }

    pub fn subspace(&self) -> &Subspace {
        match self {
            CatalogInstance::Real(i) => &i.subspace,
            CatalogInstance::Complex(i) => &i.subspace,
        }
    }

    pub fn action(&self) -> &GroupAction {
        match self {
            CatalogInstance::Real(i) => &i.action,
            CatalogInstance::Complex(i) => &i.action,
        }
    }
}

/// A named instance with its resolved parameters.
#[derive(Debug, Clone)]
pub struct ResolvedExample {
    pub name: String,
    pub params: Value,
    pub trials: usize,
    pub seed: u64,
    pub instance: CatalogInstance,
}

fn parse<T: DeserializeOwned + Serialize>(params: &Value) -> Result<(T, Value)> {
    let p = if params.is_null() {
        Value::Object(Default::default())
    } else {
        params.clone()
    };
    let t: T = serde_json::from_value(p)?;
    let resolved = serde_json::to_value(&t)?;
    Ok((t, resolved))
}

pub fn build_instance(name: &str, params: &Value) -> Result<ResolvedExample> {
    let (trials, seed, params, instance) = match name {
        "fourier" => {
            let (p, v) = parse::<FourierParams>(params)?;
            (
                p.trials,
                p.seed,
                v,
                CatalogInstance::Real(fourier_instance(p.n, p.grid_size)?),
            )
        }
        "frequency_selection" => {
            let (p, v) = parse::<FrequencySelectionParams>(params)?;
            (
                p.trials,
                p.seed,
                v,
                CatalogInstance::Real(frequency_selection_instance(&p)?),
            )
        }
        "riesz_truncated" => {
            let (p, v) = parse::<RieszParams>(params)?;
            (
                p.trials,
                p.seed,
                v,
                CatalogInstance::Complex(riesz_instance(&p)?),
            )
        }
        "row_col_means" => {
            let (p, v) = parse::<RowColParams>(params)?;
            let mut inst = row_col_instance(p.n, p.m, p.p)?;
            inst.measures = vec![
                Measure::OperatorNorm,
                Measure::NumericalRadius,
                Measure::Schatten(2.0),
            ];
            (p.trials, p.seed, v, CatalogInstance::Real(inst))
        }
        "rademacher" => {
            let (p, v) = parse::<RademacherParams>(params)?;
            (
                p.trials,
                p.seed,
                v,
                CatalogInstance::Real(rademacher_instance(p.m, p.n, p.p)?),
            )
        }
        "symmetrization" => {
            let (p, v) = parse::<SymmetrizationParams>(params)?;
            (
                p.trials,
                p.seed,
                v,
                CatalogInstance::Real(symmetrization_instance(
                    p.n,
                    p.inner_p,
                    p.signed_permutations,
                )?),
            )
        }
        "schatten_demo" => {
            let (p, v) = parse::<SchattenParams>(params)?;
            if p.exponents.is_empty() || p.exponents.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
                return Err(Error::InvalidParameter(
                    "Schatten exponents must be positive and finite".into(),
                ));
            }
            let mut inst = row_col_instance(p.n, p.m, Exponent::new(2.0))?;
            inst.measures = p.exponents.iter().map(|&e| Measure::Schatten(e)).collect();
            (p.trials, p.seed, v, CatalogInstance::Real(inst))
        }
        other => return Err(unknown(other)),
    };
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    Ok(ResolvedExample {
        name: name.to_string(),
        params,
        trials,
        seed,
        instance,
    })
}

/// `D_n(t) = 1 + 2 sum_{k=1}^n cos(k t)`.
pub fn dirichlet_kernel(n: usize, t: f64) -> f64 {
    1.0 + 2.0 * (1..=n).map(|k| (k as f64 * t).cos()).sum::<f64>()
}

fn trig_grid_values(n: usize, grid_size: usize) -> DMatrix<f64> {
    DMatrix::from_fn(grid_size, 2 * n + 1, |i, c| {
        let t = TAU * i as f64 / grid_size as f64;
        match c {
            0 => 1.0,
            c => {
                let k = c.div_ceil(2) as f64;
                if c % 2 == 1 {
                    (k * t).cos()
                } else {
                    (k * t).sin()
                }
            }
        }
    })
}

/// Grid values of trigonometric polynomials of degree `<= n` inside the
/// sup-normed `R^M`, with cyclic shifts.
pub fn fourier_instance(n: usize, grid_size: usize) -> Result<Instance<f64>> {
    if n == 0 || n > FOURIER_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "fourier needs 1 <= n <= {FOURIER_MAX_N}, got {n}"
        )));
    }
    if grid_size < 4 * n + 1 {
        return Err(Error::QuadratureTooCoarse {
            nodes: grid_size,
            k_max: n as u64,
            needed: 4 * n + 1,
        });
    }
    let space = NormedSpace::new(
        grid_size,
        FieldKind::Real,
        NormSpec::FunctionSup {
            grid: Grid::periodic(grid_size),
            basis: None,
        },
        format!("C(2pi) sampled at {grid_size} points"),
    )?;
    let subspace = Subspace::new(trig_grid_values(n, grid_size))?;
    let m = grid_size;
    let expected = DMatrix::from_fn(m, m, |i, j| {
        let d = (i + m - j) % m;
        dirichlet_kernel(n, TAU * d as f64 / m as f64) / m as f64
    });
    Ok(Instance {
        space,
        subspace,
        action: cyclic_shift_group(grid_size)?,
        expected_q: Some(expected),
        measures: vec![Measure::OperatorNorm, Measure::NumericalRadius],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierNorms {
    pub n: usize,
    pub grid_size: usize,
    pub op_norm: f64,
    pub num_radius: f64,
    pub closed_form_residual: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `||F_n||` and `||F_n||_w` by averaging one random projection over the
/// shifts of an `M`-point grid.
pub fn fourier_norms(n: usize, grid_size: usize, seed: u64) -> Result<FourierNorms> {
    let inst = fourier_instance(n, grid_size)?;
    let report = validate_hypotheses::<f64>(&inst.space, &inst.subspace, &inst.action, 8, seed)?;
    if !report.passed() {
        return Err(Error::HypothesisFailure(report.failure_summary()));
    }
    let p = random_projection::<f64>(&inst.subspace, 1.0, seed)?;
    let q = average_validated(&inst.subspace, &inst.action, &p)?;
    drop(p);
    let opts = MeasureOptions::light();
    let op_norm = Measure::OperatorNorm
        .evaluate(&inst.space, &q.matrix, &opts, &[])?
        .value;
    let num_radius = Measure::NumericalRadius
        .evaluate(&inst.space, &q.matrix, &opts, &[])?
        .value;
    let residual = max_abs_diff(&q.matrix, inst.expected_q.as_ref().expect("closed form"));
    let (lower, upper) = lebesgue_bracket(n);
    Ok(FourierNorms {
        n,
        grid_size,
        op_norm,
        num_radius,
        closed_form_residual: residual,
        lower,
        upper,
    })
}

/// `[4/pi^2 ln n, ln n + 3]`.
pub fn lebesgue_bracket(n: usize) -> (f64, f64) {
    let l = (n as f64).ln();
    (4.0 / (PI * PI) * l, l + 3.0)
}

fn node_multiple_grid(nodes: usize, requested: Option<usize>) -> Result<usize> {
    match requested {
        Some(g) if g % nodes != 0 => Err(Error::InvalidParameter(format!(
            "grid size {g} must be a multiple of the {nodes} rotation nodes"
        ))),
        Some(g) => Ok(g),
        None => Ok(nodes * TRIG_GRID_TARGET.div_ceil(nodes)),
    }
}

fn coordinate_projection<S: Field>(dim: usize, keep: &[usize]) -> DMatrix<S> {
    let mut q = DMatrix::<S>::zeros(dim, dim);
    for &i in keep {
        q[(i, i)] = S::one();
    }
    q
}

pub fn frequency_selection_instance(p: &FrequencySelectionParams) -> Result<Instance<f64>> {
    if p.frequencies.is_empty() || p.keep > p.frequencies.len() {
        return Err(Error::InvalidParameter(
            "keep must not exceed the number of frequencies".into(),
        ));
    }
    if p.frequencies.contains(&0) {
        return Err(Error::InvalidParameter(
            "the constant is always included; list positive frequencies".into(),
        ));
    }
    let basis = FunctionBasis::TrigReal {
        frequencies: p.frequencies.clone(),
        include_constant: true,
    };
    let action = circle_action_for_basis(&basis, p.nodes)?;
    let grid = node_multiple_grid(action.order(), p.grid_size)?;
    let (space, _) = make_function_space(
        FunctionSpaceKind::TrigReal,
        &FunctionSpaceParams {
            frequencies: p.frequencies.iter().map(|&k| k as i64).collect(),
            include_constant: true,
            m: 0,
            grid_size: Some(grid),
            p: p.p,
        },
    )?;
    let dim = space.dim();
    let keep: Vec<usize> = (0..1 + 2 * p.keep).collect();
    Ok(Instance {
        subspace: Subspace::coordinate::<f64>(dim, &keep)?,
        expected_q: Some(coordinate_projection(dim, &keep)),
        space,
        action,
        measures: vec![Measure::OperatorNorm, Measure::NumericalRadius],
    })
}

pub fn riesz_instance(p: &RieszParams) -> Result<Instance<Complex64>> {
    if p.m == 0 {
        return Err(Error::InvalidParameter(
            "riesz_truncated needs m >= 1".into(),
        ));
    }
    if p.p.is_infinite() || p.p.value() <= 1.0 {
        return Err(Error::InvalidParameter(
            "riesz_truncated needs 1 < p < inf".into(),
        ));
    }
    let m = p.m as i64;
    let freqs: Vec<i64> = (-m..=m).collect();
    let basis = FunctionBasis::TrigComplex {
        frequencies: freqs.clone(),
    };
    let action = circle_action_for_basis(&basis, p.nodes)?;
    let grid = node_multiple_grid(action.order(), p.grid_size)?;
    let (space, _) = make_function_space(
        FunctionSpaceKind::TrigComplex,
        &FunctionSpaceParams {
            frequencies: freqs,
            include_constant: false,
            m: 0,
            grid_size: Some(grid),
            p: p.p,
        },
    )?;
    let dim = space.dim();
    let keep: Vec<usize> = (p.m..dim).collect();
    Ok(Instance {
        subspace: Subspace::coordinate::<Complex64>(dim, &keep)?,
        expected_q: Some(coordinate_projection(dim, &keep)),
        space,
        action,
        measures: vec![Measure::OperatorNorm, Measure::NumericalRadius],
    })
}

/// Basis of `{a_i + b_j}` inside row-major `n x m` matrices.
pub fn row_col_basis(n: usize, m: usize) -> DMatrix<f64> {
    let mut b = DMatrix::<f64>::zeros(n * m, n + m - 1);
    for i in 0..n {
        for j in 0..m {
            b[(i * m + j, 0)] = 1.0;
            if i > 0 {
                b[(i * m + j, i)] = 1.0;
            }
            if j > 0 {
                b[(i * m + j, n - 1 + j)] = 1.0;
            }
        }
    }
    b
}

/// Row mean plus column mean minus grand mean, as an operator on
/// row-major `n x m` matrices.
pub fn row_col_mean_operator(n: usize, m: usize) -> DMatrix<f64> {
    let (nf, mf) = (n as f64, m as f64);
    DMatrix::from_fn(n * m, n * m, |r, c| {
        let (i, j) = (r / m, r % m);
        let (k, l) = (c / m, c % m);
        let mut v = -1.0 / (nf * mf);
        if i == k {
            v += 1.0 / mf;
        }
        if j == l {
            v += 1.0 / nf;
        }
        v
    })
}

pub fn row_col_instance(n: usize, m: usize, p: Exponent) -> Result<Instance<f64>> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(
            "matrix sizes must be positive".into(),
        ));
    }
    let action = permutation_product_group(n, m, DEFAULT_CAP)?;
    let space = NormedSpace::new(
        n * m,
        FieldKind::Real,
        NormSpec::Lp { p },
        format!("l_{}({n}x{m})", p.value()),
    )?;
    Ok(Instance {
        space,
        subspace: Subspace::new(row_col_basis(n, m))?,
        action,
        expected_q: Some(row_col_mean_operator(n, m)),
        measures: vec![Measure::OperatorNorm, Measure::NumericalRadius],
    })
}

pub fn rademacher_instance(m: usize, n: usize, p: Exponent) -> Result<Instance<f64>> {
    if m > RADEMACHER_MAX_M {
        return Err(Error::CapExceeded {
            size: 1u128 << (m + 1),
            cap: 1u128 << (RADEMACHER_MAX_M + 1),
        });
    }
    if n > m {
        return Err(Error::InvalidParameter(format!(
            "need n <= m, got n = {n}, m = {m}"
        )));
    }
    let (space, _) = make_function_space(
        FunctionSpaceKind::Rademacher,
        &FunctionSpaceParams {
            frequencies: vec![],
            include_constant: false,
            m,
            grid_size: None,
            p,
        },
    )?;
    let keep: Vec<usize> = (0..=n).collect();
    Ok(Instance {
        subspace: Subspace::coordinate::<f64>(m + 1, &keep)?,
        expected_q: Some(coordinate_projection(m + 1, &keep)),
        space,
        action: dyadic_group(m, DEFAULT_CAP)?,
        measures: vec![Measure::OperatorNorm, Measure::NumericalRadius],
    })
}

/// `(L + L^T) / 2` on row-major `n x n` matrices.
pub fn symmetrization_operator(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n * n, n * n, |r, c| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        0.5 * (((i, j) == (k, l)) as u8 as f64 + ((i, j) == (l, k)) as u8 as f64)
    })
}

pub fn symmetrization_instance(n: usize, inner_p: Exponent, signed: bool) -> Result<Instance<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "symmetrization needs n >= 2".into(),
        ));
    }
    let mut cols = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut v = vec![0.0; n * n];
            v[i * n + j] = 1.0;
            v[j * n + i] = 1.0;
            cols.push(v);
        }
    }
    let basis = DMatrix::from_fn(n * n, cols.len(), |r, c| cols[c][r]);
    let space = NormedSpace::new(
        n * n,
        FieldKind::Real,
        NormSpec::InducedOperator {
            inner: Box::new(NormSpec::Lp { p: inner_p }),
            n,
        },
        format!("L(l_{}^{n})", inner_p.value()),
    )?;
    Ok(Instance {
        space,
        subspace: Subspace::new(basis)?,
        action: transpose_symmetrization_group(n, signed, DEFAULT_CAP)?,
        expected_q: Some(symmetrization_operator(n)),
        measures: vec![Measure::OperatorNorm],
    })
}

/// Certificate over either field.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum AnyCertificate {
    Real(MinimalityCertificate<f64>),
    Complex(MinimalityCertificate<Complex64>),
}

macro_rules! both {
    ($self:expr, $c:ident => $e:expr) => {
        match $self {
            AnyCertificate::Real($c) => $e,
            AnyCertificate::Complex($c) => $e,
        }
    };
}

impl AnyCertificate {
    pub fn valid(&self) -> bool {
        both!(self, c => c.valid)
    }
    pub fn unique_commuting(&self) -> bool {
        both!(self, c => c.unique_commuting)
    }
    pub fn commutant_dimension(&self) -> Option<usize> {
        both!(self, c => c.commutant_dimension)
    }
    pub fn violations(&self) -> usize {
        both!(self, c => c.violations)
    }
    pub fn comparisons(&self) -> &[ComparisonRow] {
        both!(self, c => &c.comparisons)
    }
    pub fn cominimality(&self) -> &[CominimalityRow] {
        both!(self, c => &c.cominimality)
    }
    pub fn measures(&self) -> &std::collections::BTreeMap<String, f64> {
        both!(self, c => &c.measures)
    }
    pub fn hypothesis_summary(&self) -> String {
        both!(self, c => c.hypothesis_report.failure_summary())
    }
    pub fn claims_minimality(&self) -> bool {
        both!(self, c => c.claims_minimality())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lower: Option<f64>,
    pub value: f64,
    pub upper: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleStatus {
    Passed,
    /// The averaging hypotheses fail; no claims were made.
    HypothesisFailure,
    /// A predicted inequality, closed form or bound failed.
    Violation,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub params: Value,
    pub status: ExampleStatus,
    pub certificate: AnyCertificate,
    pub closed_form_residual: Option<f64>,
    pub bound_checks: Vec<BoundCheck>,
    pub runtime_ms: u64,
}

pub fn run_example(name: &str, params: &Value) -> Result<ExampleReport> {
    let start = Instant::now();
    let ex = build_instance(name, params)?;
    let opts = CertifyOptions {
        trials: ex.trials,
        seed: ex.seed,
        ..Default::default()
    };
    let (certificate, residual, mut checks) = match &ex.instance {
        CatalogInstance::Real(i) => {
            let (c, r, b) = certify_instance(i, &i.measures, &opts)?;
            (AnyCertificate::Real(c), r, b)
        }
        CatalogInstance::Complex(i) => {
            let (c, r, b) = certify_instance(i, &i.measures, &opts)?;
            (AnyCertificate::Complex(c), r, b)
        }
    };
    if name == "fourier" {
        let n = ex.params["n"].as_u64().unwrap_or(1) as usize;
        let (lower, upper) = lebesgue_bracket(n);
        for key in ["op_norm", "num_radius"] {
            if let Some(&value) = certificate.measures().get(key) {
                checks.push(BoundCheck {
                    name: format!("lebesgue_bracket_{key}"),
                    lower: Some(lower),
                    value,
                    upper: Some(upper),
                    pass: lower <= value && value <= upper,
                });
            }
        }
    }
    let status = if !certificate.valid() {
        ExampleStatus::HypothesisFailure
    } else if certificate.violations() > 0
        || residual.is_some_and(|r| r > RESIDUAL_TOL)
        || checks.iter().any(|c| !c.pass)
    {
        ExampleStatus::Violation
    } else {
        ExampleStatus::Passed
    };
    Ok(ExampleReport {
        name: ex.name,
        params: ex.params,
        status,
        certificate,
        closed_form_residual: residual,
        bound_checks: checks,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Certifies `inst` for `measures`, then compares `Q` with the closed form
/// and records `N(Q) <= min N(P)` over the claimed rows.
pub fn certify_instance<S: Field>(
    inst: &Instance<S>,
    measures: &[Measure<S>],
    opts: &CertifyOptions,
) -> Result<(MinimalityCertificate<S>, Option<f64>, Vec<BoundCheck>)> {
    let cert = certify_minimality(&inst.space, &inst.subspace, &inst.action, measures, opts)?;
    let residual = match (&cert.q, &inst.expected_q) {
        (Some(q), Some(e)) => Some(max_abs_diff(q.matrix(), e)),
        _ => None,
    };
    let mut checks = Vec::new();
    for (name, &value) in &cert.measures {
        let upper = cert
            .comparisons
            .iter()
            .filter(|r| r.claimed && &r.measure == name)
            .map(|r| r.n_p)
            .reduce(f64::min);
        checks.push(BoundCheck {
            name: format!("monotone_{name}"),
            lower: None,
            value,
            upper,
            pass: upper.is_none_or(|u| value <= u + MONOTONE_TOL),
        });
    }
    Ok((cert, residual, checks))
}

/// Operator norm, numerical radius, an invariant `W`-seminorm and Schatten
/// `1/2, 1, 2`.
pub fn standard_measures<S: Field>(
    inst: &Instance<S>,
    orbit_seeds: usize,
    seed: u64,
) -> Result<Vec<Measure<S>>> {
    Ok(vec![
        Measure::OperatorNorm,
        Measure::NumericalRadius,
        crate::averaging::invariant_w_seminorm(&inst.space, &inst.action, orbit_seeds, seed)?,
        Measure::Schatten(0.5),
        Measure::Schatten(1.0),
        Measure::Schatten(2.0),
    ])
}

/// The averaged projection of `Q_0` for an instance.
pub fn averaged_projection<S: Field>(inst: &Instance<S>) -> Result<ProjectionOperator<S>> {
    let q0 = ProjectionOperator::new(inst.subspace.orthogonal_projection::<S>(), &inst.subspace)?;
    average_validated(&inst.subspace, &inst.action, &q0)
}

#[cfg(test)]
mod tests;
