//! Group averaging of projections, the commuting-projection solver, and
//! minimality / cominimality certificates.
//!
//! For a projection `P` onto an invariant subspace `V` and a group of
//! isometries, `Q_P = avg_g T_g^{-1} P T_g` is again a projection onto `V`
//! and commutes with the group. If only one projection onto `V` commutes with
//! the group, every `Q_P` equals it, and conjugation invariance of a measure
//! `N` gives `N(Q) <= avg_g N(T_g^{-1} P T_g) = N(P)`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_actions::{validate_hypotheses, GroupAction, HypothesisReport};
use crate::normed_space::{FaceDescription, NormedSpace};
use crate::operator_measures::{
    validate_pairs, Measure, MeasureOptions, MeasureResult, NormingPair, WSet,
};
use crate::scalar::{max_abs, max_abs_diff, random_matrix, Field, FieldKind, MatrixPair};
use crate::serde_support::serialize_matrix;

const RANK_TOL: f64 = 1e-10;
const PROJECTION_TOL: f64 = 1e-9;
const COMMUTATION_TOL: f64 = 1e-9;
const NULLSPACE_TOL: f64 = 1e-10;
const BORDERLINE_TOL: f64 = 1e-6;
const COMPARISON_TOL: f64 = 1e-8;
const GATE_TOL: f64 = 1e-9;
/// Largest number of unknowns `dim V * dim X` solved by dense SVD.
const NULLSPACE_MAX_UNKNOWNS: usize = 900;
/// Largest group order for which averaging-inequality sums are evaluated
/// term by term when a shortcut exists.
const EXPLICIT_GATE_ORDER: usize = 64;

/// Column span of a full-rank basis matrix.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: MatrixPair,
    pinv: MatrixPair,
    field: FieldKind,
}

impl Subspace {
    pub fn new<S: Field>(basis: DMatrix<S>) -> Result<Self> {
        let (n, k) = basis.shape();
        if k == 0 || n == 0 {
            return Err(Error::DegenerateSubspace("empty basis".into()));
        }
        if k > n {
            return Err(Error::DegenerateSubspace(format!(
                "{k} vectors in dimension {n}"
            )));
        }
        if basis
            .iter()
            .any(|z| !z.to_c64().re.is_finite() || !z.to_c64().im.is_finite())
        {
            return Err(Error::DegenerateSubspace("non-finite basis entries".into()));
        }
        let c = basis.map(|z| z.to_c64());
        let sv = c.clone().singular_values();
        if sv.min() <= RANK_TOL * sv.max() {
            return Err(Error::DegenerateSubspace(format!(
                "basis is rank deficient (singular values {:e} .. {:e})",
                sv.min(),
                sv.max()
            )));
        }
        let pinv = c
            .clone()
            .pseudo_inverse(0.0)
            .map_err(|e| Error::DegenerateSubspace(e.to_string()))?;
        Ok(Self {
            basis: MatrixPair::from_complex(c),
            pinv: MatrixPair::from_complex(pinv),
            field: S::KIND,
        })
    }

    /// The coordinate subspace spanned by the listed unit vectors.
    pub fn coordinate<S: Field>(dim: usize, coords: &[usize]) -> Result<Self> {
        let mut b = DMatrix::<S>::zeros(dim, coords.len());
        for (c, &i) in coords.iter().enumerate() {
            if i >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: i + 1,
                });
            }
            b[(i, c)] = S::one();
        }
        Self::new(b)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.re.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.re.ncols()
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn basis<S: Field>(&self) -> &DMatrix<S> {
        self.basis.get::<S>()
    }

    pub fn pinv<S: Field>(&self) -> &DMatrix<S> {
        self.pinv.get::<S>()
    }

    /// `B B^+`, the Euclidean-orthogonal projection onto the span.
    pub fn orthogonal_projection<S: Field>(&self) -> DMatrix<S> {
        self.basis::<S>() * self.pinv::<S>()
    }

    fn check_field<S: Field>(&self) -> Result<()> {
        if self.field == FieldKind::Complex && S::KIND == FieldKind::Real {
            return Err(Error::FieldMismatch {
                space: "real",
                scalars: "complex",
            });
        }
        Ok(())
    }
}

/// A projection onto a subspace `V`: fixes `V` and has range in `V`, hence
/// idempotent.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct ProjectionOperator<S: Field> {
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: DMatrix<S>,
}

impl<S: Field> ProjectionOperator<S> {
    pub fn new(matrix: DMatrix<S>, v: &Subspace) -> Result<Self> {
        let d = projection_defect(&matrix, v)?;
        if d > PROJECTION_TOL {
            return Err(Error::NotAProjection(d));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<S> {
        &self.matrix
    }
}

/// `max(|P B - B|, |P - B B^+ P|)` scaled by `max(1, max |P_ij|)`.
pub fn projection_defect<S: Field>(p: &DMatrix<S>, v: &Subspace) -> Result<f64> {
    v.check_field::<S>()?;
    let n = v.ambient_dim();
    if p.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.nrows(),
        });
    }
    let b = v.basis::<S>();
    let fix = max_abs_diff(&(p * b), b);
    let range = max_abs_diff(p, &(b * (v.pinv::<S>() * p)));
    Ok(fix.max(range) / max_abs(p).max(1.0))
}

/// `Q_0 + B C (I - Q_0)` with `Q_0 = B B^+` and `C` Gaussian with standard
/// deviation `spread`.
pub fn random_projection<S: Field>(
    v: &Subspace,
    spread: f64,
    seed: u64,
) -> Result<ProjectionOperator<S>> {
    v.check_field::<S>()?;
    let (n, k) = (v.ambient_dim(), v.dim());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: DMatrix<S> = random_matrix::<S, _>(k, n, &mut rng) * <S as Field>::from_f64(spread);
    let b = v.basis::<S>();
    let pinv = v.pinv::<S>();
    // P = B (B^+ + C - C B B^+), formed without any n x n intermediate.
    let inner = pinv + &c - (&c * b) * pinv;
    let p = b * inner;
    ProjectionOperator::new(p, v)
}

fn check_instance<S: Field>(space: &NormedSpace, v: &Subspace, action: &GroupAction) -> Result<()> {
    space.check_field::<S>()?;
    v.check_field::<S>()?;
    if v.ambient_dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: v.ambient_dim(),
        });
    }
    action.check_compatible::<S>(space.dim())
}

/// Averages `p` over the group after validating the hypotheses.
pub fn average_projection<S: Field>(
    space: &NormedSpace,
    v: &Subspace,
    action: &GroupAction,
    p: &ProjectionOperator<S>,
) -> Result<ProjectionOperator<S>> {
    check_instance::<S>(space, v, action)?;
    let report = validate_hypotheses::<S>(space, v, action, 16, 0x68_7970)?;
    if !report.passed() {
        return Err(Error::HypothesisFailure(report.failure_summary()));
    }
    average_validated(v, action, p)
}

/// Averaging once the hypotheses are known to hold.
pub fn average_validated<S: Field>(
    v: &Subspace,
    action: &GroupAction,
    p: &ProjectionOperator<S>,
) -> Result<ProjectionOperator<S>> {
    let d = projection_defect(&p.matrix, v)?;
    if d > PROJECTION_TOL {
        return Err(Error::NotAProjection(d));
    }
    let q = action.average(&p.matrix);
    let defect = action.commutation_defect(&q) / max_abs(&q).max(1.0);
    if defect > COMMUTATION_TOL {
        return Err(Error::CommutationViolated(defect));
    }
    ProjectionOperator::new(q, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutantRoute {
    /// Dense SVD of the linear constraints.
    Nullspace,
    /// Character inner product over the group.
    Character,
}

/// The affine set of projections onto `V` commuting with the group.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct CommutantSolution<S: Field> {
    pub dimension: usize,
    pub route: CommutantRoute,
    /// Some singular value fell between the zero threshold and `1e-6`.
    pub borderline: bool,
    pub smallest_kept_singular_value: Option<f64>,
    pub particular: Option<ProjectionOperator<S>>,
}

impl<S: Field> CommutantSolution<S> {
    pub fn unique(&self) -> bool {
        self.dimension == 0 && self.particular.is_some()
    }
}

/// Solves for projections `Q = B K` onto `V` with `K B = I` and
/// `K T_g = R_g K` on the generators, where `T_g B = B R_g`.
pub fn commuting_projection_set<S: Field>(
    space: &NormedSpace,
    v: &Subspace,
    action: &GroupAction,
) -> Result<CommutantSolution<S>> {
    check_instance::<S>(space, v, action)?;
    let (n, k) = (v.ambient_dim(), v.dim());
    if n * k <= NULLSPACE_MAX_UNKNOWNS {
        commutant_by_nullspace(v, action)
    } else {
        commutant_by_characters(v, action)
    }
}

pub fn commutant_by_nullspace<S: Field>(
    v: &Subspace,
    action: &GroupAction,
) -> Result<CommutantSolution<S>> {
    let (n, k) = (v.ambient_dim(), v.dim());
    let b = v.basis::<S>();
    let pinv = v.pinv::<S>();
    let gens = action.generator_indices();
    let unknowns = n * k;
    let rows = k * k + gens.len() * unknowns;
    let col = |a: usize, j: usize| a + j * k;
    let mut a = DMatrix::<S>::zeros(rows, unknowns);
    let mut rhs = DVector::<S>::zeros(rows);
    for p in 0..k {
        for q in 0..k {
            let r = p + q * k;
            for j in 0..n {
                a[(r, col(p, j))] = b[(j, q)];
            }
            if p == q {
                rhs[r] = S::one();
            }
        }
    }
    for (gi, &g) in gens.iter().enumerate() {
        let t = action.element::<S>(g);
        let rg = pinv * (&t * b);
        let base = k * k + gi * unknowns;
        for p in 0..k {
            for j in 0..n {
                let r = base + col(p, j);
                for l in 0..n {
                    a[(r, col(p, l))] += t[(l, j)];
                }
                for c in 0..k {
                    a[(r, col(c, j))] -= rg[(p, c)];
                }
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let top = sv.max();
    let zero = NULLSPACE_TOL * top.max(1.0);
    let rank = sv.iter().filter(|&&s| s > zero).count();
    let borderline = sv
        .iter()
        .any(|&s| s > zero && s <= BORDERLINE_TOL * top.max(1.0));
    let smallest = sv.iter().copied().filter(|&s| s > zero).reduce(f64::min);
    let x = svd
        .solve(&rhs, zero)
        .map_err(|e| Error::Unsupported(e.to_string()))?;
    let resid = (&a * &x - &rhs)
        .iter()
        .map(|z| z.to_c64().norm())
        .fold(0.0, f64::max);
    let particular = if resid <= 1e-8 {
        let kmat = DMatrix::from_fn(k, n, |p, j| x[col(p, j)]);
        ProjectionOperator::new(b * kmat, v).ok()
    } else {
        None
    };
    Ok(CommutantSolution {
        dimension: unknowns - rank,
        route: CommutantRoute::Nullspace,
        borderline,
        smallest_kept_singular_value: smallest,
        particular,
    })
}

/// `dim Hom_G(X/V, V) = avg_g conj(chi_W(g)) chi_V(g)` with
/// `chi_V(g) = tr(T_g B B^+)` and `chi_W = chi_X - chi_V`.
pub fn commutant_by_characters<S: Field>(
    v: &Subspace,
    action: &GroupAction,
) -> Result<CommutantSolution<S>> {
    let order = action.order();
    let pi = v.orthogonal_projection::<Complex64>();
    let n = v.ambient_dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for g in 0..order {
        let (chi_x, chi_v) = match action {
            GroupAction::CyclicShift { size } => {
                let chi_x = if g % size == 0 { *size as f64 } else { 0.0 };
                let chi_v: Complex64 = (0..n).map(|i| pi[((i + g) % n, i)]).sum();
                (Complex64::new(chi_x, 0.0), chi_v)
            }
            _ => {
                let t = action.element::<Complex64>(g);
                let chi_v: Complex64 = t
                    .iter()
                    .zip(pi.transpose().iter())
                    .map(|(a, b)| a * b)
                    .sum();
                (t.trace(), chi_v)
            }
        };
        let chi_w = chi_x - chi_v;
        acc += if S::KIND == FieldKind::Complex {
            chi_w.conj() * chi_v
        } else {
            chi_w * chi_v
        };
    }
    let value = acc.re / order as f64;
    let dimension = value.round();
    let borderline = (value - dimension).abs() > 1e-6 || acc.im.abs() / order as f64 > 1e-6;
    let q0 = ProjectionOperator::<S>::new(v.orthogonal_projection::<S>(), v)?;
    let particular = average_validated(v, action, &q0).ok();
    Ok(CommutantSolution {
        dimension: dimension.max(0.0) as usize,
        route: CommutantRoute::Character,
        borderline,
        smallest_kept_singular_value: None,
        particular,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateMethod {
    /// `sum_g w_g N(T_g^{-1} P T_g)` evaluated term by term.
    Explicit,
    /// Every term equals `N(P)`: the measure is unitarily invariant and the
    /// group acts unitarily.
    UnitaryInvariance,
}

#[derive(Debug, Clone, Serialize)]
pub struct AveragingCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
    pub method: GateMethod,
}

/// `N(avg_g T_g^{-1} P T_g) <= avg_g N(T_g^{-1} P T_g)`.
pub fn averaging_inequality_check<S, F>(
    mut measure: F,
    action: &GroupAction,
    p: &DMatrix<S>,
) -> Result<AveragingCheck>
where
    S: Field,
    F: FnMut(&DMatrix<S>) -> Result<f64>,
{
    let mut call = |m: &DMatrix<S>| measure(m).map_err(|e| Error::Callback(e.to_string()));
    let lhs = call(&action.average(p))?;
    let order = action.order();
    let mut rhs = 0.0;
    for g in 0..order {
        rhs += call(&action.conjugate(g, p))?;
    }
    rhs /= order as f64;
    Ok(AveragingCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + GATE_TOL,
        method: GateMethod::Explicit,
    })
}

fn gate_for<S: Field>(
    measure: &Measure<S>,
    space: &NormedSpace,
    action: &GroupAction,
    unitary: bool,
    averaged: &DMatrix<S>,
    p: &DMatrix<S>,
) -> Result<AveragingCheck> {
    let opts = MeasureOptions::light();
    let eval = |m: &DMatrix<S>| measure.evaluate(space, m, &opts, &[]).map(|r| r.value);
    if unitary && measure.is_unitarily_invariant() && action.order() > EXPLICIT_GATE_ORDER {
        let lhs = eval(averaged)?;
        let rhs = eval(p)?;
        return Ok(AveragingCheck {
            lhs,
            rhs,
            ok: lhs <= rhs + GATE_TOL,
            method: GateMethod::UnitaryInvariance,
        });
    }
    averaging_inequality_check(eval, action, p)
}

/// `(x* T_g^{-1}, T_g x)` for every group element and `seeds` random unit
/// vectors `x` with a norming functional `x*`: a group-invariant set `W`.
pub fn invariant_pair_orbit<S: Field>(
    space: &NormedSpace,
    action: &GroupAction,
    seeds: usize,
    seed: u64,
) -> Result<Vec<NormingPair<S>>> {
    action.check_compatible::<S>(space.dim())?;
    let mut out = Vec::new();
    for x in space.sphere_sample::<S>(seeds, seed) {
        let f = match space.norming_functionals(&x)? {
            FaceDescription::Unique { functional, .. } => functional,
            face => face.representatives().swap_remove(0),
        };
        for g in 0..action.order() {
            let inv_t = action.inverse_element::<S>(g).transpose();
            out.push(NormingPair {
                functional: inv_t * &f,
                vector: action.apply(g, &x),
            });
        }
    }
    validate_pairs(space, &out)?;
    Ok(out)
}

fn thorough<S: Field>(m: &Measure<S>) -> MeasureOptions {
    match m {
        Measure::OperatorNorm => MeasureOptions::operator_norm(),
        _ => MeasureOptions::numerical_radius(),
    }
}

/// Starting points for measuring `S - P`: the witness for `S - Q` moved by
/// every group element. Since `S - Q` averages the conjugates of `S - P`,
/// one of these points already certifies `N(S - P) >= N(S - Q)`.
fn transported_hints<S: Field>(
    space: &NormedSpace,
    action: &GroupAction,
    r: &MeasureResult<S>,
) -> Vec<DVector<S>> {
    if has_closed_forms(space) {
        return Vec::new();
    }
    match &r.witness {
        Some(w) => (0..action.order()).map(|g| action.apply(g, &w.x)).collect(),
        None => Vec::new(),
    }
}

fn has_closed_forms(space: &NormedSpace) -> bool {
    space.is_polyhedral_coordinate() || space.hilbert().is_some()
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub spread: f64,
    pub hypothesis_samples: usize,
    /// Also compare `N(I - Q)` with `N(I - P)` on every trial.
    pub cominimality: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            trials: 20,
            seed: 0,
            spread: 1.0,
            hypothesis_samples: 32,
            cominimality: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub trial: usize,
    pub seed: u64,
    pub measure: String,
    pub n_p: f64,
    pub n_qp: f64,
    pub n_q: f64,
    /// Whether the inequality `N(Q) <= N(P)` is asserted for this row.
    pub claimed: bool,
    pub gate: Option<AveragingCheck>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CominimalityRow {
    pub trial: usize,
    pub seed: u64,
    pub measure: String,
    pub s: String,
    pub n_s_minus_q: f64,
    pub n_s_minus_p: f64,
    pub claimed: bool,
    pub gate: Option<AveragingCheck>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct CommutantSummary {
    pub dimension: usize,
    pub route: CommutantRoute,
    pub borderline: bool,
    /// `max |Q - Q_solver|` when the solver produced a particular solution.
    pub solver_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct MinimalityCertificate<S: Field> {
    /// The averaging hypotheses hold; without them no claim is made.
    pub valid: bool,
    pub hypothesis_report: HypothesisReport,
    pub commutant: Option<CommutantSummary>,
    pub commutant_dimension: Option<usize>,
    pub unique_commuting: bool,
    pub q: Option<ProjectionOperator<S>>,
    pub measures: BTreeMap<String, f64>,
    pub measure_methods: BTreeMap<String, crate::operator_measures::Method>,
    pub comparisons: Vec<ComparisonRow>,
    /// Largest `max |Q_P - Q|` over the trials.
    pub averaging_spread: f64,
    pub averaging_inequality_ok: bool,
    pub cominimality: Vec<CominimalityRow>,
    /// `N(Q)`, an upper bound for the minimal value of `N` over projections
    /// onto `V` (attained when `unique_commuting`).
    pub lambda_upper: BTreeMap<String, f64>,
    pub violations: usize,
    pub notes: Vec<String>,
}

impl<S: Field> MinimalityCertificate<S> {
    pub fn claims_minimality(&self) -> bool {
        self.valid && self.unique_commuting
    }

    pub fn q_matrix(&self) -> Option<&DMatrix<S>> {
        self.q.as_ref().map(|q| &q.matrix)
    }
}

/// Validates hypotheses, solves for the commutant, averages random
/// projections and compares every measure on `Q` against them.
pub fn certify_minimality<S: Field>(
    space: &NormedSpace,
    v: &Subspace,
    action: &GroupAction,
    measures: &[Measure<S>],
    opts: &CertifyOptions,
) -> Result<MinimalityCertificate<S>> {
    if opts.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    check_instance::<S>(space, v, action)?;
    let report = validate_hypotheses::<S>(space, v, action, opts.hypothesis_samples, opts.seed)?;
    let mut cert = MinimalityCertificate {
        valid: report.passed(),
        hypothesis_report: report,
        commutant: None,
        commutant_dimension: None,
        unique_commuting: false,
        q: None,
        measures: BTreeMap::new(),
        measure_methods: BTreeMap::new(),
        comparisons: Vec::new(),
        averaging_spread: 0.0,
        averaging_inequality_ok: true,
        cominimality: Vec::new(),
        lambda_upper: BTreeMap::new(),
        violations: 0,
        notes: Vec::new(),
    };
    if !cert.valid {
        cert.notes.push(format!(
            "hypotheses fail, no minimality claim: {}",
            cert.hypothesis_report.failure_summary()
        ));
        return Ok(cert);
    }

    let commutant = commuting_projection_set::<S>(space, v, action)?;
    let q0 = ProjectionOperator::<S>::new(v.orthogonal_projection::<S>(), v)?;
    let q = average_validated(v, action, &q0)?;
    let solver_residual = commutant
        .particular
        .as_ref()
        .map(|p| max_abs_diff(&p.matrix, &q.matrix));
    let unique = commutant.unique();
    if commutant.borderline {
        cert.notes
            .push("commutant spectrum is borderline; uniqueness decided at threshold 1e-10".into());
    }
    if !unique {
        cert.notes.push(format!(
            "{} commuting projections form a set of dimension {}; comparisons recorded without claims",
            if commutant.particular.is_some() { "the" } else { "no" },
            commutant.dimension
        ));
    }
    cert.commutant_dimension = Some(commutant.dimension);
    cert.commutant = Some(CommutantSummary {
        dimension: commutant.dimension,
        route: commutant.route,
        borderline: commutant.borderline,
        solver_residual,
    });
    cert.unique_commuting = unique;
    if let (true, Some(r)) = (unique, solver_residual) {
        if r > 1e-8 {
            cert.violations += 1;
            cert.notes.push(format!(
                "averaged projection differs from the solver's by {r:e}"
            ));
        }
    }

    let unitary = action.is_unitary();
    let n = space.dim();
    let id = DMatrix::<S>::identity(n, n);
    let mut q_results = Vec::with_capacity(measures.len());
    let mut cq_results = Vec::with_capacity(measures.len());
    for m in measures {
        let r = m.evaluate(space, &q.matrix, &thorough(m), &[])?;
        cert.measures.insert(m.name(), r.value);
        cert.measure_methods.insert(m.name(), r.method);
        cert.lambda_upper.insert(m.name(), r.value);
        q_results.push(r);
        if opts.cominimality {
            cq_results.push(m.evaluate(space, &(&id - &q.matrix), &thorough(m), &[])?);
        }
    }
    let q_hints: Vec<Vec<DVector<S>>> = q_results
        .iter()
        .map(|r| transported_hints(space, action, r))
        .collect();
    let cq_hints: Vec<Vec<DVector<S>>> = cq_results
        .iter()
        .map(|r| transported_hints(space, action, r))
        .collect();

    let polish = MeasureOptions::comparison();
    for trial in 0..opts.trials {
        let seed = trial_seed(opts.seed, trial);
        let p = random_projection::<S>(v, opts.spread, seed)?;
        let qp = average_validated(v, action, &p)?;
        let spread = max_abs_diff(&qp.matrix, &q.matrix);
        cert.averaging_spread = cert.averaging_spread.max(spread);
        if unique && spread > 1e-8 {
            cert.violations += 1;
            cert.notes.push(format!(
                "trial {trial}: averaged projection moved by {spread:e} despite uniqueness"
            ));
        }
        let ip = &id - &p.matrix;
        for (mi, m) in measures.iter().enumerate() {
            let n_p = m
                .evaluate(
                    space,
                    &p.matrix,
                    &polish.until(q_results[mi].value),
                    &q_hints[mi],
                )?
                .value;
            let n_qp = m.evaluate(space, &qp.matrix, &polish, &q_hints[mi])?.value;
            let gate = if m.needs_averaging_gate() {
                Some(gate_for(m, space, action, unitary, &qp.matrix, &p.matrix)?)
            } else {
                None
            };
            if gate.as_ref().is_some_and(|g| !g.ok) {
                cert.averaging_inequality_ok = false;
            }
            let claimed = unique && gate.as_ref().is_none_or(|g| g.ok);
            let n_q = q_results[mi].value;
            let pass = !claimed || n_q <= n_p + COMPARISON_TOL;
            if !pass {
                cert.violations += 1;
            }
            cert.comparisons.push(ComparisonRow {
                trial,
                seed,
                measure: m.name(),
                n_p,
                n_qp,
                n_q,
                claimed,
                gate,
                pass,
            });
            if opts.cominimality {
                let n_sp = m
                    .evaluate(
                        space,
                        &ip,
                        &polish.until(cq_results[mi].value),
                        &cq_hints[mi],
                    )?
                    .value;
                let gate = if m.needs_averaging_gate() {
                    Some(gate_for(
                        m,
                        space,
                        action,
                        unitary,
                        &(&id - &qp.matrix),
                        &ip,
                    )?)
                } else {
                    None
                };
                let claimed = unique && gate.as_ref().is_none_or(|g| g.ok);
                let n_sq = cq_results[mi].value;
                let pass = !claimed || n_sq <= n_sp + COMPARISON_TOL;
                if !pass {
                    cert.violations += 1;
                }
                cert.cominimality.push(CominimalityRow {
                    trial,
                    seed,
                    measure: m.name(),
                    s: "I".into(),
                    n_s_minus_q: n_sq,
                    n_s_minus_p: n_sp,
                    claimed,
                    gate,
                    pass,
                });
            }
        }
    }
    cert.q = Some(q);
    Ok(cert)
}

pub(crate) fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(trial as u64 + 1)
}

/// Rows `N(S - Q)` against `N(S - P)` for random projections `P`; `S`
/// defaults to the identity and must commute with the group.
pub fn cominimality_check<S: Field>(
    space: &NormedSpace,
    v: &Subspace,
    action: &GroupAction,
    measure: &Measure<S>,
    s: Option<&DMatrix<S>>,
    trials: usize,
    seed: u64,
) -> Result<Vec<CominimalityRow>> {
    check_instance::<S>(space, v, action)?;
    let n = space.dim();
    let s = s.cloned().unwrap_or_else(|| DMatrix::identity(n, n));
    if s.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.nrows(),
        });
    }
    let defect = action.commutation_defect(&s) / max_abs(&s).max(1.0);
    if defect > COMMUTATION_TOL {
        return Err(Error::CommutationViolated(defect));
    }
    let report = validate_hypotheses::<S>(space, v, action, 16, seed)?;
    if !report.passed() {
        return Err(Error::HypothesisFailure(report.failure_summary()));
    }
    let commutant = commuting_projection_set::<S>(space, v, action)?;
    let unique = commutant.unique();
    let q0 = ProjectionOperator::<S>::new(v.orthogonal_projection::<S>(), v)?;
    let q = average_validated(v, action, &q0)?;
    let c = s[(0, 0)];
    let label = if max_abs_diff(&s, &(DMatrix::<S>::identity(n, n) * c)) == 0.0 {
        match c.to_c64() {
            z if z == Complex64::new(1.0, 0.0) => "I".to_string(),
            z if z.im == 0.0 => format!("{}I", z.re),
            z => format!("({z})I"),
        }
    } else if max_abs_diff(&s, &q.matrix) <= 1e-12 {
        "Q".to_string()
    } else {
        "S".to_string()
    };
    let sq = &s - &q.matrix;
    let r = measure.evaluate(space, &sq, &thorough(measure), &[])?;
    let hints = transported_hints(space, action, &r);
    let unitary = action.is_unitary();
    let polish = MeasureOptions::comparison().until(r.value);
    let mut rows = Vec::with_capacity(trials);
    for trial in 0..trials {
        let tseed = trial_seed(seed, trial);
        let p = random_projection::<S>(v, 1.0, tseed)?;
        let sp = &s - &p.matrix;
        let n_sp = measure.evaluate(space, &sp, &polish, &hints)?.value;
        let gate = if measure.needs_averaging_gate() {
            let avg = action.average(&sp);
            Some(gate_for(measure, space, action, unitary, &avg, &sp)?)
        } else {
            None
        };
        let claimed = unique && gate.as_ref().is_none_or(|g| g.ok);
        rows.push(CominimalityRow {
            trial,
            seed: tseed,
            measure: measure.name(),
            s: label.clone(),
            n_s_minus_q: r.value,
            n_s_minus_p: n_sp,
            claimed,
            gate,
            pass: !claimed || r.value <= n_sp + COMPARISON_TOL,
        });
    }
    Ok(rows)
}

/// Convenience: `W`-seminorm over the orbit of `seeds` random norming pairs.
pub fn invariant_w_seminorm<S: Field>(
    space: &NormedSpace,
    action: &GroupAction,
    seeds: usize,
    seed: u64,
) -> Result<Measure<S>> {
    Ok(Measure::WSeminorm(WSet::Pairs(invariant_pair_orbit(
        space, action, seeds, seed,
    )?)))
}

#[cfg(test)]
mod tests;
