//! Operator norm, numerical radius, W-seminorms and Schatten quasi-norms of
//! operators on a [`NormedSpace`], with checks of the quasi-norm axioms.
//!
//! Polyhedral coordinate spaces (`l_1`, `l_inf`, weighted or not) and every
//! `p = 2` space have closed forms. Everything else goes through multi-start
//! ascent, which yields certified lower bounds: the returned witness attains
//! the reported value.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::normed_space::{pair, Kernel, NormedSpace};
use crate::optimize::{maximize_scale_invariant, AscentOptions};
use crate::scalar::{from_reals, random_matrix, to_reals, Field, FieldKind};
use crate::serde_support::{serialize_opt_vector, serialize_vector};

const PAIR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactFormula,
    VertexEnumeration,
    MultistartAscent,
    Quadrature,
}

impl Method {
    pub fn is_exact(self) -> bool {
        !matches!(self, Method::MultistartAscent)
    }
}

/// A point attaining a measured value: a unit vector, and for numerical
/// radii and W-seminorms the functional paired with it.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct Witness<S: Field> {
    #[serde(serialize_with = "serialize_vector")]
    pub x: DVector<S>,
    #[serde(serialize_with = "serialize_opt_vector")]
    pub functional: Option<DVector<S>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct MeasureResult<S: Field> {
    pub value: f64,
    pub method: Method,
    pub witness: Option<Witness<S>>,
    pub tolerance: f64,
}

impl<S: Field> MeasureResult<S> {
    pub fn exact(value: f64, method: Method) -> Self {
        Self {
            value,
            method,
            witness: None,
            tolerance: 1e-12,
        }
    }

    fn with_witness(
        value: f64,
        method: Method,
        x: DVector<S>,
        functional: Option<DVector<S>>,
    ) -> Self {
        let tolerance = if method.is_exact() { 1e-12 } else { 1e-6 };
        Self {
            value,
            method,
            witness: Some(Witness { x, functional }),
            tolerance,
        }
    }
}

const STOP_MARGIN: f64 = 1e-6;

/// Effort spent by the ascent fallback. Ignored on spaces with closed forms.
#[derive(Debug, Clone)]
pub struct MeasureOptions {
    /// Random sphere points ranked before the local searches.
    pub random_starts: usize,
    /// Independent local searches (restarts).
    pub restarts: usize,
    pub step_tol: f64,
    /// Cap on compass-search sweeps per local search.
    pub max_sweeps: usize,
    pub seed: u64,
    /// Stop searching once this value is certified from below.
    pub stop_at: Option<f64>,
}

impl MeasureOptions {
    pub fn operator_norm() -> Self {
        Self {
            random_starts: 64,
            restarts: 12,
            step_tol: 1e-10,
            max_sweeps: 4000,
            seed: 0x6f70,
            stop_at: None,
        }
    }

    pub fn numerical_radius() -> Self {
        Self {
            random_starts: 128,
            restarts: 16,
            step_tol: 1e-10,
            max_sweeps: 4000,
            seed: 0x6e72,
            stop_at: None,
        }
    }

    /// For repeated comparisons where good starting points are supplied as
    /// hints.
    pub fn light() -> Self {
        Self {
            random_starts: 16,
            restarts: 3,
            step_tol: 1e-9,
            max_sweeps: 4000,
            seed: 0x6c74,
            stop_at: None,
        }
    }

    /// A short polish of the supplied hints: when the hints carry a witness
    /// for a smaller value, the result is a certified lower bound above it.
    pub fn comparison() -> Self {
        Self {
            random_starts: 8,
            restarts: 1,
            step_tol: 1e-6,
            max_sweeps: 200,
            seed: 0x636d,
            stop_at: None,
        }
    }

    /// Stops once the value exceeds `reference` by a small margin: enough to
    /// settle a comparison against it.
    pub fn until(&self, reference: f64) -> Self {
        Self {
            stop_at: Some(reference + STOP_MARGIN * reference.abs().max(1.0)),
            ..self.clone()
        }
    }

    fn ascent(&self) -> AscentOptions {
        AscentOptions {
            local_searches: self.restarts,
            step_tol: self.step_tol,
            max_sweeps: self.max_sweeps,
            seed: self.seed,
            target: self.stop_at,
            ..AscentOptions::default()
        }
    }
}

/// A pair `(x*, x)` of unit functional and unit vector.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct NormingPair<S: Field> {
    #[serde(serialize_with = "serialize_vector")]
    pub functional: DVector<S>,
    #[serde(serialize_with = "serialize_vector")]
    pub vector: DVector<S>,
}

#[derive(Debug, Clone)]
pub enum WSet<S: Field> {
    Pairs(Vec<NormingPair<S>>),
    /// Every norming pair; the seminorm is then the numerical radius.
    AllNormingPairs,
}

#[derive(Debug, Clone)]
pub enum Measure<S: Field> {
    OperatorNorm,
    NumericalRadius,
    WSeminorm(WSet<S>),
    Schatten(f64),
}

impl<S: Field> Measure<S> {
    pub fn name(&self) -> String {
        match self {
            Measure::OperatorNorm => "op_norm".into(),
            Measure::NumericalRadius => "num_radius".into(),
            Measure::WSeminorm(_) => "w_seminorm".into(),
            Measure::Schatten(p) => format!("schatten_{p}"),
        }
    }

    /// Whether convex averages can increase the measure, so that averaging
    /// claims need an explicit check.
    pub fn needs_averaging_gate(&self) -> bool {
        matches!(self, Measure::Schatten(_))
    }

    /// Whether the measure is invariant under conjugation by Euclidean
    /// unitaries.
    pub fn is_unitarily_invariant(&self) -> bool {
        matches!(self, Measure::Schatten(_))
    }

    pub fn evaluate(
        &self,
        space: &NormedSpace,
        t: &DMatrix<S>,
        opts: &MeasureOptions,
        hints: &[DVector<S>],
    ) -> Result<MeasureResult<S>> {
        match self {
            Measure::OperatorNorm => operator_norm_with(space, t, opts, hints),
            Measure::NumericalRadius => numerical_radius_with(space, t, opts, hints),
            Measure::WSeminorm(w) => match w {
                WSet::AllNormingPairs => numerical_radius_with(space, t, opts, hints),
                WSet::Pairs(pairs) => {
                    check_operator(space, t)?;
                    Ok(w_seminorm_unchecked(t, pairs))
                }
            },
            Measure::Schatten(p) => {
                check_operator(space, t)?;
                Ok(MeasureResult::exact(
                    schatten_quasi_norm(t, *p)?,
                    Method::ExactFormula,
                ))
            }
        }
    }
}

pub(crate) fn check_operator<S: Field>(space: &NormedSpace, t: &DMatrix<S>) -> Result<()> {
    space.check_field::<S>()?;
    if t.nrows() != t.ncols() {
        return Err(Error::InvalidParameter(format!(
            "operator is {}x{}, expected square",
            t.nrows(),
            t.ncols()
        )));
    }
    if t.nrows() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: t.nrows(),
        });
    }
    if let Some(k) = t
        .iter()
        .position(|z| !z.to_c64().re.is_finite() || !z.to_c64().im.is_finite())
    {
        return Err(Error::NonFinite(k));
    }
    Ok(())
}

/// Coordinate lattice without grid evaluation: `(p, weights)`.
fn coordinate_lattice(space: &NormedSpace) -> Option<(f64, Vec<f64>)> {
    match space.kernel() {
        Kernel::Lattice {
            lattice,
            eval: None,
            ..
        } => Some((lattice.p(), lattice.weights_or_ones(space.dim()))),
        _ => None,
    }
}

/// `D T D^{-1}` with `D = diag(w)`: the operator in coordinates where the
/// weighted norm becomes unweighted.
fn rescale<S: Field>(t: &DMatrix<S>, w: &[f64]) -> DMatrix<S> {
    DMatrix::from_fn(t.nrows(), t.ncols(), |i, j| t[(i, j)].scale(w[i] / w[j]))
}

fn unit_vector<S: Field>(n: usize, i: usize) -> DVector<S> {
    let mut e = DVector::zeros(n);
    e[i] = S::one();
    e
}

pub fn operator_norm<S: Field>(space: &NormedSpace, t: &DMatrix<S>) -> Result<MeasureResult<S>> {
    operator_norm_with(space, t, &MeasureOptions::operator_norm(), &[])
}

pub fn operator_norm_with<S: Field>(
    space: &NormedSpace,
    t: &DMatrix<S>,
    opts: &MeasureOptions,
    hints: &[DVector<S>],
) -> Result<MeasureResult<S>> {
    check_operator(space, t)?;
    Ok(operator_norm_unchecked(space, t, opts, hints))
}

/// Operator norm value with default effort; used for induced matrix norms.
pub(crate) fn operator_norm_value<S: Field>(space: &NormedSpace, t: &DMatrix<S>) -> f64 {
    operator_norm_unchecked(space, t, &MeasureOptions::operator_norm(), &[]).value
}

fn operator_norm_unchecked<S: Field>(
    space: &NormedSpace,
    t: &DMatrix<S>,
    opts: &MeasureOptions,
    hints: &[DVector<S>],
) -> MeasureResult<S> {
    let n = space.dim();
    if let Some((p, w)) = coordinate_lattice(space) {
        if p == 1.0 || p.is_infinite() {
            let a = rescale(t, &w);
            if p == 1.0 {
                let (j, v) = (0..n)
                    .map(|j| (j, a.column(j).iter().map(|z| z.modulus()).sum::<f64>()))
                    .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
                let x = unit_vector::<S>(n, j).unscale(w[j]);
                return MeasureResult::with_witness(v, Method::ExactFormula, x, None);
            }
            let (i, v) = (0..n)
                .map(|i| (i, a.row(i).iter().map(|z| z.modulus()).sum::<f64>()))
                .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
            let x = DVector::from_fn(n, |s, _| a[(i, s)].phase().conjugate().unscale(w[s]));
            return MeasureResult::with_witness(v, Method::ExactFormula, x, None);
        }
    }
    if let Some(h) = space.hilbert() {
        let a = h.transport(t);
        let svd = a.svd(false, true);
        let v_t = svd.v_t.expect("requested");
        let k = svd.singular_values.imax();
        let top = v_t.row(k).adjoint();
        let x = h.pull_back(&top);
        let x = x.unscale(space.norm_unchecked(&x));
        return MeasureResult::with_witness(svd.singular_values[k], Method::ExactFormula, x, None);
    }
    let ratio = |r: &[f64]| {
        let x = from_reals::<S>(r);
        space.norm_unchecked(&(t * &x)) / space.norm_unchecked(&x)
    };
    let mut starts = ascent_starts(space, opts, hints);
    // Euclidean top right singular vector.
    let svd = t.clone().svd(false, true);
    let k = svd.singular_values.imax();
    starts.push(to_reals(&svd.v_t.expect("requested").row(k).adjoint()));
    let out = maximize_scale_invariant(ratio, starts, &opts.ascent());
    let x = from_reals::<S>(&out.point);
    let x = x.unscale(space.norm_unchecked(&x));
    MeasureResult::with_witness(out.value, Method::MultistartAscent, x, None)
}

fn ascent_starts<S: Field>(
    space: &NormedSpace,
    opts: &MeasureOptions,
    hints: &[DVector<S>],
) -> Vec<Vec<f64>> {
    let n = space.dim();
    let mut starts: Vec<Vec<f64>> = hints
        .iter()
        .filter(|h| h.len() == n)
        .map(to_reals)
        .collect();
    starts.extend((0..n).map(|i| to_reals(&unit_vector::<S>(n, i))));
    starts.extend(
        space
            .sphere_sample::<S>(opts.random_starts, opts.seed)
            .iter()
            .map(to_reals),
    );
    starts
}

pub fn numerical_radius<S: Field>(space: &NormedSpace, t: &DMatrix<S>) -> Result<MeasureResult<S>> {
    numerical_radius_with(space, t, &MeasureOptions::numerical_radius(), &[])
}

pub fn numerical_radius_with<S: Field>(
    space: &NormedSpace,
    t: &DMatrix<S>,
    opts: &MeasureOptions,
    hints: &[DVector<S>],
) -> Result<MeasureResult<S>> {
    check_operator(space, t)?;
    let n = space.dim();
    if let Some((p, w)) = coordinate_lattice(space) {
        if p == 1.0 || p.is_infinite() {
            let a = rescale(t, &w);
            // l_inf: vertex functional e_t, box vector aligned with row t.
            // l_1: vertex vector e_j, box functional aligned with column j.
            let line = |k: usize, s: usize| if p == 1.0 { a[(s, k)] } else { a[(k, s)] };
            let (k, v) = (0..n)
                .map(|k| {
                    let off: f64 = (0..n)
                        .filter(|&s| s != k)
                        .map(|s| line(k, s).modulus())
                        .sum();
                    (k, line(k, k).modulus() + off)
                })
                .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
            let diag = line(k, k).phase();
            let aligned = DVector::from_fn(n, |s, _| {
                if s == k {
                    S::one()
                } else {
                    diag * line(k, s).phase().conjugate()
                }
            });
            let (x, f) = if p == 1.0 {
                let x = unit_vector::<S>(n, k).unscale(w[k]);
                let f = DVector::from_fn(n, |s, _| aligned[s].scale(w[s]));
                (x, f)
            } else {
                let x = DVector::from_fn(n, |s, _| aligned[s].unscale(w[s]));
                let f = unit_vector::<S>(n, k).scale(w[k]);
                (x, f)
            };
            return Ok(MeasureResult::with_witness(
                v,
                Method::VertexEnumeration,
                x,
                Some(f),
            ));
        }
    }
    if let Some(h) = space.hilbert() {
        let a = h.transport(t);
        let (v, z) = euclidean_numerical_radius_vector(&a);
        let x = h.pull_back(&z);
        let f = h.pull_functional(&z.map(|c| c.conjugate()));
        return Ok(MeasureResult::with_witness(
            v,
            Method::ExactFormula,
            x,
            Some(f),
        ));
    }
    let objective = |r: &[f64]| {
        let x = from_reals::<S>(r);
        let x = x.unscale(space.norm_unchecked(&x));
        space.face_sup(&x, &(t * &x)).0
    };
    let mut starts = ascent_starts(space, opts, hints);
    starts.push(to_reals(&euclidean_numerical_radius_vector(t).1));
    let out = maximize_scale_invariant(objective, starts, &opts.ascent());
    let x = from_reals::<S>(&out.point);
    let x = x.unscale(space.norm_unchecked(&x));
    let (v, f) = space.face_sup(&x, &(t * &x));
    Ok(MeasureResult::with_witness(
        v,
        Method::MultistartAscent,
        x,
        Some(f),
    ))
}

/// Numerical radius of a square matrix on Euclidean space, with a unit
/// vector `z` attaining `|z^* A z|`.
pub fn euclidean_numerical_radius_vector<S: Field>(a: &DMatrix<S>) -> (f64, DVector<S>) {
    let k = a.nrows();
    if k == 0 {
        return (0.0, DVector::zeros(0));
    }
    let top_eigen = |h: DMatrix<S>, absolute: bool| -> (f64, DVector<S>) {
        let eig = h.symmetric_eigen();
        let score = |l: f64| if absolute { l.abs() } else { l };
        let i = (0..k)
            .max_by(|&i, &j| score(eig.eigenvalues[i]).total_cmp(&score(eig.eigenvalues[j])))
            .expect("k > 0");
        (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned())
    };
    let attained = |z: &DVector<S>| z.dotc(&(a * z)).modulus();
    if S::KIND == FieldKind::Real {
        let (_, z) = top_eigen((a + a.transpose()).scale(0.5), true);
        return (attained(&z), z);
    }
    // w(A) = max over theta of lambda_max(Re(e^{i theta} A)).
    let rotated = |theta: f64| {
        let u = S::from_c64(Complex64::from_polar(1.0, theta));
        let b = a * u;
        let h = (&b + b.adjoint()).scale(0.5);
        top_eigen(h, false)
    };
    let grid = 128usize;
    let step = std::f64::consts::TAU / grid as f64;
    let values: Vec<f64> = (0..grid).map(|i| rotated(i as f64 * step).0).collect();
    let mut order: Vec<usize> = (0..grid).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut best = (f64::NEG_INFINITY, DVector::zeros(k));
    for &i in order.iter().take(3) {
        let (mut lo, mut hi) = ((i as f64 - 1.0) * step, (i as f64 + 1.0) * step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut c, mut d) = (hi - g * (hi - lo), lo + g * (hi - lo));
        let (mut fc, mut fd) = (rotated(c).0, rotated(d).0);
        while hi - lo > 1e-10 {
            if fc >= fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = rotated(c).0;
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = rotated(d).0;
            }
        }
        let z = rotated(0.5 * (lo + hi)).1;
        let v = attained(&z);
        if v > best.0 {
            best = (v, z);
        }
    }
    best
}

pub fn w_seminorm<S: Field>(
    space: &NormedSpace,
    t: &DMatrix<S>,
    w: &WSet<S>,
) -> Result<MeasureResult<S>> {
    match w {
        WSet::AllNormingPairs => numerical_radius(space, t),
        WSet::Pairs(pairs) => {
            check_operator(space, t)?;
            validate_pairs(space, pairs)?;
            Ok(w_seminorm_unchecked(t, pairs))
        }
    }
}

fn w_seminorm_unchecked<S: Field>(t: &DMatrix<S>, pairs: &[NormingPair<S>]) -> MeasureResult<S> {
    let mut best: Option<(f64, usize)> = None;
    for (i, p) in pairs.iter().enumerate() {
        let v = pair(&p.functional, &(t * &p.vector)).modulus();
        if best.is_none_or(|b| v > b.0) {
            best = Some((v, i));
        }
    }
    match best {
        None => MeasureResult::exact(0.0, Method::VertexEnumeration),
        Some((v, i)) => MeasureResult::with_witness(
            v,
            Method::VertexEnumeration,
            pairs[i].vector.clone(),
            Some(pairs[i].functional.clone()),
        ),
    }
}

/// Checks `||x|| = ||x*|| = 1` for every pair, to `1e-8`.
pub fn validate_pairs<S: Field>(space: &NormedSpace, pairs: &[NormingPair<S>]) -> Result<()> {
    for (index, p) in pairs.iter().enumerate() {
        let nx = space.norm(&p.vector).map_err(|e| Error::InvalidPair {
            index,
            reason: e.to_string(),
        })?;
        if (nx - 1.0).abs() > PAIR_TOL {
            return Err(Error::InvalidPair {
                index,
                reason: format!("||x|| = {nx}"),
            });
        }
        let nf = space
            .dual_norm(&p.functional)
            .map_err(|e| Error::InvalidPair {
                index,
                reason: e.to_string(),
            })?
            .value;
        if (nf - 1.0).abs() > PAIR_TOL {
            return Err(Error::InvalidPair {
                index,
                reason: format!("||x*|| = {nf}"),
            });
        }
    }
    Ok(())
}

/// `(sum sigma_i^p)^{1/p}` over the singular values of `t`.
pub fn schatten_quasi_norm<S: Field>(t: &DMatrix<S>, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Schatten exponent must be positive, got {p}"
        )));
    }
    let sv = t.clone().singular_values();
    Ok(schatten_from_singular_values(sv.as_slice(), p))
}

pub fn schatten_from_singular_values(sv: &[f64], p: f64) -> f64 {
    let top = sv.iter().fold(0.0f64, |a, &s| a.max(s));
    if top == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return top;
    }
    top * sv
        .iter()
        .map(|&s| (s / top).powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiNormReport {
    pub unit_one_ok: bool,
    pub unit_one_value: f64,
    #[serde(rename = "C_estimate")]
    pub c_estimate: f64,
    pub ideal_violation: f64,
    pub samples_used: usize,
    pub seed: u64,
}

/// Empirical check of the quasi-norm axioms for a measure on `dim x dim`
/// matrices: `N(I_1) = 1`, the relaxed triangle inequality constant `C`,
/// and the ideal inequality `N(RST) <= ||R|| N(S) ||T||` with spectral
/// norms.
pub fn quasi_norm_axioms_check<S, F>(
    mut measure: F,
    dim: usize,
    samples: usize,
    seed: u64,
) -> Result<QuasiNormReport>
where
    S: Field,
    F: FnMut(&DMatrix<S>) -> Result<f64>,
{
    if samples < 10 {
        return Err(Error::InvalidParameter(format!(
            "need at least 10 samples, got {samples}"
        )));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let mut call = |m: &DMatrix<S>| measure(m).map_err(|e| Error::Callback(e.to_string()));
    let unit_one_value = call(&DMatrix::identity(1, 1))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c_estimate = 1.0f64;
    for k in 0..samples {
        let (s1, s2) = if k % 2 == 0 {
            (
                random_matrix::<S, _>(dim, dim, &mut rng),
                random_matrix::<S, _>(dim, dim, &mut rng),
            )
        } else {
            let rank_one = |rng: &mut ChaCha8Rng| {
                random_matrix::<S, _>(dim, 1, rng) * random_matrix::<S, _>(1, dim, rng)
            };
            (rank_one(&mut rng), rank_one(&mut rng))
        };
        let denom = call(&s1)? + call(&s2)?;
        if denom > 0.0 {
            c_estimate = c_estimate.max(call(&(&s1 + &s2))? / denom);
        }
    }
    let spectral = |m: &DMatrix<S>| m.clone().singular_values().max();
    let mut ideal_violation = f64::NEG_INFINITY;
    for _ in 0..samples {
        let r = random_matrix::<S, _>(dim, dim, &mut rng);
        let s = random_matrix::<S, _>(dim, dim, &mut rng);
        let t = random_matrix::<S, _>(dim, dim, &mut rng);
        let lhs = call(&(&r * &s * &t))?;
        ideal_violation = ideal_violation.max(lhs - spectral(&r) * call(&s)? * spectral(&t));
    }
    Ok(QuasiNormReport {
        unit_one_ok: (unit_one_value - 1.0).abs() <= 1e-12,
        unit_one_value,
        c_estimate,
        ideal_violation,
        samples_used: samples,
        seed,
    })
}

/// `min w(T) / ||T||` over sampled operators and the `extra` candidates.
/// Only an upper bound on the numerical index.
pub fn numerical_index_upper_bound<S: Field>(
    space: &NormedSpace,
    samples: usize,
    seed: u64,
    extra: &[DMatrix<S>],
) -> Result<f64> {
    if samples == 0 && extra.is_empty() {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let n = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<DMatrix<S>> = extra.to_vec();
    candidates.extend((0..samples).map(|_| random_matrix::<S, _>(n, n, &mut rng)));
    let opts = MeasureOptions::light();
    let mut best = 1.0f64;
    for t in &candidates {
        let norm = operator_norm_with(space, t, &opts, &[])?.value;
        if norm == 0.0 {
            continue;
        }
        let radius = numerical_radius_with(space, t, &opts, &[])?.value;
        best = best.min(radius / norm);
    }
    Ok(best.clamp(0.0, 1.0))
}

/// `N(L) <= max over the tail of N(L_n) + 1e-8`, the tail being the last
/// quarter of the sequence. The last term must lie within `1e-6` of `L`
/// entrywise.
pub fn semicontinuity_check<S, F>(
    mut measure: F,
    sequence: &[DMatrix<S>],
    limit: &DMatrix<S>,
) -> Result<bool>
where
    S: Field,
    F: FnMut(&DMatrix<S>) -> Result<f64>,
{
    let last = sequence
        .last()
        .ok_or_else(|| Error::InvalidParameter("empty operator sequence".into()))?;
    if last.shape() != limit.shape() {
        return Err(Error::DimensionMismatch {
            expected: limit.len(),
            found: last.len(),
        });
    }
    let defect = crate::scalar::max_abs_diff(last, limit);
    if defect > 1e-6 {
        return Err(Error::NonConvergent(defect));
    }
    let tail = sequence.len().div_ceil(4);
    let mut sup = f64::NEG_INFINITY;
    for l in &sequence[sequence.len() - tail..] {
        sup = sup.max(measure(l).map_err(|e| Error::Callback(e.to_string()))?);
    }
    let at_limit = measure(limit).map_err(|e| Error::Callback(e.to_string()))?;
    Ok(at_limit <= sup + 1e-8)
}
