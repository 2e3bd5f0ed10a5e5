//! Finite-dimensional normed spaces: coordinate `l_p`, weighted `l_p`,
//! Luxemburg norms, grid-discretized function spaces and spaces of matrices
//! under an induced operator norm.
//!
//! Functionals pair with vectors bilinearly, `f(x) = sum f_i x_i`, with no
//! implicit conjugation. Duality maps on complex spaces therefore carry the
//! conjugate phase so that `J(x)(x) = 1`.

mod function;
mod lattice;
mod young;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use function::{
    make_function_space, rademacher, FunctionBasis, FunctionSpaceKind, FunctionSpaceParams, Grid,
    NodePlacement, TrigBlock,
};
pub(crate) use lattice::Lattice;
pub use young::{luxemburg, YoungFunction};

use crate::error::{Error, Result};
use crate::operator_measures::{self, MeasureResult, Method};
use crate::optimize::{maximize_scale_invariant, AscentOptions};
use crate::scalar::{from_reals, to_reals, Field, FieldKind, MatrixPair};

/// Exponent `p` in `[1, inf]` (or `(0, inf)` where quasi-norms are allowed).
/// Serialized as a number, or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Self {
        Exponent(p)
    }
    pub fn value(self) -> f64 {
        self.0
    }
    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
    /// Hölder conjugate.
    pub fn conjugate(self) -> Exponent {
        if self.0 == 1.0 {
            Exponent::INFINITY
        } else if self.0.is_infinite() {
            Exponent(1.0)
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }
    fn check_norm_range(self) -> Result<()> {
        if self.0 >= 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "norm exponent p = {} must lie in [1, inf]",
                self.0
            )))
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Exponent {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(Exponent(p)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => {
                Ok(Exponent::INFINITY)
            }
            Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid exponent {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    Lp {
        p: Exponent,
    },
    Sup,
    /// `(sum w_i |x_i|^p)^{1/p}`, or `max w_i |x_i|` for `p = inf`.
    WeightedLp {
        p: Exponent,
        weights: Vec<f64>,
    },
    OrliczLuxemburg {
        phi: YoungFunction,
    },
    /// Quadrature `L_p` norm of the function with the given coefficients;
    /// without a basis the coordinates are the grid values themselves.
    FunctionLp {
        p: Exponent,
        grid: Grid,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<FunctionBasis>,
    },
    /// Maximum modulus over the grid.
    FunctionSup {
        grid: Grid,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<FunctionBasis>,
    },
    /// `n x n` matrices flattened row-major, normed by the operator norm
    /// induced by `inner` on coordinate `n`-space.
    InducedOperator {
        inner: Box<NormSpec>,
        n: usize,
    },
}

/// Euclidean structure of a `p = 2` space: `||x|| = ||R x||_2`.
#[derive(Debug, Clone)]
pub(crate) enum Hilbert {
    Diagonal(Vec<f64>),
    Dense { r: MatrixPair, r_inv: MatrixPair },
}

impl Hilbert {
    /// `R T R^{-1}`, the operator transported to Euclidean coordinates.
    pub(crate) fn transport<S: Field>(&self, t: &DMatrix<S>) -> DMatrix<S> {
        match self {
            Hilbert::Diagonal(d) => {
                DMatrix::from_fn(t.nrows(), t.ncols(), |i, j| t[(i, j)].scale(d[i] / d[j]))
            }
            Hilbert::Dense { r, r_inv } => r.get::<S>() * t * r_inv.get::<S>(),
        }
    }
    pub(crate) fn pull_back<S: Field>(&self, y: &DVector<S>) -> DVector<S> {
        match self {
            Hilbert::Diagonal(d) => DVector::from_fn(y.len(), |i, _| y[i].unscale(d[i])),
            Hilbert::Dense { r_inv, .. } => r_inv.get::<S>() * y,
        }
    }
    /// A functional `g` on Euclidean coordinates pulled back to `f = R^T g`.
    pub(crate) fn pull_functional<S: Field>(&self, g: &DVector<S>) -> DVector<S> {
        match self {
            Hilbert::Diagonal(d) => DVector::from_fn(g.len(), |i, _| g[i].scale(d[i])),
            Hilbert::Dense { r, .. } => r.get::<S>().transpose() * g,
        }
    }
    /// Inverse of [`Hilbert::pull_functional`]: `g = R^{-T} f`.
    pub(crate) fn push_functional<S: Field>(&self, f: &DVector<S>) -> DVector<S> {
        match self {
            Hilbert::Diagonal(d) => DVector::from_fn(f.len(), |i, _| f[i].unscale(d[i])),
            Hilbert::Dense { r_inv, .. } => r_inv.get::<S>().transpose() * f,
        }
    }
}

#[derive(Debug)]
pub(crate) enum Kernel {
    /// Weighted `l_p` applied to coordinates, or to grid values `E x`.
    Lattice {
        lattice: Lattice,
        eval: Option<MatrixPair>,
        hilbert: Option<Hilbert>,
    },
    Luxemburg(YoungFunction),
    Induced {
        inner: NormedSpace,
        n: usize,
    },
}

/// On-disk form of a [`NormedSpace`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub dim: usize,
    pub field: FieldKind,
    pub norm: NormSpec,
    #[serde(default)]
    pub label: String,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "SpaceSpec", into = "SpaceSpec")]
pub struct NormedSpace {
    dim: usize,
    field: FieldKind,
    norm: NormSpec,
    label: String,
    kernel: Arc<Kernel>,
}

impl fmt::Debug for NormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormedSpace")
            .field("dim", &self.dim)
            .field("field", &self.field)
            .field("norm", &self.norm)
            .field("label", &self.label)
            .finish()
    }
}

impl TryFrom<SpaceSpec> for NormedSpace {
    type Error = Error;
    fn try_from(s: SpaceSpec) -> Result<Self> {
        NormedSpace::new(s.dim, s.field, s.norm, s.label)
    }
}

impl From<NormedSpace> for SpaceSpec {
    fn from(s: NormedSpace) -> Self {
        SpaceSpec {
            dim: s.dim,
            field: s.field,
            norm: s.norm,
            label: s.label,
        }
    }
}

/// The set `{x* : ||x*|| = 1, x*(x) = 1}` for a unit vector `x`.
#[derive(Debug, Clone)]
pub enum FaceDescription<S: Field> {
    /// Smooth point: the duality map. `approximate` marks numerically
    /// obtained functionals.
    Unique {
        functional: DVector<S>,
        approximate: bool,
    },
    /// Finite face: the convex hull of the listed functionals.
    Vertices(Vec<DVector<S>>),
    /// `l_1`-type face: coordinates in `fixed` are pinned, coordinates in
    /// `free` range over the disc of the given radius. `vertices` lists the
    /// real-sign vertices.
    Box {
        fixed: Vec<(usize, S)>,
        free: Vec<(usize, f64)>,
        vertices: Vec<DVector<S>>,
    },
}

impl<S: Field> FaceDescription<S> {
    /// Functionals spanning (or representing) the face.
    pub fn representatives(&self) -> Vec<DVector<S>> {
        match self {
            FaceDescription::Unique { functional, .. } => vec![functional.clone()],
            FaceDescription::Vertices(v) => v.clone(),
            FaceDescription::Box { vertices, .. } => vertices.clone(),
        }
    }
}

/// Bilinear pairing `f(x) = sum f_i x_i`.
pub fn pair<S: Field>(f: &DVector<S>, x: &DVector<S>) -> S {
    f.iter()
        .zip(x.iter())
        .fold(S::zero(), |acc, (a, b)| acc + *a * *b)
}

const SPHERE_TOL: f64 = 1e-10;

impl NormedSpace {
    pub fn new(
        dim: usize,
        field: FieldKind,
        norm: NormSpec,
        label: impl Into<String>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let kernel = build_kernel(dim, field, &norm)?;
        Ok(Self {
            dim,
            field,
            norm,
            label: label.into(),
            kernel: Arc::new(kernel),
        })
    }

    pub fn lp(dim: usize, field: FieldKind, p: f64) -> Result<Self> {
        Self::new(
            dim,
            field,
            NormSpec::Lp {
                p: Exponent::new(p),
            },
            format!("l_{p}^{dim}"),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn field(&self) -> FieldKind {
        self.field
    }
    pub fn norm_spec(&self) -> &NormSpec {
        &self.norm
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub(crate) fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub(crate) fn check_field<S: Field>(&self) -> Result<()> {
        if self.field == S::KIND {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                space: self.field.name(),
                scalars: S::KIND.name(),
            })
        }
    }

    pub(crate) fn check_vector<S: Field>(&self, x: &DVector<S>) -> Result<()> {
        self.check_field::<S>()?;
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if let Some(i) = x
            .iter()
            .position(|z| !z.to_c64().re.is_finite() || !z.to_c64().im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        Ok(())
    }

    pub fn norm<S: Field>(&self, x: &DVector<S>) -> Result<f64> {
        self.check_vector(x)?;
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked<S: Field>(&self, x: &DVector<S>) -> f64 {
        match self.kernel() {
            Kernel::Lattice { lattice, eval, .. } => match eval {
                Some(e) => lattice.norm(&(e.get::<S>() * x)),
                None => lattice.norm(x),
            },
            Kernel::Luxemburg(phi) => {
                let abs: Vec<f64> = x.iter().map(|z| z.modulus()).collect();
                luxemburg(phi, &abs)
            }
            Kernel::Induced { inner, n } => {
                let l = DMatrix::from_row_slice(*n, *n, x.as_slice());
                operator_measures::operator_norm_value(inner, &l)
            }
        }
    }

    /// `sup { |f(x)| : ||x|| = 1 }`.
    pub fn dual_norm<S: Field>(&self, f: &DVector<S>) -> Result<MeasureResult<S>> {
        self.check_vector(f)?;
        if let Some(v) = self.dual_norm_exact(f) {
            return Ok(MeasureResult::exact(v, Method::ExactFormula));
        }
        let ratio = |r: &[f64]| {
            let x = from_reals::<S>(r);
            pair(f, &x).modulus() / self.norm_unchecked(&x)
        };
        let mut starts: Vec<Vec<f64>> = self
            .sphere_sample::<S>(16, 0x0d0a)
            .iter()
            .map(to_reals)
            .collect();
        starts.push(to_reals(&f.map(|z| z.conjugate())));
        for i in 0..self.dim {
            let mut e = DVector::<S>::zeros(self.dim);
            e[i] = S::one();
            starts.push(to_reals(&e));
        }
        let out = maximize_scale_invariant(ratio, starts, &AscentOptions::default());
        let x = from_reals::<S>(&out.point);
        let x = x.unscale(self.norm_unchecked(&x));
        Ok(MeasureResult {
            value: out.value,
            method: Method::MultistartAscent,
            witness: Some(operator_measures::Witness {
                x,
                functional: None,
            }),
            tolerance: 1e-8,
        })
    }

    fn dual_norm_exact<S: Field>(&self, f: &DVector<S>) -> Option<f64> {
        match self.kernel() {
            Kernel::Lattice {
                lattice,
                eval: None,
                ..
            } => Some(lattice.dual_norm(f)),
            Kernel::Lattice {
                eval: Some(_),
                hilbert: Some(h),
                ..
            } => Some(h.push_functional(f).norm()),
            Kernel::Induced { inner, n } => {
                let g = DMatrix::from_row_slice(*n, *n, f.as_slice());
                match inner.kernel() {
                    Kernel::Lattice {
                        lattice,
                        eval: None,
                        ..
                    } if lattice.is_unweighted() => {
                        let p = lattice.p();
                        if p == 2.0 {
                            Some(g.singular_values().sum())
                        } else if p == 1.0 {
                            Some(
                                (0..*n)
                                    .map(|j| {
                                        g.column(j).iter().fold(0.0f64, |a, z| a.max(z.modulus()))
                                    })
                                    .sum(),
                            )
                        } else if p.is_infinite() {
                            Some(
                                (0..*n)
                                    .map(|i| {
                                        g.row(i).iter().fold(0.0f64, |a, z| a.max(z.modulus()))
                                    })
                                    .sum(),
                            )
                        } else {
                            None
                        }
                    }
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Parameterizes the face of norming functionals of a unit vector.
    pub fn norming_functionals<S: Field>(&self, x: &DVector<S>) -> Result<FaceDescription<S>> {
        self.check_vector(x)?;
        let nx = self.norm_unchecked(x);
        if (nx - 1.0).abs() > SPHERE_TOL {
            return Err(Error::NotOnSphere(nx));
        }
        Ok(match self.kernel() {
            Kernel::Lattice { lattice, eval, .. } => match eval {
                None => lattice.face(x),
                Some(e) => {
                    let e = e.get::<S>();
                    let pull = |psi: &DVector<S>| e.transpose() * psi;
                    match lattice.face(&(e * x)) {
                        FaceDescription::Unique {
                            functional,
                            approximate,
                        } => FaceDescription::Unique {
                            functional: pull(&functional),
                            approximate,
                        },
                        FaceDescription::Vertices(v) => {
                            FaceDescription::Vertices(dedup(v.iter().map(pull).collect()))
                        }
                        FaceDescription::Box { vertices, .. } => {
                            FaceDescription::Vertices(dedup(vertices.iter().map(pull).collect()))
                        }
                    }
                }
            },
            Kernel::Luxemburg(phi) => FaceDescription::Unique {
                functional: luxemburg_duality(phi, x),
                approximate: !phi.is_smooth(),
            },
            Kernel::Induced { .. } => {
                let (_, functional, exact) = self.face_sup_detail(x, x);
                FaceDescription::Unique {
                    functional,
                    approximate: !exact,
                }
            }
        })
    }

    /// `sup { |x*(y)| : x* norming for x }` for a unit `x`, together with a
    /// maximizing functional.
    pub(crate) fn face_sup<S: Field>(&self, x: &DVector<S>, y: &DVector<S>) -> (f64, DVector<S>) {
        let (v, f, _) = self.face_sup_detail(x, y);
        (v, f)
    }

    fn face_sup_detail<S: Field>(&self, x: &DVector<S>, y: &DVector<S>) -> (f64, DVector<S>, bool) {
        match self.kernel() {
            Kernel::Lattice { lattice, eval, .. } => match eval {
                None => {
                    let (v, f) = lattice.face_sup(x, y);
                    (v, f, true)
                }
                Some(e) => {
                    let e = e.get::<S>();
                    let (v, psi) = lattice.face_sup(&(e * x), &(e * y));
                    (v, e.transpose() * psi, true)
                }
            },
            Kernel::Luxemburg(phi) => {
                let j = luxemburg_duality(phi, x);
                (pair(&j, y).modulus(), j, phi.is_smooth())
            }
            Kernel::Induced { inner, n } => induced_face_sup(inner, *n, x, y, self),
        }
    }

    /// Deterministic unit vectors (Gaussian directions, normalized).
    pub fn sphere_sample<S: Field>(&self, count: usize, seed: u64) -> Vec<DVector<S>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| loop {
                let x = DVector::from_fn(self.dim, |_, _| S::gaussian(&mut rng));
                let n = self.norm_unchecked(&x);
                if n > 0.0 {
                    break x.unscale(n);
                }
            })
            .collect()
    }

    /// Scales a nonzero vector onto the unit sphere.
    pub fn normalize<S: Field>(&self, x: &DVector<S>) -> Result<DVector<S>> {
        let n = self.norm(x)?;
        if n == 0.0 {
            return Err(Error::InvalidParameter(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(x.unscale(n))
    }

    /// The Euclidean structure when the norm is a `p = 2` norm.
    pub(crate) fn hilbert(&self) -> Option<&Hilbert> {
        match self.kernel() {
            Kernel::Lattice { hilbert, .. } => hilbert.as_ref(),
            _ => None,
        }
    }

    /// Whether the sup over the unit ball of every operator norm and
    /// numerical radius has a closed form on this space.
    pub fn is_polyhedral_coordinate(&self) -> bool {
        matches!(self.kernel(), Kernel::Lattice { lattice, eval: None, .. } if lattice.p() == 1.0 || lattice.p().is_infinite())
    }
}

fn dedup<S: Field>(v: Vec<DVector<S>>) -> Vec<DVector<S>> {
    let mut out: Vec<DVector<S>> = Vec::new();
    for f in v {
        if !out
            .iter()
            .any(|g| (g - &f).iter().all(|z| z.modulus() < 1e-12))
        {
            out.push(f);
        }
    }
    out
}

/// Gradient of the Luxemburg norm at a unit vector.
fn luxemburg_duality<S: Field>(phi: &YoungFunction, x: &DVector<S>) -> DVector<S> {
    let denom: f64 = x
        .iter()
        .map(|z| phi.derivative(z.modulus()) * z.modulus())
        .sum();
    x.map(|z| {
        let m = z.modulus();
        if m == 0.0 {
            S::zero()
        } else {
            z.phase().conjugate().scale(phi.derivative(m) / denom)
        }
    })
}

fn induced_face_sup<S: Field>(
    inner: &NormedSpace,
    n: usize,
    x: &DVector<S>,
    y: &DVector<S>,
    outer: &NormedSpace,
) -> (f64, DVector<S>, bool) {
    let l = DMatrix::from_row_slice(n, n, x.as_slice());
    let m = DMatrix::from_row_slice(n, n, y.as_slice());
    let flatten = |f: &DMatrix<S>| DVector::from_iterator(n * n, f.transpose().iter().copied());
    if let Kernel::Lattice {
        lattice,
        eval: None,
        ..
    } = inner.kernel()
    {
        if lattice.is_unweighted() {
            let p = lattice.p();
            if p == 2.0 {
                // Face of the nuclear ball at L: { conj(U_k) Z V_k^T : Z psd, tr Z = 1 }
                // over the top singular space; its sup is the Euclidean
                // numerical radius of U_k^* M V_k.
                let svd = l.clone().svd(true, true);
                let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
                let top = svd.singular_values.max();
                let k = svd
                    .singular_values
                    .iter()
                    .filter(|&&s| s >= top * (1.0 - 1e-9))
                    .count();
                let idx: Vec<usize> = (0..svd.singular_values.len())
                    .filter(|&i| svd.singular_values[i] >= top * (1.0 - 1e-9))
                    .collect();
                let uk = DMatrix::from_fn(n, k, |i, j| u[(i, idx[j])]);
                let vk = DMatrix::from_fn(n, k, |i, j| vt[(idx[j], i)].conjugate());
                let a = uk.adjoint() * &m * &vk;
                let (val, z) = operator_measures::euclidean_numerical_radius_vector(&a);
                // Functional F with F(M) = z^* U_k^* M V_k z, i.e. F = conj(U_k z) (V_k z)^T.
                let uz = &uk * &z;
                let vz = &vk * &z;
                let f = DMatrix::from_fn(n, n, |i, j| uz[i].conjugate() * vz[j]);
                return (val, flatten(&f), true);
            }
            if p == 1.0 || p.is_infinite() {
                let by_columns = p == 1.0;
                let lines: Vec<Vec<(usize, usize)>> = (0..n)
                    .map(|a| {
                        (0..n)
                            .map(|b| if by_columns { (b, a) } else { (a, b) })
                            .collect()
                    })
                    .collect();
                let line_norm = |line: &Vec<(usize, usize)>| {
                    line.iter().map(|&ij| l[ij].modulus()).sum::<f64>()
                };
                let top = lines.iter().map(line_norm).fold(0.0f64, f64::max);
                let mut best = (f64::NEG_INFINITY, DMatrix::<S>::zeros(n, n));
                for line in lines
                    .iter()
                    .filter(|ln| line_norm(ln) >= top * (1.0 - 1e-9))
                {
                    let scale = l.iter().fold(0.0f64, |a, z| a.max(z.modulus()));
                    let mut f = DMatrix::<S>::zeros(n, n);
                    let mut acc = S::zero();
                    for &ij in line {
                        if l[ij].modulus() > 1e-12 * scale {
                            f[ij] = l[ij].phase().conjugate();
                            acc += f[ij] * m[ij];
                        }
                    }
                    let align = acc.phase();
                    let mut val = acc.modulus();
                    for &ij in line {
                        if l[ij].modulus() <= 1e-12 * scale {
                            f[ij] = align * m[ij].phase().conjugate();
                            val += m[ij].modulus();
                        }
                    }
                    if val > best.0 {
                        best = (val, f);
                    }
                }
                return (best.0, flatten(&best.1), true);
            }
        }
    }
    let j = finite_difference_duality(outer, x);
    (pair(&j, y).modulus(), j, false)
}

/// Numerical gradient of the norm, rescaled so that `J(x)(x) = 1`.
fn finite_difference_duality<S: Field>(space: &NormedSpace, x: &DVector<S>) -> DVector<S> {
    let r = to_reals(x);
    let h = 1e-6;
    let mut grad = vec![0.0; r.len()];
    let mut probe = r.clone();
    for k in 0..r.len() {
        probe[k] = r[k] + h;
        let up = space.norm_unchecked(&from_reals::<S>(&probe));
        probe[k] = r[k] - h;
        let down = space.norm_unchecked(&from_reals::<S>(&probe));
        probe[k] = r[k];
        grad[k] = (up - down) / (2.0 * h);
    }
    let j = if S::REAL_DIM == 2 {
        DVector::from_fn(x.len(), |i, _| {
            S::from_c64(Complex64::new(grad[2 * i], -grad[2 * i + 1]))
        })
    } else {
        DVector::from_fn(x.len(), |i, _| S::from_real(grad[i]))
    };
    let s = pair(&j, x);
    if s.modulus() > 0.0 {
        j.map(|z| z / s)
    } else {
        j
    }
}

fn build_kernel(dim: usize, field: FieldKind, norm: &NormSpec) -> Result<Kernel> {
    let coordinate = |p: Exponent, weights: Option<Vec<f64>>| -> Result<Kernel> {
        p.check_norm_range()?;
        let lattice = Lattice::new(p.value(), weights);
        let hilbert = (p.value() == 2.0).then(|| {
            Hilbert::Diagonal(
                lattice
                    .weights_or_ones(dim)
                    .iter()
                    .map(|w| w.sqrt())
                    .collect(),
            )
        });
        Ok(Kernel::Lattice {
            lattice,
            eval: None,
            hilbert,
        })
    };
    match norm {
        NormSpec::Lp { p } => coordinate(*p, None),
        NormSpec::Sup => coordinate(Exponent::INFINITY, None),
        NormSpec::WeightedLp { p, weights } => {
            if weights.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: weights.len(),
                });
            }
            if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
                return Err(Error::InvalidParameter("weights must be positive".into()));
            }
            coordinate(*p, Some(weights.clone()))
        }
        NormSpec::OrliczLuxemburg { phi } => {
            phi.validate()?;
            Ok(Kernel::Luxemburg(phi.clone()))
        }
        NormSpec::FunctionLp { p, grid, basis } => {
            function_kernel(dim, field, *p, grid, basis.as_ref())
        }
        NormSpec::FunctionSup { grid, basis } => {
            function_kernel(dim, field, Exponent::INFINITY, grid, basis.as_ref())
        }
        NormSpec::InducedOperator { inner, n } => {
            if n * n != dim {
                return Err(Error::InvalidParameter(format!(
                    "induced operator norm on {n}x{n} matrices needs dim {}, got {dim}",
                    n * n
                )));
            }
            let inner = NormedSpace::new(*n, field, (**inner).clone(), "inner")?;
            Ok(Kernel::Induced { inner, n: *n })
        }
    }
}

fn function_kernel(
    dim: usize,
    field: FieldKind,
    p: Exponent,
    grid: &Grid,
    basis: Option<&FunctionBasis>,
) -> Result<Kernel> {
    p.check_norm_range()?;
    grid.validate()?;
    let weights = grid.quadrature_weights();
    // The sup norm ignores quadrature weights.
    let lattice = if p.is_infinite() {
        Lattice::new(f64::INFINITY, None)
    } else {
        Lattice::new(p.value(), Some(weights.clone()))
    };
    match basis {
        None => {
            if dim != grid.grid_size {
                return Err(Error::DimensionMismatch {
                    expected: grid.grid_size,
                    found: dim,
                });
            }
            let hilbert = (p.value() == 2.0)
                .then(|| Hilbert::Diagonal(weights.iter().map(|w| w.sqrt()).collect()));
            Ok(Kernel::Lattice {
                lattice,
                eval: None,
                hilbert,
            })
        }
        Some(b) => {
            b.validate()?;
            if let Some(req) = b.required_field() {
                if req != field {
                    return Err(Error::FieldMismatch {
                        space: field.name(),
                        scalars: req.name(),
                    });
                }
            }
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: b.dim(),
                    found: dim,
                });
            }
            let e = b.evaluation_matrix(grid);
            let sv = e.clone().singular_values();
            let (smax, smin) = (sv.max(), sv.min());
            if e.nrows() < e.ncols() || smin <= 1e-10 * smax {
                return Err(Error::InvalidParameter(format!(
                    "grid of {} points does not separate the {} basis functions",
                    grid.grid_size,
                    b.dim()
                )));
            }
            let hilbert = if p.value() == 2.0 {
                let sw =
                    DMatrix::from_fn(e.nrows(), e.ncols(), |l, j| e[(l, j)] * weights[l].sqrt());
                let r = match field {
                    FieldKind::Real => sw.map(|z| z.re).qr().r().map(|x| Complex64::new(x, 0.0)),
                    FieldKind::Complex => sw.qr().r(),
                };
                let r_inv = r
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::InvalidParameter("singular Gram factor".into()))?;
                Some(Hilbert::Dense {
                    r: MatrixPair::from_complex(r),
                    r_inv: MatrixPair::from_complex(r_inv),
                })
            } else {
                None
            };
            Ok(Kernel::Lattice {
                lattice,
                eval: Some(MatrixPair::from_complex(e)),
                hilbert,
            })
        }
    }
}
