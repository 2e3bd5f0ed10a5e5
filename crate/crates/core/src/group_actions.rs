//! Compact groups acting by linear maps: finite groups given by elements or
//! generators, rotations of trigonometric coefficient spaces sampled at
//! exact quadrature nodes, and cyclic shifts of a periodic grid.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::TAU;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::averaging::Subspace;
use crate::error::{Error, Result};
use crate::normed_space::{FunctionBasis, NormedSpace, TrigBlock};
use crate::scalar::{max_abs, max_abs_diff, Field, FieldKind, MatrixPair};
use crate::serde_support::VectorData;

pub const DEFAULT_CAP: usize = 40320;
const HYPOTHESIS_TOL: f64 = 1e-9;
/// Above this order only the generators are checked.
const FULL_CHECK_ORDER: usize = 512;

/// Finite group of invertible matrices with inverse table and generators.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    elements: Vec<MatrixPair>,
    field: FieldKind,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
}

/// Coordinate layout of a trigonometric coefficient space.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleLayout {
    Real(Vec<TrigBlock>),
    Complex(Vec<i64>),
}

/// Rotations `f(t) -> f(t + g)` at the nodes `g_l = 2 pi l / N`, each with
/// weight `1/N`.
#[derive(Debug, Clone)]
pub struct CircleAction {
    layout: CircleLayout,
    nodes: usize,
    k_max: u64,
}

#[derive(Debug, Clone)]
pub enum GroupAction {
    Finite(FiniteGroup),
    Circle(CircleAction),
    /// `(T_d x)_i = x_{i+d mod size}` on grid values.
    CyclicShift {
        size: usize,
    },
}

fn key<S: Field>(m: &DMatrix<S>) -> Vec<i64> {
    let mut k = Vec::with_capacity(2 * m.len());
    for z in m.iter() {
        let c = z.to_c64();
        k.push((c.re * 1e6).round() as i64);
        k.push((c.im * 1e6).round() as i64);
    }
    k
}

fn entry_field(m: &DMatrix<Complex64>) -> FieldKind {
    if m.iter().all(|z| z.im == 0.0) {
        FieldKind::Real
    } else {
        FieldKind::Complex
    }
}

impl FiniteGroup {
    /// Breadth-first closure of `gens` under multiplication, in discovery
    /// order starting from the identity.
    pub fn from_generators<S: Field>(gens: &[DMatrix<S>], max_size: usize) -> Result<Self> {
        let dim = gens
            .first()
            .map(|g| g.nrows())
            .ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
        for (i, g) in gens.iter().enumerate() {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.nrows(),
                });
            }
            if g.clone().try_inverse().is_none()
                || g.clone().singular_values().min() <= 1e-12 * max_abs(g).max(1e-300)
            {
                return Err(Error::SingularGenerator(i));
            }
        }
        let mut elements: Vec<DMatrix<S>> = vec![DMatrix::identity(dim, dim)];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(key(&elements[0]), 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let next = &elements[i] * g;
                let k = key(&next);
                if index.contains_key(&k) {
                    continue;
                }
                if elements.len() == max_size {
                    return Err(Error::ClosureTooLarge(max_size));
                }
                index.insert(k, elements.len());
                queue.push_back(elements.len());
                elements.push(next);
            }
        }
        let generators = gens.iter().map(|g| index[&key(g)]).collect();
        Self::assemble(elements, index, generators)
    }

    /// A group listed explicitly; rejected unless closed under products.
    pub fn from_elements<S: Field>(elements: Vec<DMatrix<S>>) -> Result<Self> {
        let dim = elements
            .first()
            .map(|g| g.nrows())
            .ok_or_else(|| Error::InvalidParameter("empty group".into()))?;
        let mut index = HashMap::new();
        for (i, g) in elements.iter().enumerate() {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.nrows(),
                });
            }
            if g.clone().try_inverse().is_none() {
                return Err(Error::SingularGenerator(i));
            }
            if index.insert(key(g), i).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "element {i} is listed twice"
                )));
            }
        }
        for a in &elements {
            for b in &elements {
                if !index.contains_key(&key(&(a * b))) {
                    return Err(Error::InvalidParameter(
                        "listed elements are not closed under composition".into(),
                    ));
                }
            }
        }
        let generators = (0..elements.len()).collect();
        Self::assemble(elements, index, generators)
    }

    fn assemble<S: Field>(
        elements: Vec<DMatrix<S>>,
        index: HashMap<Vec<i64>, usize>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let mut inverses = Vec::with_capacity(elements.len());
        for g in &elements {
            let inv = g
                .clone()
                .try_inverse()
                .ok_or(Error::SingularGenerator(inverses.len()))?;
            let j = index.get(&key(&inv)).copied().ok_or_else(|| {
                Error::InvalidParameter("group is not closed under inverses".into())
            })?;
            inverses.push(j);
        }
        let complex: Vec<DMatrix<Complex64>> =
            elements.iter().map(|g| g.map(|z| z.to_c64())).collect();
        let field = if complex.iter().all(|g| entry_field(g) == FieldKind::Real) {
            FieldKind::Real
        } else {
            FieldKind::Complex
        };
        Ok(Self {
            elements: complex.into_iter().map(MatrixPair::from_complex).collect(),
            field,
            inverses,
            generators,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn inverse_index(&self, k: usize) -> usize {
        self.inverses[k]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains<S: Field>(&self, m: &DMatrix<S>) -> Option<usize> {
        self.index.get(&key(m)).copied()
    }

    pub fn get<S: Field>(&self, k: usize) -> &DMatrix<S> {
        self.elements[k].get::<S>()
    }
}

impl CircleAction {
    pub fn new(layout: CircleLayout, nodes: Option<usize>) -> Result<Self> {
        let k_max = match &layout {
            CircleLayout::Real(blocks) => blocks
                .iter()
                .map(|b| match b {
                    TrigBlock::Constant => 0,
                    TrigBlock::Pair(k) => *k,
                })
                .max()
                .unwrap_or(0),
            CircleLayout::Complex(f) => f.iter().map(|k| k.unsigned_abs()).max().unwrap_or(0),
        };
        let needed = 2 * k_max as usize + 1;
        let nodes = nodes.unwrap_or(4 * k_max as usize + 1);
        if nodes < needed {
            return Err(Error::QuadratureTooCoarse {
                nodes,
                k_max,
                needed,
            });
        }
        Ok(Self {
            layout,
            nodes,
            k_max,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    pub fn layout(&self) -> &CircleLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        match &self.layout {
            CircleLayout::Real(blocks) => blocks
                .iter()
                .map(|b| match b {
                    TrigBlock::Constant => 1,
                    TrigBlock::Pair(_) => 2,
                })
                .sum(),
            CircleLayout::Complex(f) => f.len(),
        }
    }

    pub fn field(&self) -> FieldKind {
        match self.layout {
            CircleLayout::Real(_) => FieldKind::Real,
            CircleLayout::Complex(_) => FieldKind::Complex,
        }
    }

    /// The rotation by angle `g` on coefficients.
    pub fn element<S: Field>(&self, g: f64) -> DMatrix<S> {
        let n = self.dim();
        let mut m = DMatrix::<S>::zeros(n, n);
        match &self.layout {
            CircleLayout::Real(blocks) => {
                let mut i = 0;
                for b in blocks {
                    match b {
                        TrigBlock::Constant => {
                            m[(i, i)] = S::one();
                            i += 1;
                        }
                        TrigBlock::Pair(k) => {
                            let (s, c) = (*k as f64 * g).sin_cos();
                            m[(i, i)] = <S as Field>::from_f64(c);
                            m[(i, i + 1)] = <S as Field>::from_f64(s);
                            m[(i + 1, i)] = <S as Field>::from_f64(-s);
                            m[(i + 1, i + 1)] = <S as Field>::from_f64(c);
                            i += 2;
                        }
                    }
                }
            }
            CircleLayout::Complex(freqs) => {
                for (i, &k) in freqs.iter().enumerate() {
                    m[(i, i)] = S::from_c64(Complex64::from_polar(1.0, k as f64 * g));
                }
            }
        }
        m
    }

    pub fn node_angle(&self, l: usize) -> f64 {
        TAU * l as f64 / self.nodes as f64
    }
}

/// Elements of `S_n x S_m` acting on `n x m` matrices flattened row-major by
/// `A(i, j) -> A(sigma(i), gamma(j))`.
pub fn permutation_product_group(n: usize, m: usize, cap: usize) -> Result<GroupAction> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(
            "matrix sizes must be positive".into(),
        ));
    }
    let factorial = |k: usize| (1..=k as u128).product::<u128>();
    let size = factorial(n) * factorial(m);
    if size > cap as u128 {
        return Err(Error::CapExceeded {
            size,
            cap: cap as u128,
        });
    }
    let dim = n * m;
    let operator = |sigma: &[usize], gamma: &[usize]| {
        let mut t = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..n {
            for j in 0..m {
                t[(i * m + j, sigma[i] * m + gamma[j])] = 1.0;
            }
        }
        t
    };
    let rows: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let cols: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let elements: Vec<DMatrix<f64>> = rows
        .iter()
        .cartesian_product(cols.iter())
        .map(|(s, g)| operator(s, g))
        .collect();
    let adjacent = |k: usize, len: usize| {
        let mut p: Vec<usize> = (0..len).collect();
        p.swap(k, k + 1);
        p
    };
    let id_n: Vec<usize> = (0..n).collect();
    let id_m: Vec<usize> = (0..m).collect();
    let mut gens: Vec<DMatrix<f64>> = (0..n.saturating_sub(1))
        .map(|k| operator(&adjacent(k, n), &id_m))
        .collect();
    gens.extend((0..m.saturating_sub(1)).map(|k| operator(&id_n, &adjacent(k, m))));
    finite_with_generators(elements, &gens)
}

fn finite_with_generators(
    elements: Vec<DMatrix<f64>>,
    gens: &[DMatrix<f64>],
) -> Result<GroupAction> {
    let index: HashMap<Vec<i64>, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, g)| (key(g), i))
        .collect();
    let mut generators: Vec<usize> = gens.iter().map(|g| index[&key(g)]).collect();
    if generators.is_empty() {
        generators.push(0);
    }
    Ok(GroupAction::Finite(FiniteGroup::assemble(
        elements, index, generators,
    )?))
}

/// `r_j(g) = (-1)^floor(2^{j+1} g)` at the dyadic node `g = p / 2^{m+1}`:
/// bit `m - j` of `p`.
pub fn dyadic_sign(j: usize, p: usize, m: usize) -> f64 {
    if (p >> (m - j)) & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// The `2^{m+1}` sign operators `diag(r_0(g), ..., r_m(g))` on
/// Rademacher coefficients, one per dyadic node `g = p 2^{-(m+1)}`.
pub fn dyadic_group(m: usize, cap: usize) -> Result<GroupAction> {
    let size = 1u128 << (m + 1).min(127);
    if m >= 60 || size > cap as u128 {
        return Err(Error::CapExceeded {
            size,
            cap: cap as u128,
        });
    }
    let element =
        |p: usize| DMatrix::from_diagonal(&DVector::from_fn(m + 1, |j, _| dyadic_sign(j, p, m)));
    let elements: Vec<DMatrix<f64>> = (0..1usize << (m + 1)).map(element).collect();
    let gens: Vec<DMatrix<f64>> = (0..=m).map(|b| element(1 << b)).collect();
    finite_with_generators(elements, &gens)
}

/// Rotations of the coefficient space `[1?, cos k t, sin k t, ...]` (real)
/// or `[e^{i k t}, ...]` (complex) at `nodes` equispaced angles.
pub fn circle_rotation_action(
    frequencies: &[i64],
    include_constant: bool,
    nodes: Option<usize>,
    field: FieldKind,
) -> Result<GroupAction> {
    let basis = match field {
        FieldKind::Real => {
            if frequencies.iter().any(|&k| k < 0) {
                return Err(Error::InvalidParameter(
                    "real trigonometric frequencies must be nonnegative".into(),
                ));
            }
            FunctionBasis::TrigReal {
                frequencies: frequencies.iter().map(|&k| k as u64).collect(),
                include_constant,
            }
        }
        FieldKind::Complex => FunctionBasis::TrigComplex {
            frequencies: frequencies.to_vec(),
        },
    };
    circle_action_for_basis(&basis, nodes)
}

pub fn circle_action_for_basis(basis: &FunctionBasis, nodes: Option<usize>) -> Result<GroupAction> {
    basis.validate()?;
    let layout = match basis {
        FunctionBasis::TrigReal { .. } => CircleLayout::Real(basis.blocks()),
        FunctionBasis::TrigComplex { frequencies } => CircleLayout::Complex(frequencies.clone()),
        FunctionBasis::Rademacher { .. } => {
            return Err(Error::Unsupported(
                "circle rotations act on trigonometric bases only".into(),
            ));
        }
    };
    Ok(GroupAction::Circle(CircleAction::new(layout, nodes)?))
}

/// `{id, transpose}` on flattened `n x n` matrices, optionally with the
/// conjugations `L -> D L D^{-1}` by signed permutation matrices `D`.
pub fn transpose_symmetrization_group(
    n: usize,
    include_signed_permutations: bool,
    cap: usize,
) -> Result<GroupAction> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "matrix size must be positive".into(),
        ));
    }
    let dim = n * n;
    let mut transpose = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            transpose[(i * n + j, j * n + i)] = 1.0;
        }
    }
    let mut gens = vec![transpose];
    if include_signed_permutations {
        let size = (1u128 << n.min(100)) * (1..=n as u128).product::<u128>();
        if size > cap as u128 {
            return Err(Error::CapExceeded {
                size,
                cap: cap as u128,
            });
        }
        // Row-major vec(D L D^T) = (D kron D) vec(L).
        let conj = |d: &DMatrix<f64>| d.kronecker(d);
        for k in 0..n.saturating_sub(1) {
            let mut d = DMatrix::<f64>::identity(n, n);
            d.swap_rows(k, k + 1);
            gens.push(conj(&d));
        }
        let mut flip = DMatrix::<f64>::identity(n, n);
        flip[(0, 0)] = -1.0;
        gens.push(conj(&flip));
    }
    Ok(GroupAction::Finite(FiniteGroup::from_generators(
        &gens,
        cap.max(2),
    )?))
}

pub fn cyclic_shift_group(size: usize) -> Result<GroupAction> {
    if size == 0 {
        return Err(Error::InvalidParameter("grid size must be positive".into()));
    }
    Ok(GroupAction::CyclicShift { size })
}

impl GroupAction {
    pub fn trivial(dim: usize) -> Self {
        GroupAction::Finite(
            FiniteGroup::from_generators(&[DMatrix::<f64>::identity(dim, dim)], 1)
                .expect("identity"),
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GroupAction::Finite(_) => "finite",
            GroupAction::Circle(_) => "circle_quadrature",
            GroupAction::CyclicShift { .. } => "cyclic_shift",
        }
    }

    /// Number of elements (finite groups) or quadrature nodes.
    pub fn order(&self) -> usize {
        match self {
            GroupAction::Finite(g) => g.order(),
            GroupAction::Circle(c) => c.nodes,
            GroupAction::CyclicShift { size } => *size,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupAction::Finite(g) => g.elements[0].re.nrows(),
            GroupAction::Circle(c) => c.dim(),
            GroupAction::CyclicShift { size } => *size,
        }
    }

    /// Field of the matrix entries. Real actions also act on complex spaces.
    pub fn field(&self) -> FieldKind {
        match self {
            GroupAction::Finite(g) => g.field,
            GroupAction::Circle(c) => c.field(),
            GroupAction::CyclicShift { .. } => FieldKind::Real,
        }
    }

    pub fn check_compatible<S: Field>(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        if self.field() == FieldKind::Complex && S::KIND == FieldKind::Real {
            return Err(Error::FieldMismatch {
                space: "real",
                scalars: "complex",
            });
        }
        Ok(())
    }

    /// Element `k`: the `k`-th group element, node rotation or shift.
    pub fn element<S: Field>(&self, k: usize) -> DMatrix<S> {
        match self {
            GroupAction::Finite(g) => g.get::<S>(k).clone(),
            GroupAction::Circle(c) => c.element(c.node_angle(k)),
            GroupAction::CyclicShift { size } => shift_matrix(*size, k),
        }
    }

    pub fn inverse_element<S: Field>(&self, k: usize) -> DMatrix<S> {
        match self {
            GroupAction::Finite(g) => g.get::<S>(g.inverses[k]).clone(),
            GroupAction::Circle(c) => c.element(-c.node_angle(k)),
            GroupAction::CyclicShift { size } => shift_matrix(*size, (*size - k % size) % size),
        }
    }

    pub fn apply<S: Field>(&self, k: usize, x: &DVector<S>) -> DVector<S> {
        match self {
            GroupAction::CyclicShift { size } => DVector::from_fn(*size, |i, _| x[(i + k) % size]),
            GroupAction::Finite(g) => g.get::<S>(k) * x,
            _ => self.element::<S>(k) * x,
        }
    }

    /// `T_k^{-1} P T_k`.
    pub fn conjugate<S: Field>(&self, k: usize, p: &DMatrix<S>) -> DMatrix<S> {
        match self {
            GroupAction::CyclicShift { size } => {
                let m = *size;
                DMatrix::from_fn(m, m, |i, j| p[((i + m - k % m) % m, (j + m - k % m) % m)])
            }
            GroupAction::Finite(g) => g.get::<S>(g.inverses[k]) * p * g.get::<S>(k),
            GroupAction::Circle(_) => self.inverse_element::<S>(k) * p * self.element::<S>(k),
        }
    }

    /// Indices of a generating set.
    pub fn generator_indices(&self) -> Vec<usize> {
        match self {
            GroupAction::Finite(g) => g.generators.clone(),
            GroupAction::Circle(c) => vec![1 % c.nodes],
            GroupAction::CyclicShift { size } => vec![1 % size],
        }
    }

    /// Indices examined by hypothesis checks: everything for small groups,
    /// generators otherwise.
    pub fn checked_indices(&self) -> Vec<usize> {
        if self.order() <= FULL_CHECK_ORDER {
            (0..self.order()).collect()
        } else {
            self.generator_indices()
        }
    }

    /// Haar average `sum_g w_g T_g^{-1} P T_g`.
    pub fn average<S: Field>(&self, p: &DMatrix<S>) -> DMatrix<S> {
        match self {
            GroupAction::CyclicShift { size } => {
                let m = *size;
                // (T_d^{-1} P T_d)_{ij} = P_{i-d, j-d}: the average is the
                // circulant of the wrapped diagonal means.
                let mut diag = vec![S::zero(); m];
                for j in 0..m {
                    for i in 0..m {
                        diag[(j + m - i) % m] += p[(i, j)];
                    }
                }
                let diag: Vec<S> = diag.into_iter().map(|d| d.unscale(m as f64)).collect();
                DMatrix::from_fn(m, m, |i, j| diag[(j + m - i) % m])
            }
            _ => {
                let n = self.order();
                let mut acc = DMatrix::<S>::zeros(p.nrows(), p.ncols());
                for k in 0..n {
                    acc += self.conjugate(k, p);
                }
                acc.unscale(n as f64)
            }
        }
    }

    /// Whether every element is unitary in coordinates.
    pub fn is_unitary(&self) -> bool {
        match self {
            GroupAction::Finite(g) => g.elements.iter().all(|e| {
                let c = &e.c;
                max_abs_diff(&(c.adjoint() * c), &DMatrix::identity(c.nrows(), c.ncols())) <= 1e-12
            }),
            _ => true,
        }
    }

    /// `max_g |S T_g - T_g S|` over the generators.
    pub fn commutation_defect<S: Field>(&self, s: &DMatrix<S>) -> f64 {
        if let GroupAction::CyclicShift { size } = self {
            // (S T)_{ij} = S_{i, j-1} and (T S)_{ij} = S_{i+1, j} for the unit shift.
            let m = *size;
            if s.shape() != (m, m) {
                return f64::INFINITY;
            }
            let mut worst = 0.0f64;
            for j in 0..m {
                for i in 0..m {
                    worst = worst.max(
                        (s[(i, (j + m - 1) % m)] - s[((i + 1) % m, j)])
                            .to_c64()
                            .norm(),
                    );
                }
            }
            return worst;
        }
        self.generator_indices()
            .into_iter()
            .map(|k| {
                let t = self.element::<S>(k);
                max_abs_diff(&(s * &t), &(&t * s))
            })
            .fold(0.0, f64::max)
    }
}

fn shift_matrix<S: Field>(m: usize, d: usize) -> DMatrix<S> {
    DMatrix::from_fn(m, m, |i, j| {
        if j == (i + d) % m {
            S::one()
        } else {
            S::zero()
        }
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IsometryWitness {
    pub element: usize,
    pub vector: VectorData,
    pub norm_before: f64,
    pub norm_after: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub all_isometries: bool,
    pub isometry_deviation: f64,
    pub isometry_witness: Option<IsometryWitness>,
    pub invariant_subspace: bool,
    pub invariance_deviation: f64,
    pub closure_ok: bool,
    pub checked_elements: usize,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.all_isometries && self.invariant_subspace && self.closure_ok
    }

    pub fn failure_summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.all_isometries {
            parts.push(format!(
                "group elements are not isometries (deviation {:e})",
                self.isometry_deviation
            ));
        }
        if !self.invariant_subspace {
            parts.push(format!(
                "subspace is not invariant (deviation {:e})",
                self.invariance_deviation
            ));
        }
        if !self.closure_ok {
            parts.push("group is not closed".to_string());
        }
        parts.join("; ")
    }
}

/// Probe vectors: sphere samples, coordinate vectors, and `e_i +- e_j`
/// (all pairs in small dimension, a deterministic subset otherwise).
fn probes<S: Field>(space: &NormedSpace, samples: usize, seed: u64) -> Vec<DVector<S>> {
    let n = space.dim();
    let mut out = space.sphere_sample::<S>(samples, seed);
    let e = |i: usize| {
        let mut v = DVector::<S>::zeros(n);
        v[i] = S::one();
        v
    };
    let coords = n.min(64);
    out.extend((0..coords).map(e));
    let pair_limit = if n <= 16 { n } else { 8 };
    for i in 0..pair_limit {
        for j in i + 1..pair_limit {
            out.push(e(i) + e(j));
            out.push(e(i) - e(j));
        }
    }
    out
}

/// Checks the averaging hypotheses: every checked element is an isometry of
/// `space`, maps `v` into itself, and the group is closed.
pub fn validate_hypotheses<S: Field>(
    space: &NormedSpace,
    v: &Subspace,
    action: &GroupAction,
    samples: usize,
    seed: u64,
) -> Result<HypothesisReport> {
    space.check_field::<S>()?;
    action.check_compatible::<S>(space.dim())?;
    if v.ambient_dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: v.ambient_dim(),
        });
    }
    let checked = action.checked_indices();
    let mut notes = Vec::new();
    if checked.len() < action.order() {
        notes.push(format!(
            "order {} exceeds {FULL_CHECK_ORDER}; checked generators only",
            action.order()
        ));
    }
    let xs = probes::<S>(space, samples, seed);
    let mut isometry_deviation = 0.0f64;
    let mut isometry_witness = None;
    for &k in &checked {
        for x in &xs {
            let before = space.norm_unchecked(x);
            let after = space.norm_unchecked(&action.apply(k, x));
            let dev = (after - before).abs() / before.max(1e-300);
            if dev > isometry_deviation {
                isometry_deviation = dev;
                if dev > HYPOTHESIS_TOL {
                    isometry_witness = Some(IsometryWitness {
                        element: k,
                        vector: VectorData::from_vector(x),
                        norm_before: before,
                        norm_after: after,
                    });
                }
            }
        }
    }
    let b = v.basis::<S>();
    let pinv = v.pinv::<S>();
    let mut invariance_deviation = 0.0f64;
    for &k in &checked {
        for c in 0..b.ncols() {
            let col = b.column(c).into_owned();
            let image = action.apply(k, &col);
            let resid = &image - b * (pinv * &image);
            invariance_deviation = invariance_deviation.max(resid.norm() / col.norm());
        }
    }
    let closure_ok = match action {
        GroupAction::Finite(g) => {
            let mut ok = true;
            for &k in &checked {
                for &s in &g.generators {
                    if g.contains(&(g.get::<Complex64>(k) * g.get::<Complex64>(s)))
                        .is_none()
                    {
                        ok = false;
                    }
                }
                let inv = g.get::<Complex64>(g.inverses[k]);
                if max_abs_diff(
                    &(inv * g.get::<Complex64>(k)),
                    &DMatrix::identity(space.dim(), space.dim()),
                ) > 1e-12
                {
                    ok = false;
                }
            }
            ok
        }
        _ => {
            notes.push(format!(
                "{} action is closed by construction",
                action.kind()
            ));
            true
        }
    };
    Ok(HypothesisReport {
        all_isometries: isometry_deviation <= HYPOTHESIS_TOL,
        isometry_deviation,
        isometry_witness,
        invariant_subspace: invariance_deviation <= HYPOTHESIS_TOL,
        invariance_deviation,
        closure_ok,
        checked_elements: checked.len(),
        notes,
    })
}
