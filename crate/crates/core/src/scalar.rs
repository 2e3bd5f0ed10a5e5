//! Scalar fields. Every algorithm in the crate is generic over [`Field`],
//! implemented for `f64` and `Complex64`.

use std::fmt::Debug;

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Real,
    Complex,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Real => "real",
            FieldKind::Complex => "complex",
        }
    }
}

pub trait Field: ComplexField<RealField = f64> + Copy + Debug + Send + Sync + 'static {
    const KIND: FieldKind;
    /// Number of real coordinates per scalar.
    const REAL_DIM: usize;

    fn to_c64(self) -> Complex64;
    /// Drops the imaginary part for real fields.
    fn from_c64(z: Complex64) -> Self;
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Unit-modulus scalar `u` with `u * |z| == z`; `1` at zero.
    fn phase(self) -> Self {
        let m = self.modulus();
        if m == 0.0 {
            Self::one()
        } else {
            self.unscale(m)
        }
    }

    fn from_f64(x: f64) -> Self {
        Self::from_real(x)
    }

    #[doc(hidden)]
    fn pick(pair: &MatrixPair) -> &DMatrix<Self>;
}

/// A matrix stored once per field so generic code can borrow it without
/// converting on every call.
#[derive(Debug, Clone)]
pub struct MatrixPair {
    pub re: DMatrix<f64>,
    pub c: DMatrix<Complex64>,
}

impl MatrixPair {
    pub fn from_complex(c: DMatrix<Complex64>) -> Self {
        Self {
            re: c.map(|z| z.re),
            c,
        }
    }

    pub fn get<S: Field>(&self) -> &DMatrix<S> {
        S::pick(self)
    }
}

impl Field for f64 {
    const KIND: FieldKind = FieldKind::Real;
    const REAL_DIM: usize = 1;

    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z.re
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    fn pick(pair: &MatrixPair) -> &DMatrix<Self> {
        &pair.re
    }
}

impl Field for Complex64 {
    const KIND: FieldKind = FieldKind::Complex;
    const REAL_DIM: usize = 2;

    fn to_c64(self) -> Complex64 {
        self
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }
    fn pick(pair: &MatrixPair) -> &DMatrix<Self> {
        &pair.c
    }
}

/// Flattens a vector into real coordinates (re, im interleaved for complex).
pub fn to_reals<S: Field>(x: &DVector<S>) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len() * S::REAL_DIM);
    for z in x.iter() {
        let c = z.to_c64();
        out.push(c.re);
        if S::REAL_DIM == 2 {
            out.push(c.im);
        }
    }
    out
}

pub fn from_reals<S: Field>(r: &[f64]) -> DVector<S> {
    let n = r.len() / S::REAL_DIM;
    DVector::from_fn(n, |i, _| {
        if S::REAL_DIM == 2 {
            S::from_c64(Complex64::new(r[2 * i], r[2 * i + 1]))
        } else {
            S::from_real(r[i])
        }
    })
}

pub fn max_abs<S: Field>(m: &DMatrix<S>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.modulus()))
}

pub fn max_abs_diff<S: Field>(a: &DMatrix<S>, b: &DMatrix<S>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((*x - *y).modulus()))
}

pub fn to_complex_matrix<S: Field>(m: &DMatrix<S>) -> DMatrix<Complex64> {
    m.map(|z| z.to_c64())
}

pub fn from_complex_matrix<S: Field>(m: &DMatrix<Complex64>) -> DMatrix<S> {
    m.map(S::from_c64)
}

pub fn random_matrix<S: Field, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> DMatrix<S> {
    DMatrix::from_fn(rows, cols, |_, _| S::gaussian(rng))
}
