//! Grid discretizations of function spaces: trigonometric polynomials on
//! `[0, 2pi)` and Rademacher sums on `[0, 1)`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Exponent, NormSpec, NormedSpace};
use crate::error::{Error, Result};
use crate::scalar::FieldKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodePlacement {
    /// `a + l h`, the periodic rectangle rule.
    #[default]
    Left,
    /// `a + (l + 1/2) h`
    Midpoint,
}

/// Uniform grid with quadrature weights summing to the interval length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub grid_size: usize,
    pub interval: [f64; 2],
    #[serde(default)]
    pub placement: NodePlacement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Grid {
    pub fn periodic(grid_size: usize) -> Self {
        Self {
            grid_size,
            interval: [0.0, 2.0 * PI],
            placement: NodePlacement::Left,
            weights: None,
        }
    }

    pub fn dyadic(m: usize) -> Self {
        Self {
            grid_size: 1 << (m + 1),
            interval: [0.0, 1.0],
            placement: NodePlacement::Midpoint,
            weights: None,
        }
    }

    pub fn length(&self) -> f64 {
        self.interval[1] - self.interval[0]
    }

    pub fn step(&self) -> f64 {
        self.length() / self.grid_size as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        let shift = match self.placement {
            NodePlacement::Left => 0.0,
            NodePlacement::Midpoint => 0.5,
        };
        (0..self.grid_size)
            .map(|l| self.interval[0] + (l as f64 + shift) * h)
            .collect()
    }

    pub fn quadrature_weights(&self) -> Vec<f64> {
        match &self.weights {
            Some(w) => w.clone(),
            None => vec![self.step(); self.grid_size],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_size == 0 {
            return Err(Error::InvalidParameter("grid_size must be positive".into()));
        }
        let len = self.length();
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "interval {:?} is empty or unbounded",
                self.interval
            )));
        }
        if let Some(w) = &self.weights {
            if w.len() != self.grid_size {
                return Err(Error::DimensionMismatch {
                    expected: self.grid_size,
                    found: w.len(),
                });
            }
            if w.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
                return Err(Error::InvalidParameter(
                    "quadrature weights must be positive".into(),
                ));
            }
            let total: f64 = w.iter().sum();
            if (total - len).abs() > 1e-9 * len {
                return Err(Error::InvalidParameter(format!(
                    "quadrature weights sum to {total}, interval length is {len}"
                )));
            }
        }
        Ok(())
    }
}

/// Basis functions sampled on a grid; coefficient vectors are the
/// coordinates of the resulting space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionBasis {
    /// `[1?, cos k_1 t, sin k_1 t, cos k_2 t, sin k_2 t, ...]`; a zero
    /// frequency contributes the constant only.
    TrigReal {
        frequencies: Vec<u64>,
        #[serde(default)]
        include_constant: bool,
    },
    /// `e^{i k t}` for each listed integer `k`.
    TrigComplex { frequencies: Vec<i64> },
    /// `r_0, ..., r_m` with `r_j(t) = (-1)^floor(2^{j+1} t)`.
    Rademacher { m: usize },
}

/// One block of a real trigonometric basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigBlock {
    Constant,
    /// `(cos k t, sin k t)` occupying two consecutive coordinates.
    Pair(u64),
}

impl FunctionBasis {
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionBasis::TrigReal {
                frequencies,
                include_constant,
            } => {
                let set: BTreeSet<_> = frequencies.iter().collect();
                if set.len() != frequencies.len() {
                    return Err(Error::InvalidParameter("duplicate frequencies".into()));
                }
                if *include_constant && set.contains(&0) {
                    return Err(Error::InvalidParameter(
                        "frequency 0 duplicates the constant".into(),
                    ));
                }
                if frequencies.is_empty() && !include_constant {
                    return Err(Error::InvalidParameter("empty trigonometric basis".into()));
                }
            }
            FunctionBasis::TrigComplex { frequencies } => {
                let set: BTreeSet<_> = frequencies.iter().collect();
                if set.len() != frequencies.len() {
                    return Err(Error::InvalidParameter("duplicate frequencies".into()));
                }
                if frequencies.is_empty() {
                    return Err(Error::InvalidParameter("empty trigonometric basis".into()));
                }
            }
            FunctionBasis::Rademacher { m } => {
                if *m >= 30 {
                    return Err(Error::InvalidParameter(format!(
                        "Rademacher index {m} is too large"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn required_field(&self) -> Option<FieldKind> {
        match self {
            FunctionBasis::TrigComplex { .. } => Some(FieldKind::Complex),
            _ => None,
        }
    }

    pub fn blocks(&self) -> Vec<TrigBlock> {
        match self {
            FunctionBasis::TrigReal {
                frequencies,
                include_constant,
            } => {
                let mut out = Vec::new();
                if *include_constant {
                    out.push(TrigBlock::Constant);
                }
                for &k in frequencies {
                    out.push(if k == 0 {
                        TrigBlock::Constant
                    } else {
                        TrigBlock::Pair(k)
                    });
                }
                out
            }
            _ => Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FunctionBasis::TrigReal { .. } => self
                .blocks()
                .iter()
                .map(|b| match b {
                    TrigBlock::Constant => 1,
                    TrigBlock::Pair(_) => 2,
                })
                .sum(),
            FunctionBasis::TrigComplex { frequencies } => frequencies.len(),
            FunctionBasis::Rademacher { m } => m + 1,
        }
    }

    /// Largest absolute frequency (trigonometric bases only).
    pub fn max_frequency(&self) -> u64 {
        match self {
            FunctionBasis::TrigReal { frequencies, .. } => {
                frequencies.iter().copied().max().unwrap_or(0)
            }
            FunctionBasis::TrigComplex { frequencies } => frequencies
                .iter()
                .map(|k| k.unsigned_abs())
                .max()
                .unwrap_or(0),
            FunctionBasis::Rademacher { .. } => 0,
        }
    }

    /// Evaluation matrix: row `l` holds every basis function at node `l`.
    pub fn evaluation_matrix(&self, grid: &Grid) -> DMatrix<Complex64> {
        let nodes = grid.nodes();
        let cols = self.dim();
        let mut e = DMatrix::zeros(nodes.len(), cols);
        match self {
            FunctionBasis::TrigReal { .. } => {
                for (l, &t) in nodes.iter().enumerate() {
                    let mut c = 0;
                    for b in self.blocks() {
                        match b {
                            TrigBlock::Constant => {
                                e[(l, c)] = Complex64::new(1.0, 0.0);
                                c += 1;
                            }
                            TrigBlock::Pair(k) => {
                                let (s, co) = (k as f64 * t).sin_cos();
                                e[(l, c)] = Complex64::new(co, 0.0);
                                e[(l, c + 1)] = Complex64::new(s, 0.0);
                                c += 2;
                            }
                        }
                    }
                }
            }
            FunctionBasis::TrigComplex { frequencies } => {
                for (l, &t) in nodes.iter().enumerate() {
                    for (c, &k) in frequencies.iter().enumerate() {
                        e[(l, c)] = Complex64::from_polar(1.0, k as f64 * t);
                    }
                }
            }
            FunctionBasis::Rademacher { m } => {
                for (l, &t) in nodes.iter().enumerate() {
                    for j in 0..=*m {
                        e[(l, j)] = Complex64::new(rademacher(j, t), 0.0);
                    }
                }
            }
        }
        e
    }
}

/// `r_j(t) = (-1)^floor(2^{j+1} t)`: `r_0` is `+1` on `[0, 1/2)` and `-1` on `[1/2, 1)`.
pub fn rademacher(j: usize, t: f64) -> f64 {
    let k = (t * (1u64 << (j + 1)) as f64).floor() as i64;
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionSpaceKind {
    TrigReal,
    TrigComplex,
    Rademacher,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpaceParams {
    /// Trigonometric frequencies (ignored for Rademacher).
    #[serde(default)]
    pub frequencies: Vec<i64>,
    #[serde(default)]
    pub include_constant: bool,
    /// Rademacher index.
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub grid_size: Option<usize>,
    pub p: Exponent,
}

/// Builds the coefficient space of the spanned functions normed by the grid
/// `L_p` (or sup) norm, together with its evaluation matrix.
pub fn make_function_space(
    kind: FunctionSpaceKind,
    params: &FunctionSpaceParams,
) -> Result<(NormedSpace, DMatrix<Complex64>)> {
    let (basis, grid, field) = match kind {
        FunctionSpaceKind::TrigReal => {
            if params.frequencies.iter().any(|&k| k < 0) {
                return Err(Error::InvalidParameter(
                    "real trigonometric frequencies must be nonnegative".into(),
                ));
            }
            let basis = FunctionBasis::TrigReal {
                frequencies: params.frequencies.iter().map(|&k| k as u64).collect(),
                include_constant: params.include_constant,
            };
            let k_max = basis.max_frequency() as usize;
            let grid = Grid::periodic(params.grid_size.unwrap_or(default_trig_grid(k_max)));
            (basis, grid, FieldKind::Real)
        }
        FunctionSpaceKind::TrigComplex => {
            let basis = FunctionBasis::TrigComplex {
                frequencies: params.frequencies.clone(),
            };
            let k_max = basis.max_frequency() as usize;
            let grid = Grid::periodic(params.grid_size.unwrap_or(default_trig_grid(k_max)));
            (basis, grid, FieldKind::Complex)
        }
        FunctionSpaceKind::Rademacher => {
            let grid = Grid::dyadic(params.m);
            if let Some(g) = params.grid_size {
                if g != grid.grid_size {
                    return Err(Error::InvalidParameter(format!(
                        "Rademacher grid is fixed at {} dyadic midpoints",
                        grid.grid_size
                    )));
                }
            }
            (
                FunctionBasis::Rademacher { m: params.m },
                grid,
                FieldKind::Real,
            )
        }
    };
    basis.validate()?;
    let label = format!("{kind:?} coefficients, {} grid points", grid.grid_size);
    let norm = if params.p.is_infinite() {
        NormSpec::FunctionSup {
            grid: grid.clone(),
            basis: Some(basis.clone()),
        }
    } else {
        NormSpec::FunctionLp {
            p: params.p,
            grid: grid.clone(),
            basis: Some(basis.clone()),
        }
    };
    let space = NormedSpace::new(basis.dim(), field, norm, label)?;
    let eval = basis.evaluation_matrix(&grid);
    Ok((space, eval))
}

fn default_trig_grid(k_max: usize) -> usize {
    (8 * k_max + 8).max(256)
}
