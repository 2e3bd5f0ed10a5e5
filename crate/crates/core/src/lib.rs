//! Minimal and cominimal projections via group averaging.
//!
//! A projection `P` onto an invariant subspace `V` of a finite-dimensional
//! normed space is averaged over a compact group of isometries,
//! `Q = avg_g T_g^{-1} P T_g`. When `Q` is the only projection onto `V` that
//! commutes with the group, `Q` minimizes every conjugation-invariant
//! measure `N` (operator norm, numerical radius, W-seminorms, and
//! quasi-norms obeying the averaging inequality) among all projections onto
//! `V`. The crate builds the spaces, measures, group actions and the
//! averaging itself, and turns all of it into checkable certificates.

pub mod averaging;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod group_actions;
pub mod normed_space;
pub mod operator_measures;
pub mod optimize;
pub mod scalar;
pub mod serde_support;

pub use averaging::{
    certify_minimality, CertifyOptions, MinimalityCertificate, ProjectionOperator, Subspace,
};
pub use error::{Error, Result};
pub use group_actions::GroupAction;
pub use normed_space::{Exponent, NormSpec, NormedSpace};
pub use operator_measures::{Measure, MeasureOptions, MeasureResult, Method};
pub use scalar::{Field, FieldKind};
