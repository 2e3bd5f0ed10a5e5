//! Operator norm, numerical radius and Schatten quasi-norms of one operator.

use minproj::operator_measures::{
    numerical_radius, operator_norm, quasi_norm_axioms_check, schatten_quasi_norm,
};
use minproj::{FieldKind, NormedSpace};
use nalgebra::DMatrix;

fn main() -> minproj::Result<()> {
    let t = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, -1.0, 0.5, 1.0, 0.0, 0.3, -2.0]);
    for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
        let space = NormedSpace::lp(3, FieldKind::Real, p)?;
        let norm = operator_norm(&space, &t)?;
        let w = numerical_radius(&space, &t)?;
        println!(
            "l_{p:<3}  ||T|| = {:.6} ({:?})  w(T) = {:.6} ({:?})",
            norm.value, norm.method, w.value, w.method
        );
    }
    for p in [0.5, 1.0, 2.0] {
        println!("S_{p}: {:.6}", schatten_quasi_norm(&t, p)?);
    }
    let axioms = quasi_norm_axioms_check::<f64, _>(|m| schatten_quasi_norm(m, 0.5), 3, 200, 1)?;
    println!(
        "S_1/2 relaxed triangle constant estimate: {:.4}",
        axioms.c_estimate
    );
    Ok(())
}
