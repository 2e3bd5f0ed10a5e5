//! Norms, dual norms and norming functionals on a few finite-dimensional spaces.

use minproj::normed_space::{NormSpec, YoungFunction};
use minproj::{Exponent, FieldKind, NormedSpace};
use nalgebra::DVector;

fn main() -> minproj::Result<()> {
    let x = DVector::from_vec(vec![3.0, -4.0, 1.0]);
    let spaces = [
        NormedSpace::lp(3, FieldKind::Real, 1.0)?,
        NormedSpace::lp(3, FieldKind::Real, 3.0)?,
        NormedSpace::lp(3, FieldKind::Real, f64::INFINITY)?,
        NormedSpace::new(
            3,
            FieldKind::Real,
            NormSpec::WeightedLp {
                p: Exponent::new(2.0),
                weights: vec![1.0, 2.0, 0.5],
            },
            "weighted l2",
        )?,
        NormedSpace::new(
            3,
            FieldKind::Real,
            NormSpec::OrliczLuxemburg {
                phi: YoungFunction::Power { p: 3.0 },
            },
            "Orlicz t^3",
        )?,
    ];
    for s in &spaces {
        let dual = s.dual_norm(&x)?;
        let faces = s.norming_functionals(&s.normalize(&x)?)?;
        println!(
            "{:<12} ||x|| = {:.6}  ||x||_* = {:.6}  norming functional {:?}",
            s.label(),
            s.norm(&x)?,
            dual.value,
            faces.representatives()[0].as_slice()
        );
    }
    Ok(())
}
