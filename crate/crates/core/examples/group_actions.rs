//! Finite groups from generators, built-in actions, and the hypothesis check.

use minproj::averaging::Subspace;
use minproj::catalog::symmetrization_instance;
use minproj::group_actions::{
    circle_rotation_action, dyadic_group, permutation_product_group, validate_hypotheses,
    FiniteGroup, DEFAULT_CAP,
};
use minproj::{Exponent, FieldKind, GroupAction, NormedSpace};
use nalgebra::DMatrix;

fn main() -> minproj::Result<()> {
    let (c, s) = (
        (std::f64::consts::TAU / 5.0).cos(),
        (std::f64::consts::TAU / 5.0).sin(),
    );
    let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    let c5 = FiniteGroup::from_generators(&[rot], DEFAULT_CAP)?;
    println!("rotation by 2pi/5 generates {} elements", c5.order());

    for (name, a) in [
        (
            "S_2 x S_3 on 2x3 matrices",
            permutation_product_group(2, 3, DEFAULT_CAP)?,
        ),
        ("dyadic sign patterns, m = 3", dyadic_group(3, DEFAULT_CAP)?),
        (
            "circle on {1, cos t, sin t}",
            circle_rotation_action(&[1], true, None, FieldKind::Real)?,
        ),
    ] {
        println!(
            "{name}: order {}, dim {}, unitary {}",
            a.order(),
            a.dim(),
            a.is_unitary()
        );
    }

    let space = NormedSpace::lp(4, FieldKind::Real, 1.0)?;
    let v = Subspace::coordinate::<f64>(4, &[0, 1])?;
    let r = validate_hypotheses::<f64>(&space, &v, &GroupAction::trivial(4), 16, 0)?;
    println!("trivial group on l_1^4: passed {}", r.passed());

    let inst = symmetrization_instance(2, Exponent::new(1.0), false)?;
    let r = validate_hypotheses::<f64>(&inst.space, &inst.subspace, &inst.action, 16, 0)?;
    println!(
        "transpose on induced l_1: passed {} ({})",
        r.passed(),
        r.failure_summary()
    );
    if let Some(w) = &r.isometry_witness {
        println!(
            "  witness {:?}: {} -> {}",
            w.vector, w.norm_before, w.norm_after
        );
    }
    Ok(())
}
