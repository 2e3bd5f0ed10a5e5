use nalgebra::DMatrix;
use proptest::prelude::*;

use minproj::averaging::{
    average_validated, cominimality_check, projection_defect, random_projection,
};
use minproj::catalog::{averaged_projection, row_col_instance};
use minproj::group_actions::{cyclic_shift_group, permutation_product_group, DEFAULT_CAP};
use minproj::operator_measures::{numerical_radius_with, operator_norm_with, schatten_quasi_norm};
use minproj::{Exponent, FieldKind, GroupAction, Measure, MeasureOptions, NormedSpace, Subspace};

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

fn rng_matrix(r: usize, c: usize, seed: u64) -> DMatrix<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
}

#[test]
fn zero_spread_gives_least_squares_projection() {
    let v = Subspace::new(rng_matrix(5, 2, 1)).unwrap();
    let p = random_projection::<f64>(&v, 0.0, 9).unwrap();
    assert!(max_diff(p.matrix(), &v.orthogonal_projection::<f64>()) < 1e-12);
}

#[test]
fn whole_space_averages_to_identity() {
    let v = Subspace::coordinate::<f64>(4, &[0, 1, 2, 3]).unwrap();
    let action = permutation_product_group(2, 2, DEFAULT_CAP).unwrap();
    let p = random_projection::<f64>(&v, 1.0, 3).unwrap();
    let q = average_validated(&v, &action, &p).unwrap();
    assert!(max_diff(q.matrix(), &DMatrix::identity(4, 4)) < 1e-12);
}

#[test]
fn trivial_group_returns_input() {
    let v = Subspace::new(rng_matrix(4, 2, 2)).unwrap();
    let p = random_projection::<f64>(&v, 1.0, 5).unwrap();
    let q = average_validated(&v, &GroupAction::trivial(4), &p).unwrap();
    assert!(max_diff(q.matrix(), p.matrix()) < 1e-15);
}

#[test]
fn averaging_is_idempotent_and_conjugates_are_projections() {
    let inst = row_col_instance(3, 3, Exponent::new(1.0)).unwrap();
    let p = random_projection::<f64>(&inst.subspace, 1.0, 8).unwrap();
    let q = average_validated(&inst.subspace, &inst.action, &p).unwrap();
    let qq = average_validated(&inst.subspace, &inst.action, &q).unwrap();
    assert!(max_diff(q.matrix(), qq.matrix()) < 1e-10);
    for g in 0..inst.action.order() {
        let c = inst.action.conjugate(g, p.matrix());
        assert!(
            projection_defect(&c, &inst.subspace).unwrap() < 1e-9,
            "element {g}"
        );
    }
}

#[test]
fn twice_identity_cominimality() {
    let inst = row_col_instance(2, 3, Exponent::new(1.0)).unwrap();
    let two = DMatrix::<f64>::identity(6, 6) * 2.0;
    for m in [
        Measure::OperatorNorm,
        Measure::NumericalRadius,
        Measure::Schatten(1.0),
    ] {
        let rows = cominimality_check(
            &inst.space,
            &inst.subspace,
            &inst.action,
            &m,
            Some(&two),
            10,
            4,
        )
        .unwrap();
        assert!(
            rows.iter().all(|r| r.s == "2I" && r.claimed && r.pass),
            "{rows:?}"
        );
    }
    let q = averaged_projection(&inst).unwrap();
    let rows = cominimality_check(
        &inst.space,
        &inst.subspace,
        &inst.action,
        &Measure::OperatorNorm,
        Some(q.matrix()),
        5,
        4,
    )
    .unwrap();
    assert!(rows
        .iter()
        .all(|r| r.s == "Q" && r.n_s_minus_q.abs() < 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_projections_fix_the_subspace(n in 2usize..7, k in 1usize..7, seed in any::<u64>(), spread in 0.0f64..3.0) {
        let k = k.min(n);
        let b = rng_matrix(n, k, seed);
        let v = Subspace::new(b.clone()).unwrap();
        let p = random_projection::<f64>(&v, spread, seed ^ 1).unwrap();
        let m = p.matrix();
        prop_assert!(max_diff(&(m * &b), &b) < 1e-8 * (1.0 + m.amax()));
        prop_assert!(max_diff(&(m * m), m) < 1e-8 * (1.0 + m.amax()).powi(2));
    }

    #[test]
    fn cyclic_average_commutes_and_is_projection(size in 3usize..10, seed in any::<u64>()) {
        let action = cyclic_shift_group(size).unwrap();
        let v = Subspace::new(DMatrix::from_element(size, 1, 1.0)).unwrap();
        let p = random_projection::<f64>(&v, 1.0, seed).unwrap();
        let q = average_validated(&v, &action, &p).unwrap();
        // The only shift-commuting projection onto constants is the mean.
        let mean = DMatrix::from_element(size, size, 1.0 / size as f64);
        prop_assert!(max_diff(q.matrix(), &mean) < 1e-10);
    }

    #[test]
    fn radius_never_exceeds_norm(n in 2usize..5, p in 1.0f64..6.0, seed in any::<u64>()) {
        let space = NormedSpace::lp(n, FieldKind::Real, p).unwrap();
        let t = rng_matrix(n, n, seed);
        let opts = MeasureOptions::light();
        let w = numerical_radius_with::<f64>(&space, &t, &opts, &[]).unwrap().value;
        let norm = operator_norm_with::<f64>(&space, &t, &MeasureOptions::operator_norm(), &[]).unwrap().value;
        prop_assert!(w <= norm + 1e-7, "w {} > norm {}", w, norm);
        prop_assert!(w >= 0.0);
    }

    #[test]
    fn schatten_norms_obey_triangle_and_ideal(p in 1.0f64..5.0, seed in any::<u64>()) {
        let (a, b) = (rng_matrix(3, 3, seed), rng_matrix(3, 3, seed ^ 7));
        let na = schatten_quasi_norm(&a, p).unwrap();
        let nb = schatten_quasi_norm(&b, p).unwrap();
        prop_assert!(schatten_quasi_norm(&(&a + &b), p).unwrap() <= na + nb + 1e-12);
        let spec = a.clone().singular_values().max();
        prop_assert!(schatten_quasi_norm(&(&a * &b), p).unwrap() <= spec * nb + 1e-12);
    }
}
