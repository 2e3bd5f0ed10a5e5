use serde_json::json;

use super::*;

#[test]
fn list_has_every_example() {
    let l = list();
    assert_eq!(l.len(), 7);
    for e in &l {
        assert!(
            build_instance(e.name, &e.default_params).is_ok(),
            "{}",
            e.name
        );
    }
}

#[test]
fn rejects_unknown_names_and_fields() {
    assert!(run_example("bogus", &Value::Null).is_err());
    assert!(build_instance("rademacher", &json!({"m": 3, "q": 1})).is_err());
    assert!(build_instance("rademacher", &json!({"m": 11})).is_err());
    assert!(build_instance("fourier", &json!({"n": 9})).is_err());
    assert!(build_instance("fourier", &json!({"n": 2, "grid_size": 8})).is_err());
    assert!(build_instance("row_col_means", &json!({"n": 8, "m": 2})).is_err());
    assert!(build_instance("frequency_selection", &json!({"grid_size": 100})).is_err());
    assert!(build_instance("rademacher", &json!({"trials": 0})).is_err());
}

#[test]
fn rademacher_default_kills_higher_functions() {
    let r = run_example("rademacher", &Value::Null).unwrap();
    assert_eq!(r.status, ExampleStatus::Passed, "{r:?}");
    assert!(r.closed_form_residual.unwrap() <= 1e-12);
    assert!(r.certificate.unique_commuting());
}

#[test]
fn row_col_means_first_column() {
    let r = run_example("row_col_means", &json!({"trials": 5})).unwrap();
    assert_eq!(r.status, ExampleStatus::Passed);
    assert_eq!(r.certificate.commutant_dimension(), Some(0));
    let AnyCertificate::Real(c) = &r.certificate else {
        panic!()
    };
    let q = c.q_matrix().unwrap();
    let e11 = [q[(0, 0)], q[(1, 0)], q[(2, 0)], q[(3, 0)]];
    for (a, b) in e11.iter().zip([0.75, 0.25, 0.25, -0.25]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn row_col_diagonal_constant() {
    for (n, m) in [(2usize, 2usize), (2, 3), (3, 3)] {
        let q = row_col_mean_operator(n, m);
        let (nf, mf) = (n as f64, m as f64);
        assert!((q[(0, 0)] - (nf + mf - 1.0) / (nf * mf)).abs() < 1e-15);
        assert!((&q * &q - &q).amax() < 1e-14);
    }
}

#[test]
fn fourier_grid_norm_is_dirichlet_sum() {
    let r = run_example("fourier", &json!({"n": 2, "grid_size": 64, "trials": 3})).unwrap();
    assert_eq!(r.status, ExampleStatus::Passed, "{:?}", r.bound_checks);
    let oracle: f64 = (0..64)
        .map(|l| dirichlet_kernel(2, TAU * l as f64 / 64.0).abs())
        .sum::<f64>()
        / 64.0;
    let got = r.certificate.measures()["op_norm"];
    assert!((got - oracle).abs() < 1e-12, "{got} vs {oracle}");
    assert!((r.certificate.measures()["num_radius"] - got).abs() < 1e-9);
    assert_eq!(
        r.bound_checks
            .iter()
            .filter(|b| b.name.starts_with("lebesgue"))
            .count(),
        2
    );
}

#[test]
fn fourier_norms_at_small_grid() {
    let f = fourier_norms(1, 256, 3).unwrap();
    assert!(f.closed_form_residual < 1e-10);
    assert!(f.lower <= f.op_norm && f.op_norm <= f.upper);
    assert!((f.op_norm - f.num_radius).abs() < 1e-9);
}

#[test]
fn symmetrization_under_spectral_and_l1_norms() {
    let r = run_example("symmetrization", &json!({"trials": 4})).unwrap();
    assert_eq!(r.status, ExampleStatus::Passed, "{r:?}");
    assert!(r.closed_form_residual.unwrap() <= 1e-10);
    let r = run_example("symmetrization", &json!({"inner_p": 1.0, "trials": 4})).unwrap();
    assert_eq!(r.status, ExampleStatus::HypothesisFailure);
    assert!(!r.certificate.claims_minimality());
    assert!(r.certificate.hypothesis_summary().contains("isometries"));
}

#[test]
fn riesz_projection_is_coordinate() {
    let r = run_example("riesz_truncated", &json!({"p": 2.0, "trials": 3})).unwrap();
    assert_eq!(r.status, ExampleStatus::Passed);
    assert!(r.closed_form_residual.unwrap() <= 1e-10);
    assert!((r.certificate.measures()["op_norm"] - 1.0).abs() < 1e-9);
    let r = run_example("riesz_truncated", &json!({"trials": 3})).unwrap();
    assert_eq!(
        r.status,
        ExampleStatus::Passed,
        "{:?}",
        r.certificate.comparisons()
    );
}

#[test]
fn frequency_selection_passes() {
    let r = run_example("frequency_selection", &json!({"trials": 3})).unwrap();
    assert_eq!(r.status, ExampleStatus::Passed, "{:?}", r.bound_checks);
    assert!(r.closed_form_residual.unwrap() <= 1e-10);
    // The kept part {1, cos t, sin t} is the Fourier projection F_1 on the
    // span of degree-3 polynomials, so its norm is below the Lebesgue
    // constant of degree 1 on the full circle.
    let v = r.certificate.measures()["op_norm"];
    assert!((1.0..1.44).contains(&v), "{v}");
}

#[test]
fn schatten_demo_records_gates() {
    let r = run_example("schatten_demo", &json!({"trials": 5})).unwrap();
    assert_eq!(r.status, ExampleStatus::Passed);
    for row in r.certificate.comparisons() {
        assert!(row.gate.is_some());
    }
}

#[test]
fn reports_are_reproducible() {
    let a = run_example("row_col_means", &json!({"trials": 3, "seed": 9})).unwrap();
    let b = run_example("row_col_means", &json!({"trials": 3, "seed": 9})).unwrap();
    let strip = |r: &ExampleReport| {
        let mut v = serde_json::to_value(r).unwrap();
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}
