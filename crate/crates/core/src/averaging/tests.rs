use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::*;
use crate::group_actions::{
    circle_rotation_action, cyclic_shift_group, dyadic_group, permutation_product_group,
    transpose_symmetrization_group, DEFAULT_CAP,
};
use crate::normed_space::{Exponent, NormSpec};

/// Span of `a_i + b_j` in row-major `n x m` matrices.
fn row_col_sums(n: usize, m: usize) -> Subspace {
    let mut b = DMatrix::<f64>::zeros(n * m, n + m - 1);
    for i in 0..n {
        for j in 0..m {
            b[(i * m + j, 0)] = 1.0;
            if i > 0 {
                b[(i * m + j, i)] = 1.0;
            }
            if j > 0 {
                b[(i * m + j, n - 1 + j)] = 1.0;
            }
        }
    }
    Subspace::new(b).unwrap()
}

#[test]
fn subspace_rejects_degenerate_bases() {
    let b = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
    assert!(matches!(
        Subspace::new(b),
        Err(Error::DegenerateSubspace(_))
    ));
    assert!(Subspace::new(DMatrix::<f64>::zeros(2, 3)).is_err());
    let v = Subspace::coordinate::<f64>(3, &[0, 2]).unwrap();
    assert_eq!((v.ambient_dim(), v.dim()), (3, 2));
    let q0 = v.orthogonal_projection::<f64>();
    assert!((q0 - DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0, 1.0]))).amax() < 1e-15);
}

#[test]
fn random_projections_are_projections() {
    let v = row_col_sums(2, 3);
    for seed in 0..10 {
        let p = random_projection::<f64>(&v, 2.0, seed).unwrap();
        let m = p.matrix();
        assert!((m * m - m).amax() < 1e-10 * m.amax().max(1.0));
        assert!((m * v.basis::<f64>() - v.basis::<f64>()).amax() < 1e-12);
    }
    let bad = DMatrix::<f64>::identity(6, 6) * 0.5;
    assert!(matches!(
        ProjectionOperator::new(bad, &v),
        Err(Error::NotAProjection(_))
    ));
}

#[test]
fn complex_random_projection() {
    let b = DMatrix::from_column_slice(
        3,
        1,
        &[
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-1.0, 0.0),
        ],
    );
    let v = Subspace::new(b).unwrap();
    let p = random_projection::<Complex64>(&v, 1.0, 4).unwrap();
    let m = p.matrix();
    assert!(crate::scalar::max_abs_diff(&(m * m), m) < 1e-10);
    assert!(random_projection::<f64>(&v, 1.0, 4).is_err());
}

#[test]
fn row_column_projection_in_l1() {
    // Q = I - a a^T / 4 with a the alternating sign pattern; every column of
    // |Q| sums to 3/4 + 3/4.
    let space = NormedSpace::lp(4, FieldKind::Real, 1.0).unwrap();
    let v = row_col_sums(2, 2);
    let g = permutation_product_group(2, 2, DEFAULT_CAP).unwrap();
    let sol = commuting_projection_set::<f64>(&space, &v, &g).unwrap();
    assert!(sol.unique());
    let q = sol.particular.unwrap();
    let a = DVector::from_vec(vec![1.0, -1.0, -1.0, 1.0]);
    let expect = DMatrix::<f64>::identity(4, 4) - &a * a.transpose() / 4.0;
    assert!((q.matrix() - &expect).amax() < 1e-10);
    let norm = Measure::<f64>::OperatorNorm
        .evaluate(&space, q.matrix(), &MeasureOptions::operator_norm(), &[])
        .unwrap();
    assert!((norm.value - 1.5).abs() < 1e-12);

    let p = random_projection::<f64>(&v, 1.0, 11).unwrap();
    let avg = average_projection(&space, &v, &g, &p).unwrap();
    assert!((avg.matrix() - &expect).amax() < 1e-10);
}

fn cross_check(v: &Subspace, g: &GroupAction, field_complex: bool) -> (usize, usize) {
    if field_complex {
        let a = commutant_by_nullspace::<Complex64>(v, g).unwrap();
        let b = commutant_by_characters::<Complex64>(v, g).unwrap();
        (a.dimension, b.dimension)
    } else {
        let a = commutant_by_nullspace::<f64>(v, g).unwrap();
        let b = commutant_by_characters::<f64>(v, g).unwrap();
        (a.dimension, b.dimension)
    }
}

#[test]
fn commutant_routes_agree() {
    // Trivial group: every complement works, k (n - k) free parameters.
    let v = Subspace::coordinate::<f64>(4, &[0]).unwrap();
    assert_eq!(cross_check(&v, &GroupAction::trivial(4), false), (3, 3));
    // {I, -I} commutes with everything.
    let minus =
        crate::group_actions::FiniteGroup::from_generators(&[-DMatrix::<f64>::identity(3, 3)], 4)
            .unwrap();
    let v = Subspace::coordinate::<f64>(3, &[0]).unwrap();
    assert_eq!(cross_check(&v, &GroupAction::Finite(minus), false), (2, 2));
    // Row and column sums under S_2 x S_3, and S_3 x S_3.
    assert_eq!(
        cross_check(
            &row_col_sums(2, 3),
            &permutation_product_group(2, 3, DEFAULT_CAP).unwrap(),
            false
        ),
        (0, 0)
    );
    assert_eq!(
        cross_check(
            &row_col_sums(3, 3),
            &permutation_product_group(3, 3, DEFAULT_CAP).unwrap(),
            false
        ),
        (0, 0)
    );
    // Rademacher coordinates: all characters distinct.
    let v = Subspace::coordinate::<f64>(4, &[0, 2]).unwrap();
    assert_eq!(
        cross_check(&v, &dyadic_group(3, DEFAULT_CAP).unwrap(), false),
        (0, 0)
    );
    // Real trig: frequency 1 inside {1, 2}; distinct frequencies.
    let g = circle_rotation_action(&[1, 2], true, None, FieldKind::Real).unwrap();
    let v = Subspace::coordinate::<f64>(5, &[0, 1, 2]).unwrap();
    assert_eq!(cross_check(&v, &g, false), (0, 0));
    // Complex trig: distinct characters.
    let g = circle_rotation_action(&[-1, 0, 2], false, None, FieldKind::Complex).unwrap();
    let v = Subspace::coordinate::<Complex64>(3, &[0, 1]).unwrap();
    assert_eq!(cross_check(&v, &g, true), (0, 0));
    // diag(-1, -1, 1): the quotient repeats the sign character of V once.
    let flip = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0, 1.0]));
    let g = GroupAction::Finite(
        crate::group_actions::FiniteGroup::from_generators(&[flip], 4).unwrap(),
    );
    let v = Subspace::coordinate::<f64>(3, &[0]).unwrap();
    assert_eq!(cross_check(&v, &g, false), (1, 1));
    let v = Subspace::coordinate::<Complex64>(3, &[0]).unwrap();
    assert_eq!(cross_check(&v, &g, true), (1, 1));
    // Cyclic shift with the span of low Fourier modes.
    let m = 8;
    let b = DMatrix::from_fn(m, 3, |i, c| {
        let t = std::f64::consts::TAU * i as f64 / m as f64;
        match c {
            0 => 1.0,
            1 => t.cos(),
            _ => t.sin(),
        }
    });
    let v = Subspace::new(b).unwrap();
    assert_eq!(
        cross_check(&v, &cyclic_shift_group(m).unwrap(), false),
        (0, 0)
    );
}

#[test]
fn particular_solutions_agree() {
    let v = row_col_sums(2, 3);
    let g = permutation_product_group(2, 3, DEFAULT_CAP).unwrap();
    let a = commutant_by_nullspace::<f64>(&v, &g)
        .unwrap()
        .particular
        .unwrap();
    let b = commutant_by_characters::<f64>(&v, &g)
        .unwrap()
        .particular
        .unwrap();
    assert!((a.matrix() - b.matrix()).amax() < 1e-9);
}

#[test]
fn certificate_for_row_column_sums() {
    let space = NormedSpace::lp(6, FieldKind::Real, 1.0).unwrap();
    let v = row_col_sums(2, 3);
    let g = permutation_product_group(2, 3, DEFAULT_CAP).unwrap();
    let measures = [Measure::<f64>::OperatorNorm, Measure::NumericalRadius];
    let opts = CertifyOptions {
        trials: 15,
        seed: 3,
        ..Default::default()
    };
    let cert = certify_minimality(&space, &v, &g, &measures, &opts).unwrap();
    assert!(cert.valid && cert.unique_commuting && cert.claims_minimality());
    assert_eq!(cert.violations, 0, "{:?}", cert.notes);
    assert_eq!(cert.comparisons.len(), 30);
    assert_eq!(cert.cominimality.len(), 30);
    for row in &cert.comparisons {
        assert!(row.claimed && row.pass);
        assert!((row.n_qp - row.n_q).abs() < 1e-8);
    }
    assert!(cert.averaging_spread < 1e-9);
    let json = crate::serde_support::to_json_string(&cert).unwrap();
    assert!(
        json.contains("\"unique_commuting\": true") || json.contains("\"unique_commuting\":true")
    );
}

#[test]
fn certificate_with_ascent_measures() {
    // l_3 has no closed forms; witness transport keeps N(P) >= N(Q).
    let space = NormedSpace::lp(4, FieldKind::Real, 3.0).unwrap();
    let v = row_col_sums(2, 2);
    let g = permutation_product_group(2, 2, DEFAULT_CAP).unwrap();
    let opts = CertifyOptions {
        trials: 6,
        seed: 1,
        ..Default::default()
    };
    let cert = certify_minimality(
        &space,
        &v,
        &g,
        &[Measure::<f64>::OperatorNorm, Measure::NumericalRadius],
        &opts,
    )
    .unwrap();
    assert!(cert.claims_minimality());
    assert_eq!(cert.violations, 0, "{:?}", cert.comparisons);
}

#[test]
fn failed_hypotheses_make_no_claim() {
    let space = NormedSpace::new(
        4,
        FieldKind::Real,
        NormSpec::InducedOperator {
            inner: Box::new(NormSpec::Lp {
                p: Exponent::new(1.0),
            }),
            n: 2,
        },
        "",
    )
    .unwrap();
    let b = DMatrix::from_column_slice(
        4,
        3,
        &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    );
    let v = Subspace::new(b).unwrap();
    let g = transpose_symmetrization_group(2, false, DEFAULT_CAP).unwrap();
    let cert = certify_minimality(
        &space,
        &v,
        &g,
        &[Measure::<f64>::OperatorNorm],
        &CertifyOptions::default(),
    )
    .unwrap();
    assert!(!cert.valid && !cert.claims_minimality());
    assert!(cert.comparisons.is_empty());
    let p = random_projection::<f64>(&v, 1.0, 0).unwrap();
    assert!(matches!(
        average_projection(&space, &v, &g, &p),
        Err(Error::HypothesisFailure(_))
    ));
}

#[test]
fn non_unique_commutant_is_reported() {
    let space = NormedSpace::lp(3, FieldKind::Real, 2.0).unwrap();
    let v = Subspace::coordinate::<f64>(3, &[0]).unwrap();
    let cert = certify_minimality(
        &space,
        &v,
        &GroupAction::trivial(3),
        &[Measure::<f64>::OperatorNorm],
        &CertifyOptions::default(),
    )
    .unwrap();
    assert!(cert.valid);
    assert!(!cert.unique_commuting);
    assert_eq!(cert.commutant_dimension, Some(2));
    assert!(cert.comparisons.iter().all(|r| !r.claimed));
}

#[test]
fn schatten_gate_is_recorded() {
    let space = NormedSpace::lp(4, FieldKind::Real, 2.0).unwrap();
    let v = row_col_sums(2, 2);
    let g = permutation_product_group(2, 2, DEFAULT_CAP).unwrap();
    let opts = CertifyOptions {
        trials: 5,
        ..Default::default()
    };
    let cert = certify_minimality(
        &space,
        &v,
        &g,
        &[Measure::<f64>::Schatten(0.5), Measure::Schatten(2.0)],
        &opts,
    )
    .unwrap();
    for row in &cert.comparisons {
        let gate = row.gate.as_ref().unwrap();
        assert_eq!(gate.method, GateMethod::Explicit);
        if row.measure == "schatten_2" {
            assert!(gate.ok);
        }
        assert_eq!(row.claimed, gate.ok);
        assert!(row.pass);
    }
}

#[test]
fn averaging_inequality_for_operator_norm() {
    let space = NormedSpace::lp(6, FieldKind::Real, 1.0).unwrap();
    let v = row_col_sums(2, 3);
    let g = permutation_product_group(2, 3, DEFAULT_CAP).unwrap();
    for seed in 0..5 {
        let p = random_projection::<f64>(&v, 1.0, seed).unwrap();
        let c = averaging_inequality_check(
            |m: &DMatrix<f64>| crate::operator_measures::operator_norm(&space, m).map(|r| r.value),
            &g,
            p.matrix(),
        )
        .unwrap();
        assert!(c.ok, "{c:?}");
        // Isometries: every conjugate has the same norm as P.
        let np = crate::operator_measures::operator_norm(&space, p.matrix())
            .unwrap()
            .value;
        assert!((c.rhs - np).abs() < 1e-10);
    }
}

#[test]
fn cominimality_rows() {
    let space = NormedSpace::lp(4, FieldKind::Real, f64::INFINITY).unwrap();
    let v = row_col_sums(2, 2);
    let g = permutation_product_group(2, 2, DEFAULT_CAP).unwrap();
    let rows =
        cominimality_check(&space, &v, &g, &Measure::<f64>::OperatorNorm, None, 10, 2).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.claimed && r.pass && r.s == "I"));
    // I - Q = a a^T / 4 has row sums 1.
    assert!((rows[0].n_s_minus_q - 1.0).abs() < 1e-12);
    let mut s = DMatrix::<f64>::zeros(4, 4);
    s[(0, 1)] = 1.0;
    assert!(matches!(
        cominimality_check(
            &space,
            &v,
            &g,
            &Measure::<f64>::OperatorNorm,
            Some(&s),
            3,
            2
        ),
        Err(Error::CommutationViolated(_))
    ));
}

#[test]
fn invariant_pairs() {
    let space = NormedSpace::lp(4, FieldKind::Real, 3.0).unwrap();
    let g = permutation_product_group(2, 2, DEFAULT_CAP).unwrap();
    let pairs = invariant_pair_orbit::<f64>(&space, &g, 3, 5).unwrap();
    assert_eq!(pairs.len(), 12);
    let m = invariant_w_seminorm::<f64>(&space, &g, 2, 5).unwrap();
    let v = row_col_sums(2, 2);
    let cert = certify_minimality(
        &space,
        &v,
        &g,
        &[m],
        &CertifyOptions {
            trials: 10,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(cert.claims_minimality());
    assert_eq!(cert.violations, 0);
}
