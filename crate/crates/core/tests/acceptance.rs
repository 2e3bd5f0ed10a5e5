//! Acceptance criteria. Each prints one PASS/FAIL line; the process fails if
//! any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minproj::averaging::{
    average_validated, cominimality_check, commuting_projection_set, random_projection,
};
use minproj::catalog::{
    averaged_projection, build_instance, certify_instance, fourier_norms, lebesgue_bracket,
    rademacher_instance, row_col_instance, standard_measures, symmetrization_instance,
    CatalogInstance, Instance, EXAMPLE_NAMES,
};
use minproj::group_actions::{circle_rotation_action, validate_hypotheses};
use minproj::operator_measures::{
    numerical_radius, operator_norm, quasi_norm_axioms_check, schatten_quasi_norm,
};
use minproj::{CertifyOptions, Exponent, Field, FieldKind, Measure, NormedSpace};

const FOURIER_GRID: usize = 4096;
const QUADRATURE_TOL: f64 = 1e-3;
const FOURIER_BUDGET: Duration = Duration::from_secs(30);

const SPREAD_TOL: f64 = 1e-9;
const ROW_COL_RESIDUAL_TOL: f64 = 1e-10;
const ROW_COL_BUDGET: Duration = Duration::from_secs(10);

const RADEMACHER_RESIDUAL_TOL: f64 = 1e-12;
const RADEMACHER_BUDGET: Duration = Duration::from_secs(20);

const COMPARISON_TOL: f64 = 1e-8;
const CIRCLE_TOL: f64 = 1e-12;
const RADIUS_TOL: f64 = 1e-9;
const AXIOM_TOL: f64 = 1e-9;
const HALF_C_SLACK: f64 = 1e-6;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: minproj::Error) -> String {
    e.to_string()
}

fn max_diff<S: Field>(a: &DMatrix<S>, b: &DMatrix<S>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y).to_c64().norm())
        .fold(0.0, f64::max)
}

/// `(1/2pi) int_0^{2pi} |sin((2n+1)t/2) / sin(t/2)| dt` by composite
/// Gauss-Legendre on the intervals between consecutive zeros, where the
/// integrand is smooth.
fn dirichlet_l1(n: usize) -> f64 {
    let nodes = [
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let h = 2.0 * n as f64 + 1.0;
    let f = |t: f64| {
        let s = (t / 2.0).sin();
        if s.abs() < 1e-14 {
            h
        } else {
            ((h * t / 2.0).sin() / s).abs()
        }
    };
    let zeros = 2 * n + 1;
    let sub = 200;
    let mut total = 0.0;
    for z in 0..zeros {
        let (a, b) = (TAU * z as f64 / h, TAU * (z + 1) as f64 / h);
        let w = (b - a) / sub as f64;
        for k in 0..sub {
            let (lo, hi) = (a + k as f64 * w, a + (k + 1) as f64 * w);
            let mid = (lo + hi) / 2.0;
            total += nodes
                .iter()
                .map(|(x, wt)| wt * f(mid + x * (hi - lo) / 2.0))
                .sum::<f64>()
                * (hi - lo)
                / 2.0;
        }
    }
    total / TAU
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut prev = 0.0;
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let f = fourier_norms(n, FOURIER_GRID, 11 + n as u64).map_err(err)?;
        let (lo, hi) = lebesgue_bracket(n);
        let oracle = dirichlet_l1(n);
        ensure(
            (lo, hi) == (4.0 / (PI * PI) * (n as f64).ln(), (n as f64).ln() + 3.0),
            || "bracket formula".into(),
        )?;
        ensure(lo <= f.op_norm && f.op_norm <= hi, || {
            format!("n={n}: ||F_n|| = {} outside [{lo}, {hi}]", f.op_norm)
        })?;
        ensure(lo <= f.num_radius && f.num_radius <= hi, || {
            format!("n={n}: ||F_n||_w = {} outside [{lo}, {hi}]", f.num_radius)
        })?;
        let d = (f.op_norm - oracle).abs();
        worst = worst.max(d);
        ensure(d <= QUADRATURE_TOL, || {
            format!("n={n}: ||F_n|| = {} vs quadrature {oracle}", f.op_norm)
        })?;
        ensure(f.op_norm > prev, || format!("n={n}: norms not increasing"))?;
        prev = f.op_norm;
    }
    let t = start.elapsed();
    ensure(t < FOURIER_BUDGET, || format!("runtime {t:?}"))?;
    Ok(format!(
        "n=1..6, M={FOURIER_GRID}, max |norm - quadrature| = {worst:.2e}, {t:.1?}"
    ))
}

/// `x_ij -> row mean + column mean - grand mean` on row-major `n x m`.
fn row_col_oracle(n: usize, m: usize) -> DMatrix<f64> {
    let (nf, mf) = (n as f64, m as f64);
    DMatrix::from_fn(n * m, n * m, |r, c| {
        let (i, j) = (r / m, r % m);
        let (k, l) = (c / m, c % m);
        let row = if i == k { 1.0 / mf } else { 0.0 };
        let col = if j == l { 1.0 / nf } else { 0.0 };
        row + col - 1.0 / (nf * mf)
    })
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut worst_spread: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for (n, m) in [(2usize, 2usize), (2, 3), (3, 3)] {
        let inst = row_col_instance(n, m, Exponent::new(1.0)).map_err(err)?;
        let oracle = row_col_oracle(n, m);
        let mut first: Option<DMatrix<f64>> = None;
        for seed in 0..20u64 {
            let p = random_projection::<f64>(&inst.subspace, 1.0, 1000 + seed).map_err(err)?;
            let q = average_validated(&inst.subspace, &inst.action, &p).map_err(err)?;
            worst_residual = worst_residual.max(max_diff(q.matrix(), &oracle));
            match &first {
                None => first = Some(q.matrix().clone()),
                Some(f) => worst_spread = worst_spread.max(max_diff(q.matrix(), f)),
            }
        }
        let c = commuting_projection_set::<f64>(&inst.space, &inst.subspace, &inst.action)
            .map_err(err)?;
        ensure(c.dimension == 0, || {
            format!("({n},{m}): commutant dimension {}", c.dimension)
        })?;

        // The printed diagonal (n+m+1)/nm is inconsistent with idempotence.
        let (nf, mf) = (n as f64, m as f64);
        let printed = (nf + mf + 1.0) / (nf * mf);
        let diag = oracle[(0, 0)];
        ensure((diag - (nf + mf - 1.0) / (nf * mf)).abs() < 1e-15, || {
            "oracle diagonal".into()
        })?;
        let mut altered = oracle.clone();
        altered.fill_diagonal(printed);
        let defect = max_diff(&(&altered * &altered), &altered);
        ensure((printed - diag).abs() > 1e-3 && defect > 1e-3, || {
            format!("({n},{m}): printed constant not distinguished")
        })?;
    }
    ensure(worst_spread <= SPREAD_TOL, || {
        format!("spread {worst_spread:e}")
    })?;
    ensure(worst_residual <= ROW_COL_RESIDUAL_TOL, || {
        format!("residual {worst_residual:e}")
    })?;
    let t = start.elapsed();
    ensure(t < ROW_COL_BUDGET, || format!("runtime {t:?}"))?;
    Ok(format!(
        "spread {worst_spread:.1e}, residual {worst_residual:.1e}, dim 0, printed diagonal (n+m+1)/nm rejected, {t:.1?}"
    ))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut rows = 0;
    let mut worst_residual: f64 = 0.0;
    for p in [1.0, 2.0, 4.0] {
        for m in 1..=6 {
            for n in 0..m {
                let inst = rademacher_instance(m, n, Exponent::new(p)).map_err(err)?;
                let opts = CertifyOptions {
                    trials: 50,
                    seed: (m * 10 + n) as u64,
                    cominimality: false,
                    ..Default::default()
                };
                let measures = [Measure::OperatorNorm, Measure::NumericalRadius];
                let (cert, residual, _) = certify_instance(&inst, &measures, &opts).map_err(err)?;
                let residual = residual.ok_or("no residual")?;
                worst_residual = worst_residual.max(residual);
                ensure(cert.valid, || {
                    format!(
                        "m={m} n={n} p={p}: {}",
                        cert.hypothesis_report.failure_summary()
                    )
                })?;
                ensure(cert.commutant_dimension == Some(0), || {
                    format!(
                        "m={m} n={n} p={p}: commutant {:?}",
                        cert.commutant_dimension
                    )
                })?;
                ensure(residual <= RADEMACHER_RESIDUAL_TOL, || {
                    format!("m={m} n={n} p={p}: residual {residual:e}")
                })?;
                for r in &cert.comparisons {
                    ensure(r.claimed && r.n_q <= r.n_p + COMPARISON_TOL, || {
                        format!("m={m} n={n} p={p}: {r:?}")
                    })?;
                }
                rows += cert.comparisons.len();
            }
        }
    }
    let t = start.elapsed();
    ensure(t < RADEMACHER_BUDGET, || format!("runtime {t:?}"))?;
    Ok(format!(
        "63 instances, {rows} comparisons, residual {worst_residual:.1e}, {t:.1?}"
    ))
}

fn for_each_instance(
    mut f: impl FnMut(&str, &CatalogInstance) -> std::result::Result<(), String>,
) -> std::result::Result<usize, String> {
    let mut count = 0;
    for name in EXAMPLE_NAMES {
        let ex = build_instance(name, &serde_json::Value::Null).map_err(err)?;
        let c = match &ex.instance {
            CatalogInstance::Real(i) => {
                commuting_projection_set::<f64>(&i.space, &i.subspace, &i.action)
                    .map_err(err)?
                    .unique()
            }
            CatalogInstance::Complex(i) => {
                commuting_projection_set::<Complex64>(&i.space, &i.subspace, &i.action)
                    .map_err(err)?
                    .unique()
            }
        };
        if c {
            f(name, &ex.instance)?;
            count += 1;
        }
    }
    Ok(count)
}

struct Tally {
    rows: usize,
    violations: usize,
    gates: usize,
    gates_ok: usize,
}

fn minimality_rows<S: Field>(
    name: &str,
    inst: &Instance<S>,
    tally: &mut Tally,
) -> std::result::Result<(), String> {
    let measures = standard_measures(inst, 2, 7).map_err(err)?;
    let opts = CertifyOptions {
        trials: 100,
        seed: 4,
        cominimality: false,
        ..Default::default()
    };
    let (cert, _, _) = certify_instance(inst, &measures, &opts).map_err(err)?;
    ensure(cert.valid && cert.unique_commuting, || {
        format!("{name}: not certified")
    })?;
    for r in &cert.comparisons {
        tally.rows += 1;
        if let Some(g) = &r.gate {
            tally.gates += 1;
            tally.gates_ok += g.ok as usize;
        }
        if r.claimed && r.n_q > r.n_p + COMPARISON_TOL {
            tally.violations += 1;
        }
        ensure(r.measure != "schatten_0.5" || r.gate.is_some(), || {
            format!("{name}: ungated S_1/2 row")
        })?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut tally = Tally {
        rows: 0,
        violations: 0,
        gates: 0,
        gates_ok: 0,
    };
    let count = for_each_instance(|name, inst| match inst {
        CatalogInstance::Real(i) => minimality_rows(name, i, &mut tally),
        CatalogInstance::Complex(i) => minimality_rows(name, i, &mut tally),
    })?;
    ensure(tally.violations == 0, || {
        format!("{} violations", tally.violations)
    })?;
    Ok(format!(
        "{count} instances, {} rows, 0 violations, gates {}/{} passed, {:.1?}",
        tally.rows,
        tally.gates_ok,
        tally.gates,
        start.elapsed()
    ))
}

fn cominimality_rows<S: Field>(
    name: &str,
    inst: &Instance<S>,
    tally: &mut Tally,
) -> std::result::Result<(), String> {
    let measures = standard_measures(inst, 2, 7).map_err(err)?;
    let n = inst.space.dim();
    let id = DMatrix::<S>::identity(n, n);
    let q = averaged_projection(inst).map_err(err)?.matrix().clone();
    let two = id.scale(2.0);
    for s in [&id, &two, &q] {
        for m in &measures {
            let rows =
                cominimality_check(&inst.space, &inst.subspace, &inst.action, m, Some(s), 50, 5)
                    .map_err(err)?;
            for r in rows {
                tally.rows += 1;
                if let Some(g) = &r.gate {
                    tally.gates += 1;
                    tally.gates_ok += g.ok as usize;
                }
                ensure(r.claimed || r.gate.is_some(), || {
                    format!("{name}: unclaimed row without gate")
                })?;
                if r.claimed && r.n_s_minus_q > r.n_s_minus_p + COMPARISON_TOL {
                    tally.violations += 1;
                }
            }
        }
    }
    Ok(())
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut tally = Tally {
        rows: 0,
        violations: 0,
        gates: 0,
        gates_ok: 0,
    };
    let count = for_each_instance(|name, inst| match inst {
        CatalogInstance::Real(i) => cominimality_rows(name, i, &mut tally),
        CatalogInstance::Complex(i) => cominimality_rows(name, i, &mut tally),
    })?;
    ensure(tally.violations == 0, || {
        format!("{} violations", tally.violations)
    })?;
    Ok(format!(
        "{count} instances x S in {{I, 2I, Q}}, {} rows, 0 violations, gates {}/{} passed, {:.1?}",
        tally.rows,
        tally.gates_ok,
        tally.gates,
        start.elapsed()
    ))
}

/// Continuous rotation average of `a` on `[cos k t, sin k t]` blocks: the
/// part commuting with every rotation, zero across frequencies.
fn rotation_average_oracle(a: &DMatrix<f64>, freqs: &[i64]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows(), a.ncols());
    for (b, _) in freqs.iter().enumerate() {
        let (i, j) = (2 * b, 2 * b + 1);
        let c = (a[(i, i)] + a[(j, j)]) / 2.0;
        let s = (a[(j, i)] - a[(i, j)]) / 2.0;
        out[(i, i)] = c;
        out[(j, j)] = c;
        out[(j, i)] = s;
        out[(i, j)] = -s;
    }
    out
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for freqs in [vec![1i64], vec![1, 2], vec![1, 3, 5]] {
        let k = *freqs.iter().max().unwrap() as usize;
        let d = 2 * freqs.len();
        let coarse =
            circle_rotation_action(&freqs, false, Some(2 * k + 1), FieldKind::Real).map_err(err)?;
        let fine =
            circle_rotation_action(&freqs, false, Some(4 * k + 3), FieldKind::Real).map_err(err)?;
        let ccoarse = circle_rotation_action(&freqs, false, Some(2 * k + 1), FieldKind::Complex)
            .map_err(err)?;
        let cfine = circle_rotation_action(&freqs, false, Some(4 * k + 3), FieldKind::Complex)
            .map_err(err)?;
        for _ in 0..5 {
            let a = DMatrix::<f64>::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
            let (x, y) = (coarse.average(&a), fine.average(&a));
            worst = worst
                .max(max_diff(&x, &y))
                .max(max_diff(&x, &rotation_average_oracle(&a, &freqs)));
            let c = DMatrix::<Complex64>::from_fn(freqs.len(), freqs.len(), |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let (x, y) = (ccoarse.average(&c), cfine.average(&c));
            worst = worst
                .max(max_diff(&x, &y))
                .max(max_diff(&x, &DMatrix::from_diagonal(&c.diagonal())));
        }
    }
    ensure(worst <= CIRCLE_TOL, || format!("max deviation {worst:e}"))?;
    Ok(format!(
        "frequency sets {{1}}, {{1,2}}, {{1,3,5}}, real and complex, max deviation {worst:.1e}"
    ))
}

/// Brute-force numerical radius and norm on real `l_inf^n` and `l_1^n` from
/// the extreme points of the unit balls.
fn lattice_radius_oracle(t: &DMatrix<f64>, sup: bool) -> (f64, f64) {
    let n = t.nrows();
    let signs = |mask: usize| (0..n).map(move |i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 });
    let mut w: f64 = 0.0;
    let mut norm: f64 = 0.0;
    for mask in 0..1usize << n {
        let s: Vec<f64> = signs(mask).collect();
        for i in 0..n {
            // sup: x = s with s_i = 1, functional e_i. l1: x = e_i, functional s with s_i = 1.
            if s[i] != 1.0 {
                continue;
            }
            let v: f64 = if sup {
                (0..n).map(|j| t[(i, j)] * s[j]).sum()
            } else {
                (0..n).map(|j| s[j] * t[(j, i)]).sum()
            };
            w = w.max(v.abs());
        }
        let tx = t * nalgebra::DVector::from_vec(s.clone());
        norm = norm.max(if sup {
            tx.amax()
        } else {
            (t.transpose() * nalgebra::DVector::from_vec(s)).amax()
        });
    }
    (w, norm)
}

fn criterion_7() -> Check {
    for p in [1.0, 1.5, 3.0, f64::INFINITY] {
        let space = NormedSpace::lp(3, FieldKind::Real, p).map_err(err)?;
        let w = numerical_radius::<f64>(&space, &DMatrix::identity(3, 3))
            .map_err(err)?
            .value;
        ensure((w - 1.0).abs() <= RADIUS_TOL, || {
            format!("w(I) = {w} on l_{p}")
        })?;
    }
    let l2 = NormedSpace::lp(2, FieldKind::Real, 2.0).map_err(err)?;
    let j = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let wj = numerical_radius::<f64>(&l2, &j).map_err(err)?.value;
    ensure(wj.abs() <= RADIUS_TOL, || format!("skew radius {wj}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut samples = 0;
    let mut worst: f64 = 0.0;
    for n in [2usize, 3, 4] {
        for (p, sup) in [(f64::INFINITY, true), (1.0, false)] {
            let space = NormedSpace::lp(n, FieldKind::Real, p).map_err(err)?;
            for _ in 0..200 {
                let t = DMatrix::<f64>::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
                let w = numerical_radius::<f64>(&space, &t).map_err(err)?.value;
                let norm = operator_norm::<f64>(&space, &t).map_err(err)?.value;
                let (ow, onorm) = lattice_radius_oracle(&t, sup);
                worst = worst
                    .max((w - norm).abs())
                    .max((w - ow).abs())
                    .max((norm - onorm).abs());
                ensure(w <= norm + RADIUS_TOL, || format!("w > ||T|| on l_{p}^{n}"))?;
                samples += 1;
            }
        }
    }
    ensure(worst <= RADIUS_TOL, || format!("max deviation {worst:e}"))?;
    Ok(format!(
        "w(I)=1, skew w=0, {samples} lattice samples, max |w - ||T||| {worst:.1e}"
    ))
}

fn criterion_8() -> Check {
    let two = quasi_norm_axioms_check::<f64, _>(|t| schatten_quasi_norm(t, 2.0), 3, 500, 8)
        .map_err(err)?;
    ensure((two.c_estimate - 1.0).abs() <= AXIOM_TOL, || {
        format!("p=2: C = {}", two.c_estimate)
    })?;
    ensure(two.ideal_violation <= AXIOM_TOL, || {
        format!("p=2: ideal violation {}", two.ideal_violation)
    })?;
    ensure(two.unit_one_ok, || "p=2: N(I_1) != 1".into())?;
    let half = quasi_norm_axioms_check::<f64, _>(|t| schatten_quasi_norm(t, 0.5), 3, 500, 8)
        .map_err(err)?;
    ensure(
        half.c_estimate > 1.0 && half.c_estimate <= 2.0 + HALF_C_SLACK,
        || format!("p=1/2: C = {}", half.c_estimate),
    )?;
    Ok(format!(
        "p=2: C={:.12}, ideal violation {:.1e}; p=1/2: C={:.6}",
        two.c_estimate, two.ideal_violation, half.c_estimate
    ))
}

fn criterion_9() -> Check {
    let inst = symmetrization_instance(2, Exponent::new(1.0), false).map_err(err)?;
    let report = validate_hypotheses::<f64>(&inst.space, &inst.subspace, &inst.action, 32, 9)
        .map_err(err)?;
    ensure(!report.all_isometries, || {
        "transpose passed the isometry check".into()
    })?;
    let w = report.isometry_witness.as_ref().ok_or("no witness")?;
    let x = w.vector.to_vector::<f64>().map_err(err)?;
    // Induced l1 norm is the max column sum; transposition swaps it with the max row sum.
    let a = DMatrix::from_row_slice(2, 2, x.as_slice());
    let col = (0..2).map(|j| a.column(j).abs().sum()).fold(0.0, f64::max);
    let row = (0..2).map(|i| a.row(i).abs().sum()).fold(0.0, f64::max);
    let tx = inst.action.apply(w.element, &x);
    ensure((w.norm_before - col).abs() < 1e-12, || {
        format!("witness norm {} vs {col}", w.norm_before)
    })?;
    ensure(
        (w.norm_after - row).abs() < 1e-12 && (row - col).abs() > 1e-6,
        || "witness not a counterexample".into(),
    )?;
    ensure(
        DMatrix::from_row_slice(2, 2, tx.as_slice()) == a.transpose(),
        || "witness element is not the transpose".into(),
    )?;

    let out = std::process::Command::new(env!("CARGO_BIN_EXE_minproj"))
        .args([
            "catalog",
            "run",
            "symmetrization",
            "--params",
            r#"{"inner_p": 1.0, "trials": 3}"#,
            "--seed",
            "0",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    ensure(code == Some(2), || format!("exit code {code:?}"))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let cert = &v["result"]["certificate"];
    ensure(
        cert["valid"] == false
            && cert["unique_commuting"] == false
            && cert["comparisons"].as_array().is_some_and(|c| c.is_empty()),
        || "report makes a minimality claim".into(),
    )?;
    Ok(format!(
        "witness x={:?}: ||x||={}, ||x^T||={}; CLI exit 2, no claim",
        x.as_slice(),
        w.norm_before,
        w.norm_after
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 fourier lebesgue bracket", criterion_1),
        ("2 row/column means oracle", criterion_2),
        ("3 rademacher coordinate projection", criterion_3),
        ("4 minimality inequalities", criterion_4),
        ("5 cominimality", criterion_5),
        ("6 exact circle quadrature", criterion_6),
        ("7 numerical radius identities", criterion_7),
        ("8 quasi-norm axioms", criterion_8),
        ("9 hypothesis falsification", criterion_9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
