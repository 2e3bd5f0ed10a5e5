//! Minimality and cominimality certificate for the Rademacher projection in L_4.

use minproj::catalog::rademacher_instance;
use minproj::{certify_minimality, CertifyOptions, Exponent, Measure};

fn main() -> minproj::Result<()> {
    let inst = rademacher_instance(4, 1, Exponent::new(4.0))?;
    let measures = [
        Measure::<f64>::OperatorNorm,
        Measure::NumericalRadius,
        Measure::Schatten(0.5),
    ];
    let opts = CertifyOptions {
        trials: 10,
        seed: 1,
        ..Default::default()
    };
    let cert = certify_minimality(&inst.space, &inst.subspace, &inst.action, &measures, &opts)?;
    println!(
        "valid {}, unique {}, violations {}",
        cert.valid, cert.unique_commuting, cert.violations
    );
    for (name, v) in &cert.measures {
        let best_p = cert
            .comparisons
            .iter()
            .filter(|r| &r.measure == name)
            .map(|r| r.n_p)
            .fold(f64::INFINITY, f64::min);
        println!("{name:<12} N(Q) = {v:.6}   min N(P) over trials = {best_p:.6}");
    }
    let gated = cert.comparisons.iter().filter(|r| r.gate.is_some()).count();
    println!(
        "{gated} rows gated on the averaging inequality; {} cominimality rows",
        cert.cominimality.len()
    );
    Ok(())
}
