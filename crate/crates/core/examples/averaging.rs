//! Averaging random projections over a group and solving for the commutant.

use minproj::averaging::{average_projection, commuting_projection_set, random_projection};
use minproj::catalog::row_col_instance;
use minproj::Exponent;

fn main() -> minproj::Result<()> {
    let inst = row_col_instance(2, 3, Exponent::new(1.0))?;
    let mut first = None;
    for seed in 0..5 {
        let p = random_projection::<f64>(&inst.subspace, 1.0, seed)?;
        let q = average_projection(&inst.space, &inst.subspace, &inst.action, &p)?;
        let moved = &*first.get_or_insert_with(|| q.matrix().clone()) - q.matrix();
        println!(
            "seed {seed}: |P| = {:.3}, averaged differs from first by {:.1e}",
            p.matrix().amax(),
            moved.amax()
        );
    }
    let c = commuting_projection_set::<f64>(&inst.space, &inst.subspace, &inst.action)?;
    println!(
        "commuting projections: dimension {} via {:?}",
        c.dimension, c.route
    );
    println!("averaged projection:\n{:.4}", first.unwrap());
    Ok(())
}
