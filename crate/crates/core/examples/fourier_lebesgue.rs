//! Norms of Fourier partial-sum projections against the Lebesgue bracket.

use minproj::catalog::fourier_norms;

fn main() -> minproj::Result<()> {
    println!(
        "{:>2} {:>10} {:>10} {:>10} {:>10}",
        "n", "lower", "||F_n||", "||F_n||_w", "upper"
    );
    for n in 1..=6 {
        let f = fourier_norms(n, 1024, n as u64)?;
        println!(
            "{n:>2} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            f.lower, f.op_norm, f.num_radius, f.upper
        );
    }
    Ok(())
}
