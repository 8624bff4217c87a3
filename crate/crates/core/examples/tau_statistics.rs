//! Mean and variance of τ_min over ring sizes 10..=2000 as the prequench
//! field crosses the critical point.

use dqpt::tau_min_stats;

fn main() -> dqpt::Result<()> {
    println!("{:>6} {:>12} {:>14}", "γ_i", "mean", "variance");
    for i in 0..=40 {
        let gamma_i = i as f64 * 0.05;
        let s = tau_min_stats(gamma_i, 10, 2000, 2)?;
        println!("{gamma_i:>6.2} {:>12.6} {:>14.6e}", s.mean, s.variance);
    }
    Ok(())
}
