//! Mean spacing of matched fields and their closest approach to the
//! critical field, against the large-L laws 4/L and |α|/L².

use dqpt::zeros::gap_alpha;
use dqpt::{critical_gap, mean_spacing, GapSide};

fn main() -> dqpt::Result<()> {
    println!("{:>6} {:>12} {:>10}", "L", "spacing·L", "pairs");
    for size in [100, 400, 1000, 4000] {
        let s = mean_spacing(1.5, size)?;
        println!("{size:>6} {:>12.6} {:>10}", s.value * size as f64, s.pairs);
    }

    println!("\n{:>6} {:>12} {:>12}", "γ_i", "gap·L²", "|α|");
    for gamma_i in [-1.5, -0.2, 0.6, 2.0] {
        let gap = critical_gap(gamma_i, 4000, GapSide::Plus1)?;
        let alpha = gap_alpha(gamma_i, GapSide::Plus1).unwrap().abs();
        println!("{gamma_i:>6} {:>12.6} {alpha:>12.6}", gap.gap * 4000.0 * 4000.0);
    }
    Ok(())
}
