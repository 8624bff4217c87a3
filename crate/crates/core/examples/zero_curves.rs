//! Matched postquench fields as functions of the prequench field, and the
//! window around γ = 1 that no matched field enters.

use dqpt::{no_zero_window, zero_set, Sector};

fn main() -> dqpt::Result<()> {
    let size = 14;
    let window = no_zero_window(size)?;
    println!("L = {size}: no matched field in ({:.6}, {:.6})", window.lo, window.hi);

    for gamma_i in [-2.0, -0.5, 0.0, 0.5, 2.0] {
        for sector in [Sector::EvenApbc, Sector::OddPbc] {
            let fields: Vec<String> = zero_set(gamma_i, size, sector).iter().map(|s| format!("{:.4}", s.gamma_f())).collect();
            println!("γ_i = {gamma_i:>5} {:>4}: [{}]", sector.label(), fields.join(", "));
        }
    }
    Ok(())
}
