//! Momentum grids of both parity sectors and the per-mode data of a quench.

use dqpt::{momentum_grid, QuenchSpec, Sector};

fn main() -> dqpt::Result<()> {
    for sector in [Sector::EvenApbc, Sector::OddPbc] {
        let grid = momentum_grid(10, sector)?;
        let ks: Vec<String> = grid.iter().map(|k| format!("{:.4}", k.radians())).collect();
        println!("{:>4}: {} modes, k = [{}]", sector.label(), grid.len(), ks.join(", "));
    }

    let spec = QuenchSpec::dimensionless(0.5, 2.0, 10, Sector::EvenApbc)?;
    println!("\nquench γ_i = 0.5 → γ_f = 2 on L = 10");
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "k", "eps", "zeta", "E", "overlap");
    for m in spec.modes()? {
        println!("{:>8.4} {:>10.5} {:>10.5} {:>10.5} {:>10.6}", m.k, m.eps, m.zeta, m.energy, m.overlap.unwrap());
    }
    Ok(())
}
