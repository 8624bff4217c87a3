//! Speed-limit extremes over ring sizes and the Mandelstam–Tamm bound of the
//! slowest and fastest matched quench.

use std::f64::consts::PI;

use dqpt::{mt_bound, qsl_report, QuenchSpec, Sector};

fn main() -> dqpt::Result<()> {
    println!("{:>6} {:>6} {:>12} {:>10} {:>12} {:>10}", "γ_i", "L", "τ_min", "π²/4L", "τ_max", "L/4");
    for gamma_i in [0.3, 2.0, 1000.0] {
        for size in [100, 400, 1000, 4000] {
            let r = qsl_report(gamma_i, size, Sector::EvenApbc)?;
            let l = size as f64;
            println!(
                "{gamma_i:>6} {size:>6} {:>12.6} {:>10.6} {:>12.4} {:>10}",
                r.tau_min(),
                PI * PI / (4.0 * l),
                r.tau_max().unwrap(),
                l / 4.0
            );
        }
    }

    let r = qsl_report(0.5, 10, Sector::EvenApbc)?;
    println!("\nγ_i = 0.5, L = 10");
    for entry in &r.entries {
        let Some(gamma_f) = entry.gamma_f.finite() else { continue };
        let bound = mt_bound(&QuenchSpec::dimensionless(0.5, gamma_f, 10, Sector::EvenApbc)?)?;
        println!("mode {}  γ_f = {gamma_f:>9.5}  τ_QSL = {:.5}  τ_MT = {:.5}", entry.mode, entry.tau, bound);
    }

    let r = qsl_report(0.0, 10, Sector::EvenApbc)?;
    println!("\nγ_i = 0, L = 10: τ_min = {} (unbounded matched field: {})", r.tau_min(), r.tau_min_unbounded());
    Ok(())
}
