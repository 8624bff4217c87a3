//! Brute-force check of the product formula and the energy variance against
//! the full spin Hamiltonian.

use dqpt::oracle::{build_hamiltonian, QuenchOracle};
use dqpt::{energy_variance, loschmidt_echo, QuenchSpec, Sector};

fn main() -> dqpt::Result<()> {
    let ham = build_hamiltonian(8, 1.0, 0.5)?;
    println!(
        "L = 8: dim {}, |H - Hᵀ| = {:.1e}, |[H, P]| = {:.1e}, E0 = {:.10}",
        ham.matrix().nrows(),
        ham.hermiticity_error(),
        ham.parity_commutator(),
        ham.spectrum()[0]
    );

    let (l, gamma_i, gamma_f) = (10, 0.5, 2.0);
    let oracle = QuenchOracle::new(l, 1.0, gamma_i, gamma_f)?;
    let spec = QuenchSpec::dimensionless(gamma_i, gamma_f, l, Sector::EvenApbc)?;
    for t in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let formula = loschmidt_echo(&spec, t)?;
        println!("t = {t:>3}: formula {formula:.12}  oracle {:.12}", oracle.echo(t));
    }
    println!("ΔE²: formula {:.12}  oracle {:.12}", energy_variance(&spec)?, oracle.energy_variance());
    Ok(())
}
