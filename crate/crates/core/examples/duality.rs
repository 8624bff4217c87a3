//! The echo at reciprocal fields with rescaled time equals the original.

use dqpt::duality::duality_scan;
use dqpt::loschmidt::uniform_times;
use dqpt::Sector;

fn main() -> dqpt::Result<()> {
    let times = uniform_times(10.0, 100)?;
    for sector in [Sector::EvenApbc, Sector::OddPbc] {
        for (gamma_i, gamma_f) in [(0.3, 2.5), (1.25, 0.8), (2.5, 0.3)] {
            let check = duality_scan(gamma_i, gamma_f, 400, sector, &times)?;
            println!(
                "{:>4} γ_i = {gamma_i:<5} γ_f = {gamma_f:<5} max relative error {:.2e} at Jt = {:.2}",
                sector.label(),
                check.max_rel_error,
                check.worst_t
            );
        }
    }
    Ok(())
}
