//! Rate function of every matched quench with γ_f > 0 on a 22-site ring,
//! with the first divergence compared to the predicted critical time.

use dqpt::loschmidt::uniform_times;
use dqpt::{critical_times, echo_series, zero_set, Sector};

fn main() -> dqpt::Result<()> {
    let (gamma_i, size) = (0.3, 22);
    let times = uniform_times(10.0, 2001)?;
    for sol in zero_set(gamma_i, size, Sector::EvenApbc) {
        let Some(gamma_f) = sol.gamma_f().finite() else { continue };
        if gamma_f <= 0.0 {
            continue;
        }
        let ladder = critical_times(&sol, 3)?;
        let series = echo_series(&sol.quench(1.0)?, &times)?;
        let peak = series.rate.iter().cloned().filter(|r| r.is_finite()).fold(0.0, f64::max);
        let first = series.first_divergence().map(|d| d.refined_time);
        println!(
            "mode {:>2}  γ_f = {:.6}  t0* = {:.6}  first divergence = {:?}  ladder = {:.4?}  max finite λ = {:.4}",
            sol.mode, gamma_f, ladder.times[0], first, ladder.times, peak
        );
    }
    Ok(())
}
