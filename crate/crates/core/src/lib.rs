//! Exact Loschmidt-echo zeros, critical times and quantum speed limits for
//! sudden field quenches of the finite transverse-field Ising ring
//!
//! ```text
//! H = -J Σ σˣ_j σˣ_{j+1} - h Σ σᶻ_j,   σˣ_{L+1} = σˣ_1
//! ```
//!
//! The chain maps onto free fermions, one pair `(k, -k)` per positive
//! momentum. Every quantity here is a closed form over those momenta:
//!
//! * [`spectral`]: momentum grids of the two parity sectors, single-mode
//!   dispersions and the quench overlap factor.
//! * [`loschmidt`]: the echo as a product of per-mode factors, the rate
//!   function and time series.
//! * [`zeros`]: the postquench fields at which the echo has exact zeros on
//!   the real time axis, their critical-time ladders and curve statistics.
//! * [`qsl`]: quantum speed limit times, their extremes and the
//!   Mandelstam–Tamm bound.
//! * [`duality`]: checks of the reciprocal-field duality of the echo.
//! * [`oracle`]: brute-force exact diagonalization of the spin chain, used to
//!   validate the closed forms at small sizes.
//! * [`cli`]: the `dqpt` command-line front end.
//!
//! Energies are in units of `J` and times in units of `1/J` whenever a
//! function takes dimensionless fields `γ = h/J`.

pub mod cli;
mod compensated;
pub mod duality;
mod error;
mod extended;
pub mod loschmidt;
pub mod oracle;
pub mod qsl;
pub mod spectral;
pub mod zeros;

pub use error::{Error, Result};
pub use extended::Extended;
pub use loschmidt::{echo_mode, echo_series, loschmidt_echo, rate_function, EchoSeries};
pub use qsl::{energy_variance, mt_bound, qsl_report, qsl_time, tau_min_stats, QslReport, TauMinStats};
pub use spectral::{
    dispersion, momentum_grid, overlap_factor, ModeData, ModelParams, Momentum, MomentumGrid,
    QuenchSpec, Sector,
};
pub use zeros::{
    critical_gap, critical_times, hf_for_mode, mean_spacing, no_zero_window, zero_set,
    CriticalTimes, GapSide, ZeroSolution,
};
