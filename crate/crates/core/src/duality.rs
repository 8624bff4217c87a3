//! The reciprocal-field duality of the echo,
//! `𝓛(γ_i, γ_f, t) = 𝓛(1/γ_i, 1/γ_f, γ_f t)`.
//!
//! It follows per mode from the invariance of the overlap factor under
//! `γ → 1/γ` and from `E_k(γ) = γ E_k(1/γ)`.

use serde::Serialize;

use crate::loschmidt::loschmidt_echo;
use crate::spectral::{QuenchSpec, Sector};
use crate::{Error, Result};

/// The dual quench: reciprocal fields at `J = 1`, time rescaled by `γ_f`.
pub fn dual(spec: &QuenchSpec, t: f64) -> Result<(QuenchSpec, f64)> {
    let gi = spec.gamma_i();
    let gf = spec.gamma_f().finite().ok_or_else(|| Error::domain("duality needs a finite γ_f"))?;
    if !(gi > 0.0 && gf > 0.0) {
        return Err(Error::domain(format!("duality needs positive fields (γ_i = {gi}, γ_f = {gf})")));
    }
    let dual = QuenchSpec::dimensionless(1.0 / gi, 1.0 / gf, spec.size(), spec.sector())?;
    Ok((dual, gf * spec.j() * t))
}

/// Relative discrepancy between both sides of the duality at one time.
pub fn duality_error(spec: &QuenchSpec, t: f64) -> Result<f64> {
    let (dual_spec, dual_t) = dual(spec, t)?;
    let direct = loschmidt_echo(spec, t)?;
    let mirrored = loschmidt_echo(&dual_spec, dual_t)?;
    let scale = direct.abs().max(mirrored.abs());
    Ok(if scale == 0.0 { 0.0 } else { (direct - mirrored).abs() / scale })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityCheck {
    pub size: usize,
    pub sector: Sector,
    pub gamma_i: f64,
    pub gamma_f: f64,
    pub max_rel_error: f64,
    /// Time of the largest discrepancy.
    pub worst_t: f64,
}

/// Largest relative error over a time grid, dimensionless fields.
pub fn duality_scan(
    gamma_i: f64,
    gamma_f: f64,
    size: usize,
    sector: Sector,
    times: &[f64],
) -> Result<DualityCheck> {
    let spec = QuenchSpec::dimensionless(gamma_i, gamma_f, size, sector)?;
    let mut check = DualityCheck { size, sector, gamma_i, gamma_f, max_rel_error: 0.0, worst_t: 0.0 };
    for &t in times {
        let err = duality_error(&spec, t)?;
        if err > check.max_rel_error {
            check.max_rel_error = err;
            check.worst_t = t;
        }
    }
    Ok(check)
}
