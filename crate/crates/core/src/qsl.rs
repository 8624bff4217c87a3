//! Quantum speed limit times of matched quenches.
//!
//! The first exact zero of the echo is the earliest time at which the
//! evolved state becomes orthogonal to the initial one,
//! `τ_QSL = π / (4 E_kf)`. Over the matched modes of one ring this gives an
//! extreme pair `τ_min`, `τ_max`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::spectral::{check_size, dispersion, momentum_grid, overlap_factor, QuenchSpec, Sector};
use crate::zeros::{hf_for_mode, zero_set, ZeroSolution};
use crate::{Error, Extended, Result};

/// `π / (4 E_kf)` in units of `1/J`; zero for an unbounded mode energy.
pub fn qsl_time(solution: &ZeroSolution) -> f64 {
    match solution.energy() {
        Extended::Finite(e) => PI / (4.0 * e),
        Extended::Unbounded => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QslEntry {
    pub mode: usize,
    pub k: f64,
    pub gamma_f: Extended,
    pub energy: Extended,
    pub tau: f64,
}

/// Speed-limit times of every matched mode at one `(γ_i, L)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QslReport {
    pub gamma_i: f64,
    pub size: usize,
    pub sector: Sector,
    pub entries: Vec<QslEntry>,
    /// Index into `entries`; ties go to the smaller `k`.
    pub min_index: usize,
    /// Index of the largest finite-energy entry.
    pub max_index: Option<usize>,
}

impl QslReport {
    pub fn tau_min(&self) -> f64 {
        self.entries[self.min_index].tau
    }

    /// `τ_min` came from an unbounded matched field (and is exactly 0).
    pub fn tau_min_unbounded(&self) -> bool {
        self.entries[self.min_index].energy.is_unbounded()
    }

    pub fn tau_max(&self) -> Option<f64> {
        self.max_index.map(|i| self.entries[i].tau)
    }

    /// The finite entry whose postquench field is closest to `target`.
    pub fn closest_to(&self, target: f64) -> Option<&QslEntry> {
        let mut best: Option<(&QslEntry, f64)> = None;
        for e in &self.entries {
            let Extended::Finite(g) = e.gamma_f else { continue };
            let d = (g - target).abs();
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((e, d));
            }
        }
        best.map(|(e, _)| e)
    }
}

pub fn qsl_report(gamma_i: f64, size: usize, sector: Sector) -> Result<QslReport> {
    check_size(size)?;
    let entries: Vec<QslEntry> = zero_set(gamma_i, size, sector)
        .iter()
        .map(|s| QslEntry { mode: s.mode, k: s.k, gamma_f: s.gamma_f(), energy: s.energy(), tau: qsl_time(s) })
        .collect();
    let mut min_index = 0;
    let mut max_index: Option<usize> = None;
    for (i, e) in entries.iter().enumerate() {
        if e.tau < entries[min_index].tau {
            min_index = i;
        }
        if e.energy.is_unbounded() {
            continue;
        }
        if max_index.is_none_or(|m| e.tau > entries[m].tau) {
            max_index = Some(i);
        }
    }
    Ok(QslReport { gamma_i, size, sector, entries, min_index, max_index })
}

/// `(τ_min, unbounded)` without building the report; same tie rules.
pub(crate) fn tau_min_at(gamma_i: f64, size: usize, sector: Sector) -> (f64, bool) {
    let grid = momentum_grid(size, sector).expect("validated size");
    let mut best = (f64::INFINITY, false);
    for k in grid.iter() {
        let tau = match hf_for_mode(gamma_i, k) {
            Extended::Unbounded => return (0.0, true),
            Extended::Finite(g) => PI / (4.0 * (k.cos() + g).hypot(k.sin())),
        };
        if tau < best.0 {
            best = (tau, false);
        }
    }
    best
}

/// Energy variance of the postquench Hamiltonian in the prequench ground
/// state, `(ΔE)² = Σ_k 4 E_kf² sin²(2δθ_k)`.
///
/// Each momentum pair is a two-level system with splitting `4E_kf` and
/// upper-level weight `sin²δθ_k`; pairs are independent.
pub fn energy_variance(spec: &QuenchSpec) -> Result<f64> {
    if spec.sector() != Sector::EvenApbc {
        return Err(Error::domain("the energy variance is defined for the even-parity sector"));
    }
    let post = spec.postquench()?;
    let (gi, gf) = (spec.gamma_i(), post.gamma());
    spec.grid().iter().try_fold(0.0, |acc, k| {
        let e = dispersion(k, &post).energy;
        Ok(acc + 4.0 * e * e * overlap_factor(k, gi, gf)?)
    })
}

/// Mandelstam–Tamm bound `π / (2ΔE)`; `Unbounded` without a quench.
pub fn mt_bound(spec: &QuenchSpec) -> Result<Extended> {
    let variance = energy_variance(spec)?;
    if variance > 0.0 {
        Ok(Extended::Finite(PI / (2.0 * variance.sqrt())))
    } else {
        Ok(Extended::Unbounded)
    }
}

/// Mean and variance of `τ_min(L)` over a range of ring sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauMinStats {
    pub gamma_i: f64,
    pub l_min: usize,
    pub l_max: usize,
    pub step: usize,
    pub sector: Sector,
    pub mean: f64,
    pub variance: f64,
    pub samples: usize,
    /// Sizes whose `τ_min` is the zero of an unbounded matched field.
    pub unbounded: usize,
}

/// [`tau_min_stats_in`] for the even-parity sector.
pub fn tau_min_stats(gamma_i: f64, l_min: usize, l_max: usize, step: usize) -> Result<TauMinStats> {
    tau_min_stats_in(Sector::EvenApbc, gamma_i, l_min, l_max, step)
}

/// Statistics of `τ_min(L)` for `L = l_min, l_min + step, …, ≤ l_max`.
///
/// Both moments are normalized by the number of sizes visited. Sizes are
/// evaluated in parallel and reduced in order.
pub fn tau_min_stats_in(
    sector: Sector,
    gamma_i: f64,
    l_min: usize,
    l_max: usize,
    step: usize,
) -> Result<TauMinStats> {
    if step < 2 || !step.is_multiple_of(2) {
        return Err(Error::argument(format!("size step {step} must be even and at least 2")));
    }
    if l_min > l_max {
        return Err(Error::argument(format!("empty size range {l_min}..={l_max}")));
    }
    check_size(l_min)?;
    let sizes: Vec<usize> = (l_min..=l_max).step_by(step).collect();
    let taus: Vec<(f64, bool)> = sizes.par_iter().map(|&l| tau_min_at(gamma_i, l, sector)).collect();
    let n = taus.len() as f64;
    let mean = taus.iter().map(|t| t.0).sum::<f64>() / n;
    let variance = taus.iter().map(|t| (t.0 - mean).powi(2)).sum::<f64>() / n;
    Ok(TauMinStats {
        gamma_i,
        l_min,
        l_max,
        step,
        sector,
        mean,
        variance,
        samples: taus.len(),
        unbounded: taus.iter().filter(|t| t.1).count(),
    })
}
