//! The Loschmidt echo of a quench, its rate function and time series.
//!
//! For the prequench ground state in one parity sector the echo factorizes
//! over positive momenta,
//!
//! ```text
//! 𝓛(t) = Π_k [1 - sin²(2δθ_k) sin²(2 E_kf t)],    λ(t) = -ln 𝓛(t) / L.
//! ```

use rayon::prelude::*;
use serde::Serialize;

use crate::compensated::DoubleDouble;
use crate::spectral::{overlap_parts, reduced_energy_dd, Momentum, QuenchSpec};
use crate::{Error, Result};

/// Per-mode factors at or below this value count as exact zeros.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// Above this size the rate function is accumulated as a sum of logarithms.
pub const LOG_SUM_MIN_SIZE: usize = 1000;

/// Echo value below which a refined rate-function peak counts as a divergence.
pub const DIVERGENCE_ECHO: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
struct ModeFactor {
    overlap: f64,
    complement: f64,
    energy: DoubleDouble,
}

impl ModeFactor {
    fn new(k: &Momentum, gamma_i: f64, gamma_f: f64) -> Self {
        let (overlap, complement) = overlap_parts(k, gamma_i, gamma_f);
        ModeFactor { overlap, complement, energy: reduced_energy_dd(k, gamma_f) }
    }

    /// `1 - sin²(2δθ) sin²(2Et)`, evaluated as `cos²(2Et) + cos²(2δθ) sin²(2Et)`
    /// once the overlap dominates so the value near zero keeps its relative
    /// accuracy.
    fn at(&self, jt: DoubleDouble) -> f64 {
        let phase = jt.mul(self.energy).mul(DoubleDouble::from_f64(2.0));
        let (sin2, cos2) = phase.sin_cos_squared();
        let value = if self.overlap <= 0.5 {
            1.0 - self.overlap * sin2
        } else {
            cos2 + self.complement * sin2
        };
        if value <= ZERO_THRESHOLD {
            0.0
        } else {
            value.min(1.0)
        }
    }
}

/// Precomputed per-mode factors of one quench.
#[derive(Debug, Clone)]
struct EchoKernel {
    j: f64,
    size: usize,
    modes: Vec<ModeFactor>,
}

impl EchoKernel {
    fn new(spec: &QuenchSpec) -> Result<Self> {
        let h_f = spec.finite_h_f("echo evaluation")?;
        let (gi, gf) = (spec.gamma_i(), h_f / spec.j());
        let modes = spec.grid().iter().map(|k| ModeFactor::new(k, gi, gf)).collect();
        Ok(EchoKernel { j: spec.j(), size: spec.size(), modes })
    }

    fn factors(&self, t: f64) -> impl Iterator<Item = f64> + '_ {
        let jt = DoubleDouble::product(self.j, t);
        self.modes.iter().map(move |m| m.at(jt))
    }

    fn echo(&self, t: f64) -> f64 {
        let mut acc = 1.0;
        for f in self.factors(t) {
            if f == 0.0 {
                return 0.0;
            }
            acc *= f;
        }
        acc
    }

    fn log_echo(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for f in self.factors(t) {
            if f == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += f.ln();
        }
        acc
    }

    fn rate(&self, t: f64) -> f64 {
        let size = self.size as f64;
        let log = if self.size > LOG_SUM_MIN_SIZE {
            self.log_echo(t)
        } else {
            let echo = self.echo(t);
            if echo >= f64::MIN_POSITIVE {
                echo.ln()
            } else {
                // zero or underflowed
                self.log_echo(t)
            }
        };
        if log == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            // `+ 0.0` turns -0.0 into 0.0 at t = 0
            -log / size + 0.0
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::argument(format!("time t = {t} must be finite and non-negative")));
    }
    Ok(())
}

/// The factor of mode `k`: `1 - sin²(2δθ_k) sin²(2 E_kf t)`.
pub fn echo_mode(k: &Momentum, spec: &QuenchSpec, t: f64) -> Result<f64> {
    check_time(t)?;
    let h_f = spec.finite_h_f("echo evaluation")?;
    let factor = ModeFactor::new(k, spec.gamma_i(), h_f / spec.j());
    Ok(factor.at(DoubleDouble::product(spec.j(), t)))
}

/// `𝓛(t)`: product of [`echo_mode`] over the sector's grid in ascending `k`.
pub fn loschmidt_echo(spec: &QuenchSpec, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(EchoKernel::new(spec)?.echo(t))
}

/// `ln 𝓛(t)` as a sum over modes; `-∞` at an exact zero.
pub fn log_echo(spec: &QuenchSpec, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(EchoKernel::new(spec)?.log_echo(t))
}

/// `λ(t) = -ln 𝓛(t) / L`, `+∞` at exact zeros.
pub fn rate_function(spec: &QuenchSpec, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(EchoKernel::new(spec)?.rate(t))
}

/// `points` equally spaced times on `[0, t_max]` (just `[0]` for one point).
pub fn uniform_times(t_max: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::argument("a time grid needs at least one point"));
    }
    if points == 1 {
        return Ok(vec![0.0]);
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::argument(format!("t_max = {t_max} must be finite and positive")));
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(|i| t_max * (i as f64) / last).collect())
}

/// A rate-function divergence located on a time grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Divergence {
    /// Grid point at which the rate function peaks.
    pub grid_time: f64,
    /// Minimizer of the echo within the neighbouring grid cells.
    pub refined_time: f64,
    pub refined_echo: f64,
}

/// Echo and rate function of one quench on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EchoSeries {
    pub times: Vec<f64>,
    pub echo: Vec<f64>,
    pub rate: Vec<f64>,
    pub spec: QuenchSpec,
}

impl EchoSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Rate-function peaks that are genuine divergences, in time order.
    ///
    /// A point with infinite rate is a divergence as is. Any other interior
    /// local maximum is refined by minimizing the echo over the two adjacent
    /// cells and kept if that minimum is at most [`DIVERGENCE_ECHO`].
    pub fn divergences(&self) -> Vec<Divergence> {
        let kernel = EchoKernel::new(&self.spec).expect("series built from a finite spec");
        let n = self.len();
        let mut found = Vec::new();
        for i in 0..n {
            let r = self.rate[i];
            if r.is_infinite() {
                found.push(Divergence { grid_time: self.times[i], refined_time: self.times[i], refined_echo: 0.0 });
                continue;
            }
            if i == 0 || i + 1 == n || !(r > self.rate[i - 1] && r >= self.rate[i + 1]) {
                continue;
            }
            let (t, echo) = golden_section_min(|t| kernel.echo(t), self.times[i - 1], self.times[i + 1]);
            if echo <= DIVERGENCE_ECHO {
                found.push(Divergence { grid_time: self.times[i], refined_time: t, refined_echo: echo });
            }
        }
        found
    }

    pub fn first_divergence(&self) -> Option<Divergence> {
        self.divergences().into_iter().next()
    }
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a) <= 1e-15 * (1.0 + b.abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Echo and rate on a strictly increasing, non-negative time grid.
///
/// Points are evaluated in parallel; each point has a fixed evaluation order
/// so the result does not depend on the worker count.
pub fn echo_series(spec: &QuenchSpec, times: &[f64]) -> Result<EchoSeries> {
    if times.is_empty() {
        return Err(Error::argument("empty time grid"));
    }
    for &t in times {
        check_time(t)?;
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::argument("time grid must be strictly increasing"));
    }
    let kernel = EchoKernel::new(spec)?;
    let points: Vec<(f64, f64)> = times.par_iter().map(|&t| (kernel.echo(t), kernel.rate(t))).collect();
    let (echo, rate) = points.into_iter().unzip();
    Ok(EchoSeries { times: times.to_vec(), echo, rate, spec: *spec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Sector;
    use crate::zeros::{critical_times, zero_set};
    use crate::Extended;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn spec(gi: f64, gf: f64, l: usize) -> QuenchSpec {
        QuenchSpec::dimensionless(gi, gf, l, Sector::EvenApbc).unwrap()
    }

    #[test]
    fn no_quench_gives_unit_echo() {
        let s = spec(0.7, 0.7, 12);
        for k in s.grid().iter() {
            for t in [0.0, 0.3, 7.1, 100.0] {
                assert_eq!(echo_mode(k, &s, t).unwrap(), 1.0);
            }
        }
        assert_eq!(loschmidt_echo(&s, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn unit_echo_at_time_zero() {
        for (gi, gf) in [(0.3, 2.0), (2.0, 0.1), (-1.0, 1.0), (0.0, -4.0)] {
            let s = spec(gi, gf, 16);
            assert_eq!(loschmidt_echo(&s, 0.0).unwrap(), 1.0);
            assert_eq!(rate_function(&s, 0.0).unwrap(), 0.0);
            assert!(rate_function(&s, 0.0).unwrap().is_sign_positive());
        }
    }

    #[test]
    fn matched_mode_vanishes_at_first_critical_time() {
        for sol in zero_set(0.3, 22, Sector::EvenApbc) {
            let Extended::Finite(gf) = sol.gamma_f() else { continue };
            let s = spec(0.3, gf, 22);
            let t0 = critical_times(&sol, 0).unwrap().times[0];
            assert_eq!(echo_mode(sol.momentum(), &s, t0).unwrap(), 0.0);
            assert_eq!(loschmidt_echo(&s, t0).unwrap(), 0.0);
            assert_eq!(rate_function(&s, t0).unwrap(), f64::INFINITY);
        }
    }

    #[test]
    fn single_mode_closed_form() {
        // L = 4 in the odd sector keeps only k = π/2; from γ_i = 0 to
        // γ_f = 1 the overlap is 1/2 and E = √2.
        let s = QuenchSpec::dimensionless(0.0, 1.0, 4, Sector::OddPbc).unwrap();
        assert!(s.grid().modes()[0].is_half_pi());
        let t = 0.4;
        let expected = 1.0 - 0.5 * (2.0 * 2f64.sqrt() * t).sin().powi(2);
        assert!((loschmidt_echo(&s, t).unwrap() - expected).abs() < 1e-15);
        assert!((rate_function(&s, t).unwrap() + expected.ln() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn rate_equals_one_when_echo_is_e_to_minus_l() {
        // The k = π/4 factor of this L = 4 quench vanishes at t = π/4, so
        // ln 𝓛 = -4 is crossed in between.
        let s = spec(0.0, -1.0 / (PI / 4.0).cos(), 4);
        let target = -4.0;
        let (mut lo, mut hi) = (0.0, PI / 4.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if log_echo(&s, mid).unwrap() > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = rate_function(&s, 0.5 * (lo + hi)).unwrap();
        assert!((r - 1.0).abs() < 1e-9, "rate {r}");
    }

    #[test]
    fn unbounded_field_is_rejected() {
        let s = QuenchSpec::with_unbounded_field(1.0, 0.0, 6, Sector::EvenApbc).unwrap();
        let k = s.grid().modes()[0];
        assert!(matches!(echo_mode(&k, &s, 1.0), Err(Error::Domain(_))));
        assert!(loschmidt_echo(&s, 1.0).is_err());
        assert!(echo_series(&s, &[0.0]).is_err());
    }

    #[test]
    fn negative_time_is_rejected() {
        let s = spec(0.5, 2.0, 8);
        assert!(matches!(loschmidt_echo(&s, -1.0), Err(Error::Argument(_))));
        assert!(rate_function(&s, f64::NAN).is_err());
    }

    #[test]
    fn series_single_point() {
        let s = spec(0.5, 2.0, 8);
        let series = echo_series(&s, &[0.0]).unwrap();
        assert_eq!(series.echo, vec![1.0]);
        assert_eq!(series.rate, vec![0.0]);
    }

    #[test]
    fn series_rejects_bad_grids() {
        let s = spec(0.5, 2.0, 8);
        assert!(echo_series(&s, &[]).is_err());
        assert!(echo_series(&s, &[0.0, 1.0, 1.0]).is_err());
        assert!(echo_series(&s, &[0.0, 2.0, 1.0]).is_err());
        assert!(echo_series(&s, &[-1.0, 0.0]).is_err());
        assert!(uniform_times(1.0, 0).is_err());
        assert!(uniform_times(0.0, 5).is_err());
        assert_eq!(uniform_times(3.0, 1).unwrap(), vec![0.0]);
        assert_eq!(uniform_times(2.0, 3).unwrap(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn series_matches_pointwise() {
        let s = spec(0.3, 1.7, 22);
        let times = uniform_times(6.0, 301).unwrap();
        let series = echo_series(&s, &times).unwrap();
        for (i, &t) in times.iter().enumerate() {
            assert_eq!(series.echo[i], loschmidt_echo(&s, t).unwrap());
            assert_eq!(series.rate[i], rate_function(&s, t).unwrap());
        }
    }

    #[test]
    fn log_path_agrees_with_product() {
        let s = spec(0.4, 1.6, 200);
        for t in [0.1, 0.9, 2.5] {
            let via_product = loschmidt_echo(&s, t).unwrap().ln();
            let via_log = log_echo(&s, t).unwrap();
            assert!((via_product - via_log).abs() <= 1e-12 * via_log.abs());
        }
    }

    #[test]
    fn large_rings_use_log_domain() {
        // 𝓛 underflows at L = 6000 long before λ is large.
        let s = spec(0.2, 3.0, 6000);
        let t = 1.3;
        assert_eq!(loschmidt_echo(&s, t).unwrap(), 0.0);
        let r = rate_function(&s, t).unwrap();
        assert!(r.is_finite() && r > 0.0);
        assert_eq!(r, -log_echo(&s, t).unwrap() / 6000.0);
    }

    #[test]
    fn divergences_sit_on_the_ladder() {
        let sol = zero_set(0.3, 22, Sector::EvenApbc)
            .into_iter()
            .find(|s| matches!(s.gamma_f(), Extended::Finite(g) if g > 1.0 && g < 2.0))
            .unwrap();
        let s = spec(0.3, sol.gamma_f().to_f64(), 22);
        let ladder = critical_times(&sol, 2).unwrap().times;
        let times = uniform_times(ladder[2] + 0.1, 4001).unwrap();
        let dt = times[1];
        let found = echo_series(&s, &times).unwrap().divergences();
        assert_eq!(found.len(), 3);
        for (d, t) in found.iter().zip(&ladder) {
            assert!((d.grid_time - t).abs() <= dt);
            assert!((d.refined_time - t).abs() < 1e-6);
        }
    }

    #[test]
    fn unmatched_quench_has_no_divergence() {
        let s = spec(0.3, 1.5, 22);
        let times = uniform_times(10.0, 2001).unwrap();
        assert!(echo_series(&s, &times).unwrap().divergences().is_empty());
    }

    proptest! {
        #[test]
        fn echo_in_unit_interval(gi in -3.0..3.0f64, gf in -3.0..3.0f64, half in 2usize..40, t in 0.0..20.0f64) {
            let s = spec(gi, gf, 2 * half);
            let e = loschmidt_echo(&s, t).unwrap();
            prop_assert!((0.0..=1.0).contains(&e));
            let r = rate_function(&s, t).unwrap();
            prop_assert_eq!(r.is_finite(), e > 0.0);
        }

        #[test]
        fn per_mode_periodicity(gi in -3.0..3.0f64, gf in -3.0..3.0f64, num in 1u64..63, t in 0.0..10.0f64) {
            let k = Momentum::from_ratio(num, 64).unwrap();
            let s = spec(gi, gf, 64);
            let e = crate::spectral::dispersion(&k, &s.postquench().unwrap()).energy;
            let a = echo_mode(&k, &s, t).unwrap();
            let b = echo_mode(&k, &s, t + PI / (2.0 * e)).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
