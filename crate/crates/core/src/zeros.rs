//! Postquench fields at which the echo has exact zeros.
//!
//! Mode `k` contributes a vanishing factor only when its overlap factor is
//! one, which fixes the postquench field
//!
//! ```text
//! γ_f = -(1 + γ_i cos k) / (γ_i + cos k)
//! ```
//!
//! and then the echo vanishes on the ladder `t_n* = π(n + ½) / (2 E_kf)`.
//! A finite ring has one such field per positive momentum.

use std::f64::consts::PI;

use serde::Serialize;

use crate::spectral::{check_size, momentum_grid, Momentum, QuenchSpec, Sector};
use crate::{Error, Extended, Result};

/// The matched postquench field of mode `k`; `Unbounded` when
/// `γ_i + cos k` is exactly zero.
pub fn hf_for_mode(gamma_i: f64, k: &Momentum) -> Extended {
    let denom = gamma_i + k.cos();
    if denom == 0.0 {
        Extended::Unbounded
    } else {
        Extended::from(-(1.0 + gamma_i * k.cos()) / denom)
    }
}

/// Postquench mode energy `E_kf/J = sqrt((cos k + γ_f)² + sin² k)`.
fn matched_energy(k: &Momentum, gamma_f: Extended) -> Extended {
    match gamma_f {
        Extended::Finite(g) => Extended::Finite((k.cos() + g).hypot(k.sin())),
        Extended::Unbounded => Extended::Unbounded,
    }
}

/// A grid mode together with the postquench field that zeroes its factor.
/// Fields and energies are in units of `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroSolution {
    #[serde(skip)]
    momentum: Momentum,
    pub mode: usize,
    pub k: f64,
    pub gamma_i: f64,
    gamma_f: Extended,
    energy: Extended,
    pub size: usize,
    pub sector: Sector,
}

impl ZeroSolution {
    pub fn momentum(&self) -> &Momentum {
        &self.momentum
    }

    pub fn gamma_f(&self) -> Extended {
        self.gamma_f
    }

    /// `E_kf / J`.
    pub fn energy(&self) -> Extended {
        self.energy
    }

    pub fn is_unbounded(&self) -> bool {
        self.gamma_f.is_unbounded()
    }

    /// The quench this solution describes, with coupling `j`.
    pub fn quench(&self, j: f64) -> Result<QuenchSpec> {
        match self.gamma_f {
            Extended::Finite(g) => QuenchSpec::new(j, j * self.gamma_i, j * g, self.size, self.sector),
            Extended::Unbounded => {
                QuenchSpec::with_unbounded_field(j, j * self.gamma_i, self.size, self.sector)
            }
        }
    }
}

fn solution(gamma_i: f64, k: &Momentum, size: usize, sector: Sector) -> ZeroSolution {
    let gamma_f = hf_for_mode(gamma_i, k);
    ZeroSolution {
        momentum: *k,
        mode: k.index(),
        k: k.radians(),
        gamma_i,
        gamma_f,
        energy: matched_energy(k, gamma_f),
        size,
        sector,
    }
}

/// One solution per grid mode, ascending in `k`.
///
/// # Panics
/// If `size` is not an even number of at least 4.
pub fn zero_set(gamma_i: f64, size: usize, sector: Sector) -> Vec<ZeroSolution> {
    let grid = momentum_grid(size, sector).expect("zero_set needs an even size of at least 4");
    grid.iter().map(|k| solution(gamma_i, k, size, sector)).collect()
}

/// The critical-time ladder of one matched mode, in units of `1/J`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalTimes {
    pub solution: ZeroSolution,
    pub times: Vec<f64>,
}

/// `t_n* = (π / 2E_kf)(n + ½)` for `n = 0..=n_max`.
pub fn critical_times(solution: &ZeroSolution, n_max: usize) -> Result<CriticalTimes> {
    let energy = solution.energy.finite().ok_or_else(|| {
        Error::domain(format!(
            "mode {} has an unbounded postquench field: the zero time degenerates to 0",
            solution.mode
        ))
    })?;
    let period = PI / (2.0 * energy);
    let times = (0..=n_max).map(|n| period * (n as f64 + 0.5)).collect();
    Ok(CriticalTimes { solution: *solution, times })
}

/// Mean distance between neighbouring matched-field curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSpacing {
    pub gamma_i: f64,
    pub size: usize,
    pub value: f64,
    /// Neighbour pairs that entered the mean.
    pub pairs: usize,
    /// Modes left out because their matched field is unbounded.
    pub excluded: usize,
}

/// Mean of `|γ_f(k_{j+1}) - γ_f(k_j)|` over consecutive modes of the
/// anti-periodic grid, normalized by the number of pairs actually summed.
/// Pairs touching an unbounded field are skipped.
pub fn mean_spacing(gamma_i: f64, size: usize) -> Result<MeanSpacing> {
    check_size(size)?;
    let fields: Vec<Extended> = zero_set(gamma_i, size, Sector::EvenApbc)
        .iter()
        .map(ZeroSolution::gamma_f)
        .collect();
    let excluded = fields.iter().filter(|g| g.is_unbounded()).count();
    let (sum, pairs) = fields
        .windows(2)
        .filter_map(|w| Some((w[1].finite()? - w[0].finite()?).abs()))
        .fold((0.0, 0usize), |(s, n), gap| (s + gap, n + 1));
    if fields.len() - excluded < 2 || pairs == 0 {
        return Err(Error::domain(format!(
            "γ_i = {gamma_i}, L = {size}: fewer than two neighbouring finite matched fields"
        )));
    }
    Ok(MeanSpacing { gamma_i, size, value: sum / pairs as f64, pairs, excluded })
}

/// Which critical field a gap is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GapSide {
    /// Distance to `γ_f = +1`.
    Plus1,
    /// Distance to `γ_f = -1`.
    Minus1,
}

impl GapSide {
    pub fn target(self) -> f64 {
        match self {
            GapSide::Plus1 => 1.0,
            GapSide::Minus1 => -1.0,
        }
    }
}

/// Shortest distance from a critical field to the matched fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalGap {
    pub gamma_i: f64,
    pub size: usize,
    pub side: GapSide,
    pub gap: f64,
    /// Mode attaining the gap.
    pub mode: usize,
    /// Signed large-size coefficient; its sign tells from which side the
    /// matched fields approach the critical value. `None` at the singular
    /// prequench field.
    pub alpha: Option<f64>,
    /// `|α| / L²`.
    pub asymptote: Option<f64>,
}

/// Large-size coefficient `α` of the gap on `side`.
///
/// `α(γ_i) = π²(1 + γ_i) / (2(1 - γ_i))` towards `+1`, and its mirror image
/// `α(-γ_i)` towards `-1`.
pub fn gap_alpha(gamma_i: f64, side: GapSide) -> Option<f64> {
    let g = match side {
        GapSide::Plus1 => gamma_i,
        GapSide::Minus1 => -gamma_i,
    };
    if g == 1.0 {
        None
    } else {
        Some(PI * PI * (1.0 + g) / (2.0 * (1.0 - g)))
    }
}

/// Minimum of `|γ_f(k) ∓ 1|` over the anti-periodic grid, with the
/// `|α|/L²` asymptote for comparison.
pub fn critical_gap(gamma_i: f64, size: usize, side: GapSide) -> Result<CriticalGap> {
    check_size(size)?;
    let target = side.target();
    let (mode, gap) = zero_set(gamma_i, size, Sector::EvenApbc)
        .iter()
        .filter_map(|s| Some((s.mode, (s.gamma_f.finite()? - target).abs())))
        .fold(None, |best: Option<(usize, f64)>, (m, d)| match best {
            Some((_, b)) if b <= d => best,
            _ => Some((m, d)),
        })
        .ok_or_else(|| Error::domain("no finite matched field"))?;
    let alpha = gap_alpha(gamma_i, side);
    let l2 = (size * size) as f64;
    Ok(CriticalGap { gamma_i, size, side, gap, mode, alpha, asymptote: alpha.map(|a| a.abs() / l2) })
}

/// The open interval around `γ = 1` containing no non-negative matched
/// field at size `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoZeroWindow {
    pub size: usize,
    /// `-cos((L-1)π/L)`
    pub lo: f64,
    /// `-sec((L-1)π/L)`
    pub hi: f64,
    /// `1 - ½(π/L)²`
    pub approx_lo: f64,
    /// `1 + ½(π/L)²`
    pub approx_hi: f64,
}

impl NoZeroWindow {
    pub fn contains(&self, gamma: f64) -> bool {
        self.lo < gamma && gamma < self.hi
    }
}

pub fn no_zero_window(size: usize) -> Result<NoZeroWindow> {
    check_size(size)?;
    let l = size as u64;
    let cos = Momentum::from_ratio(l - 1, l)?.cos();
    let half_sq = 0.5 * (PI / size as f64).powi(2);
    Ok(NoZeroWindow {
        size,
        lo: -cos,
        hi: -1.0 / cos,
        approx_lo: 1.0 - half_sq,
        approx_hi: 1.0 + half_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mom(num: u64, den: u64) -> Momentum {
        Momentum::from_ratio(num, den).unwrap()
    }

    #[test]
    fn zero_prequench_field_gives_minus_secant() {
        for num in [1, 3, 5, 9, 13] {
            let k = mom(num, 14);
            assert_relative_eq!(hf_for_mode(0.0, &k).to_f64(), -1.0 / k.cos(), max_relative = 1e-15);
        }
        assert_eq!(hf_for_mode(0.0, &mom(7, 14)), Extended::Unbounded);
    }

    #[test]
    fn critical_prequench_field_maps_to_minus_one() {
        for num in 1..40 {
            assert_relative_eq!(hf_for_mode(1.0, &mom(num, 40)).to_f64(), -1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn half_pi_inverts_the_field() {
        let k = mom(1, 2);
        for gi in [0.3, -2.0, 5.0] {
            assert_eq!(hf_for_mode(gi, &k).to_f64(), -1.0 / gi);
        }
        assert!(hf_for_mode(0.0, &k).is_unbounded());
    }

    #[test]
    fn zero_set_sizes_and_phase() {
        let even = zero_set(0.5, 14, Sector::EvenApbc);
        assert_eq!(even.len(), 7);
        assert!(even.iter().all(|s| s.gamma_f().to_f64().abs() > 1.0));
        assert!(even.windows(2).all(|w| w[0].k < w[1].k));
        assert_eq!(zero_set(0.5, 14, Sector::OddPbc).len(), 6);
    }

    #[test]
    fn zero_set_flags_unbounded_mode() {
        let set = zero_set(0.0, 6, Sector::EvenApbc);
        let ks: Vec<f64> = set.iter().map(|s| s.k).collect();
        assert_eq!(ks, vec![PI / 6.0, PI / 2.0, 5.0 * PI / 6.0]);
        assert!(set[1].is_unbounded());
        assert!(set[1].energy().is_unbounded());
        assert!(!set[0].is_unbounded() && !set[2].is_unbounded());
    }

    #[test]
    fn ladder_is_arithmetic() {
        let sol = zero_set(0.3, 22, Sector::EvenApbc)[4];
        let e = sol.energy().to_f64();
        let ladder = critical_times(&sol, 0).unwrap();
        assert_eq!(ladder.times, vec![PI / (4.0 * e)]);
        let ladder = critical_times(&sol, 10).unwrap();
        for w in ladder.times.windows(2) {
            assert_relative_eq!(w[1] - w[0], PI / (2.0 * e), max_relative = 1e-13);
        }
    }

    #[test]
    fn unbounded_ladder_is_a_domain_error() {
        let sol = zero_set(0.0, 6, Sector::EvenApbc)[1];
        match critical_times(&sol, 3) {
            Err(Error::Domain(msg)) => assert!(msg.contains("degenerates to 0")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mean_spacing_by_hand_at_small_size() {
        // Independent evaluation of the constraint at the five modes of L = 10.
        let l = 10.0;
        let fields: Vec<f64> = (1..=5)
            .map(|m| {
                let c = (PI * (2 * m - 1) as f64 / l).cos();
                -(1.0 + 1.5 * c) / (1.5 + c)
            })
            .collect();
        let expected = fields.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>() / 4.0;
        let got = mean_spacing(1.5, 10).unwrap();
        assert_eq!(got.pairs, 4);
        assert_eq!(got.excluded, 0);
        assert_relative_eq!(got.value, expected, max_relative = 1e-14);
    }

    #[test]
    fn mean_spacing_skips_unbounded_pairs() {
        let got = mean_spacing(0.0, 10).unwrap();
        assert_eq!(got.excluded, 1);
        assert_eq!(got.pairs, 2);
        assert!(mean_spacing(0.0, 6).is_err());
        assert!(mean_spacing(1.5, 7).is_err());
    }

    #[test]
    fn mean_spacing_approaches_four_over_l() {
        let got = mean_spacing(1.5, 400).unwrap();
        assert!((got.value * 400.0 - 4.0).abs() < 0.05, "Δ̄·L = {}", got.value * 400.0);
    }

    #[test]
    fn gap_from_opposite_critical_point_is_zero() {
        let gap = critical_gap(-1.0, 100, GapSide::Plus1).unwrap();
        assert_eq!(gap.gap, 0.0);
        let gap = critical_gap(1.0, 100, GapSide::Minus1).unwrap();
        assert_eq!(gap.gap, 0.0);
    }

    #[test]
    fn gap_by_brute_force_scan() {
        let set = zero_set(0.6, 100, Sector::EvenApbc);
        assert_eq!(set.len(), 50);
        let mut best = f64::INFINITY;
        for s in &set {
            best = best.min((s.gamma_f().to_f64() - 1.0).abs());
        }
        let gap = critical_gap(0.6, 100, GapSide::Plus1).unwrap();
        assert_eq!(gap.gap, best);
        assert_eq!(gap.mode, 50);
    }

    #[test]
    fn gap_singular_alpha() {
        let gap = critical_gap(1.0, 40, GapSide::Plus1).unwrap();
        assert!(gap.alpha.is_none() && gap.asymptote.is_none());
        assert_relative_eq!(gap.gap, 2.0, max_relative = 1e-13);
        assert!(gap_alpha(-1.0, GapSide::Minus1).is_none());
        assert!(gap_alpha(2.0, GapSide::Plus1).unwrap() < 0.0);
    }

    #[test]
    fn minus_side_mirrors_plus_side() {
        // γ → -γ maps k → π - k on the symmetric grid and flips every
        // matched field, so the two gaps coincide.
        for gi in [-1.5, -0.2, 0.6, 2.0] {
            for l in [50, 400, 2000] {
                let plus = critical_gap(gi, l, GapSide::Plus1).unwrap();
                let minus = critical_gap(-gi, l, GapSide::Minus1).unwrap();
                assert_relative_eq!(plus.gap, minus.gap, max_relative = 1e-9);
                assert_eq!(plus.alpha, minus.alpha);
            }
            let minus = critical_gap(gi, 4000, GapSide::Minus1).unwrap();
            let rel = (minus.gap - minus.asymptote.unwrap()).abs() / minus.asymptote.unwrap();
            assert!(rel < 0.02, "γ_i = {gi}: {rel}");
        }
    }

    #[test]
    fn window_endpoints() {
        let w = no_zero_window(14).unwrap();
        assert!((w.lo * w.hi - 1.0).abs() < 1e-14);
        assert!(w.lo < 1.0 && 1.0 < w.hi);
        assert_relative_eq!(w.lo, -(13.0 * PI / 14.0).cos(), max_relative = 1e-15);
        let wide = no_zero_window(10_000).unwrap();
        assert!(wide.hi - wide.lo < 1e-6);
        assert!((wide.lo - wide.approx_lo).abs() < 1e-12);
        assert!((wide.hi - wide.approx_hi).abs() < 1e-12);
        assert!(no_zero_window(3).is_err());
    }

    #[test]
    fn small_window_scan() {
        let w = no_zero_window(14).unwrap();
        for i in 0..=3000 {
            let gi = i as f64 * 1e-3;
            for s in zero_set(gi, 14, Sector::EvenApbc) {
                if let Extended::Finite(gf) = s.gamma_f() {
                    assert!(gf < 0.0 || !w.contains(gf), "γ_i = {gi}, γ_f = {gf}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn matched_fields_cross_the_transition(gi in -3.0..3.0f64, num in 1u64..999) {
            prop_assume!((gi.abs() - 1.0).abs() > 1e-6);
            let k = mom(num, 1000);
            if let Extended::Finite(gf) = hf_for_mode(gi, &k) {
                if gi.abs() < 1.0 {
                    prop_assert!(gf.abs() > 1.0);
                } else {
                    prop_assert!(gf.abs() < 1.0);
                }
            }
        }

        #[test]
        fn constraint_is_an_involution(gi in -5.0..5.0f64, num in 1u64..999) {
            let k = mom(num, 1000);
            prop_assume!((gi + k.cos()).abs() > 1e-3);
            let gf = hf_for_mode(gi, &k).to_f64();
            prop_assume!((gf + k.cos()).abs() > 1e-3);
            let back = hf_for_mode(gf, &k).to_f64();
            prop_assert!((back - gi).abs() <= 1e-12 * (1.0 + gi.abs()) * (1.0 + gf.abs()));
        }
    }
}
